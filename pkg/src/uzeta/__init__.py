"""Small quantum groups at roots of unity: construction and injectivity tests."""

__version__ = "0.1.0"
