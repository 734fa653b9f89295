"""Exact coefficient arithmetic.

Four layers, all exact and immutable:

* ``Laurent`` -- Laurent polynomials in q with rational coefficients;
* ``QFraction`` -- the fraction field of ``Laurent`` (used while
  computing braid images, where q-factorial denominators appear);
* ``Localized`` -- a Laurent numerator together with a monomial
  denominator in the distinguished multiplicative set of the root type
  (trivial set for simply-laced, {q^2-q^-2} for two root lengths,
  plus {q^3-q^-3} for the triple bond);
* residue fields at a primitive root of unity: the cyclotomic field
  Q[q]/Phi_ell(q) and finite fields F_{p^n} with n the multiplicative
  order of p mod ell, so a primitive ell-th root exists in both.

Quantum integers, factorials and binomials live here as well.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

QQ = Fraction


class Laurent:
    """Laurent polynomial sum(c[i] * q**(lo+i)) with Fraction coefficients.

    Canonical form: empty coefficient tuple for zero, otherwise the first
    and last entries are nonzero.
    """

    __slots__ = ("lo", "c")

    def __init__(self, lo: int = 0, coeffs: Sequence[Fraction] = ()):
        i, j = 0, len(coeffs)
        while i < j and not coeffs[i]:
            i += 1
        while j > i and not coeffs[j - 1]:
            j -= 1
        self.lo = lo + i if i < j else 0
        self.c = tuple(QQ(x) for x in coeffs[i:j])

    @staticmethod
    def const(x) -> "Laurent":
        return Laurent(0, (QQ(x),))

    @staticmethod
    def q_power(n: int, coeff=1) -> "Laurent":
        return Laurent(n, (QQ(coeff),))

    @property
    def hi(self) -> int:
        return self.lo + len(self.c) - 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Laurent.const(other)
        return isinstance(other, Laurent) and self.lo == other.lo and self.c == other.c

    def __hash__(self):
        return hash((self.lo, self.c))

    def __neg__(self) -> "Laurent":
        return Laurent(self.lo, tuple(-x for x in self.c))

    def __add__(self, other) -> "Laurent":
        if isinstance(other, int):
            other = Laurent.const(other)
        if not isinstance(other, Laurent):
            return NotImplemented
        if not self.c:
            return other
        if not other.c:
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        buf = [QQ(0)] * (hi - lo + 1)
        for i, x in enumerate(self.c):
            buf[self.lo - lo + i] += x
        for i, x in enumerate(other.c):
            buf[other.lo - lo + i] += x
        return Laurent(lo, buf)

    __radd__ = __add__

    def __sub__(self, other) -> "Laurent":
        return self + (-other if isinstance(other, Laurent) else Laurent.const(-other))

    def __rsub__(self, other) -> "Laurent":
        return (-self) + other

    def __mul__(self, other) -> "Laurent":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Laurent()
            return Laurent(self.lo, tuple(x * other for x in self.c))
        if not isinstance(other, Laurent):
            return NotImplemented
        if not self.c or not other.c:
            return Laurent()
        if len(other.c) == 1:
            x = other.c[0]
            if x == 1:
                return self.shift(other.lo)
            return Laurent(self.lo + other.lo, tuple(y * x for y in self.c))
        if len(self.c) == 1:
            x = self.c[0]
            if x == 1:
                return other.shift(self.lo)
            return Laurent(self.lo + other.lo, tuple(y * x for y in other.c))
        buf = [QQ(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y:
                        buf[i + j] += x * y
        return Laurent(self.lo + other.lo, buf)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Laurent":
        out = Laurent.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, n: int) -> "Laurent":
        return Laurent(self.lo + n, self.c)

    def bar(self) -> "Laurent":
        """The substitution q -> q^{-1}."""
        return Laurent(-self.hi, tuple(reversed(self.c)))

    def divmod_by(self, other: "Laurent") -> Tuple["Laurent", "Laurent"]:
        """Division with remainder, ignoring overall q-powers."""
        if not other:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        rem = list(self.c)
        rlo = self.lo
        d = list(other.c)
        qt: Dict[int, Fraction] = {}
        lead = d[-1]
        while len(rem) >= len(d):
            while rem and not rem[-1]:
                rem.pop()
            if len(rem) < len(d):
                break
            f = rem[-1] / lead
            k = len(rem) - len(d)
            qt[rlo + k - other.lo] = f
            for i, y in enumerate(d):
                rem[k + i] -= f * y
            rem.pop()
        if qt:
            qlo = min(qt)
            qbuf = [qt.get(i, QQ(0)) for i in range(qlo, max(qt) + 1)]
            quo = Laurent(qlo, qbuf)
        else:
            quo = Laurent()
        return quo, Laurent(rlo, rem)

    def exact_div(self, other: "Laurent") -> "Laurent":
        quo, rem = self.divmod_by(other)
        if rem:
            raise ArithmeticError("non-exact Laurent division")
        return quo

    def is_unit(self) -> bool:
        """True for c*q^n with c != 0."""
        return len(self.c) == 1

    def __str__(self) -> str:
        if not self.c:
            return "0"
        parts = []
        for i, x in enumerate(self.c):
            if not x:
                continue
            n = self.lo + i
            if n == 0:
                parts.append(f"{x}")
            elif n == 1:
                parts.append(f"{x}*q")
            else:
                parts.append(f"{x}*q^{n}")
        return " + ".join(parts)

    __repr__ = __str__


L_ZERO = Laurent()
L_ONE = Laurent.const(1)
_ONE_C = (QQ(1),)


def laurent_gcd(a: Laurent, b: Laurent) -> Laurent:
    """Monic gcd as polynomials (q-power factors are units here)."""
    a0, b0 = a, b
    while b0:
        _, r = a0.divmod_by(b0)
        a0, b0 = b0, r
    if not a0:
        return Laurent()
    lead = a0.c[-1]
    return Laurent(0, tuple(x / lead for x in a0.c))


class QFraction:
    """Element of Q(q) as a reduced fraction of Laurent polynomials.

    Canonical form: denominator is a genuine polynomial with nonzero
    constant term and leading coefficient one; gcd(num, den) = 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Laurent, den: Laurent = L_ONE):
        if den.c == _ONE_C:
            if den.lo == 0:
                self.num, self.den = num, L_ONE
            else:
                self.num, self.den = num.shift(-den.lo), L_ONE
            return
        if not den:
            raise ZeroDivisionError("zero denominator in Q(q)")
        if not num:
            self.num, self.den = L_ZERO, L_ONE
            return
        if not den.is_unit():
            g = laurent_gcd(num, den)
            if not g.is_unit():
                num = num.exact_div(g)
                den = den.exact_div(g)
        # normalize: den = monic polynomial, constant term nonzero
        shift = -den.lo
        lead = den.c[-1]
        if lead == 1:
            den = Laurent(0, den.c)
            num = num.shift(shift)
        else:
            den = Laurent(0, tuple(x / lead for x in den.c))
            num = Laurent(num.lo + shift, tuple(x / lead for x in num.c))
        self.num, self.den = num, den

    @staticmethod
    def of(x) -> "QFraction":
        if isinstance(x, QFraction):
            return x
        if isinstance(x, Laurent):
            return QFraction(x)
        return QFraction(Laurent.const(x))

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Laurent)):
            other = QFraction.of(other)
        return (
            isinstance(other, QFraction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        out = object.__new__(QFraction)
        out.num, out.den = -self.num, self.den
        return out

    def __add__(self, other):
        other = QFraction.of(other)
        if self.den is L_ONE and other.den is L_ONE:
            out = object.__new__(QFraction)
            out.num, out.den = self.num + other.num, L_ONE
            return out
        return QFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-QFraction.of(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = QFraction.of(other)
        if self.den is L_ONE and other.den is L_ONE:
            out = object.__new__(QFraction)
            out.num, out.den = self.num * other.num, L_ONE
            return out
        return QFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QFraction.of(other)
        if not other.num:
            raise ZeroDivisionError("division by zero in Q(q)")
        return QFraction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return QFraction.of(other) / self

    def __pow__(self, n: int) -> "QFraction":
        if n < 0:
            return self.inv() ** (-n)
        out, base = QFraction.of(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inv(self) -> "QFraction":
        return QFraction(self.den, self.num)

    def is_laurent(self) -> bool:
        return self.den == L_ONE

    def as_laurent(self) -> Laurent:
        if not self.is_laurent():
            raise ArithmeticError(f"not a Laurent polynomial: {self}")
        return self.num

    def __str__(self):
        if self.den == L_ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    __repr__ = __str__


QF_ONE = QFraction.of(1)
QF_ZERO = QFraction.of(0)


# --- quantum combinatorics -------------------------------------------------

def q_int(n: int, d: int = 1) -> Laurent:
    """[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d}) as a Laurent polynomial."""
    if n < 0:
        return -q_int(-n, d)
    if n == 0:
        return Laurent()
    return Laurent(-d * (n - 1), tuple(1 if i % (2 * d) == 0 else 0 for i in range(2 * d * (n - 1) + 1)))


def q_factorial(n: int, d: int = 1) -> Laurent:
    out = L_ONE
    for i in range(2, n + 1):
        out = out * q_int(i, d)
    return out


def q_binom(a: int, b: int, d: int = 1) -> Laurent:
    """Gaussian binomial [a choose b]_{q^d}; division is exact by construction."""
    if b < 0 or b > a:
        return Laurent()
    b = min(b, a - b)
    num = L_ONE
    for i in range(1, b + 1):
        num = num * q_int(a - b + i, d)
    return num.exact_div(q_factorial(b, d))


# --- localization at the two-root-length denominators ----------------------

S_GENERATORS = {
    "ADE": (),
    "BCF": (2,),
    "G": (2, 3),
}


def s_generator(k: int) -> Laurent:
    """The Laurent polynomial q^k - q^{-k}."""
    return Laurent(-k, (QQ(-1),) + (QQ(0),) * (2 * k - 1) + (QQ(1),))


class Localized:
    """num / prod (q^{k_i} - q^{-k_i})^{e_i} with minimal exponent vector."""

    __slots__ = ("num", "s_keys", "exps")

    def __init__(self, num: Laurent, s_keys: Tuple[int, ...], exps: Tuple[int, ...]):
        self.num = num
        self.s_keys = s_keys
        self.exps = exps

    @staticmethod
    def from_fraction(x: QFraction, s_keys: Tuple[int, ...]) -> "Localized":
        """Rewrite num/den with an S-monomial denominator, minimal exponents.

        The reduced denominator may be a proper factor of an S-generator
        (e.g. q+q^-1 inside q^2-q^-2), so the numerator is scaled by the
        cofactor.  Raises ArithmeticError when the coefficient does not
        lie in the localization (a corrupt structure constant).
        """
        num, rem = x.num, x.den
        exps = [0] * len(s_keys)
        while not rem.is_unit():
            for i, k in enumerate(s_keys):
                gen = s_generator(k)
                g = laurent_gcd(rem, gen)
                if not g.is_unit():
                    exps[i] += 1
                    num = num * gen.exact_div(g)
                    rem = rem.exact_div(g)
                    break
            else:
                raise ArithmeticError(
                    f"denominator {x.den} not supported on S = {s_keys}"
                )
        num = num.exact_div(rem)
        # minimize: strip generators that ended up dividing the numerator
        for i, k in enumerate(s_keys):
            gen = s_generator(k)
            while exps[i] > 0:
                quo, r = num.divmod_by(gen)
                if r or not quo:
                    break
                num = quo
                exps[i] -= 1
        return Localized(num, s_keys, tuple(exps))

    def to_fraction(self) -> QFraction:
        den = L_ONE
        for k, e in zip(self.s_keys, self.exps):
            den = den * s_generator(k) ** e
        return QFraction(self.num, den)

    def denominator_nontrivial(self) -> bool:
        return any(self.exps)

    def __eq__(self, other):
        return (
            isinstance(other, Localized)
            and self.to_fraction() == other.to_fraction()
        )

    def __str__(self):
        if not any(self.exps):
            return str(self.num)
        dens = "*".join(
            f"(q^{k}-q^-{k})^{e}" for k, e in zip(self.s_keys, self.exps) if e
        )
        return f"({self.num}) / {dens}"

    __repr__ = __str__


# --- canonical text serialization ------------------------------------------

def laurent_to_text(x: Laurent) -> str:
    if not x.c:
        return "0:"
    return f"{x.lo}:" + ",".join(
        str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        for c in x.c
    )


def laurent_from_text(s: str) -> Laurent:
    lo_s, _, cs = s.partition(":")
    if not cs:
        return Laurent()
    return Laurent(int(lo_s), tuple(QQ(t) for t in cs.split(",")))


def localized_to_text(x: Localized) -> str:
    tail = ",".join(str(e) for e in x.exps)
    return laurent_to_text(x.num) + ("|" + tail if x.exps else "|")


def localized_from_text(s: str, s_keys: Tuple[int, ...]) -> Localized:
    num_s, _, exp_s = s.rpartition("|")
    exps = tuple(int(t) for t in exp_s.split(",")) if exp_s else ()
    if len(exps) != len(s_keys):
        raise ValueError(f"bad localized scalar {s!r} for S = {s_keys}")
    return Localized(laurent_from_text(num_s), s_keys, exps)


# --- cyclotomic polynomials and residue fields ------------------------------

def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def cyclotomic_poly(n: int) -> Tuple[int, ...]:
    """Integer coefficient tuple of Phi_n, low degree first."""
    # x^n - 1 divided by all proper cyclotomic factors
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n):
        if d == n:
            continue
        phi_d = cyclotomic_poly(d)
        # exact polynomial division poly //= phi_d
        out = [0] * (len(poly) - len(phi_d) + 1)
        rem = list(poly)
        for k in range(len(out) - 1, -1, -1):
            f = rem[k + len(phi_d) - 1] // phi_d[-1]
            out[k] = f
            for i, y in enumerate(phi_d):
                rem[k + i] -= f * y
        assert not any(rem), "cyclotomic division must be exact"
        poly = out
    return tuple(poly)


class CycloElement:
    __slots__ = ("ctx", "co")

    def __init__(self, ctx: "CycloField", co: Tuple[Fraction, ...]):
        self.ctx = ctx
        self.co = co

    def __bool__(self):
        return any(self.co)

    def __eq__(self, other):
        return isinstance(other, CycloElement) and self.co == other.co and self.ctx is other.ctx

    def __hash__(self):
        return hash(self.co)

    def __neg__(self):
        return CycloElement(self.ctx, tuple(-x for x in self.co))

    def __add__(self, other):
        other = self.ctx.coerce(other)
        return CycloElement(self.ctx, tuple(x + y for x, y in zip(self.co, other.co)))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self.ctx.coerce(other))

    def __rsub__(self, other):
        return (-self) + self.ctx.coerce(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloElement(self.ctx, tuple(x * other for x in self.co))
        other = self.ctx.coerce(other)
        return self.ctx._mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.ctx.coerce(other)
        return self * self.ctx._inv(other)

    def __rtruediv__(self, other):
        return self.ctx.coerce(other) / self

    def __pow__(self, n: int):
        out, base = self.ctx.one, self
        if n < 0:
            base = self.ctx.one / base
            n = -n
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self):
        names = {0: "", 1: "z"}
        parts = []
        for i, x in enumerate(self.co):
            if not x:
                continue
            mon = names.get(i, f"z^{i}")
            parts.append(f"{x}{'*' + mon if mon else ''}" if mon else f"{x}")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


class CycloField:
    """Q[q] / Phi_ell(q) with zeta the class of q."""

    def __init__(self, ell: int):
        self.ell = ell
        self.char = 0
        phi = cyclotomic_poly(ell)
        self.deg = len(phi) - 1
        self.phi = tuple(QQ(x) for x in phi)
        self.zero = CycloElement(self, (QQ(0),) * self.deg)
        self.one = self.from_int(1)
        # reduction table: q^k mod Phi for k = deg .. 2 deg - 2
        red = []
        cur = [-x / self.phi[-1] for x in self.phi[:-1]]  # q^deg
        red.append(tuple(cur))
        for _ in range(self.deg - 2):
            cur = [QQ(0)] + cur
            lead = cur.pop()
            if lead:
                cur = [x + lead * y for x, y in zip(cur, red[0])]
            red.append(tuple(cur))
        self._red = red
        self.zeta = self._q_power(1)
        self._zeta_pows = [self._q_power(k) for k in range(ell)]
        self.desc = f"cyclo({ell})"

    def _q_power(self, k: int) -> CycloElement:
        co = [QQ(0)] * self.deg
        k %= self.ell
        if k < self.deg:
            co[k] = QQ(1)
            return CycloElement(self, tuple(co))
        x = self.one
        base = CycloElement(self, tuple([QQ(0), QQ(1)] + [QQ(0)] * (self.deg - 2)))
        for _ in range(k):
            x = self._mul(x, base)
        return x

    def coerce(self, x) -> CycloElement:
        if isinstance(x, CycloElement):
            return x
        if isinstance(x, (int, Fraction)):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {x!r} into {self.desc}")

    def from_int(self, n) -> CycloElement:
        return CycloElement(self, (QQ(n),) + (QQ(0),) * (self.deg - 1))

    def _mul(self, a: CycloElement, b: CycloElement) -> CycloElement:
        n = self.deg
        buf = [QQ(0)] * (2 * n - 1)
        for i, x in enumerate(a.co):
            if x:
                for j, y in enumerate(b.co):
                    if y:
                        buf[i + j] += x * y
        out = buf[:n]
        for k in range(n, 2 * n - 1):
            c = buf[k]
            if c:
                row = self._red[k - n]
                for i, y in enumerate(row):
                    out[i] += c * y
        return CycloElement(self, tuple(out))

    def _inv(self, a: CycloElement) -> CycloElement:
        if not a:
            raise ZeroDivisionError(f"division by zero in {self.desc}")
        # extended Euclid in Q[x] against Phi
        r0 = list(self.phi)
        r1 = list(a.co)
        s0 = [QQ(0)]
        s1 = [QQ(1)]

        def deg(p):
            d = len(p) - 1
            while d >= 0 and not p[d]:
                d -= 1
            return d

        while True:
            d1 = deg(r1)
            if d1 <= 0:
                break
            d0 = deg(r0)
            if d0 < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            f = r0[d0] / r1[d1]
            k = d0 - d1
            for i in range(d1 + 1):
                r0[i + k] -= f * r1[i]
            s1p = [QQ(0)] * max(len(s0), len(s1) + k)
            for i, y in enumerate(s0):
                s1p[i] += y
            for i, y in enumerate(s1):
                s1p[i + k] -= f * y
            r0, r1, s0, s1 = r1, r0[: d0 + 1], s1, s1p[: max(deg(s1p) + 1, 1)]
        c = r1[deg(r1)] if deg(r1) >= 0 else None
        if c is None:
            raise ZeroDivisionError("element not invertible (not coprime to modulus)")
        co = [x / c for x in s1] + [QQ(0)] * self.deg
        # reduce mod Phi just in case (deg(s1) < deg Phi is guaranteed by Euclid)
        return CycloElement(self, tuple(co[: self.deg]))

    def zeta_power(self, k: int) -> CycloElement:
        return self._zeta_pows[k % self.ell]

    def eval_laurent(self, x: Laurent) -> CycloElement:
        out = self.zero
        for i, c in enumerate(x.c):
            if c:
                out = out + self.zeta_power(x.lo + i) * c
        return out

    def eval_fraction(self, x: QFraction) -> CycloElement:
        den = self.eval_laurent(x.den)
        if not den:
            raise ZeroDivisionError(f"denominator {x.den} vanishes at zeta_{self.ell}")
        return self.eval_laurent(x.num) / den

    def eval_localized(self, x: Localized) -> CycloElement:
        out = self.eval_laurent(x.num)
        for k, e in zip(x.s_keys, x.exps):
            if e:
                g = self.eval_laurent(s_generator(k))
                if not g:
                    raise ZeroDivisionError(f"S-generator q^{k}-q^-{k} vanishes at zeta_{self.ell}")
                for _ in range(e):
                    out = out / g
        return out

    def element_to_text(self, a: CycloElement) -> str:
        return ",".join(str(x) for x in a.co)


class GFElement:
    __slots__ = ("ctx", "co")

    def __init__(self, ctx: "GaloisField", co: Tuple[int, ...]):
        self.ctx = ctx
        self.co = co

    def __bool__(self):
        return any(self.co)

    def __eq__(self, other):
        return isinstance(other, GFElement) and self.co == other.co and self.ctx is other.ctx

    def __hash__(self):
        return hash(self.co)

    def __neg__(self):
        p = self.ctx.p
        return GFElement(self.ctx, tuple((-x) % p for x in self.co))

    def __add__(self, other):
        other = self.ctx.coerce(other)
        p = self.ctx.p
        return GFElement(self.ctx, tuple((x + y) % p for x, y in zip(self.co, other.co)))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self.ctx.coerce(other))

    def __rsub__(self, other):
        return (-self) + self.ctx.coerce(other)

    def __mul__(self, other):
        other = self.ctx.coerce(other)
        return self.ctx._mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self.ctx.coerce(other)
        return self * self.ctx._inv(other)

    def __rtruediv__(self, other):
        return self.ctx.coerce(other) / self

    def __pow__(self, n: int):
        out, base = self.ctx.one, self
        if n < 0:
            base = self.ctx.one / base
            n = -n
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self):
        if self.ctx.n == 1:
            return str(self.co[0])
        return "[" + ",".join(str(x) for x in self.co) + "]"

    __repr__ = __str__


def multiplicative_order(a: int, m: int) -> int:
    a %= m
    if a == 0:
        raise ValueError("not a unit")
    k, x = 1, a
    while x != 1:
        x = x * a % m
        k += 1
    return k


def _prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class GaloisField:
    """F_{p^n} = F_p[x]/(g) containing a distinguished primitive ell-th root.

    n is forced to be the multiplicative order of p mod ell; the modulus
    g is the first monic irreducible polynomial of degree n in the
    deterministic scan order, and zeta is the first element of exact
    multiplicative order ell in the scan eta = x, x+1, x+2, ...
    """

    def __init__(self, p: int, ell: int):
        if ell % p == 0:
            raise ValueError("p must not divide ell")
        self.p = p
        self.ell = ell
        self.char = p
        self.n = multiplicative_order(p, ell) if ell > 1 else 1
        n = self.n
        self.modulus = self._find_irreducible(n)
        self.zero = GFElement(self, (0,) * n)
        self.one = self.from_int(1)
        self._red = self._reduction_rows()
        self.zeta = self._find_zeta()
        self._zeta_pows = [self.one]
        for _ in range(ell - 1):
            self._zeta_pows.append(self._zeta_pows[-1] * self.zeta)
        self.desc = f"gf({p}^{n})"

    # -- polynomial helpers over F_p (low degree first, fixed length lists)

    def _polmulmod(self, a: List[int], b: List[int], g: List[int]) -> List[int]:
        p = self.p
        buf = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        buf[i + j] = (buf[i + j] + x * y) % p
        # reduce mod g (monic)
        dg = len(g) - 1
        for k in range(len(buf) - 1, dg - 1, -1):
            c = buf[k]
            if c:
                for i in range(dg + 1):
                    buf[k - dg + i] = (buf[k - dg + i] - c * g[i]) % p
        return buf[:dg]

    def _polpowmod(self, a: List[int], e: int, g: List[int]) -> List[int]:
        out = [1] + [0] * (len(g) - 2)
        base = list(a) + [0] * (len(g) - 1 - len(a))
        while e:
            if e & 1:
                out = self._polmulmod(out, base, g)
            base = self._polmulmod(base, base, g)
            e >>= 1
        return out

    def _polgcd(self, a: List[int], b: List[int]) -> List[int]:
        p = self.p

        def norm(u):
            while u and not u[-1]:
                u.pop()
            return u

        a, b = norm(list(a)), norm(list(b))
        while b:
            inv = pow(b[-1], p - 2, p)
            r = list(a)
            while len(r) >= len(b):
                if not r[-1]:
                    r.pop()
                    continue
                f = r[-1] * inv % p
                k = len(r) - len(b)
                for i, y in enumerate(b):
                    r[k + i] = (r[k + i] - f * y) % p
                r.pop()
            a, b = b, norm(r)
        return a

    def _is_irreducible(self, g: List[int]) -> bool:
        n = len(g) - 1
        x = [0, 1]
        xp = self._polpowmod(x, self.p ** n, g)
        # x^{p^n} == x mod g
        if (xp + [0] * 2)[:2] != [0, 1] or any(xp[2:]):
            return False
        for r in _prime_factors(n):
            xq = self._polpowmod(x, self.p ** (n // r), g)
            diff = [(a - b) % self.p for a, b in zip(xq + [0, 0], [0, 1] + [0] * len(xq))][: max(len(xq), 2)]
            if len(self._polgcd(diff, g)) > 1:
                return False
        return True

    def _find_irreducible(self, n: int) -> Tuple[int, ...]:
        if n == 1:
            return (0, 1)
        # scan monic degree-n polynomials in lexicographic coefficient order
        total = self.p ** n
        for code in range(total):
            co = []
            c = code
            for _ in range(n):
                co.append(c % self.p)
                c //= self.p
            g = co + [1]
            if self._is_irreducible(g):
                return tuple(g)
        raise RuntimeError("no irreducible polynomial found (unreachable)")

    def _reduction_rows(self):
        n = self.n
        if n == 1:
            return []
        rows = []
        cur = [(-x) % self.p for x in self.modulus[:-1]]
        rows.append(tuple(cur))
        for _ in range(n - 2):
            cur = [0] + cur
            lead = cur.pop()
            if lead:
                cur = [(x + lead * y) % self.p for x, y in zip(cur, rows[0])]
            rows.append(tuple(cur))
        return rows

    def _find_zeta(self) -> GFElement:
        order = self.p ** self.n - 1
        assert order % self.ell == 0
        cof = order // self.ell
        primes = _prime_factors(self.ell)
        for base in range(1, self.p ** min(self.n, 3) + self.p):
            co = []
            c = base
            for _ in range(self.n):
                co.append(c % self.p)
                c //= self.p
            eta = GFElement(self, tuple(co))
            if not eta:
                continue
            z = self._pow(eta, cof)
            if z == self.one:
                continue
            if all(self._pow(z, self.ell // r) != self.one for r in primes):
                return z
        raise RuntimeError("no primitive ell-th root found (unreachable)")

    def _pow(self, a: GFElement, e: int) -> GFElement:
        out = self.one
        base = a
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def coerce(self, x) -> GFElement:
        if isinstance(x, GFElement):
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_int(x.numerator) / self.from_int(x.denominator)
        raise TypeError(f"cannot coerce {x!r} into {self.desc}")

    def from_int(self, k: int) -> GFElement:
        return GFElement(self, (k % self.p,) + (0,) * (self.n - 1))

    def _mul(self, a: GFElement, b: GFElement) -> GFElement:
        n = self.n
        p = self.p
        if n == 1:
            return GFElement(self, (a.co[0] * b.co[0] % p,))
        buf = [0] * (2 * n - 1)
        for i, x in enumerate(a.co):
            if x:
                for j, y in enumerate(b.co):
                    if y:
                        buf[i + j] = (buf[i + j] + x * y) % p
        out = buf[:n]
        for k in range(n, 2 * n - 1):
            c = buf[k]
            if c:
                row = self._red[k - n]
                for i, y in enumerate(row):
                    out[i] = (out[i] + c * y) % p
        return GFElement(self, tuple(out))

    def _inv(self, a: GFElement) -> GFElement:
        if not a:
            raise ZeroDivisionError(f"division by zero in {self.desc}")
        return self._pow(a, self.p ** self.n - 2)

    def zeta_power(self, k: int) -> GFElement:
        return self._zeta_pows[k % self.ell]

    def eval_laurent(self, x: Laurent) -> GFElement:
        out = self.zero
        for i, c in enumerate(x.c):
            if c:
                out = out + self.zeta_power(x.lo + i) * self.coerce(c)
        return out

    def eval_fraction(self, x: QFraction) -> GFElement:
        den = self.eval_laurent(x.den)
        if not den:
            raise ZeroDivisionError(f"denominator {x.den} vanishes at zeta in {self.desc}")
        return self.eval_laurent(x.num) / den

    def eval_localized(self, x: Localized) -> GFElement:
        out = self.eval_laurent(x.num)
        for k, e in zip(x.s_keys, x.exps):
            if e:
                g = self.eval_laurent(s_generator(k))
                if not g:
                    raise ZeroDivisionError(f"S-generator q^{k}-q^-{k} vanishes in {self.desc}")
                for _ in range(e):
                    out = out / g
        return out

    def element_to_text(self, a: GFElement) -> str:
        return ",".join(str(x) for x in a.co)


def make_field(ell: int, p: Optional[int] = None):
    """Field context holding a primitive ell-th root: cyclotomic or finite."""
    if p is None:
        return CycloField(ell)
    return GaloisField(p, ell)
