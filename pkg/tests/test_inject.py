import pytest

from uzeta.inject import (
    BudgetExceeded,
    free_over_local,
    free_over_root,
    highest_root_test,
    module_generators,
    projective_split_test,
    record_to_line,
    support_skeleton,
    verify_borel_criterion,
    verify_reduction_borel,
    verify_root_criterion,
)
from uzeta.qmodules import (
    dual_module,
    quot_module,
    randsub_module,
    simple_module,
    sum_module,
    tensor_module,
    trivial_module,
    verma_module,
)


class TestLocalFreeness:
    def test_trivial_over_truncated_line(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        rep = free_over_local(trivial_module(ctx), "root:1:-")
        assert not rep.verdict and rep.top_dim == 1

    def test_regular_is_free_rank_one(self, ctxmaker):
        # the induced module restricted to the full unipotent layer
        ctx = ctxmaker("A1", 3)
        rep = free_over_local(verma_module(ctx, (1,)), "Am:1")
        assert rep.verdict and rep.rank == 1

    def test_verma_free_over_every_layer(self, ctxmaker):
        ctx = ctxmaker("A2", 3)
        vm = verma_module(ctx, (1, 2))
        for m in [1, 2, 3]:
            rep = free_over_local(vm, f"Am:{m}")
            assert rep.verdict and rep.rank == 3 ** (3 - m)

    def test_cross_validation_with_split_test(self, ctxmaker):
        # the Nakayama verdict must match the cover-splitting verdict
        ctx = ctxmaker("A1", 3)
        corpus = [
            trivial_module(ctx),
            verma_module(ctx, (0,)),
            simple_module(ctx, (1,)),
            simple_module(ctx, (2,)),
            randsub_module(verma_module(ctx, (1,)), 3),
        ]
        for m in corpus:
            for kind in ["u-", "Am:1", "root:1:-"]:
                assert free_over_local(m, kind).verdict == projective_split_test(m, kind)


class TestRootFreeness:
    def test_rank_shortcut_agrees(self, ctxmaker):
        # asserted inside free_over_root on every call
        ctx = ctxmaker("A2", 3)
        for m in [trivial_module(ctx), verma_module(ctx, (0, 0)), simple_module(ctx, (1, 1))]:
            for pos in [1, 2, 3]:
                free_over_root(m, pos, "-")
                free_over_root(m, pos, "+")

    def test_steinberg_free_everywhere(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        st = simple_module(ctx, (2,))
        assert free_over_root(st, 1, "-").verdict
        assert free_over_root(st, 1, "+").verdict

    def test_verma_free_minus_not_plus(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        vm = verma_module(ctx, (0,))
        assert free_over_root(vm, 1, "-").verdict
        assert not free_over_root(vm, 1, "+").verdict


class TestSplitTest:
    def test_regular_module_is_projective(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        vm = verma_module(ctx, (0,))  # regular over u-
        assert projective_split_test(vm, "u-")
        assert projective_split_test(vm, "b-")

    def test_trivial_not_projective(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        assert not projective_split_test(trivial_module(ctx), "u-")
        assert not projective_split_test(trivial_module(ctx), "g")

    def test_steinberg_projective_over_g(self, ctxmaker):
        for label, lam in [("A1", (2,)), ("A2", (2, 2))]:
            ctx = ctxmaker(label, 3)
            assert projective_split_test(simple_module(ctx, lam), "g")

    def test_budget(self, ctxmaker):
        ctx = ctxmaker("A2", 3)
        with pytest.raises(BudgetExceeded):
            projective_split_test(verma_module(ctx, (0, 0)), "g", budget=10)

    def test_generators_greedy(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        vm = verma_module(ctx, (0,))
        assert module_generators(vm, "u-") == [0]
        assert len(module_generators(sum_module(vm, vm), "u-")) == 2


class TestHarness:
    def test_root_criterion_corpus(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        corpus = [
            trivial_module(ctx),
            verma_module(ctx, (0,)),
            verma_module(ctx, (2,)),
            simple_module(ctx, (1,)),
            simple_module(ctx, (2,)),
            dual_module(verma_module(ctx, (1,))),
            tensor_module(simple_module(ctx, (2,)), simple_module(ctx, (2,))),
            randsub_module(verma_module(ctx, (1,)), 42),
            quot_module(verma_module(ctx, (0,)), 7),
        ]
        for m in corpus:
            rec = verify_root_criterion(m)
            assert rec["agree"], rec

    def test_borel_criterion_corpus(self, ctxmaker):
        ctx = ctxmaker("A2", 3)
        corpus = [
            trivial_module(ctx),
            verma_module(ctx, (0, 1)),
            simple_module(ctx, (2, 2)),
            quot_module(verma_module(ctx, (0, 0)), 7),
        ]
        for m in corpus:
            rec = verify_borel_criterion(m)
            assert rec["agree"], rec

    def test_reduction_corpus(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        st = simple_module(ctx, (2,))
        rec = verify_reduction_borel(st)
        assert rec["agree"] and rec["borel_minus"] and rec["borel_plus"] and rec["oracle"]
        rec = verify_reduction_borel(trivial_module(ctx))
        assert rec["agree"] and not rec["oracle"]
        # one-sided injectivity: verma is Borel-minus free but not plus
        rec = verify_reduction_borel(verma_module(ctx, (0,)))
        assert rec["agree"] and rec["borel_minus"] and not rec["borel_plus"] and not rec["oracle"]

    def test_skeletons(self, ctxmaker):
        ctx = ctxmaker("A2", 3)
        sk = support_skeleton(trivial_module(ctx), "minus")
        assert sk.roots_in_skeleton == sorted(ctx.datum.positive_roots)
        assert support_skeleton(simple_module(ctx, (2, 2)), "minus").is_empty()
        rec = sk.as_record()
        assert rec["side"] == "minus" and len(rec["per_root"]) == 3

    def test_highest_root(self, ctxmaker):
        ctx = ctxmaker("A2", 3)
        rec = highest_root_test(simple_module(ctx, (2, 2)))
        assert rec["agree"] and rec["oracle"] and rec["highest_root_free"]
        rec = highest_root_test(trivial_module(ctx))
        assert rec["agree"] and not rec["oracle"]
        assert [1, 1] in rec["skeleton"]

    def test_highest_root_needs_big_lift(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        with pytest.raises(AssertionError):
            highest_root_test(verma_module(ctx, (0,)))

    def test_record_line_deterministic(self, ctxmaker):
        ctx = ctxmaker("A1", 3)
        rec = verify_root_criterion(trivial_module(ctx))
        assert record_to_line(rec) == record_to_line(dict(reversed(list(rec.items()))))


class TestHigherKernel:
    def test_r1_criterion(self, ctxmaker):
        ctx = ctxmaker("A1", 3, p=7, r=1)
        st = simple_module(ctx, (20,))
        assert free_over_root(st, 1, "-").verdict
        assert projective_split_test(st, "g", budget=300_000)
        rec = verify_root_criterion(st, budget=300_000)
        assert rec["agree"] and rec["oracle"]
        rec = verify_root_criterion(verma_module(ctx, (0,)), budget=300_000)
        assert rec["agree"] and not rec["oracle"]
