"""Freeness and projectivity oracles, and the theorem-verification harness.

Two independent routes decide whether a module is projective (equiv.
injective, the algebras being Frobenius):

* Nakayama counting over local algebras: M is free iff
  dim M = dim A * dim(M / rad(A) M), with a rank shortcut through the
  top divided power of each root vector;
* an explicit splitting of a projective cover.  For algebras with a
  torus the cover is a sum of idempotent summands A e_chi; a splitting
  exists iff a weight-degree-zero splitting exists (the graded pieces
  of an equivariant map are equivariant), which keeps the linear
  systems small.

The harness compares per-root freeness against the cover-splitting
oracle over the big algebras, reports structured records, and never
hides a disagreement: a mismatch is data for a falsification report.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .kernelalg import KernelContext, parse_kind
from .linalg import Eliminator, LinearSystem, Vec, vec_iadd_scaled
from .qmodules import WeightedModule

Weight = Tuple[int, ...]


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class FreenessReport:
    algebra: str
    dim_m: int
    top_dim: int
    verdict: bool
    rank: Optional[int] = None

    def as_record(self) -> Dict:
        return {
            "algebra": self.algebra,
            "dim_m": self.dim_m,
            "top_dim": self.top_dim,
            "free": self.verdict,
            "rank": self.rank,
        }


@dataclass
class SkeletonReport:
    side: str
    roots_in_skeleton: List[Weight]
    per_root: Dict[Tuple, FreenessReport]

    def is_empty(self) -> bool:
        return not self.roots_in_skeleton

    def as_record(self) -> Dict:
        return {
            "side": self.side,
            "skeleton": [list(r) for r in self.roots_in_skeleton],
            "per_root": {
                "+".join(f"{c}a{i+1}" for i, c in enumerate(root) if c): rep.verdict
                for (root, rep) in sorted(
                    ((r, rep) for r, rep in self.per_root.items())
                )
            },
        }


# ---------------------------------------------------------------------------
# local algebra freeness


def _algebra_generator_actions(m: WeightedModule, kind: str):
    """Module action maps for the generators of the given algebra kind."""
    ctx = m.ctx
    base, lvl, side = parse_kind(kind)
    acts = []
    if base == "Am":
        positions = list(range(lvl))
        for s in positions:
            acts.append(lambda v, s=s: m.act_rv("F", s, v))
        if ctx.r > 0:
            for lev in range(ctx.r):
                acts.append(lambda v, lev=lev: m.act_gen(("Fd%d" % lev, 0), v))
    elif base == "root":
        s = lvl - 1
        sd = "F" if side == "-" else "E"
        acts.append(lambda v, s=s, sd=sd: m.act_rv(sd, s, v))
        if ctx.r > 0:
            for lev in range(ctx.r):
                key = ("Fd%d" % lev, 0) if side == "-" else ("Ed%d" % lev, 0)
                acts.append(lambda v, key=key: m.act_gen(key, v))
    elif base in ("u-", "b-"):
        for j in range(ctx.rank):
            acts.append(lambda v, j=j: m.act_gen(("F", j), v))
        if ctx.r > 0:
            for lev in range(ctx.r):
                acts.append(lambda v, lev=lev: m.act_gen(("Fd%d" % lev, 0), v))
    elif base in ("u+", "b+"):
        for j in range(ctx.rank):
            acts.append(lambda v, j=j: m.act_gen(("E", j), v))
        if ctx.r > 0:
            for lev in range(ctx.r):
                acts.append(lambda v, lev=lev: m.act_gen(("Ed%d" % lev, 0), v))
    elif base == "g":
        for j in range(ctx.rank):
            acts.append(lambda v, j=j: m.act_gen(("F", j), v))
            acts.append(lambda v, j=j: m.act_gen(("E", j), v))
        if ctx.r > 0:
            for lev in range(ctx.r):
                acts.append(lambda v, lev=lev: m.act_gen(("Fd%d" % lev, 0), v))
                acts.append(lambda v, lev=lev: m.act_gen(("Ed%d" % lev, 0), v))
    else:
        raise ValueError(kind)
    return acts


def _local_dim(ctx: KernelContext, kind: str) -> int:
    base, lvl, _ = parse_kind(kind)
    if base == "Am":
        return ctx.cap ** lvl
    if base == "root":
        return ctx.cap
    if base in ("u-", "u+"):
        return ctx.cap ** ctx.n
    raise ValueError(f"{kind} is not in the local family")


def radical_span(m: WeightedModule, kind: str) -> Eliminator:
    """Echelon span of rad(A) M for a local (augmented) algebra kind."""
    acts = _algebra_generator_actions(m, kind)
    elim = Eliminator()
    frontier: List[Vec] = []
    for i in range(m.dim):
        for act in acts:
            w = act({i: m.ctx.field.one})
            red = elim.reduce(w)
            if red and elim.add(red) is not None:
                frontier.append(red)
    # close under the algebra action (rad is the ideal the generators make)
    while frontier:
        v = frontier.pop()
        for act in acts:
            w = act(v)
            red = elim.reduce(w)
            if red and elim.add(red) is not None:
                frontier.append(red)
    return elim


def free_over_local(m: WeightedModule, kind: str) -> FreenessReport:
    """Nakayama freeness test over a local kernel algebra kind."""
    dim_a = _local_dim(m.ctx, kind)
    top = m.dim - radical_span(m, kind).rank
    verdict = m.dim == dim_a * top
    return FreenessReport(kind, m.dim, top, verdict, rank=top if verdict else None)


def free_over_root(m: WeightedModule, pos: int, side: str) -> FreenessReport:
    """Freeness over one root subalgebra, two routes asserted equal.

    pos is the 1-based convex-order position; side '-' tests the F root
    vector, '+' the E one.  The integral-rank shortcut (cap * rank of the
    top divided power equals dim) must agree with the Nakayama count.
    """
    ctx = m.ctx
    kind = f"root:{pos}:{side}"
    rep = free_over_local(m, kind)
    sd = "F" if side == "-" else "E"
    top_power = {}
    for i in range(m.dim):
        img = m.act_divided(sd, pos - 1, ctx.cap - 1, {i: ctx.field.one})
        if img:
            top_power[i] = img
    elim = Eliminator()
    for col in top_power.values():
        elim.add(col)
    shortcut = m.dim == ctx.cap * elim.rank
    if shortcut != rep.verdict:
        raise AssertionError(
            f"rank shortcut and Nakayama disagree over {kind}: "
            f"{shortcut} vs {rep.verdict} on {m.label}"
        )
    return rep


# ---------------------------------------------------------------------------
# projective cover splitting


class CoverSummand:
    """Projective summand A e_chi (or A itself without torus) shifted to
    make the covering map degree preserving."""

    def __init__(self, ctx: KernelContext, kind: str, lam: Weight):
        self.ctx = ctx
        self.kind = kind
        self.lam = tuple(lam)
        base, lvl, side = parse_kind(kind)
        n = ctx.n
        f_caps = [0] * n
        e_caps = [0] * n
        if base == "g":
            f_caps = [ctx.cap] * n
            e_caps = [ctx.cap] * n
        elif base in ("b-", "u-"):
            f_caps = [ctx.cap] * n
        elif base in ("b+", "u+"):
            e_caps = [ctx.cap] * n
        elif base == "Am":
            f_caps = [ctx.cap if i < lvl else 0 for i in range(n)]
        elif base == "root":
            if side == "-":
                f_caps[lvl - 1] = ctx.cap
            else:
                e_caps[lvl - 1] = ctx.cap
        self.keys = [
            (f, e)
            for f in itertools.product(*(range(c) if c else (0,) for c in f_caps))
            for e in itertools.product(*(range(c) if c else (0,) for c in e_caps))
        ]
        self._deg = {}
        for key in self.keys:
            f, e = key
            wt = ctx.datum.root_to_weight(
                tuple(
                    x - y
                    for x, y in zip(ctx.weight_of_fexp(e), ctx.weight_of_fexp(f))
                )
            )
            self._deg[key] = tuple(a + b for a, b in zip(self.lam, wt))
        self._cols: Dict[Tuple, Vec] = {}

    def degree(self, key) -> Weight:
        return self._deg[key]

    def weight_of_right_part(self, key) -> Weight:
        """Weight the torus sees standing left of E^{(e)} e_chi."""
        f, e = key
        wt = self.ctx.datum.root_to_weight(self.ctx.weight_of_fexp(e))
        return tuple(a + b for a, b in zip(self.lam, wt))

    def gen_column(self, gen, key) -> Vec:
        ck = (gen, key)
        hit = self._cols.get(ck)
        if hit is not None:
            return hit
        ctx = self.ctx
        kind, j = gen
        f, e = key
        out: Vec = {}

        def put(f2, e2, c):
            if not c:
                return
            k2 = (tuple(f2), tuple(e2))
            cur = out.get(k2)
            cur = c if cur is None else cur + c
            if cur:
                out[k2] = cur
            else:
                out.pop(k2, None)

        if kind == "F":
            for f2, c in ctx.lmul_rv("F", ctx.simple_pos[j], f).items():
                put(f2, e, c)
        elif kind.startswith("Fd"):
            nn = ctx.ell * (ctx.p ** int(kind[2:]))
            c = ctx.qbin(f[0] + nn, nn, ctx.d_gamma[0])
            if f[0] + nn < ctx.cap and c:
                put((f[0] + nn,), e, c)
        elif kind == "E":
            alpha_j = ctx.datum.simple_roots[j]
            lam_right = self.weight_of_right_part(key)
            if ctx.r > 0:
                self._rank1_E_column(1, key, put)
            elif any(f):
                for (f2, kv, has_e), c in ctx.push_E_through_F(j, f):
                    mu = ctx.k_to_root_coords(kv)
                    if has_e:
                        scal = c * ctx.zeta_pow(
                            ctx.datum.pair_weight_root(lam_right, mu)
                            + ctx.pair(mu, alpha_j)
                        )
                        for e2, ce in ctx.lmul_rv("E", ctx.simple_pos[j], e).items():
                            put(f2, e2, scal * ce)
                    else:
                        scal = c * ctx.zeta_pow(ctx.datum.pair_weight_root(lam_right, mu))
                        put(f2, e, scal)
            else:
                for e2, ce in ctx.lmul_rv("E", ctx.simple_pos[j], e).items():
                    put(f, e2, ce)
        elif kind.startswith("Ed"):
            nn = ctx.ell * (ctx.p ** int(kind[2:]))
            self._rank1_E_column(nn, key, put)
        else:
            raise ValueError(gen)
        self._cols[ck] = out
        return out

    def _rank1_E_column(self, m_e: int, key, put) -> None:
        """Rank-one E^{(m)} action with torus factors evaluated at weights."""
        ctx = self.ctx
        f, e = key
        d0 = ctx.d_gamma[0]
        lam_right = self.weight_of_right_part(key)
        lam_hat = lam_right[0] * d0
        for f_t, c_off, t, e_t in ctx.mixed_rank1_terms(m_e, f[0]):
            # [K; c_off over t] stands left of E^{(e_t)} E^{(e)} e_chi
            val = ctx.gauss_binom(lam_hat + 2 * e_t * 1 + c_off, t)
            if not val:
                continue
            tot = e_t + e[0]
            if tot >= ctx.cap:
                continue
            c = val
            if e_t and e[0]:
                cb = ctx.qbin(tot, e_t, d0)
                if not cb:
                    continue
                c = c * cb
            put((f_t,), (tot,), c)


def module_generators(m: WeightedModule, kind: str) -> List[int]:
    """Greedy basis-vector generating set of M over the algebra kind."""
    acts = _algebra_generator_actions(m, kind)
    elim = Eliminator()
    gens: List[int] = []
    for i in range(m.dim):
        if elim.contains({i: m.ctx.field.one}):
            continue
        gens.append(i)
        frontier = [{i: m.ctx.field.one}]
        elim.add({i: m.ctx.field.one})
        while frontier:
            v = frontier.pop()
            for act in acts:
                w = act(v)
                red = elim.reduce(w)
                if red and elim.add(red) is not None:
                    frontier.append(red)
    assert elim.rank == m.dim, "generator closure must exhaust the module"
    return gens


def projective_split_test(m: WeightedModule, kind: str, budget: int = 200_000) -> bool:
    """Existence of a splitting of a projective cover over the algebra kind.

    The cover is a direct sum of idempotent summands A e_chi indexed by a
    generating set of weight vectors; a degree-zero A-linear section s
    with pi . s = id is sought by sparse elimination.  True iff M is
    projective (equivalently injective: the kernels are Frobenius).
    """
    ctx = m.ctx
    base, _, _ = parse_kind(kind)
    dim_a = {
        "g": (ctx.cap ** (2 * ctx.n)) * (ctx.ell ** ctx.rank),
        "b-": (ctx.cap ** ctx.n) * (ctx.ell ** ctx.rank),
        "b+": (ctx.cap ** ctx.n) * (ctx.ell ** ctx.rank),
        "u-": ctx.cap ** ctx.n,
        "u+": ctx.cap ** ctx.n,
    }.get(base)
    if dim_a is None:
        dim_a = _local_dim(ctx, kind)
    if dim_a * m.dim > budget:
        raise BudgetExceeded(
            f"split test over {kind}: {dim_a} x {m.dim} exceeds budget {budget}"
        )
    gens = module_generators(m, kind)
    summands = [CoverSummand(ctx, kind, m.weights[i]) for i in gens]

    # quick necessary check: enough cover keys in every degree
    by_degree: Dict[Weight, List[Tuple[int, Tuple]]] = {}
    for t, summand in enumerate(summands):
        for key in summand.keys:
            by_degree.setdefault(summand.degree(key), []).append((t, key))

    gen_keys = _split_generator_keys(m, kind)
    system = LinearSystem()
    # pi . s = id
    pi_cache: Dict[Tuple[int, Tuple], Vec] = {}

    def pi(t: int, key) -> Vec:
        hit = pi_cache.get((t, key))
        if hit is None:
            f, e = key
            hit = m.act_monomial((f, (0,) * ctx.rank, e), {gens[t]: ctx.field.one})
            pi_cache[(t, key)] = hit
        return hit

    for j in range(m.dim):
        mu = m.weights[j]
        support = by_degree.get(mu, [])
        if not support and m.dim:
            return False
        rows: Dict[int, Vec] = {}
        for (t, key) in support:
            for row, c in pi(t, key).items():
                rows.setdefault(row, {})[(t, key, j)] = c
        for row in range(m.dim):
            rhs = ctx.field.one if row == j else ctx.field.zero
            system.add(rows.get(row, {}), rhs)
    # equivariance for each generator: per (gen, source j), the equation
    #   s(g v_j) - g s(v_j) = 0 read off in each cover coordinate (t, key2)
    for gen in gen_keys:
        mat = _module_gen_matrix(m, gen)
        for j in range(m.dim):
            mu = m.weights[j]
            eqs: Dict[Tuple, Vec] = {}
            for j2, c in mat.get(j, {}).items():
                # s(v_{j2}) contributes +c on unknown (t, key2, j2)
                for (t, key2) in by_degree.get(m.weights[j2], []):
                    eqs.setdefault((t, key2), {})[(t, key2, j2)] = c
            for (t, key) in by_degree.get(mu, []):
                for key2, c in summands[t].gen_column(gen, key).items():
                    row = eqs.setdefault((t, key2), {})
                    cur = row.get((t, key, j), ctx.field.zero) - c
                    if cur:
                        row[(t, key, j)] = cur
                    else:
                        row.pop((t, key, j), None)
            for coeffs in eqs.values():
                system.add(coeffs, ctx.field.zero)
    return system.solve(ctx.field.zero) is not None


def _split_generator_keys(m: WeightedModule, kind: str):
    ctx = m.ctx
    base, lvl, side = parse_kind(kind)
    out = []
    if base in ("g", "b-", "u-"):
        out += [("F", j) for j in range(ctx.rank)]
    if base in ("g", "b+", "u+"):
        out += [("E", j) for j in range(ctx.rank)]
    if ctx.r > 0:
        extra = []
        for kd, j in out:
            extra.append((kd + "d0", j))
        out += extra
    if base in ("Am", "root"):
        raise ValueError("use free_over_local for the local kinds")
    return out


def _module_gen_matrix(m: WeightedModule, gen):
    if gen in m.actions:
        return m.actions[gen]
    raise KeyError(f"{m.label} has no action {gen}")


# ---------------------------------------------------------------------------
# theorem-level verifications


def support_skeleton(m: WeightedModule, side: str) -> SkeletonReport:
    """Roots whose subalgebra fails freeness: the rank-variety shadow."""
    ctx = m.ctx
    per_root = {}
    skeleton = []
    for pos in range(1, ctx.n + 1):
        root = ctx.order.gammas[pos - 1]
        rep = free_over_root(m, pos, "-" if side == "minus" else "+")
        per_root[root] = rep
        if not rep.verdict:
            skeleton.append(root)
    return SkeletonReport(side, sorted(skeleton), per_root)


def verify_root_criterion(m: WeightedModule, budget: int = 200_000) -> Dict:
    """Per-root freeness on both sides against the big-algebra oracle."""
    ctx = m.ctx
    all_free = True
    per_root: Dict[str, bool] = {}
    for side in ("-", "+"):
        for pos in range(1, ctx.n + 1):
            rep = free_over_root(m, pos, side)
            name = _root_name(ctx, pos, side)
            per_root[name] = rep.verdict
            all_free = all_free and rep.verdict
    oracle = projective_split_test(m, "g", budget)
    if oracle and not all_free:
        # unconditional direction: injective over the big algebra forces
        # freeness over every root subalgebra
        raise AssertionError(f"{m.label}: oracle injective but some root fails")
    return {
        "suite": "rootcrit",
        "spec": m.label,
        "per_root": per_root,
        "roots_free": all_free,
        "oracle": oracle,
        "agree": all_free == oracle,
    }


def verify_borel_criterion(m: WeightedModule, budget: int = 200_000) -> Dict:
    """Positive-root freeness against the unipotent and Borel oracles."""
    ctx = m.ctx
    per_root = {}
    all_free = True
    for pos in range(1, ctx.n + 1):
        rep = free_over_root(m, pos, "-")
        per_root[_root_name(ctx, pos, "-")] = rep.verdict
        all_free = all_free and rep.verdict
    oracle_u = projective_split_test(m, "u-", budget)
    oracle_b = projective_split_test(m, "b-", budget)
    if oracle_u != oracle_b:
        raise AssertionError(
            f"{m.label}: unipotent and Borel verdicts differ ({oracle_u} vs {oracle_b})"
        )
    return {
        "suite": "borel",
        "spec": m.label,
        "per_root": per_root,
        "roots_free": all_free,
        "oracle": oracle_u,
        "agree": all_free == oracle_u,
    }


def verify_reduction_borel(m: WeightedModule, budget: int = 200_000) -> Dict:
    """Pair of Borel verdicts against the big-algebra verdict."""
    minus = projective_split_test(m, "u-", budget)
    plus = projective_split_test(m, "u+", budget)
    oracle = projective_split_test(m, "g", budget)
    return {
        "suite": "reduction",
        "spec": m.label,
        "borel_minus": minus,
        "borel_plus": plus,
        "oracle": oracle,
        "agree": (minus and plus) == oracle,
    }


def highest_root_test(m: WeightedModule, budget: int = 200_000) -> Dict:
    """Single-root detection at the highest root, plus skeleton closure.

    Only meaningful for modules restricting from the full quantized
    algebra; the skeleton closure property needs that lift.
    """
    ctx = m.ctx
    assert "big" in m.flags, "highest-root test needs a full lift"
    h = ctx.datum.highest_root
    pos = ctx.order.gammas.index(h) + 1
    rep = free_over_root(m, pos, "-")
    oracle = projective_split_test(m, "g", budget)
    skel = support_skeleton(m, "minus")
    closure_ok = skel.is_empty() or (h in skel.roots_in_skeleton)
    return {
        "suite": "highest",
        "spec": m.label,
        "highest_root_free": rep.verdict,
        "oracle": oracle,
        "skeleton": [list(r) for r in skel.roots_in_skeleton],
        "skeleton_contains_highest": closure_ok,
        "agree": (rep.verdict == oracle) and closure_ok,
    }


def _root_name(ctx: KernelContext, pos: int, side: str) -> str:
    root = ctx.order.gammas[pos - 1]
    name = "+".join(f"{c}a{i+1}" for i, c in enumerate(root) if c)
    return ("f:" if side == "-" else "e:") + name


def record_to_line(record: Dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))
