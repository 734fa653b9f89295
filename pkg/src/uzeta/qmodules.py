"""Finite-dimensional X-graded modules over the kernel algebras.

A module is a list of basis weights (integer fundamental-weight
coordinates) together with sparse action matrices for the E and F
generators (plus divided-power generators at higher kernel levels).
The torus action is never stored: K_mu acts on a weight-lam vector by
zeta^{(lam, mu)}, and every constructor and operation preserves that
normalization (the grading/relation checker enforces it).

Construction of simple heads uses the contravariant pairing against the
transpose twist sigma with sigma(E) = F, sigma(F) = E, sigma(K) = K;
the resulting radical quotient is certified after the fact (nondegenerate
induced pairing, one-dimensional highest weight line, cyclicity from
every spanning weight vector).
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .kernelalg import BasisKey, GenKey, KernelContext
from .linalg import Eliminator, LinearSystem, Mat, SpanSolver, Vec, kernel_basis, mat_apply, vec_iadd_scaled

Weight = Tuple[int, ...]


class ModuleCheckError(AssertionError):
    pass


@dataclass
class WeightedModule:
    ctx: KernelContext
    weights: Tuple[Weight, ...]
    actions: Dict[GenKey, Mat]
    flags: FrozenSet[str]  # subset of {torus, borel-, borel+, full}
    label: str = "module"

    @property
    def dim(self) -> int:
        return len(self.weights)

    # -- actions ----------------------------------------------------------

    def act_gen(self, gen: GenKey, vec: Vec) -> Vec:
        mat = self.actions.get(gen)
        if mat is None:
            raise KeyError(f"{self.label} carries no action of {gen}")
        return mat_apply(mat, vec)

    def k_eigen(self, j: int, i: int):
        """Eigenvalue of K_{alpha_j} on basis vector i."""
        lam = self.weights[i]
        return self.ctx.zeta_pow(lam[j] * self.ctx.datum.d[j])

    def act_k(self, kvec: Sequence[int], vec: Vec) -> Vec:
        ctx = self.ctx
        mu = ctx.k_to_root_coords(tuple(kvec))
        out: Vec = {}
        for i, c in vec.items():
            e = ctx.datum.pair_weight_root(self.weights[i], mu)
            out[i] = c * ctx.zeta_pow(e)
        return out

    def act_rv(self, side: str, pos: int, vec: Vec) -> Vec:
        """Plain root vector at a convex-order position, via its word."""
        ctx = self.ctx
        out: Vec = {}
        kind = "E" if side == "E" else "F"
        for word, c in ctx.rv_words[side][pos]:
            cur = {i: v * c for i, v in vec.items()}
            for j in reversed(word):
                cur = self.act_gen((kind, j), cur)
                if not cur:
                    break
            vec_iadd_scaled(out, cur, ctx.field.one)
        return out

    def act_divided(self, side: str, pos: int, n: int, vec: Vec) -> Vec:
        """Divided power X_{gamma_pos}^{(n)}."""
        ctx = self.ctx
        if n == 0:
            return dict(vec)
        if ctx.r > 0:
            assert ctx.n == 1
            a1, a0 = divmod(n, ctx.ell)
            kind = "E" if side == "E" else "F"
            cur = dict(vec)
            for _ in range(a0):
                cur = self.act_gen((kind, 0), cur)
            for _ in range(a1):
                cur = self.act_gen((kind + "d0", 0), cur)
            unit = ctx.field.one
            for i in range(2, a1 + 1):
                unit = unit * ctx.field.from_int(i)
            unit = unit * ctx.qfact(a0, ctx.d_gamma[0])
            inv = ctx.field.one / unit
            return {k: v * inv for k, v in cur.items()}
        cur = dict(vec)
        for _ in range(n):
            cur = self.act_rv(side, pos, cur)
        inv = ctx.field.one / ctx.qfact(n, ctx.d_gamma[pos])
        return {k: v * inv for k, v in cur.items()}

    def act_monomial(self, key: BasisKey, vec: Vec) -> Vec:
        """Basis monomial F^{(f)} K^k E^{(e)} acting on a module vector."""
        f, k, e = key
        cur = vec
        for pos in range(self.ctx.n - 1, -1, -1):
            if e[pos]:
                cur = self.act_divided("E", pos, e[pos], cur)
        if any(k):
            cur = self.act_k(k, cur)
        for pos in range(self.ctx.n - 1, -1, -1):
            if f[pos]:
                cur = self.act_divided("F", pos, f[pos], cur)
        return cur

    # -- invariants ---------------------------------------------------------

    def character(self) -> Counter:
        return Counter(self.weights)

    def generator_kinds(self) -> List[GenKey]:
        return sorted(self.actions.keys())

    def check(self, rng: Optional[random.Random] = None, samples: int = 12) -> None:
        """Grading compatibility and relation annihilation."""
        ctx = self.ctx
        shifts = {"E": 1, "F": -1}
        for (kind, j), mat in self.actions.items():
            base = kind[0]
            mult = 1 if len(kind) == 1 else ctx.ell * (ctx.p ** int(kind[2:]))
            alpha_w = ctx.datum.root_to_weight(ctx.datum.simple_roots[j])
            for col, column in mat.items():
                for row, c in column.items():
                    want = tuple(
                        a + shifts[base] * mult * b
                        for a, b in zip(self.weights[col], alpha_w)
                    )
                    if self.weights[row] != want:
                        raise ModuleCheckError(
                            f"{self.label}: {kind}_{j+1} breaks the grading"
                        )
        rng = rng or random.Random(0)
        idxs = sorted(rng.sample(range(self.dim), min(samples, self.dim)))
        for i in idxs:
            v = {i: ctx.field.one}
            self._check_relations_on(v)

    def _check_relations_on(self, v: Vec) -> None:
        ctx = self.ctx
        for i in range(ctx.rank):
            for j in range(ctx.rank):
                lhs = self.act_gen(("E", i), self.act_gen(("F", j), v))
                rhs = self.act_gen(("F", j), self.act_gen(("E", i), v))
                dif = dict(lhs)
                vec_iadd_scaled(dif, rhs, -ctx.field.one)
                if i == j:
                    di = ctx.datum.d[i]
                    denom = ctx.zeta_pow(di) - ctx.zeta_pow(-di)
                    for idx, c in v.items():
                        lam = self.weights[idx]
                        e = lam[i] * di
                        scal = (ctx.zeta_pow(e) - ctx.zeta_pow(-e)) / denom
                        cur = dif.get(idx, ctx.field.zero)
                        cur = cur - c * scal
                        if cur:
                            dif[idx] = cur
                        else:
                            dif.pop(idx, None)
                if dif:
                    raise ModuleCheckError(
                        f"{self.label}: [E_{i+1}, F_{j+1}] relation fails"
                    )
        for wt, rel in ctx.uq.serre_relators():
            for kind in ("E", "F"):
                acc: Vec = {}
                for word, coeff in rel.items():
                    c = ctx.field.eval_fraction(coeff)
                    cur = {k: val * c for k, val in v.items()}
                    for j in reversed(word):
                        cur = self.act_gen((kind, j), cur)
                        if not cur:
                            break
                    vec_iadd_scaled(acc, cur, ctx.field.one)
                if acc:
                    raise ModuleCheckError(f"{self.label}: {kind}-Serre relator acts")
        if ctx.r > 0:
            self._check_divided_relations_on(v)

    def _check_divided_relations_on(self, v: Vec) -> None:
        # E^{(m)} F^{(n)} = sum_t F^{(n-t)} [K; 2t-m-n over t] E^{(m-t)}
        ctx = self.ctx
        d0 = ctx.d_gamma[0]
        for m, nn in [(1, ctx.ell), (ctx.ell, 1), (ctx.ell, ctx.ell)]:
            lhs = self.act_divided("E", 0, m, self.act_divided("F", 0, nn, v))
            rhs: Vec = {}
            for f_t, c_off, t, e_t in ctx.mixed_rank1_terms(m, nn):
                cur = self.act_divided("E", 0, e_t, v)
                ev: Vec = {}
                for idx, c in cur.items():
                    lam_hat = self.weights[idx][0] * d0
                    val = ctx.gauss_binom(lam_hat + c_off, t)
                    if val:
                        ev[idx] = c * val
                if ev:
                    vec_iadd_scaled(rhs, self.act_divided("F", 0, f_t, ev), ctx.field.one)
            dif = dict(lhs)
            vec_iadd_scaled(dif, rhs, -ctx.field.one)
            if dif:
                raise ModuleCheckError(
                    f"{self.label}: divided mixed relation E^({m}) F^({nn}) fails"
                )


# --------------------------------------------------------------------------
# constructors


def _fexp_list(ctx: KernelContext) -> List[Tuple[int, ...]]:
    return sorted(itertools.product(range(ctx.cap), repeat=ctx.n))


def trivial_module(ctx: KernelContext) -> WeightedModule:
    zero = (0,) * ctx.rank
    acts: Dict[GenKey, Mat] = {("E", j): {} for j in range(ctx.rank)}
    acts.update({("F", j): {} for j in range(ctx.rank)})
    if ctx.r > 0:
        acts.update({("Ed%d" % i, 0): {} for i in range(ctx.r)})
        acts.update({("Fd%d" % i, 0): {} for i in range(ctx.r)})
    return WeightedModule(ctx, (zero,), acts, frozenset({"torus", "borel-", "borel+", "big"}), "trivial")


def onedim_module(ctx: KernelContext, lam: Weight) -> WeightedModule:
    m = trivial_module(ctx)
    period = ctx.ell * (ctx.p ** ctx.r if ctx.r else 1)
    if any((lam[j] * ctx.datum.d[j]) % period for j in range(ctx.rank)):
        raise ValueError(f"onedim weight {lam} does not kill the kernel algebra")
    flags = {"torus", "borel-", "borel+"}
    if not any(lam):
        flags.add("big")
    return WeightedModule(ctx, (tuple(lam),), m.actions, frozenset(flags), f"onedim({_lam_str(lam)})")


def verma_module(ctx: KernelContext, lam: Weight) -> WeightedModule:
    """Induced highest-weight module: free rank one over the F side."""
    lam = tuple(lam)
    fexps = _fexp_list(ctx)
    index = {a: i for i, a in enumerate(fexps)}
    weights = []
    for a in fexps:
        wt_a = ctx.datum.root_to_weight(ctx.weight_of_fexp(a))
        weights.append(tuple(x - y for x, y in zip(lam, wt_a)))
    acts: Dict[GenKey, Mat] = {}
    for j in range(ctx.rank):
        mat: Mat = {}
        pos = ctx.simple_pos[j]
        for a in fexps:
            col: Vec = {}
            for a2, c in ctx.lmul_rv("F", pos, a).items():
                col[index[a2]] = c
            if col:
                mat[index[a]] = col
        acts[("F", j)] = mat
    if ctx.r > 0:
        for lev in range(ctx.r):
            nn = ctx.ell * (ctx.p ** lev)
            mat = {}
            for a in fexps:
                c = ctx.qbin(a[0] + nn, nn, ctx.d_gamma[0])
                if a[0] + nn < ctx.cap and c:
                    mat[index[a]] = {index[(a[0] + nn,)]: c}
            acts[("Fd%d" % lev, 0)] = mat
    # E action: push through the F part and evaluate K at the top weight
    for j in range(ctx.rank):
        mat = {}
        if ctx.r == 0:
            for a in fexps:
                col: Vec = {}
                for (a2, kv, has_e), c in ctx.push_E_through_F(j, a):
                    if has_e:
                        continue  # E kills the highest vector
                    mu = ctx.k_to_root_coords(kv)
                    scal = c * ctx.zeta_pow(ctx.datum.pair_weight_root(lam, mu))
                    cur = col.get(index[a2])
                    cur = scal if cur is None else cur + scal
                    if cur:
                        col[index[a2]] = cur
                    else:
                        col.pop(index[a2], None)
                if col:
                    mat[index[a]] = col
            acts[("E", j)] = mat
        else:
            for lev in [None] + list(range(ctx.r)):
                m_e = 1 if lev is None else ctx.ell * (ctx.p ** lev)
                mat = {}
                d0 = ctx.d_gamma[0]
                for a in fexps:
                    nn = a[0]
                    col = {}
                    for f_t, c_off, t, e_t in ctx.mixed_rank1_terms(m_e, nn):
                        if e_t:
                            continue
                        lam_hat = lam[0] * d0
                        val = ctx.gauss_binom(lam_hat + c_off, t)
                        if val:
                            cur = col.get(index[(f_t,)])
                            cur = val if cur is None else cur + val
                            if cur:
                                col[index[(f_t,)]] = cur
                            else:
                                col.pop(index[(f_t,)], None)
                    if col:
                        mat[index[a]] = col
                acts[("E", 0) if lev is None else ("Ed%d" % lev, 0)] = mat
            break
    return WeightedModule(
        ctx, tuple(weights), acts, frozenset({"torus", "borel-", "borel+"}),
        f"verma({_lam_str(lam)})",
    )


def coverma_module(ctx: KernelContext, lam: Weight) -> WeightedModule:
    """Coinduced module: functions on the E side, socle weight lam on top."""
    lam = tuple(lam)
    eexps = _fexp_list(ctx)
    index = {c: i for i, c in enumerate(eexps)}
    weights = []
    for cexp in eexps:
        wt_c = ctx.datum.root_to_weight(ctx.weight_of_fexp(cexp))
        weights.append(tuple(x - y for x, y in zip(lam, wt_c)))
    acts: Dict[GenKey, Mat] = {}
    # (E_j . f)(E^{(c')}) = f(E^{(c')} E_j)
    for j in range(ctx.rank):
        mat: Mat = {}
        pos = ctx.simple_pos[j]
        for cexp in eexps:
            for c2, coeff in ctx.rmul_rv("E", pos, cexp).items():
                i2 = index.get(c2)
                if i2 is None:
                    continue
                mat.setdefault(i2, {})[index[cexp]] = coeff
        acts[("E", j)] = mat
    if ctx.r > 0:
        for lev in range(ctx.r):
            nn = ctx.ell * (ctx.p ** lev)
            mat = {}
            for cexp in eexps:
                coeff = ctx.qbin(cexp[0] + nn, nn, ctx.d_gamma[0])
                if cexp[0] + nn < ctx.cap and coeff:
                    mat.setdefault(index[(cexp[0] + nn,)], {})[index[cexp]] = coeff
            acts[("Ed%d" % lev, 0)] = mat
    # (F_j . f)(E^{(c')}) = f(E^{(c')} F_j); the B-part acts through lam
    for j in range(ctx.rank):
        mat = {}
        if ctx.r == 0:
            for cexp in eexps:
                for (has_f, kv, c2), coeff in ctx.push_F_through_E(j, cexp):
                    if has_f:
                        continue  # lam kills the F part
                    i2 = index.get(c2)
                    if i2 is None:
                        continue
                    mu = ctx.k_to_root_coords(kv)
                    scal = coeff * ctx.zeta_pow(ctx.datum.pair_weight_root(lam, mu))
                    col = mat.setdefault(i2, {})
                    cur = col.get(index[cexp])
                    cur = scal if cur is None else cur + scal
                    if cur:
                        col[index[cexp]] = cur
                    else:
                        col.pop(index[cexp], None)
            acts[("F", j)] = mat
        else:
            d0 = ctx.d_gamma[0]
            for lev in [None] + list(range(ctx.r)):
                n_f = 1 if lev is None else ctx.ell * (ctx.p ** lev)
                mat = {}
                for cexp in eexps:
                    m_e = cexp[0]
                    for f_t, c_off, t, e_t in ctx.mixed_rank1_terms(m_e, n_f):
                        if f_t:
                            continue
                        i2 = index.get((e_t,))
                        if i2 is None:
                            continue
                        lam_hat = lam[0] * d0
                        val = ctx.gauss_binom(lam_hat + c_off, t)
                        if val:
                            col = mat.setdefault(i2, {})
                            cur = col.get(index[cexp])
                            cur = val if cur is None else cur + val
                            if cur:
                                col[index[cexp]] = cur
                            else:
                                col.pop(index[cexp], None)
                acts[("F", 0) if lev is None else ("Fd%d" % lev, 0)] = mat
            break
    return WeightedModule(
        ctx, tuple(weights), acts, frozenset({"torus", "borel-", "borel+"}),
        f"coverma({_lam_str(lam)})",
    )


def dual_module(m: WeightedModule) -> WeightedModule:
    """Antipode-twisted dual: g acts on f by f(S(g) . -)."""
    ctx = m.ctx
    weights = tuple(tuple(-x for x in lam) for lam in m.weights)
    acts: Dict[GenKey, Mat] = {}
    for (kind, j), mat in m.actions.items():
        base = kind[0]
        level = None if len(kind) == 1 else int(kind[2:])
        nn = 1 if level is None else ctx.ell * (ctx.p ** level)
        dj = ctx.datum.d[j]
        # S(E^{(n)}) = (-1)^n q^{d n(n-1)} K^{-n} E^{(n)},
        # S(F^{(n)}) = (-1)^n q^{-d n(n-1)} F^{(n)} K^{n}
        sign = ctx.field.from_int(-1) if nn % 2 else ctx.field.one
        tw = ctx.zeta_pow(dj * nn * (nn - 1)) if base == "E" else ctx.zeta_pow(-dj * nn * (nn - 1))
        smat: Mat = {}
        for col, column in mat.items():
            for row, c in column.items():
                if base == "E":
                    # K^{-n} after E^{(n)}: eigenvalue at the TARGET weight
                    lam = m.weights[row]
                    keig = ctx.zeta_pow(-nn * lam[j] * dj)
                else:
                    lam = m.weights[col]
                    keig = ctx.zeta_pow(nn * lam[j] * dj)
                val = sign * tw * keig * c
                # transpose
                smat.setdefault(row, {})[col] = val
        acts[(kind, j)] = smat
    return WeightedModule(ctx, weights, acts, m.flags, f"dual({m.label})")


def tensor_module(a: WeightedModule, b: WeightedModule) -> WeightedModule:
    ctx = a.ctx
    dim_b = b.dim
    weights = tuple(
        tuple(x + y for x, y in zip(la, lb)) for la in a.weights for lb in b.weights
    )

    def pair(i, k):
        return i * dim_b + k

    acts: Dict[GenKey, Mat] = {}
    kinds = set(a.actions) | set(b.actions)
    for (kind, j) in sorted(kinds):
        base = kind[0]
        level = None if len(kind) == 1 else int(kind[2:])
        nn = 1 if level is None else ctx.ell * (ctx.p ** level)
        dj = ctx.datum.d[j]
        mat: Mat = {}

        def add(col, row, c):
            if not c:
                return
            colm = mat.setdefault(col, {})
            cur = colm.get(row)
            cur = c if cur is None else cur + c
            if cur:
                colm[row] = cur
            else:
                colm.pop(row, None)

        pos = ctx.simple_pos[j]
        for i in range(a.dim):
            for k in range(b.dim):
                col = pair(i, k)
                # Delta(E^{(n)}) = sum q^{-d na nb} K^{nb} E^{(na)} (x) E^{(nb)}
                # Delta(F^{(n)}) = sum q^{+d na nb} F^{(na)} (x) F^{(nb)} K^{-na}
                for na in range(nn + 1):
                    nb = nn - na
                    if base == "E":
                        va = a.act_divided("E", pos, na, {i: ctx.field.one})
                        vb = b.act_divided("E", pos, nb, {k: ctx.field.one})
                        scal = ctx.zeta_pow(-dj * na * nb)
                        for ia, ca in va.items():
                            keig = ctx.zeta_pow(nb * a.weights[ia][j] * dj)
                            for ib, cb in vb.items():
                                add(col, pair(ia, ib), scal * keig * ca * cb)
                    else:
                        va = a.act_divided("F", pos, na, {i: ctx.field.one})
                        vb = b.act_divided("F", pos, nb, {k: ctx.field.one})
                        scal = ctx.zeta_pow(dj * na * nb)
                        keig = ctx.zeta_pow(-na * b.weights[k][j] * dj)
                        for ia, ca in va.items():
                            for ib, cb in vb.items():
                                add(col, pair(ia, ib), scal * keig * ca * cb)
        acts[(kind, j)] = mat
    flags = a.flags & b.flags
    return WeightedModule(ctx, weights, acts, flags, f"tensor({a.label},{b.label})")


def sum_module(a: WeightedModule, b: WeightedModule) -> WeightedModule:
    ctx = a.ctx
    weights = a.weights + b.weights
    off = a.dim
    acts: Dict[GenKey, Mat] = {}
    for kind in set(a.actions) | set(b.actions):
        mat: Mat = {}
        for col, column in a.actions.get(kind, {}).items():
            mat[col] = dict(column)
        for col, column in b.actions.get(kind, {}).items():
            mat[col + off] = {row + off: c for row, c in column.items()}
        acts[kind] = mat
    return WeightedModule(ctx, weights, acts, a.flags & b.flags, f"sum({a.label},{b.label})")


def twist_module(m: WeightedModule, mu: Weight) -> WeightedModule:
    ctx = m.ctx
    period = ctx.ell * (ctx.p ** ctx.r if ctx.r else 1)
    if any((mu[j] * ctx.datum.d[j]) % period for j in range(ctx.rank)):
        raise ValueError(f"twist weight {mu} is not in {period}X")
    weights = tuple(tuple(x + y for x, y in zip(lam, mu)) for lam in m.weights)
    flags = set(m.flags)
    if any(mu):
        flags.discard("big")  # nontrivial grading shifts do not extend upstairs
    return WeightedModule(ctx, weights, m.actions, frozenset(flags), f"twist({m.label},{_lam_str(mu)})")


# --------------------------------------------------------------------------
# submodules, quotients, simples


def cyclic_span(m: WeightedModule, seeds: List[Vec]) -> List[Vec]:
    """Graded basis (echelon rows) of the submodule generated by seeds."""
    elim = Eliminator()
    frontier: List[Vec] = []
    basis: List[Vec] = []
    gens = m.generator_kinds()
    for v in seeds:
        red = elim.reduce(v)
        if red and elim.add(red) is not None:
            basis.append(red)
            frontier.append(red)
    while frontier:
        v = frontier.pop()
        for g in gens:
            w = m.act_gen(g, v)
            red = elim.reduce(w)
            if red and elim.add(red) is not None:
                basis.append(red)
                frontier.append(red)
    return sorted(elim.pivots.values(), key=lambda row: min(row))


def submodule(m: WeightedModule, rows: List[Vec], label: str) -> WeightedModule:
    """Module structure on the span of echelonized homogeneous rows."""
    solver = SpanSolver()
    keys = []
    for t, row in enumerate(rows):
        assert solver.add(t, row), "rows must be independent"
        keys.append(t)
    weights = []
    for row in rows:
        lam = m.weights[min(row)]
        assert all(m.weights[k] == lam for k in row), "rows must be homogeneous"
        weights.append(lam)
    acts: Dict[GenKey, Mat] = {}
    for g in m.generator_kinds():
        mat: Mat = {}
        for t, row in enumerate(rows):
            img = m.act_gen(g, row)
            if not img:
                continue
            sol = solver.solve(img)
            if sol is None:
                raise ModuleCheckError(f"{label}: span is not {g}-stable")
            mat[t] = {k: v for k, v in sol.items() if v}
        acts[g] = mat
    return WeightedModule(m.ctx, tuple(weights), acts, m.flags, label)


def quotient_module(m: WeightedModule, rows: List[Vec], label: str) -> WeightedModule:
    """Quotient by the homogeneous submodule spanned by echelon rows."""
    elim = Eliminator()
    for row in rows:
        elim.add(row)
    keep = [i for i in range(m.dim) if i not in elim.pivots]
    pos = {i: t for t, i in enumerate(keep)}
    weights = tuple(m.weights[i] for i in keep)
    acts: Dict[GenKey, Mat] = {}
    for g in m.generator_kinds():
        mat: Mat = {}
        for t, i in enumerate(keep):
            img = m.act_gen(g, {i: m.ctx.field.one})
            red = elim.reduce(img)
            col = {}
            for k, c in red.items():
                col[pos[k]] = c
            if col:
                mat[t] = col
        acts[g] = mat
    return WeightedModule(m.ctx, weights, acts, m.flags, label)


def random_weight_vector(m: WeightedModule, seed: int) -> Vec:
    """Deterministic nonzero vector inside one weight space."""
    rng = random.Random(seed)
    by_weight: Dict[Weight, List[int]] = {}
    for i, lam in enumerate(m.weights):
        by_weight.setdefault(lam, []).append(i)
    lam = rng.choice(sorted(by_weight))
    idxs = by_weight[lam]
    vec: Vec = {}
    while not vec:
        for i in idxs:
            c = rng.randint(-2, 2)
            if c:
                vec[i] = m.ctx.field.from_int(c)
    return vec


def randsub_module(m: WeightedModule, seed: int) -> WeightedModule:
    rows = cyclic_span(m, [random_weight_vector(m, seed)])
    sub = submodule(m, rows, f"randsub({m.label},{seed})")
    # stability under the divided powers upstairs is not certified
    sub.flags = frozenset(sub.flags - {"big"})
    return sub


def quot_module(m: WeightedModule, seed: int) -> WeightedModule:
    rows = cyclic_span(m, [random_weight_vector(m, seed)])
    quo = quotient_module(m, rows, f"quot({m.label},{seed})")
    quo.flags = frozenset(quo.flags - {"big"})
    return quo


def contravariant_gram(m: WeightedModule, verma_of: Weight) -> Dict[Weight, Tuple[List[int], List[List[object]]]]:
    """Per-weight Gram blocks of the sigma-contravariant pairing on a Verma.

    The pairing of F^{(a)} v and F^{(b)} v is the highest-line coordinate
    of sigma(F^{(a)}) acting on F^{(b)} v, where sigma reverses words and
    exchanges E with F.
    """
    ctx = m.ctx
    fexps = _fexp_list(ctx)
    top = fexps.index((0,) * ctx.n)
    blocks: Dict[Weight, List[int]] = {}
    for i, lam in enumerate(m.weights):
        blocks.setdefault(lam, []).append(i)
    out = {}
    for lam, idxs in blocks.items():
        size = len(idxs)
        gram = [[ctx.field.zero] * size for _ in range(size)]
        for bi, b in enumerate(idxs):
            vb = {b: ctx.field.one}
            for ai, a in enumerate(idxs):
                acc = ctx.field.zero
                if ctx.n == 1:
                    # sigma(F^{(a)}) = E^{(a)} in rank one
                    cur = m.act_divided("E", 0, fexps[a][0], vb)
                    if cur.get(top):
                        acc = cur[top]
                else:
                    # sigma(F_{i1}...F_{ik}) = E_{ik}...E_{i1}: word reversal
                    # composed with right-to-left operator application means
                    # the letters act in their original order.
                    for word, c in ctx.mono_simple_words("F", fexps[a]):
                        cur = {k2: v * c for k2, v in vb.items()}
                        for j in word:
                            cur = m.act_gen(("E", j), cur)
                            if not cur:
                                break
                        if cur.get(top):
                            acc = acc + cur[top]
                gram[ai][bi] = acc
        out[lam] = (idxs, gram)
    return out


def simple_module(ctx: KernelContext, lam: Weight) -> WeightedModule:
    """Head of the highest-weight module, via the contravariant radical."""
    lam = tuple(lam)
    restricted_bound = ctx.ell * (ctx.p ** ctx.r if ctx.r else 1)
    if any(not (0 <= lam[j] < restricted_bound) for j in range(ctx.rank)):
        raise ValueError(f"simple({lam}) needs a restricted weight")
    vm = verma_module(ctx, lam)
    rad_rows: List[Vec] = []
    for wlam, (idxs, gram) in sorted(contravariant_gram(vm, lam).items()):
        size = len(idxs)
        cols = [(t, {s: gram[s][t] for s in range(size) if gram[s][t]}) for t in range(size)]
        for rel in kernel_basis(cols, one=ctx.field.one):
            rad_rows.append({idxs[t]: c for t, c in rel.items() if c})
    elim = Eliminator()
    hom_rows = []
    for row in rad_rows:
        red = elim.reduce(row)
        if red and elim.add(red) is not None:
            hom_rows.append(red)
    rows = sorted(elim.pivots.values(), key=lambda r: min(r))
    simple = quotient_module(vm, rows, f"simple({_lam_str(lam)})")
    _certify_simple(simple, lam)
    # restricted simple heads restrict from the full quantized algebra
    simple.flags = frozenset(simple.flags | {"big"})
    return simple


def _certify_simple(m: WeightedModule, lam: Weight) -> None:
    top = [i for i, w in enumerate(m.weights) if w == tuple(lam)]
    if len(top) != 1:
        raise ModuleCheckError(f"{m.label}: highest weight line has dim {len(top)}")
    full_dim = m.dim
    for i in range(m.dim):
        rows = cyclic_span(m, [{i: m.ctx.field.one}])
        if len(rows) != full_dim:
            raise ModuleCheckError(f"{m.label}: basis vector {i} fails to generate")


# --------------------------------------------------------------------------
# module spec DSL


@dataclass(frozen=True)
class ModuleSpec:
    head: str
    lam: Optional[Tuple[int, ...]] = None
    args: Tuple["ModuleSpec", ...] = ()
    seed: Optional[int] = None

    def __str__(self) -> str:
        if self.head in ("trivial",):
            return "trivial"
        if self.head in ("onedim", "verma", "coverma", "simple"):
            return f"{self.head}({_lam_str(self.lam)})"
        if self.head == "dual":
            return f"dual({self.args[0]})"
        if self.head in ("tensor", "sum"):
            return f"{self.head}({self.args[0]},{self.args[1]})"
        if self.head == "twist":
            return f"twist({self.args[0]},{_lam_str(self.lam)})"
        if self.head in ("randsub", "quot"):
            return f"{self.head}({self.args[0]},{self.seed})"
        raise ValueError(self.head)


def _lam_str(lam) -> str:
    return ",".join(str(x) for x in lam)


class SpecSyntaxError(ValueError):
    pass


def parse_module_spec(text: str, rank: int) -> ModuleSpec:
    pos = 0
    s = text.replace(" ", "")

    def fail(msg):
        raise SpecSyntaxError(f"{msg} at position {pos} in {text!r}")

    def parse_int():
        nonlocal pos
        start = pos
        if pos < len(s) and s[pos] == "-":
            pos += 1
        while pos < len(s) and s[pos].isdigit():
            pos += 1
        if start == pos:
            fail("expected integer")
        return int(s[start:pos])

    def expect(ch):
        nonlocal pos
        if pos >= len(s) or s[pos] != ch:
            fail(f"expected {ch!r}")
        pos += 1

    def parse_lam():
        out = [parse_int()]
        while pos < len(s) and s[pos] == ",":
            if not (pos + 1 < len(s) and (s[pos + 1].isdigit() or s[pos + 1] == "-")):
                break
            expect(",")
            out.append(parse_int())
        if len(out) != rank:
            fail(f"weight needs {rank} coordinates")
        return tuple(out)

    def parse_spec():
        nonlocal pos
        start = pos
        while pos < len(s) and s[pos].isalpha():
            pos += 1
        head = s[start:pos]
        if head == "trivial":
            return ModuleSpec("trivial")
        if head in ("onedim", "verma", "coverma", "simple"):
            expect("(")
            lam = parse_lam()
            expect(")")
            return ModuleSpec(head, lam=lam)
        if head == "dual":
            expect("(")
            inner = parse_spec()
            expect(")")
            return ModuleSpec(head, args=(inner,))
        if head in ("tensor", "sum"):
            expect("(")
            a = parse_spec()
            expect(",")
            b = parse_spec()
            expect(")")
            return ModuleSpec(head, args=(a, b))
        if head == "twist":
            expect("(")
            a = parse_spec()
            expect(",")
            lam = parse_lam()
            expect(")")
            return ModuleSpec(head, lam=lam, args=(a,))
        if head in ("randsub", "quot"):
            expect("(")
            a = parse_spec()
            expect(",")
            seed = parse_int()
            expect(")")
            return ModuleSpec(head, args=(a,), seed=seed)
        fail(f"unknown constructor {head!r}")

    out = parse_spec()
    if pos != len(s):
        fail("trailing input")
    return out


def realize(ctx: KernelContext, spec: ModuleSpec) -> WeightedModule:
    if spec.head == "trivial":
        return trivial_module(ctx)
    if spec.head == "onedim":
        return onedim_module(ctx, spec.lam)
    if spec.head == "verma":
        return verma_module(ctx, spec.lam)
    if spec.head == "coverma":
        return coverma_module(ctx, spec.lam)
    if spec.head == "simple":
        return simple_module(ctx, spec.lam)
    if spec.head == "dual":
        return dual_module(realize(ctx, spec.args[0]))
    if spec.head == "tensor":
        return tensor_module(realize(ctx, spec.args[0]), realize(ctx, spec.args[1]))
    if spec.head == "sum":
        return sum_module(realize(ctx, spec.args[0]), realize(ctx, spec.args[1]))
    if spec.head == "twist":
        return twist_module(realize(ctx, spec.args[0]), spec.lam)
    if spec.head == "randsub":
        return randsub_module(realize(ctx, spec.args[0]), spec.seed)
    if spec.head == "quot":
        return quot_module(realize(ctx, spec.args[0]), spec.seed)
    raise ValueError(spec.head)


def realize_text(ctx: KernelContext, text: str) -> WeightedModule:
    return realize(ctx, parse_module_spec(text, ctx.rank))


# --------------------------------------------------------------------------
# characters and structural tests


def character_of(m: WeightedModule) -> Counter:
    return m.character()


def verma_character_test(m: WeightedModule) -> bool:
    """char(M) lies in the N-span of highest-weight-module characters.

    Greedy peeling from the top: the base character is unitriangular with
    highest term the top weight, so feasibility has a unique candidate.
    """
    ctx = m.ctx
    base = verma_module(ctx, (0,) * ctx.rank).character()
    two_rho = [0] * ctx.rank
    for g in ctx.order.gammas:
        for t in range(ctx.rank):
            two_rho[t] += g[t]

    def height(lam: Weight):
        return (ctx.datum.pair_weight_root(lam, tuple(two_rho)), lam)

    rem = Counter(m.character())
    while rem:
        lam = max(rem, key=height)
        mult = rem[lam]
        if mult <= 0:
            return False
        for mu, k in base.items():
            key = tuple(a + b for a, b in zip(lam, mu))
            rem[key] -= mult * k
            if rem[key] == 0:
                del rem[key]
            elif rem[key] < 0:
                return False
    return True


def socle_over_unipotent(m: WeightedModule) -> List[Vec]:
    """Joint kernel of the negative generators (socle over the F side)."""
    ctx = m.ctx
    cols = []
    gens = [g for g in m.generator_kinds() if g[0].startswith("F")]
    for i in range(m.dim):
        col: Vec = {}
        for g in gens:
            for row, c in m.act_gen(g, {i: ctx.field.one}).items():
                col[(g, row)] = c
        cols.append((i, col))
    return kernel_basis(cols, one=ctx.field.one)


def head_over_unipotent(m: WeightedModule) -> List[Weight]:
    """Weights of M / (sum of F-generator images)."""
    ctx = m.ctx
    elim = Eliminator()
    gens = [g for g in m.generator_kinds() if g[0].startswith("F")]
    for g in gens:
        for i in range(m.dim):
            img = m.act_gen(g, {i: ctx.field.one})
            if img:
                elim.add(img)
    return [m.weights[i] for i in range(m.dim) if i not in elim.pivots]


def am_weight_basis(m: WeightedModule, level: int) -> Optional[List[Vec]]:
    """Weight-vector basis of M as a free module over the m-th unipotent layer.

    Implements the peel-off argument: pick a weight vector not killed by
    the layer integral modulo the span already built, adjoin its cyclic
    span, recurse.  Returns None when M is not free over the layer.
    """
    ctx = m.ctx
    positions = list(range(level))
    top_exp = tuple(ctx.cap - 1 if s < level else 0 for s in range(ctx.n))
    layer_dim = ctx.cap ** level

    def act_integral(vec: Vec) -> Vec:
        return m.act_monomial((top_exp, (0,) * ctx.rank, (0,) * ctx.n), vec)

    elim = Eliminator()
    chosen: List[Vec] = []
    while elim.rank < m.dim:
        found = None
        for i in range(m.dim):
            if i in elim.pivots:
                continue
            cand = elim.reduce({i: ctx.field.one})
            if not cand:
                continue
            img = elim.reduce(act_integral(cand))
            if img:
                found = cand
                break
        if found is None:
            return None
        chosen.append(found)
        # adjoin the A_m-cyclic span of the found vector
        frontier = [found]
        elim.add(dict(found))
        while frontier:
            v = frontier.pop()
            for s in positions:
                w = m.act_rv("F", s, v)
                if ctx.r > 0:
                    pass
                red = elim.reduce(w)
                if red and elim.add(red) is not None:
                    frontier.append(red)
            if ctx.r > 0:
                for lev in range(ctx.r):
                    w = m.act_gen(("Fd%d" % lev, 0), v)
                    red = elim.reduce(w)
                    if red and elim.add(red) is not None:
                        frontier.append(red)
    if len(chosen) * layer_dim != m.dim:
        return None
    # final certification: monomial translates of the chosen vectors form a basis
    conf = Eliminator()
    count = 0
    for v in chosen:
        for exp in itertools.product(range(ctx.cap), repeat=level):
            full = tuple(exp[s] if s < level else 0 for s in range(ctx.n))
            w = m.act_monomial((full, (0,) * ctx.rank, (0,) * ctx.n), v)
            if conf.add(w) is not None:
                count += 1
    if count != m.dim:
        return None
    return chosen


def hom_space(a: WeightedModule, b: WeightedModule) -> List[Mat]:
    """Graded intertwiners a -> b (equivariant for all shared generators)."""
    ctx = a.ctx
    gens = sorted(set(a.generator_kinds()) & set(b.generator_kinds()))
    by_weight: Dict[Weight, List[int]] = {}
    for i, lam in enumerate(b.weights):
        by_weight.setdefault(lam, []).append(i)
    unknowns = []
    for j, lam in enumerate(a.weights):
        for i in by_weight.get(lam, ()):
            unknowns.append((i, j))
    columns = []
    for (i, j) in unknowns:
        col: Vec = {}
        # constraints rho_b(g) T - T rho_a(g) = 0, equations keyed by
        # (g, target row, source column)
        for g in gens:
            for row, c in b.act_gen(g, {i: ctx.field.one}).items():
                col[(g, row, j)] = c
            for c_src, column in a.actions.get(g, {}).items():
                c = column.get(j)
                if c:
                    key = (g, i, c_src)
                    cur = col.get(key, ctx.field.zero) - c
                    if cur:
                        col[key] = cur
                    else:
                        col.pop(key, None)
        columns.append(((i, j), col))
    rels = kernel_basis(columns, one=ctx.field.one)
    mats = []
    for rel in rels:
        mat: Mat = {}
        for (i, j), c in rel.items():
            if c:
                mat.setdefault(j, {})[i] = c
        mats.append(mat)
    return mats


def find_isomorphism(a: WeightedModule, b: WeightedModule, attempts: int = 24) -> Optional[Mat]:
    """Invertible graded intertwiner, or None."""
    if a.dim != b.dim or a.character() != b.character():
        return None
    mats = hom_space(a, b)
    if not mats:
        return None
    rng = random.Random(11)

    def invertible(mat: Mat) -> bool:
        elim = Eliminator()
        cnt = 0
        for col in mat.values():
            if elim.add(col) is not None:
                cnt += 1
        return cnt == a.dim

    for mat in mats:
        if invertible(mat):
            return mat
    one = a.ctx.field.one
    for _ in range(attempts):
        mat: Mat = {}
        for t, base in enumerate(mats):
            c = a.ctx.field.from_int(rng.randint(-3, 3))
            if not c:
                continue
            for colk, col in base.items():
                tgt = mat.setdefault(colk, {})
                for row, v in col.items():
                    cur = tgt.get(row, a.ctx.field.zero) + c * v
                    if cur:
                        tgt[row] = cur
                    else:
                        tgt.pop(row, None)
        if mat and invertible(mat):
            return mat
    return None


def zdual_check(ctx: KernelContext, lam: Weight) -> Dict[str, object]:
    """Dual of the induced/coinduced modules against the reflected weight.

    Returns which of the two constructors matches each dual through an
    explicit graded isomorphism (character equality is checked first).
    """
    lam = tuple(lam)
    period = ctx.cap - 1
    reflected = tuple(2 * period - x for x in lam)  # 2(p^r ell - 1) rho - lam
    dv = dual_module(verma_module(ctx, lam))
    dc = dual_module(coverma_module(ctx, lam))
    vm = verma_module(ctx, reflected)
    cm = coverma_module(ctx, reflected)
    report: Dict[str, object] = {"lambda": lam, "reflected": reflected}
    for name, dualmod in (("dual_verma", dv), ("dual_coverma", dc)):
        match = []
        for tname, target in (("verma", vm), ("coverma", cm)):
            if dualmod.character() == target.character() and find_isomorphism(dualmod, target) is not None:
                match.append(tname)
        report[name] = match
    return report
