"""Sparse exact linear algebra over arbitrary exact coefficient fields.

Coefficients are duck-typed: they must support +, -, *, /, unary -,
``bool`` (False iff zero) and ==.  Vectors are dicts mapping an index
(any hashable, orderable key) to a nonzero coefficient; matrices are
dicts mapping a column key to a column vector.  Everything is
deterministic: pivots are chosen by key order, never by hash order.
"""

from __future__ import annotations

from typing import Any, Dict, Hashable, Iterable, List, Optional, Tuple

Vec = Dict[Hashable, Any]
Mat = Dict[Hashable, Vec]


def vec_iadd_scaled(u: Vec, v: Vec, c) -> Vec:
    """u += c*v in place (c may be zero); returns u."""
    if not c:
        return u
    for k, x in v.items():
        y = u.get(k)
        if y is None:
            u[k] = c * x
        else:
            y = y + c * x
            if y:
                u[k] = y
            else:
                del u[k]
    return u


def vec_scale(v: Vec, c) -> Vec:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def mat_apply(m: Mat, v: Vec) -> Vec:
    """Image of vector v under the column-indexed matrix m."""
    out: Vec = {}
    for j, c in v.items():
        col = m.get(j)
        if col:
            vec_iadd_scaled(out, col, c)
    return out


def mat_mul(m: Mat, n: Mat) -> Mat:
    """Composite m∘n of column-indexed matrices."""
    return {j: col for j, ncol in n.items() if (col := mat_apply(m, ncol))}


def mat_transpose(m: Mat) -> Mat:
    out: Mat = {}
    for j, col in m.items():
        for i, x in col.items():
            out.setdefault(i, {})[j] = x
    return out


def mat_identity(keys: Iterable[Hashable], one) -> Mat:
    return {k: {k: one} for k in keys}


class Eliminator:
    """Incremental row echelon structure for span/rank/membership tests.

    Rows are reduced against stored pivot rows on insertion; each stored
    row is normalized so its pivot coefficient is one.  Pivot choice is
    the minimal key present in the reduced row, which keeps the whole
    computation deterministic.
    """

    def __init__(self):
        self.pivots: Dict[Hashable, Vec] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Vec) -> Vec:
        row = dict(row)
        # Repeatedly kill the smallest reducible key to bound fill-in.
        while row:
            hit = [k for k in row if k in self.pivots]
            if not hit:
                break
            k = min(hit)
            vec_iadd_scaled(row, self.pivots[k], -row[k])
        return row

    def add(self, row: Vec) -> Optional[Hashable]:
        """Insert a row; returns its pivot key, or None if dependent."""
        red = self.reduce(row)
        if not red:
            return None
        p = min(red.keys())
        inv = red[p]
        red = {k: x / inv for k, x in red.items()}
        # Keep stored rows fully reduced: eliminate p from older rows.
        for q, prow in self.pivots.items():
            if p in prow:
                vec_iadd_scaled(prow, red, -prow[p])
        self.pivots[p] = red
        return p

    def contains(self, row: Vec) -> bool:
        return not self.reduce(row)


class SpanSolver:
    """Express vectors in terms of a generating family, tracking coordinates.

    Feed generators with ``add(key, vec)``; afterwards ``solve(target)``
    returns {key: coeff} with sum(coeff * vec) == target, or None.
    Dependent generators never enter the stored basis.

    Invariant: every stored pivot row equals the combination of original
    generators recorded in ``_coords`` under the same pivot key.
    """

    def __init__(self):
        self.pivots: Dict[Hashable, Vec] = {}
        self._coords: Dict[Hashable, Vec] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce_tracked(self, vec: Vec, comb: Vec) -> Tuple[Vec, Vec]:
        row = dict(vec)
        comb = dict(comb)
        while row:
            hit = [k for k in row if k in self.pivots]
            if not hit:
                break
            k = min(hit)
            c = row[k]
            vec_iadd_scaled(row, self.pivots[k], -c)
            vec_iadd_scaled(comb, self._coords[k], -c)
        return row, comb

    def add(self, key: Hashable, vec: Vec) -> bool:
        """Returns True if vec enlarged the span."""
        if not vec:
            return False
        one = _one_like(vec)
        row, comb = self._reduce_tracked(vec, {key: one})
        if not row:
            return False
        p = min(row.keys())
        inv = row[p]
        row = {k: x / inv for k, x in row.items()}
        comb = {k: x / inv for k, x in comb.items()}
        for q in self.pivots:
            prow = self.pivots[q]
            if p in prow:
                c = prow[p]
                vec_iadd_scaled(prow, row, -c)
                vec_iadd_scaled(self._coords[q], comb, -c)
        self.pivots[p] = row
        self._coords[p] = comb
        return True

    def solve(self, target: Vec) -> Optional[Vec]:
        row, comb = self._reduce_tracked(target, {})
        if row:
            return None
        return {k: -x for k, x in comb.items() if x}


class LinearSystem:
    """Solve a sparse linear system by forward elimination + back substitution.

    Unknown keys must be orderable.  ``solve`` returns one solution with
    all free unknowns set to zero, or None if inconsistent.
    """

    def __init__(self):
        self.rows: List[Tuple[Vec, Any]] = []

    def add(self, coeffs: Vec, rhs) -> None:
        if coeffs or rhs:
            self.rows.append((dict(coeffs), rhs))

    def solve(self, zero) -> Optional[Vec]:
        pivots: Dict[Hashable, Tuple[Vec, Any]] = {}
        order: List[Hashable] = []
        for row, rhs in self.rows:
            row = dict(row)
            while row:
                hit = [k for k in row if k in pivots]
                if not hit:
                    break
                k = min(hit)
                prow, prhs = pivots[k]
                c = row[k]
                vec_iadd_scaled(row, prow, -c)
                rhs = rhs - c * prhs
            if not row:
                if rhs:
                    return None
                continue
            p = min(row.keys())
            inv = row[p]
            row = {k: x / inv for k, x in row.items()}
            rhs = rhs / inv
            pivots[p] = (row, rhs)
            order.append(p)
        sol: Vec = {}
        for p in reversed(order):
            prow, prhs = pivots[p]
            acc = prhs
            for k, c in prow.items():
                if k != p and k in sol:
                    acc = acc - c * sol[k]
            if acc:
                sol[p] = acc
        return sol


def kernel_basis(columns: List[Tuple[Hashable, Vec]], one=None) -> List[Vec]:
    """Basis of {c : sum_j c_j * col_j = 0} for an ordered column family.

    ``one`` is only needed to report kernel vectors hitting zero columns.
    """
    solver = SpanSolver()
    out: List[Vec] = []
    for key, col in columns:
        if not col:
            if one is None:
                raise ValueError("zero column needs an explicit unit element")
            out.append({key: one})
            continue
        sol = solver.solve(col)
        if sol is not None:
            rel = {k: -x for k, x in sol.items()}
            rel[key] = _one_like(col)
            out.append(rel)
        else:
            solver.add(key, col)
    return out


def _one_like(vec: Vec):
    x = next(iter(vec.values()))
    return x / x


def rank_of(vectors: Iterable[Vec]) -> int:
    e = Eliminator()
    for v in vectors:
        e.add(v)
    return e.rank
