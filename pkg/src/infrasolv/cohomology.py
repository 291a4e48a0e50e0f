"""Cohomology of a nilpotent Lie algebra and of its invariant forms.

The complex is the exterior algebra of the dual with the differential
determined on degree one by the structure constants and extended as an
antiderivation. Holonomy matrices act contragrediently; invariant Betti
numbers are computed along two independent routes and must agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .lie import NilpotentLieAlgebra
from .linalg import RationalMatrix, in_span, kernel, rank, rref_basis, solve

MAX_COMPLEX_DIM = 14


def _sort_with_sign(idx):
    """Sort a tuple of indices, tracking the permutation sign; None if repeated."""
    lst = list(idx)
    sign = 1
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(lst, lst[1:]):
        if a == b:
            return None, 0
    return tuple(lst), sign


class CEComplex:
    """Exterior complex of the dual algebra with exact rational differentials."""

    def __init__(self, algebra: NilpotentLieAlgebra, max_dim: int = MAX_COMPLEX_DIM):
        n = algebra.dim
        if n > max_dim:
            raise ValueError(
                f"complex over a {n}-dimensional algebra has 2^{n} basis forms; "
                f"raise max_dim above {max_dim} to force the computation")
        self.algebra = algebra
        self.dim = n
        self.basis = [list(combinations(range(n), k)) for k in range(n + 1)]
        self.index = [{t: i for i, t in enumerate(level)} for level in self.basis]
        # d on degree-one generators, from the structure constants
        d1 = [{} for _ in range(n)]
        for (i, j), coeffs in algebra.brackets.items():
            for m, c in enumerate(coeffs):
                if c:
                    d1[m][(i, j)] = d1[m].get((i, j), Fraction(0)) - c
        self._d1 = d1
        self.diff = [self._build_diff(k) for k in range(n)]
        for k in range(n - 1):
            if not (self.diff[k + 1] * self.diff[k]).is_zero():
                raise AssertionError("differential does not square to zero")

    def _d_basis_form(self, idx):
        """d of a basis k-form as a dict over sorted (k+1)-tuples."""
        out = {}
        for t, gen in enumerate(idx):
            rest = idx[:t] + idx[t + 1:]
            for (a, b), c in self._d1[gen].items():
                key, sign = _sort_with_sign((a, b) + rest)
                if key is None:
                    continue
                val = c * sign * (-1) ** t
                if val:
                    out[key] = out.get(key, Fraction(0)) + val
        return {k: v for k, v in out.items() if v}

    def _build_diff(self, k):
        rows = len(self.basis[k + 1])
        cols = len(self.basis[k])
        data = [[Fraction(0)] * cols for _ in range(rows)]
        for c, idx in enumerate(self.basis[k]):
            for key, val in self._d_basis_form(idx).items():
                data[self.index[k + 1][key]][c] = val
        return RationalMatrix(data)

    def betti_numbers(self):
        n = self.dim
        ranks = [rank(d) for d in self.diff]
        out = []
        for k in range(n + 1):
            b = len(self.basis[k])
            if k < n:
                b -= ranks[k]
            if k > 0:
                b -= ranks[k - 1]
            out.append(b)
        return tuple(out)

    def action_matrices(self, hol: RationalMatrix):
        """Contragredient action of hol on each exterior degree.

        Verified to commute with the differential; a matrix that is not an
        automorphism of the algebra is rejected here.
        """
        rho = hol.inverse().transpose()
        mats = []
        for k in range(self.dim + 1):
            level = self.basis[k]
            data = [[Fraction(0)] * len(level) for _ in level]
            for c, cols_idx in enumerate(level):
                for r, rows_idx in enumerate(level):
                    data[r][c] = _minor(rho, rows_idx, cols_idx)
            mats.append(RationalMatrix(data) if level else None)
        for k in range(self.dim):
            if self.diff[k] * mats[k] != mats[k + 1] * self.diff[k]:
                raise ValueError("matrix does not act on the complex "
                                 "(not an algebra automorphism)")
        return mats


def _minor(m, rows_idx, cols_idx):
    k = len(rows_idx)
    if k == 0:
        return Fraction(1)
    sub = RationalMatrix([[m[i, j] for j in cols_idx] for i in rows_idx])
    return sub.det()


def cohomology_ranks(algebra: NilpotentLieAlgebra,
                     max_dim: int = MAX_COMPLEX_DIM):
    """Betti numbers b_0..b_n of the algebra."""
    if algebra.dim == 0:
        return (1,)
    return CEComplex(algebra, max_dim=max_dim).betti_numbers()


def _fixed_space(mats, dim):
    """Basis of the joint fixed space of square matrices acting on Q^dim."""
    if dim == 0:
        return []
    deltas = [m - RationalMatrix.identity(dim) for m in mats]
    deltas = [d for d in deltas if not d.is_zero()]
    if not deltas:
        return rref_basis([tuple(Fraction(int(i == j)) for j in range(dim))
                           for i in range(dim)])
    stacked = []
    for d in deltas:
        stacked.extend(list(r) for r in d.data)
    return kernel(RationalMatrix(stacked))


def _restrict(mat, dom_basis, cod_basis, what):
    """Matrix of mat between given column-spanned subspaces; exact or raises."""
    if not dom_basis:
        return None
    if not cod_basis:
        for v in dom_basis:
            if any(mat.apply(v)):
                raise AssertionError(f"{what} does not preserve the subspace")
        return None
    cod = RationalMatrix.from_columns(cod_basis)
    cols = []
    for v in dom_basis:
        img = mat.apply(v)
        sol, _ = solve(cod, img)
        if sol is None:
            raise AssertionError(f"{what} does not preserve the subspace")
        cols.append(sol)
    return RationalMatrix.from_columns(cols)


def _quotient_fixed_dim(action_mats, z_basis, b_basis):
    """dim of the joint fixed space of the induced action on Z/B."""
    comp = []
    current = list(b_basis)
    for v in z_basis:
        if not in_span(current, v):
            comp.append(v)
            current.append(v)
    if not comp:
        return 0
    full = RationalMatrix.from_columns(list(b_basis) + comp)
    nb = len(b_basis)
    induced = []
    for mat in action_mats:
        cols = []
        for v in comp:
            sol, _ = solve(full, mat.apply(v))
            if sol is None:
                raise AssertionError("action does not preserve the cocycles")
            cols.append(sol[nb:])
        induced.append(RationalMatrix.from_columns(cols))
    fixed = _fixed_space(induced, len(comp))
    return len(fixed)


def invariant_cohomology_ranks(algebra: NilpotentLieAlgebra, hols,
                               max_dim: int = MAX_COMPLEX_DIM):
    """Betti numbers of the holonomy-invariant subcomplex.

    Computed twice: once as the cohomology of the invariant forms, once as
    the fixed part of the full cohomology. Semisimple holonomy makes these
    agree; disagreement raises rather than returning either answer.
    """
    hols = list(hols)
    if algebra.dim == 0:
        return (1,)
    if not hols:
        return cohomology_ranks(algebra, max_dim=max_dim)
    cx = CEComplex(algebra, max_dim=max_dim)
    actions = [cx.action_matrices(h) for h in hols]
    n = cx.dim

    # route one: restrict the differential to invariant forms
    inv_bases = []
    for k in range(n + 1):
        dim_k = len(cx.basis[k])
        inv_bases.append(_fixed_space([a[k] for a in actions], dim_k))
    restricted = [_restrict(cx.diff[k], inv_bases[k], inv_bases[k + 1],
                            "differential") for k in range(n)]
    route_one = []
    for k in range(n + 1):
        b = len(inv_bases[k])
        if k < n and restricted[k] is not None:
            b -= rank(restricted[k])
        if k > 0 and restricted[k - 1] is not None:
            b -= rank(restricted[k - 1])
        route_one.append(b)

    # route two: fixed part of the full cohomology
    route_two = []
    for k in range(n + 1):
        dim_k = len(cx.basis[k])
        if k < n:
            z_basis = kernel_of(cx.diff[k], dim_k)
        else:
            z_basis = rref_basis([tuple(Fraction(int(i == j))
                                        for j in range(dim_k))
                                  for i in range(dim_k)])
        if k > 0:
            b_basis = rref_basis([cx.diff[k - 1].column(c)
                                  for c in range(cx.diff[k - 1].cols)])
            b_basis = [v for v in b_basis if any(v)]
        else:
            b_basis = []
        route_two.append(_quotient_fixed_dim([a[k] for a in actions],
                                             z_basis, b_basis))

    if tuple(route_one) != tuple(route_two):
        raise AssertionError(
            f"invariant cohomology routes disagree: {route_one} vs {route_two}")
    return tuple(route_one)


def kernel_of(mat, dim):
    if mat.is_zero():
        return rref_basis([tuple(Fraction(int(i == j)) for j in range(dim))
                           for i in range(dim)])
    return kernel(mat)


def euler_characteristic(ranks) -> int:
    return sum((-1) ** k * b for k, b in enumerate(ranks))


@dataclass(frozen=True)
class DualityReport:
    orientable: bool
    duality_ok: bool
    ranks: tuple

    def to_json(self):
        return {"orientable": self.orientable, "duality_ok": self.duality_ok,
                "ranks": list(self.ranks)}


def duality_report(algebra: NilpotentLieAlgebra, hols,
                   max_dim: int = MAX_COMPLEX_DIM) -> DualityReport:
    """Top-degree orientability and, when it applies, Poincare duality.

    The holonomy action preserves orientation iff every matrix has
    determinant one; in that case the invariant Betti numbers must be
    palindromic. Without orientability the symmetry is not expected and
    duality_ok stays vacuously true.
    """
    hols = list(hols)
    ranks = invariant_cohomology_ranks(algebra, hols, max_dim=max_dim)
    orientable = all(h.det() == 1 for h in hols)
    ok = (not orientable) or all(ranks[k] == ranks[len(ranks) - 1 - k]
                                 for k in range(len(ranks)))
    return DualityReport(orientable=orientable, duality_ok=ok, ranks=ranks)
