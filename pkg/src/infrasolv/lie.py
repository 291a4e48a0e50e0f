"""Nilpotent matrix Lie algebras over the rationals.

A NilpotentLieAlgebra is an abstract structure-constant algebra, optionally
carrying the ambient matrices its basis came from. lie_closure builds one
from unipotent group generators: take logs, saturate under brackets, then
pick a canonical basis adapted to the lower central series (depth-1
complement first), so quotient layers are coordinate slices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .jordan import is_unipotent
from .linalg import (RationalMatrix, _frac, in_span, intersect_kernels,
                     rref_basis, solve)


def unip_log(g: RationalMatrix) -> RationalMatrix:
    """Logarithm of a unipotent matrix: finite Mercator series in (g - I)."""
    if not is_unipotent(g):
        raise ValueError("matrix is not unipotent")
    n = g.rows
    nil = g - RationalMatrix.identity(n)
    acc = RationalMatrix.zero(n, n)
    power = nil
    k = 1
    while not power.is_zero():
        acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
        power = power * nil
        k += 1
    return acc


def nilp_exp(x: RationalMatrix) -> RationalMatrix:
    """Exponential of a nilpotent matrix: finite series, exact factorials."""
    if not x.is_square():
        raise ValueError("exponential needs a square matrix")
    n = x.rows
    if not (x ** n).is_zero():
        raise ValueError("matrix is not nilpotent")
    acc = RationalMatrix.identity(n)
    power = x
    fact = 1
    k = 1
    while not power.is_zero():
        fact *= k
        acc = acc + power.scale(Fraction(1, fact))
        power = power * x
        k += 1
    return acc


def bracket(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    return a * b - b * a


@dataclass(frozen=True)
class UnipotentGroupData:
    """Generators of a unipotent matrix group in a common ambient GL_d."""

    generators: tuple
    dim_ambient: int

    def __post_init__(self):
        for i, g in enumerate(self.generators):
            if g.rows != self.dim_ambient or g.cols != self.dim_ambient:
                raise ValueError(f"generator {i} is not {self.dim_ambient}x{self.dim_ambient}")
            if not is_unipotent(g):
                raise ValueError(f"generator {i} is not unipotent")

    def to_json(self):
        return {"dim_ambient": self.dim_ambient,
                "generators": [g.to_json() for g in self.generators]}

    @staticmethod
    def from_json(obj) -> "UnipotentGroupData":
        return UnipotentGroupData(
            generators=tuple(RationalMatrix.from_json(g) for g in obj["generators"]),
            dim_ambient=obj["dim_ambient"])


class NilpotentLieAlgebra:
    """Structure-constant Lie algebra, validated nilpotent at construction.

    brackets[i][j] is the coordinate vector of [e_i, e_j]; only i < j is
    stored, antisymmetry fills the rest. `ambient` optionally holds the
    basis as concrete matrices.
    """

    __slots__ = ("dim", "labels", "brackets", "ambient", "_coord_functional")

    def __init__(self, dim, brackets, labels=None, ambient=None, validate=True):
        self.dim = dim
        self.labels = tuple(labels) if labels else tuple(f"e{i+1}" for i in range(dim))
        if len(self.labels) != dim:
            raise ValueError("label count does not match dimension")
        table = {}
        for (i, j), vec in brackets.items():
            if not (0 <= i < j < dim):
                raise ValueError(f"bracket key ({i},{j}) is not an ordered pair")
            v = tuple(_frac(x) for x in vec)
            if len(v) != dim:
                raise ValueError("bracket coefficient vector has wrong length")
            if any(v):
                table[(i, j)] = v
        self.brackets = table
        self.ambient = tuple(ambient) if ambient is not None else None
        self._coord_functional = None
        if self.ambient is not None and len(self.ambient) != dim:
            raise ValueError("ambient basis count does not match dimension")
        if validate:
            self._validate()

    def bracket_coords(self, x, y):
        """Bracket of coordinate vectors, as a coordinate vector."""
        out = [Fraction(0)] * self.dim
        for i in range(self.dim):
            xi = x[i]
            if not xi:
                continue
            for j in range(self.dim):
                yj = y[j]
                if not yj:
                    continue
                if i == j:
                    continue
                vec = self.brackets.get((i, j)) if i < j else self.brackets.get((j, i))
                if vec is None:
                    continue
                c = xi * yj if i < j else -xi * yj
                for k in range(self.dim):
                    if vec[k]:
                        out[k] += c * vec[k]
        return tuple(out)

    def basis_vector(self, i):
        return tuple(Fraction(int(j == i)) for j in range(self.dim))

    def ad_matrix(self, x) -> RationalMatrix:
        """Matrix of ad(x): y -> [x, y] in basis coordinates."""
        cols = [self.bracket_coords(x, self.basis_vector(j)) for j in range(self.dim)]
        return RationalMatrix.from_columns(cols)

    def _validate(self):
        # Jacobi on basis triples; antisymmetry is structural.
        for i in range(self.dim):
            ei = self.basis_vector(i)
            for j in range(i + 1, self.dim):
                ej = self.basis_vector(j)
                bij = self.bracket_coords(ei, ej)
                for k in range(j + 1, self.dim):
                    ek = self.basis_vector(k)
                    total = [a + b + c for a, b, c in zip(
                        self.bracket_coords(bij, ek),
                        self.bracket_coords(self.bracket_coords(ej, ek), ei),
                        self.bracket_coords(self.bracket_coords(ek, ei), ej))]
                    if any(total):
                        raise ValueError(f"Jacobi identity fails on basis triple ({i},{j},{k})")
        series = lower_central_series(self)
        if series[-1]:
            raise ValueError("algebra is not nilpotent (lower central series stabilizes nonzero)")
        if self.ambient is not None:
            flat = [m.flatten() for m in self.ambient]
            if len(rref_basis(flat)) != self.dim:
                raise ValueError("ambient basis matrices are linearly dependent")
            for i in range(self.dim):
                for j in range(i + 1, self.dim):
                    got = bracket(self.ambient[i], self.ambient[j])
                    want = self.matrix_from_coords(self.brackets.get((i, j), (0,) * self.dim))
                    if got != want:
                        raise ValueError(f"ambient brackets disagree with structure constants at ({i},{j})")

    # ambient <-> coordinates

    def matrix_from_coords(self, coords) -> RationalMatrix:
        if self.ambient is None or not self.ambient:
            raise ValueError("algebra has no ambient matrices")
        d = self.ambient[0].rows
        acc = RationalMatrix.zero(d, d)
        for c, b in zip(coords, self.ambient):
            c = _frac(c)
            if c:
                acc = acc + b.scale(c)
        return acc

    def coord_functional(self) -> RationalMatrix:
        """Left inverse L (dim x d^2) of the flattened basis: coords = L @ flat(X)."""
        if self.ambient is None:
            raise ValueError("algebra has no ambient matrices")
        if self._coord_functional is None:
            stack = RationalMatrix.from_columns([m.flatten() for m in self.ambient])
            # solve stack^T y = e_i for each i; rows of L are the y's
            st = stack.transpose()
            rows = []
            for i in range(self.dim):
                e = [Fraction(int(j == i)) for j in range(self.dim)]
                y, _ = solve(st, e)
                if y is None:
                    raise ValueError("ambient basis is degenerate")
                rows.append(y)
            self._coord_functional = RationalMatrix(rows)
        return self._coord_functional

    def coords_of_matrix(self, x: RationalMatrix):
        """Coordinates of an ambient matrix known to lie in the span."""
        coords = self.coord_functional().apply(x.flatten())
        if self.matrix_from_coords(coords) != x:
            raise ValueError("matrix does not lie in the span of the algebra")
        return coords

    def contains_matrix(self, x: RationalMatrix) -> bool:
        if self.ambient is None:
            raise ValueError("algebra has no ambient matrices")
        return in_span([m.flatten() for m in self.ambient], x.flatten())

    def nilpotency_class(self) -> int:
        return max(len(lower_central_series(self)) - 1, 1)

    def to_json(self):
        out = {"dim": self.dim, "labels": list(self.labels),
               "brackets": [[i, j, [str(c) for c in vec]]
                            for (i, j), vec in sorted(self.brackets.items())]}
        if self.ambient is not None:
            out["ambient"] = [m.to_json() for m in self.ambient]
        return out

    @staticmethod
    def from_json(obj) -> "NilpotentLieAlgebra":
        brackets = {(i, j): tuple(_frac(c) for c in vec) for i, j, vec in obj["brackets"]}
        ambient = None
        if obj.get("ambient") is not None:
            ambient = [RationalMatrix.from_json(m) for m in obj["ambient"]]
        return NilpotentLieAlgebra(dim=obj["dim"], brackets=brackets,
                                   labels=obj.get("labels"), ambient=ambient)


def lower_central_series(algebra: NilpotentLieAlgebra):
    """Chain of coordinate subspaces L = L^1 >= [L, L^1] >= ... down to the fixed point.

    Each entry is an RREF basis (list of coordinate tuples); ends with [] exactly
    when the algebra is nilpotent.
    """
    full = [algebra.basis_vector(i) for i in range(algebra.dim)]
    chain = [rref_basis(full)]
    current = chain[0]
    while current:
        nxt = rref_basis([algebra.bracket_coords(u, v) for u in full for v in current])
        if nxt == current:
            chain.append(current)  # stabilized nonzero: not nilpotent
            return chain
        chain.append(nxt)
        current = nxt
    return chain


def center(algebra: NilpotentLieAlgebra):
    """RREF basis of the center: joint kernel of all ad(e_i)."""
    if algebra.dim == 0:
        return []
    ads = [algebra.ad_matrix(algebra.basis_vector(i)) for i in range(algebra.dim)]
    return rref_basis(intersect_kernels(ads))


def _complement_in(sub, whole):
    """Vectors extending an RREF basis of `sub` to one of `whole` (RREF order)."""
    out = []
    current = list(sub)
    for v in whole:
        if not in_span(current, v):
            out.append(v)
            current.append(v)
    return out


def lie_closure(data: UnipotentGroupData) -> NilpotentLieAlgebra:
    """Smallest matrix Lie algebra containing the logs of the generators.

    Saturates the span under brackets (at most dim_ambient^2 rounds since the
    span strictly grows), then rejects non-nilpotent results: that happens
    exactly when the generated group is not unipotent as a group, e.g. the
    two elementary 2x2 unipotents generating a dense subgroup of SL_2.
    """
    d = data.dim_ambient
    logs = [unip_log(g) for g in data.generators]
    span = rref_basis([m.flatten() for m in logs if not m.is_zero()])
    if not span:
        return NilpotentLieAlgebra(dim=0, brackets={}, ambient=[])
    mats = [_unflatten(v, d) for v in span]
    frontier = list(mats)
    while frontier:
        new = []
        for a in mats:
            for b in frontier:
                c = bracket(a, b)
                if not c.is_zero() and not in_span(span, c.flatten()):
                    span = rref_basis(span + [c.flatten()])
                    new.append(c)
        # refresh matrices from the canonical span so later solves stay small
        mats = [_unflatten(v, d) for v in span]
        frontier = new

    # order the canonical basis adapted to the lower central series
    basis_mats = [_unflatten(v, d) for v in span]
    raw = _structure_algebra(basis_mats, validate=False)
    chain = lower_central_series(raw)
    if chain[-1]:
        raise ValueError("generated group is not unipotent: bracket closure is not nilpotent")
    ordered_coords = []
    for depth in range(len(chain) - 1):
        ordered_coords.extend(_complement_in(chain[depth + 1], chain[depth]))
    adapted = [raw.matrix_from_coords(v) for v in ordered_coords]
    return _structure_algebra(adapted, validate=True)


def _unflatten(vec, d) -> RationalMatrix:
    return RationalMatrix([vec[i * d:(i + 1) * d] for i in range(d)])


def _structure_algebra(basis_mats, validate=True) -> NilpotentLieAlgebra:
    """Structure constants of a list of independent matrices closed under bracket."""
    n = len(basis_mats)
    stack = RationalMatrix.from_columns([m.flatten() for m in basis_mats])
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            c = bracket(basis_mats[i], basis_mats[j])
            coords, _ = solve(stack, c.flatten())
            if coords is None:
                raise ValueError("basis is not closed under brackets")
            if any(coords):
                table[(i, j)] = coords
    return NilpotentLieAlgebra(dim=n, brackets=table, ambient=basis_mats,
                               validate=validate)
