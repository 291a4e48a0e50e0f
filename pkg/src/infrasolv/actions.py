"""Concrete group actions on a simply connected nilpotent group U.

Elements act in exponential coordinates of the first kind: the affine pair
(g, phi) sends exp(X) to g * phi(exp X), i.e. a point p in u-coordinates to
log(g * exp(phi p)). Group multiplication always happens on the ambient
matrices; phi is carried as its differential, a Lie algebra automorphism in
basis coordinates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .jordan import is_unipotent
from .lie import (NilpotentLieAlgebra, _complement_in, center,
                  lower_central_series, nilp_exp, unip_log)
from .linalg import RationalMatrix, _frac, kernel, rank, solve
from .polynomial import MPoly, PolynomialMap


class FixedPointScopeError(RuntimeError):
    """Raised when the fixed-point descent leaves the affine-linear regime.

    Possible only at nilpotency class >= 3 when earlier layers keep free
    parameters that enter a deeper consistency condition nonlinearly; a
    definitive answer would need real root counting, which this package
    does not attempt.
    """


def is_lie_automorphism(algebra: NilpotentLieAlgebra, a: RationalMatrix) -> bool:
    """Exact check that a preserves the structure constants and is invertible."""
    n = algebra.dim
    if a.rows != n or a.cols != n:
        return False
    if rank(a) != n:
        return False
    images = [a.apply(algebra.basis_vector(i)) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lhs = algebra.bracket_coords(images[i], images[j])
            rhs = a.apply(algebra.brackets.get((i, j), (0,) * n))
            if lhs != tuple(rhs):
                return False
    return True


class AffineElement:
    """Pair (translation, hol): p -> log(translation * exp(hol p))."""

    __slots__ = ("algebra", "translation", "hol", "_pmap")

    def __init__(self, algebra, translation, hol, validate=True):
        self.algebra = algebra
        self.translation = translation
        self.hol = hol
        self._pmap = None
        if validate:
            if not is_unipotent(translation):
                raise ValueError("translation part is not unipotent")
            algebra.coords_of_matrix(unip_log(translation))  # raises if outside u
            if not is_lie_automorphism(algebra, hol):
                raise ValueError("holonomy part is not a Lie algebra automorphism")

    def __eq__(self, other):
        return (isinstance(other, AffineElement)
                and self.translation == other.translation
                and self.hol == other.hol)

    def __hash__(self):
        return hash((self.translation, self.hol))

    def __repr__(self):
        u = self.algebra.coords_of_matrix(unip_log(self.translation))
        return f"AffineElement(u=exp{tuple(map(str, u))}, hol={self.hol!r})"

    @staticmethod
    def identity(algebra) -> "AffineElement":
        d = algebra.ambient[0].rows
        return AffineElement(algebra, RationalMatrix.identity(d),
                             RationalMatrix.identity(algebra.dim), validate=False)

    def is_identity(self) -> bool:
        d = self.translation.rows
        return (self.translation == RationalMatrix.identity(d)
                and self.hol == RationalMatrix.identity(self.algebra.dim))

    def hol_apply_ambient(self, u: RationalMatrix) -> RationalMatrix:
        """The automorphism of U induced by hol, on an ambient element of U."""
        coords = self.algebra.coords_of_matrix(unip_log(u))
        return nilp_exp(self.algebra.matrix_from_coords(self.hol.apply(coords)))

    def compose(self, other: "AffineElement") -> "AffineElement":
        """(g, phi)(g', phi') = (g phi(g'), phi phi'): apply other first."""
        return AffineElement(self.algebra,
                             self.translation * self.hol_apply_ambient(other.translation),
                             self.hol * other.hol, validate=False)

    def inverse(self) -> "AffineElement":
        hinv = self.hol.inverse()
        inv = AffineElement(self.algebra, self.translation, hinv, validate=False)
        return AffineElement(self.algebra,
                             inv.hol_apply_ambient(self.translation.inverse()),
                             hinv, validate=False)

    def power(self, k: int) -> "AffineElement":
        if k < 0:
            return self.inverse().power(-k)
        acc = AffineElement.identity(self.algebra)
        for _ in range(k):
            acc = acc.compose(self)
        return acc

    def apply(self, point):
        """Image of a u-coordinate point, exactly."""
        alg = self.algebra
        if len(point) != alg.dim:
            raise ValueError("point has wrong dimension")
        moved = alg.matrix_from_coords(self.hol.apply([_frac(x) for x in point]))
        return alg.coords_of_matrix(unip_log(self.translation * nilp_exp(moved)))

    def as_polynomial_map(self) -> PolynomialMap:
        if self._pmap is None:
            self._pmap = _log_left_product_map(self.algebra, self.translation, self.hol)
        return self._pmap

    def to_json(self):
        return {"translation_matrix": self.translation.to_json(),
                "hol_matrix": self.hol.to_json()}


def apply_affine(a: AffineElement, point):
    return a.apply(point)


# ------------------------------------------------------------------
# symbolic matrices: lists of rows of MPoly, always over the same nvars

def _pm_constant_matrix(m: RationalMatrix, nvars: int):
    return [[MPoly.constant(nvars, x) for x in row] for row in m.data]


def _pm_mul(a, b):
    bt = list(zip(*b))
    return [[_pm_dot(row, col) for col in bt] for row in a]


def _pm_dot(row, col):
    acc = row[0] * col[0]
    for x, y in zip(row[1:], col[1:]):
        acc = acc + x * y
    return acc


def _pm_add(a, b, sign=1):
    return [[x + sign * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _pm_scale(a, c):
    return [[x * c for x in row] for row in a]


def _pm_is_zero(a):
    return all(x.is_zero() for row in a for x in row)


def _symbolic_u_element(algebra, coord_polys):
    """Sum_i coord_polys[i] * B_i as a symbolic ambient matrix."""
    d = algebra.ambient[0].rows
    nvars = coord_polys[0].nvars
    out = [[MPoly.zero(nvars) for _ in range(d)] for _ in range(d)]
    for c, b in zip(coord_polys, algebra.ambient):
        for r in range(d):
            for s in range(d):
                if b[r, s]:
                    out[r][s] = out[r][s] + c * b[r, s]
    return out


def _pm_exp(x):
    """exp of a symbolic matrix, nilpotent for every evaluation point."""
    d = len(x)
    nvars = x[0][0].nvars
    acc = _pm_constant_matrix(RationalMatrix.identity(d), nvars)
    power = x
    fact = 1
    k = 1
    while not _pm_is_zero(power):
        if k > d:
            raise ValueError("symbolic exponential did not terminate: input not nilpotent")
        fact *= k
        acc = _pm_add(acc, _pm_scale(power, Fraction(1, fact)))
        power = _pm_mul(power, x)
        k += 1
    return acc


def _pm_log(p):
    """log of a symbolic matrix, unipotent for every evaluation point."""
    d = len(p)
    nvars = p[0][0].nvars
    n = _pm_add(p, _pm_constant_matrix(RationalMatrix.identity(d), nvars), sign=-1)
    acc = [[MPoly.zero(nvars) for _ in range(d)] for _ in range(d)]
    power = n
    k = 1
    while not _pm_is_zero(power):
        if k > d:
            raise ValueError("symbolic logarithm did not terminate: input not unipotent")
        acc = _pm_add(acc, _pm_scale(power, Fraction((-1) ** (k + 1), k)))
        power = _pm_mul(power, n)
        k += 1
    return acc


def _pm_coords(algebra, sym):
    """Coordinates of a symbolic matrix known to lie in u, via the left inverse."""
    lf = algebra.coord_functional()
    flat = [x for row in sym for x in row]
    nvars = flat[0].nvars
    comps = []
    for i in range(algebra.dim):
        acc = MPoly.zero(nvars)
        for t, x in enumerate(flat):
            c = lf[i, t]
            if c and not x.is_zero():
                acc = acc + x * c
        comps.append(acc)
    # the functional is only a left inverse: check the residual vanishes
    rebuilt = _symbolic_u_element(algebra, comps)
    if not _pm_is_zero(_pm_add(sym, rebuilt, sign=-1)):
        raise ValueError("symbolic matrix does not lie in the algebra span")
    return comps


def _log_left_product_map(algebra, left: RationalMatrix, hol: RationalMatrix) -> PolynomialMap:
    """x -> log(left * exp(hol x)) as an exact polynomial map."""
    n = algebra.dim
    xs = [MPoly.variable(n, i) for i in range(n)]
    moved = []
    for i in range(n):
        acc = MPoly.zero(n)
        for j in range(n):
            c = hol[i, j]
            if c:
                acc = acc + xs[j] * c
        moved.append(acc)
    inner = _pm_exp(_symbolic_u_element(algebra, moved))
    prod = _pm_mul(_pm_constant_matrix(left, n), inner)
    return PolynomialMap(_pm_coords(algebra, _pm_log(prod)))


def right_translation_map(algebra, v: RationalMatrix) -> PolynomialMap:
    """R_v: x -> log(exp(x) * v) as an exact polynomial map."""
    algebra.coords_of_matrix(unip_log(v))  # v must lie in U
    n = algebra.dim
    xs = [MPoly.variable(n, i) for i in range(n)]
    inner = _pm_exp(_symbolic_u_element(algebra, xs))
    prod = _pm_mul(inner, _pm_constant_matrix(v, n))
    return PolynomialMap(_pm_coords(algebra, _pm_log(prod)))


# ------------------------------------------------------------------
# group data and words

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?$")


def parse_word(s: str):
    """'a b^-1 c^2' -> [('a', 1), ('b', -1), ('c', 2)]."""
    out = []
    for tok in s.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        out.append((m.group(1), int(m.group(2)) if m.group(2) else 1))
    return out


class GammaActionData:
    """Finitely generated group acting affinely on U, given by decomposed generators."""

    __slots__ = ("algebra", "generators", "relators", "hirsch_rank", "fitting_labels")

    def __init__(self, algebra, generators, relators=(), hirsch_rank=None,
                 fitting_labels=(), validate=True):
        self.algebra = algebra
        self.generators = dict(generators)
        self.relators = tuple(relators)
        self.hirsch_rank = algebra.dim if hirsch_rank is None else hirsch_rank
        self.fitting_labels = tuple(fitting_labels)
        if validate:
            self.validate()

    def validate(self):
        for name in self.fitting_labels:
            if name not in self.generators:
                raise ValueError(f"fitting label {name!r} is not a generator name")
        for name, g in self.generators.items():
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise ValueError(f"bad generator name {name!r}")
            if g.algebra is not self.algebra:
                raise ValueError(f"generator {name!r} built on a different algebra")
        for rel in self.relators:
            if not self.evaluate_word(rel).is_identity():
                raise ValueError(f"relator {rel!r} does not evaluate to the identity")

    def evaluate_word(self, word) -> AffineElement:
        if isinstance(word, str):
            word = parse_word(word)
        acc = AffineElement.identity(self.algebra)
        for name, k in word:
            if name not in self.generators:
                raise ValueError(f"unknown generator {name!r}")
            acc = acc.compose(self.generators[name].power(k))
        return acc

    def enumerate_ball(self, radius: int):
        """BFS over reduced words; yields (word string, element) once per element.

        Deduplication by element is sound for coverage: anything reachable from
        a repeated element is reachable from its first occurrence at smaller
        or equal total length.
        """
        letters = []
        for name, g in self.generators.items():
            letters.append((name, 1, g))
            letters.append((name, -1, g.inverse()))
        ident = AffineElement.identity(self.algebra)
        seen = {ident: ""}
        yield "", ident
        frontier = [((), ident)]
        for _ in range(radius):
            nxt = []
            for word, elem in frontier:
                for name, sgn, gel in letters:
                    if word and word[-1][0] == name and word[-1][1] == -sgn:
                        continue  # free reduction
                    new_word = word + ((name, sgn),)
                    new_elem = elem.compose(gel)
                    if new_elem in seen:
                        continue
                    ws = " ".join(n if s == 1 else f"{n}^-1" for n, s in new_word)
                    seen[new_elem] = ws
                    yield ws, new_elem
                    nxt.append((new_word, new_elem))
            frontier = nxt

    def to_json(self):
        return {"generators": [{"name": n,
                                "translation_matrix": g.translation.to_json(),
                                "hol_matrix": g.hol.to_json()}
                               for n, g in self.generators.items()],
                "relators": list(self.relators),
                "hirsch_rank": self.hirsch_rank,
                "fitting_labels": list(self.fitting_labels)}

    @staticmethod
    def from_json(algebra, obj, validate=True) -> "GammaActionData":
        gens = {}
        for g in obj["generators"]:
            gens[g["name"]] = AffineElement(
                algebra,
                RationalMatrix.from_json(g["translation_matrix"]),
                RationalMatrix.from_json(g["hol_matrix"]),
                validate=validate)
        return GammaActionData(algebra, gens,
                               relators=obj.get("relators", ()),
                               hirsch_rank=obj.get("hirsch_rank"),
                               fitting_labels=obj.get("fitting_labels", ()),
                               validate=validate)


def emit_polynomial_action(gdata: GammaActionData):
    """Exact polynomial maps for every generator and its inverse."""
    out = {}
    for name, g in gdata.generators.items():
        out[name] = g.as_polynomial_map()
        out[name + "^-1"] = g.inverse().as_polynomial_map()
    return out


def action_degree_bound(algebra: NilpotentLieAlgebra) -> int:
    """Emitted degrees never exceed the nilpotency class of u."""
    return algebra.nilpotency_class()


# ------------------------------------------------------------------
# fixed points by descent along the lower central series

def _adapted_coordinates(algebra):
    """Basis adapted to the lower central series, with each vector's depth."""
    chain = lower_central_series(algebra)
    adapted, depth_of = [], []
    for d in range(len(chain) - 1):
        comp = _complement_in(chain[d + 1], chain[d])
        adapted.extend(comp)
        depth_of.extend([d] * len(comp))
    return adapted, depth_of


def _pad(poly: MPoly, nvars: int) -> MPoly:
    if poly.nvars == nvars:
        return poly
    return MPoly(nvars, {e + (0,) * (nvars - poly.nvars): c
                         for e, c in poly.terms.items()})


def fixed_point_solve(a: AffineElement):
    """A rational fixed point of the affine map, or None if none exists over R.

    Descends the lower central series: in coordinates adapted to the
    filtration, the depth-k block of the fixed-point equation is linear in
    depth-k coordinates with a constant matrix (brackets strictly increase
    depth), and its right-hand side is polynomial in the free parameters
    kept from shallower layers. Consistency rows that touch parameters
    affinely shrink the parameter space exactly; absence answers are rank
    conditions, hence valid over R as well as Q.
    """
    alg = a.algebra
    n = alg.dim
    if n == 0:
        return ()
    fmap = a.as_polynomial_map()
    adapted, depth_of = _adapted_coordinates(alg)
    w = RationalMatrix.from_columns(adapted)
    winv = w.inverse()
    xs = [MPoly.variable(n, i) for i in range(n)]
    wy = [sum((xs[k] * w[j, k] for k in range(n)), MPoly.zero(n)) for j in range(n)]
    fwy = [c.substitute(wy) for c in fmap.components]
    g = []
    for i in range(n):
        acc = -xs[i]
        for j in range(n):
            c = winv[i, j]
            if c:
                acc = acc + fwy[j] * c
        g.append(acc)

    for i in range(n):  # the depth argument, checked
        for exps in g[i].terms:
            for j, e in enumerate(exps):
                if e and depth_of[j] > depth_of[i]:
                    raise AssertionError("depth filtration violated in descent")

    max_depth = max(depth_of) if depth_of else 0
    templ: list = [None] * n  # per adapted coordinate, MPoly in current params
    nparams = 0
    for d in range(max_depth + 1):
        idx = [i for i in range(n) if depth_of[i] == d]
        m = len(idx)
        total = nparams + m
        repl = []
        for j in range(n):
            if depth_of[j] < d:
                repl.append(_pad(templ[j], total))
            elif j in idx:
                repl.append(MPoly.variable(total, nparams + idx.index(j)))
            else:
                repl.append(MPoly.zero(total))
        rows, rhs = [], []
        for i in idx:
            eq = g[i].substitute(repl)
            coeff = [Fraction(0)] * m
            param_part = {}
            for exps, c in eq.terms.items():
                upart = exps[nparams:]
                if any(upart):
                    if sum(upart) != 1 or any(exps[:nparams]):
                        raise AssertionError("descent equations not linear in layer unknowns")
                    coeff[upart.index(1)] += c
                else:
                    param_part[exps[:nparams]] = c
            rows.append(coeff)
            rhs.append(-MPoly(nparams, param_part))

        # eliminate: full RREF on the coefficient matrix, symbolic RHS
        pivots = []
        r = 0
        for c in range(m):
            piv = next((i for i in range(r, m) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            rhs[r], rhs[piv] = rhs[piv], rhs[r]
            pv = rows[r][c]
            rows[r] = [x / pv for x in rows[r]]
            rhs[r] = rhs[r] * Fraction(1, pv)
            for i in range(m):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                    rhs[i] = rhs[i] - rhs[r] * f
            pivots.append(c)
            r += 1

        constraints = []
        for i in range(r, m):
            resid = rhs[i]
            if resid.is_zero():
                continue
            if resid.degree() == 0:
                return None  # 0 = nonzero constant: no fixed point over any field
            if resid.degree() == 1:
                constraints.append(resid)
            else:
                raise FixedPointScopeError(
                    "consistency condition of degree "
                    f"{resid.degree()} in layer parameters (nilpotency class >= 3)")

        if constraints:
            cm = []
            cb = []
            for con in constraints:
                const, lin, _ = con.linear_decomposition()
                cm.append(lin)
                cb.append(-const)
            sol, ker = solve(RationalMatrix(cm), cb)
            if sol is None:
                return None
            newp = len(ker)
            subst = []
            for j in range(nparams):
                p = MPoly.constant(newp, sol[j])
                for t, kv in enumerate(ker):
                    if kv[j]:
                        p = p + MPoly.variable(newp, t) * kv[j]
                subst.append(p)
            for j in range(n):
                if templ[j] is not None:
                    templ[j] = templ[j].substitute(subst) if nparams else _pad(templ[j], newp)
            rhs = [(p.substitute(subst) if nparams else _pad(p, newp)) for p in rhs]
            nparams = newp

        free = [c for c in range(m) if c not in pivots]
        total = nparams + len(free)
        for t, c in enumerate(free):
            templ[idx[c]] = MPoly.variable(total, nparams + t)
        for rr, c in enumerate(pivots):
            expr = _pad(rhs[rr], total)
            for t, fc in enumerate(free):
                f = rows[rr][fc]
                if f:
                    expr = expr - MPoly.variable(total, nparams + t) * f
            templ[idx[c]] = expr
        for j in range(n):
            if templ[j] is not None:
                templ[j] = _pad(templ[j], total)
        nparams = total

    zeros = (Fraction(0),) * nparams
    y = [templ[i].eval(zeros) for i in range(n)]
    point = w.apply(y)
    if a.apply(point) != point:
        raise AssertionError("descent produced a non-fixed point")
    return point


@dataclass(frozen=True)
class FreenessResult:
    free: bool
    radius: int
    witness_word: Optional[str] = None
    witness_point: Optional[tuple] = None


def freeness_check(gdata: GammaActionData, radius: int = 6) -> FreenessResult:
    """Search reduced words up to `radius` for a non-identity element with a fixed point.

    A True answer is radius-bounded evidence, not a proof; a False answer
    carries an exact witness (word, fixed point).
    """
    for word, elem in gdata.enumerate_ball(radius):
        if elem.is_identity():
            continue
        p = fixed_point_solve(elem)
        if p is not None:
            return FreenessResult(free=False, radius=radius,
                                  witness_word=word, witness_point=p)
    return FreenessResult(free=True, radius=radius)


def orbit_sample(gdata: GammaActionData, radius: int, box=None):
    """Orbit of the origin under words up to `radius`, optionally boxed.

    box: list of (lo, hi) rational pairs per coordinate, inclusive. Output
    sorted lexicographically, so identical inputs give identical lists.
    """
    origin = (Fraction(0),) * gdata.algebra.dim
    pts = {origin}
    if gdata.generators:
        for _, elem in gdata.enumerate_ball(radius):
            pts.add(elem.apply(origin))
    if box is not None:
        box = [(_frac(lo), _frac(hi)) for lo, hi in box]
        if len(box) != gdata.algebra.dim:
            raise ValueError("box must give one (lo, hi) pair per coordinate")
        pts = {p for p in pts
               if all(lo <= x <= hi for x, (lo, hi) in zip(p, box))}
    return sorted(pts)


def torus_rank(gdata: GammaActionData, hull) -> int:
    """Dimension of the subspace of center(u) fixed by every T-generator.

    This is the Lie algebra of the closure of the central translations, the
    maximal torus that acts on the quotient.
    """
    alg = hull.algebra
    if gdata.algebra is not alg and gdata.algebra.dim != alg.dim:
        raise ValueError("group and hull algebras disagree")
    cent = center(alg)
    if not cent:
        return 0
    if not hull.hol_matrices:
        return len(cent)
    cmat = RationalMatrix.from_columns(cent)
    stacked = []
    for a in hull.hol_matrices:
        diff = a * cmat - cmat
        stacked.extend(list(r) for r in diff.data)
    return len(kernel(RationalMatrix(stacked)))
