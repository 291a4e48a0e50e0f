"""Exact dense linear algebra over the rationals.

Everything in this package runs on Fraction entries; no floats anywhere.
Elimination is fraction-free (Bareiss) on integer-scaled rows to keep
intermediate entries small, with reduced fractions only at output.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot make an exact rational out of {type(x).__name__}")


def frac_to_str(x: Fraction) -> str:
    return str(x)


class RationalMatrix:
    """Immutable dense matrix with Fraction entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows_of_entries):
        data = tuple(tuple(_frac(x) for x in row) for row in rows_of_entries)
        if not data:
            raise ValueError("matrix needs at least one row")
        ncols = len(data[0])
        if ncols == 0 or any(len(r) != ncols for r in data):
            raise ValueError("ragged or empty rows")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", ncols)

    def __setattr__(self, *a):
        raise AttributeError("RationalMatrix is immutable")

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        one, zero = Fraction(1), Fraction(0)
        return RationalMatrix([[one if i == j else zero for j in range(n)]
                               for i in range(n)])

    @staticmethod
    def zero(rows: int, cols: int) -> "RationalMatrix":
        z = Fraction(0)
        return RationalMatrix([[z] * cols for _ in range(rows)])

    @staticmethod
    def from_columns(columns) -> "RationalMatrix":
        cols = [tuple(c) for c in columns]
        return RationalMatrix([[cols[j][i] for j in range(len(cols))]
                               for i in range(len(cols[0]))])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def column(self, j):
        return tuple(r[j] for r in self.data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"RationalMatrix[{body}]"

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch in addition")
        return RationalMatrix([[a + b for a, b in zip(r, s)]
                               for r, s in zip(self.data, other.data)])

    def __sub__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch in subtraction")
        return RationalMatrix([[a - b for a, b in zip(r, s)]
                               for r, s in zip(self.data, other.data)])

    def __neg__(self):
        return RationalMatrix([[-a for a in r] for r in self.data])

    def scale(self, c) -> "RationalMatrix":
        c = _frac(c)
        return RationalMatrix([[c * a for a in r] for r in self.data])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        bt = tuple(zip(*other.data))  # columns of other
        return RationalMatrix([[sum(a * b for a, b in zip(row, col))
                                for col in bt] for row in self.data])

    __rmul__ = scale

    def __pow__(self, k: int):
        if not self.is_square():
            raise ValueError("powers need a square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        acc = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base if k > 1 else base
            k >>= 1
        return acc

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(list(zip(*self.data)))

    def apply(self, vec):
        """Matrix-vector product; vec is a sequence, result a tuple."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = [_frac(x) for x in vec]
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.data)

    def trace(self) -> Fraction:
        if not self.is_square():
            raise ValueError("trace needs a square matrix")
        return sum((self.data[i][i] for i in range(self.rows)), Fraction(0))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def flatten(self):
        return tuple(x for r in self.data for x in r)

    def det(self) -> Fraction:
        if not self.is_square():
            raise ValueError("determinant needs a square matrix")
        rows, scale, sign = _integerize(self.data)
        n = self.rows
        prev = 1
        rows = [list(r) for r in rows]
        for k in range(n):
            piv = None
            for i in range(k, n):
                if rows[i][k]:
                    piv = i
                    break
            if piv is None:
                return Fraction(0)
            if piv != k:
                rows[k], rows[piv] = rows[piv], rows[k]
                sign = -sign
            pk = rows[k][k]
            for i in range(k + 1, n):
                rik = rows[i][k]
                for j in range(k + 1, n):
                    rows[i][j] = (pk * rows[i][j] - rik * rows[k][j]) // prev
                rows[i][k] = 0
            prev = pk
        return Fraction(sign * rows[n - 1][n - 1]) * scale

    def inverse(self) -> "RationalMatrix":
        if not self.is_square():
            raise ValueError("inverse needs a square matrix")
        n = self.rows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)]
               for i, r in enumerate(self.data)]
        ech, pivots = _rref(aug)
        if len(pivots) < n or pivots != list(range(n)):
            raise ValueError("matrix is singular")
        return RationalMatrix([row[n:] for row in ech])

    def to_json(self):
        return [[frac_to_str(x) for x in r] for r in self.data]

    @staticmethod
    def from_json(obj) -> "RationalMatrix":
        return RationalMatrix(obj)


def _integerize(data):
    """Scale each row to integers. Returns (int rows, det scale, sign=1).

    Row i is multiplied by the lcm of its denominators; `scale` is the
    product of the inverses, so det(original) = scale * det(int rows).
    """
    out = []
    scale = Fraction(1)
    for row in data:
        m = 1
        for x in row:
            m = m * x.denominator // gcd(m, x.denominator)
        scale /= m
        out.append([int(x * m) for x in row])
    return out, scale, 1


def _rref(rows):
    """Reduced row echelon form of a list of Fraction rows (in place copy).

    Forward pass is Bareiss on integer-scaled rows; the final normalization
    reintroduces fractions only once. Returns (rref rows, pivot columns).
    """
    nr = len(rows)
    if nr == 0:
        return [], []
    nc = len(rows[0])
    work, _, _ = _integerize([[_frac(x) for x in row] for row in rows])
    prev = 1
    pivots = []
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        pk = work[r][c]
        for i in range(r + 1, nr):
            ric = work[i][c]
            for j in range(c, nc):
                work[i][j] = (pk * work[i][j] - ric * work[r][j]) // prev
        prev = pk
        pivots.append(c)
        r += 1
        if r == nr:
            break
    # back substitution to reduced form, exact fractions from here on
    ech = [[Fraction(x) for x in row] for row in work[:r]]
    for k in range(r - 1, -1, -1):
        c = pivots[k]
        pk = ech[k][c]
        ech[k] = [x / pk for x in ech[k]]
        for i in range(k):
            f = ech[i][c]
            if f:
                ech[i] = [a - f * b for a, b in zip(ech[i], ech[k])]
    ech += [[Fraction(0)] * nc for _ in range(nr - r)]
    return ech, pivots


def rank(m: RationalMatrix) -> int:
    _, pivots = _rref([list(r) for r in m.data])
    return len(pivots)


def rref_basis(vectors):
    """Canonical (RREF) basis of the span of the given coordinate vectors.

    Returns a list of tuples; deterministic for any input order.
    """
    vecs = [list(v) for v in vectors]
    if not vecs:
        return []
    ech, pivots = _rref(vecs)
    return [tuple(ech[i]) for i in range(len(pivots))]


def kernel(m: RationalMatrix):
    """Basis of the right null space, one vector per free column."""
    ech, pivots = _rref([list(r) for r in m.data])
    pivset = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -ech[k][free]
        basis.append(tuple(v))
    return basis


def solve(a: RationalMatrix, b):
    """Solve a x = b exactly.

    Returns (particular solution or None, kernel basis of a). The kernel is
    reported even when the system is inconsistent.
    """
    if len(b) != a.rows:
        raise ValueError("right-hand side length mismatch")
    aug = [list(r) + [_frac(x)] for r, x in zip(a.data, b)]
    ech, pivots = _rref(aug)
    ker = kernel(a)
    if pivots and pivots[-1] == a.cols:  # pivot in the b column
        return None, ker
    x = [Fraction(0)] * a.cols
    for k, c in enumerate(pivots):
        x[c] = ech[k][a.cols]
    return tuple(x), ker


def in_span(vectors, v) -> bool:
    """Exact membership of v in the span of `vectors`."""
    vecs = list(vectors)
    if not vecs:
        return all(x == 0 for x in v)
    m = RationalMatrix.from_columns(vecs)
    sol, _ = solve(m, v)
    return sol is not None


def span_equal(a_vectors, b_vectors) -> bool:
    return rref_basis(a_vectors) == rref_basis(b_vectors)


def intersect_kernels(mats):
    """Basis of the joint right null space of several matrices."""
    mats = list(mats)
    if not mats:
        raise ValueError("need at least one matrix")
    stacked = [list(row) for m in mats for row in m.data]
    return kernel(RationalMatrix(stacked))


class Poly:
    """Univariate polynomial over the rationals, coefficients low to high."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def zero() -> "Poly":
        return Poly([])

    @staticmethod
    def one() -> "Poly":
        return Poly([1])

    @staticmethod
    def x() -> "Poly":
        return Poly([0, 1])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([c + (b[i] if i < len(b) else 0) for i, c in enumerate(a)])

    def __sub__(self, other):
        return self + Poly([-c for c in other.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree()
        lead = other.coeffs[-1]
        q = [Fraction(0)] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i] / lead
            if c:
                q[i - d] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - d + j] -= c * b
        return Poly(q), Poly(rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ValueError("zero polynomial has no monic form")
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs])

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval_scalar(self, x) -> Fraction:
        x = _frac(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, m: RationalMatrix) -> RationalMatrix:
        if not m.is_square():
            raise ValueError("polynomial evaluation needs a square matrix")
        acc = RationalMatrix.zero(m.rows, m.cols)
        ident = RationalMatrix.identity(m.rows)
        for c in reversed(self.coeffs):
            acc = acc * m + ident.scale(c)
        return acc

    def to_json(self):
        return [frac_to_str(c) for c in self.coeffs]

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{i}" if i else f"{c}")
        return "Poly(" + " + ".join(terms) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def poly_ext_gcd(a: Poly, b: Poly):
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = Poly.one(), Poly.zero()
    t0, t1 = Poly.zero(), Poly.one()
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lead = r0.coeffs[-1]
    inv = Fraction(1) / lead
    return r0.monic(), s0 * inv, t0 * inv


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero()
    g = poly_gcd(a, b)
    return ((a * b) // g).monic()


def squarefree_part(p: Poly) -> Poly:
    """p / gcd(p, p'), monic: same roots, multiplicity one (char 0)."""
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree part")
    g = poly_gcd(p, p.derivative())
    if g.is_zero() or g.degree() == 0:
        return p.monic()
    return (p // g).monic()


def char_poly(m: RationalMatrix) -> Poly:
    """Characteristic polynomial det(xI - m) by Faddeev-LeVerrier."""
    if not m.is_square():
        raise ValueError("characteristic polynomial needs a square matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = RationalMatrix.identity(n)
    b = m
    for k in range(1, n + 1):
        c = -b.trace() / k
        coeffs[n - k] = c
        if k < n:
            b = m * (b + ident.scale(c))
    return Poly(coeffs)


def min_poly(m: RationalMatrix) -> Poly:
    """Minimal polynomial: lcm over basis vectors of local Krylov annihilators."""
    if not m.is_square():
        raise ValueError("minimal polynomial needs a square matrix")
    n = m.rows
    result = Poly.one()
    for i in range(n):
        e = tuple(Fraction(int(j == i)) for j in range(n))
        # skip if the running lcm already kills e_i
        if all(x == 0 for x in result.eval_matrix(m).apply(e)):
            continue
        krylov = [e]
        v = e
        while True:
            v = m.apply(v)
            coeff, _ = solve(RationalMatrix.from_columns(krylov), v)
            if coeff is not None:
                local = Poly(list(map(lambda c: -c, coeff)) + [1])
                result = poly_lcm(result, local)
                break
            krylov.append(v)
    return result
