"""Exact convex geometry over the integer lattice.

Everything here works with tuples of Python ints and ``Fraction``; there is
no floating point.  Polytopes are immutable: the hull, facets and volume are
computed once when a :class:`LatticePolytope` is built.

Volumes are lattice-normalized, so the standard simplex has volume 1 and a
full-dimensional polytope ``P`` in ``Z^n`` has ``n! * vol(P)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, gcd
from typing import Iterable, Sequence

Point = tuple


class DimensionMismatch(ValueError):
    pass


class NotParallelError(ValueError):
    pass


def primitive(vector):
    """Divide by the positive gcd of the entries, keeping signs."""
    g = 0
    for x in vector:
        g = gcd(g, x)
    if g <= 1:
        return tuple(vector)
    return tuple(x // g for x in vector)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


# ---------------------------------------------------------------------------
# integer and rational linear algebra

def bareiss_det(matrix):
    """Determinant of a square integer matrix (fraction-free elimination)."""
    m = [list(row) for row in matrix]
    size = len(m)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for r in range(k + 1, size):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def row_echelon(rows):
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(vectors):
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return 0
    return len(row_echelon(vectors)[1])


def rational_nullspace(rows, ncols):
    """Integer vectors spanning {x : rows . x = 0} over Q (not a lattice basis)."""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    echelon, pivots = row_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, p in zip(echelon, pivots):
            vec[p] = -row[f]
        denom = 1
        for x in vec:
            denom = denom * x.denominator // gcd(denom, x.denominator)
        basis.append(primitive([int(x * denom) for x in vec]))
    return basis


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_normal_form(rows):
    """Row-style Hermite normal form of an integer matrix, zero rows dropped.

    Pivots are positive and entries above a pivot are reduced into
    ``[0, pivot)``.  The row lattice is unchanged.
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        # gcd-combine column c over rows r.. into row r
        for i in range(r + 1, len(m)):
            if m[i][c] == 0:
                continue
            a, b = m[r][c], m[i][c]
            g, x, y = _xgcd(a, b)
            ua, ub = a // g, b // g
            row_r = [x * p + y * q for p, q in zip(m[r], m[i])]
            row_i = [-ub * p + ua * q for p, q in zip(m[r], m[i])]
            m[r], m[i] = row_r, row_i
        if m[r][c] == 0:
            nz = next((i for i in range(r + 1, len(m)) if m[i][c] != 0), None)
            if nz is None:
                continue
            m[r], m[nz] = m[nz], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        piv = m[r][c]
        for i in range(r):
            q = m[i][c] // piv
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
        r += 1
    return [tuple(row) for row in m[:r] if any(row)]


def integer_kernel(rows, ncols):
    """HNF basis of the lattice {x in Z^ncols : rows . x = 0}."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    # column operations on A, mirrored on U, bring A to column echelon form
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # u[col] is a column

    def colop(j, k, x, y, z, w):
        # (col_j, col_k) <- (x col_j + y col_k, z col_j + w col_k)
        for row in a:
            row[j], row[k] = x * row[j] + y * row[k], z * row[j] + w * row[k]
        cj, ck = u[j], u[k]
        u[j] = [x * p + y * q for p, q in zip(cj, ck)]
        u[k] = [z * p + w * q for p, q in zip(cj, ck)]

    piv = 0
    for row in a:
        if piv == ncols:
            break
        for k in range(piv + 1, ncols):
            if row[k] == 0:
                continue
            p, q = row[piv], row[k]
            g, x, y = _xgcd(p, q)
            colop(piv, k, x, y, -q // g, p // g)
        if row[piv] != 0:
            piv += 1
    kernel = [tuple(u[j]) for j in range(piv, ncols)]
    return hermite_normal_form(kernel)


class _CoordinateSolver:
    """Express lattice vectors in a fixed basis (rows)."""

    def __init__(self, basis):
        self.basis = [tuple(b) for b in basis]
        k = len(self.basis)
        n = len(self.basis[0]) if self.basis else 0
        # solve basis^T c = x via echelon form of [basis^T | I]
        self.k, self.n = k, n
        if k:
            echelon, pivots = row_echelon(self.basis)
            if len(pivots) != k:
                raise ValueError("basis vectors are linearly dependent")
            self.pivots = pivots
            # c = M x restricted to pivot columns; build inverse of the k x k minor
            minor = [[Fraction(b[p]) for p in pivots] for b in self.basis]
            self.inverse = _invert(minor)

    def coords(self, x):
        if self.k == 0:
            if any(x):
                raise NotParallelError("vector outside the sublattice")
            return ()
        sub_x = [Fraction(x[p]) for p in self.pivots]
        # x_p = sum_i c_i basis[i][p]  ->  c = sub_x * inverse
        c = [sum(sub_x[j] * self.inverse[j][i] for j in range(self.k)) for i in range(self.k)]
        recon = [sum(c[i] * self.basis[i][t] for i in range(self.k)) for t in range(self.n)]
        if any(r != v for r, v in zip(recon, x)):
            raise NotParallelError("vector outside the span of the basis")
        if any(ci.denominator != 1 for ci in c):
            raise NotParallelError("vector is not an integer combination of the basis")
        return tuple(int(ci) for ci in c)


def _invert(matrix):
    size = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(matrix)]
    echelon, pivots = row_echelon(aug)
    return [row[size:] for row in echelon]


# ---------------------------------------------------------------------------
# hull of a full-dimensional point set in Z^d

def _cofactor_normal(points):
    """Integer normal of the hyperplane through d points in Z^d."""
    base = points[0]
    diffs = [sub(p, base) for p in points[1:]]
    d = len(base)
    normal = []
    for j in range(d):
        minor = [[row[c] for c in range(d) if c != j] for row in diffs]
        normal.append((-1) ** j * bareiss_det(minor))
    return tuple(normal)


def _full_hull(points):
    """Facets, vertices and normalized volume of conv(points) spanning Z^d.

    Placing triangulation: every new point is coned over the boundary facets
    it sees strictly.  Returns ``(facets, volume)`` where facets is a list of
    ``(inner_normal, value)`` pairs.
    """
    d = len(points[0])
    if d == 1:
        xs = [p[0] for p in points]
        return [((1,), min(xs)), ((-1,), -max(xs))], max(xs) - min(xs)

    simplex = [0]
    chosen = []
    for i in range(1, len(points)):
        cand = chosen + [sub(points[i], points[0])]
        if rank(cand) == len(cand):
            simplex.append(i)
            chosen = cand
            if len(simplex) == d + 1:
                break
    if len(simplex) != d + 1:
        raise ValueError("points do not span the ambient space")

    centre = tuple(sum(points[i][t] for i in simplex) for t in range(d))
    scale = d + 1
    boundary = {}

    def make_facet(idx):
        pts = [points[i] for i in idx]
        raw = _cofactor_normal(pts)
        g = 0
        for x in raw:
            g = gcd(g, x)
        w = tuple(x // g for x in raw)
        value = dot(w, pts[0])
        if dot(w, centre) < scale * value:
            w = tuple(-x for x in w)
            value = -value
        return w, value, g

    for omit in simplex:
        idx = tuple(sorted(i for i in simplex if i != omit))
        boundary[idx] = make_facet(idx)
    volume = abs(bareiss_det([sub(points[i], points[simplex[0]]) for i in simplex[1:]]))

    in_simplex = set(simplex)
    for i, p in enumerate(points):
        if i in in_simplex:
            continue
        visible = [key for key, (w, value, _) in boundary.items() if dot(w, p) < value]
        if not visible:
            continue
        ridge_count = {}
        for key in visible:
            w, value, g = boundary[key]
            volume += g * (value - dot(w, p))
            for ridge in combinations(key, d - 1):
                ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
        for key in visible:
            del boundary[key]
        for ridge, count in ridge_count.items():
            if count == 1:
                idx = tuple(sorted(ridge + (i,)))
                boundary[idx] = make_facet(idx)

    facets = sorted({(w, value) for w, value, _ in boundary.values()})
    return facets, volume


# ---------------------------------------------------------------------------
# polytopes

@dataclass(frozen=True)
class PrimitiveNormal:
    weights: tuple
    support_value: int

    def __iter__(self):
        return iter(self.weights)


@dataclass(frozen=True)
class SublatticeBasis:
    basis: tuple

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


@dataclass(frozen=True, eq=False)
class LatticePolytope:
    ambient_dim: int
    generators: tuple
    vertices: tuple
    dim: int
    origin: tuple = field(repr=False, default=())
    lattice_basis: tuple = field(repr=False, default=())
    hull_facets: tuple = field(repr=False, default=())
    flags: tuple = field(repr=False, default=())
    relative_volume: int = field(repr=False, default=0)

    def __eq__(self, other):
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    @property
    def is_empty(self):
        return self.dim < 0

    def contains(self, point):
        if self.is_empty:
            return False
        return all(dot(w.weights, point) >= w.support_value for w in self.hull_facets + self.flags)

    def lattice_points(self):
        """All integer points of the polytope (brute force over the bounding box)."""
        if self.is_empty:
            return []
        lows = [min(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        highs = [max(v[i] for v in self.vertices) for i in range(self.ambient_dim)]
        out = []

        def rec(prefix, i):
            if i == self.ambient_dim:
                if self.contains(prefix):
                    out.append(prefix)
                return
            for x in range(lows[i], highs[i] + 1):
                rec(prefix + (x,), i + 1)

        rec((), 0)
        return out


def empty_polytope(n):
    return LatticePolytope(n, (), (), -1)


def affine_lattice(points):
    """Origin (lex-min point) and HNF basis of the saturated direction lattice."""
    points = sorted(set(map(tuple, points)))
    base = points[0]
    n = len(base)
    diffs = [sub(p, base) for p in points[1:]]
    diffs = [v for v in diffs if any(v)]
    if not diffs:
        return base, ()
    orth = rational_nullspace(diffs, n)
    return base, tuple(integer_kernel(orth, n))


@lru_cache(maxsize=4096)
def _hull_cached(n, points):
    if not points:
        return empty_polytope(n)
    base, basis = affine_lattice(points)
    r = len(basis)
    orth = tuple(integer_kernel([list(b) for b in basis], n)) if r else tuple(
        tuple(int(i == j) for j in range(n)) for i in range(n))
    flags = []
    for f in orth:
        value = dot(f, base)
        flags.append(PrimitiveNormal(f, value))
        flags.append(PrimitiveNormal(tuple(-x for x in f), -value))
    flags = tuple(sorted(flags, key=lambda w: w.weights))
    if r == 0:
        return LatticePolytope(n, points, (base,), 0, base, (), (), flags, 1)
    solver = _CoordinateSolver(basis)
    local = [solver.coords(sub(p, base)) for p in points]
    facets_local, volume = _full_hull(sorted(set(local)))
    if r == n:
        facets = [PrimitiveNormal(u, value + dot(u, base)) for u, value in facets_local]
    else:
        gram = [[Fraction(dot(a, b)) for b in basis] for a in basis]
        gram_inv = _invert(gram)
        facets = []
        for u, _ in facets_local:
            lam = [sum(gram_inv[i][j] * u[j] for j in range(r)) for i in range(r)]
            w = [sum(lam[i] * basis[i][t] for i in range(r)) for t in range(n)]
            denom = 1
            for x in w:
                denom = denom * x.denominator // gcd(denom, x.denominator)
            w = primitive([int(x * denom) for x in w])
            facets.append(PrimitiveNormal(w, min(dot(w, p) for p in points)))
    to_global = dict(zip(local, points))
    facets = tuple(sorted(facets, key=lambda w: w.weights))
    # vertices: local points whose tight facet normals have full rank
    vertices = []
    for loc in sorted(set(local)):
        tight = [u for u, value in facets_local if dot(u, loc) == value]
        if len(tight) >= r and rank(tight) == r:
            vertices.append(to_global[loc])
    return LatticePolytope(n, points, tuple(sorted(vertices)), r, base, basis,
                           facets, flags, volume)


def convex_hull(points: Iterable[Sequence[int]], ambient_dim: int | None = None) -> LatticePolytope:
    pts = [tuple(int(x) for x in p) for p in points]
    dims = {len(p) for p in pts}
    if len(dims) > 1:
        raise DimensionMismatch(f"points of mixed dimensions {sorted(dims)}")
    if ambient_dim is None:
        if not pts:
            raise ValueError("ambient dimension required for an empty point set")
        ambient_dim = dims.pop()
    elif dims and dims.pop() != ambient_dim:
        raise DimensionMismatch("points do not match the ambient dimension")
    return _hull_cached(ambient_dim, tuple(sorted(set(pts))))


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.ambient_dim != Q.ambient_dim:
        raise DimensionMismatch("Minkowski sum of polytopes in different dimensions")
    if P.is_empty or Q.is_empty:
        return empty_polytope(P.ambient_dim)
    return convex_hull({add(p, q) for p in P.vertices for q in Q.vertices}, P.ambient_dim)


def minkowski_sum_all(polytopes, ambient_dim):
    total = convex_hull([(0,) * ambient_dim])
    for P in polytopes:
        total = minkowski_sum(total, P)
    return total


def facet_normals(P: LatticePolytope) -> tuple:
    """Inner facet normals; lower-dimensional polytopes also get +/- flags."""
    if P.is_empty:
        raise ValueError("facet normals of the empty polytope")
    return P.hull_facets + P.flags


def _weights(w):
    return tuple(w.weights) if hasattr(w, "weights") else tuple(w)


def support_value(P: LatticePolytope, w, sense="min"):
    vals = [dot(_weights(w), v) for v in P.vertices]
    return min(vals) if sense == "min" else max(vals)


def face(P: LatticePolytope, w, sense: str = "min") -> LatticePolytope:
    """Face of P where <w, .> is minimal (``min``) or maximal (``max``)."""
    if P.is_empty:
        raise ValueError("face of the empty polytope")
    weights = _weights(w)
    if not any(weights):
        return P
    vals = {v: dot(weights, v) for v in P.vertices}
    best = min(vals.values()) if sense == "min" else max(vals.values())
    return convex_hull([v for v, x in vals.items() if x == best], P.ambient_dim)


def lattice_volume(P: LatticePolytope) -> int:
    if P.is_empty or P.dim < P.ambient_dim:
        return 0
    return P.relative_volume


def kernel_lattice_basis(w) -> SublatticeBasis:
    weights = _weights(w)
    if not any(weights):
        raise ValueError("kernel lattice of the zero vector")
    return SublatticeBasis(tuple(integer_kernel([list(weights)], len(weights))))


# ---------------------------------------------------------------------------
# mixed volumes

def _mv_inclusion_exclusion(polys):
    n = len(polys)
    sums = {0: convex_hull([(0,) * n])}
    total = 0
    for mask in range(1, 1 << n):
        top = mask.bit_length() - 1
        sums[mask] = minkowski_sum(sums[mask & ~(1 << top)], polys[top])
        sign = -1 if (n - bin(mask).count("1")) % 2 else 1
        total += sign * lattice_volume(sums[mask])
    # lattice volumes carry a factor n! each; the alternating sum carries another
    quotient, remainder = divmod(total, factorial(n))
    assert remainder == 0, "inclusion-exclusion sum not divisible by n!"
    return quotient


def _mv_recursive(polys):
    n = len(polys)
    if n == 1:
        xs = [v[0] for v in polys[0].vertices]
        return max(xs) - min(xs)
    first, rest = polys[0], polys[1:]
    Q = minkowski_sum_all(rest, n)
    if Q.dim < n - 1:
        return 0
    total = 0
    for w in facet_normals(Q):
        h = -support_value(first, w, "min")
        if h == 0:
            continue
        faces = [face(P, w, "min") for P in rest]
        total += h * relative_mixed_volume(faces, kernel_lattice_basis(w), method="recursive")
    return total


def mixed_volume(Ps: Sequence[LatticePolytope], method: str = "inclusion-exclusion") -> int:
    """Mixed volume normalized so that MV(P, ..., P) = lattice_volume(P).

    ``method`` selects the path: ``inclusion-exclusion`` (default) or
    ``recursive`` (sum over facet normals of P2 + ... + Pn).
    """
    Ps = list(Ps)
    if not Ps:
        return 1
    n = len(Ps)
    for P in Ps:
        if P.ambient_dim != n:
            raise DimensionMismatch(f"mixed volume needs {n} polytopes in Z^{n}")
    if any(P.is_empty for P in Ps):
        return 0
    if method == "inclusion-exclusion":
        return _mv_inclusion_exclusion(Ps)
    if method == "recursive":
        return _mv_recursive(Ps)
    raise ValueError(f"unknown mixed volume method {method!r}")


def relative_mixed_volume(Fs: Sequence[LatticePolytope], basis=None,
                          method: str = "inclusion-exclusion") -> int:
    """k-dimensional mixed volume of k polytopes parallel to a common k-space.

    Each face is translated to put its lex-first vertex at the origin and
    re-expressed in ``basis`` (a lattice basis of the common direction
    space).  Without a basis, the saturated lattice of the direction space of
    the sum is used; if that space has dimension below k the answer is 0.
    """
    Fs = list(Fs)
    k = len(Fs)
    if k == 0:
        return 1
    if any(F.is_empty for F in Fs):
        return 0
    if basis is None:
        total = minkowski_sum_all(Fs, Fs[0].ambient_dim)
        if total.dim < k:
            return 0
        if total.dim > k:
            raise NotParallelError(f"faces span {total.dim} dimensions, expected {k}")
        basis = total.lattice_basis
    basis = list(basis.basis if isinstance(basis, SublatticeBasis) else basis)
    if len(basis) != k:
        raise NotParallelError(f"basis has {len(basis)} vectors, expected {k}")
    solver = _CoordinateSolver(basis)
    local = []
    for F in Fs:
        base = F.vertices[0]
        local.append(convex_hull([solver.coords(sub(v, base)) for v in F.vertices], k))
    return mixed_volume(local, method=method)
