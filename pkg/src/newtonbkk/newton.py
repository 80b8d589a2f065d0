"""Newton diagrams, weight vectors, initial faces and weight enumeration.

Index conventions: subsets of coordinates and coordinate indices are
1-based (``{1, 3}`` means x1 and x3).  A diagram or polytope restricted to a
subset ``I`` lives in Z^|I| with coordinates in increasing order of ``I``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .geometry import (
    LatticePolytope,
    PrimitiveNormal,
    convex_hull,
    dot,
    empty_polytope,
    minkowski_sum_all,
    primitive,
    rank,
)

INF = math.inf


def _as_points(points):
    return tuple(sorted({tuple(int(x) for x in p) for p in points}))


@dataclass(frozen=True)
class SupportSet:
    ambient_dim: int
    points: tuple

    def __post_init__(self):
        pts = _as_points(self.points)
        for p in pts:
            if len(p) != self.ambient_dim:
                raise ValueError(f"point {p} does not lie in Z^{self.ambient_dim}")
            if any(x < 0 for x in p):
                raise ValueError(f"support point {p} has a negative coordinate")
        object.__setattr__(self, "points", pts)

    @classmethod
    def of(cls, points, n=None):
        pts = _as_points(points)
        if n is None:
            if not pts:
                raise ValueError("ambient dimension needed for an empty support")
            n = len(pts[0])
        return cls(n, pts)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class NewtonDiagram:
    """Diagram canonically stored by its vertices (minimal generators)."""

    n: int
    generators: tuple

    @property
    def is_empty(self):
        return not self.generators

    @property
    def contains_origin(self):
        return self.generators == ((0,) * self.n,)


@dataclass(frozen=True)
class WeightVector:
    index_set: tuple
    weights: tuple
    kind: str = "valuation"

    def __post_init__(self):
        if self.kind not in ("valuation", "degree"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if len(self.index_set) != len(self.weights):
            raise ValueError("weights and index set differ in length")
        object.__setattr__(self, "index_set", tuple(self.index_set))
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", primitive(w) if any(w) else w)

    @property
    def centered_at_origin(self):
        return self.kind == "valuation" and all(x > 0 for x in self.weights)

    @property
    def centered_at_infinity(self):
        if self.kind == "valuation":
            return any(x < 0 for x in self.weights)
        return any(x > 0 for x in self.weights)

    def as_dict(self):
        return {"I": list(self.index_set), "weight": list(self.weights), "kind": self.kind}


@dataclass(frozen=True)
class DiagramSystem:
    diagrams: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "diagrams", tuple(self.diagrams))
        for d in self.diagrams:
            if d.n != self.n:
                raise ValueError(f"diagram in Z^{d.n} inside a system in Z^{self.n}")

    def __iter__(self):
        return iter(self.diagrams)

    def __len__(self):
        return len(self.diagrams)

    def __getitem__(self, i):
        return self.diagrams[i]


# ---------------------------------------------------------------------------
# the polyhedron conv(points) + orthant

@lru_cache(maxsize=4096)
def _orthant_polyhedron(points, k):
    """Facets (normal >= 0, nonzero) and vertices of conv(points) + R_{>=0}^k.

    The facets are read off the hull of points and their unit shifts:  a
    facet of that polytope with nonnegative normal is a facet of the
    polyhedron and conversely.
    """
    lifted = set(points)
    for p in points:
        for i in range(k):
            lifted.add(p[:i] + (p[i] + 1,) + p[i + 1:])
    hull = convex_hull(lifted, k)
    facets = tuple(w for w in hull.hull_facets
                   if all(x >= 0 for x in w.weights) and any(w.weights))
    vertices = []
    for p in points:
        tight = [w.weights for w in facets if dot(w.weights, p) == w.support_value]
        if len(tight) >= k and rank(tight) == k:
            vertices.append(p)
    return facets, tuple(sorted(vertices))


def diagram_of(support, n=None) -> NewtonDiagram:
    if isinstance(support, NewtonDiagram):
        return support
    if isinstance(support, SupportSet):
        n, pts = support.ambient_dim, support.points
    else:
        pts = _as_points(support)
        if n is None:
            if not pts:
                raise ValueError("ambient dimension needed for an empty support")
            n = len(pts[0])
    if not pts:
        return NewtonDiagram(n, ())
    if any(x < 0 for p in pts for x in p):
        raise ValueError("diagram supports must have nonnegative coordinates")
    if (0,) * n in pts:
        return NewtonDiagram(n, ((0,) * n,))
    return NewtonDiagram(n, _orthant_polyhedron(pts, n)[1])


def diagram_facets(diagram: NewtonDiagram):
    """Facets of conv(generators) + orthant: PrimitiveNormal with weights >= 0."""
    if diagram.is_empty:
        raise ValueError("facets of the empty diagram")
    return _orthant_polyhedron(diagram.generators, diagram.n)[0]


def is_below(point, diagram: NewtonDiagram) -> bool:
    """Is ``point`` outside conv(generators) + orthant (some nu > 0 sees it lower)?"""
    if diagram.is_empty:
        return False
    return any(dot(w.weights, point) < w.support_value for w in diagram_facets(diagram))


# ---------------------------------------------------------------------------
# restriction and projection

def _positions(I):
    return [i - 1 for i in sorted(I)]


def restrict_points(points, I, n):
    keep = _positions(I)
    off = [j for j in range(n) if j not in set(keep)]
    return _as_points(tuple(p[i] for i in keep) for p in points if all(p[j] == 0 for j in off))


def project_points(points, I):
    keep = _positions(I)
    return _as_points(tuple(p[i] for i in keep) for p in points)


def restrict(obj, I):
    """Gamma^I (or P^I): the part lying in R^I, re-embedded in Z^|I|."""
    if not I:
        raise ValueError("restriction to the empty subset")
    if isinstance(obj, LatticePolytope):
        if obj.is_empty:
            return empty_polytope(len(I))
        pts = restrict_points(obj.vertices, I, obj.ambient_dim)
        return convex_hull(pts, len(I)) if pts else empty_polytope(len(I))
    pts = restrict_points(obj.generators, I, obj.n)
    return diagram_of(pts, len(I))


def project(obj, I):
    """Coordinate projection onto I, canonicalized as a diagram (or hull)."""
    if not I:
        raise ValueError("projection onto the empty subset")
    if isinstance(obj, LatticePolytope):
        if obj.is_empty:
            return empty_polytope(len(I))
        return convex_hull(project_points(obj.vertices, I), len(I))
    return diagram_of(project_points(obj.generators, I), len(I))


def nonempty_indices(objs, I):
    """Indices j (1-based) whose restriction to I is non-empty."""
    out = []
    for j, obj in enumerate(objs, start=1):
        pts = obj.vertices if isinstance(obj, LatticePolytope) else obj.generators
        n = obj.ambient_dim if isinstance(obj, LatticePolytope) else obj.n
        if restrict_points(pts, I, n):
            out.append(j)
    return tuple(out)


# ---------------------------------------------------------------------------
# values and initial forms

def _raw_weights(w):
    if isinstance(w, WeightVector):
        return w.weights, w.kind
    if isinstance(w, PrimitiveNormal):
        return tuple(w.weights), "valuation"
    return tuple(w), "valuation"


def value(w, obj, kind=None):
    """nu(obj) = inf <nu, .> for valuations, omega(obj) = sup for degrees."""
    weights, wkind = _raw_weights(w)
    kind = kind or wkind
    if isinstance(obj, NewtonDiagram):
        if obj.is_empty:
            return INF if kind == "valuation" else -INF
        # the diagram stands for conv + orthant, unbounded in every e_i
        if kind == "valuation" and any(x < 0 for x in weights):
            return -INF
        if kind == "degree" and any(x > 0 for x in weights):
            return INF
        pts = obj.generators
    elif isinstance(obj, LatticePolytope):
        if obj.is_empty:
            return INF if kind == "valuation" else -INF
        pts = obj.vertices
    else:
        pts = list(obj)
        if not pts:
            return INF if kind == "valuation" else -INF
    vals = [dot(weights, p) for p in pts]
    return min(vals) if kind == "valuation" else max(vals)


def initial_points(w, points, kind=None):
    weights, wkind = _raw_weights(w)
    kind = kind or wkind
    points = list(points)
    if not points:
        return []
    vals = {p: dot(weights, p) for p in points}
    best = min(vals.values()) if kind == "valuation" else max(vals.values())
    return sorted(p for p, x in vals.items() if x == best)


def initial_form(w, f, kind=None):
    """In_nu(f) for valuations, ld_omega(f) for degrees."""
    if f.is_zero():
        return f
    return f.with_terms(initial_points(w, f.terms, kind))


def initial_face(w, obj, kind=None):
    """In_nu / ld_omega face of a diagram or polytope, as a lattice polytope."""
    pts = obj.generators if isinstance(obj, NewtonDiagram) else obj.vertices
    n = obj.n if isinstance(obj, NewtonDiagram) else obj.ambient_dim
    chosen = initial_points(w, pts, kind)
    return convex_hull(chosen, n) if chosen else empty_polytope(n)


def compatible_extension(w, I, n, max_coordinate):
    """Extend a valuation on I to Z^n with huge weights outside I."""
    weights, _ = _raw_weights(w)
    big = 1 + n * max(1, max_coordinate) * max(1, max(abs(x) for x in weights))
    full = [big] * n
    for pos, x in zip(_positions(I), weights):
        full[pos] = x
    return WeightVector(tuple(range(1, n + 1)), tuple(full))


# ---------------------------------------------------------------------------
# face enumeration

def _sum_vertices(objs, k, lower=False):
    """Vertex set of the sum of diagrams (lower=True) or polytopes."""
    pts = {(0,) * k}
    for obj in objs:
        gens = obj.generators if isinstance(obj, NewtonDiagram) else obj.vertices
        pts = {tuple(a + b for a, b in zip(p, q)) for p in pts for q in gens}
        if lower:
            pts = set(diagram_of(pts, k).generators)
        else:
            pts = set(convex_hull(pts, k).vertices)
    return tuple(sorted(pts))


def _face_closure(vertex_sets, vertices):
    faces = {frozenset(vertices)}
    frontier = {frozenset(s) for s in vertex_sets}
    faces |= frontier
    while frontier:
        new = set()
        for a in frontier:
            for b in list(faces):
                c = a & b
                if c and c not in faces:
                    new.add(c)
        faces |= new
        frontier = new
    faces |= {frozenset([v]) for v in vertices}
    return faces


def compact_faces(points, k):
    """(nu, vertices) for every compact face of conv(points) + orthant.

    nu is the primitive sum of the facet normals containing the face, which
    lies in the relative interior of its normal cone.
    """
    facets, verts = _orthant_polyhedron(_as_points(points), k)
    tight = {v: frozenset(i for i, w in enumerate(facets) if dot(w.weights, v) == w.support_value)
             for v in verts}
    facet_sets = [frozenset(v for v in verts if i in tight[v]) for i in range(len(facets))]
    out = {}
    for X in _face_closure(facet_sets, verts):
        T = frozenset.intersection(*(tight[v] for v in X))
        if not T:
            continue
        nu = [0] * k
        for i in T:
            nu = [a + b for a, b in zip(nu, facets[i].weights)]
        if all(x > 0 for x in nu):
            nu = primitive(nu)
            face_vertices = tuple(sorted(v for v in verts if T <= tight[v]))
            out.setdefault(nu, face_vertices)
    return sorted(out.items())


def polytope_faces(Q: LatticePolytope):
    """(outer normal cone generators, vertices) for every non-empty face of Q.

    Generators are outer normals (maximization) of the hull facets containing
    the face together with both signs of every flag.
    """
    verts = Q.vertices
    facets = Q.hull_facets
    tight = {v: frozenset(i for i, w in enumerate(facets) if dot(w.weights, v) == w.support_value)
             for v in verts}
    facet_sets = [frozenset(v for v in verts if i in tight[v]) for i in range(len(facets))]
    flags = [tuple(-x for x in w.weights) for w in Q.flags]
    out = []
    seen = set()
    for X in sorted(_face_closure(facet_sets, verts), key=lambda s: (len(s), sorted(s))):
        T = frozenset.intersection(*(tight[v] for v in X)) if X else frozenset()
        if T in seen:
            continue
        seen.add(T)
        gens = [tuple(-x for x in facets[i].weights) for i in sorted(T)] + flags
        face_vertices = tuple(sorted(v for v in verts if T <= tight[v]))
        out.append((gens, face_vertices))
    return out


def _positive_representative(gens):
    """An element of the relative interior of cone(gens) with a positive entry."""
    for g in gens:
        for c, gc in enumerate(g):
            if gc > 0:
                base = [sum(h[t] for h in gens) for t in range(len(g))]
                mult = max(0, (-base[c]) // gc + 1)
                return primitive([b + mult * x for b, x in zip(base, g)])
    return None


def _any_representative(gens):
    total = [sum(h[t] for h in gens) for t in range(len(gens[0]))] if gens else []
    if any(total):
        return primitive(total)
    for g in gens:
        if any(g):
            return primitive(g)
    return None


def _index_set(index_set, k):
    return tuple(index_set) if index_set is not None else tuple(range(1, k + 1))


def candidate_weights_origin(diagrams, faces="facets", index_set=None):
    """Strictly positive weights relevant for the local star formula.

    ``faces="facets"`` returns the inner normals of the facets of
    sum(Gamma_i) + orthant; ``faces="all"`` returns one weight per compact face
    (what non-degeneracy tests need).
    """
    diagrams = list(diagrams)
    if not diagrams:
        raise ValueError("at least one diagram is needed to fix the dimension")
    k = diagrams[0].n
    if any(d.is_empty for d in diagrams):
        raise ValueError("candidate weights of an empty diagram")
    return _origin_weights(diagrams, k, faces, _index_set(index_set, k))


def origin_weights_for(diagrams, k, faces="facets", index_set=None):
    """Like candidate_weights_origin but allows an empty list (sum = {0})."""
    return _origin_weights(list(diagrams), k, faces, _index_set(index_set, k))


def _origin_weights(diagrams, k, faces, index_set):
    pts = _sum_vertices(diagrams, k, lower=True)
    if faces == "facets":
        facets = _orthant_polyhedron(pts, k)[0]
        found = sorted({tuple(w.weights) for w in facets if all(x > 0 for x in w.weights)})
    elif faces == "all":
        found = [nu for nu, _ in compact_faces(pts, k)]
    else:
        raise ValueError(f"unknown faces mode {faces!r}")
    return [WeightVector(index_set, nu) for nu in found]


def candidate_weights_infinity(polytopes, faces="facets", index_set=None):
    """Weights centered at infinity (degree kind) for the star formula at infinity."""
    polytopes = list(polytopes)
    if not polytopes:
        raise ValueError("at least one polytope is needed to fix the dimension")
    if any(P.is_empty for P in polytopes):
        raise ValueError("candidate weights of an empty polytope")
    k = polytopes[0].ambient_dim
    return infinity_weights_for(polytopes, k, faces, index_set)


def infinity_weights_for(polytopes, k, faces="facets", index_set=None, torus=False):
    index_set = _index_set(index_set, k)
    Q = minkowski_sum_all(polytopes, k)
    found = set()
    if faces == "facets":
        if Q.dim == k:
            normals = [tuple(-x for x in w.weights) for w in Q.hull_facets]
        elif Q.dim == k - 1:
            normals = [tuple(w.weights) for w in Q.flags]
        else:
            normals = []
        found = {w for w in normals if torus or any(x > 0 for x in w)}
    elif faces == "all":
        for gens, _ in polytope_faces(Q):
            rep = _any_representative(gens) if torus else _positive_representative(gens)
            if rep is not None:
                found.add(rep)
    else:
        raise ValueError(f"unknown faces mode {faces!r}")
    return [WeightVector(index_set, w, "degree") for w in sorted(found)]


def family_within(S_family, I):
    """S^I = {S in family : S subset of I}, as positions inside sorted I."""
    I = sorted(I)
    where = {i: pos for pos, i in enumerate(I)}
    out = set()
    for S in S_family:
        if set(S) <= set(I):
            out.add(tuple(sorted(where[s] for s in S)))
    return sorted(out, key=lambda s: (len(s), s))


def candidate_weights_centered(polytopes, S_family, I, faces="facets"):
    """Valuations on K^I that vanish exactly on some S in the family and are
    positive on the rest of I.

    ``polytopes`` (or diagrams) live in Z^|I|.  In ``facets`` mode the
    weights are facet normals of the sum plus orthant; in ``all`` mode there
    is one weight per face met by such a valuation (found face by face on
    the projection away from S).
    """
    I = tuple(sorted(I))
    k = len(I)
    objs = list(polytopes)
    if not k:
        raise ValueError("centered weights need a non-empty subset")
    patterns = [S for S in family_within(S_family, I) if len(S) < k]
    if not patterns:
        return []
    pts = _sum_vertices(objs, k, lower=False)
    found = []
    seen = set()
    if faces == "facets":
        facets = _orthant_polyhedron(pts, k)[0]
        for w in facets:
            nu = tuple(w.weights)
            zeros = tuple(t for t in range(k) if nu[t] == 0)
            if zeros in patterns and nu not in seen:
                seen.add(nu)
                found.append(nu)
        found.sort()
    elif faces == "all":
        for S in patterns:
            rest = [t for t in range(k) if t not in S]
            proj = _as_points(tuple(p[t] for t in rest) for p in pts)
            for nu_rest, _ in compact_faces(proj, len(rest)):
                nu = [0] * k
                for t, x in zip(rest, nu_rest):
                    nu[t] = x
                nu = tuple(nu)
                if nu not in seen:
                    seen.add(nu)
                    found.append(nu)
    else:
        raise ValueError(f"unknown faces mode {faces!r}")
    return [WeightVector(I, nu) for nu in found]


def subsets(n, nonempty=True):
    """All subsets of [n] ordered by size then lexicographically."""
    start = 1 if nonempty else 0
    for size in range(start, n + 1):
        for combo in combinations(range(1, n + 1), size):
            yield frozenset(combo)
