"""Root counts away from the origin: the extended BKK bound on the complement
of a union of coordinate subspaces, the subspace families it needs, and the
matching non-degeneracy test."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from .geometry import (
    LatticePolytope,
    convex_hull,
    kernel_lattice_basis,
    minkowski_sum_all,
    relative_mixed_volume,
)
from .local import _jsonify, _num, mult0_generic, times
from .newton import (
    candidate_weights_centered,
    diagram_of,
    infinity_weights_for,
    initial_face,
    initial_form,
    nonempty_indices,
    project,
    restrict,
    subsets,
    value,
)
from .polysys import torus_has_common_zero

INF = math.inf


@dataclass(frozen=True)
class SubsetFamily:
    n: int
    members: frozenset = frozenset()

    def __post_init__(self):
        members = frozenset(frozenset(S) for S in self.members)
        for S in members:
            if not S <= frozenset(range(1, self.n + 1)):
                raise ValueError(f"subset {sorted(S)} is not inside [1..{self.n}]")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, n, members=()):
        return cls(n, frozenset(frozenset(S) for S in members))

    @classmethod
    def torus(cls, n):
        """All proper subsets of [n]: what is left is the torus."""
        full = frozenset(range(1, n + 1))
        return cls(n, frozenset(S for S in subsets(n, nonempty=False) if S != full))

    def closure(self):
        out = set()
        for S in self.members:
            for size in range(len(S) + 1):
                out.update(frozenset(c) for c in combinations(sorted(S), size))
        return SubsetFamily(self.n, frozenset(out))

    def within(self, I):
        return [S for S in self.members if S <= frozenset(I)]

    def __contains__(self, S):
        return frozenset(S) in self.members

    def __iter__(self):
        return iter(sorted(self.members, key=lambda S: (len(S), sorted(S))))

    def __len__(self):
        return len(self.members)

    def union(self, other):
        return SubsetFamily(self.n, self.members | frozenset(other))


def _sorted_family(family):
    return sorted((frozenset(S) for S in family), key=lambda S: (len(S), sorted(S)))


# ---------------------------------------------------------------------------
# classification of coordinate subspaces

def _dim_of_sum(polys, k):
    return minkowski_sum_all(polys, k).dim


def triviality_witness(Ps, I, skip=()):
    """A set J of indices with more non-empty restrictions than the dimension
    of their sum, or None.  J ranges over the non-vanishing indices outside
    ``skip``."""
    k = len(I)
    N = tuple(j for j in _nonempty_at(Ps, I) if j not in skip)
    if not I:
        # at the origin every non-empty restriction is a point
        return (N[0],) if N else None
    restricted = {j: restrict(Ps[j - 1], I) for j in N}
    for size in range(1, len(N) + 1):
        for J in combinations(N, size):
            if size > _dim_of_sum([restricted[j] for j in J], k):
                return J
    return None


@dataclass
class SubspaceClassification:
    n: int
    S: SubsetFamily
    rule: str
    nonempty: dict
    trivial: dict
    isolated: dict
    exotrivial: dict
    E: list
    T: list
    T_prime: list
    T_star: list
    N: list
    I1: list

    def to_json(self):
        def fam(F):
            return [sorted(S) for S in F]
        return {"E": fam(self.E), "T": fam(self.T), "T_prime": fam(self.T_prime),
                "T_star": fam(self.T_star), "N": fam(self.N), "I1": fam(self.I1),
                "rule": self.rule}


def _nonempty_at(Ps, I):
    if not I:
        return tuple(j for j, P in enumerate(Ps, 1) if P.contains((0,) * P.ambient_dim))
    return nonempty_indices(Ps, I)


def classify_subspaces(Ps, S=None, exotrivial_rule="example") -> SubspaceClassification:
    """Classify every coordinate subspace (K*)^I, including I = {} (the origin).

    ``exotrivial_rule="example"`` accepts the second exotriviality clause
    only with the witness equal to I itself; ``"literal"`` searches all
    supersets as written in the definition.
    """
    Ps = list(Ps)
    n = len(Ps)
    for P in Ps:
        if P.ambient_dim != n:
            raise ValueError(f"need {n} polytopes in Z^{n}")
    S = S if isinstance(S, SubsetFamily) else SubsetFamily.of(n, S or ())
    closed = S.closure().members
    everything = list(subsets(n, nonempty=False))
    nonempty = {I: _nonempty_at(Ps, I) for I in everything}
    trivial = {I: triviality_witness(Ps, I) is not None for I in everything}
    isolated = {I: trivial[I] or len(nonempty[I]) == len(I) for I in everything}
    E = [I for I in everything if any(len(nonempty[J]) < len(J) for J in everything if I <= J)]
    Eset = set(E)

    def clause_b(I):
        if not trivial[I]:
            return False
        if exotrivial_rule == "example":
            return len(nonempty[I]) == len(I)
        if exotrivial_rule != "literal":
            raise ValueError(f"unknown exotriviality rule {exotrivial_rule!r}")
        for J in everything:
            if not I <= J or not trivial[J] or len(nonempty[J]) != len(J):
                continue
            if all(len(nonempty[K]) > len(K) for K in everything if I <= K and K < J):
                return True
        return False

    exotrivial = {I: I in Eset or clause_b(I) for I in everything}
    outside = [I for I in everything if I not in closed and I not in Eset]
    T = [I for I in outside if exotrivial[I]]
    T_prime = [I for I in outside if not exotrivial[I]]
    T_star = [I for I in T if len(nonempty[I]) == len(I)]
    N = [I for I in T_prime if not trivial[I]]
    # the I-term counts zeros of f_1 along the curve cut out by the other
    # restrictions, so non-triviality is asked of those alone
    I1 = [I for I in outside if I and len(nonempty[I]) == len(I) and 1 in nonempty[I]
          and triviality_witness(Ps, I, skip=(1,)) is None]
    return SubspaceClassification(n, S, exotrivial_rule, nonempty, trivial, isolated,
                                  exotrivial, E, T, T_prime, T_star, N, I1)


# ---------------------------------------------------------------------------
# star formulas and the bound

def _check_star_inputs(P1, rest):
    rest = list(rest)
    k = P1.ambient_dim
    if len(rest) != k - 1 or any(P.ambient_dim != k for P in rest):
        raise ValueError(f"star formula needs {k - 1} further polytopes in Z^{k}")
    if P1.is_empty or any(P.is_empty for P in rest):
        raise ValueError("star formula with an empty restriction")
    return rest, k


def mult_star_infinity(P1, rest, I=None, with_terms=False):
    rest, k = _check_star_inputs(P1, rest)
    index_set = tuple(sorted(I)) if I is not None else tuple(range(1, k + 1))
    total, terms = 0, []
    for omega in infinity_weights_for(rest, k, "facets", index_set):
        faces = [initial_face(omega, P) for P in rest]
        mv = relative_mixed_volume(faces, kernel_lattice_basis(omega.weights)) if rest else 1
        height = value(omega, P1)
        contribution = times(height, mv)
        if contribution:
            terms.append({"weight": list(omega.weights), "value": height, "mv": mv,
                          "contribution": contribution})
        total += contribution
    return (total, terms) if with_terms else total


def mult_star_centered(P1, rest, I, S_family, with_terms=False):
    rest, k = _check_star_inputs(P1, rest)
    total, terms = 0, []
    for nu in candidate_weights_centered(rest, S_family, I, "facets"):
        faces = [initial_face(nu, P) for P in rest]
        mv = relative_mixed_volume(faces, kernel_lattice_basis(nu.weights)) if rest else 1
        height = value(nu, P1)
        contribution = times(height, mv)
        if contribution:
            terms.append({"weight": list(nu.weights), "value": height, "mv": mv,
                          "contribution": contribution})
        total += contribution
    return (total, terms) if with_terms else total


@dataclass
class BkkResult:
    value: int
    term_ledger: list = field(default_factory=list)
    classification: SubspaceClassification = None

    def to_json(self):
        return {"value": _num(self.value), "ledger": _jsonify(self.term_ledger)}


def generic_diagram(P: LatticePolytope):
    return diagram_of(P.vertices, P.ambient_dim)


def bkk_extended(Ps, S=None, exotrivial_rule="example") -> BkkResult:
    """Number of isolated roots of generic systems on the complement of the
    closure of S, term by term."""
    Ps = list(Ps)
    n = len(Ps)
    cls = classify_subspaces(Ps, S, exotrivial_rule)
    removed = cls.S.closure().members | frozenset(cls.E)
    total = 0
    ledger = []
    for I in cls.I1:
        N = cls.nonempty[I]
        restricted = {j: restrict(Ps[j - 1], I) for j in N}
        rest = [restricted[j] for j in N if j != 1]
        family = [Sx for Sx in removed if Sx <= I]
        inf_value, inf_terms = mult_star_infinity(restricted[1], rest, I, with_terms=True)
        cen_value, cen_terms = mult_star_centered(restricted[1], rest, I, family, with_terms=True)
        star = inf_value - cen_value
        complement = frozenset(range(1, n + 1)) - I
        if not complement:
            factor = 1
        elif star:
            outside = [j for j in range(1, n + 1) if j not in N]
            factor = mult0_generic([project(generic_diagram(Ps[j - 1]), complement)
                                    for j in outside]).value
        else:
            factor = None  # not needed
        contribution = times(factor, star) if star else 0
        ledger.append({"I": sorted(I), "factor": factor, "infinity": inf_value,
                       "infinity_terms": inf_terms, "centered": cen_value,
                       "centered_terms": cen_terms, "contribution": contribution})
        total += contribution
    return BkkResult(total, ledger, cls)


# ---------------------------------------------------------------------------
# non-degeneracy

@dataclass
class AffineVerdict:
    nondegenerate: bool
    witness: object = None
    info: dict = field(default_factory=dict)

    def to_json(self):
        return {"nondegenerate": self.nondegenerate, "witness": _jsonify(self.witness),
                **_jsonify(self.info)}


def newton_polytope(f):
    if f.is_zero():
        raise ValueError("Newton polytope of the zero polynomial")
    return convex_hull(f.support(), f.n)


def _restricted_nonzero(fs, I):
    return [g for g in (f.restrict(I) for f in fs) if not g.is_zero()]


def _test_infinity(gs, I):
    polys = [newton_polytope(g) for g in gs]
    for omega in infinity_weights_for(polys, len(I), "all", tuple(sorted(I))):
        if torus_has_common_zero([initial_form(omega, g) for g in gs]):
            return omega
    return None


def _test_centered(gs, I, family):
    polys = [newton_polytope(g) for g in gs]
    for nu in candidate_weights_centered(polys, family, I, "all"):
        if torus_has_common_zero([initial_form(nu, g) for g in gs]):
            return nu
    return None


def check_P_nondegenerate(fs, S=None, Ps=None, exotrivial_rule="example") -> AffineVerdict:
    fs = list(fs)
    n = len(fs)
    if any(f.n != n for f in fs):
        raise ValueError(f"need {n} polynomials in {n} variables")
    actual = [newton_polytope(f) for f in fs]
    if Ps is not None:
        bad = [j for j, (P, Q) in enumerate(zip(Ps, actual), 1) if P.vertices != Q.vertices]
        if bad:
            raise ValueError(f"not admissible: Newton polytope differs at index {bad}")
    cls = classify_subspaces(actual, S, exotrivial_rule)
    closed = cls.S.closure().members
    for I in cls.N:
        if not I:
            continue
        gs = _restricted_nonzero(fs, I)
        omega = _test_infinity(gs, I)
        if omega is not None:
            return AffineVerdict(False, {"I": sorted(I), "weight": list(omega.weights),
                                         "kind": "infinity", "condition": "b"})
        family = [Sx for Sx in (closed | frozenset(cls.T)) if Sx <= I]
        nu = _test_centered(gs, I, family)
        if nu is not None:
            return AffineVerdict(False, {"I": sorted(I), "weight": list(nu.weights),
                                         "kind": "centered", "condition": "b"})
    for I in cls.T_star:
        if not I:
            continue
        gs = _restricted_nonzero(fs, I)
        family = [Sx for Sx in cls.T_prime if Sx <= I]
        nu = _test_centered(gs, I, family)
        if nu is not None:
            return AffineVerdict(False, {"I": sorted(I), "weight": list(nu.weights),
                                         "kind": "centered", "condition": "c"})
    return AffineVerdict(True, info={"classification": cls.to_json()})
