"""Intersection multiplicity at the origin and local non-degeneracy tests."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .geometry import kernel_lattice_basis, relative_mixed_volume
from .newton import (
    DiagramSystem,
    NewtonDiagram,
    SupportSet,
    candidate_weights_origin,
    compact_faces,
    diagram_of,
    initial_face,
    initial_form,
    is_below,
    nonempty_indices,
    origin_weights_for,
    project,
    restrict,
    subsets,
    value,
)
from .polysys import partial_derivative, torus_has_common_zero

INF = math.inf
MAX_N = 8


def times(a, b):
    """Product with the convention that infinity times zero is zero."""
    if a == 0 or b == 0:
        return 0
    return a * b


def _as_system(diagrams):
    if isinstance(diagrams, DiagramSystem):
        return diagrams
    diagrams = tuple(diagram_of(d) if not isinstance(d, NewtonDiagram) else d for d in diagrams)
    if not diagrams:
        raise ValueError("empty diagram system")
    return DiagramSystem(diagrams, diagrams[0].n)


def _check_arity(system):
    if len(system) != system.n:
        raise ValueError(f"need {system.n} diagrams in Z^{system.n}, got {len(system)}")
    if system.n > MAX_N:
        raise ValueError(f"n = {system.n} exceeds the cap {MAX_N}")


@dataclass(frozen=True)
class IsolationProfile:
    n: int
    nonempty: dict  # frozenset I -> tuple of j with Gamma_j^I non-empty

    @classmethod
    def of(cls, diagrams):
        system = _as_system(diagrams)
        table = {I: nonempty_indices(system.diagrams, I) for I in subsets(system.n)}
        return cls(system.n, table)

    def isolated(self, I):
        return len(self.nonempty[I]) >= len(I)

    def in_N(self, I):
        return len(self.nonempty[I]) == len(I)

    def in_I1(self, I):
        return self.in_N(I) and 1 in self.nonempty[I]

    def N_family(self):
        return [I for I in self.nonempty if self.in_N(I)]

    def I1_family(self):
        return [I for I in self.nonempty if self.in_I1(I)]


@dataclass
class MultiplicityResult:
    value: object
    term_ledger: list = field(default_factory=list)

    def to_json(self):
        return {"value": _num(self.value), "ledger": _jsonify(self.term_ledger)}


def _num(x):
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return x


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, frozenset):
        return sorted(obj)
    if isinstance(obj, float):
        return _num(obj)
    return obj


def mult0_finiteness(diagrams) -> str:
    """'zero', 'finite' or 'infinite'."""
    system = _as_system(diagrams)
    _check_arity(system)
    if any(d.contains_origin for d in system):
        return "zero"
    profile = IsolationProfile.of(system)
    if all(profile.isolated(I) for I in profile.nonempty):
        return "finite"
    return "infinite"


def mult_star_origin(gamma1, rest, I=None, with_terms=False):
    """Sum over positive weights nu of nu(Gamma_1) times the mixed volume of
    the initial faces of the other diagrams; all diagrams live in Z^k."""
    rest = list(rest)
    k = gamma1.n
    if any(d.n != k for d in rest) or len(rest) != k - 1:
        raise ValueError(f"star formula needs {k - 1} further diagrams in Z^{k}")
    if any(d.is_empty for d in rest):
        raise ValueError("star formula with an empty diagram among the others")
    index_set = tuple(sorted(I)) if I is not None else tuple(range(1, k + 1))
    terms = []
    total = 0
    for nu in origin_weights_for(rest, k, "facets", index_set):
        faces = [initial_face(nu, d) for d in rest]
        mv = relative_mixed_volume(faces, kernel_lattice_basis(nu.weights)) if rest else 1
        height = value(nu, gamma1)
        contribution = times(height, mv)
        if contribution:
            terms.append({"weight": list(nu.weights), "value": height, "mv": mv,
                          "contribution": contribution})
        total += contribution
    return (total, terms) if with_terms else total


def mult0_generic(diagrams) -> MultiplicityResult:
    """Generic intersection multiplicity at the origin with a term ledger."""
    system = _as_system(diagrams)
    _check_arity(system)
    value_, ledger = _mult0_cached(system.diagrams)
    return MultiplicityResult(value_, [dict(t) for t in ledger])


def _freeze(ledger):
    return tuple(ledger)


@lru_cache(maxsize=None)
def _mult0_cached(diagrams):
    system = DiagramSystem(diagrams, diagrams[0].n)
    n = system.n
    status = mult0_finiteness(system)
    if status == "zero":
        return 0, ()
    if status == "infinite":
        return INF, ()
    profile = IsolationProfile.of(system)
    total = 0
    ledger = []
    for I in profile.I1_family():
        N = profile.nonempty[I]
        complement = frozenset(range(1, n + 1)) - I
        star, terms = mult_star_origin(restrict(diagrams[0], I),
                                       [restrict(diagrams[j - 1], I) for j in N if j != 1],
                                       I, with_terms=True)
        if complement:
            outside = [j for j in range(1, n + 1) if j not in N]
            sub = tuple(project(diagrams[j - 1], complement) for j in outside)
            factor = _mult0_cached(sub)[0] if star else 0
        else:
            factor = 1
        contribution = times(factor, star)
        ledger.append({"I": sorted(I), "factor": factor, "star": star,
                       "star_terms": terms, "contribution": contribution})
        total += contribution
    return total, _freeze(ledger)


def mult0_generic_alt(diagrams) -> MultiplicityResult:
    """Same value through the sum over all I and all J avoiding 1."""
    system = _as_system(diagrams)
    _check_arity(system)
    n = system.n
    status = mult0_finiteness(system)
    if status == "zero":
        return MultiplicityResult(0)
    if status == "infinite":
        return MultiplicityResult(INF)
    total = 0
    ledger = []
    others = range(2, n + 1)
    for I in subsets(n):
        k = len(I)
        complement = frozenset(range(1, n + 1)) - I
        for J in _choose(others, n - k):
            inner = [j for j in others if j not in J]
            rest = [restrict(system[j - 1], I) for j in inner]
            if any(d.is_empty for d in rest):
                star = 0
            else:
                star = mult_star_origin(restrict(system[0], I), rest, I)
            if not star:
                continue
            if complement:
                factor = _mult0_cached(tuple(project(system[j - 1], complement) for j in J))[0]
            else:
                factor = 1
            contribution = times(factor, star)
            if contribution:
                ledger.append({"I": sorted(I), "J": sorted(J), "factor": factor,
                               "star": star, "contribution": contribution})
            total += contribution
    return MultiplicityResult(total, ledger)


def _choose(items, size):
    from itertools import combinations
    return [frozenset(c) for c in combinations(items, size)]


# ---------------------------------------------------------------------------
# non-degeneracy

@dataclass
class Verdict:
    nondegenerate: bool
    witness: object = None
    info: dict = field(default_factory=dict)

    def to_json(self):
        return {"nondegenerate": self.nondegenerate, "witness": _jsonify(self.witness),
                **_jsonify(self.info)}


def _diagrams_of(fs):
    return DiagramSystem(tuple(diagram_of(f.support(), f.n) for f in fs), fs[0].n)


def check_G_nondegenerate(fs) -> Verdict:
    """Non-degeneracy at the origin on every I with exactly |I| non-vanishing
    restrictions, over every compact face of the restricted sum."""
    fs = list(fs)
    system = _diagrams_of(fs)
    _check_arity(system)
    if mult0_finiteness(system) == "infinite":
        raise ValueError("intersection multiplicity of the diagrams is infinite")
    profile = IsolationProfile.of(system)
    for I in profile.N_family():
        gs = [fs[j - 1].restrict(I) for j in profile.nonempty[I]]
        diagrams = [diagram_of(g.support(), len(I)) for g in gs]
        for nu in candidate_weights_origin(diagrams, faces="all", index_set=tuple(sorted(I))):
            forms = [initial_form(nu, g) for g in gs]
            if torus_has_common_zero(forms):
                return Verdict(False, {"I": sorted(I), "weight": list(nu.weights), "kind": "origin"})
    return Verdict(True)


def partial_diagram_system(support, char=0) -> DiagramSystem:
    support = support if isinstance(support, SupportSet) else SupportSet.of(support)
    n = support.ambient_dim
    out = []
    for i in range(n):
        pts = [p[:i] + (p[i] - 1,) + p[i + 1:] for p in support
               if p[i] >= 1 and (char == 0 or p[i] % char)]
        out.append(diagram_of(pts, n))
    return DiagramSystem(tuple(out), n)


def kushnirenko_solve(support, char=0) -> dict:
    """Minimal Milnor number over polynomials with the given support."""
    system = partial_diagram_system(support, char)
    status = mult0_finiteness(system)
    if status == "infinite":
        return {"finite": False, "min_milnor": INF, "status": status}
    result = mult0_generic(system)
    return {"finite": True, "min_milnor": result.value, "status": status,
            "ledger": result.term_ledger}


def check_partial_milnor(f) -> Verdict:
    if f.is_zero():
        raise ValueError("the zero polynomial has no Milnor number")
    n = f.n
    partials = [partial_derivative(f, i) for i in range(1, n + 1)]
    system = DiagramSystem(tuple(diagram_of(g.support(), n) for g in partials), n)
    status = mult0_finiteness(system)
    generic = partial_diagram_system(SupportSet.of(f.support()), f.field.characteristic)
    generic_value = mult0_generic(generic).value
    info = {"status": status, "generic_value": generic_value}
    if status == "infinite":
        info["value"] = INF
        return Verdict(False, {"reason": "infinite multiplicity profile"}, info)
    info["value"] = mult0_generic(system).value
    info["matches_generic"] = info["value"] == generic_value
    verdict = check_G_nondegenerate(partials)
    verdict.info.update(info)
    return verdict


def _jacobian(g):
    return [partial_derivative(g, i) for i in range(1, g.n + 1)]


def check_newton_nondegenerate(f) -> Verdict:
    """Partials of every initial form In_nu(f), nu > 0, avoid the torus."""
    if f.is_zero():
        raise ValueError("Newton non-degeneracy of the zero polynomial")
    n = f.n
    if (0,) * n in f.terms:
        return Verdict(True, info={"note": "f is a unit at the origin"})
    for nu, _ in compact_faces(f.support(), n):
        form = initial_form(nu, f)
        if torus_has_common_zero(_jacobian(form)):
            return Verdict(False, {"I": list(range(1, n + 1)), "weight": list(nu), "kind": "origin"})
    return Verdict(True)


def is_c_polytope(P: NewtonDiagram) -> bool:
    n = P.n
    for i in range(n):
        if not any(p[i] > 0 and all(p[j] == 0 for j in range(n) if j != i) for p in P.generators):
            return False
    return True


def check_inner_newton_nondegenerate(f, P=None) -> Verdict:
    """Inner non-degeneracy with respect to a C-polytope (default nd(f))."""
    n = f.n
    diagram = diagram_of(f.support(), n) if P is None else diagram_of(
        P.vertices if hasattr(P, "vertices") else P, n)
    if not is_c_polytope(diagram):
        raise ValueError("not a C-polytope: some coordinate axis is missed")
    below = [a for a in f.support() if is_below(a, diagram)]
    if below:
        raise ValueError(f"support point {below[0]} lies below the polytope")
    for nu, verts in compact_faces(diagram.generators, n):
        if not all(any(v[i] > 0 for v in verts) for i in range(n)):
            continue  # face inside a coordinate subspace
        level = value(nu, diagram)
        form = f.with_terms([a for a in f.terms if sum(x * y for x, y in zip(nu, a)) == level])
        jac = _jacobian(form)
        for I in subsets(n):
            if not any(all(v[j] == 0 for j in range(n) if j + 1 not in I) for v in verts):
                continue
            restricted = [g.restrict(I) for g in jac]
            if torus_has_common_zero(restricted):
                return Verdict(False, {"I": sorted(I), "weight": list(nu), "kind": "origin"})
    return Verdict(True)
