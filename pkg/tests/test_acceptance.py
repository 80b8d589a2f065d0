"""One test per acceptance criterion; the terminal summary prints PASS/FAIL lines."""
import random
import time

import pytest

from conftest import ACCEPTANCE
from newtonbkk import geometry, local, newton
from newtonbkk.affine import bkk_extended, check_P_nondegenerate, classify_subspaces
from newtonbkk.geometry import convex_hull, lattice_volume, minkowski_sum, mixed_volume
from newtonbkk.local import (
    check_G_nondegenerate,
    kushnirenko_solve,
    mult0_finiteness,
    mult0_generic,
    mult0_generic_alt,
)
from newtonbkk.newton import WeightVector, diagram_of, infinity_weights_for, initial_form
from newtonbkk.polysys import (
    GF,
    mora_local_length,
    parse_polynomial,
    sample_admissible,
    torus_has_common_zero,
    torus_root_count,
)

F = GF(32003)
EX0 = [[(1, 0, 0), (0, 1, 0), (0, 0, 1)],
       [(3, 0, 0), (1, 0, 2), (0, 3, 0), (0, 1, 2)],
       [(2, 0, 0), (1, 0, 2), (0, 2, 0), (0, 1, 2)]]
TETRAHEDRON = [(0, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 1)]


def record(number, ok, detail=""):
    ACCEPTANCE[number] = (bool(ok), detail)
    return ok


def clear_caches():
    geometry._hull_cached.cache_clear()
    newton._orthant_polyhedron.cache_clear()
    local._mult0_cached.cache_clear()


def test_criterion_01_ex0_multiplicity():
    clear_caches()
    start = time.perf_counter()
    result = mult0_generic([diagram_of(s) for s in EX0])
    elapsed = time.perf_counter() - start
    terms = {tuple(e["I"]): e for e in result.term_ledger}
    full = [(t["weight"], t["value"], t["mv"]) for t in terms[(1, 2, 3)]["star_terms"]]
    single = terms[(3,)]
    ok = (result.value == 6 and full == [([1, 1, 1], 1, 4), ([2, 2, 1], 1, 1)]
          and single["factor"] * single["star"] == 1 and elapsed < 1)
    record(1, ok, f"value={result.value} time={elapsed:.3f}s")
    assert ok


def test_criterion_02_ex0_bkk():
    clear_caches()
    start = time.perf_counter()
    result = bkk_extended([convex_hull(s) for s in EX0])
    elapsed = time.perf_counter() - start
    terms = {tuple(e["I"]): e for e in result.term_ledger}
    full = [(t["weight"], t["value"], t["mv"]) for t in terms[(1, 2, 3)]["infinity_terms"]]
    ok = (result.value == 9 and full == [([1, 1, 1], 1, 2), ([2, 2, 1], 2, 3)]
          and terms[(3,)]["contribution"] == 1 and elapsed < 1)
    record(2, ok, f"value={result.value} time={elapsed:.3f}s")
    assert ok


def test_criterion_03_tetrahedron():
    value = lattice_volume(convex_hull(TETRAHEDRON))
    record(3, value == 2, f"value={value}")
    assert value == 2


def test_criterion_04_hulled_counterexamples():
    start = time.perf_counter()
    rows = []
    for k in (1, 2, 3):
        third = convex_hull([(1, 0, k), (0, 0, 0)])
        lin = convex_hull([(1, 0, 0), (0, 1, 0)])
        lin0 = convex_hull([(1, 0, 0), (0, 1, 0), (0, 0, 0)])
        quad = convex_hull([(1, 0, 0), (0, 1, 0), (2, 0, 0)])
        quad0 = convex_hull([(1, 0, 0), (0, 1, 0), (2, 0, 0), (0, 0, 0)])
        rows.append((bkk_extended([lin, lin, third]).value, mixed_volume([lin0, lin0, third]),
                     bkk_extended([quad, quad, third]).value, mixed_volume([quad0, quad0, third])))
    elapsed = time.perf_counter() - start
    ok = rows == [(0, k, k, 2 * k) for k in (1, 2, 3)] and elapsed < 5
    record(4, ok, f"rows={rows} time={elapsed:.3f}s")
    assert ok


@pytest.mark.xfail(strict=True, reason="the polynomial is smooth at the origin, so its Milnor number is 0")
def test_criterion_05_kushnirenko():
    smooth = kushnirenko_solve([(1, 0, 0), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3)], 0)
    monomial = kushnirenko_solve([(2, 2, 2)], 0)
    ok = smooth["finite"] and smooth["min_milnor"] == 1 and not monomial["finite"]
    record(5, ok, f"x1+(x2+x3)^3 -> {smooth['min_milnor']} (expected 1); "
                  f"single monomial finite={monomial['finite']}")
    assert ok


def test_criterion_05_observed_values():
    # what the criterion measures, cross-checked by Mora on the Jacobian ideal
    f = parse_polynomial("x1 + x2^3 + 3*x2^2*x3 + 3*x2*x3^2 + x3^3", 3, F)
    from newtonbkk.polysys import partial_derivative
    assert mora_local_length([partial_derivative(f, i) for i in (1, 2, 3)]) == 0
    assert kushnirenko_solve(f.support(), 0)["min_milnor"] == 0
    assert not kushnirenko_solve([(2, 2, 2)], 0)["finite"]


def _families(cls):
    return sorted(sorted(I) for I in cls if I)


def test_criterion_06_classification():
    T = convex_hull(TETRAHEDRON)
    Z = convex_hull([(a, b, c + 1) for a, b, c in TETRAHEDRON])
    b_T = _families(classify_subspaces([T, T, Z]).T)

    def poly(text):
        return parse_polynomial(text, 4, F)
    x3, x4 = poly("x3"), poly("x4")
    c_polys = [poly("1+2*x1-3*x2"), poly("2-5*x1+3*x2^2"),
               x3 * poly("x1-x2") + x4 * poly("1+4*x1+x2"),
               x3 * poly("3*x1-2-x2") + x4 * poly("2+x1*x2")]
    c_T = _families(classify_subspaces([convex_hull(f.support(), 4) for f in c_polys]).T)
    ex0 = classify_subspaces([convex_hull(s) for s in EX0])
    ok = (b_T == [[1, 2]] and c_T == [[1, 2, 3, 4]] and ex0.E == []
          and _families(ex0.I1) == [[1, 2, 3], [3]])
    record(6, ok, f"b T={b_T} c T={c_T} ex0 E={ex0.E} I1={_families(ex0.I1)}")
    assert ok


def _witness_holds(fs, witness):
    kind = "degree" if witness["kind"] == "infinity" else "valuation"
    w = WeightVector(tuple(witness["I"]), tuple(witness["weight"]), kind)
    gs = [f.restrict(frozenset(witness["I"])) for f in fs]
    return torus_has_common_zero([initial_form(w, g) for g in gs if not g.is_zero()])


def test_criterion_07_witnesses():
    coeffs = [(3, 5, 7, 11), (3, 5, 19, 23), (3, 5, 37, 41)]
    b3 = []
    for j, (a, b, c, d) in enumerate(coeffs):
        z = 1 if j == 2 else 0
        b3.append(parse_polynomial(
            f"{a}*x3^{z} + {b}*x1*x2*x3^{z} + {c}*x2*x3^{1 + z} + {d}*x1*x3^{1 + z}", 3, F))
    start = time.perf_counter()
    vb = check_P_nondegenerate(b3)
    tb = time.perf_counter() - start
    ok_b = (not vb.nondegenerate and vb.witness["kind"] == "infinity"
            and vb.witness["I"] == [1, 2, 3] and _witness_holds(b3, vb.witness) and tb < 30)

    def poly(text):
        return parse_polynomial(text, 4, F)
    x3, x4 = poly("x3"), poly("x4")
    c2 = [poly("1+2*x1-3*x2"), poly("2-5*x1+3*x2^2"),
          x3 * poly("x1-x2") + x4 * poly("1+4*x1+x2"),
          x3 * poly("3*x1-2-x2") + x4 * poly("2+x1*x2")]
    start = time.perf_counter()
    vc = check_P_nondegenerate(c2)
    tc = time.perf_counter() - start
    zeros = [i for i, w in zip(vc.witness["I"], vc.witness["weight"]) if w == 0] if vc.witness else None
    ok_c = (not vc.nondegenerate and vc.witness["kind"] == "centered" and zeros == [1, 2]
            and _witness_holds(c2, vc.witness) and tc < 30)
    record(7, ok_b and ok_c, f"b={vb.witness} ({tb:.2f}s) c={vc.witness} ({tc:.2f}s)")
    assert ok_b and ok_c


def random_support(rng, n, max_points=6, high=3):
    pts = set()
    for i in range(n):
        if rng.random() < 0.85:
            pts.add(tuple(rng.randint(1, high) if j == i else 0 for j in range(n)))
    while len(pts) < max_points and rng.random() < 0.6:
        e = tuple(rng.randint(0, high) for _ in range(n))
        if any(e):
            pts.add(e)
    if not pts:
        pts.add(tuple(1 if j == 0 else 0 for j in range(n)))
    return sorted(pts)


def test_criterion_08_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(2024)
    supports_checked = 0
    comparisons = 0
    mismatches = []
    while supports_checked < 24:
        n = 2 if supports_checked % 2 == 0 else 3
        supports = [random_support(rng, n) for _ in range(n)]
        diagrams = [diagram_of(s, n) for s in supports]
        if mult0_finiteness(diagrams) != "finite":
            continue
        expected = mult0_generic(diagrams).value
        for seed in range(1, 6):
            fs = sample_admissible(supports, F, seed=seed)
            if check_G_nondegenerate(fs).nondegenerate:
                comparisons += 1
                actual = mora_local_length(fs)
                if actual != expected:
                    mismatches.append((supports, seed, expected, actual))
        supports_checked += 1
    degenerate = []
    pair = ["x1^2 - x2^2", "x1^2 + x1*x2 - 2*x2^2 + x1^3"]
    for n, texts in ((2, pair), (3, pair + ["x3 + x1*x2"])):
        fs = [parse_polynomial(t, n, F) for t in texts]
        generic = mult0_generic([diagram_of(f.support(), n) for f in fs]).value
        degenerate.append((n, mora_local_length(fs), generic, check_G_nondegenerate(fs).nondegenerate))
    elapsed = time.perf_counter() - start
    ok = (not mismatches and comparisons >= 60 and elapsed < 600
          and all(mora > generic and not passed for _, mora, generic, passed in degenerate))
    record(8, ok, f"supports={supports_checked} comparisons={comparisons} mismatches={len(mismatches)} "
                  f"degenerate={degenerate} time={elapsed:.1f}s")
    assert ok, mismatches[:3]


def test_criterion_09_internal_identities():
    rng = random.Random(99)
    alt_checked, alt_bad = 0, 0
    while alt_checked < 100:
        n = rng.choice((2, 3))
        diagrams = [diagram_of(random_support(rng, n, 5), n) for _ in range(n)]
        if mult0_finiteness(diagrams) == "infinite":
            continue
        alt_checked += 1
        if mult0_generic(diagrams).value != mult0_generic_alt(diagrams).value:
            alt_bad += 1

    def random_polytope(n, count=4, high=3):
        return convex_hull({tuple(rng.randint(0, high) for _ in range(n)) for _ in range(count)}, n)

    path_bad = 0
    for trial in range(50):
        n = 2 + trial % 3
        Ps = [random_polytope(n, high=2) for _ in range(n)]
        if mixed_volume(Ps) != mixed_volume(Ps, method="recursive"):
            path_bad += 1
    prop_bad = 0
    for trial in range(50):
        n = 2 + trial % 2
        Ps = [random_polytope(n) for _ in range(n)]
        value = mixed_volume(Ps)
        permuted = Ps[1:] + Ps[:1]
        shift = tuple(rng.randint(-3, 3) for _ in range(n))
        moved = convex_hull([tuple(a + b for a, b in zip(v, shift)) for v in Ps[0].vertices], n)
        extra = random_polytope(n)
        linear = mixed_volume([minkowski_sum(Ps[0], extra)] + Ps[1:])
        if (mixed_volume(permuted) != value or mixed_volume([moved] + Ps[1:]) != value
                or linear != value + mixed_volume([extra] + Ps[1:])):
            prop_bad += 1
    ok = alt_bad == 0 and path_bad == 0 and prop_bad == 0
    record(9, ok, f"alt mismatches={alt_bad}/100 path mismatches={path_bad}/50 "
                  f"property failures={prop_bad}/50")
    assert ok


def _torus_nondegenerate(fs, n):
    polys = [convex_hull(f.support(), n) for f in fs]
    for omega in infinity_weights_for(polys, n, "all", torus=True):
        if torus_has_common_zero([initial_form(omega, f) for f in fs]):
            return False
    return True


def test_criterion_10_bernstein():
    rng = random.Random(31)
    checked, bad, rows = 0, 0, []
    attempts = 0
    while checked < 10 and attempts < 200:
        attempts += 1
        n = 2 if checked < 6 else 3
        high = 2
        supports = [sorted({tuple(rng.randint(0, high) for _ in range(n)) for _ in range(4)})
                    for _ in range(n)]
        Ps = [convex_hull(s, n) for s in supports]
        if any(P.dim < n for P in Ps):
            continue
        fs = sample_admissible(supports, F, seed=attempts)
        if not _torus_nondegenerate(fs, n):
            continue
        count, mv = torus_root_count(fs), mixed_volume(Ps)
        rows.append((n, count, mv))
        bad += count != mv
        checked += 1
    ok = checked == 10 and bad == 0
    record(10, ok, f"systems={checked} mismatches={bad} (n, roots, mv)={rows}")
    assert ok
