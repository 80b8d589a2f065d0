import math

import pytest

from newtonbkk.geometry import convex_hull, lattice_volume, relative_mixed_volume, kernel_lattice_basis
from newtonbkk.newton import (
    SupportSet,
    WeightVector,
    candidate_weights_centered,
    candidate_weights_infinity,
    candidate_weights_origin,
    compact_faces,
    compatible_extension,
    diagram_of,
    initial_face,
    initial_form,
    is_below,
    nonempty_indices,
    project,
    restrict,
    subsets,
    value,
)
from newtonbkk.polysys import GF, parse_polynomial

EX0 = [[(1, 0, 0), (0, 1, 0), (0, 0, 1)],
       [(3, 0, 0), (1, 0, 2), (0, 3, 0), (0, 1, 2)],
       [(2, 0, 0), (1, 0, 2), (0, 2, 0), (0, 1, 2)]]


def test_support_set_validation():
    s = SupportSet.of([(1, 0), (0, 2), (1, 0)])
    assert s.points == ((0, 2), (1, 0)) and len(s) == 2
    with pytest.raises(ValueError):
        SupportSet.of([(1, -1)])
    with pytest.raises(ValueError):
        SupportSet(2, ((1, 2, 3),))


def test_diagram_keeps_only_lower_vertices():
    d = diagram_of([(3, 0), (1, 1), (0, 3), (2, 2), (4, 0)])
    assert d.generators == ((0, 3), (1, 1), (3, 0))
    assert is_below((0, 2), d) and not is_below((1, 1), d) and not is_below((2, 1), d)
    # a point on a compact edge is not a vertex
    assert diagram_of([(2, 0), (1, 1), (0, 2)]).generators == ((0, 2), (2, 0))
    assert diagram_of([(0, 0), (1, 1)]).contains_origin


def test_weight_vector_is_primitive():
    w = WeightVector((1, 2), (4, 6))
    assert w.weights == (2, 3) and w.centered_at_origin
    assert WeightVector((1, 2), (1, -1), "degree").centered_at_infinity
    with pytest.raises(ValueError):
        WeightVector((1,), (1, 2))


def test_value_conventions():
    d = diagram_of([(2, 0), (0, 3)])
    assert value(WeightVector((1, 2), (3, 2)), d) == 6
    assert value(WeightVector((1, 2), (1, -1)), d) == -math.inf
    assert value(WeightVector((1, 2), (1, 1), "degree"), d) == math.inf
    P = convex_hull([(2, 0), (0, 3), (1, 1)])
    assert value(WeightVector((1, 2), (1, 1), "degree"), P) == 3


def test_initial_form_and_face():
    F = GF(32003)
    f = parse_polynomial("x1^2 + x1*x2 + x2^3 + x1^3", 2, F)
    nu = WeightVector((1, 2), (1, 1))
    assert sorted(initial_form(nu, f).terms) == [(1, 1), (2, 0)]
    omega = WeightVector((1, 2), (1, 1), "degree")
    assert sorted(initial_form(omega, f).terms) == [(0, 3), (3, 0)]
    face = initial_face(nu, convex_hull(f.support()))
    assert face.vertices == ((1, 1), (2, 0))


def test_restrict_and_project():
    d = diagram_of(EX0[1])
    assert restrict(convex_hull(EX0[1]), frozenset({1, 2})).vertices == ((0, 3), (3, 0))
    assert project(d, frozenset({1, 2})).generators == ((0, 1), (1, 0))
    assert nonempty_indices([diagram_of(s) for s in EX0], frozenset({3})) == (1,)


def test_ex0_origin_weights():
    diagrams = [diagram_of(s) for s in EX0]
    weights = candidate_weights_origin(diagrams[1:])
    assert [w.weights for w in weights] == [(1, 1, 1), (2, 2, 1)]
    values = [value(w, diagrams[0]) for w in weights]
    assert values == [1, 1]
    mvs = [relative_mixed_volume([initial_face(w, d) for d in diagrams[1:]],
                                 kernel_lattice_basis(w.weights)) for w in weights]
    assert mvs == [4, 1]


def test_ex0_infinity_weights():
    polys = [convex_hull(s) for s in EX0]
    weights = candidate_weights_infinity(polys[1:])
    assert [w.weights for w in weights] == [(1, 1, 1), (2, 2, 1)]
    assert [value(w, polys[0]) for w in weights] == [1, 2]
    mvs = [relative_mixed_volume([initial_face(w, P) for P in polys[1:]],
                                 kernel_lattice_basis(w.weights)) for w in weights]
    assert mvs == [2, 3]


def test_centered_at_origin_family_equals_origin_mode():
    diagrams = [diagram_of(s) for s in EX0[1:]]
    centered = candidate_weights_centered(diagrams, [frozenset()], (1, 2, 3))
    assert [w.weights for w in centered] == [(1, 1, 1), (2, 2, 1)]


def test_compact_faces_of_a_triangle_diagram():
    faces = compact_faces([(2, 0), (0, 2)], 2)
    reps = [nu for nu, _ in faces]
    # one edge and two vertices
    assert len(faces) == 3 and (1, 1) in reps
    assert all(all(x > 0 for x in nu) for nu in reps)


def test_compatible_extension():
    w = WeightVector((1, 3), (2, 5))
    ext = compatible_extension(w, frozenset({1, 3}), 3, max_coordinate=4)
    assert ext.weights[0] == 2 and ext.weights[2] == 5 and ext.weights[1] > 0


def test_subsets_order():
    assert [sorted(s) for s in subsets(3)] == [[1], [2], [3], [1, 2], [1, 3], [2, 3], [1, 2, 3]]
    assert len(list(subsets(4, nonempty=False))) == 16


def test_lattice_volume_of_simplex():
    assert lattice_volume(convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])) == 1
