from itertools import permutations

import pytest

from cohomology_volume_integrator import volume_polynomial
from ehrhart_todd_transformer import polynomial_triple, univariate
from exact_polynomial_algebra import VarSet, parse, permute_variables
from fundamental_polytope_subdivision import (
    central_subdivision,
    coefficient_affine_rank,
    fundamental_polytope,
    fundamental_volume_reference,
    star_monomials,
    verify_coefficients_3d,
    verify_coefficients_4d,
)
from groebner_ideal_engine import MonomialIdeal, initial_ideal
from lattice_point_oracle import dilate_counts
from tropical_weight_matrix import WeightMatrix

A4 = VarSet.a(4)


def coefficient(V, text):
    (mono,) = parse(text, A4).terms
    return V.normalized.coefficient(mono)


@pytest.mark.parametrize("n, vertices, facets, volume", [(3, 6, 6, 6), (4, 12, 14, 20), (5, 20, 30, 70)])
def test_fundamental_polytope_shape(n, vertices, facets, volume):
    FP = fundamental_polytope(n)
    assert FP.coordinates().shape == (vertices, n - 1)
    assert len(FP.facets()) == facets
    assert fundamental_volume_reference(n) == volume


def test_fp4_facets():
    FP = fundamental_polytope(4)
    assert len(FP.triangle_facets()) == 8
    squares = FP.square_facets()
    assert [s.label for s in squares] == ["S1", "S2", "S3", "S4", "S5", "S6"]
    assert all(len(s.vertices) == 4 for s in squares)
    with pytest.raises(ValueError):
        fundamental_polytope(3).square_facets()
    with pytest.raises(ValueError):
        fundamental_polytope(2)


def test_subdivision_of_maximal_3d_star(example_3d):
    S = central_subdivision(example_3d)
    assert S.is_triangulation()
    assert S.is_central()
    assert len(S.cells) == 20
    assert sum(S.cell_volumes()) == 20
    assert all(S.degree(v) in (5, 6, 7) for v in range(S.origin))
    records = S.square_diagonals()
    assert not any(r['tie'] for r in records)
    assert all(r['chosen_is_edge'] for r in records)
    assert set(S.vertex_table()['degree']) <= {5, 6, 7}
    assert S.cell_table()['normalized_volume'].sum() == 20


def test_subdivision_of_hexagon_star(hexagon):
    S = central_subdivision(hexagon)
    assert S.is_triangulation()
    assert sum(S.cell_volumes()) == 6
    assert S.point_name(S.origin) == "0"
    assert S.point_name(0) == "e1-e2"


def test_equal_weights_leave_squares_untriangulated():
    ones = WeightMatrix(tuple(tuple(0 if i == j else 1 for j in range(4)) for i in range(4)))
    S = central_subdivision(ones)
    assert not S.is_triangulation()
    assert all(r['tie'] for r in S.square_diagonals())
    assert sum(S.cell_volumes()) == 20
    report = verify_coefficients_3d(volume_polynomial(ones), S)
    assert not report.passed


def test_coefficients_of_the_worked_example(example_3d):
    V = volume_polynomial(example_3d)
    found = [coefficient(V, m) for m in ("a_12^3", "a_12^2*a_14", "a_32^2*a_42", "a_31*a_32*a_41")]
    assert found == [0, 0, -3, 0]
    report = verify_coefficients_3d(V, central_subdivision(example_3d))
    assert report.passed, report.first_failure
    assert report.class_sums == {"3": 12, "2+1": -108, "1+1+1": 120}


def test_reflection_flips_the_diagonals(example_3d, reflected_3d):
    V = volume_polynomial(reflected_3d)
    found = [coefficient(V, m) for m in ("a_12^3", "a_12^2*a_14", "a_32^2*a_42", "a_31*a_32*a_41")]
    assert found == [2, -3, 0, 6]
    S, T = central_subdivision(example_3d), central_subdivision(reflected_3d)
    for original, flipped in zip(S.square_diagonals(), T.square_diagonals()):
        assert original['chosen'] != flipped['chosen']
    assert verify_coefficients_3d(V, T).passed


def test_representatives_are_distinct_and_consistent(representatives_3d):
    volumes = []
    for label, W in representatives_3d:
        V = volume_polynomial(W)
        report = verify_coefficients_3d(V, central_subdivision(W))
        assert report.passed, f"{label}: {report.first_failure}"
        volumes.append(V.normalized)
    assert len({str(v) for v in volumes}) == len(volumes) == 6
    assert coefficient_affine_rank(volumes) >= 1


def _orbit(M):
    """Keys of every relabelling of a monomial ideal under S_n."""
    orbit = set()
    for perm in permutations(range(M.varset.n)):
        monos = [permute_variables(g, perm).monomials()[0] for g in M.as_polynomials()]
        orbit.add(MonomialIdeal.from_monomials(M.varset, monos).key())
    return frozenset(orbit)


def test_representatives_are_distinct_types(representatives_3d, example_3d):
    assert representatives_3d[0][1] == example_3d
    orbits = [_orbit(initial_ideal(W)) for _, W in representatives_3d]
    for i in range(len(orbits)):
        for j in range(i + 1, len(orbits)):
            assert not orbits[i] & orbits[j], f"{representatives_3d[i][0]} and {representatives_3d[j][0]}"


def test_representatives_agree_with_the_oracle(representatives_3d):
    for label, W in representatives_3d:
        ehr = univariate(polynomial_triple(W).ehrhart.multivariate, W)
        counts = dilate_counts(W, 3)
        assert [ehr(k) for k in range(4)] == list(counts.counts), label


def test_corrupted_coefficient_is_reported(example_3d):
    V = volume_polynomial(example_3d)
    S = central_subdivision(example_3d)
    broken = V.normalized + parse("a_12^3", A4)
    report = verify_coefficients_3d(type(V)(broken, V.euclidean, example_3d, V.tie_flag, V.initial), S)
    assert not report.passed
    assert report.first_failure.startswith("a_12^3")


def test_3d_check_needs_n_equal_4(hexagon):
    with pytest.raises(ValueError):
        verify_coefficients_3d(volume_polynomial(hexagon), central_subdivision(hexagon))


def test_star_monomials():
    monos = star_monomials(5)
    assert len(monos) == 10
    assert all(sum(e for _, e in m) == 4 for m in monos)


def test_affine_rank_of_identical_polynomials(hexagon):
    V = volume_polynomial(hexagon).normalized
    assert coefficient_affine_rank([V]) == 0
    assert coefficient_affine_rank([V, V]) == 0


@pytest.mark.slow
def test_4d_representatives(representatives_4d):
    for label, W in representatives_4d:
        V = volume_polynomial(W)
        S = central_subdivision(W)
        assert S.is_triangulation()
        assert sum(S.cell_volumes()) == 70
        report = verify_coefficients_4d(V, S)
        assert report.passed, f"{label}: {report.first_failure}"
