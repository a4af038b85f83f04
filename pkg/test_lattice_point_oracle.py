from fractions import Fraction

import pytest

from ehrhart_todd_transformer import polynomial_triple, univariate
from lattice_point_oracle import (
    DilateCounts,
    box_size,
    count_lattice_points,
    dilate_counts,
    hstar_bruteforce,
    interpolate_ehrhart,
    normalized_volume_bruteforce,
)
from polytrope_config import EnumerationCapError, NotKleeneError
from tropical_weight_matrix import WeightMatrix, scale


def test_hexagon_counts(hexagon):
    assert count_lattice_points(hexagon, 0) == 1
    assert count_lattice_points(hexagon, 1) == 52
    assert count_lattice_points(hexagon, 2) == 182


def test_box_size(hexagon):
    assert box_size(hexagon, 1) == 8 * 11
    assert box_size(hexagon, 2) == 15 * 21


def test_segment_counts(segment):
    assert dilate_counts(segment, 3).counts == (1, 3, 5, 7)


def test_threads_do_not_change_the_count(example_3d):
    single = count_lattice_points(example_3d, 2, threads=1)
    assert count_lattice_points(example_3d, 2, threads=4) == single


def test_cap_is_enforced(hexagon):
    with pytest.raises(EnumerationCapError) as excinfo:
        count_lattice_points(hexagon, 2, cap=100)
    assert excinfo.value.box_size == 315
    assert excinfo.value.exit_code == 4


def test_rejects_negative_dilate_and_non_kleene(hexagon):
    with pytest.raises(ValueError):
        count_lattice_points(hexagon, -1)
    with pytest.raises(NotKleeneError):
        count_lattice_points(WeightMatrix(((0, 100, 2), (3, 0, 4), (5, 6, 0))), 1)


def test_interpolation_of_hexagon(hexagon):
    ehr = interpolate_ehrhart(hexagon)
    assert ehr.render() == "79/2*k^2 + 23/2*k + 1"
    assert normalized_volume_bruteforce(hexagon) == 79


def test_hstar_from_counts(hexagon):
    assert hstar_bruteforce(hexagon) == (1, 49, 29)
    assert hstar_bruteforce(hexagon, counts=DilateCounts((1, 52, 182))) == (1, 49, 29)


@pytest.mark.parametrize("n", [3, 4])
def test_oracle_agrees_with_todd_pipeline(random_star, n):
    for _ in range(3):
        W = random_star(n)
        triple = polynomial_triple(W)
        ehr = univariate(triple.ehrhart.multivariate, W)
        counts = dilate_counts(W, 4)
        for k in range(1, 5):
            assert ehr(k) == counts[k]
        assert triple.hstar.evaluate_at(W) == tuple(Fraction(h) for h in hstar_bruteforce(W, counts=counts))


def test_dilate_equals_scaled_star(random_star):
    for n in (3, 4):
        W = random_star(n, high=5)
        for k in (2, 3):
            assert count_lattice_points(W, k) == count_lattice_points(scale(W, k), 1)
