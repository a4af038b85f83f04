import numpy as np
import pytest

from polytrope_config import NegativeCycleError, NotKleeneError, ParseError
from tropical_weight_matrix import (
    WeightMatrix,
    contains_point,
    hrep,
    is_kleene,
    kleene_star,
    parse_matrix,
    permute,
    require_kleene,
    scale,
    vertex_of_facets,
)


def test_hexagon_is_its_own_star(hexagon):
    assert kleene_star(hexagon) == hexagon
    assert is_kleene(hexagon)


def test_shortcut_through_third_node():
    W = WeightMatrix(((0, 100, 2), (3, 0, 4), (5, 6, 0)))
    star = kleene_star(W)
    assert star.c(1, 2) == 8
    assert not is_kleene(W)
    with pytest.raises(NotKleeneError):
        require_kleene(W)


def test_star_is_idempotent(random_star):
    for n in (3, 4, 5):
        W = random_star(n)
        assert kleene_star(W) == W


def test_negative_two_cycle_is_reported():
    W = WeightMatrix(((0, -1), (0, 0)))
    with pytest.raises(NegativeCycleError) as excinfo:
        kleene_star(W)
    assert excinfo.value.weight == -1
    assert sorted(excinfo.value.cycle) == [0, 1]
    assert excinfo.value.exit_code == 2
    assert not is_kleene(W)


def test_negative_three_cycle_witness():
    W = WeightMatrix(((0, 1, 5), (5, 0, -3), (1, 5, 0)))
    with pytest.raises(NegativeCycleError) as excinfo:
        kleene_star(W)
    cycle = excinfo.value.cycle
    total = sum(W.array[cycle[t], cycle[(t + 1) % len(cycle)]] for t in range(len(cycle)))
    assert total == excinfo.value.weight < 0


def test_zero_weight_cycle_is_allowed():
    W = WeightMatrix(((0, 2), (-2, 0)))
    assert is_kleene(W)
    assert hrep(W).is_point()


def test_hrep_lists_every_facet(hexagon):
    H = hrep(hexagon)
    assert len(H.inequalities) == 6
    assert H.box() == [(-5, 2), (-6, 4)]
    assert "x_1 - x_2 <= 3" in H.describe()
    assert "-x_2 <= 6" in H.describe()


def test_contains_point(hexagon):
    assert contains_point(hexagon, (0, 0))
    assert contains_point(hexagon, (2, 4))
    assert not contains_point(hexagon, (3, 0))
    assert not contains_point(hexagon, (-5, 2))
    with pytest.raises(ValueError):
        contains_point(hexagon, (0, 0, 0))


def test_hexagon_vertices(hexagon):
    # x3 = 0; facets named by their tight pairs
    assert vertex_of_facets(hexagon, [(3, 1), (3, 2)]) == (-5, -6)
    assert vertex_of_facets(hexagon, [(1, 3), (2, 3)]) == (2, 4)
    assert vertex_of_facets(hexagon, [(1, 2), (1, 3)]) == (2, -1)


def test_permute_relabels_rows_and_columns(hexagon):
    P = permute(hexagon, (1, 2, 0))
    assert P.c(2, 3) == hexagon.c(1, 2)
    assert P.c(1, 2) == hexagon.c(3, 1)
    assert is_kleene(P)
    with pytest.raises(ValueError):
        permute(hexagon, (0, 1, 1))


def test_kleene_star_commutes_with_relabelling(rng):
    for n in (3, 4, 5):
        for _ in range(5):
            array = rng.integers(1, 13, size=(n, n))
            np.fill_diagonal(array, 0)
            W = WeightMatrix.from_array(array)
            perm = [int(i) for i in rng.permutation(n)]
            assert kleene_star(permute(W, perm)) == permute(kleene_star(W), perm)


def test_scale_dilates(hexagon):
    assert scale(hexagon, 3).c(3, 2) == 18
    assert is_kleene(scale(hexagon, 3))


@pytest.mark.parametrize("text", ["0 3 2\n3 0 4\n5 6 0", "[[0, 3, 2], [3, 0, 4], [5, 6, 0]]"])
def test_parse_matrix_formats(text, hexagon):
    assert parse_matrix(text) == hexagon


@pytest.mark.parametrize("text", ["0 1\n1 1", "0 1 2\n1 0", "0 x\n1 0", "[[0, 1.5], [1, 0]]", ""])
def test_parse_matrix_rejects(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


def test_weight_matrix_validation():
    with pytest.raises(ValueError):
        WeightMatrix(((0,),))
    W = WeightMatrix.from_vector(3, (3, 2, 3, 4, 5, 6))
    assert W.weight_vector() == (3, 2, 3, 4, 5, 6)
    assert np.array_equal(W.array, np.array([[0, 3, 2], [3, 0, 4], [5, 6, 0]]))
