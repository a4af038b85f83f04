from fractions import Fraction

import pytest

from cohomology_volume_integrator import volume_polynomial
from ehrhart_todd_transformer import (
    EhrhartPolynomial,
    bernoulli_table,
    ehrhart_from_hstar,
    eulerian_table,
    hstar_transform,
    polynomial_triple,
    todd_apply,
    univariate,
)
from exact_polynomial_algebra import VarSet, parse
from polytrope_config import DomainMismatchError

A2, A3 = VarSet.a(2), VarSet.a(3)


def test_bernoulli_and_todd_coefficients():
    table = bernoulli_table(6)
    assert table.values[:5] == (1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30))
    assert table.todd_coefficient(1) == Fraction(1, 2)
    assert table.todd_coefficient(2) == Fraction(1, 12)
    assert table.todd_coefficient(3) == 0


def test_eulerian_polynomials():
    table = eulerian_table(4)
    assert table.polynomials[:4] == ((1,), (0, 1), (0, 1, 1), (0, 1, 4, 1))
    assert table.polynomials[4] == (0, 1, 11, 11, 1)
    # A_1(t)(1 - t) for d = 2
    assert table.basis_row(1, 2) == (0, 1, -1)
    assert table.basis_row(0, 2) == (1, -2, 1)


def test_todd_on_hexagon(hexagon):
    V = volume_polynomial(hexagon)
    ehr = todd_apply(V.euclidean, 2)
    linear = parse("1/2*(a_12 + a_13 + a_21 + a_23 + a_31 + a_32)", A3)
    assert ehr.multivariate == V.euclidean + linear + 1
    assert ehr.constant_term_is_one()
    assert ehr.count(hexagon) == 52
    assert ehr.count(hexagon, 2) == 182


def test_hexagon_univariate_ehrhart(hexagon):
    triple = polynomial_triple(hexagon, use_cache=False)
    assert univariate(triple.ehrhart.multivariate, hexagon).render() == "79/2*t^2 + 23/2*t + 1"
    assert univariate(triple.volume.normalized, hexagon).render() == "79*t^2"


def test_hexagon_hstar(hexagon):
    triple = polynomial_triple(hexagon)
    assert triple.hstar.evaluate_at(hexagon) == (1, 49, 29)
    assert univariate(triple.hstar, hexagon).render() == "29*t^2 + 49*t + 1"
    assert sum(triple.hstar.evaluate_at(hexagon)) == triple.volume.value()
    assert triple.summary()['points'] == 52


def test_segment_end_to_end(segment):
    triple = polynomial_triple(segment)
    assert triple.volume.normalized == parse("a_12 + a_21", A2)
    assert triple.ehrhart.multivariate == parse("a_12 + a_21 + 1", A2)
    h0, h1 = triple.hstar.coefficients
    assert h0 == 1
    assert h1 == parse("a_12 + a_21 - 1", A2)
    assert triple.hstar.evaluate_at(segment) == (1, 1)


def test_truncation_order_does_not_matter(hexagon, example_3d):
    for W in (hexagon, example_3d):
        V = volume_polynomial(W)
        d = V.dimension
        assert todd_apply(V.euclidean, d).multivariate == todd_apply(V.euclidean, d, order=d + 3).multivariate


def test_binomial_basis_identity(example_3d):
    triple = polynomial_triple(example_3d)
    h = triple.hstar.evaluate_at(example_3d)
    ehr = univariate(triple.ehrhart.multivariate, example_3d)
    for k in range(6):
        assert ehrhart_from_hstar(h, k) == ehr(k)
    assert all(v >= 0 and Fraction(v).denominator == 1 for v in h)
    assert h[0] == 1


def test_todd_needs_rational_a_polynomial(hexagon):
    with pytest.raises(DomainMismatchError):
        todd_apply(parse("x_12", VarSet.x(3)), 2)


def test_hstar_transform_of_constant_polytope():
    point = EhrhartPolynomial(parse("1", A3), 0)
    assert [str(h) for h in hstar_transform(point).coefficients] == ["1"]
