import pytest

from cohomology_volume_integrator import quotient_basis
from exact_polynomial_algebra import MultiPoly, VarSet, mono_divides, mono_from_dict, parse
from groebner_ideal_engine import (
    MonomialIdeal,
    TermOrder,
    buchberger,
    initial_ideal,
    is_maximal_type,
    linear_ideal_generators,
    minimal_prime,
    minimal_primes_all,
    normal_form,
    reduce_with_cofactors,
    s_pairs_closed,
    stanley_reisner_facets,
    standard_monomials,
    toric_groebner_basis,
    toric_ideal_generators,
)
from polytrope_config import NotKleeneError, PolytropeConfig
from tropical_weight_matrix import WeightMatrix

X3 = VarSet.x(3)


def x(expr, n=3):
    return parse(expr, VarSet.x(n))


def test_generator_counts():
    assert len(toric_ideal_generators(3)) == 3 + 6
    assert len(toric_ideal_generators(4)) == 6 + 24
    assert toric_ideal_generators(2) == [x("x_12*x_21 - 1", 2)]
    assert len(linear_ideal_generators(4)) == 4


def test_linear_generators_sum_to_zero():
    total = sum(linear_ideal_generators(4)[1:], linear_ideal_generators(4)[0])
    assert total.is_zero()


def test_term_order_prefers_weight_then_grevlex():
    order = TermOrder((3, 2, 3, 4, 5, 6))
    x12, x13 = mono_from_dict({0: 1}), mono_from_dict({1: 1})
    assert order.leading_monomial([x12, x13]) == x12
    flat = TermOrder.grevlex(6)
    assert flat.leading_monomial([x12, x13]) == x13
    # x_12 x_21 and x_13 x_31 weigh 6 and 7
    assert order.leading_monomial([mono_from_dict({0: 1, 2: 1}), mono_from_dict({1: 1, 4: 1})]) == mono_from_dict({1: 1, 4: 1})


def test_basis_of_hexagon_is_reduced_and_closed(hexagon):
    G = toric_groebner_basis(hexagon, check=True)
    assert s_pairs_closed(G)
    leads = G.leading_monomials
    for gen in G.generators:
        assert gen.coefficient(G.order.leading_monomial(gen.terms)) == 1
    for i, lead in enumerate(leads):
        assert not any(mono_divides(other, lead) for j, other in enumerate(leads) if j != i)


def test_normal_form_is_idempotent_and_ideal_members_vanish(hexagon):
    G = toric_groebner_basis(hexagon)
    p = x("x_12^2*x_23 + 3*x_31*x_13 - x_21 + 5")
    r = normal_form(p, G)
    assert normal_form(r, G) == r
    for g in toric_ideal_generators(3):
        assert normal_form(g * p, G).is_zero()


def test_cofactors_reconstruct_the_input(hexagon):
    order = TermOrder.from_matrix(hexagon)
    gens = toric_ideal_generators(3)
    p = x("x_12*x_23*x_31 + x_13^2 - 2")
    cofactors, remainder = reduce_with_cofactors(p, gens, order)
    rebuilt = remainder
    for h, g in zip(cofactors, gens):
        rebuilt = rebuilt + h * g
    assert rebuilt == p


def test_buchberger_on_small_ideal():
    order = TermOrder.grevlex(6)
    G = buchberger([x("x_12^2 - x_13"), x("x_12*x_13 - 1")], order, check=True)
    assert normal_form(x("x_13^2 - x_12"), G).is_zero()
    assert s_pairs_closed(G)


def test_initial_ideal_of_hexagon(hexagon):
    M = initial_ideal(hexagon)
    assert M.is_squarefree()
    assert not M.weight_tie
    facets = stanley_reisner_facets(M)
    assert len(facets) == PolytropeConfig.expected_vertex_count(3) == 6
    assert all(len(f) == 2 for f in facets)
    assert is_maximal_type(hexagon, cross_check=True)


def test_initial_ideal_requires_kleene_star():
    with pytest.raises(NotKleeneError):
        initial_ideal(WeightMatrix(((0, 100, 2), (3, 0, 4), (5, 6, 0))))


def test_square_is_not_maximal(square):
    assert initial_ideal(square).weight_tie
    assert not is_maximal_type(square)


def test_minimal_primes(hexagon):
    M = initial_ideal(hexagon)
    primes = minimal_primes_all(M)
    assert len(primes) == 6
    assert all(len(p) == 4 for p in primes)
    assert minimal_prime(M) in primes
    reversed_prime = minimal_prime(M, order=list(reversed(range(6))))
    # complement of the facet {x_31, x_32}
    assert reversed_prime == frozenset({0, 1, 2, 3})


def test_stanley_reisner_of_a_cycle():
    # the 4-cycle x_12 - x_13 - x_21 - x_23 - x_12 as a complex on 6 vertices
    gens = [mono_from_dict({0: 1, 2: 1}), mono_from_dict({1: 1, 3: 1}),
            mono_from_dict({4: 1}), mono_from_dict({5: 1})]
    M = MonomialIdeal.from_monomials(X3, gens)
    assert stanley_reisner_facets(M) == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_monomial_ideal_is_minimalized():
    M = MonomialIdeal.from_monomials(X3, [mono_from_dict({0: 1}), mono_from_dict({0: 1, 1: 1})])
    assert len(M) == 1
    assert M.contains(mono_from_dict({0: 2, 3: 1}))


def test_standard_monomials_of_quotient(hexagon):
    M = initial_ideal(hexagon)
    G = quotient_basis(hexagon, M)
    top = standard_monomials(G, 2)
    assert top == [mono_from_dict({1: 2})]
    assert standard_monomials(G, 3) == []
    assert len(standard_monomials(G, 1)) == 4


def test_memoized_normal_forms_are_linear(hexagon):
    G = toric_groebner_basis(hexagon)
    p = x("x_12*x_23 + x_31^2")
    q = x("x_21*x_13 - 4*x_32")
    assert normal_form(p + q, G) == normal_form(p, G) + normal_form(q, G)
    assert G.memo_size() > 0
    nested = MultiPoly(X3, {mono_from_dict({0: 1, 3: 1}): parse("a_12", VarSet.a(3))}, VarSet.a(3))
    assert normal_form(nested, G).coefficient(mono_from_dict({1: 1})) == parse("a_12", VarSet.a(3))
