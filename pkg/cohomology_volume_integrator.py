"""
Cohomology Volume Integrator
============================
Integrates polynomial classes over the toric variety of a polytrope's normal
fan. The cohomology ring is the quotient of the x-variable ring by M + L,
with M the initial ideal of the toric ideal and L the vertex cuts; a class of
top degree n-1 is a rational multiple of the unique standard monomial m, and
the class of a point is the product of the variables of a Stanley-Reisner
facet. Integrating the (n-1)-th power of the support form
q = sum a_ij x_ij gives the normalized volume polynomial.
"""

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.ntheory.multinomial import multinomial_coefficients

from exact_polynomial_algebra import (
    MultiPoly,
    VarSet,
    evaluate,
    format_fraction,
    linear_combination,
    mono_from_dense,
    render_monomial,
)
from groebner_ideal_engine import (
    GroebnerBasis,
    MonomialIdeal,
    TermOrder,
    buchberger,
    initial_ideal,
    linear_ideal_generators,
    minimal_prime,
    monomial_of_variables,
    stanley_reisner_facets,
    top_degree_standard_monomial,
    toric_groebner_basis,
)
from polytrope_config import DomainMismatchError, InternalConsistencyError
from tropical_weight_matrix import WeightMatrix, require_kleene, vertex_of_facets

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VolumePolynomial:
    """Normalized and Euclidean volume polynomials of the cone containing source_weight."""
    normalized: MultiPoly
    euclidean: MultiPoly
    source_weight: WeightMatrix
    tie_flag: bool = False
    initial: Optional[MonomialIdeal] = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.source_weight.n

    @property
    def dimension(self) -> int:
        return self.source_weight.n - 1

    def value(self, W: Optional[WeightMatrix] = None) -> Fraction:
        """Normalized volume at W (default: the source weight)."""
        return evaluate(self.normalized, weight_assignment(W or self.source_weight))

    def euclidean_value(self, W: Optional[WeightMatrix] = None) -> Fraction:
        return evaluate(self.euclidean, weight_assignment(W or self.source_weight))


def weight_assignment(W: WeightMatrix) -> Dict[int, int]:
    """a-variable index -> c_ij."""
    return dict(enumerate(W.weight_vector()))


def support_form(n: int) -> MultiPoly:
    """q = sum a_ij x_ij as an x-polynomial with a-polynomial coefficients."""
    return support_form_power(n, 1)


def support_form_power(n: int, d: int) -> MultiPoly:
    """q^d expanded by multinomial coefficients; x- and a-variables share their index order."""
    xs, avars = VarSet.x(n), VarSet.a(n)
    terms = {}
    for exps, coeff in multinomial_coefficients(xs.size, d).items():
        mono = mono_from_dense(exps)
        terms[mono] = MultiPoly._wrap(avars, {mono: Fraction(int(coeff))})
    return MultiPoly._wrap(xs, terms, avars)


def quotient_basis(W: WeightMatrix, M: MonomialIdeal) -> GroebnerBasis:
    """Groebner basis of M + L under W's refined order."""
    gens = M.as_polynomials() + linear_ideal_generators(W.n)
    return buchberger(gens, TermOrder.from_matrix(W))


class CohomologyIntegrator:
    """
    Evaluates integrals of polynomial classes for one Kleene star.

    Construction computes the toric basis, the initial ideal, the basis of the
    cohomology ring relations, its unique top-degree standard monomial m and the
    normalizing constant gamma with [point] = gamma * m.
    """

    def __init__(self, W: WeightMatrix, facet_order: Optional[Sequence[int]] = None,
                 toric_basis: Optional[GroebnerBasis] = None):
        require_kleene(W)
        self.W = W
        self.n = W.n
        self.x_vars = VarSet.x(W.n)
        self.a_vars = VarSet.a(W.n)
        self.timings: Dict[str, float] = {}

        start = time.time()
        self.toric_basis = toric_basis if toric_basis is not None else toric_groebner_basis(W)
        self.initial = initial_ideal(W, self.toric_basis)
        self.timings["toric_basis"] = time.time() - start

        start = time.time()
        self.quotient_basis = quotient_basis(W, self.initial)
        self.standard_monomial = top_degree_standard_monomial(self.quotient_basis, W.n - 1)
        self.timings["quotient_basis"] = time.time() - start

        prime = minimal_prime(self.initial, facet_order)
        self.facet = tuple(sorted(set(range(self.x_vars.size)) - prime))
        point_class = self.quotient_basis.monomial_normal_form(monomial_of_variables(self.facet))
        gamma = point_class.get(self.standard_monomial, Fraction(0))
        if gamma == 0 or len(point_class) != 1:
            raise InternalConsistencyError(
                f"point class reduces to {point_class}, not a nonzero multiple of "
                f"{render_monomial(self.standard_monomial, self.x_vars)}")
        self.gamma = gamma

        logger.debug(f"n={self.n}: toric basis {len(self.toric_basis)}, M has {len(self.initial)} "
                     f"generators, M+L basis {len(self.quotient_basis)}, gamma={gamma}")

    @property
    def weight_tie(self) -> bool:
        return self.initial.weight_tie

    def integrate(self, p: MultiPoly) -> MultiPoly:
        """The m-coefficient of the normal form of p, divided by gamma, over the a-variables."""
        if p.varset != self.x_vars:
            raise DomainMismatchError(f"expected a polynomial over {self.x_vars}, got {p.varset}")
        if p.nested and p.coeff_varset != self.a_vars:
            raise DomainMismatchError("coefficients must be polynomials in the a-variables")
        m = self.standard_monomial
        pieces = []
        for mono, coeff in p.terms.items():
            value = self.quotient_basis.monomial_normal_form(mono).get(m)
            if value:
                pieces.append((value / self.gamma, coeff))
        if p.nested:
            return linear_combination(self.a_vars, pieces)
        return MultiPoly.constant(sum((v * c for v, c in pieces), Fraction(0)), self.a_vars)

    def volume_polynomial(self) -> VolumePolynomial:
        start = time.time()
        d = self.n - 1
        normalized = self.integrate(support_form_power(self.n, d))
        self.timings["integration"] = time.time() - start
        if not normalized.coefficients_are_integral():
            raise InternalConsistencyError(f"normalized volume polynomial has non-integral coefficients: {normalized}")
        if not normalized.is_homogeneous() or normalized.degree() != d:
            raise InternalConsistencyError(f"volume polynomial is not homogeneous of degree {d}")
        euclidean = normalized.scale(Fraction(1, factorial(d)))
        logger.info(f"volume polynomial for n={self.n}: {len(normalized)} terms "
                    f"({sum(self.timings.values()):.2f}s)")
        return VolumePolynomial(normalized, euclidean, self.W, self.weight_tie, self.initial)

    def report(self) -> Dict:
        return {
            'status': 'success',
            'n': self.n,
            'toric_basis_size': len(self.toric_basis),
            'initial_ideal': self.initial.render(),
            'weight_tie': self.weight_tie,
            'quotient_basis_size': len(self.quotient_basis),
            'facet': [self.x_vars.name(i) for i in self.facet],
            'gamma': format_fraction(self.gamma),
            'standard_monomial': render_monomial(self.standard_monomial, self.x_vars),
            'timings': {k: round(v, 4) for k, v in self.timings.items()},
        }


def integrate_cohomology(p: MultiPoly, W: WeightMatrix) -> MultiPoly:
    """Integral of the class p over the toric variety of W's polytrope."""
    return CohomologyIntegrator(W).integrate(p)


def volume_polynomial(W: WeightMatrix, facet_order: Optional[Sequence[int]] = None) -> VolumePolynomial:
    return CohomologyIntegrator(W, facet_order).volume_polynomial()


def polytrope_vertices(W: WeightMatrix, M: Optional[MonomialIdeal] = None) -> List[Tuple[int, ...]]:
    """Vertices of the polytrope (chart x_n = 0), one per Stanley-Reisner facet, deduplicated."""
    M = M if M is not None else initial_ideal(W)
    xs = VarSet.x(W.n)
    vertices = {vertex_of_facets(W, [xs.pair(i) for i in facet]) for facet in stanley_reisner_facets(M)}
    return sorted(vertices)


def volume_pipeline_report(W: WeightMatrix) -> Dict:
    """Sizes, constants and timings of one pipeline run, plus the polynomial and its value at W."""
    try:
        integrator = CohomologyIntegrator(W)
        volume = integrator.volume_polynomial()
        report = integrator.report()
        report['volume'] = str(volume.normalized)
        report['volume_at_c'] = format_fraction(volume.value())
        report['vertices'] = len(polytrope_vertices(W, integrator.initial))
        return report
    except Exception as e:
        logger.error(f"pipeline failed: {e}")
        return {'status': 'error', 'message': str(e)}
