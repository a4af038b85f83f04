"""
Ehrhart Todd Transformer
========================
From Euclidean volume polynomials to multivariate Ehrhart polynomials (the
Todd operator applied directly in the a-variables of a unimodular simple
polytope) and on to multivariate h*-polynomials through Eulerian polynomials.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import comb

from cohomology_volume_integrator import VolumePolynomial, volume_polynomial, weight_assignment
from exact_polynomial_algebra import (
    MultiPoly,
    UniPoly,
    VarSet,
    evaluate,
    homogeneous_component,
    linear_combination,
    partial_derive,
)
from polytrope_config import DomainMismatchError, PolytropeConfig
from tropical_weight_matrix import WeightMatrix
from volume_polynomial_cache import cached_volume_polynomial

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BernoulliTable:
    """B_0..B_k from z/(e^z - 1) = sum B_k z^k / k!, so B_1 = -1/2."""
    values: Tuple[Fraction, ...]

    @classmethod
    def build(cls, depth: int) -> "BernoulliTable":
        values = [Fraction(1)]
        for m in range(1, depth + 1):
            total = sum(int(comb(m + 1, k, exact=True)) * values[k] for k in range(m))
            values.append(-total / (m + 1))
        return cls(tuple(values))

    @property
    def depth(self) -> int:
        return len(self.values) - 1

    def todd_coefficient(self, k: int) -> Fraction:
        """Coefficient of D^k in the Todd operator D / (1 - exp(-D))."""
        return (-1) ** k * self.values[k] / factorial(k)


@dataclass(frozen=True)
class EulerianTable:
    """A_0..A_d with sum_j j^d t^j = A_d(t) / (1 - t)^(d+1); coefficients lowest degree first."""
    polynomials: Tuple[Tuple[int, ...], ...]

    @classmethod
    def build(cls, depth: int) -> "EulerianTable":
        polys = [(1,)]
        numbers = [1]
        for d in range(1, depth + 1):
            # Eulerian numbers A(d, m) = (m+1) A(d-1, m) + (d-m) A(d-1, m-1)
            numbers = [
                (m + 1) * (numbers[m] if m < len(numbers) else 0)
                + (d - m) * (numbers[m - 1] if m >= 1 else 0)
                for m in range(d)
            ]
            polys.append((0,) + tuple(numbers))
        return cls(tuple(polys))

    def polynomial(self, d: int) -> UniPoly:
        return UniPoly(tuple(Fraction(c) for c in self.polynomials[d]))

    def basis_row(self, i: int, d: int) -> Tuple[int, ...]:
        """Coefficients of A_i(t) (1 - t)^(d - i), padded to length d + 1."""
        falling = [(-1) ** j * int(comb(d - i, j, exact=True)) for j in range(d - i + 1)]
        row = np.convolve(np.array(self.polynomials[i], dtype=np.int64), np.array(falling, dtype=np.int64))
        padded = list(row.tolist()) + [0] * (d + 1 - len(row))
        return tuple(int(v) for v in padded[:d + 1])


@lru_cache(maxsize=None)
def bernoulli_table(depth: int = PolytropeConfig.BERNOULLI_DEPTH) -> BernoulliTable:
    return BernoulliTable.build(depth)


@lru_cache(maxsize=None)
def eulerian_table(depth: int = PolytropeConfig.EULERIAN_DEPTH) -> EulerianTable:
    return EulerianTable.build(depth)


# ---------------------------------------------------------------------------
# Ehrhart and h* polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EhrhartPolynomial:
    """Multivariate Ehrhart polynomial over the a-variables of a d-dimensional polytope."""
    multivariate: MultiPoly
    dimension: int

    def component(self, degree: int) -> MultiPoly:
        return homogeneous_component(self.multivariate, degree)

    def constant_term_is_one(self) -> bool:
        return self.multivariate.constant_term() == 1

    def count(self, W: WeightMatrix, k: int = 1) -> Fraction:
        """Lattice points of the k-th dilate of W's polytope."""
        return univariate(self.multivariate, W)(k)

    def __str__(self) -> str:
        return str(self.multivariate)


@dataclass(frozen=True)
class HStarPolynomial:
    """h*_0..h*_d, each a polynomial in the a-variables."""
    coefficients: Tuple[MultiPoly, ...]

    @property
    def dimension(self) -> int:
        return len(self.coefficients) - 1

    def evaluate_at(self, W: WeightMatrix) -> Tuple[Fraction, ...]:
        values = weight_assignment(W)
        return tuple(evaluate(h, values) for h in self.coefficients)

    def as_multipoly(self) -> MultiPoly:
        """The polynomial in t with a-polynomial coefficients."""
        avars = self.coefficients[0].varset
        terms = {(((0, k),) if k else ()): h for k, h in enumerate(self.coefficients) if not h.is_zero()}
        return MultiPoly(VarSet.t(), terms, avars)

    def __str__(self) -> str:
        return str(self.as_multipoly())


def todd_apply(vol: MultiPoly, d: int, order: Optional[int] = None) -> EhrhartPolynomial:
    """
    Apply prod_ij D_ij / (1 - exp(-D_ij)) to a Euclidean volume polynomial,
    truncated at total differential order `order` (default d).
    """
    if vol.nested or vol.varset.kind != "a":
        raise DomainMismatchError("the Todd operator acts on rational polynomials in the a-variables")
    order = d if order is None else order
    table = bernoulli_table(max(order, PolytropeConfig.BERNOULLI_DEPTH))
    layers: Dict[int, MultiPoly] = {0: vol}
    for var in vol.variables_used():
        updated: Dict[int, List[Tuple[Fraction, MultiPoly]]] = {}
        for used, poly in layers.items():
            derivative = poly
            for k in range(order - used + 1):
                if k:
                    derivative = partial_derive(derivative, var)
                if derivative.is_zero():
                    break
                coeff = table.todd_coefficient(k)
                if coeff:
                    updated.setdefault(used + k, []).append((coeff, derivative))
        layers = {used: linear_combination(vol.varset, pieces) for used, pieces in updated.items()}
    ehrhart = linear_combination(vol.varset, [(1, poly) for poly in layers.values()])
    logger.debug(f"Todd operator: {len(vol)} -> {len(ehrhart)} terms")
    return EhrhartPolynomial(ehrhart, d)


def hstar_transform(ehr: EhrhartPolynomial) -> HStarPolynomial:
    """h*(a, t) = sum_i lambda_i A_i(t) (1 - t)^(d - i), lambda_i the degree-i part."""
    d = ehr.dimension
    table = eulerian_table(max(d, PolytropeConfig.EULERIAN_DEPTH))
    rows = [table.basis_row(i, d) for i in range(d + 1)]
    components = [ehr.component(i) for i in range(d + 1)]
    varset = ehr.multivariate.varset
    coefficients = tuple(
        linear_combination(varset, [(rows[i][j], components[i]) for i in range(d + 1) if rows[i][j]])
        for j in range(d + 1)
    )
    return HStarPolynomial(coefficients)


def univariate(p: Union[MultiPoly, HStarPolynomial], W: WeightMatrix) -> UniPoly:
    """
    Specialize at W: a_ij -> t c_ij for volume and Ehrhart polynomials,
    a_ij -> c_ij (keeping t) for h*-polynomials.
    """
    if isinstance(p, HStarPolynomial):
        return UniPoly(p.evaluate_at(W))
    if p.varset.kind == "t" and p.nested:
        values = weight_assignment(W)
        return UniPoly(tuple(evaluate(p.coefficient({0: k} if k else {}), values)
                             for k in range(p.degree() + 1)))
    if p.nested or p.varset.kind != "a":
        raise DomainMismatchError("expected a polynomial in the a-variables")
    values = weight_assignment(W)
    return UniPoly(tuple(evaluate(homogeneous_component(p, k), values) for k in range(max(p.degree(), 0) + 1)))


def ehrhart_from_hstar(h: Sequence[Fraction], k: int) -> Fraction:
    """sum_i h*_i C(k + d - i, d) for an h*-vector of length d + 1."""
    d = len(h) - 1
    return sum((Fraction(hi) * int(comb(k + d - i, d, exact=True)) for i, hi in enumerate(h)), Fraction(0))


@dataclass(frozen=True)
class PolynomialTriple:
    """Volume, Ehrhart and h*-polynomials of one Kleene star."""
    volume: VolumePolynomial
    ehrhart: EhrhartPolynomial
    hstar: HStarPolynomial

    @property
    def source_weight(self) -> WeightMatrix:
        return self.volume.source_weight

    def summary(self) -> Dict:
        W = self.source_weight
        return {
            'n': W.n,
            'maximal': not self.volume.tie_flag,
            'volume_at_c': self.volume.value(),
            'points': self.ehrhart.count(W),
            'hstar': tuple(self.hstar.evaluate_at(W)),
        }


def polynomial_triple(W: WeightMatrix, use_cache: bool = True) -> PolynomialTriple:
    """Run the whole pipeline: volume (cached per cone), Todd operator, Eulerian transform."""
    if use_cache:
        volume = cached_volume_polynomial(W)
    else:
        volume = volume_polynomial(W)
    ehrhart = todd_apply(volume.euclidean, volume.dimension)
    return PolynomialTriple(volume, ehrhart, hstar_transform(ehrhart))
