"""
Groebner Ideal Engine
=====================
The ideal layer of the volume pipeline: the toric ideal I of the complete
digraph, the linear ideal L of vertex cuts, weight-refined term orders,
Buchberger's algorithm (normal pair selection with the Gebauer-Moeller
update), memoized normal forms, initial ideals and the Stanley-Reisner
complex of a squarefree monomial ideal.
"""

import logging
import threading
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple

from exact_polynomial_algebra import (
    ONE,
    Monomial,
    MultiPoly,
    VarSet,
    grevlex_key,
    linear_combination,
    mono_div,
    mono_divides,
    mono_from_dict,
    mono_lcm,
    mono_mul,
    ordered_pairs,
    render_monomial,
)
from polytrope_config import DomainMismatchError, InternalConsistencyError, PolytropeConfig
from tropical_weight_matrix import WeightMatrix, require_kleene

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Term orders
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1 << 18)
def _weighted_key(weight: Tuple[int, ...], mono: Monomial) -> Tuple[int, Tuple[int, Tuple[int, ...]]]:
    return sum(weight[i] * e for i, e in mono), grevlex_key(mono, len(weight))


@dataclass(frozen=True)
class TermOrder:
    """
    Compare monomials by weight u.c first (larger weight leads), then by
    graded reverse lexicographic order on the x-variables.
    """
    weight: Tuple[int, ...]

    @classmethod
    def from_matrix(cls, W: WeightMatrix) -> "TermOrder":
        return cls(W.weight_vector())

    @classmethod
    def grevlex(cls, nvars: int) -> "TermOrder":
        return cls((0,) * nvars)

    @property
    def nvars(self) -> int:
        return len(self.weight)

    def key(self, mono: Monomial):
        return _weighted_key(self.weight, mono)

    def weight_of(self, mono: Monomial) -> int:
        return sum(self.weight[i] * e for i, e in mono)

    def leading_monomial(self, monos: Iterable[Monomial]) -> Monomial:
        return max(monos, key=self.key)

    def descending(self, monos: Iterable[Monomial]) -> List[Monomial]:
        return sorted(monos, key=self.key, reverse=True)


class _Generator(NamedTuple):
    """A monic polynomial split into leading monomial and tail terms."""
    lead: Monomial
    tail: Tuple[Tuple[Monomial, Fraction], ...]


def _monic(terms: Dict[Monomial, Fraction], order: TermOrder) -> _Generator:
    lead = order.leading_monomial(terms)
    lc = terms[lead]
    tail = tuple((m, Fraction(terms[m]) / lc) for m in order.descending(terms) if m != lead)
    return _Generator(lead, tail)


def _as_terms(gen: _Generator) -> Dict[Monomial, Fraction]:
    terms = {gen.lead: Fraction(1)}
    terms.update(gen.tail)
    return terms


def _find_reducer(mono: Monomial, basis: Sequence[_Generator]) -> Optional[int]:
    for idx, gen in enumerate(basis):
        if mono_divides(gen.lead, mono):
            return idx
    return None


def _reduce_terms(terms: Dict[Monomial, Fraction], basis: Sequence[_Generator],
                  order: TermOrder) -> Dict[Monomial, Fraction]:
    """Full remainder of a rational polynomial on division by a monic basis."""
    p = dict(terms)
    remainder: Dict[Monomial, Fraction] = {}
    while p:
        lm = order.leading_monomial(p)
        coeff = p.pop(lm)
        idx = _find_reducer(lm, basis)
        if idx is None:
            remainder[lm] = coeff
            continue
        gen = basis[idx]
        q = mono_div(lm, gen.lead)
        for m, c in gen.tail:
            mono = mono_mul(m, q)
            value = p.get(mono, 0) - coeff * c
            if value:
                p[mono] = value
            else:
                p.pop(mono, None)
    return remainder


def _spoly(f: _Generator, g: _Generator) -> Dict[Monomial, Fraction]:
    lcm = mono_lcm(f.lead, g.lead)
    qf, qg = mono_div(lcm, f.lead), mono_div(lcm, g.lead)
    terms: Dict[Monomial, Fraction] = {}
    for m, c in f.tail:
        mono = mono_mul(m, qf)
        terms[mono] = terms.get(mono, 0) + c
    for m, c in g.tail:
        mono = mono_mul(m, qg)
        terms[mono] = terms.get(mono, 0) - c
    return {m: c for m, c in terms.items() if c}


def _update(basis: List[_Generator], pairs: Set[Tuple[int, int]], gen: _Generator,
            order: TermOrder) -> Tuple[List[_Generator], Set[Tuple[int, int]]]:
    """Add gen to the basis and update the pair set with the Gebauer-Moeller criteria."""
    lmf = gen.lead
    leads = [g.lead for g in basis]
    kept = set()
    for i, j in pairs:
        lcm_ij = mono_lcm(leads[i], leads[j])
        if (not mono_divides(lmf, lcm_ij)
                or lcm_ij == mono_lcm(leads[i], lmf)
                or lcm_ij == mono_lcm(leads[j], lmf)):
            kept.add((i, j))

    by_lcm: Dict[Monomial, List[int]] = {}
    for i, lead in enumerate(leads):
        by_lcm.setdefault(mono_lcm(lead, lmf), []).append(i)
    minimal: List[Monomial] = []
    for lcm in sorted(by_lcm, key=order.key):
        if all(not mono_divides(other, lcm) for other in minimal):
            minimal.append(lcm)

    new = set()
    for lcm in minimal:
        # coprime leading monomials: the pair reduces to zero
        if not any(mono_mul(leads[i], lmf) == lcm for i in by_lcm[lcm]):
            new.add((min(by_lcm[lcm]), len(basis)))
    return basis + [gen], kept | new


def _minimalize(basis: Sequence[_Generator], order: TermOrder) -> List[_Generator]:
    minimal: List[_Generator] = []
    for gen in sorted(basis, key=lambda g: order.key(g.lead)):
        if all(not mono_divides(g.lead, gen.lead) for g in minimal):
            minimal.append(gen)
    return minimal


def _interreduce(basis: Sequence[_Generator], order: TermOrder) -> List[_Generator]:
    reduced = []
    for i, gen in enumerate(basis):
        others = list(basis[:i]) + list(basis[i + 1:])
        tail = _reduce_terms(dict(gen.tail), others, order)
        reduced.append(_Generator(gen.lead, tuple((m, tail[m]) for m in order.descending(tail))))
    return reduced


# ---------------------------------------------------------------------------
# Groebner bases
# ---------------------------------------------------------------------------

class GroebnerBasis:
    """
    A Groebner basis of monic rational polynomials, sorted by leading monomial
    (ascending). Immutable apart from the normal-form memo, which is guarded
    by a lock so one basis can serve concurrent normal-form calls.
    """

    def __init__(self, varset: VarSet, generators: Sequence[MultiPoly], order: TermOrder):
        if order.nvars != varset.size:
            raise DomainMismatchError(f"term order has {order.nvars} weights for {varset.size} variables")
        gens = []
        for g in generators:
            if g.nested or g.varset != varset:
                raise DomainMismatchError("basis generators must be rational polynomials in the x-variables")
            if not g.is_zero():
                gens.append(_monic(g.terms, order))
        gens.sort(key=lambda gen: order.key(gen.lead))
        self.varset = varset
        self.order = order
        self._gens: Tuple[_Generator, ...] = tuple(gens)
        self._memo: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        self._lock = threading.Lock()

    @property
    def generators(self) -> List[MultiPoly]:
        return [MultiPoly._wrap(self.varset, _as_terms(g)) for g in self._gens]

    @property
    def leading_monomials(self) -> List[Monomial]:
        return [g.lead for g in self._gens]

    def __len__(self) -> int:
        return len(self._gens)

    def reducer_for(self, mono: Monomial) -> Optional[int]:
        """Index of the first generator (canonical order) whose leading monomial divides mono."""
        return _find_reducer(mono, self._gens)

    def is_standard(self, mono: Monomial) -> bool:
        return self.reducer_for(mono) is None

    def monomial_normal_form(self, mono: Monomial) -> Dict[Monomial, Fraction]:
        """
        Normal form of a single monomial as a map standard monomial -> rational.

        Reduction replaces lead * q by minus the tail times q; the memo makes the
        normal form of a polynomial a linear combination of cached entries.
        """
        with self._lock:
            memo = self._memo
            stack = [mono]
            while stack:
                top = stack[-1]
                if top in memo:
                    stack.pop()
                    continue
                idx = self.reducer_for(top)
                if idx is None:
                    memo[top] = {top: Fraction(1)}
                    stack.pop()
                    continue
                gen = self._gens[idx]
                q = mono_div(top, gen.lead)
                shifted = [(mono_mul(m, q), c) for m, c in gen.tail]
                missing = [m for m, _ in shifted if m not in memo]
                if missing:
                    stack.extend(missing)
                    continue
                result: Dict[Monomial, Fraction] = {}
                for m, c in shifted:
                    for std, value in memo[m].items():
                        result[std] = result.get(std, 0) - c * value
                memo[top] = {m: v for m, v in result.items() if v}
                stack.pop()
            return memo[mono]

    def normal_form(self, p: MultiPoly) -> MultiPoly:
        if p.varset != self.varset:
            raise DomainMismatchError(f"cannot reduce a polynomial over {p.varset} modulo {self.varset}")
        pieces = []
        for mono, coeff in p.terms.items():
            nf = self.monomial_normal_form(mono)
            pieces.append((coeff, MultiPoly._wrap(self.varset, nf)))
        return linear_combination(self.varset, pieces, p.coeff_varset)

    def memo_size(self) -> int:
        with self._lock:
            return len(self._memo)

    def render(self) -> List[str]:
        return [str(g) for g in self.generators]


def buchberger(gens: Sequence[MultiPoly], order: TermOrder, check: bool = False) -> GroebnerBasis:
    """
    Reduced Groebner basis of the ideal generated by gens.

    Pairs are selected by smallest lcm under the order (ties by index), so the
    output is deterministic. With check=True the S-pair closure of the result
    is verified before returning.
    """
    if not gens:
        raise ValueError("need at least one generator")
    varset = gens[0].varset
    start = time.time()
    basis: List[_Generator] = []
    pairs: Set[Tuple[int, int]] = set()
    for g in gens:
        if g.nested or g.varset != varset:
            raise DomainMismatchError("Buchberger input must be rational polynomials over one variable set")
        if not g.is_zero():
            basis, pairs = _update(basis, pairs, _monic(g.terms, order), order)

    processed = 0
    while pairs:
        i, j = min(pairs, key=lambda p: (order.key(mono_lcm(basis[p[0]].lead, basis[p[1]].lead)), p))
        pairs.remove((i, j))
        processed += 1
        remainder = _reduce_terms(_spoly(basis[i], basis[j]), basis, order)
        if remainder:
            basis, pairs = _update(basis, pairs, _monic(remainder, order), order)

    reduced = _interreduce(_minimalize(basis, order), order)
    result = GroebnerBasis(varset, [MultiPoly._wrap(varset, _as_terms(g)) for g in reduced], order)
    logger.debug(f"Buchberger: {len(gens)} generators, {processed} pairs processed, "
                 f"{len(result)} in reduced basis ({time.time() - start:.2f}s)")
    if check and not s_pairs_closed(result):
        raise InternalConsistencyError("computed basis is not closed under S-pairs")
    return result


def normal_form(p: MultiPoly, G: GroebnerBasis) -> MultiPoly:
    """Remainder of p modulo G; coefficients of p may be a-polynomials."""
    return G.normal_form(p)


def s_pairs_closed(G: GroebnerBasis) -> bool:
    """True iff every S-polynomial of the basis reduces to zero."""
    gens = G._gens
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if _reduce_terms(_spoly(gens[i], gens[j]), gens, G.order):
                logger.warning(f"S-pair ({i}, {j}) does not reduce to zero")
                return False
    return True


def reduce_with_cofactors(p: MultiPoly, gens: Sequence[MultiPoly],
                          order: TermOrder) -> Tuple[List[MultiPoly], MultiPoly]:
    """Division with remainder: p = sum(h_i * g_i) + r, reducers tried in the given order."""
    if p.nested:
        raise DomainMismatchError("cofactor division covers rational polynomials")
    divisors = []
    for g in gens:
        lead = order.leading_monomial(g.terms)
        divisors.append((lead, g.terms[lead], g.terms))
    cofactors: List[Dict[Monomial, Fraction]] = [{} for _ in gens]
    work = p.terms
    remainder: Dict[Monomial, Fraction] = {}
    while work:
        lm = order.leading_monomial(work)
        coeff = work.pop(lm)
        idx = next((k for k, (lead, _, _) in enumerate(divisors) if mono_divides(lead, lm)), None)
        if idx is None:
            remainder[lm] = coeff
            continue
        lead, lc, terms = divisors[idx]
        q = mono_div(lm, lead)
        factor = coeff / lc
        cofactors[idx][q] = cofactors[idx].get(q, 0) + factor
        for m, c in terms.items():
            if m == lead:
                continue
            mono = mono_mul(m, q)
            value = work.get(mono, 0) - factor * c
            if value:
                work[mono] = value
            else:
                work.pop(mono, None)
    return [MultiPoly(p.varset, h) for h in cofactors], MultiPoly(p.varset, remainder)


def standard_monomials(G: GroebnerBasis, degree: int) -> List[Monomial]:
    """All monomials of the given degree outside the leading ideal, largest first."""
    monos = []
    for combo in combinations_with_replacement(range(G.varset.size), degree):
        powers: Dict[int, int] = {}
        for i in combo:
            powers[i] = powers.get(i, 0) + 1
        mono = mono_from_dict(powers)
        if G.is_standard(mono):
            monos.append(mono)
    return G.order.descending(monos)


# ---------------------------------------------------------------------------
# The ideals of the polytrope
# ---------------------------------------------------------------------------

def toric_ideal_generators(n: int) -> List[MultiPoly]:
    """x_ij x_ji - 1 for i < j, then x_ij x_jk - x_ik for distinct (i, j, k)."""
    if n < PolytropeConfig.MIN_N:
        raise ValueError(f"n must be at least {PolytropeConfig.MIN_N}")
    xs = VarSet.x(n)
    idx = xs.index
    gens = []
    for i, j in ordered_pairs(n):
        if i < j:
            gens.append(MultiPoly(xs, {mono_from_dict({idx((i, j)): 1, idx((j, i)): 1}): 1, ONE: -1}))
    for i, j in ordered_pairs(n):
        for k in range(1, n + 1):
            if k in (i, j):
                continue
            path = mono_from_dict({idx((i, j)): 1, idx((j, k)): 1})
            gens.append(MultiPoly(xs, {path: 1, ((idx((i, k)), 1),): -1}))
    return gens


def linear_ideal_generators(n: int) -> List[MultiPoly]:
    """The vertex cuts sum_j x_kj - sum_j x_jk, one per k in [n]."""
    if n < PolytropeConfig.MIN_N:
        raise ValueError(f"n must be at least {PolytropeConfig.MIN_N}")
    xs = VarSet.x(n)
    gens = []
    for k in range(1, n + 1):
        terms = {}
        for j in range(1, n + 1):
            if j != k:
                terms[((xs.index((k, j)), 1),)] = 1
                terms[((xs.index((j, k)), 1),)] = -1
        gens.append(MultiPoly(xs, terms))
    return gens


def toric_groebner_basis(W: WeightMatrix, check: bool = False) -> GroebnerBasis:
    """Reduced Groebner basis of the toric ideal under the order refined from W's weights."""
    return buchberger(toric_ideal_generators(W.n), TermOrder.from_matrix(W), check=check)


@dataclass(frozen=True)
class MonomialIdeal:
    """Minimal monomial generators, largest first; weight_tie records a non-monomial c-initial ideal."""
    varset: VarSet
    generators: Tuple[Monomial, ...]
    weight_tie: bool = False

    @classmethod
    def from_monomials(cls, varset: VarSet, monos: Iterable[Monomial], weight_tie: bool = False) -> "MonomialIdeal":
        minimal: List[Monomial] = []
        for mono in sorted(set(monos), key=lambda m: grevlex_key(m, varset.size)):
            if all(not mono_divides(g, mono) for g in minimal):
                minimal.append(mono)
        minimal.sort(key=lambda m: grevlex_key(m, varset.size), reverse=True)
        return cls(varset, tuple(minimal), weight_tie)

    def contains(self, mono: Monomial) -> bool:
        return any(mono_divides(g, mono) for g in self.generators)

    def is_squarefree(self) -> bool:
        return all(e == 1 for g in self.generators for _, e in g)

    def supports(self) -> List[FrozenSet[int]]:
        return [frozenset(i for i, _ in g) for g in self.generators]

    def as_polynomials(self) -> List[MultiPoly]:
        return [MultiPoly.monomial(self.varset, g) for g in self.generators]

    def key(self) -> Tuple[int, Tuple[Monomial, ...]]:
        """Hashable identity of the ideal (the variable count plus its generators)."""
        return self.varset.n, self.generators

    def render(self) -> List[str]:
        return [render_monomial(g, self.varset) for g in self.generators]

    def __len__(self) -> int:
        return len(self.generators)


def has_weight_tie(G: GroebnerBasis) -> bool:
    """True iff some basis element has more than one term of maximal weight."""
    for gen in G.generators:
        weights = [G.order.weight_of(m) for m in gen.terms]
        top = max(weights)
        if weights.count(top) > 1:
            logger.debug(f"weight tie in {gen}")
            return True
    return False


def initial_ideal(W: WeightMatrix, basis: Optional[GroebnerBasis] = None) -> MonomialIdeal:
    """
    The initial ideal M of the toric ideal under W's refined order.

    The weight_tie flag is set when the weight vector alone does not pick a
    monomial initial term (W lies on the boundary of a Groebner cone).
    """
    require_kleene(W)
    G = basis if basis is not None else toric_groebner_basis(W)
    tie = has_weight_tie(G)
    if tie:
        logger.warning("weight vector lies on a Groebner cone boundary; using the refined-order cone")
    return MonomialIdeal.from_monomials(G.varset, G.leading_monomials, weight_tie=tie)


# ---------------------------------------------------------------------------
# Stanley-Reisner complex
# ---------------------------------------------------------------------------

def _is_face(face: Set[int], nonfaces: Sequence[FrozenSet[int]]) -> bool:
    return not any(nf <= face for nf in nonfaces)


def stanley_reisner_facets(M: MonomialIdeal) -> List[Tuple[int, ...]]:
    """All maximal faces (variable index tuples) of the complex of a squarefree monomial ideal."""
    if not M.is_squarefree():
        raise ValueError("Stanley-Reisner complex needs a squarefree monomial ideal")
    nonfaces = M.supports()
    nvars = M.varset.size
    facets: List[Tuple[int, ...]] = []

    def grow(face: List[int], start: int) -> None:
        extended = False
        for v in range(start, nvars):
            if _is_face(set(face) | {v}, nonfaces):
                extended = True
                grow(face + [v], v + 1)
        if not extended:
            members = set(face)
            if all(not _is_face(members | {v}, nonfaces) for v in range(nvars) if v not in members):
                facets.append(tuple(face))

    grow([], 0)
    return sorted(facets)


def minimal_primes_all(M: MonomialIdeal) -> List[FrozenSet[int]]:
    """Generator sets of the minimal primes: complements of the facets."""
    everything = frozenset(range(M.varset.size))
    return [everything - frozenset(f) for f in stanley_reisner_facets(M)]


def minimal_prime(M: MonomialIdeal, order: Optional[Sequence[int]] = None) -> FrozenSet[int]:
    """
    One minimal prime of M, the complement of a facet grown greedily through the
    variables in `order` (canonical order by default). The facet must have n-1
    elements.
    """
    if not M.is_squarefree():
        raise ValueError("minimal primes are computed for squarefree monomial ideals")
    nonfaces = M.supports()
    sequence = list(order) if order is not None else list(range(M.varset.size))
    facet: Set[int] = set()
    for v in sequence:
        if _is_face(facet | {v}, nonfaces):
            facet.add(v)
    if len(facet) != M.varset.n - 1:
        raise InternalConsistencyError(f"facet of size {len(facet)}, expected {M.varset.n - 1}")
    return frozenset(range(M.varset.size)) - frozenset(facet)


def is_maximal_type(W: WeightMatrix, cross_check: bool = False,
                    basis: Optional[GroebnerBasis] = None) -> bool:
    """True iff the c-initial ideal is monomial; cross_check also counts the minimal primes."""
    M = initial_ideal(W, basis)
    if M.weight_tie:
        return False
    if cross_check:
        count = len(minimal_primes_all(M))
        expected = PolytropeConfig.expected_vertex_count(W.n)
        if count != expected:
            raise InternalConsistencyError(f"{count} minimal primes, expected {expected}")
    return True


def monomial_of_variables(indices: Iterable[int]) -> Monomial:
    """The squarefree monomial of a set of variables."""
    return mono_from_dict({i: 1 for i in indices})


def top_degree_standard_monomial(G: GroebnerBasis, degree: int) -> Monomial:
    """The unique standard monomial of the given degree; raises if it is not unique."""
    monos = standard_monomials(G, degree)
    if len(monos) != 1:
        raise InternalConsistencyError(f"{len(monos)} standard monomials of degree {degree}, expected 1")
    return monos[0]