"""
Exact Polynomial Algebra
========================
Sparse multivariate polynomials with exact rational coefficients over the
pair-indexed variable sets x_ij (the ring of the toric ideal), a_ij (the
support-function variables of volume polynomials) and the formal variable t.

A polynomial is a map Monomial -> coefficient. A coefficient is either a
Fraction or, for "nested" x-polynomials, an a-polynomial with Fraction
coefficients; this is how q = sum a_ij x_ij and its powers are carried
through normal-form reduction without rational functions.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from polytrope_config import DomainMismatchError, ParseError, PolytropeConfig, UnknownVariableError

logger = logging.getLogger(__name__)

# A monomial is a tuple of (variable index, exponent) pairs sorted by index.
# Zero exponents are never stored; the empty tuple is the monomial 1.
Monomial = Tuple[Tuple[int, int], ...]
Pair = Tuple[int, int]
ONE: Monomial = ()

Number = Union[int, Fraction]


# ---------------------------------------------------------------------------
# Monomial helpers
# ---------------------------------------------------------------------------

def mono_from_dict(powers: Mapping[int, int]) -> Monomial:
    """Canonical monomial from an index -> exponent mapping."""
    return tuple(sorted((i, e) for i, e in powers.items() if e))


def mono_mul(u: Monomial, v: Monomial) -> Monomial:
    if not u:
        return v
    if not v:
        return u
    powers = dict(u)
    for i, e in v:
        powers[i] = powers.get(i, 0) + e
    return tuple(sorted(powers.items()))


def mono_divides(u: Monomial, v: Monomial) -> bool:
    """True iff u divides v."""
    if len(u) > len(v):
        return False
    powers = dict(v)
    for i, e in u:
        if powers.get(i, 0) < e:
            return False
    return True


def mono_div(v: Monomial, u: Monomial) -> Monomial:
    """The quotient v / u; u must divide v."""
    powers = dict(v)
    for i, e in u:
        rest = powers[i] - e
        if rest:
            powers[i] = rest
        else:
            del powers[i]
    return tuple(sorted(powers.items()))


def mono_lcm(u: Monomial, v: Monomial) -> Monomial:
    powers = dict(u)
    for i, e in v:
        if e > powers.get(i, 0):
            powers[i] = e
    return tuple(sorted(powers.items()))


def mono_degree(u: Monomial) -> int:
    return sum(e for _, e in u)


def mono_dense(u: Monomial, nvars: int) -> Tuple[int, ...]:
    exps = [0] * nvars
    for i, e in u:
        exps[i] = e
    return tuple(exps)


def mono_from_dense(exps: Sequence[int]) -> Monomial:
    return tuple((i, int(e)) for i, e in enumerate(exps) if e)


@lru_cache(maxsize=None)
def grevlex_key(u: Monomial, nvars: int) -> Tuple[int, Tuple[int, ...]]:
    """
    Sort key for graded reverse lexicographic order; larger key = larger monomial.

    Variables are ordered v_0 < v_1 < ... (a_12 is the smallest), so among
    monomials of equal degree the one with the smaller exponent on the
    smallest variable where they differ is larger.
    """
    return mono_degree(u), tuple(-e for e in mono_dense(u, nvars))


# ---------------------------------------------------------------------------
# Variable sets
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def ordered_pairs(n: int) -> Tuple[Pair, ...]:
    """Pairs (i, j), i != j in [n], sorted lexicographically (1-based)."""
    return tuple((i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j)


@dataclass(frozen=True)
class VarSet:
    """
    A named, totally ordered set of variables.

    kind 'x' and 'a' carry one variable per ordered pair (i, j) of [n];
    kind 't' is the single formal variable t.
    """
    kind: str
    n: int = 1

    def __post_init__(self):
        if self.kind not in ("x", "a", "t"):
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind != "t" and self.n < 2:
            raise ValueError("pair variables need n >= 2")
        if self.kind != "t" and self.n > PolytropeConfig.MAX_PAIR_INDEX:
            raise ValueError(f"pair variables need n <= {PolytropeConfig.MAX_PAIR_INDEX}")

    @classmethod
    def x(cls, n: int) -> "VarSet":
        return cls("x", n)

    @classmethod
    def a(cls, n: int) -> "VarSet":
        return cls("a", n)

    @classmethod
    def t(cls) -> "VarSet":
        return cls("t", 1)

    @property
    def pairs(self) -> Tuple[Pair, ...]:
        if self.kind == "t":
            return ()
        return ordered_pairs(self.n)

    @property
    def names(self) -> Tuple[str, ...]:
        return _names(self)

    @property
    def size(self) -> int:
        return 1 if self.kind == "t" else self.n * (self.n - 1)

    def name(self, index: int) -> str:
        return self.names[index]

    def index(self, var: Union[str, Pair, int]) -> int:
        """Index of a variable given by name ('a_12', 'a12'), pair (1, 2) or index."""
        lookup = _index_lookup(self)
        if isinstance(var, int):
            if 0 <= var < self.size:
                return var
        elif isinstance(var, tuple):
            key = tuple(var)
            if key in lookup:
                return lookup[key]
        elif isinstance(var, str):
            key = var.replace("_", "")
            if key in lookup:
                return lookup[key]
        raise UnknownVariableError(f"{var!r} is not a variable of {self}")

    def pair(self, index: int) -> Pair:
        return self.pairs[index]

    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(name) for name in self.names)

    def __str__(self) -> str:
        return "t" if self.kind == "t" else f"{self.kind}-variables (n={self.n})"


@lru_cache(maxsize=None)
def _names(varset: VarSet) -> Tuple[str, ...]:
    if varset.kind == "t":
        return ("t",)
    return tuple(f"{varset.kind}_{i}{j}" for i, j in varset.pairs)


@lru_cache(maxsize=None)
def _index_lookup(varset: VarSet) -> Dict[object, int]:
    lookup: Dict[object, int] = {}
    for idx, name in enumerate(varset.names):
        lookup[name.replace("_", "")] = idx
    for idx, pair in enumerate(varset.pairs):
        lookup[pair] = idx
    return lookup


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

def _is_zero(c) -> bool:
    if isinstance(c, MultiPoly):
        return c.is_zero()
    return c == 0


class MultiPoly:
    """Immutable sparse polynomial with exact coefficients."""

    __slots__ = ("varset", "coeff_varset", "_terms")

    def __init__(self, varset: VarSet, terms: Optional[Mapping] = None,
                 coeff_varset: Optional[VarSet] = None):
        self.varset = varset
        self.coeff_varset = coeff_varset
        clean = {}
        for mono, coeff in (terms or {}).items():
            if isinstance(mono, dict):
                mono = mono_from_dict(mono)
            coeff = self._coerce_coeff(coeff)
            if _is_zero(coeff):
                continue
            if mono in clean:
                coeff = clean[mono] + coeff
                if _is_zero(coeff):
                    del clean[mono]
                    continue
            clean[mono] = coeff
        self._terms = clean

    @classmethod
    def _wrap(cls, varset: VarSet, terms: Dict, coeff_varset: Optional[VarSet] = None) -> "MultiPoly":
        """Build from a dict that is already clean (canonical monomials, no zeros)."""
        poly = cls.__new__(cls)
        poly.varset = varset
        poly.coeff_varset = coeff_varset
        poly._terms = terms
        return poly

    def _coerce_coeff(self, coeff):
        if self.coeff_varset is None:
            if isinstance(coeff, MultiPoly):
                raise DomainMismatchError("rational polynomial given a polynomial coefficient")
            return Fraction(coeff)
        if isinstance(coeff, MultiPoly):
            if coeff.varset != self.coeff_varset or coeff.coeff_varset is not None:
                raise DomainMismatchError("coefficient lies outside the coefficient domain")
            return coeff
        return MultiPoly.constant(coeff, self.coeff_varset)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, varset: VarSet, coeff_varset: Optional[VarSet] = None) -> "MultiPoly":
        return cls._wrap(varset, {}, coeff_varset)

    @classmethod
    def constant(cls, value, varset: VarSet, coeff_varset: Optional[VarSet] = None) -> "MultiPoly":
        return cls(varset, {ONE: value}, coeff_varset)

    @classmethod
    def variable(cls, varset: VarSet, var: Union[str, Pair, int],
                 coeff_varset: Optional[VarSet] = None) -> "MultiPoly":
        return cls(varset, {((varset.index(var), 1),): 1}, coeff_varset)

    @classmethod
    def monomial(cls, varset: VarSet, mono: Monomial, coeff=1,
                 coeff_varset: Optional[VarSet] = None) -> "MultiPoly":
        return cls(varset, {mono: coeff}, coeff_varset)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Dict:
        """A copy of the monomial -> coefficient map."""
        return dict(self._terms)

    @property
    def nested(self) -> bool:
        return self.coeff_varset is not None

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE in self._terms)

    def constant_term(self):
        zero = MultiPoly.zero(self.coeff_varset) if self.nested else Fraction(0)
        return self._terms.get(ONE, zero)

    def coefficient(self, mono: Union[Monomial, Mapping[int, int]]):
        if isinstance(mono, Mapping):
            mono = mono_from_dict(mono)
        zero = MultiPoly.zero(self.coeff_varset) if self.nested else Fraction(0)
        return self._terms.get(mono, zero)

    def __len__(self) -> int:
        return len(self._terms)

    def monomials(self) -> List[Monomial]:
        return [m for m, _ in self.items()]

    def items(self) -> Iterator[Tuple[Monomial, object]]:
        """Terms in canonical order: degree descending, then grevlex descending."""
        nvars = self.varset.size
        ordered = sorted(self._terms, key=lambda m: grevlex_key(m, nvars), reverse=True)
        for mono in ordered:
            yield mono, self._terms[mono]

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(mono_degree(m) for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({mono_degree(m) for m in self._terms}) <= 1

    def variables_used(self) -> List[str]:
        used = sorted({i for mono in self._terms for i, _ in mono})
        return [self.varset.name(i) for i in used]

    def coefficients_are_integral(self) -> bool:
        for coeff in self._terms.values():
            if isinstance(coeff, MultiPoly):
                if not coeff.coefficients_are_integral():
                    return False
            elif coeff.denominator != 1:
                return False
        return True

    # -- arithmetic ---------------------------------------------------------

    def _same_domain(self, other: "MultiPoly") -> bool:
        return self.varset == other.varset and self.coeff_varset == other.coeff_varset

    def _as_scalar(self, other):
        """Return other as a coefficient-domain scalar, or None if it is a polynomial peer."""
        if isinstance(other, (int, Fraction)):
            return self._coerce_coeff(other)
        if isinstance(other, MultiPoly):
            if self._same_domain(other):
                return None
            if self.nested and other.varset == self.coeff_varset and not other.nested:
                return other
            if other.nested and other.coeff_varset == self.varset:
                return NotImplemented
            raise DomainMismatchError(f"cannot combine {self.varset} with {other.varset}")
        return NotImplemented

    def scale(self, scalar) -> "MultiPoly":
        scalar = self._coerce_coeff(scalar)
        if _is_zero(scalar):
            return MultiPoly.zero(self.varset, self.coeff_varset)
        terms = {}
        for mono, coeff in self._terms.items():
            value = coeff * scalar
            if not _is_zero(value):
                terms[mono] = value
        return MultiPoly._wrap(self.varset, terms, self.coeff_varset)

    def _add(self, other: "MultiPoly", sign: int) -> "MultiPoly":
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            if sign < 0:
                coeff = -coeff
            value = terms[mono] + coeff if mono in terms else coeff
            if _is_zero(value):
                terms.pop(mono, None)
            else:
                terms[mono] = value
        return MultiPoly._wrap(self.varset, terms, self.coeff_varset)

    def __add__(self, other):
        scalar = self._as_scalar(other)
        if scalar is NotImplemented:
            return NotImplemented
        if scalar is not None:
            other = MultiPoly._wrap(self.varset, {ONE: scalar} if not _is_zero(scalar) else {},
                                    self.coeff_varset)
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        scalar = self._as_scalar(other)
        if scalar is NotImplemented:
            return NotImplemented
        if scalar is not None:
            other = MultiPoly._wrap(self.varset, {ONE: scalar} if not _is_zero(scalar) else {},
                                    self.coeff_varset)
        return self._add(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._wrap(self.varset, {m: -c for m, c in self._terms.items()}, self.coeff_varset)

    def __mul__(self, other):
        scalar = self._as_scalar(other)
        if scalar is NotImplemented:
            return NotImplemented
        if scalar is not None:
            return self.scale(scalar)
        terms: Dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = mono_mul(m1, m2)
                value = c1 * c2
                if mono in terms:
                    value = terms[mono] + value
                terms[mono] = value
        return MultiPoly._wrap(self.varset,
                               {m: c for m, c in terms.items() if not _is_zero(c)},
                               self.coeff_varset)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        return poly_pow(self, k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.is_zero()
            return self.is_constant() and self.constant_term() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._same_domain(other) and self._terms == other._terms

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_term()) if self._terms else 0
        return hash((self.varset, self.coeff_varset, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({render(self)})"

    def __str__(self) -> str:
        return render(self)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def poly_arith(p: MultiPoly, q: MultiPoly, op: str) -> MultiPoly:
    """Exact add / sub / mul of two polynomials over the same domain."""
    if not p._same_domain(q):
        raise DomainMismatchError(f"cannot {op} polynomials over {p.varset} and {q.varset}")
    if op == "add":
        return p._add(q, 1)
    if op == "sub":
        return p._add(q, -1)
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def poly_pow(p: MultiPoly, k: int) -> MultiPoly:
    """k-th power by repeated squaring; p**0 = 1."""
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    result = MultiPoly.constant(1, p.varset, p.coeff_varset)
    base = p
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def partial_derive(p: MultiPoly, var: Union[str, Pair, int]) -> MultiPoly:
    """Formal partial derivative with respect to one main variable."""
    idx = p.varset.index(var)
    terms: Dict = {}
    for mono, coeff in p._terms.items():
        powers = dict(mono)
        e = powers.get(idx, 0)
        if not e:
            continue
        if e == 1:
            del powers[idx]
        else:
            powers[idx] = e - 1
        terms[mono_from_dict(powers)] = coeff * e
    return MultiPoly._wrap(p.varset, terms, p.coeff_varset)


def homogeneous_component(p: MultiPoly, degree: int) -> MultiPoly:
    """Sum of the terms of total degree exactly `degree`."""
    terms = {m: c for m, c in p._terms.items() if mono_degree(m) == degree}
    return MultiPoly._wrap(p.varset, terms, p.coeff_varset)


def substitute(p: MultiPoly, assignment: Mapping[Union[str, Pair, int], Union[MultiPoly, Number]]) -> MultiPoly:
    """
    Substitute values for main variables of p.

    Values are numbers or polynomials over one common variable set. Variables
    left unassigned persist, which is only possible when that common set is
    p's own variable set.
    """
    values = {p.varset.index(v): val for v, val in assignment.items()}
    targets = {val.varset for val in values.values() if isinstance(val, MultiPoly)}
    if len(targets) > 1:
        raise DomainMismatchError("substitution values live in different variable sets")
    target = targets.pop() if targets else p.varset
    used = {i for mono in p._terms for i, _ in mono}
    if target != p.varset and not used <= set(values):
        raise DomainMismatchError("unassigned variables cannot persist in a different variable set")

    def as_poly(val) -> MultiPoly:
        if isinstance(val, MultiPoly):
            if val.nested:
                raise DomainMismatchError("substitution values must have rational coefficients")
            if p.nested:
                return MultiPoly._wrap(val.varset,
                                       {m: MultiPoly.constant(c, p.coeff_varset) for m, c in val._terms.items()},
                                       p.coeff_varset)
            return val
        return MultiPoly.constant(val, target, p.coeff_varset)

    powers: Dict[Tuple[int, int], MultiPoly] = {}

    def power(i: int, e: int) -> MultiPoly:
        if (i, e) not in powers:
            powers[(i, e)] = poly_pow(as_poly(values[i]), e)
        return powers[(i, e)]

    result = MultiPoly.zero(target, p.coeff_varset)
    for mono, coeff in p._terms.items():
        kept = tuple((i, e) for i, e in mono if i not in values)
        piece = MultiPoly._wrap(target, {kept: coeff}, p.coeff_varset)
        for i, e in mono:
            if i in values:
                piece = piece * power(i, e)
        result = result + piece
    return result


def evaluate(p: MultiPoly, values: Mapping[Union[str, Pair, int], Number]) -> Fraction:
    """Full numeric evaluation of a rational polynomial."""
    if p.nested:
        raise DomainMismatchError("evaluate the coefficients of a nested polynomial separately")
    point = {p.varset.index(v): Fraction(val) for v, val in values.items()}
    total = Fraction(0)
    for mono, coeff in p._terms.items():
        term = coeff
        for i, e in mono:
            if i not in point:
                raise UnknownVariableError(f"no value for {p.varset.name(i)}")
            term *= point[i] ** e
        total += term
    return total


def permute_variables(p: MultiPoly, perm: Sequence[int]) -> MultiPoly:
    """
    Apply the S_n action v_ij -> v_perm(i)perm(j) (perm is 0-based).

    Coefficients of a nested polynomial are permuted the same way.
    """
    if p.varset.kind == "t":
        raise DomainMismatchError("t has no pair indices to permute")
    mapping = _permutation_map(p.varset, tuple(perm))
    terms = {}
    for mono, coeff in p._terms.items():
        if isinstance(coeff, MultiPoly):
            coeff = permute_variables(coeff, perm)
        terms[mono_from_dict({mapping[i]: e for i, e in mono})] = coeff
    return MultiPoly._wrap(p.varset, terms, p.coeff_varset)


@lru_cache(maxsize=None)
def _permutation_map(varset: VarSet, perm: Tuple[int, ...]) -> Tuple[int, ...]:
    if sorted(perm) != list(range(varset.n)):
        raise ValueError(f"{perm} is not a permutation of range({varset.n})")
    return tuple(varset.index((perm[i - 1] + 1, perm[j - 1] + 1)) for i, j in varset.pairs)


def linear_combination(varset: VarSet, pieces: Iterable[Tuple[object, MultiPoly]],
                       coeff_varset: Optional[VarSet] = None) -> MultiPoly:
    """
    Sum of scalar_k * poly_k for rational polynomials poly_k.

    Scalars are Fractions or coefficient-domain polynomials. Accumulates in
    flat dictionaries so long sums stay linear in the number of terms.
    """
    if coeff_varset is None:
        flat: Dict[Monomial, Fraction] = {}
        for scalar, poly in pieces:
            for mono, coeff in poly._terms.items():
                flat[mono] = flat.get(mono, 0) + scalar * coeff
        return MultiPoly._wrap(varset, {m: Fraction(c) for m, c in flat.items() if c != 0})

    nested: Dict[Monomial, Dict[Monomial, Fraction]] = {}
    for scalar, poly in pieces:
        inner_terms = scalar._terms if isinstance(scalar, MultiPoly) else {ONE: Fraction(scalar)}
        for mono, coeff in poly._terms.items():
            bucket = nested.setdefault(mono, {})
            for amono, acoeff in inner_terms.items():
                bucket[amono] = bucket.get(amono, 0) + acoeff * coeff
    terms = {}
    for mono, bucket in nested.items():
        inner = {m: Fraction(c) for m, c in bucket.items() if c != 0}
        if inner:
            terms[mono] = MultiPoly._wrap(coeff_varset, inner)
    return MultiPoly._wrap(varset, terms, coeff_varset)


# ---------------------------------------------------------------------------
# Text and JSON forms
# ---------------------------------------------------------------------------

def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def render_monomial(mono: Monomial, varset: VarSet) -> str:
    parts = []
    for i, e in mono:
        name = varset.name(i)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def render(p: MultiPoly) -> str:
    """
    Canonical text: terms in canonical order, '+'/'-' separators, coefficients
    as integers or p/q, e.g. '79/2*t^2 + 23/2*t + 1'.
    """
    if p.is_zero():
        return "0"
    chunks: List[Tuple[str, str]] = []
    for mono, coeff in p.items():
        mono_text = render_monomial(mono, p.varset)
        if isinstance(coeff, MultiPoly):
            body = f"({render(coeff)})"
            sign = "+"
            text = body if not mono_text else f"{body}*{mono_text}"
        else:
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            if not mono_text:
                text = format_fraction(magnitude)
            elif magnitude == 1:
                text = mono_text
            else:
                text = f"{format_fraction(magnitude)}*{mono_text}"
        chunks.append((sign, text))
    first_sign, first_text = chunks[0]
    out = ("-" if first_sign == "-" else "") + first_text
    for sign, text in chunks[1:]:
        out += f" {sign} {text}"
    return out


_TRANSFORMS = standard_transformations + (convert_xor,)


def parse(text: str, varset: VarSet) -> MultiPoly:
    """Parse canonical (or any sympy-readable) text into a rational polynomial."""
    symbols = varset.symbols()
    local = {s.name: s for s in symbols}
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMS, evaluate=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ParseError(f"cannot parse polynomial {text!r}: {exc}") from exc
    extra = expr.free_symbols - set(symbols)
    if extra:
        raise UnknownVariableError(f"unknown variables {sorted(str(s) for s in extra)}")
    poly = sympy.Poly(expr, *symbols, domain="QQ")
    terms = {}
    for exps, coeff in poly.terms():
        coeff = sympy.Rational(coeff)
        terms[mono_from_dense(exps)] = Fraction(int(coeff.p), int(coeff.q))
    return MultiPoly(varset, terms)


def to_json(p: MultiPoly) -> List[Dict[str, object]]:
    """List of {"exp": {"ij": e}, "coef": "p/q"} records in canonical order."""
    if p.nested:
        raise DomainMismatchError("JSON export covers rational polynomials only")
    records = []
    for mono, coeff in p.items():
        exp = {}
        for i, e in mono:
            key = "t" if p.varset.kind == "t" else "".join(str(k) for k in p.varset.pair(i))
            exp[key] = e
        records.append({"exp": exp, "coef": format_fraction(coeff)})
    return records


def _json_variable(key: str, varset: VarSet) -> int:
    if varset.kind == "t":
        return varset.index(key)
    if len(key) != 2 or not key.isdigit():
        raise ParseError(f"exponent key {key!r} is not a pair of one-digit indices")
    return varset.index((int(key[0]), int(key[1])))


def from_json(records: Sequence[Mapping[str, object]], varset: VarSet) -> MultiPoly:
    terms = {}
    for record in records:
        powers = {}
        for key, e in dict(record["exp"]).items():
            idx = _json_variable(str(key), varset)
            powers[idx] = int(e)
        terms[mono_from_dict(powers)] = Fraction(str(record["coef"]))
    return MultiPoly(varset, terms)


# ---------------------------------------------------------------------------
# Univariate polynomials in t (or k)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""
    coeffs: Tuple[Fraction, ...]
    var: str = "t"

    def __post_init__(self):
        trimmed = [Fraction(c) for c in self.coeffs]
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        object.__setattr__(self, "coeffs", tuple(trimmed))

    @classmethod
    def from_multipoly(cls, p: MultiPoly) -> "UniPoly":
        if p.varset.kind != "t" or p.nested:
            raise DomainMismatchError("expected a rational polynomial in t")
        degree = max(p.degree(), 0)
        coeffs = [Fraction(0)] * (degree + 1)
        for mono, coeff in p._terms.items():
            coeffs[mono_degree(mono)] = coeff
        return cls(tuple(coeffs))

    def to_multipoly(self) -> MultiPoly:
        varset = VarSet.t()
        return MultiPoly(varset, {(((0, k),) if k else ONE): c for k, c in enumerate(self.coeffs)})

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def leading_coefficient(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, value: Number) -> Fraction:
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * value + c
        return total

    def render(self) -> str:
        text = render(self.to_multipoly())
        return text if self.var == "t" else text.replace("t", self.var)

    def to_json(self) -> List[str]:
        return [format_fraction(c) for c in self.coeffs]

    def __str__(self) -> str:
        return self.render()
