"""
Fundamental Polytope Subdivision
================================
The fundamental polytope FP_n = conv{e_i - e_j}, its regular central
subdivision induced by a Kleene star (vertex e_i - e_j lifted to c_ij, the
origin to 0) and the correspondence between that subdivision and the
coefficients of volume polynomials in dimensions 3 and 4.

Points are indexed like the a-variables (pair order), with the origin last.
Coordinates live in the chart that drops the last coordinate, which is
lattice preserving on the hyperplane sum(x) = 0.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from math import factorial
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np
import pandas as pd
import sympy
from scipy.spatial import ConvexHull

from cohomology_volume_integrator import VolumePolynomial
from exact_polynomial_algebra import MultiPoly, Monomial, VarSet, mono_from_dict, ordered_pairs, render_monomial
from polytrope_config import PolytropeConfig
from tropical_weight_matrix import WeightMatrix, require_kleene

logger = logging.getLogger(__name__)

SQUARE_SIDES_4 = (
    ("S1", (1, 2), (3, 4)),
    ("S2", (3, 4), (1, 2)),
    ("S3", (1, 3), (2, 4)),
    ("S4", (2, 4), (1, 3)),
    ("S5", (1, 4), (2, 3)),
    ("S6", (2, 3), (1, 4)),
)


@dataclass(frozen=True)
class SquareFacet:
    """The square {e_a - e_b : a in A, b in B} of FP_4 with its two diagonals (variable indices)."""
    label: str
    sources: Tuple[int, int]
    targets: Tuple[int, int]
    vertices: Tuple[int, ...]
    diagonals: Tuple[Tuple[int, int], Tuple[int, int]]


@dataclass(frozen=True)
class FundamentalPolytope:
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("the fundamental polytope is studied for n >= 3")

    @property
    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        return ordered_pairs(self.n)

    @property
    def dimension(self) -> int:
        return self.n - 1

    def coordinates(self) -> np.ndarray:
        """Chart coordinates of e_i - e_j, one row per pair."""
        coords = np.zeros((len(self.pairs), self.n), dtype=np.int64)
        for row, (i, j) in enumerate(self.pairs):
            coords[row, i - 1] += 1
            coords[row, j - 1] -= 1
        return coords[:, :-1]

    def facets(self) -> List[Tuple[FrozenSet[int], Tuple[int, ...]]]:
        """Facets {e_a - e_b : a in A, b not in A} for every nonempty proper subset A."""
        index = {pair: k for k, pair in enumerate(self.pairs)}
        result = []
        nodes = range(1, self.n + 1)
        for size in range(1, self.n):
            for A in combinations(nodes, size):
                verts = tuple(sorted(index[(a, b)] for a in A for b in nodes if b not in A))
                result.append((frozenset(A), verts))
        return result

    def triangle_facets(self) -> List[Tuple[int, ...]]:
        return [verts for _, verts in self.facets() if len(verts) == 3]

    def square_facets(self) -> List[SquareFacet]:
        if self.n != 4:
            raise ValueError("square facets are defined for FP_4")
        index = {pair: k for k, pair in enumerate(self.pairs)}
        squares = []
        for label, (a1, a2), (b1, b2) in SQUARE_SIDES_4:
            verts = tuple(sorted(index[(a, b)] for a in (a1, a2) for b in (b1, b2)))
            first = tuple(sorted((index[(a1, b1)], index[(a2, b2)])))
            second = tuple(sorted((index[(a1, b2)], index[(a2, b1)])))
            squares.append(SquareFacet(label, (a1, a2), (b1, b2), verts, (first, second)))
        return squares


def fundamental_polytope(n: int) -> FundamentalPolytope:
    return FundamentalPolytope(n)


def fundamental_volume_reference(n: int) -> int:
    """Normalized volume of FP_n from its convex hull."""
    FP = fundamental_polytope(n)
    return int(round(ConvexHull(FP.coordinates()).volume * factorial(FP.dimension)))


# ---------------------------------------------------------------------------
# Regular central subdivision
# ---------------------------------------------------------------------------

def _exact_adjugate(X: np.ndarray) -> Tuple[int, np.ndarray]:
    """Determinant and adjugate of a small integer matrix, exact."""
    det = int(round(np.linalg.det(X.astype(float))))
    if det == 0:
        return 0, np.zeros_like(X)
    adj = np.rint(np.linalg.inv(X.astype(float)) * det).astype(np.int64)
    if not np.array_equal(X @ adj, det * np.eye(X.shape[0], dtype=np.int64)):
        adj = np.array(sympy.Matrix(X.tolist()).adjugate().tolist(), dtype=np.int64)
    return det, adj


@dataclass(frozen=True)
class CentralSubdivision:
    """Maximal cells of the lower hull, as sorted tuples of point indices (origin = N)."""
    n: int
    weight: WeightMatrix
    cells: Tuple[Tuple[int, ...], ...]
    polytope: FundamentalPolytope = field(repr=False, compare=False, default=None)

    @property
    def origin(self) -> int:
        return self.n * (self.n - 1)

    @property
    def dimension(self) -> int:
        return self.n - 1

    def is_triangulation(self) -> bool:
        return all(len(cell) == self.dimension + 1 for cell in self.cells)

    def is_central(self) -> bool:
        return all(self.origin in cell for cell in self.cells)

    def boundary_faces(self) -> Set[FrozenSet[int]]:
        """Cells with the origin removed: simplices of the induced boundary triangulation."""
        return {frozenset(cell) - {self.origin} for cell in self.cells}

    def edges(self) -> Set[FrozenSet[int]]:
        """Edges of the simplicial cells (every pair of a simplex)."""
        result = set()
        for cell in self.cells:
            if len(cell) == self.dimension + 1:
                result.update(frozenset(p) for p in combinations(cell, 2))
        return result

    def degree(self, vertex: int) -> int:
        return sum(1 for e in self.edges() if vertex in e)

    def lift_sum(self, pair: Tuple[int, int]) -> int:
        weights = self.weight.weight_vector()
        return sum(weights[v] for v in pair)

    def square_diagonals(self) -> List[Dict]:
        """Per square of FP_4: both diagonal lift sums, the chosen (lower) one, and ties."""
        edges = self.edges()
        records = []
        for square in self.polytope.square_facets():
            sums = [self.lift_sum(d) for d in square.diagonals]
            tie = sums[0] == sums[1]
            chosen = None if tie else square.diagonals[int(np.argmin(sums))]
            records.append({
                'square': square.label,
                'vertices': square.vertices,
                'diagonals': square.diagonals,
                'sums': tuple(sums),
                'tie': tie,
                'chosen': chosen,
                'chosen_is_edge': chosen is not None and frozenset(chosen) in edges,
            })
        return records

    def cell_volumes(self) -> List[int]:
        """Normalized volume of each cell."""
        points = np.vstack([self.polytope.coordinates(), np.zeros((1, self.dimension), dtype=np.int64)])
        volumes = []
        for cell in self.cells:
            pts = points[list(cell)]
            if len(cell) == self.dimension + 1:
                volumes.append(abs(int(round(np.linalg.det((pts[1:] - pts[0]).astype(float))))))
            else:
                volumes.append(int(round(ConvexHull(pts).volume * factorial(self.dimension))))
        return volumes

    def point_name(self, index: int) -> str:
        if index == self.origin:
            return "0"
        i, j = self.polytope.pairs[index]
        return f"e{i}-e{j}"

    def cell_table(self) -> pd.DataFrame:
        rows = []
        for cell, volume in zip(self.cells, self.cell_volumes()):
            rows.append({
                'cell': ", ".join(self.point_name(p) for p in cell),
                'points': len(cell),
                'normalized_volume': volume,
                'contains_origin': self.origin in cell,
            })
        return pd.DataFrame(rows)

    def vertex_table(self) -> pd.DataFrame:
        rows = []
        for v in range(self.origin):
            rows.append({'vertex': self.point_name(v), 'lift': self.weight.weight_vector()[v],
                         'degree': self.degree(v)})
        return pd.DataFrame(rows)


def central_subdivision(W: WeightMatrix) -> CentralSubdivision:
    """
    Lower hull of the lifted configuration by exhaustive search: every affinely
    independent set of dim+1 points spans a candidate affine height function,
    kept when no point lies below it; the cell is the set of points on it.
    """
    require_kleene(W)
    FP = fundamental_polytope(W.n)
    D = FP.dimension
    base = np.vstack([FP.coordinates(), np.zeros((1, D), dtype=np.int64)])
    augmented = np.hstack([base, np.ones((base.shape[0], 1), dtype=np.int64)])
    heights = np.array(list(W.weight_vector()) + [0], dtype=np.int64)

    cells: Set[Tuple[int, ...]] = set()
    for subset in combinations(range(base.shape[0]), D + 1):
        X = augmented[list(subset)]
        det, adj = _exact_adjugate(X)
        if det == 0:
            continue
        coeffs = adj @ heights[list(subset)]
        residual = det * heights - augmented @ coeffs
        if det < 0:
            residual = -residual
        if (residual < 0).any():
            continue
        cells.add(tuple(int(p) for p in np.flatnonzero(residual == 0)))

    subdivision = CentralSubdivision(W.n, W, tuple(sorted(cells)), FP)
    if not subdivision.is_triangulation():
        logger.warning(f"lower hull is not a triangulation ({len(cells)} cells); weights are not generic")
    return subdivision


# ---------------------------------------------------------------------------
# Coefficient correspondence
# ---------------------------------------------------------------------------

@dataclass
class CoefficientReport:
    """Per-monomial checks plus class sums of one volume polynomial."""
    table: pd.DataFrame
    class_sums: Dict[str, int]
    expected_sums: Dict[str, int]
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> Optional[str]:
        return self.failures[0] if self.failures else None


def _partition(mono: Monomial) -> Tuple[int, ...]:
    return tuple(sorted((e for _, e in mono), reverse=True))


def _class_sums(table: pd.DataFrame) -> Dict[str, int]:
    if table.empty:
        return {}
    sums = table.groupby('partition')['coefficient'].sum()
    return {label: int(value) for label, value in sums.items()}


def _all_monomials(nvars: int, degree: int):
    for combo in combinations_with_replacement(range(nvars), degree):
        powers: Dict[int, int] = {}
        for i in combo:
            powers[i] = powers.get(i, 0) + 1
        yield mono_from_dict(powers)


def verify_coefficients_3d(V: VolumePolynomial, S: CentralSubdivision) -> CoefficientReport:
    """
    Check every cubic coefficient against the triangulation of FP_4:
    a_u a_v a_w -> 6 on boundary triangles, a_v^2 a_w -> -3 when v and w share
    a square whose chosen diagonal ends at w, a_v^3 -> 2 minus the chosen
    diagonals at v; everything else 0.
    """
    avars = VarSet.a(4)
    class_sums_3d, _ = PolytropeConfig.class_tables(4)
    sums_expected = {PolytropeConfig.partition_label(p): s for p, s in class_sums_3d.items()}
    failures: List[str] = []
    if V.n != 4 or S.n != 4:
        raise ValueError("the 3D correspondence needs n = 4")
    if not S.is_triangulation():
        failures.append("subdivision is not a triangulation")
        return CoefficientReport(pd.DataFrame(), {}, sums_expected, failures)

    squares = []
    for record in S.square_diagonals():
        chosen = record['chosen']
        if chosen is None or not record['chosen_is_edge']:
            failures.append(f"square {record['square']} has no chosen diagonal")
            return CoefficientReport(pd.DataFrame(), {}, sums_expected, failures)
        squares.append((set(record['vertices']), set(chosen)))
    triangles = S.boundary_faces()

    rows = []
    for mono in _all_monomials(avars.size, 3):
        partition = _partition(mono)
        if partition == (1, 1, 1):
            expected = 6 if frozenset(i for i, _ in mono) in triangles else 0
        elif partition == (2, 1):
            v = next(i for i, e in mono if e == 2)
            w = next(i for i, e in mono if e == 1)
            expected = -3 if any(v in verts and w in diag for verts, diag in squares) else 0
        else:
            v = mono[0][0]
            expected = 2 - sum(1 for _, diag in squares if v in diag)
        coefficient = V.normalized.coefficient(mono)
        rows.append({
            'monomial': render_monomial(mono, avars),
            'partition': PolytropeConfig.partition_label(partition),
            'coefficient': int(coefficient),
            'expected': expected,
            'ok': coefficient == expected,
        })
    table = pd.DataFrame(rows)
    for row in table[~table['ok']].itertuples():
        failures.append(f"{row.monomial}: coefficient {row.coefficient}, expected {row.expected}")
    class_sums = _class_sums(table)
    for label, expected in sums_expected.items():
        if class_sums.get(label, 0) != expected:
            failures.append(f"class {label} sums to {class_sums.get(label, 0)}, expected {expected}")
    return CoefficientReport(table, class_sums, sums_expected, failures)


def star_monomials(n: int) -> List[Monomial]:
    """prod_{j != i} a_ij and prod_{j != i} a_ji for every i."""
    avars = VarSet.a(n)
    monos = []
    for i in range(1, n + 1):
        monos.append(mono_from_dict({avars.index((i, j)): 1 for j in range(1, n + 1) if j != i}))
        monos.append(mono_from_dict({avars.index((j, i)): 1 for j in range(1, n + 1) if j != i}))
    return monos


def verify_coefficients_4d(V: VolumePolynomial, S: Optional[CentralSubdivision] = None) -> CoefficientReport:
    """
    Coefficient statistics of a 4D volume polynomial: allowed values and sums
    per exponent partition, the star monomials at 24, twice as many -4 as 12
    coefficients, and (given a triangulation) 24 exactly on boundary tetrahedra.
    """
    if V.n != 5:
        raise ValueError("the 4D statistics need n = 5")
    avars = VarSet.a(5)
    class_sums_4d, allowed = PolytropeConfig.class_tables(5)
    sums_expected = {PolytropeConfig.partition_label(p): s for p, s in class_sums_4d.items()}
    failures: List[str] = []

    rows = []
    for mono, coefficient in V.normalized.items():
        partition = _partition(mono)
        ok = int(coefficient) in allowed[partition]
        rows.append({
            'monomial': render_monomial(mono, avars),
            'partition': PolytropeConfig.partition_label(partition),
            'coefficient': int(coefficient),
            'expected': "{" + ",".join(str(v) for v in sorted(allowed[partition])) + "}",
            'ok': ok,
        })
        if not ok:
            failures.append(f"{render_monomial(mono, avars)}: coefficient {coefficient} outside {sorted(allowed[partition])}")
    table = pd.DataFrame(rows)
    class_sums = _class_sums(table)
    for label, expected in sums_expected.items():
        if class_sums.get(label, 0) != expected:
            failures.append(f"class {label} sums to {class_sums.get(label, 0)}, expected {expected}")

    for mono in star_monomials(5):
        coefficient = V.normalized.coefficient(mono)
        if coefficient != PolytropeConfig.STAR_ORBIT_COEFFICIENT_4D:
            failures.append(f"{render_monomial(mono, avars)}: coefficient {coefficient}, "
                            f"expected {PolytropeConfig.STAR_ORBIT_COEFFICIENT_4D}")

    values = [int(c) for c in V.normalized.terms.values()]
    if values.count(-4) != 2 * values.count(12):
        failures.append(f"{values.count(-4)} coefficients -4 against {values.count(12)} coefficients 12")

    if S is not None:
        if not S.is_triangulation():
            failures.append("subdivision is not a triangulation")
        else:
            tetrahedra = S.boundary_faces()
            for combo in combinations(range(avars.size), 4):
                mono = mono_from_dict({i: 1 for i in combo})
                coefficient = V.normalized.coefficient(mono)
                expected = 24 if frozenset(combo) in tetrahedra else 0
                if coefficient != expected:
                    failures.append(f"{render_monomial(mono, avars)}: coefficient {coefficient}, expected {expected}")
    return CoefficientReport(table, class_sums, sums_expected, failures)


def coefficient_affine_rank(polys: Sequence[MultiPoly]) -> int:
    """Dimension of the affine span of the coefficient vectors."""
    if len(polys) < 2:
        return 0
    monos = sorted({m for p in polys for m in p.terms})
    vectors = [[p.coefficient(m) for m in monos] for p in polys]
    base = vectors[0]
    diffs = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) - sympy.Rational(b.numerator, b.denominator)
                           for v, b in zip(vec, base)] for vec in vectors[1:]])
    return int(diffs.rank())
