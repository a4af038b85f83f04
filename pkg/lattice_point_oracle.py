"""
Lattice Point Oracle
====================
Brute-force reference values that never touch the Groebner pipeline: lattice
points of dilates by box enumeration, the univariate Ehrhart polynomial by
interpolation, the normalized volume and the h*-vector straight from counts.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import List, Optional, Tuple

import numpy as np
import sympy
from scipy.special import comb

from exact_polynomial_algebra import UniPoly
from polytrope_config import EnumerationCapError, InternalConsistencyError, PolytropeConfig
from tropical_weight_matrix import WeightMatrix, require_kleene

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DilateCounts:
    """counts[k] = number of lattice points of the k-th dilate."""
    counts: Tuple[int, ...]

    @property
    def max_dilate(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, k: int) -> int:
        return self.counts[k]


def _count_slab(bounds: List[Tuple[int, int]], first: np.ndarray, weights: np.ndarray, k: int) -> int:
    """Points of the box with first coordinate in `first` satisfying every x_i - x_j <= k c_ij."""
    axes = [first] + [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in bounds[1:]]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    points = np.hstack([grid, np.zeros((grid.shape[0], 1), dtype=np.int64)])
    n = weights.shape[0]
    inside = np.ones(points.shape[0], dtype=bool)
    for i in range(n):
        for j in range(n):
            if i != j:
                inside &= points[:, i] - points[:, j] <= k * weights[i, j]
    return int(inside.sum())


def box_size(W: WeightMatrix, k: int) -> int:
    n = W.n
    return prod(k * (W.c(i, n) + W.c(n, i)) + 1 for i in range(1, n))


def count_lattice_points(W: WeightMatrix, k: int, cap: Optional[int] = None,
                         threads: Optional[int] = None) -> int:
    """Lattice points of the k-th dilate, enumerating the box -k c_ni <= x_i <= k c_in."""
    if k < 0:
        raise ValueError("dilate must be nonnegative")
    require_kleene(W)
    cap = PolytropeConfig.ENUMERATION_CAP if cap is None else cap
    size = box_size(W, k)
    if size > cap:
        raise EnumerationCapError(size, cap)

    n = W.n
    bounds = [(-k * W.c(n, i), k * W.c(i, n)) for i in range(1, n)]
    weights = W.array
    first = np.arange(bounds[0][0], bounds[0][1] + 1, dtype=np.int64)
    slabs = [first[s:s + PolytropeConfig.CHUNK_ROWS] for s in range(0, len(first), PolytropeConfig.CHUNK_ROWS)]
    workers = PolytropeConfig.get_thread_count(threads)

    start = time.time()
    if workers == 1:
        total = sum(_count_slab(bounds, slab, weights, k) for slab in slabs)
    else:
        total = 0
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = [executor.submit(_count_slab, bounds, slab, weights, k) for slab in slabs]
            for future in as_completed(futures):
                total += future.result()
    logger.debug(f"k={k}: {total} points in a box of {size} ({len(slabs)} slabs, "
                 f"{workers} workers, {time.time() - start:.2f}s)")
    return total


def dilate_counts(W: WeightMatrix, max_dilate: int, cap: Optional[int] = None,
                  threads: Optional[int] = None) -> DilateCounts:
    counts = [1] + [count_lattice_points(W, k, cap, threads) for k in range(1, max_dilate + 1)]
    return DilateCounts(tuple(counts))


def interpolate_ehrhart(W: WeightMatrix, cap: Optional[int] = None, threads: Optional[int] = None,
                        counts: Optional[DilateCounts] = None) -> UniPoly:
    """Lagrange interpolation of the counts at k = 0..n-1."""
    d = W.n - 1
    counts = counts if counts is not None else dilate_counts(W, d, cap, threads)
    k = sympy.Symbol("k")
    expr = sympy.interpolate([(j, counts[j]) for j in range(d + 1)], k)
    coeffs = sympy.Poly(sympy.expand(expr), k, domain="QQ").all_coeffs()[::-1]
    return UniPoly(tuple(Fraction(int(c.p), int(c.q)) for c in coeffs), var="k")


def normalized_volume_bruteforce(W: WeightMatrix, cap: Optional[int] = None,
                                 threads: Optional[int] = None) -> int:
    """(n-1)! times the leading coefficient of the interpolated Ehrhart polynomial."""
    d = W.n - 1
    volume = interpolate_ehrhart(W, cap, threads).coefficient(d) * factorial(d)
    if volume.denominator != 1:
        raise InternalConsistencyError(f"normalized volume {volume} is not an integer")
    return int(volume)


def hstar_bruteforce(W: WeightMatrix, cap: Optional[int] = None, threads: Optional[int] = None,
                     counts: Optional[DilateCounts] = None) -> Tuple[int, ...]:
    """
    h*-vector as the first d+1 coefficients of (1 - t)^(d+1) sum_k ehr(k) t^k,
    computed from the counts alone.
    """
    d = W.n - 1
    counts = counts if counts is not None else dilate_counts(W, d, cap, threads)
    hstar = []
    for i in range(d + 1):
        value = sum((-1) ** j * int(comb(d + 1, j, exact=True)) * counts[i - j] for j in range(i + 1))
        if value < 0:
            raise InternalConsistencyError(f"h*_{i} = {value} is negative")
        hstar.append(value)
    return tuple(hstar)
