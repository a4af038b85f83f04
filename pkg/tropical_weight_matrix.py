"""
Tropical Weight Matrix Layer
============================
Weighted complete digraphs given by n x n integer matrices with zero
diagonal: Kleene stars (all-pairs shortest paths), membership in the
polytrope region, the H-representation x_i - x_j <= c_ij of the polytrope in
the chart x_n = 0, point membership and vertex solving.
"""

import json
import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from exact_polynomial_algebra import ordered_pairs
from polytrope_config import NegativeCycleError, NotKleeneError, ParseError, PolytropeConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightMatrix:
    """Integer edge weights of the complete digraph on [n]; entries[i][j] is c_(i+1)(j+1)."""
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        n = len(rows)
        if n < PolytropeConfig.MIN_N:
            raise ValueError(f"matrix must be at least {PolytropeConfig.MIN_N}x{PolytropeConfig.MIN_N}")
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        if any(rows[i][i] != 0 for i in range(n)):
            raise ValueError("diagonal entries must be 0")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_array(cls, array) -> "WeightMatrix":
        arr = np.asarray(array)
        if arr.dtype.kind == "f":
            if not np.all(arr == np.round(arr)):
                raise ValueError("weights must be integers")
        return cls(tuple(tuple(int(v) for v in row) for row in arr.tolist()))

    @classmethod
    def from_vector(cls, n: int, vector: Sequence[int]) -> "WeightMatrix":
        """Build from (c_12, c_13, ..., c_n(n-1)) in lexicographic pair order."""
        pairs = ordered_pairs(n)
        if len(vector) != len(pairs):
            raise ValueError(f"expected {len(pairs)} weights, got {len(vector)}")
        rows = [[0] * n for _ in range(n)]
        for (i, j), value in zip(pairs, vector):
            rows[i - 1][j - 1] = int(value)
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def zeros(cls, n: int) -> "WeightMatrix":
        return cls(tuple(tuple(0 for _ in range(n)) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def c(self, i: int, j: int) -> int:
        """Weight c_ij with 1-based indices."""
        return self.entries[i - 1][j - 1]

    def weight_vector(self) -> Tuple[int, ...]:
        """Weights in the canonical pair order of the x/a variables."""
        return tuple(self.c(i, j) for i, j in ordered_pairs(self.n))

    def to_text(self) -> str:
        width = max(len(str(v)) for row in self.entries for v in row)
        return "\n".join(" ".join(str(v).rjust(width) for v in row) for row in self.entries)

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class HRep:
    """The inequalities x_i - x_j <= bound (1-based i, j) of a polytrope in the chart x_n = 0."""
    n: int
    inequalities: Tuple[Tuple[int, int, int], ...]

    def box(self) -> List[Tuple[int, int]]:
        """Bounds -c_ni <= x_i <= c_in for the free coordinates x_1..x_(n-1)."""
        bounds = {(i, j): b for i, j, b in self.inequalities}
        return [(-bounds[(self.n, i)], bounds[(i, self.n)]) for i in range(1, self.n)]

    def is_point(self) -> bool:
        bounds = {(i, j): b for i, j, b in self.inequalities}
        return all(bounds[(i, j)] + bounds[(j, i)] == 0 for i, j, _ in self.inequalities)

    def describe(self) -> List[str]:
        lines = []
        for i, j, bound in self.inequalities:
            if j == self.n:
                lhs = f"x_{i}"
            elif i == self.n:
                lhs = f"-x_{j}"
            else:
                lhs = f"x_{i} - x_{j}"
            lines.append(f"{lhs} <= {bound}")
        return lines


def _negative_cycle(weights: np.ndarray, successor: np.ndarray, start: int) -> Tuple[List[int], int]:
    """Extract a simple negative cycle from the closed successor walk through `start`."""
    n = weights.shape[0]
    walk = [start]
    cur = start
    for _ in range(n * n):
        cur = int(successor[cur, start])
        walk.append(cur)
        if cur == start:
            break

    def weight(cycle: Sequence[int]) -> int:
        return int(sum(weights[cycle[t], cycle[(t + 1) % len(cycle)]] for t in range(len(cycle))))

    stack: List[int] = []
    position = {}
    for v in walk:
        if v in position:
            cycle = stack[position[v]:]
            if weight(cycle) < 0:
                return cycle, weight(cycle)
            for u in cycle:
                position.pop(u, None)
            del stack[len(stack) - len(cycle):]
        position[v] = len(stack)
        stack.append(v)
    return [start], int(weights[start, start])


def kleene_star(W: WeightMatrix) -> WeightMatrix:
    """
    All-pairs lowest path weights by Floyd-Warshall.

    Raises NegativeCycleError with a witness cycle as soon as a diagonal entry
    turns negative.
    """
    weights = W.array
    dist = weights.copy()
    n = W.n
    successor = np.tile(np.arange(n), (n, 1))
    for k in range(n):
        via = dist[:, k:k + 1] + dist[k:k + 1, :]
        better = via < dist
        dist = np.where(better, via, dist)
        successor = np.where(better, successor[:, k:k + 1], successor)
        negative = np.flatnonzero(np.diag(dist) < 0)
        if negative.size:
            cycle, total = _negative_cycle(weights, successor, int(negative[0]))
            raise NegativeCycleError(cycle, total)
    return WeightMatrix.from_array(dist)


def is_kleene(W: WeightMatrix) -> bool:
    """True iff W has no negative cycle and equals its own Kleene star."""
    try:
        star = kleene_star(W)
    except NegativeCycleError as exc:
        logger.info(f"not a Kleene star: {exc}")
        return False
    if star != W:
        diff = np.argwhere(star.array != W.array)
        i, j = (int(v) + 1 for v in diff[0])
        logger.info(f"not a Kleene star: c_{i}{j} = {W.c(i, j)} exceeds path weight {star.c(i, j)}")
        return False
    return True


def require_kleene(W: WeightMatrix) -> None:
    if not is_kleene(W):
        raise NotKleeneError("input matrix is not a Kleene star (use its Kleene star instead)")


def hrep(W: WeightMatrix) -> HRep:
    """The n^2 - n inequalities of the polytrope of a Kleene star."""
    require_kleene(W)
    return HRep(W.n, tuple((i, j, W.c(i, j)) for i, j in ordered_pairs(W.n)))


def contains_point(W: WeightMatrix, x: Sequence[int]) -> bool:
    """Membership of the point (x_1, ..., x_(n-1), 0) in the polytrope of W."""
    if len(x) != W.n - 1:
        raise ValueError(f"expected a point with {W.n - 1} coordinates, got {len(x)}")
    y = np.append(np.asarray(x, dtype=np.int64), 0)
    return bool(np.all(y[:, None] - y[None, :] <= W.array))


def permute(W: WeightMatrix, perm: Sequence[int]) -> WeightMatrix:
    """Simultaneous row/column relabelling: entry (perm[i], perm[j]) receives c_ij (0-based perm)."""
    perm = list(perm)
    if sorted(perm) != list(range(W.n)):
        raise ValueError(f"{perm} is not a permutation of range({W.n})")
    out = np.zeros((W.n, W.n), dtype=np.int64)
    out[np.ix_(perm, perm)] = W.array
    return WeightMatrix.from_array(out)


def scale(W: WeightMatrix, k: int) -> WeightMatrix:
    """The Kleene star of the k-th dilate."""
    return WeightMatrix.from_array(W.array * int(k))


def vertex_of_facets(W: WeightMatrix, pairs: Iterable[Tuple[int, int]]) -> Tuple[int, ...]:
    """
    The point where the n-1 facets x_i - x_j = c_ij, (i, j) in pairs, are all
    tight (chart x_n = 0). The pairs must span a tree on [n].
    """
    pairs = list(pairs)
    n = W.n
    if len(pairs) != n - 1:
        raise ValueError(f"a vertex needs exactly {n - 1} tight facets")
    rows = [i - 1 for i, _ in pairs] + [j - 1 for _, j in pairs]
    cols = [j - 1 for _, j in pairs] + [i - 1 for i, _ in pairs]
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    order, predecessors = breadth_first_order(graph, n - 1, directed=False)
    if len(order) != n:
        raise ValueError(f"tight facets {pairs} do not determine a vertex")
    tight = {(i - 1, j - 1): W.c(i, j) for i, j in pairs}
    x = [0] * n
    for v in order[1:]:
        p = int(predecessors[v])
        v = int(v)
        # x_v - x_p = c_vp or x_p - x_v = c_pv
        x[v] = x[p] + tight[(v, p)] if (v, p) in tight else x[p] - tight[(p, v)]
    return tuple(x[:-1])


def parse_matrix(text: str) -> WeightMatrix:
    """Parse whitespace rows of integers or a JSON 2-D integer array."""
    stripped = text.strip()
    try:
        if stripped.startswith("["):
            rows = json.loads(stripped)
        else:
            rows = [[int(tok) for tok in line.split()] for line in stripped.splitlines() if line.strip()]
        if not rows or any(not isinstance(v, int) or isinstance(v, bool) for row in rows for v in row):
            raise ParseError("matrix entries must be integers")
        return WeightMatrix(tuple(tuple(row) for row in rows))
    except ParseError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(f"cannot parse matrix: {exc}") from exc
