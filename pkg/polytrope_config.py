"""
Polytrope Configuration Module
==============================
Configuration settings, constants and the shared exception hierarchy for the
polytrope volume / Ehrhart toolkit. Centralizes every tunable (enumeration
caps, thread counts, verification depth, coefficient tables) so the CLI,
the dashboard and the tests read the same numbers.
"""

import os
from typing import Dict, FrozenSet, Optional, Sequence, Tuple

from scipy.special import comb


class PolytropeConfig:
    """Configuration class for the polytrope pipeline."""

    # Supported dimension parameter (matrix size n, polytrope dimension n-1)
    MIN_N = 2
    MAX_N = 5
    MAX_PAIR_INDEX = 9                 # variable names a_ij, x_ij and JSON keys "ij" use one digit per index

    # Oracle enumeration
    ENUMERATION_CAP = 10 ** 8          # box points per dilate
    DEFAULT_THREADS = 1
    MAX_THREADS = 32
    CHUNK_ROWS = 4                     # first-coordinate slices per worker task

    # Verification
    FULL_DILATES = (1, 2, 3, 4)
    VERIFY_DEPTHS = ("quick", "full", "coefficients")

    # Table depths for the Todd / Eulerian transforms (d = n - 1 <= 4)
    BERNOULLI_DEPTH = 8
    EULERIAN_DEPTH = 4

    # Exit codes of the command line tool
    EXIT_OK = 0
    EXIT_VERIFY_FAILED = 1
    EXIT_NEGATIVE_CYCLE = 2
    EXIT_NOT_KLEENE = 3
    EXIT_RESOURCE_CAP = 4

    # Coefficient classes of 3D volume polynomials, keyed by exponent partition
    CLASS_SUMS_3D = {
        (3,): 12,
        (2, 1): -108,
        (1, 1, 1): 120,
    }
    ALLOWED_COEFFICIENTS_3D = {
        (3,): frozenset({0, 1, 2}),
        (2, 1): frozenset({-3, 0}),
        (1, 1, 1): frozenset({0, 6}),
    }

    # Summary statistics for 4D volume polynomials
    CLASS_SUMS_4D = {
        (4,): -20,
        (3, 1): 320,
        (2, 2): 300,
        (2, 1, 1): -2160,
        (1, 1, 1, 1): 1680,
    }
    ALLOWED_COEFFICIENTS_4D = {
        (4,): frozenset({-6, -3, -2, -1, 0, 1, 2, 3}),
        (3, 1): frozenset({-4, 0, 4, 8}),
        (2, 2): frozenset({0, 6}),
        (2, 1, 1): frozenset({-12, 0, 12}),
        (1, 1, 1, 1): frozenset({0, 24}),
    }
    STAR_ORBIT_COEFFICIENT_4D = 24

    # Bundled representatives
    DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
    REPRESENTATIVES_3D = "representatives_3d.txt"
    REPRESENTATIVES_4D = "representatives_4d.txt"

    # Dashboard display settings
    DASHBOARD_TITLE = "Polytrope Explorer"
    DASHBOARD_DEFAULT_MATRIX = "0 3 2\n3 0 4\n5 6 0"
    DASHBOARD_MAX_DILATE = 6

    @classmethod
    def expected_vertex_count(cls, n: int) -> int:
        """Vertex count of a maximal polytrope, C(2n-2, n-1)."""
        return int(comb(2 * n - 2, n - 1, exact=True))

    @classmethod
    def partition_label(cls, partition: Sequence[int]) -> str:
        """Render an exponent partition such as (2, 1, 1) as '2+1+1'."""
        return "+".join(str(p) for p in partition)

    @classmethod
    def get_thread_count(cls, requested: Optional[int] = None) -> int:
        """Clamp a requested worker count to the supported range."""
        if requested is None or requested < 1:
            return cls.DEFAULT_THREADS
        return min(requested, cls.MAX_THREADS)

    @classmethod
    def data_path(cls, name: str) -> str:
        """Absolute path of a bundled data file."""
        return os.path.join(cls.DATA_DIR, name)

    @classmethod
    def class_tables(cls, n: int) -> Tuple[Dict[Tuple[int, ...], int],
                                           Dict[Tuple[int, ...], FrozenSet[int]]]:
        """Class sums and allowed coefficient sets for n = 4 or n = 5."""
        if n == 4:
            return cls.CLASS_SUMS_3D, cls.ALLOWED_COEFFICIENTS_3D
        if n == 5:
            return cls.CLASS_SUMS_4D, cls.ALLOWED_COEFFICIENTS_4D
        raise ValueError(f"No coefficient tables for n={n}")


class PolytropeError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = PolytropeConfig.EXIT_VERIFY_FAILED


class NegativeCycleError(PolytropeError):
    """The weight matrix has a directed cycle of negative total weight."""

    exit_code = PolytropeConfig.EXIT_NEGATIVE_CYCLE

    def __init__(self, cycle: Sequence[int], weight: int):
        self.cycle = list(cycle)
        self.weight = weight
        path = " -> ".join(str(v + 1) for v in list(cycle) + [cycle[0]])
        super().__init__(f"negative cycle {path} (weight {weight})")


class NotKleeneError(PolytropeError):
    """The input matrix is not its own Kleene star."""

    exit_code = PolytropeConfig.EXIT_NOT_KLEENE


class EnumerationCapError(PolytropeError):
    """Lattice-point enumeration box exceeds the configured cap."""

    exit_code = PolytropeConfig.EXIT_RESOURCE_CAP

    def __init__(self, box_size: int, cap: int):
        self.box_size = box_size
        self.cap = cap
        super().__init__(f"enumeration box has {box_size} points, cap is {cap}")


class DomainMismatchError(PolytropeError):
    """Polynomials over different variable sets or coefficient domains were combined."""


class UnknownVariableError(PolytropeError):
    """A variable name does not belong to the polynomial's variable set."""


class InternalConsistencyError(PolytropeError):
    """An invariant of the pipeline failed (gamma = 0, non-integral output, ...)."""


class ParseError(PolytropeError):
    """Malformed matrix or polynomial input."""

    exit_code = PolytropeConfig.EXIT_NOT_KLEENE
