"""
Volume Polynomial Cache
=======================
Thread-safe cache of volume polynomials keyed by the monomial initial ideal.
The volume polynomial is constant on an open Groebner cone, so every Kleene
star with the same initial ideal shares one entry; a hit skips the cohomology
ring basis and the normal-form pass.
"""

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, List, Optional, Sequence, Tuple

from cohomology_volume_integrator import CohomologyIntegrator, VolumePolynomial
from exact_polynomial_algebra import MultiPoly
from groebner_ideal_engine import initial_ideal, toric_groebner_basis
from polytrope_config import PolytropeConfig
from tropical_weight_matrix import WeightMatrix, require_kleene, scale

logger = logging.getLogger(__name__)


class VolumePolynomialCache:
    """Cache of normalized volume polynomials with hit/miss statistics."""

    def __init__(self, max_entries: int = 4096):
        self.max_entries = max_entries
        self.cache: Dict[Tuple, Tuple[MultiPoly, MultiPoly]] = {}
        self.hits = 0
        self.misses = 0
        self.lock = threading.Lock()

    def _get_from_cache(self, key: Tuple) -> Optional[Tuple[MultiPoly, MultiPoly]]:
        with self.lock:
            entry = self.cache.get(key)
            if entry is None:
                self.misses += 1
            else:
                self.hits += 1
            return entry

    def _set_cache(self, key: Tuple, entry: Tuple[MultiPoly, MultiPoly]):
        with self.lock:
            if len(self.cache) >= self.max_entries:
                # oldest insertion goes first
                self.cache.pop(next(iter(self.cache)))
            self.cache[key] = entry

    def volume_polynomial(self, W: WeightMatrix) -> VolumePolynomial:
        """Volume polynomial of W, computed once per initial ideal."""
        require_kleene(W)
        toric = toric_groebner_basis(W)
        M = initial_ideal(W, toric)
        cached = self._get_from_cache(M.key())
        if cached is not None:
            logger.debug(f"cache hit for initial ideal with {len(M)} generators")
            normalized, euclidean = cached
            return VolumePolynomial(normalized, euclidean, W, M.weight_tie, M)
        volume = CohomologyIntegrator(W, toric_basis=toric).volume_polynomial()
        self._set_cache(M.key(), (volume.normalized, volume.euclidean))
        return volume

    def volume_polynomials_concurrent(self, matrices: Sequence[WeightMatrix],
                                      max_workers: Optional[int] = None) -> List[Dict]:
        """Volume polynomials of many matrices; status dicts in input order."""
        workers = PolytropeConfig.get_thread_count(max_workers)
        results: List[Optional[Dict]] = [None] * len(matrices)
        with ThreadPoolExecutor(max_workers=workers) as executor:
            future_to_index = {
                executor.submit(self.volume_polynomial, W): idx
                for idx, W in enumerate(matrices)
            }
            for future in as_completed(future_to_index):
                idx = future_to_index[future]
                try:
                    results[idx] = {'status': 'success', 'volume': future.result()}
                except Exception as e:
                    results[idx] = {'status': 'error', 'message': str(e)}
        return results

    def get_cache_stats(self) -> Dict:
        """Get cache statistics for monitoring."""
        with self.lock:
            lookups = self.hits + self.misses
            return {
                'total_cached_items': len(self.cache),
                'hits': self.hits,
                'misses': self.misses,
                'cache_hit_rate': f"{(self.hits / lookups) * 100:.1f}%" if lookups > 0 else "0%",
                'max_entries': self.max_entries,
            }

    def clear_cache(self):
        """Clear all cached polynomials and reset the counters."""
        with self.lock:
            self.cache.clear()
            self.hits = 0
            self.misses = 0


_volume_cache: Optional[VolumePolynomialCache] = None
_volume_cache_lock = threading.Lock()


def get_volume_cache() -> VolumePolynomialCache:
    """Get or create the process-wide cache instance."""
    global _volume_cache
    with _volume_cache_lock:
        if _volume_cache is None:
            _volume_cache = VolumePolynomialCache()
        return _volume_cache


def cached_volume_polynomial(W: WeightMatrix) -> VolumePolynomial:
    return get_volume_cache().volume_polynomial(W)


if __name__ == "__main__":
    cache = VolumePolynomialCache()
    hexagon = WeightMatrix(((0, 3, 2), (3, 0, 4), (5, 6, 0)))

    print("Testing volume polynomial cache...")
    start_time = time.time()
    first = cache.volume_polynomial(hexagon)
    print(f"Computed in {time.time() - start_time:.2f} seconds: {first.normalized}")

    start_time = time.time()
    second = cache.volume_polynomial(scale(hexagon, 2))
    print(f"Dilated star of the same cone in {time.time() - start_time:.2f} seconds")
    if second.normalized == first.normalized:
        print(f"✅ shared entry, Vol = {second.value()}")
    else:
        print("❌ cone constancy violated")

    print(f"\nCache stats: {cache.get_cache_stats()}")
