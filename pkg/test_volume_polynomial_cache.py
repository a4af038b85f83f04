from cohomology_volume_integrator import volume_polynomial
from tropical_weight_matrix import WeightMatrix, scale
from volume_polynomial_cache import VolumePolynomialCache, cached_volume_polynomial, get_volume_cache


def test_dilated_star_shares_the_entry(hexagon):
    cache = VolumePolynomialCache()
    first = cache.volume_polynomial(hexagon)
    second = cache.volume_polynomial(scale(hexagon, 2))
    assert second.normalized == first.normalized
    assert second.value() == 4 * 79
    stats = cache.get_cache_stats()
    assert (stats['hits'], stats['misses'], stats['total_cached_items']) == (1, 1, 1)
    assert stats['cache_hit_rate'] == "50.0%"


def test_cached_value_matches_direct_computation(example_3d):
    cache = VolumePolynomialCache()
    assert cache.volume_polynomial(example_3d).normalized == volume_polynomial(example_3d).normalized


def test_eviction_keeps_the_bound(hexagon, segment):
    cache = VolumePolynomialCache(max_entries=1)
    cache.volume_polynomial(hexagon)
    cache.volume_polynomial(segment)
    assert cache.get_cache_stats()['total_cached_items'] == 1


def test_concurrent_results_keep_input_order(hexagon, segment):
    cache = VolumePolynomialCache()
    bad = WeightMatrix(((0, 100, 2), (3, 0, 4), (5, 6, 0)))
    results = cache.volume_polynomials_concurrent([hexagon, bad, segment, scale(hexagon, 3)], max_workers=3)
    assert [r['status'] for r in results] == ['success', 'error', 'success', 'success']
    assert results[0]['volume'].value() == 79
    assert results[2]['volume'].value() == 2
    assert results[3]['volume'].value() == 9 * 79


def test_clear_resets_counters(hexagon):
    cache = VolumePolynomialCache()
    cache.volume_polynomial(hexagon)
    cache.clear_cache()
    assert cache.get_cache_stats() == {
        'total_cached_items': 0, 'hits': 0, 'misses': 0, 'cache_hit_rate': "0%", 'max_entries': 4096,
    }


def test_process_wide_cache(hexagon):
    assert get_volume_cache() is get_volume_cache()
    assert cached_volume_polynomial(hexagon).value() == 79
