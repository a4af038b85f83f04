import os

import pytest

from cohomology_volume_integrator import volume_polynomial
from fundamental_polytope_subdivision import central_subdivision, verify_coefficients_3d
from polytrope_config import (
    DomainMismatchError,
    EnumerationCapError,
    InternalConsistencyError,
    NegativeCycleError,
    NotKleeneError,
    ParseError,
    PolytropeConfig,
    PolytropeError,
    UnknownVariableError,
)


def test_expected_vertex_counts():
    assert [PolytropeConfig.expected_vertex_count(n) for n in (2, 3, 4, 5)] == [2, 6, 20, 70]


def test_partition_label_and_threads():
    assert PolytropeConfig.partition_label((2, 1, 1)) == "2+1+1"
    assert PolytropeConfig.get_thread_count(None) == PolytropeConfig.DEFAULT_THREADS
    assert PolytropeConfig.get_thread_count(0) == PolytropeConfig.DEFAULT_THREADS
    assert PolytropeConfig.get_thread_count(1000) == PolytropeConfig.MAX_THREADS


def test_bundled_data_exists():
    for name in (PolytropeConfig.REPRESENTATIVES_3D, PolytropeConfig.REPRESENTATIVES_4D):
        assert os.path.isfile(PolytropeConfig.data_path(name))


def test_class_tables():
    sums, allowed = PolytropeConfig.class_tables(5)
    assert sum(sums.values()) == 120
    assert set(sums) == set(allowed)
    with pytest.raises(ValueError):
        PolytropeConfig.class_tables(3)


def test_3d_coefficients_stay_in_the_allowed_sets(example_3d):
    _, allowed = PolytropeConfig.class_tables(4)
    report = verify_coefficients_3d(volume_polynomial(example_3d), central_subdivision(example_3d))
    for partition, values in allowed.items():
        label = PolytropeConfig.partition_label(partition)
        assert set(report.table[report.table['partition'] == label]['coefficient']) <= values


@pytest.mark.parametrize("error, code", [
    (NegativeCycleError([0, 1], -1), PolytropeConfig.EXIT_NEGATIVE_CYCLE),
    (NotKleeneError("c_12 > c_13 + c_32"), PolytropeConfig.EXIT_NOT_KLEENE),
    (ParseError("bad row"), PolytropeConfig.EXIT_NOT_KLEENE),
    (EnumerationCapError(10, 5), PolytropeConfig.EXIT_RESOURCE_CAP),
])
def test_exit_codes(error, code):
    assert isinstance(error, PolytropeError)
    assert error.exit_code == code


def test_error_hierarchy():
    for cls in (DomainMismatchError, UnknownVariableError, InternalConsistencyError):
        assert issubclass(cls, PolytropeError)
