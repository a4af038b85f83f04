import pytest

from cohomology_volume_integrator import volume_polynomial
from exact_polynomial_algebra import VarSet, parse
from groebner_ideal_engine import is_maximal_type
from polytrope_config import DomainMismatchError, EnumerationCapError, NotKleeneError, PolytropeError
from polytrope_verifier import run_verification, verify_coefficients_only
from tropical_weight_matrix import WeightMatrix

NON_MAXIMAL_4X4 = WeightMatrix(((0, 6, 8, 7), (8, 0, 2, 2), (6, 5, 0, 2), (6, 3, 3, 0)))


def test_full_verification_of_hexagon(hexagon):
    report = run_verification(hexagon, depth="full")
    assert report.passed
    assert report.summary_line() == "PASS (6 checks)"
    assert list(report.to_frame()['check']) == [
        "volume polynomial", "normalized volume", "lattice points",
        "ehrhart interpolation", "binomial basis", "h* vector",
    ]


def test_quick_verification(hexagon, segment):
    report = run_verification(hexagon, depth="quick")
    assert report.summary_line() == "PASS (3 checks)"
    assert run_verification(segment, depth="quick").passed


def test_full_verification_of_random_stars(random_star):
    for n in (3, 4):
        assert run_verification(random_star(n, high=6, generic=True), depth="full").passed


def test_non_maximal_star_skips_the_coefficient_check():
    assert not is_maximal_type(NON_MAXIMAL_4X4)
    report = run_verification(NON_MAXIMAL_4X4, depth="full")
    assert report.passed
    assert report.summary_line() == "PASS (7 checks, 1 skipped)"
    assert [c.name for c in report.skipped] == ["coefficient correspondence"]
    assert report.to_dict()['checks'][-1]['skipped'] is True


def test_non_maximal_star_at_coefficient_depth():
    report = verify_coefficients_only(NON_MAXIMAL_4X4)
    assert report.summary_line() == "PASS (2 checks, 1 skipped)"
    assert report.checks[-1].marker == "⚠️"


def test_full_verification_on_25_random_stars(random_star):
    """Entries at most 12, n in {3, 4}, ties and non-maximal stars included."""
    for i in range(25):
        W = random_star(3 + i % 2, high=12)
        report = run_verification(W, depth="full")
        assert report.passed, f"{W.to_list()}: {report.summary_line()}"


def test_wrong_volume_polynomial_fails(hexagon):
    wrong = volume_polynomial(hexagon).normalized + parse("a_12*a_21", VarSet.a(3))
    report = run_verification(hexagon, depth="full", volume_override=wrong)
    assert not report.passed
    assert report.first_failure.name == "normalized volume"
    assert report.summary_line().startswith("FAIL at normalized volume")


def test_corrupted_coefficient_is_named(example_3d):
    V = volume_polynomial(example_3d).normalized
    wrong = V + parse("a_32^2*a_42", VarSet.a(4))
    report = run_verification(example_3d, depth="coefficients", volume_override=wrong)
    assert not report.passed
    failure = report.first_failure
    assert failure.name == "coefficient correspondence"
    assert failure.detail.startswith("a_32^2*a_42")


def test_coefficient_depth_passes_on_the_worked_example(example_3d):
    report = verify_coefficients_only(example_3d)
    assert report.summary_line() == "PASS (2 checks)"
    assert report.to_dict()['depth'] == "coefficients"


def test_coefficient_depth_needs_n_4_or_5(hexagon):
    with pytest.raises(DomainMismatchError) as info:
        verify_coefficients_only(hexagon)
    assert isinstance(info.value, PolytropeError)
    with pytest.raises(DomainMismatchError):
        run_verification(hexagon, depth="coefficients")


def test_bad_inputs(hexagon):
    with pytest.raises(ValueError):
        run_verification(hexagon, depth="thorough")
    with pytest.raises(NotKleeneError):
        run_verification(WeightMatrix(((0, 100, 2), (3, 0, 4), (5, 6, 0))))
    with pytest.raises(EnumerationCapError):
        run_verification(hexagon, depth="full", cap=500)


@pytest.mark.slow
def test_full_verification_of_worked_example(example_3d):
    report = run_verification(example_3d, depth="full", threads=4)
    assert report.summary_line() == "PASS (7 checks)"
