import fractions
import math

import pytest

from selfsim_cli import utils
from selfsim_cli.geometry import scalar


def test_exact_square_roots_compare_without_rounding() -> None:
    root2 = scalar.exact(2).sqrt()
    assert root2 < scalar.exact("3/2")
    assert root2 > scalar.exact("7/5")
    assert root2 == scalar.exact(2).sqrt()
    assert scalar.exact(8).sqrt() > root2
    assert scalar.exact(-1) < root2


def test_rational_square_root_stays_rational() -> None:
    assert scalar.exact("9/4").sqrt().value == fractions.Fraction(3, 2)


def test_surd_scaling() -> None:
    assert scalar.exact(2).sqrt() * 3 == scalar.exact(18).sqrt()
    assert scalar.exact(2).sqrt() * scalar.exact(2).sqrt() == scalar.exact(2)
    assert float(scalar.exact(2).sqrt()) == pytest.approx(math.sqrt(2))


def test_surd_addition_is_refused() -> None:
    with pytest.raises(scalar.InexactOperationError):
        _ = scalar.exact(2).sqrt() + 1


def test_backends_do_not_mix() -> None:
    with pytest.raises(scalar.BackendMismatchError):
        _ = scalar.exact(1) + scalar.make(scalar.floating(20), 1)
    with pytest.raises(scalar.BackendMismatchError):
        scalar.common_backend([scalar.exact(1), scalar.make(scalar.floating(), 1)])


def test_exact_logarithm_runs_on_float_backend() -> None:
    value = scalar.exact("1/2").log()
    assert value.backend == scalar.floating(scalar.DEFAULT_DIGITS)
    assert float(value) == pytest.approx(-math.log(2))


def test_parse_backend() -> None:
    assert scalar.parse_backend("exact") == scalar.EXACT
    assert scalar.parse_backend("float", 30).digits == 30
    assert str(scalar.parse_backend("float")) == "float(60)"
    with pytest.raises(utils.SelfsimError):
        scalar.parse_backend("double")
    with pytest.raises(utils.SelfsimError):
        scalar.floating(4)


def test_make_rejects_garbage() -> None:
    with pytest.raises(utils.SelfsimError, match="invalid number"):
        scalar.make(scalar.EXACT, "one third")


def test_float_backend_reads_rationals() -> None:
    third = scalar.make(scalar.floating(40), "1/3")
    assert float(third * 3) == pytest.approx(1.0)
    assert third.format(5) == "0.33333"


def test_floor_and_quantize() -> None:
    assert scalar.exact("7/2").floor() == 3
    assert scalar.exact(10).sqrt().floor() == 3
    assert scalar.make(scalar.floating(20), "0.25").quantize(1000) == 250
