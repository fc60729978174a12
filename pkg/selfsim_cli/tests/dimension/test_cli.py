import math
import pathlib

import pytest

from selfsim_cli.specs import csvout
from selfsim_cli.tests import utils as test_utils


LOG2_LOG3 = math.log(2) / math.log(3)


def test_simdim() -> None:
    result = test_utils.invoke("simdim", "cantor-1d")
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert block["verb"] == "simdim"
    assert block["spec"] == "cantor-1d"
    assert block["backend"] == "exact"
    assert block["kind"] == "similarity"
    assert float(block["value"]) == pytest.approx(LOG2_LOG3, abs=1e-12)
    assert "model_error" not in block


def test_simdim_reduced() -> None:
    result = test_utils.invoke("simdim", "exact-overlap-demo", "--reduced-r", "1/16")
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert block["value"] == "1"
    assert block["reduced_kind"] == "reduced-similarity"
    assert block["reduced_value"] == "1"
    # the unclamped root still sits below the one of the full map set
    full_root = -math.log2(math.sqrt(2) - 1)
    assert 1 < float(block["reduced_raw_value"]) < full_root - 1e-3


def test_simdim_reports_model_error() -> None:
    result = test_utils.invoke("simdim", "bandt-graf-line")
    block = test_utils.parse_block(result.output)
    assert float(block["value"]) == pytest.approx(math.log(3) / math.log(5), abs=1e-12)
    assert block["model_error"].startswith("t truncated after K=8")


def test_box_dimension_with_csv() -> None:
    result = test_utils.invoke(
        "dim",
        "cantor-1d",
        "--mode",
        "box",
        "--min-exp",
        "4",
        "--max-exp",
        "12",
        "--csv",
        "box.csv",
    )
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert float(block["value"]) == pytest.approx(LOG2_LOG3, abs=1e-9)
    assert block["records"] == "9"
    assert block["csv_rows"] == "9"
    records = csvout.parse_covering_csv(pathlib.Path("box.csv").read_text())
    assert [rec.count for rec in records] == [2**k for k in range(4, 13)]


def test_assouad_product_bounds() -> None:
    result = test_utils.invoke(
        "dim",
        "four-corner",
        "--mode",
        "assouad",
        "--min-exp",
        "1",
        "--max-exp",
        "6",
        "--min-gap",
        "3",
        "--product",
    )
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert float(block["lower_bound"]) == pytest.approx(LOG2_LOG3, abs=1e-9)
    assert float(block["upper_bound"]) == pytest.approx(2 * LOG2_LOG3, abs=1e-9)
    assert float(block["value"]) == pytest.approx(2 * LOG2_LOG3, abs=0.1)


def test_product_needs_a_diagonal_system() -> None:
    result = test_utils.invoke(
        "dim",
        "cantor-1d",
        "--mode",
        "assouad",
        "--min-exp",
        "1",
        "--max-exp",
        "8",
        "--min-gap",
        "3",
        "--product",
    )
    assert result.exit_code == 0, result.output
    assert "warning: --product needs" in result.output
    assert "lower_bound" not in test_utils.parse_block(result.output)


def test_ahlfors_mode() -> None:
    result = test_utils.invoke(
        "dim",
        "cantor-1d",
        "--mode",
        "ahlfors",
        "--min-exp",
        "2",
        "--max-exp",
        "3",
    )
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert block["kind"] == "ahlfors"
    assert float(block["spread"]) == pytest.approx(1.0, rel=1e-6)
    assert block["note"].startswith("mesh-count proxy")


def test_exponent_order_is_an_error() -> None:
    result = test_utils.invoke(
        "dim",
        "cantor-1d",
        "--mode",
        "box",
        "--min-exp",
        "5",
        "--max-exp",
        "5",
    )
    assert result.exit_code == 1
    assert "--max-exp must exceed --min-exp" in result.output
