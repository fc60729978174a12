import pytest

from selfsim_cli.tests import utils as test_utils


def test_pseudo_tangent_from_the_family() -> None:
    result = test_utils.invoke(
        "tangent",
        "bandt-graf-line",
        "--backend",
        "float",
        "--mode",
        "pseudo",
        "--witnesses",
        "family",
        "--n",
        "20",
    )
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert block["status"] == "complete"
    assert block["n"] == "20"
    assert block["witnesses"] == "128"
    assert block["increments_within_bounds"] == "true"
    assert float(block["tangent_distance"]) <= float(block["distance_bound"])


def test_family_needs_the_float_backend() -> None:
    result = test_utils.invoke(
        "tangent",
        "bandt-graf-line",
        "--mode",
        "pseudo",
        "--witnesses",
        "family",
    )
    assert result.exit_code == 1
    assert "error:" in result.output


def test_exhausted_witnesses_exit_with_two() -> None:
    result = test_utils.invoke("tangent", "cantor-1d", "--mode", "pseudo")
    assert result.exit_code == 2
    block = test_utils.parse_block(result.output)
    assert block["status"] == "exhausted"


def test_pretangent_set() -> None:
    result = test_utils.invoke(
        "tangent",
        "full-assouad",
        "--mode",
        "ek",
        "--alpha",
        "1/4",
        "--beta",
        "1/3",
        "--k",
        "3",
    )
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert int(block["points"]) > 1
    assert 0 < float(block["grid_distance"]) < 0.5


def test_zoom_contains_the_pretangent_set() -> None:
    result = test_utils.invoke(
        "tangent",
        "full-assouad",
        "--mode",
        "zoom",
        "--alpha",
        "1/4",
        "--beta",
        "1/3",
        "--k",
        "3",
        "--zoom-k",
        "3",
    )
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert int(block["points"]) > 0
    assert float(block["ek_inclusion_distance"]) == pytest.approx(0, abs=1.001e-3)
