from selfsim_cli.tests import utils as test_utils


def test_stopping_set() -> None:
    result = test_utils.invoke("stopping", "exact-overlap-demo", "--r", "1/4", "--at", "0")
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert block["verb"] == "stopping"
    assert block["count"] == "7"
    assert block["min_ratio"] == "1/8"
    assert block["max_ratio"] == "1/4"
    assert block["words"] == "(3) (1^2) (1,2) (1,3) (2,1) (2^2) (2,3)"
    assert block["local_count"] == "3"
    assert block["local_words"] == "(3) (1^2) (1,3)"


def test_planar_stopping_reports_group_and_fixed_points() -> None:
    result = test_utils.invoke("stopping", "four-corner", "--r", "1/3")
    assert result.exit_code == 0, result.output
    block = test_utils.parse_block(result.output)
    assert block["count"] == "4"
    assert block["orthogonal_group"] == "finite"
    assert block["orthogonal_group_order"] == "1"
    assert block["fixed_points"] == "spanning"


def test_invalid_scale() -> None:
    result = test_utils.invoke("stopping", "cantor-1d", "--r", "3/2")
    assert result.exit_code == 1
    assert "error:" in result.output
    result = test_utils.invoke("stopping", "cantor-1d", "--r", "-1")
    assert result.exit_code == 1


def test_invalid_point() -> None:
    result = test_utils.invoke("stopping", "cantor-1d", "--r", "1/9", "--at", "1,2,3")
    assert result.exit_code == 1
