import pytest

from selfsim_cli.geometry import scalar
from selfsim_cli.separation import multiplicity
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.symbolic import stopping


def test_overlap_demo_multiplicity(overlap_demo: ifs_mod.IfsSystem) -> None:
    report = multiplicity.multiplicity_scan(overlap_demo, "1/4")
    assert report.max_multiplicity == 3
    assert report.worst_ball_center == (scalar.exact("1/4"),)
    assert report.points == 4
    assert report.duplicates == 3


def test_cantor_orbit_is_separated(cantor: ifs_mod.IfsSystem) -> None:
    report = multiplicity.multiplicity_scan(cantor, "1/27")
    assert report.max_multiplicity == 1
    assert report.points == 8
    assert report.duplicates == 0


def test_counts_do_not_grow_for_separated_systems(cantor: ifs_mod.IfsSystem) -> None:
    counts = [
        multiplicity.multiplicity_scan(cantor, f"1/{3**k}", z=["1/2"]).max_multiplicity
        for k in range(2, 7)
    ]
    assert max(counts) <= 2


def test_scale_is_checked(cantor: ifs_mod.IfsSystem) -> None:
    with pytest.raises(stopping.ScaleError):
        multiplicity.multiplicity_scan(cantor, "2")
