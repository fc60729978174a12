import itertools
import math

import pytest

from selfsim_cli.dimension import moran
from selfsim_cli.geometry import scalar
from selfsim_cli.specs import registry
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.symbolic import stopping
from selfsim_cli.symbolic import words


def _brute_force(
    system: ifs_mod.IfsSystem,
    r: scalar.Scalar,
    max_length: int,
) -> list[words.Word]:
    found = []
    for length in range(max_length + 1):
        for letters in itertools.product(range(1, system.size + 1), repeat=length):
            word = words.Word.from_letters(letters)
            if ifs_mod.word_ratio(system, word) > r:
                continue
            if word.is_empty() or ifs_mod.word_ratio(system, word.parent()) > r:
                found.append(word)
    return sorted(found, key=words.Word.sort_key)


@pytest.mark.parametrize(
    ("spec", "r", "max_length"),
    [
        ("cantor-1d", "1/27", 4),
        ("cantor-1d", "1/10", 3),
        ("exact-overlap-demo", "1/4", 3),
        ("exact-overlap-demo", "1/9", 4),
        ("full-assouad", "1/20", 4),
    ],
)
def test_stopping_set_matches_brute_force(spec: str, r: str, max_length: int) -> None:
    system = registry.resolve(spec)
    expected = _brute_force(system, scalar.exact(r), max_length)
    assert stopping.stopping_set(system, r) == expected
    assert [w for w, _ in stopping.stopping_maps(system, r)] == expected


def test_overlap_demo_stopping_set(overlap_demo: ifs_mod.IfsSystem) -> None:
    assert [str(w) for w in stopping.stopping_set(overlap_demo, "1/4")] == [
        "(3)",
        "(1^2)",
        "(1,2)",
        "(1,3)",
        "(2,1)",
        "(2^2)",
        "(2,3)",
    ]


def test_stopping_set_is_a_cut_of_the_word_tree(full_assouad: ifs_mod.IfsSystem) -> None:
    s = float(moran.similarity_dimension(full_assouad))
    pieces = stopping.stopping_maps(full_assouad, "1/200")
    total = math.fsum(float(m.ratio) ** s for _, m in pieces)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_scale_must_lie_in_unit_interval(cantor: ifs_mod.IfsSystem) -> None:
    for r in ("0", "1", "3/2", "-1/2"):
        with pytest.raises(stopping.ScaleError):
            stopping.stopping_set(cantor, r)


def test_local_stopping_set(cantor: ifs_mod.IfsSystem) -> None:
    assert stopping.local_stopping_set(cantor, "1/9", ["0"]) == [words.Word.of(1, 1)]
    assert stopping.local_stopping_set(cantor, "1/9", ["1/2"]) == []
    assert stopping.local_stopping_set(cantor, "1/3", ["1/2"]) == [
        words.Word.of(1),
        words.Word.of(2),
    ]


def test_local_piece_count(overlap_demo: ifs_mod.IfsSystem) -> None:
    count, center = stopping.local_piece_count(
        overlap_demo,
        "1/4",
        [["0"], ["1/2"], ["1"]],
    )
    # (3), (1,1) and (1,3) cover 0; the ball is open
    assert count == 3
    assert center == (scalar.exact(0),)
