#
#  Copyright © 2021-2024 Mergify SAS
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.
"""Stopping sets: words whose ratio first drops to r or below.

`local_stopping_set` keeps a word when the open ball B_r(x) meets the
bounding box of the image of the unit cube. This over-approximates the
intersection with the image of the attractor itself.
"""

from __future__ import annotations

import dataclasses
import typing

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.symbolic import words


if typing.TYPE_CHECKING:
    from collections.abc import Sequence


class ScaleError(utils.SelfsimError):
    pass


def as_scale(system: ifs_mod.IfsSystem, r: scalar.ScalarLike) -> scalar.Scalar:
    value = scalar.make(system.backend, r)
    if not 0 < value < 1:
        msg = f"scale r = {value} outside (0,1)"
        raise ScaleError(msg)
    return value


def stopping_set(system: ifs_mod.IfsSystem, r: scalar.ScalarLike) -> list[words.Word]:
    """Words alpha with c_alpha <= r < c_parent(alpha), sorted by length then letters."""
    scale = as_scale(system, r)
    ratios = system.ratios
    found = []
    stack = [(words.EMPTY, scalar.one(system.backend))]
    while stack:
        word, ratio = stack.pop()
        if ratio <= scale:
            found.append(word)
            continue
        for letter in range(len(ratios), 0, -1):
            stack.append((word.append(letter), ratio * ratios[letter - 1]))
    return sorted(found, key=words.Word.sort_key)


def stopping_maps(
    system: ifs_mod.IfsSystem,
    r: scalar.ScalarLike,
) -> list[tuple[words.Word, similarity.Similarity]]:
    """I_r together with the composed maps, built incrementally along the descent."""
    scale = as_scale(system, r)
    found = []
    stack = [(words.EMPTY, similarity.identity(system.backend, system.ambient_dim))]
    while stack:
        word, s = stack.pop()
        if s.ratio <= scale:
            found.append((word, s))
            continue
        for letter in range(system.size, 0, -1):
            stack.append(
                (word.append(letter), similarity.compose(s, system.map(letter))),
            )
    return sorted(found, key=lambda item: item[0].sort_key())


@dataclasses.dataclass(frozen=True)
class Box:
    lower: similarity.Point
    upper: similarity.Point

    def squared_distance(self, point: similarity.Point) -> scalar.Scalar:
        total = scalar.zero(point[0].backend)
        for lo, hi, x in zip(self.lower, self.upper, point, strict=True):
            if x < lo:
                total += (lo - x) * (lo - x)
            elif x > hi:
                total += (x - hi) * (x - hi)
        return total


def image_box(s: similarity.Similarity) -> Box:
    images = [s(c) for c in similarity.cube_corners(s.backend, s.ambient_dim)]
    return Box(
        tuple(min(p[k] for p in images) for k in range(s.ambient_dim)),
        tuple(max(p[k] for p in images) for k in range(s.ambient_dim)),
    )


def as_point(
    system: ifs_mod.IfsSystem,
    x: Sequence[scalar.ScalarLike],
) -> similarity.Point:
    if len(x) != system.ambient_dim:
        msg = f"point has {len(x)} coordinates, system lives in dimension {system.ambient_dim}"
        raise similarity.DimensionMismatchError(msg)
    return tuple(scalar.make(system.backend, v) for v in x)


def local_stopping_set(
    system: ifs_mod.IfsSystem,
    r: scalar.ScalarLike,
    x: Sequence[scalar.ScalarLike],
) -> list[words.Word]:
    scale = as_scale(system, r)
    center = as_point(system, x)
    return [
        word
        for word, s in stopping_maps(system, scale)
        if image_box(s).squared_distance(center) < scale * scale
    ]


def local_piece_count(
    system: ifs_mod.IfsSystem,
    r: scalar.ScalarLike,
    centers: Sequence[Sequence[scalar.ScalarLike]],
) -> tuple[int, similarity.Point | None]:
    """Largest |I_r(x)| over the centers, with the center attaining it."""
    scale = as_scale(system, r)
    boxes = [image_box(s) for _, s in stopping_maps(system, scale)]
    best, best_center = 0, None
    for x in centers:
        center = as_point(system, x)
        count = sum(1 for box in boxes if box.squared_distance(center) < scale * scale)
        if count > best:
            best, best_center = count, center
    return best, best_center
