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

from __future__ import annotations

import dataclasses
import typing

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import words


if typing.TYPE_CHECKING:
    from collections.abc import Sequence


class InvalidIndexError(utils.SelfsimError):
    pass


@dataclasses.dataclass(frozen=True)
class IfsSystem:
    maps: tuple[similarity.Similarity, ...]
    name: str = ""
    trivial: bool = False
    notes: str = ""
    # Set when the maps only approximate the intended system, e.g. a
    # truncated irrational parameter
    model_error: str | None = None

    def __post_init__(self) -> None:
        if not self.maps:
            msg = "a system needs at least one map"
            raise utils.SelfsimError(msg)
        if self.trivial and len(self.maps) != 1:
            msg = "only one-map systems can be flagged trivial"
            raise utils.SelfsimError(msg)
        if not self.trivial and len(self.maps) < 2:
            msg = "a system needs at least two maps unless it is flagged trivial"
            raise utils.SelfsimError(msg)
        dims = {s.ambient_dim for s in self.maps}
        if len(dims) != 1:
            msg = f"maps live in different dimensions {sorted(dims)}"
            raise similarity.DimensionMismatchError(msg)
        scalar.common_backend(s.ratio for s in self.maps)
        for index, s in enumerate(self.maps, start=1):
            if not 0 < s.ratio < 1:
                msg = f"map {index}: ratio {s.ratio} outside (0,1)"
                raise similarity.NonContractingError(msg)

    @property
    def ambient_dim(self) -> int:
        return self.maps[0].ambient_dim

    @property
    def backend(self) -> scalar.Backend:
        return self.maps[0].backend

    @property
    def size(self) -> int:
        return len(self.maps)

    @property
    def ratios(self) -> list[scalar.Scalar]:
        return [s.ratio for s in self.maps]

    @property
    def min_ratio(self) -> scalar.Scalar:
        return min(self.ratios)

    @property
    def max_ratio(self) -> scalar.Scalar:
        return max(self.ratios)

    def map(self, index: int) -> similarity.Similarity:
        if not 1 <= index <= len(self.maps):
            msg = f"index {index} outside 1..{len(self.maps)}"
            raise InvalidIndexError(msg)
        return self.maps[index - 1]

    def __str__(self) -> str:
        return self.name or f"<{len(self.maps)} maps in dimension {self.ambient_dim}>"


def escaping_maps(system: IfsSystem) -> list[int]:
    """Indices of maps sending a corner of the unit cube outside it."""
    tol = None if system.backend.is_exact else scalar.make(system.backend, "1e-12")
    escaping = []
    for index, s in enumerate(system.maps, start=1):
        for corner in similarity.cube_corners(system.backend, system.ambient_dim):
            image = s(corner)
            if tol is None:
                inside = all(0 <= v <= 1 for v in image)
            else:
                inside = all(-tol <= v <= 1 + tol for v in image)
            if not inside:
                escaping.append(index)
                break
    return escaping


def make_system(
    maps: Sequence[similarity.Similarity],
    *,
    name: str = "",
    trivial: bool = False,
    notes: str = "",
    model_error: str | None = None,
) -> IfsSystem:
    system = IfsSystem(tuple(maps), name, trivial, notes, model_error)
    escaping = escaping_maps(system)
    if escaping:
        utils.warn(
            f"{system}: maps {', '.join(map(str, escaping))} do not send "
            "[0,1]^d into itself; windows and meshes assume a normalized system",
        )
    return system


def with_backend(system: IfsSystem, backend: scalar.Backend) -> IfsSystem:
    if backend == system.backend:
        return system
    maps = tuple(
        similarity.Similarity(
            s.ratio.to_backend(backend),
            similarity.Orthogonal(
                s.orthogonal.angle.to_backend(backend),
                s.orthogonal.reflect,
            ),
            tuple(b.to_backend(backend) for b in s.translation),
        )
        for s in system.maps
    )
    return dataclasses.replace(system, maps=maps)


def word_ratio(system: IfsSystem, word: words.Word) -> scalar.Scalar:
    ratio = scalar.one(system.backend)
    for letter, count in word.runs:
        ratio *= system.map(letter).ratio ** count
    return ratio


def word_map(system: IfsSystem, word: words.Word) -> similarity.Similarity:
    """S_w = S_{w1} o S_{w2} o ... o S_{wn}; the empty word gives the identity."""
    result = similarity.identity(system.backend, system.ambient_dim)
    for letter, count in word.runs:
        result = similarity.compose(
            result,
            similarity.power(system.map(letter), count),
        )
    return result
