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
"""Closure of the orthogonal parts of a system under composition."""

from __future__ import annotations

import collections
import dataclasses
import typing

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity


if typing.TYPE_CHECKING:
    from selfsim_cli.symbolic import ifs as ifs_mod


Verdict = typing.Literal["finite", "dense", "truncated"]

DEFAULT_EPS = "1e-9"
DEFAULT_MAX_ELEMENTS = 10_000


@dataclasses.dataclass(frozen=True)
class GroupAnalysis:
    verdict: Verdict
    elements: tuple[similarity.Orthogonal, ...]

    @property
    def order(self) -> int | None:
        return len(self.elements) if self.verdict == "finite" else None

    @property
    def rotations(self) -> int:
        return sum(1 for e in self.elements if not e.reflect)


def _key(
    element: similarity.Orthogonal,
    eps: scalar.Scalar | None,
) -> tuple[typing.Any, ...]:
    angle = element.angle
    if eps is None:
        return (element.reflect, angle.value)
    steps = (360 / eps).floor()
    # angles within eps of 360 fold onto 0
    return (element.reflect, (angle / eps).quantize(1) % steps)


def orthogonal_group_analysis(
    system: ifs_mod.IfsSystem,
    eps: scalar.ScalarLike = DEFAULT_EPS,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> GroupAnalysis:
    tolerance = None if system.backend.is_exact else scalar.make(system.backend, eps)
    generators = [s.orthogonal for s in system.maps]
    elements: dict[tuple[typing.Any, ...], similarity.Orthogonal] = {}
    queue: collections.deque[similarity.Orthogonal] = collections.deque()
    for g in generators:
        key = _key(g, tolerance)
        if key not in elements:
            elements[key] = g
            queue.append(g)
    while queue:
        if len(elements) > max_elements:
            verdict: Verdict = "truncated" if system.backend.is_exact else "dense"
            utils.debug(
                f"orthogonal closure passed {max_elements} elements, verdict {verdict}",
            )
            return GroupAnalysis(verdict, _ordered(elements.values()))
        current = queue.popleft()
        for g in generators:
            product = current.compose(g)
            key = _key(product, tolerance)
            if key not in elements:
                elements[key] = product
                queue.append(product)
    return GroupAnalysis("finite", _ordered(elements.values()))


def _ordered(
    elements: typing.Iterable[similarity.Orthogonal],
) -> tuple[similarity.Orthogonal, ...]:
    return tuple(sorted(elements, key=lambda e: (e.reflect, float(e.angle))))
