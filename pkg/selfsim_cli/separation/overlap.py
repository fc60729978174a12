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

import typing

from selfsim_cli import utils
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import relative
from selfsim_cli.symbolic import words


if typing.TYPE_CHECKING:
    from selfsim_cli.symbolic import ifs as ifs_mod


class ExactnessRequiredError(utils.SelfsimError):
    pass


def exact_overlap_scan(
    system: ifs_mod.IfsSystem,
    max_level: int,
) -> list[relative.OverlapWitness]:
    """Pairs of distinct words with identical maps, found level by level.

    Every composed map goes into one table keyed by its exact parameters.
    A word whose map is already there is reported against the first word
    that produced it and is not expanded further, so only first-occurrence
    collisions are listed.
    """
    if not system.backend.is_exact:
        msg = (
            "exact overlaps can only be decided on the exact backend; "
            "use wsp-scan for float systems"
        )
        raise ExactnessRequiredError(msg)
    if max_level < 1:
        msg = f"max level must be at least 1, got {max_level}"
        raise utils.SelfsimError(msg)
    first_word: dict[tuple[typing.Any, ...], words.Word] = {}
    found = []
    frontier = [(words.EMPTY, similarity.identity(system.backend, system.ambient_dim))]
    for level in range(1, max_level + 1):
        fresh = []
        for word, s in frontier:
            for letter, step in enumerate(system.maps, start=1):
                child_word = word.append(letter)
                child = similarity.compose(s, step)
                key = child.key()
                if key in first_word:
                    found.append(relative.OverlapWitness(first_word[key], child_word))
                    continue
                first_word[key] = child_word
                fresh.append((child_word, child))
        utils.debug(
            f"overlap scan: level {level}, {len(fresh)} new maps, {len(found)} collisions",
        )
        frontier = fresh
    return sorted(found, key=relative.OverlapWitness.sort_key)
