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
"""Sequences of word pairs whose relative maps approach the identity."""

from __future__ import annotations

import dataclasses
import functools
import typing

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.symbolic import words


if typing.TYPE_CHECKING:
    from collections.abc import Iterable

    from selfsim_cli.symbolic import relative


@dataclasses.dataclass(frozen=True)
class WitnessPair:
    alpha: words.Word
    beta: words.Word
    # S_alpha^-1 o S_beta
    relative: similarity.Similarity

    @functools.cached_property
    def distance(self) -> scalar.Scalar:
        return similarity.identity_distance(self.relative)


@dataclasses.dataclass(frozen=True)
class WitnessSequence:
    pairs: tuple[WitnessPair, ...]
    orientation_normalized: bool = False

    def __post_init__(self) -> None:
        previous = None
        for pair in self.pairs:
            distance = pair.distance
            if distance.sign() <= 0:
                msg = f"witness {pair.alpha} / {pair.beta} is an exact overlap"
                raise utils.SelfsimError(msg)
            if previous is not None and not distance < previous:
                msg = "witness distances must decrease strictly"
                raise utils.SelfsimError(msg)
            previous = distance

    def __len__(self) -> int:
        return len(self.pairs)


def pair_from_words(
    system: ifs_mod.IfsSystem,
    alpha: words.Word,
    beta: words.Word,
) -> WitnessPair:
    relative = similarity.compose(
        similarity.inverse(ifs_mod.word_map(system, alpha)),
        ifs_mod.word_map(system, beta),
    )
    return WitnessPair(alpha, beta, relative)


def decreasing(pairs: Iterable[WitnessPair]) -> list[WitnessPair]:
    """Sort by distance, largest first, keeping one pair per distance."""
    ordered = sorted(
        (p for p in pairs if p.distance.sign() > 0),
        key=lambda p: (p.distance, p.alpha.sort_key(), p.beta.sort_key()),
        reverse=True,
    )
    kept: list[WitnessPair] = []
    for pair in ordered:
        if not kept or pair.distance < kept[-1].distance:
            kept.append(pair)
    return kept


def from_records(
    records: Iterable[relative.RelativeMapRecord],
) -> WitnessSequence:
    return WitnessSequence(
        tuple(
            decreasing(WitnessPair(r.alpha, r.beta, r.map) for r in records),
        ),
    )


def normalize_orientation(
    system: ifs_mod.IfsSystem,
    pairs: Iterable[WitnessPair],
) -> WitnessSequence:
    """Make every S_alpha orientation preserving.

    Pairs whose S_alpha reflects are replaced by (alpha r, beta r) where r is
    the first reflecting map; the new distance is at most c_r^-1 times the
    old one.
    """
    if system.ambient_dim != 1:
        msg = "orientation normalization applies to systems of the line"
        raise similarity.DimensionMismatchError(msg)
    pairs = list(pairs)
    if not pairs:
        msg = "no witness pairs to normalize"
        raise utils.SelfsimError(msg)
    reflecting = next(
        (i for i, s in enumerate(system.maps, start=1) if s.reflecting),
        None,
    )
    normalized = []
    for pair in pairs:
        if not ifs_mod.word_map(system, pair.alpha).reflecting:
            normalized.append(pair)
            continue
        if reflecting is None:
            msg = f"{pair.alpha} reflects although no map of {system} does"
            raise utils.SelfsimError(msg)
        normalized.append(
            pair_from_words(
                system,
                pair.alpha.append(reflecting),
                pair.beta.append(reflecting),
            ),
        )
    return WitnessSequence(tuple(decreasing(normalized)), orientation_normalized=True)
