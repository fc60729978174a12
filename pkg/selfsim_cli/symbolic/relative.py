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
"""Breadth-first closure over relative maps S_alpha^-1 o S_beta.

Level n pairs words from the common stopping set I_r with r = c_min**n.
A state is a relative map R together with s = c_alpha / r, and moving to
the next level refines each side inside its own relative stopping set:
alpha -> alpha gamma with gamma in I_(c_min/s), and R -> S_gamma^-1 o R o
S_delta. When every ratio equals c_min, s stays 1 and the transition is
the familiar R -> S_i^-1 o R o S_j on words of equal length.

One visited set spans all levels; a state is reported at the level where
it is first reached, with the first pair of words reaching it. A state is
pruned when the bounding box of R([0,1]^d) lies farther than the prune
bound from [0,1]^d. That gap can only shrink from a state to its parent,
and it never exceeds the distance of R to the identity.
"""

from __future__ import annotations

import dataclasses
import typing

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.symbolic import stopping
from selfsim_cli.symbolic import words


if typing.TYPE_CHECKING:
    from collections.abc import Iterator
    from collections.abc import Sequence


@dataclasses.dataclass(frozen=True)
class RelativeMapRecord:
    alpha: words.Word
    beta: words.Word
    map: similarity.Similarity
    id_distance: scalar.Scalar
    level: int

    def recompute(self, system: ifs_mod.IfsSystem) -> similarity.Similarity:
        return similarity.compose(
            similarity.inverse(ifs_mod.word_map(system, self.alpha)),
            ifs_mod.word_map(system, self.beta),
        )


@dataclasses.dataclass(frozen=True)
class OverlapWitness:
    """Distinct words composing to the same map."""

    alpha: words.Word
    beta: words.Word

    def sort_key(self) -> tuple[typing.Any, ...]:
        return (self.alpha.sort_key(), self.beta.sort_key())


def default_prune_bound(system: ifs_mod.IfsSystem) -> scalar.Scalar:
    return (scalar.make(system.backend, 4 * system.ambient_dim)).sqrt()


def cube_gap_squared(s: similarity.Similarity) -> scalar.Scalar:
    """Squared distance from the bounding box of S([0,1]^d) to [0,1]^d."""
    box = stopping.image_box(s)
    total = scalar.zero(s.backend)
    for lo, hi in zip(box.lower, box.upper, strict=True):
        if lo > 1:
            total += (lo - 1) * (lo - 1)
        elif hi < 0:
            total += hi * hi
    return total


def _scale_key(s: scalar.Scalar) -> typing.Any:
    if s.backend.is_exact:
        return s.value
    return s.quantize(similarity.FLOAT_KEY_SCALE)


@dataclasses.dataclass(frozen=True)
class _Refinement:
    word: words.Word
    map: similarity.Similarity
    inverse: similarity.Similarity
    # c_(alpha gamma) / r at the next level
    scale: scalar.Scalar


@dataclasses.dataclass(frozen=True)
class _State:
    alpha: words.Word
    beta: words.Word
    map: similarity.Similarity
    scale: scalar.Scalar
    identity: bool


@dataclasses.dataclass
class RelativeMapSearch:
    system: ifs_mod.IfsSystem
    max_level: int
    prune_bound: scalar.Scalar

    records: list[RelativeMapRecord] = dataclasses.field(init=False, default_factory=list)
    stabilized_at: int | None = dataclasses.field(init=False, default=None)
    truncated: bool = dataclasses.field(init=False, default=False)
    frontier_size: int = dataclasses.field(init=False, default=0)
    states_visited: int = dataclasses.field(init=False, default=0)
    overlaps: list[OverlapWitness] = dataclasses.field(init=False, default_factory=list)
    _refinements: dict[typing.Any, list[_Refinement]] = dataclasses.field(
        init=False,
        default_factory=dict,
        repr=False,
    )

    def __post_init__(self) -> None:
        if self.max_level < 1:
            msg = f"max level must be at least 1, got {self.max_level}"
            raise utils.SelfsimError(msg)

    @property
    def stabilized(self) -> bool:
        return self.stabilized_at is not None

    def _admissible(self, s: similarity.Similarity) -> bool:
        low = self.system.min_ratio
        if s.ratio < low or s.ratio * low > 1:
            return False
        bound = self.prune_bound
        return cube_gap_squared(s) <= bound * bound

    def refinements(self, scale: scalar.Scalar) -> list[_Refinement]:
        """Words gamma of I_(c_min/scale), with maps and next-level scales."""
        key = _scale_key(scale)
        cached = self._refinements.get(key)
        if cached is None:
            low = self.system.min_ratio
            cached = [
                _Refinement(word, s, similarity.inverse(s), scale * s.ratio / low)
                for word, s in stopping.stopping_maps(self.system, low / scale)
            ]
            self._refinements[key] = cached
        return cached

    def _expand(
        self,
        state: _State,
        identity_key: tuple[typing.Any, ...],
        visited: set[tuple[typing.Any, ...]],
        overlaps: set[OverlapWitness],
    ) -> Iterator[_State]:
        right = self.refinements(state.map.ratio * state.scale)
        for step in self.refinements(state.scale):
            left = similarity.compose(step.inverse, state.map)
            alpha = state.alpha.concat(step.word)
            for other in right:
                child = similarity.compose(left, other.map)
                beta = state.beta.concat(other.word)
                key = child.key()
                is_identity = key == identity_key
                if is_identity and alpha != beta:
                    overlaps.add(OverlapWitness(alpha, beta))
                state_key = (key, _scale_key(step.scale))
                if state_key in visited or not self._admissible(child):
                    continue
                visited.add(state_key)
                yield _State(alpha, beta, child, step.scale, is_identity)

    def run(self) -> RelativeMapSearch:
        system = self.system
        root = similarity.identity(system.backend, system.ambient_dim)
        one = scalar.one(system.backend)
        identity_key = root.key()
        visited = {(identity_key, _scale_key(one))}
        overlaps: set[OverlapWitness] = set()
        frontier = [_State(words.EMPTY, words.EMPTY, root, one, identity=True)]
        for level in range(1, self.max_level + 1):
            fresh = [
                child
                for state in frontier
                for child in self._expand(state, identity_key, visited, overlaps)
            ]
            utils.debug(f"relative maps: level {level}, {len(fresh)} new states")
            # identity states at other scales are expanded, never reported
            self.records.extend(
                RelativeMapRecord(
                    state.alpha,
                    state.beta,
                    state.map,
                    similarity.identity_distance(state.map),
                    level,
                )
                for state in fresh
                if not state.identity
            )
            frontier = fresh
            if not fresh:
                self.stabilized_at = level
                break
        else:
            self.truncated = True
            self.frontier_size = len(frontier)
            utils.warn(
                f"relative-map search truncated at level {self.max_level} "
                f"with {len(frontier)} open states",
            )
        self.states_visited = len(visited)
        self.overlaps = sorted(overlaps, key=OverlapWitness.sort_key)
        return self

    def __iter__(self) -> Iterator[RelativeMapRecord]:
        return iter(self.records)


def enumerate_relative_maps(
    system: ifs_mod.IfsSystem,
    max_level: int,
    prune_bound: scalar.ScalarLike | None = None,
) -> RelativeMapSearch:
    if prune_bound is None:
        bound = default_prune_bound(system)
    else:
        bound = scalar.make(system.backend, prune_bound)
    return RelativeMapSearch(system, max_level, bound).run()



def dedup_maps(
    maps: Sequence[similarity.Similarity],
    tol: scalar.ScalarLike | None = None,
) -> list[similarity.Similarity]:
    """First representative of each class of equal maps, in input order.

    Exact maps are equal when their parameters are. Float maps are equal
    when their canonical keys agree or, when `tol` is given, when every
    parameter agrees within tol.
    """
    if not maps:
        return []
    backend = scalar.common_backend(s.ratio for s in maps)
    if backend.is_exact or tol is None:
        seen: set[tuple[typing.Any, ...]] = set()
        kept = []
        for s in maps:
            key = s.key()
            if key not in seen:
                seen.add(key)
                kept.append(s)
        return kept
    limit = scalar.make(backend, tol)
    representatives: list[similarity.Similarity] = []
    for s in maps:
        if not any(_close(s, kept, limit) for kept in representatives):
            representatives.append(s)
    return representatives


def _close(
    s: similarity.Similarity,
    t: similarity.Similarity,
    tol: scalar.Scalar,
) -> bool:
    if s.ambient_dim != t.ambient_dim or s.reflecting != t.reflecting:
        return False
    turn = abs(s.orthogonal.angle - t.orthogonal.angle)
    return (
        abs(s.ratio - t.ratio) <= tol
        and min(turn, 360 - turn) <= tol
        and all(
            abs(a - b) <= tol for a, b in zip(s.translation, t.translation, strict=True)
        )
    )
