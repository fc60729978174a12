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
"""Inductive construction of a one-sided (pseudo) tangent of a line attractor.

With a the fixed point of S_1, f = S_1 o S_1 of ratio c and a witness
R = S_alpha^-1 o S_beta close to the identity, one step takes the previous
point h(a) of F, pulls it next to a with f^m and uses the two images
S_alpha(y), S_beta(y) of y = f^m(h(a)). The magnification g is extended by
f^-m o S_alpha^-1 so that the new point lands at

    p_j = p_(j-1) + d c^-m (R(y) - y)

where d is the derivative of the previous magnification. The power m is the
largest one keeping the increment below epsilon = 1/(c n), so every
increment lies in [c epsilon, 3 epsilon] and n steps cover [a, a + 1].
"""

from __future__ import annotations

import dataclasses
import functools
import typing

from selfsim_cli import utils
from selfsim_cli.geometry import cloud
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import ifs as ifs_mod


if typing.TYPE_CHECKING:
    from collections.abc import Sequence

    from selfsim_cli.symbolic import words
    from selfsim_cli.tangents import witnesses


# rho = |a - b| / RHO_DIVISOR keeps B_2rho(a) and B_2rho(b) apart
RHO_DIVISOR = 5
# Increments stay below SPREAD_LIMIT * epsilon when R(y) - y varies by at
# most this factor over B_rho(a)
SPREAD_LIMIT = 3


@dataclasses.dataclass
class WitnessExhaustedError(utils.SelfsimError):
    finest_n: int = 0


@dataclasses.dataclass(frozen=True)
class Selection:
    # 1-based position in the witness sequence
    witness: int
    power: int


@dataclasses.dataclass(frozen=True)
class _Candidate:
    index: int
    alpha: words.Word
    beta: words.Word
    relative: similarity.Similarity
    delta: scalar.Scalar
    swapped: bool
    system: ifs_mod.IfsSystem = dataclasses.field(repr=False)

    def excess(self, y: scalar.Scalar) -> scalar.Scalar:
        # R(y) - y without cancelling y against itself
        return (self.relative.ratio - 1) * y + self.relative.translation[0]

    @functools.cached_property
    def beta_map(self) -> similarity.Similarity:
        return ifs_mod.word_map(self.system, self.beta)

    @functools.cached_property
    def alpha_ratio(self) -> scalar.Scalar:
        return ifs_mod.word_ratio(self.system, self.alpha)


@dataclasses.dataclass(frozen=True)
class _Setup:
    base: scalar.Scalar
    rho: scalar.Scalar
    contraction: scalar.Scalar
    min_power: int
    candidates: tuple[_Candidate, ...]


@dataclasses.dataclass(frozen=True)
class PseudoTangentRun:
    epsilon: scalar.Scalar
    n: int
    base_point: scalar.Scalar
    contraction: scalar.Scalar
    rho: scalar.Scalar
    min_power: int
    points: tuple[scalar.Scalar, ...]
    increments: tuple[scalar.Scalar, ...]
    selections: tuple[Selection, ...]
    swapped: tuple[bool, ...]

    @functools.cached_property
    def emitted_points(self) -> cloud.PointCloud:
        return cloud.PointCloud.from_points(
            [float(p) for p in self.points],
            labels=range(len(self.points)),
        )

    def increments_within_bounds(self) -> bool:
        low = self.contraction * self.epsilon
        high = SPREAD_LIMIT * self.epsilon
        return all(low <= inc <= high for inc in self.increments)

    def tangent_distance(self, grid_points: int = 1001) -> float:
        """One-sided distance from a grid on [a, a+1] to the emitted points."""
        a = float(self.base_point)
        grid = cloud.interval_grid(a, a + 1, grid_points)
        return cloud.one_sided_hausdorff(grid, self.emitted_points)

    def distance_bound(self) -> scalar.Scalar:
        return SPREAD_LIMIT * self.epsilon


def _base_points(system: ifs_mod.IfsSystem) -> tuple[scalar.Scalar, scalar.Scalar]:
    (a,) = similarity.fixed_point(system.map(1))
    for s in system.maps[1:]:
        (b,) = similarity.fixed_point(s)
        if b != a:
            return a, b
    msg = f"every map of {system} fixes {a}, the attractor is a single point"
    raise utils.SelfsimError(msg)


def _prepare_candidate(
    system: ifs_mod.IfsSystem,
    index: int,
    pair: witnesses.WitnessPair,
    base: scalar.Scalar,
    rho: scalar.Scalar,
) -> _Candidate | None:
    alpha, beta, relative = pair.alpha, pair.beta, pair.relative
    if relative.reflecting:
        return None
    ends = (base - rho, base + rho)

    def excess_at(r: similarity.Similarity) -> list[scalar.Scalar]:
        return [(r.ratio - 1) * x + r.translation[0] for x in ends]

    values = excess_at(relative)
    swapped = False
    if all(v.sign() < 0 for v in values):
        alpha, beta, relative = beta, alpha, similarity.inverse(relative)
        values = excess_at(relative)
        swapped = True
    if not all(v.sign() > 0 for v in values):
        utils.debug(f"witness {index}: R(x) - x changes sign on B_rho(a), skipped")
        return None
    delta, spread = min(values), max(values)
    if spread > SPREAD_LIMIT * delta:
        utils.debug(f"witness {index}: R(x) - x varies too much on B_rho(a), skipped")
        return None
    return _Candidate(index, alpha, beta, relative, delta, swapped, system)


def _setup(
    system: ifs_mod.IfsSystem,
    sequence: witnesses.WitnessSequence,
) -> _Setup:
    if system.ambient_dim != 1:
        msg = "pseudo tangents are built for systems of the line"
        raise similarity.DimensionMismatchError(msg)
    if not sequence.orientation_normalized:
        msg = "witnesses must be orientation normalized first"
        raise utils.SelfsimError(msg)
    a, b = _base_points(system)
    rho = abs(a - b) / RHO_DIVISOR
    ratio = system.map(1).ratio
    c = ratio * ratio
    reach = max(abs(a), abs(1 - a))
    min_power, shrink = 1, c
    while shrink * reach >= rho:
        min_power += 1
        shrink *= c
    candidates = tuple(
        candidate
        for index, pair in enumerate(sequence.pairs, start=1)
        if (candidate := _prepare_candidate(system, index, pair, a, rho)) is not None
    )
    utils.debug(
        f"pseudo tangent: a={a} rho={rho} c={c} M={min_power}, "
        f"{len(candidates)}/{len(sequence)} usable witnesses",
    )
    return _Setup(a, rho, c, min_power, candidates)


def _largest_power(
    scale: scalar.Scalar,
    epsilon: scalar.Scalar,
    c: scalar.Scalar,
    floor: int,
) -> int:
    """Largest m >= floor with scale * c^-m < epsilon."""
    estimate = ((epsilon / scale).log() / (1 / c).log()).floor()
    m = max(estimate, floor)
    while scale * c ** (-(m + 1)) < epsilon:
        m += 1
    while m > floor and not scale * c ** (-m) < epsilon:
        m -= 1
    return m


@dataclasses.dataclass
class _State:
    point: scalar.Scalar
    anchor: scalar.Scalar
    derivative: scalar.Scalar

    def advance(
        self,
        setup: _Setup,
        candidate: _Candidate,
        power: int,
    ) -> scalar.Scalar:
        c = setup.contraction
        y = setup.base + c**power * (self.anchor - setup.base)
        stretch = self.derivative * c ** (-power)
        increment = stretch * candidate.excess(y)
        self.point += increment
        (self.anchor,) = candidate.beta_map((y,))
        self.derivative = stretch / candidate.alpha_ratio
        return increment


def _attempt(setup: _Setup, n: int) -> PseudoTangentRun | None:
    c = setup.contraction
    epsilon = 1 / (c * n)
    entry = c ** (-setup.min_power)
    state = _State(setup.base, setup.base, scalar.one(c.backend))
    points, increments, selections, swapped = [setup.base], [], [], []
    pointer = 0
    for step in range(1, n + 1):
        while pointer < len(setup.candidates) and not (
            state.derivative * entry * setup.candidates[pointer].delta < epsilon
        ):
            pointer += 1
        if pointer == len(setup.candidates):
            utils.debug(f"pseudo tangent n={n}: no witness left at step {step}")
            return None
        candidate = setup.candidates[pointer]
        power = _largest_power(
            state.derivative * candidate.delta,
            epsilon,
            c,
            setup.min_power,
        )
        increments.append(state.advance(setup, candidate, power))
        points.append(state.point)
        selections.append(Selection(candidate.index, power))
        swapped.append(candidate.swapped)
    return PseudoTangentRun(
        epsilon=epsilon,
        n=n,
        base_point=setup.base,
        contraction=c,
        rho=setup.rho,
        min_power=setup.min_power,
        points=tuple(points),
        increments=tuple(increments),
        selections=tuple(selections),
        swapped=tuple(swapped),
    )


def _finest(setup: _Setup, n_max: int) -> int:
    for n in range(n_max, 0, -1):
        if _attempt(setup, n) is not None:
            return n
    return 0


def build_pseudo_tangent(
    system: ifs_mod.IfsSystem,
    sequence: witnesses.WitnessSequence,
    n: int,
) -> PseudoTangentRun:
    if n < 1:
        msg = f"n must be at least 1, got {n}"
        raise utils.SelfsimError(msg)
    setup = _setup(system, sequence)
    run = _attempt(setup, n)
    if run is None:
        finest = _finest(setup, n - 1)
        msg = (
            f"witnesses run out before epsilon = 1/(c n) for n={n}; "
            f"finest achievable n is {finest}"
        )
        raise WitnessExhaustedError(msg, finest)
    return run


def finest_achievable_n(
    system: ifs_mod.IfsSystem,
    sequence: witnesses.WitnessSequence,
    n_max: int,
) -> int:
    """Largest n <= n_max for which the construction completes, 0 if none does."""
    return _finest(_setup(system, sequence), n_max)


def replay(
    system: ifs_mod.IfsSystem,
    sequence: witnesses.WitnessSequence,
    selections: Sequence[Selection],
) -> tuple[scalar.Scalar, ...]:
    """Rebuild the points of a run from its (witness, power) selections."""
    setup = _setup(system, sequence)
    by_index = {candidate.index: candidate for candidate in setup.candidates}
    state = _State(setup.base, setup.base, scalar.one(setup.contraction.backend))
    points = [setup.base]
    for selection in selections:
        try:
            candidate = by_index[selection.witness]
        except KeyError:
            msg = f"witness {selection.witness} is not usable for this system"
            raise utils.SelfsimError(msg) from None
        state.advance(setup, candidate, selection.power)
        points.append(state.point)
    return tuple(points)
