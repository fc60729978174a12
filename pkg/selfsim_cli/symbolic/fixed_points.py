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

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.symbolic import stopping
from selfsim_cli.symbolic import words


FLOAT_SPAN_TOL = "1e-12"


@dataclasses.dataclass(frozen=True)
class SpanningReport:
    witnesses: tuple[tuple[words.Word, similarity.Point], ...]
    spans: bool
    scale: scalar.Scalar

    def describe(self) -> str:
        if self.spans:
            return "spanning"
        return f"hyperplane-contained (up to scale {self.scale})"


def _det(u: similarity.Point, v: similarity.Point) -> scalar.Scalar:
    return u[0] * v[1] - u[1] * v[0]


def _significant(value: scalar.Scalar, tol: scalar.Scalar | None) -> bool:
    if tol is None:
        return not value.is_zero()
    return abs(value) > tol


def spanning_fixed_points(
    system: ifs_mod.IfsSystem,
    r: scalar.ScalarLike,
) -> SpanningReport:
    """Search I_r for d+1 fixed points whose differences span the space.

    Points are picked greedily: the first fixed point, then the one farthest
    from it, then (in the plane) the one spanning the largest parallelogram.
    """
    if system.trivial:
        msg = f"{system} is trivial, its attractor is a single point"
        raise utils.SelfsimError(msg)
    scale = stopping.as_scale(system, r)
    tol = None if system.backend.is_exact else scalar.make(system.backend, FLOAT_SPAN_TOL)
    candidates = [
        (word, similarity.fixed_point(s)) for word, s in stopping.stopping_maps(system, scale)
    ]
    base_word, base = candidates[0]
    chosen = [(base_word, base)]

    def offset(p: similarity.Point) -> similarity.Point:
        return tuple(a - b for a, b in zip(p, base, strict=True))

    far = max(
        candidates[1:],
        key=lambda c: similarity.squared_norm(offset(c[1])),
        default=None,
    )
    if far is None or not _significant(similarity.squared_norm(offset(far[1])), tol):
        return SpanningReport(tuple(chosen), spans=False, scale=scale)
    chosen.append(far)
    if system.ambient_dim == 1:
        return SpanningReport(tuple(chosen), spans=True, scale=scale)
    u = offset(far[1])
    wide = max(candidates[1:], key=lambda c: abs(_det(u, offset(c[1]))))
    if not _significant(_det(u, offset(wide[1])), tol):
        return SpanningReport(tuple(chosen), spans=False, scale=scale)
    chosen.append(wide)
    return SpanningReport(tuple(chosen), spans=True, scale=scale)
