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
"""Heuristic Ahlfors regularity check.

For window centers x and radii r the proxy N(r, rho0) rho0^s / r^s stands in
for H^s(B_r(x) n F) / r^s. A bounded spread across (x, r) is consistent with
s-regularity, a spread growing with the range of r speaks against it. No
Hausdorff measure is computed.
"""

from __future__ import annotations

import dataclasses
import typing

from selfsim_cli import utils
from selfsim_cli.dimension import attractor
from selfsim_cli.dimension import covering
from selfsim_cli.dimension import estimate


if typing.TYPE_CHECKING:
    from collections.abc import Sequence

    from selfsim_cli.symbolic import ifs as ifs_mod


HEURISTIC_NOTE = "mesh-count proxy for H^s(B_r(x) n F), heuristic only"


@dataclasses.dataclass(frozen=True)
class AhlforsSample:
    center: tuple[float, ...]
    r: float
    count: int
    ratio: float


@dataclasses.dataclass(frozen=True)
class AhlforsReport:
    s: float
    rho: float
    samples: tuple[AhlforsSample, ...]

    @property
    def spread(self) -> float:
        ratios = [sample.ratio for sample in self.samples]
        return max(ratios) / min(ratios)

    @property
    def degenerate(self) -> bool:
        return all(sample.count == 1 for sample in self.samples)

    @property
    def note(self) -> str:
        if self.degenerate:
            return f"{HEURISTIC_NOTE}; every count is 1, the attractor looks like a point"
        return HEURISTIC_NOTE


def ahlfors_diagnostic(
    system: ifs_mod.IfsSystem,
    s: float,
    scales: Sequence[float],
    rho: float | None = None,
) -> AhlforsReport:
    if not 0 < s <= system.ambient_dim:
        msg = f"exponent s={s} outside (0, {system.ambient_dim}]"
        raise utils.SelfsimError(msg)
    if not scales:
        msg = "the diagnostic needs at least one radius"
        raise utils.SelfsimError(msg)
    if rho is None:
        rho = min(scales) * estimate.scale_base(system) ** estimate.DEFAULT_MIN_GAP
    if not all(rho < r < 1 for r in scales):
        msg = f"radii must lie in (rho, 1) with rho={rho:.3g}"
        raise utils.SelfsimError(msg)
    points = attractor.attractor_points(system, rho / 2, labelled=False)
    centers = [tuple(float(v) for v in c) for c in estimate.window_centers(points)]
    samples = []
    for r in sorted(scales, reverse=True):
        index = covering.CellIndex(points, r, rho)
        for center in centers:
            count = index.count(center)
            samples.append(AhlforsSample(center, r, count, count * (rho / r) ** s))
    report = AhlforsReport(s, rho, tuple(samples))
    utils.debug(f"ahlfors diagnostic s={s}: spread {report.spread:.4g}")
    return report
