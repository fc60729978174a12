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
"""Three-valued scans for the weak separation property.

The identity must not be an accumulation point of the non-identity relative
maps. A finite scan can witness a violation (a relative map closer to the
identity than epsilon), gather evidence for the property (the pruned closure
stops producing new maps while staying epsilon away), or give up.
"""

from __future__ import annotations

import dataclasses
import enum
import typing

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.symbolic import relative


if typing.TYPE_CHECKING:
    from selfsim_cli.symbolic import ifs as ifs_mod


DEFAULT_EPSILON = "1e-6"


class WspStatus(enum.StrEnum):
    VIOLATION_WITNESSED = "VIOLATION_WITNESSED"
    WSP_EVIDENCE = "WSP_EVIDENCE"
    UNKNOWN = "UNKNOWN"


@dataclasses.dataclass(frozen=True)
class WspVerdict:
    status: WspStatus
    witnesses: tuple[relative.RelativeMapRecord, ...]
    min_nonzero_distance: scalar.Scalar | None
    search_depth: int
    epsilon: scalar.Scalar
    truncation_note: str | None = None
    exact_overlaps: tuple[relative.OverlapWitness, ...] = ()
    stabilized_at: int | None = None
    states: int = 0

    def __post_init__(self) -> None:
        if bool(self.witnesses) != (self.status == WspStatus.VIOLATION_WITNESSED):
            msg = "violation witnesses are listed exactly for VIOLATION_WITNESSED"
            raise utils.SelfsimError(msg)
        for record in self.witnesses:
            if not 0 < record.id_distance < self.epsilon:
                msg = f"witness {record.alpha}/{record.beta} is not within (0, epsilon)"
                raise utils.SelfsimError(msg)


def _truncation_note(
    system: ifs_mod.IfsSystem,
    search: relative.RelativeMapSearch,
) -> str | None:
    notes = []
    if system.model_error:
        notes.append(system.model_error)
    if search.truncated:
        notes.append(
            f"closure truncated at level {search.max_level} "
            f"with {search.frontier_size} open states",
        )
    return "; ".join(notes) or None


def wsp_scan(
    system: ifs_mod.IfsSystem,
    max_level: int,
    epsilon: scalar.ScalarLike = DEFAULT_EPSILON,
    prune_bound: scalar.ScalarLike | None = None,
) -> WspVerdict:
    eps = scalar.make(system.backend, epsilon)
    if eps.sign() <= 0:
        msg = f"epsilon must be positive, got {eps}"
        raise utils.SelfsimError(msg)
    search = relative.enumerate_relative_maps(system, max_level, prune_bound)
    nonzero = [rec for rec in search.records if rec.id_distance.sign() > 0]
    min_distance = min((rec.id_distance for rec in nonzero), default=None)
    violations = sorted(
        (rec for rec in nonzero if rec.id_distance < eps),
        key=lambda rec: (
            rec.id_distance,
            rec.level,
            rec.alpha.sort_key(),
            rec.beta.sort_key(),
        ),
    )
    if violations:
        status = WspStatus.VIOLATION_WITNESSED
    elif search.stabilized:
        status = WspStatus.WSP_EVIDENCE
    else:
        status = WspStatus.UNKNOWN
    utils.debug(
        f"wsp scan of {system}: {status}, {len(search.records)} relative maps, "
        f"{len(search.overlaps)} exact overlaps",
    )
    return WspVerdict(
        status=status,
        witnesses=tuple(violations),
        min_nonzero_distance=min_distance,
        search_depth=max_level,
        epsilon=eps,
        truncation_note=_truncation_note(system, search),
        exact_overlaps=tuple(search.overlaps),
        stabilized_at=search.stabilized_at,
        states=search.states_visited,
    )
