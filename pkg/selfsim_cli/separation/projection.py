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

from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.symbolic import relative


def is_diagonal(system: ifs_mod.IfsSystem) -> bool:
    return system.ambient_dim == 2 and all(
        s.orthogonal.is_identity() for s in system.maps
    )


def project_ifs(system: ifs_mod.IfsSystem, axis: int) -> ifs_mod.IfsSystem:
    """Coordinate projection of a diagonal planar system, equal maps merged."""
    if not is_diagonal(system):
        msg = f"{system} is not a planar system with identity orthogonal parts"
        raise similarity.DimensionMismatchError(msg)
    if axis not in {0, 1}:
        msg = f"axis must be 0 or 1, got {axis}"
        raise similarity.DimensionMismatchError(msg)
    maps = relative.dedup_maps(
        [
            similarity.build(system.backend, s.ratio, [s.translation[axis]])
            for s in system.maps
        ],
    )
    name = f"{system}:axis{axis}" if system.name else ""
    return ifs_mod.make_system(
        maps,
        name=name,
        trivial=len(maps) == 1,
        model_error=system.model_error,
    )
