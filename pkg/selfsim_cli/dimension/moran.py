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
"""Similarity dimensions from the Moran equation sum c_i^s = 1.

The similarity dimension is min(d, s), an upper bound for the Hausdorff
dimension of the attractor. The definition is sometimes worded as the
maximum of d and s; that reading is not an upper bound and is not used here.
"""

from __future__ import annotations

import typing

from selfsim_cli import utils
from selfsim_cli.dimension import covering
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import relative
from selfsim_cli.symbolic import stopping


if typing.TYPE_CHECKING:
    from collections.abc import Sequence

    from selfsim_cli.symbolic import ifs as ifs_mod


DEFAULT_TOL = "1e-12"
MAX_ITERATIONS = 400


def _work_backend(ratios: Sequence[scalar.Scalar]) -> scalar.Backend:
    backend = scalar.common_backend(ratios)
    if backend.is_exact:
        return scalar.floating()
    return backend


def _as_scalars(ratios: Sequence[scalar.ScalarLike]) -> list[scalar.Scalar]:
    return [
        r if isinstance(r, scalar.Scalar) else scalar.make(scalar.EXACT, r)
        for r in ratios
    ]


def moran_sum(ratios: Sequence[scalar.ScalarLike], s: scalar.ScalarLike) -> scalar.Scalar:
    values = _as_scalars(ratios)
    backend = _work_backend(values)
    ctx = backend.context
    exponent = scalar.make(backend, s).value
    return scalar.Scalar(
        backend,
        ctx.fsum(ctx.power(r.to_backend(backend).value, exponent) for r in values),
    )


def moran_solve(
    ratios: Sequence[scalar.ScalarLike],
    tol: scalar.ScalarLike = DEFAULT_TOL,
) -> scalar.Scalar:
    """The unique s >= 0 with sum c_i^s = 1, by bisection."""
    if not ratios:
        msg = "the Moran equation needs at least one ratio"
        raise utils.SelfsimError(msg)
    values = _as_scalars(ratios)
    for index, r in enumerate(values, start=1):
        if not 0 < r < 1:
            msg = f"ratio {index} = {r} outside (0,1)"
            raise similarity.NonContractingError(msg)
    backend = _work_backend(values)
    ctx = backend.context
    cs = [r.to_backend(backend).value for r in values]
    precision = scalar.make(backend, tol).value
    if len(cs) == 1:
        return scalar.zero(backend)

    def excess(s: typing.Any) -> typing.Any:
        return ctx.fsum(ctx.power(c, s) for c in cs) - 1

    low, high = ctx.mpf(0), ctx.mpf(1)
    while excess(high) > 0:
        low, high = high, 2 * high
    for _ in range(MAX_ITERATIONS):
        if high - low <= precision:
            break
        middle = (low + high) / 2
        if excess(middle) > 0:
            low = middle
        else:
            high = middle
    utils.debug(f"moran root in [{ctx.nstr(low, 20)}, {ctx.nstr(high, 20)}]")
    return scalar.Scalar(backend, (low + high) / 2)


def similarity_dimension(system: ifs_mod.IfsSystem) -> scalar.Scalar:
    if system.trivial:
        return scalar.zero(_work_backend(system.ratios))
    root = moran_solve(system.ratios)
    ceiling = scalar.make(root.backend, system.ambient_dim)
    return ceiling if root > ceiling else root


def reduced_similarity_dimension(
    system: ifs_mod.IfsSystem,
    r: scalar.ScalarLike,
    *,
    clamp: bool = True,
) -> covering.DimensionEstimate:
    """Similarity dimension of the set of maps {S_alpha : alpha in I_r}.

    With clamp=False the raw Moran root is returned, which still separates
    systems whose roots both exceed the ambient dimension.
    """
    pieces = stopping.stopping_maps(system, r)
    maps = relative.dedup_maps([s for _, s in pieces])
    utils.debug(f"reduced dimension at r={r}: {len(pieces)} words, {len(maps)} maps")
    if system.trivial or len(maps) == 1:
        value = 0.0
    else:
        root = float(moran_solve([s.ratio for s in maps]))
        value = min(float(system.ambient_dim), root) if clamp else root
    return covering.DimensionEstimate(
        kind="reduced-similarity",
        value=value,
        note=f"{len(pieces) - len(maps)} duplicate maps removed from {len(pieces)}",
    )
