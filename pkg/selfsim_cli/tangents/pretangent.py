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
"""Pre-tangent sets E_k = {alpha^m beta^n : m >= 0, n >= -k} n [0,1].

The planar set is the product E_k x E_k; 0 is kept as the limit point of
each factor so that the coordinate axes belong to the product.
"""

from __future__ import annotations

import fractions
import itertools

from selfsim_cli import utils
from selfsim_cli.geometry import cloud
from selfsim_cli.geometry import scalar


TRUNCATION = fractions.Fraction(1, 10**6)
COMMENSURABLE_DENOMINATOR = 1000
COMMENSURABLE_TOL = 1e-9


def _check_base(name: str, value: scalar.Scalar) -> None:
    if not 0 < value < 1:
        msg = f"{name} = {value} outside (0,1)"
        raise utils.SelfsimError(msg)


def commensurable(alpha: scalar.Scalar, beta: scalar.Scalar) -> fractions.Fraction | None:
    """p/q when log(beta)/log(alpha) looks rational with q <= 1000."""
    quotient = float(beta.log() / alpha.log())
    guess = fractions.Fraction(quotient).limit_denominator(COMMENSURABLE_DENOMINATOR)
    if abs(quotient - float(guess)) <= COMMENSURABLE_TOL:
        return guess
    return None


def _line_values(
    alpha: scalar.Scalar,
    beta: scalar.Scalar,
    k: int,
) -> list[tuple[scalar.Scalar, tuple[int, int] | None]]:
    floor = scalar.make(alpha.backend, TRUNCATION)
    found: dict[object, tuple[scalar.Scalar, tuple[int, int] | None]] = {}
    n = -k
    while beta**n >= floor:
        value = beta**n
        m = 0
        while value >= floor:
            if value <= 1:
                key = value.value if value.backend.is_exact else value.quantize(10**15)
                found.setdefault(key, (value, (m, n)))
            value *= alpha
            m += 1
        n += 1
    zero = scalar.zero(alpha.backend)
    found.setdefault(0, (zero, None))
    return sorted(found.values(), key=lambda item: item[0])


def pretangent_Ek(  # noqa: N802
    alpha: scalar.ScalarLike,
    beta: scalar.ScalarLike,
    k: int,
    d: int = 1,
) -> cloud.PointCloud:
    """E_k^d truncated where alpha^m beta^n drops below 1e-6.

    Labels are the exponent pairs (m, n) of each coordinate, None for 0.
    """
    if k < 0:
        msg = f"k must be non-negative, got {k}"
        raise utils.SelfsimError(msg)
    if d not in {1, 2}:
        msg = f"d must be 1 or 2, got {d}"
        raise utils.SelfsimError(msg)
    a = alpha if isinstance(alpha, scalar.Scalar) else scalar.make(scalar.EXACT, alpha)
    b = scalar.make(a.backend, beta)
    _check_base("alpha", a)
    _check_base("beta", b)
    ratio = commensurable(a, b)
    if ratio is not None:
        utils.warn(
            f"log(beta)/log(alpha) = {ratio} looks rational; "
            "E_k is then not dense at small scales",
        )
    values = _line_values(a, b, k)
    points = []
    labels = []
    for combo in itertools.product(values, repeat=d):
        points.append([float(value) for value, _ in combo])
        labels.append(tuple(label for _, label in combo))
    utils.debug(f"E_{k} in dimension {d}: {len(points)} points")
    return cloud.PointCloud.from_points(points, labels=labels)
