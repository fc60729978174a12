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
"""Similarities S(x) = c O x + b of the line and the plane.

The orthogonal part is stored as a rotation angle in degrees followed by an
optional reflection across the first axis, O = R(angle) F. On the line the
angle is always 0 and the reflection flag is the sign of the map.
"""

from __future__ import annotations

import dataclasses
import fractions
import itertools
import typing

import numpy as np

from selfsim_cli import utils
from selfsim_cli.geometry import scalar


if typing.TYPE_CHECKING:
    import numpy.typing as npt


Point = tuple[scalar.Scalar, ...]

FLOAT_KEY_SCALE = 10**12

_EXACT_QUARTERS: dict[fractions.Fraction, tuple[int, int]] = {
    fractions.Fraction(0): (1, 0),
    fractions.Fraction(90): (0, 1),
    fractions.Fraction(180): (-1, 0),
    fractions.Fraction(270): (0, -1),
}


class DimensionMismatchError(utils.SelfsimError):
    pass


class NonContractingError(utils.SelfsimError):
    pass


def normalize_angle(angle: scalar.Scalar) -> scalar.Scalar:
    turns = (angle / 360).floor()
    return angle - 360 * turns


@dataclasses.dataclass(frozen=True)
class Orthogonal:
    angle: scalar.Scalar
    reflect: bool = False

    def cos_sin(self) -> tuple[scalar.Scalar, scalar.Scalar]:
        backend = self.angle.backend
        if backend.is_exact:
            try:
                c, s = _EXACT_QUARTERS[self.angle.value]
            except KeyError:
                msg = (
                    f"rotation by {self.angle} degrees has no exact cosine; "
                    "use the float backend"
                )
                raise scalar.InexactOperationError(msg) from None
            return scalar.make(backend, c), scalar.make(backend, s)
        ctx = backend.context
        turn = self.angle.value / 180
        return (
            scalar.Scalar(backend, ctx.cospi(turn)),
            scalar.Scalar(backend, ctx.sinpi(turn)),
        )

    def apply(self, vector: Point) -> Point:
        if len(vector) == 1:
            return (-vector[0],) if self.reflect else vector
        x, y = vector
        if self.reflect:
            y = -y
        if self.angle.is_zero():
            return (x, y)
        c, s = self.cos_sin()
        return (c * x - s * y, s * x + c * y)

    def compose(self, other: Orthogonal) -> Orthogonal:
        angle = self.angle - other.angle if self.reflect else self.angle + other.angle
        return Orthogonal(normalize_angle(angle), self.reflect != other.reflect)

    def inverse(self) -> Orthogonal:
        # R(a) F is an involution
        if self.reflect:
            return self
        return Orthogonal(normalize_angle(-self.angle), reflect=False)

    def is_identity(self) -> bool:
        return not self.reflect and self.angle.is_zero()

    def float_matrix(self, dim: int) -> npt.NDArray[np.float64]:
        if dim == 1:
            return np.array([[-1.0 if self.reflect else 1.0]])
        if self.angle.backend.is_exact and self.angle.value not in _EXACT_QUARTERS:
            ctx = scalar.mp_context(scalar.DOUBLE_DIGITS + 5)
            turn = ctx.mpf(self.angle.value.numerator) / self.angle.value.denominator / 180
            c, s = float(ctx.cospi(turn)), float(ctx.sinpi(turn))
        else:
            cs, sn = self.cos_sin()
            c, s = float(cs), float(sn)
        f = -1.0 if self.reflect else 1.0
        return np.array([[c, -s * f], [s, c * f]])


@dataclasses.dataclass(frozen=True)
class Similarity:
    ratio: scalar.Scalar
    orthogonal: Orthogonal
    translation: Point

    def __post_init__(self) -> None:
        if self.ambient_dim not in {1, 2}:
            msg = f"ambient dimension must be 1 or 2, got {self.ambient_dim}"
            raise DimensionMismatchError(msg)
        if self.ratio.sign() <= 0:
            msg = f"similarity ratio must be positive, got {self.ratio}"
            raise NonContractingError(msg)
        scalar.common_backend(
            [self.ratio, self.orthogonal.angle, *self.translation],
        )
        if self.ambient_dim == 1 and not self.orthogonal.angle.is_zero():
            msg = "maps of the line carry a sign, not a rotation"
            raise DimensionMismatchError(msg)

    @property
    def ambient_dim(self) -> int:
        return len(self.translation)

    @property
    def backend(self) -> scalar.Backend:
        return self.ratio.backend

    @property
    def reflecting(self) -> bool:
        return self.orthogonal.reflect

    def linear(self, vector: Point) -> Point:
        return tuple(self.ratio * v for v in self.orthogonal.apply(vector))

    def __call__(self, point: Point) -> Point:
        _check_dim(self.ambient_dim, len(point))
        return tuple(
            v + b for v, b in zip(self.linear(point), self.translation, strict=True)
        )

    def key(self) -> tuple[typing.Any, ...]:
        """Canonical key: exact parameters, or floats rounded to a 1e-12 grid."""
        if self.backend.is_exact:
            return (
                self.ratio.value,
                self.orthogonal.angle.value,
                self.orthogonal.reflect,
                tuple(b.value for b in self.translation),
            )
        angle = self.orthogonal.angle.quantize(FLOAT_KEY_SCALE) % (
            360 * FLOAT_KEY_SCALE
        )
        return (
            self.ratio.quantize(FLOAT_KEY_SCALE),
            angle,
            self.orthogonal.reflect,
            tuple(b.quantize(FLOAT_KEY_SCALE) for b in self.translation),
        )

    def as_numpy(self) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """Linear part and translation as float64 arrays."""
        matrix = float(self.ratio) * self.orthogonal.float_matrix(self.ambient_dim)
        return matrix, np.array([float(b) for b in self.translation])

    def __str__(self) -> str:
        parts = [f"ratio={self.ratio}"]
        if self.ambient_dim == 1:
            parts.append(f"sign={-1 if self.reflecting else 1}")
        else:
            parts.extend(
                (f"rotation={self.orthogonal.angle}", f"reflect={self.reflecting}"),
            )
        parts.append("translation=(" + ", ".join(str(b) for b in self.translation) + ")")
        return " ".join(parts)


def _check_dim(expected: int, got: int) -> None:
    if expected != got:
        msg = f"dimension mismatch: {expected} != {got}"
        raise DimensionMismatchError(msg)


def build(
    backend: scalar.Backend,
    ratio: scalar.ScalarLike,
    translation: typing.Sequence[scalar.ScalarLike],
    *,
    sign: int = 1,
    rotation: scalar.ScalarLike = 0,
    reflect: bool = False,
) -> Similarity:
    if sign not in {1, -1}:
        msg = f"sign must be +1 or -1, got {sign}"
        raise utils.SelfsimError(msg)
    angle = normalize_angle(scalar.make(backend, rotation))
    return Similarity(
        scalar.make(backend, ratio),
        Orthogonal(angle, reflect or sign == -1),
        tuple(scalar.make(backend, b) for b in translation),
    )


def identity(backend: scalar.Backend, ambient_dim: int) -> Similarity:
    return build(backend, 1, [0] * ambient_dim)


def compose(s: Similarity, t: Similarity) -> Similarity:
    """Return s o t."""
    _check_dim(s.ambient_dim, t.ambient_dim)
    translation = tuple(
        v + b for v, b in zip(s.linear(t.translation), s.translation, strict=True)
    )
    return Similarity(
        s.ratio * t.ratio,
        s.orthogonal.compose(t.orthogonal),
        translation,
    )


def inverse(s: Similarity) -> Similarity:
    orthogonal = s.orthogonal.inverse()
    translation = tuple(-v / s.ratio for v in orthogonal.apply(s.translation))
    return Similarity(1 / s.ratio, orthogonal, translation)


def power(s: Similarity, n: int) -> Similarity:
    if n < 0:
        return power(inverse(s), -n)
    result = identity(s.backend, s.ambient_dim)
    base = s
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def fixed_point(s: Similarity) -> Point:
    if s.ratio >= 1:
        msg = f"no unique fixed point for a map of ratio {s.ratio}"
        raise NonContractingError(msg)
    c = s.ratio
    if s.ambient_dim == 1:
        (b,) = s.translation
        return (b / (1 + c),) if s.reflecting else (b / (1 - c),)
    cos, sin = s.orthogonal.cos_sin()
    f = -1 if s.reflecting else 1
    # (I - c R F) p = b, solved by Cramer's rule
    m11, m12 = 1 - c * cos, c * sin * f
    m21, m22 = -(c * sin), 1 - c * cos * f
    b1, b2 = s.translation
    det = m11 * m22 - m12 * m21
    return ((b1 * m22 - m12 * b2) / det, (m11 * b2 - m21 * b1) / det)


def cube_corners(backend: scalar.Backend, ambient_dim: int) -> list[Point]:
    values = (scalar.zero(backend), scalar.one(backend))
    return [tuple(c) for c in itertools.product(values, repeat=ambient_dim)]


def squared_norm(vector: Point) -> scalar.Scalar:
    total = vector[0] * vector[0]
    for v in vector[1:]:
        total += v * v
    return total


def identity_distance(s: Similarity) -> scalar.Scalar:
    """sup over the unit cube of |S(x) - x|, attained at a corner."""
    worst = max(
        squared_norm(tuple(a - b for a, b in zip(s(x), x, strict=True)))
        for x in cube_corners(s.backend, s.ambient_dim)
    )
    return worst.sqrt()


def is_identity(s: Similarity, tol: scalar.Scalar | None = None) -> bool:
    if s.backend.is_exact and tol is None:
        return (
            s.ratio == 1
            and s.orthogonal.is_identity()
            and all(b.is_zero() for b in s.translation)
        )
    if tol is None:
        tol = scalar.make(s.backend, "1e-12")
    return identity_distance(s) <= tol
