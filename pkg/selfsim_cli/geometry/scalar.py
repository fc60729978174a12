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
"""Numbers with an explicit backend.

Two backends exist: exact rationals (`fractions.Fraction`) and extended
precision floats (`mpmath`, one context per decimal precision). Values of
different backends never meet in an expression; converting is an explicit
call to `Scalar.to_backend`.
"""

from __future__ import annotations

import dataclasses
import fractions
import functools
import math
import typing

import mpmath

from selfsim_cli import utils


BackendKind = typing.Literal["exact", "float"]

DEFAULT_DIGITS = 60
DOUBLE_DIGITS = 15
MIN_DIGITS = 5


class BackendMismatchError(utils.SelfsimError):
    pass


class InexactOperationError(utils.SelfsimError):
    pass


@functools.cache
def mp_context(digits: int) -> typing.Any:
    ctx = mpmath.MPContext()
    ctx.dps = digits
    return ctx


@dataclasses.dataclass(frozen=True)
class Backend:
    kind: BackendKind
    digits: int = 0

    def __str__(self) -> str:
        if self.kind == "exact":
            return "exact"
        return f"float({self.digits})"

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def context(self) -> typing.Any:
        if self.is_exact:
            msg = "the exact backend has no floating point context"
            raise InexactOperationError(msg)
        return mp_context(self.digits)


EXACT = Backend("exact")


def floating(digits: int = DEFAULT_DIGITS) -> Backend:
    if digits < MIN_DIGITS:
        msg = f"float backend needs at least {MIN_DIGITS} digits, got {digits}"
        raise utils.SelfsimError(msg)
    return Backend("float", digits)


def parse_backend(text: str, digits: int | None = None) -> Backend:
    if text == "exact":
        return EXACT
    if text == "float":
        return floating(DEFAULT_DIGITS if digits is None else digits)
    msg = f"unknown backend `{text}` (expected exact or float)"
    raise utils.SelfsimError(msg)


@dataclasses.dataclass(frozen=True)
class Surd:
    """Square root of a non-negative rational that is not itself a square."""

    square: fractions.Fraction

    def __str__(self) -> str:
        return f"sqrt({self.square})"


def _exact_sqrt(q: fractions.Fraction) -> fractions.Fraction | Surd:
    if q < 0:
        msg = f"square root of negative value {q}"
        raise InexactOperationError(msg)
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return fractions.Fraction(num, den)
    return Surd(q)


def _sign(value: typing.Any) -> int:
    if isinstance(value, Surd):
        return 1
    return (value > 0) - (value < 0)


def _compare_exact(a: fractions.Fraction | Surd, b: fractions.Fraction | Surd) -> int:
    if not isinstance(a, Surd) and not isinstance(b, Surd):
        return (a > b) - (a < b)
    if isinstance(a, Surd) and isinstance(b, Surd):
        return (a.square > b.square) - (a.square < b.square)
    if isinstance(a, Surd):
        return -_compare_exact(typing.cast("fractions.Fraction", b), a)
    # a rational, b = sqrt(q)
    if a < 0:
        return -1
    a2 = a * a
    return (a2 > b.square) - (a2 < b.square)


@dataclasses.dataclass(frozen=True, slots=True, eq=False)
class Scalar:
    backend: Backend
    value: typing.Any

    def _lift(self, other: int) -> typing.Any:
        if self.backend.is_exact:
            return fractions.Fraction(other)
        return self.backend.context.mpf(other)

    def _operand(self, other: Scalar | int) -> typing.Any:
        if isinstance(other, int):
            return self._lift(other)
        if other.backend != self.backend:
            msg = f"cannot mix {self.backend} and {other.backend} scalars"
            raise BackendMismatchError(msg)
        return other.value

    def _new(self, value: typing.Any) -> Scalar:
        return Scalar(self.backend, value)

    def _rational_only(self, *values: typing.Any) -> None:
        if any(isinstance(v, Surd) for v in values):
            msg = "only comparisons and scaling are available on exact square roots"
            raise InexactOperationError(msg)

    def __add__(self, other: Scalar | int) -> Scalar:
        b = self._operand(other)
        self._rational_only(self.value, b)
        return self._new(self.value + b)

    def __radd__(self, other: int) -> Scalar:
        return self.__add__(other)

    def __sub__(self, other: Scalar | int) -> Scalar:
        b = self._operand(other)
        self._rational_only(self.value, b)
        return self._new(self.value - b)

    def __rsub__(self, other: int) -> Scalar:
        return self._new(self._lift(other)) - self

    def __mul__(self, other: Scalar | int) -> Scalar:
        b = self._operand(other)
        a = self.value
        if isinstance(a, Surd) or isinstance(b, Surd):
            return self._new(_scale_surd(a, b))
        return self._new(a * b)

    def __rmul__(self, other: int) -> Scalar:
        return self.__mul__(other)

    def __truediv__(self, other: Scalar | int) -> Scalar:
        b = self._operand(other)
        self._rational_only(b)
        if isinstance(self.value, Surd):
            return self._new(_scale_surd(self.value, 1 / b))
        return self._new(self.value / b)

    def __rtruediv__(self, other: int) -> Scalar:
        return self._new(self._lift(other)) / self

    def __neg__(self) -> Scalar:
        self._rational_only(self.value)
        return self._new(-self.value)

    def __abs__(self) -> Scalar:
        if isinstance(self.value, Surd):
            return self
        return self._new(abs(self.value))

    def __pow__(self, exponent: int) -> Scalar:
        self._rational_only(self.value)
        return self._new(self.value**exponent)

    def _compare(self, other: Scalar | int) -> int:
        b = self._operand(other)
        if self.backend.is_exact:
            return _compare_exact(self.value, b)
        return (self.value > b) - (self.value < b)

    def __lt__(self, other: Scalar | int) -> bool:
        return self._compare(other) < 0

    def __le__(self, other: Scalar | int) -> bool:
        return self._compare(other) <= 0

    def __gt__(self, other: Scalar | int) -> bool:
        return self._compare(other) > 0

    def __ge__(self, other: Scalar | int) -> bool:
        return self._compare(other) >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return other.backend == self.backend and self._compare(other) == 0
        if isinstance(other, int):
            return self._compare(other) == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.backend, self.value))

    def __float__(self) -> float:
        if isinstance(self.value, Surd):
            ctx = mp_context(DOUBLE_DIGITS + 5)
            return float(ctx.sqrt(ctx.mpf(self.value.square.numerator) / self.value.square.denominator))
        return float(self.value)

    def __str__(self) -> str:
        if self.backend.is_exact:
            return str(self.value)
        return self.format(min(self.backend.digits, 20))

    def __repr__(self) -> str:
        return f"Scalar({self.backend}, {self})"

    def format(self, significant: int) -> str:
        if self.backend.is_exact:
            return mp_context(significant + 5).nstr(
                self.to_backend(floating(significant + 5)).value,
                significant,
            )
        return typing.cast("str", self.backend.context.nstr(self.value, significant))

    def is_zero(self) -> bool:
        return not isinstance(self.value, Surd) and self.value == 0

    def sign(self) -> int:
        return _sign(self.value)

    def square(self) -> Scalar:
        if isinstance(self.value, Surd):
            return self._new(self.value.square)
        return self._new(self.value * self.value)

    def sqrt(self) -> Scalar:
        if self.backend.is_exact:
            self._rational_only(self.value)
            return self._new(_exact_sqrt(self.value))
        if self.value < 0:
            msg = f"square root of negative value {self}"
            raise InexactOperationError(msg)
        return self._new(self.backend.context.sqrt(self.value))

    def floor(self) -> int:
        if self.backend.is_exact:
            if isinstance(self.value, Surd):
                return math.isqrt(math.floor(self.value.square))
            return math.floor(self.value)
        return int(self.backend.context.floor(self.value))

    def log(self, digits: int | None = None) -> Scalar:
        """Natural logarithm, always on a float backend."""
        if self.sign() <= 0:
            msg = f"logarithm of non-positive value {self}"
            raise InexactOperationError(msg)
        if not self.backend.is_exact:
            return self._new(self.backend.context.ln(self.value))
        target = floating(DEFAULT_DIGITS if digits is None else digits)
        ctx = target.context
        if isinstance(self.value, Surd):
            q = self.value.square
            return Scalar(target, (ctx.ln(q.numerator) - ctx.ln(q.denominator)) / 2)
        return Scalar(
            target,
            ctx.ln(self.value.numerator) - ctx.ln(self.value.denominator),
        )

    def to_backend(self, backend: Backend) -> Scalar:
        if backend == self.backend:
            return self
        if backend.is_exact:
            msg = f"cannot convert {self.backend} value {self} to exact"
            raise InexactOperationError(msg)
        ctx = backend.context
        if not self.backend.is_exact:
            return Scalar(backend, ctx.mpf(self.value))
        if isinstance(self.value, Surd):
            q = self.value.square
            return Scalar(backend, ctx.sqrt(ctx.mpf(q.numerator) / q.denominator))
        return Scalar(backend, ctx.mpf(self.value.numerator) / self.value.denominator)

    def quantize(self, scale: int) -> int:
        """Nearest integer to value * scale, used for float canonical keys."""
        if self.backend.is_exact:
            self._rational_only(self.value)
            return round(self.value * scale)
        return int(self.backend.context.nint(self.value * scale))


ScalarLike = Scalar | int | float | str | fractions.Fraction


def _scale_surd(a: typing.Any, b: typing.Any) -> fractions.Fraction | Surd:
    if isinstance(a, Surd) and isinstance(b, Surd):
        return _exact_sqrt(a.square * b.square)
    surd, factor = (a, b) if isinstance(a, Surd) else (b, a)
    if factor < 0:
        msg = "exact square roots can only be scaled by non-negative rationals"
        raise InexactOperationError(msg)
    return _exact_sqrt(surd.square * factor * factor)


def make(backend: Backend, value: ScalarLike) -> Scalar:
    if isinstance(value, Scalar):
        return value.to_backend(backend)
    if backend.is_exact:
        try:
            return Scalar(backend, fractions.Fraction(value))
        except (ValueError, ZeroDivisionError) as e:
            msg = f"invalid number `{value}`"
            raise utils.SelfsimError(msg) from e
    ctx = backend.context
    if isinstance(value, fractions.Fraction):
        return Scalar(backend, ctx.mpf(value.numerator) / value.denominator)
    if isinstance(value, str) and "/" in value:
        return make(backend, make(EXACT, value))
    try:
        return Scalar(backend, ctx.mpf(value))
    except ValueError as e:
        msg = f"invalid number `{value}`"
        raise utils.SelfsimError(msg) from e


def exact(value: int | str | fractions.Fraction) -> Scalar:
    return make(EXACT, value)


def zero(backend: Backend) -> Scalar:
    return make(backend, 0)


def one(backend: Backend) -> Scalar:
    return make(backend, 1)


def common_backend(values: typing.Iterable[Scalar]) -> Backend:
    backends = {v.backend for v in values}
    if len(backends) != 1:
        msg = f"expected one backend, got {sorted(str(b) for b in backends)}"
        raise BackendMismatchError(msg)
    return backends.pop()
