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
"""The three-map line system {x/5, x/5 + t/5, x/5 + 4/5} with
t = 4 * sum_{k>=0} 5^(-2^k), and its explicit near-identity word family.

For m >= 1 and n = 2^m + 1 the words

    alpha = 1 3 3 1 3 1 1 1 3 ...   (map 3 at positions 1 + 2^l, l = 0..m)
    beta  = 2 1 1 1 ...             (map 2 at position 1)

have S_alpha^-1 o S_beta (x) = x + 4 * sum_{k>=m+1} 5^(2^m - 2^k).

On the exact backend t is truncated after K terms; on a float backend it is
summed to the working precision.
"""

from __future__ import annotations

import dataclasses
import fractions
import math
import typing

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.symbolic import words
from selfsim_cli.tangents import witnesses


if typing.TYPE_CHECKING:
    from collections.abc import Iterable


DEFAULT_TERMS = 8
DEFAULT_FAMILY_SIZE = 128
# A double cannot hold 4 * 5^-(2^m) from this m on
DOUBLE_MAX_M = 9

LINE_NAME = "bandt-graf-line"


class PrecisionError(utils.SelfsimError):
    pass


def exact_t(terms: int = DEFAULT_TERMS) -> fractions.Fraction:
    if terms < 1:
        msg = f"t needs at least one series term, got K={terms}"
        raise PrecisionError(msg)
    return 4 * sum(
        (fractions.Fraction(1, 5 ** (2**k)) for k in range(terms)),
        start=fractions.Fraction(0),
    )


def _float_terms(digits: int) -> int:
    # 5^(-2^k) drops below 10^-(digits + 10) once 2^k log10(5) exceeds it
    return math.ceil(math.log2((digits + 10) / math.log10(5))) + 1


def t_value(backend: scalar.Backend, terms: int = DEFAULT_TERMS) -> scalar.Scalar:
    if backend.is_exact:
        return scalar.make(backend, exact_t(terms))
    ctx = backend.context
    total = ctx.fsum(ctx.power(5, -(2**k)) for k in range(_float_terms(backend.digits)))
    return scalar.Scalar(backend, 4 * total)


def truncation_error(terms: int) -> str:
    ctx = scalar.mp_context(20)
    estimate = ctx.nstr(4 * ctx.power(5, -(2**terms)), 3)
    return f"t truncated after K={terms} series terms, model error 4*5^-{2**terms} ~ {estimate}"


def model_error(backend: scalar.Backend, terms: int) -> str:
    if backend.is_exact:
        return truncation_error(terms)
    return f"t summed to {backend.digits} significant digits"


def line_system(
    backend: scalar.Backend,
    terms: int = DEFAULT_TERMS,
) -> ifs_mod.IfsSystem:
    t = t_value(backend, terms)
    return ifs_mod.make_system(
        [
            similarity.build(backend, "1/5", [0]),
            similarity.build(backend, "1/5", [t / 5]),
            similarity.build(backend, "1/5", ["4/5"]),
        ],
        name=LINE_NAME,
        notes="maps x/5, x/5 + t/5, x/5 + 4/5 with t = 4 sum 5^(-2^k)",
        model_error=model_error(backend, terms),
    )


def plane_system(
    backend: scalar.Backend,
    terms: int = DEFAULT_TERMS,
    t: scalar.ScalarLike | None = None,
) -> ifs_mod.IfsSystem:
    if t is None:
        shift = t_value(backend, terms)
        error: str | None = model_error(backend, terms)
    else:
        shift = scalar.make(backend, t)
        error = None
    return ifs_mod.make_system(
        [
            similarity.build(backend, "1/5", [0, 0]),
            similarity.build(backend, "1/5", [shift / 5, 0]),
            similarity.build(backend, "1/5", ["4/5", 0]),
            similarity.build(backend, "1/5", [0, "4/5"]),
        ],
        name="plane-intermediate",
        notes=f"first coordinate is the {LINE_NAME} system, second the fifths Cantor set",
        model_error=error,
    )


def witness_words(m: int) -> tuple[words.Word, words.Word]:
    if m < 1:
        msg = f"witness index m must be at least 1, got {m}"
        raise utils.SelfsimError(msg)
    alpha = words.Word.of(1)
    previous = 1
    for level in range(m + 1):
        position = 1 + 2**level
        alpha = alpha.append(1, position - previous - 1).append(3)
        previous = position
    beta = words.Word.of(2).append(1, 2**m)
    return alpha, beta


@dataclasses.dataclass(frozen=True)
class BandtGrafWitness:
    m: int
    alpha: words.Word
    beta: words.Word
    offset: scalar.Scalar

    def pair(self) -> witnesses.WitnessPair:
        backend = self.offset.backend
        return witnesses.WitnessPair(
            self.alpha,
            self.beta,
            similarity.build(backend, 1, [self.offset]),
        )


def series_offset(m: int, backend: scalar.Backend) -> scalar.Scalar:
    """4 * sum_{k>=m+1} 5^(2^m - 2^k) at the working precision of a float backend."""
    ctx = backend.context
    total = ctx.mpf(0)
    k = m + 1
    while True:
        term = ctx.power(5, 2**m - 2**k)
        total += term
        if term < total * ctx.power(10, -(backend.digits + 5)):
            break
        k += 1
    return scalar.Scalar(backend, 4 * total)


def bandt_graf_witness(
    m: int,
    backend: scalar.Backend,
    terms: int = DEFAULT_TERMS,
) -> BandtGrafWitness:
    alpha, beta = witness_words(m)
    if backend.is_exact:
        if m >= terms - 1:
            msg = (
                f"m={m} needs at least K={m + 2} series terms of t, "
                f"the system was built with K={terms}"
            )
            raise PrecisionError(msg)
        # 5^(2^m) (t_K - 4 sum_{k<=m} 5^(-2^k)), exact for the truncated t
        head = exact_t(m + 1)
        offset = scalar.make(backend, 5 ** (2**m) * (exact_t(terms) - head))
        return BandtGrafWitness(m, alpha, beta, offset)
    if backend.digits <= scalar.DOUBLE_DIGITS and m >= DOUBLE_MAX_M:
        msg = f"offset 4*5^-{2**m} is below double precision range, use more digits"
        raise PrecisionError(msg)
    return BandtGrafWitness(m, alpha, beta, series_offset(m, backend))


def bandt_graf_witnesses(
    ms: Iterable[int],
    backend: scalar.Backend,
    terms: int = DEFAULT_TERMS,
) -> witnesses.WitnessSequence:
    family = [bandt_graf_witness(m, backend, terms).pair() for m in sorted(set(ms))]
    return witnesses.WitnessSequence(tuple(family), orientation_normalized=True)


def is_line_system(system: ifs_mod.IfsSystem, terms: int = DEFAULT_TERMS) -> bool:
    if system.ambient_dim != 1 or system.size != 3:
        return False
    t = t_value(system.backend, terms)
    expected = [
        similarity.build(system.backend, "1/5", [0]),
        similarity.build(system.backend, "1/5", [t / 5]),
        similarity.build(system.backend, "1/5", ["4/5"]),
    ]
    return [s.key() for s in system.maps] == [s.key() for s in expected]
