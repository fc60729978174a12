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
"""Bundled example systems and the loader resolving SPEC arguments.

A SPEC is either a bundled name, optionally with parameter overrides
(`full-assouad:d=2,gamma=1/20`), or the path of a JSON spec document.
"""

from __future__ import annotations

import dataclasses
import itertools
import pathlib
import typing

import aiofiles
import aiofiles.os

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.specs import document
from selfsim_cli.symbolic import ifs as ifs_mod
from selfsim_cli.tangents import bandt_graf


if typing.TYPE_CHECKING:
    from collections.abc import Callable
    from collections.abc import Mapping


Params = dict[str, str]


@dataclasses.dataclass(frozen=True)
class Example:
    name: str
    description: str
    builder: Callable[[scalar.Backend, Params], ifs_mod.IfsSystem]
    backend: scalar.Backend = scalar.EXACT
    defaults: tuple[tuple[str, str], ...] = ()
    # depth used by `examples run` for the separation scans
    scan_depth: int = 6

    def params(self, overrides: Mapping[str, str] | None = None) -> Params:
        params = dict(self.defaults)
        for key, value in (overrides or {}).items():
            if key not in params:
                known = ", ".join(params) or "none"
                msg = f"{self.name} has no parameter `{key}` (known: {known})"
                raise document.SpecError(msg, "overrides")
            params[key] = value
        return params

    def build(
        self,
        backend: scalar.Backend | None = None,
        overrides: Mapping[str, str] | None = None,
    ) -> ifs_mod.IfsSystem:
        return self.builder(backend or self.backend, self.params(overrides))


def _int(params: Params, key: str) -> int:
    try:
        return int(params[key])
    except ValueError:
        msg = f"`{key}` must be an integer, got `{params[key]}`"
        raise document.SpecError(msg, "overrides") from None


def _ratio(backend: scalar.Backend, params: Params, key: str) -> scalar.Scalar:
    value = scalar.make(backend, params[key])
    if not 0 < value < 1:
        msg = f"`{key}` = {params[key]} outside (0,1)"
        raise document.SpecError(msg, "overrides")
    return value


def _line(
    backend: scalar.Backend,
    name: str,
    maps: list[tuple[str, str]],
    notes: str = "",
) -> ifs_mod.IfsSystem:
    return ifs_mod.make_system(
        [similarity.build(backend, ratio, [shift]) for ratio, shift in maps],
        name=name,
        notes=notes,
    )


def _cantor(backend: scalar.Backend, _params: Params) -> ifs_mod.IfsSystem:
    return _line(backend, "cantor-1d", [("1/3", "0"), ("1/3", "2/3")])


def _bandt_graf_line(backend: scalar.Backend, params: Params) -> ifs_mod.IfsSystem:
    return bandt_graf.line_system(backend, _int(params, "K"))


def _plane_intermediate(backend: scalar.Backend, params: Params) -> ifs_mod.IfsSystem:
    t = params["t"] or None
    return bandt_graf.plane_system(backend, _int(params, "K"), t)


def corners(dim: int) -> list[tuple[int, ...]]:
    return list(itertools.product((0, 1), repeat=dim))


def _full_assouad(backend: scalar.Backend, params: Params) -> ifs_mod.IfsSystem:
    dim = _int(params, "d")
    if dim not in {1, 2}:
        msg = f"`d` must be 1 or 2, got {dim}"
        raise document.SpecError(msg, "overrides")
    alpha = _ratio(backend, params, "alpha")
    beta = _ratio(backend, params, "beta")
    gamma = _ratio(backend, params, "gamma")
    origin = [0] * dim
    maps = [
        similarity.build(backend, alpha, origin),
        similarity.build(backend, beta, origin),
    ]
    maps.extend(
        similarity.build(backend, gamma, [(1 - gamma) * z for z in corner])
        for corner in corners(dim)[1:]
    )
    return ifs_mod.make_system(
        maps,
        name="full-assouad",
        notes="alpha x, beta x and gamma x + (1 - gamma) z for the non-zero corners z",
    )


def _four_corner(backend: scalar.Backend, params: Params) -> ifs_mod.IfsSystem:
    gamma = _ratio(backend, params, "gamma")
    return ifs_mod.make_system(
        [
            similarity.build(backend, gamma, [(1 - gamma) * z for z in corner])
            for corner in corners(2)
        ],
        name="four-corner",
        notes="gamma = 1/2 tiles the unit square",
    )


def _cantor_on_line(backend: scalar.Backend, _params: Params) -> ifs_mod.IfsSystem:
    return ifs_mod.make_system(
        [
            similarity.build(backend, "1/3", [0, 0]),
            similarity.build(backend, "1/3", ["2/3", 0]),
        ],
        name="cantor-on-line-2d",
        notes="the middle-thirds Cantor set on the x-axis of the plane",
    )


def _single_point(backend: scalar.Backend, _params: Params) -> ifs_mod.IfsSystem:
    return ifs_mod.make_system(
        [similarity.build(backend, "1/2", [0])],
        name="single-point",
        trivial=True,
    )


EXAMPLES: dict[str, Example] = {
    example.name: example
    for example in (
        Example("cantor-1d", "middle-thirds Cantor set", _cantor),
        Example(
            bandt_graf.LINE_NAME,
            "x/5, x/5 + t/5, x/5 + 4/5 with the Bandt-Graf t, truncated after K terms",
            _bandt_graf_line,
            defaults=(("K", str(bandt_graf.DEFAULT_TERMS)),),
            scan_depth=9,
        ),
        Example(
            "plane-intermediate",
            "planar system without WSP whose Assouad dimension lies strictly between 1 and 2",
            _plane_intermediate,
            defaults=(("K", str(bandt_graf.DEFAULT_TERMS)), ("t", "")),
            scan_depth=5,
        ),
        Example(
            "full-assouad",
            "small similarity dimension but full Assouad dimension",
            _full_assouad,
            defaults=(("alpha", "1/4"), ("beta", "1/3"), ("gamma", "1/10"), ("d", "1")),
            scan_depth=2,
        ),
        Example(
            "exact-overlap-demo",
            "x/2, x/2 + 1/2, x/4: exact overlap at level 2",
            lambda backend, _params: _line(
                backend,
                "exact-overlap-demo",
                [("1/2", "0"), ("1/2", "1/2"), ("1/4", "0")],
            ),
            scan_depth=4,
        ),
        Example(
            "overlap-thirds",
            "x/3, x/3 + 2/3, x/9: the Cantor set with a redundant map",
            lambda backend, _params: _line(
                backend,
                "overlap-thirds",
                [("1/3", "0"), ("1/3", "2/3"), ("1/9", "0")],
            ),
            scan_depth=4,
        ),
        Example(
            "cantor-on-line-2d",
            "Cantor set embedded in the plane, fixed points span only a line",
            _cantor_on_line,
        ),
        Example(
            "four-corner",
            "gamma x + (1 - gamma) z over the four corners z of the unit square",
            _four_corner,
            defaults=(("gamma", "1/3"),),
            scan_depth=4,
        ),
        Example(
            "unit-interval",
            "x/2, x/2 + 1/2",
            lambda backend, _params: _line(
                backend,
                "unit-interval",
                [("1/2", "0"), ("1/2", "1/2")],
            ),
        ),
        Example(
            "fifths-cantor",
            "x/5, x/5 + 4/5, second projection of plane-intermediate",
            lambda backend, _params: _line(
                backend,
                "fifths-cantor",
                [("1/5", "0"), ("1/5", "4/5")],
            ),
        ),
        Example("single-point", "x/2, the trivial one-map system", _single_point),
    )
}


def split_spec(spec: str) -> tuple[str, dict[str, str]]:
    """`name:k=v,k=v` into the name and its overrides."""
    name, _, rest = spec.partition(":")
    overrides = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep or not key:
            msg = f"override `{item}` is not key=value"
            raise document.SpecError(msg, "overrides")
        overrides[key.strip()] = value.strip()
    return name, overrides


def get_example(name: str) -> Example:
    try:
        return EXAMPLES[name]
    except KeyError:
        msg = f"unknown example `{name}` (see `selfsim examples list`)"
        raise document.SpecError(msg) from None


def examples_registry() -> list[document.IfsSpecDocument]:
    return [
        document.document_from_system(example.build())
        for example in EXAMPLES.values()
    ]


def resolve(spec: str, backend: scalar.Backend | None = None) -> ifs_mod.IfsSystem:
    name, overrides = split_spec(spec)
    return get_example(name).build(backend, overrides)


async def read_document(path: pathlib.Path) -> document.IfsSpecDocument:
    try:
        async with aiofiles.open(path, encoding="utf-8") as f:
            text = await f.read()
    except OSError as e:
        msg = f"cannot read spec document: {e.strerror}"
        raise document.SpecError(msg, str(path)) from e
    except UnicodeDecodeError as e:
        msg = f"spec document is not valid UTF-8 (byte {e.start})"
        raise document.SpecError(msg, str(path)) from e
    try:
        return document.parse_ifs_spec(text)
    except document.SpecError as e:
        path_in_doc = f"{path}:{e.path}" if e.path else str(path)
        raise document.SpecError(e.message, path_in_doc, e.line) from e


async def load_system(
    spec: str,
    backend: scalar.Backend | None = None,
) -> ifs_mod.IfsSystem:
    """Bundled example name (with overrides) or JSON document path."""
    name, _ = split_spec(spec)
    if name in EXAMPLES:
        return resolve(spec, backend)
    path = pathlib.Path(spec)
    if not await aiofiles.os.path.exists(path):
        msg = f"`{spec}` is neither a bundled example nor an existing file"
        raise document.SpecError(msg)
    parsed = await read_document(path)
    utils.debug(f"loaded {parsed.name} from {path}")
    return parsed.to_system(backend)
