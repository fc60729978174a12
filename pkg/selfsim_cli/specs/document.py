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
"""JSON documents describing an IFS.

Numbers are strings so that rationals survive parsing exactly::

    {
      "ambient_dim": 1,
      "backend": "exact",
      "maps": [
        {"ratio": "1/3", "sign": 1, "translation": ["0"]},
        {"ratio": "1/3", "sign": 1, "translation": ["2/3"]}
      ],
      "name": "cantor-1d",
      "schema_version": 1
    }
"""

from __future__ import annotations

import dataclasses
import json
import re
import typing

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.geometry import similarity
from selfsim_cli.symbolic import ifs as ifs_mod


SCHEMA_VERSION = 1

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_TOP_KEYS = frozenset(
    {
        "schema_version",
        "name",
        "ambient_dim",
        "backend",
        "maps",
        "trivial",
        "notes",
        "model_error",
    },
)
_MAP_KEYS = frozenset({"ratio", "translation", "sign", "rotation_degrees", "reflect"})


@dataclasses.dataclass
class SpecError(utils.SelfsimError):
    path: str = ""
    line: int | None = None

    def __str__(self) -> str:
        where = self.path or "document"
        if self.line is not None:
            where = f"{where} (line {self.line})"
        return f"{where}: {self.message}"


@dataclasses.dataclass(frozen=True)
class MapSpec:
    ratio: str
    translation: tuple[str, ...]
    sign: int = 1
    rotation_degrees: str = "0"
    reflect: bool = False

    def to_dict(self) -> dict[str, typing.Any]:
        data: dict[str, typing.Any] = {
            "ratio": self.ratio,
            "translation": list(self.translation),
        }
        if len(self.translation) == 1:
            data["sign"] = self.sign
        else:
            data["rotation_degrees"] = self.rotation_degrees
            data["reflect"] = self.reflect
        return data

    def build(self, backend: scalar.Backend) -> similarity.Similarity:
        return similarity.build(
            backend,
            self.ratio,
            self.translation,
            sign=self.sign,
            rotation=self.rotation_degrees,
            reflect=self.reflect,
        )


@dataclasses.dataclass(frozen=True)
class IfsSpecDocument:
    name: str
    ambient_dim: int
    backend: scalar.Backend
    maps: tuple[MapSpec, ...]
    trivial: bool = False
    notes: str = ""
    model_error: str | None = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict[str, typing.Any]:
        data: dict[str, typing.Any] = {
            "schema_version": self.schema_version,
            "name": self.name,
            "ambient_dim": self.ambient_dim,
            "backend": (
                "exact" if self.backend.is_exact else {"float": self.backend.digits}
            ),
            "maps": [m.to_dict() for m in self.maps],
        }
        if self.trivial:
            data["trivial"] = True
        if self.notes:
            data["notes"] = self.notes
        if self.model_error:
            data["model_error"] = self.model_error
        return data

    def to_system(self, backend: scalar.Backend | None = None) -> ifs_mod.IfsSystem:
        """Build the system, optionally re-reading the numbers on another backend."""
        target = backend or self.backend
        if target.is_exact:
            for index, m in enumerate(self.maps):
                for field, text in _numbers(m):
                    _check_exact(text, f"maps[{index}].{field}")
        try:
            maps = [m.build(target) for m in self.maps]
        except utils.SelfsimError as e:
            raise SpecError(e.message, "maps") from e
        return ifs_mod.make_system(
            maps,
            name=self.name,
            trivial=self.trivial,
            notes=self.notes,
            model_error=self.model_error,
        )


def _numbers(m: MapSpec) -> list[tuple[str, str]]:
    values = [("ratio", m.ratio)]
    values.extend((f"translation[{i}]", t) for i, t in enumerate(m.translation))
    if len(m.translation) == 2:
        values.append(("rotation_degrees", m.rotation_degrees))
    return values


def _check_exact(text: str, path: str, line: int | None = None) -> None:
    if not _RATIONAL.match(text.strip()):
        msg = (
            f"`{text}` is not an integer or p/q rational and cannot be read on "
            "the exact backend; use the float backend, or the bandt-graf-line "
            "and plane-intermediate builtins with a truncation K "
            "(e.g. bandt-graf-line:K=8) for the Bandt-Graf parameter t"
        )
        raise SpecError(msg, path, line)


def _map_lines(text: str) -> list[int]:
    """Line numbers of the objects in the top-level `maps` array."""
    match = re.search(r'"maps"\s*:\s*\[', text)
    if match is None:
        return []
    lines = []
    depth = 0
    in_string = False
    escaped = False
    line = text.count("\n", 0, match.end()) + 1
    for char in text[match.end() :]:
        if char == "\n":
            line += 1
        if in_string:
            if escaped:
                escaped = False
            elif char == "\\":
                escaped = True
            elif char == '"':
                in_string = False
            continue
        if char == '"':
            in_string = True
        elif char in "[{":
            if depth == 0 and char == "{":
                lines.append(line)
            depth += 1
        elif char in "]}":
            if depth == 0:
                break
            depth -= 1
    return lines


class _Reader:
    def __init__(self, backend: scalar.Backend, map_lines: list[int]) -> None:
        self.backend = backend
        self.map_lines = map_lines

    def line_of(self, index: int) -> int | None:
        if index < len(self.map_lines):
            return self.map_lines[index]
        return None

    def number(self, value: object, path: str, line: int | None) -> scalar.Scalar:
        if not isinstance(value, str):
            msg = f"expected a number written as a string, got {json.dumps(value)}"
            raise SpecError(msg, path, line)
        if self.backend.is_exact:
            _check_exact(value, path, line)
        try:
            return scalar.make(self.backend, value)
        except utils.SelfsimError as e:
            raise SpecError(e.message, path, line) from e

    def map_spec(self, raw: object, index: int, dim: int) -> MapSpec:
        path = f"maps[{index}]"
        line = self.line_of(index)
        if not isinstance(raw, dict):
            msg = "a map must be an object"
            raise SpecError(msg, path, line)
        unknown = sorted(set(raw) - _MAP_KEYS)
        if unknown:
            msg = f"unknown keys {', '.join(unknown)}"
            raise SpecError(msg, path, line)
        if "ratio" not in raw or "translation" not in raw:
            msg = "a map needs `ratio` and `translation`"
            raise SpecError(msg, path, line)
        ratio = self.number(raw["ratio"], f"{path}.ratio", line)
        if not 0 < ratio < 1:
            msg = f"ratio outside (0,1): {raw['ratio']}"
            raise SpecError(msg, f"{path}.ratio", line)
        translation = raw["translation"]
        if not isinstance(translation, list) or len(translation) != dim:
            msg = f"dimension mismatch: translation must list {dim} numbers"
            raise SpecError(msg, f"{path}.translation", line)
        for i, value in enumerate(translation):
            self.number(value, f"{path}.translation[{i}]", line)
        if dim == 1:
            return self._line_map(raw, path, line)
        return self._plane_map(raw, path, line)

    def _line_map(
        self,
        raw: dict[str, typing.Any],
        path: str,
        line: int | None,
    ) -> MapSpec:
        for key in ("rotation_degrees", "reflect"):
            if key in raw:
                msg = f"dimension mismatch: `{key}` only applies to planar maps, use `sign`"
                raise SpecError(msg, f"{path}.{key}", line)
        sign = raw.get("sign", 1)
        if not isinstance(sign, int) or isinstance(sign, bool) or sign not in {1, -1}:
            msg = f"sign must be 1 or -1, got {json.dumps(sign)}"
            raise SpecError(msg, f"{path}.sign", line)
        return MapSpec(raw["ratio"], tuple(raw["translation"]), sign=sign)

    def _plane_map(
        self,
        raw: dict[str, typing.Any],
        path: str,
        line: int | None,
    ) -> MapSpec:
        if "sign" in raw:
            msg = "dimension mismatch: `sign` only applies to maps of the line"
            raise SpecError(msg, f"{path}.sign", line)
        rotation = raw.get("rotation_degrees", "0")
        self.number(rotation, f"{path}.rotation_degrees", line)
        reflect = raw.get("reflect", False)
        if not isinstance(reflect, bool):
            msg = f"reflect must be true or false, got {json.dumps(reflect)}"
            raise SpecError(msg, f"{path}.reflect", line)
        return MapSpec(
            raw["ratio"],
            tuple(raw["translation"]),
            rotation_degrees=rotation,
            reflect=reflect,
        )


def _backend(raw: object) -> scalar.Backend:
    if raw == "exact":
        return scalar.EXACT
    if isinstance(raw, dict) and set(raw) == {"float"}:
        digits = raw["float"]
        if isinstance(digits, int) and not isinstance(digits, bool):
            try:
                return scalar.floating(digits)
            except utils.SelfsimError as e:
                raise SpecError(e.message, "backend") from e
    msg = f'backend must be "exact" or {{"float": digits}}, got {json.dumps(raw)}'
    raise SpecError(msg, "backend")


def _field(
    data: dict[str, typing.Any],
    key: str,
    kind: type,
    default: typing.Any,
) -> typing.Any:
    value = data.get(key, default)
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        msg = f"expected {kind.__name__}, got {json.dumps(value)}"
        raise SpecError(msg, key)
    return value


def parse_ifs_spec(text: str) -> IfsSpecDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        msg = f"invalid JSON: {e.msg}"
        raise SpecError(msg, line=e.lineno) from e
    if not isinstance(data, dict):
        msg = "a spec document is a JSON object"
        raise SpecError(msg)
    unknown = sorted(set(data) - _TOP_KEYS)
    if unknown:
        msg = f"unknown keys {', '.join(unknown)}"
        raise SpecError(msg)
    for key in ("schema_version", "name", "ambient_dim", "backend", "maps"):
        if key not in data:
            msg = "missing required key"
            raise SpecError(msg, key)
    version = _field(data, "schema_version", int, None)
    if version != SCHEMA_VERSION:
        msg = f"unsupported schema version {version}, expected {SCHEMA_VERSION}"
        raise SpecError(msg, "schema_version")
    name = _field(data, "name", str, None)
    if not name:
        msg = "name must not be empty"
        raise SpecError(msg, "name")
    dim = _field(data, "ambient_dim", int, None)
    if dim not in {1, 2}:
        msg = f"ambient_dim must be 1 or 2, got {dim}"
        raise SpecError(msg, "ambient_dim")
    backend = _backend(data["backend"])
    raw_maps = data["maps"]
    if not isinstance(raw_maps, list) or not raw_maps:
        msg = "maps must be a non-empty list"
        raise SpecError(msg, "maps")
    reader = _Reader(backend, _map_lines(text))
    maps = tuple(reader.map_spec(raw, i, dim) for i, raw in enumerate(raw_maps))
    trivial = _field(data, "trivial", bool, False)
    if trivial != (len(maps) == 1):
        msg = "exactly the one-map systems must be flagged trivial"
        raise SpecError(msg, "trivial")
    model_error = data.get("model_error")
    if model_error is not None and not isinstance(model_error, str):
        msg = f"expected str, got {json.dumps(model_error)}"
        raise SpecError(msg, "model_error")
    return IfsSpecDocument(
        name=name,
        ambient_dim=dim,
        backend=backend,
        maps=maps,
        trivial=trivial,
        notes=_field(data, "notes", str, ""),
        model_error=model_error,
        schema_version=version,
    )


def serialize_ifs_spec(document: IfsSpecDocument) -> str:
    return json.dumps(document.to_dict(), indent=2, sort_keys=True) + "\n"


def _text(value: scalar.Scalar) -> str:
    if value.backend.is_exact:
        return str(value)
    return value.format(value.backend.digits)


def document_from_system(system: ifs_mod.IfsSystem) -> IfsSpecDocument:
    maps = []
    for s in system.maps:
        translation = tuple(_text(b) for b in s.translation)
        if s.ambient_dim == 1:
            maps.append(
                MapSpec(_text(s.ratio), translation, sign=-1 if s.reflecting else 1),
            )
        else:
            maps.append(
                MapSpec(
                    _text(s.ratio),
                    translation,
                    rotation_degrees=_text(s.orthogonal.angle),
                    reflect=s.reflecting,
                ),
            )
    return IfsSpecDocument(
        name=system.name or "unnamed",
        ambient_dim=system.ambient_dim,
        backend=system.backend,
        maps=tuple(maps),
        trivial=system.trivial,
        notes=system.notes,
        model_error=system.model_error,
    )
