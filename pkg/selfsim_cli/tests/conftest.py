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
import pathlib

import pytest

from selfsim_cli import utils
from selfsim_cli.geometry import scalar
from selfsim_cli.specs import registry
from selfsim_cli.symbolic import ifs as ifs_mod


@pytest.fixture(autouse=True)
def _change_working_directory(
    monkeypatch: pytest.MonkeyPatch,
    tmp_path: pathlib.Path,
) -> None:
    # CSV and PNG outputs land in a scratch directory
    monkeypatch.chdir(tmp_path)


@pytest.fixture(autouse=True)
def _reset_debug(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(utils, "_DEBUG", False)


@pytest.fixture
def cantor() -> ifs_mod.IfsSystem:
    return registry.resolve("cantor-1d")


@pytest.fixture
def overlap_demo() -> ifs_mod.IfsSystem:
    return registry.resolve("exact-overlap-demo")


@pytest.fixture
def bandt_graf_exact() -> ifs_mod.IfsSystem:
    return registry.resolve("bandt-graf-line:K=8")


@pytest.fixture
def bandt_graf_float() -> ifs_mod.IfsSystem:
    return registry.resolve("bandt-graf-line", scalar.floating(60))


@pytest.fixture
def full_assouad() -> ifs_mod.IfsSystem:
    return registry.resolve("full-assouad")
