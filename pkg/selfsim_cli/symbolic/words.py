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
"""Words over the index set of a system, stored as runs of equal letters.

Letters are 1-based. Runs keep witness words of length 2**m + 1 small for
any m, which is why `Word` exposes `length` instead of `__len__`.
"""

from __future__ import annotations

import dataclasses
import functools
import typing


if typing.TYPE_CHECKING:
    from collections.abc import Iterable
    from collections.abc import Iterator


Run = tuple[int, int]

# Above this length, words of equal length are ordered by their runs
EXPANDED_SORT_LIMIT = 4096


@dataclasses.dataclass(frozen=True)
class Word:
    runs: tuple[Run, ...] = ()

    @classmethod
    def of(cls, *letters: int) -> Word:
        return cls.from_letters(letters)

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> Word:
        word = EMPTY
        for letter in letters:
            word = word.append(letter)
        return word

    @classmethod
    def from_runs(cls, runs: Iterable[Run]) -> Word:
        word = EMPTY
        for letter, count in runs:
            word = word.append(letter, count)
        return word

    @functools.cached_property
    def length(self) -> int:
        return sum(count for _, count in self.runs)

    def is_empty(self) -> bool:
        return not self.runs

    @property
    def last(self) -> int:
        return self.runs[-1][0]

    def letters(self) -> Iterator[int]:
        for letter, count in self.runs:
            for _ in range(count):
                yield letter

    def parent(self) -> Word:
        """The word with its last letter removed; the parent of a letter is empty."""
        if not self.runs:
            msg = "the empty word has no parent"
            raise ValueError(msg)
        letter, count = self.runs[-1]
        if count == 1:
            return Word(self.runs[:-1])
        return Word((*self.runs[:-1], (letter, count - 1)))

    def append(self, letter: int, count: int = 1) -> Word:
        if count <= 0:
            return self
        if self.runs and self.runs[-1][0] == letter:
            last, previous = self.runs[-1]
            return Word((*self.runs[:-1], (last, previous + count)))
        return Word((*self.runs, (letter, count)))

    def concat(self, other: Word) -> Word:
        word = self
        for letter, count in other.runs:
            word = word.append(letter, count)
        return word

    def sort_key(self) -> tuple[int, tuple[int, ...] | tuple[Run, ...]]:
        if self.length <= EXPANDED_SORT_LIMIT:
            return (self.length, tuple(self.letters()))
        return (self.length, self.runs)

    def __str__(self) -> str:
        parts = [
            str(letter) if count == 1 else f"{letter}^{count}"
            for letter, count in self.runs
        ]
        return "(" + ",".join(parts) + ")"


EMPTY = Word()


def parse(text: str) -> Word:
    """Parse the `(1,2^3,1)` form produced by `str(word)`."""
    body = text.strip().removeprefix("(").removesuffix(")").strip()
    if not body:
        return EMPTY
    runs = []
    for part in body.split(","):
        letter, _, count = part.strip().partition("^")
        runs.append((int(letter), int(count) if count else 1))
    return Word.from_runs(runs)
