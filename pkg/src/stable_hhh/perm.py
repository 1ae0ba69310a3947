"""Permutations of {1..n} in cycle notation.

Grammar accepted by :func:`parse_cycles` (whitespace is free between tokens)::

    perm   := cycle*
    cycle  := "(" int (sep int)* ")" | "(" ")"
    sep    := whitespace | ","

Points that do not appear are fixed.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple


class PermutationError(ValueError):
    pass


class PermutationParseError(PermutationError):
    def __init__(self, text: str, token: str, position: int, reason: str):
        self.token = token
        self.position = position
        super().__init__(f"{reason}: token {token!r} at position {position} in {text!r}")


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(\d+)|(,)|(\S))")


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n}; ``images[i-1] = w(i)``."""

    images: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise PermutationError(f"not a bijection of 1..{n}: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]]) -> "Permutation":
        img = list(range(1, n + 1))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= n:
                    raise PermutationError(f"point {a} outside 1..{n}")
                if a in seen:
                    raise PermutationError(f"point {a} appears twice")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                img[a - 1] = b
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, n: int) -> "Permutation":
        return cls.from_cycles(n, parse_cycles(text))

    def cycles(self, include_fixed: bool = True) -> List[Tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> Tuple[int, ...]:
        """Cycle lengths in ascending order (a partition of n)."""
        return tuple(sorted(len(c) for c in self.cycles()))

    @property
    def num_cycles(self) -> int:
        return len(self.cycles())

    def compose(self, other: "Permutation") -> "Permutation":
        """(self o other)(i) = self(other(i))."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, w in enumerate(self.images, start=1):
            inv[w - 1] = i
        return Permutation(tuple(inv))

    def conjugate(self, v: "Permutation") -> "Permutation":
        return v.compose(self).compose(v.inverse())

    def is_special_form(self) -> bool:
        return self == special_form(self.cycle_type())

    def cycle_ends(self) -> Tuple[int, ...]:
        """The markers m_1 < ... < m_r of a permutation in special form."""
        if not self.is_special_form():
            raise PermutationError(f"{self} is not in special cycle form")
        ends, total = [], 0
        for length in self.cycle_type():
            total += length
            ends.append(total)
        return tuple(ends)

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())


def parse_cycles(text: str) -> List[Tuple[int, ...]]:
    pos = 0
    cycles: List[Tuple[int, ...]] = []
    current: List[int] | None = None
    text_len = len(text)
    while pos < text_len:
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        lpar, rpar, num, comma, junk = m.groups()
        where = m.start(m.lastindex)
        if junk is not None:
            raise PermutationParseError(text, junk, where, "unexpected character")
        if lpar is not None:
            if current is not None:
                raise PermutationParseError(text, "(", where, "nested parenthesis")
            current, opened = [], where
        elif rpar is not None:
            if current is None:
                raise PermutationParseError(text, ")", where, "unmatched parenthesis")
            if current:
                cycles.append(tuple(current))
            current = None
        elif num is not None:
            if current is None:
                raise PermutationParseError(text, num, where, "integer outside a cycle")
            current.append(int(num))
        elif comma is not None:
            if current is None or not current:
                raise PermutationParseError(text, ",", where, "misplaced separator")
        pos = m.end()
    if current is not None:
        raise PermutationParseError(text, "(", opened, "unterminated cycle")
    return cycles


def special_form(cycle_type: Sequence[int]) -> Permutation:
    """(1..m_1)(m_1+1..m_2)...(m_{r-1}+1..m_r) with cycle lengths ascending."""
    lengths = sorted(cycle_type)
    if any(k < 1 for k in lengths):
        raise PermutationError(f"invalid cycle type {cycle_type}")
    n = sum(lengths)
    cycles, start = [], 1
    for k in lengths:
        cycles.append(tuple(range(start, start + k)))
        start += k
    return Permutation.from_cycles(n, cycles)


def canonical_cycle_form(w: Permutation) -> Permutation:
    return special_form(w.cycle_type())


def partitions(n: int, max_part: int | None = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of n as ascending tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield tuple(sorted(rest + (k,)))


def all_permutations(n: int) -> Iterator[Permutation]:
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)


def random_permutation(n: int, rng: random.Random) -> Permutation:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))
