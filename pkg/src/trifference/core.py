"""Ternary codewords and codes, with trifference and distance predicates.

Codewords are tuples of symbols in {0,1,2}; a length-n word doubles as a
base-3 integer whose most significant digit is the first coordinate.  A
:class:`Code` keeps its words as sorted encoded integers, which makes the
integer lists of catalog files and the column-sorted matrix view agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np


def encode(word: Sequence[int]) -> int:
    """Base-3 value of a word, first coordinate most significant."""
    v = 0
    for s in word:
        if s not in (0, 1, 2):
            raise ValueError(f"symbol {s!r} not in {{0,1,2}}")
        v = 3 * v + s
    return v


def decode(n: int, v: int) -> tuple[int, ...]:
    """Inverse of :func:`encode` for length-n words."""
    if n <= 0:
        raise ValueError("word length must be positive")
    if not 0 <= v < 3**n:
        raise ValueError(f"value {v} out of range for length {n}")
    word = [0] * n
    for i in range(n - 1, -1, -1):
        v, word[i] = divmod(v, 3)
    return tuple(word)


def hamming_distance(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise ValueError("length mismatch")
    return sum(a != b for a, b in zip(x, y))


def triple_trifferent(x: Sequence[int], y: Sequence[int], z: Sequence[int]) -> bool:
    """True iff some coordinate sees all three symbols."""
    if not (len(x) == len(y) == len(z)):
        raise ValueError("length mismatch")
    if x == y or x == z or y == z:
        raise ValueError("words must be pairwise distinct")
    return any(a != b and a != c and b != c for a, b, c in zip(x, y, z))


@dataclass(frozen=True)
class Code:
    """A set of distinct length-n words, stored as ascending encoded integers."""

    n: int
    words: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise ValueError("code length must be positive")
        top = 3**self.n
        prev = -1
        for w in self.words:
            if not 0 <= w < top:
                raise ValueError(f"word {w} out of range for length {self.n}")
            if w <= prev:
                raise ValueError("words must be strictly ascending")
            prev = w

    @classmethod
    def from_words(cls, n: int, words: Iterable[int]) -> "Code":
        ws = sorted(set(int(w) for w in words))
        return cls(n, tuple(ws))

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[int]:
        return iter(self.words)

    @cached_property
    def digits(self) -> np.ndarray:
        """n x l matrix of symbols; column j is the j-th word, row 0 on top."""
        mat = np.empty((self.n, len(self.words)), dtype=np.uint8)
        for j, w in enumerate(self.words):
            mat[:, j] = decode(self.n, w)
        return mat

    def word_tuples(self) -> list[tuple[int, ...]]:
        return [decode(self.n, w) for w in self.words]


@dataclass(frozen=True)
class SymbolCounts:
    """Per-coordinate symbol occurrence counts s[i][j] of a code."""

    counts: tuple[tuple[int, int, int], ...]

    def __getitem__(self, i: int) -> tuple[int, int, int]:
        return self.counts[i - 1]


def is_trifferent(code: Code) -> bool:
    """Every 3-subset of the code hits {0,1,2} in some coordinate."""
    if len(code) <= 2:
        return True
    words = code.word_tuples()
    return all(triple_trifferent(x, y, z) for x, y, z in combinations(words, 3))


def min_distance(code: Code) -> int:
    if len(code) < 2:
        raise ValueError("minimum distance needs at least two words")
    words = code.word_tuples()
    return min(hamming_distance(x, y) for x, y in combinations(words, 2))


def residual_subcode(code: Code, i: int, j: int) -> Code:
    """Words of the code avoiding symbol j at coordinate i, coordinate removed."""
    if code.n < 2:
        raise ValueError("residual subcodes need length >= 2")
    if not 1 <= i <= code.n:
        raise ValueError(f"coordinate {i} out of range")
    if j not in (0, 1, 2):
        raise ValueError(f"symbol {j} out of range")
    kept = []
    for word in code.word_tuples():
        if word[i - 1] != j:
            kept.append(encode(word[: i - 1] + word[i:]))
    return Code.from_words(code.n - 1, kept)


def symbol_counts(code: Code) -> SymbolCounts:
    counts = [[0, 0, 0] for _ in range(code.n)]
    for word in code.word_tuples():
        for i, s in enumerate(word):
            counts[i][s] += 1
    return SymbolCounts(tuple(tuple(row) for row in counts))


def tau(code: Code) -> tuple[int, int, int]:
    """Maximum two-symbol occurrence sum.

    Returns (tau, i_star, j3_star) where tau = s[i*][j1]+s[i*][j2] is maximal
    and j3* is the left-out symbol, so the residual at (i*, j3*) has
    cardinality tau.
    """
    sc = symbol_counts(code)
    best, best_i, best_j3 = -1, 1, 2
    for i in range(1, code.n + 1):
        s = sc[i]
        for j3 in (2, 1, 0):
            pair_sum = len(code) - s[j3]
            if pair_sum > best:
                best, best_i, best_j3 = pair_sum, i, j3
    return best, best_i, best_j3


# --- code-list file format -------------------------------------------------
#
# UTF-8 text, '#' comment lines, a "length=<n>" header, then one code per
# line as comma-separated ascending base-3 integers.


def write_code_file(fh: TextIO, n: int, codes: Iterable[Code]) -> None:
    fh.write(f"length={n}\n")
    for code in codes:
        if code.n != n:
            raise ValueError("all codes in a file must share the length")
        fh.write(",".join(str(w) for w in code.words) + "\n")


def read_code_file(fh: TextIO) -> tuple[int, list[Code]]:
    n = None
    codes: list[Code] = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            if not line.startswith("length="):
                raise ValueError(f"line {lineno}: expected 'length=<n>' header")
            n = int(line.split("=", 1)[1])
            continue
        try:
            words = [int(tok) for tok in line.split(",")]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        code = Code(n, tuple(words))
        codes.append(code)
    if n is None:
        raise ValueError("missing 'length=<n>' header")
    return n, codes
