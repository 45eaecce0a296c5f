"""The equivalence group of ternary codes and canonical representatives.

Two codes are equivalent when one arises from the other by permuting
coordinates (rows of the column matrix) and permuting the symbols {0,1,2}
independently per coordinate; column order is immaterial and normalised by
sorting.  The canonical representative of an orbit is the matrix that reads
lexicographically smallest column by column, i.e. the smallest sorted tuple
of encoded words.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product
from random import Random
from typing import Iterable

import numpy as np

from . import _kernels
from .core import Code, decode, encode

_SYM_PERMS = tuple(permutations(range(3)))


@dataclass(frozen=True)
class GroupElement:
    """A coordinate permutation plus one symbol permutation per coordinate.

    ``row_perm[i]`` is the destination (0-based) of coordinate i;
    ``symbol_perms[i]`` is applied to the symbols of coordinate i before the
    move.
    """

    row_perm: tuple[int, ...]
    symbol_perms: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        n = len(self.row_perm)
        if sorted(self.row_perm) != list(range(n)):
            raise ValueError("row_perm is not a permutation")
        if len(self.symbol_perms) != n:
            raise ValueError("need one symbol permutation per coordinate")
        for p in self.symbol_perms:
            if sorted(p) != [0, 1, 2]:
                raise ValueError(f"{p!r} is not a permutation of (0,1,2)")

    @property
    def n(self) -> int:
        return len(self.row_perm)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls(tuple(range(n)), ((0, 1, 2),) * n)


@dataclass(frozen=True)
class CanonicalResult:
    canonical: Code
    is_input_canonical: bool
    stabilizer_order: int


def group_order(n: int) -> int:
    return math.factorial(n) * 6**n


def random_element(n: int, rng: Random) -> GroupElement:
    rows = list(range(n))
    rng.shuffle(rows)
    syms = tuple(_SYM_PERMS[rng.randrange(6)] for _ in range(n))
    return GroupElement(tuple(rows), syms)


def apply(g: GroupElement, code: Code) -> Code:
    """Image of a code under a group element, re-sorted ascending."""
    if g.n != code.n:
        raise ValueError("group element and code have different lengths")
    out = []
    for word in code.word_tuples():
        moved = [0] * code.n
        for i, s in enumerate(word):
            moved[g.row_perm[i]] = g.symbol_perms[i][s]
        out.append(encode(moved))
    return Code.from_words(code.n, out)


def _from_digits(n: int, digits: np.ndarray) -> Code:
    words = []
    for j in range(digits.shape[1]):
        words.append(encode([int(digits[t, j]) for t in range(n)]))
    return Code(n, tuple(words))


def _stabilizer_order(n: int, gs, gq, gcount: int) -> int:
    """Order of the group generated by the returned automorphisms.

    Each automorphism acts on the 3n points (row, symbol); the order comes
    from a permutation-group computation on that action.
    """
    if gcount == 0:
        return 1
    from sympy.combinatorics import Permutation, PermutationGroup

    perms = []
    for gi in range(gcount):
        img = [0] * (3 * n)
        for i in range(n):
            row = int(gs[gi, i])
            for v in range(3):
                img[3 * i + v] = 3 * row + int(_kernels.PERM_TBL[int(gq[gi, i]), v])
        perms.append(Permutation(img))
    return int(PermutationGroup(perms).order())


def canonical_form(code: Code) -> CanonicalResult:
    """Orbit minimum of a code under the full equivalence group.

    The backtracking search places rows one at a time with all six symbol
    permutations, keeps columns sorted by the prefix built so far and prunes
    against the incumbent; arrangement ties expose automorphisms, whose
    group order is the stabilizer order.
    """
    if len(code) == 0:
        return CanonicalResult(code, True, group_order(code.n))
    ok, digits, gs, gq, gcount = _kernels.canon_search(code.digits, False)
    stab = _stabilizer_order(code.n, gs, gq, int(gcount))
    return CanonicalResult(_from_digits(code.n, digits), bool(ok), stab)


def is_canonical(code: Code) -> bool:
    """Accept/reject shortcut used by the orderly generator."""
    if len(code) == 0:
        return True
    ok, _, _, _, _ = _kernels.canon_search(code.digits, True)
    return bool(ok)


def orbit_oracle(code: Code) -> Code:
    """Orbit minimum by explicit enumeration of all n! * 6^n group elements.

    Independent of the backtracking search; only for small n.
    """
    n = code.n
    if group_order(n) > 40_000_000:
        raise ValueError(f"orbit oracle limited to small n, got n={n}")
    words = code.word_tuples()
    best: tuple[int, ...] | None = None
    for rows in permutations(range(n)):
        for syms in product(_SYM_PERMS, repeat=n):
            out = []
            for word in words:
                moved = [0] * n
                for i, s in enumerate(word):
                    moved[rows[i]] = syms[i][s]
                out.append(encode(moved))
            out.sort()
            cand = tuple(out)
            if best is None or cand < best:
                best = cand
    return Code(n, best if best is not None else ())


def equivalent(a: Code, b: Code) -> bool:
    """Arrangement-existence test, far cheaper than two canonical forms."""
    if a.n != b.n or len(a) != len(b):
        return False
    if a.words == b.words:
        return True
    if len(a) == 0:
        return True
    return bool(_kernels.iso_to_target(a.digits, b.digits))


def canonicalize_all(codes: Iterable[Code]) -> list[Code]:
    """Canonical forms with duplicates removed, sorted by word tuple."""
    seen: set[tuple[int, ...]] = set()
    out = []
    for code in codes:
        canon = canonical_form(code).canonical
        if canon.words not in seen:
            seen.add(canon.words)
            out.append(canon)
    out.sort(key=lambda c: c.words)
    return out


def matrix_code(rows: list[list[int]]) -> Code:
    """Code from an explicit matrix given row-wise (columns are words)."""
    arr = np.asarray(rows, dtype=np.uint8)
    n, l = arr.shape
    return Code.from_words(n, [encode([int(arr[t, j]) for t in range(n)]) for j in range(l)])
