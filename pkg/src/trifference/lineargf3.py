"""Linear codes over GF(3), minimality, and strong blocking sets.

A linear 3-ary code is minimal iff no nonzero codeword's support strictly
contains another's, which for q = 3 is the same as being trifferent.
Geometrically, the multiset of points spanned by the generator columns in
PG(k-1,3) is a strong blocking multiset iff the code is minimal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .core import Code, encode


def _as_matrix(rows: Sequence[Sequence[int]]) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("generator rows must form a matrix")
    if not np.isin(arr, (0, 1, 2)).all():
        raise ValueError("entries must be in {0,1,2}")
    return arr % 3


def _rank3(mat: np.ndarray) -> int:
    """Rank over GF(3) by Gaussian elimination."""
    m = mat.copy() % 3
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i, c]), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        if m[r, c] == 2:  # inverse of 2 is 2
            m[r] = (m[r] * 2) % 3
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % 3
        r += 1
        if r == rows:
            break
    return r


@dataclass(frozen=True)
class GeneratorMatrix:
    """Full-rank k x n matrix over GF(3), rows as tuples."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        mat = _as_matrix(self.rows)
        if _rank3(mat) != mat.shape[0]:
            raise ValueError("generator matrix is rank deficient")

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def matrix(self) -> np.ndarray:
        return _as_matrix(self.rows)

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "GeneratorMatrix":
        """Rows given as digit strings, e.g. "11111111101000"."""
        rows = tuple(tuple(int(ch) for ch in line.strip()) for line in lines if line.strip())
        return cls(rows)


def read_generator_file(fh: TextIO) -> GeneratorMatrix:
    return GeneratorMatrix.from_strings(
        line for line in fh if line.strip() and not line.lstrip().startswith("#")
    )


def write_generator_file(fh: TextIO, g: GeneratorMatrix) -> None:
    for row in g.rows:
        fh.write("".join(str(s) for s in row) + "\n")


def _messages(k: int) -> np.ndarray:
    """All 3^k message vectors as a (3^k, k) array."""
    msgs = np.indices((3,) * k).reshape(k, -1).T
    return np.ascontiguousarray(msgs, dtype=np.int64)


def _codewords(g: GeneratorMatrix) -> np.ndarray:
    return (_messages(g.k) @ g.matrix) % 3


def expand(g: GeneratorMatrix) -> Code:
    """All 3^k codewords of the row space, as a Code."""
    return Code.from_words(g.n, [encode(row) for row in _codewords(g)])


@dataclass(frozen=True)
class WeightEnumerator:
    """Codeword counts by Hamming weight."""

    coefficients: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.coefficients)

    @property
    def min_weight(self) -> int:
        return min(w for w, c in self.coefficients if w > 0 and c > 0)

    @property
    def max_weight(self) -> int:
        return max(w for w, c in self.coefficients if c > 0)

    def __str__(self) -> str:
        parts = []
        for w, c in self.coefficients:
            if w == 0:
                parts.append(str(c))
            else:
                parts.append(f"{'' if c == 1 else c}x^{w}")
        return "+".join(parts)


def weight_enumerator(g: GeneratorMatrix) -> WeightEnumerator:
    weights = (_codewords(g) != 0).sum(axis=1)
    counts = np.bincount(weights, minlength=1)
    return WeightEnumerator(tuple((w, int(c)) for w, c in enumerate(counts) if c))


def _projective_codewords(g: GeneratorMatrix) -> np.ndarray:
    """One representative per scalar class of nonzero codewords."""
    cws = _codewords(g)
    reps = []
    for row in cws:
        nz = np.nonzero(row)[0]
        if nz.size and row[nz[0]] == 1:
            reps.append(row)
    return np.asarray(reps, dtype=np.int64)


def is_minimal_code(g: GeneratorMatrix) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """No nonzero support strictly contains another nonzero support.

    Scalar multiples share supports, so one representative per projective
    class suffices.  Returns (flag, witness); the witness is a (contained,
    containing) pair of codewords when the code is not minimal.
    """
    reps = _projective_codewords(g)
    supports = reps != 0
    for a in range(len(reps)):
        for b in range(len(reps)):
            if a == b:
                continue
            sa, sb = supports[a], supports[b]
            if ((sa | sb) == sb).all():
                return False, (tuple(reps[a]), tuple(reps[b]))
    return True, None


def minimal_iff_trifferent_check(g: GeneratorMatrix) -> bool:
    """Agreement of support minimality with the trifference of the expansion."""
    if g.k > 6:
        raise ValueError("expansion guard: k <= 6")
    from .core import is_trifferent

    return is_minimal_code(g)[0] == is_trifferent(expand(g))


def ashikhmin_barg(w: WeightEnumerator) -> bool:
    """Sufficient minimality condition w_max < w_min * 3/2."""
    if all(weight == 0 for weight, c in w.coefficients if c):
        raise ValueError("no nonzero weights")
    return 2 * w.max_weight < 3 * w.min_weight


def min_distance_floor_check(g: GeneratorMatrix) -> bool:
    """Minimal codes over GF(3) satisfy d >= 2k - 1."""
    return weight_enumerator(g).min_weight >= 2 * g.k - 1


def dual_distance_at_least(g: GeneratorMatrix, t: int) -> bool:
    """Dual distance >= 2 means no zero column, >= 3 additionally no two
    proportional columns (projective code)."""
    if t not in (2, 3):
        raise ValueError("t must be 2 or 3")
    cols = g.matrix.T
    if not (cols != 0).any(axis=1).all():
        return False
    if t == 2:
        return True
    return len({_normalize_point(col) for col in cols}) == len(cols)


# --- projective geometry side ------------------------------------------------


def _normalize_point(vec: Sequence[int]) -> tuple[int, ...]:
    v = [int(x) % 3 for x in vec]
    nz = next((x for x in v if x), 0)
    if nz == 0:
        raise ValueError("zero vector is not a projective point")
    if nz == 2:
        v = [(2 * x) % 3 for x in v]
    return tuple(v)


@dataclass(frozen=True)
class PointMultiset:
    """Multiset of points of PG(k-1,3), normalized first nonzero entry 1."""

    k: int
    points: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self) -> None:
        for pt, mult in self.points:
            if len(pt) != self.k:
                raise ValueError("point dimension mismatch")
            if pt != _normalize_point(pt):
                raise ValueError(f"point {pt} is not normalized")
            if mult < 1:
                raise ValueError("multiplicities must be >= 1")

    @classmethod
    def from_points(cls, k: int, pts: Iterable[Sequence[int]]) -> "PointMultiset":
        tally: dict[tuple[int, ...], int] = {}
        for pt in pts:
            key = _normalize_point(pt)
            tally[key] = tally.get(key, 0) + 1
        return cls(k, tuple(sorted(tally.items())))

    def size(self) -> int:
        return sum(m for _, m in self.points)

    def support(self) -> list[tuple[int, ...]]:
        return [pt for pt, _ in self.points]


def points_of(g: GeneratorMatrix) -> PointMultiset:
    """Projective points spanned by the generator columns."""
    if g.k < 2:
        raise ValueError("points live in PG(k-1,3) with k >= 2")
    return PointMultiset.from_points(g.k, [tuple(col) for col in g.matrix.T])


def all_points(k: int) -> list[tuple[int, ...]]:
    """The (3^k - 1)/2 points of PG(k-1,3)."""
    return [
        tuple(msg)
        for msg in _messages(k)
        if msg.any() and msg[np.nonzero(msg)[0][0]] == 1
    ]


def is_strong_blocking(m: PointMultiset) -> bool:
    """Points meeting every hyperplane span it (rank k-1 inside it)."""
    pts = np.asarray(m.support(), dtype=np.int64)
    if pts.size == 0:
        return False
    for h in all_points(m.k):  # hyperplanes are dual points
        inc = pts[(pts @ np.asarray(h)) % 3 == 0]
        if inc.shape[0] == 0 or _rank3(inc) < m.k - 1:
            return False
    return True


def greedy_point_removal(m: PointMultiset, rng_seed: int) -> PointMultiset:
    """Shrink a strong blocking multiset point by point while it stays one.

    The removal order is drawn from the seeded RNG; the result is minimal in
    the sense that no single remaining point can be dropped.
    """
    if not is_strong_blocking(m):
        raise ValueError("input is not a strong blocking multiset")
    import random

    rng = random.Random(rng_seed)
    pts: list[tuple[int, ...]] = []
    for pt, mult in m.points:
        pts.extend([pt] * mult)
    progress = True
    while progress:
        progress = False
        order = list(range(len(pts)))
        rng.shuffle(order)
        for i in order:
            trial = pts[:i] + pts[i + 1 :]
            if is_strong_blocking(PointMultiset.from_points(m.k, trial)):
                pts = trial
                progress = True
                break
    return PointMultiset.from_points(m.k, pts)


def read_point_file(fh: TextIO, k: int) -> PointMultiset:
    pts = []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pts.append(tuple(int(ch) for ch in line))
    return PointMultiset.from_points(k, pts)


def write_point_file(fh: TextIO, m: PointMultiset) -> None:
    for pt, mult in m.points:
        for _ in range(mult):
            fh.write("".join(str(x) for x in pt) + "\n")
