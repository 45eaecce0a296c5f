"""Growing trifferent codes by one coordinate from a high-cardinality base.

A trifferent code C of length n with tau(C) = tau contains a residual
subcode of length n-1 and cardinality tau, so every class of length n is
reachable from some length-(n-1) base: fill the new coordinate of the base
words with {0,1} in all ways, then add words carrying symbol 2 there while
the code stays trifferent.  The occurrence-count bound #C <= 2*tau - s[i][j]
cuts branches once any symbol count exceeds 2*tau - target.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .core import Code, is_trifferent, residual_subcode, symbol_counts
from .enumeration import orderly_generate
from .equivalence import canonical_form


def card_bound(tau: int) -> int:
    """Largest cardinality reachable over a base of cardinality tau."""
    return (3 * tau) // 2


def prune_bound(partial: Code | None, tau: int) -> int:
    """Cardinality cap implied by the occurrence counts placed so far.

    Returns min over coordinates and symbols of 2*tau - s[i][j]; an empty
    partial code gives the unconstrained 2*tau.
    """
    if partial is None or len(partial) == 0:
        return 2 * tau
    smax = max(max(row) for row in symbol_counts(partial).counts)
    return 2 * tau - smax


def _fingerprint(D: np.ndarray) -> tuple:
    """Arrangement-invariant key of a code's digit matrix.

    Combines the multiset of per-coordinate symbol-count triples with one key
    per word built from its sorted Hamming-distance profile and its sorted
    symbol-class-size profile.  Equivalent codes always collide; distinct
    classes rarely do, and the survivors are separated by the exact
    arrangement search in ClassRegistry.
    """
    n, l = D.shape
    counts = np.empty((n, 3), dtype=np.int64)
    for s in range(3):
        counts[:, s] = (D == s).sum(axis=1)
    coord = tuple(sorted(tuple(sorted(row)) for row in counts.tolist()))
    dist = np.sort((D[:, :, None] != D[:, None, :]).sum(axis=0), axis=1)
    csz = np.sort(counts[np.arange(n)[:, None], D.astype(np.int64)], axis=0)
    wkeys = tuple(sorted(zip(map(tuple, dist.tolist()), map(tuple, csz.T.tolist()))))
    return (n, l, coord, wkeys)


class ClassRegistry:
    """Equivalence classes seen so far, one stored representative each.

    ``add`` buckets by fingerprint and settles collisions with the
    arrangement-equality kernel against the bucket's representatives, so no
    canonical form is ever computed during deduplication.
    """

    def __init__(self) -> None:
        self._buckets: dict[tuple, list[int]] = {}
        self._digits: list[np.ndarray] = []
        self.reps: list[Code] = []

    def __len__(self) -> int:
        return len(self.reps)

    def add(self, code: Code) -> bool:
        """Register a code; True iff its class was not seen before."""
        D = code.digits
        bucket = self._buckets.setdefault(_fingerprint(D), [])
        for idx in bucket:
            if _kernels.iso_to_target(D, self._digits[idx]):
                return False
        bucket.append(len(self.reps))
        self._digits.append(D)
        self.reps.append(code)
        return True


def _raw_completions(base: Code, target_card: int, prune: bool) -> list[tuple[int, ...]]:
    """Kernel run over one base: raw word tuples, one per realisation."""
    tau = len(base)
    if tau < 1:
        raise ValueError("base must be non-empty")
    if not is_trifferent(base):
        raise ValueError("base is not trifferent")
    if target_card > card_bound(tau):
        raise ValueError(
            f"target {target_card} exceeds floor(3*tau/2) = {card_bound(tau)}"
        )
    m = base.n
    dig = _kernels.digit_table(m)
    sm = _kernels.symbol_masks(m)
    buf = _kernels.extend_base(
        np.asarray(base.words, dtype=np.int64), m, target_card, dig, sm, prune, 1 << 12
    )
    out = []
    pos = 0
    total = buf.shape[0]
    while pos < total:
        card = int(buf[pos])
        out.append(tuple(int(w) for w in buf[pos + 1 : pos + 1 + card]))
        pos += 1 + card
    return out


def _finish(reg: ClassRegistry, canonical: bool) -> list[Code]:
    codes = [canonical_form(c).canonical for c in reg.reps] if canonical else list(reg.reps)
    codes.sort(key=lambda c: c.words)
    return codes


def extend(base: Code, target_card: int, prune: bool = True, canonical: bool = True) -> list[Code]:
    """All length-(n+1) completions of a base, one per class.

    Emits every class of cardinality >= target_card whose new coordinate
    restricts to {0,1} on the base words and to 2 elsewhere.  If a code C of
    length n+1 has tau(C) = len(base) and base is one of its residual
    subcodes at a tau-attaining coordinate, its class is among the results.
    Output is sorted by word tuple, canonical unless ``canonical=False``
    (which keeps arbitrary class representatives and skips the
    canonicalisation cost).
    """
    reg = ClassRegistry()
    for words in _raw_completions(base, target_card, prune):
        reg.add(Code(base.n + 1, words))
    return _finish(reg, canonical)


def extend_all(
    bases: Sequence[Code],
    target_card: int,
    prune: bool = True,
    checkpoint: str | Path | None = None,
    canonical: bool = True,
) -> list[Code]:
    """Union of extend() over many bases, deduplicated across bases.

    With ``checkpoint`` the per-base new-class representatives are appended
    to a JSONL file and already-processed bases are skipped on resume (the
    registry is rebuilt from the stored representatives).
    """
    reg = ClassRegistry()
    done = 0
    fh = None
    if checkpoint is not None:
        path = Path(checkpoint)
        if path.exists():
            with path.open() as old:
                for line in old:
                    rec = json.loads(line)
                    done += 1
                    for words in rec["codes"]:
                        reg.add(Code(bases[0].n + 1, tuple(words)))
        fh = path.open("a")
    try:
        for i, base in enumerate(bases):
            if i < done:
                continue
            fresh = []
            for words in _raw_completions(base, target_card, prune):
                if reg.add(Code(base.n + 1, words)):
                    fresh.append(list(words))
            if fh is not None:
                fh.write(json.dumps({"base": i, "codes": fresh}) + "\n")
                fh.flush()
    finally:
        if fh is not None:
            fh.close()
    return _finish(reg, canonical)


@dataclass
class StageResult:
    n: int
    target_card: int
    counts: dict[int, int]
    codes: list[Code]


def staged_pipeline(
    start_length: int,
    start_min_card: int,
    stages: Sequence[tuple[int, int]],
    prune: bool = True,
    checkpoint_dir: str | Path | None = None,
) -> list[StageResult]:
    """Chain of extensions across lengths, canonical survivors fed forward.

    ``stages`` lists (length, cardinality threshold) pairs; stage k seeds
    from every survivor of stage k-1 (the orderly census of the start length
    for k=0), so ties in the tau-attaining coordinate cannot lose classes.
    Each threshold must be reachable: a base of cardinality l extends to at
    most floor(3l/2) words, so l_stage >= ceil(2*l_next/3) is required.
    """
    prev_len, prev_card = start_length, start_min_card
    for length, card in stages:
        if length != prev_len + 1:
            raise ValueError(f"stage lengths must increase by 1, got {length}")
        if prev_card < math.ceil(2 * card / 3):
            raise ValueError(
                f"threshold {prev_card} at length {prev_len} cannot reach "
                f"{card} at length {length}"
            )
        prev_len, prev_card = length, card

    bases: list[Code] = []
    orderly_generate(
        start_length,
        min_card=start_min_card,
        sink=bases.append,
        checkpoint_dir=checkpoint_dir,
    )
    results: list[StageResult] = []
    for k, (length, card) in enumerate(stages):
        ckpt = None
        if checkpoint_dir is not None:
            ckpt = Path(checkpoint_dir) / f"stage_n{length}_c{card}.jsonl"
        codes = extend_all(bases, card, prune=prune, checkpoint=ckpt) if bases else []
        counts: dict[int, int] = {}
        for code in codes:
            counts[len(code)] = counts.get(len(code), 0) + 1
        results.append(StageResult(length, card, counts, codes))
        bases = codes
    return results


def residual_seeded_search(
    code: Code,
    target_card: int,
    prune: bool = True,
    checkpoint: str | Path | None = None,
    canonical: bool = True,
) -> list[Code]:
    """Extension search seeded from every residual subcode of a given code.

    Covers classes invisible to tau-maximal seeding thresholds: each of the
    3n residuals serves as a base, results are unioned up to equivalence.
    Residuals too small to reach the target are skipped.
    """
    bases = []
    for i in range(1, code.n + 1):
        for j in range(3):
            base = residual_subcode(code, i, j)
            if len(base) > 0 and target_card <= card_bound(len(base)):
                bases.append(base)
    if not bases:
        return []
    return extend_all(bases, target_card, prune=prune, checkpoint=checkpoint, canonical=canonical)
