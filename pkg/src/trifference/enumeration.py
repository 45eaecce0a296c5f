"""Isomorph-free generation of trifferent codes and the derived tables.

The orderly generator walks canonical representatives only: a node of
cardinality l is extended by every word with a strictly larger encoding that
keeps the code trifferent, and the child survives iff it is again the
canonical representative of its orbit.  Canonicity is closed under removing
the largest word, so the search tree contains every class exactly once.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Callable

import numpy as np

from . import _kernels
from .core import Code, decode, read_code_file, triple_trifferent, write_code_file
from .equivalence import canonical_form

Sink = Callable[[Code], None]

_SPLIT_CARD = 4


def card_cap(n: int) -> int:
    """Upper bound on the cardinality of a trifferent code of length n.

    Iterates cap(n) = floor(3 * cap(n-1) / 2) from cap(1) = 3.
    """
    if n < 1:
        raise ValueError("length must be positive")
    cap = 3
    for _ in range(n - 1):
        cap = (3 * cap) // 2
    return cap


@dataclass
class CensusTable:
    """Number of equivalence classes by cardinality for one length."""

    n: int
    counts: dict[int, int]
    dist_hist: dict[int, dict[int, int]] = field(default_factory=dict)

    def row(self) -> tuple[int, ...]:
        """Counts for l = 1..max, trailing zero entries dropped."""
        top = max((l for l, c in self.counts.items() if c), default=0)
        return tuple(self.counts.get(l, 0) for l in range(1, top + 1))

    def total(self) -> int:
        return sum(self.counts.values())


@dataclass
class DistanceTable:
    """Maximum cardinality by exact minimum distance for one length."""

    n: int
    values: dict[int, int]

    def row(self, dmax: int = 6) -> tuple[int, ...]:
        return tuple(self.values.get(d, 1) for d in range(1, dmax + 1))


def _iter_records(buf: np.ndarray):
    """Decode the flat (l, w_1..w_l) record buffer of the search kernel."""
    pos = 0
    total = buf.shape[0]
    while pos < total:
        l = int(buf[pos])
        yield tuple(int(w) for w in buf[pos + 1 : pos + 1 + l])
        pos += 1 + l


def _run_subtree(n: int, root: tuple[int, ...], lmax: int, emit_min: int):
    """Census of one subtree; module-level so worker processes can run it."""
    dig = _kernels.digit_table(n)
    sm = _kernels.symbol_masks(n)
    counts = np.zeros(lmax + 1, dtype=np.int64)
    dist_hist = np.zeros((lmax + 1, n + 2), dtype=np.int64)
    buf = _kernels.census_subtree(
        n,
        np.asarray(root, dtype=np.int64),
        lmax,
        emit_min,
        dig,
        sm,
        counts,
        dist_hist,
        1 << 14,
    )
    return counts, dist_hist, buf


def _merge(table: CensusTable, counts: np.ndarray, dist_hist: np.ndarray) -> None:
    for l in range(1, counts.shape[0]):
        if counts[l]:
            table.counts[l] = table.counts.get(l, 0) + int(counts[l])
        for d in range(1, dist_hist.shape[1]):
            if dist_hist[l, d]:
                h = table.dist_hist.setdefault(l, {})
                h[d] = h.get(d, 0) + int(dist_hist[l, d])


def orderly_generate(
    n: int,
    min_card: int = 1,
    max_card: int | None = None,
    sink: Sink | None = None,
    jobs: int = 1,
    checkpoint_dir: str | Path | None = None,
) -> CensusTable:
    """All equivalence classes of trifferent codes of length n.

    Classes with min_card <= l <= max_card are passed to ``sink`` as their
    canonical representatives; the returned table counts every visited
    cardinality.  With ``checkpoint_dir`` the run is split at cardinality 4
    into independent subtrees whose tallies are persisted, so an interrupted
    run resumes where it stopped.  ``jobs`` > 1 processes subtrees in a
    process pool; tallies merge associatively, so the result does not depend
    on scheduling.
    """
    if n < 1:
        raise ValueError("length must be positive")
    lmax = card_cap(n) if max_card is None else min(max_card, card_cap(n))
    if min_card > lmax:
        return CensusTable(n, {})
    emit_min = min_card if sink is not None else lmax + 1

    table = CensusTable(n, {})
    split = lmax > _SPLIT_CARD and (jobs > 1 or checkpoint_dir is not None)
    if not split:
        counts, dist_hist, buf = _run_subtree(n, (), lmax, emit_min)
        _merge(table, counts, dist_hist)
        if sink is not None:
            for words in _iter_records(buf):
                sink(Code(n, words))
        return table

    # shallow pass: everything up to the split cardinality, plus the roots
    counts, dist_hist, buf = _run_subtree(n, (), _SPLIT_CARD, _SPLIT_CARD)
    _merge(table, counts, dist_hist)
    roots = list(_iter_records(buf))
    if sink is not None and min_card <= _SPLIT_CARD:
        shallow = _run_subtree(n, (), _SPLIT_CARD, min_card)[2]
        for words in _iter_records(shallow):
            sink(Code(n, words))

    done: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    log_path = None
    if checkpoint_dir is not None:
        ckpt = Path(checkpoint_dir)
        ckpt.mkdir(parents=True, exist_ok=True)
        roots_path = ckpt / f"roots_n{n}.txt"
        if roots_path.exists():
            with roots_path.open() as fh:
                n_file, codes = read_code_file(fh)
            if n_file != n:
                raise ValueError(f"checkpoint {roots_path} is for length {n_file}")
            roots = [c.words for c in codes]
        else:
            with roots_path.open("w") as fh:
                write_code_file(fh, n, [Code(n, r) for r in roots])
        log_path = ckpt / f"done_n{n}_l{min_card}_{lmax}.jsonl"
        if log_path.exists():
            with log_path.open() as fh:
                for line in fh:
                    rec = json.loads(line)
                    done[rec["root"]] = (
                        np.asarray(rec["counts"], dtype=np.int64),
                        np.asarray(rec["dist_hist"], dtype=np.int64),
                        rec.get("codes"),
                    )

    deep_emit = max(emit_min, _SPLIT_CARD + 1)
    pending = [i for i in range(len(roots)) if i not in done]

    def finish(i: int, counts: np.ndarray, dist_hist: np.ndarray, buf: np.ndarray) -> None:
        _merge(table, counts, dist_hist)
        emitted = list(_iter_records(buf)) if sink is not None else []
        for words in emitted:
            sink(Code(n, words))
        if log_path is not None:
            rec = {
                "root": i,
                "counts": counts.tolist(),
                "dist_hist": dist_hist.tolist(),
            }
            if sink is not None:
                rec["codes"] = [list(w) for w in emitted]
            with log_path.open("a") as fh:
                fh.write(json.dumps(rec) + "\n")

    for i, (counts, dist_hist, stored) in done.items():
        # replayed subtrees re-emit only what the checkpoint recorded
        _merge(table, counts, dist_hist)
        if sink is not None:
            if stored is None:
                raise ValueError(
                    "checkpoint was written without emitted codes; "
                    "restart with a fresh checkpoint directory to use a sink"
                )
            for words in stored:
                sink(Code(n, tuple(words)))

    if jobs > 1 and pending:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            args = [(n, roots[i], lmax, deep_emit) for i in pending]
            for i, (counts, dist_hist, buf) in zip(
                pending, pool.map(_run_subtree_star, args)
            ):
                finish(i, counts, dist_hist, buf)
    else:
        for i in pending:
            counts, dist_hist, buf = _run_subtree(n, roots[i], lmax, deep_emit)
            finish(i, counts, dist_hist, buf)
    return table


def _run_subtree_star(args):
    return _run_subtree(*args)


def labeled_census_oracle(n: int) -> CensusTable:
    """Census by raw enumeration of every trifferent word-set, for n <= 3.

    Lists all trifferent codes without canonicity pruning, canonicalizes
    each, deduplicates, and tabulates; an independent cross-check of the
    orderly generator.
    """
    if n > 3:
        raise ValueError("oracle census limited to n <= 3")
    top = 3**n
    tuples = [decode(n, v) for v in range(top)]
    seen: set[tuple[int, ...]] = set()
    counts: dict[int, int] = {}

    def grow(words: list[int]) -> None:
        canon = canonical_form(Code(n, tuple(words))).canonical
        if canon.words not in seen:
            seen.add(canon.words)
            l = len(words)
            counts[l] = counts.get(l, 0) + 1
        for w in range(words[-1] + 1, top):
            ok = all(
                triple_trifferent(tuples[a], tuples[b], tuples[w])
                for a, b in combinations(words, 2)
            )
            if ok:
                grow(words + [w])

    for w in range(top):
        grow([w])
    return CensusTable(n, counts)


def distance_classify(n: int, census: CensusTable | None = None) -> DistanceTable:
    """Maximum cardinality by exact minimum distance, from the census.

    Single-word codes have no minimum distance; every entry is at least 1 by
    the one-word code convention, and entries with d > n stay at 1.
    """
    if census is None:
        census = orderly_generate(n)
    if census.n != n:
        raise ValueError("census is for a different length")
    if not census.dist_hist:
        raise ValueError("census carries no distance histogram")
    values = {d: 1 for d in range(1, max(n, 6) + 1)}
    for l, hist in census.dist_hist.items():
        for d, cnt in hist.items():
            if cnt and l > values[d]:
                values[d] = l
    if values.get(n) != 3:
        raise AssertionError(f"T({n},{n}) = {values.get(n)}, expected 3")
    return DistanceTable(n, values)
