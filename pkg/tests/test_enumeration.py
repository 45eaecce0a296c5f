import json

import pytest

from trifference.core import is_trifferent, min_distance
from trifference.enumeration import (
    card_cap,
    distance_classify,
    labeled_census_oracle,
    orderly_generate,
)
from trifference.equivalence import is_canonical

# classes by cardinality, lengths 1..5
CENSUS_ROWS = {
    1: (1, 1, 1),
    2: (1, 2, 3, 1),
    3: (1, 3, 7, 7, 2, 1),
    4: (1, 4, 14, 35, 38, 25, 3, 2, 1),
    5: (1, 5, 25, 141, 613, 1410, 944, 269, 55, 5),
}

# maximum cardinality by exact minimum distance, d = 1..6
DISTANCE_ROWS = {
    1: (3, 1, 1, 1, 1, 1),
    2: (4, 3, 1, 1, 1, 1),
    3: (5, 6, 3, 1, 1, 1),
    4: (7, 8, 9, 3, 1, 1),
    5: (10, 10, 9, 6, 3, 1),
}


def test_card_cap():
    assert [card_cap(n) for n in range(1, 7)] == [3, 4, 6, 9, 13, 19]
    with pytest.raises(ValueError):
        card_cap(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_census_rows_small_n(n):
    assert orderly_generate(n).row() == CENSUS_ROWS[n]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_census_matches_labeled_oracle(n):
    orderly = orderly_generate(n)
    oracle = labeled_census_oracle(n)
    assert orderly.row() == oracle.row()
    assert orderly.total() == oracle.total()


def _card3_class_count(n: int) -> int:
    """Classes of trifferent 3-word codes of length n, counted directly.

    A coordinate sees the three words as all-equal, all-distinct, or one-out
    (three flavours by the odd word); classes correspond to the counts
    (a, sorted one-out triple, c) with c >= 1 all-distinct coordinates.
    """

    def p3(m: int) -> int:
        return sum(
            1
            for x in range(m + 1)
            for y in range(x, m + 1)
            if x + y <= m and m - x - y >= y
        )

    return sum((n - m) * p3(m) for m in range(n))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8])
def test_two_and_three_word_class_counts(n):
    table = orderly_generate(n, max_card=3)
    assert table.counts[1] == 1
    assert table.counts[2] == n
    assert table.counts[3] == _card3_class_count(n)
    if n <= 6:
        # the closed form only holds while partitions into <= 3 parts do
        assert table.counts[3] == n * (n * n + 5) // 6


def test_emitted_codes_are_canonical_trifferent_and_distinct():
    codes = []
    orderly_generate(4, min_card=6, sink=codes.append)
    assert len(codes) == 25 + 3 + 2 + 1
    seen = set()
    for code in codes:
        assert is_trifferent(code)
        assert is_canonical(code)
        assert code.words not in seen
        seen.add(code.words)


def test_min_card_and_max_card_windows():
    table = orderly_generate(4, max_card=5)
    assert table.row() == (1, 4, 14, 35, 38)
    codes = []
    orderly_generate(4, min_card=7, max_card=8, sink=codes.append)
    assert sorted(len(c) for c in codes) == [7, 7, 7, 8, 8]


def test_checkpoint_resume_counts_and_emissions(tmp_path):
    codes = []
    table = orderly_generate(5, min_card=8, sink=codes.append, checkpoint_dir=tmp_path)
    assert table.row() == CENSUS_ROWS[5]
    full = sorted(c.words for c in codes)
    # truncate the log to simulate an interrupted run, then resume
    log = next(tmp_path.glob("done_n5_*.jsonl"))
    lines = log.read_text().splitlines()
    log.write_text("\n".join(lines[: len(lines) // 2]) + "\n")
    codes2 = []
    table2 = orderly_generate(5, min_card=8, sink=codes2.append, checkpoint_dir=tmp_path)
    assert table2.row() == table.row()
    assert sorted(c.words for c in codes2) == full


def test_checkpoint_without_codes_rejects_sink(tmp_path):
    orderly_generate(5, min_card=8, checkpoint_dir=tmp_path)
    log = next(tmp_path.glob("done_n5_l8_*.jsonl"))
    rec = json.loads(log.read_text().splitlines()[0])
    assert "codes" not in rec
    with pytest.raises(ValueError, match="fresh checkpoint"):
        orderly_generate(5, min_card=8, sink=lambda c: None, checkpoint_dir=tmp_path)


def test_jobs_do_not_change_the_table(tmp_path):
    serial = orderly_generate(5)
    parallel = orderly_generate(5, jobs=2)
    assert serial.row() == parallel.row()
    assert serial.dist_hist == parallel.dist_hist


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_distance_rows_small_n(n):
    assert distance_classify(n).row() == DISTANCE_ROWS[n]


def test_distance_histogram_consistency():
    table = orderly_generate(4)
    # distance histogram marginals must reproduce the census counts for l >= 2
    for l, count in table.counts.items():
        if l >= 2:
            assert sum(table.dist_hist[l].values()) == count


def test_distance_histogram_matches_direct_classification():
    codes = []
    table = orderly_generate(4, min_card=2, sink=codes.append)
    direct: dict[int, dict[int, int]] = {}
    for code in codes:
        h = direct.setdefault(len(code), {})
        d = min_distance(code)
        h[d] = h.get(d, 0) + 1
    assert direct == table.dist_hist
