import pytest

from trifference.catalog import (
    BUCKET_SIZES,
    catalog_codes,
    verify_bucket,
    verify_catalog,
)
from trifference.core import Code, is_trifferent
from trifference.equivalence import is_canonical


def test_bucket_sizes():
    assert sum(BUCKET_SIZES.values()) == 3 + 2 + 1 + 5 + 93 + 3 + 3 + 57 + 11


@pytest.mark.parametrize("bucket", sorted(BUCKET_SIZES))
def test_bucket_counts_and_trifference(bucket):
    n, l = bucket
    codes = catalog_codes(n, l)
    assert len(codes) == BUCKET_SIZES[bucket]
    seen = set()
    for code in codes:
        assert code.n == n
        assert len(code) == l
        assert is_trifferent(code)
        assert code.words not in seen
        seen.add(code.words)


@pytest.mark.parametrize("bucket", [(4, 7), (4, 8), (4, 9), (5, 10), (6, 13)])
def test_small_buckets_verify(bucket):
    report = verify_bucket(*bucket)
    assert report.passed, report.failures


@pytest.mark.slow
def test_full_catalog_verifies():
    reports = verify_catalog()
    for report in reports:
        assert report.passed, (report.n, report.l, report.failures)


def test_small_bucket_entries_are_canonical():
    for bucket in [(4, 7), (4, 8), (4, 9), (5, 10)]:
        for code in catalog_codes(*bucket):
            assert is_canonical(code)


def test_corrupted_entry_is_caught(monkeypatch):
    import trifference.catalog as cat

    n, l = 4, 9
    (good,) = cat.catalog_codes(n, l)
    # swap one word for another that breaks trifference
    bad_words = list(good.words)
    bad_words[-1] = next(
        w for w in range(3**n) if w not in good.words
    )
    bad = Code.from_words(n, bad_words)
    monkeypatch.setitem(cat.CATALOG, (n, l), (bad.words,))
    report = cat.verify_bucket(n, l)
    assert not report.passed
    assert any("not trifferent" in f or "disagree" in f or "canonical" in f for f in report.failures)
