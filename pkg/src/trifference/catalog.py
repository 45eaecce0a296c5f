"""The embedded catalog of known codes at small lengths and its verifier.

Each (n, l) bucket lists one canonical representative per equivalence
class.  The lists exist twice, as an importable fixture and as shipped
code-list files; the verifier checks both copies agree and that every entry
is trifferent, canonical, and inequivalent to its bucket mates.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from itertools import combinations

from ._catalog_data import CATALOG
from .core import Code, is_trifferent, read_code_file, triple_trifferent
from .equivalence import is_canonical

BUCKET_SIZES = {
    (4, 7): 3,
    (4, 8): 2,
    (4, 9): 1,
    (5, 10): 5,
    (6, 12): 93,
    (6, 13): 3,
    (7, 16): 3,
    (8, 20): 57,
    (9, 27): 11,
}


def catalog_codes(n: int, l: int) -> list[Code]:
    """Entries of one bucket as Code objects."""
    return [Code(n, words) for words in CATALOG[(n, l)]]


def _file_codes(n: int, l: int) -> list[Code]:
    ref = resources.files("trifference.data").joinpath(f"codes_n{n}_l{l}.txt")
    with ref.open() as fh:
        n_file, codes = read_code_file(fh)
    if n_file != n:
        raise ValueError(f"data file for ({n},{l}) declares length {n_file}")
    return codes


@dataclass
class BucketReport:
    n: int
    l: int
    entries: int
    passed: bool
    failures: list[str]


def _trifference_witness(code: Code) -> str | None:
    words = code.word_tuples()
    for x, y, z in combinations(words, 3):
        if not triple_trifferent(x, y, z):
            return f"triple {x},{y},{z} never sees all three symbols"
    return None


def verify_bucket(n: int, l: int) -> BucketReport:
    failures: list[str] = []
    fixture = catalog_codes(n, l)
    shipped = _file_codes(n, l)
    if [c.words for c in fixture] != [c.words for c in shipped]:
        failures.append("fixture and shipped file disagree")
    if len(fixture) != BUCKET_SIZES[(n, l)]:
        failures.append(f"expected {BUCKET_SIZES[(n, l)]} entries, got {len(fixture)}")
    seen = set()
    for idx, code in enumerate(fixture):
        if len(code) != l:
            failures.append(f"entry {idx}: cardinality {len(code)} != {l}")
        witness = _trifference_witness(code)
        if witness is not None:
            failures.append(f"entry {idx}: not trifferent ({witness})")
        elif not is_canonical(code):
            failures.append(f"entry {idx}: not the canonical representative")
        if code.words in seen:
            failures.append(f"entry {idx}: duplicate of an earlier entry")
        seen.add(code.words)
    # canonical forms are unique per class, so distinct canonical entries
    # are automatically pairwise inequivalent
    return BucketReport(n, l, len(fixture), not failures, failures)


def verify_catalog() -> list[BucketReport]:
    """Check every bucket; see verify_bucket for the individual tests."""
    return [verify_bucket(n, l) for (n, l) in sorted(BUCKET_SIZES)]
