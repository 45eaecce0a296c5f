import io
import random

import pytest
from hypothesis import given, strategies as st

from trifference.core import (
    Code,
    decode,
    encode,
    hamming_distance,
    is_trifferent,
    min_distance,
    read_code_file,
    residual_subcode,
    symbol_counts,
    tau,
    triple_trifferent,
    write_code_file,
)

from conftest import random_trifferent_code

words_st = st.integers(min_value=1, max_value=6).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 2), min_size=n, max_size=n))
)


@given(words_st)
def test_encode_decode_roundtrip(nw):
    n, word = nw
    assert decode(n, encode(word)) == tuple(word)


def test_encode_first_coordinate_most_significant():
    assert encode([1, 0, 0]) == 9
    assert encode([0, 0, 1]) == 1
    assert decode(3, 9) == (1, 0, 0)


def test_encode_rejects_bad_symbols():
    with pytest.raises(ValueError):
        encode([0, 3])


def test_hamming_distance():
    assert hamming_distance((0, 1, 2), (0, 2, 2)) == 1
    assert hamming_distance((0, 0), (1, 2)) == 2
    with pytest.raises(ValueError):
        hamming_distance((0,), (0, 1))


def test_triple_trifferent_examples():
    assert triple_trifferent((0,), (1,), (2,))
    assert triple_trifferent((0, 0), (0, 1), (0, 2))
    assert triple_trifferent((0, 0), (1, 1), (2, 0))
    assert not triple_trifferent((0, 0), (0, 1), (1, 0))
    with pytest.raises(ValueError):
        triple_trifferent((0,), (0,), (1,))


def test_code_sorted_and_distinct():
    with pytest.raises(ValueError):
        Code(2, (3, 3))
    with pytest.raises(ValueError):
        Code(2, (5, 3))
    assert Code.from_words(2, [5, 3, 3]).words == (3, 5)


def test_is_trifferent_small():
    # any <= 2 words are trivially trifferent
    assert is_trifferent(Code(2, (0, 8)))
    # {00,01,02}: the second coordinate sees all three symbols
    assert is_trifferent(Code(2, (0, 1, 2)))
    # {00,01,10}: no coordinate sees all of {0,1,2}
    assert not is_trifferent(Code(2, (0, 1, 3)))
    assert is_trifferent(Code(1, (0, 1, 2)))


def test_min_distance():
    assert min_distance(Code(2, (0, 1))) == 1
    assert min_distance(Code(2, (0, 4, 8))) == 2
    with pytest.raises(ValueError):
        min_distance(Code(2, (0,)))


def test_residual_subcode_drops_symbol_and_coordinate():
    code = Code(2, (0, 1, 5, 7))  # (0,0),(0,1),(1,2),(2,1)
    res = residual_subcode(code, 1, 1)  # (1,2) is dropped, first coordinate removed
    assert res.n == 1
    assert res.words == (0, 1)
    res2 = residual_subcode(code, 2, 2)  # (1,2) is dropped, second coordinate removed
    assert res2.words == (0, 2)


def test_symbol_counts_and_tau():
    code = Code(2, (0, 1, 5, 7))  # (0,0),(0,1),(1,2),(2,1)
    sc = symbol_counts(code)
    assert sc[1] == (2, 1, 1)
    assert sc[2] == (1, 2, 1)
    t, i, j3 = tau(code)
    assert t == 3
    # residual at (i, j3) has cardinality tau
    assert len(residual_subcode(code, i, j3)) == t


def test_tau_matches_residual_on_random_codes():
    rng = random.Random(7)
    for _ in range(50):
        code = random_trifferent_code(4, rng)
        if code.n < 2 or len(code) == 0:
            continue
        t, i, j3 = tau(code)
        assert len(residual_subcode(code, i, j3)) == t
        sc = symbol_counts(code)
        assert t == max(
            len(code) - min(sc[i]) for i in range(1, code.n + 1)
        )


def test_residual_of_trifferent_is_trifferent():
    rng = random.Random(11)
    for _ in range(25):
        code = random_trifferent_code(4, rng)
        for i in range(1, 5):
            for j in range(3):
                assert is_trifferent(residual_subcode(code, i, j))


def test_code_file_roundtrip():
    codes = [Code(3, (0, 13, 26)), Code(3, (1, 5, 9, 22))]
    buf = io.StringIO()
    write_code_file(buf, 3, codes)
    buf.seek(0)
    n, back = read_code_file(buf)
    assert n == 3
    assert [c.words for c in back] == [c.words for c in codes]


def test_code_file_diagnostics():
    with pytest.raises(ValueError, match="header"):
        read_code_file(io.StringIO("0,1,2\n"))
    with pytest.raises(ValueError, match="line 2"):
        read_code_file(io.StringIO("length=3\n0,x,2\n"))
    with pytest.raises(ValueError, match="header"):
        read_code_file(io.StringIO("# empty\n"))
