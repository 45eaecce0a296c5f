import random

from hypothesis import given, settings, strategies as st

from trifference.core import is_trifferent, min_distance
from trifference.equivalence import apply, canonical_form, equivalent, random_element
from trifference.extension import card_bound
from trifference.lineargf3 import GeneratorMatrix, expand, weight_enumerator
from trifference.core import tau as tau_of

from conftest import random_trifferent_code

seeds = st.integers(min_value=0, max_value=10_000)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=2, max_value=5))
def test_trifferent_cardinality_capped_by_tau(seed, n):
    code = random_trifferent_code(n, random.Random(seed))
    t, _, _ = tau_of(code)
    assert len(code) <= card_bound(t)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=2, max_value=4))
def test_canonical_form_is_idempotent(seed, n):
    code = random_trifferent_code(n, random.Random(seed))
    res = canonical_form(code)
    again = canonical_form(res.canonical)
    assert again.canonical.words == res.canonical.words
    assert again.is_input_canonical
    assert again.stabilizer_order == res.stabilizer_order


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=2, max_value=4))
def test_group_action_preserves_class_and_invariants(seed, n):
    rng = random.Random(seed)
    code = random_trifferent_code(n, rng)
    g, h = random_element(n, rng), random_element(n, rng)
    image = apply(g, apply(h, code))
    assert is_trifferent(image)
    if len(code) >= 2:
        assert min_distance(image) == min_distance(code)
    assert equivalent(code, image)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=2, max_value=3), st.integers(min_value=3, max_value=8))
def test_weight_enumerator_totals_and_distance(seed, k, n):
    rng = random.Random(seed)
    for _ in range(50):
        rows = tuple(tuple(rng.randrange(3) for _ in range(n)) for _ in range(k))
        try:
            g = GeneratorMatrix(rows)
            break
        except ValueError:
            continue
    else:
        return
    w = weight_enumerator(g)
    assert sum(c for _, c in w.coefficients) == 3**k
    assert w.min_weight == min_distance(expand(g))
