import random
from itertools import combinations
from pathlib import Path

import pytest

from trifference.core import Code, decode, triple_trifferent

# long-running artifacts (checkpoints of the census and extension runs)
ARTIFACT_DIR = Path("/root/work")
CHECKPOINT_DIR = ARTIFACT_DIR / "ckpt"


def random_trifferent_code(n: int, rng: random.Random, max_card: int | None = None) -> Code:
    """Greedy random trifferent code: shuffle all words, add while trifferent."""
    order = list(range(3**n))
    rng.shuffle(order)
    tuples = {}
    words: list[int] = []
    target = max_card if max_card is not None else 3**n
    for w in order:
        tw = decode(n, w)
        ok = all(
            triple_trifferent(tuples[a], tuples[b], tw)
            for a, b in combinations(words, 2)
        )
        if ok:
            tuples[w] = tw
            words.append(w)
            if len(words) >= target:
                break
    return Code.from_words(n, words)


def require_artifact(path: Path):
    if not path.exists():
        pytest.skip(f"missing artifact {path}; run the checkpointed driver first")
    return path
