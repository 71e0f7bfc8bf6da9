import os
import random
from pathlib import Path

import pytest

from minrev.corpus import Dataset, Review

PERSONAL_REVIEW = (
    "Being a 63 year old woman with arthritic hands I think  I did really well in getting this "
    "chair put together. (...) I am 5'5\" and when I set the chair so my feet rest on the floor, "
    "(...) but it is also big enough for my larger husband"
)
PERSONAL_TERMS = ["63 year old", "woman", "arthritic hands", "i am 5'5\"", "husband"]

# Filled by tests/test_acceptance.py, printed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def review(rid, user, item, ts, text="", rating=5.0):
    return Review(str(rid), str(user), str(item), rating, ts, text)


_TOPICS = {
    "desk": ["desk", "drawer", "surface", "wood", "legs", "assembly", "screws"],
    "pen": ["pen", "ink", "tip", "cap", "grip", "writing", "refill"],
    "paper": ["paper", "sheet", "printer", "ream", "weight", "jam", "toner"],
    "chair": ["chair", "seat", "back", "cushion", "armrest", "wheels", "height"],
    "tape": ["tape", "roll", "dispenser", "adhesive", "box", "label", "seal"],
}
_ADJ = ["great", "sturdy", "smooth", "cheap", "comfortable", "flimsy", "excellent", "beautiful", "perfect", "decent"]
_ADV = ["really", "very", "quite", "easily", "definitely", "barely", "nicely"]
_FILLER = [
    "I bought this {n} for my husband and he uses it every day.",
    "My wife thinks the {n} is {a}.",
    "The {n} arrived {v} and the {n2} was {a}.",
    "We needed a {a} {n} for the office.",
    "It works {v} {a}, and the {n2} is {a2}.",
    "As a 45 year old woman I find the {n} {v} {a}.",
    "Amazon shipped the {n} in two days.",
]


def synthetic_dataset(n_users=60, n_items=40, reviews_per_user=8, seed=0, name="synthetic"):
    """Topic-structured corpus: users favour one topic, items belong to one."""
    rng = random.Random(seed)
    topics = sorted(_TOPICS)
    item_topic = {f"I{i:03d}": topics[i % len(topics)] for i in range(n_items)}
    by_topic = {t: [i for i, tt in item_topic.items() if tt == t] for t in topics}
    reviews = []
    ts = 1_300_000_000
    for u in range(n_users):
        fav = topics[u % len(topics)]
        for _ in range(reviews_per_user):
            topic = fav if rng.random() < 0.8 else rng.choice(topics)
            item = rng.choice(by_topic[topic])
            words = _TOPICS[topic]
            sents = []
            for _ in range(rng.randint(2, 5)):
                sents.append(rng.choice(_FILLER).format(
                    n=rng.choice(words), n2=rng.choice(words), a=rng.choice(_ADJ), a2=rng.choice(_ADJ), v=rng.choice(_ADV)))
            ts += rng.randint(1, 5000)
            reviews.append(Review(f"{len(reviews):09d}", f"U{u:03d}", item, float(rng.randint(1, 5)), ts, " ".join(sents)))
    return Dataset(tuple(reviews), name)


@pytest.fixture(scope="session")
def synth():
    return synthetic_dataset()


def dataset_path(env: str, *candidates: str) -> Path | None:
    value = os.environ.get(env)
    if value:
        return Path(value)
    root = Path(__file__).resolve().parent.parent / "data"
    for c in candidates:
        if (root / c).exists():
            return root / c
    return None
