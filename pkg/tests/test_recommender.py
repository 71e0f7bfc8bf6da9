import math
import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

import oracles
from minrev.corpus import Dataset
from minrev.recommender import (
    ItemProfile,
    UserHistory,
    build_item_profiles,
    cosine,
    mostpop_scores,
    rank,
    read_profiles,
    score,
    tfidf_profiles,
    write_profiles,
)
from minrev.textproc import Unaltered, WordTypeRemoval

from conftest import review


def counts(term_lists):
    return {i: Counter(ts) for i, ts in term_lists.items()}


def test_two_item_example():
    p = tfidf_profiles(counts({"A": ["chair"], "B": ["chair", "desk"]}))
    assert p["A"].vector == {}
    assert p["B"].vector == {"desk": pytest.approx(math.log(2))}


def test_single_item_corpus_empty():
    p = tfidf_profiles(counts({"A": ["chair", "chair", "desk"]}))
    assert p["A"].vector == {}


def test_three_item_oracle():
    lists = {"A": ["x", "x", "y"], "B": ["y", "z"], "C": ["z", "z", "z", "w"]}
    got = tfidf_profiles(counts(lists))
    want = oracles.tfidf(lists)
    for i in lists:
        assert got[i].vector.keys() == want[i].keys()
        for t in want[i]:
            assert got[i].vector[t] == pytest.approx(want[i][t], abs=1e-12)


def test_empty_text_items_get_empty_profile_and_do_not_count():
    lists = {"A": ["x"], "B": ["y"], "C": []}
    got = tfidf_profiles(counts(lists))
    assert got["C"].vector == {}
    assert got["A"].vector["x"] == pytest.approx(math.log(2))


def test_build_from_dataset():
    train = Dataset((
        review("r1", "u1", "A", 1, "The chairs are comfortable."),
        review("r2", "u2", "A", 2, "Comfortable chair!"),
        review("r3", "u1", "B", 3, "A beautiful desk."),
        review("r4", "u3", "C", 4, ""),
    ))
    p = build_item_profiles(train, Unaltered())
    # A: chair x2, comfort x2; B: sturdi, desk; C has no text; N = 2.
    assert p["A"].vector == {"chair": pytest.approx(2 * math.log(2)), "comfort": pytest.approx(2 * math.log(2))}
    assert set(p["B"].vector) == {"beauti", "desk"}
    assert p["C"].vector == {}
    wt = build_item_profiles(train, WordTypeRemoval())
    assert "chair" not in wt["A"].vector and "comfort" in wt["A"].vector


def P(item, **vec):
    return ItemProfile(item, vec)


def test_cosine_examples():
    v = P("a", x=1.0, y=2.0)
    assert cosine(v, v) == pytest.approx(1.0)
    assert cosine(P("a", x=1.0), P("b", y=1.0)) == 0.0
    assert cosine(P("a", x=1.0, y=1.0), P("b", y=1.0, z=1.0)) == pytest.approx(0.5)
    assert cosine(P("a"), v) == 0.0


def test_score_examples():
    profiles = {"i": P("i", x=1.0), "j": P("j", x=1.0, y=1.0), "k": P("k", y=3.0)}
    assert score(UserHistory("u", frozenset()), "i", profiles) == 0.0
    assert score(UserHistory("u", frozenset({"i"})), "i", profiles) == pytest.approx(1.0)
    a, b = frozenset({"j"}), frozenset({"k", "missing"})
    total = score(UserHistory("u", a | b), "i", profiles)
    assert total == pytest.approx(score(UserHistory("u", a), "i", profiles) + score(UserHistory("u", b), "i", profiles))


def test_rank_tiebreak_and_order():
    profiles = {"a": P("a", x=1.0), "b": P("b", y=1.0), "c": P("c", z=1.0), "h": P("h", y=1.0)}
    u = UserHistory("u", frozenset({"h"}))
    assert [i for i, _ in rank(u, ["c", "a"], profiles)] == ["a", "c"]
    assert [i for i, _ in rank(u, ["c", "b", "a"], profiles)] == ["b", "a", "c"]
    with pytest.raises(ValueError):
        rank(u, [], profiles)


def test_rank_matches_oracle_three_candidates():
    vectors = {"a": {"x": 2.0, "y": 1.0}, "b": {"y": 1.0, "z": 2.0}, "c": {"x": 1.0}, "h": {"x": 1.0, "z": 1.0}}
    profiles = {i: ItemProfile(i, v) for i, v in vectors.items()}
    u = UserHistory("u", frozenset({"h", "c"}))
    got = rank(u, ["a", "b", "c"], profiles)
    want = oracles.ranking(sorted(u.items), ["a", "b", "c"], vectors)
    assert [i for i, _ in got] == [i for i, _ in want]
    for (_, s1), (_, s2) in zip(got, want):
        assert s1 == pytest.approx(s2, abs=1e-12)


def test_mostpop():
    train = Dataset(tuple(review(f"r{n}", f"u{n}", "A" if n < 5 else "B", n) for n in range(7)))
    c = mostpop_scores(train)
    assert c["A"] == 5 and c["B"] == 2 and c["unseen"] == 0


sparse_vecs = st.dictionaries(st.sampled_from("abcdefghij"), st.floats(0.001, 100.0), max_size=8)


@given(sparse_vecs, sparse_vecs)
def test_cosine_symmetric_and_bounded(a, b):
    pa, pb = ItemProfile("a", a), ItemProfile("b", b)
    assert cosine(pa, pb) == pytest.approx(cosine(pb, pa), abs=1e-15)
    assert 0.0 <= cosine(pa, pb) <= 1.0


@given(st.dictionaries(st.sampled_from("pqrst"), sparse_vecs, min_size=2, max_size=5), st.floats(0.01, 1000.0))
def test_argmax_invariance_under_scaling(vectors, c):
    items = sorted(vectors)
    profiles = {i: ItemProfile(i, v) for i, v in vectors.items()}
    scaled = {i: ItemProfile(i, {t: w * c for t, w in v.items()}) for i, v in vectors.items()}
    u = UserHistory("u", frozenset(items[:1]))
    r1 = rank(u, items[1:], profiles)
    r2 = rank(u, items[1:], scaled)
    for (i1, s1), (i2, s2) in zip(r1, r2):
        assert s1 == pytest.approx(s2, abs=1e-9)
        if i1 != i2:
            assert abs(s1 - s2) <= 1e-9  # differing only inside a numerical tie


@given(st.dictionaries(st.sampled_from("pqrst"), sparse_vecs, min_size=2, max_size=5))
def test_score_monotone_in_history(vectors):
    profiles = {i: ItemProfile(i, v) for i, v in vectors.items()}
    items = sorted(vectors)
    target = items[0]
    history = frozenset()
    prev = 0.0
    for j in items[1:]:
        history = history | {j}
        s = score(UserHistory("u", history), target, profiles)
        assert s >= prev - 1e-12
        prev = s


def test_profile_file_roundtrip(tmp_path):
    profiles = {"i1": P("i1", **{"chair": 0.5, "1,000": 2.0, "10:30": 1.25}), "i2": P("i2")}
    path = tmp_path / "p.tsv"
    write_profiles(profiles, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("i1\t") and lines[1] == "i2\t"
    assert read_profiles(path) == profiles


@given(st.dictionaries(st.sampled_from("pqrstuvw"), sparse_vecs, min_size=3, max_size=8), st.randoms(use_true_random=False))
def test_score_additive_over_disjoint_histories(vectors, rnd):
    profiles = {i: ItemProfile(i, v) for i, v in vectors.items()}
    items = sorted(vectors)
    target, rest = items[0], items[1:] + ["no-profile"]
    rnd.shuffle(rest)
    cut = rnd.randrange(len(rest) + 1)
    a, b = frozenset(rest[:cut]), frozenset(rest[cut:])
    whole = score(UserHistory("u", a | b), target, profiles)
    parts = score(UserHistory("u", a), target, profiles) + score(UserHistory("u", b), target, profiles)
    assert whole == pytest.approx(parts, abs=1e-12)
