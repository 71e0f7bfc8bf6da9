"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL``/``BLOCKED`` line that is printed in
the terminal summary. Criteria that need the Amazon 5-core files look for
them in ``$MINREV_OFFICE`` / ``$MINREV_HEALTH`` or under ``data/`` and are
reported BLOCKED (skipped) when absent.
"""
import random
import re
import subprocess
import sys
from collections import Counter
from pathlib import Path

import pytest

import oracles
from conftest import ACCEPTANCE_LINES, PERSONAL_REVIEW, PERSONAL_TERMS, dataset_path, synthetic_dataset
from minrev import kernels
from minrev.corpus import Dataset, Review, dataset_stats, load_reviews
from minrev.evaluation import ContentScorer, EvalCase, RandomScorer, build_cases, evaluate
from minrev.experiment import ExperimentConfig, run_evaluate
from minrev.recommender import UserHistory, cosine, rank, score, tfidf_profiles
from minrev.textproc import RandomRemoval, WordTypeRemoval, default_lexicon, mask_tokens, removal_fraction, tokenize

OFFICE = ("reviews_Office_Products_5.json.gz", "reviews_Office_Products_5.json", "Office_Products_5.json.gz")
HEALTH = ("reviews_Health_and_Personal_Care_5.json.gz", "reviews_Health_and_Personal_Care_5.json", "Health_and_Personal_Care_5.json.gz")


def record(number, status, detail):
    ACCEPTANCE_LINES.append(f"[{status}] criterion {number}: {detail}")


def check(number, ok, detail):
    record(number, "PASS" if ok else "FAIL", detail)
    assert ok, detail


def require(number, env, names, what):
    path = dataset_path(env, *names)
    if path is None or not Path(path).exists():
        record(number, "BLOCKED", f"{what}: dataset unavailable (set ${env} or place {names[0]} in data/)")
        pytest.skip(f"{what} dataset unavailable")
    return path


# 1 -------------------------------------------------------------------------

@pytest.mark.dataset
def test_criterion_1_office_statistics():
    path = require(1, "MINREV_OFFICE", OFFICE, "Office Products statistics")
    s = dataset_stats(load_reviews(path, name="Office"))
    counts_ok = (s.n_users, s.n_items, s.n_reviews) == (4905, 2420, 53258)
    density_ok = f"{100 * s.density:.3g}" == "0.449"
    words = {"per review": (s.words_per_review, 145.51), "per user": (s.words_per_user, 1579.92), "per item": (s.words_per_item, 145.24)}
    words_ok = all(abs(got - want) <= 0.10 * want for got, want in words.values())
    detail = (
        f"users={s.n_users} items={s.n_items} reviews={s.n_reviews} density={100 * s.density:.3f}% "
        + " ".join(f"words {k}={g:.2f} (target {w}±10%)" for k, (g, w) in words.items())
    )
    check(1, counts_ok and density_ok and words_ok, detail)


# 2 -------------------------------------------------------------------------

def test_criterion_2_random_removal_half():
    # Size the corpus so the estimate is far tighter than the ±2% band.
    d = synthetic_dataset(n_users=200, n_items=60, reviews_per_user=10, seed=11)
    fracs = {seed: removal_fraction(d, RandomRemoval(0.5, seed)) for seed in (0, 1, 2)}
    ok = all(abs(f - 0.5) <= 0.02 for f in fracs.values())
    check("2 (random)", ok, "random removal fraction " + ", ".join(f"seed {k}: {v:.4f}" for k, v in fracs.items()) + " (target 0.50±0.02)")


@pytest.mark.dataset
def test_criterion_2_wordtype_removal_office():
    office = load_reviews(require("2 (wordtype)", "MINREV_OFFICE", OFFICE, "Office Products removal"), name="Office")
    wt = removal_fraction(office, WordTypeRemoval())
    rr = removal_fraction(office, RandomRemoval(0.5, 0))
    check("2 (wordtype)", 0.60 <= wt <= 0.80 and abs(rr - 0.5) <= 0.02,
          f"Office word-type removal {wt:.4f} (target 0.60-0.80), random {rr:.4f} (target 0.50±0.02)")


# 3 -------------------------------------------------------------------------

def test_criterion_3_random_baseline():
    rng = random.Random(3)
    catalog = [f"item{n:05d}" for n in range(3000)]
    reviews = []
    ts = 0
    for u in range(2500):
        for _ in range(rng.randint(1, 6)):
            ts += 1
            reviews.append(Review(f"{len(reviews):09d}", f"user{u:05d}", rng.choice(catalog), 5.0, ts))
    n_train = len(reviews) // 2
    train = Dataset(tuple(reviews[:n_train]), "train")
    test = Dataset(tuple(reviews[n_train:]), "test")
    cases = build_cases(test, train, catalog, k=100, seed=0)
    assert len(cases) >= 2000 and all(len(c.items) == 101 for c in cases)
    rep = evaluate(cases, RandomScorer(seed=0), cutoff=10)
    check(3, abs(rep.recall_at_n - 10 / 101) <= 0.010,
          f"random scorer Recall@10={rep.recall_at_n:.4f} over {rep.n_cases} cases (target 0.0990±0.010)")


# 4 -------------------------------------------------------------------------

def _rows(run):
    return {s: rep for _, s, rep in run.rows}


@pytest.mark.dataset
def test_criterion_4_health_ordering(tmp_path):
    path = require(4, "MINREV_HEALTH", HEALTH, "Health and Personal Care ordering")
    run = run_evaluate(ExperimentConfig(str(path), strategies=("unaltered", "random", "wordtype"), out=str(tmp_path)))
    r = _rows(run)
    un, wt, rr = r["unaltered"], r["wordtype"], r["random"]
    metrics = ("mrr", "recall_at_n", "hit_rate_at_n")
    wt_better = all(getattr(wt, m) > getattr(un, m) for m in metrics)
    rr_close = all(abs(getattr(rr, m) - getattr(un, m)) <= 0.02 for m in metrics)
    detail = " ".join(f"{name}=({rep.mrr:.4f},{rep.recall_at_n:.4f},{rep.hit_rate_at_n:.4f})" for name, rep in r.items())
    check("4 (Health)", wt_better and rr_close, f"(MRR,Recall@10,HitRate@10) {detail}; wordtype>unaltered={wt_better} random within 0.02={rr_close}")


@pytest.mark.dataset
def test_criterion_4_office_beats_mostpop(tmp_path):
    path = require(4, "MINREV_OFFICE", OFFICE, "Office Products vs MostPop")
    run = run_evaluate(ExperimentConfig(str(path), strategies=("unaltered", "random", "wordtype"), out=str(tmp_path)))
    r = _rows(run)
    pop = r["mostpop"].mrr
    content = {s: r[s].mrr for s in ("unaltered", "random", "wordtype")}
    check("4 (Office)", all(v > pop for v in content.values()),
          f"MostPop MRR={pop:.4f}; " + " ".join(f"{s}={v:.4f}" for s, v in content.items()))


# 5 -------------------------------------------------------------------------

def _random_corpus(rng):
    n_items = rng.randint(1, 10)
    vocab = [f"t{n}" for n in range(rng.randint(1, 50))]
    lists = {}
    for n in range(n_items):
        length = 0 if rng.random() < 0.1 else rng.randint(1, 30)
        lists[f"i{n}"] = [rng.choice(vocab) for _ in range(length)]
    return lists


def test_criterion_5_oracle_equivalence():
    rng = random.Random(5)
    tol = 1e-12
    worst = {"weight": 0.0, "cosine": 0.0, "score": 0.0}
    rank_mismatch = 0
    kernel_mismatch = {b: 0 for b in kernels.BACKENDS}
    for trial in range(1000):
        lists = _random_corpus(rng)
        profiles = tfidf_profiles({i: Counter(ts) for i, ts in lists.items()})
        want = oracles.tfidf(lists)
        assert {i: set(p.vector) for i, p in profiles.items()} == {i: set(v) for i, v in want.items()}, trial
        for i, vec in want.items():
            for t, w in vec.items():
                worst["weight"] = max(worst["weight"], abs(profiles[i].vector[t] - w))
        items = sorted(lists)
        for a in items:
            for b in items:
                worst["cosine"] = max(worst["cosine"], abs(cosine(profiles[a], profiles[b]) - oracles.cos(want[a], want[b])))
        history = sorted(rng.sample(items, rng.randint(0, len(items))))
        user = UserHistory("u", frozenset(history))
        for i in items:
            worst["score"] = max(worst["score"], abs(score(user, i, profiles) - oracles.score(history, i, want)))
        got_order = [i for i, _ in rank(user, items, profiles)]
        if got_order != [i for i, _ in oracles.ranking(history, items, want)]:
            rank_mismatch += 1
        if len(items) >= 2:
            cases = []
            for n, target in enumerate(items):
                others = [i for i in items if i != target]
                rng.shuffle(others)
                cases.append(EvalCase("u", target, tuple(others), n))
            expected = [oracles.target_rank(history, c.target_item, c.candidates, want) for c in cases]
            for b in kernels.BACKENDS:
                got = ContentScorer(profiles, {"u": user}, backend=b).ranks(cases).tolist()
                kernel_mismatch[b] += got != expected
    ok = all(v <= tol for v in worst.values()) and rank_mismatch == 0 and not any(kernel_mismatch.values())
    detail = (
        "1000 trials; max abs diff " + " ".join(f"{k}={v:.2e}" for k, v in worst.items())
        + f" (tol 1e-12); ranking mismatches={rank_mismatch}; kernel mismatches "
        + " ".join(f"{b}={n}" for b, n in kernel_mismatch.items())
    )
    check(5, ok, detail)


# 6 -------------------------------------------------------------------------

INVARIANT_TESTS = {
    "split partition/monotonicity": ["tests/test_corpus.py::test_split_partition_and_monotonic"],
    "minimization idempotence": ["tests/test_minimize.py::test_wordtype_idempotent"],
    "masking idempotence and span-locality": ["tests/test_masking.py::test_masking_idempotent_and_local"],
    "cosine symmetry/range": ["tests/test_recommender.py::test_cosine_symmetric_and_bounded"],
    "score additivity": ["tests/test_recommender.py::test_score_additive_over_disjoint_histories"],
    "argmax invariance under scaling": ["tests/test_recommender.py::test_argmax_invariance_under_scaling"],
    "Recall=HitRate with one case per user": ["tests/test_evaluation.py::test_recall_equals_hit_rate_with_one_case_per_user"],
    "byte-identical reruns": [
        "tests/test_cli.py::test_evaluate_writes_reproducible_outputs",
        "tests/test_evaluation.py::test_repeat_evaluation_identical",
        "tests/test_evaluation.py::test_random_scorer_deterministic",
        "tests/test_minimize.py::test_random_removal_is_per_review_deterministic",
    ],
}


def test_criterion_6_invariant_suites():
    root = Path(__file__).resolve().parent.parent
    failed = []
    for name, ids in INVARIANT_TESTS.items():
        proc = subprocess.run(
            [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *ids],
            cwd=root, capture_output=True, text=True,
        )
        passed = re.search(r"(\d+) passed", proc.stdout)
        if proc.returncode != 0 or not passed or int(passed.group(1)) != len(ids):
            failed.append(name)
    check(6, not failed, f"{len(INVARIANT_TESTS)} invariant suites" + (f"; failing: {', '.join(failed)}" if failed else " all green"))


# 7 -------------------------------------------------------------------------

def test_criterion_7_masking_fidelity():
    tokens = tokenize(PERSONAL_REVIEW)
    lower = PERSONAL_REVIEW.lower()
    spans = []
    for term in PERSONAL_TERMS:
        start = lower.find(term)
        assert start >= 0, term
        spans.append((start, start + len(term)))

    def inside(tok):
        return any(tok.start < e and tok.end > s for s, e in spans)

    masked = mask_tokens(tokens, default_lexicon())
    text = " ".join(t.surface for t in masked).lower()
    leaked = [t for t in PERSONAL_TERMS if t in text]
    other = [(t.start, t.surface) for t in tokens if not inside(t)]
    kept = {(t.start, t.surface) for t in masked}
    retained = sum(1 for o in other if o in kept) / len(other)
    check(7, not leaked and retained >= 0.90,
          f"leaked terms={leaked or 'none'}; other tokens retained {retained:.1%} of {len(other)} (target >= 90%)")
