"""Review datasets: loading, serialisation, temporal splits and statistics."""
from __future__ import annotations

import csv
import dataclasses
import gzip
import io
import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .textproc.tokenize import is_punct, tokenize

__all__ = [
    "FORMATS",
    "DatasetError",
    "Review",
    "Dataset",
    "SplitBundle",
    "DatasetStats",
    "load_reviews",
    "save_reviews",
    "guess_format",
    "temporal_split",
    "dataset_stats",
]

FORMATS = ("amazon-json-lines", "csv")
CSV_HEADER = ["user_id", "item_id", "rating", "timestamp", "text"]


class DatasetError(ValueError):
    """A dataset file, record or configuration cannot be used."""


@dataclass(frozen=True, slots=True)
class Review:
    review_id: str
    user_id: str
    item_id: str
    rating: float
    timestamp: int
    text: str = ""


@dataclass(frozen=True)
class Dataset:
    """Ordered, immutable collection of reviews."""

    reviews: tuple[Review, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "reviews", tuple(self.reviews))
        ids = {r.review_id for r in self.reviews}
        if len(ids) != len(self.reviews):
            raise DatasetError(f"dataset {self.name!r}: review_id values are not unique")

    def __len__(self) -> int:
        return len(self.reviews)

    def __iter__(self) -> Iterator[Review]:
        return iter(self.reviews)

    @property
    def users(self) -> set[str]:
        return {r.user_id for r in self.reviews}

    @property
    def items(self) -> set[str]:
        return {r.item_id for r in self.reviews}

    def replace_texts(self, texts: Sequence[str], name: str | None = None) -> Dataset:
        if len(texts) != len(self.reviews):
            raise ValueError("one text per review required")
        reviews = tuple(dataclasses.replace(r, text=t) for r, t in zip(self.reviews, texts))
        return Dataset(reviews, self.name if name is None else name)


@dataclass(frozen=True)
class SplitBundle:
    train: Dataset
    validation: Dataset
    test: Dataset


@dataclass(frozen=True)
class DatasetStats:
    n_users: int
    n_items: int
    n_reviews: int
    density: float
    words_per_review: float
    words_per_user: float
    words_per_item: float


def guess_format(path: str | Path) -> str:
    name = str(path).lower().removesuffix(".gz")
    return "csv" if name.endswith(".csv") else "amazon-json-lines"


def _open_text(path: Path, mode: str = "rt"):
    if path.suffix == ".gz":
        return gzip.open(path, mode, encoding="utf-8", newline="")
    return open(path, mode, encoding="utf-8", newline="")


def _review_id(index: int) -> str:
    # Zero-padded so lexicographic order equals file order.
    return f"{index:09d}"


def _check(rating: float, timestamp: int, where: str) -> None:
    if not (1.0 <= rating <= 5.0) or math.isnan(rating):
        raise DatasetError(f"{where}: rating {rating} outside [1, 5]")
    if timestamp < 0:
        raise DatasetError(f"{where}: negative timestamp {timestamp}")


def _parse_json_lines(lines: Iterable[str], source: str) -> list[Review]:
    reviews = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        where = f"{source}:{lineno}"
        try:
            rec = json.loads(line)
            user, item = rec["reviewerID"], rec["asin"]
            rating = float(rec["overall"])
            timestamp = int(rec["unixReviewTime"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise DatasetError(f"{where}: malformed record ({exc.__class__.__name__}: {exc})") from None
        if not isinstance(user, str) or not isinstance(item, str) or not user or not item:
            raise DatasetError(f"{where}: reviewerID and asin must be non-empty strings")
        _check(rating, timestamp, where)
        text = rec.get("reviewText") or ""
        if not isinstance(text, str):
            raise DatasetError(f"{where}: reviewText must be a string")
        reviews.append(Review(_review_id(len(reviews)), user, item, rating, timestamp, text))
    return reviews


def _parse_csv(fh: io.TextIOBase, source: str) -> list[Review]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        return []
    if [h.strip() for h in header] != CSV_HEADER:
        raise DatasetError(f"{source}:1: expected header {','.join(CSV_HEADER)}, got {','.join(header)}")
    reviews = []
    for row in reader:
        where = f"{source}:{reader.line_num}"
        if not row:
            continue
        if len(row) == 4:
            row = row + [""]
        if len(row) != 5:
            raise DatasetError(f"{where}: expected 5 fields, got {len(row)}")
        user, item, rating_s, ts_s, text = row
        try:
            rating, timestamp = float(rating_s), int(ts_s)
        except ValueError as exc:
            raise DatasetError(f"{where}: malformed record ({exc})") from None
        if not user or not item:
            raise DatasetError(f"{where}: user_id and item_id must be non-empty")
        _check(rating, timestamp, where)
        reviews.append(Review(_review_id(len(reviews)), user, item, rating, timestamp, text))
    return reviews


def load_reviews(path: str | Path, format: str | None = None, name: str | None = None) -> Dataset:
    """Load an Amazon JSON-lines or CSV review file (optionally gzipped).

    Records keep their file order; a missing or null review text becomes "".
    """
    path = Path(path)
    format = format or guess_format(path)
    if format not in FORMATS:
        raise DatasetError(f"unknown dataset format {format!r}; expected one of {', '.join(FORMATS)}")
    if not path.exists():
        raise DatasetError(f"dataset file not found: {path}")
    with _open_text(path) as fh:
        if format == "csv":
            reviews = _parse_csv(fh, str(path))
        else:
            reviews = _parse_json_lines(fh, str(path))
    return Dataset(tuple(reviews), name if name is not None else path.name.split(".")[0])


def save_reviews(dataset: Dataset, path: str | Path, format: str | None = None) -> None:
    path = Path(path)
    format = format or guess_format(path)
    if format not in FORMATS:
        raise DatasetError(f"unknown dataset format {format!r}; expected one of {', '.join(FORMATS)}")
    with _open_text(path, "wt") as fh:
        if format == "csv":
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(CSV_HEADER)
            for r in dataset:
                writer.writerow([r.user_id, r.item_id, repr(r.rating), r.timestamp, r.text])
        else:
            for r in dataset:
                rec = {
                    "reviewerID": r.user_id,
                    "asin": r.item_id,
                    "overall": r.rating,
                    "unixReviewTime": r.timestamp,
                    "reviewText": r.text,
                }
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def temporal_split(dataset: Dataset, fractions: Sequence[float] = (0.6, 0.2, 0.2)) -> SplitBundle:
    """Global temporal split.

    All reviews are ordered by ``(timestamp, review_id)``; the first
    ``floor(f0 * n)`` go to train, the next ``floor(f1 * n)`` to validation and
    the rest to test.
    """
    if len(fractions) != 3 or any(f <= 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise DatasetError(f"split fractions must be three positive numbers summing to 1, got {tuple(fractions)}")
    if not len(dataset):
        raise DatasetError("cannot split an empty dataset")
    ordered = sorted(dataset, key=lambda r: (r.timestamp, r.review_id))
    n = len(ordered)
    n_train = math.floor(fractions[0] * n)
    n_val = math.floor(fractions[1] * n)
    name = dataset.name
    return SplitBundle(
        Dataset(tuple(ordered[:n_train]), f"{name}/train"),
        Dataset(tuple(ordered[n_train:n_train + n_val]), f"{name}/validation"),
        Dataset(tuple(ordered[n_train + n_val:]), f"{name}/test"),
    )


def _word_count(text: str) -> int:
    return sum(1 for t in tokenize(text) if not is_punct(t.surface))


def dataset_stats(dataset: Dataset, tokenizer=None) -> DatasetStats:
    """Corpus statistics.

    ``words_per_review`` and ``words_per_user`` are corpus totals divided by
    the review and user counts. ``words_per_item`` is the mean over items of
    that item's average review length. Words are non-punctuation tokens.
    """
    if tokenizer is None:
        count = _word_count
    else:
        def count(text):
            return sum(1 for t in tokenizer(text) if not is_punct(t.surface))

    n_reviews = len(dataset)
    if not n_reviews:
        return DatasetStats(0, 0, 0, 0.0, 0.0, 0.0, 0.0)
    users: Counter[str] = Counter()
    item_words: dict[str, list[int]] = defaultdict(lambda: [0, 0])
    total = 0
    for r in dataset:
        words = count(r.text)
        total += words
        users[r.user_id] += 1
        acc = item_words[r.item_id]
        acc[0] += words
        acc[1] += 1
    n_users, n_items = len(users), len(item_words)
    per_item = sum(w / c for w, c in item_words.values()) / n_items
    return DatasetStats(
        n_users=n_users,
        n_items=n_items,
        n_reviews=n_reviews,
        density=n_reviews / (n_users * n_items),
        words_per_review=total / n_reviews,
        words_per_user=total / n_users,
        words_per_item=per_item,
    )
