"""Occurrence-record ingestion, filtering, and distribution building.

An occurrence is one attachment of a name to a unique person; how often the
text mentions that person is irrelevant. All types here are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import csv
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .distributions import RandomSource
from .errors import DataError

logger = logging.getLogger(__name__)


class Gender(str, Enum):
    MALE = "male"
    FEMALE = "female"
    UNKNOWN = "unknown"


class Region(str, Enum):
    PALESTINE = "palestine"
    WESTERN_DIASPORA = "western_diaspora"
    EASTERN_DIASPORA = "eastern_diaspora"
    OTHER = "other"
    UNKNOWN = "unknown"


class OriginCategory(str, Enum):
    """Linguistic origin of a name. Exactly eight base categories; Semitic
    (Hebrew + Greek) exists only as a merged relabeling, never on records."""

    BIBLICAL = "Biblical"
    GREEK = "Greek"
    LATIN = "Latin"
    PERSIAN = "Persian"
    EGYPTIAN = "Egyptian"
    ARABIAN = "Arabian"
    SEMITIC_HEBREW = "SemiticHebrew"
    SEMITIC_GREEK = "SemiticGreek"


MERGED_SEMITIC = "Semitic"


class DatePolicy(str, Enum):
    INCLUSIVE = "inclusive"
    EXCLUSIVE = "exclusive"


@dataclass(frozen=True)
class DateWindow:
    """Year window with signed years and no year zero ([-4, 73] means
    4 BCE through 73 CE)."""

    start: int
    end: int
    policy: DatePolicy = DatePolicy.INCLUSIVE

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise DataError(f"window start {self.start} exceeds end {self.end}")


@dataclass(frozen=True)
class OccurrenceRecord:
    person_id: str
    name: str
    gender: Gender = Gender.UNKNOWN
    region: Region = Region.UNKNOWN
    date_start: int | None = None
    date_end: int | None = None
    fictitious: bool = False
    nickname: bool = False
    exclude_category: str | None = None
    origin: OriginCategory | None = None
    source_tag: str = ""

    def __post_init__(self) -> None:
        if not self.person_id:
            raise DataError("person_id must be nonempty")
        if not self.name:
            raise DataError("name must be nonempty")
        if (
            self.date_start is not None
            and self.date_end is not None
            and self.date_start > self.date_end
        ):
            raise DataError(
                f"inverted date range: {self.date_start} > {self.date_end}"
            )


@dataclass(frozen=True)
class FrequencyDistribution:
    """Map from canonical name to occurrence count. Treat as immutable."""

    counts: dict[str, int]
    total: int
    distinct: int

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "FrequencyDistribution":
        for name, count in counts.items():
            if not name:
                raise DataError("distribution contains an empty name")
            if not isinstance(count, int) or count < 1:
                raise DataError(f"count for {name!r} must be a positive integer, got {count!r}")
        return cls(counts=dict(counts), total=sum(counts.values()), distinct=len(counts))

    def frequency(self, name: str) -> int:
        return self.counts.get(name, 0)


@dataclass(frozen=True)
class OriginDistribution:
    """Occurrence counts per origin category. All base categories are always
    present as keys, zeros retained; `merged` marks the Semitic relabeling."""

    counts: dict[str, int]
    total: int
    merged: bool = False

    @property
    def categories(self) -> tuple[str, ...]:
        return tuple(self.counts)


CSV_COLUMNS = (
    "person_id",
    "name",
    "gender",
    "region",
    "date_start",
    "date_end",
    "fictitious",
    "nickname",
    "exclude_category",
    "origin",
    "source_tag",
)


@dataclass(frozen=True)
class RowRejection:
    row: int
    reason: str


@dataclass(frozen=True)
class LoadResult:
    records: tuple[OccurrenceRecord, ...]
    rejections: tuple[RowRejection, ...]

    @property
    def clean(self) -> bool:
        return not self.rejections


def _parse_year(raw: str, column: str) -> int | None:
    if raw == "":
        return None
    try:
        year = int(raw)
    except ValueError:
        raise DataError(f"{column} is not an integer year: {raw!r}")
    if year == 0:
        raise DataError(f"{column} uses year zero, which does not exist")
    return year


def _parse_bool(raw: str, column: str) -> bool:
    if raw == "":
        return False
    if raw == "true":
        return True
    if raw == "false":
        return False
    raise DataError(f"{column} must be 'true' or 'false', got {raw!r}")


def _parse_row(row: dict[str, str]) -> OccurrenceRecord:
    gender_raw = row["gender"]
    try:
        gender = Gender(gender_raw) if gender_raw else Gender.UNKNOWN
    except ValueError:
        raise DataError(
            f"unknown gender {gender_raw!r}; valid: {', '.join(g.value for g in Gender)}"
        )
    region_raw = row["region"]
    try:
        region = Region(region_raw) if region_raw else Region.UNKNOWN
    except ValueError:
        raise DataError(
            f"unknown region {region_raw!r}; valid: {', '.join(r.value for r in Region)}"
        )
    origin_raw = row["origin"]
    try:
        origin = OriginCategory(origin_raw) if origin_raw else None
    except ValueError:
        raise DataError(
            f"unknown origin {origin_raw!r}; valid: "
            f"{', '.join(o.value for o in OriginCategory)}"
        )
    return OccurrenceRecord(
        person_id=row["person_id"],
        name=row["name"],
        gender=gender,
        region=region,
        date_start=_parse_year(row["date_start"], "date_start"),
        date_end=_parse_year(row["date_end"], "date_end"),
        fictitious=_parse_bool(row["fictitious"], "fictitious"),
        nickname=_parse_bool(row["nickname"], "nickname"),
        exclude_category=row["exclude_category"] or None,
        origin=origin,
        source_tag=row["source_tag"],
    )


def load_corpus(path: str | Path) -> LoadResult:
    """Load an occurrence corpus CSV.

    Every row becomes a record or a structured rejection; nothing is dropped
    silently. A header that does not match the documented schema is a load
    failure, not a rejection.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"corpus file not found: {path}")
    records: list[OccurrenceRecord] = []
    rejections: list[RowRejection] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"corpus file is empty: {path}")
        if tuple(header) != CSV_COLUMNS:
            raise DataError(
                f"corpus header mismatch in {path}: expected "
                f"{','.join(CSV_COLUMNS)}, got {','.join(header)}"
            )
        for row_number, row in enumerate(reader, start=2):
            if len(row) != len(CSV_COLUMNS):
                rejections.append(
                    RowRejection(row_number, f"expected {len(CSV_COLUMNS)} fields, got {len(row)}")
                )
                continue
            try:
                records.append(_parse_row(dict(zip(CSV_COLUMNS, row))))
            except DataError as exc:
                rejections.append(RowRejection(row_number, str(exc)))
    return LoadResult(tuple(records), tuple(rejections))


def _dates_pass(record: OccurrenceRecord, window: DateWindow) -> bool:
    start, end = record.date_start, record.date_end
    if window.policy is DatePolicy.EXCLUSIVE:
        return (
            start is not None
            and end is not None
            and window.start <= start
            and end <= window.end
        )
    # Inclusive: keep unless the record can be shown not to intersect the
    # window; an absent endpoint is unbounded on that side.
    if start is not None and start > window.end:
        return False
    if end is not None and end < window.start:
        return False
    return True


def filter_records(
    records: Iterable[OccurrenceRecord],
    window: DateWindow,
    gender: Gender | None = None,
    region: Region | None = None,
    include_fictitious: bool = False,
    include_nicknames: bool = False,
    exclusions: frozenset[str] | set[str] = frozenset(),
) -> list[OccurrenceRecord]:
    """Apply the dating-window, demographic, flag, and category filters
    conjunctively. An empty result is valid."""
    kept = []
    for record in records:
        if not _dates_pass(record, window):
            continue
        if gender is not None and record.gender is not gender:
            continue
        if region is not None and record.region is not region:
            continue
        if record.fictitious and not include_fictitious:
            continue
        if record.nickname and not include_nicknames:
            continue
        if record.exclude_category is not None and record.exclude_category in exclusions:
            continue
        kept.append(record)
    return kept


def build_frequency_distribution(
    records: Iterable[OccurrenceRecord],
) -> FrequencyDistribution:
    """One occurrence per distinct (person_id, name) pair; repeated rows for
    the same pair collapse, a person bearing two names yields two."""
    seen: set[tuple[str, str]] = set()
    counts: Counter[str] = Counter()
    for record in records:
        key = (record.person_id, record.name)
        if key in seen:
            continue
        seen.add(key)
        counts[record.name] += 1
    return FrequencyDistribution(dict(counts), sum(counts.values()), len(counts))


def build_origin_distribution(
    records: Iterable[OccurrenceRecord],
    merge_semitic: bool = False,
) -> OriginDistribution:
    """Occurrence counts per origin category over distinct (person, name)
    pairs. Records lacking an origin are logged and skipped; if none carry
    one, that is an error."""
    seen: set[tuple[str, str]] = set()
    counts: Counter[str] = Counter()
    skipped = 0
    for record in records:
        key = (record.person_id, record.name)
        if key in seen:
            continue
        seen.add(key)
        if record.origin is None:
            skipped += 1
            continue
        counts[record.origin.value] += 1
    if not counts:
        raise DataError("no origin data: no record carries an origin category")
    if skipped:
        logger.warning("skipped %d occurrences lacking an origin category", skipped)
    full = {category.value: counts.get(category.value, 0) for category in OriginCategory}
    if merge_semitic:
        merged = {
            category: count
            for category, count in full.items()
            if category
            not in (OriginCategory.SEMITIC_HEBREW.value, OriginCategory.SEMITIC_GREEK.value)
        }
        merged[MERGED_SEMITIC] = (
            full[OriginCategory.SEMITIC_HEBREW.value]
            + full[OriginCategory.SEMITIC_GREEK.value]
        )
        full = merged
    return OriginDistribution(full, sum(full.values()), merged=merge_semitic)


@dataclass(frozen=True)
class SubtractionResult:
    """Outcome of removing a test sample's occurrences from a reference.

    `violations` maps each name whose test count exceeded its reference count
    to the excess; any violation clamps that name at zero and makes the
    result inexact.
    """

    distribution: FrequencyDistribution
    violations: dict[str, int] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return not self.violations


def subtract_sample(
    reference: FrequencyDistribution, test: FrequencyDistribution
) -> SubtractionResult:
    """Remove the test sample's occurrences from the reference, name by name,
    so the two distributions are independent."""
    counts = dict(reference.counts)
    violations: dict[str, int] = {}
    for name, test_count in test.counts.items():
        ref_count = counts.get(name, 0)
        if test_count > ref_count:
            violations[name] = test_count - ref_count
            logger.warning(
                "subtraction clamps %r at zero: test count %d exceeds reference count %d",
                name, test_count, ref_count,
            )
        remaining = max(ref_count - test_count, 0)
        if name in counts:
            if remaining == 0:
                del counts[name]
            else:
                counts[name] = remaining
    return SubtractionResult(
        FrequencyDistribution(counts, sum(counts.values()), len(counts)),
        violations,
    )


def generate_uniform_sample(
    records: Sequence[OccurrenceRecord],
    draw_size: int,
    rng: RandomSource,
    source_tag: str = "uniform",
) -> list[OccurrenceRecord]:
    """Draw `draw_size` distinct names uniformly without replacement from the
    distinct names in `records`, one synthetic occurrence each. Gender,
    region, and origin are carried over from the first record bearing each
    name so origin analyses stay possible."""
    by_name: dict[str, OccurrenceRecord] = {}
    for record in records:
        by_name.setdefault(record.name, record)
    names = sorted(by_name)
    if draw_size > len(names):
        raise DataError(
            f"draw size {draw_size} exceeds the {len(names)} distinct names available"
        )
    picked = rng.generator().choice(len(names), size=draw_size, replace=False)
    sample = []
    for i, name_index in enumerate(sorted(picked.tolist())):
        template = by_name[names[name_index]]
        sample.append(
            OccurrenceRecord(
                person_id=f"{source_tag}-{i:04d}",
                name=template.name,
                gender=template.gender,
                region=template.region,
                origin=template.origin,
                source_tag=source_tag,
            )
        )
    return sample


def distribution_rows(counts: Mapping[str, int]) -> list[tuple[str, int]]:
    """Rows sorted by count descending then name ascending (export order)."""
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


def write_distribution_csv(counts: Mapping[str, int], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(("name", "count"))
        writer.writerows(distribution_rows(counts))


def read_distribution_csv(path: str | Path) -> FrequencyDistribution:
    path = Path(path)
    if not path.exists():
        raise DataError(f"distribution file not found: {path}")
    counts: dict[str, int] = {}
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(header) != ("name", "count"):
            raise DataError(f"distribution header must be name,count in {path}")
        for row_number, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise DataError(f"{path}:{row_number}: expected 2 fields, got {len(row)}")
            name, raw = row
            try:
                count = int(raw)
            except ValueError:
                raise DataError(f"{path}:{row_number}: count is not an integer: {raw!r}")
            if name in counts:
                raise DataError(f"{path}:{row_number}: duplicate name {name!r}")
            counts[name] = count
    return FrequencyDistribution.from_counts(counts)
