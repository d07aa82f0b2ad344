"""Shared synthetic fixtures.

The synthetic reference mimics a realistic name-popularity shape: a long
singleton tail, mid-frequency classes, and a couple of dominant names, with
457 distinct names overall so sparse-sample behaviour is representative.
"""

import csv

import numpy as np
import pytest

from namefit.corpus import (
    FrequencyDistribution,
    Gender,
    OccurrenceRecord,
    OriginCategory,
    Region,
)

# (frequency, number of names) classes of the synthetic reference.
SYNTHETIC_CLASSES = [
    (1, 160),
    (2, 100),
    (3, 60),
    (5, 50),
    (10, 40),
    (25, 30),
    (60, 10),
    (150, 5),
    (300, 2),
]

CSV_HEADER = (
    "person_id,name,gender,region,date_start,date_end,"
    "fictitious,nickname,exclude_category,origin,source_tag"
)


def synthetic_counts() -> dict[str, int]:
    counts = {}
    i = 0
    for frequency, n_names in SYNTHETIC_CLASSES:
        for _ in range(n_names):
            counts[f"n{i:04d}"] = frequency
            i += 1
    return counts


@pytest.fixture(scope="session")
def synthetic_reference() -> FrequencyDistribution:
    return FrequencyDistribution.from_counts(synthetic_counts())


_ORIGINS = list(OriginCategory)


def origin_for(name: str) -> OriginCategory:
    return _ORIGINS[sum(name.encode()) % len(_ORIGINS)]


def reference_records(source_tag: str = "ref") -> list[OccurrenceRecord]:
    """One record per synthetic reference occurrence, all male Palestinian,
    dated inside [-4, 73]."""
    records = []
    person = 0
    for name, count in synthetic_counts().items():
        for _ in range(count):
            records.append(
                OccurrenceRecord(
                    person_id=f"p{person:05d}",
                    name=name,
                    gender=Gender.MALE,
                    region=Region.PALESTINE,
                    date_start=-4,
                    date_end=73,
                    origin=origin_for(name),
                    source_tag=source_tag,
                )
            )
            person += 1
    return records


def sample_records(
    reference: FrequencyDistribution,
    n: int,
    seed: int,
    source_tag: str = "test",
) -> list[OccurrenceRecord]:
    """Multinomial sample of n occurrences from the reference's name
    probabilities, as standalone records (drawn-name origins carried over)."""
    names = sorted(reference.counts)
    probs = np.array([reference.counts[name] for name in names], dtype=float)
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(n, probs)
    records = []
    person = 0
    for name, count in zip(names, draws):
        for _ in range(count):
            records.append(
                OccurrenceRecord(
                    person_id=f"{source_tag}-{person:05d}",
                    name=name,
                    gender=Gender.MALE,
                    region=Region.PALESTINE,
                    date_start=-4,
                    date_end=73,
                    origin=origin_for(name),
                    source_tag=source_tag,
                )
            )
            person += 1
    return records


def record_to_row(record: OccurrenceRecord) -> list[str]:
    return [
        record.person_id,
        record.name,
        record.gender.value,
        record.region.value,
        "" if record.date_start is None else str(record.date_start),
        "" if record.date_end is None else str(record.date_end),
        "true" if record.fictitious else "false",
        "true" if record.nickname else "false",
        record.exclude_category or "",
        record.origin.value if record.origin else "",
        record.source_tag,
    ]


def write_corpus_csv(path, records) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER.split(","))
        for record in records:
            writer.writerow(record_to_row(record))
