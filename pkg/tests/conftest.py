from __future__ import annotations

import json
import random

import pytest

from divkit.corpus import CaptionDataset, Sample

_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _ACCEPTANCE.append((name, report.outcome))
    elif report.when == "setup" and report.outcome == "skipped":
        _ACCEPTANCE.append((name, "skipped"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        label = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{label}: {name}")


def make_dataset(spec, name="toy") -> CaptionDataset:
    """spec: list of (id, split, [refs]) or (id, [refs]) with split=train."""
    samples = []
    for entry in spec:
        if len(entry) == 3:
            sid, split, refs = entry
        else:
            sid, refs = entry
            split = "train"
        samples.append(Sample(id=sid, split=split, references=tuple(refs)))
    return CaptionDataset(name=name, samples=tuple(samples))


def write_dataset(path, dataset: CaptionDataset) -> str:
    doc = dataset.to_document()
    path = str(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    return path


WORDS = ("man woman dog cat ball park car tree runs walks jumps plays eats "
         "sits red blue small big the a is on in with young old fast "
         "guitar piano street field water table").split()


def random_caption(rng: random.Random, min_len=3, max_len=8) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(min_len, max_len)))


def random_corpus(rng: random.Random, n_samples=8, min_refs=2, max_refs=4,
                  name="rand", split="train") -> CaptionDataset:
    samples = []
    for i in range(n_samples):
        refs = tuple(random_caption(rng)
                     for _ in range(rng.randint(min_refs, max_refs)))
        samples.append(Sample(id=f"s{i}", split=split, references=refs))
    return CaptionDataset(name=name, samples=tuple(samples))


@pytest.fixture
def rng():
    return random.Random(20240817)
