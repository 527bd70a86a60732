from __future__ import annotations

import json
import random
import shutil

import pytest

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


@pytest.fixture(scope="session")
def divkit_bin() -> str:
    path = shutil.which("divkit")
    if path is None:
        pytest.skip("divkit CLI not installed; the exporter aligns to it")
    return path


SLOTS = (
    "a the one".split(),
    "man woman dog kid group".split(),
    "runs walks jumps sits isn't".split(),
    "in on near".split(),
    "the park a field the street".split(),
)


def build_fixture(path, n_captions: int = 1000, refs_per_sample: int = 4):
    gen = random.Random(99)
    samples = []
    total = 0
    i = 0
    while total < n_captions:
        refs = []
        for _ in range(min(refs_per_sample, n_captions - total)):
            words = [gen.choice(slot) for slot in SLOTS]
            text = " ".join(words)
            if gen.random() < 0.1:
                text = text.capitalize() + "."
            refs.append(text)
            total += 1
        if gen.random() < 0.1 and len(refs) > 1:
            refs[-1] = refs[0]  # exact duplicate reference
        samples.append({"id": f"s{i}", "split": "train", "references": refs})
        i += 1
    doc = {"name": "fixture1000", "samples": samples}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    return str(path), total


@pytest.fixture(scope="session")
def fixture_dataset(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "fixture.json"
    return build_fixture(path)
