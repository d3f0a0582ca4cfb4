from __future__ import annotations

import json

import pytest

from reliefmatch.lexicons import data_path, load_default
from reliefmatch.pipeline import PipelineContext

_ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture(scope="session")
def lexicons():
    return load_default()


@pytest.fixture(scope="session")
def ctx():
    return PipelineContext.default("nepal")


@pytest.fixture(scope="session")
def italy_ctx():
    return PipelineContext.default("italy")


def load_fixture_jsonl(name: str) -> list[dict]:
    path = data_path(f"fixtures/{name}")
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


@pytest.fixture(scope="session")
def table1_posts():
    return load_fixture_jsonl("table1_posts.jsonl")


@pytest.fixture(scope="session")
def table1_pairs():
    return json.loads(data_path("fixtures/table1_pairs.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def table5_posts():
    return load_fixture_jsonl("table5_posts.jsonl")


@pytest.fixture(scope="session")
def table4_covert():
    return load_fixture_jsonl("table4_covert.jsonl")


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _ACCEPTANCE_RESULTS[name] = "PASS" if report.outcome == "passed" else report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{_ACCEPTANCE_RESULTS[name]:6s} {name}")
