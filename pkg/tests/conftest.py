from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ctm2 import data
from ctm2.scoring import Assessment
from ctm2.model import MaturityModel
from ctm2.workspace import Workspace, load_workspace


@pytest.fixture(scope="session")
def bundled_workspace() -> Workspace:
    """The packaged case-study workspace, loaded read-only."""
    return load_workspace(data.casestudy_workspace_root())


@pytest.fixture(scope="session")
def study_model(bundled_workspace) -> MaturityModel:
    return bundled_workspace.catalogs["icsctm2-casestudy"]


@pytest.fixture(scope="session")
def powercyber(bundled_workspace) -> Assessment:
    return bundled_workspace.assessments["powercyber"]


@pytest.fixture()
def casestudy_root(tmp_path) -> Path:
    """A writable copy of the case-study workspace."""
    return data.materialize_casestudy(tmp_path / "ws")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" in nodeid:
                outcomes[nodeid] = "PASS" if status == "passed" else "FAIL"
    if outcomes:
        terminalreporter.write_sep("-", "acceptance criteria")
        for nodeid in sorted(outcomes):
            name = nodeid.split("::")[-1]
            terminalreporter.write_line(f"{outcomes[nodeid]}  {name}")
