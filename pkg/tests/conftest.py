"""Shared fixtures: repo paths and the single-threaded convergence baseline.

The Dirichlet convergence run is the most expensive fixture and three tests
need its artifacts (the sweep gates, the runtime gate, and the byte-level
determinism comparison), so it runs once per session.
"""

import time
from pathlib import Path

import pytest

import nldiff as nd

REPO_ROOT = Path(__file__).resolve().parents[1]
CONFIG_DIR = REPO_ROOT / "configs"


@pytest.fixture(scope="session")
def config_dir() -> Path:
    return CONFIG_DIR


@pytest.fixture(scope="session")
def dirichlet_baseline(tmp_path_factory):
    """Run the Dirichlet sweep once, single-threaded, and keep its artifacts.

    Returns (result, out_dir, wall_seconds).
    """
    cfg = nd.load_config(CONFIG_DIR / "convergence-dirichlet.toml")
    out = tmp_path_factory.mktemp("dirichlet-baseline")
    t0 = time.perf_counter()
    result = nd.run_experiment(cfg, out_dir=out, threads=1)
    wall = time.perf_counter() - t0
    return result, out, wall


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # One pass/fail line per acceptance criterion, emitted after the run so
    # the lines survive pytest's per-test capture.
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not getattr(mod, "CRITERIA", None):
        return
    tw = terminalreporter
    tw.section("acceptance criteria")
    seen = {}
    for num, name, passed, detail in mod.CRITERIA:
        seen[num] = (name, passed, detail)
    for num in range(1, 12):
        if num in seen:
            name, passed, detail = seen[num]
            word = "PASS" if passed else "FAIL"
            tw.write_line(f"criterion {num:2d} [{word}] {name}: {detail}")
        else:
            tw.write_line(f"criterion {num:2d} [NOT RUN]")
