"""Report containers for experiments, plus deterministic CSV/verdict emission.

All floating-point output goes through one formatter (%.17g) so repeated runs
with the same seed produce byte-identical files regardless of thread count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def fmt(x) -> str:
    """Canonical text form of a value for CSV and verdict lines."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def write_csv(path, header, rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def verdict_line(experiment_id: str, check: str, passed: bool, **numbers) -> str:
    """One machine-readable verdict: id, check, PASS/FAIL, key numbers."""
    tail = "".join(f",{k}={fmt(v)}" for k, v in numbers.items())
    return f"verdict,{experiment_id},{check},{'PASS' if passed else 'FAIL'}{tail}"


@dataclass(frozen=True)
class Check:
    """A single named pass/fail observation with its key numbers."""

    name: str
    passed: bool
    observed: dict = field(default_factory=dict)
    note: str = ""


@dataclass
class PropertyReport:
    """Outcome of a property/sampling suite: a list of checks, pass iff all pass."""

    title: str
    checks: list = field(default_factory=list)

    def add(self, name: str, passed: bool, note: str = "", **observed) -> None:
        self.checks.append(Check(name, bool(passed), dict(observed), note))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def n_failed(self) -> int:
        return sum(not c.passed for c in self.checks)

    def verdict_lines(self, experiment_id: str) -> list:
        lines = [
            verdict_line(experiment_id, c.name, c.passed, **c.observed) for c in self.checks
        ]
        lines.append(
            verdict_line(
                experiment_id, "all", self.passed, checks=len(self.checks), failed=self.n_failed
            )
        )
        return lines


@dataclass
class ConvergenceReport:
    """Errors of a kernel-scale sweep against a reference solution."""

    epsilons: list
    errors: list
    fitted_order: float
    monotone: bool
    runtimes: list = field(default_factory=list)

    def __post_init__(self):
        eps = np.asarray(self.epsilons, dtype=float)
        err = np.asarray(self.errors, dtype=float)
        if eps.size != err.size or eps.size < 2:
            raise ValueError("sweep needs matching epsilon/error lists with >= 2 entries")
        if not np.all(np.diff(eps) < 0):
            raise ValueError("epsilons must be strictly decreasing")
        if not np.all(np.isfinite(err)):
            raise ValueError("sweep errors must be finite")

    def rows(self):
        rt = self.runtimes if self.runtimes else [float("nan")] * len(self.epsilons)
        return list(zip(self.epsilons, self.errors, rt))


@dataclass
class DecayReport:
    """A decaying observable with a power-law fit on a late time window."""

    observable: str
    q: float
    times: np.ndarray
    values: np.ndarray
    window: tuple
    exponent: float
    intercept: float
    residual: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        t1, t2 = self.window
        if not (t1 >= t.min() and t2 <= t.max() and t1 < t2):
            raise ValueError("fit window must lie within the sampled time range")
        inside = (t >= t1) & (t <= t2)
        if not np.all(v[inside] > 0):
            raise ValueError("observable must be positive inside the fit window")

    def rows(self):
        return list(zip(self.times, self.values))


@dataclass
class ExperimentResult:
    """What one harness experiment produced: reports, verdicts, CSV files."""

    experiment_id: str
    passed: bool
    verdicts: list
    reports: dict = field(default_factory=dict)
    csv_files: list = field(default_factory=list)
