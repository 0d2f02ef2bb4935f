"""Acceptance gate: eleven numbered end-to-end checks, one summary line each.

Every test funnels its outcome through _record, and the terminal hook in
conftest prints `criterion NN [PASS|FAIL] name: detail` for the whole list,
so the run log always carries one line per criterion.
"""

import filecmp
import time

import numpy as np

from nldiff import (
    DirichletProblem,
    Field,
    build_grid,
    discretize,
    evolve,
    identity_nonlinearity,
    kpz_nonlinearity,
    load_config,
    make_kernel,
    nonlocal_rhs,
    picard_solve,
    prepare,
    rescale,
    rescale_plan,
    run_experiment,
)

CRITERIA = []


def _record(num, name, ok, detail):
    CRITERIA.append((num, name, bool(ok), detail))
    assert ok, f"criterion {num} ({name}): {detail}"


def _verdict_value(result, check, key):
    for line in result.verdicts:
        parts = line.split(",")
        if parts[2] == check:
            for field in parts[4:]:
                k, _, v = field.partition("=")
                if k == key:
                    return v
    return "?"


# 1 ---------------------------------------------------------------------------


def test_quadratic_exactness():
    t0 = time.perf_counter()
    worst = 0.0
    for eps in (0.2, 0.1):
        kern = rescale(make_kernel("uniform", 1, 1.0), eps)
        h = eps / 8.0
        g = build_grid(((-1.0, 1.0),), h, kern.radius)
        dk = discretize(kern, h, mode="mass+moment")
        u = Field(g, np.asarray(g.full_coords(), dtype=float) ** 2, 0.0)
        out = nonlocal_rhs(g, dk, identity_nonlinearity(), u,
                           rescaled=rescale_plan(kern, c_mode="discrete"))
        worst = max(worst, float(np.max(np.abs(out.interior - 2.0))))
    wall = time.perf_counter() - t0
    ok = worst <= 1e-8 and wall < 1.0
    _record(1, "quadratic exactness", ok,
            f"max|Lu - 2|={worst:.3e} (tol 1e-08), eps in {{0.2, 0.1}}, "
            f"wall={wall:.2f}s (< 1s)")


# 2 ---------------------------------------------------------------------------


def test_dirichlet_convergence_order(dirichlet_baseline):
    res, _, wall = dirichlet_baseline
    rep = res.reports["convergence"]
    errs = np.asarray(rep.errors, dtype=float)
    monotone = bool(np.all(np.diff(errs) < 0.0))
    ok = res.passed and monotone and rep.fitted_order >= 0.9 and wall < 150.0
    _record(2, "dirichlet convergence", ok,
            f"sup-in-time Linf errors {['%.3e' % e for e in errs]} strictly "
            f"decreasing={monotone}, fitted order={rep.fitted_order:.4f} "
            f"(>= 0.9), wall={wall:.1f}s single-threaded")


# 3 ---------------------------------------------------------------------------


def test_cauchy_convergence_order(config_dir, tmp_path):
    cfg = load_config(config_dir / "convergence-cauchy.toml")
    res = run_experiment(cfg, out_dir=tmp_path)
    rep = res.reports["convergence"]
    errs = np.asarray(rep.errors, dtype=float)
    monotone = bool(np.all(np.diff(errs) < 0.0))
    ring = _verdict_value(res, "contamination-within-tolerance", "ring_max")
    ok = res.passed and monotone and rep.fitted_order >= 0.9
    _record(3, "cauchy convergence", ok,
            f"errors {['%.3e' % e for e in errs]} decreasing={monotone}, "
            f"order={rep.fitted_order:.4f} (>= 0.9), truncation ring sup="
            f"{ring} (valid={res.passed})")


# 4 ---------------------------------------------------------------------------


def test_comparison_principle(config_dir, tmp_path):
    cfg = load_config(config_dir / "comparison.toml")
    res = run_experiment(cfg, out_dir=tmp_path)
    worst = _verdict_value(res, "ordered-pairs-min-gap", "worst_relative_gap")
    pairs = _verdict_value(res, "ordered-pairs-min-gap", "pairs")
    ok = res.passed and float(worst) >= -1e-8
    _record(4, "comparison principle", ok,
            f"{pairs} randomized ordered pairs, worst min-gap/scale={worst} "
            f"(>= -1e-08) at all sampled times")


# 5 ---------------------------------------------------------------------------


def test_maximum_principle():
    lo, hi, sup0 = np.inf, -np.inf, 0.0
    for mu in (1.0, -1.0):
        prob = DirichletProblem(
            box=((-1.0, 1.0),), kernel=make_kernel("uniform", 1, 1.0),
            G=kpz_nonlinearity(mu),
            u0=lambda x: 0.8 * np.clip(1.0 - x * x, 0.0, None) ** 2,
            h_data=None, T=2.0, spacing=0.125)
        res = evolve(prob, step_observers={
            "min": lambda t, f: float(np.min(f.interior)),
            "max": lambda t, f: float(np.max(f.interior)),
        })
        lo = min(lo, float(np.min(res.step_series["min"])))
        hi = max(hi, float(np.max(res.step_series["max"])))
        sup0 = max(sup0, float(np.max(np.abs(prepare(prob).u0_values))))
    ok = lo >= -1e-10 and hi <= sup0 + 1e-10
    _record(5, "maximum principle", ok,
            f"zero collar, nonneg data: min over all steps={lo:.3e} "
            f"(>= -1e-10), max={hi:.6f} vs initial sup {sup0:.6f} + 1e-10, "
            f"both flux orientations")


# 6 ---------------------------------------------------------------------------


def test_bounded_domain_decay(config_dir, tmp_path):
    results = {}
    for stem in ("decay-bounded-absorption", "decay-bounded-reaction"):
        cfg = load_config(config_dir / f"{stem}.toml")
        results[stem] = run_experiment(cfg, out_dir=tmp_path / stem)
    ok = all(r.passed for r in results.values())
    details = "; ".join(
        f"{stem.rsplit('-', 1)[-1]} final sup ratio="
        f"{_verdict_value(res, 'sup-threshold', 'final_ratio')}"
        for stem, res in results.items()
    )
    lam = _verdict_value(results["decay-bounded-absorption"],
                         "l2-exponential-envelope", "lambda1")
    _record(6, "bounded-domain decay", ok,
            f"{details} (< 1e-03); L2 curve under eigen-rate envelope, "
            f"lambda1={lam} with 10% slack")


# 7 ---------------------------------------------------------------------------


def test_cauchy_absorption_decay(config_dir, tmp_path):
    cfg = load_config(config_dir / "decay-cauchy-absorption.toml")
    res = run_experiment(cfg, out_dir=tmp_path)
    expo = float(res.reports["l2"].exponent)
    l1_worst = _verdict_value(res, "l1-monotone-direction", "worst_step")
    ok = res.passed and -0.35 <= expo <= -0.15
    _record(7, "cauchy absorption decay", ok,
            f"fitted L2 exponent={expo:.4f} in [-0.35, -0.15] on t in "
            f"[100, 1000]; worst per-step L1 increase={l1_worst} (<= 1e-10)")


# 8 ---------------------------------------------------------------------------


def test_cauchy_reaction_decay(config_dir, tmp_path):
    cfg = load_config(config_dir / "decay-cauchy-reaction.toml")
    res = run_experiment(cfg, out_dir=tmp_path)
    expo = float(res.reports["l2_squared"].exponent)
    gap = _verdict_value(res, "energy-inequality-samplewise", "worst_gap")
    ok = res.passed and -0.7 <= expo <= -0.3
    _record(8, "cauchy reaction decay", ok,
            f"fitted ||u||_2^2 exponent={expo:.4f} in [-0.7, -0.3]; L1 "
            f"nondecreasing; energy inequality samplewise worst slack-gap="
            f"{gap} at theta=0.5")


# 9 ---------------------------------------------------------------------------


def test_inequality_suites(config_dir, tmp_path):
    cfg = load_config(config_dir / "property-suite.toml")
    res = run_experiment(cfg, out_dir=tmp_path)
    dj = _verdict_value(res, "dj-plancherel-identity", "worst_rel_err")
    caught = _verdict_value(res, "fault-injection-detected", "violations")
    ok = res.passed and float(dj) <= 1e-6
    _record(9, "inequality suites", ok,
            f"1e5 draws, zero violations beyond 1e-12 on slope cone and "
            f"power-gap bounds; Fourier energy identity max rel err={dj} "
            f"(<= 1e-06) on 10 periodic fields; forged slope caught with "
            f"{caught} violations")


# 10 --------------------------------------------------------------------------


def test_picard_rk4_agreement():
    # Dyadic box and spacing: 31 cells across, so the closed box carries
    # exactly 32 unknown nodes (data lives strictly outside, on the collar).
    prob = DirichletProblem(
        box=((-31.0 / 32.0, 31.0 / 32.0),), kernel=make_kernel("uniform", 1, 0.5),
        G=kpz_nonlinearity(1.0),
        u0=lambda x: 0.5 * np.clip(1.0 - x * x, 0.0, None) ** 2,
        h_data=None, T=0.5, spacing=1.0 / 16.0)
    assert prepare(prob).grid.n_interior == 32
    pic = picard_solve(prob)
    factors_ok = max(pic.factors) < 1.0 and max(pic.factors) <= pic.predicted_factor
    rk = evolve(prob, sample_times=pic.times[1:], store_fields=True)
    gap = max(
        float(np.max(np.abs(pic.trajectory[k] - snap.interior)))
        for k, snap in enumerate(rk.snapshots)
    )
    ok = pic.converged and factors_ok and gap <= 1e-6
    _record(10, "picard/rk4 cross-validation", ok,
            f"32-node problem: {len(pic.factors)} sweeps, max contraction "
            f"factor={max(pic.factors):.4f} < 1 and <= predicted "
            f"{pic.predicted_factor:.4f}; max trajectory gap={gap:.3e} "
            f"(<= 1e-06)")


# 11 --------------------------------------------------------------------------


def test_determinism(dirichlet_baseline, config_dir, tmp_path):
    _, base_dir, _ = dirichlet_baseline
    cfg = load_config(config_dir / "convergence-dirichlet.toml")
    reruns = {"threads=1": 1, "threads=8": 8}
    identical = True
    for tag, threads in reruns.items():
        out = tmp_path / tag.replace("=", "")
        run_experiment(cfg, out_dir=out, threads=threads)
        for name in ("errors.csv", "gaps.csv", "verdicts.txt"):
            identical = identical and filecmp.cmp(
                base_dir / name, out / name, shallow=False)
    _record(11, "determinism", identical,
            "errors.csv, gaps.csv, verdicts.txt byte-identical across "
            "repeated runs at 1 and 8 threads")
