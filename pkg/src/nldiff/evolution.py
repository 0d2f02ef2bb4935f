"""Time integration of the nonlocal problems: explicit steppers and Picard.

Dirichlet problems march interior values while the collar is refreshed from
the exterior data at every stage time; the truncated whole-space problem is
the same march with a zero collar plus a contamination monitor on the
outermost kernel-radius ring of interior nodes.

The Picard path iterates the integral fixed-point map
v -> u0 + cumulative-integral of rhs(v) on a uniform time grid (trapezoid
quadrature) under the weighted norm max_t e^{-M t} ||.||_L1, mirroring the
contraction construction rather than the ODE view.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .grids import Field, Grid, build_grid
from .kernels import discretize
from .nonlinearity import Nonlinearity
from .operators import RescalePlan, StencilOperator, rescale_plan


class EvolutionBlowupError(RuntimeError):
    """Integration aborted on NaN/overflow; carries the last valid time."""

    def __init__(self, t_last: float, message: str = ""):
        super().__init__(message or f"state became non-finite after t={t_last:.6g}")
        self.t_last = t_last


class PicardDivergenceError(RuntimeError):
    """Two consecutive non-contracting sweeps; carries the factor history."""

    def __init__(self, factors, residuals):
        super().__init__(
            "picard iteration stopped contracting "
            f"(last factors {[f'{f:.3g}' for f in factors[-2:]]})"
        )
        self.factors = list(factors)
        self.residuals = list(residuals)


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "rk4"  # "euler" | "rk4" | "picard"
    cfl_safety: float = 0.25
    dt: float | None = None  # explicit override, must respect stable_dt
    picard_m: float | None = None  # weight M; default 2 * lipschitz bound
    picard_tol: float = 1e-10
    picard_max_sweeps: int = 60
    picard_ntime: int = 64
    picard_quadrature: str = "trapezoid"

    def __post_init__(self):
        if self.method not in ("euler", "rk4", "picard"):
            raise ValueError(f"unknown integrator {self.method!r}")
        if not 0.0 < self.cfl_safety <= 1.0:
            raise ValueError("cfl_safety must be in (0, 1]")
        if self.picard_tol <= 0:
            raise ValueError("picard tolerance must be positive")
        if self.picard_quadrature != "trapezoid":
            raise ValueError("only trapezoid time quadrature is implemented")


@dataclass(frozen=True)
class DirichletProblem:
    """Bounded-domain problem: interior data u0, exterior (collar) data h."""

    box: tuple
    kernel: object  # KernelSpec | RescaledKernel
    G: Nonlinearity
    u0: object  # callable(x) -> values on the closed box
    h_data: object = None  # callable(x, t) -> collar values; None means 0
    T: float = 1.0
    spacing: float | None = None
    K_pts: int | None = None
    rescale_mode: str | None = None  # None | "analytic" | "discrete"

    def __post_init__(self):
        _check_resolution_fields(self)


@dataclass(frozen=True)
class CauchyProblem:
    """Whole-space problem truncated to [-L, L]^N with zero exterior extension."""

    half_width: float
    kernel: object
    G: Nonlinearity
    u0: object
    T: float = 1.0
    spacing: float | None = None
    K_pts: int | None = None
    rescale_mode: str | None = None
    contamination_tol: float = 1e-3
    dim: int = 1

    def __post_init__(self):
        _check_resolution_fields(self)
        if self.half_width <= self.kernel.radius:
            raise ValueError("truncation half-width must exceed the kernel radius")

    @property
    def box(self):
        return tuple((-self.half_width, self.half_width) for _ in range(self.kernel.dim))


def _check_resolution_fields(problem) -> None:
    if (problem.spacing is None) == (problem.K_pts is None):
        raise ValueError("specify exactly one of spacing or K_pts")
    if problem.rescale_mode not in (None, "analytic", "discrete"):
        raise ValueError(f"unknown rescale mode {problem.rescale_mode!r}")
    if not problem.T > 0:
        raise ValueError("horizon T must be positive")


def suggested_half_width(T: float, kernel) -> float:
    """Truncation rule of thumb: diffusive scale sqrt(2T) plus 5 kernel radii.

    A minimum, not an optimum: initial data with slow tails need more room,
    and the contamination monitor is the actual validity check.
    """
    return math.sqrt(2.0 * T) + 5.0 * kernel.radius


@dataclass
class _System:
    """A problem lowered onto a concrete grid: operator, data samplers, monitors."""

    grid: Grid
    dk: object
    op: StencilOperator
    collar_at: object  # callable(t) -> flat collar values
    u0_values: np.ndarray  # full-lattice initial state
    u0_sup: float
    ring_flat: np.ndarray | None  # flat full-lattice indices of the monitor ring
    contamination_tol: float | None
    collar_ix: tuple  # advanced-index arrays for collar assignment


def prepare(problem) -> _System:
    kernel = problem.kernel
    h = problem.spacing if problem.spacing is not None else kernel.radius / problem.K_pts
    grid = build_grid(problem.box, h, kernel.radius)
    mode = "mass+moment" if problem.rescale_mode == "discrete" else "mass"
    dk = discretize(kernel, h, mode=mode)
    plan = None
    if problem.rescale_mode is not None:
        plan = rescale_plan(kernel, c_mode=problem.rescale_mode)
    op = StencilOperator(grid, dk, problem.G, plan)

    full_coords = grid.full_coords()
    collar_mask = grid.collar_mask()
    collar_ix = np.nonzero(collar_mask)
    collar_coords = full_coords[collar_mask]

    h_data = getattr(problem, "h_data", None)
    if h_data is None:
        zeros = np.zeros(collar_coords.shape[0])

        def collar_at(t, _z=zeros):
            return _z

    else:

        def collar_at(t, _c=collar_coords, _h=h_data):
            return np.broadcast_to(np.asarray(_h(_c, t), dtype=float), (_c.shape[0],))

    u0_values = np.zeros(grid.full_shape)
    interior_coords = grid.interior_coords()
    u0_values[grid.interior_slices] = np.broadcast_to(
        np.asarray(problem.u0(interior_coords), dtype=float), grid.interior_shape
    )
    u0_values[collar_ix] = collar_at(0.0)
    if not np.all(np.isfinite(u0_values)):
        raise ValueError("initial data is not finite on the lattice")
    u0_sup = float(np.max(np.abs(u0_values)))

    ring_flat = None
    tol = None
    if isinstance(problem, CauchyProblem):
        tol = problem.contamination_tol
        radius = kernel.radius
        inner = np.zeros(grid.interior_shape, dtype=bool)
        for axis in range(grid.dim):
            x = grid.axis_coords(axis)
            a, b = grid.box[axis]
            near = (x <= a + radius + 1e-12) | (x >= b - radius - 1e-12)
            shape = [1] * grid.dim
            shape[axis] = len(x)
            inner |= near.reshape(shape)
        full_mask = np.zeros(grid.full_shape, dtype=bool)
        full_mask[grid.interior_slices] = inner
        ring_flat = np.nonzero(full_mask.ravel())[0]

    return _System(
        grid=grid,
        dk=dk,
        op=op,
        collar_at=collar_at,
        u0_values=u0_values,
        u0_sup=u0_sup,
        ring_flat=ring_flat,
        contamination_tol=tol,
        collar_ix=collar_ix,
    )


def stable_dt(problem, integrator: IntegratorConfig | None = None, system: _System | None = None) -> float:
    """cfl_safety / L where L = 2 * alpha2 * max scale * stencil mass.

    L bounds the rhs Lipschitz constant, so explicit steps of this size keep
    the Euler update monotone; for rescaled problems it scales like eps^2.
    """
    integrator = integrator or IntegratorConfig()
    sys_ = system or prepare(problem)
    return integrator.cfl_safety / sys_.op.lipschitz_bound


@dataclass
class EvolveResult:
    final: Field
    sample_times: np.ndarray
    series: dict
    snapshots: list | None
    contaminated: bool
    ring_max: float
    n_steps: int
    dt_max: float
    step_times: np.ndarray | None = None
    step_series: dict = dc_field(default_factory=dict)


def _step_plan(sample_times, T):
    times = np.asarray(sample_times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("sample_times must be a nonempty 1D array")
    if np.any(times < 0) or np.any(np.diff(times) <= 0):
        raise ValueError("sample_times must be strictly increasing and nonnegative")
    if times[-1] > T * (1 + 1e-12):
        raise ValueError("sample_times exceed the problem horizon")
    if times[0] != 0.0:
        times = np.concatenate([[0.0], times])
    return times


def evolve(
    problem,
    integrator: IntegratorConfig | None = None,
    observers: dict | None = None,
    sample_times=None,
    step_observers: dict | None = None,
    store_fields: bool = False,
) -> EvolveResult:
    """March the problem to its horizon, sampling observers on a schedule.

    Observers are callables (t, Field) -> float evaluated at each sample time
    on the live state (no copy); ``step_observers`` are sampled after every
    accepted step instead.  Raises EvolutionBlowupError on NaN/overflow; a
    contamination breach on truncated problems only flags the result invalid.
    """
    integrator = integrator or IntegratorConfig()
    if integrator.method not in ("euler", "rk4"):
        raise ValueError("evolve drives the explicit steppers; use picard_solve for picard")
    observers = observers or {}
    step_observers = step_observers or {}
    system = prepare(problem)
    dt_cap = stable_dt(problem, integrator, system)
    if integrator.dt is not None:
        if integrator.dt > dt_cap * (1 + 1e-12):
            raise ValueError(
                f"dt override {integrator.dt:.3g} exceeds the stability bound {dt_cap:.3g}"
            )
        dt_cap = integrator.dt
    times = _step_plan(
        np.linspace(0.0, problem.T, 11) if sample_times is None else sample_times,
        problem.T,
    )

    grid = system.grid
    op = system.op
    sl = grid.interior_slices
    state = system.u0_values.copy()
    scratch = state.copy()
    collar_cache = {"t": 0.0, "vals": system.collar_at(0.0)}

    def rhs_at(t, interior_vals):
        if collar_cache["t"] != t:
            collar_cache["t"] = t
            collar_cache["vals"] = system.collar_at(t)
        scratch[system.collar_ix] = collar_cache["vals"]
        scratch[sl] = interior_vals
        return op.rhs(scratch)

    euler = integrator.method == "euler"
    series = {name: [] for name in observers}
    step_series = {name: [] for name in step_observers}
    step_times = [] if step_observers else None
    snapshots = [] if store_fields else None
    contaminated = False
    ring_max = 0.0
    n_steps = 0

    def sample(t):
        nonlocal contaminated, ring_max
        state[system.collar_ix] = system.collar_at(t)
        fld = Field(grid, state, t)
        for name, fn in observers.items():
            series[name].append(float(fn(t, fld)))
        if store_fields:
            snapshots.append(Field(grid, state.copy(), t))
        if system.ring_flat is not None:
            peak = float(np.max(np.abs(state.ravel()[system.ring_flat])))
            ring_max = max(ring_max, peak)
            if peak > system.contamination_tol * max(system.u0_sup, 1e-300):
                contaminated = True

    def record_step(t):
        if step_observers:
            step_times.append(t)
            fld = Field(grid, state, t)
            for name, fn in step_observers.items():
                step_series[name].append(float(fn(t, fld)))

    sample(times[0])
    record_step(times[0])
    y = state[sl].copy()
    t = times[0]
    for t_target in times[1:]:
        span = t_target - t
        n_sub = max(1, int(math.ceil(span / dt_cap - 1e-12)))
        dt = span / n_sub
        for _ in range(n_sub):
            if euler:
                y += dt * rhs_at(t, y)
            else:
                k1 = rhs_at(t, y)
                k2 = rhs_at(t + 0.5 * dt, y + (0.5 * dt) * k1)
                k3 = rhs_at(t + 0.5 * dt, y + (0.5 * dt) * k2)
                k4 = rhs_at(t + dt, y + dt * k3)
                y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += dt
            n_steps += 1
            if not np.all(np.isfinite(y)):
                raise EvolutionBlowupError(t - dt)
            state[sl] = y
            record_step(t)
        t = t_target
        state[sl] = y
        sample(t)

    state[sl] = y
    state[system.collar_ix] = system.collar_at(times[-1])
    return EvolveResult(
        final=Field(grid, state.copy(), times[-1]),
        sample_times=times,
        series={k: np.asarray(v) for k, v in series.items()},
        snapshots=snapshots,
        contaminated=contaminated,
        ring_max=ring_max,
        n_steps=n_steps,
        dt_max=dt_cap,
        step_times=None if step_times is None else np.asarray(step_times),
        step_series={k: np.asarray(v) for k, v in step_series.items()},
    )


@dataclass
class PicardResult:
    times: np.ndarray
    trajectory: np.ndarray  # (n_t + 1, *interior_shape)
    grid: Grid
    residuals: list
    factors: list
    M: float
    c_tilde: float
    predicted_factor: float
    converged: bool
    n_sweeps: int


def picard_contraction_bound(c_tilde: float, M: float, dtau: float) -> float:
    """Exact sweep-contraction bound for trapezoid quadrature of the memory integral.

    The continuum bound is c_tilde / M; the trapezoid sum of e^{M tau} inflates
    it to c_tilde * dtau * (1 + e^{M dtau}) / (2 (e^{M dtau} - 1)).
    """
    q = math.exp(M * dtau)
    return c_tilde * dtau * (1.0 + q) / (2.0 * (q - 1.0))


def picard_solve(problem, integrator: IntegratorConfig | None = None) -> PicardResult:
    """Iterate the integral fixed-point map to the weighted-norm tolerance.

    Each sweep evaluates the rhs along the current trajectory and rebuilds it
    from the initial data by cumulative trapezoid quadrature, with collar
    values pinned to the exterior data.  Contraction factors are reported per
    sweep and must stay below 1; two consecutive non-contracting sweeps raise
    PicardDivergenceError.
    """
    integrator = integrator or IntegratorConfig(method="picard")
    system = prepare(problem)
    grid = system.grid
    sl = grid.interior_slices
    n_t = integrator.picard_ntime
    times = np.linspace(0.0, problem.T, n_t + 1)
    dtau = times[1] - times[0]
    c_tilde = system.op.lipschitz_bound
    M = integrator.picard_m if integrator.picard_m is not None else 2.0 * c_tilde
    predicted = picard_contraction_bound(c_tilde, M, dtau)
    e_weights = np.exp(-M * times)
    h_meas = grid.spacing**grid.dim

    # Full-lattice trajectory with collar pinned once (data never changes).
    traj = np.empty((n_t + 1,) + grid.full_shape)
    for i, tau in enumerate(times):
        traj[i] = system.u0_values
        traj[i][system.collar_ix] = system.collar_at(tau)
    u0_int = system.u0_values[sl].copy()

    residuals: list = []
    factors: list = []
    converged = False
    sweeps = 0
    rhs_buf = np.empty((n_t + 1,) + grid.interior_shape)
    for sweeps in range(1, integrator.picard_max_sweeps + 1):
        for i in range(n_t + 1):
            rhs_buf[i] = system.op.rhs(traj[i])
        # Cumulative trapezoid: I_i = I_{i-1} + dtau/2 (F_{i-1} + F_i).
        increments = 0.5 * dtau * (rhs_buf[:-1] + rhs_buf[1:])
        cumulative = np.concatenate(
            [np.zeros((1,) + grid.interior_shape), np.cumsum(increments, axis=0)], axis=0
        )
        new_int = u0_int[None] + cumulative
        diff = new_int - traj[(slice(None),) + sl]
        axes = tuple(range(1, diff.ndim))
        resid = float(np.max(e_weights * h_meas * np.sum(np.abs(diff), axis=axes)))
        residuals.append(resid)
        traj[(slice(None),) + sl] = new_int
        if len(residuals) >= 2 and residuals[-2] > 0:
            factors.append(residuals[-1] / residuals[-2])
        if resid < integrator.picard_tol:
            converged = True
            break
        if len(factors) >= 2 and factors[-1] >= 1.0 and factors[-2] >= 1.0:
            raise PicardDivergenceError(factors, residuals)
        if not np.all(np.isfinite(new_int)):
            raise EvolutionBlowupError(times[-1], "picard sweep produced non-finite values")

    return PicardResult(
        times=times,
        trajectory=traj[(slice(None),) + sl].copy(),
        grid=grid,
        residuals=residuals,
        factors=factors,
        M=M,
        c_tilde=c_tilde,
        predicted_factor=predicted,
        converged=converged,
        n_sweeps=sweeps,
    )


@dataclass
class ComparisonResult:
    times: np.ndarray
    gap_series: np.ndarray  # per-sample min over interior of (super - sub)
    min_gap: float


def evolve_comparison_pair(
    problem_sub,
    problem_super,
    integrator: IntegratorConfig | None = None,
    sample_times=None,
) -> ComparisonResult:
    """Evolve ordered data with identical integrator settings; track min(v - u).

    The caller guarantees u0 <= v0 nodewise and ordered collar data; the
    returned gap series is the discrete comparison-principle observable.
    """
    integrator = integrator or IntegratorConfig()
    dt = min(
        stable_dt(problem_sub, integrator),
        stable_dt(problem_super, integrator),
    )
    if integrator.dt is not None:
        dt = min(dt, integrator.dt)
    shared = IntegratorConfig(
        method=integrator.method, cfl_safety=integrator.cfl_safety, dt=dt
    )
    if sample_times is None:
        sample_times = np.linspace(0.0, problem_sub.T, 11)
    res_sub = evolve(problem_sub, shared, sample_times=sample_times, store_fields=True)
    res_super = evolve(problem_super, shared, sample_times=sample_times, store_fields=True)
    gaps = np.array(
        [
            float(np.min(fs.interior - fu.interior))
            for fu, fs in zip(res_sub.snapshots, res_super.snapshots)
        ]
    )
    return ComparisonResult(
        times=np.asarray(sample_times, dtype=float),
        gap_series=gaps,
        min_gap=float(np.min(gaps)),
    )
