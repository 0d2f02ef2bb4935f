"""Norms, power-law fitting, the principal Dirichlet eigenvalue, and the
Fourier-side energy functional with its double-sum twin.

All reductions go through numpy's pairwise summation on arrays in a fixed
order, so results are identical across runs and thread counts.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .grids import Field
from .kernels import DiscreteKernel, fourier_symbol
from .operators import assemble_dirichlet_form


def lq_norm(field, q, spacing: float | None = None) -> float:
    """Discrete Lq norm: (sum |u|^q h^N)^{1/q}; q = inf gives the nodal max.

    Accepts a Field (interior values, grid spacing) or a plain array plus
    ``spacing``.
    """
    if isinstance(field, Field):
        values = field.interior
        h = field.grid.spacing
        dim = field.grid.dim
    else:
        values = np.asarray(field, dtype=float)
        if spacing is None:
            raise ValueError("plain arrays need an explicit spacing")
        h = float(spacing)
        dim = values.ndim
    if q == math.inf or q == "inf":
        return float(np.max(np.abs(values)))
    q = float(q)
    if q < 1.0:
        raise ValueError("q must be >= 1 or inf")
    return float(np.sum(np.abs(values) ** q) * h**dim) ** (1.0 / q)


def fit_power_law(times, values, window: tuple | None = None, min_samples: int = 5):
    """Least-squares line through (log t, log value); returns (exponent, intercept, residual).

    The window defaults to the last decade of the sampled times.  Values
    inside the window must be positive; the residual is the RMS misfit of the
    log-log line, which flags non-power-law data.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise ValueError("times and values must be matching 1D arrays")
    if window is None:
        window = (t[-1] / 10.0, t[-1])
    t1, t2 = window
    keep = (t >= t1) & (t <= t2)
    if int(np.sum(keep)) < min_samples:
        raise ValueError(f"need at least {min_samples} samples in the fit window")
    if np.any(v[keep] <= 0):
        raise ValueError("values in the fit window must be positive")
    lt = np.log(t[keep])
    lv = np.log(v[keep])
    n = lt.size
    mt = np.sum(lt) / n
    mv = np.sum(lv) / n
    dt = lt - mt
    slope = float(np.sum(dt * lv) / np.sum(dt * dt))
    intercept = float(mv - slope * mt)
    resid = float(np.sqrt(np.sum((lv - slope * lt - intercept) ** 2) / n))
    return slope, intercept, resid


def fit_exponential_rate(times, values, window: tuple | None = None, min_samples: int = 5):
    """Least-squares line through (t, log value); returns (rate, intercept, residual).

    Models value ~ exp(intercept + rate * t), the bounded-domain decay shape,
    where fit_power_law's log-log line would bend.  Window defaults to the
    second half of the sampled times.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise ValueError("times and values must be matching 1D arrays")
    if window is None:
        window = ((t[0] + t[-1]) / 2.0, t[-1])
    keep = (t >= window[0]) & (t <= window[1])
    if int(np.sum(keep)) < min_samples:
        raise ValueError(f"need at least {min_samples} samples in the fit window")
    if np.any(v[keep] <= 0):
        raise ValueError("values in the fit window must be positive")
    tt = t[keep]
    lv = np.log(v[keep])
    n = tt.size
    mt = np.sum(tt) / n
    mv = np.sum(lv) / n
    dt = tt - mt
    rate = float(np.sum(dt * lv) / np.sum(dt * dt))
    intercept = float(mv - rate * mt)
    resid = float(np.sqrt(np.sum((lv - rate * tt - intercept) ** 2) / n))
    return rate, intercept, resid


def lambda1(grid, dk: DiscreteKernel, tol: float = 1e-10, max_iter: int = 50000):
    """Smallest eigenvalue of the interior Dirichlet form, with eigenvector.

    Inverse power iteration on A = mass*I - K via a sparse LU factorization;
    A is symmetric positive definite (zero exterior extension leaks mass), so
    the iteration converges to the principal pair.  The eigenvector is
    normalized to unit Euclidean length and oriented nonnegative.
    """
    A = assemble_dirichlet_form(grid, dk)
    lu = spla.splu(A.tocsc())
    x = np.ones(A.shape[0])
    x /= np.linalg.norm(x)
    lam = float(x @ (A @ x))
    for _ in range(max_iter):
        y = lu.solve(x)
        y /= np.linalg.norm(y)
        lam_new = float(y @ (A @ y))
        done = abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-30)
        x, lam = y, lam_new
        if done:
            if x[np.argmax(np.abs(x))] < 0:
                x = -x
            return lam, x
    raise RuntimeError(f"inverse power iteration stagnated after {max_iter} sweeps")


def rayleigh_quotient(grid, dk: DiscreteKernel, vec: np.ndarray) -> float:
    A = assemble_dirichlet_form(grid, dk)
    v = np.asarray(vec, dtype=float).ravel()
    return float(v @ (A @ v)) / float(v @ v)


def double_energy(values: np.ndarray, dk: DiscreteKernel, periodic: bool = False) -> float:
    """Direct double sum h^N * sum_x sum_j w_j (u(x+z_j) - u(x))^2.

    ``periodic`` wraps shifts around the array; otherwise the field is
    extended by zero beyond its bounds (the whole-space convention).
    """
    u = np.asarray(values, dtype=float)
    if u.ndim != dk.dim:
        raise ValueError(f"field dimension {u.ndim} does not match kernel dimension {dk.dim}")
    h = dk.spacing
    if not periodic:
        pad = dk.radius_cells
        u = np.pad(u, pad)
    total = 0.0
    for off, w in zip(dk.offsets, dk.weights):
        if dk.dim == 1:
            shifted = np.roll(u, -int(off[0]))
            if not periodic and off[0] > 0:
                shifted[-off[0]:] = 0.0
            elif not periodic and off[0] < 0:
                shifted[: -off[0]] = 0.0
        else:
            shifted = np.roll(u, (-int(off[0]), -int(off[1])), axis=(0, 1))
            if not periodic:
                if off[0] > 0:
                    shifted[-off[0]:, :] = 0.0
                elif off[0] < 0:
                    shifted[: -off[0], :] = 0.0
                if off[1] > 0:
                    shifted[:, -off[1]:] = 0.0
                elif off[1] < 0:
                    shifted[:, : -off[1]] = 0.0
        total += w * float(np.sum((shifted - u) ** 2))
    return h**dk.dim * total


def dj_functional(values: np.ndarray, dk: DiscreteKernel) -> float:
    """Fourier-side energy (h^N / n^N) sum_k (mass - J_hat(k)) |U_k|^2 on a periodic grid.

    Equals half of double_energy(..., periodic=True) exactly (Plancherel plus
    the convolution theorem on the periodic lattice).
    """
    u = np.asarray(values, dtype=float)
    if u.ndim != dk.dim:
        raise ValueError("field/kernel dimension mismatch")
    n = u.shape[0]
    if u.ndim == 2 and u.shape[0] != u.shape[1]:
        raise ValueError("periodic analysis expects a square grid")
    symbol = fourier_symbol(dk, n)
    U = np.fft.fftn(u)
    weight = dk.spacing**dk.dim / u.size
    return weight * float(np.sum((dk.mass - symbol) * np.abs(U) ** 2))


def gns_ratio(values: np.ndarray, dk: DiscreteKernel) -> float:
    """double_energy divided by min(||u||_1^{-4/N} ||u||_2^{2+4/N}, ||u||_2^2).

    The sharp constant of the interpolation inequality is not explicit, so
    only the empirical ratio is reported; it must be positive for nonzero
    fields that decay inside the sampled box.
    """
    u = np.asarray(values, dtype=float)
    if not np.any(u):
        raise ValueError("gns_ratio needs a nonzero field")
    N = dk.dim
    h = dk.spacing
    l1 = lq_norm(u, 1, spacing=h)
    l2 = lq_norm(u, 2, spacing=h)
    bound = min(l1 ** (-4.0 / N) * l2 ** (2.0 + 4.0 / N), l2**2)
    return double_energy(u, dk, periodic=False) / bound


def energy_dissipation_gap(field: Field, rhs_interior: np.ndarray, dk: DiscreteKernel, theta: float = 0.0) -> tuple:
    """(d/dt ||u||_2^2, -(1 - theta) * energy) for a state and its rhs.

    The first entry is the exact semi-discrete derivative 2 h^N <u, rhs>; the
    inequality lhs <= rhs (up to slack) is the discrete energy estimate.
    """
    g = field.grid
    h = g.spacing**g.dim
    ddt = 2.0 * h * float(np.sum(field.interior * rhs_interior))
    zero_ext = np.zeros(g.full_shape)
    zero_ext[g.interior_slices] = field.interior
    energy = double_energy(zero_ext, dk, periodic=False)
    return ddt, -(1.0 - theta) * energy
