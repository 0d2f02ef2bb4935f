"""Convolution kernels: admissible profiles, rescaling, and lattice discretization.

A kernel J is a nonnegative, radial, compactly supported probability density
on R^N (N = 1 or 2) with finite directional second moment
C(J) = integral of J(z) * z_N^2.  Profiles form a closed set so that mass and
second moment have closed forms; arbitrary user callables are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

PROFILES = ("uniform", "bump", "triangle")

RENORM_MODES = ("raw", "mass", "mass+moment")


class ResolutionError(ValueError):
    """Kernel support is not resolved by the requested grid spacing."""


def _as_radius(z: np.ndarray, dim: int) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if dim == 1:
        return np.abs(z)
    if z.shape[-1] != dim:
        raise ValueError(f"expected points with trailing dimension {dim}, got shape {z.shape}")
    return np.sqrt(np.sum(z * z, axis=-1))


def _profile_shape(profile: str, r: np.ndarray, radius: float) -> np.ndarray:
    """Unnormalized radial shape, closed support (boundary points included)."""
    inside = r <= radius
    if profile == "uniform":
        return inside.astype(float)
    if profile == "bump":
        s = np.where(inside, r / radius, 1.0)
        return np.where(inside, (1.0 - s * s) ** 2, 0.0)
    if profile == "triangle":
        return np.where(inside, 1.0 - r / radius, 0.0)
    raise ValueError(f"unknown profile {profile!r}")


# (normalization, second moment) for unit radius; scale by radius afterwards.
_UNIT_CONSTANTS = {
    ("uniform", 1): (0.5, 1.0 / 3.0),
    ("uniform", 2): (1.0 / math.pi, 0.25),
    ("bump", 1): (15.0 / 16.0, 1.0 / 7.0),
    ("bump", 2): (3.0 / math.pi, 0.125),
    ("triangle", 1): (1.0, 1.0 / 6.0),
}


@dataclass(frozen=True)
class KernelSpec:
    """An admissible kernel: radial profile, support radius, unit mass.

    Attributes
    ----------
    profile : str
        One of ``uniform`` (indicator of the closed ball), ``bump``
        ((1 - |z/rho|^2)^2 inside the ball) or ``triangle`` (1 - |z|/rho,
        one-dimensional only).
    dim : int
        Spatial dimension, 1 or 2.
    radius : float
        Support radius rho.
    normalization : float
        Scalar multiplying the profile shape so the total mass is 1.
    second_moment : float
        C(J), the integral of J(z) z_N^2 over R^N.
    """

    profile: str
    dim: int
    radius: float
    normalization: float
    second_moment: float

    @property
    def mass(self) -> float:
        return 1.0

    def __call__(self, z) -> np.ndarray:
        """Evaluate J pointwise; ``z`` is scalar/array in 1D, (..., dim) stacked in 2D."""
        r = _as_radius(z, self.dim)
        return self.normalization * _profile_shape(self.profile, r, self.radius)


@dataclass(frozen=True)
class RescaledKernel:
    """J_eps(z) = eps^{-N} J(z / eps): mass 1, support eps*rho, moment eps^2 C(J)."""

    base: KernelSpec
    epsilon: float

    @property
    def profile(self) -> str:
        return self.base.profile

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def radius(self) -> float:
        return self.epsilon * self.base.radius

    @property
    def mass(self) -> float:
        return 1.0

    @property
    def second_moment(self) -> float:
        return self.epsilon**2 * self.base.second_moment

    def __call__(self, z) -> np.ndarray:
        scale = self.epsilon ** (-self.dim)
        return scale * self.base(np.asarray(z, dtype=float) / self.epsilon)


def make_kernel(profile: str, dim: int, radius: float) -> KernelSpec:
    """Construct an admissible kernel.

    Parameters
    ----------
    profile : str
        One of ``uniform``, ``bump``, ``triangle``.
    dim : int
        1 or 2 (``triangle`` is 1D only).
    radius : float
        Support radius, > 0.
    """
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")
    if dim not in (1, 2):
        raise ValueError(f"unsupported dimension {dim}; only 1 and 2 are implemented")
    if not radius > 0:
        raise ValueError(f"support radius must be positive, got {radius}")
    key = (profile, dim)
    if key not in _UNIT_CONSTANTS:
        raise ValueError(f"profile {profile!r} is not available in dimension {dim}")
    unit_norm, unit_moment = _UNIT_CONSTANTS[key]
    # Mass scales like radius^dim, the directional moment like radius^2.
    return KernelSpec(
        profile=profile,
        dim=dim,
        radius=float(radius),
        normalization=unit_norm / radius**dim,
        second_moment=unit_moment * radius**2,
    )


def second_moment(kernel) -> float:
    """C(J) of a KernelSpec or RescaledKernel."""
    return kernel.second_moment


def rescale(kernel: KernelSpec, epsilon: float) -> RescaledKernel:
    """Rescaled kernel J_eps; ``epsilon`` must be positive."""
    if not isinstance(kernel, KernelSpec):
        raise TypeError("rescale expects a base KernelSpec")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return RescaledKernel(base=kernel, epsilon=float(epsilon))


@dataclass(frozen=True)
class DiscreteKernel:
    """Quadrature weights of a kernel on a uniform lattice.

    ``offsets`` are integer lattice offsets (n, dim); ``weights`` are the
    corresponding quadrature weights h^N J(z_j), optionally renormalized.
    ``second_moment`` is C_h(J) = sum of w_j (z_j . e_N)^2 computed from the
    final weights; the rescaled operator may use it instead of the analytic
    moment to cancel the O(h^2) quadrature bias.
    """

    offsets: np.ndarray
    weights: np.ndarray
    spacing: float
    dim: int
    mode: str
    mass: float
    second_moment: float
    radius_cells: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "offsets", np.asarray(self.offsets, dtype=np.int64))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        self.offsets.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def points(self) -> np.ndarray:
        """Physical offsets z_j = h * offsets."""
        return self.spacing * self.offsets.astype(float)

    def to_csv(self, path) -> None:
        """Dump (offset components, weight) rows for debugging."""
        with open(path, "w") as fh:
            cols = ",".join(f"offset{i}" for i in range(self.dim))
            fh.write(f"{cols},weight\n")
            for off, w in zip(self.offsets.reshape(len(self.weights), -1), self.weights):
                fh.write(",".join(str(int(o)) for o in off) + f",{w:.17g}\n")


def _exact_unit_sum(w: np.ndarray) -> np.ndarray:
    """Scale weights to sum to 1.0 bit-exactly (largest-entry defect fixup)."""
    w = w / w.sum()
    i = int(np.argmax(w))
    for _ in range(5):
        defect = 1.0 - w.sum()
        if defect == 0.0:
            return w
        w[i] += defect
    if w.sum() != 1.0:
        raise ArithmeticError("mass renormalization did not reach an exact unit sum")
    return w


def discretize(kernel, h: float, mode: str = "mass") -> DiscreteKernel:
    """Sample a kernel on the lattice h*Z^N with midpoint weights h^N J(z_j).

    Requires at least 4 lattice points across the support radius.  In modes
    ``mass`` and ``mass+moment`` the weights are scaled to unit sum; the modes
    differ only in which second moment downstream operators are meant to use
    (analytic C(J) vs the discrete C_h reported here).

    Raises
    ------
    ResolutionError
        If h does not resolve the support radius.
    """
    if mode not in RENORM_MODES:
        raise ValueError(f"unknown renormalization mode {mode!r}; choose from {RENORM_MODES}")
    if not h > 0:
        raise ValueError(f"grid spacing must be positive, got {h}")
    radius = kernel.radius
    dim = kernel.dim
    # Tolerate roundoff so that radius/h = 4 exactly passes.
    cells = radius / h
    if cells < 4.0 - 1e-9:
        raise ResolutionError(
            f"kernel radius {radius} spans only {cells:.3g} cells at h={h}; "
            f"need at least 4 (h <= {radius / 4.0:.6g})"
        )
    m = int(np.floor(cells * (1.0 + 1e-12) + 1e-12))
    axes = [np.arange(-m, m + 1)] * dim
    if dim == 1:
        offsets = axes[0].reshape(-1, 1)
    else:
        g = np.meshgrid(*axes, indexing="ij")
        offsets = np.stack([a.ravel() for a in g], axis=-1)
    z = h * offsets.astype(float)
    r = np.sqrt(np.sum(z * z, axis=-1))
    keep = r <= radius * (1.0 + 1e-12)
    offsets = offsets[keep]
    z = z[keep]
    values = kernel(z if dim > 1 else z[:, 0])
    weights = h**dim * values
    if mode in ("mass", "mass+moment"):
        weights = _exact_unit_sum(weights)
    mass = float(weights.sum())
    moment = float(np.sum(weights * z[:, -1] ** 2))
    if not moment > 0:
        raise ArithmeticError("discrete second moment is not positive")
    return DiscreteKernel(
        offsets=offsets,
        weights=weights,
        spacing=float(h),
        dim=dim,
        mode=mode,
        mass=mass,
        second_moment=moment,
        radius_cells=m,
    )


def fourier_symbol(dk: DiscreteKernel, n: int) -> np.ndarray:
    """Symbol of the discrete kernel on a periodic grid of n points per axis.

    Returns the real array J_hat(xi_k) = sum_j w_j cos(xi_k . z_j) at the
    discrete frequencies xi_k = 2 pi fftfreq(n, h); real by radial symmetry,
    J_hat(0) equals the discrete mass, and |J_hat| <= J_hat(0).
    """
    if n < 2 * dk.radius_cells + 1:
        raise ValueError(
            f"periodic grid of {n} points cannot contain a stencil of radius "
            f"{dk.radius_cells} cells; need n >= {2 * dk.radius_cells + 1}"
        )
    xi = 2.0 * np.pi * np.fft.fftfreq(n, d=dk.spacing)
    z = dk.points
    # np.sum over the stencil axis, not a matvec: pairwise summation in a
    # fixed order keeps the symbol byte-identical across BLAS thread counts.
    if dk.dim == 1:
        phase = np.outer(xi, z[:, 0])
        return np.sum(np.cos(phase) * dk.weights, axis=-1)
    xi1, xi2 = np.meshgrid(xi, xi, indexing="ij")
    phase = xi1[..., None] * z[:, 0] + xi2[..., None] * z[:, 1]
    return np.sum(np.cos(phase) * dk.weights, axis=-1)
