"""Nonlocal right-hand side evaluation and the symmetric Dirichlet form.

The semi-discrete evolution is

    du/dt (x) = scale(x) * sum_j w_j * flux(x, u(x + z_j) - u(x))

over interior nodes, with u read from interior + collar.  Unrescaled dynamics
use scale = 1; the rescaled operator uses scale(x) = 2 / (M_J * G(x, 0)) where
M_J is the second moment of the rescaled kernel, either analytic (eps^2 C(J))
or the discrete stencil moment C_h, which makes quadratics exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .grids import Field, Grid
from .kernels import DiscreteKernel, RescaledKernel
from .nonlinearity import Nonlinearity


@dataclass(frozen=True)
class RescalePlan:
    """How the operator's normalizing constant is formed in rescaled mode."""

    epsilon: float
    c_mode: str  # "analytic" | "discrete"
    analytic_moment: float | None = None

    def __post_init__(self):
        if self.c_mode not in ("analytic", "discrete"):
            raise ValueError(f"unknown rescale constant mode {self.c_mode!r}")
        if self.c_mode == "analytic" and self.analytic_moment is None:
            raise ValueError("analytic mode needs the kernel's analytic second moment")


def rescale_plan(kernel, c_mode: str = "discrete") -> RescalePlan:
    eps = kernel.epsilon if isinstance(kernel, RescaledKernel) else 1.0
    return RescalePlan(epsilon=eps, c_mode=c_mode, analytic_moment=kernel.second_moment)


class StencilOperator:
    """Nonlocal rhs bound to one (grid, stencil, nonlinearity, scaling).

    Immutable after construction; evaluation allocates only scratch blocks, so
    one instance can serve every stage of a time integrator.
    """

    def __init__(self, grid: Grid, dk: DiscreteKernel, G: Nonlinearity, rescaled: RescalePlan | None = None):
        if dk.dim != grid.dim:
            raise ValueError(f"kernel dimension {dk.dim} != grid dimension {grid.dim}")
        if abs(dk.spacing - grid.spacing) > 1e-12 * grid.spacing:
            raise ValueError("stencil was discretized at a different spacing than the grid")
        if dk.radius_cells > grid.collar_cells:
            raise ValueError(
                f"stencil radius {dk.radius_cells} cells exceeds collar of {grid.collar_cells}"
            )
        if grid.dim == 2 and G.kind == "kpz" and G.mu.kind == "sampled":
            raise ValueError("sampled mu fields are 1D only; use a constant mu in 2D")
        self.grid = grid
        self.dk = dk
        self.G = G
        self.plan = rescaled
        self.mu = G.mu_values(grid.interior_coords() if grid.dim == 1 else grid.interior_coords()[..., 0])
        g0 = G.g_given_mu(self.mu, np.zeros(grid.interior_shape))
        if rescaled is None:
            self.scale = 1.0
            self.scale_max = 1.0
        else:
            moment = dk.second_moment if rescaled.c_mode == "discrete" else rescaled.analytic_moment
            scale = 2.0 / (moment * g0)
            self.scale = scale
            self.scale_max = float(np.max(scale))
        # 1D keeps a row-per-offset layout for block evaluation.
        if grid.dim == 1:
            self._offs = dk.offsets[:, 0].copy()
            self._mu_row = self.mu[None, :] if np.ndim(self.mu) else self.mu
        self._w = dk.weights

    @property
    def lipschitz_bound(self) -> float:
        """Upper bound on the rhs Lipschitz constant (sup and L1 operator norms)."""
        return 2.0 * self.G.alpha2 * self.scale_max * self.dk.mass

    def rhs(self, full_values: np.ndarray) -> np.ndarray:
        """Interior rhs array from a full-lattice value array (collar included)."""
        g = self.grid
        c = g.collar_cells
        if g.dim == 1:
            n = g.interior_shape[0]
            base = full_values[c : c + n]
            win = np.lib.stride_tricks.sliding_window_view(full_values, n)
            diffs = win[c + self._offs] - base[None, :]
            block = self.G.flux_given_mu(self._mu_row, diffs)
            acc = np.sum(self._w[:, None] * block, axis=0)
        else:
            n1, n2 = g.interior_shape
            base = full_values[c : c + n1, c : c + n2]
            acc = np.zeros((n1, n2))
            for (k1, k2), w in zip(self.dk.offsets, self._w):
                shifted = full_values[c + k1 : c + k1 + n1, c + k2 : c + k2 + n2]
                acc += w * self.G.flux_given_mu(self.mu, shifted - base)
        return self.scale * acc


def nonlocal_rhs(
    grid: Grid,
    dk: DiscreteKernel,
    G: Nonlinearity,
    u: Field,
    boundary=None,
    rescaled: RescalePlan | None = None,
) -> Field:
    """Evaluate the nonlocal rhs of a field; collar nodes of the output are zero.

    ``boundary`` overrides the collar values carried by ``u`` (scalar or an
    array matching the collar node count, in full-lattice C order).
    """
    values = u.values
    if boundary is not None:
        values = values.copy()
        mask = grid.collar_mask()
        values[mask] = boundary
    if not np.all(np.isfinite(values)):
        raise ValueError("rhs input contains NaN or infinite values")
    op = StencilOperator(grid, dk, G, rescaled)
    out = np.zeros(grid.full_shape)
    out[grid.interior_slices] = op.rhs(values)
    return Field(grid, out, u.t)


def assemble_dirichlet_form(grid: Grid, dk: DiscreteKernel) -> sp.csr_matrix:
    """Symmetric PSD operator A = mass*I - K on interior nodes, zero exterior.

    <A u, u> equals half the double sum of w * (u(y) - u(x))^2 over the full
    lattice with u extended by zero, so A is the quadratic form whose smallest
    eigenvalue drives exponential decay on bounded domains.  Eigenvalues lie
    in [0, 2*mass] by Gershgorin.
    """
    if dk.dim != grid.dim:
        raise ValueError("kernel/grid dimension mismatch")
    if abs(dk.spacing - grid.spacing) > 1e-12 * grid.spacing:
        raise ValueError("stencil spacing does not match the grid")
    n = grid.n_interior
    idx = np.arange(n).reshape(grid.interior_shape)
    rows, cols, data = [], [], []
    if grid.dim == 1:
        nn = grid.interior_shape[0]
        for k, w in zip(dk.offsets[:, 0], dk.weights):
            lo = max(0, -k)
            hi = min(nn, nn - k)
            if hi <= lo:
                continue
            src = idx[lo:hi]
            rows.append(src)
            cols.append(src + k)
            data.append(np.full(src.shape, w))
    else:
        n1, n2 = grid.interior_shape
        for (k1, k2), w in zip(dk.offsets, dk.weights):
            a1, b1 = max(0, -k1), min(n1, n1 - k1)
            a2, b2 = max(0, -k2), min(n2, n2 - k2)
            if b1 <= a1 or b2 <= a2:
                continue
            src = idx[a1:b1, a2:b2].ravel()
            dst = idx[a1 + k1 : b1 + k1, a2 + k2 : b2 + k2].ravel()
            rows.append(src)
            cols.append(dst)
            data.append(np.full(src.shape, w))
    K = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()
    return (dk.mass * sp.identity(n, format="csr") - K).tocsr()
