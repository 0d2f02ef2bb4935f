"""Flux nonlinearities with strong monotonicity certificates.

The evolution integrand is flux(x, s) = s * G(x, s) where the difference
quotient of the flux is pinched between alpha1 and alpha2 (monotonicity cone).
Built-in kinds:

* ``identity``: G identically 1 (linear evolution).
* ``kpz``: G(x, s) = 1 + mu(x) s / (2 (1 + mu(x)^2 s^2)), the gradient-flux
  prototype; its quotient bounds are 1 -/+ 3 sqrt(3)/16 regardless of mu.
* ``affine``: G(s) = 1 + coeff * clip(s, -cap, cap), a test kind; with
  cap=None it is deliberately out of class (unbounded quotient) and exists to
  exercise failure reporting.

Sign convention adopted throughout: mu >= 0 amplifies exchanges (flux >= s,
"reaction"), mu <= 0 damps them (flux <= s, "absorption"), since
flux(s) - s = mu s^2 / (2 (1 + mu^2 s^2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .reports import PropertyReport

# Extremal deviation of the kpz quotient from 1: max of (p+q)/(2(1+p^2)(1+q^2))
# over the plane, attained at p = q = 1/sqrt(3).
KPZ_ALPHA_MARGIN = 3.0 * math.sqrt(3.0) / 16.0


@dataclass(frozen=True)
class MuField:
    """Drift coefficient mu(x): a constant or 1D nodal samples (nearest lookup)."""

    kind: str  # "constant" | "sampled"
    value: float = 0.0
    coords: np.ndarray | None = None
    values: np.ndarray | None = None

    @classmethod
    def constant(cls, value: float) -> "MuField":
        return cls(kind="constant", value=float(value))

    @classmethod
    def sampled(cls, coords, values) -> "MuField":
        coords = np.asarray(coords, dtype=float)
        values = np.asarray(values, dtype=float)
        if coords.ndim != 1 or coords.shape != values.shape:
            raise ValueError("sampled mu needs matching 1D coordinate and value arrays")
        if not np.all(np.diff(coords) > 0):
            raise ValueError("sampled mu coordinates must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("mu values must be finite")
        return cls(kind="sampled", coords=coords, values=values)

    @classmethod
    def from_csv(cls, path) -> "MuField":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls.sampled(data[:, 0], data[:, 1])

    @property
    def sup_norm(self) -> float:
        if self.kind == "constant":
            return abs(self.value)
        return float(np.max(np.abs(self.values)))

    def at(self, x) -> np.ndarray:
        """mu at physical locations x (nearest node for the sampled kind)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "constant":
            return np.broadcast_to(np.float64(self.value), x.shape).copy() if x.ndim else np.float64(self.value)
        pos = np.searchsorted(self.coords, x)
        pos = np.clip(pos, 1, len(self.coords) - 1)
        left = self.coords[pos - 1]
        right = self.coords[pos]
        take_left = (x - left) <= (right - x)
        idx = np.where(take_left, pos - 1, pos)
        return self.values[idx]


def _kpz_g(mu, s):
    return 1.0 + mu * s / (2.0 * (1.0 + (mu * s) ** 2))


def _kpz_psi(mu, s, sigma):
    # Closed form of (flux(s) - flux(sigma)) / (s - sigma); algebraically valid
    # on the diagonal too, where it equals the flux derivative.
    return 1.0 + mu * (s + sigma) / (2.0 * (1.0 + (mu * s) ** 2) * (1.0 + (mu * sigma) ** 2))


@dataclass(frozen=True)
class Nonlinearity:
    kind: str
    alpha1: float
    alpha2: float
    mu: MuField | None = None
    coeff: float = 0.0
    cap: float | None = None
    beta_absorption: float | None = None
    beta_reaction: float | None = None

    # -- the pointwise surface ------------------------------------------------

    def mu_values(self, x) -> np.ndarray:
        """Per-location drift coefficient 2 G'_s(x,0) / G(x,0)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "identity":
            return np.zeros(x.shape)
        if self.kind == "kpz":
            return np.asarray(self.mu.at(x), dtype=float)
        # affine: G(0)=1, G'_s(0)=coeff
        return np.full(x.shape, 2.0 * self.coeff)

    def g_given_mu(self, mu, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "identity":
            return np.ones(s.shape) if s.ndim else 1.0
        if self.kind == "kpz":
            return _kpz_g(mu, s)
        c = self.cap if self.cap is not None else np.inf
        return 1.0 + self.coeff * np.clip(s, -c, c)

    def flux_given_mu(self, mu, s):
        s = np.asarray(s, dtype=float)
        if self.kind == "identity":
            return s
        return s * self.g_given_mu(mu, s)

    def psi_given_mu(self, mu, s, sigma):
        s = np.asarray(s, dtype=float)
        sigma = np.asarray(sigma, dtype=float)
        if self.kind == "identity":
            return np.ones(np.broadcast_shapes(s.shape, sigma.shape))
        if self.kind == "kpz":
            return _kpz_psi(mu, s, sigma)
        return self._affine_psi(s, sigma)

    def _affine_psi(self, s, sigma):
        # Difference quotient of s + coeff*s*clip(s); piecewise smooth, so use
        # the raw quotient off the diagonal and the derivative near it.
        s, sigma = np.broadcast_arrays(s, sigma)
        scale = np.maximum(1.0, np.maximum(np.abs(s), np.abs(sigma)))
        near = np.abs(s - sigma) <= 1e-8 * scale
        c = self.cap if self.cap is not None else np.inf
        mid = 0.5 * (s + sigma)
        deriv = 1.0 + self.coeff * (np.clip(mid, -c, c) + mid * (np.abs(mid) < c))
        denom = np.where(near, 1.0, s - sigma)
        quot = (self.flux_given_mu(0.0, s) - self.flux_given_mu(0.0, sigma)) / denom
        return np.where(near, deriv, quot)

    # -- x-addressed evaluation -------------------------------------------------

    def g(self, x, s):
        return self.g_given_mu(self.mu_values(x), s)

    def flux(self, x, s):
        return self.flux_given_mu(self.mu_values(x), s)

    def psi(self, x, s, sigma):
        return self.psi_given_mu(self.mu_values(x), s, sigma)

    @property
    def orientation(self) -> str:
        """'absorption' if flux <= s everywhere, 'reaction' if flux >= s, else 'mixed'."""
        if self.kind == "identity":
            return "neutral"
        if self.kind == "kpz":
            if self.mu.kind == "constant":
                lo = hi = self.mu.value
            else:
                lo, hi = float(np.min(self.mu.values)), float(np.max(self.mu.values))
        else:
            lo = hi = self.coeff
        if hi <= 0.0:
            return "absorption"
        if lo >= 0.0:
            return "reaction"
        return "mixed"


def identity_nonlinearity() -> Nonlinearity:
    return Nonlinearity(
        kind="identity", alpha1=1.0, alpha2=1.0, beta_absorption=1.0, beta_reaction=1.0
    )


def kpz_nonlinearity(mu) -> Nonlinearity:
    """The prototype gradient-flux nonlinearity; mu is a scalar or a MuField."""
    if not isinstance(mu, MuField):
        mu = MuField.constant(mu)
    G = Nonlinearity(
        kind="kpz",
        alpha1=1.0 - KPZ_ALPHA_MARGIN,
        alpha2=1.0 + KPZ_ALPHA_MARGIN,
        mu=mu,
    )
    # One-sided flux bounds flux(s) <= s (absorption) / >= s (reaction) hold
    # exactly when mu has a single sign.
    if G.orientation == "absorption":
        return replace(G, beta_absorption=1.0)
    if G.orientation == "reaction":
        return replace(G, beta_reaction=1.0)
    return G


def affine_nonlinearity(coeff: float = 0.1, cap: float | None = 1.0) -> Nonlinearity:
    """Capped-affine test kind; cap=None declares bounds as if cap were 1 (broken on purpose)."""
    c_eff = 1.0 if cap is None else float(cap)
    a = abs(float(coeff)) * c_eff
    if a >= 0.5:
        raise ValueError("affine kind needs |coeff|*cap < 1/2 to stay in class")
    return Nonlinearity(
        kind="affine", alpha1=1.0 - 2.0 * a, alpha2=1.0 + 2.0 * a, coeff=float(coeff), cap=cap
    )


def make_nonlinearity(kind: str, mu=0.0, coeff: float = 0.1, cap=1.0) -> Nonlinearity:
    if kind == "identity":
        return identity_nonlinearity()
    if kind == "kpz":
        return kpz_nonlinearity(mu)
    if kind == "affine":
        return affine_nonlinearity(coeff, cap)
    raise ValueError(f"unknown nonlinearity kind {kind!r}")


# -- module-level ops ----------------------------------------------------------


def g_eval(G: Nonlinearity, x, s):
    return G.g(x, s)


def flux(G: Nonlinearity, x, s):
    return G.flux(x, s)


def psi(G: Nonlinearity, x, s, sigma):
    return G.psi(x, s, sigma)


def mu_of(G: Nonlinearity, x):
    return G.mu_values(x)


def certify_class(
    G: Nonlinearity,
    sample_count: int,
    rng_seed: int,
    s_box: float | None = None,
    x_box: tuple = (-1.0, 1.0),
    tol: float = 1e-12,
) -> PropertyReport:
    """Sample the flux difference quotient and check the [alpha1, alpha2] cone.

    Draws (x, s, sigma) with s, sigma in [-R, R], R = 10/max(sup|mu|, 1) by
    default (the extremal quotient of the kpz kind lives at |s| ~ 1/|mu|),
    plus a block of far-tail pairs with magnitudes up to 1e3.  Uses the raw
    quotient for well-separated pairs and the closed-form psi near the
    diagonal, where the raw quotient loses digits to cancellation.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    rng = np.random.default_rng(rng_seed)
    if s_box is None:
        sup_mu = G.mu.sup_norm if G.kind == "kpz" else max(abs(G.coeff), 1.0)
        s_box = 10.0 / max(sup_mu, 1.0)
    n_tail = min(1000, sample_count)
    x = rng.uniform(x_box[0], x_box[1], size=sample_count + n_tail)
    s = rng.uniform(-s_box, s_box, size=sample_count + n_tail)
    sigma = rng.uniform(-s_box, s_box, size=sample_count + n_tail)
    tail = rng.uniform(-1e3, 1e3, size=(n_tail, 2))
    s[sample_count:] = tail[:, 0]
    sigma[sample_count:] = tail[:, 1]

    mu = G.mu_values(x)
    scale = np.maximum(1.0, np.maximum(np.abs(s), np.abs(sigma)))
    separated = np.abs(s - sigma) >= 1e-3 * scale
    denom = np.where(separated, s - sigma, 1.0)
    raw = (G.flux_given_mu(mu, s) - G.flux_given_mu(mu, sigma)) / denom
    quot = np.where(separated, raw, G.psi_given_mu(mu, s, sigma))

    q_min = float(np.min(quot))
    q_max = float(np.max(quot))
    n_low = int(np.sum(quot < G.alpha1 - tol))
    n_high = int(np.sum(quot > G.alpha2 + tol))
    report = PropertyReport(title=f"monotonicity cone of {G.kind} flux")
    report.add(
        "quotient-lower-bound",
        n_low == 0,
        empirical_min=q_min,
        alpha1=G.alpha1,
        violations=n_low,
        samples=len(quot),
    )
    report.add(
        "quotient-upper-bound",
        n_high == 0,
        empirical_max=q_max,
        alpha2=G.alpha2,
        violations=n_high,
        samples=len(quot),
    )
    return report


# -- elementary power-gap inequality (used by the Lq decay machinery) ---------


def power_gap_constant(q: float) -> float:
    """c(q) = 4(q-1)/q^2, the sharp-order constant of the power-gap inequality."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return 4.0 * (q - 1.0) / q**2


def sample_power_gap_inequality(
    sample_count: int, rng_seed: int, q_range=(1.0, 8.0), a_scale: float = 10.0, tol: float = 1e-12
) -> PropertyReport:
    """Check (a-b)(a^{q-1} - b^{q-1}) >= c(q) (a^{q/2} - b^{q/2})^2 on random draws.

    Violations are measured relative to the magnitude of both sides so that
    the q=2 equality case is not flagged on roundoff.
    """
    rng = np.random.default_rng(rng_seed)
    a = a_scale * np.abs(rng.standard_normal(sample_count))
    b = a_scale * np.abs(rng.standard_normal(sample_count))
    q = rng.uniform(q_range[0], q_range[1], size=sample_count)
    lhs = (a - b) * (a ** (q - 1.0) - b ** (q - 1.0))
    rhs = power_gap_constant_vec(q) * (a ** (q / 2.0) - b ** (q / 2.0)) ** 2
    margin = lhs - rhs
    floor = -tol * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    n_bad = int(np.sum(margin < floor))
    report = PropertyReport(title="power-gap inequality")
    report.add(
        "power-gap-lower-bound",
        n_bad == 0,
        worst_relative_margin=float(np.min(margin / np.abs(floor))),
        violations=n_bad,
        samples=sample_count,
    )
    return report


def power_gap_constant_vec(q):
    q = np.asarray(q, dtype=float)
    return 4.0 * (q - 1.0) / q**2
