"""Volterra integral hierarchy for the propagator at nonzero detuning.

The exact propagator satisfies integral equations of Lippmann-Schwinger
type built from the split H^2 = M0^2 + eps: with the kernel
K(tau) = sin(M0 tau)/M0,

    R:  U(t) = U0_R(t) - int_0^t K(t-t') eps U(t') dt'
    L:  U(t) = U0_L(t) - int_0^t U(t-t') eps K(t') dt'
    S:  half the sum of both, around U0_S = (U0_R + U0_L)/2.

Born-style iteration (substituting the previous order into the right-hand
side, starting from the zeroth-order propagator) gives approximations
accurate to order (eps/M0^2)^(k+1).  The M variant is the arithmetic mean
of the R and L tables of the same order, which is a valid alternative to
S for k >= 1.

All integrals are composite-Simpson sums over grid prefixes: plain
Simpson for even prefix lengths, Simpson plus a 3/8 tail segment for odd
ones (a single trapezoid interval at the very first node, where the
kernel vanishes linearly).  Building order k on n nodes costs O(k n^2)
3x3 multiply-accumulates; no FFT acceleration is attempted since n stays
in the thousands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import RamanParams, h_new, spectral_m0sq, split_square
from .numerics import sinc_sqrt

#: Largest allowed phase advance of the fastest mode per grid step.
GRID_PHASE_LIMIT = math.pi / 20.0


class Variant(str, Enum):
    """Which side the Hamiltonian factor sits on in the zeroth order."""

    R = "R"
    L = "L"
    S = "S"
    M = "M"


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid on [0, t_end] with an even number n of intervals."""

    t_end: float
    n: int

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError("n must be an even integer >= 2")

    @property
    def dt(self) -> float:
        return self.t_end / self.n

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.n + 1)


def required_intervals(params: RamanParams, t_end: float) -> int:
    """Smallest even interval count satisfying dt * mu_max <= pi/20."""
    mu_max = spectral_m0sq(params).mu_max
    n = int(math.ceil(t_end * mu_max / GRID_PHASE_LIMIT))
    return max(2, n + (n % 2))


def auto_grid(params: RamanParams, t_end: float, *, refine: float = 1.0) -> TimeGrid:
    """Grid at the mandated density, optionally refined by a factor."""
    n = required_intervals(params, t_end)
    if refine != 1.0:
        n = int(math.ceil(n * refine / 2.0) * 2)
    return TimeGrid(t_end=t_end, n=n)


def validate_grid(grid: TimeGrid, params: RamanParams) -> None:
    """Reject grids too coarse for the oscillatory convolution integrals."""
    mu_max = spectral_m0sq(params).mu_max
    if grid.dt * mu_max > GRID_PHASE_LIMIT * (1.0 + 1e-9):
        raise ValueError(
            f"grid too coarse: dt*mu_max = {grid.dt * mu_max:.4f} exceeds "
            f"pi/20; need n >= {required_intervals(params, grid.t_end)}"
        )


@dataclass(frozen=True, eq=False)
class PropagatorTable:
    """Approximate propagator of one variant and order on every grid node."""

    grid: TimeGrid
    variant: Variant
    order: int
    matrices: np.ndarray  # shape (n+1, 3, 3)


def _prefix_weights(i: int, dt: float) -> np.ndarray:
    """Quadrature weights for the integral over [0, i*dt] on grid nodes 0..i."""
    if i == 0:
        return np.zeros(1)
    if i == 1:
        # Lone interval; the integrand vanishes at tau = 0 so the
        # trapezoid here is O(dt^4) in practice.
        return np.array([0.5, 0.5]) * dt
    w = np.zeros(i + 1)
    if i % 2 == 0:
        w[0] = w[i] = 1.0
        w[1:i:2] = 4.0
        w[2:i:2] = 2.0
        return w * (dt / 3.0)
    m = i - 3
    if m > 0:
        w[0] = 1.0
        w[1:m:2] = 4.0
        w[2:m:2] = 2.0
        w[m] = 1.0
        w[: m + 1] *= dt / 3.0
    w[m : i + 1] += np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * dt / 8.0)
    return w


def _u0_tables(variant: Variant, params: RamanParams,
               times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Zeroth-order table and kernel table K = sin(M0 t)/M0 on the grid."""
    sd = spectral_m0sq(params)
    mus_sq = np.array([sd.mu_plus_sq, sd.mu_minus_sq, sd.mu_e_sq])
    proj = np.stack(sd.projectors)
    cos_vals = np.cos(np.sqrt(mus_sq)[None, :] * times[:, None])
    sinc_vals = sinc_sqrt(mus_sq[None, :], times[:, None])
    cos_t = np.einsum("ti,iab->tab", cos_vals, proj)
    kernel = np.einsum("ti,iab->tab", sinc_vals, proj)
    h = h_new(params)
    if variant is Variant.R:
        u0_t = cos_t - 1j * (kernel @ h)
    elif variant is Variant.L:
        u0_t = cos_t - 1j * np.matmul(h, kernel)
    else:  # S and M coincide at order zero
        u0_t = cos_t - 0.5j * (kernel @ h + np.matmul(h, kernel))
    return u0_t, kernel


def u0(variant: Variant | str, params: RamanParams, t: float) -> np.ndarray:
    """Zeroth-order propagator of the chosen variant at a single time."""
    variant = Variant(variant)
    table, _ = _u0_tables(variant, params, np.array([float(t)]))
    return table[0]


def iterate(variant: Variant | str, params: RamanParams, grid: TimeGrid,
            order: int, *, eps_scale: float = 1.0) -> PropagatorTable:
    """Born iteration of the chosen integral equation up to the given order.

    ``eps_scale`` multiplies the off-diagonal remainder only; it is the
    knob used by the convergence-order tests.
    """
    variant = Variant(variant)
    if order < 0:
        raise ValueError("order must be >= 0")
    validate_grid(grid, params)

    if variant is Variant.M:
        right = iterate(Variant.R, params, grid, order, eps_scale=eps_scale)
        left = iterate(Variant.L, params, grid, order, eps_scale=eps_scale)
        mats = 0.5 * (right.matrices + left.matrices)
        return PropagatorTable(grid=grid, variant=variant, order=order,
                               matrices=mats)

    times = grid.times
    dt = grid.dt
    u0_t, kernel = _u0_tables(variant, params, times)
    eps = split_square(params, eps_scale=eps_scale).eps
    weights = [_prefix_weights(i, dt) for i in range(grid.n + 1)]

    table = u0_t
    for _ in range(order):
        prev = table
        table = u0_t.copy()
        eps_u = np.matmul(eps, prev) if variant is not Variant.L else None
        u_eps = prev @ eps if variant is not Variant.R else None
        for i in range(1, grid.n + 1):
            w = weights[i]
            if variant is Variant.R:
                corr = np.einsum("j,jab,jbc->ac", w, kernel[i::-1], eps_u[: i + 1])
            elif variant is Variant.L:
                corr = np.einsum("j,jab,jbc->ac", w, u_eps[i::-1], kernel[: i + 1])
            else:
                corr = 0.5 * np.einsum("j,jab,jbc->ac", w, kernel[i::-1],
                                       eps_u[: i + 1]) \
                     + 0.5 * np.einsum("j,jab,jbc->ac", w, u_eps[i::-1],
                                       kernel[: i + 1])
            table[i] -= corr
    return PropagatorTable(grid=grid, variant=variant, order=order,
                           matrices=table)


def apply_normalized(table: PropagatorTable, psi0: np.ndarray) -> np.ndarray:
    """Apply the table to an initial state and renormalize node by node.

    Returns the (n+1, 3) array of unit-norm states.  Rejects states whose
    raw norm collapses below 1e-6, which signals that the approximation
    has left its domain of validity.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("initial state must have unit norm")
    raw = table.matrices @ psi0
    norms = np.linalg.norm(raw, axis=1)
    worst = norms.min()
    if worst < 1e-6:
        node = int(norms.argmin())
        raise ValueError(
            f"propagator table lost normalization (norm {worst:.2e} at "
            f"t = {table.grid.times[node]:.6g}); approximation broke down"
        )
    return raw / norms[:, None]
