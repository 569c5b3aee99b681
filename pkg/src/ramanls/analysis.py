"""Scalar observables and population traces.

Effective Rabi frequencies from the three treatments, the two resonance
detunings plus the self-consistent light-shift solution, the transfer
amplitude, state fidelity, and a uniform population-trace record for
every propagation method the package offers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lippmann_schwinger import TimeGrid, Variant, apply_normalized, iterate
from .model import RamanParams, h_ae, h_new, spectral_m0sq
from .propagators import ae_model, state_table
from .numerics import sinc_sqrt

#: Every method name trace_populations accepts.
METHODS = ("exact-ae", "exact-new", "ode", "ae", "delta0", "m0eff",
           "ls-R", "ls-L", "ls-S", "ls-M")


@dataclass(frozen=True, eq=False)
class Trace:
    """Time series of the three level populations plus state norm."""

    times: np.ndarray
    p0: np.ndarray
    p1: np.ndarray
    pe: np.ndarray
    norm: np.ndarray
    label: str


def rabi_ae(params: RamanParams) -> float:
    """Effective Rabi frequency of the adiabatic-elimination model."""
    return ae_model(params).omega_r


def rabi_exact_delta0(params: RamanParams) -> float:
    """Exact effective Rabi frequency at zero two-photon detuning."""
    if params.delta_2ph != 0.0:
        raise ValueError("rabi_exact_delta0 requires zero two-photon detuning")
    d = params.delta_avg
    return 0.5 * (math.sqrt(d * d + params.omega_sq) - abs(d))


def rabi_general(params: RamanParams) -> float:
    """Effective Rabi frequency mu_plus - mu_minus from the split square."""
    sd = spectral_m0sq(params)
    return sd.mu_plus - sd.mu_minus


def delta_resonant_ae(params: RamanParams) -> float:
    """Two-photon detuning cancelling the AE effective detuning."""
    if params.delta_avg == 0:
        raise ValueError("average detuning must be nonzero")
    return -params.omega_imbalance / (4.0 * params.delta_avg)


def delta_resonant_lightshift(params: RamanParams) -> tuple[float, float]:
    """Resonant detuning from the light-shift balance.

    Returns ``(approx, exact)``: the leading closed form and the Newton
    solution of the self-consistent balance
    delta = |omega1|^2/(4 Delta + 2 delta) - |omega0|^2/(4 Delta - 2 delta),
    seeded at the closed form.
    """
    d = params.delta_avg
    if d == 0:
        raise ValueError("average detuning must be nonzero")
    o0_sq = abs(params.omega0) ** 2
    o1_sq = abs(params.omega1) ** 2
    approx = 2.0 * d * (o1_sq - o0_sq) / (8.0 * d * d + o0_sq + o1_sq)

    x = approx
    for _ in range(50):
        den_p = 4.0 * d + 2.0 * x
        den_m = 4.0 * d - 2.0 * x
        if den_p == 0 or den_m == 0:
            raise ValueError("light-shift balance hit a vanishing denominator")
        f = x - o1_sq / den_p + o0_sq / den_m
        df = 1.0 + 2.0 * o1_sq / den_p**2 + 2.0 * o0_sq / den_m**2
        step = f / df
        x -= step
        if abs(step) <= 1e-12 * max(abs(x), 1e-300):
            return approx, x
    raise ValueError(
        f"light-shift Newton did not converge; last residual {f:.3e}"
    )


def amplitude_p(params: RamanParams) -> float:
    """Transfer oscillation amplitude of the effective two-level model."""
    s = params.omega_sq
    w = params.omega_imbalance
    four_dd = 4.0 * params.delta_2ph * params.delta_avg
    den = s * s + 2.0 * four_dd * w + four_dd * four_dd
    if den == 0:
        raise ValueError("amplitude undefined: zero drive and zero detuning product")
    return 1.0 - (w + four_dd) ** 2 / den


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Overlap magnitude |a^dagger b| of two unit-norm states."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    for name, v in (("a", a), ("b", b)):
        if abs(np.linalg.norm(v) - 1.0) > 1e-8:
            raise ValueError(f"fidelity argument {name} is not unit norm")
    return float(abs(np.vdot(a, b)))


def _require_no_excited(psi0: np.ndarray, method: str) -> np.ndarray:
    if abs(psi0[2]) > 1e-12:
        raise ValueError(f"method {method} requires zero initial excited amplitude")
    return psi0[:2]


def trace_populations(method: str, params: RamanParams, psi0: np.ndarray,
                      grid: TimeGrid, *, order: int = 0,
                      dt_max: float | None = None) -> Trace:
    """Populations of the three levels along a grid, by any named method.

    Two-level methods ("ae", "m0eff") require a vanishing initial excited
    amplitude and report pe identically zero.  The "ls-*" methods take the
    iteration order through ``order``; "ode" takes its step bound through
    ``dt_max``.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; valid: {', '.join(METHODS)}")
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (3,):
        raise ValueError("initial state must have three components")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("initial state must have unit norm")
    times = grid.times
    label = method

    if method in ("exact-ae", "exact-new"):
        h = h_ae(params) if method == "exact-ae" else h_new(params)
        states = state_table(h, times, psi0)
    elif method == "ode":
        h = h_new(params)
        rho = float(np.abs(h).sum(axis=1).max())
        cap = 0.05 / rho if rho > 0 else grid.dt
        if dt_max is not None:
            cap = min(cap, dt_max)
        substeps = max(1, int(math.ceil(grid.dt / cap)))
        dt = grid.dt / substeps
        psi = psi0.copy()
        states = np.empty((grid.n + 1, 3), dtype=complex)
        states[0] = psi
        for i in range(grid.n):
            for _ in range(substeps):
                k1 = -1j * (h @ psi)
                k2 = -1j * (h @ (psi + 0.5 * dt * k1))
                k3 = -1j * (h @ (psi + 0.5 * dt * k2))
                k4 = -1j * (h @ (psi + dt * k3))
                psi = psi + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            states[i + 1] = psi
    elif method == "ae":
        psi01 = _require_no_excited(psi0, method)
        model = ae_model(params)
        lam, v = np.linalg.eigh(model.h_eff)
        coeff = v.conj().T @ psi01
        phases = np.exp(-1j * np.outer(times, lam))
        two = (phases * coeff) @ v.T
        states = np.concatenate([two, np.zeros((len(times), 1))], axis=1)
    elif method == "m0eff":
        psi01 = _require_no_excited(psi0, method)
        sd = spectral_m0sq(params)
        p_plus = sd.projectors[0][:2, :2]
        p_minus = sd.projectors[1][:2, :2]
        two = (np.exp(1j * sd.mu_plus * times)[:, None] * (p_plus @ psi01)
               + np.exp(1j * sd.mu_minus * times)[:, None] * (p_minus @ psi01))
        states = np.concatenate([two, np.zeros((len(times), 1))], axis=1)
    elif method == "delta0":
        if params.delta_2ph != 0.0:
            raise ValueError("method delta0 requires zero two-photon detuning")
        sd = spectral_m0sq(params)
        mus_sq = np.array([sd.mu_plus_sq, sd.mu_minus_sq, sd.mu_e_sq])
        proj = np.stack(sd.projectors)
        h = h_new(params)
        cos_vals = np.cos(np.sqrt(mus_sq)[None, :] * times[:, None])
        sinc_vals = sinc_sqrt(mus_sq[None, :], times[:, None])
        hpsi = h @ psi0
        states = (np.einsum("ti,iab,b->ta", cos_vals, proj, psi0)
                  - 1j * np.einsum("ti,iab,b->ta", sinc_vals, proj, hpsi))
    else:  # ls-R / ls-L / ls-S / ls-M
        variant = Variant(method.split("-", 1)[1])
        table = iterate(variant, params, grid, order)
        states = apply_normalized(table, psi0)
        label = f"{method}-k{order}"

    pops = np.abs(states) ** 2
    norm = np.sqrt(pops.sum(axis=1))
    return Trace(times=times, p0=pops[:, 0], p1=pops[:, 1], pe=pops[:, 2],
                 norm=norm, label=label)
