"""Monodromy of the forced network and Floquet stability classification.

State ``x = (phi, phi')`` obeys ``x' = [[0, I], [-(L + eps P cos(omega t)), 0]] x``.
The monodromy ``M = Phi(T, 0)`` over one forcing period is built by integrating
all ``2n`` canonical basis columns at once with classical fixed-step RK4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

STABLE = "stable"
UNSTABLE = "unstable"
DEFAULT_STAB_TOL = 1e-6
FINITE_CHECK_EVERY = 64


class IntegrationError(ArithmeticError):
    """Non-finite state encountered while integrating the monodromy."""

    def __init__(self, step: int, time: float):
        super().__init__(f"non-finite state at step {step} (t = {time:.6g})")
        self.step = step
        self.time = time


@dataclass(frozen=True, eq=False)
class ForcedSystem:
    L: np.ndarray
    P: np.ndarray
    epsilon: float
    omega: float

    def __post_init__(self):
        L = np.asarray(self.L, dtype=float)
        P = np.asarray(self.P, dtype=float)
        if L.ndim != 2 or L.shape[0] != L.shape[1]:
            raise ValueError(f"L must be square, got shape {L.shape}")
        if P.shape != L.shape:
            raise ValueError(f"P has shape {P.shape}, L has shape {L.shape}")
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be finite and >= 0, got {self.epsilon}")
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be finite and > 0, got {self.omega}")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "P", P)

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


def default_steps(sys: ForcedSystem) -> int:
    """``max(256, ceil(64 (1 + Omega_max T / 2 pi)))`` with ``Omega_max^2 = lambda_max(L + eps P)``."""
    k = sys.L + sys.epsilon * sys.P
    lam = float(np.linalg.eigvalsh(0.5 * (k + k.T))[-1]) if sys.n else 0.0
    wmax = math.sqrt(max(lam, 0.0))
    return max(256, math.ceil(64.0 * (1.0 + wmax * sys.period / (2.0 * math.pi))))


def monodromy(sys: ForcedSystem, steps_per_period: int | None = None) -> np.ndarray:
    """State-transition matrix over one period, columns ordered ``(phi, phi')``."""
    if steps_per_period is None:
        steps_per_period = default_steps(sys)
    if steps_per_period < 1:
        raise ValueError("steps_per_period must be positive")
    n = sys.n
    L, P, eps, om = sys.L, sys.P, float(sys.epsilon), float(sys.omega)
    h = sys.period / steps_per_period
    q = np.hstack([np.eye(n), np.zeros((n, n))])
    v = np.hstack([np.zeros((n, n)), np.eye(n)])
    with np.errstate(over="ignore", invalid="ignore"):
        return _rk4(L, P, eps, om, h, q, v, steps_per_period)


def _rk4(L, P, eps, om, h, q, v, steps_per_period):
    for k in range(steps_per_period):
        t = k * h
        k0 = L + (eps * math.cos(om * t)) * P
        kh = L + (eps * math.cos(om * (t + 0.5 * h))) * P
        k1 = L + (eps * math.cos(om * (t + h))) * P
        a1q = v
        a1v = -(k0 @ q)
        a2q = v + (0.5 * h) * a1v
        a2v = -(kh @ (q + (0.5 * h) * a1q))
        a3q = v + (0.5 * h) * a2v
        a3v = -(kh @ (q + (0.5 * h) * a2q))
        a4q = v + h * a3v
        a4v = -(k1 @ (q + h * a3q))
        q = q + (h / 6.0) * (a1q + 2.0 * a2q + 2.0 * a3q + a4q)
        v = v + (h / 6.0) * (a1v + 2.0 * a2v + 2.0 * a3v + a4v)
        if (k + 1) % FINITE_CHECK_EVERY == 0 or k + 1 == steps_per_period:
            if not (np.all(np.isfinite(q)) and np.all(np.isfinite(v))):
                raise IntegrationError(k + 1, (k + 1) * h)
    return np.vstack([q, v])


@dataclass(frozen=True, eq=False)
class MonodromyResult:
    M: np.ndarray
    eigenvalues: np.ndarray
    spectral_radius: float
    growth_exponent: float
    dominant_mode: np.ndarray
    classification: str
    drift_modes: int  # eigenvalues at +1 (zero-frequency Jordan drift), not deflated

    @property
    def unstable(self) -> bool:
        return self.classification == UNSTABLE


def _unit_phase(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    i = int(np.argmax(np.abs(v)))
    return v * (abs(v[i]) / v[i])


def classify_stability(M: np.ndarray, stab_tol: float = DEFAULT_STAB_TOL,
                       period: float = 1.0) -> MonodromyResult:
    """Spectral radius, growth exponent ``ln(rho)/period`` and dominant mode.

    The dominant mode is unit norm with its largest component real positive.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise ValueError(f"monodromy must be square with even dimension, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("monodromy contains non-finite entries")
    try:
        w, vecs = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigenvalue iteration did not converge: {exc}") from exc
    mod = np.abs(w)
    top = int(np.argmax(mod))
    rho = float(mod[top])
    unstable = rho > 1.0 + stab_tol
    growth = math.log(rho) / period if unstable else 0.0
    drift = int(np.sum(np.abs(w - 1.0) <= 1e-4))
    return MonodromyResult(M, w, rho, growth, _unit_phase(vecs[:, top].astype(complex)),
                           UNSTABLE if unstable else STABLE, drift)


def analyse(sys: ForcedSystem, steps: int | None = None,
            stab_tol: float = DEFAULT_STAB_TOL) -> MonodromyResult:
    return classify_stability(monodromy(sys, steps), stab_tol, sys.period)


def growth_rate(sys: ForcedSystem, steps: int | None = None,
                stab_tol: float = DEFAULT_STAB_TOL) -> float:
    """Floquet growth exponent (1/time); 0 when classified stable."""
    return analyse(sys, steps, stab_tol).growth_exponent


def symplectic_form(n: int) -> np.ndarray:
    z, i = np.zeros((n, n)), np.eye(n)
    return np.block([[z, i], [-i, z]])


def det_error(M: np.ndarray) -> float:
    return abs(float(np.linalg.det(M)) - 1.0)


def symplectic_residual(M: np.ndarray) -> float:
    """``||M^T J M - J||_inf`` relative to ``||M||_inf^2``."""
    j = symplectic_form(M.shape[0] // 2)
    r = np.max(np.sum(np.abs(M.T @ j @ M - j), axis=1))
    return float(r / max(1.0, np.max(np.sum(np.abs(M), axis=1))) ** 2)


def reciprocal_pairing_error(eigenvalues: np.ndarray) -> float:
    """Largest relative distance from ``1/lambda`` to the nearest eigenvalue."""
    w = np.asarray(eigenvalues, dtype=complex)
    worst = 0.0
    for lam in w:
        inv = 1.0 / lam
        worst = max(worst, float(np.min(np.abs(w - inv))) / max(1.0, abs(inv)))
    return worst


@dataclass(frozen=True)
class StructuralReport:
    det_error: float
    symplectic_residual: float
    pairing_error: float
    step_doubling_change: float
    steps: int

    def ok(self, tol: float = 1e-6) -> bool:
        return max(self.det_error, self.symplectic_residual,
                   self.pairing_error, self.step_doubling_change) <= tol


def structural_check(sys: ForcedSystem, steps: int | None = None) -> StructuralReport:
    """Volume, symplectic, reciprocal-pairing and step-doubling diagnostics."""
    if steps is None:
        steps = default_steps(sys)
    r = classify_stability(monodromy(sys, steps), period=sys.period)
    r2 = classify_stability(monodromy(sys, 2 * steps), period=sys.period)
    return StructuralReport(det_error(r.M), symplectic_residual(r.M),
                            float(reciprocal_pairing_error(r.eigenvalues)),
                            abs(r2.spectral_radius - r.spectral_radius), steps)
