"""Scalar Mathieu reference and the decoupled full-network (P = L) case.

With ``P = L`` every Laplacian mode obeys its own Mathieu equation
``x'' + Omega_j^2 (1 + eps cos(omega t)) x = 0``, i.e. modal forcing amplitude
``Omega_j^2 eps``.  Its first tongue sits at ``2 Omega_j`` with slope ``Omega_j / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .floquet import (FINITE_CHECK_EVERY, STABLE, UNSTABLE, ForcedSystem, IntegrationError,
                      default_steps)
from .graph import Spectrum
from .predictor import Tongue

TRACE_TOL = 1e-7


@dataclass(frozen=True)
class MathieuParams:
    omega_n: float
    epsilon: float
    omega: float

    def __post_init__(self):
        if not self.omega_n > 0:
            raise ValueError("omega_n must be positive")
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be non-negative")
        if not self.omega > 0:
            raise ValueError("omega must be positive")


@dataclass(frozen=True)
class MathieuResult:
    classification: str
    trace: float
    growth_exponent: float
    monodromy: np.ndarray

    @property
    def unstable(self) -> bool:
        return self.classification == UNSTABLE


def mathieu_system(p: MathieuParams) -> ForcedSystem:
    return ForcedSystem(np.array([[p.omega_n ** 2]]), np.array([[1.0]]), p.epsilon, p.omega)


MATHIEU_STEP_FACTOR = 4


def mathieu_steps(p: MathieuParams) -> int:
    """Four times the network step rule.

    RK4 loses about ``(h omega_n)^6 / 72`` of phase volume per step, which at
    the network rule would exceed the 1e-8 determinant budget once several
    natural oscillations fit into one forcing period.
    """
    return MATHIEU_STEP_FACTOR * default_steps(mathieu_system(p))


def scalar_monodromy(p: MathieuParams, steps: int) -> np.ndarray:
    """RK4 monodromy of the scalar equation on plain floats (same scheme as ``monodromy``)."""
    if steps < 1:
        raise ValueError("steps must be positive")
    a, b, om = p.omega_n ** 2, float(p.epsilon), float(p.omega)
    h = 2.0 * math.pi / om / steps
    h2, h6 = 0.5 * h, h / 6.0
    cos = math.cos
    # Columns: (x, v) started from (1, 0) and (0, 1).
    x1, v1, x2, v2 = 1.0, 0.0, 0.0, 1.0
    for k in range(steps):
        t = k * h
        c0 = a + b * cos(om * t)
        ch = a + b * cos(om * (t + h2))
        c1 = a + b * cos(om * (t + h))
        out = []
        for x, v in ((x1, v1), (x2, v2)):
            k1x, k1v = v, -c0 * x
            k2x, k2v = v + h2 * k1v, -ch * (x + h2 * k1x)
            k3x, k3v = v + h2 * k2v, -ch * (x + h2 * k2x)
            k4x, k4v = v + h * k3v, -c1 * (x + h * k3x)
            out.append((x + h6 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
                        v + h6 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)))
        (x1, v1), (x2, v2) = out
        if (k + 1) % FINITE_CHECK_EVERY == 0 or k + 1 == steps:
            if not all(map(math.isfinite, (x1, v1, x2, v2))):
                raise IntegrationError(k + 1, (k + 1) * h)
    return np.array([[x1, x2], [v1, v2]])


def mathieu_stability(p: MathieuParams, steps: int | None = None,
                      trace_tol: float = TRACE_TOL) -> MathieuResult:
    """Classify ``x'' + (omega_n^2 + eps cos(omega t)) x = 0`` via ``|tr M| > 2``."""
    if steps is None:
        steps = mathieu_steps(p)
    try:
        m = scalar_monodromy(p, steps)
    except OverflowError:
        raise IntegrationError(steps, 2.0 * math.pi / p.omega) from None
    tr = float(m[0, 0] + m[1, 1])
    if abs(tr) > 2.0 + trace_tol:
        # Unimodular 2x2: largest multiplier solves mu + 1/mu = |tr|.
        a = abs(tr) / 2.0
        rho = a + math.sqrt(a * a - 1.0)
        return MathieuResult(UNSTABLE, tr, math.log(rho) * p.omega / (2.0 * math.pi), m)
    return MathieuResult(STABLE, tr, 0.0, m)


def full_network_tongues(spec: Spectrum, max_order: int = 1) -> list[Tongue]:
    """Tongues at ``2 Omega_j / n``; only first order carries a slope."""
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    out = []
    for g in spec.nonzero_groups():
        w = spec.group_frequency(g)
        out.append(Tongue(2.0 * w, w / 2.0, g, g, 1, True, w * w))
        for order in range(2, max_order + 1):
            out.append(Tongue(2.0 * w / order, 0.0, g, g, order, False))
    out.sort(key=lambda t: (t.omega0, t.order, t.group_l, t.group_m))
    return out


def full_network_stability(spec: Spectrum, epsilon: float, omega: float,
                           steps: int | None = None,
                           trace_tol: float = TRACE_TOL) -> MathieuResult:
    """Least stable modal Mathieu system when the whole network is forced.

    Zero modes see no forcing and never go unstable.  Returns the result with
    the largest growth exponent (the first mode if all are stable).
    """
    worst = None
    for g in spec.nonzero_groups():
        w = spec.group_frequency(g)
        r = mathieu_stability(MathieuParams(w, w * w * epsilon, omega), steps, trace_tol)
        if worst is None or r.growth_exponent > worst.growth_exponent:
            worst = r
    if worst is None:
        return MathieuResult(STABLE, 2.0, 0.0, np.eye(2))
    return worst
