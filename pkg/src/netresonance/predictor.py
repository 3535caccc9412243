"""First-order Arnold tongue prediction from the Laplacian spectrum.

A forced network ``phi'' + (L + eps P cos(omega t)) phi = 0`` develops a
first-order tongue at every sum ``Omega_l + Omega_m`` of two non-zero natural
frequencies.  Its half-width in omega grows like ``slope * eps`` with

    slope = ||V_m^T P V_l||_2 / (2 sqrt(Omega_l Omega_m))

where ``V_g`` is an orthonormal basis of eigenspace group ``g``.  The 2-induced
norm makes the slope independent of the basis chosen inside degenerate
eigenspaces.  Difference frequencies ``|Omega_l - Omega_m|`` are neutral at
first order, and a vanishing projected coupling closes the tongue entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .graph import Spectrum
from .linalg import spectral_norm
from .textio import fmt, fmt_bool, parse_bool

SUM_RESONANT_UNSTABLE = "sum_resonant_unstable"
DIFFERENCE_RESONANT_STABLE = "difference_resonant_stable"
NON_RESONANT_STABLE = "non_resonant_stable"

TONGUE_CSV_HEADER = "omega0,slope,order,group_l,group_m,controllable"


@dataclass(frozen=True)
class Tongue:
    omega0: float
    slope: float
    group_l: int
    group_m: int
    order: int = 1
    controllable: bool = True
    coupling: float = 0.0  # ||V_m^T P V_l||_2; 0 for higher orders

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if self.slope < 0:
            raise ValueError(f"slope must be non-negative, got {self.slope}")
        if (self.slope == 0.0) == self.controllable:
            raise ValueError("slope is zero exactly when the tongue is uncontrollable")

    def boundary(self, eps: float) -> tuple[float, float]:
        """First-order tongue edges ``omega0 -/+ slope * eps``."""
        return self.omega0 - self.slope * eps, self.omega0 + self.slope * eps


@dataclass(frozen=True)
class FrequencyClass:
    tag: str
    witness: tuple[int, int] | None = None

    def __post_init__(self):
        if self.tag not in (SUM_RESONANT_UNSTABLE, DIFFERENCE_RESONANT_STABLE, NON_RESONANT_STABLE):
            raise ValueError(f"unknown frequency class {self.tag!r}")
        if (self.tag == NON_RESONANT_STABLE) != (self.witness is None):
            raise ValueError("resonant classes carry a witness pair, non-resonant ones do not")


def default_ctrl_tol(p: np.ndarray) -> float:
    return 1e-9 * float(np.max(np.sum(np.abs(p), axis=1))) if p.size else 0.0


def default_freq_tol(spec: Spectrum) -> float:
    return 1e-9 * max(1.0, float(np.max(spec.frequencies)) if spec.n else 1.0)


def _check_dims(spec: Spectrum, p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (spec.n, spec.n):
        raise ValueError(f"forcing matrix has shape {p.shape}, spectrum has dimension {spec.n}")
    return p


def projected_coupling(spec: Spectrum, p: np.ndarray, group_l: int, group_m: int) -> float:
    """``||V_m^T P V_l||_2`` for two eigenspace groups."""
    p = _check_dims(spec, p)
    g = spec.basis(group_m).T @ p @ spec.basis(group_l)
    return spectral_norm(g)


def controllability_check(spec: Spectrum, p: np.ndarray, group_l: int, group_m: int,
                          ctrl_tol: float | None = None) -> bool:
    """True when the forcing reaches the resonant pair, i.e. the tongue opens."""
    p = _check_dims(spec, p)
    if spec.is_zero_group(group_l) or spec.is_zero_group(group_m):
        raise ValueError("controllability is only defined for non-zero frequency groups")
    if ctrl_tol is None:
        ctrl_tol = default_ctrl_tol(p)
    return projected_coupling(spec, p, group_l, group_m) > ctrl_tol


def predict_first_order_tongues(spec: Spectrum, p: np.ndarray,
                                ctrl_tol: float | None = None) -> list[Tongue]:
    p = _check_dims(spec, p)
    if ctrl_tol is None:
        ctrl_tol = default_ctrl_tol(p)
    groups = spec.nonzero_groups()
    out = []
    for a, gl in enumerate(groups):
        wl = spec.group_frequency(gl)
        for gm in groups[a:]:
            wm = spec.group_frequency(gm)
            c = projected_coupling(spec, p, gl, gm)
            ok = c > ctrl_tol
            slope = c / (2.0 * math.sqrt(wl * wm)) if ok else 0.0
            out.append(Tongue(wl + wm, slope, gl, gm, 1, ok, c))
    out.sort(key=lambda t: (t.omega0, t.group_l, t.group_m))
    return out


def predict_higher_order_frequencies(spec: Spectrum, max_order: int) -> list[Tongue]:
    """Sum-branch subharmonic tongue locations ``(Omega_l + Omega_m)/n``.

    No width is available beyond first order, so these carry ``slope == 0`` and
    ``controllable == False`` and are skipped by overlays.
    """
    if max_order < 2:
        raise ValueError("max_order must be at least 2")
    groups = spec.nonzero_groups()
    out = []
    for order in range(2, max_order + 1):
        for a, gl in enumerate(groups):
            for gm in groups[a:]:
                w = (spec.group_frequency(gl) + spec.group_frequency(gm)) / order
                out.append(Tongue(w, 0.0, gl, gm, order, False))
    out.sort(key=lambda t: (t.omega0, t.order, t.group_l, t.group_m))
    return out


def difference_frequencies(spec: Spectrum, max_order: int = 1) -> list[tuple[int, int, int, float]]:
    """Diagnostic ``(group_l, group_m, order, |Omega_l - Omega_m|/order)`` entries.

    These are neutral to first order and never open a tongue.
    """
    groups = spec.nonzero_groups()
    out = []
    for order in range(1, max_order + 1):
        for a, gl in enumerate(groups):
            for gm in groups[a + 1:]:
                d = abs(spec.group_frequency(gm) - spec.group_frequency(gl)) / order
                if d > 0:
                    out.append((gl, gm, order, d))
    out.sort(key=lambda r: (r[3], r[2], r[0], r[1]))
    return out


def classify_frequency(spec: Spectrum, p: np.ndarray, omega: float,
                       freq_tol: float | None = None,
                       ctrl_tol: float | None = None) -> FrequencyClass:
    if not omega > 0:
        raise ValueError("omega must be positive")
    p = _check_dims(spec, p)
    if freq_tol is None:
        freq_tol = default_freq_tol(spec)
    if ctrl_tol is None:
        ctrl_tol = default_ctrl_tol(p)
    groups = spec.nonzero_groups()
    best = None
    for a, gl in enumerate(groups):
        for gm in groups[a:]:
            miss = abs(omega - (spec.group_frequency(gl) + spec.group_frequency(gm)))
            if miss <= freq_tol and projected_coupling(spec, p, gl, gm) > ctrl_tol:
                if best is None or miss < best[0]:
                    best = (miss, (gl, gm))
    if best is not None:
        return FrequencyClass(SUM_RESONANT_UNSTABLE, best[1])
    for gl, gm, _, d in difference_frequencies(spec):
        if abs(omega - d) <= freq_tol:
            return FrequencyClass(DIFFERENCE_RESONANT_STABLE, (gl, gm))
    return FrequencyClass(NON_RESONANT_STABLE)


class SlowTime(NamedTuple):
    matrix: np.ndarray
    bounded: bool
    discriminant: float


def slow_time_matrix(omega_l: float, omega_m: float, kappa0: float, kappa1: float,
                     coupling: float) -> SlowTime:
    """Slow-time amplitude matrix at a sum resonance.

    The pair amplitudes evolve as ``c' = j/(2 sqrt(kappa0)) A c``; they stay
    bounded iff ``A`` has real eigenvalues (non-negative discriminant).
    """
    if not (omega_l > 0 and omega_m > 0):
        raise ValueError("frequencies must be positive")
    a = np.array([
        [kappa1 * omega_l, kappa0 * coupling / (2.0 * omega_l)],
        [-kappa0 * coupling / (2.0 * omega_m), -kappa1 * omega_m],
    ])
    tr = a[0, 0] + a[1, 1]
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    disc = tr * tr - 4.0 * det
    scale = tr * tr + 4.0 * abs(det)
    return SlowTime(a, bool(disc >= -1e-12 * scale), float(disc))


def critical_kappa1(omega_l: float, omega_m: float, coupling: float) -> float:
    """Slope magnitude in (kappa, eps) below which the sum resonance is unstable."""
    kappa0 = 1.0 / (omega_l + omega_m) ** 2
    return abs(coupling) * kappa0 ** 1.5 / math.sqrt(omega_l * omega_m)


def kappa_to_omega_slope(omega0: float, kappa1: float) -> float:
    """Map a test-curve slope in ``kappa = 1/omega^2`` to ``d omega / d eps``."""
    if not omega0 > 0:
        raise ValueError("omega0 must be positive")
    return -kappa1 * omega0 ** 3 / 2.0


def omega_to_kappa_slope(omega0: float, a: float) -> float:
    if not omega0 > 0:
        raise ValueError("omega0 must be positive")
    return -2.0 * a / omega0 ** 3


def tongues_to_csv(tongues: list[Tongue]) -> str:
    rows = [TONGUE_CSV_HEADER]
    for t in sorted(tongues, key=lambda t: (t.omega0, t.order, t.group_l, t.group_m)):
        rows.append(",".join([fmt(t.omega0), fmt(t.slope), str(t.order),
                              str(t.group_l), str(t.group_m), fmt_bool(t.controllable)]))
    return "\n".join(rows) + "\n"


def tongues_from_csv(text: str) -> list[Tongue]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != TONGUE_CSV_HEADER:
        raise ValueError("not a tongue CSV (bad header)")
    out = []
    for ln in lines[1:]:
        w, s, order, gl, gm, ok = ln.split(",")
        out.append(Tongue(float(w), float(s), int(gl), int(gm), int(order), parse_bool(ok)))
    return out
