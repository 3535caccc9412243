"""Unstable Floquet mode versus the predicted resonant eigenspace pair."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import ForcedSystem, analyse
from .graph import Spectrum
from .predictor import Tongue
from .textio import fmt


class StablePointError(ValueError):
    """No unstable mode exists at the requested forcing point."""


@dataclass(frozen=True, eq=False)
class ModeReport:
    tongue: Tongue
    numerical_mode: np.ndarray  # position part, unit norm
    predicted_basis: np.ndarray  # orthonormal columns spanning V_l + V_m
    alignment: float
    spectral_radius: float

    @property
    def projection(self) -> np.ndarray:
        b = self.predicted_basis
        return b @ (b.T @ self.numerical_mode)


def predicted_mode_span(spec: Spectrum, t: Tongue) -> np.ndarray:
    ng = len(spec.groups)
    for g in (t.group_l, t.group_m):
        if not 0 <= g < ng:
            raise ValueError(f"unknown eigenvalue group {g} (spectrum has {ng})")
    groups = [t.group_l] if t.group_l == t.group_m else [t.group_l, t.group_m]
    b = np.hstack([spec.basis(g) for g in groups])
    # Already orthonormal for distinct groups; QR only cleans rounding.
    q, r = np.linalg.qr(b)
    return q * np.sign(np.where(np.diag(r) == 0, 1.0, np.diag(r)))


def subspace_alignment(mode: np.ndarray, basis: np.ndarray) -> float:
    """``||B B^* mode||_2`` for a unit mode and orthonormal columns ``B``."""
    mode = np.asarray(mode)
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    if basis.shape[0] != mode.shape[0]:
        raise ValueError(f"mode has length {mode.shape[0]}, basis has {basis.shape[0]} rows")
    nrm = np.linalg.norm(mode)
    if nrm == 0:
        raise ValueError("mode must be non-zero")
    a = float(np.linalg.norm(basis.T @ (mode / nrm)))
    return min(a, 1.0)


def mode_report(sys: ForcedSystem, spec: Spectrum, t: Tongue, steps: int | None = None,
                stab_tol: float | None = None) -> ModeReport:
    kw = {} if stab_tol is None else {"stab_tol": stab_tol}
    r = analyse(sys, steps, **kw)
    if not r.unstable:
        raise StablePointError(f"stable point (spectral radius {r.spectral_radius:.12g}): "
                               "no unstable mode to report")
    n = sys.n
    pos = r.dominant_mode[:n]
    pos = pos / np.linalg.norm(pos)
    i = int(np.argmax(np.abs(pos)))
    pos = pos * (abs(pos[i]) / pos[i])
    basis = predicted_mode_span(spec, t)
    return ModeReport(t, pos, basis, subspace_alignment(pos, basis), r.spectral_radius)


def report_to_csv(rep: ModeReport) -> str:
    rows = ["node,re(mode),im(mode),re(proj),im(proj)"]
    proj = rep.projection
    for k, (z, p) in enumerate(zip(rep.numerical_mode, proj)):
        rows.append(f"{k},{fmt(z.real)},{fmt(z.imag)},{fmt(p.real)},{fmt(p.imag)}")
    rows.append(f"alignment={fmt(rep.alignment)}")
    return "\n".join(rows) + "\n"


def widest_tongue(tongues: list[Tongue]) -> Tongue:
    live = [t for t in tongues if t.controllable]
    if not live:
        raise ValueError("no controllable tongue")
    return max(live, key=lambda t: (t.slope, -t.omega0))
