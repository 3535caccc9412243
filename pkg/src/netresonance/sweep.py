"""(omega, eps) stability sweeps, grid CSV and first-order tongue overlays."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .floquet import DEFAULT_STAB_TOL, ForcedSystem, IntegrationError, analyse
from .graph import spectral_decomposition
from .mathieu import TRACE_TOL, full_network_stability
from .predictor import Tongue
from .textio import fmt, fmt_bool, parse_bool

GRID_HEADER = "omega,eps,growth_rate,unstable"
OVERLAY_HEADER = "tongue_id,branch,omega,eps"


@dataclass(frozen=True, eq=False)
class SweepSpec:
    L: np.ndarray
    P: np.ndarray
    omega_range: tuple[float, float]
    eps_range: tuple[float, float]
    resolution: tuple[int, int]
    steps: int | None = None  # None: per-cell default step rule
    stab_tol: float = DEFAULT_STAB_TOL
    full_network: bool = False  # decoupled modal Mathieu path, P taken equal to L

    def __post_init__(self):
        (w0, w1), (e0, e1) = self.omega_range, self.eps_range
        if not (0 < w0 < w1):
            raise ValueError(f"need 0 < omega_min < omega_max, got {self.omega_range}")
        if not (0 <= e0 < e1):
            raise ValueError(f"need 0 <= eps_min < eps_max, got {self.eps_range}")
        n_w, n_e = self.resolution
        if n_w < 2 or n_e < 2:
            raise ValueError(f"resolutions must be >= 2, got {self.resolution}")
        # Validates shapes once up front.
        ForcedSystem(self.L, self.P, 0.0, 1.0)

    @property
    def omegas(self) -> np.ndarray:
        return np.linspace(self.omega_range[0], self.omega_range[1], self.resolution[0])

    @property
    def epsilons(self) -> np.ndarray:
        return np.linspace(self.eps_range[0], self.eps_range[1], self.resolution[1])


@dataclass(frozen=True, eq=False)
class StabilityGrid:
    omegas: np.ndarray
    epsilons: np.ndarray
    growth: np.ndarray  # shape (n_omega, n_eps); inf marks a blown-up integration
    unstable: np.ndarray

    def __post_init__(self):
        shape = (len(self.omegas), len(self.epsilons))
        if self.growth.shape != shape or self.unstable.shape != shape:
            raise ValueError("grid arrays do not match the axes")
        if np.any(self.growth < 0):
            raise ValueError("growth exponents must be non-negative")
        if np.any(self.unstable != (self.growth > 0)):
            raise ValueError("unstable must coincide with positive growth")


def _cell(L, P, eps, omega, steps, stab_tol, full_network, spectrum):
    try:
        if full_network:
            return full_network_stability(spectrum, eps, omega, steps, TRACE_TOL).growth_exponent
        return analyse(ForcedSystem(L, P, eps, omega), steps, stab_tol).growth_exponent
    except IntegrationError:
        return math.inf


def _column(args):
    L, P, omega, epsilons, steps, stab_tol, full_network = args
    spectrum = spectral_decomposition(L) if full_network else None
    return [_cell(L, P, float(e), float(omega), steps, stab_tol, full_network, spectrum)
            for e in epsilons]


def sweep(spec: SweepSpec, workers: int | None = 1) -> StabilityGrid:
    """Classify every grid cell; output is independent of ``workers``.

    Work is split by omega column and results are placed by column index.
    ``workers=None`` uses every available CPU.
    """
    omegas, epsilons = spec.omegas, spec.epsilons
    p = spec.L if spec.full_network else spec.P
    tasks = [(spec.L, p, w, epsilons, spec.steps, spec.stab_tol, spec.full_network) for w in omegas]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ValueError("workers must be positive")
    if workers == 1:
        cols = [_column(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            cols = list(ex.map(_column, tasks))
    growth = np.array(cols, dtype=float).reshape(len(omegas), len(epsilons))
    return StabilityGrid(omegas, epsilons, growth, growth > 0)


def export_grid(g: StabilityGrid) -> str:
    rows = [GRID_HEADER]
    for i, w in enumerate(g.omegas):
        for j, e in enumerate(g.epsilons):
            rows.append(f"{fmt(w)},{fmt(e)},{fmt(g.growth[i, j])},{fmt_bool(g.unstable[i, j])}")
    return "\n".join(rows) + "\n"


def parse_grid(text: str) -> StabilityGrid:
    """Inverse of ``export_grid`` (values carry the written 12 significant digits)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != GRID_HEADER:
        raise ValueError("not a stability grid CSV (bad header)")
    recs = []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 4:
            raise ValueError(f"line {k}: expected 4 fields")
        recs.append((float(parts[0]), float(parts[1]), float(parts[2]), parse_bool(parts[3])))
    omegas = sorted({r[0] for r in recs})
    epsilons = sorted({r[1] for r in recs})
    if len(recs) != len(omegas) * len(epsilons):
        raise ValueError("grid rows do not form a full omega x eps lattice")
    growth = np.empty((len(omegas), len(epsilons)))
    unstable = np.empty_like(growth, dtype=bool)
    for k, (w, e, gr, u) in enumerate(recs):
        i, j = divmod(k, len(epsilons))
        if w != omegas[i] or e != epsilons[j]:
            raise ValueError(f"line {k + 2}: rows are not in omega-major order")
        growth[i, j] = gr
        unstable[i, j] = u
    return StabilityGrid(np.array(omegas), np.array(epsilons), growth, unstable)


def export_tongue_overlay(tongues: list[Tongue], eps_max: float) -> str:
    """Boundary segments ``omega0 -/+ slope eps`` at ``eps = 0`` and ``eps_max``.

    Only controllable tongues appear; ``tongue_id`` is the position among them.
    """
    if not eps_max > 0:
        raise ValueError("eps_max must be positive")
    rows = [OVERLAY_HEADER]
    kept = [t for t in tongues if t.controllable and t.slope > 0]
    for tid, t in enumerate(kept):
        for branch, sign in (("lower", -1.0), ("upper", 1.0)):
            for e in (0.0, eps_max):
                rows.append(f"{tid},{branch},{fmt(t.omega0 + sign * t.slope * e)},{fmt(e)}")
    return "\n".join(rows) + "\n"
