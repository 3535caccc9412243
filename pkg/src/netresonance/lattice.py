"""Closed-form spectra and tongue slopes for rings and periodic lattices.

Unit-weight ring of ``N`` nodes, ``theta = 2 pi / N``: Laplacian eigenvalues
``2 (1 - cos(m theta))`` with unit Fourier vectors ``e^{j m theta i} / sqrt(N)``.
Modes ``m`` and ``N - m`` share an eigenvalue, so eigenspace classes are
indexed by ``m = 1 .. N // 2`` (``m = N/2`` is a singleton when ``N`` is even).
The d-dimensional torus is the Cartesian product with eigenvalue
``2 sum_i (1 - cos(m_i theta))``.

All slopes here are ``||V_m^* P V_l||_2 / (2 sqrt(Omega_l Omega_m))`` evaluated
through the projected Fourier matrix, so they are comparable to the generic
predictor on the assembled graph.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import group_sorted_values, torus_index
from .linalg import spectral_norm
from .predictor import Tongue

CLASS_TOL = 1e-9


@dataclass(frozen=True)
class LatticeMode:
    index: tuple[int, ...]
    eigenvalue: float
    frequency: float
    multiplicity_class: int  # size of the component-wise {m, N - m} orbit
    conjugate: tuple[int, ...]
    class_id: int = -1  # position in the ascending list of distinct eigenvalues


def _check_nd(N: int, d: int = 1):
    if N < 3:
        raise ValueError(f"lattice needs N >= 3, got {N}")
    if d < 1:
        raise ValueError(f"lattice dimension must be >= 1, got {d}")


def delta(t: float) -> float:
    """``|1 - e^{jt}| (2 - 2 cos t)^{-1/4}``, the per-index edge factor."""
    c = 2.0 - 2.0 * math.cos(t)
    if c <= 0.0:
        return 0.0
    return abs(1.0 - cmath.exp(1j * t)) * c ** -0.25


def _eig(m: Sequence[int], theta: float) -> float:
    return 2.0 * sum(1.0 - math.cos(mi * theta) for mi in m)


def torus_spectrum(N: int, d: int) -> list[LatticeMode]:
    """Every multi-index of ``Z_N^d`` with its eigenvalue and class id."""
    _check_nd(N, d)
    theta = 2.0 * math.pi / N
    raw = []
    for rev in itertools.product(range(N), repeat=d):
        m = tuple(reversed(rev))  # first coordinate fastest, matching torus_index
        lam = _eig(m, theta)
        conj = tuple((-mi) % N for mi in m)
        orbit = 2 ** sum(1 for mi in m if (-mi) % N != mi)
        raw.append((m, lam, conj, orbit))
    lams = sorted(r[1] for r in raw)
    groups = group_sorted_values(lams, CLASS_TOL)
    edges = [lams[g[0]] for g in groups]
    out = []
    for m, lam, conj, orbit in raw:
        cid = int(np.argmin([abs(lam - e) for e in edges]))
        out.append(LatticeMode(m, lam, math.sqrt(lam), orbit, conj, cid))
    return out


def ring_spectrum(N: int) -> list[LatticeMode]:
    return torus_spectrum(N, 1)


@dataclass(frozen=True)
class ModeClass:
    class_id: int
    eigenvalue: float
    frequency: float
    members: tuple[tuple[int, ...], ...]

    @property
    def representative(self) -> tuple[int, ...]:
        return self.members[0]


def mode_classes(N: int, d: int = 1) -> list[ModeClass]:
    """Non-zero eigenvalue classes, ascending, members sorted lexicographically."""
    modes = torus_spectrum(N, d)
    by: dict[int, list[LatticeMode]] = {}
    for md in modes:
        by.setdefault(md.class_id, []).append(md)
    out = []
    for cid in sorted(by):
        ms = by[cid]
        lam = ms[0].eigenvalue
        if abs(lam) <= CLASS_TOL:
            continue
        members = tuple(sorted(md.index for md in ms))
        lam = float(np.mean([md.eigenvalue for md in ms]))
        out.append(ModeClass(cid, lam, math.sqrt(lam), members))
    return out



def ring_critical_frequencies(N: int) -> list[tuple[int, int, float]]:
    """``(l, m, Omega_l + Omega_m)`` for class labels ``1 <= l <= m <= N // 2``."""
    _check_nd(N)
    theta = 2.0 * math.pi / N
    out = []
    for l in range(1, N // 2 + 1):
        for m in range(l, N // 2 + 1):
            w = math.sqrt(2.0) * (math.sqrt(1.0 - math.cos(l * theta))
                                  + math.sqrt(1.0 - math.cos(m * theta)))
            out.append((l, m, w))
    return out


def _nu(N: int, l: int, m: int) -> float:
    halves = (2 * l == N) + (2 * m == N)
    return (1.0, math.sqrt(2.0), 2.0)[halves]


def _ring_edge_base(N: int, i: int, k: int) -> int:
    if not (0 <= i < N and 0 <= k < N):
        raise ValueError(f"node index out of range for N={N}: ({i}, {k})")
    if (i + 1) % N == k:
        return i
    if (k + 1) % N == i:
        return k
    raise ValueError(f"({i}, {k}) is not a ring edge for N={N}")


def ring_edge_tongue_slopes(N: int, edge: tuple[int, int] = (0, 1)) -> list[tuple[int, int, float]]:
    """Single forced edge: ``|a_lm| = delta(m theta) delta(l theta) / (nu N)``.

    ``nu`` is 1, sqrt(2) or 2 as none, one or both of ``l, m`` equal ``N/2``.
    Translation invariance makes the result independent of ``edge``.
    """
    _check_nd(N)
    _ring_edge_base(N, *edge)
    theta = 2.0 * math.pi / N
    out = []
    for l in range(1, N // 2 + 1):
        for m in range(l, N // 2 + 1):
            a = delta(-m * theta) * delta(l * theta) / (_nu(N, l, m) * N)
            out.append((l, m, a))
    return out


def _class_indices(N: int, m: int) -> list[int]:
    return [m] if 2 * m == N else [m, N - m]


def ring_projected_coupling(N: int, edges: Sequence[tuple[int, int]], l: int, m: int) -> np.ndarray:
    """``U_m^* P U_l`` in the unit Fourier basis of classes ``m`` (rows) and ``l``.

    Each edge ``i -- i+1`` contributes
    ``e^{j theta i (b - a)} (1 - e^{j b theta}) (1 - e^{-j a theta}) / N``.
    """
    theta = 2.0 * math.pi / N
    bases = sorted({_ring_edge_base(N, i, k) for i, k in edges})
    if len(bases) != len(edges):
        raise ValueError("duplicate forced edge")
    rows, cols = _class_indices(N, m), _class_indices(N, l)
    g = np.zeros((len(rows), len(cols)), dtype=complex)
    for r, a in enumerate(rows):
        for c, b in enumerate(cols):
            f = (1.0 - cmath.exp(1j * b * theta)) * (1.0 - cmath.exp(-1j * a * theta)) / N
            g[r, c] = f * sum(cmath.exp(1j * theta * i * (b - a)) for i in bases)
    return g


def ring_subnetwork_slopes(N: int, edges: Sequence[tuple[int, int]]) -> list[tuple[int, int, float]]:
    """Slopes for a set of forced unit ring edges (exact 2-norm of the Fourier block)."""
    _check_nd(N)
    if not edges:
        raise ValueError("at least one forced edge is required")
    theta = 2.0 * math.pi / N
    omega = {m: math.sqrt(2.0 - 2.0 * math.cos(m * theta)) for m in range(1, N // 2 + 1)}
    out = []
    for l in range(1, N // 2 + 1):
        for m in range(l, N // 2 + 1):
            g = ring_projected_coupling(N, edges, l, m)
            out.append((l, m, spectral_norm(g) / (2.0 * math.sqrt(omega[l] * omega[m]))))
    return out


def torus_critical_frequencies(N: int, d: int) -> list[tuple[tuple[int, ...], tuple[int, ...], float]]:
    """``(l-rep, m-rep, Omega_l + Omega_m)`` over pairs of non-zero eigenvalue classes."""
    cls = mode_classes(N, d)
    out = []
    for a, cl in enumerate(cls):
        for cm in cls[a:]:
            out.append((cl.representative, cm.representative, cl.frequency + cm.frequency))
    return out


def _edge_coordinate(N: int, d: int, edge: tuple[int, int]) -> int:
    i, k = edge
    if not (0 <= i < N ** d and 0 <= k < N ** d):
        raise ValueError(f"node index out of range for N={N}, d={d}: {edge}")
    qi = [(i // N ** c) % N for c in range(d)]
    qk = [(k // N ** c) % N for c in range(d)]
    diff = [c for c in range(d) if qi[c] != qk[c]]
    if len(diff) != 1 or (qi[diff[0]] - qk[diff[0]]) % N not in (1, N - 1):
        raise ValueError(f"{edge} is not a lattice edge for N={N}, d={d}")
    return diff[0]


@dataclass(frozen=True)
class TorusSlope:
    l_index: tuple[int, ...]
    m_index: tuple[int, ...]
    omega0: float
    lower_bound: float
    exact: float


def torus_edge_slope_bound(N: int, d: int, edge: tuple[int, int] = (0, 1)) -> list[TorusSlope]:
    """Per class pair: single-representative lower bound and exact 2-norm slope.

    For one forced edge along coordinate ``c`` the coupling is rank one, so the
    exact norm factorises as ``||V_m^* e|| ||V_l^* e||`` with
    ``||V_m^* e||^2 = sum_{m' in class} |1 - e^{j m'_c theta}|^2 / N^d``.
    """
    _check_nd(N, d)
    c = _edge_coordinate(N, d, edge)
    theta = 2.0 * math.pi / N
    vol = N ** d
    cls = mode_classes(N, d)

    def amp(mi: tuple[int, ...]) -> float:
        return abs(1.0 - cmath.exp(1j * mi[c] * theta))

    proj = [math.sqrt(math.fsum(amp(mi) ** 2 for mi in k.members) / vol) for k in cls]
    out = []
    for a, cl in enumerate(cls):
        for b in range(a, len(cls)):
            cm = cls[b]
            exact = proj[a] * proj[b] / (2.0 * math.sqrt(cl.frequency * cm.frequency))
            lo, rep_l, rep_m = -1.0, cl.representative, cm.representative
            for ml in cl.members:
                for mm in cm.members:
                    v = amp(mm) * amp(ml) / (2.0 * vol * math.sqrt(cl.frequency * cm.frequency))
                    if v > lo:
                        lo, rep_l, rep_m = v, ml, mm
            out.append(TorusSlope(rep_l, rep_m, cl.frequency + cm.frequency, lo, exact))
    return out


def lattice_tongues(N: int, d: int, edge: tuple[int, int] = (0, 1)) -> list[Tongue]:
    """Exact single-edge tongues as ``Tongue`` records; groups are class ids."""
    cls = mode_classes(N, d)
    rep = {m: k for k in cls for m in k.members}
    out = []
    for s in torus_edge_slope_bound(N, d, edge):
        kl, km = rep[s.l_index], rep[s.m_index]
        ok = s.exact > 1e-12
        coupling = s.exact * 2.0 * math.sqrt(kl.frequency * km.frequency)
        out.append(Tongue(s.omega0, s.exact if ok else 0.0, kl.class_id, km.class_id, 1, ok, coupling))
    out.sort(key=lambda t: (t.omega0, t.group_l, t.group_m))
    return out


def ring_tongues(N: int, edges: Sequence[tuple[int, int]] = ((0, 1),)) -> list[Tongue]:
    """Ring tongues as ``Tongue`` records; groups are class labels ``m``."""
    freqs = {(l, m): w for l, m, w in ring_critical_frequencies(N)}
    out = []
    for l, m, a in ring_subnetwork_slopes(N, edges):
        ok = a > 1e-12
        theta = 2.0 * math.pi / N
        coupling = a * 2.0 * math.sqrt(math.sqrt(2 - 2 * math.cos(l * theta))
                                       * math.sqrt(2 - 2 * math.cos(m * theta)))
        out.append(Tongue(freqs[(l, m)], a if ok else 0.0, l, m, 1, ok, coupling))
    out.sort(key=lambda t: (t.omega0, t.group_l, t.group_m))
    return out
