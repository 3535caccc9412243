"""Acceptance criteria, one pass/fail line each in the terminal summary.

Tolerances are pinned constants below; none are loosened per run.  The torus
lower-bound criterion is reported per lattice size so that each size passes or
fails on its own.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from netresonance.cli import main
from netresonance.floquet import ForcedSystem, analyse, structural_check
from netresonance.graph import (edge_laplacian, laplacian, load_graph, perturbed_ring, ring_graph,
                                spectral_decomposition, torus_graph)
from netresonance.lattice import (ring_critical_frequencies, ring_edge_tongue_slopes,
                                  ring_subnetwork_slopes, torus_critical_frequencies,
                                  torus_edge_slope_bound, torus_spectrum)
from netresonance.mathieu import MathieuParams, mathieu_stability, mathieu_steps, mathieu_system
from netresonance.modes import mode_report, widest_tongue
from netresonance.predictor import (DIFFERENCE_RESONANT_STABLE, classify_frequency,
                                    difference_frequencies, predict_first_order_tongues)
from netresonance.sweep import SweepSpec, sweep

DATA = Path(__file__).parent / "data"
RESULTS: list[str] = []

SQRT3 = math.sqrt(3.0)

# Pinned tolerances and budgets.
MATHIEU_EDGE_TOL = 0.01
MATHIEU_BUDGET_S = 10.0
DECOUPLING_BUDGET_S = 60.0
POINT_BUDGET_S = 30.0
RING_BUDGET_S = 10.0
SLOPE_MATCH_TOL = 1e-9
FREQ_CEIL_TOL = 1e-12
TORUS_EIG_TOL = 1e-9
TORUS_BOUND_TOL = 1e-12
STRUCT_TOL = 1e-6
TRIANGLE_ALIGN_MIN = 0.9
# Oracle run: ring N=8, weights 1 + 0.01 N(0,1) with default_rng(7), edge 0-1,
# widest tongue centre, eps = 0.05 gave alignment 0.99992.
RING8_SEED = 7
RING8_RECORDED_ALIGNMENT = 0.99992
RING16_BUDGET_S = 120.0


def report(n, label, ok, detail):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'}  criterion {n:>2} {label}: {detail}")
    assert ok, detail


def triangle():
    L = laplacian(load_graph((DATA / "tri.txt").read_text()))
    return L, spectral_decomposition(L), edge_laplacian(3, 0, 1)


def path3():
    L = laplacian(load_graph((DATA / "path3.txt").read_text()))
    return L, spectral_decomposition(L)


def micro_sweep(centre):
    return np.linspace(centre - 0.02, centre + 0.02, 5)


SMALL_EPS = (0.01, 0.02, 0.03, 0.04, 0.05)


# -- 1 ---------------------------------------------------------------------

def mathieu_interval():
    ws = np.linspace(1.8, 2.2, 400)
    unstable = np.array([mathieu_stability(MathieuParams(1.0, 0.1, w)).unstable for w in ws])
    return ws, unstable


def test_01_mathieu_ground_truth():
    t0 = time.perf_counter()
    ws, unstable = mathieu_interval()
    dt = time.perf_counter() - t0
    hit = ws[unstable]
    lo, hi = hit.min(), hit.max()
    contiguous = np.all(unstable[np.argmax(unstable):len(unstable) - np.argmax(unstable[::-1])])
    ok = (abs(lo - 1.95) <= MATHIEU_EDGE_TOL and abs(hi - 2.05) <= MATHIEU_EDGE_TOL
          and contiguous and dt < MATHIEU_BUDGET_S)
    report(1, "Mathieu first tongue", ok,
           f"unstable omega in [{lo:.4f}, {hi:.4f}] vs 2 -/+ 0.05 (tol {MATHIEU_EDGE_TOL}), {dt:.1f}s")


# -- 2 ---------------------------------------------------------------------

def decoupling_specs():
    L, _, _ = triangle()
    common = dict(omega_range=(1.0, 4.5), eps_range=(0.3 / 16, 0.3), resolution=(64, 16))
    return (SweepSpec(L, L, **common), SweepSpec(L, L, full_network=True, **common))


def near_boundary(u):
    edge = np.zeros_like(u)
    edge[1:] |= u[1:] != u[:-1]
    edge[:-1] |= u[1:] != u[:-1]
    return edge


def test_02_full_network_decoupling():
    t0 = time.perf_counter()
    full, modal = decoupling_specs()
    a, b = sweep(full), sweep(modal)
    dt = time.perf_counter() - t0
    differ = a.unstable != b.unstable
    excused = near_boundary(a.unstable) | near_boundary(b.unstable)
    bad = int(np.sum(differ & ~excused))
    ok = bad == 0 and dt < DECOUPLING_BUDGET_S
    report(2, "full-network decoupling", ok,
           f"{int(differ.sum())} differing cells, {bad} away from a boundary, "
           f"{int(a.unstable.sum())} unstable of 1024, {dt:.1f}s")


# -- 3 ---------------------------------------------------------------------

def single_edge_systems():
    L, s, p = triangle()
    (t,) = predict_first_order_tongues(s, p)
    out = []
    for eps in (0.02, 0.05, 0.1):
        for k, w in enumerate((t.omega0, t.omega0 - 2 * t.slope * eps, t.omega0 + 2 * t.slope * eps)):
            out.append((ForcedSystem(L, p, eps, w), k == 0))
    return t, out


def test_03_single_edge_theorem():
    t0 = time.perf_counter()
    t, systems = single_edge_systems()
    pred_ok = (abs(t.omega0 - 2 * SQRT3) <= 1e-12 * 2 * SQRT3 and abs(t.slope - 1 / SQRT3) <= 1e-12)
    wrong = [(round(s.epsilon, 3), round(s.omega, 4)) for s, want in systems if analyse(s).unstable != want]
    dt = time.perf_counter() - t0
    ok = pred_ok and not wrong and dt < POINT_BUDGET_S
    report(3, "single-edge tongue", ok,
           f"omega0={t.omega0:.12g} slope={t.slope:.12g}; misclassified {wrong}, {dt:.1f}s")


# -- 4 ---------------------------------------------------------------------

def difference_systems():
    L, s = path3()
    p = edge_laplacian(3, 0, 1)
    diffs = difference_frequencies(s)
    out = [ForcedSystem(L, p, e, w) for *_, d in diffs for e in SMALL_EPS for w in micro_sweep(d)]
    return s, p, diffs, out


def test_04_difference_frequencies_stable():
    t0 = time.perf_counter()
    s, p, diffs, systems = difference_systems()
    tags = [classify_frequency(s, p, d).tag for *_, d in diffs]
    unstable = [(sys.epsilon, round(sys.omega, 4)) for sys in systems if analyse(sys).unstable]
    dt = time.perf_counter() - t0
    ok = (len(set(np.round(s.eigenvalues, 9))) == 3 and all(t == DIFFERENCE_RESONANT_STABLE for t in tags)
          and not unstable and dt < POINT_BUDGET_S)
    report(4, "difference frequencies stable", ok,
           f"|Omega_l - Omega_m| = {[round(d, 6) for *_, d in diffs]}, {len(systems)} runs, "
           f"unstable {unstable}, {dt:.1f}s")


# -- 5 ---------------------------------------------------------------------

def controllability_systems():
    L, s = path3()
    p = edge_laplacian(3, 0, 2)
    tongues = predict_first_order_tongues(s, p)
    (t,) = [t for t in tongues if (t.group_l, t.group_m) == (1, 2)]
    out = [ForcedSystem(L, p, e, w) for e in SMALL_EPS for w in micro_sweep(t.omega0)]
    return t, out


def test_05_controllability_filter():
    t0 = time.perf_counter()
    t, systems = controllability_systems()
    unstable = [(sys.epsilon, round(sys.omega, 4)) for sys in systems if analyse(sys).unstable]
    dt = time.perf_counter() - t0
    ok = (t.slope == 0.0 and not t.controllable and abs(t.omega0 - (1 + SQRT3)) < 1e-12
          and not unstable and dt < POINT_BUDGET_S)
    report(5, "controllability filter", ok,
           f"omega0={t.omega0:.12g} slope={t.slope} controllable={t.controllable}; "
           f"unstable {unstable}, {dt:.1f}s")


# -- 6 ---------------------------------------------------------------------

def test_06_ring_bounds():
    t0 = time.perf_counter()
    notes, ok = [], True
    for n in (4, 8, 16):
        wmax = max(w for *_, w in ring_critical_frequencies(n))
        analytic = ring_edge_tongue_slopes(n)
        widest = max(a for *_, a in analytic)
        s = spectral_decomposition(laplacian(ring_graph(n)))
        numeric = sorted(t.slope for t in predict_first_order_tongues(s, edge_laplacian(n, 0, 1)))
        err = float(np.max(np.abs(np.array(sorted(a for *_, a in analytic)) - numeric)))
        good = wmax <= 4 + FREQ_CEIL_TOL and 1 / n <= widest <= 2 / n and err <= SLOPE_MATCH_TOL
        ok &= good
        notes.append(f"N={n}: max omega {wmax:.12g}, widest {widest:.6g} in [{1 / n:.4g}, {2 / n:.4g}], "
                     f"match {err:.1e}")
    dt = time.perf_counter() - t0
    ok &= dt < RING_BUDGET_S
    report(6, "ring bounds", ok, "; ".join(notes) + f", {dt:.1f}s")


# -- 7 ---------------------------------------------------------------------

def test_07_full_ring_forcing():
    n = 8
    widest = max(a for *_, a in ring_subnetwork_slopes(n, [(i, (i + 1) % n) for i in range(n)]))
    report(7, "full-ring widest slope", abs(widest - 1) <= 1e-9, f"N=8 widest slope {widest:.15g}")


# -- 8 ---------------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5])
def test_08_torus(n):
    analytic = sorted(m.eigenvalue for m in torus_spectrum(n, 2))
    numeric = spectral_decomposition(laplacian(torus_graph(n, 2))).eigenvalues
    eig_err = float(np.max(np.abs(np.array(analytic) - numeric)))
    best = max(s.lower_bound for s in torus_edge_slope_bound(n, 2))
    wmax = max(w for *_, w in torus_critical_frequencies(n, 2))
    ok = (eig_err <= TORUS_EIG_TOL and abs(best - 1 / n ** 2) <= TORUS_BOUND_TOL
          and wmax <= 4 * math.sqrt(2) + FREQ_CEIL_TOL)
    report(8, f"torus d=2 N={n}", ok,
           f"eigenvalue match {eig_err:.1e}; max lower bound {best:.12g} vs 1/N^2 = {1 / n ** 2:.12g}; "
           f"max omega {wmax:.12g} <= 4 sqrt 2")


# -- 9 ---------------------------------------------------------------------

def suite_floquet_runs():
    """Every network point run above plus a fixed sample of sweep cells and Mathieu points."""
    runs = [(s, None) for s, _ in single_edge_systems()[1]]
    runs += [(s, None) for s in difference_systems()[3]]
    runs += [(s, None) for s in controllability_systems()[1]]
    L, s, p = triangle()
    (t,) = predict_first_order_tongues(s, p)
    runs.append((ForcedSystem(L, p, 0.05, t.omega0), None))
    g = perturbed_ring(8, 0.01, RING8_SEED)
    L8, p8 = laplacian(g), edge_laplacian(8, 0, 1)
    w = widest_tongue(predict_first_order_tongues(spectral_decomposition(L8), p8))
    runs.append((ForcedSystem(L8, p8, 0.05, w.omega0), None))
    full, _ = decoupling_specs()
    for i in range(0, 64, 7):
        for j in range(0, 16, 5):
            runs.append((ForcedSystem(full.L, full.P, full.epsilons[j], full.omegas[i]), None))
    for w in np.linspace(1.8, 2.2, 400)[::40]:
        mp = MathieuParams(1.0, 0.1, w)
        runs.append((mathieu_system(mp), mathieu_steps(mp)))
    return runs


def test_09_structural_invariants():
    worst = dict(det=0.0, symp=0.0, pair=0.0, dbl=0.0)
    runs = suite_floquet_runs()
    for sys, steps in runs:
        r = structural_check(sys, steps)
        worst["det"] = max(worst["det"], r.det_error)
        worst["symp"] = max(worst["symp"], r.symplectic_residual)
        worst["pair"] = max(worst["pair"], r.pairing_error)
        worst["dbl"] = max(worst["dbl"], r.step_doubling_change)
    ok = (worst["det"] <= STRUCT_TOL and worst["symp"] <= STRUCT_TOL and worst["pair"] <= STRUCT_TOL
          and worst["dbl"] < STRUCT_TOL)
    report(9, "structural invariants", ok,
           f"{len(runs)} runs; worst |det-1| {worst['det']:.1e}, symplectic {worst['symp']:.1e}, "
           f"pairing {worst['pair']:.1e}, step doubling {worst['dbl']:.1e}")


# -- 10 --------------------------------------------------------------------

def ring_alignment(n, seed):
    g = perturbed_ring(n, 0.01, seed)
    L, p = laplacian(g), edge_laplacian(n, 0, 1)
    s = spectral_decomposition(L)
    w = widest_tongue(predict_first_order_tongues(s, p))
    return mode_report(ForcedSystem(L, p, 0.05, w.omega0), s, w).alignment


def test_10_mode_shape():
    L, s, p = triangle()
    (t,) = predict_first_order_tongues(s, p)
    tri = mode_report(ForcedSystem(L, p, 0.05, t.omega0), s, t).alignment
    ring8 = ring_alignment(8, RING8_SEED)
    t0 = time.perf_counter()
    ring16 = ring_alignment(16, RING8_SEED)
    dt = time.perf_counter() - t0
    ok = (tri >= TRIANGLE_ALIGN_MIN and ring8 >= RING8_RECORDED_ALIGNMENT - 0.05
          and dt < RING16_BUDGET_S)
    report(10, "mode shape", ok,
           f"triangle {tri:.6f} (>= {TRIANGLE_ALIGN_MIN}); ring N=8 {ring8:.6f} "
           f"(>= {RING8_RECORDED_ALIGNMENT - 0.05:.5f}); ring N=16 {ring16:.6f} in {dt:.2f}s")


# -- 11 --------------------------------------------------------------------

def cli_bytes(tmp_path, argv, tag):
    out = tmp_path / f"{tag}.csv"
    code = main(argv + ["--out", str(out)])
    assert code == 0, argv
    return out.read_bytes()


def test_11_determinism(tmp_path):
    tri, edge = str(DATA / "tri.txt"), str(DATA / "edge01.txt")
    sweep_args = ["sweep", "--graph", tri, "--forced", edge, "--omega-min", "3.2", "--omega-max", "3.7",
                  "--eps-max", "0.3", "--res-omega", "16", "--res-eps", "8"]
    full_args = ["sweep", "--graph", tri, "--full-network", "--omega-min", "1", "--omega-max", "4.5",
                 "--eps-max", "0.3", "--res-omega", "64", "--res-eps", "16"]
    commands = {
        "predict": ["predict", "--graph", tri, "--forced", edge],
        "mathieu": ["mathieu", "--graph", tri, "--max-order", "3"],
        "ring": ["ring", "--n", "8", "--full"],
        "torus": ["torus", "--n", "5", "--d", "2", "--bounds"],
        "modes": ["modes", "--graph", tri, "--forced", edge, "--eps", "0.05"],
    }
    mismatched = []
    for name, argv in commands.items():
        if cli_bytes(tmp_path, argv, name + "a") != cli_bytes(tmp_path, argv, name + "b"):
            mismatched.append(name)
    for name, argv in (("sweep", sweep_args), ("sweep-full", full_args)):
        ref = cli_bytes(tmp_path, argv + ["--workers", "1"], name + "1")
        for w in ("1", "2", "3"):
            if cli_bytes(tmp_path, argv + ["--workers", w], f"{name}{w}x") != ref:
                mismatched.append(f"{name} workers={w}")
    report(11, "determinism", not mismatched,
           f"{len(commands) + 2} outputs compared across repeats and worker counts; mismatched {mismatched}")
