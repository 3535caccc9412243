"""Command-line entry point: ``netresonance <command> [flags]``.

Exit codes: 0 success, 2 usage or input error, 1 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import lattice
from .floquet import DEFAULT_STAB_TOL, ForcedSystem, IntegrationError
from .graph import GraphFormatError, Graph, laplacian, load_graph, spectral_decomposition
from .linalg import ConvergenceError
from .mathieu import MathieuParams, full_network_tongues, mathieu_stability
from .modes import StablePointError, mode_report, report_to_csv, widest_tongue
from .predictor import (predict_first_order_tongues, predict_higher_order_frequencies,
                        tongues_to_csv)
from .sweep import SweepSpec, export_grid, export_tongue_overlay, sweep
from .textio import fmt


class UsageError(Exception):
    pass


def _read_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read graph file {path}: {exc.strerror}") from None
    return load_graph(text)


def _forced(g: Graph, path: str) -> np.ndarray:
    f = _read_graph(path)
    if f.n != g.n:
        raise UsageError(f"forced subnetwork has {f.n} nodes, graph has {g.n}")
    return laplacian(f)


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def cmd_predict(a) -> int:
    g = _read_graph(a.graph)
    spec = spectral_decomposition(laplacian(g))
    p = _forced(g, a.forced)
    tongues = predict_first_order_tongues(spec, p, a.ctrl_tol)
    if a.max_order > 1:
        tongues += predict_higher_order_frequencies(spec, a.max_order)
    _emit(tongues_to_csv(tongues), a.out)
    if a.overlay:
        Path(a.overlay).write_text(export_tongue_overlay(tongues, a.eps_max))
    return 0


def cmd_sweep(a) -> int:
    g = _read_graph(a.graph)
    L = laplacian(g)
    if a.full_network:
        p = L
    elif a.forced is None:
        raise UsageError("sweep needs --forced FILE unless --full-network is given")
    else:
        p = _forced(g, a.forced)
    spec = SweepSpec(L, p, (a.omega_min, a.omega_max), (0.0, a.eps_max),
                     (a.res_omega, a.res_eps), a.steps, a.stab_tol, a.full_network)
    grid = sweep(spec, workers=a.workers)
    _emit(export_grid(grid), a.out)
    if a.overlay:
        s = spectral_decomposition(L)
        tongues = full_network_tongues(s) if a.full_network else predict_first_order_tongues(s, p)
        Path(a.overlay).write_text(export_tongue_overlay(tongues, a.eps_max))
    return 0


def cmd_mathieu(a) -> int:
    if a.graph is not None:
        spec = spectral_decomposition(laplacian(_read_graph(a.graph)))
        _emit(tongues_to_csv(full_network_tongues(spec, a.max_order)), a.out)
        return 0
    if None in (a.omega_n, a.eps, a.omega):
        raise UsageError("mathieu needs --graph FILE, or all of --omega-n, --eps and --omega")
    r = mathieu_stability(MathieuParams(a.omega_n, a.eps, a.omega), a.steps)
    _emit(f"classification={r.classification}\ntrace={fmt(r.trace)}\n"
          f"growth_rate={fmt(r.growth_exponent)}\n", a.out)
    return 0


def _parse_edges(text: str) -> list[tuple[int, int]]:
    out = []
    for tok in text.split(","):
        try:
            i, k = tok.strip().split("-")
            out.append((int(i), int(k)))
        except ValueError:
            raise UsageError(f"bad edge {tok!r}; expected I-K") from None
    return out


def cmd_ring(a) -> int:
    if a.full:
        edges = [(i, (i + 1) % a.n) for i in range(a.n)]
    else:
        edges = _parse_edges(a.edges)
    _emit(tongues_to_csv(lattice.ring_tongues(a.n, edges)), a.out)
    return 0


def cmd_torus(a) -> int:
    edge = _parse_edges(a.edge)
    if len(edge) != 1:
        raise UsageError("torus takes exactly one --edge")
    if not a.bounds:
        _emit(tongues_to_csv(lattice.lattice_tongues(a.n, a.d, edge[0])), a.out)
        return 0
    rows = ["l_index,m_index,omega0,lower_bound,exact"]
    for s in lattice.torus_edge_slope_bound(a.n, a.d, edge[0]):
        rows.append(",".join([":".join(map(str, s.l_index)), ":".join(map(str, s.m_index)),
                              fmt(s.omega0), fmt(s.lower_bound), fmt(s.exact)]))
    _emit("\n".join(rows) + "\n", a.out)
    return 0


def cmd_modes(a) -> int:
    g = _read_graph(a.graph)
    L = laplacian(g)
    spec = spectral_decomposition(L)
    p = _forced(g, a.forced)
    tongues = predict_first_order_tongues(spec, p)
    if a.tongue is None:
        t = widest_tongue(tongues)
    else:
        live = [t for t in tongues if t.controllable]
        if not 0 <= a.tongue < len(live):
            raise UsageError(f"--tongue must be in 0..{len(live) - 1}")
        t = live[a.tongue]
    omega = t.omega0 if a.omega is None else a.omega
    rep = mode_report(ForcedSystem(L, p, a.eps, omega), spec, t, a.steps, a.stab_tol)
    _emit(report_to_csv(rep), a.out)
    return 0


def cmd_spectrum(a) -> int:
    spec = spectral_decomposition(laplacian(_read_graph(a.graph)))
    rows = ["group,eigenvalue,frequency,multiplicity"]
    for gid in range(len(spec.groups)):
        rows.append(f"{gid},{fmt(spec.group_eigenvalue(gid))},"
                    f"{fmt(spec.group_frequency(gid))},{len(spec.groups[gid])}")
    _emit("\n".join(rows) + "\n", a.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netresonance",
                                 description="Arnold tongues of parametrically forced oscillator networks")
    sub = ap.add_subparsers(dest="command", required=True)

    def out(p):
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("predict", help="first-order tongue locations and slopes")
    p.add_argument("--graph", required=True)
    p.add_argument("--forced", required=True, help="graph file of the forced subnetwork")
    p.add_argument("--max-order", type=_positive_int, default=1)
    p.add_argument("--ctrl-tol", type=float, default=None)
    p.add_argument("--overlay", help="also write boundary overlay CSV here")
    p.add_argument("--eps-max", type=float, default=0.3, help="overlay extent")
    out(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sweep", help="Floquet stability grid over (omega, eps)")
    p.add_argument("--graph", required=True)
    p.add_argument("--forced")
    p.add_argument("--omega-min", type=float, required=True)
    p.add_argument("--omega-max", type=float, required=True)
    p.add_argument("--eps-max", type=float, required=True)
    p.add_argument("--res-omega", type=_positive_int, required=True)
    p.add_argument("--res-eps", type=_positive_int, required=True)
    p.add_argument("--steps", type=_positive_int, default=None)
    p.add_argument("--stab-tol", type=float, default=DEFAULT_STAB_TOL)
    p.add_argument("--workers", type=_positive_int, default=None)
    p.add_argument("--full-network", action="store_true", help="force every edge (P = L)")
    p.add_argument("--overlay", help="also write predicted tongue boundaries here")
    out(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mathieu", help="full-network tongues or a scalar Mathieu point")
    p.add_argument("--graph")
    p.add_argument("--max-order", type=_positive_int, default=1)
    p.add_argument("--omega-n", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--steps", type=_positive_int, default=None)
    out(p)
    p.set_defaults(func=cmd_mathieu)

    p = sub.add_parser("ring", help="analytic tongues of a unit ring")
    p.add_argument("--n", type=int, required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--edges", default="0-1", help="forced ring edges, e.g. 0-1,1-2")
    grp.add_argument("--full", action="store_true", help="force every ring edge")
    out(p)
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("torus", help="analytic single-edge tongues of a periodic lattice")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--edge", default="0-1", help="forced lattice edge as flat node indices I-K")
    p.add_argument("--bounds", action="store_true", help="emit lower bound and exact slope per pair")
    out(p)
    p.set_defaults(func=cmd_torus)

    p = sub.add_parser("modes", help="unstable Floquet mode against the predicted span")
    p.add_argument("--graph", required=True)
    p.add_argument("--forced", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--omega", type=float, help="default: centre of the chosen tongue")
    p.add_argument("--tongue", type=int, help="index among controllable tongues (default: widest)")
    p.add_argument("--steps", type=_positive_int, default=None)
    p.add_argument("--stab-tol", type=float, default=None)
    out(p)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("spectrum", help="grouped Laplacian spectrum")
    p.add_argument("--graph", required=True)
    out(p)
    p.set_defaults(func=cmd_spectrum)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return a.func(a)
    except (StablePointError, IntegrationError, ConvergenceError, ArithmeticError) as exc:
        print(f"netresonance: numerical failure: {exc}", file=sys.stderr)
        return 1
    except (UsageError, GraphFormatError, ValueError, OSError) as exc:
        print(f"netresonance: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
