"""Weighted undirected graphs, Laplacian assembly and grouped spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .linalg import jacobi_eigh


class GraphFormatError(ValueError):
    """Malformed graph file or invalid graph data."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise GraphFormatError(f"node count must be a positive integer, got {self.n!r}")
        seen = set()
        clean = []
        for i, k, w in self.edges:
            i, k, w = int(i), int(k), float(w)
            if not (0 <= i < self.n and 0 <= k < self.n):
                raise GraphFormatError(f"edge {i}-{k} has a node index outside 0..{self.n - 1}")
            if i == k:
                raise GraphFormatError(f"self-loop at node {i}")
            if not (w > 0.0) or not math.isfinite(w):
                raise GraphFormatError(f"edge {i}-{k} has non-positive weight {w}")
            key = (min(i, k), max(i, k))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
            clean.append((i, k, w))
        object.__setattr__(self, "edges", tuple(clean))


def load_graph(text: str) -> Graph:
    """Parse the line-based graph format (``nodes N`` then ``edge I K W`` lines)."""
    n = None
    edges: list[tuple[int, int, float]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "nodes":
                raise GraphFormatError("expected 'nodes N' header", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"bad node count {parts[1]!r}", lineno) from None
            if n < 1:
                raise GraphFormatError(f"node count must be positive, got {n}", lineno)
            continue
        if parts[0] != "edge" or len(parts) != 4:
            raise GraphFormatError(f"expected 'edge I K W', got {line!r}", lineno)
        try:
            i, k, w = int(parts[1]), int(parts[2]), float(parts[3])
        except ValueError:
            raise GraphFormatError(f"could not parse edge {line!r}", lineno) from None
        if not (0 <= i < n and 0 <= k < n):
            raise GraphFormatError(f"node index out of range in edge {i}-{k} (n={n})", lineno)
        if i == k:
            raise GraphFormatError(f"self-loop at node {i}", lineno)
        if not (w > 0.0) or not math.isfinite(w):
            raise GraphFormatError(f"non-positive weight {w} on edge {i}-{k}", lineno)
        key = (min(i, k), max(i, k))
        if key in seen:
            raise GraphFormatError(
                f"duplicate edge {key[0]}-{key[1]} (first seen on line {seen[key]})", lineno
            )
        seen[key] = lineno
        edges.append((i, k, w))
    if n is None:
        raise GraphFormatError("missing 'nodes N' header")
    return Graph(n, tuple(edges))


def dump_graph(g: Graph) -> str:
    lines = [f"nodes {g.n}"]
    lines += [f"edge {i} {k} {w!r}" for i, k, w in g.edges]
    return "\n".join(lines) + "\n"


def laplacian(g: Graph) -> np.ndarray:
    """Weighted graph Laplacian; each edge adds +w on the diagonal and -w off it."""
    m = np.zeros((g.n, g.n))
    for i, k, w in g.edges:
        m[i, k] -= w
        m[k, i] -= w
    # Correctly rounded weighted degree; rows sum to exactly zero whenever the
    # degree is representable (always for integer or dyadic weights).
    for i in range(g.n):
        m[i, i] = 0.0 - math.fsum(np.concatenate([m[i, :i], m[i, i + 1:]]))
    return m


def edge_laplacian(n: int, i: int, k: int) -> np.ndarray:
    """Rank-one Laplacian ``e_ik e_ik^T`` of a single unit edge."""
    if not (0 <= i < n and 0 <= k < n):
        raise ValueError(f"node index out of range: ({i}, {k}) with n={n}")
    if i == k:
        raise ValueError(f"edge endpoints must differ, got {i}={k}")
    m = np.zeros((n, n))
    m[i, i] = m[k, k] = 1.0
    m[i, k] = m[k, i] = -1.0
    return m


def subgraph_laplacian(n: int, edges: Iterable[tuple[int, int] | tuple[int, int, float]]) -> np.ndarray:
    """Laplacian of a forced subnetwork given as a list of (i, k[, w]) edges."""
    full = []
    for e in edges:
        full.append((e[0], e[1], e[2] if len(e) > 2 else 1.0))
    return laplacian(Graph(n, tuple(full)))


def ring_graph(n: int, weights: Sequence[float] | None = None) -> Graph:
    """Cycle on ``n`` nodes with edge ``i -- i+1 mod n``."""
    if n < 3:
        raise ValueError("a ring needs at least 3 nodes")
    if weights is None:
        weights = [1.0] * n
    return Graph(n, tuple((i, (i + 1) % n, float(weights[i])) for i in range(n)))


def torus_index(q: Sequence[int], n: int) -> int:
    """Flat node index of lattice site ``q`` (first coordinate fastest)."""
    idx = 0
    for c in reversed(range(len(q))):
        idx = idx * n + (q[c] % n)
    return idx


def torus_graph(n: int, d: int, weights: Sequence[float] | None = None) -> Graph:
    """d-dimensional periodic lattice with ``n**d`` nodes and unit (or given) weights."""
    if n < 3 or d < 1:
        raise ValueError("torus needs n >= 3 and d >= 1")
    edges = []
    for flat in range(n ** d):
        q = [(flat // n ** c) % n for c in range(d)]
        for c in range(d):
            nb = list(q)
            nb[c] = (nb[c] + 1) % n
            edges.append((flat, torus_index(nb, n)))
    if weights is None:
        weights = [1.0] * len(edges)
    return Graph(n ** d, tuple((i, k, float(w)) for (i, k), w in zip(edges, weights)))


def perturbed_ring(n: int, sigma: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    return ring_graph(n, 1.0 + sigma * rng.standard_normal(n))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues, orthonormal eigenvectors and eigenspace groups."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    groups: tuple[tuple[int, ...], ...]
    group_tol: float
    zero_tol: float
    frequencies: np.ndarray = field(init=False)

    def __post_init__(self):
        freqs = np.sqrt(np.clip(self.eigenvalues, 0.0, None))
        freqs[np.abs(self.eigenvalues) <= self.zero_tol] = 0.0
        object.__setattr__(self, "frequencies", freqs)
        for arr in (self.eigenvalues, self.eigenvectors, self.frequencies):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def group_eigenvalue(self, g: int) -> float:
        return float(np.mean(self.eigenvalues[list(self.groups[g])]))

    def group_frequency(self, g: int) -> float:
        lam = self.group_eigenvalue(g)
        if abs(lam) <= self.zero_tol:
            return 0.0
        return math.sqrt(max(lam, 0.0))

    def is_zero_group(self, g: int) -> bool:
        return abs(self.group_eigenvalue(g)) <= self.zero_tol

    def basis(self, g: int) -> np.ndarray:
        """Orthonormal columns spanning eigenspace group ``g``."""
        return self.eigenvectors[:, list(self.groups[g])]

    def nonzero_groups(self) -> list[int]:
        return [g for g in range(len(self.groups)) if not self.is_zero_group(g)]

    def with_bases(self, bases: dict[int, np.ndarray]) -> "Spectrum":
        """Copy with some groups' eigenvector bases replaced (same span assumed)."""
        v = np.array(self.eigenvectors)
        for g, b in bases.items():
            v[:, list(self.groups[g])] = b
        return Spectrum(np.array(self.eigenvalues), v, self.groups, self.group_tol, self.zero_tol)


def group_sorted_values(values: Sequence[float], tol: float) -> list[list[int]]:
    """Chain ascending values into groups where neighbours differ by <= tol."""
    groups: list[list[int]] = []
    for idx, lam in enumerate(values):
        if groups and lam - values[groups[-1][-1]] <= tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return groups


def spectral_decomposition(m: np.ndarray, group_tol: float | None = None) -> Spectrum:
    """Symmetric eigendecomposition with transitive eigenvalue grouping.

    ``group_tol`` defaults to ``1e-8 * max(1, lambda_max)``; eigenvalues with
    ``|lambda| <= 1e-9 * max(1, lambda_max)`` are treated as zero frequency.
    """
    m = np.asarray(m, dtype=float)
    w, v = jacobi_eigh(m)
    scale = max(1.0, float(np.max(np.abs(w)))) if len(w) else 1.0
    if group_tol is None:
        group_tol = 1e-8 * scale
    if group_tol <= 0:
        raise ValueError("group_tol must be positive")
    groups = tuple(tuple(g) for g in group_sorted_values(list(w), group_tol))
    return Spectrum(w, v, groups, float(group_tol), 1e-9 * scale)


def natural_frequencies(s: Spectrum) -> list[tuple[int, float]]:
    """(group id, natural frequency) for every non-zero eigenspace group."""
    return [(g, s.group_frequency(g)) for g in s.nonzero_groups()]
