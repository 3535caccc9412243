"""Small dense linear-algebra kernels: cyclic Jacobi and the 2-induced norm."""

from __future__ import annotations

import numpy as np


class ConvergenceError(RuntimeError):
    """An iterative eigensolver ran out of its iteration budget."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigh(m: np.ndarray, rtol: float = 1e-12, max_sweeps: int = 60):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and the
    eigenvectors as orthonormal columns.  Converged once the off-diagonal
    Frobenius norm drops to ``rtol * ||m||_F``.
    """
    a = np.array(m, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.sqrt(np.sum(a * a)))
    target = rtol * scale

    sweeps = 0
    while _off_norm(a) > target:
        if sweeps >= max_sweeps:
            raise ConvergenceError("Jacobi eigensolver did not converge", _off_norm(a))
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c

                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    # Deterministic sign: largest-magnitude component of each column positive.
    for k in range(n):
        i = int(np.argmax(np.abs(v[:, k])))
        if v[i, k] < 0.0:
            v[:, k] = -v[:, k]
    return w, v


def spectral_norm(g: np.ndarray) -> float:
    """2-induced norm (largest singular value) of a real or complex matrix.

    Vectors and matrices with a unit dimension use the Euclidean norm directly.
    Otherwise the largest eigenvalue of the smaller Gram matrix is taken; a
    complex matrix is handled through its real embedding ``[[Re, -Im], [Im, Re]]``,
    which has the same singular values (each doubled).
    """
    g = np.atleast_2d(np.asarray(g))
    if g.size == 0:
        return 0.0
    if min(g.shape) == 1:
        return float(np.sqrt(np.sum(np.abs(g) ** 2)))
    if np.iscomplexobj(g):
        re, im = g.real, g.imag
        g = np.block([[re, -im], [im, re]])
    gram = g.T @ g if g.shape[0] >= g.shape[1] else g @ g.T
    gram = 0.5 * (gram + gram.T)
    w, _ = jacobi_eigh(gram)
    return float(np.sqrt(max(w[-1], 0.0)))
