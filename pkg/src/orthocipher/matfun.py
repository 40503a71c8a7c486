"""Matrix functions of symmetric matrices via spectral decomposition.

``f(A) = Q diag(f(lambda)) Q^T`` where ``A = Q diag(lambda) Q^T`` comes from a
cyclic Jacobi sweep. Restricted to symmetric input: a general orthogonal
matrix (a rotation, say) has complex eigenvalues and no real diagonal form.
The truncated power series in :func:`taylor_func` is the independent check.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import linalg
from .encoding import Codec
from .errors import NoConvergence, NotSymmetric

__all__ = ['SpectralDecomposition', 'jacobi_eigen', 'mat_func', 'taylor_func']

MAX_SWEEPS = 100
OFFDIAG_RTOL = 1e-12


class SpectralDecomposition(NamedTuple):
    q: np.ndarray       # eigenvectors as columns
    lam: np.ndarray     # eigenvalues, ascending

    def reconstruct(self) -> np.ndarray:
        return (self.q * self.lam) @ self.q.T


def _check_symmetric(a: np.ndarray) -> None:
    scale = 1.0 + float(np.max(np.abs(a)))
    asym = float(np.max(np.abs(a - a.T)))
    if asym > 1e-12 * scale:
        raise NotSymmetric(f'max|A - A^T| = {asym:.3g}')


def jacobi_eigen(a, max_sweeps: int = MAX_SWEEPS) -> SpectralDecomposition:
    """Cyclic Jacobi eigen-decomposition of a symmetric matrix."""
    a = linalg.as_matrix(a)
    _check_symmetric(a)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    threshold = OFFDIAG_RTOL * float(np.linalg.norm(a))
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.triu(a, 1) ** 2)) * 2.0)
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # a <- J^T a J with J the (p, q) plane rotation
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        off = math.sqrt(float(np.sum(np.triu(a, 1) ** 2)) * 2.0)
        if off > threshold:
            raise NoConvergence(f'Jacobi did not converge in {max_sweeps} sweeps (off={off:.3g})')
    lam = np.diag(a).copy()
    idx = np.argsort(lam, kind='stable')
    return SpectralDecomposition(v[:, idx], lam[idx])


def mat_func(a, g: Codec | str = Codec.EXP) -> np.ndarray:
    g = Codec.parse(g)
    dec = jacobi_eigen(a)
    return (dec.q * g.forward(dec.lam)) @ dec.q.T


def taylor_func(a, g: Codec | str = Codec.EXP, terms: int = 60) -> np.ndarray:
    """Power series truncated to the powers ``0 .. terms-1``.

    exp keeps every power, sinh the odd ones, cosh the even ones.
    """
    if terms < 1:
        raise ValueError('terms must be >= 1')
    g = Codec.parse(g)
    a = linalg.as_matrix(a)
    keep = {Codec.EXP: lambda k: True,
            Codec.SINH: lambda k: k % 2 == 1,
            Codec.COSH: lambda k: k % 2 == 0}[g]
    term = np.eye(a.shape[0])  # a^k / k!
    total = np.zeros_like(a)
    for k in range(terms):
        if k:
            term = term @ a / k
        if keep(k):
            total = total + term
    return total
