"""Dense square-matrix and vector arithmetic.

Matrices and vectors are plain ``float64`` numpy arrays; the helpers here
validate shape and finiteness at the boundary and otherwise stay out of the
way. All functions are pure and return fresh arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import DimensionMismatch, InvalidDimension

__all__ = [
    'Permutation', 'as_matrix', 'as_vector', 'multiply', 'apply', 'transpose',
    'orthogonality_defect', 'is_orthogonal', 'permutation_matrix', 'power',
    'detect_order', 'power_reduced', 'DEFAULT_ORDER_KMAX', 'DEFAULT_ORDER_TOL',
]

DEFAULT_ORDER_KMAX = 1024
DEFAULT_ORDER_TOL = 1e-9


def as_matrix(a) -> np.ndarray:
    """Coerce `a` to a finite square float64 matrix."""
    m = np.array(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidDimension(f'expected a non-empty square matrix, got shape {m.shape}')
    if not np.all(np.isfinite(m)):
        raise ValueError('matrix has non-finite entries')
    return m


def as_vector(x) -> np.ndarray:
    v = np.array(x, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise InvalidDimension(f'expected a non-empty vector, got shape {v.shape}')
    if not np.all(np.isfinite(v)):
        raise ValueError('vector has non-finite entries')
    return v


def multiply(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f'cannot multiply {a.shape} by {b.shape}')
    return a @ b


def apply(a, x) -> np.ndarray:
    a, x = as_matrix(a), as_vector(x)
    if a.shape[1] != x.shape[0]:
        raise DimensionMismatch(f'cannot apply {a.shape} matrix to length-{x.shape[0]} vector')
    return a @ x


def transpose(a) -> np.ndarray:
    return as_matrix(a).T.copy()


def orthogonality_defect(a) -> float:
    """Max-abs entry of ``a a^T - I``."""
    a = as_matrix(a)
    return float(np.max(np.abs(a @ a.T - np.eye(a.shape[0]))))


def is_orthogonal(a, tol: float = 1e-10) -> bool:
    if not tol > 0:
        raise ValueError('tol must be positive')
    return orthogonality_defect(a) <= tol


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``0..dim-1``; basis vector ``i`` maps to ``image[i]``."""

    image: tuple[int, ...]

    def __init__(self, image: Iterable[int]):
        image = tuple(int(i) for i in image)
        if not image or sorted(image) != list(range(len(image))):
            raise ValueError(f'not a permutation of 0..{len(image) - 1}: {image}')
        object.__setattr__(self, 'image', image)

    @property
    def dim(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, dim: int) -> 'Permutation':
        return cls(range(dim))

    def inverse(self) -> 'Permutation':
        inv = [0] * self.dim
        for i, p in enumerate(self.image):
            inv[p] = i
        return Permutation(inv)

    def compose(self, other: 'Permutation') -> 'Permutation':
        """``self after other``: i -> self.image[other.image[i]]."""
        if other.dim != self.dim:
            raise DimensionMismatch('permutation sizes differ')
        return Permutation(self.image[i] for i in other.image)

    def power(self, j: int) -> 'Permutation':
        """``self^j``; negative `j` powers the inverse."""
        base = self if j >= 0 else self.inverse()
        result = Permutation.identity(self.dim)
        for _ in range(abs(j) % self.order()):
            result = base.compose(result)
        return result

    def order(self) -> int:
        seen = [False] * self.dim
        order = 1
        for start in range(self.dim):
            length = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = self.image[i]
                length += 1
            if length:
                order = np.lcm(order, length)
        return int(order)


def permutation_matrix(p: Permutation) -> np.ndarray:
    m = np.zeros((p.dim, p.dim))
    m[list(p.image), list(range(p.dim))] = 1.0
    return m


def power(a, j: int) -> np.ndarray:
    """``a**j`` by repeated squaring; ``a**0`` is the identity."""
    a = as_matrix(a)
    if j < 0:
        raise ValueError('exponent must be non-negative')
    result = np.eye(a.shape[0])
    base = a
    while j:
        if j & 1:
            result = result @ base
        j >>= 1
        if j:
            base = base @ base
    return result


def detect_order(a, k_max: int = DEFAULT_ORDER_KMAX,
                 tol: float = DEFAULT_ORDER_TOL) -> Optional[int]:
    """Smallest ``k <= k_max`` with ``max|a^k - I| <= tol``, or None."""
    a = as_matrix(a)
    eye = np.eye(a.shape[0])
    p = a.copy()
    for k in range(1, k_max + 1):
        if np.max(np.abs(p - eye)) <= tol:
            return k
        p = p @ a
    return None


def power_reduced(a, j: int, order: Optional[int] = None) -> np.ndarray:
    """``a**j`` using ``a**order == I`` to shrink the exponent when known."""
    if order is not None:
        if order < 1:
            raise ValueError('order must be positive')
        j %= order
    return power(a, j)
