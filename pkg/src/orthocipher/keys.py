"""Orthogonal key material: generation, composition, validation and files.

Keys come from a seeded ``numpy`` PRNG. That is adequate for experiments and
reproducible test vectors and is *not* a source of secure randomness.

Key file layout (JSON)::

    {"version": 1, "dim": 4, "order": 8, "rows": [["0.70710678118654746", ...], ...]}

Every entry is a 17-significant-digit decimal string, which reproduces the
stored double exactly on reload.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Optional

import numpy as np

from . import linalg
from .errors import (DimensionMismatch, InvalidDimension, MalformedKeyFile,
                     OrthogonalityViolation)

__all__ = [
    'OrthogonalKey', 'KeyPair', 'random_orthogonal', 'generate_keypair', 'compose',
    'write_key', 'read_key', 'key_to_json', 'key_from_json', 'ORTHO_TOL',
    'STRUCTURED', 'GENERAL',
]

ORTHO_TOL = 1e-10
ORDER_TOL = 1e-9
MAX_BLOCK_PERIOD = 16
STRUCTURED = 'structured'
GENERAL = 'general'
KEY_FILE_VERSION = 1


def _check_orthogonal(m: np.ndarray, tol: float = ORTHO_TOL) -> None:
    defect = linalg.orthogonality_defect(m)
    if not defect <= tol:
        raise OrthogonalityViolation(defect, tol)


@dataclass(frozen=True, eq=False)
class OrthogonalKey:
    """An orthogonal matrix plus its multiplicative order when known."""

    matrix: np.ndarray
    order: Optional[int] = None

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        _check_orthogonal(m)
        if self.order is not None:
            if int(self.order) != self.order or self.order < 1:
                raise ValueError(f'order must be a positive integer, got {self.order!r}')
            dev = float(np.max(np.abs(linalg.power(m, int(self.order)) - np.eye(m.shape[0]))))
            if dev > ORDER_TOL:
                raise ValueError(f'matrix^{self.order} deviates from I by {dev:.3g}')
            object.__setattr__(self, 'order', int(self.order))
        m.setflags(write=False)
        object.__setattr__(self, 'matrix', m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class KeyPair:
    public: OrthogonalKey
    private: OrthogonalKey

    def __post_init__(self):
        if self.public.dim != self.private.dim:
            raise DimensionMismatch(
                f'public key is {self.public.dim}x{self.public.dim}, '
                f'private key is {self.private.dim}x{self.private.dim}')

    @property
    def dim(self) -> int:
        return self.public.dim

    def combined(self) -> OrthogonalKey:
        """The encoding key ``C = public @ private`` with its detected order."""
        c = compose(self)
        return OrthogonalKey(c, linalg.detect_order(c))


def compose(pair: KeyPair) -> np.ndarray:
    c = linalg.multiply(pair.public.matrix, pair.private.matrix)
    _check_orthogonal(c)
    return c


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _signed_permutation(rng: np.random.Generator, dim: int) -> np.ndarray:
    q = linalg.permutation_matrix(linalg.Permutation(rng.permutation(dim)))
    return q * rng.choice([-1.0, 1.0], size=dim)[None, :]


def _block_diag(blocks) -> np.ndarray:
    dim = 2 * len(blocks)
    r = np.zeros((dim, dim))
    for i, b in enumerate(blocks):
        r[2 * i:2 * i + 2, 2 * i:2 * i + 2] = b
    return r


def _random_fraction(rng: np.random.Generator) -> tuple[int, int]:
    # sin(2 pi k / m) != 0, so every plane rotation actually mixes its pair
    while True:
        m = int(rng.integers(3, MAX_BLOCK_PERIOD + 1))
        k = int(rng.integers(1, m))
        if 2 * k != m:
            return k, m


def _period(k: int, m: int) -> int:
    return m // math.gcd(k, m)


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), stream]))


def _check_dim(dim: int, mode: str) -> None:
    if mode not in (STRUCTURED, GENERAL):
        raise ValueError(f'unknown key mode {mode!r}')
    if int(dim) != dim or dim < 2 or (mode == STRUCTURED and dim % 2):
        raise InvalidDimension(
            f'dimension must be an integer >= 2 (and even in structured mode), got {dim!r}')


def _structured(fractions, q: np.ndarray) -> OrthogonalKey:
    r = _block_diag([_rotation(2 * math.pi * k / m) for k, m in fractions])
    order = reduce(math.lcm, (_period(k, m) for k, m in fractions), 1)
    return OrthogonalKey(q @ r @ q.T, order)


def _givens_product(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = np.eye(dim)
    for i in range(dim - 1):
        for j in range(i + 1, dim):
            theta = rng.uniform(0.0, 2 * math.pi)
            c, s = math.cos(theta), math.sin(theta)
            rot = np.eye(dim)
            rot[i, i] = rot[j, j] = c
            rot[i, j], rot[j, i] = -s, s
            g = rot @ g
    return g


def random_orthogonal(dim: int, seed: int, mode: str = STRUCTURED) -> OrthogonalKey:
    """Deterministic random orthogonal key.

    ``structured``: ``Q R Q^T`` with ``R`` block-diagonal plane rotations by
    angles ``2 pi k/m`` (``m <= 16``) and ``Q`` a random signed permutation; the
    order is known exactly. ``general``: a product of ``dim (dim-1) / 2`` Givens
    rotations with uniform angles; the order is detected and usually absent.
    """
    _check_dim(dim, mode)
    rng = _rng(seed)
    if mode == STRUCTURED:
        fractions = [_random_fraction(rng) for _ in range(dim // 2)]
        return _structured(fractions, _signed_permutation(rng, dim))
    m = _givens_product(rng, dim)
    return OrthogonalKey(m, linalg.detect_order(m))


def generate_keypair(dim: int, seed: int, mode: str = STRUCTURED) -> KeyPair:
    """Public/private pair whose product keeps the structure of `mode`.

    In structured mode both factors share the basis ``Q`` and split each block
    angle ``2 pi k/m`` into two rational parts, so ``C = public @ private`` is
    itself structured with a small finite order.
    """
    _check_dim(dim, mode)
    rng = _rng(seed, 1)
    if mode == GENERAL:
        pub = _givens_product(rng, dim)
        priv = _givens_product(rng, dim)
        return KeyPair(OrthogonalKey(pub, linalg.detect_order(pub)),
                       OrthogonalKey(priv, linalg.detect_order(priv)))
    pub_fr, priv_fr = [], []
    for _ in range(dim // 2):
        k, m = _random_fraction(rng)
        k_pub = int(rng.integers(0, m))
        pub_fr.append((k_pub, m))
        priv_fr.append(((k - k_pub) % m, m))
    q = _signed_permutation(rng, dim)
    return KeyPair(_structured(pub_fr, q), _structured(priv_fr, q))


def key_to_json(k: OrthogonalKey) -> str:
    doc = {
        'version': KEY_FILE_VERSION,
        'dim': k.dim,
        'order': k.order,
        'rows': [['%.17g' % v for v in row] for row in k.matrix],
    }
    return json.dumps(doc, indent=1) + '\n'


def key_from_json(text: str) -> OrthogonalKey:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedKeyFile(f'not valid JSON: {e}') from None
    if not isinstance(doc, dict):
        raise MalformedKeyFile('key file must hold a JSON object')
    if doc.get('version') != KEY_FILE_VERSION:
        raise MalformedKeyFile(f'unsupported key file version {doc.get("version")!r}')
    dim, order, rows = doc.get('dim'), doc.get('order'), doc.get('rows')
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise MalformedKeyFile(f'bad dim {dim!r}')
    if order is not None and (not isinstance(order, int) or isinstance(order, bool) or order < 1):
        raise MalformedKeyFile(f'bad order {order!r}')
    if (not isinstance(rows, list) or len(rows) != dim
            or any(not isinstance(r, list) or len(r) != dim for r in rows)):
        raise MalformedKeyFile(f'rows must be a {dim}x{dim} array')
    try:
        m = np.array([[float(v) for v in r] for r in rows if all(isinstance(v, str) for v in r)])
    except ValueError as e:
        raise MalformedKeyFile(f'bad matrix entry: {e}') from None
    if m.shape != (dim, dim) or not np.all(np.isfinite(m)):
        raise MalformedKeyFile('matrix entries must be finite decimal strings')
    try:
        return OrthogonalKey(m, order)
    except OrthogonalityViolation:
        raise
    except ValueError as e:
        raise MalformedKeyFile(str(e)) from None


def write_key(k: OrthogonalKey, path) -> None:
    Path(path).write_text(key_to_json(k), encoding='utf-8')


def read_key(path) -> OrthogonalKey:
    return key_from_json(Path(path).read_text(encoding='utf-8'))
