"""Block cipher over real vectors: conjugated diagonal codec matrices.

Block ``j`` (1-based) of codes ``x`` is encrypted with ``M = C^j`` as::

    y = P^j M^T diag(g(x)) M x

Decryption undoes the permutation, computes ``T = M y' = diag(g(x)) M x`` and
searches for the unique code vector consistent with ``|T|``. Coefficients of
``T`` are generally not integers (they are entries of ``M x``), so the search
checks candidate code vectors against the full magnitude identity instead of
rounding anything.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import linalg
from .encoding import ALPHABET, PAD_CODE, Codec, decode_codes, encode_text
from .errors import (AmbiguousDecode, BlockError, DecodeFailure, DegenerateBlock,
                     DimensionMismatch, InvalidCode, InvalidDimension)
from .keys import KeyPair, OrthogonalKey

__all__ = [
    'CipherParams', 'CiphertextMessage', 'WeakBlockWarning', 'split_pad',
    'encrypt_block', 'decrypt_block', 'encrypt_message', 'decrypt_message',
    'magnitudes', 'block_matrix', 'MAX_CODE',
]

MAX_CODE = len(ALPHABET)
_EPS = np.finfo(np.float64).eps
# slack on the norm identity |M c| = |c|, which holds only up to key orthogonality
_NORM_SLACK = 1e-8
# per-half enumeration limit inside the norm filter
_HALF_LIMIT = 4_000_000
_FLUSH = 1e-13

Key = Union[KeyPair, OrthogonalKey, np.ndarray, Sequence[Sequence[float]]]


class WeakBlockWarning(UserWarning):
    """Block index is a multiple of the key order, so ``C^j = I`` and ``y = D x``."""


@dataclass(frozen=True)
class CipherParams:
    dim: int
    codec: Codec = Codec.EXP
    permutation: Optional[linalg.Permutation] = None
    strict_degenerate: bool = True
    verify_rel_tol: float = 1e-6
    zero_tol: float = 1e-9
    max_assignments: int = 10 ** 6

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise InvalidDimension(f'block size must be an integer >= 2, got {self.dim!r}')
        object.__setattr__(self, 'codec', Codec.parse(self.codec))
        if self.permutation is not None:
            perm = self.permutation
            if not isinstance(perm, linalg.Permutation):
                perm = linalg.Permutation(perm)
                object.__setattr__(self, 'permutation', perm)
            if perm.dim != self.dim:
                raise DimensionMismatch(
                    f'permutation has {perm.dim} entries, block size is {self.dim}')
        if not (self.verify_rel_tol > 0 and self.zero_tol > 0):
            raise ValueError('tolerances must be positive')
        if self.max_assignments < 1:
            raise ValueError('max_assignments must be positive')


@dataclass(frozen=True, eq=False)
class CiphertextMessage:
    dim: int
    codec: Codec
    pad_count: int
    blocks: tuple = field(default_factory=tuple)
    permutation: Optional[linalg.Permutation] = None
    permuted: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'codec', Codec.parse(self.codec))
        blocks = tuple(linalg.as_vector(b) for b in self.blocks)
        if any(b.shape[0] != self.dim for b in blocks):
            raise DimensionMismatch(f'every block must have {self.dim} components')
        if not 0 <= self.pad_count < self.dim:
            raise ValueError(f'pad_count must be in 0..{self.dim - 1}')
        object.__setattr__(self, 'blocks', blocks)
        if self.permutation is not None:
            if self.permutation.dim != self.dim:
                raise DimensionMismatch(f'permutation acts on {self.permutation.dim} '
                                        f'positions, blocks have {self.dim}')
            object.__setattr__(self, 'permuted', True)


def _resolve_key(key: Key) -> tuple[np.ndarray, Optional[int]]:
    if isinstance(key, KeyPair):
        key = key.combined()
    if isinstance(key, OrthogonalKey):
        return key.matrix, key.order
    c = linalg.as_matrix(key)
    return c, linalg.detect_order(c)


def _check_dims(c: np.ndarray, n: int, params: CipherParams) -> None:
    if c.shape[0] != n or params.dim != n:
        raise DimensionMismatch(
            f'key is {c.shape[0]}x{c.shape[0]}, block has {n} entries, '
            f'params.dim is {params.dim}')


def _block_key(c: np.ndarray, j: int, order: Optional[int], warn: bool = True) -> np.ndarray:
    if j < 1:
        raise ValueError('block indices start at 1')
    if warn and order is not None and j % order == 0:
        warnings.warn(f'block {j} is a multiple of the key order {order}; '
                      'the key power is the identity', WeakBlockWarning, stacklevel=3)
    m = linalg.power_reduced(c, j, order)
    # rounding residue where rotation terms cancel exactly (e.g. sin(pi));
    # left in place it leaks the largest codec term into unrelated positions
    m[np.abs(m) < _FLUSH] = 0.0
    return m


def block_matrix(key: Key, j: int) -> np.ndarray:
    """The key power ``C^j`` exactly as encryption and decryption use it."""
    c, order = _resolve_key(key)
    return _block_key(c, j, order, warn=False)


def split_pad(codes: Sequence[int], dim: int) -> tuple[list[tuple[int, ...]], int]:
    """Cut `codes` into blocks of `dim`, padding the last one with spaces."""
    codes = tuple(codes)
    if not codes:
        raise ValueError('nothing to split: empty code sequence')
    if dim < 1:
        raise InvalidDimension('block size must be positive')
    pad = (-len(codes)) % dim
    padded = codes + (PAD_CODE,) * pad
    return [padded[i:i + dim] for i in range(0, len(padded), dim)], pad


def _check_codes(x: Sequence[int]) -> np.ndarray:
    for pos, v in enumerate(x):
        if isinstance(v, bool) or int(v) != v or not 1 <= v <= MAX_CODE:
            raise InvalidCode(pos, v)
    return np.array(x, dtype=np.float64)


def encrypt_block(x: Sequence[int], key: Key, j: int, params: CipherParams) -> np.ndarray:
    c, order = _resolve_key(key)
    xv = _check_codes(x)
    _check_dims(c, xv.shape[0], params)
    m = _block_key(c, j, order)
    w = m @ xv
    if params.strict_degenerate:
        bad = np.flatnonzero(np.abs(w) <= params.zero_tol)
        if bad.size:
            raise DegenerateBlock(bad.tolist(), j)
    y = m.T @ (params.codec.forward(xv) * w)
    if params.permutation is not None:
        y = linalg.permutation_matrix(params.permutation.power(j)) @ y
    return y


def magnitudes(y, key: Key, j: int, params: CipherParams) -> np.ndarray:
    """``|C^j P^-j y|``: per position, ``|(M x)_i| * g(x_i)`` up to rounding."""
    c, order = _resolve_key(key)
    y = linalg.as_vector(y)
    _check_dims(c, y.shape[0], params)
    return _magnitudes(y, _block_key(c, j, order, warn=False), j, params)


def _magnitudes(y: np.ndarray, m: np.ndarray, j: int, params: CipherParams) -> np.ndarray:
    if params.permutation is not None:
        y = linalg.permutation_matrix(params.permutation.power(-j)) @ y
    return np.abs(m @ y)


def _components(m: np.ndarray) -> list[list[int]]:
    """Index groups coupled by nonzero entries of `m`; they decode independently."""
    n = m.shape[0]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, k in zip(*np.nonzero(m)):
        ri, rk = find(int(i)), find(int(k))
        if ri != rk:
            parent[max(ri, rk)] = min(ri, rk)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _combos(cand: list[np.ndarray]) -> np.ndarray:
    """Cartesian product of candidate code lists, one row per assignment."""
    grids = np.meshgrid(*cand, indexing='ij')
    return np.stack([g.ravel() for g in grids], axis=1)


def _norm_pairs(left, right, limit: int) -> Optional[np.ndarray]:
    """Index pairs (l, r) with ``lo_l + lo_r <= 0 <= hi_l + hi_r``; None past `limit`."""
    lo_l, hi_l = left
    lo_r, hi_r = right
    order = np.argsort(lo_r, kind='stable')
    lo_s, hi_s = lo_r[order], hi_r[order]
    width = float(np.max(hi_s - lo_s)) if hi_s.size else 0.0
    start = np.searchsorted(lo_s, -hi_l - width, side='left')
    stop = np.searchsorted(lo_s, -lo_l, side='right')
    counts = np.maximum(stop - start, 0)
    total = int(counts.sum())
    if total > 4 * limit:
        return None
    li = np.repeat(np.arange(lo_l.size), counts)
    offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    ri = np.repeat(start, counts) + offsets
    keep = hi_l[li] + hi_s[ri] >= 0
    pairs = np.stack([li[keep], order[ri[keep]]], axis=1)
    return None if pairs.shape[0] > limit else pairs


def _noise_bound(sub: np.ndarray, mag_s: np.ndarray) -> float:
    """Absolute rounding bound on ``T = M M^T D w`` within one coupled group.

    Large codec terms swamp small ones that share a group, so a small
    position's magnitude may be pure rounding noise.
    """
    s = sub.shape[0]
    defect = float(np.max(np.abs(sub @ sub.T - np.eye(s))))
    return (s * defect + 8 * s ** 3 * _EPS) * float(np.max(mag_s))


def _decode_component(idx: list[int], m: np.ndarray, mag: np.ndarray, noise: np.ndarray,
                      params: CipherParams, j: int) -> np.ndarray:
    s = len(idx)
    sub = m[np.ix_(idx, idx)]
    mag_s = mag[idx]
    tol = params.verify_rel_tol * mag_s + noise[idx]
    # |M c|_2 = |c|_2 bounds every |w_i|
    w_max = MAX_CODE * math.sqrt(s) * (1 + _NORM_SLACK)

    codes = np.arange(1, MAX_CODE + 1, dtype=np.float64)
    g = params.codec.forward(codes)
    cand, lo_terms, hi_terms = [], [], []
    for i in range(s):
        r_lo = np.maximum(mag_s[i] - tol[i], 0.0) / g
        r_hi = np.minimum((mag_s[i] + tol[i]) / g, w_max)
        ok = (r_hi > params.zero_tol) & (r_lo <= w_max)
        if not ok.any():
            raise DecodeFailure(f'no symbol code fits magnitude {mag_s[i]:.6g} '
                                f'at position {idx[i]}', j)
        c_ok = codes[ok]
        # closest to the typical |w| first: keeps the likely assignment early
        typical = math.sqrt(float(np.mean(c_ok ** 2)))
        sort = np.argsort(np.abs(np.log(r_hi[ok]) - math.log(typical)), kind='stable')
        cand.append(c_ok[sort])
        lo_terms.append(r_lo[ok][sort] ** 2 - c_ok[sort] ** 2 * (1 + _NORM_SLACK))
        hi_terms.append(r_hi[ok][sort] ** 2 - c_ok[sort] ** 2 * (1 - _NORM_SLACK))

    limit = params.max_assignments
    if s == 1:
        assignments = cand[0][:, None]
    else:
        half = (s + 1) // 2
        sides = []
        for part in (range(half), range(half, s)):
            size = math.prod(len(cand[i]) for i in part)
            if size > _HALF_LIMIT:
                raise DecodeFailure(f'candidate space too large ({size} partial assignments)', j)
            combo_idx = _combos([np.arange(len(cand[i])) for i in part])
            lo = sum(lo_terms[i][combo_idx[:, k]] for k, i in enumerate(part))
            hi = sum(hi_terms[i][combo_idx[:, k]] for k, i in enumerate(part))
            vals = np.stack([cand[i][combo_idx[:, k]] for k, i in enumerate(part)], axis=1)
            sides.append((vals, lo, hi))
        pairs = _norm_pairs(sides[0][1:], sides[1][1:], limit)
        if pairs is None:
            raise DecodeFailure(
                f'more than {limit} code assignments survive the norm filter', j)
        assignments = np.concatenate(
            [sides[0][0][pairs[:, 0]], sides[1][0][pairs[:, 1]]], axis=1)

    w = assignments @ sub.T
    pred = np.abs(w) * params.codec.forward(assignments)
    ok = np.all(np.abs(pred - mag_s) <= tol, axis=1)
    found = assignments[ok]
    if found.shape[0] == 0:
        raise DecodeFailure('no code assignment is consistent with the ciphertext '
                            f'at positions {idx}', j)
    if found.shape[0] > 1:
        raise AmbiguousDecode(found.astype(int).tolist(), j)
    return found[0]


def decrypt_block(y, key: Key, j: int, params: CipherParams) -> tuple[int, ...]:
    """Recover the code block; raises DecodeFailure, AmbiguousDecode or DegenerateBlock."""
    c, order = _resolve_key(key)
    y = linalg.as_vector(y)
    _check_dims(c, y.shape[0], params)
    m = _block_key(c, j, order)
    mag = _magnitudes(y, m, j, params)
    groups = _components(m)
    noise = np.zeros(params.dim)
    for idx in groups:
        noise[idx] = _noise_bound(m[np.ix_(idx, idx)], mag[idx])
    # a vanishing magnitude only proves degeneracy when rounding cannot explain it
    bad = np.flatnonzero((mag <= params.zero_tol) & (noise <= params.zero_tol))
    if bad.size:
        raise DegenerateBlock(bad.tolist(), j)
    out = np.zeros(params.dim)
    for idx in groups:
        out[idx] = _decode_component(idx, m, mag, noise, params, j)
    return tuple(int(v) for v in out)


def encrypt_message(text: str, key: Key, params: CipherParams) -> CiphertextMessage:
    key = OrthogonalKey(*_resolve_key(key))
    blocks, pad = split_pad(encode_text(text), params.dim)
    out = []
    for j, x in enumerate(blocks, start=1):
        try:
            out.append(encrypt_block(x, key, j, params))
        except BlockError as e:
            raise e.at_block(j)
    return CiphertextMessage(params.dim, params.codec, pad, tuple(out),
                             params.permutation)


def _check_header(ct: CiphertextMessage, params: CipherParams) -> None:
    if ct.dim != params.dim:
        raise DimensionMismatch(f'ciphertext block size {ct.dim} != params.dim {params.dim}')
    if ct.codec != params.codec:
        raise ValueError(f'ciphertext codec {ct.codec.value} != params codec {params.codec.value}')
    if ct.permuted != (params.permutation is not None):
        raise ValueError('ciphertext permutation flag does not match params')
    if (ct.permutation is not None and params.permutation is not None
            and ct.permutation != params.permutation):
        raise ValueError('ciphertext permutation differs from params.permutation')


def decrypt_message(ct: CiphertextMessage, key: Key, params: CipherParams) -> str:
    _check_header(ct, params)
    key = OrthogonalKey(*_resolve_key(key))
    codes: list[int] = []
    for j, y in enumerate(ct.blocks, start=1):
        try:
            codes.extend(decrypt_block(y, key, j, params))
        except BlockError as e:
            raise e.at_block(j)
    if ct.pad_count:
        codes = codes[:-ct.pad_count]
    return decode_codes(codes)
