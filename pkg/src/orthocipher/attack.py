"""Ciphertext-only attack: small-integer combinations that land on table cells.

A ciphertext block is a sum of terms ``coef * g(code)``. Adding and
subtracting components with small integer weights often isolates a single
such term, and the decode table then names its exponent, i.e. a plaintext
symbol, without any key material.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .cipher import CiphertextMessage, MAX_CODE
from .encoding import ALPHABET, DecodeTable, lookup
from .errors import CombinationSpaceTooLarge

__all__ = ['AttackFinding', 'BlockReport', 'attack_block', 'attack_report',
           'report_to_dict', 'MAX_COMBINATIONS']

MAX_COMBINATIONS = 10 ** 7
DEFAULT_ATTACK_TOL = 1e-4


@dataclass(frozen=True)
class AttackFinding:
    combo: tuple[int, ...]
    a: int
    b: int
    matched_value: float
    relative_error: float

    @property
    def letter(self) -> Optional[str]:
        return ALPHABET.symbol(self.b) if 1 <= self.b <= MAX_CODE else None


@dataclass(frozen=True)
class BlockReport:
    block_index: int
    findings: tuple[AttackFinding, ...]
    letters: tuple[str, ...]
    resolved: bool


def _combinations(dim: int, bound: int) -> np.ndarray:
    rows = [c for c in itertools.product(range(-bound, bound + 1), repeat=dim) if any(c)]
    return np.array(rows, dtype=np.int64).reshape(-1, dim)


def _preference(f: AttackFinding) -> tuple:
    return (f.relative_error, sum(1 for k in f.combo if k), f.combo)


def attack_block(y, table: DecodeTable, coeff_bound: int = 1,
                 rel_tol: float = DEFAULT_ATTACK_TOL) -> list[AttackFinding]:
    """All ``(a, b)`` table cells hit by some nonzero combination ``sum k_i y_i``.

    Weights range over ``-coeff_bound..coeff_bound``. Each cell keeps the
    combination with the smallest relative error.
    """
    y = linalg.as_vector(y)
    if coeff_bound < 1:
        raise ValueError('coeff_bound must be >= 1')
    if not rel_tol > 0:
        raise ValueError('rel_tol must be positive')
    count = (2 * coeff_bound + 1) ** y.shape[0] - 1
    if count > MAX_COMBINATIONS:
        raise CombinationSpaceTooLarge(count, MAX_COMBINATIONS)
    combos = _combinations(y.shape[0], coeff_bound)
    values = combos.astype(np.float64) @ y
    best: dict[tuple[int, int], AttackFinding] = {}
    for combo, v in zip(combos, values):
        if not v > 0:
            continue
        for cand in lookup(table, float(v), rel_tol):
            f = AttackFinding(tuple(int(k) for k in combo), cand.f, cand.c,
                              float(v), cand.relative_error)
            prev = best.get((f.a, f.b))
            if prev is None or _preference(f) < _preference(prev):
                best[(f.a, f.b)] = f
    return sorted(best.values(), key=lambda f: (f.relative_error, f.b, f.a))


def attack_report(message: CiphertextMessage, table: DecodeTable, coeff_bound: int = 1,
                  rel_tol: float = DEFAULT_ATTACK_TOL) -> list[BlockReport]:
    """Per-block findings and the symbols they suggest.

    A block counts as resolved when its findings name at least ``dim``
    distinct symbols; block positions stay unknown either way.
    """
    out = []
    for j, y in enumerate(message.blocks, start=1):
        findings = attack_block(y, table, coeff_bound, rel_tol)
        letters = []
        for f in findings:
            if f.letter is not None and f.letter not in letters:
                letters.append(f.letter)
        out.append(BlockReport(j, tuple(findings), tuple(letters),
                               len(letters) >= message.dim))
    return out


def report_to_dict(reports: list[BlockReport], coeff_bound: int, rel_tol: float,
                   table: DecodeTable) -> dict:
    return {
        'version': 1,
        'codec': table.codec.value,
        'coeff_bound': coeff_bound,
        'rel_tol': rel_tol,
        'blocks': [{
            'block': r.block_index,
            'resolved': r.resolved,
            'letters': list(r.letters),
            'findings': [{
                'combo': list(f.combo),
                'a': f.a,
                'b': f.b,
                'letter': f.letter,
                'value': '%.17g' % f.matched_value,
                'relative_error': f.relative_error,
            } for f in r.findings],
        } for r in reports],
    }
