"""Symbol alphabet, scalar codec functions and the coefficient/exponent table."""

from __future__ import annotations

import enum
import io
import math
import string
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidCode, UnknownSymbol

__all__ = [
    'Alphabet', 'ALPHABET', 'Codec', 'DecodeTable', 'LookupCandidate', 'PAD_CODE',
    'encode_text', 'decode_codes', 'codec_forward', 'build_table', 'lookup',
    'DEFAULT_LOOKUP_TOL',
]

DEFAULT_LOOKUP_TOL = 1e-6


class Alphabet:
    """Bijection between symbols and integer codes ``1..len(symbols)``."""

    def __init__(self, symbols: Sequence[str]):
        if len(set(symbols)) != len(symbols):
            raise ValueError('alphabet symbols must be distinct')
        self.symbols = tuple(symbols)
        self._codes = {s: i + 1 for i, s in enumerate(self.symbols)}

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, ch: str) -> bool:
        return ch in self._codes

    def code(self, ch: str) -> int:
        return self._codes[ch]

    def symbol(self, code: int) -> str:
        return self.symbols[code - 1]


# A-Z -> 1..26, a-z -> 27..52, space -> 53, 0-9 -> 54..63
ALPHABET = Alphabet(list(string.ascii_uppercase) + list(string.ascii_lowercase)
                    + [' '] + list(string.digits))
PAD_CODE = ALPHABET.code(' ')


def encode_text(s: str, alphabet: Alphabet = ALPHABET) -> tuple[int, ...]:
    codes = []
    for pos, ch in enumerate(s):
        if ch not in alphabet:
            raise UnknownSymbol(pos, ch)
        codes.append(alphabet.code(ch))
    return tuple(codes)


def decode_codes(codes: Iterable[int], alphabet: Alphabet = ALPHABET) -> str:
    out = []
    for pos, code in enumerate(codes):
        if isinstance(code, bool) or int(code) != code or not 1 <= code <= len(alphabet):
            raise InvalidCode(pos, code)
        out.append(alphabet.symbol(int(code)))
    return ''.join(out)


class Codec(str, enum.Enum):
    """Strictly increasing scalar functions used on the code range ``[1, inf)``."""

    EXP = 'exp'
    SINH = 'sinh'
    COSH = 'cosh'

    def forward(self, c):
        return _FORWARD[self](c)

    @classmethod
    def parse(cls, value: 'Codec | str') -> 'Codec':
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f'unknown codec {value!r}; choose from '
                             f'{", ".join(c.value for c in cls)}') from None


_FORWARD = {Codec.EXP: np.exp, Codec.SINH: np.sinh, Codec.COSH: np.cosh}


def codec_forward(g: Codec | str, c):
    """Evaluate the codec; accepts scalars or arrays."""
    out = Codec.parse(g).forward(c)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class DecodeTable:
    """Grid ``values[f-1, c-1] = f * g(c)`` for ``1 <= f <= f_max``, ``1 <= c <= c_max``."""

    codec: Codec
    f_max: int
    c_max: int
    values: np.ndarray

    def value(self, f: int, c: int) -> float:
        return float(self.values[f - 1, c - 1])

    def to_csv(self) -> str:
        buf = io.StringIO()
        header = [f'f*{self.codec.value}(c)'] + [str(c) for c in range(1, self.c_max + 1)]
        buf.write(','.join(header) + '\n')
        for f in range(1, self.f_max + 1):
            row = [str(f)] + ['%.17g' % v for v in self.values[f - 1]]
            buf.write(','.join(row) + '\n')
        return buf.getvalue()


class LookupCandidate(NamedTuple):
    f: int
    c: int
    relative_error: float


def build_table(g: Codec | str = Codec.EXP, f_max: int = 64, c_max: int = 65) -> DecodeTable:
    if f_max < 1 or c_max < 1:
        raise ValueError('table bounds must be positive')
    g = Codec.parse(g)
    f = np.arange(1, f_max + 1, dtype=np.float64)[:, None]
    c = np.arange(1, c_max + 1, dtype=np.float64)[None, :]
    values = f * g.forward(c)
    values.setflags(write=False)
    return DecodeTable(g, f_max, c_max, values)


def lookup(t: DecodeTable, v: float, rel_tol: float = DEFAULT_LOOKUP_TOL) -> list[LookupCandidate]:
    """Table cells within `rel_tol` (relative to the cell) of `v`, best first.

    Scans the exponent axis and solves for the admissible coefficient range
    per column, so the cost is O(c_max) for tolerances below ``0.5 / f_max``.
    """
    if not v > 0:
        raise ValueError('lookup value must be positive')
    if not rel_tol > 0:
        raise ValueError('rel_tol must be positive')
    out = []
    base = t.values[0]  # 1 * g(c)
    for ci in range(t.c_max):
        g = base[ci]
        # one cell of slack either side; the exact predicate below decides
        f_lo = max(1, math.ceil(v / (g * (1 + rel_tol))) - 1)
        f_hi = t.f_max if rel_tol >= 1 else min(t.f_max, math.floor(v / (g * (1 - rel_tol))) + 1)
        for f in range(f_lo, f_hi + 1):
            cell = t.values[f - 1, ci]
            err = abs(v - cell)
            if err <= rel_tol * cell:
                out.append(LookupCandidate(f, ci + 1, float(err / cell)))
    out.sort(key=lambda cand: (cand.relative_error, cand.c, cand.f))
    return out
