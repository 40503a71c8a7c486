"""Exception hierarchy shared by all orthocipher modules."""

from __future__ import annotations

from typing import Sequence


class OrthoCipherError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(OrthoCipherError, ValueError):
    pass


class InvalidDimension(OrthoCipherError, ValueError):
    pass


class UnknownSymbol(OrthoCipherError, ValueError):
    def __init__(self, position: int, character: str):
        self.position = position
        self.character = character
        super().__init__(f'unknown symbol {character!r} at position {position}')


class InvalidCode(OrthoCipherError, ValueError):
    def __init__(self, position: int, code: int):
        self.position = position
        self.code = code
        super().__init__(f'invalid symbol code {code!r} at position {position}')


class OrthogonalityViolation(OrthoCipherError, ValueError):
    def __init__(self, deviation: float, tol: float):
        self.deviation = deviation
        self.tol = tol
        super().__init__(
            f'matrix is not orthogonal: max|M M^T - I| = {deviation:.3g} > {tol:.3g}')


class MalformedKeyFile(OrthoCipherError, ValueError):
    pass


class MalformedCiphertext(OrthoCipherError, ValueError):
    pass


class NotSymmetric(OrthoCipherError, ValueError):
    pass


class NoConvergence(OrthoCipherError, ArithmeticError):
    pass


class CombinationSpaceTooLarge(OrthoCipherError, ValueError):
    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__(f'{count} coefficient combinations exceed the limit of {limit}')


class BlockError(OrthoCipherError):
    """Errors tied to one cipher block; `block_index` is 1-based once known."""

    def __init__(self, message: str, block_index: int | None = None):
        self.detail = message
        self.block_index = block_index
        super().__init__(self._render())

    def _render(self) -> str:
        if self.block_index is None:
            return self.detail
        return f'block {self.block_index}: {self.detail}'

    def at_block(self, block_index: int) -> 'BlockError':
        self.block_index = block_index
        self.args = (self._render(),)
        return self


class DegenerateBlock(BlockError):
    def __init__(self, positions: Sequence[int], block_index: int | None = None):
        self.positions = tuple(int(p) for p in positions)
        super().__init__(
            f'degenerate block, positions {list(self.positions)} are unrecoverable',
            block_index)


class DecodeFailure(BlockError):
    pass


class AmbiguousDecode(BlockError):
    def __init__(self, candidates: Sequence[Sequence[int]], block_index: int | None = None):
        self.candidates = [tuple(int(v) for v in c) for c in candidates]
        shown = ', '.join(str(c) for c in self.candidates[:4])
        super().__init__(
            f'{len(self.candidates)} consistent code assignments ({shown})', block_index)
