"""Orthogonal-matrix block cipher, its decode table, and a ciphertext-only attack."""

__version__ = '0.1.0'
