"""Jamming-resilient transmission given a short secret known to the receiver.

The sender appends identity columns to its b x (w-b) message M, sends
[I_b M; 0], and shares out of band a random linear hash of Xbar = [I_b M]:
alpha = bC + 1 evaluation points rho_j and the b x alpha matrix
Hhash = Xbar P with P[i][j] = rho_j ** i (rows i = 1..w).  The receiver finds
the unique U with U RREF(Y) P = Hhash and reads Xbar = U RREF(Y).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import CodeParams
from .fields import BaseField
from .linalg import Matrix, NoSolutionError, hstack, rref, solve_left, vstack


class DecodeFailure(ArithmeticError):
    """Decoding stopped with a detected failure.

    ``reason`` is one of ``no_solution``, ``not_unique``, ``malformed``
    (error-control stage), ``bad_secret`` (hash unpacking), ``bit`` or
    ``excess_rank`` (single-bit stage).
    """

    def __init__(self, reason: str, message: str = "", stage: str | None = None):
        super().__init__(message or reason)
        self.reason = reason
        self.stage = stage or reason


def hash_length(params: CodeParams) -> int:
    """alpha = bC + 1 evaluation points."""
    return (params.C - params.Z_O) * params.C + 1


def secret_bits(params: CodeParams) -> int:
    """k = alpha (b + 1) log2 q."""
    b = params.C - params.Z_O
    return hash_length(params) * (b + 1) * params.field.m


def evaluation_matrix(rhos: list[int], width: int, F: BaseField) -> Matrix:
    """w x alpha matrix P with P[i-1][j] = rho_j ** i, i = 1..w."""
    cols = []
    for rho in rhos:
        col, x = [], rho
        for _ in range(width):
            col.append(x)
            x = F.mul(x, rho)
        cols.append(col)
    return Matrix(F, cols, width).transpose()


@dataclass(frozen=True)
class HashSecret:
    rhos: tuple[int, ...]
    Hhash: Matrix

    @property
    def field(self) -> BaseField:
        return self.Hhash.field

    def to_bits(self) -> list[int]:
        """rhos first, then Hhash row-major; each symbol m bits, MSB first."""
        m = self.field.m
        symbols = list(self.rhos) + [v for row in self.Hhash.rows for v in row]
        return [(v >> (m - 1 - i)) & 1 for v in symbols for i in range(m)]

    @classmethod
    def from_bits(cls, bits: list[int], b: int, alpha: int, F: BaseField) -> HashSecret:
        m = F.m
        if len(bits) != alpha * (b + 1) * m:
            raise DecodeFailure("bad_secret", f"expected {alpha * (b + 1) * m} bits, got {len(bits)}")
        symbols = []
        for k in range(0, len(bits), m):
            v = 0
            for bit in bits[k:k + m]:
                v = (v << 1) | bit
            symbols.append(v)
        rhos = tuple(symbols[:alpha])
        rest = symbols[alpha:]
        H = Matrix(F, [rest[i * alpha:(i + 1) * alpha] for i in range(b)], alpha)
        return cls(rhos, H)


def message_block(M: Matrix) -> Matrix:
    """Xbar = [I_b | M]."""
    return hstack(Matrix.identity(M.field, M.nrows), M)


def ec_hash(M: Matrix, params: CodeParams, rng: np.random.Generator) -> HashSecret:
    F = M.field
    rhos = F.random(rng, hash_length(params))
    Xbar = message_block(M)
    return HashSecret(tuple(rhos), Xbar @ evaluation_matrix(rhos, Xbar.ncols, F))


def ec_encode(M: Matrix, params: CodeParams) -> Matrix:
    b = params.C - params.Z_O
    if M.nrows != b:
        raise ValueError(f"message needs b = C - Z_O = {b} rows, got {M.nrows}")
    Xbar = message_block(M)
    return vstack(Xbar, Matrix.zeros(M.field, params.C - b, Xbar.ncols))


def ec_decode(Y: Matrix, secret: HashSecret, params: CodeParams) -> Matrix:
    """Recover M from ``Y = A X + Z`` using the shared hash secret.

    Only the nonzero rows of RREF(Y) take part; zero rows would make U
    trivially non-unique without adding information.
    """
    b = params.C - params.Z_O
    F = Y.field
    R, piv = rref(Y)
    Ybar = R.take_rows(range(len(piv)))
    P = evaluation_matrix(list(secret.rhos), Y.ncols, F)
    try:
        U, unique = solve_left(Ybar @ P, secret.Hhash)
    except NoSolutionError as exc:
        raise DecodeFailure("no_solution", "hash is not consistent with the received row space") from exc
    if not unique:
        raise DecodeFailure("not_unique", "hash equations do not pin down U")
    Xbar = U @ Ybar
    if Xbar.columns(0, b) != Matrix.identity(F, b):
        raise DecodeFailure("malformed", "recovered block does not start with I_b")
    return Xbar.columns(b, Xbar.ncols)


def failure_bound(width: int, params: CodeParams) -> float:
    """n^alpha / q, the chance that the hash system has more than one solution."""
    return float(width) ** hash_length(params) / params.q
