"""Secret, reliable transmission at rate C - Z_O - Z_I.

Three layers share one C x n transmission matrix, split by columns:

    [ I_C | k bit blocks, C*C' wide each | [M; 0], C*n' wide ]

M is the coset-coded message (secrecy layer over a [b, Z_I] code).  The k
bits are the error-control hash secret of M, each sent through the
single-bit scheme.  The receiver decodes the bits, rebuilds the hash secret,
distils M from the payload columns and strips the coset coding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .channel import CodeParams
from .error_control import DecodeFailure, HashSecret, ec_decode, ec_hash, hash_length, secret_bits
from .fields import ExtField, extension
from .linalg import Matrix, ShapeError, contract, expand, hstack, random_matrix, vstack
from .rank_codes import SecrecyCodebook, build_codebook
from .secret_bit import bit_decision


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class FullCodeLayout:
    params: CodeParams

    def __post_init__(self):
        p = self.params
        if not p.positive_rate:
            raise LayoutError(f"C - Z_O - Z_I = {p.C - p.Z_O - p.Z_I} must be at least 1")
        if p.n % p.C:
            raise LayoutError(f"n={p.n} is not a multiple of C={p.C}")
        if self.n_prime < 1:
            raise LayoutError(
                f"n={p.n} leaves no payload; need n >= {p.C * (2 + self.k * self.C_prime)}")

    @property
    def b(self) -> int:
        return self.params.C - self.params.Z_O

    @property
    def C_prime(self) -> int:
        return self.params.C - self.params.Z_I

    @property
    def R(self) -> int:
        return self.params.C - self.params.Z_O - self.params.Z_I

    @property
    def alpha(self) -> int:
        return hash_length(self.params)

    @property
    def k(self) -> int:
        return secret_bits(self.params)

    @property
    def n_prime(self) -> int:
        p = self.params
        return p.n // p.C - (1 + self.k * self.C_prime)

    @property
    def block_width(self) -> int:
        return self.params.C * self.C_prime

    @property
    def header_width(self) -> int:
        return self.params.C + self.k * self.block_width

    def bit_columns(self, i: int) -> range:
        start = self.params.C + i * self.block_width
        return range(start, start + self.block_width)

    @property
    def payload_columns(self) -> range:
        return range(self.header_width, self.params.n)

    @property
    def ec_width(self) -> int:
        return self.b + self.params.C * self.n_prime

    @cached_property
    def ext(self) -> ExtField:
        return extension(self.params.field, self.params.C)

    @cached_property
    def bit_codebook(self) -> SecrecyCodebook:
        return build_codebook(self.params.C, self.params.Z_I, self.ext)

    @cached_property
    def message_codebook(self) -> SecrecyCodebook:
        return build_codebook(self.b, self.params.Z_I, self.ext)

    @classmethod
    def smallest(cls, C: int, Z_I: int, Z_O: int, q: int, n_prime: int = 1) -> FullCodeLayout:
        """Layout with the given payload width and the packet length it implies."""
        probe = CodeParams(C, Z_I, Z_O, q, C)
        k = secret_bits(probe)
        n = C * (1 + k * (C - Z_I) + n_prime)
        return cls(CodeParams(C, Z_I, Z_O, q, n))


@dataclass(frozen=True)
class FullCodeword:
    X: Matrix
    M: Matrix
    secret: HashSecret
    bits: tuple[int, ...]


def encode_bits(bits: list[int], cb: SecrecyCodebook, rng: np.random.Generator) -> Matrix:
    """All bit blocks side by side: expand(T [S^1 .. S^k; N^1 .. N^k])."""
    ext = cb.ext
    Cp = cb.redundancy
    S = random_matrix(Cp, Cp * len(bits), ext, rng)
    for row in S.rows:
        for i, bit in enumerate(bits):
            if not bit:
                row[i * Cp:(i + 1) * Cp] = [0] * Cp
    if cb.k_code:
        x = cb.T @ vstack(S, random_matrix(cb.k_code, Cp * len(bits), ext, rng))
    else:
        x = cb.T @ S
    return expand(x, ext)


def full_encode_traced(S: Matrix, layout: FullCodeLayout, rng: np.random.Generator) -> FullCodeword:
    p = layout.params
    if S.shape != (layout.R, layout.n_prime):
        raise ShapeError(f"message must be {(layout.R, layout.n_prime)}, got {S.shape}")
    cb0 = layout.message_codebook
    N = random_matrix(p.Z_I, layout.n_prime, layout.ext, rng)
    x = cb0.T @ vstack(S, N) if p.Z_I else cb0.T @ S
    M = expand(x, layout.ext)
    secret = ec_hash(M, p, rng)
    bits = secret.to_bits()
    F = p.field
    blocks = encode_bits(bits, layout.bit_codebook, rng)
    payload = vstack(M, Matrix.zeros(F, p.C - layout.b, M.ncols))
    X = hstack(Matrix.identity(F, p.C), blocks, payload)
    return FullCodeword(X, M, secret, tuple(bits))


def full_encode(S: Matrix, layout: FullCodeLayout, rng: np.random.Generator) -> Matrix:
    return full_encode_traced(S, layout, rng).X


def decode_secret(Y: Matrix, layout: FullCodeLayout) -> HashSecret:
    """Decode every bit block and unpack the hash secret."""
    C = layout.params.C
    head = Y.columns(0, C)
    bits = []
    for i in range(layout.k):
        cols = layout.bit_columns(i)
        Yi = hstack(head, Y.columns(cols.start, cols.stop))
        try:
            bits.append(bit_decision(Yi, layout.bit_codebook).bit)
        except DecodeFailure as exc:
            raise DecodeFailure(exc.reason, f"bit {i}: {exc}", stage=f"bit:{i}") from exc
    try:
        return HashSecret.from_bits(bits, layout.b, layout.alpha, layout.params.field)
    except DecodeFailure as exc:
        raise DecodeFailure(exc.reason, str(exc), stage="hash") from exc


def full_decode(Y: Matrix, layout: FullCodeLayout) -> Matrix:
    """Recover S; raises DecodeFailure whose ``stage`` names the first failing step."""
    p = layout.params
    if Y.shape != (p.C, p.n):
        raise ShapeError(f"received matrix must be {(p.C, p.n)}, got {Y.shape}")
    secret = decode_secret(Y, layout)
    pay = layout.payload_columns
    Y0 = hstack(Y.columns(0, layout.b), Y.columns(pay.start, pay.stop))
    try:
        M = ec_decode(Y0, secret, p)
    except DecodeFailure as exc:
        raise DecodeFailure(exc.reason, str(exc), stage="ec") from exc
    return layout.message_codebook.H @ contract(M, layout.ext)


def rate_report(layout: FullCodeLayout) -> dict[str, Fraction]:
    """Exact rates: the asymptotic R, the rate at this n, and the gap."""
    p = layout.params
    R = Fraction(layout.R)
    net = Fraction(layout.R * layout.n_prime * p.C, p.n)
    return {"gross_rate": R, "net_rate": net, "rate_loss": R - net}


def error_bound(layout: FullCodeLayout) -> float:
    """n^(C^2)/q with the unknown constant taken as 1 (asymptotic only)."""
    p = layout.params
    return float(p.n) ** (p.C ** 2) / p.q
