"""Coset coding against an eavesdropper that taps at most Z_I links.

A message S over GF(Q) with C - Z_I rows is stacked on a uniform key N with
Z_I rows, mixed by the codebook's T and lifted: X = [I_C | expand(T [S; N])].
The receiver strips the transfer matrix with the identity header and reads
S back through H.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .channel import CodeParams
from .linalg import (Matrix, SingularMatrixError, ShapeError, contract, expand, hstack,
                     invert, random_matrix, vstack)
from .rank_codes import SecrecyCodebook


class DecodeError(ArithmeticError):
    pass


def secrecy_encode(S: Matrix, cb: SecrecyCodebook, rng: np.random.Generator | None = None,
                   noise: Matrix | None = None) -> Matrix:
    """Lift ``S`` into a C x C(1+n') base-field transmission matrix.

    ``noise`` pins the key N and exists for tests and exhaustive audits; the
    normal path samples it from ``rng``.
    """
    ext = cb.ext
    if S.nrows != cb.redundancy:
        raise ShapeError(f"message needs {cb.redundancy} rows, got {S.nrows}")
    if S.ncols < 1:
        raise ShapeError("message needs at least one column")
    if noise is None:
        noise = random_matrix(cb.k_code, S.ncols, ext, rng)
    elif noise.shape != (cb.k_code, S.ncols):
        raise ShapeError(f"noise must be {(cb.k_code, S.ncols)}, got {noise.shape}")
    x = cb.T @ vstack(S, noise) if cb.k_code else cb.T @ S
    return hstack(Matrix.identity(ext.base, cb.n_code), expand(x, ext))


def recover_payload(Y: Matrix, cb: SecrecyCodebook) -> Matrix:
    """x = contract(A^-1 Y_payload), using the header columns of Y as A."""
    C = cb.n_code
    try:
        A_inv = invert(Y.columns(0, C))
    except SingularMatrixError as exc:
        raise DecodeError("header block is singular; the channel was jammed") from exc
    return contract(A_inv @ Y.columns(C, Y.ncols), cb.ext)


def secrecy_decode(Y: Matrix, cb: SecrecyCodebook) -> Matrix:
    return cb.H @ recover_payload(Y, cb)


@dataclass
class AuditReport:
    """Outcome of an exhaustive wiretap audit."""

    wiretaps: int = 0
    messages: int = 0
    keys: int = 0
    violation_count: int = 0
    violations: list[tuple[Matrix, Matrix, Matrix]] = field(default_factory=list)
    per_wiretap: list[tuple[Matrix, int]] = field(default_factory=list)

    @property
    def secure(self) -> bool:
        return self.violation_count == 0


def secrecy_audit(cb: SecrecyCodebook, params: CodeParams, max_violations: int = 10) -> AuditReport:
    """Enumerate every Z_I x C wiretap B and every message.

    For each B the exact distribution of W = B X over all keys is computed
    for every message and compared with that of the all-zero message; equal
    distributions for all messages is the same as equality for every pair.
    Violations are reported as ``(B, S_ref, S)`` triples.
    """
    ext = cb.ext
    F = ext.base
    C = cb.n_code
    n_prime = params.n // C - 1
    if params.n % C or n_prime < 1:
        raise ShapeError(f"n={params.n} must be a multiple of C={C} with n/C - 1 >= 1")
    elems = list(ext.elements())
    r, k = cb.redundancy, cb.k_code

    def as_matrix(flat, rows):
        return Matrix(ext, [list(flat[i * n_prime:(i + 1) * n_prime]) for i in range(rows)], n_prime)

    messages = [as_matrix(s, r) for s in itertools.product(elems, repeat=r * n_prime)]
    keys = [as_matrix(v, k) for v in itertools.product(elems, repeat=k * n_prime)]
    # the encoder is deterministic given (S, N), so encode everything once
    codewords = [[secrecy_encode(S, cb, noise=N) for N in keys] for S in messages]
    report = AuditReport(messages=len(messages), keys=len(keys))
    for flat in itertools.product(list(F.elements()), repeat=params.Z_I * C):
        B = Matrix(F, [list(flat[i * C:(i + 1) * C]) for i in range(params.Z_I)], C)
        report.wiretaps += 1
        reference = None
        bad = 0
        for S, Xs in zip(messages, codewords):
            dist = Counter(tuple(map(tuple, (B @ X).rows)) for X in Xs)
            if reference is None:
                reference = (S, dist)
            elif dist != reference[1]:
                bad += 1
                report.violation_count += 1
                if len(report.violations) < max_violations:
                    report.violations.append((B, reference[0], S))
        report.per_wiretap.append((B, bad))
    return report
