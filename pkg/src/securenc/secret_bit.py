"""One secret, reliable bit through a channel that is both tapped and jammed.

The bit is hidden in the rank of a C' x C' matrix S over GF(Q), C' = C - Z_I:
S = 0 for bit 0 and S uniform (full rank with high probability) for bit 1.
S is coset-coded like any secrecy-layer message, so the wiretap sees nothing.
The jammer can add rank at most Z_O < C', which cannot lift a zero S to full
rank nor, except with probability <= C'/Q, pull a random S down.

Decoding follows the rank-metric treatment of lifted codes: RREF(Y) yields
``r`` (the payload, rows aligned with header pivots), ``Lhat`` (erasure
locations, mu of them) and ``Vhat`` (deviation rows, delta of them), with
r - x = Lhat V1 + L2 Vhat + L3 V3.  Projecting H r with J (J H Lhat = 0) and
K (Vhat K = 0) leaves J S K plus a term of rank <= Z_O - max(mu, delta).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .error_control import DecodeFailure
from .fields import ExtField
from .linalg import (Matrix, contract, expand, hstack, left_nullspace_basis, random_matrix, rank,
                     right_nullspace_basis, rref, vstack)
from .rank_codes import SecrecyCodebook


@dataclass(frozen=True)
class BitCodeword:
    """Transmission matrix plus the sender-private pieces that produced it."""

    X: Matrix
    S: Matrix
    x: Matrix

    @property
    def payload(self) -> Matrix:
        C = self.X.nrows
        return self.X.columns(C, self.X.ncols)


@dataclass(frozen=True)
class ReductionResult:
    r: Matrix
    Lhat: Matrix
    Vhat: Matrix
    mu: int
    delta: int


@dataclass(frozen=True)
class BitDecision:
    bit: int
    reduction: ReductionResult
    J: Matrix
    K: Matrix
    core_rank: int


def bit_encode(bit: int, cb: SecrecyCodebook, rng: np.random.Generator,
               noise: Matrix | None = None) -> BitCodeword:
    """X = [I_C | expand(T [S; N])] with S = 0 or uniform according to ``bit``."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    ext = cb.ext
    Cp = cb.redundancy
    S = random_matrix(Cp, Cp, ext, rng) if bit else Matrix.zeros(ext, Cp, Cp)
    if noise is None:
        noise = random_matrix(cb.k_code, Cp, ext, rng)
    x = cb.T @ vstack(S, noise) if cb.k_code else cb.T @ S
    X = hstack(Matrix.identity(ext.base, cb.n_code), expand(x, ext))
    return BitCodeword(X, S, x)


def reduce_received(Y: Matrix, ext: ExtField) -> ReductionResult:
    """Split RREF(Y) into payload estimate, erasures and deviations.

    Rows of RREF(Y) whose pivot lies in the C header columns are moved to the
    row index of their pivot; missing header pivots are the erasures (mu) and
    their rows stay zero.  Rows pivoting beyond the header are the
    deviations (delta).  ``Lhat`` holds, for each erased position u, the
    header column u of that rearranged matrix with the unit entry at u
    flipped, so the header reads I + Lhat I_U^T.
    """
    C = Y.nrows
    if (Y.ncols - C) % ext.degree:
        raise ValueError("payload width must be a multiple of the extension degree")
    R, piv = rref(Y)
    header_piv = [p for p in piv if p < C]
    mu = C - len(header_piv)
    delta = len(piv) - len(header_piv)
    placed = [[0] * Y.ncols for _ in range(C)]
    for row, p in zip(R.rows, header_piv):
        placed[p] = row
    pivset = set(header_piv)
    erased = [u for u in range(C) if u not in pivset]
    Lhat = Matrix(Y.field, [[placed[i][u] ^ (i == u) for u in erased] for i in range(C)], mu)
    r = contract(Matrix(Y.field, [row[C:] for row in placed], Y.ncols - C), ext)
    dev = Matrix(Y.field, [row[C:] for row in R.rows[len(header_piv):len(piv)]], Y.ncols - C)
    Vhat = contract(dev, ext)
    return ReductionResult(r, Lhat, Vhat, mu, delta)


def bit_decision(Y: Matrix, cb: SecrecyCodebook) -> BitDecision:
    """Full single-bit decoder with its intermediate matrices."""
    C, Cp = cb.n_code, cb.redundancy
    width = C * (1 + Cp)
    if Y.ncols < width:
        raise ValueError(f"received matrix needs {width} columns, got {Y.ncols}")
    # columns past C(1+C') are zero padding
    red = reduce_received(Y.columns(0, width), cb.ext)
    if red.mu >= Cp or red.delta >= Cp:
        raise DecodeFailure("excess_rank", f"mu={red.mu}, delta={red.delta} with C'={Cp}")
    J = left_nullspace_basis(cb.H @ red.Lhat)
    K = right_nullspace_basis(red.Vhat)
    core = J @ cb.H @ red.r @ K
    rk = rank(core)
    return BitDecision(int(rk == min(core.shape)), red, J, K, rk)


def bit_decode(Y: Matrix, cb: SecrecyCodebook) -> int:
    return bit_decision(Y, cb).bit


def residual_rank(decision: BitDecision, x: Matrix, cb: SecrecyCodebook) -> int:
    """rank(J H (r - x) K): what survives projection of the channel's damage."""
    return rank(decision.J @ cb.H @ (decision.reduction.r - x) @ decision.K)


def error_bound(cb: SecrecyCodebook) -> Fraction:
    """C'/Q, the bit-1 error bound."""
    return Fraction(cb.redundancy, cb.ext.order)


# -- rank of a uniformly random projected matrix -------------------------------

def full_rank_probability(nrows: int, ncols: int, order: int) -> Fraction:
    """Exact P[uniform nrows x ncols matrix over GF(order) has full rank]."""
    r, c = min(nrows, ncols), max(nrows, ncols)
    p = Fraction(1)
    for i in range(r):
        p *= 1 - Fraction(order) ** (i - c)
    return p


def _projections(Cp, mu, delta, ext, J, K):
    if J is None:
        J = Matrix(ext, [[int(i == j) for j in range(Cp)] for i in range(Cp - mu)], Cp)
    if K is None:
        K = Matrix(ext, [[int(i == j) for j in range(Cp - delta)] for i in range(Cp)], Cp - delta)
    if rank(J) != J.nrows or rank(K) != K.ncols:
        raise ValueError("J and K must have full rank")
    return J, K


def lemma1_outcomes(Cp: int, mu: int, delta: int, ext: ExtField,
                    J: Matrix | None = None, K: Matrix | None = None):
    """Yield, for every C' x C' matrix S' in lexicographic order, whether J S' K has full rank."""
    J, K = _projections(Cp, mu, delta, ext, J, K)
    elems = list(ext.elements())
    full = min(J.nrows, K.ncols)
    for flat in itertools.product(elems, repeat=Cp * Cp):
        S = Matrix(ext, [flat[i * Cp:(i + 1) * Cp] for i in range(Cp)], Cp)
        yield rank(J @ S @ K) == full


def lemma1_census(Cp: int, mu: int, delta: int, ext: ExtField,
                  J: Matrix | None = None, K: Matrix | None = None) -> Fraction:
    """Exact fraction of all C' x C' matrices S' with J S' K full rank."""
    hits = total = 0
    for ok in lemma1_outcomes(Cp, mu, delta, ext, J, K):
        hits += ok
        total += 1
    return Fraction(hits, total)


def lemma1_mc(Cp: int, mu: int, delta: int, ext: ExtField, trials: int, rng: np.random.Generator,
              J: Matrix | None = None, K: Matrix | None = None) -> float:
    """Monte Carlo frequency of J S' K being full rank for uniform S'."""
    if not (0 <= mu <= Cp and 0 <= delta <= Cp):
        raise ValueError("need 0 <= mu, delta <= C'")
    J, K = _projections(Cp, mu, delta, ext, J, K)
    full = min(J.nrows, K.ncols)
    hits = 0
    for _ in range(trials):
        S = random_matrix(Cp, Cp, ext, rng)
        hits += rank(J @ S @ K) == full
    return hits / trials
