"""An older single-bit scheme that relies on a public hash, and how to break it.

Both hash matrices D_0, D_1 are public.  To send bit I the sender picks a
(C - Z_O) x C^2 matrix X whose row-major flattening v satisfies v D_I = 0.
The receiver accepts I when some nonzero v = [x_1 Y, ..., x_{C-Z_O} Y] built
from its own row space does the same.  Because the hash is public, a jammer
can forge a bit-1 codeword itself (``mimic``), or, when it can overhear
enough, complete overheard rows into one.  Either way the receiver also sees
bit 1 and can no longer tell who sent it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import AdversaryStrategy, CodeParams
from .fields import BaseField
from .linalg import Matrix, invert, random_matrix, rank, rref, vstack


class AttackInfeasible(ValueError):
    """Neither mimic precondition holds for these parameters."""


AMBIGUOUS = "ambiguous"


def hash_rows(C: int, Z_O: int) -> int:
    """Length of a flattened codeword, C^2 (C - Z_O)."""
    return C * C * (C - Z_O)


def _vandermonde_columns(gens: list[int], length: int, F: BaseField) -> Matrix:
    cols = []
    for u in gens:
        col, x = [], u
        for _ in range(length):
            col.append(x)
            x = F.mul(x, u)
        cols.append(col)
    return Matrix(F, cols, length).transpose()


@dataclass(frozen=True)
class LegacyHashPair:
    """Public hashes D_0, D_1 with the inverses of their C^2 x C^2 tails."""

    C: int
    Z_O: int
    D0: Matrix
    D1: Matrix
    gens0: tuple[int, ...]
    gens1: tuple[int, ...]
    tail_inv0: Matrix
    tail_inv1: Matrix

    def D(self, bit: int) -> Matrix:
        return self.D1 if bit else self.D0

    def tail_inv(self, bit: int) -> Matrix:
        return self.tail_inv1 if bit else self.tail_inv0

    @property
    def field(self) -> BaseField:
        return self.D0.field

    @property
    def length(self) -> int:
        return self.D0.nrows


def sample_hash_pair(params: CodeParams, rng: np.random.Generator) -> LegacyHashPair:
    """Draw generators until both tails are invertible."""
    C, Z_O = params.C, params.Z_O
    if C - Z_O < 2:
        # with one row the kernel condition leaves only X = 0
        raise ValueError(f"need C - Z_O >= 2, got {C - Z_O}")
    F = params.field
    L, w = hash_rows(C, Z_O), C * C
    if F.q - 1 < w:
        # an invertible tail needs C^2 distinct nonzero generators
        raise ValueError(f"need q > C^2 = {w}, got q={F.q}")
    out = []
    for _ in range(2):
        while True:
            gens = F.random(rng, w)
            D = _vandermonde_columns(gens, L, F)
            tail = D.take_rows(range(L - w, L))
            if rank(tail) == w:
                out.append((D, tuple(gens), invert(tail)))
                break
    (D0, g0, t0), (D1, g1, t1) = out
    return LegacyHashPair(C, Z_O, D0, D1, g0, g1, t0, t1)


def complete_to_kernel(prefix: list[int], D: Matrix, tail_inv: Matrix) -> list[int]:
    """The unique r with [prefix, r] D = 0 (r has C^2 entries)."""
    L, w = D.nrows, D.ncols
    if len(prefix) != L - w:
        raise ValueError(f"prefix must have {L - w} entries, got {len(prefix)}")
    if not prefix:
        return [0] * w
    head = D.take_rows(range(L - w))
    rhs = Matrix(D.field, [prefix], L - w) @ head
    return (rhs @ tail_inv).rows[0]


def legacy_encode(bit: int, pair: LegacyHashPair, rng: np.random.Generator) -> Matrix:
    """A (C - Z_O) x C^2 matrix whose flattening lies in the left kernel of D_bit."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    F = pair.field
    w = pair.C * pair.C
    prefix = F.random(rng, pair.length - w)
    v = prefix + complete_to_kernel(prefix, pair.D(bit), pair.tail_inv(bit))
    return Matrix(F, [v[i * w:(i + 1) * w] for i in range(pair.C - pair.Z_O)], w)


def flatten(X: Matrix) -> Matrix:
    return Matrix(X.field, [[v for row in X.rows for v in row]], X.nrows * X.ncols)


def pad_to_channel(X: Matrix, params: CodeParams) -> Matrix:
    """Stack zero rows under X so it fills all C outgoing packets."""
    return vstack(X, Matrix.zeros(X.field, params.C - X.nrows, X.ncols))


def satisfies(Y: Matrix, D: Matrix, blocks: int) -> bool:
    """Is there a nonzero v = [x_1 Y, ..., x_blocks Y] with v D = 0?

    With R a basis of the row space of Y, such v are exactly the nonzero
    vectors of the row space of blockdiag(R, ..., R) D's left kernel; one
    exists iff that product has rank below blocks * rank(Y).
    """
    R, piv = rref(Y)
    rho = len(piv)
    if rho == 0:
        return False
    R = R.take_rows(range(rho))
    w = Y.ncols
    G = vstack(*[R @ D.take_rows(range(i * w, (i + 1) * w)) for i in range(blocks)])
    return rank(G) < blocks * rho


def legacy_decode(Y: Matrix, pair: LegacyHashPair) -> int | str:
    """1 or 0 when exactly one hash is satisfied, otherwise ``AMBIGUOUS``."""
    if Y.ncols != pair.C * pair.C:
        raise ValueError(f"received matrix needs {pair.C * pair.C} columns, got {Y.ncols}")
    blocks = pair.C - pair.Z_O
    hits = [satisfies(Y, pair.D(bit), blocks) for bit in (0, 1)]
    if hits[0] != hits[1]:
        return int(hits[1])
    return AMBIGUOUS


def mimic_mode(params: CodeParams) -> str:
    """``direct`` when Z_O >= C - Z_O, ``eavesdrop`` when Z_O + Z_I >= C - Z_O."""
    b = params.C - params.Z_O
    if params.Z_O >= b:
        return "direct"
    if params.Z_O + params.Z_I >= b:
        return "eavesdrop"
    raise AttackInfeasible(
        f"Z_O={params.Z_O}, Z_I={params.Z_I}: need Z_O >= C - Z_O or Z_O + Z_I >= C - Z_O")


def legacy_mimic_attack(params: CodeParams, pair: LegacyHashPair, W: Matrix,
                        rng: np.random.Generator, target: int = 1) -> Matrix:
    """C x C^2 injection of rank <= Z_O that makes D_target look satisfied.

    Direct: forge a whole target codeword X' and inject random combinations
    of its rows.  Eavesdrop-assisted: take t overheard rows y (already in the
    receiver's row space), choose the first Z_O - 1 forged rows at random and
    solve the last one so that [y, z] D_target = 0.
    """
    F = pair.field
    C, w = params.C, params.C * params.C
    b = C - params.Z_O
    mode = mimic_mode(params)
    if mode == "direct":
        forged = legacy_encode(target, pair, rng)
        return random_matrix(C, b, F, rng) @ forged
    t = b - params.Z_O
    if W.nrows < t:
        raise AttackInfeasible(f"need {t} overheard rows, got {W.nrows}")
    taps = [v for row in W.rows[:t] for v in row]
    free = F.random(rng, (params.Z_O - 1) * w)
    z = free + complete_to_kernel(taps + free, pair.D(target), pair.tail_inv(target))
    forged = Matrix(F, [z[i * w:(i + 1) * w] for i in range(params.Z_O)], w)
    return random_matrix(C, params.Z_O, F, rng) @ forged


def mimic_strategy(params: CodeParams, pair: LegacyHashPair, target: int = 1) -> AdversaryStrategy:
    mimic_mode(params)

    def inject(W, rng):
        return legacy_mimic_attack(params, pair, W, rng, target)

    return AdversaryStrategy("mimic", inject)


def legacy_params(C: int, Z_I: int, Z_O: int, q: int) -> CodeParams:
    """Channel parameters for this scheme: packets are C^2 symbols long."""
    return CodeParams(C, Z_I, Z_O, q, C * C)

