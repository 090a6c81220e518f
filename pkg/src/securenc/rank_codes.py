"""Gabidulin parity-check matrices and their invertible completions.

A codebook for an [n, k] code over GF(q^C) holds the (n-k) x n Moore
matrix ``H`` with ``H[i][j] = g_j ** (q ** i)`` and a matrix ``T`` whose
inverse starts with the rows of ``H``.  Coset coding with such a pair hides
the message from any observer of k base-field combinations of the codeword.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .fields import ExtField
from .linalg import Matrix, invert, rank


class CodeParameterError(ValueError):
    pass


@dataclass(frozen=True)
class SecrecyCodebook:
    n_code: int
    k_code: int
    H: Matrix
    T: Matrix
    T_inv: Matrix

    @property
    def ext(self) -> ExtField:
        return self.H.field

    @property
    def redundancy(self) -> int:
        return self.n_code - self.k_code

    @property
    def T_message(self) -> Matrix:
        """Columns of T that carry the message block."""
        return self.T.columns(0, self.redundancy)

    @property
    def T_noise(self) -> Matrix:
        """Columns of T that carry the random key block; they span ker(H)."""
        return self.T.columns(self.redundancy, self.n_code)


def moore_matrix(points: list[int], nrows: int, ext: ExtField) -> Matrix:
    rows = [list(points)]
    for _ in range(nrows - 1):
        rows.append([ext.frobenius(g) for g in rows[-1]])
    return Matrix(ext, rows[:nrows], len(points))


def build_codebook(n_code: int, k_code: int, ext: ExtField, points: list[int] | None = None) -> SecrecyCodebook:
    """Gabidulin [n_code, k_code] parity-check matrix plus completion.

    ``points`` overrides the evaluation points, which default to the first
    ``n_code`` polynomial-basis elements.  Points that are dependent over the
    base field give a valid-looking but non-MRD codebook; that is only useful
    for negative tests.
    """
    if not 0 <= k_code < n_code <= ext.degree:
        raise CodeParameterError(
            f"need 0 <= k < n <= C, got k={k_code}, n={n_code}, C={ext.degree}")
    if points is None:
        points = [ext.basis(j) for j in range(n_code)]
    if len(points) != n_code:
        raise CodeParameterError(f"expected {n_code} evaluation points")
    H = moore_matrix(points, n_code - k_code, ext)
    if rank(H) != H.nrows:
        raise CodeParameterError("parity-check matrix is not full row rank")
    completion = []
    for i in range(n_code):
        if len(completion) == k_code:
            break
        e = [int(j == i) for j in range(n_code)]
        trial = Matrix(ext, H.rows + completion + [e], n_code)
        if rank(trial) == trial.nrows:
            completion.append(e)
    T_inv = Matrix(ext, H.rows + completion, n_code)
    return SecrecyCodebook(n_code, k_code, H, invert(T_inv), T_inv)


def _full_rank_matrices(nrows: int, ncols: int, field):
    elems = list(field.elements())
    for flat in itertools.product(elems, repeat=nrows * ncols):
        B = Matrix(field, [flat[i * ncols:(i + 1) * ncols] for i in range(nrows)], ncols)
        if rank(B) == nrows:
            yield B


def mrd_spotcheck(cb: SecrecyCodebook) -> bool:
    """Exhaustively confirm that a k_code-row wiretap learns nothing.

    For every full-rank base-field B with ``k_code`` rows and every message
    column s, the multiset of views ``B @ T @ [s; n]`` over all key columns n
    must equal the one for s = 0.  Because B is over the base field this view
    is in bijection with the expanded view ``B @ expand(T @ [s; n])``.
    Only feasible for tiny fields.
    """
    ext = cb.ext
    if ext.q > 4 or ext.degree > 3:
        raise CodeParameterError("exhaustive check limited to q <= 4, C <= 3")
    elems = list(ext.elements())
    r, k = cb.redundancy, cb.k_code
    mul = ext.mul

    def apply(M, v):
        out = []
        for row in M.rows:
            acc = 0
            for a, b in zip(row, v):
                acc ^= mul(a, b)
            out.append(acc)
        return tuple(out)

    messages = list(itertools.product(elems, repeat=r))
    keys = list(itertools.product(elems, repeat=k))
    for B in _full_rank_matrices(k, cb.n_code, ext.base):
        BT = B @ cb.T
        BT_s, BT_n = BT.columns(0, r), BT.columns(r, cb.n_code)
        key_views = [apply(BT_n, n) for n in keys]
        reference = Counter(key_views)
        # a message's view distribution is the key distribution translated by
        # the message's own offset, so each distinct offset is checked once
        checked = set()
        for s in messages:
            shift = apply(BT_s, s)
            if shift in checked:
                continue
            views = Counter(tuple(a ^ b for a, b in zip(v, shift)) for v in key_views)
            if views != reference:
                return False
            checked.add(shift)
    return True
