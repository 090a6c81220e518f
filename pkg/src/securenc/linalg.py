"""Dense matrices over a BaseField or ExtField, and elimination routines.

Rows are stored as lists of int field elements.  Products between a
base-field matrix and an extension-field matrix are computed in the
extension, base elements embedding as themselves (see ``fields``).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .fields import BaseField, ExtField


class SingularMatrixError(ArithmeticError):
    pass


class NoSolutionError(ArithmeticError):
    pass


class ShapeError(ValueError):
    pass


class Matrix:
    """A rows x cols matrix over ``field``."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows: Iterable[Sequence[int]], ncols: int | None = None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise ShapeError("ncols is required for a matrix with no rows")
            ncols = len(self.rows[0])
        self.ncols = ncols
        if any(len(r) != ncols for r in self.rows):
            raise ShapeError("ragged rows")

    @classmethod
    def _wrap(cls, field, rows: list[list[int]], ncols: int) -> Matrix:
        """Adopt ``rows`` without copying or validation (internal fast path)."""
        M = cls.__new__(cls)
        M.field = field
        M.rows = rows
        M.nrows = len(rows)
        M.ncols = ncols
        return M

    @classmethod
    def zeros(cls, field, nrows: int, ncols: int) -> Matrix:
        return cls(field, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n: int) -> Matrix:
        return cls(field, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.rows})"

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    __hash__ = None

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def copy(self) -> Matrix:
        return Matrix(self.field, self.rows, self.ncols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def transpose(self) -> Matrix:
        if not self.nrows:
            return Matrix._wrap(self.field, [[] for _ in range(self.ncols)], 0)
        return Matrix._wrap(self.field, [list(c) for c in zip(*self.rows)], self.nrows)

    @property
    def T(self) -> Matrix:
        return self.transpose()

    def columns(self, start: int, stop: int) -> Matrix:
        return Matrix._wrap(self.field, [r[start:stop] for r in self.rows], max(0, min(stop, self.ncols) - start))

    def take_columns(self, idx: Sequence[int]) -> Matrix:
        return Matrix._wrap(self.field, [[r[j] for j in idx] for r in self.rows], len(idx))

    def take_rows(self, idx: Sequence[int]) -> Matrix:
        return Matrix._wrap(self.field, [list(self.rows[i]) for i in idx], self.ncols)

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        field = common_field(self.field, other.field)
        return Matrix._wrap(field, [[a ^ b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    # characteristic 2
    __sub__ = __add__

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        field = common_field(self.field, other.field)
        axpy = field.axpy
        p = other.ncols
        out = []
        brows = other.rows
        for row in self.rows:
            acc = [0] * p
            for a, brow in zip(row, brows):
                if a:
                    acc = axpy(a, brow, acc)
            out.append(acc)
        return Matrix._wrap(field, out, p)

    def scaled(self, c: int) -> Matrix:
        return Matrix(self.field, [self.field.scale(c, r) for r in self.rows], self.ncols)

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows, dtype=object).reshape(self.shape)


def common_field(a, b):
    """Field in which a product/sum of matrices over ``a`` and ``b`` lives."""
    if a == b:
        return a
    if isinstance(a, ExtField) and b == a.base:
        return a
    if isinstance(b, ExtField) and a == b.base:
        return b
    raise TypeError(f"incompatible fields {a!r} and {b!r}")


def embed(M: Matrix, ext: ExtField) -> Matrix:
    """View a base-field matrix as a matrix over ``ext``."""
    if M.field == ext:
        return M
    if M.field != ext.base:
        raise TypeError(f"{M.field!r} is not the base of {ext!r}")
    return Matrix(ext, M.rows, M.ncols)


def hstack(*mats: Matrix) -> Matrix:
    if len({m.nrows for m in mats}) > 1:
        raise ShapeError("hstack needs equal row counts")
    field = mats[0].field
    for m in mats[1:]:
        field = common_field(field, m.field)
    rows = [sum((m.rows[i] for m in mats), []) for i in range(mats[0].nrows)]
    return Matrix._wrap(field, rows, sum(m.ncols for m in mats))


def vstack(*mats: Matrix) -> Matrix:
    if len({m.ncols for m in mats}) > 1:
        raise ShapeError("vstack needs equal column counts")
    field = mats[0].field
    for m in mats[1:]:
        field = common_field(field, m.field)
    return Matrix._wrap(field, [list(r) for m in mats for r in m.rows], mats[0].ncols)


# -- extension <-> base expansion ---------------------------------------------

def expand(X: Matrix, ext: ExtField | None = None) -> Matrix:
    """Replace each extension entry by its C base coordinates (row-wise)."""
    ext = ext or X.field
    if not isinstance(ext, ExtField):
        raise TypeError("expand needs an extension-field matrix")
    C, m, mask = ext.degree, ext.m, ext.q - 1
    shifts = [i * m for i in range(C)]
    rows = [[(x >> s) & mask for x in r for s in shifts] for r in X.rows]
    return Matrix._wrap(ext.base, rows, X.ncols * C)


def contract(Y: Matrix, ext: ExtField) -> Matrix:
    """Inverse of :func:`expand`: group each C base columns into one element."""
    C, m = ext.degree, ext.m
    if Y.ncols % C:
        raise ShapeError(f"column count {Y.ncols} is not divisible by C={C}")
    shifts = [i * m for i in range(C)]
    rows = []
    for r in Y.rows:
        out = []
        for k in range(0, Y.ncols, C):
            v = 0
            for s, c in zip(shifts, r[k:k + C]):
                v |= c << s
            out.append(v)
        rows.append(out)
    return Matrix._wrap(ext, rows, Y.ncols // C)


# -- elimination --------------------------------------------------------------

def rref(M: Matrix, max_pivot_col: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    ``max_pivot_col`` limits pivot search to the first columns; row operations
    still act on full rows.
    """
    F = M.field
    rows = [list(r) for r in M.rows]
    nrows, ncols = M.nrows, M.ncols
    limit = ncols if max_pivot_col is None else max_pivot_col
    pivots = []
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pivot = rows[r][c]
        if pivot != 1:
            rows[r] = F.scale(F.inv(pivot), rows[r])
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                rows[i] = F.axpy(rows[i][c], prow, rows[i])
        pivots.append(c)
        r += 1
    return Matrix._wrap(F, rows, ncols), pivots


def rank(M: Matrix) -> int:
    F = M.field
    rows = [list(r) for r in M.rows if any(r)]
    rk = 0
    for c in range(M.ncols):
        p = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[rk], rows[p] = rows[p], rows[rk]
        prow = rows[rk]
        inv = F.inv(prow[c])
        for i in range(rk + 1, len(rows)):
            if rows[i][c]:
                rows[i] = F.axpy(F.mul(rows[i][c], inv), prow, rows[i])
        rk += 1
        if rk == len(rows):
            break
    return rk


def det(M: Matrix) -> int:
    if M.nrows != M.ncols:
        raise ShapeError("determinant of a non-square matrix")
    F = M.field
    rows = [list(r) for r in M.rows]
    n = M.nrows
    d = 1
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c]), None)
        if p is None:
            return 0
        # row swaps do not change sign in characteristic 2
        rows[c], rows[p] = rows[p], rows[c]
        pv = rows[c][c]
        d = F.mul(d, pv)
        inv = F.inv(pv)
        for i in range(c + 1, n):
            if rows[i][c]:
                rows[i] = F.axpy(F.mul(rows[i][c], inv), rows[c], rows[i])
    return d


def invert(M: Matrix) -> Matrix:
    if M.nrows != M.ncols:
        raise ShapeError("inverse of a non-square matrix")
    n = M.nrows
    R, piv = rref(hstack(M, Matrix.identity(M.field, n)), max_pivot_col=n)
    if piv != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return R.columns(n, 2 * n)


def right_nullspace_basis(M: Matrix) -> Matrix:
    """Full-rank ``cols x (cols - rank)`` matrix K with ``M @ K == 0``.

    One basis vector per free column of the RREF, with a 1 in that column.
    """
    R, piv = rref(M)
    n = M.ncols
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    K = [[0] * len(free) for _ in range(n)]
    for k, f in enumerate(free):
        K[f][k] = 1
        for i, p in enumerate(piv):
            # characteristic 2: -R[i][f] == R[i][f]
            K[p][k] = R.rows[i][f]
    return Matrix(M.field, K, len(free))


def left_nullspace_basis(M: Matrix) -> Matrix:
    """Full-rank ``(rows - rank) x rows`` matrix J with ``J @ M == 0``."""
    return right_nullspace_basis(M.transpose()).transpose()


def solve_left(G: Matrix, target: Matrix) -> tuple[Matrix, bool]:
    """Find U with ``U @ G == target``.

    Returns ``(U, unique)``; when the solution is not unique the free
    variables are set to zero.  Raises :class:`NoSolutionError` if the
    system is inconsistent.
    """
    if G.ncols != target.ncols:
        raise ShapeError(f"G has {G.ncols} columns but target has {target.ncols}")
    a = G.nrows
    # G^T U^T = target^T, solved on the augmented matrix
    aug = hstack(G.transpose(), target.transpose())
    R, piv = rref(aug, max_pivot_col=a)
    rk = len(piv)
    for row in R.rows[rk:]:
        if any(row[a:]):
            raise NoSolutionError("inconsistent linear system")
    Ut = [[0] * target.nrows for _ in range(a)]
    for i, p in enumerate(piv):
        Ut[p] = R.rows[i][a:]
    return Matrix(aug.field, Ut, target.nrows).transpose(), rk == a


# -- sampling -------------------------------------------------------------------

def random_matrix(nrows: int, ncols: int, field, rng: np.random.Generator) -> Matrix:
    flat = field.random(rng, nrows * ncols)
    return Matrix._wrap(field, [flat[i * ncols:(i + 1) * ncols] for i in range(nrows)], ncols)


def random_nonsingular(dim: int, field, rng: np.random.Generator) -> Matrix:
    """Uniform nonsingular matrix by rejection sampling."""
    while True:
        M = random_matrix(dim, dim, field, rng)
        if rank(M) == dim:
            return M


def random_rank_bounded(nrows: int, ncols: int, maxrank: int, field, rng: np.random.Generator) -> Matrix:
    """``L @ V`` with uniform L (nrows x maxrank) and V (maxrank x ncols)."""
    if maxrank > min(nrows, ncols):
        raise ValueError(f"maxrank {maxrank} exceeds min({nrows}, {ncols})")
    if maxrank == 0:
        return Matrix.zeros(field, nrows, ncols)
    L = random_matrix(nrows, maxrank, field, rng)
    V = random_matrix(maxrank, ncols, field, rng)
    return L @ V
