"""Slow, independent reference implementations used as test oracles.

None of these call into the package's arithmetic beyond element encodings,
so agreement with them is evidence rather than tautology.
"""

from __future__ import annotations

import itertools


def gf2_polymod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a and a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def irreducible_by_trial_division(f: int) -> bool:
    """f over GF(2) has no factor of degree 1..deg(f)/2."""
    deg = f.bit_length() - 1
    if deg < 1:
        return False
    for g in range(2, 1 << (deg // 2 + 1)):
        if gf2_polymod(f, g) == 0:
            return False
    return True


def gf2m_mul(a: int, b: int, modulus: int) -> int:
    """Shift-and-add multiplication with reduction after every step."""
    m = modulus.bit_length() - 1
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= modulus
    return out


def ext_mul(a: int, b: int, base_mul, m: int, modulus: list[int]) -> int:
    """Schoolbook product in GF(q)[x]/(f) on packed coordinates."""
    C = len(modulus) - 1
    mask = (1 << m) - 1
    ac = [(a >> (i * m)) & mask for i in range(C)]
    bc = [(b >> (i * m)) & mask for i in range(C)]
    prod = [0] * (2 * C - 1)
    for i, x in enumerate(ac):
        for j, y in enumerate(bc):
            prod[i + j] ^= base_mul(x, y)
    for d in range(2 * C - 2, C - 1, -1):
        h = prod[d]
        prod[d] = 0
        for j in range(C):
            prod[d - C + j] ^= base_mul(h, modulus[j])
    return sum(c << (i * m) for i, c in enumerate(prod[:C]))


def leibniz_det(rows: list[list[int]], mul) -> int:
    """Determinant by permutation expansion (signs vanish in characteristic 2)."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        term = 1
        for i, j in enumerate(perm):
            term = mul(term, rows[i][j])
            if not term:
                break
        total ^= term
    return total


def minor_rank(rows: list[list[int]], mul) -> int:
    """Largest k with a nonzero k x k minor."""
    if not rows:
        return 0
    nr, nc = len(rows), len(rows[0])
    for k in range(min(nr, nc), 0, -1):
        for ri in itertools.combinations(range(nr), k):
            for ci in itertools.combinations(range(nc), k):
                if leibniz_det([[rows[i][j] for j in ci] for i in ri], mul):
                    return k
    return 0


def gf2_rank_census(n: int) -> dict[int, int]:
    """How many n x n matrices over GF(2) have each rank (minor-based)."""
    counts: dict[int, int] = {}
    mul = lambda a, b: a & b  # noqa: E731
    for flat in itertools.product((0, 1), repeat=n * n):
        rows = [list(flat[i * n:(i + 1) * n]) for i in range(n)]
        r = minor_rank(rows, mul)
        counts[r] = counts.get(r, 0) + 1
    return counts
