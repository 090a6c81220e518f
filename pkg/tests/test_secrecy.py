from fractions import Fraction

import numpy as np
import pytest

from securenc.channel import CodeParams
from securenc.fields import extension, gf2m
from securenc.linalg import Matrix, ShapeError, random_matrix, random_nonsingular
from securenc.rank_codes import build_codebook
from securenc.secrecy import DecodeError, recover_payload, secrecy_audit, secrecy_decode, secrecy_encode


def _codebook(q, C, Z_I):
    ext = extension(gf2m(q.bit_length() - 1), C)
    return ext, build_codebook(C, Z_I, ext)


def test_zero_message_zero_key_gives_bare_header():
    ext, cb = _codebook(16, 3, 1)
    S = Matrix.zeros(ext, 2, 2)
    X = secrecy_encode(S, cb, noise=Matrix.zeros(ext, 1, 2))
    assert X == Matrix(ext.base, [[int(i == j) for j in range(3)] + [0] * 6 for i in range(3)])


def test_header_and_Hx_identity(rng):
    ext, cb = _codebook(16, 3, 1)
    for _ in range(20):
        S = random_matrix(2, 3, ext, rng)
        X = secrecy_encode(S, cb, rng)
        assert X.columns(0, 3) == Matrix.identity(ext.base, 3)
        x = recover_payload(X, cb)
        assert cb.H @ x == S


@pytest.mark.parametrize("q,C,Z_I", [(16, 3, 1), (2 ** 16, 3, 1), (8, 4, 2), (2, 2, 1)])
def test_round_trip_through_random_transfer(q, C, Z_I):
    rng = np.random.default_rng(q + C)
    ext, cb = _codebook(q, C, Z_I)
    for _ in range(100):
        S = random_matrix(C - Z_I, 2, ext, rng)
        X = secrecy_encode(S, cb, rng)
        A = random_nonsingular(C, ext.base, rng)
        assert secrecy_decode(A @ X, cb) == S


def test_singular_header_is_reported(rng):
    ext, cb = _codebook(16, 3, 1)
    X = secrecy_encode(random_matrix(2, 1, ext, rng), cb, rng)
    Y = Matrix(ext.base, [[0] + row[1:] for row in X.rows], X.ncols)
    with pytest.raises(DecodeError):
        secrecy_decode(Y, cb)


def test_encode_shape_checks(rng):
    ext, cb = _codebook(16, 3, 1)
    with pytest.raises(ShapeError):
        secrecy_encode(random_matrix(3, 1, ext, rng), cb, rng)
    with pytest.raises(ShapeError):
        secrecy_encode(random_matrix(2, 1, ext, rng), cb, noise=Matrix.zeros(ext, 1, 2))


@pytest.mark.parametrize("C", [2, 3])
def test_exhaustive_audit_is_clean(C):
    ext, cb = _codebook(2, C, 1)
    report = secrecy_audit(cb, CodeParams(C, 1, 0, 2, 2 * C))
    assert report.secure
    assert report.wiretaps == 2 ** C
    assert report.messages == (2 ** C) ** (C - 1)
    assert [v for _, v in report.per_wiretap] == [0] * report.wiretaps


def test_audit_detects_sabotaged_codebook():
    ext = extension(gf2m(1), 3)
    bad = build_codebook(3, 1, ext, points=[1, 1, ext.alpha])
    report = secrecy_audit(bad, CodeParams(3, 1, 0, 2, 6))
    assert not report.secure
    assert report.violations and len(report.violations) <= 10


def test_rate_accounting():
    # message symbols per packet symbol: (C - Z_I) n' C / (C n)
    C, Z_I, n_prime = 3, 1, 5
    n = C * (1 + n_prime)
    rate = Fraction((C - Z_I) * n_prime * C, C * n)
    assert rate == Fraction(C - Z_I, C) * (1 - Fraction(C, n))
