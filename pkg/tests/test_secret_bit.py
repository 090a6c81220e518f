import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from securenc.channel import CodeParams, cut_attack_strategy, random_jam_strategy, transmit
from securenc.error_control import DecodeFailure
from securenc.fields import extension, gf2m
from securenc.linalg import (Matrix, expand, hstack, random_matrix, random_nonsingular,
                             random_rank_bounded, rank)
from securenc.rank_codes import build_codebook
from securenc.secret_bit import (bit_decision, bit_decode, bit_encode, error_bound,
                                 full_rank_probability, lemma1_census, lemma1_mc, reduce_received,
                                 residual_rank)


def _setup(q, C=3, Z_I=1):
    ext = extension(gf2m(q.bit_length() - 1), C)
    return ext, build_codebook(C, Z_I, ext)


def test_bit_zero_with_zero_key_has_zero_payload(rng):
    ext, cb = _setup(16)
    cw = bit_encode(0, cb, rng, noise=Matrix.zeros(ext, 1, 2))
    assert cw.payload.is_zero()
    assert cw.X.columns(0, 3) == Matrix.identity(ext.base, 3)


def test_bit_zero_always_has_zero_S(rng):
    _, cb = _setup(16)
    for _ in range(50):
        assert bit_encode(0, cb, rng).S.is_zero()


def test_bit_one_S_full_rank_frequency():
    ext, cb = _setup(8)
    rng = np.random.default_rng(5)
    trials = 5000
    full = sum(rank(bit_encode(1, cb, rng).S) == 2 for _ in range(trials))
    p = float(full_rank_probability(2, 2, ext.order))
    assert p >= 1 - 2 / 512
    assert abs(full / trials - p) <= 3 * math.sqrt(p * (1 - p) / trials) + 1 / trials


def test_invalid_bit(rng):
    _, cb = _setup(16)
    with pytest.raises(ValueError):
        bit_encode(2, cb, rng)


def test_reduction_of_clean_and_mixed_receptions(rng):
    ext, cb = _setup(16)
    for _ in range(20):
        cw = bit_encode(1, cb, rng)
        red = reduce_received(cw.X, ext)
        assert (red.mu, red.delta) == (0, 0) and red.r == cw.x
        A = random_nonsingular(3, ext.base, rng)
        red = reduce_received(A @ cw.X, ext)
        assert (red.mu, red.delta) == (0, 0) and red.r == cw.x


def test_reduction_of_an_erased_row(rng):
    ext, cb = _setup(16)
    cw = bit_encode(1, cb, rng)
    Y = Matrix(ext.base, [row if i != 1 else [0] * cw.X.ncols for i, row in enumerate(cw.X.rows)])
    red = reduce_received(Y, ext)
    assert (red.mu, red.delta) == (1, 0)
    assert red.r.rows[0] == cw.x.rows[0] and red.r.rows[2] == cw.x.rows[2]
    assert red.Lhat.shape == (3, 1)


def _omniscient_injections(X, params, rng):
    """Rank-<=Z_O injections chosen with full knowledge of A X.

    Erasing a packet, replacing it, disturbing only its header, or adding
    junk only to its payload.
    """
    F = X.field
    C, n = X.shape
    A = random_nonsingular(C, F, rng)
    AX = A @ X
    j = int(rng.integers(C))
    erase = Matrix(F, [AX.rows[i] if i == j else [0] * n for i in range(C)], n)
    payload = [0] * C + F.random(rng, n - C)
    replace = Matrix(F, [[a ^ b for a, b in zip(AX.rows[i], payload)] if i == j else [0] * n
                         for i in range(C)], n)
    header_only = Matrix(F, [F.random(rng, C) + [0] * (n - C) if i == j else [0] * n for i in range(C)], n)
    payload_only = Matrix(F, [payload if i == j else [0] * n for i in range(C)], n)
    return A, [erase, replace, header_only, payload_only,
               random_rank_bounded(C, n, params.Z_O, F, rng)]


@pytest.mark.parametrize("q", [16, 256])
def test_bit_zero_never_wrong_and_invariants_hold_even_for_omniscient_jammer(q):
    ext, cb = _setup(q)
    params = CodeParams(3, 1, 1, q, 9)
    rng = np.random.default_rng(q)
    seen = Counter()
    for _ in range(300):
        for bit in (0, 1):
            cw = bit_encode(bit, cb, rng)
            A, injections = _omniscient_injections(cw.X, params, rng)
            for Z in injections:
                dec = bit_decision(A @ cw.X + Z, cb)
                red = dec.reduction
                seen[(red.mu, red.delta)] += 1
                assert red.mu <= 1 and red.delta <= 1
                assert residual_rank(dec, cw.x, cb) <= 1 - max(red.mu, red.delta)
                assert (dec.J @ cb.H @ red.Lhat).is_zero() and (red.Vhat @ dec.K).is_zero()
                assert rank(dec.J) == dec.J.nrows and rank(dec.K) == dec.K.ncols
                if bit == 0:
                    assert dec.bit == 0
    # Y has only C rows, so delta <= mu; both kinds of damage did occur
    assert set(seen) == {(0, 0), (1, 0), (1, 1)}


def test_bit_one_error_rate_without_jamming():
    ext, cb = _setup(8)
    rng = np.random.default_rng(17)
    trials = 4000
    errors = 0
    for _ in range(trials):
        cw = bit_encode(1, cb, rng)
        errors += bit_decode(random_nonsingular(3, ext.base, rng) @ cw.X, cb) != 1
    bound = float(error_bound(cb))
    assert bound == 2 / 512
    assert errors / trials <= bound + 3 * math.sqrt(bound * (1 - bound) / trials)


def test_bit_one_under_rank_one_jamming_q256():
    ext, cb = _setup(256)
    params = CodeParams(3, 1, 1, 256, 9)
    rng = np.random.default_rng(23)
    assert error_bound(cb) == Fraction(2, 2 ** 24)
    for i in range(2000):
        strat = random_jam_strategy(params) if i % 2 else cut_attack_strategy(params, rng)
        cw = bit_encode(1, cb, rng)
        Y, _, _ = transmit(cw.X, params, strat, rng)
        assert bit_decode(Y, cb) == 1


def test_zero_padding_is_ignored(rng):
    ext, cb = _setup(16)
    cw = bit_encode(1, cb, rng)
    Y = hstack(cw.X, Matrix.zeros(ext.base, 3, 6))
    assert bit_decode(Y, cb) == 1


def test_too_much_rank_loss_is_a_detected_failure(rng):
    ext, cb = _setup(16)
    cw = bit_encode(1, cb, rng)
    Y = Matrix(ext.base, [cw.X.rows[0], [0] * 9, [0] * 9])
    with pytest.raises(DecodeFailure) as err:
        bit_decision(Y, cb)
    assert err.value.reason == "excess_rank"
    with pytest.raises(ValueError):
        bit_decision(cw.X.columns(0, 6), cb)


def test_lemma1_census_examples():
    E8 = extension(gf2m(1), 3)
    assert lemma1_census(2, 0, 0, E8) == Fraction(7, 8) * Fraction(63, 64)
    assert lemma1_census(2, 0, 0, E8) >= 1 - Fraction(2, 8)
    assert lemma1_census(1, 0, 0, extension(gf2m(1), 1)) == Fraction(1, 2)
    for mu, delta in [(1, 0), (0, 1), (1, 1)]:
        assert lemma1_census(2, mu, delta, E8) == full_rank_probability(2 - mu, 2 - delta, 8)


def test_lemma1_census_with_arbitrary_projections(rng):
    E8 = extension(gf2m(1), 3)
    J = Matrix(E8, [[1, E8.alpha]])
    K = Matrix(E8, [[3, 1], [1, 0]])
    assert lemma1_census(2, 1, 0, E8, J, K) == full_rank_probability(1, 2, 8)


def test_lemma1_monte_carlo_q256():
    ext = extension(gf2m(8), 1)
    trials = 100_000
    freq = lemma1_mc(2, 0, 0, ext, trials, np.random.default_rng(1))
    p = 1 - 2 / 256
    assert freq >= p - 3 * math.sqrt(p * (1 - p) / trials)


def test_wiretap_view_of_bit_is_independent_of_bit():
    """Every wiretap B sees the same view distribution for bit 0 and bit 1.

    For each B the views B X of bit 0 form the subgroup spanned by the keys;
    for bit 1 they form the cosets shifted by the message part.  Equality of
    distributions is therefore exactly: every message shift lies in that
    subgroup.  Checked for all 8 wiretaps and all 4096 message matrices.
    """
    ext, cb = _setup(2)
    base = ext.base
    elems = list(ext.elements())
    keys = [Matrix(ext, [[a, b]], 2) for a in elems for b in elems]
    all_B = [Matrix(base, [[(v >> k) & 1 for k in range(3)]], 3) for v in range(8)]
    for B in all_B:
        key_views = {tuple((B @ expand(cb.T_noise @ N, ext)).rows[0]) for N in keys}
        for flat in range(8 ** 4):
            S = Matrix(ext, [[(flat >> 9) & 7, (flat >> 6) & 7], [(flat >> 3) & 7, flat & 7]], 2)
            shift = tuple((B @ expand(cb.T_message @ S, ext)).rows[0])
            assert shift in key_views
