import math
from fractions import Fraction

import numpy as np
import pytest

from continuantlab.cfcore import (IDENTITY, Alphabet, cf_expand, cf_value,
                                  even_normalize, frobenius_sq,
                                  is_semigroup_matrix, iter_gamma,
                                  lambda_expanding, mat_mul, mat_transpose,
                                  matrix_to_fraction, norm_frobenius, spectral,
                                  trace, twin, word_to_matrix)
from continuantlab.errors import InputError
from conftest import random_word

GOLDEN = (1 + math.sqrt(5)) / 2


def convergents(word):
    """Independent oracle: p_k = a_k p_{k-1} + p_{k-2}, same for q."""
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    for a in word:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q


def test_cf_expand_paper_vectors():
    assert cf_expand(3523, 4547) == (1, 3, 2, 3, 1, 2, 3, 2, 1, 3)
    assert cf_expand(3535, 4547) == (1, 3, 2, 35, 1, 1, 1, 4)
    assert cf_expand(1, 2) == (2,)


def test_cf_expand_validation():
    with pytest.raises(InputError):
        cf_expand(2, 4)  # not reduced
    with pytest.raises(InputError):
        cf_expand(3, 2)  # not in (0, 1)
    with pytest.raises(InputError):
        cf_expand(0, 5)


def test_cf_expand_canonical_and_roundtrip(rng):
    for _ in range(300):
        d = rng.randrange(2, 5000)
        b = rng.randrange(1, d)
        if math.gcd(b, d) != 1:
            continue
        w = cf_expand(b, d)
        assert cf_value(w) == Fraction(b, d)
        if len(w) >= 2:
            assert w[-1] >= 2


def test_even_normalize():
    assert even_normalize((2,)) == (1, 1)
    assert cf_value((1, 1)) == Fraction(1, 2)
    assert even_normalize((1, 3, 2, 3, 1, 2, 3, 2, 1, 3)) == (1, 3, 2, 3, 1, 2, 3, 2, 1, 3)
    assert even_normalize((2, 2, 1)) == (2, 3)
    assert cf_value((2, 2, 1)) == cf_value((2, 3))
    assert even_normalize((2, 3)) == (2, 3)
    with pytest.raises(InputError):
        even_normalize((1,))


def test_even_normalize_preserves_value(rng):
    for _ in range(200):
        w = random_word(rng, (1, 2, 3, 4, 5), 1, 9)
        if w == (1,):
            continue
        ev = even_normalize(w)
        assert len(ev) % 2 == 0
        assert cf_value(ev) == cf_value(w)


def test_cf_uniqueness_on_canonical_words(rng):
    # cf_expand inverts cf_value exactly on canonical words
    for _ in range(300):
        w = random_word(rng, (1, 2, 3, 4, 5, 6), 1, 9)
        if w == (1,) or (len(w) >= 2 and w[-1] == 1):
            continue
        v = cf_value(w)
        assert cf_expand(v.numerator, v.denominator) == w


def test_twin_is_involution(rng):
    for _ in range(100):
        w = random_word(rng, (1, 2, 3), 2, 8)
        assert twin(twin(w)) == w
        assert cf_value(twin(w)) == cf_value(w)


def test_word_to_matrix_trivials():
    assert word_to_matrix((2,)) == (0, 1, 1, 2)
    assert word_to_matrix((1, 1)) == (1, 1, 1, 2)
    m = word_to_matrix((1, 3, 2, 3, 1, 2, 3, 2, 1, 3))
    assert (m[1], m[3]) == (3523, 4547)


def test_matrix_to_fraction_trivials():
    assert matrix_to_fraction((0, 1, 1, 2)) == Fraction(1, 2)
    assert matrix_to_fraction((1, 1, 1, 2)) == Fraction(1, 2)
    with pytest.raises(InputError):
        matrix_to_fraction(IDENTITY)
    with pytest.raises(InputError):
        matrix_to_fraction((5, 1, 1, 2))  # entry order violated
    with pytest.raises(InputError):
        matrix_to_fraction((1, 2, 3, 4))  # det -2


def test_matrix_fraction_roundtrip_against_convergents(rng):
    for _ in range(1000):
        w = random_word(rng, (1, 2, 3, 4, 5), 1, 12)
        if w == (1,):
            continue
        m = word_to_matrix(w)
        p, q = convergents(w)
        assert (m[1], m[3]) == (p, q)
        assert matrix_to_fraction(m) == Fraction(p, q)


def test_homomorphism(rng):
    for _ in range(500):
        w1 = random_word(rng, (1, 2, 3, 4, 5), 1, 10)
        w2 = random_word(rng, (1, 2, 3, 4, 5), 1, 10)
        assert word_to_matrix(w1 + w2) == mat_mul(word_to_matrix(w1),
                                                  word_to_matrix(w2))


def test_transpose_closure(rng):
    # generators are symmetric, so the transpose is the reversed word
    for _ in range(200):
        w = random_word(rng, (1, 2, 3), 2, 10)
        assert mat_transpose(word_to_matrix(w)) == word_to_matrix(w[::-1])
        assert is_semigroup_matrix(mat_transpose(word_to_matrix(w)))


def all_even_words(letters, max_len):
    stack = [()]
    while stack:
        w = stack.pop()
        if w and len(w) % 2 == 0:
            yield w
        if len(w) < max_len:
            for a in letters:
                stack.append(w + (a,))


def test_entry_order_exhaustive_length_12():
    for w in all_even_words((1, 2), 12):
        a, b, c, d = word_to_matrix(w)
        assert 1 <= a <= min(b, c) <= max(b, c) < d


def test_norm_trace_chains_exhaustive_length_12():
    for w in all_even_words((1, 2), 12):
        m = word_to_matrix(w)
        nrm = norm_frobenius(m)
        t = trace(m)
        assert nrm <= 2 * t <= 4 * nrm
        d = m[3]
        col = math.hypot(m[1], m[3])
        assert d < col < nrm < 2 * col < 4 * d


def test_spectral_golden_fixed_point():
    sp = spectral((1, 1, 1, 2))
    assert sp.lambda_plus == pytest.approx((3 + math.sqrt(5)) / 2, abs=1e-15)
    # eigenvector proportional to (1, golden)
    assert sp.v_plus[1] / sp.v_plus[0] == pytest.approx(GOLDEN, rel=1e-14)
    assert sp.point == pytest.approx(1 / GOLDEN, rel=1e-14)


def test_spectral_rejects_bad_input():
    with pytest.raises(InputError):
        spectral(IDENTITY)           # trace 2
    with pytest.raises(InputError):
        spectral((0, 1, 1, 2))       # det -1
    with pytest.raises(InputError):
        lambda_expanding(1)


def test_lambda_close_to_trace_for_large_norm(rng):
    for _ in range(50):
        w = random_word(rng, (1, 2), 30, 44, even=True)
        m = word_to_matrix(w)
        if norm_frobenius(m) <= 10 ** 6:
            continue
        sp = spectral(m)
        assert abs(sp.lambda_plus - trace(m)) < 1e-5


def test_eigen_consistency(rng):
    # m v+ = lambda v+ to 1e-12 relative for norms below 1e9
    for _ in range(200):
        w = random_word(rng, (1, 2, 3), 4, 24, even=True)
        m = word_to_matrix(w)
        if norm_frobenius(m) >= 1e9:
            continue
        sp = spectral(m)
        mv = (m[0] * sp.v_plus[0] + m[1] * sp.v_plus[1],
              m[2] * sp.v_plus[0] + m[3] * sp.v_plus[1])
        lv = (sp.lambda_plus * sp.v_plus[0], sp.lambda_plus * sp.v_plus[1])
        err = math.hypot(mv[0] - lv[0], mv[1] - lv[1]) / sp.lambda_plus
        assert err < 1e-12
        # same for the contracting pair
        mw = (m[0] * sp.v_minus[0] + m[1] * sp.v_minus[1],
              m[2] * sp.v_minus[0] + m[3] * sp.v_minus[1])
        lw = (sp.v_minus[0] / sp.lambda_plus, sp.v_minus[1] / sp.lambda_plus)
        # contracting residual suffers cancellation of size ||m|| * eps
        assert math.hypot(mw[0] - lw[0], mw[1] - lw[1]) < 1e-12 + 1e-15 * norm_frobenius(m)


def test_expanding_contracting_angle(rng):
    # |<v+, v- rotated>| >= 1/2 for large elements
    for _ in range(100):
        w = random_word(rng, (1, 2), 12, 30, even=True)
        m = word_to_matrix(w)
        sp = spectral(m)
        perp = (-sp.v_minus[1], sp.v_minus[0])
        assert abs(sp.v_plus[0] * perp[0] + sp.v_plus[1] * perp[1]) >= 0.5


def test_norms_and_traces():
    assert norm_frobenius(IDENTITY) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert trace(IDENTITY) == 2
    assert norm_frobenius((0, 1, 1, 2)) == pytest.approx(math.sqrt(6), rel=1e-15)
    assert trace((0, 1, 1, 2)) == 2
    assert norm_frobenius((1, 1, 1, 2)) == pytest.approx(math.sqrt(7), rel=1e-15)
    assert trace((1, 1, 1, 2)) == 3


def test_iter_gamma_matches_even_words():
    got = {m for m, w in iter_gamma((1, 2), 60.0)}
    want = {word_to_matrix(w) for w in all_even_words((1, 2), 16)
            if frobenius_sq(word_to_matrix(w)) < 3600}
    assert got == want


def test_alphabet_validation():
    with pytest.raises(InputError):
        Alphabet(())
    with pytest.raises(InputError):
        Alphabet((0, 1))
    with pytest.raises(InputError):
        Alphabet((2, 1))
    assert Alphabet.parse("2,1,2").letters == (1, 2)
