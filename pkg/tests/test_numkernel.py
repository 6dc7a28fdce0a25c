"""Exact-arithmetic and multi-zeta kernel checks."""

import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipsum.numkernel import (
    BinaryWord,
    MZVIndex,
    PrecisionCtx,
    bernoulli_number,
    bernoulli_periodic,
    bernoulli_poly,
    index_from_word,
    mzv,
    polylog,
    shuffle,
    stuffle,
    sv_mzv,
    word_from_index,
    zeta_int,
)

CTX = PrecisionCtx(digits=40)


def test_precision_guard():
    with pytest.raises(ValueError):
        PrecisionCtx(digits=5)


def test_bernoulli_small_values():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fraction(-1, 2)
    assert bernoulli_number(2) == Fraction(1, 6)
    assert bernoulli_number(12) == Fraction(-691, 2730)
    assert all(bernoulli_number(n) == 0 for n in range(3, 31, 2))


def test_bernoulli_recurrence():
    # sum_{k=0}^{n} B_k / (k! (n-k+1)!) vanishes for n >= 1
    for n in range(1, 31):
        total = sum(
            bernoulli_number(k)
            / (math.factorial(k) * math.factorial(n - k + 1))
            for k in range(n + 1)
        )
        assert total == 0


def test_bernoulli_poly_and_periodic():
    assert bernoulli_poly(3, Fraction(1, 2)) == 0
    for n in range(7):
        assert bernoulli_poly(n, 0) == bernoulli_number(n)
    assert bernoulli_periodic(2, Fraction(5, 4)) == bernoulli_poly(2, Fraction(1, 4))


def test_even_zeta_euler_closed_form():
    with CTX.workprec():
        for k in range(1, 6):
            b = bernoulli_number(2 * k)
            ref = ((-1) ** (k + 1) * mp.mpf(b.numerator) / b.denominator
                   * (2 * mp.pi) ** (2 * k) / (2 * mp.factorial(2 * k)))
            assert abs(zeta_int(2 * k, CTX) - ref) < mp.mpf("1e-35")


def test_mzv_known_values():
    with CTX.workprec():
        assert abs(mzv((1, 2), CTX) - mp.zeta(3)) < mp.mpf("1e-35")
        assert abs(mzv((1, 3), CTX) - mp.zeta(4) / 4) < mp.mpf("1e-35")
        assert abs(mzv((2,), CTX) - mp.zeta(2)) < mp.mpf("1e-35")


def test_mzv_rejects_divergent_index():
    with pytest.raises(ValueError):
        mzv((2, 1), CTX)


def test_word_index_roundtrip():
    for idx in [(2,), (3,), (1, 2), (2, 3), (1, 1, 2)]:
        w = word_from_index(idx)
        assert isinstance(w, BinaryWord)
        assert index_from_word(w) == MZVIndex(idx)
        assert w.weight == MZVIndex(idx).weight


def test_shuffle_product_numeric():
    with CTX.workprec():
        for a, b in [((2,), (2,)), ((2,), (3,)), ((1, 2), (2,))]:
            prod = mzv(a, CTX) * mzv(b, CTX)
            total = sum(
                c * mzv(index_from_word(w), CTX)
                for w, c in shuffle(word_from_index(a), word_from_index(b)).items()
            )
            assert abs(prod - total) < mp.mpf("1e-30")


def test_stuffle_zeta_product():
    # zeta(r) zeta(s) = zeta(r,s) + zeta(s,r) + zeta(r+s)
    with CTX.workprec():
        for r in (2, 3, 4):
            for s in (2, 3, 4):
                counts = stuffle((r,), (s,))
                total = sum(c * mzv(idx, CTX) for idx, c in counts.items())
                assert abs(total - mp.zeta(r) * mp.zeta(s)) < mp.mpf("1e-30")


def test_polylog_against_mpmath():
    with CTX.workprec():
        for k in (2, 3):
            for z in (mp.mpf("0.3"), mp.mpf("-0.5"), mp.mpc("0.2", "0.4")):
                assert abs(polylog(k, z, CTX) - mp.polylog(k, z)) < mp.mpf("1e-30")


def test_polylog_monotone_on_unit_interval():
    with CTX.workprec():
        vals = [polylog(2, mp.mpf(z) / 10, CTX) for z in range(1, 10)]
        assert all(vals[i] < vals[i + 1] for i in range(len(vals) - 1))


def test_single_valued_catalogue():
    with CTX.workprec():
        for k in (1, 2, 3):
            assert abs(sv_mzv((2 * k,), CTX)) < mp.mpf("1e-35")
        for k in (3, 5, 7):
            assert abs(sv_mzv((k,), CTX) - 2 * mp.zeta(k)) < mp.mpf("1e-30")
        assert abs(sv_mzv((3, 5), CTX)
                   + 10 * mp.zeta(3) * mp.zeta(5)) < mp.mpf("1e-28")
        ref = (2 * mzv((3, 5, 3), CTX) - 2 * mp.zeta(3) * mzv((3, 5), CTX)
               - 10 * mp.zeta(3) ** 2 * mp.zeta(5))
        assert abs(sv_mzv((3, 5, 3), CTX) - ref) < mp.mpf("1e-28")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=4))
def test_word_roundtrip_property(entries):
    if entries[-1] < 2:
        entries = entries + [2]
    idx = MZVIndex(entries)
    assert index_from_word(word_from_index(idx)) == idx


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.booleans(), min_size=1, max_size=4),
    st.lists(st.booleans(), min_size=1, max_size=4),
)
def test_shuffle_counts_property(a, b):
    w1, w2 = BinaryWord(map(int, a)), BinaryWord(map(int, b))
    counts = shuffle(w1, w2)
    assert sum(counts.values()) == math.comb(len(w1) + len(w2), len(w1))
    assert all(len(w) == len(w1) + len(w2) for w in counts)
