import math

import mpmath as mp
import numpy as np
import pytest

from slspec.bessel import bessel_j, bessel_j_sequence


def oracle_j(n: int, x: float) -> float:
    """Ascending series in high-precision arithmetic; independent of the package.

    Terms alternate with magnitudes up to ~e^|x| before decaying, so the
    working precision grows with the argument.
    """
    with mp.workdps(60 + int(abs(x))):
        half = mp.mpf(x) / 2
        term = half**n / mp.factorial(n)
        total = term
        m = 0
        while True:
            m += 1
            term *= -(half * half) / (m * (n + m))
            total += term
            if abs(term) < mp.mpf(10) ** -50 * abs(total):
                return float(total)


# first positive zero of J_0, found by bisecting the oracle
J0_FIRST_ZERO = 2.404825557695773


def test_frozen_constants_match_oracle():
    assert abs(oracle_j(1, 1.0) - 0.4400505857449335) < 1e-15
    lo, hi = 2.0, 3.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if oracle_j(0, lo) * oracle_j(0, mid) <= 0:
            hi = mid
        else:
            lo = mid
    assert abs(0.5 * (lo + hi) - J0_FIRST_ZERO) < 1e-13


class TestBesselJ:
    def test_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0
        for n in (1, 2, 17, 80):
            assert bessel_j(n, 0.0) == 0.0

    def test_first_zero_of_j0(self):
        assert abs(bessel_j(0, J0_FIRST_ZERO)) < 1e-12

    def test_j1_at_one(self):
        assert abs(bessel_j(1, 1.0) - 0.4400505857449335) < 1e-12

    @pytest.mark.parametrize("n", [0, 1, 5, 17, 37, 80])
    @pytest.mark.parametrize("x", [0.5, 5.0, 12.5, 25.0, 60.0, 100.0, 160.0])
    def test_against_series_oracle(self, n, x):
        want = oracle_j(n, x)
        got = bessel_j(n, x)
        assert abs(got - want) <= 1e-12 * max(abs(want), 1e-250)

    def test_negative_argument_parity(self):
        for n in (0, 1, 2, 7):
            assert bessel_j(n, -3.7) == pytest.approx(
                (-1.0) ** n * bessel_j(n, 3.7), rel=1e-14
            )

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            bessel_j(-1, 1.0)
        with pytest.raises(ValueError):
            bessel_j(201, 1.0)
        with pytest.raises(ValueError):
            bessel_j(0, 2e4)
        with pytest.raises(ValueError):
            bessel_j(0, math.nan)


class TestBesselSequence:
    def test_at_zero(self):
        out = bessel_j_sequence(10, 0.0)
        assert out[0] == 1.0
        assert np.all(out[1:] == 0.0)

    @pytest.mark.parametrize("x", [0.5, 3.0, 12.5, 40.0, 100.0])
    def test_matches_single_evaluations(self, x):
        out = bessel_j_sequence(20, x)
        for k in range(21):
            want = bessel_j(k, x)
            assert abs(out[k] - want) <= 1e-13 * max(abs(want), 1e-200)

    def test_three_term_recurrence(self):
        x = 5.0
        out = bessel_j_sequence(10, x)
        for n in range(1, 10):
            resid = out[n - 1] + out[n + 1] - (2 * n / x) * out[n]
            assert abs(resid) < 1e-12 * max(1.0, abs(out[n]))

    @pytest.mark.parametrize("x", [1.0, 5.0, 20.0, 60.0])
    def test_normalization_identity(self, x):
        # J_0 + 2*sum J_2k = 1, truncated where terms are negligible
        out = bessel_j_sequence(200, x)
        total = out[0] + 2.0 * np.sum(out[2::2][np.abs(out[2::2]) > 1e-18])
        assert abs(total - 1.0) < 1e-12

    def test_negative_argument(self):
        out = bessel_j_sequence(5, -2.0)
        ref = bessel_j_sequence(5, 2.0)
        assert np.allclose(out, ref * np.array([1, -1, 1, -1, 1, -1]), rtol=0, atol=0)


def test_sin_expansion_reproduces_sine():
    # 2*sum_m (-1)^m J_{2m+1}(b) T_{2m+1}(x) == sin(b x) on [-1, 1];
    # T evaluated trigonometrically, independent of the package tables
    xs = np.linspace(-1.0, 1.0, 501)
    theta = np.arccos(xs)
    for beta in (1.0, 10.0, 30.0):
        total = np.zeros_like(xs)
        for m in range(41):
            n = 2 * m + 1
            total += (-1.0) ** m * bessel_j(n, beta) * np.cos(n * theta)
        assert np.max(np.abs(2.0 * total - np.sin(beta * xs))) < 1e-12
