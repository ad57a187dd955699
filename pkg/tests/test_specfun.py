"""Scalar special functions: gamma, Kummer Phi, moments, Barnes G.

Oracles:
  * log_gamma against an independent Taylor-series evaluation of
    ln Gamma(1+x) and against the recursion Gamma(z+1) = z Gamma(z).
  * kummer_phi against the integral representation (frozen quadrature value)
    and the closed form Phi(1,2;z) = (e^z - 1)/z.
  * moment against elementary closed-form integrals and frozen
    tanh-sinh-independent quadrature values.
  * log_barnes_g against mpmath.barnesg and the G(z+1) = Gamma(z) G(z)
    recursion.
"""
import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from semijacobi import (
    DomainError,
    PrecisionContext,
    WeightParams,
    kummer_phi,
    log_barnes_g,
    log_gamma,
    moment,
)

CTX = PrecisionContext(mantissa_bits=192, agreement_digits=25)
TOL = mpf(10) ** -25


def close(a, b, tol=TOL):
    scale = max(abs(a), abs(b), mpf(1))
    return abs(a - b) / scale <= tol


# ---------------------------------------------------------------- log_gamma
def test_log_gamma_at_one_and_half():
    assert log_gamma(1, CTX) == 0
    assert close(log_gamma("0.5", CTX), mpf("0.57236494292470008707171367567653"))


def test_log_gamma_frozen_value():
    assert close(log_gamma("7.3", CTX), mpf("7.1478925230222490327770571544284"))


def test_log_gamma_recursion_grid():
    with mp.workprec(300):
        for z in [mpf("0.25"), mpf("1.5"), mpf(7), mpf("23.75"), mpf(50)]:
            lhs = log_gamma(z + 1, CTX)
            rhs = mpmath.log(z) + log_gamma(z, CTX)
            assert close(lhs, rhs)


def test_log_gamma_series_oracle():
    # ln Gamma(1+x) = -euler*x + sum_{k>=2} (-1)^k zeta(k) x^k / k, |x| < 1
    with mp.workprec(300):
        x = mpf("0.3")
        series = -mpmath.euler * x
        for k in range(2, 120):
            series += (-1) ** k * mpmath.zeta(k) * x**k / k
        assert close(log_gamma(1 + x, CTX), series)


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        log_gamma(0, CTX)
    with pytest.raises(DomainError):
        log_gamma(-3, CTX)


# --------------------------------------------------------------- kummer_phi
def test_kummer_at_zero_is_one():
    assert kummer_phi("0.5", "1.5", 0, CTX) == 1


def test_kummer_closed_form():
    # Phi(1,2;z) = (e^z - 1)/z
    with mp.workprec(300):
        for z in [mpf(1), mpf("2.5"), mpf("-1.5")]:
            expected = (mpmath.exp(z) - 1) / z
            assert close(kummer_phi(1, 2, z, CTX), expected)


def test_kummer_integral_representation_frozen():
    # Gamma(b)/(Gamma(a)Gamma(b-a)) * int_0^1 e^{zx} x^{a-1}(1-x)^{b-a-1} dx
    # at (a,b,z) = (3/2, 5/2, -1), evaluated independently by quadrature.
    assert close(
        kummer_phi("1.5", "2.5", -1, CTX),
        mpf("0.56841703746147705570591549895559"),
    )


@settings(max_examples=20, deadline=None)
@given(
    a10=st.integers(min_value=1, max_value=40),
    b10=st.integers(min_value=1, max_value=40),
    t10=st.integers(min_value=1, max_value=50),
)
def test_kummer_transform_consistency(a10, b10, t10):
    # Raw alternating series at -t (summed naively here) agrees with the
    # package's transformed evaluation for moderate t.
    a, b, t = mpf(a10) / 10, mpf(a10 + b10) / 10, mpf(t10) / 10
    with mp.workprec(400):
        term, total = mpf(1), mpf(1)
        for k in range(400):
            term = term * (a + k) / (b + k) * (-t) / (k + 1)
            total += term
            if abs(term) < mpf(2) ** -380 * abs(total):
                break
        assert close(kummer_phi(a, b, -t, CTX), total, tol=mpf(10) ** -24)


def test_kummer_domain():
    for b in (0, -1, -4):
        with pytest.raises(DomainError):
            kummer_phi(1, b, "0.5", CTX)


# ------------------------------------------------------------------- moment
def test_moment_odd_is_exact_zero():
    params = WeightParams("1.5", "2.0")
    for j in (1, 3, 17):
        assert moment(j, params, CTX) == 0


def test_moment_elementary_values():
    flat = WeightParams(0, 0)
    assert close(moment(0, flat, CTX), mpf(2))
    assert close(moment(2, flat, CTX), mpf(2) / 3)
    assert close(moment(4, flat, CTX), mpf(2) / 5)


def test_moment_frozen_quadrature_values():
    # Independent direct quadrature of x^j (1-x^2)^0.5 e^{-x^2}.
    params = WeightParams("0.5", 1)
    assert close(moment(0, params, CTX), mpf("1.2589242565517815808538362888902"))
    assert close(moment(2, params, CTX), mpf("0.24570522307710392828215476117453"))


@settings(max_examples=15, deadline=None)
@given(
    j=st.integers(min_value=0, max_value=30),
    a10=st.integers(min_value=-9, max_value=30),
    t10=st.integers(min_value=-20, max_value=50),
)
def test_moment_parity_and_positivity(j, a10, t10):
    params = WeightParams(mpf(a10) / 10, mpf(t10) / 10)
    mu = moment(j, params, CTX)
    if j % 2 == 1:
        assert mu == 0
    else:
        assert mu > 0


def test_weight_params_domain():
    with pytest.raises(DomainError):
        WeightParams(-1, 0)
    with pytest.raises(DomainError):
        WeightParams("-1.2", 1)


# ------------------------------------------------------------- log_barnes_g
def test_barnes_special_values():
    # G(1) = G(2) = 1; the recursion-plus-series route reproduces ln G = 0
    # to the context tolerance (residual equals the first omitted series
    # term, well under 10^-25).
    assert close(log_barnes_g(1, CTX), mpf(0))
    assert close(log_barnes_g(2, CTX), mpf(0))
    # G(1/2) = 2^{1/24} pi^{-1/4} e^{1/8} A^{-3/2}
    assert close(log_barnes_g("0.5", CTX), mpf("-0.50543305448969538279768498980834"))


def test_barnes_frozen_value():
    assert close(log_barnes_g("7.3", CTX), mpf("12.228615592899987423906343485362"))


def test_barnes_recursion():
    for z in ["0.5", "1.25", 3, "10.75"]:
        lhs = log_barnes_g(mpf(z) + 1, CTX) - log_barnes_g(z, CTX)
        assert close(lhs, log_gamma(z, CTX))


def test_barnes_mpmath_oracle_grid():
    with mp.workprec(300):
        for z in [mpf("0.3"), mpf("1.8"), mpf(5), mpf("41.5")]:
            oracle = mpmath.log(mpmath.barnesg(z))
            assert close(log_barnes_g(z, CTX), oracle)


def test_barnes_domain():
    with pytest.raises(DomainError):
        log_barnes_g(0, CTX)
    with pytest.raises(DomainError):
        log_barnes_g("-0.5", CTX)
