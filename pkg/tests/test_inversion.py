import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twobody_dot import equilibria as eq
from twobody_dot import inversion as inv
from twobody_dot.errors import DomainError


def poly_power(c, l, k):
    """Brute-force coefficient of x^k in (sum_m c_m x^m)^l."""
    base = [0] + list(c)
    out = [1]
    for _ in range(l):
        new = [0] * (len(out) + len(base) - 1)
        for i, x in enumerate(out):
            for j, y in enumerate(base):
                new[i + j] += x * y
        out = new
    return out[k] if k < len(out) else 0


def test_f_a_values():
    assert inv.f_a(-0.75, 0.0) == 0.0
    assert inv.f_a(-1, 0.5) == 1.0
    assert inv.f_a(-2, 0.1) == pytest.approx(0.123457, abs=1e-6)
    with pytest.raises(DomainError):
        inv.f_a(-1, 1.0)
    with pytest.raises(DomainError):
        inv.f_a(0.5, 1.5)


def test_b_M_values():
    assert inv.b_M(3.0, 2) == pytest.approx(math.sqrt(2))
    assert inv.b_M(0, 1) == 1.0
    assert inv.b_M(6, 1) == pytest.approx(37 ** (-1 / 6))
    assert inv.momentum_scale(6, 1) == inv.b_M(6, 1)
    assert inv.momentum_scale(3.0, 2) == pytest.approx(1.0)


def test_partitions_order():
    assert inv.partitions_with_first_part(5, 2) == ((2, 2, 1), (2, 1, 1, 1))
    assert inv.partitions_with_first_part(4, 4) == ((4,),)
    assert inv.partitions_with_first_part(3, 4) == ()
    # all partitions of 10 are recovered exactly once
    total = sum(len(inv.partitions_with_first_part(10, l)) for l in range(1, 11))
    assert total == 42


def test_partition_d_examples():
    c = [3, 5, 7, 11]
    assert inv.partition_d_coeffs(c, 3, 3) == 27
    assert inv.partition_d_coeffs(c, 1, 4) == 11
    assert inv.partition_d_coeffs(c, 2, 3) == 2 * 3 * 5
    with pytest.raises(IndexError):
        inv.partition_d_coeffs(c, 0, 3)
    with pytest.raises(IndexError):
        inv.partition_d_coeffs(c, 4, 3)


def test_partition_d_exact_against_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(5):
        c = [int(x) for x in rng.integers(-4, 5, 10)]
        for k in range(1, 11):
            for l in range(1, k + 1):
                got = inv.partition_d_coeffs(c, l, k)
                assert isinstance(got, Fraction) and got.denominator == 1
                assert got == poly_power(c, l, k)


def test_invert_series_examples():
    assert inv.invert_series([1]).coeffs == (1,)
    assert inv.invert_series([1] * 8).coeffs == tuple((-1) ** k for k in range(8))
    assert inv.invert_series([2, 0, 0, 0]).coeffs == (Fraction(1, 2), 0, 0, 0)
    with pytest.raises(DomainError):
        inv.invert_series([0, 1])


@settings(max_examples=60, deadline=None)
@given(
    lead=st.floats(0.5, 2.0),
    rest=st.lists(st.floats(-2.0, 2.0), min_size=0, max_size=9),
)
def test_reversion_identity(lead, rest):
    a = inv.SeriesCoeffs([lead] + rest)
    # exact arithmetic on the binary values of the inputs: identity holds exactly
    ident = inv.compose(inv.invert_series(a, exact=True), a, exact=True)
    assert ident.coeffs == (1,) + (0,) * (a.order - 1)
    # rounded inverse: residual limited by the ulp of the inverse coefficients
    g = inv.invert_series(a)
    scale = max(abs(c) for c in g.coeffs) * max(1.0, max(abs(c) for c in a.coeffs)) ** a.order
    approx = inv.compose(g, a)
    np.testing.assert_allclose(approx.coeffs, [1.0] + [0.0] * (a.order - 1), atol=1e-13 * scale)


def test_pochhammer_matches_reversion_exactly():
    for a in (Fraction(-3, 4), Fraction(-1), Fraction(-2), Fraction(-5, 4), Fraction(1, 3)):
        rev = inv.invert_series(inv.f_a_taylor(a, 12))
        assert inv.g_minus_coeffs(a, 12).coeffs == rev.coeffs


def test_pochhammer_float_matches_exact():
    ex = inv.g_minus_coeffs(Fraction(-3, 4), 30)
    fl = inv.g_minus_coeffs(-0.75, 30)
    np.testing.assert_allclose([float(c) for c in ex.coeffs], fl.coeffs, rtol=1e-13, atol=0)


def test_g_minus_series_geometric_case():
    assert inv.g_minus_series(-0.75, 0.0) == 0.0
    x = 0.3
    for n in (4, 9, 16):
        assert inv.g_minus_series(-1.0, x, n) == pytest.approx(
            sum((-1) ** (k - 1) * x**k for k in range(1, n + 1)), rel=1e-14
        )


def test_convergence_radius():
    # root test on the coefficient growth between two large orders
    for a in (-0.75, -2.0, -3.0):
        c = inv.g_minus_coeffs(a, 300).coeffs
        n1 = max(k for k in range(1, 151) if c[k - 1] != 0)
        n2 = max(k for k in range(1, 301) if c[k - 1] != 0)
        est = (abs(c[n2 - 1]) / abs(c[n1 - 1])) ** (-1.0 / (n2 - n1))
        assert est == pytest.approx(inv.convergence_radius(a), rel=0.01)
    assert inv.convergence_radius(-2.0) == pytest.approx(0.25)
    assert inv.convergence_radius(-1.0) == 1.0


def test_radius_duality():
    for a in (-0.75, -1.5, -2.0, -3.5):
        assert inv.convergence_radius(a) == pytest.approx(inv.convergence_radius(1 / a) ** a)


def test_divergence_warning():
    R = inv.convergence_radius(-2.0)
    with pytest.warns(inv.SeriesDivergenceWarning):
        inv.g_minus_series(-2.0, 2.0 * R, 16)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        inv.g_minus_series(-2.0, 0.3 * R, 16)
    with pytest.raises(DomainError):
        inv.g_minus_series(-2.0, 0.1, 1)


def test_adaptive_domain_guard():
    R = inv.convergence_radius(-0.75)
    with pytest.raises(inv.SeriesDomainError):
        inv.g_minus_adaptive(-0.75, 0.9 * R)
    assert math.isfinite(inv.g_minus_adaptive(-0.75, 0.85 * R))


def test_g_closed_examples():
    assert inv.g_closed(2, 0.5) == pytest.approx(1 / 3)
    assert inv.g_closed(6, 0.1) == pytest.approx((1.2 - math.sqrt(1.4)) / 0.2, rel=1e-14)
    assert inv.g_closed(6, 0.1) == pytest.approx(0.083920, abs=1e-6)
    x = 1e-4
    assert inv.g_closed(6, x) == pytest.approx(x - 2 * x * x, abs=1e-11)
    with pytest.raises(NotImplementedError):
        inv.g_closed(18, 0.1)
    with pytest.raises(DomainError):
        inv.g_closed(3, 0.1)
    with pytest.raises(DomainError):
        inv.g_closed(2, -0.1)


@pytest.mark.parametrize("M", [2, 6, 10, 14])
def test_g_closed_inverts_f(M):
    a = inv.exponent_a(M)
    for y in np.linspace(0, 0.3, 31):
        assert inv.g_closed(M, inv.f_a(a, y)) == pytest.approx(y, abs=1e-10)


@pytest.mark.parametrize("M", [2, 6, 10])
def test_closed_vs_series(M):
    a = inv.exponent_a(M)
    for x in np.linspace(0, 0.1, 21):
        assert inv.g_minus_adaptive(a, x) == pytest.approx(inv.g_closed(M, x), abs=1e-10)


def test_truncation_error_bounded_by_next_term():
    a, M, x = -2.0, 6, 0.1
    exact = inv.g_closed(M, x)
    c = inv.g_minus_coeffs(a, 20).coeffs
    for n in range(2, 16):
        err = abs(inv.g_minus_series(a, x, n) - exact)
        assert err <= abs(c[n] * x ** (n + 1)) * (1 + 1e-9) + 1e-16


def test_phi_conjugate():
    g = inv.g_minus_adaptive
    for a in (-0.75, -2.0):
        for y in (0.8, 0.9, 0.99):
            x = inv.f_a(a, y)
            # the conjugate branch recovers roots near y = 1
            assert inv.phi_conjugate(g, a, x) == pytest.approx(y, abs=1e-10)
    # a = 1: G^- and 1 - G^+ swap
    h = lambda aa, xx: xx  # noqa: E731
    assert inv.phi_conjugate(h, 1.0, 0.3) == pytest.approx(0.7)
    # phi applied twice is the identity
    g2 = lambda aa, xx: inv.phi_conjugate(lambda b, w: w / (1 + w) if b == -1 else 1 - w, aa, xx)  # noqa: E731
    assert inv.phi_conjugate(g2, -1.0, 0.4) == pytest.approx(0.4 / 1.4, abs=1e-12)
    with pytest.raises(DomainError):
        inv.phi_conjugate(g, -2.0, -0.1)


def test_phi_conjugate_m2_consistency():
    # a = -1: conjugate branch 1 - G_{-1}(1/x) equals x/(1+x)
    g = lambda aa, xx: inv.g_closed(2, xx)  # noqa: E731
    for x in (0.1, 0.5, 3.0):
        assert inv.phi_conjugate(g, -1.0, x) == pytest.approx(x / (1 + x), rel=1e-14)


def test_vstar_series_examples():
    assert inv.vstar_series(1, 6, 1, "far") == pytest.approx(eq.vstar(1, 6, 1), abs=1e-12)
    assert inv.vstar_series(1, 6, 1, "far") == pytest.approx(3.374, abs=1e-3)
    for u in (0.5, 2.0, 5.0):
        assert inv.vstar_series(u, u, 1) == pytest.approx(1.0, abs=1e-12)
    assert inv.vstar_closed(1.3, 2.0, 2) == pytest.approx(eq.vstar(1.3, 2.0, 2), abs=1e-12)
    with pytest.raises(DomainError):
        inv.vstar_series(1, 6, 1, "middle")
    with pytest.raises(inv.SeriesDomainError):
        inv.vstar_series(0.0, 1.0, 1, "far")


def test_vstar_series_outside_domain():
    # pick a momentum where neither argument is inside its disc
    for p in np.linspace(0.05, 3, 300):
        if inv.series_branch(p, 0.0, 1) is None:
            with pytest.raises(inv.SeriesDomainError):
                inv.vstar_series(p, 0.0, 1)
            assert eq.vstar(p, 0.0, 1, "series") == eq.vstar(p, 0.0, 1)
            return
    pytest.fail("no gap between the two branch domains found")


@settings(max_examples=200, deadline=None)
@given(
    p=st.floats(0, 8),
    u=st.floats(0, 10),
    M=st.sampled_from([0.5, 1.0, 2.0, 3.0, 6.0, 10.0]),
)
def test_vstar_series_vs_bisection(p, u, M):
    try:
        vs = inv.vstar_series(p, u, M)
    except inv.SeriesDomainError:
        return
    assert vs == pytest.approx(eq.vstar(p, u, M), abs=1e-8)
