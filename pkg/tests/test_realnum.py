"""Real-field layer: special functions, quadrature, state integrals."""

import cmath
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from knotlocal import realnum as rn

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi


# ----------------------------------------------------------------------
# gamma / beta layer


def test_gamma_complex_matches_real_gamma():
    for x in (0.5, 1.0, 2.5, 7.0, -0.5, -2.3):
        assert rn.gamma_complex(complex(x)) == pytest.approx(
            math.gamma(x), rel=1e-13)


def test_gamma_functional_equation():
    rng = random.Random(1)
    for _ in range(200):
        z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if abs(z - round(z.real)) < 1e-2 and abs(z.imag) < 1e-2:
            continue
        lhs = rn.gamma_complex(z + 1)
        rhs = z * rn.gamma_complex(z)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_gamma_n_inversion_seeded():
    rng = random.Random(2)
    worst = 0.0
    for _ in range(1000):
        z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        if abs(z.imag) < 1e-3 and abs(z.real - round(z.real)) < 1e-3:
            continue
        for n in (0, 1):
            worst = max(worst, abs(rn.gamma_n(n, z) * rn.gamma_n(n, 1 - z) - 1))
    assert worst <= 1e-12


def test_beta_complex():
    assert rn.beta_complex(1, 1) == pytest.approx(1.0)
    assert rn.beta_complex(2, 3) == pytest.approx(1 / 12, rel=1e-13)
    z, w = 0.3 + 0.2j, 1.1 - 0.7j
    expect = rn.gamma_complex(z) * rn.gamma_complex(w) / rn.gamma_complex(z + w)
    assert abs(rn.beta_complex(z, w) - expect) <= 1e-12 * abs(expect)


# ----------------------------------------------------------------------
# signed logarithms


finite_reals = st.floats(min_value=-50.0, max_value=50.0,
                         allow_nan=False).filter(lambda v: abs(v) > 1e-6)


@given(a=finite_reals, b=finite_reals)
def test_signed_log_multiplicative(a, b):
    x, y = rn.SignedLog.from_real(a), rn.SignedLog.from_real(b)
    xy = x * y
    assert xy.eps == (x.eps + y.eps) % 2
    assert xy.ell == pytest.approx(x.ell + y.ell, abs=1e-9)


@given(a=finite_reals)
def test_signed_log_inverse(a):
    x = rn.SignedLog.from_real(a)
    xi = x.inverse()
    prod = x * xi
    assert prod.eps == 0
    assert prod.ell == pytest.approx(0.0, abs=1e-9)


def test_pairing_symmetric_unit_modulus():
    rng = random.Random(3)
    for _ in range(100):
        x = rn.SignedLog.from_real(rng.choice([-1, 1]) * math.exp(rng.uniform(-2, 2)))
        y = rn.SignedLog.from_real(rng.choice([-1, 1]) * math.exp(rng.uniform(-2, 2)))
        pxy = rn.pairing(x, y)
        assert abs(abs(pxy) - 1.0) <= 1e-12
        assert abs(pxy - rn.pairing(y, x)) <= 1e-12


# ----------------------------------------------------------------------
# edge weight closed forms


def _random_triple(rng):
    adot = rng.uniform(0.05, 0.9)
    cdot = rng.uniform(0.05, 0.95 - adot)
    return rn.RealAngleTriple.from_ac(
        adot, cdot,
        rng.choice([-1, 1]) * math.exp(rng.uniform(-1, 1)),
        rng.choice([-1, 1]) * math.exp(rng.uniform(-1, 1)))


def _random_sl(rng, scale=2.0):
    return rn.SignedLog.from_real(
        rng.choice([-1, 1]) * math.exp(rng.uniform(-scale, scale)))


def test_h_ac_three_closed_forms_agree():
    rng = random.Random(4)
    worst = 0.0
    for _ in range(1000):
        t = _random_triple(rng)
        h = rn.h_ac(_random_sl(rng), _random_sl(rng), t)
        worst = max(worst,
                    abs(h.triple_beta - h.gamma_product),
                    abs(h.bc_form - h.gamma_product))
    assert worst <= 1e-10


def test_h_ac_cyclic_symmetry():
    # the weight is cyclically symmetric: with xyz = 1,
    # h_{a,c}(x, z) == h_{b,a}(y, x) == h_{c,b}(z, y)
    rng = random.Random(5)
    for _ in range(200):
        t = _random_triple(rng)
        tb = rn.RealAngleTriple(t.bdot, t.cdot, t.adot,
                                t.bddot, t.cddot, t.addot)
        tc = rn.RealAngleTriple(t.cdot, t.adot, t.bdot,
                                t.cddot, t.addot, t.bddot)
        x, y = _random_sl(rng), _random_sl(rng)
        z = (x * y).inverse()
        h1 = rn.h_ac(x, z, t).full
        h2 = rn.h_ac(y, x, tb).full
        h3 = rn.h_ac(z, y, tc).full
        scale = max(1.0, abs(h1))
        assert abs(h1 - h2) <= 1e-10 * scale
        assert abs(h1 - h3) <= 1e-10 * scale


def test_angle_triple_validation():
    with pytest.raises(ValueError):
        rn.RealAngleTriple(0.5, 0.5, 0.5, 1.0, 1.0, -1.0)
    with pytest.raises(ValueError):
        rn.RealAngleTriple(0.2, 0.3, 0.5, 1.0, 1.0, 1.0)
    t = rn.RealAngleTriple.from_ac(1.2, 0.1, 1.0, 1.0)
    with pytest.raises(rn.RegimeError):
        t.require_regime()


# ----------------------------------------------------------------------
# quadrature engines


def test_tanh_sinh_known_integrals():
    q = rn.tanh_sinh(lambda x, da, db: 1.0 / math.sqrt(x), 0.0, 1.0, tol=1e-12)
    assert q.value == pytest.approx(2.0, abs=1e-11)
    q = rn.tanh_sinh(lambda x, da, db: math.log(x), 0.0, 1.0, tol=1e-12)
    assert q.value == pytest.approx(-1.0, abs=1e-11)
    q = rn.tanh_sinh(lambda x, da, db: x * x, -1.0, 2.0, tol=1e-12)
    assert q.value == pytest.approx(3.0, abs=1e-11)


def test_tanh_sinh_endpoint_distances():
    # da, db are the exact distances to the endpoints; using them must
    # reproduce an endpoint-singular integral that naive evaluation cannot
    q = rn.tanh_sinh(lambda x, da, db: da ** -0.5 * db ** -0.5, 0.0, 1.0,
                     tol=1e-12)
    assert q.value == pytest.approx(math.pi, abs=1e-10)


def test_exp_sinh_known_integral():
    q = rn.exp_sinh(lambda x: math.exp(-x), tol=1e-12)
    assert q.value == pytest.approx(1.0, abs=1e-11)


def test_quadrature_result_metadata():
    q = rn.tanh_sinh(lambda x, da, db: x, 0.0, 1.0, tol=1e-12)
    assert q.evaluations > 0
    assert q.abs_error_estimate <= 1e-10


# ----------------------------------------------------------------------
# state integrals


MB_00 = 5.60241216


def test_mb_41_reference_value():
    q = rn.mb_41(0.0, 0.0)
    assert abs(q.value - MB_00) <= 1e-6


def test_period_agrees_with_contour_integral():
    mb = rn.mb_41(0.0, 0.0).value
    per = rn.period_41(0.0, 0.0).value
    assert abs(per - mb) <= 1e-8
    alt = rn.period_41_alt(0.0, 0.0).value
    assert abs(alt - mb) <= 1e-6


def test_period_agreement_nonzero_angles():
    for ld, md in ((0.1, 0.0), (0.05, 0.07)):
        mb = rn.mb_41(ld, md).value
        assert abs(rn.period_41(ld, md).value - mb) <= 1e-6
        assert abs(rn.period_41_alt(ld, md).value - mb) <= 1e-6


def test_period_divergence_guard():
    with pytest.raises(rn.DivergenceError):
        rn.period_41(1.5, 0.0)
    with pytest.raises(rn.DivergenceError):
        rn.period_41(0.0, -0.8)


def test_hks_52_reference_value():
    q = rn.hks_52()
    assert abs(q.value - 0.534186) <= 2e-4


def test_hks_branch_on_curve():
    for z1 in (1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-9):
        z2, w2, z3, w3 = rn.hks_52_branch(z1)
        for v in (z2, w2, z3, w3):
            assert 0.0 < v < 1.0
        assert abs(w3 * w3 - (1.0 - z1) * w2) <= 1e-12
        assert abs(z1 * z2 * (w3 - 1.0) + w3 * w3) <= 1e-10


def test_fourier_gamma_residuals():
    rng = random.Random(6)
    for _ in range(20):
        r = rn.fourier_gamma_check(rng.uniform(0.2, 3.0), rng.uniform(-0.5, 0.5))
        assert r <= 1e-8


# ----------------------------------------------------------------------
# edge state-integrand and its reduction to the contour integrand


ABAR = ((2, 0), (0, 2))
BBAR = ((0, 2), (2, 0))
CBAR = ((1, 1), (1, 1))


def _balanced_angles(rng):
    """Random positive angle data for the two-tetrahedron edge weight.

    Returns (theta, lambda_dot, mu_dot): dot parts free up to the relation
    cdot_1 = 1 + lambda_dot - 2 adot_1, all multiplicative parts 1.
    """
    while True:
        a0 = rng.uniform(0.05, 0.6)
        c0 = rng.uniform(0.05, 0.9 - a0)
        a1 = rng.uniform(0.05, 0.6)
        ld = 2 * a0 + c0 - 1.0
        c1 = 1.0 + ld - 2 * a1
        if 0.05 < c1 and a1 + c1 < 0.95:
            break
    t0 = rn.RealAngleTriple.from_ac(a0, c0, 1.0, 1.0)
    t1 = rn.RealAngleTriple.from_ac(a1, c1, 1.0, 1.0)
    return (t0, t1), ld, a0 - a1


def _edge_value(theta, x1):
    x = [rn.SignedLog.from_real(x1), rn.SignedLog.from_real(1.0)]
    value, phase = rn.edge_state_integrand(ABAR, BBAR, CBAR, theta, x,
                                           signs=[1, -1])
    return value, phase


def test_edge_integrand_phase_is_trivial_when_balanced():
    rng = random.Random(7)
    for _ in range(50):
        theta, _, _ = _balanced_angles(rng)
        _, phase = _edge_value(theta, rng.choice([-1, 1]) * math.exp(rng.uniform(-1, 1)))
        assert abs(phase - 1.0) <= 1e-12


def test_edge_integrand_factors_into_edge_weights():
    # the two-tetrahedron edge integrand is the product of one edge weight
    # per tetrahedron, the negatively oriented one conjugated
    rng = random.Random(8)
    for _ in range(100):
        theta, _, _ = _balanced_angles(rng)
        x1 = rng.choice([-1, 1]) * math.exp(rng.uniform(-1.5, 1.5))
        value, _ = _edge_value(theta, x1)
        x = rn.SignedLog.from_real(x1)
        h0 = rn.h_ac(x.inverse(), x * x, theta[0]).full
        h1 = rn.h_ac(x, (x * x).inverse(), theta[1]).full
        expect = h0 * h1.conjugate()
        assert abs(value - expect) <= 1e-10 * max(1.0, abs(expect))


def test_edge_integrand_reduces_to_contour_integrand():
    # symmetrizing over the sign of the edge variable reproduces the
    # meromorphic contour integrand (plus its distributional unit term)
    # at z = adot_1 + i log|x| / (4 pi) * (4 pi)
    rng = random.Random(9)
    for _ in range(60):
        theta, ld, md = _balanced_angles(rng)
        x1 = math.exp(rng.uniform(-1.0, 1.0))
        vp, _ = _edge_value(theta, x1)
        vm, _ = _edge_value(theta, -x1)
        lhs = (vp + vm) / FOUR_PI
        z = theta[1].adot + 1j * rn.SignedLog.from_real(x1).ell
        b1 = rn.beta_complex(z, z - ld)
        b2 = rn.beta_complex(z + md, z + md - ld)
        trig = (math.cos(math.pi * ld / 2.0) ** 2
                / (cmath.cos(cmath.pi * (z - ld / 2.0))
                   * cmath.cos(cmath.pi * (z + md - ld / 2.0))))
        rhs = b1 * b2 * (1.0 + trig) / TWO_PI
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


def test_g_weight_requires_positive_angle():
    with pytest.raises(rn.RegimeError):
        rn.g_weight(-0.1, rn.SignedLog.from_real(2.0))
