"""Real-field numerics for the multiplicative group of the reals.

This module provides the special functions and quadratures used by the
real-field edge state-integral of a knot complement:

* a self-contained complex Gamma function (Stirling series with recurrence
  shift and reflection) accurate to ~1e-14 relative error on the strip
  |Re z| <= 10, |Im z| <= 50, plus Beta and the normalized Gamma_n variants;
* the tetrahedral edge weight h in its three closed forms (signed sum of
  three Beta values, sqrt(2*pi) times a product of three normalized Gammas,
  and a trigonometric Beta-cosine factorization), with the unit-modulus
  pairing prefactor reported separately;
* the Mellin-Barnes contour integral and the equivalent period integrals
  for the figure-eight knot invariant, and the one-dimensional reduction of
  the 5_2 state-integral constant;
* a Fourier-transform identity check for the Gamma function;
* a general edge state-integrand builder driven by the shape-occurrence
  matrices of a triangulation.

Conventions for nonzero reals x: eps_x = 0 for x > 0 and 1 for x < 0;
ell_x = 4*pi*log|x|; the bicharacter pairing is
<x,y> = (-1)^(eps_x eps_y) exp((i/(4*pi)) ell_x ell_y).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

FOUR_PI = 4.0 * math.pi
SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


class RealnumError(Exception):
    """Base class for real-field numerics errors."""


class PoleError(RealnumError):
    """Evaluation at a pole of the Gamma function."""


class RegimeError(RealnumError):
    """Angle or contour data outside the admissible regime."""


class DivergenceError(RealnumError):
    """An improper integral diverges for the requested parameters."""


# ----------------------------------------------------------------------
# Complex Gamma / Beta
# ----------------------------------------------------------------------

# Stirling coefficients B_{2n} / (2n (2n-1)) for n = 1..15.
_STIRLING = [
    float(Fraction(b) / (2 * n * (2 * n - 1)))
    for n, b in enumerate(
        [
            Fraction(1, 6),
            Fraction(-1, 30),
            Fraction(1, 42),
            Fraction(-1, 30),
            Fraction(5, 66),
            Fraction(-691, 2730),
            Fraction(7, 6),
            Fraction(-3617, 510),
            Fraction(43867, 798),
            Fraction(-174611, 330),
            Fraction(854513, 138),
            Fraction(-236364091, 2730),
            Fraction(8553103, 6),
            Fraction(-23749461029, 870),
            Fraction(8615841276005, 14322),
        ],
        start=1,
    )
]

_SHIFT_RADIUS = 25.0


def _loggamma_right(z: complex) -> complex:
    """log Gamma for Re z >= 0.5 via recurrence shift plus Stirling."""
    shift = 0
    w = z
    while abs(w) < _SHIFT_RADIUS:
        w += 1
        shift += 1
    res = (w - 0.5) * cmath.log(w) - w + 0.5 * math.log(2.0 * math.pi)
    w2 = 1.0 / (w * w)
    term = 1.0 / w
    acc = 0.0 + 0.0j
    for c in _STIRLING:
        acc += c * term
        term *= w2
    res += acc
    # undo the shift: Gamma(z) = Gamma(z + n) / (z (z+1) ... (z+n-1))
    for k in range(shift):
        res -= cmath.log(z + k)
    return res


def gamma_complex(z: complex) -> complex:
    """Complex Gamma function. Raises PoleError at nonpositive integers."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise PoleError("Gamma pole at z = %s" % z)
    if z.real >= 0.5:
        return cmath.exp(_loggamma_right(z))
    # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    s = cmath.sin(cmath.pi * z)
    if s == 0:
        raise PoleError("Gamma pole at z = %s" % z)
    return cmath.pi / (s * cmath.exp(_loggamma_right(1.0 - z)))


def rgamma_complex(z: complex) -> complex:
    """Reciprocal Gamma function; entire, returns 0 at the poles of Gamma."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        return 0.0 + 0.0j
    if z.real >= 0.5:
        return cmath.exp(-_loggamma_right(z))
    return cmath.sin(cmath.pi * z) * cmath.exp(_loggamma_right(1.0 - z)) / cmath.pi


def beta_complex(z: complex, w: complex) -> complex:
    """Euler Beta function B(z, w) = Gamma(z) Gamma(w) / Gamma(z + w)."""
    return gamma_complex(z) * gamma_complex(w) * rgamma_complex(z + w)


def gamma_n(n: int, z: complex) -> complex:
    """Normalized Gamma: sqrt(2/pi) Gamma(z) cos(pi (n - z) / 2), n in {0, 1}.

    Satisfies the inversion relation gamma_n(n, z) * gamma_n(n, 1 - z) = 1.
    """
    if n not in (0, 1):
        raise ValueError("n must be 0 or 1")
    return math.sqrt(2.0 / math.pi) * gamma_complex(z) * cmath.cos(
        cmath.pi * (n - z) / 2.0
    )


def bc_trig(x: complex, y: complex) -> complex:
    """Trigonometric Beta analogue cos(x) cos(y) / cos(x + y)."""
    return cmath.cos(x) * cmath.cos(y) / cmath.cos(x + y)


# ----------------------------------------------------------------------
# Signed-log coordinates on the multiplicative group of the reals
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SignedLog:
    """A nonzero real x stored as (eps, ell) with x = (-1)^eps e^(ell/4pi)."""

    eps: int
    ell: float

    def __post_init__(self) -> None:
        if self.eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")

    @staticmethod
    def from_real(x: float) -> "SignedLog":
        if x == 0:
            raise ValueError("0 has no signed-log coordinates")
        return SignedLog(0 if x > 0 else 1, FOUR_PI * math.log(abs(x)))

    @property
    def value(self) -> float:
        v = math.exp(self.ell / FOUR_PI)
        return -v if self.eps else v

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        return SignedLog(self.eps ^ other.eps, self.ell + other.ell)

    def inverse(self) -> "SignedLog":
        return SignedLog(self.eps, -self.ell)

    def power(self, k: int) -> "SignedLog":
        return SignedLog((self.eps * k) % 2, self.ell * k)


def pairing(x: SignedLog, y: SignedLog) -> complex:
    """Unit-modulus bicharacter <x,y> on the multiplicative group."""
    sign = -1.0 if (x.eps and y.eps) else 1.0
    return sign * cmath.exp(1j * x.ell * y.ell / FOUR_PI)


def monomial(x: Sequence[SignedLog], exponents: Sequence[int]) -> SignedLog:
    """The product x_1^{v_1} ... x_n^{v_n} in signed-log coordinates."""
    eps = 0
    ell = 0.0
    for xi, vi in zip(x, exponents):
        eps ^= (xi.eps * vi) % 2
        ell += xi.ell * vi
    return SignedLog(eps, ell)


# ----------------------------------------------------------------------
# Angle triples over the reals
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class RealAngleTriple:
    """Angles (a, b, c) with real parts summing to 1 and sign parts
    multiplying to -1."""

    adot: float
    bdot: float
    cdot: float
    addot: float
    bddot: float
    cddot: float

    def __post_init__(self) -> None:
        if abs(self.adot + self.bdot + self.cdot - 1.0) > 1e-9:
            raise ValueError("real angle parts must sum to 1")
        if min(abs(self.addot), abs(self.bddot), abs(self.cddot)) == 0:
            raise ValueError("multiplicative angle parts must be nonzero")
        if abs(self.addot * self.bddot * self.cddot + 1.0) > 1e-9 * max(
            1.0, abs(self.addot * self.bddot * self.cddot)
        ):
            raise ValueError("multiplicative angle parts must multiply to -1")

    @staticmethod
    def from_ac(adot: float, cdot: float, addot: float, cddot: float) -> "RealAngleTriple":
        return RealAngleTriple(
            adot, 1.0 - adot - cdot, cdot, addot, -1.0 / (addot * cddot), cddot
        )

    @property
    def in_regime(self) -> bool:
        return 0.0 < self.adot < 1.0 and 0.0 < self.bdot < 1.0 and 0.0 < self.cdot < 1.0

    def require_regime(self) -> None:
        if not self.in_regime:
            raise RegimeError(
                "real angle parts (%g, %g, %g) are not all strictly between 0 and 1"
                % (self.adot, self.bdot, self.cdot)
            )


@dataclass(frozen=True)
class HacValue:
    """Phase-stripped edge weight with its closed forms and phase metadata.

    ``value`` is the Gamma-product form; ``phase`` is the unit-modulus
    pairing prefactor <x, cddot> / <y, addot> that multiplies it to give the
    full weight.
    """

    value: complex
    phase: complex
    triple_beta: complex
    gamma_product: complex
    bc_form: complex

    @property
    def full(self) -> complex:
        return self.phase * self.value


def h_ac(x: SignedLog, y: SignedLog, t: RealAngleTriple) -> HacValue:
    """Edge weight h for the pair (x, y) at angles t, phase-stripped.

    Three equivalent closed forms are evaluated:
      * a signed sum of three Beta values,
      * sqrt(2 pi) (-1)^(eps_x eps_y) Gamma_{eps_x}(adot - i ell_x)
        Gamma_{eps_y}(cdot - i ell_y) Gamma_{eps_xy}(bdot + i ell_xy),
      * 2 BC(pi/2 (eps_x + i ell_x - adot), pi/2 (eps_y + i ell_y - cdot))
        B(adot - i ell_x, cdot - i ell_y).
    The cyclic symmetry h_{a,c}(x,z) = h_{b,a}(y,x) = h_{c,b}(z,y) holds for
    the full (phase-included) weight when xyz = 1.
    """
    t.require_regime()
    xy = x * y
    za = t.adot - 1j * x.ell
    zc = t.cdot - 1j * y.ell
    zb = t.bdot + 1j * xy.ell

    triple = (
        beta_complex(za, zc)
        + (-1.0) ** x.eps * beta_complex(za, zb)
        + (-1.0) ** y.eps * beta_complex(zc, zb)
    )
    gp = (
        SQRT_TWO_PI
        * (-1.0) ** (x.eps * y.eps)
        * gamma_n(x.eps, za)
        * gamma_n(y.eps, zc)
        * gamma_n(xy.eps, zb)
    )
    bc = (
        2.0
        * bc_trig(
            0.5 * cmath.pi * (x.eps + 1j * x.ell - t.adot),
            0.5 * cmath.pi * (y.eps + 1j * y.ell - t.cdot),
        )
        * beta_complex(za, zc)
    )
    phase = pairing(x, SignedLog.from_real(t.cddot)) / pairing(
        y, SignedLog.from_real(t.addot)
    )
    return HacValue(value=gp, phase=phase, triple_beta=triple, gamma_product=gp, bc_form=bc)


# ----------------------------------------------------------------------
# Quadrature engines
# ----------------------------------------------------------------------


@dataclass
class QuadratureResult:
    value: complex
    abs_error_estimate: float
    evaluations: int
    meta: dict = field(default_factory=dict)


_TS_TMAX = 6.115


def _tanh_sinh_nodes(h: float, parity_only_odd: bool) -> List[Tuple[float, float, float, float]]:
    """Nodes (u, weight, 1-u, 1+u) of the tanh-sinh rule at spacing h.

    When parity_only_odd is true only the odd multiples of h are produced
    (the new nodes after halving the spacing).
    """
    out = []
    k = 1 if parity_only_odd else 0
    step = 2 if parity_only_odd else 1
    while True:
        t = k * h
        if t > _TS_TMAX:
            break
        s = 0.5 * math.pi * math.sinh(t)
        if 2.0 * s > 700.0:
            break
        em = math.exp(-2.0 * s)
        dm = 2.0 * em / (1.0 + em)  # 1 - tanh(s)
        dp = 2.0 - dm
        u = 1.0 - dm
        ch = math.cosh(s)
        w = 0.5 * math.pi * math.cosh(t) / (ch * ch)
        if w == 0.0 or dm == 0.0:
            break
        out.append((u, w, dm, dp))
        if k:
            out.append((-u, w, dp, dm))
        k += step
    return out


def tanh_sinh(
    g: Callable[[float, float, float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_level: int = 12,
) -> QuadratureResult:
    """Double-exponential quadrature of g over (a, b).

    g(x, da, db) receives the point together with accurately computed
    distances da = x - a and db = b - x, so that endpoint-singular
    integrands can be evaluated without cancellation.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)

    def eval_node(u: float, dm: float, dp: float) -> float:
        da = half * dp
        db = half * dm
        # anchor the point at the nearer endpoint to avoid cancellation
        x = (a + da) if u < 0.0 else (b - db)
        return g(x, da, db)

    evals = 0
    h = 1.0
    total = 0.0
    prev = None
    err = math.inf
    value = 0.0
    for level in range(max_level + 1):
        nodes = _tanh_sinh_nodes(h, parity_only_odd=(level > 0))
        parts = [w * eval_node(u, dm, dp) for (u, w, dm, dp) in nodes]
        evals += len(parts)
        total += math.fsum(parts)
        value = half * h * total
        if prev is not None:
            err = abs(value - prev)
            if level >= 2 and err <= tol * max(1.0, abs(value)):
                break
        prev = value
        h *= 0.5
    return QuadratureResult(value, max(err, 1e-16 * abs(value)), evals, {"rule": "tanh-sinh"})


def exp_sinh(
    g: Callable[[float], float],
    tol: float = 1e-12,
    max_level: int = 12,
) -> QuadratureResult:
    """Double-exponential quadrature of g over (0, infinity)."""

    def node(t: float) -> Optional[Tuple[float, float]]:
        s = 0.5 * math.pi * math.sinh(t)
        if abs(s) > 700.0:
            return None
        x = math.exp(s)
        w = x * 0.5 * math.pi * math.cosh(t)
        return x, w

    evals = 0
    h = 1.0
    total = 0.0
    prev = None
    err = math.inf
    value = 0.0
    for level in range(max_level + 1):
        parts = []
        k = 1 if level > 0 else 0
        step = 2 if level > 0 else 1
        while True:
            t = k * h
            nd = node(t)
            ndm = node(-t) if k else None
            if nd is None and (k == 0 or ndm is None):
                break
            if nd is not None:
                parts.append(nd[1] * g(nd[0]))
                evals += 1
            if k and ndm is not None:
                parts.append(ndm[1] * g(ndm[0]))
                evals += 1
            if k == 0:
                k = step - 1
            k += step
        total += math.fsum(parts)
        value = h * total
        if prev is not None:
            err = abs(value - prev)
            if level >= 2 and err <= tol * max(1.0, abs(value)):
                break
        prev = value
        h *= 0.5
    return QuadratureResult(value, max(err, 1e-16 * abs(value)), evals, {"rule": "exp-sinh"})


def trapezoid_line(
    f: Callable[[float], complex],
    half_width: float,
    h0: float = 0.25,
    tol: float = 1e-12,
    max_halvings: int = 7,
    center: float = 0.0,
) -> QuadratureResult:
    """Trapezoid rule for an analytic, rapidly decaying integrand on a line.

    Integrates f over (center - half_width, center + half_width); for
    integrands decaying like exp(-c|t|) the rule converges geometrically in
    the node spacing.
    """
    evals = 0
    h = h0
    prev = None
    err = math.inf
    value = 0.0 + 0.0j
    for _ in range(max_halvings + 1):
        n = int(math.ceil(half_width / h))
        pts = [center + k * h for k in range(-n, n + 1)]
        vals = [f(t) for t in pts]
        evals += len(vals)
        value = h * complex(
            math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals)
        )
        if prev is not None:
            err = abs(value - prev)
            if err <= tol * max(1.0, abs(value)):
                break
        prev = value
        h *= 0.5
    return QuadratureResult(value, max(err, 1e-16 * abs(value)), evals, {"rule": "trapezoid"})


# ----------------------------------------------------------------------
# Figure-eight knot: Mellin-Barnes contour integral and period forms
# ----------------------------------------------------------------------


def mb_contour_abscissa(lambda_dot: float, mu_dot: float) -> float:
    """Contour abscissa strictly between the rightmost Beta pole and the
    nearest cosine zero; raises RegimeError when the strip is pinched."""
    lo = max(0.0, lambda_dot, -mu_dot, lambda_dot - mu_dot)
    hi = 0.5 * lambda_dot + 0.5 + min(0.0, -mu_dot)
    if hi <= lo:
        raise RegimeError(
            "no pole-free contour strip for (lambda_dot, mu_dot) = (%g, %g)"
            % (lambda_dot, mu_dot)
        )
    return 0.5 * (lo + hi)


def mb_41_integrand(z: complex, lambda_dot: float, mu_dot: float) -> complex:
    """Integrand of the Mellin-Barnes representation of the figure-eight
    invariant at real holonomy parameters (lambda_dot, mu_dot)."""
    ld, md = lambda_dot, mu_dot
    num = beta_complex(z, z - ld) * beta_complex(z + md, z + md - ld)
    num *= math.cos(0.5 * math.pi * ld) ** 2
    den = cmath.cos(cmath.pi * (z - 0.5 * ld)) * cmath.cos(cmath.pi * (z + md - 0.5 * ld))
    return num / den


def mb_41(
    lambda_dot: float, mu_dot: float, tol: float = 1e-10, abscissa: Optional[float] = None
) -> QuadratureResult:
    """Figure-eight invariant as a Mellin-Barnes contour integral.

    Evaluates (1/(2 pi i)) of the Beta-product integrand along the vertical
    contour through the chosen abscissa; the integrand decays like
    exp(-2 pi |Im z|).
    """
    c = mb_contour_abscissa(lambda_dot, mu_dot) if abscissa is None else abscissa

    def f(t: float) -> complex:
        return mb_41_integrand(complex(c, t), lambda_dot, mu_dot)

    # exp(-2 pi T) < 1e-24 at T = 9
    qr = trapezoid_line(f, half_width=9.0, h0=0.25, tol=tol)
    value = qr.value / (2.0 * math.pi)
    qr = QuadratureResult(
        value.real,
        qr.abs_error_estimate / (2.0 * math.pi) + abs(value.imag),
        qr.evaluations,
        {"rule": "trapezoid", "contour_abscissa": c, "imag_part": value.imag},
    )
    return qr


_WEIERSTRASS_META = {
    "weierstrass_form": "Y^2 = -X^3 + X/3 + 322/27",
    "j_invariant": Fraction(-1, 15),
}

_ALT_QUARTIC_META = {
    "quartic_form": "y^2 = 4 - 7 t^2 + 4 t^4",
    "j_invariant": Fraction(13997521, 225),
}


def _check_period_convergence(lambda_dot: float, mu_dot: float) -> None:
    ld, md = lambda_dot, mu_dot
    if 2.0 * md + ld >= 1.0:
        raise DivergenceError("interior singularity exponent too strong")
    if md <= -0.5:
        raise DivergenceError("endpoint singularity exponent too strong")
    if 0.5 * ld - md >= 0.5:
        raise DivergenceError("tail of the period integral diverges")


def period_41(lambda_dot: float, mu_dot: float, tol: float = 1e-12) -> QuadratureResult:
    """Figure-eight invariant as a period integral over the branch
    y = sqrt((1-x)(1-x+4x^2)), x from -infinity to 1."""
    ld, md = lambda_dot, mu_dot
    _check_period_convergence(ld, md)
    two_ld = 2.0 ** ld

    def weight(x: float, one_minus_x: float) -> float:
        q = one_minus_x + 4.0 * x * x
        y = math.sqrt(one_minus_x * q)
        s = abs(y + x - 1.0) ** ld + abs(-y + x - 1.0) ** ld
        return one_minus_x ** md * s / (abs(x) ** (2.0 * md + ld) * two_ld * y)

    def far_tail(u: float) -> float:
        # x = -1/u for u in (0, 1), with the Jacobian folded in analytically
        a_ = math.sqrt((u + 1.0) * (u * u + u + 4.0))
        su = math.sqrt(u)
        s = (a_ - (u + 1.0) * su) ** ld + (a_ + (u + 1.0) * su) ** ld
        return (u + 1.0) ** md * u ** (md - 0.5 * ld - 0.5) * s / (two_ld * a_)

    pieces = [
        # (0, 1): endpoint-singular at both ends
        tanh_sinh(lambda x, da, db: weight(x, db), 0.0, 1.0, tol=tol),
        # (-1, 0): singular at the 0 end
        tanh_sinh(lambda x, da, db: weight(-db, 1.0 + db), -1.0, 0.0, tol=tol),
        # (-infinity, -1) via x = -1/u
        tanh_sinh(lambda u, da, db: far_tail(u), 0.0, 1.0, tol=tol),
    ]
    meta = dict(_WEIERSTRASS_META)
    return QuadratureResult(
        math.fsum(p.value for p in pieces),
        math.fsum(p.abs_error_estimate for p in pieces),
        sum(p.evaluations for p in pieces),
        meta,
    )


def period_41_alt(lambda_dot: float, mu_dot: float, tol: float = 1e-12) -> QuadratureResult:
    """Alternative period form of the figure-eight invariant, integrating
    over the real line against the quartic 1 - (7/4) t^2 + t^4."""
    ld, md = lambda_dot, mu_dot
    _check_period_convergence(ld, md)
    e = 2.0 * md + ld

    def integrand(t: float, d1m: float, d1p: float) -> float:
        # |t - 1/t| = |t - 1| |t + 1| / |t| with the endpoint distances
        # d1m = |t - 1|, d1p = |t + 1| supplied to full accuracy
        q = 1.0 + t * t * (t * t - 1.75)
        r = math.sqrt(q)
        return abs(r - 0.5 * t) ** ld * abs(t) ** e / ((d1m * d1p) ** e * r)

    def tail_integrand(v: float, d1m: float, d1p: float) -> float:
        # t = 1/v with the Jacobian 1/v^2 folded in analytically;
        # |1 - v^2| = d1m d1p as above
        rq = math.sqrt(1.0 + v * v * (v * v - 1.75))
        return (
            abs(rq - 0.5 * v) ** ld
            * abs(v) ** (e - 2.0 * ld)
            * (d1m * d1p) ** (-e)
            / rq
        )

    # interior pieces (-1, 0) and (0, 1); |t - 1/t| vanishes at t = +-1 and
    # blows up at t = 0, both handled by the double-exponential rule
    pieces = [
        tanh_sinh(lambda t, da, db: integrand(t, 1.0 + db, da), -1.0, 0.0, tol=tol),
        tanh_sinh(lambda t, da, db: integrand(t, db, 1.0 + da), 0.0, 1.0, tol=tol),
        # |t| > 1 via t = 1/v
        tanh_sinh(lambda v, da, db: tail_integrand(v, db, 1.0 + da), 0.0, 1.0, tol=tol),
        tanh_sinh(lambda v, da, db: tail_integrand(v, 1.0 + db, da), -1.0, 0.0, tol=tol),
    ]
    meta = dict(_ALT_QUARTIC_META)
    return QuadratureResult(
        math.fsum(p.value for p in pieces),
        math.fsum(p.abs_error_estimate for p in pieces),
        sum(p.evaluations for p in pieces),
        meta,
    )


# ----------------------------------------------------------------------
# The 5_2 state-integral constant via its one-dimensional reduction
# ----------------------------------------------------------------------


def hks_52_curve_poly(z1: float, z2: float) -> float:
    """Defining polynomial of the reduced constraint curve in (z1, z2)."""
    return (
        -1.0
        + 2.0 * z1
        - z1 * z1
        + 2.0 * z2
        - 2.0 * z1 * z2
        - z2 * z2
        + z1 * z1 * z2 * z2
        - z1 ** 3 * z2 * z2
        - z1 * z1 * z2 ** 3
        + z1 ** 3 * z2 ** 3
    )


def hks_52_branch(z1: float, w1: Optional[float] = None) -> Tuple[float, float, float, float]:
    """The real branch over z1 in (0,1), returned as (z2, w2, z3, w3) with
    w_j = 1 - z_j held to full accuracy.

    Solves sqrt(P) = 1 - P/(z1 z2) with P = (1 - z1)(1 - z2) by bracketed
    root finding of a monotone sign change, working in whichever of z2 or
    w2 is the small coordinate; then w3 = sqrt(P), z3 = 1 - w3.  ``w1``
    may supply 1 - z1 to full accuracy near the right endpoint.
    """
    from scipy.optimize import brentq

    if w1 is None:
        w1 = 1.0 - z1

    def g(z2: float, w2: float) -> float:
        # z1 z2 (sqrt(P) - 1) + P, same sign pattern as
        # sqrt(P) - (1 - P/(z1 z2)) but finite throughout the open square
        p = w1 * w2
        return z1 * z2 * (math.sqrt(p) - 1.0) + p

    lo, hi = 1e-300, 1.0 - 1e-16
    if z1 >= 0.5:
        # z2 is small here: solve in z2 (g is positive at z2 -> 0)
        if not (g(lo, 1.0 - lo) > 0.0 > g(hi, 1.0 - hi)):
            raise RealnumError("branch solve failed to bracket at z1 = %g" % z1)
        z2 = brentq(lambda u: g(u, 1.0 - u), lo, hi, xtol=1e-300, rtol=8.9e-16)
        w2 = 1.0 - z2
    else:
        # z2 is near 1 here: solve in w2 = 1 - z2 instead
        if not (g(1.0 - lo, lo) < 0.0 < g(1.0 - hi, hi)):
            raise RealnumError("branch solve failed to bracket at z1 = %g" % z1)
        w2 = brentq(lambda u: g(1.0 - u, u), lo, hi, xtol=1e-300, rtol=8.9e-16)
        z2 = 1.0 - w2
    p = w1 * w2
    if not (0.0 < p < 1.0):
        raise RealnumError("branch left the unit cube at z1 = %g" % z1)
    w3 = math.sqrt(p)
    return z2, w2, 1.0 - w3, w3


def hks_52_integrand(z1: float, w1: Optional[float] = None) -> float:
    """Integrand of the delta-reduced one-dimensional form of the 5_2
    state-integral constant, parametrized by z1 in (0, 1)."""
    if w1 is None:
        w1 = 1.0 - z1
    z2, w2, z3, w3 = hks_52_branch(z1, w1)
    r2 = z2 / w2
    jac2 = 1.0 + r2 + (w3 / (2.0 * z3)) * r2
    # evaluated in log space: the individual factors under- and overflow
    # near the endpoints even though the product stays bounded
    log_val = (
        0.5 * (math.log(z1) + math.log(z2) + math.log(z3))
        - (2.0 / 3.0) * (math.log(w1) + math.log(w2) + math.log(w3))
        + math.log(w3)
        - math.log(2.0 * z3)
        - math.log(jac2)
        - math.log(z1)
    )
    return math.exp(log_val)


def hks_52(tol: float = 1e-10) -> QuadratureResult:
    """The 5_2 state-integral constant via the one-dimensional reduction."""
    qr = tanh_sinh(lambda z1, da, db: hks_52_integrand(z1, db), 0.0, 1.0, tol=tol, max_level=10)
    meta = dict(qr.meta)
    meta["curve"] = "one-dimensional reduction over z1 in (0, 1)"
    return QuadratureResult(qr.value, qr.abs_error_estimate, qr.evaluations, meta)


# ----------------------------------------------------------------------
# Fourier transform identity for the Gamma function
# ----------------------------------------------------------------------


def fourier_gamma_quadrature(a: float, x: float, tol: float = 1e-12) -> QuadratureResult:
    """Quadrature of the Fourier-Laplace kernel exp(2 pi i x s + a s - e^s)."""
    if a <= 0:
        raise ValueError("a must be positive")
    # decay e^{a s} on the left, double-exponential on the right
    left = max(50.0, 45.0 / a)
    right = 6.0
    center = 0.5 * (right - left)
    half = 0.5 * (right + left)

    def f(s: float) -> complex:
        return cmath.exp(complex(a * s - math.exp(s), 2.0 * math.pi * x * s))

    return trapezoid_line(f, half_width=half, h0=0.5, tol=tol, max_halvings=8, center=center)


def fourier_gamma_check(a: float, x: float, tol: float = 1e-12) -> float:
    """Residual between the Fourier-Laplace quadrature and Gamma(a + 2 pi i x)."""
    qr = fourier_gamma_quadrature(a, x, tol=tol)
    return abs(qr.value - gamma_complex(complex(a, 2.0 * math.pi * x)))


# ----------------------------------------------------------------------
# General edge state-integrand
# ----------------------------------------------------------------------


def g_weight(t: float, u: SignedLog) -> complex:
    """Single-letter edge factor i^{eps_u} Gamma_{eps_u}(t - i ell_u), t > 0."""
    if t <= 0:
        raise RegimeError("edge factor requires a strictly positive real angle part")
    return (1j ** u.eps) * gamma_n(u.eps, complex(t, -u.ell))


def edge_state_integrand(
    abar: Sequence[Sequence[int]],
    bbar: Sequence[Sequence[int]],
    cbar: Sequence[Sequence[int]],
    theta: Sequence[RealAngleTriple],
    x: Sequence[SignedLog],
    signs: Optional[Sequence[int]] = None,
) -> Tuple[complex, complex]:
    """Edge state-integrand driven by the shape-occurrence matrices.

    ``abar``, ``bbar``, ``cbar`` are the edge-by-tetrahedron occurrence
    counts of the three shape slots; ``theta`` holds one angle triple per
    tetrahedron and ``x`` one signed-log edge variable per edge.  Returns
    the pair (value, phase): the product over tetrahedra of
    sqrt(2 pi) G_a(x^(B-C)_j) G_b(x^(C-A)_j) G_c(x^(A-B)_j), and the
    dropped unit-modulus pairing product, which equals 1 whenever the
    multiplicative angle parts are edge-balanced.  Negatively oriented
    tetrahedra (signs[j] < 0) contribute conjugated factors.
    """
    nedges = len(abar)
    ntets = len(theta)
    if signs is None:
        signs = [1] * ntets
    if len(x) != nedges:
        raise ValueError("need one edge variable per edge")
    for t in theta:
        t.require_regime()

    def col(m: Sequence[Sequence[int]], j: int) -> List[int]:
        return [m[i][j] for i in range(nedges)]

    value = 1.0 + 0.0j
    phase = 1.0 + 0.0j
    for j, t in enumerate(theta):
        ca = col(abar, j)
        cb = col(bbar, j)
        cc = col(cbar, j)
        xa = monomial(x, [cb[i] - cc[i] for i in range(nedges)])
        xb = monomial(x, [cc[i] - ca[i] for i in range(nedges)])
        xc = monomial(x, [ca[i] - cb[i] for i in range(nedges)])
        w = SQRT_TWO_PI * g_weight(t.adot, xa) * g_weight(t.bdot, xb) * g_weight(t.cdot, xc)
        ph = (
            pairing(SignedLog.from_real(-t.addot), monomial(x, ca))
            * pairing(SignedLog.from_real(-t.bddot), monomial(x, cb))
            * pairing(SignedLog.from_real(-t.cddot), monomial(x, cc))
        )
        if signs[j] < 0:
            w = w.conjugate()
            ph = ph.conjugate()
        value *= w
        phase *= ph
    return value, phase
