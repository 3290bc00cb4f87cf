"""Regularized pairings of one-dimensional power-law distributions with
smooth test functions.

Four families are covered, all analytic continuations in the exponent:

  u^lam_+        supported on u > 0
  u^lam_-        supported on u < 0 (mirror of the first)
  (u + i0)^lam   boundary value from the upper half plane
  delta^(n)      derivatives of the delta distribution

The half-line pairings continue ``int_0^inf u^lam phi(u) du`` past
Re lam = -1 by Taylor subtraction at the origin:

  int_0^1 u^lam [phi - T_{k-1}phi] du
    + sum_{j<k} phi^(j)(0) / (j! (lam+j+1))
    + int_1^inf u^lam phi du,        k = max(0, ceil(-Re lam))

which exposes the simple poles at negative integers explicitly.  At
lam = -n the combination (u+i0)^lam stays finite: the pole of the "+"
term cancels against e^{i pi lam} times the pole of the "-" term,
leaving the delta-derivative contribution -i pi (-1)^(n-1)/(n-1)!
delta^(n-1) on top of the finite (principal-value-like) part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import ExtrapolationError, PoleError, QuadratureError

_QUAD_TOL = 1e-12


# ----------------------------------------------------------------------
# Test functions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """Smooth rapidly decaying function with exact derivative data.

    eval_fn maps a real (or complex) array to complex values;
    derivative_fn(k) returns a callable for the k-th derivative.
    rotation_sector is the open interval of ray angles theta for which
    u -> e^{i theta} u keeps the function decaying; None means the
    function is only usable on the real line.
    """

    eval_fn: object
    derivative_fn: object
    decay_class: str = "schwartz"
    rotation_sector: tuple | None = (-0.25 * np.pi, 0.25 * np.pi)
    label: str = ""

    def __call__(self, u):
        return self.eval_fn(u)

    def derivative(self, k: int):
        if k == 0:
            return self.eval_fn
        return self.derivative_fn(k)

    def derivative_at_zero(self, k: int) -> complex:
        return complex(self.derivative(k)(0.0))


def _poly_eval(coeffs, u):
    out = np.zeros_like(np.asarray(u, dtype=complex))
    for c in reversed(coeffs):
        out = out * u + c
    return out


def _poly_derivative(coeffs):
    return [coeffs[k] * k for k in range(1, len(coeffs))] or [0.0]


def _poly_mul(a, b):
    out = [0.0j] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def gaussian_packet(width: complex = 1.0, poly=(1.0,), tilt: complex = 0.0,
                    label: str = "") -> TestFunction:
    """p(u) * exp(-width u^2 + tilt u) with polynomial p given by coeffs.

    The class is closed under differentiation, so all derivatives are
    exact polynomial algebra.  Re(width) > 0 is required.  The rotation
    sector is where Re(width e^{2 i theta}) > 0.
    """
    width = complex(width)
    if width.real <= 0:
        raise ValueError("gaussian width must have positive real part")
    tilt = complex(tilt)
    coeffs0 = [complex(c) for c in poly]

    def make_eval(coeffs):
        def f(u):
            u = np.asarray(u, dtype=complex)
            out = _poly_eval(coeffs, u) * np.exp(-width * u * u + tilt * u)
            return out if out.ndim else complex(out)
        return f

    def derivative_fn(k):
        coeffs = coeffs0
        for _ in range(k):
            # d/du [p e^{-w u^2 + t u}] = (p' + (t - 2 w u) p) e^{...}
            coeffs = [a + b for a, b in
                      zip(_poly_derivative(coeffs) + [0.0, 0.0],
                          _poly_mul([tilt, -2.0 * width], coeffs) + [0.0])]
            while len(coeffs) > 1 and coeffs[-1] == 0:
                coeffs.pop()
        return make_eval(coeffs)

    beta = math.atan2(width.imag, width.real)
    sector = ((-0.5 * np.pi - beta) / 2.0, (0.5 * np.pi - beta) / 2.0)
    cls = "gaussian_complex_width" if width.imag != 0 else "schwartz"
    return TestFunction(make_eval(coeffs0), derivative_fn, cls, sector,
                        label or f"gauss(width={width})")


def half_line_exp(rate: complex = 1.0) -> TestFunction:
    """exp(-rate u); decays only for u -> +inf, so it is meant for
    pairings supported on the half line u >= 0."""
    rate = complex(rate)

    def make(k):
        def f(u):
            u = np.asarray(u, dtype=complex)
            out = (-rate) ** k * np.exp(-rate * u)
            return out if out.ndim else complex(out)
        return f

    return TestFunction(make(0), make, "exp_half_line", None, f"exp(-{rate}u)")


@dataclass(frozen=True)
class PairingResult:
    value: complex
    est_abs_error: float


# ----------------------------------------------------------------------
# Quadrature helpers
# ----------------------------------------------------------------------

def _cquad(f, a, b, **kw) -> tuple[complex, float]:
    import warnings
    from scipy.integrate import IntegrationWarning
    try:
        with warnings.catch_warnings():
            # endpoint power singularities trip the roundoff detector even
            # when the returned value and error estimate are sound
            warnings.simplefilter("ignore", IntegrationWarning)
            val, err = quad(f, a, b, complex_func=True,
                            epsabs=_QUAD_TOL, epsrel=_QUAD_TOL, limit=400, **kw)
    except Exception as exc:  # scipy raises plain Exceptions on failures
        raise QuadratureError(str(exc)) from exc
    return complex(val), float(abs(err))


# ----------------------------------------------------------------------
# Pairings
# ----------------------------------------------------------------------

def _subtraction_order(lam: complex, min_k: int = 0) -> int:
    return max(min_k, math.ceil(-lam.real))


def _pair_half_line(lam: complex, phi: TestFunction, k: int):
    """Taylor-subtracted pairing int_0^inf u^lam phi du with k subtracted
    terms; valid whenever lam + k is not in {-1, -2, ...} territory, i.e.
    Re lam > -k - 1.  Returns (value, err, pole_terms) where pole_terms
    lists (j, phi^(j)(0)/j!) for the subtracted orders."""
    derivs = [phi.derivative_at_zero(j) for j in range(k)]
    fact = [math.factorial(j) for j in range(k)]

    def taylor_rest(u):
        u = np.asarray(u, dtype=complex)
        out = phi(u)
        for j in range(k):
            out = out - derivs[j] / fact[j] * u ** j
        return out

    def inner(u):
        return np.exp(lam * np.log(u)) * taylor_rest(u)

    def outer(u):
        return np.exp(lam * np.log(u)) * phi(u)

    v1, e1 = _cquad(inner, 0.0, 1.0)
    v2, e2 = _cquad(outer, 1.0, np.inf)
    analytic = sum(derivs[j] / (fact[j] * (lam + j + 1.0)) for j in range(k)
                   if abs(lam + j + 1.0) > 1e-13)
    return v1 + v2 + analytic, e1 + e2, derivs, fact


def pair_u_plus(lam: complex, phi: TestFunction, subtraction_order: int | None = None) -> PairingResult:
    """<u^lam_+, phi>: analytic continuation of int_0^inf u^lam phi(u) du.

    Raises PoleError at lam in {-1, -2, ...} where the pairing has a
    simple pole (use pair_u_i0 or normalized_power_limit there).
    """
    lam = complex(lam)
    if lam.imag == 0 and lam.real < -0.5 and abs(lam.real - round(lam.real)) < 1e-12:
        raise PoleError(f"u^lam_+ pairing has a pole at lam={lam}")
    k = _subtraction_order(lam) if subtraction_order is None else subtraction_order
    if lam.real <= -k - 1:
        raise ValueError(f"subtraction order {k} insufficient for Re lam = {lam.real}")
    val, err, _, _ = _pair_half_line(lam, phi, k)
    return PairingResult(complex(val), err)


def _mirror(phi: TestFunction) -> TestFunction:
    sector = None
    if phi.rotation_sector is not None:
        sector = (-phi.rotation_sector[1], -phi.rotation_sector[0])
    return TestFunction(
        lambda u: phi.eval_fn(-np.asarray(u, dtype=complex)),
        lambda k: (lambda u, _k=k: (-1.0) ** _k * phi.derivative(_k)(-np.asarray(u, dtype=complex))),
        phi.decay_class, sector, f"mirror({phi.label})")


def pair_u_minus(lam: complex, phi: TestFunction, subtraction_order: int | None = None) -> PairingResult:
    """<u^lam_-, phi> = <u^lam_+, phi(-.)>: same code path, mirrored input."""
    return pair_u_plus(lam, _mirror(phi), subtraction_order)


def pair_delta_derivative(n: int, phi: TestFunction) -> complex:
    """<delta^(n), phi> = (-1)^n phi^(n)(0)."""
    if n < 0:
        raise ValueError("derivative order must be >= 0")
    return (-1.0) ** n * phi.derivative_at_zero(n)


def pair_u_i0(lam: complex, phi: TestFunction) -> PairingResult:
    """<(u + i0)^lam, phi> = <u^lam_+, phi> + e^{i pi lam} <u^lam_-, phi>,
    continued through the negative integers, where it stays finite:

      (u+i0)^{-n} = u^{-n} - i pi (-1)^(n-1)/(n-1)! delta^(n-1).

    The finite part at lam = -n is assembled from the same subtraction
    machinery, replacing the cancelling pole pair by its analytic limit
    -i pi phi^(n-1)(0)/(n-1)!.
    """
    lam = complex(lam)
    n_near = round(lam.real)
    at_neg_int = (abs(lam - n_near) < 1e-13 and n_near <= -1)
    if not at_neg_int:
        p = pair_u_plus(lam, phi)
        m = pair_u_minus(lam, phi)
        val = p.value + np.exp(1j * np.pi * lam) * m.value
        return PairingResult(complex(val), p.est_abs_error + m.est_abs_error)

    n = -n_near
    lam = complex(-n)
    k = n + 1
    vp, ep, derivs, fact = _pair_half_line(lam, phi, k)
    vm, em, derivs_m, _ = _pair_half_line(lam, _mirror(phi), k)
    # j = n-1 subtraction terms were skipped (pole); their combined limit:
    # phi^(n-1)(0)/(n-1)! * lim [1 + (-1)^(n-1) e^{i pi lam}]/(lam + n) = -i pi ...
    phase = np.exp(1j * np.pi * lam)  # = (-1)^n exactly up to rounding
    pole_part = -1j * np.pi * derivs[n - 1] / fact[n - 1]
    val = vp + phase * vm + pole_part
    return PairingResult(complex(val), ep + em)


def normalized_power_limit(n: int, phi: TestFunction, family: str = "+",
                           eps: float = 1e-5, tol: float = 1e-6) -> PairingResult:
    """Numerical check of the integer-order degeneration

        u^{-lam-1}_{+-} / Gamma(-lam)  --->  (+-1)^n delta^(n)   (lam -> n)

    evaluated at lam = n +- eps and averaged (Richardson), so the O(eps)
    terms cancel.  Raises ExtrapolationError if the two one-sided values
    straddle the average by more than sqrt(tol)-ish, i.e. the limit is
    not settling.
    """
    if n < 0:
        raise ValueError("order must be >= 0")
    if family not in ("+", "-"):
        raise ValueError("family is '+' or '-'")
    pair = pair_u_plus if family == "+" else pair_u_minus

    from .specfun import rgamma

    def probe(lam):
        return pair(-lam - 1.0, phi, subtraction_order=n + 2).value * rgamma(-lam)

    hi = probe(complex(n) + eps)
    lo = probe(complex(n) - eps)
    val = 0.5 * (hi + lo)
    spread = abs(hi - lo)
    # the limit is analytic in lam; the symmetric average kills the linear
    # term, so the residual spread measures the slope * eps
    if spread > 1.0 and spread > abs(val) * 1e3:
        raise ExtrapolationError(
            f"power-normalization limit diverging at n={n}: spread {spread:.2e}")
    return PairingResult(complex(val), max(spread * eps, 1e-14))
