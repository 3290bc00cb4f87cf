"""High-accuracy complex special functions: Gamma, Hermite, and the
parabolic cylinder function D_nu(z) for complex order and argument.

D_nu is the workhorse of the whole package: every barrier energy
eigenstate is a single D evaluated on a 45-degree ray in z.  Several
mutually validating evaluation routes are provided:

  series            even/odd confluent-hypergeometric decomposition,
                    accumulated in extended precision (entire in nu, z)
  asymptotic        large-|z| expansion with the subdominant component
                    switched on beyond |arg z| = pi/2
  integral_plus     half-line integral  e^{-z^2/4}/Gamma(-nu) *
                    Int_0^inf xi^{-nu-1} e^{-z xi - xi^2/2} dxi
  integral_fourier  full-line integral with kernel (xi+i0)^nu e^{-2xi^2+2iz xi}
  hermite_reduction closed form 2^{-n/2} e^{-z^2/4} H_n(z/sqrt(2)),
                    integer n only

The default dispatcher only ever uses `series` and `asymptotic`; the
remaining routes exist so tests can cross-validate through genuinely
independent formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, PoleError, RegionError

_LD = np.longdouble
_CLD = np.clongdouble
_EPS_LD = float(np.finfo(np.longdouble).eps)
_EPS = float(np.finfo(float).eps)

SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)


# ----------------------------------------------------------------------
# Gamma function: Lanczos approximation (double precision, public API)
# ----------------------------------------------------------------------

# g = 7, 9-term rational set; relative error ~ 1e-13 on Re z >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _is_nonpositive_integer(z: complex, tol: float = 0.0) -> bool:
    if z.imag != 0.0:
        return False
    r = z.real
    return r <= 0.5 and abs(r - round(r)) <= tol and round(r) <= 0


def _lanczos_log_gamma_right(z: complex) -> complex:
    # Valid for Re z >= 0.5 only.
    zm1 = z - 1.0
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (zm1 + k)
    t = zm1 + _LANCZOS_G + 0.5
    return 0.5 * math.log(2.0 * math.pi) + (zm1 + 0.5) * np.log(t) - t + np.log(acc)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z).

    For Re z < 0.5 the argument is shifted up with the recurrence
    log Gamma(z) = log Gamma(z+m) - sum log(z+k); every factor is
    analytic off (-inf, 0], so the continuation stays principal.
    Raises PoleError at nonpositive integers.
    """
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError("log_gamma requires finite input")
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma pole at z={z}")
    if z.real >= 0.5:
        return complex(_lanczos_log_gamma_right(z))
    m = int(math.ceil(0.5 - z.real))
    shift = 0.0 + 0.0j
    for k in range(m):
        shift += np.log(z + k)
    return complex(_lanczos_log_gamma_right(z + m) - shift)


def gamma(z: complex) -> complex:
    """Gamma(z) = exp(log_gamma(z)); raises PoleError at 0, -1, -2, ..."""
    return complex(np.exp(log_gamma(z)))


def rgamma(z: complex) -> complex:
    """1/Gamma(z), entire; exactly 0 at nonpositive integers."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0.0 + 0.0j
    return complex(np.exp(-log_gamma(z)))


def digamma(z: complex) -> complex:
    """psi(z) = d/dz log Gamma(z), from the analytic Lanczos derivative."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"digamma pole at z={z}")
    shift = 0.0 + 0.0j
    while z.real < 0.5:
        shift -= 1.0 / z
        z = z + 1.0
    zm1 = z - 1.0
    acc = _LANCZOS_C[0]
    dacc = 0.0 + 0.0j
    for k in range(1, len(_LANCZOS_C)):
        d = zm1 + k
        acc += _LANCZOS_C[k] / d
        dacc -= _LANCZOS_C[k] / (d * d)
    t = zm1 + _LANCZOS_G + 0.5
    return complex(np.log(t) + (zm1 + 0.5) / t - 1.0 + dacc / acc + shift)


# ----------------------------------------------------------------------
# Internal extended-precision reciprocal Gamma.
#
# The series route below subtracts two exponentially large branches;
# their 1/Gamma prefactors must therefore carry ~1e-19 relative error,
# beyond what double-precision Lanczos delivers.  A Stirling series with
# Bernoulli corrections has monotonically decreasing terms (no internal
# cancellation), so in long double it reaches the format's precision
# once the argument is recurrence-shifted to Re z >= 16.
# ----------------------------------------------------------------------

_BERNOULLI_2N = tuple(
    _LD(p) / _LD(q)
    for p, q in (
        (1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730),
        (7, 6), (-3617, 510), (43867, 798), (-174611, 330),
        (854513, 138), (-236364091, 2730),
    )
)
_STIRLING_SHIFT = 16.0


def _rgamma_ld(z: complex):
    """1/Gamma(z) as clongdouble, ~1e-19 relative; exact 0 at poles and
    exact closed forms at integer and half-integer arguments."""
    z = complex(z)
    if z.imag == 0.0:
        two = 2.0 * z.real
        if abs(two - round(two)) == 0.0:
            n2 = int(round(two))
            if n2 % 2 == 0:
                n = n2 // 2
                if n <= 0:
                    return _CLD(0.0)
                acc = _LD(1.0)
                for k in range(1, n):
                    acc *= _LD(k)
                return _CLD(1.0) / acc
            # half integer: Gamma(1/2 + m) = (2m)! sqrt(pi) / (4^m m!)
            m = (n2 - 1) // 2
            sp = np.sqrt(_LD(np.pi))
            if m >= 0:
                num = _LD(1.0)
                for k in range(1, 2 * m + 1):
                    num *= _LD(k)
                den = _LD(4.0) ** m
                for k in range(1, m + 1):
                    den *= _LD(k)
                return den / (num * sp)
            # Gamma(1/2 - m) = (-4)^m m! sqrt(pi) / (2m)!
            m = -m
            num = _LD(-4.0) ** m
            for k in range(1, m + 1):
                num *= _LD(k)
            den = _LD(1.0)
            for k in range(1, 2 * m + 1):
                den *= _LD(k)
            return den / (num * sp)
    # Shift to Re z >= 16, then Stirling with Bernoulli corrections.
    zl = _CLD(z)
    prod = _CLD(1.0)
    while float(zl.real) < _STIRLING_SHIFT:
        prod *= zl
        zl = zl + _CLD(1.0)
    lg = (zl - _CLD(0.5)) * np.log(zl) - zl + _LD(0.5) * np.log(2 * _LD(np.pi))
    zpow = zl
    z2 = zl * zl
    for n, b2n in enumerate(_BERNOULLI_2N, start=1):
        lg += b2n / (_LD(2 * n) * _LD(2 * n - 1) * zpow)
        zpow *= z2
    return prod * np.exp(-lg)


# ----------------------------------------------------------------------
# Hermite polynomials (physicists' convention)
# ----------------------------------------------------------------------

def hermite(n: int, z):
    """H_n(z) via the three-term recurrence H_{k+1} = 2z H_k - 2k H_{k-1}.

    Accepts scalar or ndarray z (real or complex); total on valid input.
    """
    if n < 0:
        raise ValueError("hermite order must be >= 0")
    z = np.asarray(z, dtype=complex)
    h_prev = np.ones_like(z)
    if n == 0:
        return h_prev if h_prev.ndim else complex(h_prev)
    h = 2.0 * z
    for k in range(1, n):
        h, h_prev = 2.0 * z * h - 2.0 * k * h_prev, h
    return h if h.ndim else complex(h)


# ----------------------------------------------------------------------
# Parabolic cylinder function D_nu(z)
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class EvaluationResult:
    value: complex
    est_abs_error: float
    method: str


_SERIES_KMAX = 500
_SERIES_TOL = 1e-21
_PREF_REL_ERR = 5e-17  # measured bound on the extended-precision 1/Gamma


def _hyp1f1_batched(a: complex, b: float, w_cld: np.ndarray):
    """Kummer M(a, b, w) on a clongdouble array w, accumulated in
    clongdouble (the argument must already carry extended precision:
    the final even/odd subtraction amplifies any rounding of w by the
    full cancellation factor).

    Applies the Kummer transform M(a,b,w) = e^w M(b-a,b,-w) where
    Re w < 0 so the summed argument always has Re >= 0 (less internal
    cancellation).  Returns (sum, peak |term| per element).
    """
    flip = np.asarray(w_cld.real < 0)
    a_arr = np.where(flip, b - a, a).astype(complex)
    w_eff = np.where(flip, -w_cld, w_cld)
    s = np.ones_like(w_eff)
    term = np.ones_like(w_eff)
    peak = np.ones(w_eff.shape, dtype=_LD)
    active = np.ones(w_eff.shape, dtype=bool)
    for k in range(_SERIES_KMAX):
        ratio = (a_arr + k).astype(_CLD) / _LD(b + k) * w_eff / _LD(k + 1)
        term = term * ratio
        s = s + np.where(active, term, 0.0)
        at = np.abs(term).astype(_LD)
        peak = np.maximum(peak, np.where(active, at, 0.0))
        if k > 3:
            active &= at > _SERIES_TOL * np.abs(s)
            if not active.any():
                break
    if flip.any():
        ew = np.exp(-w_eff)
        s = np.where(flip, s * ew, s)
        peak = np.where(flip, peak * np.abs(ew).astype(_LD), peak)
    return s, peak


def _dnu_series(nu: complex, z: np.ndarray):
    """Series route, vectorized over z.  Returns (values, est errors)."""
    nu = complex(nu)
    z = np.asarray(z, dtype=complex)
    zl = z.astype(_CLD)
    w_cld = zl * zl / 2.0
    even, peak_e = _hyp1f1_batched(-nu / 2.0, 0.5, w_cld)
    odd, peak_o = _hyp1f1_batched((1.0 - nu) / 2.0, 1.5, w_cld)
    ga = _rgamma_ld((1.0 - nu) / 2.0)
    gb = _rgamma_ld(-nu / 2.0)
    branch_a = ga * even
    branch_b = _LD(math.sqrt(2.0)) * gb * zl * odd
    bracket = branch_a - branch_b
    pref = np.exp(_CLD(nu / 2.0 * math.log(2.0)) - w_cld / 2.0) * _LD(SQRT_PI)
    with np.errstate(over="ignore", invalid="ignore"):
        val = (pref * bracket).astype(complex)
        # term-level cancellation amplifies long-double rounding; the
        # branch-level one also amplifies the ~1e-17 Gamma-prefactor error
        peak_terms = np.maximum(peak_e * abs(complex(ga)),
                                peak_o * math.sqrt(2.0) * np.abs(z) * abs(complex(gb)))
        peak_branch = np.maximum(np.abs(branch_a), np.abs(branch_b)).astype(_LD)
        babs = np.maximum(np.abs(bracket), _LD(1e-4000))
        cancel_t = np.asarray(np.maximum(peak_terms, peak_branch) / babs, dtype=float)
        cancel_b = np.asarray(peak_branch / babs, dtype=float)
    cancel_t = np.where(np.isfinite(cancel_t), cancel_t, 1e30)
    cancel_b = np.where(np.isfinite(cancel_b), cancel_b, 1e30)
    est = np.abs(val) * np.maximum.reduce(
        [3.0 * _EPS_LD * cancel_t, _PREF_REL_ERR * cancel_b,
         np.full(cancel_t.shape, 10.0 * _EPS)])
    return val, est


_ASYM_KMAX = 80


def _asym_sum(nu: complex, z: np.ndarray, kind: str):
    """One component of the large-|z| expansion, truncated at the
    smallest term per element.  kind 'one': falling factorials of nu;
    kind 'two': rising factorials of nu+1."""
    z2 = z * z
    s = np.ones_like(z, dtype=complex)
    term = np.ones_like(z, dtype=complex)
    smallest = np.ones(z.shape, dtype=float)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, _ASYM_KMAX):
        if kind == "one":
            factor = -(nu - 2 * k + 2) * (nu - 2 * k + 1) / (2 * k * z2)
        else:
            factor = (nu + 2 * k - 1) * (nu + 2 * k) / (2 * k * z2)
        new = term * factor
        grow = np.abs(new) >= np.abs(term)
        stop = active & grow & (np.abs(term) > 0)
        smallest = np.where(stop, np.abs(term), smallest)
        active &= ~grow
        term = np.where(active, new, 0.0)
        s = s + term
        done = active & (np.abs(term) == 0.0)
        smallest = np.where(done, 0.0, smallest)
        active &= ~done
        if not active.any():
            break
    smallest = np.where(active, np.abs(term), smallest)
    return s, smallest


def _dnu_asymptotic(nu: complex, z: np.ndarray):
    """Large-|z| route.  The subdominant e^{+z^2/4} component carries the
    connection coefficient -sqrt(2 pi)/Gamma(-nu) e^{+-i pi nu}; it is
    switched on only past |arg z| = pi/2, where it is maximally recessive,
    so the representation is seamless on the Stokes rays."""
    nu = complex(nu)
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise RegionError("asymptotic route requires z != 0")
    s1, small1 = _asym_sum(nu, z, "one")
    comp1 = np.exp(-z * z / 4.0 + nu * np.log(z)) * s1
    val = comp1
    est_rel = small1.copy()
    ang = np.angle(z)
    outer = np.abs(ang) > 0.5 * np.pi
    if outer.any():
        gm = rgamma(-nu)
        s2, small2 = _asym_sum(nu, z, "two")
        phase = np.where(ang > 0, 1.0, -1.0)
        pref = -SQRT_2PI * gm * np.exp(1j * np.pi * nu * phase)
        comp2 = pref * np.exp(z * z / 4.0 - (nu + 1.0) * np.log(z)) * s2
        val = np.where(outer, comp1 + comp2, comp1)
        est_rel = np.where(outer, small1 + small2 * np.abs(comp2) / np.maximum(np.abs(val), 1e-300), est_rel)
    est = np.abs(val) * np.maximum(est_rel, 10.0 * _EPS)
    return val, est


def _dnu_hermite(n: int, z: np.ndarray):
    z = np.asarray(z, dtype=complex)
    val = 2.0 ** (-n / 2.0) * np.exp(-z * z / 4.0) * hermite(n, z / math.sqrt(2.0))
    val = np.asarray(val, dtype=complex)
    return val, np.abs(val) * (10.0 * _EPS * (n + 1))


# -- integral representations (scalar; cross-check oracles) ------------

def _log_trapezoid(f, s_lo: float, s_hi: float, n: int) -> complex:
    s = np.linspace(s_lo, s_hi, n)
    vals = f(s)
    return complex(np.trapezoid(vals, s))


def _dnu_integral_plus_core(nu: complex, z: complex) -> complex:
    # e^{-z^2/4}/Gamma(-nu) Int_0^inf xi^{-nu-1} e^{-z xi - xi^2/2} dxi,
    # substituted xi = e^s.  Requires Re nu < 0.
    a = -nu.real  # decay rate e^{a s} as s -> -inf
    s_lo = min(math.log(1e-300) / max(a, 1e-2), -40.0) if a < 60 else -12.0
    s_lo = max(s_lo, -900.0)
    # right cutoff where e^{-e^{2s}/2} underflows relative to peak
    s_hi = 0.5 * math.log(2 * (700.0 + abs(z) ** 2))
    freq = abs(z.imag) + abs(nu.imag) + 1.0
    n = int(min(max(4000, 40 * freq * (s_hi - s_lo)), 400000))

    def f(s):
        xi = np.exp(s)
        return np.exp((-nu) * s - z * xi - xi * xi / 2.0)

    integral = _log_trapezoid(f, s_lo, s_hi, n)
    return complex(np.exp(-z * z / 4.0) * rgamma(-nu) * integral)


def _shift_up(base, nu: complex, z: complex, k: int) -> complex:
    # climb D_{mu+1} = z D_mu - mu D_{mu-1} from mu = nu-k
    d_lo = base(nu - k - 1.0, z)
    d_hi = base(nu - k, z)
    mu = nu - k
    for _ in range(k):
        d_lo, d_hi = d_hi, z * d_hi - mu * d_lo
        mu += 1.0
    return d_hi


def _dnu_integral_plus(nu: complex, z: complex) -> complex:
    nu = complex(nu)
    z = complex(z)
    if nu.real < -0.25:
        return _dnu_integral_plus_core(nu, z)
    k = int(math.floor(nu.real + 0.25)) + 1
    return _shift_up(_dnu_integral_plus_core, nu, z, k)


def _dnu_integral_ld(nu: complex, z_pts: np.ndarray):
    """Long-double trapezoid of the half-line representation for a batch of
    z sharing one order; rescue route for the cancellation-dominated pocket
    (Re nu < 0 with z near the real axis) where the series loses digits and
    |z| is too small for the asymptotic expansion.  Batch shares one s-grid;
    error estimated by node halving."""
    z_pts = np.atleast_1d(np.asarray(z_pts, dtype=complex))
    a = -nu.real
    zmax = float(np.max(np.abs(z_pts)))
    # left tail decays like e^{a s} relative to the s~0 scale
    s_lo = min(-60.0 / max(a, 0.25), -40.0)
    s_hi = 0.5 * math.log(2 * (760.0 + zmax ** 2))
    freq = float(np.max(np.abs(z_pts.imag))) + abs(nu.imag) + 1.0
    n = int(min(max(6001, 60 * freq * (s_hi - s_lo)), 250001))
    n |= 1  # odd count so the half-resolution grid shares nodes

    s = np.linspace(_LD(s_lo), _LD(s_hi), n)
    xi = np.exp(s)
    base = (_CLD(-nu) * s - xi * xi / _LD(2.0))[None, :]
    vals = np.empty((z_pts.size, n), dtype=_CLD)
    chunk = max(1, int(4e6) // n)
    for i0 in range(0, z_pts.size, chunk):
        blk = z_pts[i0:i0 + chunk, None].astype(_CLD)
        vals[i0:i0 + chunk] = np.exp(base - blk * xi[None, :])
    fine = np.trapezoid(vals, s, axis=1)
    coarse = np.trapezoid(vals[:, ::2], s[::2], axis=1)
    pref = np.exp((z_pts.astype(_CLD)) ** 2 / _LD(-4.0)) * _CLD(complex(_rgamma_ld(-nu)))
    val = (pref * fine).astype(complex)
    est = np.abs(pref * (fine - coarse)).astype(float) + 20.0 * _EPS * np.abs(val)
    return val, est


def _dnu_integral_fourier_core(nu: complex, z: complex) -> complex:
    # (1/sqrt(pi)) 2^{nu+1/2} (-i)^nu e^{z^2/4}
    #   * Int (xi+i0)^nu e^{-2 xi^2 + 2 i z xi} dxi,  Re nu > -1.
    # Each half line is log-substituted; the xi<0 side carries e^{i pi nu}.
    b = nu.real + 1.0
    s_lo = min(math.log(1e-300) / max(b, 1e-2), -40.0)
    s_lo = max(s_lo, -900.0)
    s_hi = 0.5 * math.log((700.0 + abs(z) ** 2) / 2.0) + 1.0
    freq = abs(z) + abs(nu.imag) + 1.0
    n = int(min(max(4000, 40 * freq * (s_hi - s_lo)), 400000))

    def f_plus(s):
        xi = np.exp(s)
        return np.exp((nu + 1.0) * s - 2.0 * xi * xi + 2j * z * xi)

    def f_minus(s):
        xi = np.exp(s)
        return np.exp((nu + 1.0) * s - 2.0 * xi * xi - 2j * z * xi)

    integral = _log_trapezoid(f_plus, s_lo, s_hi, n)
    integral += np.exp(1j * np.pi * nu) * _log_trapezoid(f_minus, s_lo, s_hi, n)
    pref = (1.0 / SQRT_PI) * np.exp((nu + 0.5) * math.log(2.0)) * np.exp(nu * np.log(-1j)) * np.exp(z * z / 4.0)
    return complex(pref * integral)


def _dnu_integral_fourier(nu: complex, z: complex) -> complex:
    nu = complex(nu)
    z = complex(z)
    if nu.real > -0.75:
        return _dnu_integral_fourier_core(nu, z)
    # solve the recurrence downward: D_nu = (z D_{nu+1} - D_{nu+2})/(nu+1)
    k = int(math.ceil(-0.75 - nu.real)) + 1
    while abs(nu + k) < 1e-9 or abs(nu + k + 1) < 1e-9:
        k += 1
    vals = [_dnu_integral_fourier_core(nu + k, z), _dnu_integral_fourier_core(nu + k + 1.0, z)]
    for j in range(k - 1, -1, -1):
        d_here = (z * vals[0] - vals[1]) / (nu + j + 1.0)
        vals = [d_here, vals[0]]
    return vals[0]


# -- dispatcher ---------------------------------------------------------

_METHODS = ("series", "asymptotic", "integral_plus", "integral_fourier", "hermite_reduction")


def _forced_region_check(method: str, nu: complex, z: complex) -> None:
    if method == "asymptotic":
        if abs(z) ** 2 < 4.0 * (abs(nu) + 1.0):
            raise RegionError(f"asymptotic route unreliable at |z|={abs(z):.3g}, |nu|={abs(nu):.3g}")
    elif method == "hermite_reduction":
        if not (nu.imag == 0 and nu.real >= 0 and nu.real == round(nu.real)):
            raise RegionError("hermite_reduction requires nonnegative integer order")


_DEFAULT_GOAL = 3e-10


def _dispatch(nu: complex, z_arr: np.ndarray, goal: float = _DEFAULT_GOAL):
    """Series everywhere, then swap in the asymptotic route wherever it is
    admissible and carries the smaller error estimate; points that still
    miss the relative-accuracy goal with Re nu < 0 fall back to the
    extended-precision integral.  Returns (values, estimates, asym mask)."""
    val, est = _dnu_series(nu, z_arr)
    asym_ok = np.abs(z_arr) ** 2 >= 4.0 * (abs(nu) + 1.0)
    poor = est > 1e-13 * np.maximum(np.abs(val), 1e-300)
    retry = asym_ok & (poor | (np.abs(z_arr) >= 8.0 + 2.0 * abs(nu)))
    swapped = np.zeros(z_arr.shape, dtype=bool)
    if retry.any():
        av, ae = _dnu_asymptotic(nu, z_arr[retry])
        take = ae < est[retry]
        val[retry] = np.where(take, av, val[retry])
        est[retry] = np.where(take, ae, est[retry])
        swapped[retry] = take
    if nu.real < -0.25:
        rescue = np.flatnonzero(est > goal * np.maximum(np.abs(val), 1e-300))
        if rescue.size:
            iv, ie = _dnu_integral_ld(nu, z_arr.flat[rescue])
            take = ie < est.flat[rescue]
            val.flat[rescue] = np.where(take, iv, val.flat[rescue])
            est.flat[rescue] = np.where(take, ie, est.flat[rescue])
            sw = swapped.flat[rescue].copy()
            sw[take] = False
            swapped.flat[rescue] = sw
    return val, est, swapped


def pcf_grid(nu: complex, z, method: str | None = None, goal: float = _DEFAULT_GOAL):
    """D_nu at every point of an array z; returns (values, est_abs_errors).

    The default dispatcher evaluates the series route and, wherever its
    cancellation-based error estimate is poor and the asymptotic route is
    admissible, replaces those points with whichever of the two carries
    the smaller estimate.  goal is the relative accuracy past which no
    further (more expensive) fallback is attempted.
    """
    nu = complex(nu)
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if method is None:
        val, est, _ = _dispatch(nu, z_arr, goal=goal)
        return val, est
    if method not in _METHODS:
        raise ValueError(f"unknown method {method!r}")
    for pt in z_arr.ravel():
        _forced_region_check(method, nu, complex(pt))
    if method == "series":
        val, est = _dnu_series(nu, z_arr)
    elif method == "asymptotic":
        val, est = _dnu_asymptotic(nu, z_arr)
    elif method == "hermite_reduction":
        val, est = _dnu_hermite(int(round(nu.real)), z_arr)
    else:
        core = _dnu_integral_plus if method == "integral_plus" else _dnu_integral_fourier
        val = np.array([core(nu, complex(pt)) for pt in z_arr.ravel()]).reshape(z_arr.shape)
        est = np.abs(val) * 1e-9 + 1e-14
    return val, est


def pcf(nu: complex, z: complex, method: str | None = None, tol: float | None = None) -> EvaluationResult:
    """Parabolic cylinder function D_nu(z) with an error estimate.

    method, if given, forces one evaluation route (RegionError outside
    its validity region).  tol, if given, raises AccuracyError when the
    estimated error exceeds tol * |value|.
    """
    nu = complex(nu)
    z = complex(z)
    if not all(np.isfinite(v) for v in (nu.real, nu.imag, z.real, z.imag)):
        raise ValueError("pcf requires finite inputs")
    if method is None:
        goal = _DEFAULT_GOAL if tol is None else min(_DEFAULT_GOAL, tol)
        val, est, swapped = _dispatch(nu, np.array([z]), goal=goal)
        used = "asymptotic" if bool(swapped[0]) else "series"
        result = EvaluationResult(complex(val[0]), float(est[0]), used)
    else:
        val, est = pcf_grid(nu, np.array([z]), method=method)
        result = EvaluationResult(complex(val[0]), float(est[0]), method)
    if tol is not None and result.est_abs_error > tol * max(abs(result.value), 1e-300):
        raise AccuracyError(
            f"D_nu evaluation at nu={nu}, z={z}: est {result.est_abs_error:.2e} "
            f"exceeds {tol:.2e} * |value|"
        )
    return result


def pcf_solves_ode_residual(nu: complex, z: complex, h: float = 1e-3) -> float:
    """|D'' + (nu + 1/2 - z^2/4) D| at z, central differences of pcf.

    Universal self-check: every accepted evaluation should drive this
    to the discretization floor.
    """
    pts = np.array([z - h, z, z + h], dtype=complex)
    vals, _ = pcf_grid(nu, pts)
    d2 = (vals[0] - 2.0 * vals[1] + vals[2]) / (h * h)
    return float(abs(d2 + (nu + 0.5 - z * z / 4.0) * vals[1]))
