"""Complex log-Gamma and the Gauss hypergeometric function on z <= 0.

``gauss_2f1`` covers exactly the argument regime the Jacobi-function layer
produces (real z = -sinh^2 x) for parameters a, b = (rho +/- i lambda)/2.
Evaluation picks between the Maclaurin series, the Pfaff transform
2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)), and the w->1 linear
connection formula.  The choice is driven by a digit-loss estimate
(|Im a| + |Im b|) * arcsin(sqrt(arg)): for purely real parameters this
reduces to fixed thresholds at |z| = 0.5 and w = 0.9, while large imaginary
parameters are routed to the connection formula early, which measurement
shows stays near machine precision where the power series lose digits.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, PoleError

# Lanczos rational approximation, g = 7, 9 coefficients.
_LANCZOS_G = 7.0
_LANCZOS_C = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_LOG_SQRT_2PI = 0.91893853320467274178

MAX_SERIES_TERMS = 10000
SERIES_RTOL = 1e-16

# Cap (in natural-log units) on the series cancellation estimate before a
# point is rerouted to the connection formula: e^11.5 ~ 1e5 lost out of 1e16.
_LOSS_CAP = 11.5


def _nonpos_int_mask(z: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    k = np.round(z.real)
    return (np.abs(z.imag) < tol) & (k <= 0) & (np.abs(z.real - k) < tol)


def _near_nonpositive_integer(z: complex, tol: float = 1e-12) -> bool:
    return bool(_nonpos_int_mask(np.asarray(z, dtype=complex), tol))


def log_gamma(z):
    """Principal-branch log of the Gamma function.

    Lanczos approximation for Re z >= 0.5, reflection formula otherwise.
    Accepts scalars or arrays; raises PoleError within 1e-12 of a
    non-positive integer.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)

    pole = _nonpos_int_mask(z)
    if pole.any():
        raise PoleError(f"log_gamma pole at z = {z[pole][0]}")

    refl = z.real < 0.5
    zz = np.where(refl, 1.0 - z, z)
    w = zz - 1.0
    s = np.full_like(zz, _LANCZOS_C[0])
    for j in range(1, len(_LANCZOS_C)):
        s = s + _LANCZOS_C[j] / (w + j)
    t = w + _LANCZOS_G + 0.5
    base = _LOG_SQRT_2PI + (w + 0.5) * np.log(t) - t + np.log(s)
    if refl.any():
        # log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
        refl_val = np.log(np.pi) - np.log(np.sin(np.pi * z)) - base
        out = np.where(refl, refl_val, base)
    else:
        out = base
    return out[0] if scalar else out


def _series_2f1(a, b, c, z, max_terms: int = MAX_SERIES_TERMS) -> np.ndarray:
    """Maclaurin sum of 2F1 with per-point parameters (flat arrays).

    Converged points are compacted out of the working set periodically so
    a few slowly converging arguments do not keep the whole array hot.
    """
    a, b, c, z = map(np.ravel, np.broadcast_arrays(
        np.asarray(a, dtype=complex), np.asarray(b, dtype=complex),
        np.asarray(c, dtype=complex), np.asarray(z, dtype=complex),
    ))
    shape = z.shape
    out = np.ones(shape, dtype=complex)
    if z.size == 0:
        return out
    idx = np.arange(z.size)
    term = np.ones(z.size, dtype=complex)
    total = np.ones(z.size, dtype=complex)
    done_below = SERIES_RTOL ** 2
    k = 0
    while k < max_terms:
        stop = min(k + 16, max_terms)
        while k < stop:
            term = term * ((a + k) * (b + k) / ((c + k) * (k + 1.0))) * z
            total = total + term
            k += 1
        t2 = term.real ** 2 + term.imag ** 2
        s2 = total.real ** 2 + total.imag ** 2
        live = t2 > done_below * s2
        if not live.all():
            out[idx[~live]] = total[~live]
            if not live.any():
                return out.reshape(shape)
            idx = idx[live]
            a, b, c, z = a[live], b[live], c[live], z[live]
            term, total = term[live], total[live]
    raise ConvergenceError(
        f"2F1 series did not converge within {max_terms} terms "
        f"(worst |arg| = {np.abs(z).max():.3g})"
    )


def _terminating_2f1(a, b, c, z, n: int) -> np.ndarray:
    """Finite sum when a is the non-positive integer -n."""
    z = np.asarray(z, dtype=complex)
    term = np.ones(z.shape, dtype=complex)
    total = np.ones(z.shape, dtype=complex)
    for k in range(n):
        term = term * ((a + k) * (b + k) / ((c + k) * (k + 1.0))) * z
        total = total + term
    return total


def _safe_rgamma_log(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(log Gamma(z), pole mask); the log is 0 where z sits on a pole."""
    pole = _nonpos_int_mask(z)
    lz = np.where(pole, 1.0, z)
    return log_gamma(lz), pole


def _connection_2f1(A, B, C, one_minus_w, max_terms: int = MAX_SERIES_TERMS) -> np.ndarray:
    """2F1(A,B;C;w) via the w -> 1 linear connection formula, per point.

    ``one_minus_w`` must be positive real.  A degenerate C-A-B near an
    integer is lifted by perturbing C by 1e-7.  A vanishing reciprocal
    Gamma factor (pole in a denominator Gamma) zeroes its term.
    """
    A, B, C, v = np.broadcast_arrays(
        np.asarray(A, dtype=complex), np.asarray(B, dtype=complex),
        np.asarray(C, dtype=complex), np.asarray(one_minus_w, dtype=float),
    )
    s = C - A - B
    degen = (np.abs(s.imag) < 1e-6) & (np.abs(s.real - np.round(s.real)) < 1e-6)
    C = np.where(degen, C + 1e-7, C)
    s = C - A - B

    f1 = _series_2f1(A, B, A + B - C + 1.0, v, max_terms)
    f2 = _series_2f1(C - A, C - B, s + 1.0, v, max_terms)

    lg_C = log_gamma(C)
    lg_CA, pole_CA = _safe_rgamma_log(C - A)
    lg_CB, pole_CB = _safe_rgamma_log(C - B)
    lg_A, pole_A = _safe_rgamma_log(A)
    lg_B, pole_B = _safe_rgamma_log(B)

    t1 = np.where(pole_CA | pole_CB, 0.0,
                  np.exp(lg_C + log_gamma(s) - lg_CA - lg_CB)) * f1
    t2 = np.where(pole_A | pole_B, 0.0,
                  np.exp(lg_C + log_gamma(-s) - lg_A - lg_B) * np.exp(s * np.log(v))) * f2
    return t1 + t2


def hyp2f1_neg(a, b, c, z, max_terms: int = MAX_SERIES_TERMS) -> np.ndarray:
    """2F1 with per-point parameters, z <= 0 (broadcastable arrays).

    Region selection per point; all points of a region are summed in one
    vectorized series run, which is what makes eigenfunction matrices over
    (lambda, x) products cheap.
    """
    a, b, c, z = np.broadcast_arrays(
        np.asarray(a, dtype=complex), np.asarray(b, dtype=complex),
        np.asarray(c, dtype=complex), np.asarray(z, dtype=float),
    )
    if np.any(z > 0):
        raise ValueError("argument must satisfy z <= 0")
    shape = z.shape
    a, b, c, z = a.ravel(), b.ravel(), c.ravel(), z.ravel()
    out = np.empty(z.shape, dtype=complex)

    w = z / (z - 1.0)
    imag_scale = np.abs(a.imag) + np.abs(b.imag)
    loss_direct = imag_scale * np.arcsin(np.sqrt(np.minimum(np.abs(z), 1.0)))
    loss_pfaff = imag_scale * np.arcsin(np.sqrt(w))

    use_direct = (np.abs(z) <= 0.5) & (loss_direct <= _LOSS_CAP)
    use_pfaff = ~use_direct & (w <= 0.9) & (loss_pfaff <= _LOSS_CAP)
    use_conn = ~use_direct & ~use_pfaff

    if use_direct.any():
        m = use_direct
        out[m] = _series_2f1(a[m], b[m], c[m], z[m], max_terms)
    if use_pfaff.any():
        m = use_pfaff
        pref = np.exp(-a[m] * np.log1p(-z[m]))
        out[m] = pref * _series_2f1(a[m], c[m] - b[m], c[m], w[m], max_terms)
    if use_conn.any():
        m = use_conn
        pref = np.exp(-a[m] * np.log1p(-z[m]))
        one_minus_w = 1.0 / (1.0 - z[m])
        out[m] = pref * _connection_2f1(a[m], c[m] - b[m], c[m], one_minus_w, max_terms)
    return out.reshape(shape)


def gauss_2f1(a, b, c, z, max_terms: int = MAX_SERIES_TERMS):
    """2F1(a, b; c; z) for complex parameters and real argument z <= 0.

    Parameters
    ----------
    a, b, c : complex
        Parameters; c may not be a non-positive integer.
    z : float or ndarray
        Argument(s), all <= 0.

    Returns
    -------
    complex or ndarray of complex, matching the shape of ``z``.
    """
    a = complex(a)
    b = complex(b)
    c = complex(c)
    if _near_nonpositive_integer(c):
        raise PoleError(f"2F1 undefined: c = {c} is a non-positive integer")
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(z > 0):
        raise ValueError("gauss_2f1 supports z <= 0 only")

    # Terminating series: a polynomial in z, valid for any argument size.
    for p, q in ((a, b), (b, a)):
        if _near_nonpositive_integer(p):
            out = _terminating_2f1(p, q, c, z, int(-round(p.real)))
            return out[0] if scalar else out

    # Duplicate arguments (e.g. z = -sinh^2 x from a symmetric x-grid) are
    # collapsed before the series run; results are scattered back.
    zu, inv = np.unique(z, return_inverse=True)
    out = hyp2f1_neg(a, b, c, zu, max_terms)[inv]
    return out[0] if scalar else out
