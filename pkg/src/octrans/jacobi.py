"""Hyperbolic-geometry layer: parameters, weights, eigenfunctions, operator.

Carries the parameter triple (alpha, beta, rho) with rho = alpha + beta + 1,
the weight functions A and B, the even hypergeometric eigenfunction phi of
the symmetric problem, the normalized eigenfunction G of the first-order
differential-difference operator T, and T itself acting on sampled data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .quadrature import QuadGrid
from .specfun import gauss_2f1, hyp2f1_neg


@dataclass(frozen=True)
class JCParams:
    """Parameter pair (alpha, beta) with alpha >= beta >= -1/2, alpha > -1/2.

    rho = alpha + beta + 1 is derived and always positive under the
    admissibility constraints.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha >= self.beta >= -0.5):
            raise ValueError("require alpha >= beta >= -1/2")
        if not self.alpha > -0.5:
            raise ValueError("require alpha > -1/2")
        assert self.rho > 0

    @property
    def rho(self) -> float:
        return self.alpha + self.beta + 1.0

    def shifted(self) -> "JCParams":
        """Parameters (alpha+1, beta+1) entering the derivative identity."""
        return JCParams(self.alpha + 1.0, self.beta + 1.0)


@dataclass
class SampledFunction:
    """Complex samples of a function on a quadrature grid.

    ``domain_tag`` records whether the grid lives on the spatial (x) or the
    spectral (lambda) axis.
    """

    grid: QuadGrid
    values: np.ndarray = field(repr=False)
    domain_tag: str = "spatial"

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if len(self.values) != len(self.grid.nodes):
            raise ValueError("sample count does not match grid size")
        if self.domain_tag not in ("spatial", "spectral"):
            raise ValueError("domain_tag must be 'spatial' or 'spectral'")

    def reflected(self) -> "SampledFunction":
        """Samples of x -> f(-x); exact index reversal on a symmetric grid."""
        return SampledFunction(self.grid, self.values[::-1].copy(), self.domain_tag)


def weight_A(params: JCParams, x):
    """Weight (sinh|x|)^(2a+1) (cosh|x|)^(2b+1); the transform's measure."""
    x = np.abs(np.asarray(x, dtype=float))
    return np.sinh(x) ** (2.0 * params.alpha + 1.0) * np.cosh(x) ** (2.0 * params.beta + 1.0)


def weight_B(params: JCParams, x):
    """Weight (sinh|x|/|x|)^(2a+1) (cosh|x|)^(2b+1), equal to 1 at x = 0.

    Satisfies weight_A(x) = |x|^(2a+1) * weight_B(x) and weight_B >= 1.
    """
    xa = np.abs(np.asarray(x, dtype=float))
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    ratio = np.ones_like(xa)
    nz = xa != 0
    ratio[nz] = np.sinh(xa[nz]) / xa[nz]
    out = ratio ** (2.0 * params.alpha + 1.0) * np.cosh(xa) ** (2.0 * params.beta + 1.0)
    return float(out[0]) if scalar else out


def _phi_args(params: JCParams, lam: complex):
    a = (params.rho + 1j * lam) / 2.0
    b = (params.rho - 1j * lam) / 2.0
    c = params.alpha + 1.0
    return a, b, c


def phi(params: JCParams, lam, x):
    """Even hypergeometric eigenfunction: 2F1 at argument -sinh^2 x."""
    a, b, c = _phi_args(params, complex(lam))
    z = -np.sinh(np.asarray(x, dtype=float)) ** 2
    return gauss_2f1(a, b, c, z)


def phi_derivative(params: JCParams, lam, x):
    """d/dx of phi via the contiguous-parameter identity.

    d/dx phi = -((rho^2 + lam^2) / (4(alpha+1))) sinh(2x) phi_shift
    where phi_shift carries parameters (alpha+1, beta+1) and the same lam.
    """
    lam = complex(lam)
    x = np.asarray(x, dtype=float)
    coef = -(params.rho ** 2 + lam ** 2) / (4.0 * (params.alpha + 1.0))
    return coef * np.sinh(2.0 * x) * phi(params.shifted(), lam, x)


def eigenfunction_G(params: JCParams, lam, x):
    """Eigenfunction of the Jacobi-Cherednik operator, normalized to 1 at 0.

    Computed from the representation free of the removable lam = -i rho
    singularity:

        G = phi + ((rho + i lam) / (4 (alpha+1))) sinh(2x) phi_shift
    """
    lam = complex(lam)
    x = np.asarray(x, dtype=float)
    q = (params.rho + 1j * lam) / (4.0 * (params.alpha + 1.0))
    return phi(params, lam, x) + q * np.sinh(2.0 * x) * phi(params.shifted(), lam, x)


def eigenfunction_G_first_form(params: JCParams, lam, x, phi_prime=None):
    """The alternative representation G = phi - phi' / (rho - i lam).

    Only meaningful away from lam = -i rho.  ``phi_prime`` defaults to the
    analytic derivative; pass an independently computed derivative (e.g.
    finite differences) to make a cross-check of the two forms non-circular.
    """
    lam = complex(lam)
    if abs(lam + 1j * params.rho) < 1e-12:
        raise ZeroDivisionError("first form singular at lam = -i rho")
    if phi_prime is None:
        phi_prime = phi_derivative(params, lam, x)
    return phi(params, lam, x) - phi_prime / (params.rho - 1j * lam)


def eigenfunction_G_derivative(params: JCParams, lam, x):
    """Analytic d/dx of eigenfunction_G (product rule on the second form)."""
    lam = complex(lam)
    x = np.asarray(x, dtype=float)
    q = (params.rho + 1j * lam) / (4.0 * (params.alpha + 1.0))
    shifted = params.shifted()
    return (
        phi_derivative(params, lam, x)
        + q * 2.0 * np.cosh(2.0 * x) * phi(shifted, lam, x)
        + q * np.sinh(2.0 * x) * phi_derivative(shifted, lam, x)
    )


def eigenfunction_matrix(params: JCParams, lams, xs, reflect: bool = False):
    """G values on the product grid: out[i, j] = G_{lams[i]}(xs[j]).

    With ``reflect=True`` additionally returns G_{lam}(-x) sharing all the
    hypergeometric work (phi is even in x, the correction term is odd).
    """
    lams = np.asarray(lams, dtype=complex).ravel()
    xs = np.asarray(xs, dtype=float).ravel()
    rho = params.rho
    c = params.alpha + 1.0
    a = (rho + 1j * lams)[:, None] / 2.0
    b = (rho - 1j * lams)[:, None] / 2.0
    z = (-np.sinh(xs) ** 2)[None, :]

    zz = np.broadcast_to(z, (len(lams), len(xs)))
    phi_main = hyp2f1_neg(a, b, c, zz)
    # Shifted parameters (alpha+1, beta+1) raise rho by 2, hence a, b by 1.
    phi_shift = hyp2f1_neg(a + 1.0, b + 1.0, c + 1.0, zz)

    q = ((rho + 1j * lams) / (4.0 * (params.alpha + 1.0)))[:, None]
    odd = q * np.sinh(2.0 * xs)[None, :] * phi_shift
    g = phi_main + odd
    if reflect:
        return g, phi_main - odd
    return g


def eigenfunction_bound_constant(params: JCParams, lam, half_width: float, n: int = 801):
    """Empirical constant sup |G_lam(x)| e^{rho |x|} over |x| <= half_width.

    The sharp constant is not known in closed form; this reports the grid
    maximum for the given resolution.
    """
    xs = np.linspace(-half_width, half_width, n)
    g = eigenfunction_G(params, lam, xs)
    return float(np.max(np.abs(g) * np.exp(params.rho * np.abs(xs))))


def _fd_weights(xs: np.ndarray, x0: float, order: int) -> np.ndarray:
    """Fornberg finite-difference weights for derivative ``order`` at x0."""
    n = len(xs)
    c = np.zeros((n, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = xs[0] - x0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def grid_derivative(f: SampledFunction, stencil: int = 5) -> np.ndarray:
    """Derivative samples by local finite differences on the (non-uniform) grid.

    Centered 5-point stencils in the interior, one-sided at the edges.
    """
    xs = f.grid.nodes
    vals = f.values
    n = len(xs)
    half = stencil // 2
    out = np.empty(n, dtype=complex)
    for i in range(n):
        lo = max(0, min(i - half, n - stencil))
        sel = slice(lo, lo + stencil)
        w = _fd_weights(xs[sel], xs[i], 1)
        out[i] = np.dot(w, vals[sel])
    return out


def apply_T(params: JCParams, f: SampledFunction, derivative=None) -> SampledFunction:
    """Apply the Jacobi-Cherednik operator to a sampled function.

        T f(x) = f'(x) + [(2a+1) coth x + (2b+1) tanh x] (f(x) - f(-x))/2
                 - rho f(-x)

    ``derivative`` may be a callable mapping the node array to f' samples
    (use it when an analytic derivative exists); otherwise a 5-point finite
    difference on the grid is used.  The grid must be symmetric so f(-x) is
    an index reversal.  Nodes with |x| < 1e-8 take the even/odd-split limit
    of the coth term, (2a+1) f'(0).
    """
    xs = f.grid.nodes
    if np.max(np.abs(xs + xs[::-1])) > 1e-14 * f.grid.half_width:
        raise ValueError("apply_T requires a symmetric grid")
    vals = f.values
    refl = vals[::-1]
    if derivative is not None:
        fp = np.asarray(derivative(xs), dtype=complex)
    else:
        fp = grid_derivative(f)

    odd = 0.5 * (vals - refl)
    out = np.empty_like(vals)
    tiny = np.abs(xs) < 1e-8
    reg = ~tiny
    coef = (2.0 * params.alpha + 1.0) / np.tanh(xs[reg]) + (2.0 * params.beta + 1.0) * np.tanh(xs[reg])
    out[reg] = fp[reg] + coef * odd[reg] - params.rho * refl[reg]
    if tiny.any():
        out[tiny] = fp[tiny] + (2.0 * params.alpha + 1.0) * fp[tiny] - params.rho * refl[tiny]
    return SampledFunction(f.grid, out, f.domain_tag)
