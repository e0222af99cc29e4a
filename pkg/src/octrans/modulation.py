"""Short-time Fourier transform and weighted mixed-norm estimators.

The STFT is a direct quadrature of

    V_g f(x, w) = int f(t) conj(g(t - x)) e^{-2 pi i w t} dt

over the sampling grid of f.  Mixed norms integrate |V|^p against the
selected measure in the translation variable (inner) and the modulation
variable (outer); infinite exponents take grid suprema without a measure
weight.  The modulation lattice is uniform (open midpoint rule) because
suprema are more natural there; translation nodes are composite Gauss.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import SamplingWarning
from .jacobi import JCParams, SampledFunction, weight_A
from .quadrature import IntervalRule, QuadGrid, make_grid, make_interval_rule, make_midpoint_rule
from .transform import abs_plancherel_density

DEFAULT_WINDOW_ID = "exp(-pi t^2)"
ENVELOPE_CAP = 1e300

# Relative accuracy attributed to one quadrature row of the STFT; lattice
# values below this floor are numerical noise.  Exponentially growing
# measure weights would otherwise amplify that noise into spurious norm
# mass at the lattice corners.
V_REL_NOISE = 1e-12

# Fixed modulation-window half-width: with the Gaussian window, |V| decays
# like e^{-pi w^2 / ...}; mass beyond |w| = 7 is below every tolerance used
# here even against the exponentially growing measure weights.
DEFAULT_W_HALF_WIDTH = 7.0


def default_window(t):
    return np.exp(-np.pi * np.asarray(t, dtype=float) ** 2).astype(complex)


def _window_callable(window):
    """Normalize the window argument to (callable, descriptor)."""
    if window is None:
        return default_window, DEFAULT_WINDOW_ID
    if isinstance(window, SampledFunction):
        nodes = window.grid.nodes
        vals = window.values

        def sampled(t):
            t = np.asarray(t, dtype=float)
            re = np.interp(t, nodes, vals.real, left=0.0, right=0.0)
            im = np.interp(t, nodes, vals.imag, left=0.0, right=0.0)
            return re + 1j * im

        return sampled, "sampled"
    if callable(window):
        return window, getattr(window, "window_id", "custom")
    raise TypeError("window must be None, a SampledFunction, or a callable")


@dataclass
class STFTLattice:
    """STFT values on a (translation x modulation) lattice."""

    x_grid: QuadGrid | IntervalRule
    w_grid: QuadGrid | IntervalRule
    values: np.ndarray = field(repr=False)
    window_id: str = DEFAULT_WINDOW_ID

    def __post_init__(self):
        expected = (len(self.x_grid.nodes), len(self.w_grid.nodes))
        if self.values.shape != expected:
            raise ValueError(f"lattice values shape {self.values.shape} != {expected}")


@dataclass(frozen=True)
class MixedNormSpec:
    """Exponents and measure for a mixed-norm evaluation.

    ``measure`` is one of 'A_weighted', 'sigma_weighted', 'lebesgue'.
    Infinite exponents are ``math.inf``.
    """

    p: float
    q: float
    measure: str = "lebesgue"
    params: JCParams | None = None

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("exponents must satisfy p, q >= 1")
        if self.measure not in ("A_weighted", "sigma_weighted", "lebesgue"):
            raise ValueError(f"unknown measure {self.measure!r}")
        if self.measure != "lebesgue" and self.params is None:
            raise ValueError("weighted measures need params")

    def weight(self, nodes: np.ndarray) -> np.ndarray:
        if self.measure == "A_weighted":
            return weight_A(self.params, nodes)
        if self.measure == "sigma_weighted":
            return abs_plancherel_density(self.params, nodes)
        return np.ones_like(nodes)


def stft(f: SampledFunction, window=None, x_grid=None, w_grid=None,
         chunk: int = 128, noise_clamp: bool = True) -> STFTLattice:
    """Quadrature STFT of sampled f on the requested lattice.

    ``window`` may be a callable (evaluated exactly at t - x), a
    SampledFunction (linearly interpolated), or None for the unit Gaussian.
    Warns когда the sampling grid of f is too coarse for the largest
    requested modulation frequency (spacing >= 1/(4 max|w|)).

    With ``noise_clamp`` (default), lattice values below the per-row
    quadrature noise floor are set to exact zero; the true values there are
    unknowable at working precision and keeping the noise would poison
    weighted norms.
    """
    win, window_id = _window_callable(window)
    if x_grid is None:
        x_grid = make_grid(f.grid.half_width, max(2, int(f.grid.half_width)), 8)
    if w_grid is None:
        w_grid = make_midpoint_rule(DEFAULT_W_HALF_WIDTH, 140)

    t_nodes = f.grid.nodes
    max_w = float(np.max(np.abs(w_grid.nodes)))
    spacing = float(np.max(np.diff(t_nodes)))
    if max_w > 0 and spacing >= 1.0 / (4.0 * max_w):
        warnings.warn(
            f"sampling spacing {spacing:.4g} too coarse for |w| up to {max_w:.4g}",
            SamplingWarning,
            stacklevel=2,
        )

    base = f.values * f.grid.weights
    abs_base = np.abs(base)
    phase = np.exp(-2j * np.pi * np.outer(t_nodes, w_grid.nodes))
    values = np.empty((len(x_grid.nodes), len(w_grid.nodes)), dtype=complex)
    for lo in range(0, len(x_grid.nodes), chunk):
        xs = x_grid.nodes[lo:lo + chunk]
        shifted = np.conj(win(t_nodes[None, :] - xs[:, None]))
        block = (shifted * base[None, :]) @ phase
        if noise_clamp:
            floor = V_REL_NOISE * (np.abs(shifted) @ abs_base)
            block[np.abs(block) < 10.0 * floor[:, None]] = 0.0
        values[lo:lo + chunk] = block
    return STFTLattice(x_grid, w_grid, values, window_id)


def _power_integral(mag: np.ndarray, p: float, wvec: np.ndarray, axis: int):
    """Integrate |V|^p along one lattice axis (grid supremum when p = inf)."""
    if math.isinf(p):
        return mag.max(axis=axis)
    shape = [1] * mag.ndim
    shape[axis] = -1
    return np.sum(mag ** p * wvec.reshape(shape), axis=axis)


def mixed_norm(lattice: STFTLattice, spec: MixedNormSpec) -> float:
    """Discretized mixed norm of the lattice under the spec's measure.

    Finite p, q:  ( int ( int |V|^p dm(x) )^{q/p} dm(w) )^{1/q}.
    An infinite exponent replaces its integral by the plain grid supremum
    (no measure weight on that variable).
    """
    mag = np.abs(lattice.values)
    xw = lattice.x_grid.weights
    ww = lattice.w_grid.weights
    xm = spec.weight(lattice.x_grid.nodes)
    wm = spec.weight(lattice.w_grid.nodes)

    inner = _power_integral(mag, spec.p, xw * xm, axis=0)  # one value per w
    if math.isinf(spec.p):
        inner_norm = inner
    else:
        inner_norm = inner ** (1.0 / spec.p)
    if math.isinf(spec.q):
        return float(inner_norm.max())
    outer = np.sum(inner_norm ** spec.q * (ww * wm))
    return float(outer ** (1.0 / spec.q))


def restricted_norm(f: SampledFunction, lo: float, hi: float, p: float,
                    window=None, panels_per_unit: int = 4,
                    nodes_per_panel: int = 8) -> float:
    """Norm of f restricted to the square [lo, hi]^2 in (x, w), Lebesgue
    measure, equal inner and outer exponent p."""
    span = hi - lo
    panels = max(2, int(math.ceil(span * panels_per_unit)))
    x_rule = make_interval_rule(lo, hi, panels, nodes_per_panel)
    w_rule = make_interval_rule(lo, hi, panels, nodes_per_panel)
    lattice = stft(f, window=window, x_grid=x_rule, w_grid=w_rule)
    return mixed_norm(lattice, MixedNormSpec(p, p, "lebesgue"))


@dataclass(frozen=True)
class Envelope:
    """Pointwise envelope e^{rate * |t|^exponent} multiplying the samples.

    kind 'gaussian' fixes exponent 2; 'power' uses the given exponent
    (> 2 for the spatial side of the non-quadratic regime).
    """

    kind: str
    rate: float
    exponent: float = 2.0

    def __post_init__(self):
        if self.kind not in ("gaussian", "power"):
            raise ValueError("envelope kind must be 'gaussian' or 'power'")
        if self.rate < 0:
            raise ValueError("envelope rate must be >= 0")
        if self.kind == "gaussian" and self.exponent != 2.0:
            raise ValueError("gaussian envelope has exponent 2")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(np.minimum(self.rate * np.abs(t) ** self.exponent,
                                 math.log(ENVELOPE_CAP)))

    def saturates_at(self, t) -> bool:
        t = np.asarray(t, dtype=float)
        return bool(np.any(self.rate * np.abs(t) ** self.exponent > math.log(ENVELOPE_CAP)))


@dataclass(frozen=True)
class EnvelopeNormResult:
    truncation: float
    norm: float
    tail_fraction: float
    saturated: bool


def envelope_norm(params: JCParams, f: SampledFunction, envelope: Envelope | None,
                  spec: MixedNormSpec, truncation: float,
                  w_half_width: float = DEFAULT_W_HALF_WIDTH,
                  window=None) -> EnvelopeNormResult:
    """Mixed norm of the envelope-multiplied samples at one truncation.

    The truncation restricts the translation lattice to [-T, T]; the
    sampled function itself is used in full, so no artificial jump is
    introduced at the cut (a hard sample cut radiates a 1/w tail into the
    modulation variable, which the exponentially growing measure weights
    would amplify into spurious norm mass).  The restricted norm is
    therefore non-decreasing in the truncation.  ``tail_fraction`` is the
    share contributed by translation nodes in the outermost 10% of the
    restricted domain -- the divergence detector.  Envelope values cap at
    1e300 and set the ``saturated`` flag.
    """
    if truncation > f.grid.half_width + 1e-12:
        raise ValueError("truncation exceeds the sampled domain")
    t_nodes = f.grid.nodes
    t_weights = f.grid.weights
    if envelope is None:
        vals = f.values
        saturated = False
    else:
        vals = f.values * envelope(t_nodes)
        saturated = envelope.saturates_at(t_nodes)

    win, window_id = _window_callable(window)
    x_panels = max(4, int(math.ceil(truncation * 2)) * 2)
    x_grid = make_grid(truncation, x_panels, 8)
    w_nodes_count = 2 * int(round(w_half_width * 10))
    w_grid = make_midpoint_rule(w_half_width, w_nodes_count)

    base = vals * t_weights
    phase = np.exp(-2j * np.pi * np.outer(t_nodes, w_grid.nodes))
    mag = np.empty((len(x_grid.nodes), len(w_grid.nodes)))
    for lo in range(0, len(x_grid.nodes), 128):
        xs = x_grid.nodes[lo:lo + 128]
        shifted = np.conj(win(t_nodes[None, :] - xs[:, None]))
        mag[lo:lo + 128] = np.abs((shifted * base[None, :]) @ phase)

    xw, ww = x_grid.weights, w_grid.weights
    xm, wm = spec.weight(x_grid.nodes), spec.weight(w_grid.nodes)

    def norm_of(sub_x: np.ndarray) -> float:
        m = mag[sub_x]
        inner = _power_integral(m, spec.p, (xw * xm)[sub_x], axis=0)
        if not math.isinf(spec.p):
            inner = inner ** (1.0 / spec.p)
        if math.isinf(spec.q):
            return float(inner.max())
        return float(np.sum(inner ** spec.q * (ww * wm)) ** (1.0 / spec.q))

    full = norm_of(np.ones(len(x_grid.nodes), dtype=bool))
    inner_region = np.abs(x_grid.nodes) <= 0.9 * truncation
    core = norm_of(inner_region)
    tail = 0.0 if full == 0 else max(0.0, 1.0 - core / full)
    return EnvelopeNormResult(float(truncation), full, tail, saturated)


def classify_norm_sequence(results: list[EnvelopeNormResult],
                           cauchy_rtol: float = 0.01,
                           tail_tol: float = 0.05) -> str:
    """Trend verdict for a truncated-norm sequence: 'finite', 'divergent',
    or 'inconclusive'.

    finite: consecutive norms agree within ``cauchy_rtol`` and the final
    tail fraction is below ``tail_tol``.  divergent: every step grows by
    more than a factor 2 and the final tail fraction exceeds 0.5.
    """
    if len(results) < 2:
        return "inconclusive"
    norms = [r.norm for r in results]
    tails = [r.tail_fraction for r in results]
    steps = list(zip(norms[:-1], norms[1:]))
    cauchy = all(abs(b - a) <= cauchy_rtol * max(abs(a), 1e-300) for a, b in steps)
    if cauchy and tails[-1] < tail_tol:
        return "finite"
    growing = all(b > 2.0 * a for a, b in steps if a > 0) and norms[0] > 0
    if growing and tails[-1] > 0.5:
        return "divergent"
    return "inconclusive"
