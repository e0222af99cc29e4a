"""Composite Gauss-Legendre quadrature grids.

All integrals in the toolkit are evaluated on symmetric open grids: no node
sits at the origin (the spectral density has a removable singularity there)
and nodes/weights come mirrored in exact pairs, so reflections f(x) -> f(-x)
are index reversals with no rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _base_rule(nodes_per_panel: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [-1, 1], symmetrized to exact +/- pairs."""
    xi, wi = np.polynomial.legendre.leggauss(nodes_per_panel)
    xi = 0.5 * (xi - xi[::-1])
    wi = 0.5 * (wi + wi[::-1])
    return xi, wi


@dataclass(frozen=True)
class QuadGrid:
    """Symmetric composite Gauss-Legendre grid on [-half_width, half_width].

    Attributes
    ----------
    half_width : float
        Truncation radius of the interval.
    nodes, weights : ndarray
        Strictly increasing nodes and matching positive weights,
        ``panels * nodes_per_panel`` of each.
    panels, nodes_per_panel : int
        Composite layout.
    """

    half_width: float
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    panels: int
    nodes_per_panel: int

    def __post_init__(self):
        n = self.panels * self.nodes_per_panel
        if len(self.nodes) != n or len(self.weights) != n:
            raise ValueError("node/weight count does not match panels layout")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")
        if np.any(self.nodes == 0.0):
            raise ValueError("open rule violated: node at the origin")
        if np.max(np.abs(self.nodes + self.nodes[::-1])) > 1e-14 * self.half_width:
            raise ValueError("grid is not symmetric")
        total = self.weights.sum()
        if abs(total - 2.0 * self.half_width) > 1e-12 * 2.0 * self.half_width:
            raise ValueError("weights do not sum to the interval length")

    def __len__(self) -> int:
        return len(self.nodes)

    def refined(self) -> "QuadGrid":
        """Same interval with doubled panel count."""
        return make_grid(self.half_width, 2 * self.panels, self.nodes_per_panel)


def make_grid(half_width: float, panels: int, nodes_per_panel: int) -> QuadGrid:
    """Build a symmetric composite Gauss-Legendre grid.

    The panels are equal subdivisions of [-half_width, half_width] assembled
    from mirrored half-line panels so that nodes come in exact +/- pairs and
    weights are exactly palindromic.  ``panels`` and ``nodes_per_panel`` may
    not both be odd (that would place a node at 0, breaking the open rule).
    """
    if half_width <= 0:
        raise ValueError("half_width must be positive")
    if panels < 1 or nodes_per_panel < 1:
        raise ValueError("panels and nodes_per_panel must be positive")
    if panels % 2 == 1 and nodes_per_panel % 2 == 1:
        raise ValueError(
            "panels and nodes_per_panel may not both be odd "
            "(a node would land on the origin)"
        )
    xi, wi = _base_rule(nodes_per_panel)
    width = 2.0 * half_width / panels

    right_mids = []
    if panels % 2 == 1:
        center = [(0.0, 0.5 * width)]
        n_side = (panels - 1) // 2
        right_mids = [(0.5 * width + (k + 0.5) * width, 0.5 * width) for k in range(n_side)]
    else:
        center = []
        n_side = panels // 2
        right_mids = [((k + 0.5) * width, 0.5 * width) for k in range(n_side)]

    right_nodes = [m + h * xi for m, h in right_mids]
    right_weights = [h * wi for _, h in right_mids]
    center_nodes = [m + h * xi for m, h in center]
    center_weights = [h * wi for _, h in center]

    left_nodes = [-rn[::-1] for rn in reversed(right_nodes)]
    left_weights = [rw[::-1] for rw in reversed(right_weights)]

    nodes = np.concatenate(left_nodes + center_nodes + right_nodes)
    weights = np.concatenate(left_weights + center_weights + right_weights)
    return QuadGrid(float(half_width), nodes, weights, panels, nodes_per_panel)


@dataclass(frozen=True)
class IntervalRule:
    """Composite Gauss-Legendre rule on a general interval [lo, hi].

    Used for restricted-interval norms where the symmetric-about-zero
    QuadGrid invariants do not apply.
    """

    lo: float
    hi: float
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.nodes)


def make_interval_rule(lo: float, hi: float, panels: int, nodes_per_panel: int) -> IntervalRule:
    """Composite Gauss-Legendre rule on [lo, hi] (no symmetry requirements)."""
    if hi <= lo:
        raise ValueError("hi must exceed lo")
    if panels < 1 or nodes_per_panel < 1:
        raise ValueError("panels and nodes_per_panel must be positive")
    xi, wi = _base_rule(nodes_per_panel)
    edges = np.linspace(lo, hi, panels + 1)
    nodes = np.concatenate([0.5 * (a + b) + 0.5 * (b - a) * xi for a, b in zip(edges[:-1], edges[1:])])
    weights = np.concatenate([0.5 * (b - a) * wi for a, b in zip(edges[:-1], edges[1:])])
    return IntervalRule(float(lo), float(hi), nodes, weights)


def make_midpoint_rule(half_width: float, n: int) -> QuadGrid:
    """Uniform open midpoint rule on [-half_width, half_width].

    Equivalent to a composite 1-point Gauss rule: n panels, one node each.
    ``n`` must be even so no node lands on the origin.
    """
    if n % 2 == 1:
        raise ValueError("midpoint rule needs an even node count to stay open at 0")
    return make_grid(half_width, n, 1)


def integrate(values, grid) -> complex:
    """Weighted sum of node values against the grid weights.

    Deterministic summation order (numpy pairwise) so repeated runs are
    bit-identical.
    """
    values = np.asarray(values)
    if values.shape[-1] != len(grid.nodes):
        raise ValueError(
            f"value count {values.shape[-1]} does not match grid size {len(grid.nodes)}"
        )
    return np.sum(values * grid.weights, axis=-1)
