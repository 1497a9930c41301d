"""Small dense matrices and exact oscillator propagators.

Everything downstream composes the objects defined here: cross-product
generators of magnetic rotations, planar rotation matrices, and the exact
2x2 / 6x6 propagators of the (driven) harmonic oscillator in the
interleaved phase-space layout (Q1, P1, Q2, P2, Q3, P3).

All functions are pure and operate on plain numpy arrays; matrices are
returned as fresh ndarrays, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "OscParams",
    "QuadratureSpec",
    "cross_matrix",
    "rotation_about_z",
    "propagator_2x2",
    "free_block_2x2",
    "block_propagator",
    "energy_form_2x2",
    "energy_form_6x6",
    "symplectic_form",
    "composite_simpson",
    "cumulative_simpson",
]


@dataclass(frozen=True)
class OscParams:
    """Mass and angular frequency of a harmonic degree of freedom.

    omega = 0 is allowed and selects the free-particle propagator block.
    """

    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError(f"mass must be positive and finite, got {self.mass}")
        if not (self.omega >= 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be >= 0 and finite, got {self.omega}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Resolution of the composite-Simpson quadratures used for convolution
    integrals and action phases: `panels_per_unit` panels per unit time,
    never fewer than `min_panels`, always an even count."""

    panels_per_unit: float = 10_000.0
    min_panels: int = 32

    def __post_init__(self):
        if not (self.panels_per_unit > 0 and self.min_panels >= 2):
            raise ValueError("quadrature resolution must be positive")

    def panels(self, span: float) -> int:
        n = max(self.min_panels, int(math.ceil(self.panels_per_unit * abs(span))))
        return n + (n % 2)


def cross_matrix(b) -> np.ndarray:
    """Antisymmetric matrix W with W @ x == cross(b, x) for every x.

    Entries are placed, not computed, so antisymmetry and zero trace hold
    bit-exactly.
    """
    b1, b2, b3 = (float(c) for c in np.asarray(b, dtype=float))
    if not all(math.isfinite(c) for c in (b1, b2, b3)):
        raise ValueError("field vector must be finite")
    return np.array(
        [
            [0.0, -b3, b2],
            [b3, 0.0, -b1],
            [-b2, b1, 0.0],
        ]
    )


def rotation_about_z(angle: float) -> np.ndarray:
    """Proper rotation by `angle` about the z axis (orthogonal, det = 1).

    This is the matrix exponential of `cross_matrix((0, 0, 1)) * angle`;
    the off-diagonal sines carry opposite signs, which is what makes the
    result orthogonal.
    """
    c, s = math.cos(angle), math.sin(angle)
    return np.array(
        [
            [c, -s, 0.0],
            [s, c, 0.0],
            [0.0, 0.0, 1.0],
        ]
    )


def free_block_2x2(mass: float, t: float) -> np.ndarray:
    """Free-particle propagator [[1, t/m], [0, 1]], the omega -> 0 limit."""
    return np.array([[1.0, t / mass], [0.0, 1.0]])


def propagator_2x2(params: OscParams, t: float) -> np.ndarray:
    """Exact oscillator propagator on one (Q, P) pair.

    [[cos(wt), sin(wt)/(m w)], [-m w sin(wt), cos(wt)]]; for omega == 0 the
    analytic free block is returned instead of evaluating sin(wt)/w.
    Determinant is exactly cos^2 + sin^2 = 1 up to roundoff (symplectic).
    """
    if not math.isfinite(t):
        raise ValueError("time must be finite")
    m, w = params.mass, params.omega
    if m * w == 0.0:  # covers w = 0 and subnormal-underflow products
        return free_block_2x2(m, t)
    c, s = math.cos(w * t), math.sin(w * t)
    return np.array([[c, s / (m * w)], [-m * w * s, c]])


def block_propagator(params: OscParams, t: float) -> np.ndarray:
    """6x6 propagator on (Q1,P1,Q2,P2,Q3,P3): oscillator blocks on the two
    planar degrees, free block on the axial one."""
    u = propagator_2x2(params, t)
    out = np.zeros((6, 6))
    out[0:2, 0:2] = u
    out[2:4, 2:4] = u
    out[4:6, 4:6] = free_block_2x2(params.mass, t)
    return out


def energy_form_2x2(params: OscParams) -> np.ndarray:
    """Quadratic form H with 2*energy = <z, H z> on one (Q, P) pair.

    diag(m w^2, 1/m).  The propagator conjugates this form to itself,
    U(t)^T H U(t) = H, which is the invariance behind the conserved
    homogeneous-orbit energy.
    """
    m, w = params.mass, params.omega
    return np.diag([m * w * w, 1.0 / m])


def energy_form_6x6(params: OscParams) -> np.ndarray:
    """Block-diagonal energy form matching `block_propagator` (axial block
    has no stiffness)."""
    h = energy_form_2x2(params)
    out = np.zeros((6, 6))
    out[0:2, 0:2] = h
    out[2:4, 2:4] = h
    out[4:6, 4:6] = np.diag([0.0, 1.0 / params.mass])
    return out


def symplectic_form(dof: int) -> np.ndarray:
    """Standard symplectic form in the interleaved layout: block-diagonal
    copies of [[0, 1], [-1, 0]], one per degree of freedom."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * dof, 2 * dof))
    for i in range(dof):
        out[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = j
    return out


def composite_simpson(values: np.ndarray, dx: float) -> np.ndarray:
    """Composite Simpson integral over axis 0 of uniformly sampled values.

    Requires an odd number of samples (even panel count).
    """
    values = np.asarray(values)
    n = values.shape[0] - 1
    if n < 2 or n % 2:
        raise ValueError("composite Simpson needs an even, >= 2 panel count")
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return np.tensordot(w, values, axes=(0, 0)) * (dx / 3.0)


def cumulative_simpson(values: np.ndarray, dx: float) -> np.ndarray:
    """Cumulative integral at every sample point of a uniform grid.

    Even indices use composite Simpson; odd indices add the standard
    three-point half-panel rule, keeping the result O(dx^4) accurate
    everywhere.  Integrates over axis 0; leading shape is preserved.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0] - 1
    if n < 2 or n % 2:
        raise ValueError("cumulative Simpson needs an even, >= 2 panel count")
    out = np.zeros_like(values)
    pair = (values[0:-2:2] + 4.0 * values[1:-1:2] + values[2::2]) * (dx / 3.0)
    out[2::2] = np.cumsum(pair, axis=0)
    # half-panel: integral from x_{2j} to x_{2j+1}
    half = (5.0 * values[0:-2:2] + 8.0 * values[1:-1:2] - values[2::2]) * (dx / 12.0)
    out[1::2] = out[0:-2:2] + half
    return out
