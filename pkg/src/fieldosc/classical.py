"""Closed-form classical dynamics and the canonical maps linking them.

Three Hamiltonians are handled:

* ``H1`` -- a charge in a uniform axial magnetic field plus a static
  electric field,
* ``H2`` -- a planar harmonic oscillator driven by a spatially constant,
  time-dependent force,
* ``H3`` -- the plain planar oscillator.

Phase-space points are plain numpy arrays in the *interleaved* layout
``(Q1, P1, Q2, P2, Q3, P3)`` (or ``(Q, P)`` for one degree of freedom);
all evaluators and maps broadcast over leading axes, so batches of states
can be pushed through in one call.

Conventions: the magnetic coupling enters through the signed cyclotron
rate ``w_c = q*B3/m`` (with the vector potential ``(m*w_c/2) z_hat cross x``,
which at q = 1 is exactly ``B cross x / 2``).  The equivalent oscillator
frequency is half the cyclotron rate, which is also the angular speed of
the rotating frame that removes the magnetic term; the equivalence tests
in this package check that chain end to end against a brute-force
integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import (
    OscParams,
    QuadratureSpec,
    block_propagator,
    composite_simpson,
    cumulative_simpson,
    rotation_about_z,
    symplectic_form,
)

__all__ = [
    "Drive",
    "StaticField",
    "CanonicalMap",
    "DrivenSolution",
    "EquivalenceReport",
    "FlowBlowupError",
    "eval_H1",
    "eval_H2",
    "eval_H3",
    "h1_evaluator",
    "h2_evaluator",
    "h3_evaluator",
    "solve_driven",
    "forced_path",
    "action_phase_path",
    "block_propagate_path",
    "rotating_frame_map",
    "moving_origin_map",
    "rk4_hamiltonian_flow",
    "symplectic_defect",
    "equivalence_report",
]


class FlowBlowupError(RuntimeError):
    """Raised when an integration produces non-finite values."""

    def __init__(self, time):
        super().__init__(f"non-finite state encountered at t = {time:.6g}")
        self.time = time


def _as_state(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape[-1] not in (2, 6):
        raise ValueError(f"phase state must have 2 or 6 components, got {z.shape[-1]}")
    if not np.all(np.isfinite(z)):
        raise ValueError("phase state must be finite")
    return z


# ----------------------------------------------------------------------
# drives
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Drive:
    """Spatially constant force k(t), one of three concrete forms.

    ``constant``: fixed vector.  ``sinusoids``: a bank of terms
    ``cos_amp*cos(w t) + sin_amp*sin(w t)``.  ``sampled``: a table with
    linear interpolation, evaluable only inside its time window.
    Calling with a scalar returns shape (3,); with an array of times,
    shape (..., 3).
    """

    kind: str
    const: np.ndarray | None = None
    terms: tuple = ()
    times: np.ndarray | None = None
    values: np.ndarray | None = None

    @classmethod
    def zero(cls) -> "Drive":
        return cls.constant((0.0, 0.0, 0.0))

    @classmethod
    def constant(cls, force) -> "Drive":
        f = np.asarray(force, dtype=float).reshape(3)
        if not np.all(np.isfinite(f)):
            raise ValueError("constant drive must be finite")
        return cls(kind="constant", const=f)

    @classmethod
    def sinusoids(cls, terms: Sequence) -> "Drive":
        packed = []
        for w, cos_amp, sin_amp in terms:
            packed.append(
                (
                    float(w),
                    np.asarray(cos_amp, dtype=float).reshape(3),
                    np.asarray(sin_amp, dtype=float).reshape(3),
                )
            )
        return cls(kind="sinusoids", terms=tuple(packed))

    @classmethod
    def rotating_constant(cls, vec, rate: float) -> "Drive":
        """R_z(rate*t) applied to a fixed vector, as a sinusoid bank."""
        v1, v2, v3 = np.asarray(vec, dtype=float).reshape(3)
        return cls.sinusoids(
            [
                (float(rate), (v1, v2, 0.0), (-v2, v1, 0.0)),
                (0.0, (0.0, 0.0, v3), (0.0, 0.0, 0.0)),
            ]
        )

    @classmethod
    def sampled(cls, times, values) -> "Drive":
        t = np.asarray(times, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.ndim != 1 or v.shape != (t.size, 3):
            raise ValueError("sampled drive needs times (N,) and values (N, 3)")
        if t.size < 2 or np.any(np.diff(t) <= 0):
            raise ValueError("sampled drive times must be strictly increasing")
        return cls(kind="sampled", times=t, values=v)

    def window(self) -> tuple[float, float] | None:
        if self.kind == "sampled":
            return float(self.times[0]), float(self.times[-1])
        return None

    def scaled(self, factor: float) -> "Drive":
        if self.kind == "constant":
            return Drive.constant(self.const * factor)
        if self.kind == "sinusoids":
            return Drive.sinusoids(
                [(w, ca * factor, sa * factor) for w, ca, sa in self.terms]
            )
        return Drive(kind="sampled", times=self.times, values=self.values * factor)

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        if self.kind == "constant":
            out = np.broadcast_to(self.const, tt.shape + (3,)).copy()
        elif self.kind == "sinusoids":
            out = np.zeros(tt.shape + (3,))
            for w, ca, sa in self.terms:
                out += np.cos(w * tt)[..., None] * ca + np.sin(w * tt)[..., None] * sa
        else:
            lo, hi = self.window()
            if np.any(tt < lo - 1e-12) or np.any(tt > hi + 1e-12):
                raise ValueError(
                    f"drive not evaluable outside its window [{lo:g}, {hi:g}]"
                )
            out = np.stack(
                [np.interp(tt, self.times, self.values[:, i]) for i in range(3)],
                axis=-1,
            )
        return out[0] if scalar else out.reshape(t.shape + (3,))


# ----------------------------------------------------------------------
# fields and Hamiltonians
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class StaticField:
    """Uniform axial magnetic field B3 plus a static electric field."""

    b3: float
    e: tuple = (0.0, 0.0, 0.0)
    charge: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and math.isfinite(self.mass)):
            raise ValueError("mass must be positive")
        object.__setattr__(self, "e", tuple(float(c) for c in np.reshape(self.e, 3)))

    @property
    def cyclotron_rate(self) -> float:
        """Signed rotation rate q*B3/m of the velocity in this field."""
        return self.charge * self.b3 / self.mass

    @property
    def osc_params(self) -> OscParams:
        """Equivalent-oscillator parameters: frequency is half the
        cyclotron rate (the rotating-frame angular speed)."""
        return OscParams(self.mass, abs(self.cyclotron_rate) / 2.0)

    def frame_angle(self, t) -> np.ndarray | float:
        """Rotation angle of the frame that removes the magnetic term."""
        return 0.5 * self.cyclotron_rate * np.asarray(t, dtype=float)

    def rotated_drive(self) -> Drive:
        """Force q*E seen in the rotating frame, as a sinusoid bank."""
        e = np.asarray(self.e)
        return Drive.rotating_constant(self.charge * e, 0.5 * self.cyclotron_rate)


def eval_H1(field: StaticField, z) -> np.ndarray | float:
    """Energy of a charge in the static field: |p - a(x)|^2/2m - q<x,E>
    with a(x) = (m*w_c/2) z_hat cross x (equal to B cross x / 2 at q=1)."""
    z = _as_state(z)
    if z.shape[-1] != 6:
        raise ValueError("H1 needs a 6-component phase state")
    m = field.mass
    half_rate = 0.5 * field.cyclotron_rate * m
    x1, p1 = z[..., 0], z[..., 1]
    x2, p2 = z[..., 2], z[..., 3]
    x3, p3 = z[..., 4], z[..., 5]
    v1 = p1 + half_rate * x2
    v2 = p2 - half_rate * x1
    kinetic = (v1 * v1 + v2 * v2 + p3 * p3) / (2.0 * m)
    e1, e2, e3 = field.e
    potential = -field.charge * (x1 * e1 + x2 * e2 + x3 * e3)
    return kinetic + potential


def eval_H2(params: OscParams, drive: Drive, z, t) -> np.ndarray | float:
    """Driven-oscillator energy: kinetic + (m w^2/2)|planar Q|^2 - <Q, k(t)>."""
    z = _as_state(z)
    if z.shape[-1] != 6:
        raise ValueError("H2 needs a 6-component phase state")
    m, w = params.mass, params.omega
    q = z[..., 0::2]
    p = z[..., 1::2]
    k = drive(t)
    return (
        np.sum(p * p, axis=-1) / (2.0 * m)
        + 0.5 * m * w * w * (q[..., 0] ** 2 + q[..., 1] ** 2)
        - np.sum(q * k, axis=-1)
    )


def eval_H3(params: OscParams, z) -> np.ndarray | float:
    """Plain oscillator energy (planar stiffness, free axial motion)."""
    return eval_H2(params, Drive.zero(), z, 0.0)


def h1_evaluator(fields) -> Callable:
    """Vectorized H1 evaluator, batched over a sequence of fields.

    With B fields the returned callable maps states of shape (..., B, 6)
    to energies of shape (..., B); a single field gives the unbatched
    evaluator.  Meant to feed `rk4_hamiltonian_flow`.
    """
    if isinstance(fields, StaticField):
        return lambda z, t: eval_H1(fields, z)
    half = np.array([0.5 * f.cyclotron_rate * f.mass for f in fields])
    mass = np.array([f.mass for f in fields])
    qe = np.array([np.asarray(f.e) * f.charge for f in fields])

    def evaluate(z, t):
        x1, p1 = z[..., 0], z[..., 1]
        x2, p2 = z[..., 2], z[..., 3]
        x3, p3 = z[..., 4], z[..., 5]
        v1 = p1 + half * x2
        v2 = p2 - half * x1
        kinetic = (v1 * v1 + v2 * v2 + p3 * p3) / (2.0 * mass)
        potential = -(x1 * qe[:, 0] + x2 * qe[:, 1] + x3 * qe[:, 2])
        return kinetic + potential

    return evaluate


def h2_evaluator(params: OscParams, drive: Drive) -> Callable:
    return lambda z, t: eval_H2(params, drive, z, t)


def h3_evaluator(params: OscParams) -> Callable:
    return lambda z, t: eval_H3(params, z)


# ----------------------------------------------------------------------
# closed-form driven solution
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class DrivenSolution:
    """Solution of the driven oscillator split into the homogeneous part
    (propagated initial data) and the forced part (zero initial data)."""

    state: np.ndarray
    homogeneous: np.ndarray
    forced: np.ndarray


def _uniform_times(t: float, quad: QuadratureSpec) -> np.ndarray:
    n = quad.panels(t)
    return np.linspace(0.0, t, n + 1)


def _forced_path_on(times: np.ndarray, params: OscParams, drive: Drive) -> np.ndarray:
    """Forced response at every grid time: Z_nh(t) = U(t) * int_0^t U(-s) K(s) ds
    evaluated with a cumulative Simpson rule on the uniform grid."""
    m, w = params.mass, params.omega
    n = times.size - 1
    if n < 2 or n % 2:
        raise ValueError("forced path needs an even panel count >= 2")
    dt = times[1] - times[0]
    k = drive(times)  # (N+1, 3)
    out = np.zeros((times.size, 6))
    for axis in range(3):
        kx = k[:, axis]
        if axis < 2 and m * w > 0.0:
            c, s = np.cos(w * times), np.sin(w * times)
            v_q = -s * kx / (m * w)
            v_p = c * kx
            c1 = cumulative_simpson(v_q, dt)
            c2 = cumulative_simpson(v_p, dt)
            out[:, 2 * axis] = c * c1 + (s / (m * w)) * c2
            out[:, 2 * axis + 1] = -m * w * s * c1 + c * c2
        else:
            # omega -> 0 limit: kernel (t - s)/m for the position row
            c1 = cumulative_simpson(-times * kx / m, dt)
            c2 = cumulative_simpson(kx, dt)
            out[:, 2 * axis] = c1 + times * c2 / m
            out[:, 2 * axis + 1] = c2
    return out


def forced_path(params: OscParams, drive: Drive, times: np.ndarray) -> np.ndarray:
    """Zero-initial-data response sampled on a uniform time grid."""
    times = np.asarray(times, dtype=float)
    return _forced_path_on(times, params, drive)


def block_propagate_path(params: OscParams, z0, times) -> np.ndarray:
    """Homogeneous orbit U(t) z0 at many times; z0 may be batched (..., 6).

    Returns shape (len(times), ..., 6).
    """
    z0 = _as_state(z0)
    if z0.shape[-1] != 6:
        raise ValueError("propagation path needs 6-component states")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    m, w = params.mass, params.omega
    out = np.empty(times.shape + z0.shape)
    pad = (...,) + (None,) * (z0.ndim - 1)
    if m * w > 0.0:
        c, s = np.cos(w * times)[pad], np.sin(w * times)[pad]
        for axis in (0, 1):
            q, p = z0[..., 2 * axis], z0[..., 2 * axis + 1]
            out[..., 2 * axis] = c * q + (s / (m * w)) * p
            out[..., 2 * axis + 1] = -m * w * s * q + c * p
    else:
        tgrid = times[pad]
        for axis in (0, 1):
            q, p = z0[..., 2 * axis], z0[..., 2 * axis + 1]
            out[..., 2 * axis] = q + tgrid * p / m
            out[..., 2 * axis + 1] = np.broadcast_to(p, out[..., 0].shape)
    tgrid = times[pad]
    out[..., 4] = z0[..., 4] + tgrid * z0[..., 5] / m
    out[..., 5] = np.broadcast_to(z0[..., 5], out[..., 0].shape)
    return out


def solve_driven(
    params: OscParams,
    drive: Drive,
    z0,
    t: float,
    quad: QuadratureSpec = QuadratureSpec(),
) -> DrivenSolution:
    """Exact propagation of the driven oscillator to time t >= 0.

    The forced convolution integral is evaluated by composite Simpson at
    the resolution requested in `quad`.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    z0 = _as_state(z0)
    if z0.shape[-1] != 6:
        raise ValueError("solve_driven needs 6-component states")
    z_h = block_propagator(params, t) @ z0 if z0.ndim == 1 else z0 @ block_propagator(params, t).T
    if t == 0.0:
        z_nh = np.zeros(6)
    else:
        times = _uniform_times(t, quad)
        z_nh = _forced_path_on(times, params, drive)[-1]
    return DrivenSolution(state=z_h + z_nh, homogeneous=z_h, forced=z_nh)


def action_phase_path(params: OscParams, drive: Drive, times: np.ndarray) -> np.ndarray:
    """Action accumulated along the forced trajectory at every grid time:
    the time integral of the Lagrangian dual to the driven-oscillator
    Hamiltonian, evaluated on the moving origin."""
    times = np.asarray(times, dtype=float)
    z_nh = _forced_path_on(times, params, drive)
    m, w = params.mass, params.omega
    q = z_nh[:, 0::2]
    p = z_nh[:, 1::2]
    k = drive(times)
    lagrangian = (
        np.sum(p * p, axis=-1) / (2.0 * m)
        - 0.5 * m * w * w * (q[:, 0] ** 2 + q[:, 1] ** 2)
        + np.sum(q * k, axis=-1)
    )
    return cumulative_simpson(lagrangian, times[1] - times[0])


# ----------------------------------------------------------------------
# canonical maps
# ----------------------------------------------------------------------


@dataclass
class CanonicalMap:
    """Time-indexed phase-space diffeomorphism with its generating phase.

    `forward(t, z)` and `inverse(t, z)` broadcast over leading axes of z;
    `phase_A(t)` is the scalar generating phase.  Maps produced by
    `moving_origin_map` also expose the moving origin via `q_nh`/`p_nh`;
    the rotating-frame map carries the drive seen in the new frame.
    """

    forward: Callable
    inverse: Callable
    phase_A: Callable
    label: str = ""
    drive: Drive | None = None
    q_nh: Callable | None = None
    p_nh: Callable | None = None


def _rotate_pairs(z: np.ndarray, angle: float) -> np.ndarray:
    """Rotate the planar position and momentum pairs by `angle`."""
    c, s = math.cos(angle), math.sin(angle)
    out = np.array(z, dtype=float, copy=True)
    x1, x2 = z[..., 0], z[..., 2]
    p1, p2 = z[..., 1], z[..., 3]
    out[..., 0] = c * x1 - s * x2
    out[..., 2] = s * x1 + c * x2
    out[..., 1] = c * p1 - s * p2
    out[..., 3] = s * p1 + c * p2
    return out


def rotating_frame_map(field: StaticField) -> CanonicalMap:
    """Canonical map into the frame rotating at half the cyclotron rate.

    There the magnetic term disappears and the dynamics is the driven
    oscillator with the rotated electric force (exposed as `.drive`).
    The generating phase vanishes identically for this map.
    """

    def forward(t, z):
        return _rotate_pairs(_as_state(z), field.frame_angle(t))

    def inverse(t, z):
        return _rotate_pairs(_as_state(z), -field.frame_angle(t))

    return CanonicalMap(
        forward=forward,
        inverse=inverse,
        phase_A=lambda t: 0.0,
        label="rotating-frame",
        drive=field.rotated_drive(),
    )


def moving_origin_map(
    params: OscParams,
    drive: Drive,
    quad: QuadratureSpec = QuadratureSpec(),
) -> CanonicalMap:
    """Canonical shift onto the forced trajectory (the moving origin).

    forward: (Q, P) -> (Q - Q_nh(t), P - P_nh(t)); the generating phase is
    the action accumulated along the moving origin, so it solves
    dA/dt = kinetic - potential evaluated on the forced trajectory.
    """
    origin_cache: dict[float, np.ndarray] = {}
    phase_cache: dict[float, float] = {}

    def origin(t: float) -> np.ndarray:
        t = float(t)
        hit = origin_cache.get(t)
        if hit is None:
            if t == 0.0:
                hit = np.zeros(6)
            else:
                hit = _forced_path_on(_uniform_times(t, quad), params, drive)[-1]
            origin_cache[t] = hit
        return hit

    def forward(t, z):
        return _as_state(z) - origin(t)

    def inverse(t, z):
        return _as_state(z) + origin(t)

    def phase(t: float) -> float:
        t = float(t)
        hit = phase_cache.get(t)
        if hit is None:
            if t == 0.0:
                hit = 0.0
            else:
                hit = float(
                    action_phase_path(params, drive, _uniform_times(t, quad))[-1]
                )
            phase_cache[t] = hit
        return hit

    return CanonicalMap(
        forward=forward,
        inverse=inverse,
        phase_A=phase,
        label="moving-origin",
        drive=drive,
        q_nh=lambda t: origin(t)[0::2],
        p_nh=lambda t: origin(t)[1::2],
    )


# ----------------------------------------------------------------------
# brute-force oracle
# ----------------------------------------------------------------------


def rk4_hamiltonian_flow(
    hamiltonian: Callable,
    z0,
    t: float,
    dt: float,
    fd_step: float = 1e-5,
    return_path: bool = False,
):
    """Classic RK4 integration of dz/dt = Sigma grad H, with the gradient
    obtained by central finite differences (step fd_step*(1 + max|z|)).

    `hamiltonian(z, t)` must broadcast over leading axes of z; z0 may be a
    batch (..., 2n).  With `return_path`, returns (times, path) where path
    has shape (steps+1,) + z0.shape.  H quadratic in z makes the central
    difference exact up to roundoff, so the oracle error is O(dt^4).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    z = _as_state(z0)
    dim = z.shape[-1]
    steps = max(1, int(round(t / dt)))
    h = t / steps
    # signed displacement directions stacked on a leading axis so that any
    # batch axes of the state stay adjacent to the component axis
    signed_eye = np.concatenate((np.eye(dim), -np.eye(dim)), axis=0)
    signed_eye = signed_eye.reshape((2 * dim,) + (1,) * (z.ndim - 1) + (dim,))

    def velocity(state, time):
        scale = fd_step * (1.0 + np.max(np.abs(state), axis=-1, keepdims=True))
        sides = state + scale * signed_eye
        energies = hamiltonian(sides, time)
        grad = (energies[:dim] - energies[dim:]) / (2.0 * np.moveaxis(scale, -1, 0))
        out = np.empty_like(state)
        out[..., 0::2] = np.moveaxis(grad[1::2], 0, -1)
        out[..., 1::2] = -np.moveaxis(grad[0::2], 0, -1)
        return out

    path = None
    if return_path:
        path = np.empty((steps + 1,) + z.shape)
        path[0] = z
    time = 0.0
    for i in range(steps):
        k1 = velocity(z, time)
        k2 = velocity(z + 0.5 * h * k1, time + 0.5 * h)
        k3 = velocity(z + 0.5 * h * k2, time + 0.5 * h)
        k4 = velocity(z + h * k3, time + h)
        z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        time = (i + 1) * h
        if not np.all(np.isfinite(z)):
            raise FlowBlowupError(time)
        if return_path:
            path[i + 1] = z
    if return_path:
        return np.linspace(0.0, t, steps + 1), path
    return z


def symplectic_defect(map_fn: Callable, t: float, z, fd_step: float = 1e-5) -> float:
    """Max-norm defect J^T Sigma J - Sigma of the finite-difference
    Jacobian of `map_fn(t, .)` at z."""
    z = _as_state(z)
    dim = z.shape[-1]
    sigma = symplectic_form(dim // 2)
    scale = fd_step * (1.0 + float(np.max(np.abs(z))))
    disp = scale * np.eye(dim)
    plus = map_fn(t, z[None, :] + disp)
    minus = map_fn(t, z[None, :] - disp)
    jac = (plus - minus).T / (2.0 * scale)
    return float(np.max(np.abs(jac.T @ sigma @ jac - sigma)))


# ----------------------------------------------------------------------
# end-to-end equivalence report
# ----------------------------------------------------------------------


@dataclass
class EquivalenceReport:
    """Outcome of pushing a brute-force charged-particle trajectory through
    the rotating-frame and moving-origin maps and comparing with the plain
    oscillator closed form."""

    max_deviation: float
    invariant_drift: float
    symplectic_defect_rotating: float
    symplectic_defect_moving: float
    phase_times: np.ndarray
    phase_values: np.ndarray
    horizon: float
    dt: float

    @property
    def phase_max_abs(self) -> float:
        return float(np.max(np.abs(self.phase_values)))


def equivalence_report(
    field: StaticField,
    z0,
    horizon: float,
    dt: float = 1e-4,
    symplectic_samples: int = 20,
    seed: int = 0,
) -> EquivalenceReport:
    """Integrate the charge Hamiltonian by the RK4 oracle, map through the
    rotating frame and the moving origin, and compare against the plain
    oscillator propagator."""
    z0 = _as_state(z0)
    params = field.osc_params
    frame = rotating_frame_map(field)
    drive = frame.drive

    steps = max(2, int(round(horizon / dt)))
    steps += steps % 2
    times, oracle = rk4_hamiltonian_flow(
        h1_evaluator(field), z0, horizon, horizon / steps, return_path=True
    )

    angles = field.frame_angle(times)
    c, s = np.cos(angles), np.sin(angles)
    rotated = np.empty_like(oracle)
    rotated[:, 0] = c * oracle[:, 0] - s * oracle[:, 2]
    rotated[:, 2] = s * oracle[:, 0] + c * oracle[:, 2]
    rotated[:, 1] = c * oracle[:, 1] - s * oracle[:, 3]
    rotated[:, 3] = s * oracle[:, 1] + c * oracle[:, 3]
    rotated[:, 4:6] = oracle[:, 4:6]

    origin_path = _forced_path_on(times, params, drive)
    mapped = rotated - origin_path
    reference = block_propagate_path(params, z0, times)
    max_deviation = float(np.max(np.abs(mapped - reference)))

    # homogeneous-orbit invariant <Z, H Z> along the closed-form orbit
    m, w = params.mass, params.omega
    quad_form = (
        m * w * w * (reference[:, 0] ** 2 + reference[:, 2] ** 2)
        + (reference[:, 1] ** 2 + reference[:, 3] ** 2 + reference[:, 5] ** 2) / m
    )
    invariant_drift = float(np.max(np.abs(quad_form - quad_form[0])))

    rng = np.random.default_rng(seed)
    mover = moving_origin_map(params, drive, QuadratureSpec(panels_per_unit=1.0 / dt))
    defect_rot = 0.0
    defect_mov = 0.0
    for _ in range(symplectic_samples):
        ts = rng.uniform(0.0, horizon)
        zs = rng.normal(scale=1.0, size=6)
        defect_rot = max(defect_rot, symplectic_defect(frame.forward, ts, zs))
        defect_mov = max(defect_mov, symplectic_defect(mover.forward, ts, zs))

    phase_values = action_phase_path(params, drive, times)
    stride = max(1, steps // 32)
    return EquivalenceReport(
        max_deviation=max_deviation,
        invariant_drift=invariant_drift,
        symplectic_defect_rotating=defect_rot,
        symplectic_defect_moving=defect_mov,
        phase_times=times[::stride].copy(),
        phase_values=phase_values[::stride].copy(),
        horizon=horizon,
        dt=horizon / steps,
    )
