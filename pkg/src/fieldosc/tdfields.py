"""Time-dependent magnetic fields: fixed-direction and rotating cases,
their canonical reductions, and Hill/Floquet stability analysis.

Case I (fixed direction, varying magnitude) reduces to an oscillator whose
frequency is half the instantaneous rotation rate; Case II (field rotating
about the z axis) reduces in two steps -- into the co-rotating frame and
then through the elimination of the Coriolis-like momentum coupling -- to
a three-degree oscillator with a time-periodic stiffness matrix.  Neither
case routes into the static closed-form solver: the terminal object is a
Hill system handed to the monodromy machinery below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .core import QuadratureSpec, composite_simpson, cross_matrix, rotation_about_z
from .classical import CanonicalMap, _rotate_pairs

__all__ = [
    "FixedAxisField",
    "RotatingField",
    "HillSystem",
    "VectorHillSystem",
    "MonodromyReport",
    "ReducedQuadraticHamiltonian",
    "StabilityRow",
    "accumulated_rotation",
    "fixed_axis_hill",
    "rotating_field_generator",
    "frame_conjugation_defect",
    "h4_evaluator",
    "corotating_reduction",
    "coriolis_elimination",
    "rotation_about_axis",
    "mathieu_hill",
    "hill_monodromy",
    "stability_map",
    "bisect_stability_boundary",
]


def _eval_time_function(fn: Callable, t) -> np.ndarray:
    """Evaluate a scalar function of time on scalars or arrays."""
    t = np.asarray(t, dtype=float)
    out = np.asarray(fn(t), dtype=float)
    if out.shape != t.shape:
        out = np.vectorize(fn, otypes=[float])(t)
    return out


@dataclass(frozen=True)
class FixedAxisField:
    """Magnetic field of fixed direction z_hat with magnitude b3(t)."""

    b3: Callable
    e0: Callable | None = None
    charge: float = 1.0
    mass: float = 1.0

    def rate(self, t):
        """Instantaneous rotation rate q*B3(t)/m."""
        return self.charge * _eval_time_function(self.b3, t) / self.mass


@dataclass(frozen=True)
class RotatingField:
    """Magnetic field rotating about z: B(t) = R_z(alpha t) (B1, 0, B3)."""

    b1: float
    b3: float
    alpha: float
    e0: Callable | None = None
    charge: float = 1.0
    mass: float = 1.0

    def rate_vector(self, t: float = 0.0) -> np.ndarray:
        """Cyclotron-scaled field vector (q/m) B(t)."""
        scale = self.charge / self.mass
        c, s = math.cos(self.alpha * t), math.sin(self.alpha * t)
        return scale * np.array([self.b1 * c, self.b1 * s, self.b3])


def accumulated_rotation(
    field: FixedAxisField, t: float, quad: QuadratureSpec = QuadratureSpec()
) -> np.ndarray:
    """Closed-form frame rotation for the fixed-axis case: rotation about z
    by the accumulated angle int_0^t q*B3(s)/m ds.

    Valid because the generator commutes with itself at different times;
    the tests confirm it against direct integration of dR/dt = W(t) R(t).
    """
    if t == 0.0:
        return np.eye(3)
    n = quad.panels(t)
    times = np.linspace(0.0, t, n + 1)
    angle = float(composite_simpson(field.rate(times), times[1] - times[0]))
    return rotation_about_z(angle)


def fixed_axis_hill(field: FixedAxisField, period: float) -> "HillSystem":
    """Reduced planar dynamics of the fixed-axis case: an oscillator whose
    frequency is half the instantaneous rotation rate, i.e. a Hill system
    with omega^2(t) = (q B3(t) / 2m)^2."""

    def omega_sq(t):
        half = 0.5 * field.rate(t)
        return half * half

    return HillSystem(omega_sq=omega_sq, period=period)


# ----------------------------------------------------------------------
# rotating field: generator and reductions
# ----------------------------------------------------------------------


def rotating_field_generator(field: RotatingField, t: float) -> np.ndarray:
    """Antisymmetric generator at time t: the cross-product matrix of the
    cyclotron-scaled rotating field vector (all entries scaled by q/m)."""
    return cross_matrix(field.rate_vector(t))


def frame_conjugation_defect(field: RotatingField, t: float) -> float:
    """Max-norm defect of R(t)^T W(t) R(t) - W(0), where R(t) is the frame
    rotation by alpha*t.  Zero means the generator is the rotated image of
    its initial value (the rigid-rotation identity)."""
    r = rotation_about_z(field.alpha * t)
    w_t = rotating_field_generator(field, t)
    w_0 = rotating_field_generator(field, 0.0)
    return float(np.max(np.abs(r.T @ w_t @ r - w_0)))


def h4_evaluator(field: RotatingField) -> Callable:
    """Vectorized energy of a charge in the rotating field:
    |p - (m/2) W(t) x|^2 / 2m - q <x, E0(t)>, with W the cyclotron-scaled
    generator.  Broadcasts over leading axes of z."""
    m, q = field.mass, field.charge

    def evaluate(z, t):
        w = rotating_field_generator(field, float(t))
        x = z[..., 0::2]
        p = z[..., 1::2]
        v = p - 0.5 * m * (x @ w.T)
        kinetic = np.sum(v * v, axis=-1) / (2.0 * m)
        if field.e0 is None:
            return kinetic
        e = np.asarray(field.e0(float(t)), dtype=float)
        return kinetic - q * (x @ e)

    return evaluate


@dataclass(frozen=True)
class ReducedQuadraticHamiltonian:
    """Rotating-field dynamics seen from the co-rotating frame:

        P^2/2m - <P, M Q> + (m/8) <Q, W0^T W0 Q> - q <Q, E1(t)>

    with M = W0/2 + L antisymmetric (L the frame generator) and
    E1(t) = R(-alpha t) E0(t).  `axis` and `speed` describe the rotation
    group generated by M.
    """

    mass: float
    charge: float
    coriolis: np.ndarray
    omega1_0: np.ndarray
    alpha: float
    e0: Callable | None = None

    @property
    def stiffness_form(self) -> np.ndarray:
        """Symmetric PSD matrix W0^T W0 of the quadratic potential."""
        return self.omega1_0.T @ self.omega1_0

    @property
    def axis_vector(self) -> np.ndarray:
        m = self.coriolis
        return np.array([m[2, 1], m[0, 2], m[1, 0]])

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.axis_vector))

    @property
    def axis(self) -> np.ndarray:
        v = self.axis_vector
        s = self.speed
        return v / s if s > 0 else v

    def rotated_e1(self, t: float) -> np.ndarray:
        if self.e0 is None:
            return np.zeros(3)
        return rotation_about_z(-self.alpha * t) @ np.asarray(self.e0(t), dtype=float)

    def value(self, z, t) -> np.ndarray:
        q_ = z[..., 0::2]
        p_ = z[..., 1::2]
        kinetic = np.sum(p_ * p_, axis=-1) / (2.0 * self.mass)
        cross = -np.sum(p_ * (q_ @ self.coriolis.T), axis=-1)
        w = self.stiffness_form
        potential = (self.mass / 8.0) * np.sum(q_ * (q_ @ w.T), axis=-1)
        electric = -self.charge * (q_ @ self.rotated_e1(float(t)))
        return kinetic + cross + potential + electric


def corotating_reduction(field: RotatingField) -> tuple[ReducedQuadraticHamiltonian, CanonicalMap]:
    """Canonical pass into the frame in which the field direction is fixed.

    Returns the reduced Hamiltonian data and the map (Q, P) = (R(-at) x,
    R(-at) p) as a CanonicalMap on interleaved phase states.
    """
    w0 = rotating_field_generator(field, 0.0)
    lam = cross_matrix((0.0, 0.0, field.alpha))
    reduced = ReducedQuadraticHamiltonian(
        mass=field.mass,
        charge=field.charge,
        coriolis=0.5 * w0 + lam,
        omega1_0=w0,
        alpha=field.alpha,
        e0=field.e0,
    )

    def forward(t, z):
        return _rotate_pairs(np.asarray(z, dtype=float), -field.alpha * t)

    def inverse(t, z):
        return _rotate_pairs(np.asarray(z, dtype=float), field.alpha * t)

    cmap = CanonicalMap(
        forward=forward,
        inverse=inverse,
        phase_A=lambda t: 0.0,
        label="corotating",
    )
    return reduced, cmap


def rotation_about_axis(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation by `angle` about a unit `axis`."""
    n = np.asarray(axis, dtype=float)
    k = cross_matrix(n)
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def _apply_linear_pairs(z: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Apply the same 3x3 linear map to positions and momenta of an
    interleaved state (broadcasts over leading axes)."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    out[..., 0::2] = z[..., 0::2] @ a.T
    out[..., 1::2] = z[..., 1::2] @ a.T
    return out


def coriolis_elimination(
    reduced: ReducedQuadraticHamiltonian,
) -> tuple["VectorHillSystem", CanonicalMap]:
    """Remove the <P, M Q> coupling with the rotation group G(t) = exp(tM).

    What remains is kinetic energy plus the time-periodic quadratic
    potential (m/8) <x', S(t) x'> with S(t) = G(t) W0^T W0 G(t)^T, i.e. a
    three-degree Hill system with stiffness period 2 pi / speed.
    """
    axis, speed = reduced.axis, reduced.speed
    w = reduced.stiffness_form

    def group(t: float) -> np.ndarray:
        if speed == 0.0:
            return np.eye(3)
        return rotation_about_axis(axis, speed * t)

    def omega_sq_matrix(t: float) -> np.ndarray:
        g = group(t)
        return 0.25 * (g @ w @ g.T)

    period = 2.0 * math.pi / speed if speed > 0 else math.inf
    system = VectorHillSystem(
        mass=reduced.mass,
        omega_sq_matrix=omega_sq_matrix,
        period=period,
        axis=axis,
        speed=speed,
    )

    def forward(t, z):
        return _apply_linear_pairs(z, group(t))

    def inverse(t, z):
        return _apply_linear_pairs(z, group(t).T)

    cmap = CanonicalMap(
        forward=forward,
        inverse=inverse,
        phase_A=lambda t: 0.0,
        label="coriolis-elimination",
    )
    return system, cmap


# ----------------------------------------------------------------------
# Hill systems and Floquet analysis
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class HillSystem:
    """Scalar Hill equation x'' + omega_sq(t) x = 0 with period T."""

    omega_sq: Callable
    period: float
    drive: Callable | None = None

    def __post_init__(self):
        if not (self.period > 0):
            raise ValueError("period must be positive")

    def omega_sq_values(self, t) -> np.ndarray:
        return _eval_time_function(self.omega_sq, t)


@dataclass(frozen=True)
class VectorHillSystem:
    """Three-degree oscillator with a time-periodic stiffness matrix."""

    mass: float
    omega_sq_matrix: Callable
    period: float
    axis: np.ndarray
    speed: float

    def scalar_modes(self) -> list[HillSystem]:
        """Per-axis Hill systems: the diagonal entries of the rotating
        stiffness (mode coupling is dropped in this projection)."""
        if not math.isfinite(self.period):
            raise ValueError("scalar modes need a finite stiffness period")
        systems = []
        for i in range(3):
            def omega_sq(t, _i=i):
                t = np.asarray(t, dtype=float)
                if t.ndim == 0:
                    return self.omega_sq_matrix(float(t))[_i, _i]
                return np.array([self.omega_sq_matrix(float(s))[_i, _i] for s in t])

            systems.append(HillSystem(omega_sq=omega_sq, period=self.period))
        return systems


@dataclass(frozen=True)
class MonodromyReport:
    """One-period fundamental solution of a Hill equation and its Floquet
    classification: |trace| < 2 stable, > 2 unstable, = 2 marginal."""

    matrix: np.ndarray
    trace: float
    det: float
    classification: str
    floquet_exponents: tuple
    period: float


def mathieu_hill(a: float, q: float) -> HillSystem:
    """Mathieu stiffness omega^2(t) = a + 2 q cos(2t), period pi."""
    return HillSystem(omega_sq=lambda t: a + 2.0 * q * np.cos(2.0 * t), period=math.pi)


def _monodromy_matrices(
    omega_sq_values: Callable, period: float, n_steps: int
) -> np.ndarray:
    """RK4 fundamental solutions of x'' + w2(t) x = 0 over one period.

    `omega_sq_values(t)` may return a scalar or a batch (B,); the result
    has shape (..., 2, 2) accordingly.  Runs vectorized over the batch.
    """
    h = period / n_steps
    w2_0 = np.asarray(omega_sq_values(0.0), dtype=float)
    shape = w2_0.shape
    y11 = np.ones(shape)
    y12 = np.zeros(shape)
    y21 = np.zeros(shape)
    y22 = np.ones(shape)

    def rhs(w2, a, b, c, d):
        # derivative of [[a, b], [c, d]] under [[0, 1], [-w2, 0]]
        return c, d, -w2 * a, -w2 * b

    for i in range(n_steps):
        t = i * h
        w2_a = np.asarray(omega_sq_values(t), dtype=float)
        w2_b = np.asarray(omega_sq_values(t + 0.5 * h), dtype=float)
        w2_c = np.asarray(omega_sq_values(t + h), dtype=float)
        k1 = rhs(w2_a, y11, y12, y21, y22)
        k2 = rhs(
            w2_b,
            y11 + 0.5 * h * k1[0],
            y12 + 0.5 * h * k1[1],
            y21 + 0.5 * h * k1[2],
            y22 + 0.5 * h * k1[3],
        )
        k3 = rhs(
            w2_b,
            y11 + 0.5 * h * k2[0],
            y12 + 0.5 * h * k2[1],
            y21 + 0.5 * h * k2[2],
            y22 + 0.5 * h * k2[3],
        )
        k4 = rhs(
            w2_c,
            y11 + h * k3[0],
            y12 + h * k3[1],
            y21 + h * k3[2],
            y22 + h * k3[3],
        )
        y11 = y11 + (h / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y12 = y12 + (h / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        y21 = y21 + (h / 6.0) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        y22 = y22 + (h / 6.0) * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
    return np.stack(
        [np.stack([y11, y12], axis=-1), np.stack([y21, y22], axis=-1)], axis=-2
    )


def _classify(trace: float, marginal_tol: float) -> str:
    if not math.isfinite(trace):
        return "unstable"
    if abs(trace) < 2.0 - marginal_tol:
        return "stable"
    if abs(trace) > 2.0 + marginal_tol:
        return "unstable"
    return "marginal"


def hill_monodromy(
    sys: HillSystem,
    dt: float | None = None,
    marginal_tol: float = 1e-9,
) -> MonodromyReport:
    """Integrate the fundamental solution over one period (RK4, default
    step T/4096) and classify stability from the monodromy trace."""
    if dt is None:
        n_steps = 4096
    else:
        n_steps = int(round(sys.period / dt))
        if n_steps < 1 or abs(n_steps * dt - sys.period) > 1e-9 * sys.period:
            raise ValueError("dt must divide the period")
    matrix = _monodromy_matrices(sys.omega_sq_values, sys.period, n_steps)
    if not np.all(np.isfinite(matrix)):
        return MonodromyReport(
            matrix=matrix,
            trace=math.inf,
            det=math.nan,
            classification="unstable",
            floquet_exponents=(complex(math.inf), complex(math.inf)),
            period=sys.period,
        )
    trace = float(matrix[0, 0] + matrix[1, 1])
    det = float(matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0])
    half = trace / 2.0
    disc = complex(half * half - 1.0) ** 0.5
    # larger root first, partner via det = 1 (avoids cancellation)
    mu1 = half + disc if abs(half + disc) >= abs(half - disc) else half - disc
    multipliers = (mu1, 1.0 / mu1)
    exponents = tuple(np.log(complex(mu)) / sys.period for mu in multipliers)
    return MonodromyReport(
        matrix=matrix,
        trace=trace,
        det=det,
        classification=_classify(trace, marginal_tol),
        floquet_exponents=exponents,
        period=sys.period,
    )


class StabilityRow(NamedTuple):
    param1: float
    param2: float
    trace: float
    classification: str


def stability_map(
    omega_sq_family: Callable,
    period: float,
    param1: Sequence[float],
    param2: Sequence[float],
    n_steps: int = 4096,
    marginal_tol: float = 1e-9,
) -> list[StabilityRow]:
    """Classify every point of a parameter grid.

    `omega_sq_family(p1, p2, t)` must broadcast over arrays of parameters;
    the whole grid is integrated as one batch.  Rows come out in row-major
    (param1-major) order.
    """
    p1g, p2g = np.meshgrid(
        np.asarray(param1, dtype=float), np.asarray(param2, dtype=float), indexing="ij"
    )
    p1f, p2f = p1g.ravel(), p2g.ravel()
    matrices = _monodromy_matrices(
        lambda t: np.asarray(omega_sq_family(p1f, p2f, t), dtype=float),
        period,
        n_steps,
    )
    traces = matrices[..., 0, 0] + matrices[..., 1, 1]
    return [
        StabilityRow(float(a), float(b), float(tr), _classify(float(tr), marginal_tol))
        for a, b, tr in zip(p1f, p2f, traces)
    ]


def bisect_stability_boundary(
    make_system: Callable,
    lo: float,
    hi: float,
    tol: float = 1e-3,
    dt: float | None = None,
) -> float:
    """Locate a stability-boundary crossing of |trace| - 2 by bisection.

    `make_system(p)` returns a HillSystem; lo and hi must bracket a sign
    change of |trace| - 2.
    """

    def excess(p: float) -> float:
        return abs(hill_monodromy(make_system(p), dt=dt).trace) - 2.0

    f_lo, f_hi = excess(lo), excess(hi)
    if f_lo * f_hi > 0:
        raise ValueError(f"no sign change in [{lo:g}, {hi:g}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = excess(mid)
        if f_lo * f_mid <= 0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)
