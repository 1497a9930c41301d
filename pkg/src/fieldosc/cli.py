"""Scenario-driven command-line front end.

Scenario files are flat ``key = value`` text (UTF-8, ``#`` comments).
Every scenario names a ``mode``; remaining keys are validated against the
mode's schema (unknown keys, bad types, and missing required keys are
reported with the offending key and line).  ``run`` executes each
scenario's pipeline, evaluates the module invariants as named checks, and
writes plot-ready CSV artifacts; the exit status is 0 iff every check of
every scenario passes.

CSV artifacts use a one-line header, '.' decimals, and 17-significant-
digit scientific notation so repeated runs are byte-identical.

Example scenario::

    name    = demo
    mode    = classical-equivalence
    b3      = 2.0
    e_field = 0.0, 0.1, 0.0
    z0      = 0.1, 0.0, 0.2, 0.0, 0.0, 0.3
    horizon = 4.0
    dt      = 1e-3
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path

import numpy as np

from .core import OscParams, QuadratureSpec
from .classical import (
    StaticField,
    equivalence_report,
    moving_origin_map,
    rotating_frame_map,
    symplectic_defect,
)
from .quantum import (
    EigenLabel,
    Grid,
    driven_hamiltonian,
    gaussian_wavepacket,
    oscillator_energy,
    oscillator_hamiltonian,
    planar_field_hamiltonian,
    rotated_product_coefficients,
    split_step_evolve,
    unitary_moving_origin,
    unitary_rotation,
    WaveFunction,
)
from .tdfields import (
    FixedAxisField,
    RotatingField,
    accumulated_rotation,
    coriolis_elimination,
    corotating_reduction,
    frame_conjugation_defect,
    hill_monodromy,
    mathieu_hill,
    stability_map,
)

__all__ = [
    "Scenario",
    "CheckResult",
    "RunReport",
    "ScenarioError",
    "parse_scenario",
    "run",
    "wavefunction_rows",
    "main",
]

MODES = (
    "classical-equivalence",
    "quantum-pipeline",
    "eigenstate-expansion",
    "hill-stability",
    "case1",
    "case2",
)


class ScenarioError(ValueError):
    """Config problem, carrying the offending file/line/key."""


@dataclass
class Scenario:
    name: str
    mode: str
    params: dict
    path: str = ""

    def __getitem__(self, key):
        return self.params[key]


@dataclass(frozen=True)
class CheckResult:
    name: str
    defect: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.defect <= self.tolerance


@dataclass
class RunReport:
    scenario: str
    checks: list
    wall_time: float = 0.0
    artifacts: list = dataclass_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# ----------------------------------------------------------------------
# scenario parsing
# ----------------------------------------------------------------------


def _parse_float(text: str) -> float:
    return float(text)


def _parse_int(text: str) -> int:
    return int(text)


def _parse_vec(n: int):
    def parse(text: str):
        parts = [p for p in text.replace(",", " ").split() if p]
        if len(parts) != n:
            raise ValueError(f"expected {n} comma-separated numbers")
        return tuple(float(p) for p in parts)

    return parse


def _positive(what: str):
    def check(value):
        if not (value > 0):
            raise ValueError(f"{what} must be positive")

    return check


def _planar_field(value):
    if value[2] != 0.0:
        raise ValueError("axial electric field is not supported on the planar grid")


# key -> (parser, default or REQUIRED, validator or None)
_REQUIRED = object()

_COMMON_SCHEMA = {
    "name": (str, None, None),
    "seed": (_parse_int, 0, None),
}

_SCHEMAS = {
    "classical-equivalence": {
        "b3": (_parse_float, _REQUIRED, None),
        "e_field": (_parse_vec(3), (0.0, 0.0, 0.0), None),
        "z0": (_parse_vec(6), (0.1, 0.0, 0.2, 0.0, 0.0, 0.1), None),
        "charge": (_parse_float, 1.0, None),
        "mass": (_parse_float, 1.0, _positive("mass")),
        "horizon": (_parse_float, 4.0, _positive("horizon")),
        "dt": (_parse_float, 1e-3, _positive("dt")),
        "deviation_tol": (_parse_float, 1e-6, _positive("deviation_tol")),
    },
    "quantum-pipeline": {
        "b3": (_parse_float, _REQUIRED, None),
        "e_field": (_parse_vec(3), (0.0, 0.0, 0.0), _planar_field),
        "grid_n": (_parse_int, 128, _positive("grid_n")),
        "grid_x": (_parse_float, 8.0, _positive("grid_x")),
        "time": (_parse_float, 1.0, _positive("time")),
        "dt": (_parse_float, 1e-3, _positive("dt")),
        "center": (_parse_vec(2), (0.5, -0.3), None),
        "momentum": (_parse_vec(2), (0.3, 0.1), None),
        "width": (_parse_float, 0.8, _positive("width")),
        "hbar": (_parse_float, 1.0, _positive("hbar")),
        "link_tol": (_parse_float, 1e-4, _positive("link_tol")),
    },
    "eigenstate-expansion": {
        "theta": (_parse_float, 0.6, None),
        "max_level": (_parse_int, 4, _positive("max_level")),
    },
    "hill-stability": {
        "a_min": (_parse_float, 0.2, None),
        "a_max": (_parse_float, 2.2, None),
        "a_count": (_parse_int, 21, _positive("a_count")),
        "q_min": (_parse_float, 0.0, None),
        "q_max": (_parse_float, 0.4, None),
        "q_count": (_parse_int, 5, _positive("q_count")),
        "n_steps": (_parse_int, 2048, _positive("n_steps")),
    },
    "case1": {
        "b3_const": (_parse_float, 1.0, None),
        "b3_cos_amp": (_parse_float, 0.5, None),
        "b3_cos_freq": (_parse_float, 1.0, None),
        "charge": (_parse_float, 1.0, None),
        "mass": (_parse_float, 1.0, _positive("mass")),
        "time": (_parse_float, 3.0, _positive("time")),
        "ode_steps": (_parse_int, 20000, _positive("ode_steps")),
    },
    "case2": {
        "b1": (_parse_float, 0.7, None),
        "b3": (_parse_float, 1.1, None),
        "alpha": (_parse_float, 0.9, None),
        "charge": (_parse_float, 1.0, None),
        "mass": (_parse_float, 1.0, _positive("mass")),
        "samples": (_parse_int, 16, _positive("samples")),
    },
}


def parse_scenario(path) -> Scenario:
    """Parse and validate a scenario file; diagnostic messages carry the
    file, line number, and offending key."""
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"{path}: no such scenario file")
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ScenarioError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key in raw:
            raise ScenarioError(f"{path}:{lineno}: duplicate key '{key}'")
        raw[key] = (value.strip(), lineno)

    if "mode" not in raw:
        raise ScenarioError(f"{path}: missing required key 'mode'")
    mode, mode_line = raw.pop("mode")
    if mode not in MODES:
        raise ScenarioError(
            f"{path}:{mode_line}: key 'mode': unknown mode '{mode}' "
            f"(expected one of {', '.join(MODES)})"
        )

    schema = dict(_COMMON_SCHEMA)
    schema.update(_SCHEMAS[mode])
    params: dict = {}
    for key, (text, lineno) in raw.items():
        if key not in schema:
            raise ScenarioError(f"{path}:{lineno}: unknown key '{key}' for mode '{mode}'")
        parser, _, validator = schema[key]
        try:
            value = parser(text)
            if validator is not None:
                validator(value)
        except ScenarioError:
            raise
        except Exception as exc:
            raise ScenarioError(f"{path}:{lineno}: key '{key}': {exc}") from None
        params[key] = value
    for key, (parser, default, validator) in schema.items():
        if key in params:
            continue
        if default is _REQUIRED:
            raise ScenarioError(f"{path}: missing required key '{key}' for mode '{mode}'")
        params[key] = default

    name = params.pop("name") or path.stem
    return Scenario(name=name, mode=mode, params=params, path=str(path))


# ----------------------------------------------------------------------
# CSV artifacts
# ----------------------------------------------------------------------


def _fmt(value) -> str:
    # 17 significant digits: round-trip exact for float64
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".16e")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def wavefunction_rows(wf: WaveFunction):
    """Rows (x[, y], re, im, abs2) of a wavefunction snapshot."""
    values = wf.values
    if wf.grid.dims == 1:
        for x, v in zip(wf.grid.axis(), values):
            yield (x, v.real, v.imag, abs(v) ** 2)
    else:
        ax = wf.grid.axis()
        for i in range(wf.grid.n):
            for j in range(wf.grid.n):
                v = values[i, j]
                yield (ax[i], ax[j], v.real, v.imag, abs(v) ** 2)


# ----------------------------------------------------------------------
# mode pipelines
# ----------------------------------------------------------------------


def _run_classical(sc: Scenario, out: Path | None, scale: float):
    p = sc.params
    field = StaticField(b3=p["b3"], e=p["e_field"], charge=p["charge"], mass=p["mass"])
    report = equivalence_report(
        field, np.array(p["z0"]), p["horizon"], dt=p["dt"], seed=p["seed"]
    )
    checks = [
        CheckResult("equivalence-deviation", report.max_deviation, scale * p["deviation_tol"]),
        CheckResult("homogeneous-invariant", report.invariant_drift, scale * 1e-10),
        CheckResult("symplectic-rotating-frame", report.symplectic_defect_rotating, scale * 1e-8),
        CheckResult("symplectic-moving-origin", report.symplectic_defect_moving, scale * 1e-8),
    ]
    if all(c == 0.0 for c in p["e_field"]):
        checks.append(CheckResult("phase-vanishes-without-e", report.phase_max_abs, scale * 1e-12))
    artifacts = []
    if out is not None:
        from .classical import block_propagate_path, forced_path, _rotate_pairs

        params = field.osc_params
        steps = 1000
        times = np.linspace(0.0, p["horizon"], steps + 1)
        closed = block_propagate_path(params, np.array(p["z0"]), times)
        in_frame = closed + forced_path(params, field.rotated_drive(), times)
        rows = []
        for t, z in zip(times, in_frame):
            z1 = _rotate_pairs(z, -field.frame_angle(t))
            rows.append((t, *z1))
        traj_path = out / f"{sc.name}_trajectory.csv"
        _write_csv(
            traj_path,
            ["t", "q1", "p1", "q2", "p2", "q3", "p3"],
            rows,
        )
        phase_path = out / f"{sc.name}_phase.csv"
        _write_csv(
            phase_path,
            ["t", "action_phase"],
            zip(report.phase_times, report.phase_values),
        )
        artifacts.extend([traj_path, phase_path])
    return checks, artifacts


def _run_quantum(sc: Scenario, out: Path | None, scale: float):
    p = sc.params
    field = StaticField(b3=p["b3"], e=p["e_field"])
    params = field.osc_params
    drive = field.rotated_drive()
    grid = Grid(dims=2, n=p["grid_n"], half_width=p["grid_x"])
    psi0 = gaussian_wavepacket(
        grid, center=p["center"], momentum=p["momentum"], width=p["width"], hbar=p["hbar"]
    )
    T, dt = p["time"], p["dt"]
    quad = QuadratureSpec(panels_per_unit=2000)

    phi3 = split_step_evolve(psi0, oscillator_hamiltonian(params, p["hbar"]), T, dt)
    mover = moving_origin_map(params, drive, quad)
    phi2_via = unitary_moving_origin(phi3, T, mover)
    phi2 = split_step_evolve(psi0, driven_hamiltonian(params, drive, p["hbar"]), T, dt)
    psi1_via = unitary_rotation(phi2, T, 0.5 * field.cyclotron_rate)
    psi1 = split_step_evolve(psi0, planar_field_hamiltonian(field, p["hbar"]), T, dt)

    checks = [
        CheckResult("moving-origin-link", phi2_via.distance(phi2), scale * p["link_tol"]),
        CheckResult("rotating-frame-link", psi1_via.distance(psi1), scale * p["link_tol"]),
        CheckResult("norm-preservation", abs(psi1.norm() - 1.0), scale * 1e-6),
    ]
    drive_free = p["e_field"][0] == 0.0 and p["e_field"][1] == 0.0
    if drive_free:
        checks.append(
            CheckResult("moving-origin-identity", phi2_via.distance(phi3), scale * 1e-12)
        )
    artifacts = []
    if out is not None:
        wf_path = out / f"{sc.name}_wavefunction.csv"
        _write_csv(wf_path, ["x", "y", "re", "im", "abs2"], wavefunction_rows(psi1))
        artifacts.append(wf_path)
    return checks, artifacts


def _run_expansion(sc: Scenario, out: Path | None, scale: float):
    p = sc.params
    theta = p["theta"]
    rows = []
    ortho_defect = 0.0
    leak = 0.0
    for level in range(1, p["max_level"] + 1):
        mat = np.zeros((level + 1, level + 1))
        for k1 in range(level + 1):
            coeffs = rotated_product_coefficients(k1, level - k1, theta)
            leak = max(leak, coeffs.leakage)
            for (m1, m2), c in coeffs.items():
                mat[k1, m1] = c
                rows.append((level, k1, level - k1, m1, m2, c))
        ortho_defect = max(
            ortho_defect, float(np.max(np.abs(mat @ mat.T - np.eye(level + 1))))
        )
    one = rotated_product_coefficients(1, 0, theta)
    level1_defect = max(
        abs(one.get((1, 0)) - math.cos(theta)), abs(one.get((0, 1)) - math.sin(theta))
    )
    params = OscParams(1.0, 1.0)
    degeneracy = 0.0
    for level in range(1, p["max_level"] + 1):
        energies = [
            oscillator_energy(EigenLabel(k, level - k), params, 1.0)
            for k in range(level + 1)
        ]
        degeneracy = max(degeneracy, max(energies) - min(energies))
    checks = [
        CheckResult("level-orthogonality", ortho_defect, scale * 1e-8),
        CheckResult("single-quantum-rotation", level1_defect, scale * 1e-10),
        CheckResult("off-level-leakage", leak, scale * 1e-10),
        CheckResult("degeneracy-consistency", degeneracy, scale * 1e-12),
    ]
    artifacts = []
    if out is not None:
        path = out / f"{sc.name}_coefficients.csv"
        _write_csv(path, ["level", "k1", "k2", "m1", "m2", "coeff"], rows)
        artifacts.append(path)
    return checks, artifacts


def _run_hill(sc: Scenario, out: Path | None, scale: float):
    p = sc.params
    a_values = np.linspace(p["a_min"], p["a_max"], p["a_count"])
    q_values = np.linspace(p["q_min"], p["q_max"], p["q_count"])
    rows = stability_map(
        lambda a, q, t: a + 2.0 * q * np.cos(2.0 * t),
        math.pi,
        a_values,
        q_values,
        n_steps=p["n_steps"],
    )
    det_defect = 0.0
    const_defect = 0.0
    for row in rows:
        rep = None
        if row.param2 == 0.0 and row.param1 > 0:
            rep = hill_monodromy(mathieu_hill(row.param1, 0.0), dt=math.pi / p["n_steps"])
            const_defect = max(
                const_defect,
                abs(rep.trace - 2.0 * math.cos(math.sqrt(row.param1) * math.pi)),
            )
            det_defect = max(det_defect, abs(rep.det - 1.0))
    rep = hill_monodromy(mathieu_hill(1.2, 0.25), dt=math.pi / p["n_steps"])
    det_defect = max(det_defect, abs(rep.det - 1.0))
    checks = [
        CheckResult("monodromy-determinant", det_defect, scale * 1e-8),
        CheckResult("constant-frequency-trace", const_defect, scale * 1e-8),
    ]
    artifacts = []
    if out is not None:
        path = out / f"{sc.name}_stability.csv"
        _write_csv(
            path,
            ["param1", "param2", "trace", "classification"],
            [(r.param1, r.param2, r.trace, r.classification) for r in rows],
        )
        artifacts.append(path)
    return checks, artifacts


def _run_case1(sc: Scenario, out: Path | None, scale: float):
    p = sc.params
    const, amp, freq = p["b3_const"], p["b3_cos_amp"], p["b3_cos_freq"]

    def b3(t):
        return const + amp * np.cos(freq * np.asarray(t, dtype=float))

    field = FixedAxisField(b3=b3, charge=p["charge"], mass=p["mass"])
    T = p["time"]
    n = p["ode_steps"]
    h = T / n
    from .core import cross_matrix

    r = np.eye(3)
    for i in range(n):
        t = i * h

        def gen(tt):
            return cross_matrix((0.0, 0.0, float(field.rate(tt))))

        k1 = gen(t) @ r
        k2 = gen(t + 0.5 * h) @ (r + 0.5 * h * k1)
        k3 = gen(t + 0.5 * h) @ (r + 0.5 * h * k2)
        k4 = gen(t + h) @ (r + h * k3)
        r = r + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    closed = accumulated_rotation(field, T)
    ortho = float(np.max(np.abs(closed.T @ closed - np.eye(3))))
    checks = [
        CheckResult("closed-form-vs-ode", float(np.max(np.abs(closed - r))), scale * 1e-6),
        CheckResult("rotation-orthogonality", ortho, scale * 1e-12),
    ]
    artifacts = []
    if out is not None:
        samples = np.linspace(0.0, T, 33)
        rows = []
        for t in samples:
            m = accumulated_rotation(field, float(t))
            rows.append((t, *m.ravel()))
        path = out / f"{sc.name}_rotation.csv"
        _write_csv(
            path,
            ["t"] + [f"r{i}{j}" for i in range(3) for j in range(3)],
            rows,
        )
        artifacts.append(path)
    return checks, artifacts


def _run_case2(sc: Scenario, out: Path | None, scale: float):
    p = sc.params
    field = RotatingField(
        b1=p["b1"], b3=p["b3"], alpha=p["alpha"], charge=p["charge"], mass=p["mass"]
    )
    reduced, cmap3 = corotating_reduction(field)
    system, cmap4 = coriolis_elimination(reduced)
    rng = np.random.default_rng(p["seed"])
    period = system.period if math.isfinite(system.period) else 2.0 * math.pi

    conj = max(
        frame_conjugation_defect(field, t)
        for t in np.linspace(0.0, period, p["samples"])
    )
    antisym = float(np.max(np.abs(reduced.coriolis + reduced.coriolis.T)))
    sym_defect = 0.0
    psd_defect = 0.0
    for t in np.linspace(0.0, period, p["samples"]):
        s = system.omega_sq_matrix(float(t))
        sym_defect = max(sym_defect, float(np.max(np.abs(s - s.T))))
        psd_defect = max(psd_defect, max(0.0, -float(np.min(np.linalg.eigvalsh(s)))))
    period_defect = float(
        np.max(np.abs(system.omega_sq_matrix(0.37 + period) - system.omega_sq_matrix(0.37)))
    )
    map_defect = 0.0
    for _ in range(p["samples"]):
        t = rng.uniform(0.0, period)
        z = rng.normal(size=6)
        map_defect = max(map_defect, symplectic_defect(cmap3.forward, t, z))
        map_defect = max(map_defect, symplectic_defect(cmap4.forward, t, z))
    checks = [
        CheckResult("generator-conjugation", conj, scale * 1e-10),
        CheckResult("coriolis-antisymmetry", antisym, scale * 1e-15),
        CheckResult("stiffness-symmetry", sym_defect, scale * 1e-12),
        CheckResult("stiffness-positive", psd_defect, scale * 1e-10),
        CheckResult("stiffness-period", period_defect, scale * 1e-10),
        CheckResult("symplectic-reductions", map_defect, scale * 1e-8),
    ]
    artifacts = []
    if out is not None:
        rows = []
        for t in np.linspace(0.0, period, 33):
            s = system.omega_sq_matrix(float(t))
            rows.append((t, *s.ravel()))
        path = out / f"{sc.name}_stiffness.csv"
        _write_csv(
            path,
            ["t"] + [f"s{i}{j}" for i in range(3) for j in range(3)],
            rows,
        )
        artifacts.append(path)
    return checks, artifacts


_RUNNERS = {
    "classical-equivalence": _run_classical,
    "quantum-pipeline": _run_quantum,
    "eigenstate-expansion": _run_expansion,
    "hill-stability": _run_hill,
    "case1": _run_case1,
    "case2": _run_case2,
}


def run(
    scenario: Scenario,
    out_dir=None,
    tolerance_scale: float = 1.0,
    check_only: bool = False,
) -> RunReport:
    """Execute one scenario; write artifacts unless check_only."""
    out = None
    if not check_only:
        out = Path(out_dir) if out_dir is not None else Path("out")
        out.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    checks, artifacts = _RUNNERS[scenario.mode](scenario, out, tolerance_scale)
    return RunReport(
        scenario=scenario.name,
        checks=checks,
        wall_time=time.perf_counter() - started,
        artifacts=[str(a) for a in artifacts],
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fieldosc",
        description="Run field/oscillator equivalence scenarios and verification checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run scenario config files")
    runp.add_argument("configs", nargs="+", help="scenario files (key = value text)")
    runp.add_argument("--out-dir", default="out", help="directory for CSV artifacts")
    runp.add_argument(
        "--check-only", action="store_true", help="evaluate checks, write no artifacts"
    )
    runp.add_argument("--threads", type=int, default=1, help="scenario worker pool size")
    runp.add_argument(
        "--tolerance-scale",
        type=float,
        default=1.0,
        help="multiply every check tolerance by this factor",
    )
    args = parser.parse_args(argv)

    try:
        scenarios = [parse_scenario(p) for p in args.configs]
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    names = [s.name for s in scenarios]
    if len(set(names)) != len(names):
        print("error: scenario names must be unique within a batch", file=sys.stderr)
        return 2

    def execute(sc: Scenario) -> RunReport:
        return run(
            sc,
            out_dir=args.out_dir,
            tolerance_scale=args.tolerance_scale,
            check_only=args.check_only,
        )

    if args.threads > 1 and len(scenarios) > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = list(pool.map(execute, scenarios))
    else:
        reports = [execute(sc) for sc in scenarios]

    reports.sort(key=lambda r: r.scenario)
    failures = 0
    for report in reports:
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            if not check.passed:
                failures += 1
            print(
                f"[{status}] {report.scenario}: {check.name} "
                f"(defect {check.defect:.3e} vs tolerance {check.tolerance:.3e})"
            )
        print(
            f"-- {report.scenario}: "
            f"{'ok' if report.passed else 'FAILED'} in {report.wall_time:.2f} s"
        )
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
