#!/usr/bin/env python3
"""Evolve one initial wavepacket three ways (plain oscillator, driven
oscillator, planar charged particle) and confirm the unitary maps carry
each solution onto the next."""

import argparse

from fieldosc.core import QuadratureSpec
from fieldosc.classical import StaticField, moving_origin_map
from fieldosc.quantum import (
    Grid,
    driven_hamiltonian,
    gaussian_wavepacket,
    oscillator_hamiltonian,
    planar_field_hamiltonian,
    split_step_evolve,
    unitary_moving_origin,
    unitary_rotation,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--b3", type=float, default=2.6)
    parser.add_argument("--e", type=float, nargs=2, default=(0.12, -0.08),
                        metavar=("E1", "E2"), help="planar electric field")
    parser.add_argument("--n", type=int, default=128, help="grid points per axis")
    parser.add_argument("--x", type=float, default=8.0, help="grid half-width")
    parser.add_argument("--time", type=float, default=1.0)
    parser.add_argument("--dt", type=float, default=1e-3)
    args = parser.parse_args()

    field = StaticField(b3=args.b3, e=(args.e[0], args.e[1], 0.0))
    params = field.osc_params
    drive = field.rotated_drive()
    grid = Grid(dims=2, n=args.n, half_width=args.x)
    psi0 = gaussian_wavepacket(grid, (0.5, -0.3), (0.3, 0.1), 0.8)
    quad = QuadratureSpec(panels_per_unit=2000)
    t, dt = args.time, args.dt

    print(f"grid {args.n}x{args.n}, half-width {args.x}, t = {t}, dt = {dt}")
    phi3 = split_step_evolve(psi0, oscillator_hamiltonian(params), t, dt)
    phi2 = split_step_evolve(psi0, driven_hamiltonian(params, drive), t, dt)
    psi1 = split_step_evolve(psi0, planar_field_hamiltonian(field), t, dt)

    mover = moving_origin_map(params, drive, quad)
    link_a = unitary_moving_origin(phi3, t, mover).distance(phi2)
    link_b = unitary_rotation(phi2, t, 0.5 * field.cyclotron_rate).distance(psi1)
    print(f"oscillator -> driven link distance : {link_a:.3e}")
    print(f"driven -> planar-field link distance: {link_b:.3e}")
    print(f"norms: {phi3.norm():.12f} / {phi2.norm():.12f} / {psi1.norm():.12f}")
    print(f"accumulated action phase A(t) = {mover.phase_A(t):.6f}")


if __name__ == "__main__":
    main()
