"""Undo most of the estimation measurement's damage with a fixed unitary.

Each measurement outcome corresponds to an operation element E_i. The
closest unitary to E_i (its polar factor) defines a deterministic
reversal: applying its adjoint leaves only the Hermitian part of the
back-action. The outcome-averaged fidelity climbs from the bare clone
value 5/6 up to 13/15 and beyond, and never drops below 5/6.
"""

import numpy as np

from clonerestore import (
    alpha2_grid,
    estimation_elements,
    haar_random_unitary,
    hs_distance,
    make_pure,
    nearest_unitary,
    phi_grid,
    polar_decompose,
    reversed_fidelity,
    reversed_fidelity_plane,
)

est = estimation_elements()

print("polar decomposition of the first operation element:")
u, p = polar_decompose(est.elements[0])
print("E_0 =\n", np.round(est.elements[0], 6))
print("unitary factor U =\n", np.round(u, 6))
print("Hermitian factor sqrt(E_0^dag E_0) =\n", np.round(p, 6))
print("distance to the nearest unitary:", f"{hs_distance(u, est.elements[0]):.6f}")

rng = np.random.default_rng(0)
print("\nno random unitary beats the polar factor (20 draws):")
best = hs_distance(nearest_unitary(est.elements[0]), est.elements[0])
trial = min(hs_distance(t, est.elements[0]) for t in haar_random_unitary(rng, 20))
print(f"  polar factor: {best:.6f}   best random: {trial:.6f}")

print(f"\nreversed fidelity at |0>: {reversed_fidelity(make_pure(1, 0)):.12f} (13/15)")

surface = reversed_fidelity_plane(alpha2_grid(101)[:, None], phi_grid(101)[None, :])
print(f"reversed fidelity over a 101x101 grid: min {surface.min():.6f}, "
      f"max {surface.max():.6f}  (bare clone fidelity is {5 / 6:.6f})")
