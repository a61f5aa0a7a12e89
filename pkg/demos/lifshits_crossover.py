"""Stretched-exponential transport from a Lifshits-tail density.

A density lam^-b exp(-1/lam) has no small-lam power law: the exp(-1/lam)
factor starves the walk of slow modes, and both returns decay as stretched
exponentials, exp(-2 sqrt(t)) classically and exp(-2 sqrt(2t)) quantum
mechanically. The log-ratio is therefore time dependent: below 1 early on
(classical wins), crossing 1 at a b-dependent time, and approaching
sqrt(2) ~ 1.414 from below.

Run: python demos/lifshits_crossover.py
"""

import math

import specwalk as sw

grid = sw.log_grid(1e-3, 3e4, 350, include_zero=False)

for b in (2.0, 3.0, 4.0):
    dos = sw.Lifshits(b=b)
    p = sw.classical_return_continuum(dos, grid)
    alpha = sw.quantum_return_bound_continuum(dos, grid)

    window = (50.0, 2e4)
    fit_cl = sw.fit_stretched_exp(grid.times, p, window)
    fit_qm = sw.fit_stretched_exp(grid.times, alpha, window)

    # this quantum series does not oscillate, so it is its own envelope
    ratio = sw.efficiency_ratio_series(grid.times, p, (grid.times, alpha))
    crossing = sw.detect_crossover(ratio.times, ratio.values)

    print(f"b = {b}:")
    print(f"  classical fit: t^{fit_cl.prefactor_exponent:.3f} "
          f"exp(-{fit_cl.decay_coeff:.3f} sqrt t)   [expect t^{(2 * b - 3) / 4:.2f} exp(-2 sqrt t)]")
    print(f"  quantum fit:   t^{fit_qm.prefactor_exponent:.3f} "
          f"exp(-{fit_qm.decay_coeff:.3f} sqrt t)   [expect t^{(2 * b - 3) / 2:.2f} exp(-2.83 sqrt t)]")
    print(f"  ratio crosses 1 at t = {crossing:.3f}; "
          f"tail value {ratio.asymptotic:.3f} -> sqrt(2) = {math.sqrt(2):.3f}")
