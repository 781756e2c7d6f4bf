"""
Minimal-solution series and norm convergence
============================================

Builds the expansion coefficients of the driven Rabi ground state from the
backward-recursion ratios, shows the 1/n decay that identifies the minimal
solution, and confirms that the norm series converges (the wavefunction is
a proper, normalizable state).
"""

from rabispec import (
    ModelKind,
    ModelParams,
    Sector,
    compute_spectrum,
    eval_wavefunction,
    minimal_series,
    norm_tail_ratio,
)
from rabispec.models import asymptotic_roots

model = ModelParams(ModelKind.DRIVEN_RABI, omega=1.0, delta=0.4, g=0.7, drive=0.3)
sector = Sector.driven()

ground = compute_spectrum(model, sector, (-2.0, 0.0)).energies[0]
print(f"ground state energy: {ground:.12f}")

series = minimal_series(model, sector, ground, order=2000)
t2 = asymptotic_roots(model).t2
print(f"series residual |Q(E)| = {series.residual:.2e}")
print()
print("minimal ratio decay (n * K_{n+1}/K_n should approach 2g/omega):")
for n in (10, 100, 1000, 1999):
    print(f"  n={n:5d}   n*ratio = {n * series.ratio(n):+.6f}   target {t2:+.6f}")

print()
ratio = norm_tail_ratio(series)
print(f"norm-series tail ratio: {ratio:.3e}  (< 1 means the norm converges)")

print()
print("wavefunction components on the positive real axis:")
for z in (0.0, 0.5, 1.0, 2.0):
    psi_plus, psi_minus = eval_wavefunction(series, z)
    print(f"  z={z:4.1f}   psi_plus = {psi_plus.real:+.6e}   psi_minus = {psi_minus.real:+.6e}")
