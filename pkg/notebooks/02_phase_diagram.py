"""
Regimes in the (tau, alpha) plane
=================================

A coarse text raster of the classifier, plus the ultra-fast constants at a few
points.  U = ultra-fast, F = fast, S = slow, . = on a boundary.
"""
import numpy as np

from girgspread.regimes import phase_grid, ultrafast_constant

taus = np.linspace(2.05, 3.45, 57)
alphas = np.linspace(6.0, 1.1, 25)
glyph = {"UltraFast": "U", "Fast": "F", "Slow": "S", "Boundary": "."}
labels = phase_grid(taus, alphas, 1e-2)
for a, row in zip(alphas, labels):
    print(f"alpha={a:4.2f} " + "".join(glyph[x.value] for x in row))
print(" " * 11 + f"tau from {taus[0]:.2f} to {taus[-1]:.2f}")

# %% constants for a few ultra-fast points
for tau, alpha in [(2.2, 1.1), (2.3, 10.0), (2.45, 3.0), (2.49, 10.0)]:
    uc = ultrafast_constant(tau, alpha)
    print(f"tau={tau} alpha={alpha}: {uc.mechanism}, rounds ~ {uc.constant:.2f} loglog n")
