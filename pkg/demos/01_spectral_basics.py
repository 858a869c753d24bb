"""
Grids, transforms and norms
===========================

A periodic grid, the unitary DFT, and the discrete norms used everywhere
else. Every norm carries the cell volume, so Parseval holds on the nose.
"""

import numpy as np

from splitnls.spectral import Field, Grid, forward_dft, gradient, lp_norm, sobolev_norm, spectral_l2_norm

# a 1-d box of length 60 with 1024 nodes, nodes at -L/2 + j L/M
grid = Grid(1, 60.0, 1024)
x = grid.axes[0]
print("spacing", grid.spacing, "cell volume", grid.cell_volume)

# sqrt(2) sech(x) has L^2 norm exactly 2 on the line; the box tails are negligible
f = Field.physical(grid, np.sqrt(2) / np.cosh(x))
print("||f||_2      ", lp_norm(f, 2))
print("||f_hat||_2  ", spectral_l2_norm(forward_dft(f)))

# derivatives are spectral: multiply by i k
(df,) = gradient(f)
exact = -np.sqrt(2) * np.tanh(x) / np.cosh(x)
print("max |f' - exact|", np.abs(df.values - exact).max())

# H^s weights (1 + |k|^2)^s; s = 0 is the L^2 norm
for s in (0, 1, 2):
    print(f"H^{s} norm", sobolev_norm(f, s))

# L^r norms for the Strichartz pairs
for r in (2, 4, 5, np.inf):
    print(f"L^{r} norm", lp_norm(f, r))
