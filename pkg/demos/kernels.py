# The reconstruction kernel in closed form
#
# Each detector sample g_j,nu is smeared back along its view with a kernel
# T_j,nu(x, y), defined as a finite Chebyshev sum. The closed form is cheaper,
# but has removable singularities where the pixel projects exactly onto a
# detector node. Here we compare the two forms as we approach one.

import math

import numpy as np

from oped import build_geometry
from oped.reconstruct import kernel_compact, kernel_direct

g = build_geometry(8)
j, nu = 5, 3
print(f"m = {g.m}, detector j = {j} (psi = {g.psi[j]:.6f}), view nu = {nu}")

# %% Walk along the view's normal direction towards t = cos(psi_j).

c, s = math.cos(g.phi[nu]), math.sin(g.phi[nu])
print(f"{'offset':>10}{'direct':>24}{'compact':>24}{'rel diff':>12}")
for offset in [1e-1, 1e-3, 1e-5, 1e-7, 1e-9, 1e-12, 0.0]:
    t = math.cos(g.psi[j]) + offset
    x, y = t * c + 0.2 * -s, t * s + 0.2 * c
    d = float(kernel_direct(g, j, nu, x, y))
    k = float(kernel_compact(g, j, nu, x, y))
    print(f"{offset:>10.0e}{d:>24.16e}{k:>24.16e}{abs(d - k) / abs(d):>12.1e}")

# %% Summed against the projection of the unit disk, 2 sin(psi_j), the kernel
# reproduces the constant 1 at any point of the disk.

x, y = 0.3, -0.45
total = sum(np.dot(2 * np.sin(g.psi), kernel_direct(g, np.arange(g.n_detectors), v, x, y)) for v in range(g.n_views))
print("reconstruction of f = 1 at (0.3, -0.45):", total)
