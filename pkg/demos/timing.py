# How the two methods scale with the number of views
#
# Direct evaluation sums a Chebyshev series of length N = 2m+1 for every view
# and pixel. The fast method precomputes one table per view with a sine
# transform and then interpolates, so per pixel and view it costs O(1).

import time

import numpy as np

from oped import Method, ReconstructionConfig, build_geometry, project, reconstruct, shepp_logan

size = 128
phantom = shepp_logan()

# compile once so the first row is not dominated by JIT time
reconstruct(project(phantom, build_geometry(2)), 16, ReconstructionConfig(method=Method.DIRECT))
reconstruct(project(phantom, build_geometry(2)), 16, ReconstructionConfig(method=Method.FAST))

ms, rows = [16, 32, 64, 128, 256], []
print(f"{'m':>5}{'direct [s]':>12}{'fast [s]':>10}{'ratio':>8}")
for m in ms:
    sino = project(phantom, build_geometry(m))
    t = []
    for method in Method:
        t0 = time.perf_counter()
        reconstruct(sino, size, ReconstructionConfig(method=method))
        t.append(time.perf_counter() - t0)
    rows.append(t)
    print(f"{m:>5}{t[0]:>12.3f}{t[1]:>10.3f}{t[0] / t[1]:>8.1f}")

# %% Fitted exponents in N. With the image size fixed, direct should approach
# 2 and fast 1 (plus a small N^2 log N term from the tables).

n = np.log(2 * np.array(ms) + 1.0)
t = np.log(np.array(rows))
print("slope direct %.2f, fast %.2f" % (np.polyfit(n, t[:, 0], 1)[0], np.polyfit(n, t[:, 1], 1)[0]))
