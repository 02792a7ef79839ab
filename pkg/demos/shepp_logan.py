# Reconstructing the Shepp-Logan head phantom
#
# We simulate parallel-beam data of the phantom, reconstruct it with both the
# direct and the fast method, and print the error table. Pass a larger m on the
# command line (e.g. `python3 demos/shepp_logan.py 512`) for the full-size run;
# the default keeps it to a few seconds.

import sys
import time

import numpy as np

from oped import Method, ReconstructionConfig, build_geometry, me, project, rasterize, reconstruct, rse, shepp_logan
from oped.io import export_pgm

m = int(sys.argv[1]) if len(sys.argv) > 1 else 128
size = 512 if m >= 256 else 256

# %% The scan: 2m+1 views, 2m+1 detector offsets per view.

g = build_geometry(m)
print(f"m = {m}: {g.n_views} views x {g.n_detectors} detectors, image {size}x{size}")

phantom = shepp_logan()
sino = project(phantom, g)  # exact line integrals, no noise
truth = rasterize(phantom, size)

# %% Both reconstructions. The fast one replaces the inner Chebyshev sum by a
# table lookup, so it should be much quicker.

images, seconds = {"orig": truth}, {}
for method in Method:
    t0 = time.perf_counter()
    images[method.value] = reconstruct(sino, size, ReconstructionConfig(method=method))
    seconds[method.value] = time.perf_counter() - t0
    print(f"{method.value:>6}: {seconds[method.value]:.2f}s")
print(f"speedup {seconds['direct'] / seconds['fast']:.1f}x (includes compilation on first run)")

# %% Error table. RSE is normalized by its second argument.

print(f"{'pair':<14}{'RSE':>12}{'ME':>12}")
for a, b in [("orig", "direct"), ("orig", "fast"), ("direct", "fast")]:
    print(f"{a + '/' + b:<14}{rse(images[a], images[b]):>12.6f}{me(images[a], images[b]):>12.6f}")

# %% The reconstructions overshoot at the skull edge (Gibbs), while the
# difference between the two methods is small and spread out.

diff = images["direct"].values - images["fast"].values
print("max |direct - fast| =", float(np.abs(diff).max()))

export_pgm(images["fast"], "shepp_logan_fast.pgm")
export_pgm(diff, "shepp_logan_diff.pgm")
print("wrote shepp_logan_fast.pgm and shepp_logan_diff.pgm")
