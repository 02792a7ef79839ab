# Uniform convergence on a smooth phantom
#
# For f(x, y) = (1 - x^2 - y^2)^3 the direct method is exact once 2m-1 >= 6,
# because it reproduces polynomials of that degree. The fast method adds a
# linear-interpolation error of order 1/m^2, which shows up as a factor of
# about 4 per doubling of m.

from oped import Method
from oped.cli import convergence_table
from oped.phantom import smooth_bump

phantom = smooth_bump()
ms = [4, 8, 16, 32, 64, 128]
table = {method: convergence_table(phantom, ms, 128, method, radius=0.8) for method in Method}

print(f"{'m':>5}{'direct':>14}{'fast':>14}{'fast ratio':>12}")
prev = None
for m, d, f in zip(ms, table[Method.DIRECT], table[Method.FAST]):
    ratio = "" if prev is None else f"{prev / f['max_abs']:.2f}"
    print(f"{m:>5}{d['max_abs']:>14.3e}{f['max_abs']:>14.3e}{ratio:>12}")
    prev = f["max_abs"]
