# Growth of the operator norm
#
# The reconstruction is a linear map from samples to a function. Its sup-norm
# growth is bounded by the maximum over the disk of the Lebesgue function
# sum_nu sum_j sin(psi_j) |T_j,nu(x, y)|, which should grow like m log(m+1).

import math

from oped import build_geometry
from oped.reconstruct import lebesgue_estimate, lebesgue_function, lebesgue_sample_points

print(f"{'m':>5}{'estimate':>12}{'/ m log(m+1)':>14}")
for m in (2, 4, 8, 16, 32, 64):
    lam = lebesgue_estimate(build_geometry(m), lebesgue_sample_points(m))
    print(f"{m:>5}{lam:>12.3f}{lam / (m * math.log(m + 1)):>14.3f}")

# %% Where is the maximum? Compare the centre with the rim of the sampled disk.

g = build_geometry(32)
x, y = lebesgue_sample_points(32)
values = lebesgue_function(g, x, y)
print("centre %.3f, rim max %.3f" % (values[0], values[-64:].max()))
