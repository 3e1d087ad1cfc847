#!/usr/bin/env python3
"""Closed-form region sweep for the Gaussian model.

The source is standard normal; the legitimate decoder's helper and the
eavesdropper observe it through independent Gaussian channels with gains
rho_C and rho_E.  Sweeps the helper rate and the distortion level, printing
the minimum main-link rate and the best equivocation (differential-entropy
convention, so equivocation can be negative).
"""

import math

import numpy as np

from rdeq import GaussianParams, gaussian_inner, gaussian_optimal_no_eve_si

params = GaussianParams(rho_c=0.8, rho_e=0.6)
print("rho_C = 0.8, rho_E = 0.6, D = 0.1")
print(f"{'R_C':>6} {'R_A_min':>9} {'Delta_max':>10}")
for r_c in (0.0, 0.5, 1.0, 2.0, 4.0, math.inf):
    b = gaussian_inner(params, r_c, 0.1)
    label = "inf" if math.isinf(r_c) else f"{r_c:.1f}"
    print(f"{label:>6} {b.r_a_min:9.4f} {b.delta_max:10.4f}")

print()
print("with a mute eavesdropper (rho_E = 0) the region is exact and")
print("rate + equivocation is conserved at (1/2) log2(2 pi e):")
half_log = 0.5 * math.log2(2 * math.pi * math.e)
for d in np.geomspace(0.02, 1.0, 6):
    b = gaussian_optimal_no_eve_si(0.8, 1.0, float(d))
    print(f"  D = {d:6.3f}: R_A_min = {b.r_a_min:7.4f}, Delta_max = {b.delta_max:7.4f}, "
          f"sum - const = {b.r_a_min + b.delta_max - half_log:+.1e}")
