#!/usr/bin/env python3
"""Tour of the exact region evaluators on a small discrete source.

Builds a random auxiliary system for a 2x2x2 source, evaluates the six inner
bounds, the three extreme points with their shared-coordinate identities, and
the helper-variable search for the lossless setting.
"""

import numpy as np

from rdeq import (
    AuxiliarySystem,
    Channel,
    DistortionMeasure,
    JointSource,
    RegionConstraints,
    convexify,
    corner_point,
    generic_inner_frontier,
    inner_bound_point,
    lossless_frontier,
)

rng = np.random.default_rng(42)
w = rng.exponential(size=(2, 2, 2))
source = JointSource(w / w.sum())
d = DistortionMeasure.hamming(2)


def rand_channel(n_in, n_out):
    rows = rng.exponential(size=(n_in, n_out))
    return Channel(rows / rows.sum(axis=1, keepdims=True))


system = AuxiliarySystem(
    u_given_v=rand_channel(2, 2),
    v_given_a=rand_channel(2, 2),
    w_given_c=rand_channel(2, 2),
    reconstruction=rng.integers(0, 2, size=(2, 2)),
)

bounds = inner_bound_point(source, d, system)
print("six bounds at a random auxiliary system:")
print(f"  R_A >= {bounds.r_a_min:.4f}")
print(f"  R_C >= {bounds.r_c_min:.4f}")
print(f"  R_A + R_C >= {bounds.sum_min:.4f}")
print(f"  D >= {bounds.d_min:.4f}")
print(f"  Delta <= {bounds.delta_max:.4f}")
print(f"  Delta - R_C <= {bounds.delta_minus_rc_max:.4f}")
print()

pts = {w_: corner_point(source, d, system, w_) for w_ in ("I", "II", "III")}
print("extreme points and their shared coordinates:")
for name, pt in pts.items():
    print(f"  ({name:>3}) R_A={pt.r_a:.4f} R_C={pt.r_c:.4f} D={pt.d:.4f} Delta={pt.delta:.4f}")
print(f"  sum rate I vs II:   {pts['I'].r_a + pts['I'].r_c:.10f} = "
      f"{pts['II'].r_a + pts['II'].r_c:.10f}")
print(f"  Delta - R_C II vs III: {pts['II'].delta - pts['II'].r_c:.10f} = "
      f"{pts['III'].delta - pts['III'].r_c:.10f}")
print()

hull = convexify(list(pts.values()))
print(f"hull of the three extreme points keeps {len(hull)} of them")
print()

res = generic_inner_frontier(source, d, (2, 2, 2),
                             (RegionConstraints(max_d=0.3),), n_starts=16, seed=0)
print(f"best equivocation with distortion capped at 0.3: {res.points[0].point.delta:.4f}")
print()

# for the lossless frontier, use a source whose helper observation genuinely
# beats the eavesdropper's: C is a noisy copy of A, E an independent coin
pac = np.array([[0.4, 0.1], [0.15, 0.35]])
helper_src = JointSource(pac[:, :, None] * np.array([0.5, 0.5])[None, None, :])
loss = lossless_frontier(helper_src, [0.6, 1.0, 2.0], n_starts=8, seed=0)
print("lossless frontier over helper rates (independent eavesdropper):")
for pt in loss.points:
    mark = f"Delta* = {pt.point.delta:.4f}" if pt.feasible else "infeasible"
    print(f"  R_C = {pt.sweep:.2f}: {mark}")
