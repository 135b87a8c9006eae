"""The unit-modulus gauge linking the two derivative NLS forms.

At sigma = 1 the equation with nonlinearity |u|^2 u_x maps onto the
standard derivative NLS (d/dx of |u|^2 u form) by multiplying with
exp(-(i/2) int_{-inf}^x |u|^2).  This script evolves the same datum in
both frames and shows the flows agree after undoing the gauge.

Run:  python3 demos/gauge_equivalence.py
"""

import numpy as np

from gdnls import (
    ComplexField,
    EvolutionConfig,
    FORWARD,
    INVERSE,
    GridSpec,
    evolve,
    gauge_transform,
    l2_norm,
)

grid = GridSpec(2048, 80.0)
u0 = ComplexField(grid, 0.4 * np.exp(-grid.x**2 + 0.5j * grid.x))

v0 = gauge_transform(u0, FORWARD)
print("the gauge factor has unit modulus, so |v0| = |u0| pointwise:")
print(f"  max | |v0| - |u0| | = {np.max(np.abs(np.abs(v0.values) - np.abs(u0.values))):.2e}")
print(f"  phase actually changed: max |v0 - u0| = {np.max(np.abs(v0.values - u0.values)):.3f}")
print()

for t_end in (0.25, 0.5, 1.0):
    kw = dict(grid=grid, dt=1e-3, t_end=t_end, snapshot_stride=10**9)
    traj_g, _ = evolve(u0, EvolutionConfig("gdnls", sigma=1.0, **kw))
    traj_d, _ = evolve(v0, EvolutionConfig("dnls", **kw))
    u_back = gauge_transform(traj_d.snapshots[-1], INVERSE)
    diff = l2_norm(ComplexField(grid, traj_g.snapshots[-1].values - u_back.values))
    print(f"t = {t_end:4.2f}:  || flow-then-ungauge  -  direct flow ||_L2 = {diff:.3e}")

print()
print("the two routes agree to the integrator's accuracy floor; the")
print("inverse gauge at time t uses the evolved solution's own density,")
print("so no extra bookkeeping is needed to undo the transformation.")
