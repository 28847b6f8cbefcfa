"""Extracting the scattered field's normalized coefficients from circle data.

Circle measurements project onto the rotating frame (U_n, V_n); each mode
gives a 2x2 system coupling the compressional and shear potentials, solved
in closed form.  The truncated sum then evaluates the field anywhere
outside the expansion disk, and its truncation error on the data circle
decays geometrically with the cutoff.
"""

import numpy as np

from elshape import (
    LameSystem,
    PointSource,
    eval_field,
    modal_rhs,
    record_from_disk_series,
    solve_modal,
)
from elshape.forward import disk_series

sys = LameSystem(1.0, 1.0, 1.0)
src = PointSource((16.0, 0.0), (np.sqrt(0.5), np.sqrt(0.5)))
radius = np.sqrt(8.0)

rec = record_from_disk_series(radius, (src,), sys, rho=3.0, n_receivers=256, n_modes=60)
truth = disk_series(radius, src, sys, n_modes=60)
pts = 3.0 * np.stack([np.cos(rec.receivers), np.sin(rec.receivers)], axis=-1)
exact = truth.eval(pts)
scale = np.sqrt(np.mean(np.sum(np.abs(exact) ** 2, axis=-1)))

print("truncation error on the data circle (RMS, relative):")
print(" N   error")
prev = None
for N in range(5, 22, 2):
    mf = solve_modal(modal_rhs(rec, N), 3.0, 0.5, sys)
    err = np.sqrt(np.mean(np.sum(np.abs(eval_field(mf, pts) - exact) ** 2, axis=-1))) / scale
    note = "" if prev is None else f"   ratio {err / prev:.3f}"
    print(f"{N:2d}   {err:.3e}{note}")
    prev = err

print("\nper-mode ratio ~ R_hull/rho: the singular content of this field sits")
print("exactly on the expansion disk r = 0.5, so the ratio approaches 1/6.")

# the same coefficients evaluate the field off the measurement circle
mf = solve_modal(modal_rhs(rec, 21), 3.0, 0.5, sys)
x = np.array([2.83, 0.4])
print("\nfield at", x, ":")
print("  truncated expansion:", eval_field(mf, x))
print("  analytic solution:  ", truth.eval(x))
