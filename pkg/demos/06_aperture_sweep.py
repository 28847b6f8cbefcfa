"""Aperture/noise sweep producing one CSV row per cell.

Mirrors the figure-panel study: a set of observation arcs crossed with
noise levels, median boundary error over seeds per cell.  Wrapped arcs
like [5pi/4, 11pi/4) express unions such as "everything but the left
quadrant".
"""

from pathlib import Path

import numpy as np

from elshape.sweep import parse_sweep_text, run_sweep, write_sweep_csv

PI = np.pi
arcs = [
    (0.0, 2 * PI),               # full coverage
    (PI / 4, 7 * PI / 4),        # 3/4
    (PI / 2, 3 * PI / 2),        # left half
    (0.0, PI),                   # top half
    (3 * PI / 4, 5 * PI / 4),    # quarter, facing the obstacle's left
]
arc_text = "; ".join(f"{lo!r}:{hi!r}" for lo, hi in arcs)

SPEC = f"""
shape = disk
shape.radius = 1.0
lame.omega = 1.0
guess.radius = 1.5
truncation.mode = fixed
truncation.n = 5
max_iter = 30
n_sources = 10
n_receivers = 64
sweep.apertures = {arc_text}
sweep.deltas = 0, 0.01, 0.05
sweep.seeds = 1, 2, 3
"""

spec = parse_sweep_text(SPEC)
rows = run_sweep(spec, workers=1)
out = Path(__file__).with_name("out_sweep.csv")
write_sweep_csv(rows, out)
print(f"{'aperture':>22}  {'delta':>6}  {'median error':>12}  conv")
for row in rows:
    print(f"[{row[0]:6.3f}, {row[1]:6.3f})  {row[2]:6.3g}  {row[4]:12.4g}  {row[5]}/{row[3]}")
print("wrote", out)
