"""
Two branches that start close and stay apart
============================================

The omega = +1 and omega = -1 initial data differ only by the constant 2/n,
so their distance shrinks like 1/n. Under the FW flow the high-frequency
parts drift in opposite directions and the distance between the solutions
grows to a size of order |sin t| that does not shrink with n.

The grid here is smaller than in the acceptance runs so the script finishes
in a few seconds.
"""

import math

from fwbesov import BesovIndex, GridSpec
from fwbesov.approx import SequenceParams, initial_distance, initial_state, predicted_distance
from fwbesov.solver import SolverConfig, solve

grid = GridSpec(1024)
idx = BesovIndex(3.0)
times = (0.0, 0.25, 0.5, 1.0)
cfg = SolverConfig(grid, dt=1e-3, t_end=1.0, sample_times=times, guard_index=idx)

for n in (16, 32, 64):
    a = solve(initial_state(SequenceParams(1, n), grid), cfg)
    b = solve(initial_state(SequenceParams(-1, n), grid), cfg)
    print(f"n={n}: initial distance {initial_distance(n, 3.0, idx, grid):.4f}")
    for t in times[1:]:
        d = (a.at(t) - b.at(t)).norm(idx)
        pred = predicted_distance(n, 3.0, idx, t, grid)
        print(f"   t={t:.2f}  distance {d:.4f}  predicted {pred:.4f}  d/|sin t| {d / abs(math.sin(t)):.4f}")
