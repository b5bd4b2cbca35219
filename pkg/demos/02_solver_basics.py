"""
Integrating the FW system
=========================

A smooth, small initial state evolves for one time unit. The means of u and
rho are conserved exactly by the scheme, and the B^3 x B^2 size stays well
below twice its initial value.
"""

from fwbesov import BesovIndex, GridSpec, State, TrigTerm, from_terms
from fwbesov.solver import SolverConfig, solve

grid = GridSpec(128)
u0 = from_terms([TrigTerm(0.05, 1), TrigTerm(0.01, 3, 0.4, "cos")], grid)
rho0 = from_terms([TrigTerm(1.0, 0, 0.0, "cos"), TrigTerm(0.02, 2)], grid)
state0 = State(u0, rho0)

cfg = SolverConfig(grid, dt=1e-3, t_end=1.0, sample_times=(0.0, 0.25, 0.5, 0.75, 1.0))
traj = solve(state0, cfg)
print("status:", traj.status)

idx = BesovIndex(3.0)
size0 = state0.norm(idx)
for t, st in traj.samples:
    print(
        f"t={t:.2f}  size={st.norm(idx):.5f} (limit {2 * size0:.5f})"
        f"  mean u={st.u.coeff(0).real:+.2e}  mean rho={st.rho.coeff(0).real:.12f}"
    )
