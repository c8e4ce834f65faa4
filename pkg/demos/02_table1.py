# %% [markdown]
# # Smooth decay at Re = 100
#
# Starting from sin(pi x), the viscous solution steepens toward x = 1 and
# then decays. The Cole-Hopf transform gives it in closed form, so the
# solver error can be tracked over a long run.

# %%
from cfor import ExactSolutionSpec, Grid, ProblemSpec, error_norms, run
from cfor.exact import TABLE1_TIMES

problem = ProblemSpec(reynolds=100.0, grid=Grid(41), dt=0.01, t_final=90.0)
trace = run(problem, snapshot_times=TABLE1_TIMES)
spec = ExactSolutionSpec(100.0)

# %% [markdown]
# The error is largest while the front is sharp and falls off as the
# profile relaxes. By t = 90 the solution is close to a single decaying
# mode and the error sits near round-off.

# %%
print(f"{'t':>6} {'L_inf':>10} {'L_1':>10}")
for t in TABLE1_TIMES:
    rep = error_norms(trace.snapshot(t), t, spec)
    print(f"{t:6g} {rep.l_inf:10.2e} {rep.l_1:10.2e}")
