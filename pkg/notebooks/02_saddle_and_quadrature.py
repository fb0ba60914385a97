# %% [markdown]
# # Saddle point and the circle integral
#
# The radius rho = exp(-1/X) solves n = rho Phi'(rho). From there the Gaussian
# approximation gives log G(n) to a relative error of order 1e-4, and a plain
# trapezoid rule on the circle recovers G(n) itself.

# %%
from circle_partitions.asymptotics import (
    circle_quadrature,
    magnitude_report,
    saddle_estimate,
    saddle_table_size,
    solve_saddle,
)
from circle_partitions.ntheory import dirichlet_power
from circle_partitions.partitions import euler_transform

w = dirichlet_power("pr", 1, saddle_table_size(10_000))
logs = euler_transform(w, 10_000, exact_cutoff=0).coeffs_log

# %%
for n in (1000, 3000, 10_000):
    s = solve_saddle(w, n)
    est = saddle_estimate(w, n, s).log_value
    print(f"n={n:>6}  X={s.X:9.2f}  estimate={est:.6f}  exact={logs[n]:.6f}  rel={abs(est - logs[n]) / logs[n]:.1e}")

# %% [markdown]
# The quadrature uses an FFT of Phi on 8n points. Zero counts come back as a
# cancellation error rather than as a tiny spurious number.

# %%
exact = euler_transform(w, 200).coeffs_exact
for n in (50, 100, 200):
    print(n, exact[n], round(2.718281828459045 ** circle_quadrature(w, n).log_value))

# %% [markdown]
# How close are the saddle quantities to their predicted sizes?

# %%
big = dirichlet_power("pr", 1, saddle_table_size(10**5))
for row in magnitude_report(big, 1, [10**3, 10**4, 10**5]):
    print({k: round(v, 4) if isinstance(v, float) else v for k, v in row.items()})
