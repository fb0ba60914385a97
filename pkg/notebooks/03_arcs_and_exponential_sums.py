# %% [markdown]
# # Major arcs, minor arcs and exponential sums
#
# Near a/q with small q the generating function on the circle follows a simple
# model with the factor prod(-p)/q^2. Away from those points it is tiny
# compared with its value on the positive axis.

# %%
import math
from fractions import Fraction

from circle_partitions import arcs
from circle_partitions.genfun import phi_eval
from circle_partitions.ntheory import dirichlet_power

w = dirichlet_power("pr", 1, 10**6)
X = 1e4

# %% [markdown]
# At X = 10^4 the arcs M(q, a) stay disjoint only while (log X)^A is below
# about 44, so the requested exponent A = 17 is far out of range. Minor arcs
# are sampled with the largest disjoint exponent instead.

# %%
print("largest disjoint A:", arcs.max_disjoint_exponent(X))
alphas, A_used = arcs.minor_arc_samples(X, 17, 200, seed=0)
print(arcs.suppression_scan(w, X, alphas, 17, A_used).as_dict())

# %%
for q, a in [(1, 1), (2, 1), (3, 1), (3, 2), (5, 2)]:
    model = arcs.major_arc_model(1, X, q, a, a / q, "pr")
    print(q, a, phi_eval(w, X, a / q).real / model.real if model.real else math.nan)

# %% [markdown]
# Exponential sums over primes at rationals, against the bound with implied
# constant 1. The ratios sit three orders of magnitude below 1.

# %%
print(arcs.exp_sum(dirichlet_power("pr", 1, 10), Fraction(1, 2), 10))
small = dirichlet_power("pr", 1, 10_000)
print(arcs.bound_ratio_scan(small, 1, [1000, 10_000], range(1, 51)))
print(arcs.dirichlet_approx(math.pi - 3, 120))
