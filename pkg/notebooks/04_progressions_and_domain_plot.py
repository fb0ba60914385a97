# %% [markdown]
# # Progressions, Laplace sums and a picture
#
# Semiprimes spread evenly over the coprime residue classes. The Laplace sums
# U(gamma) behave like their leading terms for small gamma. Last, a domain
# coloring of the truncated log product.

# %%
from circle_partitions.ntheory import dirichlet_power
from circle_partitions.progressions import equidistribution_report, u_sum

semi = dirichlet_power("pr", 2, 10**6)
for q in (3, 4, 5, 7):
    rep = equidistribution_report(semi, 10**6, q)
    print(q, f"{rep['max_relative_deviation']:.2e}", [c["count"] for c in rep["classes"]])

# %%
for gamma in (1e-2, 1e-3, 1e-4 + 0.01j):
    u = u_sum(semi, gamma, q=4, ell=1)
    print(gamma, u.value, u.value / u.leading, f"tail <= {u.tail_bound:.1e}")

# %% [markdown]
# Hue follows Im Phi, brightness follows Re Phi. Conjugation flips the hue, so
# the image mirrors in brightness but not in color.

# %%
from pathlib import Path

from circle_partitions.genfun import domain_grid
from circle_partitions.render import render_domain_plot

out = Path("domain_r1.ppm")
print(render_domain_plot(domain_grid(1, 200, 256), out), "bytes written to", out)
