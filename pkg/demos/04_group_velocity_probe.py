# %% [markdown]
# # Why the group velocity does not exist
#
# With weights b**m and offsets a**m, the m-th term of lambda(k) has slope up
# to b**m a**m. When ab > 1 those slopes grow without bound as terms are
# added, so the limiting dispersion curve has no derivative. We watch the
# largest local slope grow with the truncation order.

# %%
import numpy as np

from fractal_chain import RegimeError, group_velocity_divergence_probe

orders = list(range(4, 17))
rows = group_velocity_divergence_probe(a=2, b=0.75, h=1.0, wavenumber=1.0, m_list=orders)
for m, s in rows:
    print(f"M = {m:2d}: max slope {s:10.2f}")

# %%
slopes = np.array([s for _, s in rows])
rate = np.polyfit(orders[-6:], np.log(slopes[-6:]), 1)[0]
print(f"growth per order {np.exp(rate):.3f}, ab = {2 * 0.75}")

# %% [markdown]
# With ab < 1 the series of slopes converges, the curve is differentiable,
# and the probe declines to run.

# %%
try:
    group_velocity_divergence_probe(2, 0.25, 1.0, 1.0, orders)
except RegimeError as exc:
    print("refused:", exc)
