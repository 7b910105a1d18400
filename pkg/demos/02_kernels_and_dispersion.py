# %% [markdown]
# # Interaction kernels and dispersion laws
#
# Every particle of the chain couples to partners at offsets a**m. For a
# plane wave exp(i k n h) the coupling acts as multiplication by
# lambda(k) = sum_m mult_m b_m (1 - cos(h a**m k)), and the frequency is
# omega = sqrt(2 c**2 lambda) / h.

# %%
import numpy as np

from fractal_chain import (
    GeometricWeierstrass,
    NearestNeighbor,
    WMFractal,
    WMParams,
    apply_operator_dense,
    build_kernel,
    lambda_of_k,
    omega_of_k,
    sample_dispersion,
    wm_cosine_eval,
)

# %% [markdown]
# ## Three families

# %%
nn = build_kernel(NearestNeighbor())
wm = build_kernel(WMFractal(a=2, d_graph=1.5, M=10))
geo = build_kernel(GeometricWeierstrass(a=2, b=0.6, M=10))
for name, k in [("nearest", nn), ("wm", wm), ("geometric", geo)]:
    print(f"{name:10s} offsets {k.offsets[:5].tolist()}... id {k.kernel_id}")
print("nearest partners of particle 0 under the WM kernel:", sorted(wm.partners(0), key=abs)[:8])

# %% [markdown]
# The nearest-neighbour chain recovers the textbook law 2 |sin(k/2)|.

# %%
q = np.linspace(0, np.pi, 5)
print(omega_of_k(nn, q))
print(2 * np.abs(np.sin(q / 2)))

# %% [markdown]
# ## Plane waves are eigenfunctions
#
# Apply the lattice operator to a ring mode and compare with lambda(k).

# %%
n = 64
j = 7
kk = 2 * np.pi * j / n
wave = np.exp(1j * kk * np.arange(n))
ratio = apply_operator_dense(wm, wave) / wave
print("operator / wave:", ratio[:3].real, "lambda:", lambda_of_k(wm, kk))

# %% [markdown]
# For the WM kernel, lambda is the folded Weierstrass-Mandelbrot cosine
# function: the m = 0 term once plus twice the m >= 1 terms.

# %%
z = 1.234
c_full = wm_cosine_eval(WMParams(2, 1.5, 0, 10), z)
c_first = wm_cosine_eval(WMParams(2, 1.5, 0, 0), z)
print(lambda_of_k(wm, z), 2 * c_full - c_first)

# %% [markdown]
# ## A rough dispersion curve
#
# Sampled finely, the WM dispersion curve wiggles at every scale up to the
# truncation order.

# %%
curve = sample_dispersion(wm, np.linspace(0, np.pi, 4001))
steps = np.abs(np.diff(curve.omega))
print(f"omega range [{curve.omega.min():.3f}, {curve.omega.max():.3f}], largest step {steps.max():.3e}")
