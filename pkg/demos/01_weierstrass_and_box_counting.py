# %% [markdown]
# # The Weierstrass function and its box-counting dimension
#
# W(x) = sum_n b**n cos(a**n pi x) is continuous everywhere and, for ab >= 1,
# differentiable nowhere. Its graph has dimension 2 + ln b / ln a. Here we
# evaluate it with a certified truncation error and estimate that dimension
# by counting grid cells.

# %%
import numpy as np

from fractal_chain import PlanarGraph, WeierstrassParams, box_counting_dimension, graph_dimension, weierstrass_eval
from fractal_chain.fractal_functions import geometric_scales, weierstrass_order_for_tolerance, weierstrass_tail_bound

# %% [markdown]
# ## Truncation
#
# The tail after n_max terms is bounded by b**(n_max+1) / (1-b), so the order
# needed for a given accuracy follows directly.

# %%
b = 0.5
for tol in (1e-3, 1e-8, 1e-15):
    q = weierstrass_order_for_tolerance(3, b, tol)
    print(f"tol {tol:g}: n_max = {q.n_max}, bound = {weierstrass_tail_bound(q):.3g}")

# %% [markdown]
# Phases a**n x are reduced modulo 2 exactly, so even 60 terms reproduce the
# integer points: W(0) = sum b**n = 2, and for odd a every term of W(1) is
# -b**n, giving -2.

# %%
p = WeierstrassParams(a=3, b=0.5, n_max=60)
print("W(0) =", weierstrass_eval(p, 0.0))
print("W(1) =", weierstrass_eval(p, 1.0))

# %% [markdown]
# ## Box counting
#
# Sample the graph densely and count the cells of side eps that it meets for
# eps = 2**-3 ... 2**-9. The slope of log N against log(1/eps) estimates the
# dimension.

# %%
x = np.linspace(0.0, 1.0, 200_001)
graph = PlanarGraph(x, weierstrass_eval(p, x))
result = box_counting_dimension(graph, geometric_scales(2.0**-3, 2.0**-9, 7))
for eps, count in zip(result.scales, result.counts):
    print(f"eps = {eps:.5f}  N = {count}")
print(f"estimate {result.dimension:.4f} (r^2 {result.r_squared:.5f}), theory {graph_dimension(3, 0.5):.4f}")

# %% [markdown]
# Rougher weights give rougher graphs.

# %%
for bb in (0.4, 0.5, 0.7):
    g = PlanarGraph(x, weierstrass_eval(WeierstrassParams(3, bb, 60), x))
    d = box_counting_dimension(g, result.scales).dimension
    print(f"b = {bb}: estimate {d:.3f}, theory {graph_dimension(3, bb):.3f}")
