"""Independent reference implementations used only by the tests."""

import numpy as np


def force_matrix(kernel, n):
    """Dense N x N matrix F with acc = F @ u, assembled entry by entry."""
    f = np.zeros((n, n))
    scale = (kernel.c / kernel.h) ** 2
    for m, (offset, weight) in enumerate(kernel.terms):
        coef = scale * weight * (1.0 if m == 0 else 2.0)
        for i in range(n):
            f[i, (i + offset) % n] += coef
            f[i, (i - offset) % n] += coef
            f[i, i] -= 2.0 * coef
    return f


def closed_form_lambda(kernel, k):
    """Folded eigenvalue sum written out term by term with 1 - cos."""
    total = 0.0
    for m, (offset, weight) in enumerate(kernel.terms):
        total += (1.0 if m == 0 else 2.0) * weight * (1.0 - np.cos(kernel.h * offset * k))
    return total


def random_kernel(rng, max_offset):
    n_terms = int(rng.integers(1, 5))
    offsets = rng.choice(np.arange(1, max_offset + 1), size=min(n_terms, max_offset), replace=False)
    weights = rng.uniform(0.05, 2.0, size=offsets.size)
    c = float(rng.uniform(0.5, 2.0))
    h = float(rng.uniform(0.5, 2.0))
    return [(int(o), float(w)) for o, w in zip(offsets, weights)], c, h
