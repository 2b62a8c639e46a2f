"""Mazur maps and the anticommutator inequality ratios.

Evaluates each ratio objective on random instances: the main weighted
inequality, the power-difference bounds, and the Lipschitz-on-balls
behaviour of the Mazur map between Schatten spheres.
"""

import math

import numpy as np

from schattenlab import (ExponentConfig, PositiveDefiniteMatrix,
                        decomposition_residual, eq1_ratio, main_ratio,
                        mazur_lipschitz_ratio, mazur_map, powers_diff_ratio,
                        schatten_norm)

rng = np.random.default_rng(11)
n = 4


def rand(n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def rand_pdm(n):
    lam = np.exp(rng.uniform(-2, 2, n))
    q, _ = np.linalg.qr(rand(n))
    return PositiveDefiniteMatrix.from_spectral(lam, q)


# the Mazur map sends the unit sphere of S_p to the unit sphere of S_q
f = rand(n)
f = f / schatten_norm(f, 2.0)
img = mazur_map(f, 2.0, 0.5)
print("||f||_2 = 1  ->  ||M(f)||_1/2 = %.12f" % schatten_norm(img, 0.5))

# main inequality ratio at the square-root point alpha = 1
cfg = ExponentConfig(alpha=1.0, s=4.0 / 3.0, r=math.inf)
print("\nmain ratio samples (alpha=1, s=4/3, r=inf):")
for _ in range(5):
    print("  %.6f" % main_ratio(rand_pdm(n), rand(n), cfg))

# power-difference ratios; the commuting ceiling is p/q
print("\npowers-diff ratio samples (p=1, q=1/2, ceiling p/q = 2):")
for _ in range(5):
    print("  %.6f" % powers_diff_ratio(rand_pdm(n), rand_pdm(n), 1.0, 0.5))

print("\neq1 ratio, both signs (p=1, q=1/2):")
d, x = rand_pdm(n), rand(n)
print("  + : %.6f" % eq1_ratio(d, x, 1.0, 0.5, +1))
print("  - : %.6f" % eq1_ratio(d, x, 1.0, 0.5, -1))

print("\nMazur Lipschitz ratio samples (p=2, q=1/2):")
for _ in range(3):
    print("  %.6f" % mazur_lipschitz_ratio(rand(n), rand(n), 2.0, 0.5))

# the three-term splitting of x^(1+t) - y^(1+t) behind the eq1 bounds
x, y = rand_pdm(n), rand_pdm(n)
res, gap = decomposition_residual(x, y, 0.3)
print("\ndecomposition identity residual at t=0.3: %.3e" % res)
print("mixed-kernel vs block construction gap:    %.3e" % gap)
