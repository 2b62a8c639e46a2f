"""Divided-difference kernels and the weighted Schur-multiplier maps.

Shows the positivity of the Loewner matrix of t -> t^gamma, the weighted
T-map acting on a perturbation, the composition identity that reduces any
gamma to the square-root case, and the unital trace-preserving map with
its Hansen-Pedersen inequality.
"""

import numpy as np

from schattenlab import (PositiveDefiniteMatrix, TMapParams, herm_eig,
                        loewner_min_eig, positive_power, t_map, unital_cp_map)

rng = np.random.default_rng(7)
n = 4

lam = np.exp(rng.uniform(-3, 3, n))
q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
d = PositiveDefiniteMatrix.from_spectral(lam, q)
delta = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))

print("spectrum:", np.round(np.sort(lam), 4))
for g in (0.2, 0.5, 0.8, 1.0):
    print("  min eig of Loewner(t^%.1f): %10.3e" % (g, loewner_min_eig(lam, g)))

# the T-map is a Schur multiplier against the spectral projections of d
params = TMapParams(beta=0.3, gamma=0.7)
out = t_map(d, params, delta)
print("\nT-map alpha = 2 beta + gamma - 1 =", round(params.alpha, 4))
print("||T(delta)||_F =", round(np.linalg.norm(out.mat), 4))

# composing with the map over d^gamma at v = 1/(2 gamma) lands on the
# square-root kernel with shifted weight beta + gamma (1 - v)/2
v = 1.0 / (2.0 * params.gamma)
s = herm_eig(d)
d_gamma = PositiveDefiniteMatrix.from_spectral(s.eigenvalues ** params.gamma,
                                               s.vectors)
lhs = t_map(d_gamma, TMapParams((1.0 - v) / 2.0, v), out.mat)
rhs = t_map(d, TMapParams(params.beta + params.gamma * (1.0 - v) / 2.0, 0.5), delta)
print("composition identity residual: %.3e" % np.abs(lhs.mat - rhs.mat).max())

# the normalized map is unital, trace-preserving, and satisfies
# S(y^q) <= S(y)^q for positive y
gamma = 0.7
y = delta @ delta.conj().T + 0.1 * np.eye(n)
s_eye = unital_cp_map(d, gamma, np.eye(n, dtype=complex))
print("\nunitality residual: %.3e" % np.abs(s_eye.mat - np.eye(n)).max())

qq = 0.5
lhs = unital_cp_map(d, gamma, positive_power(PositiveDefiniteMatrix(y), qq)).mat
sy = unital_cp_map(d, gamma, y).mat
rhs = positive_power(PositiveDefiniteMatrix(0.5 * (sy + sy.conj().T)), qq)
gap_min_eig = np.linalg.eigvalsh(rhs - lhs).min()
print("Hansen-Pedersen S(y^q) <= S(y)^q, min eig of gap: %.3e" % gap_min_eig)
