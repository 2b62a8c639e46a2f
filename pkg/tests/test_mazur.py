import math

import numpy as np
import pytest

from schattenlab.matcore import PositiveDefiniteMatrix, ValidationError
from schattenlab.mazur import (decomposition_residual, eq1_ratio,
                               interp_corollary_ratio, main_ratio,
                               mazur_lipschitz_ratio, mazur_map,
                               powers_diff_ratio)
from schattenlab.schatten import ExponentConfig, schatten_norm

RNG = np.random.default_rng(40318)


def rand_complex(n):
    return RNG.standard_normal((n, n)) + 1j * RNG.standard_normal((n, n))


def rand_pdm(n, spread=2.0):
    lam = np.exp(RNG.uniform(-spread, spread, n))
    q, _ = np.linalg.qr(rand_complex(n))
    return PositiveDefiniteMatrix.from_spectral(lam, q)


class TestMazurMap:
    def test_identity_when_p_equals_q(self):
        f = rand_complex(4)
        assert np.abs(mazur_map(f, 1.5, 1.5).mat - f).max() <= 1e-10

    def test_sphere_to_sphere(self):
        f = rand_complex(5)
        f = f / schatten_norm(f, 2.0)
        img = mazur_map(f, 2.0, 0.5)
        assert abs(schatten_norm(img, 0.5) - 1.0) <= 1e-9

    def test_positive_input_is_power(self):
        d = rand_pdm(4, spread=1.0)
        img = mazur_map(d.mat, 2.0, 1.0).mat
        ref = (d.spectral.vectors * d.spectral.eigenvalues ** 2) \
            @ d.spectral.vectors.conj().T
        assert np.abs(img - ref).max() <= 1e-9

    def test_scalar_oracle(self):
        # one-dimensional case: z |z|^(p/q - 1)
        z = 1.3 - 0.7j
        img = mazur_map(np.array([[z]]), 3.0, 1.0).mat[0, 0]
        assert abs(img - z * abs(z) ** 2) <= 1e-12

    def test_rejects_bad_exponents(self):
        with pytest.raises(ValidationError):
            mazur_map(rand_complex(2), -1.0, 0.5)


class TestRatioObjectives:
    def test_main_ratio_positive_and_finite(self):
        cfg = ExponentConfig(alpha=1.0, s=4.0 / 3.0, r=math.inf)
        for _ in range(10):
            val = main_ratio(rand_pdm(4), rand_complex(4), cfg)
            assert 0 < val < 100

    def test_main_ratio_commuting_oracle(self):
        # d = I: numerator ||x||_q, denominator n^(alpha/s) * 2 ||x||_p
        cfg = ExponentConfig(alpha=1.0, s=2.0, r=math.inf)
        n = 3
        d = PositiveDefiniteMatrix(np.eye(n, dtype=complex))
        x = rand_complex(n)
        val = main_ratio(d, x, cfg)
        expect = schatten_norm(x, cfg.q) / (n ** 0.5 * 2 * schatten_norm(x, cfg.p))
        assert abs(val - expect) <= 1e-10 * expect

    def test_eq1_scalar_case(self):
        # 1x1 matrices: ratio is |x| 2 d^(p/q) / (2 |x| d * d^(p/q-1)) = 1
        d = PositiveDefiniteMatrix(np.array([[2.0 + 0j]]))
        x = np.array([[0.3 + 1j]])
        assert abs(eq1_ratio(d, x, 1.0, 0.5, +1) - 1.0) <= 1e-12

    def test_eq1_minus_commuting_sentinel(self):
        # x = d kills the denominator exactly while rounding leaves a tiny
        # numerator: the near-kernel sentinel fires instead of a blow-up
        d = rand_pdm(3)
        val = eq1_ratio(d, d.mat.copy(), 1.0, 0.5, -1)
        assert val == 0.0 or math.isinf(val)

    def test_eq1_rejects_bad_exponents(self):
        with pytest.raises(ValidationError):
            eq1_ratio(rand_pdm(2), rand_complex(2), 0.5, 1.0, +1)
        with pytest.raises(ValidationError):
            eq1_ratio(rand_pdm(2), rand_complex(2), 1.0, 0.5, 2)

    def test_interp_ratio_finite(self):
        for _ in range(10):
            val = interp_corollary_ratio(rand_pdm(4), rand_complex(4),
                                         0.3, 0.5, math.inf)
            assert 0 < val < 100

    def test_powers_diff_scalar_oracle(self):
        # scalars a, b: |a^2 - b^2| / (max(a,b) |a - b|) with p=1, q=1/2
        a, b = 3.0, 1.0
        x = PositiveDefiniteMatrix(np.array([[a + 0j]]))
        y = PositiveDefiniteMatrix(np.array([[b + 0j]]))
        val = powers_diff_ratio(x, y, 1.0, 0.5)
        assert abs(val - (a * a - b * b) / (a * (a - b))) <= 1e-12

    def test_powers_diff_symmetry(self):
        x, y = rand_pdm(4), rand_pdm(4)
        assert abs(powers_diff_ratio(x, y, 1.0, 0.5)
                   - powers_diff_ratio(y, x, 1.0, 0.5)) <= 1e-10

    def test_mazur_lipschitz_variants_agree_on_positives(self):
        x, y = rand_pdm(4, spread=1.0), rand_pdm(4, spread=1.0)
        a = mazur_lipschitz_ratio(x.mat, y.mat, 2.0, 0.5, variant="mazur")
        b = mazur_lipschitz_ratio(x.mat, y.mat, 2.0, 0.5, variant="abs-power")
        assert abs(a - b) <= 1e-8 * max(a, b)

    def test_sentinel_on_identical_pair(self):
        x = rand_complex(3)
        assert mazur_lipschitz_ratio(x, x.copy(), 2.0, 0.5) in (0.0, math.inf)

    def test_unknown_variant(self):
        with pytest.raises(ValidationError):
            mazur_lipschitz_ratio(rand_complex(2), rand_complex(2), 2.0, 0.5,
                                  variant="nope")


class TestDecomposition:
    @pytest.mark.parametrize("t", [0.1, 0.3, 0.45])
    def test_identity_and_block_agreement(self, t):
        x, y = rand_pdm(4), rand_pdm(4)
        res, gap = decomposition_residual(x, y, t)
        scale = max(schatten_norm(x.mat, math.inf),
                    schatten_norm(y.mat, math.inf)) ** (1 + t)
        assert res <= 1e-9 * scale
        assert gap <= 1e-9 * scale

    def test_identical_pair(self):
        x = rand_pdm(3)
        res, gap = decomposition_residual(x, PositiveDefiniteMatrix(x.mat.copy()), 0.3)
        assert res <= 1e-10
        assert gap <= 1e-10

    def test_rejects_t_out_of_range(self):
        x, y = rand_pdm(2), rand_pdm(2)
        with pytest.raises(ValidationError):
            decomposition_residual(x, y, 0.6)
