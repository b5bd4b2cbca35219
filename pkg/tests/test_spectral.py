import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fwbesov.errors import InputShapeError, ParameterError, ResolutionError
from fwbesov.spectral import (
    GridSpec,
    PeriodicFunction,
    TrigTerm,
    analyze,
    constant,
    derivative,
    from_terms,
    lp_norm,
    multiply,
    synthesize,
)


def sampled(fn, N):
    grid = GridSpec(N)
    return analyze(fn(grid.x), grid)


def random_hermitian(seed, N, max_mode):
    rng = np.random.default_rng(seed)
    c = np.zeros(N, dtype=complex)
    k = np.arange(1, max_mode + 1)
    c[k] = rng.standard_normal(k.size) + 1j * rng.standard_normal(k.size)
    c[-k] = np.conj(c[k])
    c[0] = rng.standard_normal()
    return PeriodicFunction(GridSpec(N), c)


class TestGrid:
    def test_nodes(self):
        g = GridSpec(8)
        np.testing.assert_allclose(g.x, 2 * np.pi * np.arange(8) / 8)
        assert g.modes[4] == -4
        assert list(g.modes[:4]) == [0, 1, 2, 3]

    @pytest.mark.parametrize("N", [6, 7, 9, 0, -8])
    def test_rejects_bad_sizes(self, N):
        with pytest.raises(ParameterError):
            GridSpec(N)


class TestAnalyzeSynthesize:
    def test_constant(self):
        f = sampled(lambda x: np.ones_like(x), 16)
        assert f.coeff(0) == pytest.approx(1.0)
        assert np.max(np.abs(f.coeffs[1:])) < 1e-15

    def test_single_sine(self):
        f = sampled(lambda x: np.sin(3 * x), 16)
        assert f.coeff(3) == pytest.approx(-0.5j, abs=1e-15)
        assert f.coeff(-3) == pytest.approx(0.5j, abs=1e-15)

    def test_round_trip_two_modes(self):
        x = GridSpec(32).x
        samples = np.sin(3 * x) + 0.5 * np.cos(5 * x)
        back = synthesize(analyze(samples, GridSpec(32)))
        assert np.max(np.abs(back - samples)) <= 1e-12

    def test_synthesize_examples(self):
        g = GridSpec(16)
        np.testing.assert_allclose(synthesize(constant(2.0, g)), 2.0)
        c = np.zeros(16, complex)
        c[1], c[-1] = -0.5j, 0.5j
        np.testing.assert_allclose(synthesize(PeriodicFunction(g, c)), np.sin(g.x), atol=1e-15)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), logN=st.integers(3, 9))
    def test_round_trip_random(self, seed, logN):
        N = 2**logN
        f = random_hermitian(seed, N, N // 2 - 1)
        back = analyze(synthesize(f), f.grid)
        rel = np.max(np.abs(back.coeffs - f.coeffs)) / np.max(np.abs(f.coeffs))
        assert rel <= 1e-12

    def test_length_mismatch(self):
        with pytest.raises(InputShapeError):
            analyze(np.zeros(10), GridSpec(16))

    def test_hermitian_from_real_samples(self):
        rng = np.random.default_rng(0)
        f = analyze(rng.standard_normal(64), GridSpec(64))
        assert f.hermitian_defect() < 1e-15

    def test_immutable(self):
        f = constant(1.0, GridSpec(8))
        with pytest.raises(ValueError):
            f.coeffs[0] = 2.0


class TestFromTerms:
    def test_constant_term(self):
        f = from_terms([TrigTerm(1.0, 0, 0.0, "cos")], GridSpec(16))
        assert f.coeff(0) == 1.0
        assert np.count_nonzero(f.coeffs) == 1

    def test_scaled_sine(self):
        n, s = 4, 3
        f = from_terms([TrigTerm(1 / n**s, n)], GridSpec(16))
        assert f.coeff(4) == pytest.approx(-1j / 128, abs=0)
        assert f.coeff(-4) == pytest.approx(1j / 128, abs=0)

    def test_linearity(self):
        g = GridSpec(32)
        a, b = TrigTerm(0.7, 3, 0.2), TrigTerm(-1.1, 5, 1.3, "cos")
        both = from_terms([a, b], g)
        np.testing.assert_array_equal(both.coeffs, (from_terms([a], g) + from_terms([b], g)).coeffs)

    @pytest.mark.parametrize("kind", ["sin", "cos"])
    def test_matches_sampling(self, kind):
        g = GridSpec(64)
        fn = np.sin if kind == "sin" else np.cos
        exact = from_terms([TrigTerm(0.8, 7, 0.9, kind)], g)
        via_samples = analyze(0.8 * fn(7 * g.x + 0.9), g)
        assert np.max(np.abs(exact.coeffs - via_samples.coeffs)) < 1e-15

    def test_unrepresentable(self):
        with pytest.raises(ResolutionError):
            from_terms([TrigTerm(1.0, 8)], GridSpec(16))


class TestDerivative:
    def test_sine(self):
        g = GridSpec(32)
        d = derivative(from_terms([TrigTerm(1.0, 5)], g))
        expected = from_terms([TrigTerm(5.0, 5, 0.0, "cos")], g)
        assert np.max(np.abs(d.coeffs - expected.coeffs)) < 1e-15

    def test_constant(self):
        assert not np.any(derivative(constant(3.0, GridSpec(16))).coeffs)

    def test_pointwise(self):
        g = GridSpec(32)
        d = derivative(sampled(lambda x: np.sin(3 * x + 0.7), 32))
        assert np.max(np.abs(d.values() - 3 * np.cos(3 * g.x + 0.7))) <= 1e-12

    def test_nyquist_dropped(self):
        rng = np.random.default_rng(1)
        f = analyze(rng.standard_normal(16), GridSpec(16))
        assert f.coeff(-8) != 0
        assert derivative(f).coeff(-8) == 0


class TestMultiply:
    def test_identity_under_dealiasing(self):
        g = GridSpec(48)
        f = random_hermitian(3, 48, 23)
        prod = multiply(f, constant(1.0, g))
        keep = np.abs(g.modes) <= 16
        np.testing.assert_allclose(prod.coeffs[keep], f.coeffs[keep], atol=1e-14)
        assert not np.any(prod.coeffs[~keep])

    def test_double_angle(self):
        g = GridSpec(32)
        s1 = from_terms([TrigTerm(1.0, 1)], g)
        expected = from_terms([TrigTerm(0.5, 0, 0.0, "cos"), TrigTerm(-0.5, 2, 0.0, "cos")], g)
        assert np.max(np.abs(multiply(s1, s1).coeffs - expected.coeffs)) < 1e-15

    def test_product_to_sum(self):
        g = GridSpec(32)
        f = multiply(from_terms([TrigTerm(1.0, 3)], g), from_terms([TrigTerm(1.0, 5, 0, "cos")], g))
        assert np.max(np.abs(f.values() - (np.sin(8 * g.x) - np.sin(2 * g.x)) / 2)) <= 1e-12

    def test_grid_mismatch(self):
        with pytest.raises(InputShapeError):
            multiply(constant(1.0, GridSpec(16)), constant(1.0, GridSpec(32)))

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_product_rule(self, seed):
        N = 96
        f, g = random_hermitian(seed, N, N // 6), random_hermitian(seed + 1, N, N // 6)
        lhs = derivative(multiply(f, g))
        rhs = multiply(derivative(f), g) + multiply(f, derivative(g))
        assert np.max(np.abs(lhs.values() - rhs.values())) <= 1e-10

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_hermitian_preserved(self, seed):
        f, g = random_hermitian(seed, 64, 31), random_hermitian(seed ^ 5, 64, 31)
        for out in (multiply(f, g), derivative(f), f + g, 2.5 * f):
            assert out.hermitian_defect() < 1e-14


class TestLpNorm:
    @pytest.mark.parametrize("n", [1, 4, 15])
    def test_sine_l2(self, n):
        f = from_terms([TrigTerm(1.0, n)], GridSpec(32))
        assert lp_norm(f, 2) == pytest.approx(np.sqrt(np.pi), rel=1e-15)

    @pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, 7.0])
    def test_constant(self, p):
        c = -1.7
        assert lp_norm(constant(c, GridSpec(16)), p) == pytest.approx(abs(c) * (2 * np.pi) ** (1 / p))

    def test_sup_is_grid_maximum(self):
        # N = 64 puts a node exactly at pi/2, so the grid maximum is 1
        for N in (64, 66, 70):
            g = GridSpec(N)
            f = from_terms([TrigTerm(1.0, 1)], g)
            assert lp_norm(f, np.inf) == pytest.approx(np.max(np.abs(np.sin(g.x))), rel=1e-15)
            assert lp_norm(f, np.inf) <= 1.0 + 1e-15
        assert lp_norm(from_terms([TrigTerm(1.0, 1)], GridSpec(64)), np.inf) == pytest.approx(1.0)
        assert lp_norm(from_terms([TrigTerm(1.0, 1)], GridSpec(66)), np.inf) == pytest.approx(
            np.cos(np.pi / 66), rel=1e-15
        )

    @pytest.mark.parametrize("p, rel", [(4.0, 1e-12), (6.0, 1e-12), (1.0, 1e-2), (3.0, 1e-3)])
    def test_quadrature_against_fine_grid(self, p, rel):
        # even integer p: |f|^p is band-limited and the trapezoid rule is exact
        f = random_hermitian(9, 64, 8)
        c = np.zeros(1024, complex)
        c[:9], c[-8:] = f.coeffs[:9], f.coeffs[-8:]
        fine = PeriodicFunction(GridSpec(1024), c)
        assert lp_norm(f, p) == pytest.approx(lp_norm(fine, p), rel=rel)

    def test_parseval_matches_quadrature(self):
        f = random_hermitian(4, 128, 40)
        quad = np.sqrt(2 * np.pi / 128 * np.sum(f.values() ** 2))
        assert lp_norm(f, 2) == pytest.approx(quad, rel=1e-10)

    def test_rejects_small_p(self):
        with pytest.raises(ParameterError):
            lp_norm(constant(1.0, GridSpec(8)), 0.5)
