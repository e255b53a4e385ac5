import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ragseg import (
    AttentionInputs,
    BiasMatrix,
    PatchGrid,
    biased_attention,
    bilateral_bias,
    rag_bias,
    spatial_gaussian,
)
from ragseg.patch_bridge import PatchEdgeStats

from oracles import attention_loops


def stats_from(pair_values: dict, neighborhood: int) -> PatchEdgeStats:
    """Half of each value as mu, half as sigma; mu + sigma equals the value."""
    pairs = {k: (v / 2, v / 2) for k, v in pair_values.items()}
    return PatchEdgeStats(pairs, neighborhood)


def grid_of(w, h, patch=16):
    return PatchGrid(patch, w, h, [np.array([0])] * (w * h))


class TestRagBias:
    def test_zero_structure(self):
        grid = grid_of(2, 2)
        stats = stats_from({(0, 1): 0.0, (0, 2): 0.0, (1, 3): 0.0, (2, 3): 0.0, (0, 3): 0.0, (1, 2): 0.0}, 8)
        b = rag_bias(stats, grid, 8)
        np.testing.assert_array_equal(b, np.zeros(4))

    def test_interior_patch_mean(self):
        # 3x3 grid, 4-neighborhood; center patch 4 sees values 0.2/0.4/0.6/0.8.
        grid = grid_of(3, 3)
        values = {(1, 4): 0.2, (3, 4): 0.4, (4, 5): 0.6, (4, 7): 0.8}
        # Remaining adjacent pairs need entries; give them arbitrary values.
        for pair in [(0, 1), (1, 2), (0, 3), (2, 5), (3, 6), (5, 8), (6, 7), (7, 8)]:
            values[pair] = 0.123
        b = rag_bias(stats_from(values, 4), grid, 4)
        assert b[4] == pytest.approx(0.5)

    def test_corner_patch_existing_neighbors_only(self):
        # 2x2 grid under 4-connectivity: patch 0 borders 1 and 2.
        grid = grid_of(2, 2)
        values = {(0, 1): 0.3, (0, 2): 0.5, (1, 3): 0.9, (2, 3): 0.7}
        b = rag_bias(stats_from(values, 4), grid, 4)
        assert b[0] == pytest.approx(0.4)

    def test_isolated_patch(self):
        grid = grid_of(1, 1)
        b = rag_bias(PatchEdgeStats({}, 4), grid, 4)
        np.testing.assert_array_equal(b, [0.0])

    def test_neighborhood_mismatch_rejected(self):
        grid = grid_of(2, 1)
        with pytest.raises(ValueError):
            rag_bias(stats_from({(0, 1): 0.1}, 4), grid, 8)


class TestSpatialGaussian:
    def test_diagonal_is_one(self):
        g = spatial_gaussian(4, 3, 2.0)
        np.testing.assert_array_equal(np.diag(g), np.ones(12))

    def test_sqrt2_distance(self):
        g = spatial_gaussian(2, 2, 1.0)
        # Patches 0 and 3 sit diagonally: squared distance 2.
        assert g[0, 3] == pytest.approx(np.exp(-1.0))
        assert g[0, 3] == pytest.approx(0.367879, abs=1e-6)

    def test_two_by_one_grid(self):
        g = spatial_gaussian(2, 1, 5.0)
        assert g[0, 1] == pytest.approx(np.exp(-1 / 50))
        assert g[0, 1] == pytest.approx(0.980199, abs=1e-6)

    def test_symmetric(self):
        g = spatial_gaussian(5, 4, 3.0)
        np.testing.assert_array_equal(g, g.T)

    def test_sigma_validated(self):
        with pytest.raises(ValueError):
            spatial_gaussian(2, 2, 0.0)


class TestBilateralBias:
    def test_zero_bias_reduces_to_kernel(self):
        g = spatial_gaussian(3, 3, 2.0)
        out = bilateral_bias(g, np.zeros(9), 2.0)
        assert out.values.tobytes() == g.tobytes()

    def test_formula(self):
        g = np.full((2, 2), 0.5)
        out = bilateral_bias(g, np.array([1.0, 0.0]), 1.0)
        assert out.values[0, 0] == pytest.approx(0.5 * np.e)
        assert out.values[0, 1] == pytest.approx(1.359141, abs=1e-6)
        assert out.values[1, 0] == pytest.approx(0.5)

    def test_degenerate_grid(self):
        out = bilateral_bias(spatial_gaussian(1, 1, 5.0), np.zeros(1), 5.0)
        np.testing.assert_array_equal(out.values, [[1.0]])

    def test_structural_factor_is_rowwise(self):
        g = spatial_gaussian(2, 1, 5.0)
        b = np.array([0.4, 0.9])
        out = bilateral_bias(g, b, 5.0).values
        assert out[0, 1] == pytest.approx(g[0, 1] * np.exp(0.4))
        assert out[1, 0] == pytest.approx(g[1, 0] * np.exp(0.9))

    def test_positivity_and_bound(self, rng):
        b = rng.uniform(0.0, 1.5, size=16)
        g = spatial_gaussian(4, 4, 5.0)
        out = bilateral_bias(g, b, 5.0).values
        assert (out > 0).all()
        assert (out <= np.exp(b.max()) + 1e-12).all()

    def test_argmax_follows_kernel_for_uniform_bias(self):
        g = spatial_gaussian(4, 4, 2.0)
        out = bilateral_bias(g, np.full(16, 0.7), 2.0).values
        np.testing.assert_array_equal(out.argmax(axis=1), g.argmax(axis=1))


class TestBiasedAttention:
    def test_single_token_returns_v(self):
        inp = AttentionInputs(np.array([[2.0]]), np.array([[3.0]]), np.array([[5.0, 7.0]]))
        out = biased_attention(inp, BiasMatrix(np.zeros((1, 1)), 1.0))
        np.testing.assert_allclose(out, [[5.0, 7.0]])

    def test_zero_bias_equals_unbiased(self, rng):
        n, d = 10, 4
        q, k, v = rng.standard_normal((3, n, d))
        inp = AttentionInputs(q, k, v)
        ours = biased_attention(inp, BiasMatrix(np.zeros((n, n)), 1.0))
        logits = q @ k.T / np.sqrt(d)
        weights = np.exp(logits - logits.max(axis=1, keepdims=True))
        weights /= weights.sum(axis=1, keepdims=True)
        np.testing.assert_allclose(ours, weights @ v, atol=1e-6)

    def test_symmetric_two_tokens(self):
        inp = AttentionInputs(
            np.array([[1.0], [1.0]]), np.array([[1.0], [1.0]]), np.array([[0.0], [1.0]])
        )
        out = biased_attention(inp, BiasMatrix(np.zeros((2, 2)), 1.0))
        np.testing.assert_allclose(out, [[0.5], [0.5]])

    def test_matches_loop_oracle(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 64))
            d = int(rng.integers(1, 32))
            q, k = rng.standard_normal((2, n, d))
            v = rng.standard_normal((n, int(rng.integers(1, 8))))
            bias = rng.standard_normal((n, n))
            out = biased_attention(AttentionInputs(q, k, v), BiasMatrix(bias, 1.0))
            np.testing.assert_allclose(out, attention_loops(q, k, v, bias), atol=1e-6)

    def test_row_sums_one(self, rng):
        n, d = 16, 8
        q, k, _ = rng.standard_normal((3, n, d))
        bias = rng.standard_normal((n, n))
        # With V = I the output rows ARE the softmax weights.
        weights = biased_attention(AttentionInputs(q, k, np.eye(n)), BiasMatrix(bias, 1.0))
        np.testing.assert_allclose(weights.sum(axis=1), 1.0, atol=1e-6)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31), shift=st.floats(-50, 50))
    def test_row_shift_invariance(self, seed, shift):
        local = np.random.default_rng(seed)
        n, d = 6, 3
        q, k, v = local.standard_normal((3, n, d))
        bias = local.standard_normal((n, n))
        shifted = bias.copy()
        shifted[2] += shift
        a = biased_attention(AttentionInputs(q, k, v), BiasMatrix(bias, 1.0))
        b = biased_attention(AttentionInputs(q, k, v), BiasMatrix(shifted, 1.0))
        np.testing.assert_allclose(a[2], b[2], atol=1e-6)
        np.testing.assert_allclose(a, b, atol=1e-6)

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            AttentionInputs(np.array([[np.nan]]), np.array([[1.0]]), np.array([[1.0]]))
        inp = AttentionInputs(np.array([[1.0]]), np.array([[1.0]]), np.array([[1.0]]))
        with pytest.raises(ValueError):
            biased_attention(inp, BiasMatrix(np.array([[np.inf]]), 1.0))

    def test_shape_mismatch_rejected(self):
        inp = AttentionInputs(np.ones((2, 3)), np.ones((2, 3)), np.ones((2, 3)))
        with pytest.raises(ValueError):
            biased_attention(inp, BiasMatrix(np.zeros((3, 3)), 1.0))
