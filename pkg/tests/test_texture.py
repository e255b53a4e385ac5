import numpy as np
import pytest

from ragseg import GlcmMatrix, GrayImage, RgbImage, glcm, texture_features, to_gray_quantized
from ragseg.texture import DEFAULT_OFFSETS

from oracles import glcm_loops, texture_features_loops


def gray(data, levels):
    return GrayImage(np.asarray(data), levels)


class TestGlcm:
    def test_constant_region(self):
        g = gray(np.full((3, 3), 3), levels=8)
        p = glcm(g, np.ones((3, 3), dtype=bool))
        expected = np.zeros((8, 8))
        expected[3, 3] = 1.0
        np.testing.assert_array_equal(p.probs, expected)

    def test_two_by_two_horizontal_only(self):
        g = gray([[0, 1], [0, 1]], levels=2)
        p = glcm(g, np.ones((2, 2), dtype=bool), offsets=((0, 1),))
        np.testing.assert_array_equal(p.probs, [[0.0, 0.5], [0.5, 0.0]])

    def test_single_pixel_fallback(self):
        g = gray([[0, 1], [1, 1]], levels=4)
        mask = np.array([[True, False], [False, False]])
        p = glcm(g, mask)
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        np.testing.assert_array_equal(p.probs, expected)

    def test_scattered_mask_fallback_uses_dominant_bin(self):
        g = gray([[2, 0, 5], [0, 0, 0], [5, 0, 2]], levels=8)
        mask = np.zeros((3, 3), dtype=bool)
        mask[0, 0] = mask[2, 2] = True  # no offset connects the two corners
        p = glcm(g, mask)
        assert p.probs[2, 2] == 1.0

    def test_empty_mask_rejected(self):
        g = gray(np.zeros((2, 2)), levels=2)
        with pytest.raises(ValueError):
            glcm(g, np.zeros((2, 2), dtype=bool))

    def test_matches_loop_oracle(self, rng):
        for _ in range(20):
            h, w = rng.integers(3, 12, size=2)
            levels = int(rng.integers(2, 9))
            data = rng.integers(0, levels, size=(h, w))
            mask = rng.uniform(size=(h, w)) < 0.6
            if not mask.any():
                mask[0, 0] = True
            p = glcm(GrayImage(data, levels), mask)
            expected = glcm_loops(data, levels, mask, DEFAULT_OFFSETS)
            np.testing.assert_allclose(p.probs, expected, atol=1e-12)


class TestTextureFeatures:
    def test_point_mass(self):
        p = np.zeros((8, 8))
        p[3, 3] = 1.0
        f = texture_features(GlcmMatrix(p))
        assert (f.contrast, f.homogeneity, f.energy, f.correlation) == (0.0, 1.0, 1.0, 1.0)

    def test_antidiagonal_two_levels(self):
        f = texture_features(GlcmMatrix([[0.0, 0.5], [0.5, 0.0]]))
        assert f.contrast == pytest.approx(1.0)
        assert f.homogeneity == pytest.approx(0.5)
        assert f.energy == pytest.approx(0.5)
        assert f.correlation == pytest.approx(-1.0)

    def test_uniform_two_levels(self):
        f = texture_features(GlcmMatrix(np.full((2, 2), 0.25)))
        assert f.contrast == pytest.approx(0.5)
        assert f.homogeneity == pytest.approx(0.75)
        assert f.energy == pytest.approx(0.25)
        assert f.correlation == pytest.approx(0.0)

    def test_matches_loop_oracle_on_random_glcms(self, rng):
        for _ in range(50):
            levels = int(rng.integers(2, 12))
            raw = rng.uniform(size=(levels, levels))
            sym = raw + raw.T
            p = GlcmMatrix(sym / sym.sum())
            ours = texture_features(p)
            ref = texture_features_loops(p.probs)
            for name in ("contrast", "homogeneity", "energy", "correlation"):
                assert getattr(ours, name) == pytest.approx(ref[name], abs=1e-9)

    def test_transposition_invariance(self, rng):
        raw = rng.uniform(size=(6, 6))
        sym = raw + raw.T
        p = GlcmMatrix(sym / sym.sum())
        a = texture_features(p)
        b = texture_features(GlcmMatrix(p.probs.T))
        assert a == b

    def test_energy_one_iff_point_mass(self, rng):
        raw = rng.uniform(0.1, 1.0, size=(4, 4))
        sym = raw + raw.T
        spread = texture_features(GlcmMatrix(sym / sym.sum()))
        assert spread.energy < 1.0

    def test_contrast_zero_iff_diagonal(self):
        p = np.diag([0.25, 0.25, 0.5])
        f = texture_features(GlcmMatrix(p))
        assert f.contrast == 0.0


class TestEndToEnd:
    def test_region_glcm_from_quantized_image(self, rng):
        # Features of masked GLCMs from a real quantized image match the oracle.
        img = RgbImage(rng.uniform(size=(16, 16, 3)))
        g = to_gray_quantized(img, 8)
        for _ in range(10):
            mask = rng.uniform(size=(16, 16)) < 0.5
            if not mask.any():
                continue
            p = glcm(g, mask)
            ref = texture_features_loops(
                glcm_loops(g.data, 8, mask, DEFAULT_OFFSETS)
            )
            ours = texture_features(p)
            for name, val in ref.items():
                assert getattr(ours, name) == pytest.approx(val, abs=1e-9)
