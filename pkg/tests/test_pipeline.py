import numpy as np
import pytest

from ragseg import (
    EmbeddingSet,
    PipelineConfig,
    RgbImage,
    compute_bias_for_image,
    compute_node_bias,
    evaluate_miou,
    segment,
    spatial_gaussian,
)
from ragseg.pipeline import upsample_patch_labels
from ragseg.synthetic import planted_class_lattice, textured_blocks

from oracles import miou_loops


def checkerboard(size=64, cell=8) -> RgbImage:
    yy, xx = np.mgrid[0:size, 0:size]
    board = ((yy // cell + xx // cell) % 2).astype(float)
    return RgbImage(np.repeat(board[..., None], 3, axis=2) * 0.6 + 0.2)


SMALL_CFG = PipelineConfig(n_segments=16, glcm_levels=8, patch_size=16)


class TestComputeBias:
    def test_constant_image_gives_spatial_kernel(self):
        img = RgbImage(np.full((64, 64, 3), 0.5))
        matrix = compute_bias_for_image(img, SMALL_CFG)
        kernel = spatial_gaussian(4, 4, SMALL_CFG.sigma_spatial)
        assert matrix.values.tobytes() == kernel.tobytes()

    def test_constant_image_zero_node_bias(self):
        img = RgbImage(np.full((64, 64, 3), 0.25))
        b = compute_node_bias(img, SMALL_CFG)
        np.testing.assert_array_equal(b, np.zeros(16))

    def test_deterministic(self):
        img = textured_blocks(size=64, seed=3)
        a = compute_bias_for_image(img, SMALL_CFG)
        b = compute_bias_for_image(img, SMALL_CFG)
        assert a.values.tobytes() == b.values.tobytes()

    def test_checkerboard_exceeds_constant(self):
        structured = compute_bias_for_image(checkerboard(), SMALL_CFG)
        flat = compute_bias_for_image(RgbImage(np.full((64, 64, 3), 0.5)), SMALL_CFG)
        assert structured.values.mean() > flat.values.mean()


class TestSegment:
    def test_planted_classes_recovered_exactly(self):
        img = RgbImage(np.full((64, 64, 3), 0.5))
        cfg = PipelineConfig(patch_size=16)
        text = np.eye(3, 8)
        classes = planted_class_lattice(4, 4, 3, block=2, seed=5)
        emb = EmbeddingSet(text[classes], text, 4, 4, ("a", "b", "c"))
        result = segment(img, emb, cfg)
        np.testing.assert_array_equal(result.patch_labels, classes)
        expected_pixels = upsample_patch_labels(classes, 4, 4, 16, 64, 64)
        np.testing.assert_array_equal(result.pixel_labels, expected_pixels)

    def test_single_class(self, rng):
        img = RgbImage(np.full((32, 32, 3), 0.5))
        cfg = PipelineConfig(patch_size=16)
        emb = EmbeddingSet(rng.uniform(0.1, 1.0, (4, 6)), rng.uniform(0.1, 1.0, (1, 6)), 2, 2, ("only",))
        result = segment(img, emb, cfg)
        assert (result.pixel_labels == 0).all()

    def test_fusion_beats_raw_on_noisy_planted_classes(self):
        # Noise level chosen so raw patch accuracy averages ~86%.
        sigma = 0.45
        gh = gw = 14
        text = np.eye(4, 16)
        raw_acc = []
        fused_acc = []
        for seed in range(100):
            local = np.random.default_rng(seed)
            classes = planted_class_lattice(gh, gw, 4, block=4, seed=seed)
            visual = text[classes] + sigma * local.standard_normal((gh * gw, 16))
            emb = EmbeddingSet(visual, text, gw, gh, ("a", "b", "c", "d"))
            img = RgbImage(np.full((gh * 16, gw * 16, 3), 0.5))
            for alpha, acc in ((0.0, raw_acc), (0.6, fused_acc)):
                cfg = PipelineConfig(patch_size=16, fusion_alpha=alpha)
                result = segment(img, emb, cfg)
                acc.append((result.patch_labels == classes).mean())
        assert 0.80 <= np.mean(raw_acc) <= 0.90
        assert np.mean(fused_acc) >= np.mean(raw_acc)

    def test_grid_mismatch_rejected(self, rng):
        img = RgbImage(np.full((64, 64, 3), 0.5))
        emb = EmbeddingSet(rng.uniform(0.1, 1, (9, 4)), rng.uniform(0.1, 1, (2, 4)), 3, 3, ("a", "b"))
        with pytest.raises(ValueError):
            segment(img, emb, PipelineConfig(patch_size=16))

    def test_pixel_labels_subset_of_patch_labels(self, rng):
        img = RgbImage(rng.uniform(size=(48, 48, 3)))
        emb = EmbeddingSet(rng.standard_normal((9, 5)), rng.standard_normal((3, 5)), 3, 3, ("a", "b", "c"))
        result = segment(img, emb, PipelineConfig(patch_size=16))
        assert set(np.unique(result.pixel_labels)) <= set(result.patch_labels.tolist())


class TestUpsampling:
    def test_footprints(self):
        labels = np.array([0, 1, 2, 3])
        up = upsample_patch_labels(labels, 2, 2, 3, 6, 6)
        assert up.shape == (6, 6)
        assert (up[:3, :3] == 0).all()
        assert (up[:3, 3:] == 1).all()
        assert (up[3:, :3] == 2).all()
        assert (up[3:, 3:] == 3).all()

    def test_border_crop(self):
        labels = np.array([0, 1, 2, 3])
        up = upsample_patch_labels(labels, 2, 2, 16, 20, 17)
        assert up.shape == (17, 20)
        # Patch multiset preserved: every patch contributes its pixel footprint.
        assert (up[:16, :16] == 0).all()
        assert (up[:16, 16:] == 1).all()
        assert (up[16:, :16] == 2).all()
        assert (up[16:, 16:] == 3).all()


class TestEvaluateMiou:
    def test_perfect_prediction(self, rng):
        gt = rng.integers(0, 4, size=(8, 8))
        per_class, mean = evaluate_miou(gt, gt, 4)
        assert mean == 1.0

    def test_hand_counted_quarter(self):
        gt = np.array([[0, 0, 1, 1]])
        pred = np.array([[0, 0, 0, 0]])
        per_class, mean = evaluate_miou(pred, gt, 2)
        assert per_class == [0.5, 0.0]
        assert mean == 0.25

    def test_disjoint_predictions(self):
        gt = np.full((4, 4), 1)
        pred = np.zeros((4, 4), dtype=int)
        _, mean = evaluate_miou(pred, gt, 2)
        assert mean == 0.0

    def test_absent_classes_excluded(self):
        gt = np.zeros((2, 2), dtype=int)
        pred = np.zeros((2, 2), dtype=int)
        per_class, mean = evaluate_miou(pred, gt, 5)
        assert per_class == [1.0, None, None, None, None]
        assert mean == 1.0

    def test_ignore_label(self):
        gt = np.array([[0, 0, 255, 255]])
        pred = np.array([[0, 1, 0, 1]])
        per_class, mean = evaluate_miou(pred, gt, 2, ignore_label=255)
        # Only the first two pixels count: class 0 has inter 1, union 2.
        assert per_class[0] == 0.5
        assert per_class[1] == 0.0
        assert mean == 0.25

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            evaluate_miou(np.zeros((2, 2)), np.zeros((3, 2)), 2)

    def test_out_of_range_labels(self):
        with pytest.raises(ValueError):
            evaluate_miou(np.array([[5]]), np.array([[0]]), 2)

    def test_matches_loop_oracle(self, rng):
        for trial in range(50):
            local = np.random.default_rng(trial)
            n = int(local.integers(2, 6))
            gt = local.integers(0, n, size=(8, 8))
            pred = local.integers(0, n, size=(8, 8))
            ours_pc, ours_mean = evaluate_miou(pred, gt, n)
            ref_pc, ref_mean = miou_loops(pred, gt, n)
            assert ours_mean == pytest.approx(ref_mean, abs=1e-12)
            for a, b in zip(ours_pc, ref_pc):
                if b is None:
                    assert a is None
                else:
                    assert a == pytest.approx(b, abs=1e-12)


class TestConfig:
    def test_defaults(self):
        cfg = PipelineConfig()
        assert cfg.n_segments == 300
        assert cfg.compactness == 10.0
        assert cfg.glcm_levels == 32
        assert cfg.neighborhood == 8
        assert cfg.patch_size == 16
        assert cfg.sigma_spatial == 5.0
        assert cfg.fusion_alpha == 0.6
        assert cfg.fusion_kernel == 3
        assert cfg.fusion_sigma == 3.0

    def test_validation(self):
        with pytest.raises(ValueError):
            PipelineConfig(fusion_alpha=1.2)
        with pytest.raises(ValueError):
            PipelineConfig(neighborhood=6)
        with pytest.raises(ValueError):
            PipelineConfig(fusion_kernel=4)
