"""Feature-set widths, standardization, and variance-targeted PCA."""

import numpy as np
import pytest

from respira.acoustic import feature_names
from respira.fusion import (
    Standardizer,
    VarianceTargetPCA,
    assemble_features,
    feature_set_columns,
    feature_set_width,
    fit_pca,
    fit_standardizer,
    transform_pca,
)
from respira.validation import DegenerateDataError


def _inputs(value: float = 1.0):
    acoustic = np.arange(477, dtype=float) * value
    embedding = np.linspace(-1, 1, 1024) * value
    return acoustic, embedding


class TestAssembly:
    @pytest.mark.parametrize("feature_set,width",
                             [("F1", 1024), ("F2", 1027), ("F3", 1215), ("F4", 1501)])
    def test_widths(self, feature_set, width):
        assert feature_set_width(feature_set) == width
        fused = assemble_features(feature_set, "cough", {"cough": _inputs()})
        assert fused.values.shape == (width,)

    def test_combined_modality_doubles_width(self):
        fused = assemble_features("F4", "cough+breath",
                                  {"cough": _inputs(1.0), "breath": _inputs(2.0)})
        assert fused.values.shape == (2 * 1501,)
        np.testing.assert_array_equal(fused.values[:1024], _inputs()[1])
        np.testing.assert_array_equal(fused.values[1501:1501 + 1024],
                                      2.0 * _inputs()[1])

    def test_missing_modality_rejected(self):
        with pytest.raises(ValueError, match="missing modality"):
            assemble_features("F1", "cough+breath", {"cough": _inputs()})

    def test_f2_picks_period_tempo_duration(self):
        acoustic, embedding = _inputs()
        names = feature_names()
        fused = assemble_features("F2", "cough", {"cough": (acoustic, embedding)})
        tail = fused.values[1024:]
        assert tail[0] == acoustic[names.index("dominant_period")]
        assert tail[1] == acoustic[names.index("tempo")]
        assert tail[2] == acoustic[names.index("duration")]

    def test_f3_drops_delta_blocks(self):
        columns = feature_set_columns("F3")
        assert len(columns) == 477 - 26 * 11
        assert not any(c.startswith(("delta_", "delta2_")) for c in columns)

    def test_f1_ignores_missing_acoustic(self):
        _, embedding = _inputs()
        fused = assemble_features("F1", "cough", {"cough": (None, embedding)})
        np.testing.assert_array_equal(fused.values, embedding)

    def test_unknown_set_rejected(self):
        with pytest.raises(ValueError, match="unknown feature set"):
            feature_set_width("F9")


class TestStandardizer:
    def test_two_point_column(self):
        s = fit_standardizer(np.array([[2.0], [4.0]]))
        np.testing.assert_allclose(s.transform(np.array([[2.0], [4.0]])),
                                   [[-1.0], [1.0]])

    def test_constant_column_maps_to_zero(self):
        X = np.array([[7.0, 1.0], [7.0, 3.0], [7.0, 5.0]])
        z = fit_standardizer(X).transform(X)
        np.testing.assert_array_equal(z[:, 0], 0.0)

    def test_refit_on_transformed_is_identity_scaling(self):
        rng = np.random.default_rng(0)
        X = rng.normal(3.0, 2.5, (50, 8))
        z = fit_standardizer(X).transform(X)
        assert np.all(np.abs(z.mean(axis=0)) < 1e-9)
        assert np.all(np.abs(z.std(axis=0) - 1.0) < 1e-9)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            fit_standardizer(np.zeros((0, 3)))

    def test_params_protocol(self):
        s = Standardizer(std_floor=1e-10)
        assert s.get_params() == {"std_floor": 1e-10}
        s.set_params(std_floor=1e-6)
        assert s.std_floor == 1e-6


class TestPca:
    def test_rank_one_data(self):
        t = np.linspace(-1, 1, 40)
        X = np.column_stack([t, 2.0 * t])  # exactly on a line
        model = fit_pca(X, 0.95)
        assert model.n_components_ == 1
        assert model.explained_variance_ratio_[0] == pytest.approx(1.0)

    def test_isotropic_needs_both_components(self):
        rng = np.random.default_rng(1)
        X = rng.normal(0, 1, (1000, 2))
        # eigenvalue oracle: both sample-covariance eigenvalues carry
        # comparable variance, so .95 needs k = 2
        eigenvalues = np.sort(np.linalg.eigvalsh(np.cov(X.T)))[::-1]
        assert eigenvalues[0] / eigenvalues.sum() < 0.95
        assert fit_pca(X, 0.95).n_components_ == 2

    def test_transformed_covariance_is_diagonal(self):
        rng = np.random.default_rng(2)
        base = rng.normal(0, 1, (400, 5)) * np.array([3.0, 2.0, 1.0, 0.5, 0.1])
        mixing = rng.normal(0, 1, (5, 5))
        X = base @ mixing
        model = fit_pca(X, 0.99)
        projected = transform_pca(model, X)
        cov = np.cov(projected.T, bias=True)
        off_diag = cov - np.diag(np.diag(cov))
        assert np.all(np.abs(off_diag) < 0.05 * np.max(np.diag(cov)))
        # diagonal matches the per-component variances within 5%
        variances = projected.var(axis=0)
        np.testing.assert_allclose(np.diag(cov), variances, rtol=1e-9)

    def test_components_orthonormal(self):
        rng = np.random.default_rng(3)
        model = fit_pca(rng.normal(0, 1, (60, 20)), 0.9)
        gram = model.components_ @ model.components_.T
        np.testing.assert_allclose(gram, np.eye(model.n_components_), atol=1e-8)

    def test_ratios_positive_and_k_minimal(self):
        rng = np.random.default_rng(4)
        X = rng.normal(0, 1, (80, 12)) * np.linspace(3, 0.2, 12)
        for target in (0.7, 0.8, 0.9, 0.95, 0.99):
            model = fit_pca(X, target)
            ratios = model.explained_variance_ratio_
            assert np.all(ratios > 0)
            assert np.all(np.diff(ratios) <= 1e-12)
            assert ratios.sum() >= target - 1e-9
            if model.n_components_ > 1:
                assert ratios[:-1].sum() < target  # dropping one falls short

    def test_projection_idempotent_through_reconstruction(self):
        rng = np.random.default_rng(5)
        X = rng.normal(0, 1, (50, 10))
        model = fit_pca(X, 0.9)
        projected = transform_pca(model, X)
        reconstructed = projected @ model.components_ + model.mean_
        again = transform_pca(model, reconstructed)
        np.testing.assert_allclose(again, projected, atol=1e-9)

    def test_degenerate_and_tiny_inputs(self):
        with pytest.raises(ValueError):
            fit_pca(np.zeros((1, 4)), 0.9)  # fewer than 2 rows
        with pytest.raises(DegenerateDataError):
            fit_pca(np.ones((5, 4)), 0.9)  # zero variance
        with pytest.raises(ValueError):
            fit_pca(np.full((3, 2), np.nan), 0.9)

    def test_sklearn_clone_compatible(self):
        sklearn = pytest.importorskip("sklearn.base")
        model = VarianceTargetPCA(target_variance=0.8)
        cloned = sklearn.clone(model)
        assert cloned.get_params() == model.get_params()
