"""Descriptor series, clip-level scalars, statistics, and the 477 vector."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import click_train_clip, noise_clip, sine_clip
from respira.acoustic import (
    FEATURE_NAMES,
    DescriptorSeries,
    acoustic_feature_vector,
    delta,
    dominant_period,
    duration,
    feature_names,
    mfcc_series,
    onset_count,
    rms_energy_series,
    rolloff_series,
    spectral_centroid_series,
    summarize,
    tempo,
    zcr_series,
)
from respira.audio import (
    AudioClip,
    MelSpectrogram,
    Spectrogram,
    frame_signal,
    mel_spectrogram,
    stft,
    trim_silence,
)


class TestScalars:
    def test_duration(self):
        assert duration(AudioClip(samples=np.ones(22050) * .1, sample_rate=22050)) == 1.0
        assert duration(AudioClip(samples=np.ones(11025) * .1, sample_rate=22050)) == 0.5

    def test_duration_of_trimmed_padded_sine(self):
        rate = 22050
        pad = np.zeros(round(0.5 * rate))
        tone = sine_clip(440.0, 1.0, rate).samples
        clip = AudioClip(samples=np.concatenate([pad, tone, pad]), sample_rate=rate)
        trimmed = trim_silence(clip).clip
        assert duration(trimmed) == pytest.approx(1.0, abs=512 / rate)

    def test_onset_silence(self):
        assert onset_count(AudioClip(samples=np.zeros(22050), sample_rate=22050)) == 0

    def test_onset_three_clicks(self):
        assert onset_count(click_train_clip(0.5, 3)) == 3

    def test_onset_steady_sine(self):
        assert onset_count(sine_clip(440.0, 1.0)) in (0, 1)

    def test_tempo_click_trains(self):
        assert tempo(click_train_clip(0.5, 8)).bpm == pytest.approx(120.0, abs=2.0)
        assert tempo(click_train_clip(0.75, 8)).bpm == pytest.approx(80.0, abs=2.0)

    def test_tempo_silence_falls_back_to_prior(self):
        estimate = tempo(AudioClip(samples=np.zeros(22050), sample_rate=22050))
        assert estimate.degenerate
        assert estimate.bpm == 120.0

    def test_dominant_period_sine(self):
        clip = sine_clip(440.0, 1.0, 22050)
        assert dominant_period(clip) == pytest.approx(440.0, abs=22050 / len(clip))

    def test_dominant_period_dc_excluded(self):
        clip = AudioClip(samples=np.full(2048, 0.5), sample_rate=22050)
        assert dominant_period(clip) == pytest.approx(22050 / 2048)

    def test_dominant_period_strongest_tone_wins(self):
        mix = (sine_clip(200.0, 1.0).samples + 0.5 * sine_clip(300.0, 1.0).samples)
        clip = AudioClip(samples=mix, sample_rate=22050)
        assert dominant_period(clip) == pytest.approx(200.0, abs=22050 / len(clip))


def _spec_from_columns(columns: np.ndarray, rate: int = 22050) -> Spectrogram:
    n_bins = columns.shape[0]
    fft = 2 * (n_bins - 1)
    return Spectrogram(
        magnitudes=columns,
        bin_frequencies=np.arange(n_bins) * rate / fft,
        frame_times=np.arange(columns.shape[1]) * 512 / rate,
        sample_rate=rate,
    )


class TestSeries:
    def test_zero_frame_conventions(self):
        spec = _spec_from_columns(np.zeros((1025, 3)))
        assert np.all(rms_energy_series(spec).values == 0.0)
        assert np.all(spectral_centroid_series(spec).values == 0.0)
        assert np.all(rolloff_series(spec).values == 0.0)
        zeros = AudioClip(samples=np.zeros(4096), sample_rate=22050)
        frames = frame_signal(zeros, 1024, 512, center=False)
        assert np.all(zcr_series(frames).values == 0.0)

    def test_single_bin_point_mass(self):
        columns = np.zeros((1025, 2))
        columns[200, :] = 3.0
        spec = _spec_from_columns(columns)
        freq = spec.bin_frequencies[200]
        np.testing.assert_allclose(spectral_centroid_series(spec).values, freq)
        np.testing.assert_allclose(rolloff_series(spec).values, freq)

    def test_alternating_zcr(self):
        n = 64
        samples = np.tile([1.0, -1.0], 400)
        clip = AudioClip(samples=samples, sample_rate=8000)
        frames = frame_signal(clip, n, n, center=False)
        np.testing.assert_allclose(zcr_series(frames).values, (n - 1) / n)

    def test_rms_definition(self):
        columns = np.array([[3.0], [4.0]])
        spec = _spec_from_columns(columns)
        assert rms_energy_series(spec).values[0] == pytest.approx(np.sqrt((9 + 16) / 2))


def _mel_from_energies(energies: np.ndarray) -> MelSpectrogram:
    return MelSpectrogram(energies=energies, n_mels=energies.shape[0],
                          fmin=0.0, fmax=11025.0, sample_rate=22050)


class TestMfcc:
    def test_constant_frame(self):
        c = 2.5
        melspec = _mel_from_energies(np.full((128, 3), np.exp(c)))
        series = mfcc_series(melspec)
        assert series[0].values[0] == pytest.approx(c * np.sqrt(128))
        for s in series[1:]:
            assert np.all(np.abs(s.values) < 1e-9)

    def test_cosine_orthogonality(self):
        n_mels = 128
        b = np.arange(n_mels)
        cosine = np.cos(np.pi * (b + 0.5) * 3 / n_mels)
        melspec = _mel_from_energies(np.exp(cosine)[:, None])
        series = mfcc_series(melspec)
        # only coefficient 3 responds; orthonormal DCT-II gives sqrt(n/2)
        assert series[3].values[0] == pytest.approx(np.sqrt(n_mels / 2))
        for i, s in enumerate(series):
            if i != 3:
                assert abs(s.values[0]) < 1e-9

    def test_determinism_across_identical_frames(self):
        rng = np.random.default_rng(0)
        col = rng.uniform(0.1, 2.0, 128)
        melspec = _mel_from_energies(np.column_stack([col, col]))
        for s in mfcc_series(melspec):
            assert s.values[0] == s.values[1]


class TestDelta:
    def test_constant_series_zero(self):
        block = [DescriptorSeries("mfcc00", np.full(20, 3.3))]
        assert np.all(delta(block, 1)[0].values == 0.0)
        assert np.all(delta(block, 2)[0].values == 0.0)

    def test_linear_ramp_recovers_slope(self):
        a = 0.37
        block = [DescriptorSeries("mfcc00", a * np.arange(30, dtype=float))]
        values = delta(block, 1)[0].values
        np.testing.assert_allclose(values[4:-4], a, atol=1e-12)

    def test_single_frame_zero(self):
        block = [DescriptorSeries("mfcc00", np.array([5.0]))]
        assert delta(block, 1)[0].values[0] == 0.0

    def test_names(self):
        block = [DescriptorSeries("mfcc01", np.arange(5, dtype=float))]
        assert delta(block, 1)[0].name == "delta_mfcc01"
        assert delta(block, 2)[0].name == "delta2_mfcc01"


class TestSummarize:
    def test_hand_computable(self):
        stats = summarize(DescriptorSeries("x", np.array([1., 2., 3., 4., 5.])))
        assert stats.mean == 3.0
        assert stats.median == 3.0
        assert stats.min == 1.0 and stats.max == 5.0
        assert stats.q1 == 2.0 and stats.q3 == 4.0
        assert stats.iqr == 2.0

    def test_constant_conventions(self):
        stats = summarize(DescriptorSeries("x", np.full(7, 0.1)))
        assert stats.std == 0.0
        assert stats.skewness == 0.0
        assert stats.kurtosis == 0.0

    def test_skewness_moment_formula(self):
        stats = summarize(DescriptorSeries("x", np.array([1., 1., 1., 9.])))
        assert stats.skewness == pytest.approx(48 / 12 ** 1.5)
        assert stats.skewness == pytest.approx(1.1547005384)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize(DescriptorSeries("x", np.array([])))

    @given(st.lists(st.floats(min_value=-1e6, max_value=1e6,
                              allow_nan=False), min_size=1, max_size=50))
    @settings(max_examples=100, deadline=None)
    def test_quantile_ordering(self, values):
        stats = summarize(DescriptorSeries("x", np.array(values)))
        assert stats.min <= stats.q1 <= stats.median <= stats.q3 <= stats.max
        assert stats.iqr == pytest.approx(stats.q3 - stats.q1)
        assert stats.std >= 0.0


class TestFeatureVector:
    def test_registry_is_total_and_unique(self):
        names = feature_names()
        assert len(names) == 477
        assert len(set(names)) == 477
        assert names[:4] == ["duration", "onset_count", "tempo", "dominant_period"]
        assert names == FEATURE_NAMES

    def test_length_and_determinism(self):
        clip = sine_clip(440.0, 1.0)
        first = acoustic_feature_vector(clip)
        second = acoustic_feature_vector(clip)
        assert first.shape == (477,)
        assert np.array_equal(first, second)

    def test_period_feature_holds_tone(self):
        clip = sine_clip(440.0, 1.0, 22050)
        vec = acoustic_feature_vector(clip)
        index = FEATURE_NAMES.index("dominant_period")
        assert vec[index] == pytest.approx(440.0, abs=22050 / len(clip))

    def test_amplitude_scaling_invariances(self):
        base = AudioClip(
            samples=0.5 * (sine_clip(300.0, 1.2).samples
                           + click_train_clip(0.4, 3, lead_s=0.1).samples[:26460]),
            sample_rate=22050)
        scaled = AudioClip(samples=2.0 * base.samples, sample_rate=22050)
        v_base = acoustic_feature_vector(base)
        v_scaled = acoustic_feature_vector(scaled)
        names = FEATURE_NAMES
        invariant = [i for i, n in enumerate(names)
                     if n in ("duration", "onset_count", "tempo", "dominant_period")
                     or n.startswith(("zcr_", "centroid_", "rolloff_"))]
        proportional = [i for i, n in enumerate(names) if n.startswith("rms_")
                        and not n.endswith(("skewness", "kurtosis"))]
        np.testing.assert_allclose(v_scaled[invariant], v_base[invariant],
                                   rtol=1e-9, atol=1e-12)
        np.testing.assert_allclose(v_scaled[proportional], 2.0 * v_base[proportional],
                                   rtol=1e-9)

    @pytest.mark.parametrize("clip", [
        noise_clip(0.6, seed=1),
        sine_clip(700.0, 0.4),
        click_train_clip(0.3, 4),
        AudioClip(samples=np.concatenate([np.zeros(4000),
                                          noise_clip(0.3, seed=2).samples]),
                  sample_rate=22050),
    ])
    def test_outputs_finite_on_fuzz_corpus(self, clip):
        vec = acoustic_feature_vector(clip)
        assert vec.shape == (477,)
        assert np.all(np.isfinite(vec))
