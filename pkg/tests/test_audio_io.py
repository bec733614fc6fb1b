"""Loading, resampling, trimming, framing, and spectral transform contracts."""

import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.io import wavfile

from respira.audio import (
    AudioClip,
    AudioFormatError,
    frame_signal,
    hann_window,
    load_wav,
    mel_filterbank,
    mel_spectrogram,
    resample,
    resampled_length,
    stft,
    trim_silence,
)
from helpers import sine_clip


class TestLoadWav:
    def test_full_scale_int16_maps_to_one(self, tmp_path):
        wavfile.write(str(tmp_path / "fs.wav"), 8000,
                      np.array([32767, -32768, 0], dtype=np.int16))
        clip = load_wav(tmp_path / "fs.wav")
        assert clip.samples[0] == pytest.approx(1.0, abs=1 / 32768)
        assert clip.samples[1] == -1.0
        assert clip.samples[2] == 0.0

    def test_stereo_opposite_channels_average_to_zero(self, tmp_path):
        stereo = np.tile(np.array([[0.5, -0.5]], dtype=np.float32), (100, 1))
        wavfile.write(str(tmp_path / "st.wav"), 8000, stereo)
        clip = load_wav(tmp_path / "st.wav")
        assert np.all(clip.samples == 0.0)

    def test_sine_round_trip(self, tmp_wav):
        source = sine_clip(440.0, seconds=1.0, rate=44100)
        clip = load_wav(tmp_wav("sine.wav", source, dtype="float32"))
        assert clip.sample_rate == 44100
        assert len(clip) == 44100
        np.testing.assert_allclose(clip.samples, source.samples, atol=1e-6)

    def test_24bit_scaling(self, tmp_path):
        # hand-built 24-bit RIFF: full-scale positive, negative, zero
        samples = [0x7FFFFF, -0x800000, 0]
        data = b"".join(struct.pack("<i", s << 8)[1:] for s in samples)
        fmt = struct.pack("<HHIIHH", 1, 1, 8000, 8000 * 3, 3, 24)
        body = (b"fmt " + struct.pack("<I", len(fmt)) + fmt
                + b"data" + struct.pack("<I", len(data)) + data)
        blob = b"RIFF" + struct.pack("<I", 4 + len(body)) + b"WAVE" + body
        path = tmp_path / "s24.wav"
        path.write_bytes(blob)
        clip = load_wav(path)
        assert clip.samples[0] == pytest.approx(1.0, abs=2 ** -23)
        assert clip.samples[1] == -1.0

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_wav(tmp_path / "nope.wav")

    def test_zero_length_rejected(self, tmp_path):
        wavfile.write(str(tmp_path / "empty.wav"), 8000,
                      np.zeros(0, dtype=np.int16))
        with pytest.raises((AudioFormatError, ValueError)):
            load_wav(tmp_path / "empty.wav")


class TestResample:
    def test_identity_when_rates_match(self):
        clip = sine_clip(440.0, rate=22050)
        out = resample(clip, 22050)
        assert np.array_equal(out.samples, clip.samples)

    def test_downsample_preserves_tone(self):
        clip = sine_clip(440.0, seconds=1.0, rate=44100)
        out = resample(clip, 22050)
        assert len(out) == 22050
        spectrum = np.abs(np.fft.rfft(out.samples))
        peak_hz = np.argmax(spectrum[1:]) + 1  # bin width is 1 Hz here
        assert abs(peak_hz - 440.0) <= 1.0

    def test_upsample_length(self):
        clip = AudioClip(samples=np.ones(8000) * 0.1, sample_rate=8000)
        assert len(resample(clip, 22050)) == 22050

    def test_zero_target_rejected(self):
        with pytest.raises(ValueError):
            resample(sine_clip(100.0), 0)

    @given(st.integers(min_value=32, max_value=5000),
           st.sampled_from([8000, 16000, 22050, 44100]),
           st.sampled_from([8000, 16000, 22050, 48000]))
    @settings(max_examples=30, deadline=None)
    def test_length_contract(self, n, src, dst):
        clip = AudioClip(samples=np.linspace(-0.5, 0.5, n), sample_rate=src)
        assert len(resample(clip, dst)) == resampled_length(n, src, dst)

    def test_linearity(self):
        rng = np.random.default_rng(3)
        x = rng.normal(0, 0.2, 4410)
        a = 0.37
        base = resample(AudioClip(samples=x, sample_rate=44100), 22050).samples
        scaled = resample(AudioClip(samples=a * x, sample_rate=44100), 22050).samples
        np.testing.assert_allclose(scaled, a * base, atol=1e-9)


class TestTrimSilence:
    def test_no_quiet_frames_unchanged(self):
        clip = sine_clip(440.0, seconds=0.8)
        result = trim_silence(clip, top_db=60.0)
        assert not result.all_silent
        assert np.array_equal(result.clip.samples, clip.samples)

    def test_padded_sine_trims_to_one_second(self):
        rate = 22050
        pad = np.zeros(round(0.5 * rate))
        tone = sine_clip(440.0, seconds=1.0, rate=rate).samples
        clip = AudioClip(samples=np.concatenate([pad, tone, pad]), sample_rate=rate)
        result = trim_silence(clip, top_db=60.0)
        assert abs(len(result.clip) - rate) <= 512  # within one hop
        # the kept span never cuts into the tone
        assert result.start <= len(pad)
        assert result.end >= len(pad) + len(tone)

    def test_all_zero_flags_silent(self):
        clip = AudioClip(samples=np.zeros(10000), sample_rate=22050)
        result = trim_silence(clip)
        assert result.all_silent
        assert len(result.clip) == len(clip)

    def test_idempotent(self):
        rate = 22050
        rng = np.random.default_rng(11)
        for trial in range(5):
            lead = rng.integers(0, rate // 2)
            tail = rng.integers(0, rate // 2)
            body = sine_clip(300.0 + 100 * trial, seconds=0.7, rate=rate).samples
            clip = AudioClip(
                samples=np.concatenate([np.zeros(lead), body, np.zeros(tail)]),
                sample_rate=rate)
            once = trim_silence(clip).clip
            twice = trim_silence(once).clip
            assert np.array_equal(once.samples, twice.samples)

    def test_bad_top_db(self):
        with pytest.raises(ValueError):
            trim_silence(sine_clip(100.0), top_db=0.0)


class TestFrameSignal:
    def test_uncentered_count(self):
        clip = AudioClip(samples=np.arange(10, dtype=float) / 10, sample_rate=10)
        frames = frame_signal(clip, frame_length=4, hop_length=2, center=False)
        assert frames.n_frames == 4
        np.testing.assert_array_equal(frames.frames[0], clip.samples[:4])

    def test_centered_count_matches_formula(self):
        clip = sine_clip(440.0, seconds=1.0, rate=22050)
        frames = frame_signal(clip, 2048, 512, center=True)
        assert frames.n_frames == 1 + 22050 // 512 == 44

    def test_zero_hop_rejected(self):
        with pytest.raises(ValueError):
            frame_signal(sine_clip(100.0), 2048, 0)

    @given(st.integers(min_value=1, max_value=400),
           st.integers(min_value=1, max_value=100),
           st.integers(min_value=2000, max_value=9000))
    @settings(max_examples=50, deadline=None)
    def test_count_formula_property(self, frame, hop, n):
        frame = min(frame, n)  # ensure len >= frame
        clip = AudioClip(samples=np.ones(n) * 0.1, sample_rate=8000)
        frames = frame_signal(clip, frame, hop, center=False)
        assert frames.n_frames == 1 + (n - frame) // hop


class TestStft:
    def test_zero_frames_zero_magnitudes(self):
        clip = AudioClip(samples=np.zeros(4096), sample_rate=22050)
        spec = stft(frame_signal(clip, 1024, 256, center=False))
        assert np.all(spec.magnitudes == 0.0)

    def test_bin_centered_sine_peaks_at_bin(self):
        rate, fft_size = 22050, 2048
        k = 37
        freq = k * rate / fft_size
        clip = sine_clip(freq, seconds=1.0, rate=rate)
        spec = stft(frame_signal(clip, fft_size, 512, center=False), fft_size)
        assert np.all(np.argmax(spec.magnitudes, axis=0) == k)
        assert spec.bin_frequencies[k] == pytest.approx(freq)

    def test_parseval_identity(self):
        # full-spectrum identity: interior bins count twice
        rng = np.random.default_rng(5)
        clip = AudioClip(samples=rng.normal(0, 0.3, 4096), sample_rate=22050)
        frames = frame_signal(clip, 1024, 512, center=False)
        spec = stft(frames, 1024)
        windowed = frames.frames * hann_window(1024)
        for t in range(frames.n_frames):
            mags = spec.magnitudes[:, t]
            total = 2 * np.sum(mags ** 2) - mags[0] ** 2 - mags[-1] ** 2
            energy = np.sum(windowed[t] ** 2)
            assert total == pytest.approx(1024 * energy, rel=1e-9)

    def test_sign_flip_invariance(self):
        clip = sine_clip(523.0, seconds=0.3)
        flipped = AudioClip(samples=-clip.samples, sample_rate=clip.sample_rate)
        a = stft(frame_signal(clip, 1024, 256)).magnitudes
        b = stft(frame_signal(flipped, 1024, 256)).magnitudes
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_fft_size_validation(self):
        frames = frame_signal(sine_clip(100.0), 1024, 256)
        with pytest.raises(ValueError):
            stft(frames, 512)  # smaller than frame
        with pytest.raises(ValueError):
            stft(frames, 1500)  # not a power of two


class TestMel:
    def test_zero_spectrogram_zero_energies(self):
        clip = AudioClip(samples=np.zeros(4096), sample_rate=22050)
        melspec = mel_spectrogram(stft(frame_signal(clip, 2048, 512)), n_mels=128)
        assert np.all(melspec.energies == 0.0)

    def test_single_bin_activates_overlapping_filters_only(self):
        fb = mel_filterbank(20, 2048, 22050)
        spec_column = np.zeros((1025, 1))
        k = 300
        spec_column[k, 0] = 2.0
        responding = np.flatnonzero(fb @ spec_column ** 2)
        expected = np.flatnonzero(fb[:, k] > 0)
        assert np.array_equal(responding, expected)
        assert 1 <= len(expected) <= 2

    @pytest.mark.parametrize("n_mels,fft,rate", [(128, 2048, 22050), (256, 2048, 48000)])
    def test_filterbank_rows_positive_and_contiguous(self, n_mels, fft, rate):
        fb = mel_filterbank(n_mels, fft, rate)
        assert fb.shape == (n_mels, fft // 2 + 1)
        for row in fb:
            support = np.flatnonzero(row > 0)
            assert len(support) > 0
            assert np.all(np.diff(support) == 1)  # contiguous

    def test_bad_mel_params(self):
        spec = stft(frame_signal(sine_clip(100.0), 2048, 512))
        with pytest.raises(ValueError):
            mel_spectrogram(spec, n_mels=0)
        with pytest.raises(ValueError):
            mel_spectrogram(spec, n_mels=10, fmin=12000.0, fmax=11000.0)
