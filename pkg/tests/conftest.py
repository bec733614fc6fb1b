"""Pytest fixtures wired to the shared builders."""

from pathlib import Path

import pytest

from helpers import write_wav
from respira.audio import AudioClip


@pytest.fixture
def tmp_wav(tmp_path):
    def _make(name: str, clip: AudioClip, dtype: str = "int16") -> Path:
        return write_wav(tmp_path / name, clip, dtype)
    return _make
