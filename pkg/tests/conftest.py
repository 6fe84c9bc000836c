import numpy as np
import pytest

from emolysis.media.synth import SynthSpec, write_clip


@pytest.fixture(scope="session")
def fixture_video(tmp_path_factory):
    """The 30 s reference clip: 2 persons, flash+beep at t=10 s."""
    path = tmp_path_factory.mktemp("media") / "fixture30.avi"
    spec = SynthSpec()
    write_clip(str(path), spec)
    return str(path), spec


@pytest.fixture(scope="session")
def mini_video(tmp_path_factory):
    """A 3 s clip with audio for fast service/CLI tests."""
    path = tmp_path_factory.mktemp("media") / "mini3.avi"
    spec = SynthSpec(duration_s=3.0, flash_t=1.0, beep_t=1.0)
    write_clip(str(path), spec)
    return str(path), spec


@pytest.fixture(scope="session")
def noaudio_video(tmp_path_factory):
    path = tmp_path_factory.mktemp("media") / "noaudio.avi"
    spec = SynthSpec(duration_s=2.0, sample_rate=None, flash_t=None, beep_t=None)
    write_clip(str(path), spec)
    return str(path), spec


@pytest.fixture()
def truncated_video(tmp_path, mini_video):
    """The mini clip cut off mid-stream."""
    src, _ = mini_video
    data = open(src, "rb").read()
    path = tmp_path / "truncated.avi"
    path.write_bytes(data[: len(data) // 3])
    return str(path)


@pytest.fixture()
def random_distribution():
    rng = np.random.default_rng(42)

    def make():
        return tuple(float(x) for x in rng.uniform(0.0, 1.0, 9))

    return make
