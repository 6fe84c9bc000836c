import pytest

from emolysis.config import (
    AnalysisConfig,
    ServerConfig,
    analysis_config_from_dict,
    load_analysis_config,
    server_config_from_env,
)
from emolysis.errors import ValidationError
from emolysis.model import ModalityTag


class TestAnalysisConfig:
    def test_defaults(self):
        cfg = AnalysisConfig()
        assert cfg.tick_s == 0.25
        assert cfg.window_s == 15.0
        assert cfg.stride_s == 7.5
        assert cfg.visual_stride_frames == 1
        assert cfg.backends == {
            "visual": "reference", "audio": "reference", "linguistic": "reference",
        }

    def test_validation(self):
        with pytest.raises(ValidationError):
            AnalysisConfig(tick_s=0.0)
        with pytest.raises(ValidationError):
            AnalysisConfig(stride_s=20.0, window_s=15.0)
        with pytest.raises(ValidationError):
            AnalysisConfig(emotion_threshold=1.0)

    def test_from_dict_nested_tables(self):
        cfg = analysis_config_from_dict(
            {
                "tick_s": 0.5,
                "fusion": {"weights": {"visual": 2.0}},
                "backends": {"audio": "custom"},
            }
        )
        assert cfg.tick_s == 0.5
        assert cfg.fusion_weights["visual"] == 2.0
        assert cfg.fusion_weights["audio"] == 1.0  # untouched default
        assert cfg.backends["audio"] == "custom"
        assert cfg.backends["visual"] == "reference"
        assert cfg.weights_by_tag()[ModalityTag.VISUAL] == 2.0

    def test_load_yaml(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text("window_s: 10.0\nstride_s: 5.0\n")
        cfg = load_analysis_config(str(path))
        assert (cfg.window_s, cfg.stride_s) == (10.0, 5.0)

    def test_none_path_gives_defaults(self):
        assert load_analysis_config(None) == AnalysisConfig()


class TestServerConfig:
    def test_env_resolution(self, monkeypatch, tmp_path):
        monkeypatch.setenv("EMOLYSIS_STORE", str(tmp_path / "envstore"))
        monkeypatch.setenv("EMOLYSIS_PORT", "9123")
        cfg = server_config_from_env()
        assert cfg.store_dir == str(tmp_path / "envstore")
        assert cfg.port == 9123

    def test_explicit_args_beat_env(self, monkeypatch):
        monkeypatch.setenv("EMOLYSIS_STORE", "/env/store")
        monkeypatch.setenv("EMOLYSIS_PORT", "9123")
        cfg = server_config_from_env(store_dir="/flag/store", port=7777)
        assert cfg.store_dir == "/flag/store"
        assert cfg.port == 7777

    def test_env_beats_config_file(self, monkeypatch):
        monkeypatch.setenv("EMOLYSIS_PORT", "9001")
        cfg = server_config_from_env(config_file={"port": 1234})
        assert cfg.port == 9001

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("EMOLYSIS_STORE", raising=False)
        monkeypatch.delenv("EMOLYSIS_PORT", raising=False)
        cfg = server_config_from_env()
        assert cfg == ServerConfig()
