import pytest

from occlusia.config import ENV_VAR, Config, load_config, parse_config
from occlusia.errors import ConfigError


def test_defaults():
    cfg = Config()
    assert cfg.get("kf.sigma_process_pos") == 1.0
    assert cfg.get("kf.sigma_measure") == 2.0
    assert (cfg.assoc.alpha1, cfg.assoc.alpha2, cfg.assoc.gate, cfg.assoc.solver) == (0.5, 0.5, 0.1, "bip")
    assert cfg.pipe.t_max == 15 and cfg.pipe.hist_blend == 0.1 and cfg.pipe.min_hits == 1
    assert cfg.app.bins == 8 and cfg.app.ms_max_iters == 20 and cfg.app.ms_epsilon == 0.5
    assert cfg.occ.enabled is True and cfg.eval.iou_threshold == 0.5


def test_parse_key_values():
    cfg = parse_config("# comment\nocc.enabled = false\nassoc.alpha1=0.7  # trailing\nassoc.alpha2=0.3\n\npipe.t_max=4\n")
    assert cfg.occ.enabled is False
    assert cfg.assoc.alpha1 == 0.7 and cfg.pipe.t_max == 4


@pytest.mark.parametrize("text", ["nonsense", "foo.bar=1", "kf.nope=1", "pipe.t_max=abc", "occ.enabled=maybe", "assoc.solver=cbc"])
def test_parse_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_env_fallback(tmp_path, monkeypatch):
    p = tmp_path / "c.cfg"
    p.write_text("pipe.t_max=3\n")
    monkeypatch.setenv(ENV_VAR, str(p))
    assert load_config().pipe.t_max == 3
    monkeypatch.delenv(ENV_VAR)
    assert load_config().pipe.t_max == 15


def test_updated_copies():
    base = Config()
    other = base.updated(occ__enabled=False)
    assert base.occ.enabled is True and other.occ.enabled is False
    assert dict(other.items())["occ.enabled"] is False
