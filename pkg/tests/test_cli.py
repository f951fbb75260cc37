import json

import pytest

from voicelab.cli import ConfigError, load_config, main

SMALL_GRID = {"n_b": 256, "b_halfwidth": 64.0, "n_a": 16, "a_min": 0.25, "a_max": 4.0, "n_phi": 8}


def _config(tmp_path, **kw):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(kw))
    return str(path)


def test_defaults_validate():
    cfg = load_config(command="norms")
    assert cfg.ps == [1.0, 2.0] and cfg.atom.name == "shannon"


def test_p_below_one_is_rejected(tmp_path, capsys):
    cfg = _config(tmp_path, ps=[1, 0.5])
    with pytest.raises(ConfigError, match=r"ps\[1\]"):
        load_config(cfg, "norms")
    assert main(["norms", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
    assert "ps[1]" in capsys.readouterr().err


def test_unknown_key_is_rejected(tmp_path):
    cfg = _config(tmp_path, grid={"n_bb": 3})
    with pytest.raises(ConfigError, match="unknown key grid.n_bb"):
        load_config(cfg, "kernel")
    assert main(["kernel", "--config", cfg]) == 1


def test_bad_command_exits_one():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_norms_writes_csv(tmp_path):
    cfg = _config(tmp_path, rep="translation", ps=[1, 2], grid=SMALL_GRID | {"n_b": 4096, "b_halfwidth": 1024.0})
    out = tmp_path / "o"
    assert main(["norms", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "norms.csv").read_text().splitlines()
    assert lines[0] == "p,verdict,final_norm,increment"
    assert lines[1].split(",")[1] == "divergent" and lines[2].split(",")[1] == "convergent"
    assert (out / "profile_p2.csv").exists()


def test_coorbit_is_deterministic(tmp_path):
    cfg = _config(tmp_path, rep="wavelet", atom={"name": "paul"}, grid=SMALL_GRID, ps=[1, 2],
                  signal={"random": 2})
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["coorbit", "--config", cfg, "--out", str(a), "--seed", "7"]) == 0
    assert main(["coorbit", "--config", cfg, "--out", str(b), "--seed", "7"]) == 0
    assert (a / "coorbit.csv").read_bytes() == (b / "coorbit.csv").read_bytes()
    assert (a / "coorbit.json").read_bytes() == (b / "coorbit.json").read_bytes()


def test_admissible_and_kernel(tmp_path):
    cfg = _config(tmp_path, rep="schrodingerlet", atom={"name": "paul", "radius": 2}, grid=SMALL_GRID)
    out = tmp_path / "o"
    assert main(["admissible", "--config", cfg, "--out", str(out)]) == 0
    assert main(["kernel", "--config", cfg, "--out", str(out)]) == 0
    assert (out / "kernel.json").exists()


def test_inadmissible_atom_exits_two(tmp_path, monkeypatch):
    import voicelab.cli as cli
    from voicelab.exceptions import InadmissibleError

    def refuse(rep, tol=1e-6):
        raise InadmissibleError("Calderon constant vanishes on one half-line")

    monkeypatch.setattr(cli, "normalize_admissible", refuse)
    assert main(["admissible", "--out", str(tmp_path)]) == 2
