import json
import math

import numpy as np
import pytest

import qbs.cli as cli
from qbs.cli import RunConfig, figure_recipes, main, run
from qbs.numerics import ConvergenceError

R_STAR = 0.5 * (1.0 - 1.0 / math.sqrt(3.0))


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, data


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="teleport")
    with pytest.raises(ValueError):
        RunConfig(command="evolve", format="yaml")


def test_evolve_json(tmp_path):
    out = tmp_path / "dip.json"
    rc = main(["evolve", "--s1", "1", "--s2", "1", "--r", "0.5",
               "--format", "json", "-o", str(out)])
    assert rc == 0
    payload = json.loads(out.read_text())
    probs = payload["values"]["prob(dimensionless)"]
    assert np.allclose(probs, [0.5, 0.0, 0.5], atol=1e-9)
    assert payload["meta"]["quadrature_order"] == 96
    assert payload["meta"]["equations"]
    assert payload["params"]["r"] == 0.5


def test_entropy_sweep_peak_location(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = main(["entropy-sweep", "--s1", "1", "--s2", "1", "--r-grid", "0:1:201",
               "--measure", "vn", "-o", str(out)])
    assert rc == 0
    _, data = read_csv(out)
    r_at_max = data[np.argmax(data[:, 1]), 0]
    assert abs(r_at_max - R_STAR) <= 0.005  # within one grid step


def test_csv_determinism(tmp_path):
    args = ["hom-dip", "--omega-g-over-omega", "0.5", "--balanced",
            "--delay-grid=-3:3:41"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["-o", str(out1)]) == 0
    assert main(args + ["-o", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_validation_failure_no_partial_output(tmp_path):
    out = tmp_path / "bad.csv"
    rc = main(["evolve", "--s1", "1", "--s2", "1", "--r", "1.5", "-o", str(out)])
    assert rc == 2
    assert not out.exists()


def test_unknown_figure_is_validation_error(tmp_path):
    out = tmp_path / "x.csv"
    rc = main(["figure", "--name", "fig99", "-o", str(out)])
    assert rc == 2
    assert not out.exists()


def test_unknown_command_exits_nonzero():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_stats_waveguide_mode(tmp_path):
    out = tmp_path / "stats.csv"
    rc = main(["stats", "--s1", "1", "--s2", "1", "--sigma-over-omega", "3",
               "--omega-tbs", str(2.5 * math.pi), "-o", str(out)])
    assert rc == 0
    _, data = read_csv(out)
    assert abs(data[:, 2].sum() - 1.0) < 1e-9
    assert data[1, 2] > 0.5  # wide spectrum favours one photon per port


def test_waveguide_entropy_asymptotic(tmp_path):
    out = tmp_path / "asym.csv"
    rc = main(["waveguide-entropy", "--s1", "1", "--s2", "1", "--asymptotic",
               "--sigma-grid", "0.2:1:33", "-o", str(out)])
    assert rc == 0
    _, data = read_csv(out)
    # long-time entropy peaks near sigma/Omega = 0.4403
    assert abs(data[np.argmax(data[:, 1]), 0] - 0.4402884) < 0.03


def test_hom_dip_curve_shape(tmp_path):
    out = tmp_path / "dip.csv"
    rc = main(["hom-dip", "--omega-g-over-omega", "1e-4", "--omega-tbs",
               str(2.5 * math.pi), "--delay-grid=-4:4:81", "-o", str(out)])
    assert rc == 0
    _, data = read_csv(out)
    assert np.all(data[:, 1] >= -1e-12) and np.all(data[:, 1] <= 1.0 + 1e-12)
    mid = data[np.argmin(np.abs(data[:, 0])), 1]
    assert mid < 1e-6  # constant-coefficient balanced dip reaches zero


def test_visibility_command(tmp_path):
    out = tmp_path / "vis.json"
    rc = main(["visibility", "--omega-g-over-omega", "0.5", "--balanced",
               "--delay-grid=-24:24:97", "--format", "json", "-o", str(out)])
    assert rc == 0
    payload = json.loads(out.read_text())
    vis = payload["values"]["visibility(dimensionless)"][0]
    assert 0.8 < vis < 1.0


def test_visibility_requires_plateau(tmp_path):
    rc = main(["visibility", "--omega-g-over-omega", "0.5", "--balanced",
               "--delay-grid=-3:3:31", "-o", str(tmp_path / "v.csv")])
    assert rc == 2


def test_figure_fig8b_peak(tmp_path):
    out = tmp_path / "fig8b.csv"
    rc = main(["figure", "--name", "fig8b", "--sigma-grid", "0.05:3:120",
               "-o", str(out)])
    assert rc == 0
    _, data = read_csv(out)
    step = data[1, 0] - data[0, 0]
    peak = data[np.argmax(data[:, 1]), 0]
    assert abs(peak - 0.4402884) <= step


def test_figure_fig10a(tmp_path):
    out = tmp_path / "fig10a.csv"
    assert main(["figure", "--name", "fig10a", "-o", str(out)]) == 0
    _, data = read_csv(out)
    assert np.allclose(data[:, 1], [0.5, 0.0, 0.5], atol=1e-12)


def test_figure_listing_covers_registry():
    recipes = figure_recipes()
    for name in ("fig5a", "fig6b", "fig7", "fig8a", "fig8b", "fig9b", "fig10a",
                 "fig11", "fig12", "fig13a", "fig14a", "fig14b"):
        assert name in recipes
        assert recipes[name]["description"]
        assert recipes[name]["operation"]


def test_figure_list_flag(capsys):
    assert main(["figure", "--list"]) == 0
    out = capsys.readouterr().out
    assert "fig8b" in out


def test_config_file_defaults_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("s1=1\ns2=1\nr=0.5\n")
    out = tmp_path / "from_cfg.json"
    rc = main(["evolve", "--config", str(cfg), "--format", "json", "-o", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["params"]["r"] == 0.5
    # explicit flag wins over the config value
    out2 = tmp_path / "override.json"
    rc = main(["evolve", "--config", str(cfg), "--r", "0.25", "--format", "json",
               "-o", str(out2)])
    assert rc == 0
    assert json.loads(out2.read_text())["params"]["r"] == 0.25


def test_quad_order_env_in_meta(tmp_path, monkeypatch):
    monkeypatch.setenv("QBS_QUAD_ORDER", "64")
    out = tmp_path / "meta.json"
    rc = main(["evolve", "--s1", "0", "--s2", "1", "--r", "0.3",
               "--format", "json", "-o", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["meta"]["quadrature_order"] == 64


def test_convergence_error_maps_to_exit_3(tmp_path, monkeypatch):
    def boom(*args, **kwargs):
        raise ConvergenceError("forced")

    monkeypatch.setattr(cli, "averaged_schmidt_modes", boom)
    rc = main(["stats", "--s1", "1", "--s2", "1", "--sigma-over-omega", "1",
               "--omega-tbs", "3", "-o", str(tmp_path / "x.csv")])
    assert rc == 3


def test_run_accepts_config_object(tmp_path):
    out = tmp_path / "direct.csv"
    config = RunConfig(
        command="evolve",
        params={"s1": 0, "s2": 2, "r": 0.5},
        output_path=str(out),
        format="csv",
    )
    assert run(config) == 0
    _, data = read_csv(out)
    assert np.allclose(data[:, 2], [0.25, 0.5, 0.25], atol=1e-12)
