import io
import json
from dataclasses import replace

import jsonschema
import numpy as np
import pytest

from vortexpair.errors import ConfigError
from vortexpair.harness import (
    ResultCache,
    RunConfig,
    figure_config,
    from_csv,
    from_json,
    load_config,
    parse_config,
    run_sweep,
    to_csv,
    to_json,
)
from vortexpair.harness.acceptance import check_unit_anchor, random_configs
from vortexpair.harness.cli import EXIT_CHECK, EXIT_CONFIG, EXIT_OK, main
from vortexpair.harness.emit import emit, schema

SMALL = RunConfig(preset="Na-3p3s", observable="tam", axis="t", values=(2.0, 10.0),
                  series_axis="sigma_mult", series_values=(1.0, 2.0),
                  trap={"sigma_b_nm": 80.0})

INI = """\
[run]
preset = Na-3p3s
observable = tam
rtol = 1e-8

[packet]
m_gamma = 4

[sweep]
axis = t
values = 1, 2.5, 10
"""


@pytest.fixture(scope="module")
def small():
    return run_sweep(SMALL, log=None)


# -- configuration ----------------------------------------------------------


def test_parse_and_round_trip():
    cfg = parse_config(INI)
    assert cfg.packet == {"m_gamma": 4}
    assert cfg.values == (1.0, 2.5, 10.0)
    assert cfg.rtol == 1e-8
    again = RunConfig.from_ini(cfg.to_ini())
    assert again == cfg
    assert again.content_hash() == cfg.content_hash()


def test_round_trip_figures():
    for name in ("fig2a", "fig2c", "fig3", "pairprob"):
        cfg = figure_config(name)
        assert RunConfig.from_ini(cfg.to_ini()).content_hash() == cfg.content_hash()


def test_hash_is_stable_and_sensitive():
    a = parse_config(INI)
    assert a.content_hash() == parse_config(INI).content_hash()
    assert len(a.content_hash()) == 64
    assert replace(a, t=9.0).content_hash() != a.content_hash()
    assert parse_config(INI.replace("m_gamma = 4", "m_gamma = 5")).content_hash() != a.content_hash()


def test_sweep_helpers():
    cfg = parse_config(INI + "series_axis = sigma_mult\nseries_values = linspace(1, 2, 3)\n")
    assert cfg.series_values == (1.0, 1.5, 2.0)
    assert cfg.points()[:2] == [(1.0, 1.0), (1.0, 2.5)]
    assert parse_config(INI.replace("1, 2.5, 10", "range(-2, 2)").replace("axis = t", "axis = m_gamma")).values \
        == (-2.0, -1.0, 0.0, 1.0, 2.0)


@pytest.mark.parametrize("text,line,fragment", [
    (INI.replace("rtol = 1e-8", "rtol = 1e-2"), 4, "rtol"),
    (INI.replace("m_gamma = 4", "m_gamma = 1.5"), 7, "m_gamma"),
    (INI.replace("m_gamma = 4", "colour = red"), 7, "colour"),
    (INI.replace("axis = t", "axis = banana"), 10, "axis"),
    (INI + "[bogus]\nx = 1\n", 12, "[bogus]: unknown section"),
])
def test_config_errors_are_line_precise(text, line, fragment):
    with pytest.raises(ConfigError) as info:
        parse_config(text, "run.ini")
    msg = str(info.value)
    assert msg.startswith(f"run.ini:{line}:")
    assert fragment in msg


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.ini")


def test_figure_defaults():
    fig3 = figure_config("fig3")
    assert fig3.values == tuple(float(m) for m in range(-4, 9)) and fig3.t == 10.0
    fig2 = figure_config("fig2a")
    assert fig2.series_axis == "sigma_mult" and fig2.series_values == (1.0, 1.5, 2.0)
    pp = figure_config("pairprob")
    assert pp.values[0] == 10.0 and pp.values[-1] == 190.0 and len(pp.values) == 12
    with pytest.raises(KeyError):
        figure_config("fig9")


# -- emission ---------------------------------------------------------------


def test_records(small):
    assert len(small.records) == 4
    assert small.input_columns == ["sigma_mult", "t"]
    for rec in small.records:
        assert rec["status"] == "ok"
        assert rec["outputs"]["std"] > 0


def test_json_round_trip_and_schema(small):
    text = to_json(small)
    jsonschema.validate(json.loads(text), schema())
    back = from_json(text)
    assert back == small
    assert to_json(back) == text


def test_csv_round_trip(small):
    text = to_csv(small)
    assert text.startswith("# vortexpair sweep")
    back = from_csv(text)
    assert back == small
    assert to_csv(back) == text


def test_floats_round_trip_exactly(small):
    back = from_json(to_json(small))
    for a, b in zip(small.records, back.records):
        for k, v in a["outputs"].items():
            assert b["outputs"][k] == v


def test_emit_to_file_and_stream(small, tmp_path):
    out = tmp_path / "r.csv"
    emit(small, "csv", path=out)
    assert out.read_text() == to_csv(small)
    buf = io.StringIO()
    emit(small, "json", stream=buf)
    assert buf.getvalue() == to_json(small)
    with pytest.raises(OSError, match="missing"):
        emit(small, "csv", path=tmp_path / "missing" / "r.csv")


# -- determinism and cache --------------------------------------------------


def test_workers_identical(small):
    par = run_sweep(SMALL, workers=2, log=None)
    assert to_csv(par) == to_csv(small)
    assert to_json(par) == to_json(small)


def test_cache_hit_skips_evaluation(tmp_path, small):
    cache = ResultCache(tmp_path, log=None)
    first = run_sweep(SMALL, cache=cache, log=None)
    second = run_sweep(SMALL, cache=cache, log=None)
    assert first.evaluations == 4
    assert second.from_cache and second.evaluations == 0
    assert to_csv(second) == to_csv(small)
    assert cache.hits == 1
    fresh = run_sweep(SMALL, cache=cache, use_cache=False, log=None)
    assert fresh.evaluations == 4


def test_cache_corruption_invalidates(tmp_path):
    cache = ResultCache(tmp_path, log=None)
    cfg = replace(SMALL, values=(3.0,), series_axis=None, series_values=())
    run_sweep(cfg, cache=cache, log=None)
    path = cache.path(cfg.content_hash())
    text = path.read_text()
    path.write_text(text.replace("0", "1", 3))
    assert cache.get(cfg.content_hash()) is None
    assert cache.invalidated == 1
    assert not path.exists()
    again = run_sweep(cfg, cache=cache, log=None)
    assert again.evaluations == 1


def test_cache_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("VORTEXPAIR_CACHE_DIR", str(tmp_path / "c"))
    assert ResultCache(log=None).root == tmp_path / "c"


@pytest.mark.slow
def test_random_configs_reproducible(tmp_path):
    cache = ResultCache(tmp_path, log=None)
    for cfg in random_configs(n=10, seed=7):
        a = run_sweep(cfg, cache=cache, log=None)
        b = run_sweep(cfg, cache=cache, log=None)
        c = run_sweep(cfg, log=None)
        assert b.from_cache
        assert to_csv(a) == to_csv(b) == to_csv(c)


# -- regime reporting -------------------------------------------------------


def test_regime_violation_reported_not_raised():
    cfg = RunConfig(preset="Na-3p3s", axis="sigma_b_nm", values=(100.0, 1e4))
    res = run_sweep(cfg, log=None)
    assert [r["status"] for r in res.records] == ["ok", "regime"]
    assert np.isnan(res.records[1]["outputs"]["std"])


# -- sensitivity ------------------------------------------------------------


def test_unit_anchor_detects_corrupted_kappa(na):
    assert check_unit_anchor(na).passed
    assert not check_unit_anchor(na.with_packet(kappa_c=1.1 * na.packet.kappa_c)).passed


# -- CLI --------------------------------------------------------------------


def test_cli_fig3_writes_and_caches(tmp_path, capsys):
    out = tmp_path / "fig3.csv"
    assert main(["fig3", "--out", str(out)]) == EXIT_OK
    first = out.read_text()
    assert "evaluated 13 points" in capsys.readouterr().err
    assert main(["fig3", "--out", str(out)]) == EXIT_OK
    assert "cache hit" in capsys.readouterr().err
    assert out.read_text() == first
    assert len(from_csv(first).records) == 13


def test_cli_json_stdout(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text(INI)
    assert main(["sweep", "--config", str(cfg), "--format", "json", "--no-cache"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, schema())
    assert len(doc["records"]) == 3


def test_cli_config_error_exit(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(INI.replace("rtol = 1e-8", "rtol = 1e-2"))
    assert main(["sweep", "--config", str(cfg)]) == EXIT_CONFIG
    assert f"{cfg}:4:" in capsys.readouterr().err
    assert main(["fig3", "--preset", "He"]) == EXIT_CONFIG
    assert main(["fig3", "--tol", "0.5"]) == EXIT_CONFIG
    assert main(["check", "--only", "x"]) == EXIT_CONFIG
    assert main(["check", "--only", "42"]) == EXIT_CONFIG


def test_cli_check_subset(capsys):
    assert main(["check", "--only", "1,2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "[PASS]  1" in out and "[PASS]  2" in out and "2/2 checks passed" in out


def test_cli_check_failure_exit(capsys):
    assert main(["check", "--only", "3"]) == EXIT_CHECK
    assert "[FAIL]  3" in capsys.readouterr().out
