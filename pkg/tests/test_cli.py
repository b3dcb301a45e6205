"""Config parsing, presets, artifact files, determinism, exit codes."""

import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rabisplit import (
    ConfigurationError,
    ExperimentConfig,
    PRESET_IDS,
    load_config,
    run_experiment,
)
from rabisplit.cli import _freq, main

DEMO = """\
configs:
  - label: demo
    mode: both
    intrinsic: {kind: ohmic, alpha: 0.0}
    cavity: {g: 200 MHz, q: 1.0e4}
    scan: {span: 3.0, points: 801}
"""


def _write(tmp_path, text, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# ------------------------------------------------------------------
# parsing
# ------------------------------------------------------------------

def test_all_presets_load_and_resolve():
    assert len(PRESET_IDS) >= 10
    for preset in PRESET_IDS:
        configs = load_config(preset)
        assert configs
        labels = [c.label for c in configs]
        assert len(labels) == len(set(labels))
        for cfg in configs:
            assert cfg.q_factor is not None and cfg.linewidth is not None
            cfg.environment()


def test_table1_preset_covers_the_grid():
    configs = load_config("table1")
    assert len(configs) == 12
    combos = {(c.intrinsic_kind, c.q_factor, c.g) for c in configs}
    assert len(combos) == 12
    assert {c.intrinsic_kind for c in configs} == {"ohmic", "lowfreq"}
    assert {c.q_factor for c in configs} == {1e4, 1e3}


def test_frequency_suffix_parsing():
    assert _freq(3, "x") == 3.0
    assert _freq("250 MHz", "x") == pytest.approx(0.25)
    assert _freq("2.5GHz", "x") == 2.5
    with pytest.raises(ConfigurationError, match="x:"):
        _freq("5 Hz", "x")
    with pytest.raises(ConfigurationError):
        _freq(True, "x")


@given(st.floats(min_value=1e-3, max_value=1e4))
def test_mhz_round_trip(value):
    assert _freq(f"{value:.12g} MHz", "x") == pytest.approx(
        value * 1e-3, rel=1e-11
    )


def test_demo_yaml_resolves(tmp_path):
    (cfg,) = load_config(_write(tmp_path, DEMO))
    assert cfg.label == "demo"
    assert cfg.mode == "both"
    assert cfg.g == pytest.approx(0.2)
    # YAML 1.1 hands "1.0e4" over as a string; the loader must cope
    assert cfg.q_factor == 1e4
    assert cfg.linewidth == pytest.approx(1e-3)
    assert cfg.omega_cav == 10.0
    assert cfg.outputs == ("spectrum", "peaks")


def test_unknown_key_reports_field_path(tmp_path):
    text = "configs:\n  - label: a\n    cavity: {qq: 3}\n"
    with pytest.raises(ConfigurationError, match=r"configs\[0\]\.cavity\.qq"):
        load_config(_write(tmp_path, text))


def test_q_and_linewidth_mutually_exclusive(tmp_path):
    text = "configs:\n  - label: a\n    cavity: {q: 100, linewidth: 0.1}\n"
    with pytest.raises(ConfigurationError, match="mutually exclusive"):
        load_config(_write(tmp_path, text))


def test_duplicate_labels_rejected(tmp_path):
    text = (
        "configs:\n"
        "  - {label: a, cavity: {q: 100}}\n"
        "  - {label: a, cavity: {q: 100}}\n"
    )
    with pytest.raises(ConfigurationError, match="duplicate"):
        load_config(_write(tmp_path, text))


def test_cavity_width_is_mandatory(tmp_path):
    text = "configs:\n  - label: a\n"
    with pytest.raises(ConfigurationError, match="exactly one of q / linewidth"):
        load_config(_write(tmp_path, text))


def test_unsafe_label_rejected(tmp_path):
    text = "configs:\n  - label: 'bad label!'\n"
    with pytest.raises(ConfigurationError, match="label"):
        load_config(_write(tmp_path, text))


def test_lowfreq_corner_must_stay_below_splitting(tmp_path):
    text = (
        "configs:\n  - label: a\n"
        "    cavity: {q: 100}\n"
        "    intrinsic: {kind: lowfreq, alpha: 1.0e-4, corner: 12.0}\n"
    )
    with pytest.raises(ConfigurationError, match="below"):
        load_config(_write(tmp_path, text))


def test_empty_file_yields_no_configs(tmp_path):
    assert load_config(_write(tmp_path, "")) == []


def test_missing_source_rejected():
    with pytest.raises(ConfigurationError, match="neither a preset"):
        load_config("definitely_not_here.yaml")


def test_resolve_is_idempotent():
    cfg = ExperimentConfig(label="x", q_factor=1e3).resolve()
    assert cfg.resolve() == cfg


# ------------------------------------------------------------------
# artifacts
# ------------------------------------------------------------------

@pytest.fixture()
def demo_run(tmp_path):
    configs = load_config(_write(tmp_path, DEMO))
    out = tmp_path / "out"
    manifests = run_experiment(configs, out_dir=out)
    return out, manifests


def test_run_experiment_writes_declared_files(demo_run):
    out, (manifest,) = demo_run
    # the manifest names its data artifacts; the manifest file itself
    # sits alongside them
    assert set(manifest["files"]) == {"demo.spectrum.csv", "demo.peaks.json"}
    assert sorted(p.name for p in out.iterdir()) == sorted(
        manifest["files"] + ["demo.manifest.json"]
    )
    assert manifest["wall_time_s"] >= 0.0
    assert set(manifest["eta"]) == {"full", "rwa"}

    csv_lines = (out / "demo.spectrum.csv").read_text().splitlines()
    assert csv_lines[0] == "omega_ghz,power,r_shift_ghz,gamma_ghz,mode"
    modes = {line.rsplit(",", 1)[1] for line in csv_lines[1:]}
    assert modes == {"full", "rwa"}

    peaks = json.loads((out / "demo.peaks.json").read_text())
    assert peaks["schema"] == "rabisplit.peaks/1"
    assert set(peaks["reports"]) == {"full", "rwa"}
    for block in peaks["reports"].values():
        assert block["classification"]
        assert block["peaks"]


def test_runs_are_byte_deterministic(tmp_path):
    configs = load_config(_write(tmp_path, DEMO))
    first, second = tmp_path / "r1", tmp_path / "r2"
    (m1,) = run_experiment(configs, out_dir=first)
    (m2,) = run_experiment(configs, out_dir=second)
    for name in ("demo.spectrum.csv", "demo.peaks.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    m1.pop("wall_time_s"), m2.pop("wall_time_s")
    j1 = json.loads((first / "demo.manifest.json").read_text())
    j2 = json.loads((second / "demo.manifest.json").read_text())
    j1.pop("wall_time_s"), j2.pop("wall_time_s")
    assert j1 == j2 and m1 == m2


def test_peaks_json_encodes_offgrid_width_as_null(tmp_path):
    # rwa pins the doublet at +-0.2 GHz; a window ending 3e-4 GHz past
    # each peak cuts off the outer half-height crossings (~7.5e-4 out)
    text = DEMO.replace("mode: both", "mode: rwa").replace(
        "span: 3.0, points: 801", "span: 0.4006, points: 4001"
    )
    out = tmp_path / "out"
    run_experiment(load_config(_write(tmp_path, text)), out_dir=out)
    raw = (out / "demo.peaks.json").read_text()
    assert "NaN" not in raw
    peaks = json.loads(raw)
    widths = [p["fwhm_ghz"] for p in peaks["reports"]["rwa"]["peaks"]]
    assert None in widths


def test_density_curve_artifact(tmp_path):
    cfg = next(c for c in load_config("fig2") if c.intrinsic_kind == "lowfreq")
    out = tmp_path / "out"
    (manifest,) = run_experiment([cfg], out_dir=out)
    assert set(manifest["files"]) == {f"{cfg.label}.densities.csv"}
    assert (out / f"{cfg.label}.manifest.json").is_file()
    lines = (out / f"{cfg.label}.densities.csv").read_text().splitlines()
    assert lines[0] == "omega_ghz,j_intrinsic_ghz,j_cavity_ghz"
    assert len(lines) == 2002


def test_oracle_trace_artifact(tmp_path):
    text = (
        "configs:\n"
        "  - label: orc\n"
        "    intrinsic: {kind: ohmic, alpha: 0.0}\n"
        "    cavity: {g: 1 GHz, q: 100}\n"
        "    outputs: [oracle]\n"
        "    oracle: {modes: 120, t_max: 30.0}\n"
    )
    out = tmp_path / "out"
    run_experiment(load_config(_write(tmp_path, text)), out_dir=out)
    lines = (out / "orc.oracle.csv").read_text().splitlines()
    assert lines[0] == "t_ns,amp_real,amp_imag,population"
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == 1.0
    # ~0.02 ns sampling out to t_max (exact count depends on the
    # integrator step rounding into the sample stride)
    times = np.array([float(line.split(",", 1)[0]) for line in lines[1:]])
    assert times[-1] >= 30.0
    assert times.size > 1400
    np.testing.assert_allclose(np.diff(times), np.diff(times)[0], rtol=1e-9)


# ------------------------------------------------------------------
# entry point
# ------------------------------------------------------------------

def test_spectrum_verb_succeeds(tmp_path, capsys):
    cfg = _write(tmp_path, DEMO)
    assert main(["spectrum", cfg, "-o", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "demo.peaks.json").is_file()
    assert "demo" in capsys.readouterr().out


def test_mode_override_wins(tmp_path):
    cfg = _write(tmp_path, DEMO)
    out = tmp_path / "out"
    assert main(["spectrum", cfg, "-o", str(out), "--mode", "rwa"]) == 0
    manifest = json.loads((out / "demo.manifest.json").read_text())
    assert manifest["config"]["mode"] == "rwa"
    csv_modes = {
        line.rsplit(",", 1)[1]
        for line in (out / "demo.spectrum.csv").read_text().splitlines()[1:]
    }
    assert csv_modes == {"rwa"}


def test_config_error_exits_2(tmp_path, capsys):
    bad = _write(tmp_path, "configs:\n  - cavity: {qq: 1}\n")
    assert main(["spectrum", bad, "-o", str(tmp_path / "out")]) == 2
    assert "config error" in capsys.readouterr().err


def test_empty_config_exits_2(tmp_path, capsys):
    empty = _write(tmp_path, "")
    assert main(["spectrum", empty, "-o", str(tmp_path / "out")]) == 2
    assert "no configs" in capsys.readouterr().err


def test_numeric_failure_exits_3(tmp_path, capsys):
    text = (
        "configs:\n"
        "  - label: huge\n"
        "    intrinsic: {kind: ohmic, alpha: 0.0}\n"
        "    cavity: {g: 1 GHz, q: 1.0e+4}\n"
        "    scan: {span: 1.0e+5, points: 101}\n"
    )
    cfg = _write(tmp_path, text)
    assert main(["spectrum", cfg, "-o", str(tmp_path / "out")]) == 3
    err = capsys.readouterr().err
    assert "numeric failure" in err
    assert "huge" in err  # failing config named in the message


def test_unknown_preset_rejected_by_argparse(tmp_path):
    with pytest.raises(SystemExit):
        main(["preset", "nope", "-o", str(tmp_path / "out")])


def test_version_flag():
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
