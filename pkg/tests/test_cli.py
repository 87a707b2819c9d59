import io
import math
import subprocess
import sys

import numpy as np
import pytest

from cavity_transfer.cli import delta_grid, main
from cavity_transfer.model import InvalidInputError

RES = ["--omega", "1", "--delta", "0", "--g", "65", "--c", "1"]
DISP = ["--delta", "-600", "--g", "65", "--c", "1"]
DISP_WINDOW = ["--window-lo", "150", "--window-hi", "250"]
HALF = repr(1 / math.sqrt(2))
CAT = ["--alpha", "1", "--mu-re", HALF, "--nu-re", HALF]


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def report(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def load_csv(text):
    lines = text.splitlines()
    return lines[0], np.array([[float(x) for x in line.split(",")] for line in lines[1:]])


def test_simulate_resonant_csv():
    code, text = run("simulate", *RES, "--t-max", "5", "--points", "2001")
    assert code == 0
    header, data = load_csv(text)
    assert header == "t,F_pop,U2,U4,U6"
    assert data.shape == (2001, 5)
    k = int(np.argmax(data[:, 4]))
    assert data[k, 4] >= 0.999 and abs(data[k, 0] - 4.4464) <= 0.05
    assert np.max(np.abs(data[:, 1:].sum(1) - 1)) <= 1e-9
    assert "\r" not in text


def test_simulate_dispersive_csv():
    code, text = run("simulate", *DISP, "--t-max", "200", "--points", "4001")
    assert code == 0
    _, data = load_csv(text)
    assert data[:, 1].max() <= 0.05
    assert np.max(np.abs(data[:, 1:].sum(1) - 1)) <= 1e-9


def test_simulate_default_points_resolve_fastest_rabi():
    code, text = run("simulate", *RES, "--t-max", "1")
    _, data = load_csv(text)
    step = np.diff(data[:, 0]).max()
    assert step <= math.pi / (10 * math.sqrt(16902)) + 1e-15


def test_simulate_files_are_byte_identical(tmp_path):
    paths = []
    for i in range(2):
        csv, svg = tmp_path / f"r{i}.csv", tmp_path / f"r{i}.svg"
        assert run("simulate", *RES, "--points", "501", "--out", str(csv), "--svg", str(svg))[0] == 0
        paths.append((csv.read_bytes(), svg.read_bytes()))
    assert paths[0] == paths[1]


def test_svg_layout(tmp_path):
    svg = tmp_path / "f.svg"
    run("simulate", *RES, "--points", "501", "--out", str(tmp_path / "f.csv"), "--svg", str(svg))
    text = svg.read_text()
    assert 'width="960" height="540"' in text and 'viewBox="0 0 960 540"' in text
    assert text.count("<polyline") == 4
    for name in ("F", "U2", "U4", "U6"):
        assert f">{name}</text>" in text


def test_matplotlib_figure(tmp_path):
    png = tmp_path / "fig.png"
    code, _ = run("simulate", *RES, "--points", "301", "--out", str(tmp_path / "a.csv"), "--figure", str(png))
    assert code == 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_unwritable_output(tmp_path):
    assert run("simulate", *RES, "--out", str(tmp_path / "missing" / "x.csv"))[0] == 2


@pytest.mark.parametrize("argv", [
    ["simulate", "--t-max", "-1"],
    ["simulate", "--points", "1"],
    ["simulate", "--g", "-3"],
    ["simulate", "--delta", "nan"],
    ["find-tstar", "--window-lo", "5", "--window-hi", "1"],
    ["sweep", "--delta-from", "0", "--delta-to", "10", "--delta-step", "-1"],
    ["fidelity", "--alpha", "0", "--mu-re", "1", "--nu-re", "-1", "--t", "1"],
    ["oracle", "--alpha", "0.5", "--t", "1"],
    ["simulate", "--bogus-flag"],
])
def test_input_errors_exit_1(argv):
    assert run(*argv)[0] == 1


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# dispersive run\ndelta = -600\nt-max = 200\npoints = 11\n")
    code, text = run("simulate", "--config", str(cfg), "--points", "21")
    assert code == 0
    _, data = load_csv(text)
    assert data.shape[0] == 21 and data[-1, 0] == 200


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("detla = -600\n")
    assert run("simulate", "--config", str(cfg))[0] == 1


def test_find_tstar_resonant():
    code, text = run("find-tstar", *RES, "--window-lo", "0", "--window-hi", "10")
    assert code == 0
    rep = report(text)
    assert set(rep) == {"t_star", "quality", "phase", "max_f_pop"}
    assert float(rep["t_star"]) == pytest.approx(4.4464, abs=1e-3)


def test_find_tstar_dispersive():
    rep = report(run("find-tstar", *DISP, *DISP_WINDOW)[1])
    assert float(rep["t_star"]) == pytest.approx(195.479, abs=0.05)


def test_find_tstar_decoupled():
    code, text = run("find-tstar", "--g", "0")
    assert code == 0 and report(text)["quality"] == "0"


def test_fidelity_at_start():
    code, text = run("fidelity", *RES, "--alpha", "1", "--mu-re", "1", "--nu-re", "0", "--t", "0")
    assert code == 0
    rep = report(text)
    assert float(rep["fidelity_raw"]) == pytest.approx(math.exp(-2), abs=1e-12)
    assert float(rep["mean_photon_number"]) == 0


def test_fidelity_dispersive_tstar():
    rep = report(run("fidelity", *DISP, *DISP_WINDOW, *CAT)[1])
    assert float(rep["t"]) == pytest.approx(195.479, abs=0.05)
    assert float(rep["fidelity_phase_corrected"]) >= 0.999


def test_sweep_marks_dispersive_design_feasible():
    code, text = run("sweep", "--g", "65", "--c", "1", "--delta-from", "-800", "--delta-to", "-400",
                     "--delta-step", "50", "--pop-cap", "0.05", *DISP_WINDOW)
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "delta,t_star,quality,max_f_pop,feasible"
    rows = {float(l.split(",")[0]): l.split(",") for l in lines[1:]}
    assert len(rows) == 9
    assert rows[-600.0][4] == "true"
    assert float(rows[-600.0][1]) == pytest.approx(195.479, abs=0.05)


def test_sweep_resonance():
    _, text = run("sweep", "--delta-from", "0", "--delta-to", "0", "--pop-cap", "1.0")
    row = text.splitlines()[1].split(",")
    assert row[4] == "true" and float(row[1]) == pytest.approx(4.4464, abs=1e-3)
    code, text = run("sweep", "--delta-from", "0", "--delta-to", "0", "--pop-cap", "1e-9")
    assert code == 0
    assert all(line.endswith(",false") for line in text.splitlines()[1:])


def test_delta_grid():
    np.testing.assert_allclose(delta_grid(-800, -400, 50), np.arange(-800, -399, 50))
    np.testing.assert_allclose(delta_grid(1, 0, -0.25), [1, 0.75, 0.5, 0.25, 0])
    with pytest.raises(InvalidInputError):
        delta_grid(0, 1, 0)


def test_validate_default():
    code, text = run("validate", "--trials", "200")
    assert code == 0
    assert len([l for l in text.splitlines() if l.startswith("PASS")]) == 4


def test_validate_misprint_report():
    code, text = run("validate", "--trials", "10", "--include-as-printed-eq10")
    assert code == 0
    defects = dict(
        line.rsplit("=", 1) for line in text.splitlines() if line.startswith("as_printed")
    )
    defects = {k: float(v) for k, v in defects.items()}
    assert len(defects) == 5
    assert max(defects.values()) > 1e-3


def test_validate_zero_trials(caplog):
    code, _ = run("validate", "--trials", "0")
    assert code == 0
    assert "vacuous" in caplog.text


def test_oracle_dispersive():
    code, text = run("oracle", *DISP, *DISP_WINDOW, "--alpha", "0.3", "--mu-re", HALF, "--nu-re", HALF)
    assert code == 0, text
    assert text.count("PASS") == 4


def test_oracle_vacuum_is_exact():
    code, text = run("oracle", *DISP, "--alpha", "0", "--t", "17")
    assert code == 0
    for line in text.splitlines():
        if line.startswith("PASS") and "sector" not in line:
            assert "max_dev=0.000e+00" in line


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cavity_transfer", "find-tstar", "--g", "65", "--c", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("t_star=4.44")
