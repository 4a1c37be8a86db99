import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from jcreceiver import cli
from jcreceiver.errors import EvaluationError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    header, data = rows[0], [[float(x) for x in r] for r in rows[1:]]
    meta = dict(line[2:].split("=", 1) for line in text.splitlines() if line.startswith("# "))
    return header, np.array(data), meta


def column(header, data, name):
    return data[:, header.index(name)]


def test_trace_scan_alpha_two(capsys):
    code, out, _ = run(capsys, "trace-scan", "--alpha", "2", "--window", "0:2", "--points", "2001")
    assert code == 0
    h, d, meta = table(out)
    i = int(np.argmax(column(h, d, "d_tr")))
    assert abs(d[i, h.index("phi")] - 0.3960) < 1e-3 and abs(d[i, h.index("d_tr")] - 0.9896) < 1e-3
    assert meta["tool"].startswith("jcreceiver")


def test_trace_scan_vacuum_is_zero(capsys):
    _, out, _ = run(capsys, "trace-scan", "--alpha", "0", "--points", "11")
    h, d, _ = table(out)
    assert np.all(column(h, d, "d_tr") == 0.0)


def test_trace_scan_second_window_small_alpha(capsys):
    _, out, _ = run(capsys, "trace-scan", "--alpha", "0.5", "--window", "7.5:9")
    h, d, meta = table(out)
    i = int(np.argmax(column(h, d, "d_tr")))
    assert abs(d[i, h.index("phi")] - 8.0285) < 2e-3
    assert abs(d[i, h.index("d_tr")] - 0.7941) < 5e-4
    assert meta["max.alpha_0.5.window_7.5:9.0"].startswith("phi=8.0284991")


def test_min_error_gap_over_alpha_grid(capsys):
    alphas = ",".join(f"{a:.2f}" for a in np.arange(0.05, 0.851, 0.05))
    _, out, _ = run(capsys, "min-error", "--alpha", alphas, "--eta1", "1/2")
    h, d, _ = table(out)
    assert len(d) == 17
    assert np.all(column(h, d, "deviation") < 1e-3)
    assert np.all(column(h, d, "deviation") >= 0)


def test_min_error_bias_ordering_and_vacuum(capsys):
    _, out, _ = run(capsys, "min-error", "--alpha-sq-grid", "0:0.5:2")
    h, d, _ = table(out)
    eta, asq = column(h, d, "eta1"), column(h, d, "alpha_sq")
    vac = asq == 0
    np.testing.assert_array_equal(column(h, d, "p_err")[vac], np.minimum(eta, 1 - eta)[vac])
    dev = column(h, d, "deviation")[asq == 0.5]
    order = np.argsort(eta[asq == 0.5])
    assert np.all(np.diff(dev[order]) < 0)
    assert np.isnan(column(h, d, "sql")[eta != 0.5]).all()


def test_gamma_opt(capsys):
    _, out, _ = run(capsys, "gamma-opt")
    h, d, _ = table(out)
    spans = []
    for alpha in (1.0, 0.5, 0.25):
        rows = d[column(h, d, "alpha") == alpha]
        g = rows[:, h.index("gamma_opt")]
        assert abs(g[-1] - 1.0) < 1e-3 and rows[-1, h.index("eta1")] == 0.5
        assert np.all(np.diff(g) > 0)
        spans.append(g.max() - g.min())
    assert spans[0] < spans[1] < spans[2]


def test_gamma_opt_rejects_vacuum(capsys):
    code, _, err = run(capsys, "gamma-opt", "--alpha", "0")
    assert code == 2 and err.count("\n") == 1


def test_kennedy_table(capsys):
    _, out, _ = run(capsys, "kennedy")
    h, d, _ = table(out)
    assert h == ["alpha_sq", "Q1", "Q2", "Q3", "Q_kennedy", "Q_idp", "pnrd_1", "pnrd_0.91"]
    q = {name: column(h, d, name) for name in h}
    assert np.all(q["Q_idp"] <= q["Q_kennedy"] + 1e-15)
    assert np.all(q["Q_kennedy"] <= q["Q3"]) and np.all(q["Q3"] <= q["Q2"]) and np.all(q["Q2"] <= q["Q1"])
    assert np.all(d[0, 1:] == 1.0)
    np.testing.assert_array_equal(q["pnrd_1"], q["Q_kennedy"])


def test_sequence_consistency(capsys):
    _, out, _ = run(capsys, "sequence", "--alpha", "0.5", "--rounds", "1")
    _, single, _ = run(capsys, "min-error", "--alpha", "0.5", "--eta1", "1/2")
    hs, ds, _ = table(out)
    hm, dm, _ = table(single)
    assert column(hs, ds, "cumulative_p_err")[0] == column(hm, dm, "p_err")[0]


def test_sequence_non_increasing(capsys):
    _, out, _ = run(capsys, "sequence", "--alpha", "0.5", "--window", "0:35", "--rounds", "3")
    h, d, _ = table(out)
    err = column(h, d, "cumulative_p_err")
    assert np.all(np.diff(err) <= 0) and np.all(err >= column(h, d, "helstrom"))
    np.testing.assert_allclose(column(h, d, "total_branch_prob"), 1.0, atol=1e-10)


def test_displacement_scan(capsys):
    _, out, _ = run(capsys, "displacement-scan")
    h, d, _ = table(out)
    beta, p = column(h, d, "beta"), column(h, d, "p_err")
    np.testing.assert_array_equal(beta, -beta[::-1])
    assert np.all(p[beta == 0] <= p)
    assert np.all(p[np.abs(beta) == 0.25] > p[beta == 0])


def test_json_output(capsys):
    _, out, _ = run(capsys, "kennedy", "--alpha-sq-grid", "0:1:3", "--format", "json", "--digits", "6")
    doc = json.loads(out)
    assert len(doc["rows"]) == 3
    assert all(len(r) == len(doc["columns"]) for r in doc["rows"])
    assert doc["metadata"]["digits"] == "6"


def test_digits(capsys):
    _, out, _ = run(capsys, "kennedy", "--alpha-sq-grid", "0.5:0.5:1", "--digits", "4")
    row = out.splitlines()[1].split(",")
    assert row[1] == "0.6329"


@pytest.mark.parametrize("argv", [
    ["trace-scan", "--window", "2:1"],
    ["trace-scan", "--window", "0:x"],
    ["min-error", "--eta1", "1.5"],
    ["kennedy", "--rounds", "9"],
    ["kennedy", "--rounds", "two"],
    ["trace-scan", "--points", "1.5"],
    ["kennedy", "--det-eff", "0"],
    ["kennedy", "--alpha-sq-grid", "0:1"],
    ["min-error", "--trunc-eps", "1e-3"],
    ["trace-scan", "--alpha", "0.5j"],
    ["nonsense"],
    [],
])
def test_config_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err.count("\n") == 1 and err.startswith("jcreceiver:")


def test_no_file_on_config_error(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, _, _ = run(capsys, "kennedy", "--rounds", "0", "--out", str(target))
    assert code == 2 and not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_numerical_failure_exit_code(tmp_path, capsys, monkeypatch):
    def broken(cfg):
        raise EvaluationError(0.5, math.nan)

    monkeypatch.setitem(cli.COMMANDS, "kennedy", broken)
    target = tmp_path / "out.csv"
    code, _, err = run(capsys, "kennedy", "--out", str(target))
    assert code == 3 and "numerical failure" in err
    assert list(tmp_path.iterdir()) == []


def test_out_file_matches_stdout(tmp_path, capsys):
    target = tmp_path / "k.csv"
    assert run(capsys, "kennedy", "--out", str(target))[0] == 0
    _, out, _ = run(capsys, "kennedy")
    assert target.read_text() == out


def test_reproduce_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    assert run(capsys, "reproduce", str(a))[0] == 0
    assert run(capsys, "reproduce", str(b), "--jobs", "2")[0] == 0
    names = sorted(os.listdir(a))
    assert names == sorted(f"{s}.csv" for s in cli.SUBCOMMANDS)
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()


def test_reproduce_needs_directory(tmp_path, capsys):
    assert run(capsys, "reproduce", str(tmp_path / "missing"))[0] == 2


def test_locale_independent_subprocess(capsys):
    env = dict(os.environ, LC_ALL="de_DE.UTF-8", LC_NUMERIC="de_DE.UTF-8")
    proc = subprocess.run([sys.executable, "-m", "jcreceiver", "kennedy", "--alpha-sq-grid", "0:1:5"],
                          capture_output=True, text=True, env=env, check=True)
    _, out, _ = run(capsys, "kennedy", "--alpha-sq-grid", "0:1:5")
    assert proc.stdout == out
    assert "," in out.splitlines()[0] and all(";" not in line for line in out.splitlines())


def test_metadata_echoes_defaults(capsys):
    _, out, _ = run(capsys, "kennedy")
    _, _, meta = table(out)
    for key in ("alpha_sq_grid", "eta1", "rounds", "det_eff", "window", "trunc_eps", "digits", "format"):
        assert key in meta
