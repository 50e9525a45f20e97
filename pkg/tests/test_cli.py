"""End-to-end tests for the command-line interface (in-process)."""

import json
import math
import os

import pytest

from mmesdyn import cli
from mmesdyn.monogamy import min_distribution_closed


def read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def sweep_rows(path):
    lines = read(path).splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]
            if not line.startswith("#")]
    footer = [line for line in lines if line.startswith("#")]
    return rows, footer


def test_sweep_single_point_csv(tmp_path):
    out = tmp_path / "s.csv"
    rc = cli.main(["sweep", "--family", "dim4", "--p", "0.3",
                   "--kt-min", "0", "--kt-max", "0", "--kt-step", "1",
                   "--measures", "negativity", "--out", str(out)])
    assert rc == 0
    rows, footer = sweep_rows(str(out))
    assert len(rows) == 4  # one per pair
    by_label = {r["label"]: r for r in rows}
    assert by_label["c1c2"]["closed"] == "0.5"
    assert by_label["r1r2"]["numeric"] == "0"
    assert len(footer) == 1 and footer[0].startswith("# max_abs_delta ")
    assert float(footer[0].split()[-1]) < 1e-10


def test_sweep_reruns_byte_identical(tmp_path):
    args = ["sweep", "--family", "dim4", "--p", "0,0.5,1",
            "--kt-min", "0", "--kt-max", "1", "--kt-step", "0.5",
            "--measures", "negativity,min,m_prime", "--out", None]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args[-1] = str(a)
    assert cli.main(list(args)) == 0
    args[-1] = str(b)
    assert cli.main(list(args)) == 0
    assert read(str(a)) == read(str(b))


def test_sweep_row_ordering(tmp_path):
    out = tmp_path / "o.csv"
    cli.main(["sweep", "--family", "dim4", "--p", "0.75,0.25",
              "--kt-min", "0", "--kt-max", "0.5", "--kt-step", "0.5",
              "--measures", "esd_line,negativity", "--out", str(out)])
    rows, _ = sweep_rows(str(out))
    # p-major in the order given, esd_line exactly once per p with an empty
    # time cell, then the grid in time-major order
    assert rows[0]["measure"] == "esd_line" and rows[0]["p"] == "0.75"
    assert rows[0]["kappa_t"] == ""
    ps = [r["p"] for r in rows]
    assert ps == sorted(ps, key=["0.75", "0.25"].index)
    esd_rows = [r for r in rows if r["measure"] == "esd_line"]
    assert len(esd_rows) == 2


def test_sweep_seventeen_digit_serialization(tmp_path):
    out = tmp_path / "d.csv"
    cli.main(["sweep", "--family", "dim4", "--p", "0",
              "--kt-min", "0", "--kt-max", "0", "--kt-step", "1",
              "--measures", "esd_line", "--out", str(out)])
    assert "0.86121150252991119" in read(str(out))


def test_sweep_json_mirror(tmp_path):
    csv_out = tmp_path / "m.csv"
    json_out = tmp_path / "m.json"
    base = ["sweep", "--family", "dim4", "--p", "0.4",
            "--kt-min", "0", "--kt-max", "0.6", "--kt-step", "0.3",
            "--measures", "min,m_indicator"]
    assert cli.main(base + ["--out", str(csv_out)]) == 0
    assert cli.main(base + ["--format", "json", "--out", str(json_out)]) == 0
    payload = json.loads(read(str(json_out)))
    assert payload["header"] == list(cli.SWEEP_HEADER)
    rows, footer = sweep_rows(str(csv_out))
    assert len(payload["rows"]) == len(rows)
    assert payload["max_abs_delta"] == float(footer[0].split()[-1])
    # spot-check one row against the CSV serialization
    first = payload["rows"][0]
    assert cli._fmt(first["p"]) == rows[0]["p"]
    assert cli._fmt(first["numeric"]) == rows[0]["numeric"]


def test_sweep_pt_spectrum_rows(tmp_path):
    out = tmp_path / "pt.csv"
    cli.main(["sweep", "--family", "dim4", "--p", "0.3",
              "--kt-min", "0.8", "--kt-max", "0.8", "--kt-step", "1",
              "--measures", "pt_spectrum", "--out", str(out)])
    rows, footer = sweep_rows(str(out))
    cc = [r for r in rows if r["measure"] == "pt_spectrum"
          and r["label"].startswith("c1c2")]
    assert len(cc) == 8
    eigs = [float(r["numeric"]) for r in cc]
    assert eigs == sorted(eigs)
    assert abs(sum(eigs) - 1.0) < 1e-12
    assert abs(eigs[0] - (-0.011478689384186665)) < 1e-12
    assert float(footer[0].split()[-1]) < 1e-10


def test_sweep_bad_arguments_exit_2(tmp_path):
    out = str(tmp_path / "x.csv")
    base = ["sweep", "--family", "dim4", "--out", out]
    assert cli.main(base + ["--measures", ""]) == 2
    assert cli.main(base + ["--kt-min", "2", "--kt-max", "1"]) == 2
    assert cli.main(base + ["--kt-step", "0"]) == 2
    assert cli.main(base + ["--p", "1.5"]) == 2
    assert cli.main(base + ["--p", "abc"]) == 2
    assert cli.main(base + ["--measures", "negativity,entropy"]) == 2
    assert cli.main(["sweep", "--family", "dim4"]) == 2  # no output file
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--family", "dim9", "--out", out])
    assert exc.value.code == 2


def test_sweep_unwritable_output_exit_3(tmp_path):
    missing_dir = tmp_path / "no" / "such" / "dir" / "f.csv"
    rc = cli.main(["sweep", "--family", "dim4", "--out", str(missing_dir)])
    assert rc == 3


def test_sweep_config_precedence(tmp_path):
    conf = tmp_path / "sweep.conf"
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    conf.write_text(
        "# comment line\n"
        "family = dim4\n"
        "p = 0.2\n"
        "kt-min = 0\n"
        "kt-max = 0\n"
        "kt-step = 1\n"
        f"out = {out_a}\n"
        "measures = negativity\n",
        encoding="utf-8")
    assert cli.main(["sweep", "--config", str(conf)]) == 0
    assert out_a.exists()
    # a flag overrides the same config key
    assert cli.main(["sweep", "--config", str(conf), "--p", "0.9",
                     "--out", str(out_b)]) == 0
    rows, _ = sweep_rows(str(out_b))
    assert all(float(r["p"]) == 0.9 for r in rows)
    # unknown keys are rejected
    bad = tmp_path / "bad.conf"
    bad.write_text("familly = dim4\n", encoding="utf-8")
    assert cli.main(["sweep", "--config", str(bad), "--out", str(out_b)]) == 2
    assert cli.main(["sweep", "--config", str(tmp_path / "none.conf"),
                     "--out", str(out_b)]) == 2


def test_figure_panels(tmp_path):
    out = tmp_path / "figs"
    assert cli.main(["figure", "fig3", "--out", str(out)]) == 0
    files = sorted(os.listdir(out))
    assert files == ["fig3_p000.csv", "fig3_p050.csv", "fig3_p075.csv",
                     "fig3_p100.csv"]
    lines = read(str(out / "fig3_p100.csv")).splitlines()
    header = lines[0].split(",")
    icol = header.index("neg_c1c2")
    # single-component state: the cavity pair stays entangled at all times
    assert all(float(line.split(",")[icol]) > 0.0 for line in lines[1:])


def test_figure_fig4_balance_vanishes_at_p1(tmp_path):
    out = tmp_path / "figs"
    assert cli.main(["figure", "fig4", "--out", str(out)]) == 0
    lines = read(str(out / "fig4_p100.csv")).splitlines()
    header = lines[0].split(",")
    icol = header.index("m_prime")
    assert all(abs(float(line.split(",")[icol])) < 1e-10 for line in lines[1:])


def test_figure_fig7_curves(tmp_path):
    out = tmp_path / "figs"
    assert cli.main(["figure", "fig7", "--out", str(out)]) == 0
    files = sorted(os.listdir(out))
    assert files == ["fig7_mprime_dim6.csv", "fig7_mprime_dim8.csv"]
    lines = read(str(out / "fig7_mprime_dim6.csv")).splitlines()
    assert len(lines) == 302  # header + 301 time samples
    kt, val = lines[40].split(",")
    from mmesdyn.monogamy import min_distribution
    assert abs(float(val) - min_distribution(0.8, float(kt), family="dim6")) < 1e-12


def test_figure_bad_id_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["figure", "fig9", "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_esd_command(capsys):
    assert cli.main(["esd", "--family", "dim4", "--p", "0.5"]) == 0
    printed = capsys.readouterr().out.strip()
    assert abs(float(printed) - 1.2809926726262004) < 1e-8
    assert cli.main(["esd", "--family", "dim4", "--p", "1.5"]) == 2


def test_validate_fast_report(capsys):
    cli.main(["validate", "--level", "fast"])
    out = capsys.readouterr().out
    assert "overall:" in out
    assert "chi2 reading rejected" in out
    # every check on the battery roster reports a line
    assert out.count("[PASS]") + out.count("[FAIL]") == 10


def test_validate_fast_exits_clean(capsys):
    # the full battery is expected to come back green; a nonzero code means
    # at least one check disagrees with its recorded expectation (see the
    # battery report and the peak-count anchor in test_monogamy)
    rc = cli.main(["validate", "--level", "fast"])
    capsys.readouterr()
    assert rc == 0, "validation battery reported a failing check"


def test_mutation_is_caught(monkeypatch):
    # sanity check on the battery itself: break one closed form and the
    # closed-vs-numeric check must notice
    from mmesdyn import nonlocality, validation

    original = nonlocality.min_c1c2_from_amps

    def skewed(p, xi, chi):
        return original(p, xi, chi) + 1e-6

    monkeypatch.setattr(nonlocality, "min_c1c2_from_amps", skewed)
    record = validation.check_closed_vs_numeric("fast")
    assert not record.passed
