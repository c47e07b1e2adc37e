import csv
import json
import subprocess
import sys

from tacnet.cli import main

import refdata


def run_cli(*args):
    return main(list(args))


def test_gen_default_writes_forty_files(tmp_path):
    assert run_cli("gen", "--out", str(tmp_path)) == 0
    files = sorted(tmp_path.glob("*.json"))
    assert len(files) == 40


def test_gen_single_and_repeatable(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    assert run_cli("gen", "--sizes", "10", "--per-size", "1", "--out", str(out1)) == 0
    assert run_cli("gen", "--sizes", "10", "--per-size", "1", "--out", str(out2)) == 0
    (f1,) = sorted(out1.glob("*.json"))
    (f2,) = sorted(out2.glob("*.json"))
    assert f1.read_bytes() == f2.read_bytes()


def test_solve_writes_design_and_trace(tmp_path):
    idir = tmp_path / "inst"
    run_cli("gen", "--sizes", "10", "--per-size", "1", "--out", str(idir))
    (inst_file,) = idir.glob("*.json")
    out = tmp_path / "run"
    rc = run_cli("solve", "--instance", str(inst_file), "--max-iterations", "30",
                 "--stagnation-limit", "30", "--out", str(out))
    assert rc == 0
    assert (out / "n10_i00_design.json").exists()
    trace = (out / "n10_i00_trace.csv").read_text().splitlines()
    assert trace[0].startswith("instance_id,config_hash,seed,best_objective")
    # reproducibility: a second identical invocation writes the same design
    out2 = tmp_path / "run2"
    run_cli("solve", "--instance", str(inst_file), "--max-iterations", "30",
            "--stagnation-limit", "30", "--out", str(out2))
    assert ((out / "n10_i00_design.json").read_bytes()
            == (out2 / "n10_i00_design.json").read_bytes())


def test_usage_error_exit_code():
    # argparse raises SystemExit(2) inside parse_args; main converts it
    assert main(["solve", "--bogus-flag"]) == 2


def test_unknown_flag_returns_two():
    rc = main(["solve"])  # missing required --instance
    assert rc == 2


def test_missing_instance_is_io_error(tmp_path):
    rc = run_cli("solve", "--instance", str(tmp_path / "nope.json"))
    assert rc == 4


def test_sweep_analyze_report_pipeline(tmp_path):
    idir = tmp_path / "inst"
    run_cli("gen", "--sizes", "10", "--per-size", "3", "--out", str(idir))
    out = tmp_path / "out"
    rc = run_cli("sweep", "--kind", "pmp", "--instances", str(idir),
                 "--max-iterations", "15", "--stagnation-limit", "15",
                 "--out", str(out))
    assert rc == 0
    rows = list(csv.DictReader((out / "results.csv").open()))
    assert len(rows) == 9  # 3 instances x feasible configs {5, 8, 10}
    assert sorted({r["config_label"] for r in rows}) == ["pmp-10", "pmp-5", "pmp-8"]
    rc = run_cli("analyze", "--results", str(out / "results.csv"),
                 "--metrics", "best_objective", "--friedman-draws", "5000",
                 "--out", str(out))
    assert rc == 0 and (out / "report.md").exists()
    # golden regression: analyzing the same stored rows twice is bit-identical
    first = (out / "report.md").read_bytes()
    rc = run_cli("report", "--results", str(out / "results.csv"),
                 "--metrics", "best_objective", "--friedman-draws", "5000",
                 "--out", str(out / "again"))
    assert rc == 0
    assert (out / "again" / "report.md").read_bytes() == first


def test_fit_p_on_published_rows(tmp_path, capsys):
    path = tmp_path / "rows.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["f", "f_min", "f_mean"])
        for key, data in refdata.BASELINE_MIN_MEAN.items():
            for (f_min, f_mean), f in zip(data, refdata.BASELINE_F[key]):
                w.writerow([f, f_min, f_mean])
    rc = run_cli("fit-p", "--csv", str(path))
    assert rc == 0
    out = capsys.readouterr().out
    p = float(out.split("p = ")[1].split()[0])
    assert 0.0246 <= p <= 0.0266


def test_print_config_echoes_resolved_json(tmp_path, capsys):
    idir = tmp_path / "inst"
    run_cli("gen", "--sizes", "10", "--per-size", "1", "--out", str(idir))
    (inst_file,) = idir.glob("*.json")
    capsys.readouterr()  # drop the gen output
    run_cli("solve", "--instance", str(inst_file), "--max-iterations", "5",
            "--stagnation-limit", "5", "--print-config", "--out", str(tmp_path / "o"))
    out = capsys.readouterr().out
    lines = out.splitlines()
    doc = json.loads("\n".join(lines[: lines.index("}") + 1]))
    assert doc["hub_strategy"] == "baseline" and doc["pmp_limit"] == 10
    assert doc["weights"]["name"] == "baseline" and doc["lambda"] == 1.0


def test_env_var_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("TACNET_OUT", str(tmp_path / "envout"))
    assert run_cli("gen", "--sizes", "10", "--per-size", "1") == 0
    assert len(list((tmp_path / "envout").glob("*.json"))) == 1


def test_console_entry_point_help():
    proc = subprocess.run([sys.executable, "-m", "tacnet.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "gen" in proc.stdout and "fit-p" in proc.stdout
