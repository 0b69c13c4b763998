import json
import os
import subprocess
import sys
from pathlib import Path

SRC = str(Path(__file__).resolve().parent.parent / "src")


def run_cli(*args: str, **env_extra) -> subprocess.CompletedProcess:
    env = dict(os.environ, PYTHONPATH=SRC + os.pathsep + os.environ.get("PYTHONPATH", ""),
               **env_extra)
    cmd = [sys.executable, "-m", "apword", *args]
    return subprocess.run(cmd, capture_output=True, text=True, env=env)


def test_analyze_tm3():
    cp = run_cli("analyze", "--builtin", "tm:3")
    assert cp.returncode == 0, cp.stderr
    report = json.loads(cp.stdout)
    assert report["group"]["order"] == 3 and report["group"]["cyclic"]
    assert report["palindromicity"]["g_witness"] == "(0 2 1)"
    assert report["aperiodicity"]["status"] == "AperiodicByCriterion"


def test_analyze_a4():
    cp = run_cli("analyze", "--builtin", "a4-example")
    report = json.loads(cp.stdout)
    assert report["group"]["order"] == 12 and report["group"]["exponent"] == 6


def test_analyze_exact_recurrence():
    cp = run_cli("analyze", "--builtin", "tm:2", "--exact-recurrence")
    report = json.loads(cp.stdout)
    assert report["recurrence"]["n_exact"] == 3
    assert report["recurrence"]["zeta2"] == 8


def test_analyze_parse_failure_exit_1(tmp_path: Path):
    bad = tmp_path / "broken.sub"
    bad.write_text("0 -> 01 ; 1 -> 1")
    cp = run_cli("analyze", "--file", str(bad))
    assert cp.returncode == 1
    assert "unequal rule lengths" in cp.stderr


def test_bad_flags_exit_1():
    cp = run_cli("analyze")
    assert cp.returncode == 1


def test_unknown_builtin_exit_1():
    cp = run_cli("analyze", "--builtin", "nope")
    assert cp.returncode == 1


def test_vdw_upper():
    cp = run_cli("vdw", "upper", "--c", "2", "--L", "2", "--M", "8", "--R", "9")
    assert cp.returncode == 0
    assert json.loads(cp.stdout)["vdw_upper"]["value"] == "640"


def test_vdw_lower():
    cp = run_cli("vdw", "lower", "--c", "2", "--L", "2", "--m", "2")
    data = json.loads(cp.stdout)["vdw_lower"]
    assert data["progression_length"] == "8193"
    assert data["window_length"] == "16385"


def test_graph_outlook6(tmp_path: Path):
    dot = tmp_path / "out.dot"
    cp = run_cli("graph", "--builtin", "outlook6", "--dot", str(dot))
    assert cp.returncode == 0
    report = json.loads(cp.stdout)
    assert report["column_number"] == 2
    text = dot.read_text()
    assert "{a,b}" in text and "peripheries=2" in text


def test_apscan_rs_csv(tmp_path: Path):
    out = tmp_path / "scan.csv"
    cp = run_cli("apscan", "--builtin", "rs", "--coding", "spin", "--range", "1:8",
                 "--initial-prefix", str(2**16), "--prefix-cap", str(2**18),
                 "--csv", str(out))
    assert cp.returncode == 0, cp.stderr
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# apword ")
    assert lines[1] == "d,best_len,best_start,prefix_len,status"
    rows = {int(r.split(",")[0]): int(r.split(",")[1]) for r in lines[2:]}
    assert rows[3] > rows[2] and rows[5] > rows[4]


def test_apscan_deterministic(tmp_path: Path):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    args = ("apscan", "--builtin", "tm:3", "--range", "1:10",
            "--initial-prefix", str(2**14), "--prefix-cap", str(2**16))
    assert run_cli(*args, "--csv", str(a)).returncode == 0
    assert run_cli(*args, "--csv", str(b), "--jobs", "3").returncode == 0
    # identical modulo the version header; byte-identical for identical config
    assert a.read_text().splitlines()[1:] == b.read_text().splitlines()[1:]
    assert run_cli(*args, "--csv", str(c)).returncode == 0
    assert a.read_text().splitlines()[1:] == c.read_text().splitlines()[1:]
    assert a.read_bytes()[a.read_bytes().find(b"\n"):] == \
        c.read_bytes()[c.read_bytes().find(b"\n"):]


def test_prefix_text_and_u8(tmp_path: Path):
    cp = run_cli("prefix", "--builtin", "tm:2", "--length", "8")
    assert cp.stdout.splitlines()[-1] == "0 1 1 0 1 0 0 1"
    out = tmp_path / "w.u8"
    cp = run_cli("prefix", "--builtin", "rs", "--coding", "spin", "--length", "16",
                 "--format", "u8", "--out", str(out))
    assert cp.returncode == 0
    assert list(out.read_bytes()) == [0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1]


def test_prefix_resource_cap_exit_3():
    cp = run_cli("prefix", "--builtin", "tm:2", "--length", str(2**20),
                 "--prefix-cap", str(2**10))
    assert cp.returncode == 3


def test_verify_exit_0():
    cp = run_cli("verify", "--builtin", "tm:2", "--families", "identity",
                 "--k-range", "1:3", "--r-override", "9",
                 "--prefix-cap", str(2**22))
    assert cp.returncode == 0, cp.stderr
    data = json.loads(cp.stdout)
    assert all(r["verdict"] == "PASS" for r in data["reports"])


def test_verify_inline_rules_coding_file(tmp_path: Path):
    coding = tmp_path / "coding.json"
    coding.write_text(json.dumps({"0": "x", "1": "y"}))
    cp = run_cli("apscan", "--rules", "0 -> 01 ; 1 -> 10", "--coding", str(coding),
                 "--range", "1:1", "--initial-prefix", str(2**12),
                 "--prefix-cap", str(2**14))
    assert cp.returncode == 0, cp.stderr
    assert ",2," in cp.stdout.splitlines()[-1]  # cube-free: best_len 2


def test_out_dir_env_var(tmp_path: Path):
    cp = run_cli("vdw", "upper", "--c", "2", "--L", "2", "--M", "8", "--R", "9",
                 "--json", "report.json", APWORD_OUT_DIR=str(tmp_path))
    assert cp.returncode == 0, cp.stderr
    data = json.loads((tmp_path / "report.json").read_text())
    assert data["vdw_upper"]["value"] == "640"


def test_spin_matrix_json_input(tmp_path: Path):
    matrix_file = tmp_path / "rs.json"
    matrix_file.write_text(json.dumps({"digits": 2, "modulus": 2, "matrix": [[0, 0], [0, 1]]}))
    cp = run_cli("prefix", "--file", str(matrix_file), "--coding", "spin", "--length", "16",
                 "--format", "u8", "--out", str(tmp_path / "u.bin"))
    assert cp.returncode == 0, cp.stderr
    assert list((tmp_path / "u.bin").read_bytes()) == \
        [0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1]


def test_verify_failure_exit_code_mapping():
    from apword.cli import exit_code_for_reports
    from apword.progressions import APResult, BoundReport, DifferenceFamily

    fam = DifferenceFamily("identity", (1,), 3, 2, None, "identity-columns")
    ok = BoundReport(fam, APResult(3, 4, 0, 100, "LowerBoundOnly"), "PASS")
    bad = BoundReport(fam, APResult(3, 1, 0, 100, "LowerBoundOnly"), "FAIL")
    assert exit_code_for_reports([ok]) == 0
    assert exit_code_for_reports([ok, bad]) == 2
