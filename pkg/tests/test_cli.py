"""End-to-end command tests, run in-process through main().

Exit-code contract: 0 = success, 1 = usage error (including argparse
rejections), 2 = a computation that ran but failed its certification.
Byte-identical reruns are part of the contract, so several tests compare
whole captured outputs.
"""

import json
import subprocess
import sys

import pytest

from radex.cli import ORACLE_CAP, main
from radex.qseries import p2_counts, partition_counts, xi_series


def run(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_p2_single_with_check(capsys):
    rc, out, _ = run(["p2", "--n", "10", "--check"], capsys)
    assert rc == 0
    assert out.startswith("p2(10) = 22  ")
    assert "stabilized=yes" in out and "check=ok" in out


def test_p2_range_csv(capsys):
    rc, out, _ = run(["p2", "--range", "1..5", "--output", "csv"], capsys)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "n,value,stabilized,k_used,residual,im_residue"
    assert len(lines) == 6
    values = [int(line.split(",")[1]) for line in lines[1:]]
    assert values == p2_counts(5)[1:]


def test_p2_json_single_is_object(capsys):
    rc, out, _ = run(["p2", "--n", "3", "--k-max", "12", "--check",
                      "--output", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert isinstance(doc, dict)
    assert doc["schema"] == "1"
    assert doc["rounded"] == 2 and doc["check"] is True
    assert doc["k_used"] == 12 and len(doc["partial_sums"]) == 12


def test_p2_json_range_is_array(capsys):
    rc, out, _ = run(["p2", "--range", "2..3", "--k-max", "20",
                      "--output", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert isinstance(doc, list) and len(doc) == 2
    assert [d["n"] for d in doc] == [2, 3]


def test_p2_truncation_too_small_exits_2(capsys):
    rc, out, _ = run(["p2", "--n", "10", "--k-max", "2"], capsys)
    assert rc == 2
    assert "stabilized=no" in out
    assert "k_used=8" in out  # sub-window requests are raised to the window


def test_p2_wrong_variant_flag_exits_2(capsys):
    rc, out, _ = run(["p2", "--n", "1", "--k-max", "20", "--check",
                      "--k1-sign", "-1"], capsys)
    assert rc == 2
    assert "MISMATCH" in out or "stabilized=no" in out


def test_usage_errors_exit_1(capsys):
    for argv in (["p2", "--n", "0"],
                 ["p2", "--range", "5..2"],
                 ["p2", "--range", "junk"],
                 ["p2", "--n", "1", "--bits", "32"],
                 ["p2", "--n", "1", "--bits", "wide"],
                 ["p2", "--n", "1", "--threads", "0"]):
        rc, _, err = run(argv, capsys)
        assert rc == 1, argv
        assert "error" in err


def test_argparse_rejections_exit_1(capsys):
    for argv in (["p2"],                      # neither --n nor --range
                 ["p2", "--n", "1", "--range", "1..2"],
                 ["frobnicate"],
                 ["verify", "nonsuite"],
                 ["bound-report", "--family", "7"]):  # --k-max required
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 1, argv
        capsys.readouterr()


def test_oracle_plain(capsys):
    rc, out, _ = run(["oracle", "p2", "--to", "8"], capsys)
    assert rc == 0
    assert out == ",".join(str(v) for v in p2_counts(8)) + "\n"


def test_oracle_alpha_csv(capsys):
    rc, out, _ = run(["oracle", "alpha", "--to", "3", "--output", "csv"],
                     capsys)
    assert rc == 0
    assert out.splitlines() == ["n,value", "0,1", "1,1", "2,-2", "3,3"]


def test_oracle_r_json(capsys):
    rc, out, _ = run(["oracle", "r", "--to", "5", "--output", "json"],
                     capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["schema"] == "1" and doc["kind"] == "r" and doc["to"] == 5
    assert doc["values"] == list(xi_series(5).coeffs)
    assert doc["values"][:4] == [1, 0, 1, 1]


def test_oracle_cap(capsys):
    rc, _, err = run(["oracle", "p", "--to", str(ORACLE_CAP + 1)], capsys)
    assert rc == 1
    assert str(ORACLE_CAP) in err


def test_p_subcommand(capsys):
    rc, out, _ = run(["p", "--n", "30", "--check"], capsys)
    assert rc == 0
    assert out.startswith("p(30) = 5604  ")
    assert "check=ok" in out

    rc, out, _ = run(["p", "--range", "1..4", "--output", "csv", "--check"],
                     capsys)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].endswith(",check")
    values = [int(line.split(",")[1]) for line in lines[1:]]
    assert values == partition_counts(4)[1:]
    assert all(line.endswith(",ok") for line in lines[1:])


def test_verify_multipliers_json(capsys):
    rc, out, _ = run(["verify", "multipliers", "--k-max", "20",
                      "--output", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["passed"] is True and doc["failures"] == []
    assert doc["suite"] == "multipliers" and doc["checked"] > 100


def test_verify_kloosterman_plain(capsys):
    rc, out, _ = run(["verify", "kloosterman", "--k-max", "12"], capsys)
    assert rc == 0
    assert "passed=yes" in out and "failures=0" in out


def test_verify_decomposition(capsys):
    rc, out, _ = run(["verify", "decomposition", "--to", "200",
                      "--output", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["passed"] is True and doc["checked"] == 201


def test_verify_logconcavity(capsys):
    rc, out, _ = run(["verify", "logconcavity", "--to", "600",
                      "--output", "json"], capsys)
    assert rc == 0
    assert json.loads(out)["passed"] is True

    rc, _, err = run(["verify", "logconcavity", "--to", "2"], capsys)
    assert rc == 1


def test_verify_mordell(capsys):
    rc, out, _ = run(["verify", "mordell", "--output", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["passed"] is True and doc["checked"] == 2


def test_bound_report_csv_and_json(capsys):
    rc, out, _ = run(["bound-report", "--family", "7", "--k-max", "7",
                      "--to", "3"], capsys)
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "family,k,n,nu,abs_value,ratio"
    assert len(lines) == 1 + 3 * 3  # k in {1,5,7}, n in 1..3

    rc, out, _ = run(["bound-report", "--family", "7", "--k-max", "7",
                      "--to", "3", "--output", "json"], capsys)
    assert rc == 0
    doc = json.loads(out)
    assert doc["max_ratio"] > 0 and len(doc["rows"]) == 9

    rc, _, err = run(["bound-report", "--family", "9", "--k-max", "5"],
                     capsys)
    assert rc == 1
    rc, _, err = run(["bound-report", "--family", "7", "--k-max", "5",
                      "--epsilon", "0"], capsys)
    assert rc == 1


def test_output_is_byte_identical_across_runs_and_threads(capsys):
    base = ["p2", "--range", "1..4", "--k-max", "20", "--check"]
    outs = []
    for extra in ([], [], ["--threads", "3"], ["--threads", "1"]):
        rc, out, _ = run(base + ["--output", "json"] + extra, capsys)
        assert rc == 0
        outs.append(out)
    assert len(set(outs)) == 1

    rc, csv_a, _ = run(base + ["--output", "csv"], capsys)
    rc, csv_b, _ = run(base + ["--output", "csv"], capsys)
    assert csv_a == csv_b


def test_bits_env_override(capsys, monkeypatch):
    monkeypatch.setenv("RADEX_BITS", "128")
    rc, out, _ = run(["p2", "--n", "2", "--k-max", "20", "--output", "json"],
                     capsys)
    assert rc == 0
    assert json.loads(out)["bits"] == 128

    monkeypatch.setenv("RADEX_BITS", "banana")
    rc, _, err = run(["p2", "--n", "2", "--k-max", "20"], capsys)
    assert rc == 1


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "radex.cli"],
                          capture_output=True, text=True)
    assert proc.returncode == 1  # no subcommand is a usage error

    proc = subprocess.run(["radex", "p2", "--n", "1", "--k-max", "12"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("p2(1) = 1  ")
