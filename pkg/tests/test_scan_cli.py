import json

import pytest

from procs import kill_then_resume, run_cli, scan_to_file
from waring.cli import main
from waring.errors import WaringError
from waring.gamma import gamma
from waring.scan import ScanJob, parse_filter, run_scan


def call(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


# --- simple commands ------------------------------------------------------------------------


def test_gamma_command(capsys):
    rc, out, _ = call(capsys, "gamma", "--k", "3", "--q", "7")
    assert rc == 0
    assert out.strip() == '{"k":3,"q":7,"coverable":true,"gamma":3}'


def test_uncoverable_command(capsys):
    rc, out, _ = call(capsys, "uncoverable", "--k", "12")
    assert rc == 0 and json.loads(out) == {"k": 12, "fields": [4, 9, 25, 121]}


def test_gamma_max_command(capsys):
    rc, out, _ = call(capsys, "gamma-max", "--k", "7")
    assert json.loads(out)["gamma_max"] == 4


def test_spectral_command_with_brute(capsys):
    rc, out, _ = call(capsys, "spectral", "--k", "3", "--q", "13", "--brute")
    data = json.loads(out)
    assert rc == 0 and data["bruteforce_max_mismatch"] < 1e-6


def test_sarkozy_command(capsys):
    rc, out, _ = call(capsys, "sarkozy", "--k", "3", "--q", "1681")
    data = json.loads(out)
    assert data["min_size"] == 124 and abs(data["threshold"] - 123.0366) < 1e-3


def test_sarkozy_pair_search(capsys):
    rc, out, _ = call(capsys, "sarkozy", "--k", "2", "--q", "13", "--set", "0,1,2,3,4,5,6,7")
    pair = json.loads(out)["pair"]
    assert pair is not None


def test_lemmas_command(capsys):
    rc, out, _ = call(capsys, "lemmas")
    assert rc == 0 and json.loads(out)["ok"] is True


def test_decompose_field_command(capsys):
    rc, out, _ = call(capsys, "decompose-field", "--k", "3", "--q", "7", "--target", "3")
    data = json.loads(out)
    assert rc == 0 and len(data["witnesses"]) == 3


def test_decompose_matrix_command(capsys):
    rc, out, _ = call(capsys, "decompose-matrix", "--k", "3", "--q", "4", "--matrix", "2,0;0,2")
    assert rc == 0 and len(json.loads(out)["witnesses"]) == 2


def test_decompose_matrix_zalpha(capsys):
    rc, out, _ = call(capsys, "decompose-matrix", "--k", "3", "--q", "5", "--matrix", "1,2;3,4", "--zalpha")
    assert rc == 0


def test_decompose_ring_command(capsys):
    rc, out, _ = call(capsys, "decompose-ring", "--k", "3", "--ring", "zn:55", "--target", "17")
    assert rc == 0 and json.loads(out)["witnesses"] == [8]


def test_verify_suite_passes(capsys):
    rc, out, _ = call(capsys, "verify", "--suite", "table1", "--kmax", "8")
    data = json.loads(out)
    assert rc == 0 and data["pass"] and len(data["results"]) == 5


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "g.json"
    rc, out, _ = call(capsys, "gamma", "--k", "4", "--q", "41", "--out", str(target))
    assert rc == 0 and out == ""
    assert json.loads(target.read_text())["gamma"] == 2


# --- exit codes ---------------------------------------------------------------------------------


def test_usage_errors_exit_1(capsys):
    rc, _, err = call(capsys, "gamma", "--k", "3")
    assert rc == 1 and "--q" in err
    rc, _, err = call(capsys, "nonsense")
    assert rc == 1
    rc, _, _ = call(capsys)
    assert rc == 1
    rc, _, err = call(capsys, "table", "--k", "3", "--bound", "lots")
    assert rc == 1 and "--bound" in err


def test_domain_errors_exit_2(capsys):
    rc, _, err = call(capsys, "decompose-ring", "--k", "5", "--ring", "zn:405", "--target", "2")
    assert rc == 2 and err.startswith("GcdViolation")
    rc, _, err = call(capsys, "gamma", "--k", "3", "--q", "6")
    assert rc == 2
    rc, _, err = call(capsys, "decompose-matrix", "--k", "3", "--q", "3", "--matrix", "1,0;0,1")
    assert rc == 2 and err.startswith("CharDividesK")


def test_console_entry_point_subprocess():
    proc = run_cli("gamma", "--k", "3", "--q", "7")
    assert json.loads(proc.stdout)["gamma"] == 3
    assert run_cli("gamma", check=False).returncode == 1


# --- scans --------------------------------------------------------------------------------------


def test_table_csv_to_stdout(capsys):
    rc, out, _ = call(capsys, "table", "--k", "3", "--qmax", "30", "--csv")
    lines = out.splitlines()
    assert lines[0] == "k,q,coverable,gamma"
    assert "3,4,false," in lines and "3,7,true,3" in lines


def test_table_jsonl_rows_match_engine(capsys):
    rc, out, _ = call(capsys, "table", "--k", "5", "--qmax", "200")
    for line in out.splitlines():
        row = json.loads(line)
        res = gamma(row["k"], row["q"])
        assert row["coverable"] == res.coverable and row.get("gamma") == res.gamma


def test_filter_parsing():
    assert parse_filter("gamma=3..6") == (3, 6)
    assert parse_filter("gamma=4") == (4, 4)
    assert parse_filter("uncoverable") == ("uncoverable",)
    with pytest.raises(ValueError):
        parse_filter("delta=1")


def test_uncoverable_filter_scan(tmp_path):
    out = tmp_path / "u.csv"
    run_scan(ScanJob(6, 6, gamma_filter=("uncoverable",), out=str(out)))
    qs = [int(line.split(",")[1]) for line in out.read_text().splitlines()[1:]]
    assert qs == [4, 25]


def test_scan_classifies_k6_like_the_reference(tmp_path):
    out = tmp_path / "c.csv"
    run_scan(ScanJob(6, 6, gamma_filter=(6, 6), out=str(out)))
    qs = [int(line.split(",")[1]) for line in out.read_text().splitlines()[1:]]
    assert qs == [7, 13]


@pytest.mark.parametrize("jobs", [4, 8])
def test_jobs_do_not_change_bytes(tmp_path, jobs):
    args = ["--k", "4", "--kmax", "6", "--csv"]
    base = scan_to_file(tmp_path / "one.csv", args, jobs=1)
    assert scan_to_file(tmp_path / "many.csv", args, jobs=jobs) == base


def test_kill_and_resume_is_byte_identical(tmp_path):
    args = ["--k", "4", "--kmax", "8", "--csv"]
    fresh = scan_to_file(tmp_path / "fresh.csv", args)
    resumed, interrupted = kill_then_resume(tmp_path / "r.csv", tmp_path / "r.ckpt", args)
    assert interrupted
    assert resumed == fresh


def test_resume_with_finished_checkpoint_adds_nothing(tmp_path):
    out, ck = tmp_path / "o.csv", tmp_path / "o.ckpt"
    job = ScanJob(3, 4, out=str(out), resume=str(ck))
    first = run_scan(job)
    before = out.read_bytes()
    assert first > 0 and run_scan(job) == 0
    assert out.read_bytes() == before


def test_resume_rejects_tampered_output(tmp_path):
    out, ck = tmp_path / "o.csv", tmp_path / "o.ckpt"
    job = ScanJob(3, 4, out=str(out), resume=str(ck))
    run_scan(job)
    data = bytearray(out.read_bytes())
    data[20] ^= 1
    out.write_bytes(bytes(data))
    with pytest.raises(WaringError):
        run_scan(job)


def test_resume_rejects_other_job(tmp_path):
    out, ck = tmp_path / "o.csv", tmp_path / "o.ckpt"
    run_scan(ScanJob(3, 4, out=str(out), resume=str(ck)))
    with pytest.raises(WaringError):
        run_scan(ScanJob(3, 5, out=str(out), resume=str(ck)))
