import json
import math

import pytest

from varnorm.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def doc_of(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == 1
    return d


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and "0.1.0" in out


def test_norm_vp_identity(capsys):
    d = doc_of(capsys, "norm", "--kind", "vp", "--fn", "x", "--p", "1")
    assert d["value"] == 2.0 and d["meta"]["variation"] == 1.0


def test_norm_from_csv(capsys, tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("# four points\nx,y\n0,0\n1,1\n2,0\n3,1\n")
    d = doc_of(capsys, "norm", "--kind", "vp", "--csv", str(path), "--p", "2")
    assert abs(d["meta"]["variation"] - math.sqrt(3)) <= 1e-12


@pytest.mark.parametrize("kind,extra", [
    ("besov-fd", ["--s", "0.5"]), ("holder-zygmund", ["--s", "0.5"]), ("sobolev-fd", []),
    ("up", []), ("bvp1", []), ("vp-alpha", ["--alpha", "0.3"]), ("besov-lp", ["--s", "0.5"]), ("interp", []),
])
def test_norm_kinds_run(capsys, kind, extra):
    d = doc_of(capsys, "norm", "--kind", kind, "--fn", "sin(2*pi*x)", "--n", "256", *extra)
    assert math.isfinite(d["value"]) and d["value"] >= 0


def test_besov_of_zero(capsys):
    assert doc_of(capsys, "norm", "--kind", "besov-fd", "--fn", "0", "--s", "0.5")["value"] == 0.0


def test_exit_codes(capsys):
    assert run(capsys, "norm", "--kind", "vp", "--fn", "x +* 2")[0] == 2
    assert run(capsys, "norm", "--kind", "vp", "--fn", "log(x)")[0] == 3
    assert run(capsys, "norm", "--kind", "vp", "--fn", "x", "--p", "0.5")[0] == 2
    assert run(capsys, "norm", "--kind", "besov-fd", "--fn", "x")[0] == 2
    assert run(capsys, "verify", "--theorem", "example4")[0] == 2


def test_out_file_is_written(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "norm", "--kind", "up", "--fn", "x", "--out", str(out))
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["kind"] == "up"


def test_verify_sweep(capsys):
    d = doc_of(capsys, "verify", "--theorem", "nfold", "--n", "3", "--p", "2", "--seed", "7", "--trials", "6")
    s = d["summary"]
    assert s["trials"] == 6 and s["passed"] == 6 and s["all_hold"]
    assert all(r["params"]["prefactor"] == 2.0 for e in d["trials"] for r in e["reports"] if r["theorem"] == "nfold-i")
    digests = [e["reports"][0]["digest"] for e in d["trials"]]
    assert digests == sorted(digests)


def test_verify_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("VARNORM_SEED", "5")
    assert doc_of(capsys, "verify", "--theorem", "banach", "--trials", "2")["seed"] == 5


def test_verify_zero_trials(capsys):
    assert doc_of(capsys, "verify", "--theorem", "banach", "--trials", "0")["summary"]["all_hold"]


def test_verify_jobs_match_serial(capsys):
    a = doc_of(capsys, "verify", "--theorem", "basic", "--trials", "4")
    b = doc_of(capsys, "verify", "--theorem", "basic", "--trials", "4", "--jobs", "2")
    assert a["trials"] == b["trials"]


def test_verify_norm_property(capsys):
    d = doc_of(capsys, "verify", "--theorem", "norm-property", "--trials", "4")
    assert len(d["estimate"]["ratios"]) == 4


def test_verify_example4(capsys):
    d = doc_of(capsys, "verify", "--theorem", "example4", "--alpha", "2", "--beta", "0.5", "--levels", "5")
    assert d["summary"]["classification"] == "CONVERGENT"


def test_lp_table(capsys):
    code, out, _ = run(capsys, "lp", "--fn", "cos(2*pi*24*x)", "--n", "1024")
    assert code == 0
    rows = [r for r in out.splitlines() if r and not r.startswith("#")]
    assert rows[0] == "level,energy,energy_fraction,weighted_lp"
    table = {int(r.split(",")[0]) if r.split(",")[0].lstrip("-").isdigit() else r.split(",")[0]: r.split(",")
             for r in rows[1:]}
    assert float(table[4][2]) == pytest.approx(1.0, abs=1e-9)
    assert any(line.startswith("# partition_sum_deviation") for line in out.splitlines())


def test_lp_scaling_and_json(capsys):
    code, out, _ = run(capsys, "lp", "--scaling-check", "--m", "1", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert abs(d["scaling"]["ratio"] - 1) <= 0.05


def test_corpus_list_and_emit(capsys, tmp_path):
    d = doc_of(capsys, "corpus", "list")
    assert any(r["family"] == "trig" for r in d["families"])
    code, a, _ = run(capsys, "corpus", "emit", "--family", "psi-ab", "--alpha", "2", "--beta", "0.5", "--n", "64")
    code2, b, _ = run(capsys, "corpus", "emit", "--family", "psi-ab", "--alpha", "2", "--beta", "0.5", "--n", "64")
    assert code == code2 == 0 and a == b
    assert a.startswith("#")
    assert run(capsys, "corpus", "emit", "--family", "nope")[0] == 2
