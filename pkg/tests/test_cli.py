import json

from beauville.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_orbits_text(capsys):
    code, out, _ = run(capsys, "orbits", "--group", "C5^2", "--type", "5,5,5")
    assert code == 0
    assert "1 orbit class(es)" in out


def test_orbits_json_schema(capsys):
    code, out, _ = run(capsys, "orbits", "--group", "C5", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 1
    cls = payload["classes"][0]
    assert set(cls) == {"group", "type", "genus", "orbit_size", "representative"}
    assert cls["genus"] == 2


def test_orbits_empty_group(capsys):
    code, out, _ = run(capsys, "orbits", "--group", "C2")
    assert code == 0
    assert "0 orbit class(es)" in out


def test_classify_json_deterministic(capsys, tmp_path):
    args = ("classify", "--group", "C5^2", "--n", "3", "--chi", "-1", "--format", "json")
    code, out1, _ = run(capsys, *args)
    assert code == 0
    code, out2, _ = run(capsys, *args)
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["total_count"] == 8


def test_classify_single_orbit_schema(capsys):
    code, out, _ = run(
        capsys,
        "classify", "--group", "C5^2", "--n", "2", "--kernels", "trivial",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    # one kernel orbit flattens to the plain report schema
    for key in ("group_spec", "n", "kernel_tuple", "classes", "total_count", "oracle_checked"):
        assert key in payload
    cls = payload["classes"][0]
    for key in ("triples", "type_tuple", "genera", "chi", "kodaira", "canonical_key"):
        assert key in cls


def test_classify_output_file(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run(
        capsys,
        "classify", "--group", "C5", "--n", "2", "--format", "json",
        "--output", str(out_path),
    )
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text())["total_count"] == 0


def test_beauville_dim(capsys):
    code, out, _ = run(capsys, "beauville-dim", "--group", "C5^2")
    assert code == 0
    assert "d(C5^2) = 2" in out


def test_beauville_dim_indeterminate(capsys):
    code, out, _ = run(capsys, "beauville-dim", "--group", "C3^3", "--nmax", "2")
    assert code == 0
    assert "not ruled out" in out


def test_candidates_csv(capsys):
    code, out, _ = run(capsys, "candidates", "--chi", "-1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "N,g1,g2,g3,T1,T2,T3"
    assert all(len(line.split(",")) == 7 for line in lines[1:])


def test_classify_c3cubed_empty(capsys):
    code, out, _ = run(capsys, "classify", "--group", "C3^3", "--n", "3", "--format", "json")
    assert code == 0
    assert json.loads(out)["total_count"] == 0


def test_classify_type_count_mismatch(capsys):
    code, _, err = run(
        capsys, "classify", "--group", "C5^2", "--n", "3", "--type", "5,5,5"
    )
    assert code == 2
    assert "one --type per factor" in err


def test_bad_spec_is_config_error(capsys):
    code, _, err = run(capsys, "orbits", "--group", "Nope(3)")
    assert code == 2
    assert "error" in err


def test_over_bound_is_resource_error(capsys):
    code, _, err = run(capsys, "orbits", "--group", "C2000^2")
    assert code == 2


def test_verify_paper_single_check_json(capsys):
    code, out, _ = run(
        capsys, "verify-paper", "--checks", "invariants", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload[0]["name"] == "invariants"
    assert payload[0]["status"] == "pass"


def test_verify_paper_reports_table1_defect(capsys):
    code, out, _ = run(capsys, "verify-paper", "--checks", "table1-rows")
    assert code == 1
    assert "NOT FREE as printed" in out
