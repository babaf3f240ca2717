"""Tests for the drep command line."""

import json

from click.testing import CliRunner

from drep.cli.main import cli
from drep.cli.reproduce import Check


def _invoke(*args):
    return CliRunner().invoke(cli, ["--no-cache", *args])


def test_homology_json_has_the_first_odd_class():
    """H_2 of R_1 for the dual numbers is one-dimensional in weight 3."""
    result = _invoke("homology", "builtin:dual-numbers", "-n", "1", "--max-weight", "3", "--format", "json")
    assert result.exit_code == 0, result.output
    cells = json.loads(result.output)["cells"]
    assert {"hdeg": 2, "weight": 3, "dim": 1, "lower_bound": False} in cells


def test_homology_table_output():
    """The table form has a header row and one line per degree."""
    result = _invoke("homology", "builtin:commuting-plane", "-n", "1", "-W", "3")
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[0].split()[0] == "h\\w"


def test_homology_is_cached(tmp_path):
    """A second run replays the stored table."""
    args = ["--cache-dir", str(tmp_path), "homology", "builtin:dual-numbers", "-n", "1", "-W", "3", "--format", "json"]
    first = CliRunner().invoke(cli, args)
    second = CliRunner().invoke(cli, args)
    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output
    assert list(tmp_path.rglob("*.json"))


def test_check_reports_d_squared():
    """check validates the builtin resolution and prints its census."""
    result = _invoke("check", "builtin:dual-numbers", "-W", "4", "--format", "json")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["violations"] == []
    assert payload["meta"]["census"] == {"1": 1, "2": 1, "3": 1, "4": 1}


def test_rep_prints_a_commutative_presentation():
    """rep writes R_n in the file format."""
    result = _invoke("rep", "builtin:commuting-plane", "-n", "1")
    assert result.exit_code == 0, result.output
    assert result.output.startswith("commutative")


def test_zeta_of_dual_numbers():
    """zeta expands the census to q^T."""
    result = _invoke("zeta", "builtin:dual-numbers", "-T", "9", "--format", "json")
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["coefficients"] == ["1", "1", "1", "2", "2", "3", "4", "5", "6", "8"]


def test_necklace_rows():
    """Phi_2(2) = 3 and M_2(2) = 1."""
    result = _invoke("necklace", "--alphabet", "2", "--max-len", "3", "--no-good-words", "--format", "json")
    assert result.exit_code == 0, result.output
    rows = json.loads(result.output)["rows"]
    assert rows[1] == {"r": 2, "phi": 3, "m": 1}


def test_identities_pass():
    """Verified identities exit 0."""
    result = _invoke("identities", "-w", "cid1", "-w", "trains:2", "-T", "15")
    assert result.exit_code == 0, result.output
    assert "[verified]" in result.output


def test_unknown_builtin_is_a_usage_error():
    """Unknown builtins exit 2 and list the available ones."""
    result = _invoke("homology", "builtin:no-such-algebra", "-n", "1", "--max-weight", "2")
    assert result.exit_code == 2
    assert "Error" in result.output
    assert "available: commuting-plane" in result.output


def test_twist_tensor_needs_a_commutative_target():
    """--tensor with the universal cochain is a usage error."""
    result = _invoke("twist", "--tensor", "--max-degree", "3", "-W", "3")
    assert result.exit_code == 2


def test_ce_invariant_dims():
    """gl_2 of the dual numbers has one invariant wedge in degree 3."""
    result = _invoke("ce", "--algebra", "dual-numbers", "-r", "2", "--max-wedge", "3", "-W", "3", "--format", "json")
    assert result.exit_code == 0, result.output
    dims = json.loads(result.output)["invariant_dims"]
    assert {"k": 3, "weight": 3, "dim": 1} in dims


def test_reproduce_scoreboard(monkeypatch):
    """The scoreboard lists each check and fails the run on any failure."""
    checks = [
        Check("identities", "passes", lambda jobs: (True, "fine")),
        Check("koszul", "fails", lambda jobs: (False, "broken")),
    ]
    monkeypatch.setattr("drep.cli.reproduce.CHECKS", checks)
    result = _invoke("reproduce", "--only", "identities")
    assert result.exit_code == 0, result.output
    assert "1/1 checks passed" in result.output

    result = _invoke("reproduce", "--format", "json")
    assert result.exit_code == 1
    payload = json.loads(result.output)
    assert [(r["key"], r["passed"]) for r in payload] == [("identities", True), ("koszul", False)]
    assert "seconds" not in payload[0]


def test_reproduce_records_exceptions(monkeypatch):
    """A check that raises is reported as a failure."""

    def explode(jobs):
        raise RuntimeError("boom")

    monkeypatch.setattr("drep.cli.reproduce.CHECKS", [Check("koszul", "raises", explode)])
    result = _invoke("reproduce")
    assert result.exit_code == 1
    assert "FAIL" in result.output
    assert "boom" in result.output


def test_malformed_presentation_file_is_a_usage_error(tmp_path):
    """A syntax error in a presentation file exits 2 with its line number."""
    path = tmp_path / "bad.drep"
    path.write_text("generator x hdeg 0 weight 1\nd x = x**\n")
    result = _invoke("check", str(path))
    assert result.exit_code == 2
    assert "line 2" in result.output


def test_missing_presentation_file_is_a_usage_error(tmp_path):
    """A path that does not exist exits 2."""
    result = _invoke("cyclic", str(tmp_path / "absent.drep"), "-W", "2")
    assert result.exit_code == 2
    assert "cannot read presentation" in result.output


def test_unknown_identity_lists_the_valid_forms():
    """--which rejects names outside the known identities."""
    result = _invoke("identities", "--which", "cid9", "--terms", "5")
    assert result.exit_code == 2
    assert "cid1, cid2:m, cidd:d, cidd1:d or trains:m" in result.output


def test_identities_json_is_a_single_object():
    """One requested series prints one JSON object."""
    result = _invoke("identities", "--which", "cid1", "--terms", "5", "--format", "json")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["verified"] is True
    assert payload["first_mismatch"] is None
    assert len(payload["coefficients"]) == 6


def test_zeta_trains_agree_with_the_census():
    """zeta --trains for the dual numbers matches the closed product."""
    result = _invoke("zeta", "builtin:dual-numbers", "--terms", "5", "--trains", "--format", "json")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["coefficients"] == ["1", "1", "1", "2", "2", "3"]
    assert payload["verified"] is True
    assert payload["first_mismatch"] is None


def test_zeta_trains_needs_a_truncated_algebra():
    """--trains on the commuting plane is a usage error."""
    result = _invoke("zeta", "builtin:commuting-plane", "--terms", "5", "--trains")
    assert result.exit_code == 2


def test_zeta_with_chi_prints_both_series():
    """Asking for chi(R_n) as well gives a list of two reports."""
    result = _invoke("zeta", "builtin:dual-numbers", "--terms", "4", "-n", "1", "--format", "json")
    assert result.exit_code == 0, result.output
    assert [r["name"] for r in json.loads(result.output)] == ["zeta", "chi_1"]


def test_necklace_long_flags():
    """--alphabet and --max-len select d and the largest length."""
    result = _invoke("necklace", "--alphabet", "2", "--max-len", "4", "--format", "json")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["d"] == 2
    assert [row["r"] for row in payload["rows"]] == [1, 2, 3, 4]
    assert payload["rows"][3]["phi"] == 6


def test_ce_with_algebra_and_max_wedge():
    """ce --algebra square-zero:1 --max-wedge 2 runs the CE complex."""
    result = _invoke(
        "ce", "--algebra", "square-zero:1", "-r", "2", "--max-wedge", "2", "--max-weight", "2", "--format", "json"
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["r"] == 2
    assert {"k": 1, "weight": 1, "dim": 1} in payload["invariant_dims"]


def test_twist_example_prints_status_and_tensor_homology():
    """twist --example with -n and -r checks tau_{r,n} and prints its twisted tensor product."""
    result = _invoke(
        "twist", "--example", "dual-numbers", "-n", "1", "-r", "1", "--max-degree", "3", "-W", "3", "--format", "json"
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["cochain"] == "tau_1,1(dual-numbers)"
    assert all(r["violations"] == [] for r in payload["reports"])
    assert payload["tensor"]["cells"]


def test_twist_unknown_example_is_a_usage_error():
    """Only the finite algebras have twisting cochains here."""
    result = _invoke("twist", "--example", "polynomial", "--max-degree", "2", "-W", "2")
    assert result.exit_code == 2
    assert "dual-numbers, square-zero:d or truncated:m" in result.output


def test_reproduce_paper_suite(monkeypatch):
    """--suite paper runs every check; full is the same set."""
    monkeypatch.setattr("drep.cli.reproduce.CHECKS", [Check("identities", "passes", lambda jobs: (True, "fine"))])
    for suite in ("paper", "full"):
        result = _invoke("reproduce", "--suite", suite)
        assert result.exit_code == 0, result.output
        assert "1/1 checks passed" in result.output
