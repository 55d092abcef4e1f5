import json

from poissonenv.cli import main
from poissonenv.quantize import poisson_window_algebra


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lyndon_listing(capsys):
    code, out, _ = run_cli(capsys, "lyndon", "-n", "2", "-d", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("1 ")
    assert any(line.startswith("112") for line in lines)
    assert len(lines) == 5


def test_star_command(capsys):
    code, out, _ = run_cli(capsys, "star", "-n", "2", "-d", "1", "x1", "x2")
    assert code == 0
    assert out.strip() == "x1*x2 + 1/2*(12)"


def test_bracket_command(capsys):
    code, out, _ = run_cli(capsys, "bracket", "-n", "2", "x1", "x2")
    assert code == 0
    assert out.strip() == "(12)"


def test_expand_command(capsys):
    code, out, _ = run_cli(capsys, "expand", "-n", "2", "(12)")
    assert code == 0
    assert out.strip() == "x1*x2 - x2*x1"


def test_e_and_einv_commands(capsys):
    code, out, _ = run_cli(capsys, "e", "-n", "2", "x1*x2")
    assert code == 0
    assert out.strip() == "1/2*x1*x2 + 1/2*x2*x1"
    code, out, _ = run_cli(capsys, "einv", "-n", "2", "x1*x2")
    assert code == 0
    assert out.strip() == "x1*x2 + 1/2*(12)"


def test_bp_command(capsys):
    code, out, _ = run_cli(capsys, "bp", "-n", "2", "-p", "1", "x1*x1", "x2*x2")
    assert code == 0
    assert out.strip() == "2*x1*x2*(12)"


def test_gap_witness_text(capsys):
    code, out, _ = run_cli(capsys, "gap-witness")
    assert code == 0
    assert out.startswith("envelope side: 0; naive image: ")
    assert "[nonzero]" in out


def test_ncembed_json(capsys):
    code, out, _ = run_cli(capsys, "ncembed", "-n", "2", "-d", "1", "12", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "poisson"
    assert {"coeff": "1/2", "factors": [{"word": [1, 2]}]} in data["terms"]


def test_parse_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "bracket", "-n", "2", "{x1,", "x2")
    assert code == 2
    assert "parse error" in err


def test_domain_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "ncembed", "-n", "2", "-d", "1", "13")
    assert code == 1
    assert "error" in err


def test_envelope_command(tmp_path, capsys):
    path = tmp_path / "pres.txt"
    path.write_text("gens 2\nx1*x1\n")
    code, out, _ = run_cli(capsys, "envelope", str(path), "-d", "1", "-N", "3")
    assert code == 0
    assert "star_degree 0" in out and "exact" in out


def test_envelope_bad_file(tmp_path, capsys):
    path = tmp_path / "pres.txt"
    path.write_text("nonsense\n")
    code, _, err = run_cli(capsys, "envelope", str(path), "-d", "1", "-N", "2")
    assert code == 1


def test_filtration_command(tmp_path, capsys):
    path = tmp_path / "alg.json"
    with open(path, "w") as fp:
        poisson_window_algebra(2, 1, 3).dump(fp)
    code, out, _ = run_cli(capsys, "filtration", str(path))
    assert code == 0
    assert "commutator filtration ranks:" in out
    assert "nil-Poisson filtration ranks:" in out


def test_graded_command(capsys):
    code, out, _ = run_cli(capsys, "graded", "-n", "2", "-d", "1", "-N", "1")
    assert code == 0
    assert "n=1: graded_rank=3 envelope_rank=3 ok" in out


def test_verify_single_suite(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "07-gap-counterexample")
    assert code == 0
    assert out.startswith("PASS 07-gap-counterexample")


def test_verify_unknown_suite(capsys):
    code, _, err = run_cli(capsys, "verify", "--suite", "nonexistent")
    assert code == 1


def test_verify_failure_exit_code(monkeypatch, capsys):
    import poissonenv.acceptance as acc

    monkeypatch.setattr(
        acc,
        "ALL_CHECKS",
        [("00-forced", lambda: acc.CheckResult("00-forced", False, "forced"))],
    )
    code, out, _ = run_cli(capsys, "verify")
    assert code == 3
    assert out.startswith("FAIL 00-forced")


def test_verify_json_output(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "07-gap", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["failed"] == 0
    assert data["results"][0]["name"] == "07-gap-counterexample"
