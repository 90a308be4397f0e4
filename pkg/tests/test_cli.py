from __future__ import annotations

import json

import pytest

from gibbsfactor.cli import main
from gibbsfactor.models import dump_document, expand_example


@pytest.fixture(scope="module")
def model_paths(tmp_path_factory):
    root = tmp_path_factory.mktemp("models")
    paths = {}
    for example_id in ("adhoc5", "fullshift4", "nongibbs6", "converse_false"):
        p = root / f"{example_id}.json"
        dump_document(expand_example(example_id), str(p))
        paths[example_id] = str(p)
    return paths


def test_check_passing_model(model_paths, capsys):
    code = main(["check", model_paths["adhoc5"]])
    out = capsys.readouterr().out
    assert code == 0
    assert "fiber rows (H1): pass" in out
    assert "cycle positivity (H2): pass (orbit level only)" in out
    assert "image subshift: Markov (certified by fiber rows)" in out
    assert "certification: window 5" in out


def test_check_pointwise_model(model_paths, capsys):
    code = main(["check", model_paths["fullshift4"]])
    out = capsys.readouterr().out
    assert code == 0
    assert "cycle positivity (H2): pass (pointwise)" in out
    assert "certification: window 3" in out


def test_check_failing_model(model_paths, capsys):
    code = main(["check", model_paths["converse_false"]])
    out = capsys.readouterr().out
    assert code == 1
    assert "fiber rows (H1): FAIL" in out
    assert "block 0->1: source row c is all zero" in out
    assert "block 1->0: source row d is all zero" in out
    assert "no missing word up to depth 12 (undecided)" in out
    assert "certification: unavailable" in out


def test_check_nongibbs_model(model_paths, capsys):
    code = main(["check", model_paths["nongibbs6"]])
    out = capsys.readouterr().out
    assert code == 1
    assert "cycle positivity (H2): FAIL" in out
    assert "certification: unavailable" in out


def test_potential_certified(model_paths, capsys):
    code = main(["potential", model_paths["adhoc5"], "--point", "/ab"])
    out = capsys.readouterr().out
    assert code == 0
    assert "point: (ab)*" in out
    assert "mode: certified (certified)" in out
    assert "value:" in out


def test_potential_adaptive_flag(model_paths, capsys):
    code = main(["potential", model_paths["adhoc5"], "--point", "c/ba", "--adaptive"])
    out = capsys.readouterr().out
    assert code == 0
    assert "point: c(ba)*" in out
    assert "mode: adaptive (uncertified)" in out


def test_potential_divergence_exit_code(model_paths, capsys):
    code = main(["potential", model_paths["nongibbs6"], "--point", "/0"])
    out = capsys.readouterr().out
    assert code == 1
    assert "diverged after" in out
    assert "subsequence clusters:" in out


def test_potential_refusal_exit_code(model_paths, capsys):
    code = main(["potential", model_paths["converse_false"], "--point", "/01"])
    out = capsys.readouterr().out
    assert code == 1
    assert "refused:" in out
    assert "offending step: positions 0..1" in out


def test_potential_rejects_bad_point(model_paths, capsys):
    code = main(["potential", model_paths["adhoc5"], "--point", "/ac"])
    capsys.readouterr()
    assert code == 2


def test_periodic_lists_orbits(model_paths, capsys):
    code = main(["periodic", model_paths["adhoc5"], "--max-period", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "(ab)*" in out
    assert "(acb)*" in out
    assert "eigendata certified" in out
    # the rotation with a degenerate one-period product takes the fallback
    assert "iterative uncertified" in out


def test_holder_table(model_paths, capsys, tmp_path):
    csv = tmp_path / "var.csv"
    code = main(["holder", model_paths["adhoc5"], "--n-max", "5", "--csv", str(csv)])
    out = capsys.readouterr().out
    assert code == 0
    assert "bound satisfied: yes" in out
    assert "n,var_n,bound_n" in out
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == "n,var_n,bound_n"
    assert len(lines) == 7


def test_holder_needs_constants(model_paths, capsys):
    code = main(["holder", model_paths["converse_false"]])
    out = capsys.readouterr().out
    assert code == 1
    assert "needs certification constants" in out


def test_gibbs_sweep_table(model_paths, capsys, tmp_path):
    csv = tmp_path / "sweep.csv"
    code = main(
        [
            "gibbs",
            model_paths["adhoc5"],
            "--n-max",
            "4",
            "--invariance",
            "--csv",
            str(csv),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "n,cylinder_count,K_emp,K_cert,slack,verdict" in out
    assert "pass" in out
    assert "invariance residuals" in out
    header = csv.read_text().split("\n")[0]
    assert header == "n,cylinder_count,K_emp,K_cert,slack,verdict"


def test_gibbs_sweep_uncertified_path(model_paths, capsys):
    code = main(["gibbs", model_paths["nongibbs6"], "--n-max", "3"])
    out = capsys.readouterr().out
    assert code == 0  # uncertified is not a bound failure
    assert "constants unavailable" in out
    assert "uncertified" in out
    assert "stand-in" in out


def test_obstruction_output(model_paths, capsys):
    code = main(["obstruction", model_paths["fullshift4"]])
    out = capsys.readouterr().out
    assert code == 0
    assert "verdict: finite range excluded for the induced potential" in out


def test_obstruction_wrong_shape_is_usage_error(model_paths, capsys):
    code = main(["obstruction", model_paths["adhoc5"]])
    capsys.readouterr()
    assert code == 2


def test_example_stdout_roundtrip(capsys):
    code = main(["example", "fullshift4"])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc == expand_example("fullshift4")


def test_example_gamma_out(tmp_path, capsys):
    path = tmp_path / "m.json"
    code = main(["example", "nongibbs6", "--gamma", "0.27", "--out", str(path)])
    capsys.readouterr()
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["options"]["gamma"] == 0.27


def test_example_bad_gamma_exit_code(capsys):
    code = main(["example", "nongibbs6", "--gamma", "0.5"])
    err = capsys.readouterr().err
    assert code == 2
    assert "gamma" in err


def test_missing_model_file_exit_code(capsys):
    code = main(["check", "/nonexistent/model.json"])
    err = capsys.readouterr().err
    assert code == 2
    assert "error:" in err


def test_cli_output_is_deterministic(model_paths, capsys):
    main(["check", model_paths["adhoc5"]])
    first = capsys.readouterr().out
    main(["check", model_paths["adhoc5"]])
    second = capsys.readouterr().out
    assert first == second
