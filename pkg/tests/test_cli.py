import json
from fractions import Fraction

import pytest

from residuelab import blowup_example, diagonal_scenario
from residuelab.cli import main
from residuelab.extforms import PolyForm, form_to_obj
from residuelab.poly import Poly


@pytest.fixture()
def blowup_file(tmp_path):
    path = tmp_path / "blowup.json"
    path.write_text(blowup_example().to_json())
    return str(path)


@pytest.fixture()
def diagonal_file(tmp_path):
    path = tmp_path / "diag.json"
    path.write_text(diagonal_scenario([1, 1], p=1).to_json())
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_poles_blowup(capsys, blowup_file):
    code, out = run(capsys, "poles", blowup_file, "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["ok"] is True
    assert obj["results"]["chart:z"]["forms"] == [[1, 1, 0]]
    assert obj["results"]["global"]["forms"] == []


def test_poles_shape_violation_exit_1(capsys, tmp_path):
    # duplicated factor: not a complete intersection, the chart sum keeps a
    # mixed-block pole and the certificate shape check must fail
    doc = {
        "signature": {"n": 1, "p": 1, "q": 1, "N": 1},
        "charts": [{"name": "c", "alpha": [[1]], "beta": [[1]], "jac": [0], "sign": 1}],
        "testforms": {
            "c": {
                "terms": [
                    {
                        "coeff": {"re": [1, 1], "im": [0, 1]},
                        "factors": [
                            {"a": 1, "b": 0, "rho": {"knots": [[0, 1], [1, 1]], "pieces": [[[1, 1]]]}}
                        ],
                        "dbar_slots": [],
                    }
                ]
            }
        },
    }
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "poles", str(path), "--format", "json")
    assert code == 1
    obj = json.loads(out)
    verdicts = {v["name"]: v["pass"] for v in obj["verdicts"]}
    assert verdicts["shape:global"] is False


def test_parse_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["poles", str(bad)]) == 2
    assert main(["poles", str(tmp_path / "missing.json")]) == 2


def test_eval_command(capsys, blowup_file):
    code, out = run(capsys, "eval", blowup_file, "--chart", "z", "--lam", "3,4,5", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["verdicts"][0]["name"] == "exact-vs-quadrature"
    assert obj["verdicts"][0]["pass"] is True


def test_global_command(capsys, blowup_file):
    code, out = run(capsys, "global", blowup_file, "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["results"]["pole_hyperplanes"] == []
    assert obj["results"]["value_at_origin"]["pretty"] == "(-1)*(2*pi*i)^3"


def test_residue_command(capsys, blowup_file):
    code, out = run(
        capsys, "residue", blowup_file, "--form", "1,1,0", "--point", "1/3,-1/3,1/5",
        "--format", "json",
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["results"]["residue_sum"]["re"] == [0, 1]


def test_tube_command(capsys, diagonal_file):
    code, out = run(capsys, "tube", diagonal_file, "--format", "json")
    assert code == 0
    obj = json.loads(out)
    names = {v["name"] for v in obj["verdicts"]}
    assert "admissible-ratio-condition" in names
    assert "limit-matches-origin-value" in names


def test_mellin_check_command(capsys, diagonal_file):
    code, out = run(capsys, "mellin-check", diagonal_file, "--lam", "3,3", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert all(v["pass"] for v in obj["verdicts"])


def test_divlemma_pass_and_fail(capsys, tmp_path):
    psi = PolyForm.basis(3, (2,)) + PolyForm.basis(3, (3,), Poly.variable(3, 0, Fraction(1)))
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"n": 3, "K": [1], "psi": form_to_obj(psi), "alphas": [[0, 3, 0]]}))
    assert main(["divlemma", str(good)]) == 0
    capsys.readouterr()

    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "n": 3,
                "K": [1],
                "psi": form_to_obj(PolyForm.basis(3, (2,))),
                "omega": form_to_obj(PolyForm.zero(3, 1)),
            }
        )
    )
    code = main(["divlemma", str(bad), "--format", "json"])
    out = capsys.readouterr().out
    assert code == 1
    obj = json.loads(out)
    failing = [v["name"] for v in obj["verdicts"] if not v["pass"]]
    assert failing == ["nonsingular-log-wedge:x1"]


def test_deduce_command(capsys):
    code, out = run(capsys, "deduce", "2", "1", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["results"]["trace"]["analytic"] is True


def test_example3_command(capsys):
    code, out = run(capsys, "example3", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["ok"] is True
    names = [v["name"] for v in obj["verdicts"]]
    assert "cross-chart-residues-cancel" in names
    assert "global-analytic-at-origin" in names
    assert "value-matches-parts-reference" in names


def test_example3_dropped_chart_detects_pole(capsys):
    code, out = run(capsys, "example3", "--drop-chart", "zeta", "--format", "json")
    assert code == 1
    obj = json.loads(out)
    verdicts = {v["name"]: v for v in obj["verdicts"]}
    assert verdicts["global-analytic-at-origin"]["pass"] is False
    assert verdicts["global-analytic-at-origin"]["value"] == ["L1+L2"]


def test_json_reports_reproducible(capsys, blowup_file):
    _, first = run(capsys, "poles", blowup_file, "--format", "json")
    _, second = run(capsys, "poles", blowup_file, "--format", "json")
    assert first == second
    _, third = run(capsys, "eval", blowup_file, "--chart", "z", "--lam", "3,4,5", "--format", "json")
    _, fourth = run(capsys, "eval", blowup_file, "--chart", "z", "--lam", "3,4,5", "--format", "json")
    assert third == fourth


def test_seeded_example3(capsys):
    code, _ = run(capsys, "example3", "--seed", "7")
    assert code == 0
