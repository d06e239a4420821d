import json

import pytest

from residuelab import (
    ChartSpec,
    ProblemSignature,
    ScenarioError,
    blowup_example,
    parse_scenario,
    pv_divisor_vars,
)
from residuelab.extforms import d_monomial, wedge_all


MINIMAL = {
    "signature": {"n": 1, "p": 0, "q": 1, "N": 1},
    "charts": [{"name": "c", "alpha": [], "beta": [[1]], "jac": [0], "sign": 1}],
    "testforms": {},
}


def test_parse_minimal():
    sc = parse_scenario(json.dumps(MINIMAL))
    assert sc.signature.q == 1
    assert pv_divisor_vars(sc.charts[0]) == frozenset({1})


def test_parse_blowup_example_roundtrip():
    sc = blowup_example()
    doc = sc.to_json()
    sc2 = parse_scenario(doc)
    assert [c.name for c in sc2.charts] == ["z", "zeta"]
    assert sc2.to_obj() == sc.to_obj()
    assert sc2.to_json() == doc


def test_parse_negative_exponent_path():
    bad = json.loads(json.dumps(MINIMAL))
    bad["charts"][0]["beta"] = [[-1]]
    with pytest.raises(ScenarioError) as err:
        parse_scenario(bad)
    assert err.value.path == "charts[0].beta[0][0]"


def test_parse_duplicate_chart_name():
    bad = json.loads(json.dumps(MINIMAL))
    bad["charts"].append(dict(bad["charts"][0]))
    with pytest.raises(ScenarioError) as err:
        parse_scenario(bad)
    assert "duplicate" in str(err.value)


def test_parse_dimension_mismatch():
    bad = json.loads(json.dumps(MINIMAL))
    bad["charts"][0]["beta"] = [[1, 2]]
    with pytest.raises(ScenarioError) as err:
        parse_scenario(bad)
    assert err.value.path.startswith("charts[0].beta")


def test_parse_dbar_slot_count():
    doc = blowup_example().to_obj()
    doc["testforms"]["z"]["terms"][0]["dbar_slots"] = [1, 2]
    with pytest.raises(ScenarioError) as err:
        parse_scenario(doc)
    assert "dbar_slots" in err.value.path


def test_zero_alpha_row_needs_unit_flag():
    bad = {
        "signature": {"n": 2, "p": 1, "q": 0, "N": 1},
        "charts": [{"name": "c", "alpha": [[0, 0]], "beta": [], "jac": [0, 0], "sign": 1}],
    }
    with pytest.raises(ScenarioError) as err:
        parse_scenario(bad)
    assert "unit flag" in str(err.value)
    bad["charts"][0]["unit_flags"] = [True]
    parse_scenario(bad)  # accepted at the data level


def test_signature_invariants():
    with pytest.raises(ScenarioError):
        ProblemSignature(n=0, p=0, q=1)
    with pytest.raises(ScenarioError):
        ProblemSignature(n=2, p=0, q=0)
    with pytest.raises(ScenarioError):
        ProblemSignature(n=1, p=2, q=0)
    with pytest.raises(ScenarioError):
        ProblemSignature(n=1, p=1, q=0, N=0)


def test_pv_divisor_vars():
    c = ChartSpec("c", ((1, 0, 0),), ((1, 0, 0),), (0, 0, 0), 1)
    assert pv_divisor_vars(c) == frozenset({1})
    c2 = ChartSpec("c", ((1, 0, 0),), (), (0, 0, 0), 1)
    assert pv_divisor_vars(c2) == frozenset()
    c3 = ChartSpec("c", ((1, 0, 0),), ((0, 1, 1), (0, 0, 2)), (0, 0, 0), 1)
    assert pv_divisor_vars(c3) == frozenset({2, 3})


def test_blowup_example_rows():
    sc = blowup_example()
    z = sc.chart("z")
    zeta = sc.chart("zeta")
    assert z.alpha == ((0, 1, 0), (0, 1, 1))
    assert zeta.alpha == ((0, 1, 1), (0, 1, 0))
    assert z.beta == zeta.beta == ((1, 0, 0),)
    assert pv_divisor_vars(z) == pv_divisor_vars(zeta) == frozenset({1})


def test_blowup_substitutions_reproduce_chart_data():
    sc = blowup_example()
    subst = sc.metadata["substitutions"]
    base_alpha = sc.metadata["base_alpha"]
    base_beta = sc.metadata["base_beta"]
    for name in ("z", "zeta"):
        chart = sc.chart(name)
        rows = subst[name]

        def compose(v):
            out = [0, 0, 0]
            for i, k in enumerate(v):
                for j, s in enumerate(rows[i]):
                    out[j] += k * s
            return tuple(out)

        assert tuple(compose(r) for r in base_alpha) == chart.alpha
        assert tuple(compose(r) for r in base_beta) == chart.beta
        # pullback of the coordinate volume form fixes the Jacobian monomial and sign
        vol = wedge_all([d_monomial(3, tuple(r)) for r in rows])
        ((idx, coeff),) = list(vol.terms.items())
        assert idx == (1, 2, 3)
        ((exps, c),) = list(coeff.terms.items())
        assert exps == chart.jac
        assert c == chart.sign


def test_without_chart():
    sc = blowup_example()
    only_z = sc.without_chart("zeta")
    assert [c.name for c in only_z.charts] == ["z"]
    assert set(only_z.testforms) == {"z"}
    with pytest.raises(KeyError):
        sc.without_chart("nope")
