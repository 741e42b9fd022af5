import json
from fractions import Fraction

import pytest

import conelab


def quartic():
    # x1^4 - r^4/5
    return conelab.project_to_M(conelab.form(3, 4, [((4, 0, 0), 1)]))


def test_form_roundtrip_and_evaluate():
    f = conelab.form(3, 2, [((2, 0, 0), "1"), ((0, 1, 1), "-1/2")])
    assert conelab.normalize_form(conelab.normalize_form(f)) == conelab.normalize_form(f)
    assert conelab.evaluate(f, [1.0, 2.0, 3.0]) == pytest.approx(1.0 - 3.0)


def test_inner_products():
    x1sq = conelab.form(3, 2, [((2, 0, 0), 1)])
    x2sq = conelab.form(3, 2, [((0, 2, 0), 1)])
    x1x2 = conelab.form(3, 2, [((1, 1, 0), 1)])
    assert Fraction(conelab.inner_product("integral", x1sq, x2sq)) == Fraction(1, 15)
    assert Fraction(conelab.inner_product("gradient", x1x2, x1x2)) == Fraction(1, 6)
    assert Fraction(conelab.inner_product("apolar", x1sq, x1sq)) == 2


def test_harmonic_and_spectrum():
    parts = conelab.harmonic_decompose(conelab.form(3, 2, [((2, 0, 0), 1)]))
    assert set(parts) == {0, 1}
    assert conelab.t_spectrum(3, 4)[-1] == (2, "8/63")
    assert conelab.metric_ratio(3, 2, 1) == "11/8"


def test_gauges_agree_on_quartic():
    f = quartic()
    assert conelab.gauge(f, "nonneg")["value"] == pytest.approx(0.2, abs=1e-8)
    assert conelab.gauge(f, "sos")["value"] == pytest.approx(0.2, abs=1e-6)
    lp = conelab.gauge(f, "linpowers")
    assert lp["lower"] <= lp["upper"]
    assert conelab.sos_feasible(conelab.r_power(3, 2))["status"] == "feasible"


def test_volume_and_bounds():
    est = conelab.normalized_volume("nonneg", 3, 4, 300, seed=5)
    lo, hi = conelab.bound_table(3, 4)["nonneg"]
    assert lo <= est["value"] <= hi
    assert est["dimension"] == 14


def test_run_report_is_deterministic():
    doc, code = conelab.run_config(command="bounds", n=3, degree=4, cone="nonneg", samples=0, seed=1, tol=1e-7,
                                   grid=2000, mode="exact", n_min=3, n_max=6, bootstrap=1000)
    assert code == 0
    again, _ = conelab.run(json.dumps(doc["config"]))
    assert json.loads(again) == doc


def test_errors_are_python_exceptions():
    with pytest.raises(conelab.FormatError):
        conelab.normalize_form("{")
    with pytest.raises(ValueError):
        conelab.gauge(conelab.form(3, 2, [((2, 0, 0), 1)]), "ellipse")
