import pytest

import pdpsolve

QUICK = {"sweeps": 400, "restarts": 4}


def test_fixture_names():
    names = pdpsolve.fixture_names()
    assert "PD12" in names and "RW2_O24" in names


def test_solve_single_truck():
    inst = pdpsolve.generate_fixture("PD12", "a")
    plan = pdpsolve.solve(inst, backend="exact", exact_max_orders=11)
    assert len(plan["routes"]) == 1
    assert len(plan["routes"][0]["sequence"]) == 11
    assert plan["unserved"] == []
    assert pdpsolve.validate(inst, plan)["ok"]


def test_rentals_disabled():
    inst = pdpsolve.generate_fixture("PD17_MR")
    plan = pdpsolve.solve(inst, allow_rentals=False, **QUICK)
    assert len(plan["unserved"]) == 6


def test_repeatable():
    inst = pdpsolve.generate_fixture("RW1_O19")
    a = pdpsolve._core.solve(pdpsolve._text(inst), seed=5, **QUICK)
    b = pdpsolve._core.solve(pdpsolve._text(inst), seed=5, **QUICK)
    assert a == b


def test_validate_reports_window_violation():
    inst = pdpsolve.generate_fixture("PD17_TW")
    plan = pdpsolve.solve(inst)
    first = plan["routes"][0]["sequence"][0]
    for o in inst["orders"]:
        if o["id"] == first:
            o["ut"] = 0.5
    report = pdpsolve.validate(inst, plan)
    assert not report["ok"]
    assert report["violations"][0]["rule"] == "window-upper"


def test_render_and_model():
    inst = pdpsolve.generate_fixture("PD10_TW")
    assert "<svg" in pdpsolve.render_svg(inst)
    model = pdpsolve.route_model(inst, inst["fleet"][0]["id"])
    assert len(model["variables"]) == 81


def test_bad_input_raises_value_error():
    with pytest.raises(ValueError):
        pdpsolve.generate_fixture("PD99")
    with pytest.raises(ValueError):
        pdpsolve.solve({"format": "pdp-instance"})
    with pytest.raises(ValueError):
        pdpsolve.solve(pdpsolve.generate_fixture("PD12"), backend="quantum")
