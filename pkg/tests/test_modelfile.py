import json
from fractions import Fraction as F

import pytest

from credal.fixtures import bundled_model_names, bundled_model_text, load_bundled_model
from credal.modelfile import ModelError, dumps_model, load_model, loads_model, models_equal


def doc(**extra):
    base = {"worlds": ["x", "y"], "measures": {"mu": {"x": "1/2", "y": "1/2"}}}
    base.update(extra)
    return base


class TestErrors:
    def test_empty_worlds(self):
        with pytest.raises(ModelError, match="worlds"):
            loads_model('{"worlds": []}')

    def test_measure_not_summing_to_one_is_located(self):
        text = '{\n  "worlds": ["x", "y"],\n  "measures": {\n    "mu": {"x": 0.49, "y": 0.5}\n  }\n}'
        with pytest.raises(ModelError) as info:
            loads_model(text, "m.json")
        err = info.value
        assert "mu" in str(err) and err.line == 4 and err.source == "m.json"
        assert err.as_dict()["path"] == "measures/mu"

    def test_measure_missing_world(self):
        with pytest.raises(ModelError, match="y"):
            loads_model(json.dumps(doc(measures={"mu": {"x": 1}})))

    def test_unknown_references(self):
        with pytest.raises(ModelError, match="nu"):
            loads_model(json.dumps(doc(credal_sets={"P": {"generators": ["nu"], "hull": True}})))
        with pytest.raises(ModelError, match="z"):
            loads_model(json.dumps(doc(events={"e": ["z"]})))

    def test_unknown_section(self):
        with pytest.raises(ModelError, match="bogus"):
            loads_model(json.dumps(doc(bogus={})))

    def test_invalid_json(self):
        with pytest.raises(ModelError, match="invalid JSON") as info:
            loads_model('{"worlds": [\n')
        assert info.value.line is not None

    def test_infeasible_constraints(self):
        cs = {"P": {"constraints": [{"event": ["x"], "relation": ">=", "rhs": ".8"},
                                    {"event": ["y"], "relation": ">=", "rhs": ".8"}]}}
        with pytest.raises(ModelError):
            loads_model(json.dumps(doc(credal_sets=cs)))

    def test_act_without_utility(self):
        d = doc(credal_sets={"P": {"generators": ["mu"], "hull": False}},
                acts={"a": {"x": "win", "y": "lose"}}, utilities={"u": {"win": 1}},
                decision_problems={"d": {"set": "P", "acts": ["a"], "utilities": "u"}})
        with pytest.raises(ModelError, match="lose"):
            loads_model(json.dumps(d))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ModelError, match="cannot read"):
            load_model(tmp_path / "absent.json")


def test_decimals_are_exact():
    m = loads_model(json.dumps(doc(measures={"mu": {"x": 0.1, "y": "0.9"}})))
    assert m.measure("mu").as_dict() == {"x": F(1, 10), "y": F(9, 10)}


def test_event_references():
    m = load_bundled_model("marbles")
    assert m.event("by") == m.event("blue,yellow") == m.event(["blue", "yellow"])
    assert m.event("") == m.event("{}") == m.space.empty


@pytest.mark.parametrize("name", bundled_model_names())
def test_bundled_models_round_trip(name, tmp_path):
    m = load_bundled_model(name)
    text = dumps_model(m)
    again = loads_model(text)
    assert models_equal(m, again)
    assert dumps_model(again) == text
    path = tmp_path / "m.json"
    path.write_text(bundled_model_text(name))
    assert models_equal(load_model(path), m)
