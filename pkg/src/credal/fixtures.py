"""Bundled worked examples: model files plus golden expectation manifests.

A manifest names its model file and lists expectations.  Each expectation
is a query (``op`` plus arguments), an exact expected value, a ``basis``
(``worked-example``, ``derived`` or ``definition``) and a short ``source``.
``derived`` entries also name the independent ``oracle`` that produced the
value.  An entry with a ``printed`` value records a published figure that
disagrees with the computation; it is reported as ``documented-erratum``
when the computation matches ``expected``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Callable, Optional

from .belief import check_b3, mobius_transform
from .coherence import is_coherent_lower_probability, satisfies_cover_property
from .core import condition_measure, expectation, indicator, to_fraction
from .credal import Interval, equivalent_as_lower_expectation
from .decision import compare, preference_matrix, strict_preference_certificate, utility_gamble
from .modelfile import Model, ModelError, loads_model
from .queries import bound_query, lower_probabilities_equal
from .updating import bayesian_coin_posterior, dilation_report

PASS = "pass"
FAIL = "fail"
ERRATUM = "documented-erratum"
BASES = ("worked-example", "derived", "definition")


class UnknownFixture(KeyError):
    pass


def _data(*parts: str):
    return resources.files("credal").joinpath("data", *parts)


def bundled_model_names() -> list[str]:
    return sorted(p.name[:-5].replace("_", "-") for p in _data("models").iterdir()
                  if p.name.endswith(".json"))


def bundled_model_text(name: str) -> str:
    name = name[:-5] if name.endswith(".json") else name
    path = _data("models", name.replace("-", "_") + ".json")
    if not path.is_file():
        raise UnknownFixture(f"no bundled model named {name!r}")
    return path.read_text(encoding="utf-8")


def load_bundled_model(name: str) -> Model:
    return loads_model(bundled_model_text(name), f"{name}.json")


def list_fixtures() -> list[str]:
    return sorted(p.name[:-5] for p in _data("fixtures").iterdir() if p.name.endswith(".json"))


def load_manifest(name: str) -> dict:
    path = _data("fixtures", name + ".json")
    if not path.is_file():
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(list_fixtures())}")
    manifest = json.loads(path.read_text(encoding="utf-8"), parse_float=Fraction)
    for i, e in enumerate(manifest["expectations"]):
        if e.get("basis") not in BASES:
            raise ModelError(f"expectation {i} has no valid basis", (name, "expectations", i))
        if e["basis"] == "derived" and not e.get("oracle"):
            raise ModelError(f"derived expectation {i} must name its oracle",
                             (name, "expectations", i))
    return manifest


# -- evaluation ---------------------------------------------------------------------

def _bound(kind: str):
    def run(model: Model, q: dict):
        return bound_query(model, q["set"], kind, event=q.get("event"), gamble=q.get("gamble"),
                           given=q.get("given"),
                           q=to_fraction(q["q"]) if "q" in q else None).value
    return run


def _measure_prob(model: Model, q: dict):
    mu = model.measure(q["measure"])
    if "given" in q:
        mu = condition_measure(mu, model.event(q["given"]))
    return mu.prob(model.event(q["event"]))


def _expectation(model: Model, q: dict):
    return expectation(model.measure(q["measure"]), model.gamble(q["gamble"]))


def _vertex_bound(model: Model, q: dict):
    # brute force over the extreme points, independent of the simplex solver
    x = model.gamble(q["gamble"]) if "gamble" in q else indicator(model.event(q["event"]))
    values = [expectation(v, x) for v in model.credal(q["set"]).vertices()]
    return min(values) if q["sense"] == "min" else max(values)


def _problem_parts(model: Model, q: dict):
    prob = model.problem(q["problem"])
    return model.credal(prob.set), model.utilities[prob.utilities], prob


def _lower_eu(model: Model, q: dict):
    p, u, prob = _problem_parts(model, q)
    m = preference_matrix(p, [model.acts[a] for a in prob.acts], u, 1)
    key = "upper" if q.get("sense") == "max" else "lower"
    return dict(zip(m.acts, getattr(m, key)))[q["act"]]


def _relation(model: Model, q: dict):
    p, u, _ = _problem_parts(model, q)
    ab, ba = compare(p, model.acts[q["a"]], model.acts[q["b"]], u, int(q["rule"]))
    return {(True, True): "indifferent", (True, False): "prefers",
            (False, True): "preferred-by", (False, False): "incomparable"}[(ab, ba)]


def _certificate(model: Model, q: dict):
    _, u, _ = _problem_parts(model, q)
    gambles = [utility_gamble(model.acts[a], u) - utility_gamble(model.acts[b], u)
               for a, b in q["strict"]]
    cert = strict_preference_certificate(gambles)
    return cert is not None and cert.verify()


def _dilation(model: Model, q: dict):
    rep = dilation_report(model.credal(q["set"]), model.event(q["target"]),
                          [model.event(c) for c in q["partition"]])
    return {"prior": rep.prior, "conditionals": [iv for _, iv in rep.conditionals],
            "dilates": rep.dilates}


OPS: dict[str, Callable[[Model, dict], Any]] = {
    "lower-prob": _bound("lower-prob"),
    "upper-prob": _bound("upper-prob"),
    "interval": _bound("interval"),
    "lower-exp": _bound("lower-exp"),
    "upper-exp": _bound("upper-exp"),
    "vertex-bound": _vertex_bound,
    "measure-prob": _measure_prob,
    "expectation": _expectation,
    "expected-utility": _lower_eu,
    "relation": _relation,
    "certificate": _certificate,
    "dilation": _dilation,
    "same-lower-probability": lambda m, q: lower_probabilities_equal(m, *q["sets"]),
    "equivalent": lambda m, q: equivalent_as_lower_expectation(m.credal(q["sets"][0]),
                                                               m.credal(q["sets"][1])),
    "b3": lambda m, q: check_b3(m.set_function(q["set_function"]),
                                [m.event(e) for e in q["events"]]),
    "mobius-negative": lambda m, q: any(
        v < 0 for v in mobius_transform(m.set_function(q["set_function"])).values),
    "coherent": lambda m, q: is_coherent_lower_probability(m.set_function(q["set_function"])).status,
    "covers-hold": lambda m, q: satisfies_cover_property(m.set_function(q["set_function"]),
                                                         int(q.get("max_k", 4))) is None,
    "coin-posterior": lambda m, q: bayesian_coin_posterior(q["p"], q["a"], q["b"]).next_heads,
}


def _normalize(expected: Any) -> Any:
    """Turn manifest JSON into comparable values (rationals, intervals)."""
    if isinstance(expected, bool) or expected is None:
        return expected
    if isinstance(expected, (int, Fraction)):
        return Fraction(expected)
    if isinstance(expected, str):
        try:
            return to_fraction(expected)
        except (ValueError, ZeroDivisionError):
            return expected
    if isinstance(expected, list):
        if len(expected) == 2 and not any(isinstance(v, (list, dict, bool)) for v in expected):
            lo, hi = (_normalize(v) for v in expected)
            if isinstance(lo, Fraction) and isinstance(hi, Fraction):
                return Interval(lo, hi)
        return [_normalize(v) for v in expected]
    if isinstance(expected, dict):
        return {k: _normalize(v) for k, v in expected.items()}
    return expected


@dataclass(frozen=True)
class ExpectationResult:
    index: int
    op: str
    query: dict
    expected: Any
    computed: Any
    status: str
    basis: str
    source: str
    note: str = ""
    printed: Any = None
    error: Optional[str] = None


@dataclass(frozen=True)
class FixtureReport:
    name: str
    model: str
    results: tuple[ExpectationResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.status != FAIL for r in self.results)

    def count(self, status: str) -> int:
        return sum(r.status == status for r in self.results)


def check_fixture(name: str) -> FixtureReport:
    manifest = load_manifest(name)
    model = load_bundled_model(manifest["model"])
    results = []
    for i, e in enumerate(manifest["expectations"]):
        q = dict(e["query"])
        op = q.pop("op")
        expected = _normalize(e["expected"])
        printed = _normalize(e["printed"]) if "printed" in e else None
        error = None
        try:
            computed = OPS[op](model, q)
        except Exception as exc:  # reported, not raised: one bad entry must not hide the rest
            computed, error = None, f"{type(exc).__name__}: {exc}"
        if error is None and computed == expected:
            status = ERRATUM if printed is not None and printed != expected else PASS
        else:
            status = FAIL
        results.append(ExpectationResult(i, op, q, expected, computed, status, e["basis"],
                                         e.get("source", ""), e.get("note", ""), printed, error))
    return FixtureReport(name, manifest["model"], tuple(results))


def fixture_model_document(name: str) -> dict:
    return json.loads(bundled_model_text(load_manifest(name)["model"]))


__all__ = ["list_fixtures", "check_fixture", "load_manifest", "load_bundled_model",
           "bundled_model_names", "bundled_model_text", "FixtureReport", "ExpectationResult",
           "UnknownFixture", "PASS", "FAIL", "ERRATUM", "OPS"]
