"""JSON model files: loading with located error messages, and dumping.

A model file describes one world space and named objects over it::

    {
      "worlds": ["red", "blue", "yellow"],
      "events": {"by": ["blue", "yellow"]},
      "measures": {"mu": {"red": "1/3", "blue": "1/3", "yellow": "1/3"}},
      "credal_sets": {
        "P_u": {"generators": [{"red": ".3", "blue": 0, "yellow": ".7"}, "mu"],
                "hull": true},
        "P_3": {"constraints": [{"event": ["blue"], "relation": "<=", "rhs": ".5"},
                                {"coefficients": {"blue": 1, "yellow": -1},
                                 "relation": "=", "rhs": 0}]}
      },
      "gambles": {"Y": {"blue": 1, "yellow": -1}},
      "set_functions": {"f": {"values": [{"event": [], "value": 0}, ...]},
                        "g": {"lower_of": "P_u"}},
      "mass_functions": {"m": {"masses": [{"event": ["red"], "mass": "1/2"}, ...]}},
      "acts": {"B_r": {"red": "$1", "blue": "$0", "yellow": "$0"}},
      "utilities": {"money": {"$1": 1, "$0": 0}},
      "decision_problems": {"ellsberg": {"set": "P_u", "acts": ["B_r"], "utilities": "money"}}
    }

Rationals may be written as ``"p/q"`` strings, integers or decimal
literals; decimals are read exactly (``.3`` is ``3/10``).  Gamble entries
default to 0 for omitted worlds; measures must list every world.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .belief import MassFunction
from .core import CredalError, Event, Gamble, Measure, SetFunction, WorldSpace, to_fraction
from .credal import CredalSet, EmptyCredalSet, lower_probability_function, simplex_constraint
from .decision import Act, UtilityTable
from .linprog import LinearConstraint

SECTIONS = ("worlds", "events", "measures", "credal_sets", "gambles", "set_functions",
            "mass_functions", "acts", "utilities", "decision_problems", "name", "description")


class ModelError(CredalError):
    """A model file failed schema validation or an invariant check."""

    def __init__(self, message: str, path: tuple = (), line: Optional[int] = None,
                 source: Optional[str] = None):
        self.message = message
        self.path = path
        self.line = line
        self.source = source
        where = "/".join(str(p) for p in path) or "<root>"
        prefix = f"{source}:" if source else ""
        loc = f"{prefix}{line}: " if line is not None else (f"{prefix} " if prefix else "")
        super().__init__(f"{loc}{where}: {message}")

    def as_dict(self) -> dict:
        return {"error": "model", "message": self.message,
                "path": "/".join(str(p) for p in self.path), "line": self.line,
                "file": self.source}


@dataclass(frozen=True)
class DecisionProblem:
    set: str
    acts: tuple[str, ...]
    utilities: str


@dataclass
class Model:
    space: WorldSpace
    name: str = ""
    description: str = ""
    events: dict[str, Event] = field(default_factory=dict)
    measures: dict[str, Measure] = field(default_factory=dict)
    credal_sets: dict[str, CredalSet] = field(default_factory=dict)
    gambles: dict[str, Gamble] = field(default_factory=dict)
    set_functions: dict[str, SetFunction] = field(default_factory=dict)
    mass_functions: dict[str, MassFunction] = field(default_factory=dict)
    acts: dict[str, Act] = field(default_factory=dict)
    utilities: dict[str, UtilityTable] = field(default_factory=dict)
    decision_problems: dict[str, DecisionProblem] = field(default_factory=dict)

    def event(self, ref) -> Event:
        """Resolve a named event, a world label, or a list / comma list of labels."""
        if isinstance(ref, Event):
            return ref
        if isinstance(ref, str):
            if ref in self.events:
                return self.events[ref]
            if ref in ("", "{}", "empty"):
                return self.space.empty
            labels = [s.strip() for s in ref.split(",") if s.strip()]
        else:
            labels = list(ref)
        unknown = [w for w in labels if w not in self.space.labels]
        if unknown:
            raise KeyError(f"unknown event or worlds {unknown}")
        return self.space.event(*labels)

    def gamble(self, ref) -> Gamble:
        if isinstance(ref, Gamble):
            return ref
        if isinstance(ref, str) and ref in self.gambles:
            return self.gambles[ref]
        if isinstance(ref, dict):
            return Gamble(self.space, ref)
        raise KeyError(f"unknown gamble {ref!r}")

    def _named(self, table: dict, kind: str, name: str):
        try:
            return table[name]
        except KeyError:
            raise KeyError(f"unknown {kind} {name!r}") from None

    def credal(self, name: str) -> CredalSet:
        return self._named(self.credal_sets, "credal set", name)

    def measure(self, name: str) -> Measure:
        return self._named(self.measures, "measure", name)

    def set_function(self, name: str) -> SetFunction:
        return self._named(self.set_functions, "set function", name)

    def problem(self, name: str) -> DecisionProblem:
        return self._named(self.decision_problems, "decision problem", name)


def _locate(text: Optional[str], path: tuple) -> Optional[int]:
    """Line of the last key of ``path`` found by walking the raw JSON text."""
    if text is None:
        return None
    pos, found = 0, None
    for part in path:
        if isinstance(part, int):
            continue
        hit = text.find(json.dumps(str(part)), pos)
        if hit < 0:
            break
        pos, found = hit, hit
    if found is None:
        return None
    return text.count("\n", 0, found) + 1


class _Loader:
    def __init__(self, doc: Any, text: Optional[str], source: Optional[str]):
        self.doc = doc
        self.text = text
        self.source = source

    def fail(self, message: str, *path) -> ModelError:
        return ModelError(message, tuple(path), _locate(self.text, tuple(path)), self.source)

    def rational(self, value, *path) -> Fraction:
        try:
            return to_fraction(value)
        except (TypeError, ValueError, ZeroDivisionError):
            raise self.fail(f"not a rational number: {value!r}", *path) from None

    def mapping(self, value, *path) -> dict:
        if not isinstance(value, dict):
            raise self.fail(f"expected an object, got {type(value).__name__}", *path)
        return value

    def labels(self, space: WorldSpace, value, *path) -> Event:
        if not isinstance(value, list):
            raise self.fail("an event is a list of world labels", *path)
        unknown = [w for w in value if w not in space.labels]
        if unknown:
            raise self.fail(f"unknown worlds {unknown}", *path)
        return space.event(*value)

    def load(self) -> Model:
        doc = self.mapping(self.doc)
        extra = set(doc) - set(SECTIONS) - {"expectations"}
        if extra:
            raise self.fail(f"unknown sections {sorted(extra)}", sorted(extra)[0])
        worlds = doc.get("worlds")
        if not isinstance(worlds, list) or not worlds:
            raise self.fail("'worlds' must be a nonempty list of labels", "worlds")
        if len(set(map(str, worlds))) != len(worlds):
            raise self.fail("world labels must be distinct", "worlds")
        space = WorldSpace(worlds)
        model = Model(space, str(doc.get("name", "")), str(doc.get("description", "")))

        for name, value in self.mapping(doc.get("events", {}), "events").items():
            model.events[name] = self.labels(space, value, "events", name)

        for name, value in self.mapping(doc.get("measures", {}), "measures").items():
            model.measures[name] = self.measure(space, value, "measures", name)

        for name, value in self.mapping(doc.get("gambles", {}), "gambles").items():
            value = self.mapping(value, "gambles", name)
            unknown = set(value) - set(space.labels)
            if unknown:
                raise self.fail(f"unknown worlds {sorted(unknown)}", "gambles", name)
            model.gambles[name] = Gamble(space, {k: self.rational(v, "gambles", name, k)
                                                 for k, v in value.items()})

        for name, value in self.mapping(doc.get("credal_sets", {}), "credal_sets").items():
            model.credal_sets[name] = self.credal(model, value, "credal_sets", name)

        for name, value in self.mapping(doc.get("set_functions", {}), "set_functions").items():
            model.set_functions[name] = self.set_function(model, value, "set_functions", name)

        for name, value in self.mapping(doc.get("mass_functions", {}), "mass_functions").items():
            model.mass_functions[name] = self.mass_function(space, value, "mass_functions", name)

        for name, value in self.mapping(doc.get("acts", {}), "acts").items():
            value = self.mapping(value, "acts", name)
            try:
                model.acts[name] = Act(space, name, value)
            except (KeyError, ValueError) as exc:
                raise self.fail(str(exc), "acts", name) from None

        for name, value in self.mapping(doc.get("utilities", {}), "utilities").items():
            value = self.mapping(value, "utilities", name)
            model.utilities[name] = UtilityTable(
                {k: self.rational(v, "utilities", name, k) for k, v in value.items()})

        problems = self.mapping(doc.get("decision_problems", {}), "decision_problems")
        for name, value in problems.items():
            model.decision_problems[name] = self.problem(model, value, "decision_problems", name)
        return model

    def measure(self, space: WorldSpace, value, *path) -> Measure:
        value = self.mapping(value, *path)
        missing = [w for w in space.labels if w not in value]
        if missing:
            raise self.fail(f"measure omits worlds {missing}", *path)
        unknown = set(value) - set(space.labels)
        if unknown:
            raise self.fail(f"unknown worlds {sorted(unknown)}", *path)
        weights = {k: self.rational(v, *path, k) for k, v in value.items()}
        try:
            return Measure(space, weights)
        except ValueError as exc:
            raise self.fail(f"measure {path[-1]!r} is invalid: {exc}", *path) from None

    def credal(self, model: Model, value, *path) -> CredalSet:
        value = self.mapping(value, *path)
        space = model.space
        if ("generators" in value) == ("constraints" in value):
            raise self.fail("a credal set needs exactly one of 'generators' or 'constraints'", *path)
        if "generators" in value:
            gens = value["generators"]
            if not isinstance(gens, list) or not gens:
                raise self.fail("'generators' must be a nonempty list", *path, "generators")
            measures = []
            for i, g in enumerate(gens):
                if isinstance(g, str):
                    if g not in model.measures:
                        raise self.fail(f"unknown measure {g!r}", *path, "generators", i)
                    measures.append(model.measures[g])
                else:
                    measures.append(self.measure(space, g, *path, "generators", i))
            hull = value.get("hull", True)
            if not isinstance(hull, bool):
                raise self.fail("'hull' must be true or false", *path, "hull")
            return CredalSet.from_generators(measures, hull=hull)
        cons = value["constraints"]
        if not isinstance(cons, list):
            raise self.fail("'constraints' must be a list", *path, "constraints")
        parsed = [self.constraint(space, c, *path, "constraints", i) for i, c in enumerate(cons)]
        try:
            return CredalSet.from_constraints(space, parsed)
        except EmptyCredalSet:
            raise self.fail("constraints admit no probability measure", *path) from None

    def constraint(self, space: WorldSpace, value, *path) -> LinearConstraint:
        value = self.mapping(value, *path)
        if "event" in value:
            coeffs = [int(i in self.labels(space, value["event"], *path, "event").members)
                      for i in range(len(space))]
        else:
            raw = self.mapping(value.get("coefficients"), *path, "coefficients")
            unknown = set(raw) - set(space.labels)
            if unknown:
                raise self.fail(f"unknown worlds {sorted(unknown)}", *path, "coefficients")
            coeffs = [self.rational(raw.get(w, 0), *path, "coefficients", w) for w in space.labels]
        try:
            return LinearConstraint(coeffs, value.get("relation", ""),
                                    self.rational(value.get("rhs"), *path, "rhs"))
        except ValueError as exc:
            raise self.fail(str(exc), *path, "relation") from None

    def set_function(self, model: Model, value, *path) -> SetFunction:
        value = self.mapping(value, *path)
        if "lower_of" in value:
            ref = value["lower_of"]
            if ref not in model.credal_sets:
                raise self.fail(f"unknown credal set {ref!r}", *path, "lower_of")
            return lower_probability_function(model.credal_sets[ref])
        rows = value.get("values")
        if not isinstance(rows, list):
            raise self.fail("expected 'values' (a list of event/value rows) or 'lower_of'", *path)
        table: dict[Event, Fraction] = {}
        for i, row in enumerate(rows):
            row = self.mapping(row, *path, "values", i)
            event = self.labels(model.space, row.get("event"), *path, "values", i, "event")
            if event in table:
                raise self.fail(f"event {event!r} listed twice", *path, "values", i)
            v = self.rational(row.get("value"), *path, "values", i, "value")
            if not 0 <= v <= 1:
                raise self.fail(f"set function values must lie in [0, 1], got {v}", *path, "values", i)
            table[event] = v
        if len(table) != 1 << len(model.space):
            raise self.fail(f"set function must list all {1 << len(model.space)} events, "
                            f"got {len(table)}", *path)
        return SetFunction(model.space, table)

    def mass_function(self, space: WorldSpace, value, *path) -> MassFunction:
        value = self.mapping(value, *path)
        rows = value.get("masses")
        if not isinstance(rows, list):
            raise self.fail("expected 'masses': a list of event/mass rows", *path)
        masses: dict[Event, Fraction] = {}
        for i, row in enumerate(rows):
            row = self.mapping(row, *path, "masses", i)
            event = self.labels(space, row.get("event"), *path, "masses", i, "event")
            masses[event] = masses.get(event, Fraction(0)) + self.rational(
                row.get("mass"), *path, "masses", i, "mass")
        try:
            return MassFunction(space, masses)
        except ValueError as exc:
            raise self.fail(str(exc), *path) from None

    def problem(self, model: Model, value, *path) -> DecisionProblem:
        value = self.mapping(value, *path)
        if value.get("set") not in model.credal_sets:
            raise self.fail(f"unknown credal set {value.get('set')!r}", *path, "set")
        acts = value.get("acts")
        if not isinstance(acts, list) or not acts:
            raise self.fail("'acts' must be a nonempty list of act names", *path, "acts")
        for a in acts:
            if a not in model.acts:
                raise self.fail(f"unknown act {a!r}", *path, "acts")
        util = value.get("utilities")
        if util not in model.utilities:
            raise self.fail(f"unknown utility table {util!r}", *path, "utilities")
        table = model.utilities[util]
        for a in acts:
            missing = model.acts[a].consequences - set(table)
            if missing:
                raise self.fail(f"act {a!r} has consequences without utility: {sorted(missing)}",
                                *path, "acts")
        return DecisionProblem(value["set"], tuple(acts), util)


def _json_loads(text: str):
    # decimal literals become exact Fractions
    return json.loads(text, parse_float=Fraction)


def loads_model(text: str, source: Optional[str] = None) -> Model:
    try:
        doc = _json_loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON: {exc.msg}", (), exc.lineno, source) from None
    return _Loader(doc, text, source).load()


def load_model(path: Union[str, Path]) -> Model:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read model file: {exc.strerror}", (), None, str(path)) from None
    return loads_model(text, str(path))


def model_from_dict(doc: dict) -> Model:
    return _Loader(doc, None, None).load()


# -- dumping --------------------------------------------------------------------

def format_rational(x: Fraction) -> Union[int, str]:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _weights(space: WorldSpace, values) -> dict:
    return {w: format_rational(v) for w, v in zip(space.labels, values)}


def _constraint_doc(space: WorldSpace, c: LinearConstraint) -> dict:
    return {"coefficients": {w: format_rational(a) for w, a in zip(space.labels, c.coefficients)
                             if a != 0},
            "relation": c.relation, "rhs": format_rational(c.rhs)}


def model_to_dict(model: Model) -> dict:
    space = model.space
    doc: dict[str, Any] = {}
    if model.name:
        doc["name"] = model.name
    if model.description:
        doc["description"] = model.description
    doc["worlds"] = list(space.labels)
    doc["events"] = {k: list(e.labels) for k, e in model.events.items()}
    doc["measures"] = {k: _weights(space, m.weights) for k, m in model.measures.items()}
    sets = {}
    for k, p in model.credal_sets.items():
        if p.generators is not None:
            sets[k] = {"generators": [_weights(space, g.weights) for g in p.generators],
                       "hull": p.hull}
        else:
            sets[k] = {"constraints": [_constraint_doc(space, c) for c in p.constraints]}
    doc["credal_sets"] = sets
    doc["gambles"] = {k: _weights(space, g.values) for k, g in model.gambles.items()}
    doc["set_functions"] = {
        k: {"values": [{"event": list(e.labels), "value": format_rational(v)} for e, v in f.items()]}
        for k, f in model.set_functions.items()}
    doc["mass_functions"] = {
        k: {"masses": [{"event": list(e.labels), "mass": format_rational(m(e))}
                       for e in m.focal_events()]}
        for k, m in model.mass_functions.items()}
    doc["acts"] = {k: dict(zip(space.labels, a.outcomes)) for k, a in model.acts.items()}
    doc["utilities"] = {k: {c: format_rational(v) for c, v in u.items()}
                        for k, u in model.utilities.items()}
    doc["decision_problems"] = {k: {"set": d.set, "acts": list(d.acts), "utilities": d.utilities}
                                for k, d in model.decision_problems.items()}
    return doc


def dumps_model(model: Model) -> str:
    return json.dumps(model_to_dict(model), indent=2, ensure_ascii=False) + "\n"


def models_equal(a: Model, b: Model) -> bool:
    """Structural equality (credal sets compared by representation, not as sets)."""
    def sig(p: CredalSet):
        return (p.form, p.hull, p.generators, p.constraints)
    return (a.space == b.space and a.events == b.events and a.measures == b.measures
            and a.gambles == b.gambles and a.set_functions == b.set_functions
            and a.mass_functions == b.mass_functions and a.acts == b.acts
            and a.utilities == b.utilities and a.decision_problems == b.decision_problems
            and {k: sig(p) for k, p in a.credal_sets.items()}
            == {k: sig(p) for k, p in b.credal_sets.items()})


__all__ = ["Model", "ModelError", "DecisionProblem", "load_model", "loads_model",
           "model_from_dict", "dumps_model", "model_to_dict", "models_equal", "format_rational",
           "simplex_constraint"]
