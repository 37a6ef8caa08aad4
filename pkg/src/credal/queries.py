"""Named queries over a loaded model, shared by the CLI and the fixture checker.

Every query returns a :class:`QueryResult` or a :class:`Report`; both know
how to render themselves as JSON-ready data, CSV rows or a text table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from .belief import mobius_transform
from .coherence import is_coherent_lower_probability
from .core import Event, Gamble, Measure, indicator
from .credal import (
    CredalSet,
    Interval,
    equivalent_as_lower_expectation,
    lower_probability,
)
from .decision import preference_matrix
from .modelfile import Model
from .updating import condition_credal, dilation_report, q_condition_credal

MAX_PERIOD = 24


def exact_string(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def decimal_string(x: Fraction, max_period: int = MAX_PERIOD) -> str:
    """Exact decimal with the repeating block in parentheses: ``1/3 -> 0.(3)``.

    Periods longer than ``max_period`` digits are cut off and marked with a
    leading ``~``.
    """
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    num, den = abs(x.numerator), x.denominator
    whole, rem = divmod(num, den)
    if rem == 0:
        return f"{sign}{whole}.0"
    digits, seen = [], {}
    while rem and rem not in seen:
        seen[rem] = len(digits)
        if len(digits) >= max_period + 32:
            return f"~{sign}{whole}.{''.join(digits[:max_period])}"
        rem *= 10
        d, rem = divmod(rem, den)
        digits.append(str(d))
    if not rem:
        return f"{sign}{whole}.{''.join(digits)}"
    start = seen[rem]
    if len(digits) - start > max_period:
        return f"~{sign}{whole}.{''.join(digits[:max_period])}"
    return f"{sign}{whole}.{''.join(digits[:start])}({''.join(digits[start:])})"


def rational_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "exact": exact_string(x),
            "decimal": decimal_string(x)}


def to_json(value: Any) -> Any:
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    if isinstance(value, Fraction):
        return rational_json(value)
    if isinstance(value, Interval):
        return {"lower": rational_json(value.lower), "upper": rational_json(value.upper)}
    if isinstance(value, Measure):
        return {w: rational_json(v) for w, v in value.as_dict().items()}
    if isinstance(value, Event):
        return list(value.labels)
    if isinstance(value, dict):
        return {str(k): to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json(v) for v in value]
    return str(value)


def to_text(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if value is None:
        return "-"
    if isinstance(value, Fraction):
        return exact_string(value)
    if isinstance(value, Interval):
        return f"[{exact_string(value.lower)}, {exact_string(value.upper)}]"
    if isinstance(value, Measure):
        return "(" + ", ".join(f"{w}: {exact_string(v)}" for w, v in value.as_dict().items()) + ")"
    if isinstance(value, Event):
        return "{" + ",".join(value.labels) + "}"
    if isinstance(value, (list, tuple)):
        return "{" + ", ".join(to_text(v) for v in value) + "}"
    if isinstance(value, dict):
        return "; ".join(f"{k}: {to_text(v)}" for k, v in value.items())
    return str(value)


def to_display(value: Any) -> str:
    """Text form with a decimal rendering appended to rationals."""
    if isinstance(value, Fraction):
        return f"{exact_string(value)} ({decimal_string(value)})"
    return to_text(value)


@dataclass
class Report:
    """A titled table plus free-form key/value facts."""

    title: str
    columns: list[str] = field(default_factory=list)
    rows: list[list[Any]] = field(default_factory=list)
    facts: dict[str, Any] = field(default_factory=dict)

    def as_json(self) -> dict:
        return {"title": self.title, "facts": to_json(self.facts),
                "rows": [{c: to_json(v) for c, v in zip(self.columns, row)} for row in self.rows]}

    def csv_rows(self) -> list[list[str]]:
        if self.rows:
            return [self.columns] + [[to_text(v) for v in row] for row in self.rows]
        return [["key", "value"]] + [[k, to_text(v)] for k, v in self.facts.items()]

    def table(self) -> str:
        lines = [self.title]
        for k, v in self.facts.items():
            lines.append(f"  {k}: {to_display(v)}")
        if self.rows:
            cells = [self.columns] + [[to_display(v) for v in row] for row in self.rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(self.columns))]
            for j, row in enumerate(cells):
                lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
                if j == 0:
                    lines.append("  " + "  ".join("-" * w for w in widths))
        return "\n".join(lines)


@dataclass
class QueryResult:
    quantity: str
    value: Any
    witness: Any = None
    provenance: str = ""

    def report(self) -> Report:
        facts: dict[str, Any] = {"quantity": self.quantity, "value": self.value}
        if self.witness is not None:
            facts["witness"] = self.witness
        facts["provenance"] = self.provenance
        return Report(self.quantity, facts=facts)


KINDS = ("lower-prob", "upper-prob", "interval", "lower-exp", "upper-exp")


def _provenance(p, given: Optional[Event]) -> str:
    if isinstance(p, CredalSet) and p.generators is not None:
        return "enumeration of " + ("conditioned " if given is not None else "") + "generators"
    if given is not None:
        return "linear-fractional LP (Charnes-Cooper) over the constraints"
    return "simplex LP over the constraints"


def bound_query(model: Model, set_name: str, kind: str, *, event=None, gamble=None,
                given=None, q=None) -> QueryResult:
    """Lower/upper probability or expectation, optionally conditional or q-conditional."""
    if kind not in KINDS:
        raise ValueError(f"unknown query kind {kind!r}")
    p = model.credal(set_name)
    if (event is None) == (gamble is None):
        raise ValueError("give exactly one of an event or a gamble")
    x: Gamble = indicator(model.event(event)) if event is not None else model.gamble(gamble)
    cond = None
    target = p
    if q is not None and given is None:
        raise ValueError("q-conditioning needs an observed event")
    if given is not None:
        cond = model.event(given)
        target = q_condition_credal(p, cond, q) if q is not None else condition_credal(p, cond)
    what = f"E({gamble})" if gamble is not None else f"P({to_text(model.event(event))})"
    if cond is not None:
        what = what[:-1] + f" | {to_text(cond)})"
    if q is not None:
        what += f" [q={q}]"
    provenance = _provenance(p, cond)
    if q is not None:
        provenance = "likelihood filter, then " + provenance
    if kind == "interval":
        lo, hi = target.bound(x, "min"), target.bound(x, "max")
        return QueryResult(f"interval {what}", Interval(lo.value, hi.value),
                           [lo.witness, hi.witness], provenance)
    sense = "min" if kind.startswith("lower") else "max"
    b = target.bound(x, sense)
    return QueryResult(f"{'lower' if sense == 'min' else 'upper'} {what}", b.value, b.witness,
                       provenance)


def dilation_query(model: Model, set_name: str, target, partition: Sequence) -> Report:
    p = model.credal(set_name)
    rep = dilation_report(p, model.event(target), [model.event(c) for c in partition])
    rows = [["(none)", rep.prior, "-"]]
    for cell, iv in rep.conditionals:
        rows.append([cell, iv, iv.strictly_contains(rep.prior)])
    return Report(f"dilation of {to_text(model.event(target))} in {set_name}",
                  ["given", "interval", "strictly wider"], rows, {"dilates": rep.dilates})


def decide_query(model: Model, set_name: str, acts: Sequence[str], utilities: str,
                 rule: int) -> Report:
    p = model.credal(set_name)
    chosen = [model._named(model.acts, "act", a) for a in acts]
    u = model._named(model.utilities, "utility table", utilities)
    m = preference_matrix(p, chosen, u, rule)
    rows = []
    for i, a in enumerate(m.acts):
        rows.append([a, m.lower[i], m.upper[i],
                     ", ".join(b for b in m.acts if m.strictly_prefers(a, b)) or "-"])
    return Report(f"rule {rule} on {set_name}", ["act", "lower EU", "upper EU", "strictly beats"],
                  rows, {"maximal": list(m.maximal())})


def coherence_query(model: Model, name: str) -> QueryResult:
    f = model.set_function(name)
    v = is_coherent_lower_probability(f)
    witness = None
    if v.witness is not None:
        witness = {"event": v.witness, "value": f(v.witness), "attained": v.attained}
    return QueryResult(f"coherence of {name}", v.status, witness,
                       "natural extension LP, one tightness LP per event")


def mobius_query(model: Model, name: str) -> Report:
    f = model.set_function(name)
    m = mobius_transform(f)
    negative = [e for e, v in m.items() if v < 0]
    rows = [[e, f(e), m(e)] for e in f.space.events()]
    return Report(f"Möbius transform of {name}", ["event", "value", "mass"], rows,
                  {"belief function": not negative,
                   "negative mass at": negative[0] if negative else None})


def equivalence_query(model: Model, a: str, b: str) -> QueryResult:
    pa, pb = model.credal(a), model.credal(b)
    return QueryResult(f"{a} and {b} give the same lower expectations",
                       equivalent_as_lower_expectation(pa, pb), None,
                       "mutual membership of extreme points")


def lower_probabilities_equal(model: Model, a: str, b: str) -> bool:
    pa, pb = model.credal(a), model.credal(b)
    return all(lower_probability(pa, e) == lower_probability(pb, e) for e in model.space.events())


__all__ = ["Report", "QueryResult", "bound_query", "dilation_query", "decide_query",
           "coherence_query", "mobius_query", "equivalence_query", "lower_probabilities_equal",
           "decimal_string", "exact_string", "rational_json", "to_json", "to_text"]
