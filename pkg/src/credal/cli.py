"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 model error, 4 computational error
(or a failing fixture check).  Errors are written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .core import CredalError, ZeroConditioningEvent, condition_measure, to_fraction
from .credal import lower_probability_function
from .decision import strict_preference_certificate, utility_gamble
from .fixtures import (
    ERRATUM,
    FAIL,
    PASS,
    UnknownFixture,
    bundled_model_names,
    check_fixture,
    list_fixtures,
    load_bundled_model,
)
from .modelfile import Model, ModelError, dumps_model, load_model
from .queries import (
    Report,
    bound_query,
    coherence_query,
    decide_query,
    dilation_query,
    equivalence_query,
    lower_probabilities_equal,
    mobius_query,
)
from .updating import (
    UpdatePolicy,
    bayesian_coin_posterior,
    bias_grid,
    learn_coin,
    prisoners_measure,
    simulate_tosses,
    survivors_by_likelihood_ratio,
)

EXIT_OK, EXIT_USAGE, EXIT_MODEL, EXIT_COMPUTE = 0, 2, 3, 4
MAX_STEP_ROWS = 50


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _list(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


# -- model resolution ----------------------------------------------------------------

def _open_model(ref: str) -> Model:
    if os.path.exists(ref):
        return load_model(ref)
    try:
        return load_bundled_model(ref)
    except UnknownFixture:
        raise ModelError(f"no model file or bundled model named {ref!r}; bundled: "
                         f"{', '.join(bundled_model_names())}") from None


def _resolve(args, section: str, name: Optional[str]) -> Model:
    """The model given by --model, else the one bundled model that defines ``name``."""
    if args.model:
        return _open_model(args.model)
    if name is None:
        raise UsageError("--model is required here")
    hits = [m for m in (load_bundled_model(n) for n in bundled_model_names())
            if name in getattr(m, section)]
    if len(hits) != 1:
        where = "no bundled model defines" if not hits else "several bundled models define"
        raise UsageError(f"{where} {name!r}; pass --model")
    return hits[0]


# -- commands --------------------------------------------------------------------------

def cmd_bound(args) -> list[Report]:
    model = _resolve(args, "credal_sets", args.set)
    if args.q is not None and args.given is None:
        raise UsageError("--q needs --given")
    res = bound_query(model, args.set, args.command, event=args.event,
                      gamble=getattr(args, "gamble", None), given=args.given, q=args.q)
    return [res.report()]


def cmd_dilation(args) -> list[Report]:
    if args.scenario:
        if args.scenario != "three-prisoners":
            raise UsageError(f"no dilation scenario {args.scenario!r}")
        model = load_bundled_model("three-prisoners")
        return [dilation_query(model, "P_J", "lives-a", ["says-b", "says-c"])]
    if not (args.set and args.target and args.partition):
        raise UsageError("give --scenario, or --set, --target and --partition")
    model = _resolve(args, "credal_sets", args.set)
    return [dilation_query(model, args.set, args.target, args.partition)]


def cmd_decide(args) -> list[Report]:
    acts = _list(args.acts)
    if len(acts) == 1:
        model = _resolve(args, "decision_problems", acts[0])
        if acts[0] in model.decision_problems:
            prob = model.decision_problems[acts[0]]
            return [decide_query(model, args.set or prob.set, prob.acts,
                                 args.utilities or prob.utilities, args.rule)]
    else:
        model = _resolve(args, "credal_sets", args.set)
    if not (args.set and args.utilities):
        raise UsageError("--set and --utilities are required unless --acts names a decision problem")
    return [decide_query(model, args.set, acts, args.utilities, args.rule)]


def _set_function_name(args, model: Model) -> str:
    if args.set_function:
        return args.set_function
    name = f"lower({args.set})"
    model.set_functions[name] = lower_probability_function(model.credal(args.set))
    return name


def _set_function_model(args) -> Model:
    if bool(args.set_function) == bool(args.set):
        raise UsageError("give exactly one of --set-function or --set")
    if args.set_function:
        return _resolve(args, "set_functions", args.set_function)
    return _resolve(args, "credal_sets", args.set)


def cmd_coherent(args) -> list[Report]:
    model = _set_function_model(args)
    return [coherence_query(model, _set_function_name(args, model)).report()]


def cmd_mobius(args) -> list[Report]:
    model = _set_function_model(args)
    return [mobius_query(model, _set_function_name(args, model))]


def cmd_equivalent(args) -> list[Report]:
    a, b = args.sets
    model = _resolve(args, "credal_sets", a)
    rep = equivalence_query(model, a, b).report()
    rep.facts["same lower probability on every event"] = lower_probabilities_equal(model, a, b)
    return [rep]


class DocumentReport(Report):
    """A report whose table and JSON forms are a model document itself."""

    def table(self) -> str:
        return self.facts["document"].rstrip("\n")

    def as_json(self) -> dict:
        return json.loads(self.facts["document"])


def cmd_validate(args) -> list[Report]:
    model = _open_model(args.path)
    if args.dump:
        return [DocumentReport("model", facts={"document": dumps_model(model)})]
    counts = {k: len(getattr(model, k)) for k in
              ("events", "measures", "credal_sets", "gambles", "set_functions",
               "mass_functions", "acts", "utilities", "decision_problems")}
    return [Report(f"model {model.name or args.path} is valid",
                   facts={"worlds": list(model.space.labels), **counts})]


def cmd_fixtures(args) -> list[Report]:
    if args.action == "list":
        return [Report("bundled fixtures", ["fixture"], [[n] for n in list_fixtures()])]
    names = args.names or list_fixtures()
    reports = []
    for name in names:
        fr = check_fixture(name)
        rows = [[r.index, r.op, r.expected, r.computed if r.error is None else r.error,
                 r.status, r.source] for r in fr.results]
        reports.append(Report(f"fixture {name} (model {fr.model})",
                              ["#", "query", "expected", "computed", "status", "source"], rows,
                              {"passed": fr.passed, PASS: fr.count(PASS), ERRATUM: fr.count(ERRATUM),
                               FAIL: fr.count(FAIL)}))
    return reports


def scenario_marbles(args) -> list[Report]:
    model = load_bundled_model("marbles")
    ev = ["r", "b", "y", "ry", "by", "rb"]
    rows = [[model.events[e], bound_query(model, "P_u", "interval", event=e).value] for e in ev]
    out = [Report("P_u: probability intervals", ["event", "interval"], rows)]
    out.extend(decide_query(model, "P_u", model.decision_problems["ellsberg"].acts, "money", r)
               for r in (1, 2))
    u = model.utilities["money"]
    gambles = [utility_gamble(model.acts[a], u) - utility_gamble(model.acts[b], u)
               for a, b in (("B_r", "B_b"), ("B_by", "B_ry"))]
    cert = strict_preference_certificate(gambles)
    out.append(Report("no single measure supports both strict preferences", facts={
        "certificate found": cert is not None,
        "multipliers": list(cert.multipliers) if cert else None,
        "best worst-case margin": cert.margin if cert else None}))
    rows = [[e, bound_query(model, "P_3", "lower-prob", event=e).value,
             bound_query(model, "P_4", "lower-prob", event=e).value] for e in model.space.events()]
    out.append(Report("P_3 and P_4: lower probabilities", ["event", "P_3", "P_4"], rows, {
        "lower P(b | by) in P_3": bound_query(model, "P_3", "lower-prob", event="b", given="by").value,
        "lower P(b | by) in P_4": bound_query(model, "P_4", "lower-prob", event="b", given="by").value}))
    out.append(Report("expectation of Y = X_b - X_y", ["set", "interval"],
                      [[s, bound_query(model, s, "interval", gamble="Y").value]
                       for s in ("P_3", "P_4")]))
    return out


def scenario_prisoners(args) -> list[Report]:
    model = load_bundled_model("three-prisoners")
    mu = prisoners_measure(args.alpha, model.space)
    facts = {"alpha": args.alpha,
             "P(says-b)": mu.prob(model.events["says-b"]),
             "P(lives-a)": mu.prob(model.events["lives-a"]),
             "P(lives-a | says-b)": condition_measure(mu, model.events["says-b"]).prob(
                 model.events["lives-a"])}
    if args.alpha != 0:
        facts["P(lives-a | says-c)"] = condition_measure(mu, model.events["says-c"]).prob(
            model.events["lives-a"])
    return [Report(f"jailer protocol alpha = {args.alpha}", facts=facts),
            dilation_query(model, "P_J", "lives-a", ["says-b", "says-c"])]


def _grid(text: str) -> list[Fraction]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("--grid takes start:stop:step")
    return bias_grid(*(_rational(p) for p in parts))


def scenario_coin(args) -> list[Report]:
    if bool(args.biases) == bool(args.grid):
        raise UsageError("give exactly one of --biases or --grid")
    biases = [_rational(b) for b in _list(args.biases)] if args.biases else _grid(args.grid)
    policy_name = args.policy or ("likelihood" if args.q is not None else "bayes")
    if policy_name == "likelihood":
        if args.q is None:
            raise UsageError("--policy likelihood needs --q")
        policy = UpdatePolicy.likelihood(args.q)
    else:
        if args.q is not None:
            raise UsageError("--q only applies to --policy likelihood")
        policy = UpdatePolicy.bayes()
    if args.observe:
        tosses = args.observe.upper()
        source = "observed"
    else:
        if args.steps is None:
            raise UsageError("give --observe, or --steps (with --seed) to simulate")
        tosses = simulate_tosses(args.true_bias, args.steps, args.seed)
        source = f"simulated, bias {args.true_bias}, seed {args.seed}"
    trace = learn_coin(biases, tosses, policy)
    rows, previous = [], None
    heads = 0
    for i, step in enumerate(trace.steps, 1):
        heads += step.observation == "H"
        if len(trace.steps) <= MAX_STEP_ROWS or step.parameters != previous or i == len(trace.steps):
            rows.append([i, step.observation, heads, i - heads, list(step.parameters),
                         step.prediction])
        previous = step.parameters
    n = len(tosses)
    oracle = survivors_by_likelihood_ratio(biases, heads, n - heads,
                                           None if policy.is_bayes else policy.q)
    final = trace.final
    facts = {"policy": str(policy), "tosses": source, "number of tosses": n, "heads": heads,
             "tails": n - heads, "initial biases": biases, "surviving biases": list(final.parameters),
             "prediction interval for heads": final.prediction,
             "likelihood-ratio oracle agrees": oracle == list(final.parameters)}
    title = "coin learning" + ("" if len(trace.steps) <= MAX_STEP_ROWS
                               else " (rows shown where the surviving set changes)")
    return [Report(title, ["step", "toss", "heads", "tails", "surviving", "prediction"], rows,
                   facts)]


def scenario_coin_posterior(args) -> list[Report]:
    post = bayesian_coin_posterior(args.p, args.a, args.b)
    prior = args.p * args.a + (1 - args.p) * args.b
    return [Report("single-prior coin posterior", facts={
        "p": args.p, "a": args.a, "b": args.b, "P(H1)": prior, "P(H2 | H1)": post.next_heads,
        "P(bias b | H1)": post.bias_b})]


def cmd_scenario(args) -> list[Report]:
    return {"marbles": scenario_marbles, "three-prisoners": scenario_prisoners,
            "coin-learning": scenario_coin, "coin-posterior": scenario_coin_posterior}[args.name](args)


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", help="model file path or bundled model name "
                        "(default: the bundled model defining the named object)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit JSON")
    fmt.add_argument("--csv", action="store_true", help="emit CSV")

    parser = _Parser(prog="credal", description="Queries over credal sets in exact arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for kind, thing, text in (
            ("lower-prob", "event", "lower probability of an event"),
            ("upper-prob", "event", "upper probability of an event"),
            ("interval", "event", "lower and upper probability or expectation"),
            ("lower-exp", "gamble", "lower expectation of a gamble"),
            ("upper-exp", "gamble", "upper expectation of a gamble")):
        p = sub.add_parser(kind, parents=[common], help=text)
        p.add_argument("--set", required=True, help="credal set name")
        target = p.add_mutually_exclusive_group(required=True)
        target.add_argument("--event", help="event name or comma-separated world labels")
        if kind == "interval" or thing == "gamble":
            target.add_argument("--gamble", help="gamble name")
        p.add_argument("--given", help="condition on this event")
        p.add_argument("--q", type=_rational, help="likelihood threshold in (0, 1] for q-conditioning")
        p.set_defaults(func=cmd_bound)

    p = sub.add_parser("dilation", parents=[common], help="conditional intervals over a partition")
    p.add_argument("--scenario", help="bundled scenario (three-prisoners)")
    p.add_argument("--set")
    p.add_argument("--target", help="event whose probability is tracked")
    p.add_argument("--partition", nargs="+", help="events forming the partition")
    p.set_defaults(func=cmd_dilation)

    p = sub.add_parser("decide", parents=[common], help="preference matrix under a decision rule")
    p.add_argument("--rule", type=int, choices=(1, 2, 3, 4), required=True,
                   help="1 lower EU, 2 upper EU, 3 interval dominance, 4 dominance under every measure")
    p.add_argument("--acts", required=True, help="decision problem name or comma-separated acts")
    p.add_argument("--set")
    p.add_argument("--utilities")
    p.set_defaults(func=cmd_decide)

    for name, func, text in (("coherent", cmd_coherent, "decide coherence of a lower probability"),
                             ("mobius", cmd_mobius, "Möbius masses of a set function")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--set-function")
        p.add_argument("--set", help="use the lower probability of this credal set")
        p.set_defaults(func=func)

    p = sub.add_parser("equivalent", parents=[common],
                       help="do two sets give the same lower expectations")
    p.add_argument("--sets", nargs=2, required=True, metavar="SET")
    p.set_defaults(func=cmd_equivalent)

    p = sub.add_parser("validate", parents=[common], help="load and check a model file")
    p.add_argument("path")
    p.add_argument("--dump", action="store_true", help="print the canonical serialization")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("fixtures", parents=[common], help="list or check bundled fixtures")
    p.add_argument("action", choices=("list", "check"))
    p.add_argument("names", nargs="*")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("scenario", parents=[common], help="run a worked example end to end")
    p.add_argument("name", choices=("marbles", "three-prisoners", "coin-learning", "coin-posterior"))
    p.add_argument("--alpha", type=_rational, default=Fraction(1, 2),
                   help="three-prisoners: chance the jailer names b when a is pardoned")
    p.add_argument("--biases", help="coin-learning: comma-separated candidate biases")
    p.add_argument("--grid", help="coin-learning: start:stop:step grid of biases")
    p.add_argument("--policy", choices=("bayes", "likelihood"))
    p.add_argument("--q", type=_rational)
    p.add_argument("--steps", type=int, help="coin-learning: number of simulated tosses")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--true-bias", type=_rational, default=Fraction(1, 2))
    p.add_argument("--observe", help="coin-learning: explicit tosses such as HHT")
    p.add_argument("--p", type=_rational, default=Fraction(1, 2), help="coin-posterior: prior on bias a")
    p.add_argument("--a", type=_rational, default=Fraction(1, 3))
    p.add_argument("--b", type=_rational, default=Fraction(2, 3))
    p.set_defaults(func=cmd_scenario)
    return parser


# -- output -----------------------------------------------------------------------------

def _colour(text: str, stream) -> str:
    if os.environ.get("NO_COLOR") or not getattr(stream, "isatty", lambda: False)():
        return text
    for word, code in ((f" {FAIL} ", "31"), (f" {ERRATUM} ", "33"), (f" {PASS} ", "32")):
        text = text.replace(word, f" \x1b[{code}m{word.strip()}\x1b[0m ")
    return text


def render(reports: Sequence[Report], mode: str, stream) -> str:
    if mode == "json":
        data = reports[0].as_json() if len(reports) == 1 else [r.as_json() for r in reports]
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if mode == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for i, r in enumerate(reports):
            if i:
                buf.write("\n")
            writer.writerows(r.csv_rows())
        return buf.getvalue()
    return _colour("\n\n".join(r.table() for r in reports) + "\n", stream)


def _fail(kind: str, message: str, code: int, extra: Optional[dict] = None) -> int:
    err = {"error": kind, "message": message, "exit_code": code}
    if extra:
        err.update(extra)
    sys.stderr.write(json.dumps(err, ensure_ascii=False) + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        reports = args.func(args)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except ModelError as exc:
        d = exc.as_dict()
        d.pop("error")
        return _fail("model", d.pop("message"), EXIT_MODEL, d)
    except UnknownFixture as exc:
        return _fail("usage", exc.args[0], EXIT_USAGE)
    except KeyError as exc:
        return _fail("model", str(exc.args[0]) if exc.args else "unknown name", EXIT_MODEL)
    except (CredalError, ZeroConditioningEvent, ArithmeticError) as exc:
        return _fail("computation", f"{type(exc).__name__}: {exc}", EXIT_COMPUTE)
    except ValueError as exc:
        return _fail("usage", str(exc), EXIT_USAGE)
    mode = "json" if args.json else "csv" if args.csv else "table"
    sys.stdout.write(render(reports, mode, sys.stdout))
    if args.command == "fixtures" and args.action == "check":
        if not all(r.facts.get("passed", True) for r in reports):
            return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
