"""Command-line front end.

One subcommand per engine capability, each reading instance (``-i``),
query (``-q``), and constraint (``-c``) files and emitting either plain
text or, with ``--json``, a canonical report: fixed key order, facts in
canonical order, responsibilities as exact ``{num, den}`` pairs.  Repeated
runs on identical inputs produce byte-identical output.

Exit codes: 0 success (including negative decisions), 1 usage or parse
errors, 2 semantic errors, 3 enumeration-cap exhaustion.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import causality, diagnosis, oracle, preferences
from .errors import CapExceededError, ParseError, SemanticError
from .repairs import consistent_answer as _consistent_answer
from .repairs import repairs as _compute_repairs
from .parsing import (
    constraint_set,
    parse_fact,
    parse_fact_list,
    parse_instance,
    parse_priorities,
    single_query,
)
from .queries import dc_of_query
from .relational import fact_key, format_fact

USAGE_ERROR = 1
SEMANTIC_ERROR = 2
CAP_ERROR = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fraction_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _fraction_json(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def _sorted_facts(facts) -> list[str]:
    return [format_fact(f) for f in sorted(facts, key=fact_key)]


def _digest(path: str) -> dict:
    with open(path, "rb") as handle:
        payload = handle.read()
    return {"path": path, "sha256": hashlib.sha256(payload).hexdigest()}


class _Inputs:
    """Lazily parsed input files, remembering digests for the report."""

    def __init__(self, args):
        self.args = args
        self.digests: dict[str, dict] = {}

    def _read(self, role: str, path: str) -> str:
        self.digests[role] = _digest(path)
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()

    def instance(self):
        return parse_instance(self._read("instance", self.args.instance))

    def query(self):
        return single_query(self._read("query", self.args.query))

    def constraints(self):
        return constraint_set(self._read("constraints", self.args.constraints))

    def priorities(self):
        return parse_priorities(self._read("priority", self.args.priority))


def _render(args, command: str, inputs: _Inputs, result: dict, text_lines, warnings=None):
    if args.json:
        report = {
            "command": command,
            "argv": list(args.raw_argv),
            "inputs": {k: inputs.digests[k] for k in sorted(inputs.digests)},
            "result": result,
            "warnings": list(warnings or []),
        }
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = list(text_lines)
    lines.extend(f"warning: {w}" for w in warnings or [])
    return "\n".join(lines) + "\n" if lines else ""


def _cause_listing(pairs) -> tuple[dict, list[str]]:
    ordered = sorted(pairs, key=lambda p: (-p[1], fact_key(p[0])))
    result = {
        "causes": [
            {"fact": format_fact(t), "responsibility": _fraction_json(rho)}
            for t, rho in ordered
        ]
    }
    lines = [f"{format_fact(t)}  {_fraction_text(rho)}" for t, rho in ordered]
    return result, lines


def _repair_payload(reps) -> list[dict]:
    return [
        {"kept": _sorted_facts(r.kept.facts), "removed": _sorted_facts(r.removed)}
        for r in reps
    ]


def _repair_lines(reps) -> list[str]:
    return [
        "repair: keep {%s}  remove {%s}"
        % (", ".join(_sorted_facts(r.kept.facts)), ", ".join(_sorted_facts(r.removed)))
        for r in reps
    ]


# ---------------------------------------------------------------------------
# Subcommand implementations


def _cmd_causes(args, inputs: _Inputs, use_oracle: bool = False) -> str:
    d = inputs.instance()
    q = inputs.query()
    if use_oracle:
        scored = oracle.oracle_causes_and_responsibility(d, q).items()
        pairs = [(t, rho) for t, rho in scored if rho > 0]
    else:
        pairs = [
            (t, causality.responsibility(d, q, t)) for t in causality.actual_causes(d, q)
        ]
    result, lines = _cause_listing(pairs)
    if not lines:
        lines = ["no causes"]
    return _render(args, "oracle.causes" if use_oracle else "causes", inputs, result, lines)


def _cmd_responsibility(args, inputs: _Inputs) -> str:
    d = inputs.instance()
    q = inputs.query()
    t = parse_fact(args.tuple)
    rho = causality.responsibility(d, q, t)
    result = {"fact": format_fact(t), "responsibility": _fraction_json(rho)}
    return _render(args, "responsibility", inputs, result, [_fraction_text(rho)])


def _cmd_mrc(args, inputs: _Inputs) -> str:
    d = inputs.instance()
    q = inputs.query()
    top, value = causality.most_responsible_causes(d, q)
    result = {
        "causes": _sorted_facts(top),
        "responsibility": _fraction_json(value),
    }
    lines = [f"{name}  {_fraction_text(value)}" for name in _sorted_facts(top)] or [
        "no causes"
    ]
    return _render(args, "mrc", inputs, result, lines)


def _cmd_check_contingency(args, inputs: _Inputs) -> str:
    d = inputs.instance()
    q = inputs.query()
    t = parse_fact(args.tuple)
    gamma = frozenset(parse_fact_list(args.gamma))
    verdict = causality.check_minimal_contingency(d, q, t, gamma)
    result = {
        "fact": format_fact(t),
        "contingency": _sorted_facts(gamma),
        "minimal_contingency": verdict,
    }
    return _render(args, "check-contingency", inputs, result, [str(verdict).lower()])


def _cmd_rdp(args, inputs: _Inputs) -> str:
    d = inputs.instance()
    q = inputs.query()
    t = parse_fact(args.tuple)
    threshold = _parse_threshold(args.threshold)
    verdict = causality.rdp_decide(d, q, t, threshold)
    result = {
        "fact": format_fact(t),
        "threshold": _fraction_text(threshold),
        "exceeds": verdict,
    }
    return _render(args, "rdp", inputs, result, [str(verdict).lower()])


def _parse_threshold(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SemanticError(f"malformed threshold {text!r}") from exc
    if value != 0 and value.numerator != 1:
        raise SemanticError(f"threshold must be 0 or 1/k, got {text!r}")
    return value


def _cmd_repairs(args, inputs: _Inputs, use_oracle: bool = False) -> str:
    d = inputs.instance()
    sigma = inputs.constraints()
    semantics = args.semantics
    if use_oracle:
        if semantics not in ("s", "c", "endo"):
            raise SemanticError(f"oracle repairs do not cover semantics {semantics!r}")
        kept_sets = sorted(
            oracle.oracle_repairs(d, sigma, semantics),
            key=lambda kept: sorted(fact_key(f) for f in d.facts - kept),
        )
        result = {
            "semantics": semantics,
            "repairs": [
                {
                    "kept": _sorted_facts(kept),
                    "removed": _sorted_facts(d.facts - kept),
                }
                for kept in kept_sets
            ],
        }
        lines = [
            "repair: keep {%s}  remove {%s}"
            % (
                ", ".join(_sorted_facts(kept)),
                ", ".join(_sorted_facts(d.facts - kept)),
            )
            for kept in kept_sets
        ]
        return _render(args, "oracle.repairs", inputs, result, lines)
    if semantics in ("s", "c"):
        reps = _compute_repairs(d, sigma, semantics, args.max_enum)
    elif semantics == "go":
        if not args.priority:
            raise SemanticError("global-optimal repairs need --priority")
        priority = preferences.validate_priority(d, sigma, inputs.priorities())
        reps = preferences.global_optimal_repairs(d, sigma, priority, args.max_enum)
    elif semantics == "endo":
        reps = preferences.endogenous_repairs(d, sigma, args.max_enum)
    elif semantics == "null":
        null_reps = preferences.null_repairs(d, sigma, args.max_enum)
        result = {
            "semantics": "null",
            "repairs": [
                {
                    "facts": _sorted_facts(r.result.facts),
                    "diff": sorted(str(c) for c in r.diff),
                }
                for r in sorted(
                    null_reps, key=lambda r: sorted(str(c) for c in r.diff)
                )
            ],
        }
        lines = [
            "repair: {%s}  diff {%s}"
            % (
                ", ".join(_sorted_facts(r.result.facts)),
                ", ".join(sorted(str(c) for c in r.diff)),
            )
            for r in sorted(null_reps, key=lambda r: sorted(str(c) for c in r.diff))
        ]
        return _render(args, "repairs", inputs, result, lines)
    else:
        raise SemanticError(f"unknown repair semantics {semantics!r}")
    result = {"semantics": semantics, "repairs": _repair_payload(reps)}
    return _render(args, "repairs", inputs, result, _repair_lines(reps))


def _cmd_cqa(args, inputs: _Inputs) -> str:
    d = inputs.instance()
    sigma = inputs.constraints()
    atoms = parse_fact_list(args.atoms)
    if not atoms:
        raise SemanticError("--atoms names no ground atoms")
    verdict = _consistent_answer(d, sigma, atoms, args.semantics)
    result = {
        "atoms": _sorted_facts(atoms),
        "semantics": args.semantics,
        "consistent": verdict,
    }
    return _render(args, "cqa", inputs, result, [str(verdict).lower()])


def _cmd_diagnose(args, inputs: _Inputs) -> str:
    d = inputs.instance()
    q = inputs.query()
    problem = diagnosis.build_problem(d, q)
    containing = parse_fact(args.containing) if args.containing else None
    found = diagnosis.diagnoses(problem, args.kind, containing, args.max_enum)
    result = {
        "kind": args.kind,
        "conflicts": [_sorted_facts(e) for e in problem.conflicts],
        "diagnoses": [_sorted_facts(diag.abnormal) for diag in found],
    }
    lines = ["conflict: {%s}" % ", ".join(_sorted_facts(e)) for e in problem.conflicts]
    lines += [
        "diagnosis: {%s}" % ", ".join(_sorted_facts(diag.abnormal)) for diag in found
    ]
    if args.emit_theory:
        theory = diagnosis.render_theory(problem)
        result["theory"] = theory.splitlines()
        lines += theory.splitlines()
    return _render(args, "diagnose", inputs, result, lines)


def _cmd_preferred_causes(args, inputs: _Inputs) -> str:
    d = inputs.instance()
    q = inputs.query()
    pc = preferences.validate_causal_priority(d, q, inputs.priorities())
    pairs = preferences.preferred_causes(d, q, pc, args.max_enum)
    result, lines = _cause_listing(pairs)
    if not lines:
        lines = ["no preferred causes"]
    return _render(args, "preferred-causes", inputs, result, lines)


# ---------------------------------------------------------------------------
# Argument wiring


def _build_parser() -> _Parser:
    parser = _Parser(prog="causerepair", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True, query=False, constraints=False):
        if instance:
            p.add_argument("-i", "--instance", required=True)
        if query:
            p.add_argument("-q", "--query", required=True)
        if constraints:
            p.add_argument("-c", "--constraints", required=True)
        p.add_argument("--json", action="store_true")
        p.add_argument("--max-enum", type=int, default=None)

    p = sub.add_parser("causes", help="actual causes with responsibilities")
    common(p, query=True)

    p = sub.add_parser("responsibility", help="responsibility of one fact")
    common(p, query=True)
    p.add_argument("--tuple", required=True)

    p = sub.add_parser("mrc", help="most responsible causes")
    common(p, query=True)

    p = sub.add_parser("check-contingency", help="minimal contingency test")
    common(p, query=True)
    p.add_argument("--tuple", required=True)
    p.add_argument("--gamma", default="")

    p = sub.add_parser("rdp", help="responsibility threshold decision")
    common(p, query=True)
    p.add_argument("--tuple", required=True)
    p.add_argument("--threshold", required=True)

    p = sub.add_parser("repairs", help="repairs under a chosen semantics")
    common(p, constraints=True)
    p.add_argument("--semantics", default="s", choices=["s", "c", "go", "endo", "null"])
    p.add_argument("--priority")

    p = sub.add_parser("cqa", help="consistent answers for ground atoms")
    common(p, constraints=True)
    p.add_argument("--atoms", required=True)
    p.add_argument("--semantics", default="s", choices=["s", "c"])

    p = sub.add_parser("diagnose", help="conflicts and minimal diagnoses")
    common(p, query=True)
    p.add_argument("--kind", default="s", choices=["s", "c"])
    p.add_argument("--containing")
    p.add_argument("--emit-theory", action="store_true")

    p = sub.add_parser("preferred-causes", help="causes under a causal priority")
    common(p, query=True)
    p.add_argument("--priority", required=True)

    p = sub.add_parser("oracle", help="brute-force reference results")
    oracle_sub = p.add_subparsers(dest="oracle_command", required=True)
    p = oracle_sub.add_parser("causes")
    common(p, query=True)
    p = oracle_sub.add_parser("repairs")
    common(p, constraints=True)
    p.add_argument("--semantics", default="s", choices=["s", "c", "endo"])

    return parser


_DISPATCH = {
    "causes": _cmd_causes,
    "responsibility": _cmd_responsibility,
    "mrc": _cmd_mrc,
    "check-contingency": _cmd_check_contingency,
    "rdp": _cmd_rdp,
    "repairs": _cmd_repairs,
    "cqa": _cmd_cqa,
    "diagnose": _cmd_diagnose,
    "preferred-causes": _cmd_preferred_causes,
}


def execute(argv: list[str]) -> tuple[int, str, str]:
    """Run one invocation; returns (exit code, stdout text, stderr text)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        return USAGE_ERROR, "", f"usage error: {exc}\n"
    args.raw_argv = list(argv)
    inputs = _Inputs(args)
    try:
        if args.command == "oracle":
            if args.oracle_command == "causes":
                out = _cmd_causes(args, inputs, use_oracle=True)
            else:
                out = _cmd_repairs(args, inputs, use_oracle=True)
        else:
            out = _DISPATCH[args.command](args, inputs)
        return 0, out, ""
    except (ParseError, OSError) as exc:
        return USAGE_ERROR, "", f"error: {exc}\n"
    except SemanticError as exc:
        return SEMANTIC_ERROR, "", f"error: {exc}\n"
    except CapExceededError as exc:
        return CAP_ERROR, "", f"error: {exc}\n"


def main() -> None:
    code, out, err = execute(sys.argv[1:])
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    sys.exit(code)


if __name__ == "__main__":
    main()
