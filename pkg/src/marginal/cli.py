"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 failed hypothesis under ``--strict``,
3 internal disagreement (oracle mismatch or routes that disagree).
"""

from __future__ import annotations

import argparse
import sys
import warnings

from . import jsonio, oracle
from .errors import EngineError, HypothesisWarning, MarginalError
from .geometry import EQUAL, SUBSET, normal_cone_at, same_set
from .multipliers import lambda0_set, lambda_inf_set, lambda_set
from .program import OPTIMAL, slater_point, solve
from .rational import as_vector
from .stability import (
    analyze, singular_upper_estimate, singular_value_subdifferential, upper_estimate,
    value_subdifferential, value_subdifferential_paths, witness,
)

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_MISMATCH = 0, 1, 2, 3


class _Hypothesis(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors: exit 1, keeping 2 for failed hypotheses."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _point(text, n, what):
    parts = [] if text.strip() == "" else text.split(",")
    vec = as_vector(parts, what)
    if len(vec) != n:
        raise MarginalError(f"{what}: expected {n} comma-separated rationals, got {len(vec)}")
    return vec


def _emit(args, command, body, lines):
    if args.format == "json":
        sys.stdout.write(jsonio.dumps(jsonio.envelope(command, body)))
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _status_only(args, command, xbar, sol):
    _emit(args, command, jsonio.solve_to_dict(xbar, sol),
          [f"status: {sol.status}", f"mu: {jsonio.scalar_out(sol.value)}"])
    return EXIT_OK


def _anchor(args, P):
    """Solve at ``--at``; return ``(xbar, ybar, sol)`` with ``ybar`` None if mu is not attained."""
    xbar = _point(args.at, P.nx, "--at")
    sol = solve(P, xbar)
    if sol.status != OPTIMAL:
        return xbar, None, sol
    if getattr(args, "ybar", None):
        ybar = _point(args.ybar, P.ny, "--ybar")
    else:
        ybar = witness(sol.solutions)
    return xbar, ybar, sol


def _hypotheses(args, P):
    s = slater_point(P)
    if not s.ok:
        if args.strict:
            raise _Hypothesis(f"no Slater point: {s.reason}")
        print(f"warning: no Slater point ({s.reason}); results are estimates only", file=sys.stderr)
    return s


def cmd_solve(args, P):
    xbar = _point(args.at, P.nx, "--at")
    sol = solve(P, xbar)
    lines = [f"status: {sol.status}", f"mu: {jsonio.scalar_out(sol.value)}"]
    if sol.optimal:
        lines.append(f"M: {jsonio.describe(sol.solutions)}")
    _emit(args, "solve", jsonio.solve_to_dict(xbar, sol), lines)
    return EXIT_OK


def _set_command(name, label, compute):
    def run(args, P):
        xbar, ybar, sol = _anchor(args, P)
        if ybar is None:
            return _status_only(args, name, xbar, sol)
        _hypotheses(args, P)
        S = compute(P, xbar, ybar)
        body = {"x": jsonio.vector_out(xbar), "y": jsonio.vector_out(ybar), "set": jsonio.polyhedron_to_dict(S)}
        _emit(args, name, body, [f"{label}({','.join(jsonio.vector_out(xbar))}) = {jsonio.describe(S)}"])
        return EXIT_OK
    return run


cmd_subdiff = _set_command("subdiff", "∂mu", value_subdifferential)
cmd_singular = _set_command("singular", "∂^∞mu", singular_value_subdifferential)


def cmd_multipliers(args, P):
    xbar, ybar, sol = _anchor(args, P)
    if ybar is None:
        return _status_only(args, "multipliers", xbar, sol)
    _hypotheses(args, P)
    sets = {"lambda0": lambda0_set(P, xbar, ybar), "lambda": lambda_set(P, xbar, ybar),
            "lambda_inf": lambda_inf_set(P, xbar, ybar)}
    optimal = sol.solutions.contains(ybar)
    body = {"x": jsonio.vector_out(xbar), "y": jsonio.vector_out(ybar), "anchor_optimal": optimal,
            **{k: jsonio.multipliers_to_dict(v) for k, v in sets.items()}}
    lines = [f"anchor: x = {','.join(jsonio.vector_out(xbar))}, y = {','.join(jsonio.vector_out(ybar))}"
             + ("" if optimal else " (not optimal)")]
    lines += [f"{label} = {jsonio.describe(M.set)}" for label, M in
              (("Λ0", sets["lambda0"]), ("Λ", sets["lambda"]), ("Λ^∞", sets["lambda_inf"]))]
    _emit(args, "multipliers", body, lines)
    return EXIT_OK


def cmd_estimate(args, P):
    xbar, ybar, sol = _anchor(args, P)
    if ybar is None:
        return _status_only(args, "estimate", xbar, sol)
    _hypotheses(args, P)
    est = upper_estimate(P, xbar, ybar)
    sing = singular_upper_estimate(P, xbar, ybar)
    body = {"x": jsonio.vector_out(xbar), "y": jsonio.vector_out(ybar),
            "upper_estimate": jsonio.estimate_to_dict(est),
            "singular_upper_estimate": jsonio.estimate_to_dict(sing)}
    lines = [f"upper estimate: {jsonio.describe(est.set)} ({'strict' if est.strict else est.relation})",
             f"singular upper estimate: {jsonio.describe(sing.set)} "
             f"({'strict' if sing.strict else sing.relation})"]
    _emit(args, "estimate", body, lines)
    return EXIT_OK


def cmd_analyze(args, P):
    xbar = _point(args.at, P.nx, "--at")
    ybar = _point(args.ybar, P.ny, "--ybar") if args.ybar else None
    if solve(P, xbar).optimal:
        _hypotheses(args, P)
    report = analyze(P, xbar, ybar)
    body = jsonio.report_to_dict(report)
    lines = [f"status: {report.status}", f"mu: {jsonio.scalar_out(report.mu_value)}"]
    if report.subdiff_mu is not None:
        strict = report.strict_flags
        lines += [
            f"ybar: ({', '.join(jsonio.vector_out(report.anchor[1]))})",
            f"∂mu: {jsonio.describe(report.subdiff_mu)}",
            f"∂^∞mu: {jsonio.describe(report.singular_subdiff_mu)}",
            f"Λ0: {jsonio.describe(report.lambda0.set)}",
            f"Λ: {jsonio.describe(report.lambda_.set)}",
            f"Λ^∞: {jsonio.describe(report.lambda_inf.set)}",
            f"upper estimate: {jsonio.describe(report.upper_estimate.set)}"
            f" (strict: {str(strict['upper_estimate']).lower()})",
            f"singular upper estimate: {jsonio.describe(report.singular_upper_estimate.set)}"
            f" (strict: {str(strict['singular_upper_estimate']).lower()})",
            f"qualified: {str(report.qualified).lower()}",
            f"oracle: support {'ok' if report.oracle['support_ok'] else 'MISMATCH'}, "
            f"singular {'ok' if report.oracle['singular_ok'] else 'MISMATCH'}",
        ]
        lines += [f"warning: {w}" for w in report.warnings]
    _emit(args, "analyze", body, lines)
    if report.subdiff_mu is not None and not (report.oracle["support_ok"] and report.oracle["singular_ok"]):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(args, P):
    xbar, ybar, sol = _anchor(args, P)
    if ybar is None:
        return _status_only(args, "verify", xbar, sol)
    _hypotheses(args, P)
    checks = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        paths = value_subdifferential_paths(P, xbar, ybar)
        S = paths["aggregate"]
        checks["three_paths_agree"] = all(same_set(S, T) for T in paths.values())
        sing = singular_value_subdifferential(P, xbar, ybar)
    checks["singular_identity"] = same_set(sing, normal_cone_at(oracle.dom_mu_projection(P), xbar))
    checks["upper_estimate_contains"] = upper_estimate(P, xbar, ybar, S).relation in (EQUAL, SUBSET)
    checks["singular_estimate_contains"] = singular_upper_estimate(P, xbar, ybar, sing).relation in (EQUAL, SUBSET)
    dirs = oracle.canonical_directions(P.nx, args.dirs, args.seed)
    verdicts = oracle.support_check(S, P, xbar, dirs)
    checks["support_identity"] = all(v.equal for v in verdicts)
    body = {"x": jsonio.vector_out(xbar), "y": jsonio.vector_out(ybar), "checks": checks,
            "directions": len(dirs),
            "mismatches": [{"direction": jsonio.vector_out(v.direction), "support": jsonio.scalar_out(v.support),
                            "derivative": jsonio.scalar_out(v.derivative)}
                           for v in verdicts if not v.equal]}
    lines = [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in checks.items()]
    lines.append(f"directions checked: {len(dirs)}")
    _emit(args, "verify", body, lines)
    return EXIT_OK if all(checks.values()) else EXIT_MISMATCH


COMMANDS = {
    "solve": (cmd_solve, "optimal value and solution set at --at"),
    "subdiff": (cmd_subdiff, "exact subdifferential of mu"),
    "singular": (cmd_singular, "exact singular subdifferential of mu"),
    "multipliers": (cmd_multipliers, "multiplier sets Λ0, Λ and Λ^∞"),
    "estimate": (cmd_estimate, "both upper estimates and their strictness"),
    "analyze": (cmd_analyze, "full stability report"),
    "verify": (cmd_verify, "cross-check against the brute-force oracle"),
}


def build_parser():
    parser = _Parser(prog="marginal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("problem", help="problem file (JSON); '-' reads standard input")
        p.add_argument("--at", required=True,
                       help="parameter xbar as comma-separated rationals (use --at=-1 for negatives)")
        if name != "solve":
            p.add_argument("--ybar", help="solution ybar (default: least vertex of M(xbar))")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--strict", action="store_true", help="exit 2 when the Slater condition fails")
        if name == "verify":
            p.add_argument("--dirs", type=int, default=50, help="number of directions (default 50)")
            p.add_argument("--seed", type=int, default=0, help="seed for the random directions")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.problem == "-":
            text = sys.stdin.read()
        else:
            with open(args.problem, encoding="utf-8") as fh:
                text = fh.read()
        P = jsonio.parse_problem(text)
        with warnings.catch_warnings():
            # _hypotheses reports a missing Slater point on stderr itself
            warnings.simplefilter("ignore", HypothesisWarning)
            return COMMANDS[args.command][0](args, P)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _Hypothesis as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except EngineError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (MarginalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
