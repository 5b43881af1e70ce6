"""Acceptance gate: one check per criterion, each reported as a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import random
import sys
import time
from importlib import resources

import pytest

from marginal import jsonio
from marginal.functions import PWLConvexFunction, partial_subdifferential, subdifferential
from marginal.geometry import (
    EQUAL, SUBSET, HPolyhedron, VPolyhedron, cartesian_product, intersect, interval,
    normal_cone_at, same_set, set_relation, to_hrep, to_vrep,
)
from marginal.instances import qualified_instances
from marginal.multipliers import STANDARD, LagrangianSpec, lambda0_set, lambda_set, partial_x_lagrangian_union
from marginal.oracle import canonical_directions, dom_mu_projection, support_check
from marginal.program import domain_slice, feasible_set, kkt_inclusion_check, solve
from marginal.rational import INF, Q, dot
from marginal.stability import (
    singular_upper_estimate, singular_value_subdifferential, upper_estimate,
    value_subdifferential_paths,
)

RESULTS: dict[int, tuple[bool, str]] = {}

SWEEP_SIZE = 100
SWEEP_SEED = 0
DIRECTIONS = 50


def record(number, ok, detail):
    RESULTS[number] = (ok, detail)
    return ok, detail


def example_42():
    text = resources.files("marginal").joinpath("data", "example_42.json").read_text(encoding="utf-8")
    return jsonio.parse_problem(text)


def iv(lo, hi):
    return interval(None if lo is None else Q(lo), None if hi is None else Q(hi))


# ---------------------------------------------------------------- worked examples

def criterion_1():
    start = time.perf_counter()
    phi = PWLConvexFunction(2, [((1, 1), 0), ((-1, -1), 0)])
    full = subdifferential(phi, (0, 0))
    dx = partial_subdifferential(phi, 1, (0, 0), "x")
    dy = partial_subdifferential(phi, 1, (0, 0), "y")
    ok = (same_set(full, VPolyhedron(2, [(1, 1), (-1, -1)]))
          and same_set(dx, iv(-1, 1)) and same_set(dy, iv(-1, 1))
          and set_relation(full, cartesian_product(dx.h, dy.h)) == SUBSET)
    elapsed = time.perf_counter() - start
    return record(1, ok and elapsed < 1, f"∂|x+y|(0,0) segment, partials [-1,1], strict product ({elapsed:.3f}s)")


def criterion_2():
    start = time.perf_counter()
    P = example_42()
    paths = value_subdifferential_paths(P, (0,), (0,))
    ok = all(same_set(S, iv(-1, 0)) for S in paths.values())
    ok = ok and same_set(lambda0_set(P, (0,), (0,)).set, iv(0, None))
    elapsed = time.perf_counter() - start
    return record(2, ok and elapsed < 1, f"∂mu(0) = [-1,0] on all routes, Λ0 = [0,+inf) ({elapsed:.3f}s)")


def criterion_3():
    start = time.perf_counter()
    P = example_42()
    L = lambda_set(P, (0,), (0,))
    union = partial_x_lagrangian_union(LagrangianSpec(P, STANDARD, ((0,), (0,))), L)
    ok = (same_set(L.set, iv(0, 1)) and same_set(union, iv(-1, 1))
          and set_relation(iv(-1, 0), union) == SUBSET)
    elapsed = time.perf_counter() - start
    return record(3, ok and elapsed < 1, f"Λ = [0,1], union of ∂_xL = [-1,1], strict ({elapsed:.3f}s)")


# ---------------------------------------------------------------- random sweep

@functools.lru_cache(maxsize=None)
def sweep():
    """Every per-instance fact needed by criteria 4 to 8, timed as a whole."""
    start = time.perf_counter()
    instances = qualified_instances(SWEEP_SIZE, seed=SWEEP_SEED)
    rows = []
    for inst in instances:
        rows.append(_check_instance(inst.program, inst.xbar, inst.ybar, inst.seed))
    example = example_42()
    rows.append(_check_instance(example, (Q(0),), (Q(0),), -1))
    return rows, time.perf_counter() - start


def _check_instance(P, xbar, ybar, seed):
    paths = value_subdifferential_paths(P, xbar, ybar)
    S = paths["aggregate"]
    row = {"seed": seed, "agree": all(same_set(S, T) for T in paths.values())}
    verdicts = support_check(S, P, xbar, canonical_directions(P.nx, DIRECTIONS, seed))
    row["support_ok"] = all(v.equal for v in verdicts)
    row["directions"] = len(verdicts)
    row["infinite"] = sum(v.derivative == INF for v in verdicts)
    sing = singular_value_subdifferential(P, xbar, ybar)
    row["singular_ok"] = same_set(sing, normal_cone_at(dom_mu_projection(P), xbar))
    est = upper_estimate(P, xbar, ybar, S)
    sest = singular_upper_estimate(P, xbar, ybar, sing)
    row["inclusions"] = est.relation in (EQUAL, SUBSET) and sest.relation in (EQUAL, SUBSET)
    row["strict"] = est.strict or sest.strict
    M = solve(P, xbar).solutions
    G = intersect(feasible_set(P, xbar), domain_slice(P, xbar))
    kkt, opt, nonopt = True, 0, 0
    for v in G.v.points:
        optimal = M.contains(v)
        opt += optimal
        nonopt += not optimal
        kkt &= kkt_inclusion_check(P, xbar, v).holds == optimal
    row.update(kkt=kkt, optimal_vertices=opt, nonoptimal_vertices=nonopt)
    return row


def criterion_4():
    rows, elapsed = sweep()
    n = len(rows) - 1
    ok = n >= 100 and all(r["agree"] for r in rows) and elapsed < 300
    return record(4, ok, f"{n} random instances + example, three routes agree ({elapsed:.1f}s sweep)")


def criterion_5():
    rows, elapsed = sweep()
    dirs = sum(r["directions"] for r in rows)
    inf = sum(r["infinite"] for r in rows)
    ok = all(r["support_ok"] for r in rows) and all(r["directions"] >= 50 for r in rows) and inf > 0
    ok = ok and elapsed < 300
    return record(5, ok, f"{dirs} directions, {inf} with +inf derivative, support = oracle")


def criterion_6():
    rows, _ = sweep()
    return record(6, all(r["singular_ok"] for r in rows), "∂^∞mu = N(xbar; dom mu) on every instance")


def criterion_7():
    rows, _ = sweep()
    strict = sum(r["strict"] for r in rows)
    ok = all(r["inclusions"] for r in rows) and strict > 0 and rows[-1]["strict"]
    return record(7, ok, f"both inclusions hold; {strict} strict instances incl. the bundled example")


def criterion_8():
    rows, _ = sweep()
    opt = sum(r["optimal_vertices"] for r in rows)
    nonopt = sum(r["nonoptimal_vertices"] for r in rows)
    ok = all(r["kkt"] for r in rows) and opt > 0 and nonopt > 0
    return record(8, ok, f"KKT holds at {opt} optimal vertices, fails at {nonopt} non-optimal ones")


# ---------------------------------------------------------------- kernel

def criterion_9():
    start = time.perf_counter()
    rng = random.Random(9)
    bad = 0
    for _ in range(500):
        dim = rng.randint(1, 4)
        rows = [(tuple(rng.randint(-5, 5) for _ in range(dim)), rng.randint(-5, 5))
                for _ in range(rng.randint(0, 6))]
        P = HPolyhedron(dim, rows)
        V = to_vrep(P)
        if not same_set(to_hrep(V), P) or V.is_empty() == P.feasible():
            bad += 1
            continue
        for z in V.points:
            N = normal_cone_at(P, z)
            for w in N.rays + N.lines:
                if any(dot(w, tuple(p - q for p, q in zip(pt, z))) > 0 for pt in V.points) \
                        or any(dot(w, r) > 0 for r in V.rays) or any(dot(w, l) for l in V.lines):
                    bad += 1
    elapsed = time.perf_counter() - start
    return record(9, bad == 0 and elapsed < 60, f"500 polyhedra, {bad} failures ({elapsed:.1f}s)")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(check):
    ok, detail = check()
    assert ok, detail


def summary_lines():
    return [f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}" for n, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    for check in CRITERIA:
        try:
            check()
        except Exception as exc:  # report and keep going
            record(CRITERIA.index(check) + 1, False, f"raised {exc!r}")
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
