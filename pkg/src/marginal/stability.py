"""Subdifferentials of the optimal value function.

Every set here is computed along at least two independent routes and the
routes are compared exactly before anything is returned:

* the aggregate route, ``∂phi + A + N(C)`` cut by ``y* = 0``;
* the multiplier route, the homogenised lift over ``Λ0`` from
  :mod:`marginal.multipliers`;
* (for ``∂mu`` only) the ``x* + u*`` route, which never forms the aggregate
  sum in generator form.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import EngineError, HypothesisWarning, NotOptimalError
from .functions import subdifferential
from .geometry import (
    SUBSET, HPolyhedron, VPolyhedron, as_h, coordinate_subspace, embed, intersect_all,
    minkowski_sum_all, normal_cone_at, project, same_set, set_relation,
)
from .multipliers import (
    HATTED, STANDARD, LagrangianSpec, MultiplierPolyhedron, _lambda0_rows, lambda0_set,
    lambda_inf_set, lambda_set, lifted_graph, partial_x_lagrangian_union,
)
from .program import (
    OPTIMAL, ParametricProgram, SlaterResult, aubin_regularity, slater_point, solve,
)
from .rational import ONE, Q, ZERO


class ASet(NamedTuple):
    """``Σ_{i active} cone ∂g_i + span{(x*_j, y*_j)}`` in ``Q^(nx+ny)``."""

    polyhedron: VPolyhedron

    @classmethod
    def at(cls, P: ParametricProgram, xbar, ybar) -> "ASet":
        z = tuple(xbar) + tuple(ybar)
        rays = []
        for i in P.active_set(xbar, ybar):
            S = subdifferential(P.gs[i], z)
            rays += S.points
        lines = [h.gradient for h in P.hs]
        return cls(VPolyhedron(P.dim, ((ZERO,) * P.dim,), rays, lines))


class Estimate(NamedTuple):
    set: HPolyhedron
    strict: bool
    relation: str


def _checked_anchor(P, xbar, ybar):
    xbar = tuple(Q(v) for v in xbar)
    ybar = tuple(Q(v) for v in ybar)
    sol = solve(P, xbar)
    if sol.status != OPTIMAL:
        raise NotOptimalError(f"mu(xbar) is not attained (status {sol.status})")
    if not sol.solutions.contains(ybar):
        raise NotOptimalError("ybar is not a solution at xbar")
    return xbar, ybar


def _warn_if_unqualified(P):
    s = slater_point(P)
    if not s.ok:
        warnings.warn(f"no Slater point ({s.reason}); the formula is not guaranteed",
                      HypothesisWarning, stacklevel=3)
    return s


def _x_cut(S, P):
    """``pr_x (S ∩ {y* = 0})``."""
    cut = intersect_all([as_h(S), coordinate_subspace(P.dim, range(P.nx, P.dim))], P.dim)
    return project(cut, range(P.nx))


def _aggregate_path(P, xbar, ybar, base):
    z = xbar + ybar
    S = minkowski_sum_all([base, ASet.at(P, xbar, ybar).polyhedron, normal_cone_at(P.C, z)], P.dim)
    return _x_cut(S, P)


def _multiplier_path(P, xbar, ybar, base):
    z = xbar + ybar
    polys = [subdifferential(g, z) for g in P.gs]
    dirs = [h.gradient for h in P.hs]
    T = lifted_graph(base, polys, dirs, normal_cone_at(P.C, z), P.m, P.k)
    d, n = P.dim, P.dim + P.m + P.k
    L0 = embed(_lambda0_rows(P, P.active_set(xbar, ybar)), n, range(d, n))
    cut = intersect_all([T, L0, coordinate_subspace(n, range(P.nx, d))], n)
    return project(cut, range(P.nx))


def _qstar_path(P, xbar, ybar):
    """Project ``{(s, x*, y*, u*) : (x*, y*) in ∂phi, (u*, -y*) in A + N(C), s = x* + u*}``."""
    nx, ny = P.nx, P.ny
    z = xbar + ybar
    dphi = subdifferential(P.phi, z).h
    K = minkowski_sum_all([ASet.at(P, xbar, ybar).polyhedron, normal_cone_at(P.C, z)], P.dim).h
    n = 3 * nx + ny
    S, X, Y, U = 0, nx, 2 * nx, 2 * nx + ny

    def lift(parts):
        row = [ZERO] * n
        for offset, vec, sign in parts:
            for t, v in enumerate(vec):
                row[offset + t] += sign * v
        return row

    ineqs, eqs = [], []
    for a, b in dphi.ineqs:
        ineqs.append((lift([(X, a[:nx], 1), (Y, a[nx:], 1)]), b))
    for c, d in dphi.eqs:
        eqs.append((lift([(X, c[:nx], 1), (Y, c[nx:], 1)]), d))
    for a, b in K.ineqs:
        ineqs.append((lift([(U, a[:nx], 1), (Y, a[nx:], -1)]), b))
    for c, d in K.eqs:
        eqs.append((lift([(U, c[:nx], 1), (Y, c[nx:], -1)]), d))
    for t in range(nx):
        row = [ZERO] * n
        row[S + t], row[X + t], row[U + t] = ONE, -ONE, -ONE
        eqs.append((row, ZERO))
    return project(HPolyhedron(n, ineqs, eqs), range(nx))


def _agree(named, what):
    (first_name, first), *rest = named
    for name, other in rest:
        if not same_set(first, other):
            raise EngineError(f"{what}: {first_name} and {name} routes disagree")
    return first


def value_subdifferential(P: ParametricProgram, xbar, ybar) -> HPolyhedron:
    """``∂mu(xbar)`` from a solution ``ybar`` of the program at ``xbar``.

    The aggregate and multiplier routes are compared; disagreement raises
    :class:`EngineError`.  A missing Slater point only triggers a
    :class:`HypothesisWarning`.
    """
    xbar, ybar = _checked_anchor(P, xbar, ybar)
    _warn_if_unqualified(P)
    base = subdifferential(P.phi, xbar + ybar)
    return _agree([("aggregate", _aggregate_path(P, xbar, ybar, base)),
                   ("multiplier", _multiplier_path(P, xbar, ybar, base))], "∂mu")


def value_subdifferential_via_qstar(P: ParametricProgram, xbar, ybar) -> HPolyhedron:
    xbar, ybar = _checked_anchor(P, xbar, ybar)
    _warn_if_unqualified(P)
    S = _qstar_path(P, xbar, ybar)
    base = subdifferential(P.phi, xbar + ybar)
    return _agree([("x*+u*", S), ("aggregate", _aggregate_path(P, xbar, ybar, base))], "∂mu")


def value_subdifferential_paths(P: ParametricProgram, xbar, ybar) -> dict:
    """All three routes, uncompared; for diagnostics and tests."""
    xbar, ybar = _checked_anchor(P, xbar, ybar)
    base = subdifferential(P.phi, xbar + ybar)
    return {
        "aggregate": _aggregate_path(P, xbar, ybar, base),
        "multiplier": _multiplier_path(P, xbar, ybar, base),
        "qstar": _qstar_path(P, xbar, ybar),
    }


def singular_value_subdifferential(P: ParametricProgram, xbar, ybar) -> HPolyhedron:
    """``∂^∞mu(xbar)``: the same routes with ``∂phi`` replaced by ``N(·; dom phi)``."""
    xbar, ybar = _checked_anchor(P, xbar, ybar)
    _warn_if_unqualified(P)
    base = normal_cone_at(P.phi.domain, xbar + ybar)
    return _agree([("aggregate", _aggregate_path(P, xbar, ybar, base)),
                   ("multiplier", _multiplier_path(P, xbar, ybar, base))], "∂^∞mu")


def _estimate(exact, union):
    rel = set_relation(exact, union)
    return Estimate(union, rel == SUBSET, rel)


def upper_estimate(P: ParametricProgram, xbar, ybar, exact=None) -> Estimate:
    """``⋃_{Λ} ∂_x L`` and whether it strictly contains ``∂mu(xbar)``."""
    if exact is None:
        exact = value_subdifferential(P, xbar, ybar)
    spec = LagrangianSpec(P, STANDARD, (xbar, ybar))
    return _estimate(exact, partial_x_lagrangian_union(spec, lambda_set(P, xbar, ybar)))


def singular_upper_estimate(P: ParametricProgram, xbar, ybar, exact=None) -> Estimate:
    if exact is None:
        exact = singular_value_subdifferential(P, xbar, ybar)
    spec = LagrangianSpec(P, HATTED, (xbar, ybar))
    return _estimate(exact, partial_x_lagrangian_union(spec, lambda_inf_set(P, xbar, ybar)))


@dataclass
class StabilityReport:
    anchor: tuple  # (xbar, ybar); ybar is None unless optimal
    status: str
    mu_value: object
    solutions: HPolyhedron | None = None
    subdiff_mu: HPolyhedron | None = None
    singular_subdiff_mu: HPolyhedron | None = None
    lambda0: MultiplierPolyhedron | None = None
    lambda_: MultiplierPolyhedron | None = None
    lambda_inf: MultiplierPolyhedron | None = None
    upper_estimate: Estimate | None = None
    singular_upper_estimate: Estimate | None = None
    strict_flags: dict = field(default_factory=dict)
    regularity: dict = field(default_factory=dict)
    paths_agree: bool | None = None
    qualified: bool | None = None
    oracle: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)


def witness(solutions: HPolyhedron):
    """Lexicographically least point of the canonical V-form of ``M(xbar)``."""
    return min(tuple(p) for p in solutions.v.points)


def analyze(P: ParametricProgram, xbar, ybar=None, directions=None) -> StabilityReport:
    """Solve at ``xbar`` and compute every set, estimate and oracle check.

    When ``mu(xbar)`` is infinite or not attained only the status is reported.
    ``directions`` defaults to ``±`` unit vectors for the oracle check.
    """
    from . import oracle

    xbar = tuple(Q(v) for v in xbar)
    sol = solve(P, xbar)
    if sol.status != OPTIMAL:
        return StabilityReport((xbar, None), sol.status, sol.value)
    if ybar is None:
        ybar = witness(sol.solutions)
    ybar = tuple(Q(v) for v in ybar)
    if not sol.solutions.contains(ybar):
        raise NotOptimalError("ybar is not a solution at xbar")
    report = StabilityReport((xbar, ybar), sol.status, sol.value, sol.solutions)

    slater: SlaterResult = slater_point(P)
    report.qualified = slater.ok
    report.regularity = {"slater": slater, "aubin": aubin_regularity(P, xbar)}
    if not slater.ok:
        report.warnings.append("estimate only; equalities unguaranteed: " + slater.reason)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        paths = value_subdifferential_paths(P, xbar, ybar)
        first = paths["aggregate"]
        report.paths_agree = all(same_set(first, S) for S in paths.values())
        if not report.paths_agree:
            raise EngineError("∂mu: computation routes disagree")
        report.subdiff_mu = first
        report.singular_subdiff_mu = singular_value_subdifferential(P, xbar, ybar)

    report.lambda0 = lambda0_set(P, xbar, ybar)
    report.lambda_ = lambda_set(P, xbar, ybar)
    report.lambda_inf = lambda_inf_set(P, xbar, ybar)
    report.upper_estimate = upper_estimate(P, xbar, ybar, report.subdiff_mu)
    report.singular_upper_estimate = singular_upper_estimate(P, xbar, ybar, report.singular_subdiff_mu)
    report.strict_flags = {
        "upper_estimate": report.upper_estimate.strict,
        "singular_upper_estimate": report.singular_upper_estimate.strict,
    }
    for name, est in (("upper estimate", report.upper_estimate),
                      ("singular upper estimate", report.singular_upper_estimate)):
        if est.relation not in ("equal", SUBSET):
            report.warnings.append(f"{name} does not contain the exact set ({est.relation})")
    if report.lambda_.is_empty():
        report.warnings.append("Λ is empty at the anchor")

    if directions is None:
        directions = oracle.unit_directions(P.nx)
    verdicts = oracle.support_check(report.subdiff_mu, P, xbar, directions)
    dom = oracle.dom_mu_projection(P)
    report.oracle = {
        "support": verdicts,
        "support_ok": all(v.equal for v in verdicts),
        "singular_ok": same_set(report.singular_subdiff_mu, normal_cone_at(dom, xbar)),
    }
    return report
