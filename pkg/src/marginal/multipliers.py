"""Lagrangians and their multiplier sets.

The product ``lambda_i * ∂g_i`` is not linear in ``lambda_i``; it becomes
polyhedral after homogenisation.  For a polytope ``S`` the cone generated by
``S x {1}`` is ``{(w, t) : t >= 0, w in t S}``, so letting ``(w_i, lambda_i)``
range over that cone and adding the remaining terms gives a polyhedron in
``(v, lambda, mu)`` whose slices are exactly the Lagrangian subdifferentials.
Every multiplier set and multiplier union below is a slice or projection of
such a lift.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionError, MembershipError
from .functions import SumRule, partial_subdifferential, subdifferential
from .geometry import (
    HPolyhedron, VPolyhedron, coordinate_subspace, embed, intersect_all, minkowski_sum_all,
    normal_cone_at, project, scale, singleton,
)
from .program import ParametricProgram, domain_slice, feasible_set, slater_point
from .rational import ONE, Q, ZERO

STANDARD = "standard"
HATTED = "hatted"

LAMBDA0 = "Lambda0"
LAMBDA = "Lambda"
LAMBDA_INF = "LambdaInf"


@dataclass(frozen=True)
class LagrangianSpec:
    """``L = phi + λ.g + μ.h + ι_C`` (standard) or with ``ι_{dom phi}`` in place of ``phi`` (hatted)."""

    program: ParametricProgram
    kind: str
    anchor: tuple  # (xbar, ybar)

    def __post_init__(self):
        if self.kind not in (STANDARD, HATTED):
            raise ValueError(f"unknown Lagrangian kind {self.kind!r}")
        xbar, ybar = self.anchor
        object.__setattr__(self, "anchor", (tuple(Q(v) for v in xbar), tuple(Q(v) for v in ybar)))

    @property
    def point(self):
        return self.anchor[0] + self.anchor[1]


@dataclass(frozen=True)
class MultiplierPolyhedron:
    m: int
    k: int
    set: HPolyhedron  # over (λ_1..λ_m, μ_1..μ_k)
    kind: str

    def contains(self, lm):
        return self.set.contains(tuple(Q(v) for v in lm))

    def is_empty(self):
        return self.set.is_empty()

    @property
    def v(self):
        return self.set.v


def _anchor(P, xbar, ybar):
    xbar = tuple(Q(v) for v in xbar)
    ybar = tuple(Q(v) for v in ybar)
    if not feasible_set(P, xbar).contains(ybar):
        raise MembershipError("the anchor ybar is not feasible at xbar")
    return xbar, ybar


def lambda0_set(P: ParametricProgram, xbar, ybar) -> MultiplierPolyhedron:
    """``λ >= 0``, ``λ_i = 0`` off the active set, ``μ`` free."""
    xbar, ybar = _anchor(P, xbar, ybar)
    return MultiplierPolyhedron(P.m, P.k, _lambda0_rows(P, P.active_set(xbar, ybar)), LAMBDA0)


def _lambda0_rows(P, active):
    n = P.m + P.k
    ineqs, eqs = [], []
    for i in range(P.m):
        row = [ZERO] * n
        if i in active:
            row[i] = -ONE
            ineqs.append((row, ZERO))
        else:
            row[i] = ONE
            eqs.append((row, ZERO))
    return HPolyhedron(n, ineqs, eqs)


def lifted_graph(base, polytopes, directions, normal, m, k) -> HPolyhedron:
    """H-form of ``{(base + Σ w_i + Σ μ_j d_j + normal, λ, μ)}`` with
    ``(w_i, λ_i)`` in the cone over ``polytopes[i] x {1}``.

    ``polytopes[i] is None`` pins ``λ_i`` to zero.
    """
    p = base.dim
    n = p + m + k
    zero_tail = (ZERO,) * (m + k)
    base = base.v
    if not base.points:
        return HPolyhedron(n, (((ZERO,) * n, Q(-1)),))
    points = [tuple(q) + zero_tail for q in base.points]
    rays = [tuple(r) + zero_tail for r in base.rays + normal.rays]
    lines = [tuple(l) + zero_tail for l in base.lines + normal.lines]
    for i, S in enumerate(polytopes):
        if S is None:
            continue
        S = S.v
        if S.rays or S.lines:
            raise ValueError("constraint subdifferentials must be bounded")
        unit = tuple(ONE if t == i else ZERO for t in range(m)) + (ZERO,) * k
        rays += [tuple(v) + unit for v in S.points]
    for j, d in enumerate(directions):
        unit = (ZERO,) * m + tuple(ONE if t == j else ZERO for t in range(k))
        lines.append(tuple(d) + unit)
    return VPolyhedron(n, points, rays, lines).h


def _blocks(spec: LagrangianSpec, block):
    """The pieces of ``∂_block L`` at the anchor, before multipliers are applied."""
    P = spec.program
    xbar, ybar = spec.anchor
    z = xbar + ybar
    if block == "y":
        if spec.kind == STANDARD:
            base = partial_subdifferential(P.phi, P.nx, z, "y")
        else:
            base = normal_cone_at(domain_slice(P, xbar), ybar)
        polys = [partial_subdifferential(g, P.nx, z, "y") for g in P.gs]
        dirs = [h.ystar for h in P.hs]
        normal = normal_cone_at(P.slice_x(P.C, xbar), ybar)
    elif block == "x":
        if spec.kind == STANDARD:
            base = partial_subdifferential(P.phi, P.nx, z, "x")
        else:
            base = normal_cone_at(P.slice_y(P.phi.domain, ybar), xbar)
        polys = [partial_subdifferential(g, P.nx, z, "x") for g in P.gs]
        dirs = [h.xstar for h in P.hs]
        normal = normal_cone_at(P.slice_y(P.C, ybar), xbar)
    elif block == "xy":
        base = subdifferential(P.phi, z) if spec.kind == STANDARD else normal_cone_at(P.phi.domain, z)
        polys = [subdifferential(g, z) for g in P.gs]
        dirs = [h.gradient for h in P.hs]
        normal = normal_cone_at(P.C, z)
    else:
        raise ValueError(f"unknown block {block!r}")
    return base, polys, dirs, normal


def lagrangian_partial(spec: LagrangianSpec, lm, block="xy") -> VPolyhedron:
    """``∂L`` (block ``"xy"``), ``∂_x L`` or ``∂_y L`` at a fixed multiplier."""
    P = spec.program
    lm = tuple(Q(v) for v in lm)
    if len(lm) != P.m + P.k:
        raise DimensionError(f"multiplier of length {len(lm)}, expected {P.m + P.k}")
    lam, mu = lm[:P.m], lm[P.m:]
    if any(l < 0 for l in lam):
        raise ValueError("inequality multipliers must be nonnegative")
    base, polys, dirs, normal = _blocks(spec, block)
    dim = base.dim
    shift = tuple(sum((mu[j] * d[t] for j, d in enumerate(dirs)), ZERO) for t in range(dim))
    parts = [base, singleton(shift), normal]
    parts += [scale(S, l) for S, l in zip(polys, lam) if l]
    return minkowski_sum_all(parts, dim)


def lagrangian_subdifferential(spec: LagrangianSpec, lm) -> SumRule:
    """``∂L(xbar, ybar, λ, μ)`` by the sum rule.

    ``lm`` must lie in ``Λ0``.  ``qualified`` is False when no Slater point
    exists, in which case only "sum ⊆ ∂L" is certified.
    """
    P = spec.program
    xbar, ybar = spec.anchor
    if not lambda0_set(P, xbar, ybar).contains(lm):
        raise MembershipError("multiplier is not in Λ0 at the anchor")
    slater = slater_point(P)
    total = lagrangian_partial(spec, lm, "xy")
    return SumRule(total, slater.ok, "" if slater.ok else "no Slater point: " + slater.reason)


def _stationarity_set(spec: LagrangianSpec, kind) -> MultiplierPolyhedron:
    P = spec.program
    xbar, ybar = _anchor(P, *spec.anchor)
    active = P.active_set(xbar, ybar)
    base, polys, dirs, normal = _blocks(spec, "y")
    polys = [S if i in active else None for i, S in enumerate(polys)]
    T = lifted_graph(base, polys, dirs, normal, P.m, P.k)
    ny, n = P.ny, P.ny + P.m + P.k
    cut = intersect_all([T, coordinate_subspace(n, range(ny)),
                         embed(_lambda0_rows(P, active), n, range(ny, n))], n)
    return MultiplierPolyhedron(P.m, P.k, project(cut, range(ny, n)), kind)


def lambda_set(P: ParametricProgram, xbar, ybar) -> MultiplierPolyhedron:
    """``Λ(xbar, ybar)``: multipliers in ``Λ0`` with ``0 in ∂_y L``."""
    return _stationarity_set(LagrangianSpec(P, STANDARD, (xbar, ybar)), LAMBDA)


def lambda_inf_set(P: ParametricProgram, xbar, ybar) -> MultiplierPolyhedron:
    """``Λ^∞(xbar, ybar)``: as :func:`lambda_set` for the hatted Lagrangian."""
    return _stationarity_set(LagrangianSpec(P, HATTED, (xbar, ybar)), LAMBDA_INF)


def partial_x_lagrangian_union(spec: LagrangianSpec, M: MultiplierPolyhedron) -> HPolyhedron:
    """``⋃_{(λ, μ) in M} ∂_x L(xbar, ybar, λ, μ)`` as one polyhedron in ``Q^nx``."""
    P = spec.program
    if M.m != P.m or M.k != P.k:
        raise DimensionError("multiplier set does not match the program")
    base, polys, dirs, normal = _blocks(spec, "x")
    T = lifted_graph(base, polys, dirs, normal, P.m, P.k)
    nx, n = P.nx, P.nx + P.m + P.k
    return project(intersect_all([T, embed(M.set, n, range(nx, n))], n), range(nx))


def lagrangian_union(spec: LagrangianSpec, M: MultiplierPolyhedron) -> HPolyhedron:
    """``⋃_{(λ, μ) in M} ∂L(xbar, ybar, λ, μ)`` in ``Q^(nx+ny)``."""
    P = spec.program
    base, polys, dirs, normal = _blocks(spec, "xy")
    T = lifted_graph(base, polys, dirs, normal, P.m, P.k)
    d, n = P.dim, P.dim + P.m + P.k
    return project(intersect_all([T, embed(M.set, n, range(d, n))], n), range(d))
