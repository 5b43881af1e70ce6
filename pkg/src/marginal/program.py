"""Parametric convex programs with polyhedral data.

For a parameter ``x`` the program is

    minimise phi(x, y)  over  y  with  (x, y) in C,  g_i(x, y) <= 0,  h_j(x, y) = 0

and ``mu(x)`` is its optimal value (``+inf`` when infeasible).  Points of the
product space are written ``(x, y)`` with the ``x`` block first.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from . import lp
from .errors import DimensionError, EngineError, MembershipError, QualificationError
from .functions import PWLConvexFunction, partial_subdifferential
from .geometry import (
    HPolyhedron, VPolyhedron, cone_hull, full_space, interior_slack, minkowski_sum,
    minkowski_sum_all, negate, normal_cone_at, same_set, span_hull,
)
from .rational import INF, ONE, Q, ZERO, dot

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class ParametricProgram:
    nx: int
    ny: int
    phi: PWLConvexFunction
    gs: tuple = ()
    hs: tuple = ()
    C: HPolyhedron = None

    def __post_init__(self):
        n = self.nx + self.ny
        if self.nx < 0 or self.ny < 0 or n == 0:
            raise DimensionError("need nx, ny >= 0 with nx + ny >= 1")
        if self.phi.dim != n:
            raise DimensionError(f"phi lives on Q^{self.phi.dim}, expected Q^{n}")
        gs = tuple(self.gs)
        for i, g in enumerate(gs):
            if g.dim != n:
                raise DimensionError(f"g_{i} lives on Q^{g.dim}, expected Q^{n}")
            if not g.full_domain:
                raise ValueError(f"g_{i} must be finite everywhere (full domain)")
        hs = tuple(self.hs)
        for j, h in enumerate(hs):
            if len(h.xstar) != self.nx or len(h.ystar) != self.ny:
                raise DimensionError(f"h_{j} has blocks of size {len(h.xstar)}/{len(h.ystar)}")
        C = self.C if self.C is not None else full_space(n)
        if C.dim != n:
            raise DimensionError(f"C lives in Q^{C.dim}, expected Q^{n}")
        object.__setattr__(self, "gs", gs)
        object.__setattr__(self, "hs", hs)
        object.__setattr__(self, "C", C)

    @property
    def m(self):
        return len(self.gs)

    @property
    def k(self):
        return len(self.hs)

    @property
    def dim(self):
        return self.nx + self.ny

    def point(self, x, y):
        x = tuple(Q(v) for v in x)
        y = tuple(Q(v) for v in y)
        if len(x) != self.nx or len(y) != self.ny:
            raise DimensionError(f"expected x in Q^{self.nx} and y in Q^{self.ny}")
        return x + y

    def active_set(self, x, y):
        z = self.point(x, y)
        return [i for i, g in enumerate(self.gs) if g(z) == 0]

    def graph(self) -> HPolyhedron:
        """``{(x, y) : y in G(x)}`` intersected with ``dom phi``."""
        ineqs = list(self.C.ineqs) + list(self.phi.domain.ineqs)
        for g in self.gs:
            ineqs += [(a, -b) for a, b in g.pieces]
        eqs = list(self.C.eqs) + list(self.phi.domain.eqs) + [(h.gradient, h.alpha) for h in self.hs]
        return HPolyhedron(self.dim, ineqs, eqs)

    def slice_x(self, P: HPolyhedron, x) -> HPolyhedron:
        """``{y : (x, y) in P}``."""
        x = tuple(Q(v) for v in x)
        nx = self.nx
        return HPolyhedron(self.ny,
                           [(a[nx:], b - dot(a[:nx], x)) for a, b in P.ineqs],
                           [(c[nx:], d - dot(c[:nx], x)) for c, d in P.eqs])

    def slice_y(self, P: HPolyhedron, y) -> HPolyhedron:
        """``{x : (x, y) in P}``."""
        y = tuple(Q(v) for v in y)
        nx = self.nx
        return HPolyhedron(self.nx,
                           [(a[:nx], b - dot(a[nx:], y)) for a, b in P.ineqs],
                           [(c[:nx], d - dot(c[nx:], y)) for c, d in P.eqs])


@dataclass(frozen=True)
class SolveResult:
    status: str
    value: object  # mpq, or +/-inf
    solutions: HPolyhedron  # M(x) in Q^ny; empty unless optimal
    witness: tuple | None = None

    @property
    def optimal(self):
        return self.status == OPTIMAL


def feasible_set(P: ParametricProgram, xbar) -> HPolyhedron:
    """``G(xbar) = {y : (xbar, y) in C, g(xbar, y) <= 0, h(xbar, y) = 0}``."""
    xbar = tuple(Q(v) for v in xbar)
    if len(xbar) != P.nx:
        raise DimensionError(f"parameter of length {len(xbar)}, expected {P.nx}")
    rows = HPolyhedron(P.dim, [(a, -b) for g in P.gs for a, b in g.pieces],
                       [(h.gradient, h.alpha) for h in P.hs])
    G = P.slice_x(rows, xbar)
    Cx = P.slice_x(P.C, xbar)
    return HPolyhedron(P.ny, Cx.ineqs + G.ineqs, Cx.eqs + G.eqs)


def domain_slice(P: ParametricProgram, xbar) -> HPolyhedron:
    """``dom phi(xbar, .)``."""
    return P.slice_x(P.phi.domain, xbar)


def solve(P: ParametricProgram, xbar) -> SolveResult:
    """Exact optimal value and solution set at the parameter ``xbar``."""
    xbar = tuple(Q(v) for v in xbar)
    G = feasible_set(P, xbar)
    D = domain_slice(P, xbar)
    ny = P.ny
    pieces = [(a[P.nx:], b + dot(a[:P.nx], xbar)) for a, b in P.phi.pieces]
    # minimise t  s.t.  a.y + b <= t,  y in G ∩ D
    A = [list(a) + [-ONE] for a, _ in pieces]
    b = [-c for _, c in pieces]
    for rows in (G.ineqs, D.ineqs):
        A += [list(a) + [ZERO] for a, _ in rows]
        b += [c for _, c in rows]
    E = [list(c) + [ZERO] for c, _ in G.eqs + D.eqs]
    e = [d for _, d in G.eqs + D.eqs]
    res = lp.minimize([ZERO] * ny + [ONE], A, b, E, e, n=ny + 1)
    if res.status == lp.INFEASIBLE:
        return SolveResult(INFEASIBLE, INF, HPolyhedron(ny, (((ZERO,) * ny, Q(-1)),)))
    if res.status == lp.UNBOUNDED:
        return SolveResult(UNBOUNDED, -INF, HPolyhedron(ny, (((ZERO,) * ny, Q(-1)),)))
    v = res.value
    M = HPolyhedron(ny, G.ineqs + D.ineqs + tuple((a, v - c) for a, c in pieces), G.eqs + D.eqs)
    return SolveResult(OPTIMAL, v, M, tuple(res.x[:ny]))


def optimal_value(P: ParametricProgram, xbar):
    return solve(P, xbar).value


@dataclass(frozen=True)
class SlaterResult:
    ok: bool
    point: tuple | None = None  # (x0, y0) concatenated
    slack: object = None
    reason: str = ""
    binding: tuple = field(default=())


def slater_point(P: ParametricProgram) -> SlaterResult:
    """Search for ``(x0, y0)`` in ``int C ∩ int dom phi`` with ``g_i < 0`` and ``h_j = 0``.

    One LP maximising a common slack ``s <= 1`` over every strict requirement.
    """
    n = P.dim
    for name, S in (("C", P.C), ("dom phi", P.phi.domain)):
        if any(any(c) for c, _ in S.eqs):
            return SlaterResult(False, reason=f"{name} has equality rows, so its interior is empty")
    labels, A, b = [], [], []
    for name, S in (("C", P.C), ("dom phi", P.phi.domain)):
        for r, (a, c) in enumerate(S.ineqs):
            labels.append(f"{name} row {r}")
            A.append(list(a) + [ONE])
            b.append(c)
    for i, g in enumerate(P.gs):
        for r, (a, c) in enumerate(g.pieces):
            labels.append(f"g_{i} piece {r}")
            A.append(list(a) + [ONE])
            b.append(-c)
    A.append([ZERO] * n + [ONE])
    b.append(ONE)
    E = [list(h.gradient) + [ZERO] for h in P.hs]
    e = [h.alpha for h in P.hs]
    res = lp.maximize([ZERO] * n + [ONE], A, b, E, e, n=n + 1)
    if not res.feasible:
        return SlaterResult(False, reason="the constraint system (with h = 0) is infeasible")
    z, s = res.x[:n], res.value
    if s > 0:
        return SlaterResult(True, tuple(z), s)
    tight = tuple(lab for lab, row, rhs in zip(labels, A, b) if dot(row, res.x) == rhs)
    return SlaterResult(False, tuple(z), s, "no point satisfies every strict requirement", tight)


@dataclass(frozen=True)
class KKTCheck:
    holds: bool
    certificate: tuple | None  # p in ∂_y phi with -p in N(ybar; G(xbar)) when holds
    regular_a: bool  # int G(xbar) ∩ dom phi(xbar, .) nonempty
    regular_b: bool  # phi(xbar, .) continuous at a point of G(xbar)

    @property
    def guaranteed(self):
        return self.regular_a or self.regular_b


def _require_feasible(P, xbar, ybar):
    G = feasible_set(P, xbar)
    if not G.contains(ybar):
        raise MembershipError("ybar is not feasible at xbar")
    return G


def kkt_inclusion_check(P: ParametricProgram, xbar, ybar) -> KKTCheck:
    """Test ``0 in ∂_y phi(xbar, ybar) + N(ybar; G(xbar))`` exactly."""
    xbar = tuple(Q(v) for v in xbar)
    ybar = tuple(Q(v) for v in ybar)
    G = _require_feasible(P, xbar, ybar)
    D = domain_slice(P, xbar)
    if not D.contains(ybar):
        raise MembershipError("ybar is outside dom phi(xbar, .)")
    sub = partial_subdifferential(P.phi, P.nx, xbar + ybar, "y")
    normal = normal_cone_at(G, ybar)
    # 0 = p + n  with p in sub, n in normal  <=>  -p in normal
    ny = P.ny
    npts, nr, nl = len(sub.points), len(sub.rays) + len(normal.rays), len(sub.lines) + len(normal.lines)
    rays = sub.rays + normal.rays
    lines = sub.lines + normal.lines
    nv = npts + nr + nl
    E, e = [], []
    for k in range(ny):
        E.append([p[k] for p in sub.points] + [r[k] for r in rays] + [l[k] for l in lines])
        e.append(ZERO)
    E.append([ONE] * npts + [ZERO] * (nr + nl))
    e.append(ONE)
    A = [[-ONE if j == i else ZERO for j in range(nv)] for i in range(npts + nr)]
    res = lp.maximize([ZERO] * nv, A, [ZERO] * len(A), E, e, n=nv)
    cert = None
    if res.feasible:
        w = res.x
        cert = tuple(sum((w[j] * sub.points[j][k] for j in range(npts)), ZERO)
                     + sum((w[npts + j] * sub.rays[j][k] for j in range(len(sub.rays))), ZERO)
                     + sum((w[npts + nr + j] * sub.lines[j][k] for j in range(len(sub.lines))), ZERO)
                     for k in range(ny))
    s_a, _ = interior_slack([G], base=D, dim=ny)
    s_b, _ = interior_slack([D], base=G, dim=ny)
    check = KKTCheck(res.feasible, cert, bool(s_a and s_a > 0), bool(s_b and s_b > 0))
    if check.guaranteed:
        sol = solve(P, xbar)
        if sol.optimal and sol.solutions.contains(ybar) != check.holds:
            raise EngineError("optimality condition disagrees with the solver under regularity")
    return check


def aubin_regularity(P: ParametricProgram, xbar) -> bool:
    """Whether ``0 in int(dom phi(xbar, .) - G(xbar))``."""
    D = domain_slice(P, xbar)
    G = feasible_set(P, xbar)
    diff = minkowski_sum(D.v, negate(G)).h
    if diff.is_trivially_empty() or any(any(c) for c, _ in diff.eqs):
        return False
    return all(b > 0 for _, b in diff.ineqs)


def feasible_normal_cone(P: ParametricProgram, xbar, ybar) -> VPolyhedron:
    """``N(ybar; G(xbar))`` assembled from the constraint data.

    Sum over active ``i`` of ``cone ∂_y g_i``, the span of the ``y*_j`` and
    ``N(ybar; C(xbar))``.  Needs a point of ``int C(xbar)`` with ``g(xbar, .) < 0``
    and ``h(xbar, .) = 0``; raises :class:`QualificationError` otherwise.
    """
    xbar = tuple(Q(v) for v in xbar)
    ybar = tuple(Q(v) for v in ybar)
    G = _require_feasible(P, xbar, ybar)
    Cx = P.slice_x(P.C, xbar)
    strict = HPolyhedron(P.ny, Cx.ineqs + tuple(
        (a[P.nx:], -b - dot(a[:P.nx], xbar)) for g in P.gs for a, b in g.pieces), Cx.eqs)
    flats = HPolyhedron(P.ny, (), [(h.ystar, h.alpha - dot(h.xstar, xbar)) for h in P.hs])
    s, _ = interior_slack([strict], base=flats, dim=P.ny)
    if s is None or s <= 0:
        raise QualificationError("no Slater point on the slice at xbar")
    z = xbar + ybar
    parts = [cone_hull(partial_subdifferential(g, P.nx, z, "y"))
             for i, g in enumerate(P.gs) if g(z) == 0]
    parts.append(span_hull([h.ystar for h in P.hs], P.ny))
    parts.append(normal_cone_at(Cx, ybar))
    total = minkowski_sum_all(parts, P.ny)
    if not same_set(total, normal_cone_at(G, ybar)):
        raise EngineError("normal cone decomposition disagrees with the direct normal cone")
    return total
