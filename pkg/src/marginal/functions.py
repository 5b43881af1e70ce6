"""Piecewise-linear convex functions and their subdifferential calculus.

A :class:`PWLConvexFunction` is ``z -> max_i (a_i.z + b_i)`` on a polyhedral
domain and ``+inf`` outside it.  Subdifferentials are returned as exact
polyhedra: the convex hull of the active gradients plus the normal cone of the
domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from . import lp
from .errors import DimensionError, EngineError, MembershipError, SlaterError
from .geometry import (
    EQUAL, HPolyhedron, VPolyhedron, cone_hull, full_space, is_interior_point,
    minkowski_sum_all, normal_cone_at, project, set_relation, span_hull,
)
from .rational import INF, ONE, Q, ZERO, dot


@dataclass(frozen=True)
class PWLConvexFunction:
    dim: int
    pieces: tuple
    domain: HPolyhedron = None

    def __post_init__(self):
        pieces = tuple((tuple(Q(x) for x in a), Q(b)) for a, b in self.pieces)
        if not pieces:
            raise ValueError("a PWL function needs at least one piece")
        for i, (a, _) in enumerate(pieces):
            if len(a) != self.dim:
                raise DimensionError(f"piece {i} has {len(a)} coefficients, expected {self.dim}")
        dom = self.domain if self.domain is not None else full_space(self.dim)
        if dom.dim != self.dim:
            raise DimensionError(f"domain of dimension {dom.dim} for a function on Q^{self.dim}")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "domain", dom)

    @classmethod
    def affine(cls, a, b=0, domain=None):
        return cls(len(a), ((a, b),), domain)

    @property
    def full_domain(self) -> bool:
        return not self.domain.ineqs and not self.domain.eqs

    def __call__(self, z):
        return evaluate(self, z)

    def active_pieces(self, z):
        value = max(dot(a, z) + b for a, b in self.pieces)
        return [i for i, (a, b) in enumerate(self.pieces) if dot(a, z) + b == value]

    def restrict(self, keep, fixed_values):
        """Restriction to the coordinates ``keep`` with the other coordinates
        frozen at ``fixed_values`` (a full-length point; entries at ``keep``
        are ignored)."""
        keep = list(keep)
        frozen = [j for j in range(self.dim) if j not in keep]

        def split(a, b):
            return tuple(a[j] for j in keep), b + sum((a[j] * fixed_values[j] for j in frozen), ZERO)

        pieces = [split(a, b) for a, b in self.pieces]
        dom = HPolyhedron(len(keep),
                          [(a_, -c) for a_, c in (split(a, -b) for a, b in self.domain.ineqs)],
                          [(c_, -e) for c_, e in (split(c, -d) for c, d in self.domain.eqs)])
        return PWLConvexFunction(len(keep), pieces, dom)


@dataclass(frozen=True)
class AffineFunctional:
    """``h(x, y) = <xstar, x> + <ystar, y> - alpha``."""

    xstar: tuple
    ystar: tuple
    alpha: object = ZERO

    def __post_init__(self):
        object.__setattr__(self, "xstar", tuple(Q(v) for v in self.xstar))
        object.__setattr__(self, "ystar", tuple(Q(v) for v in self.ystar))
        object.__setattr__(self, "alpha", Q(self.alpha))

    @property
    def gradient(self):
        return self.xstar + self.ystar

    def __call__(self, z):
        return dot(self.gradient, z) - self.alpha


def evaluate(f: PWLConvexFunction, z):
    if len(z) != f.dim:
        raise DimensionError(f"point of length {len(z)} for a function on Q^{f.dim}")
    if not f.domain.contains(z):
        return INF
    return max(dot(a, z) + b for a, b in f.pieces)


def epigraph(f: PWLConvexFunction) -> HPolyhedron:
    """``{(z, t) : t >= f(z)}`` in ``Q^(n+1)``, the epigraph variable last."""
    rows = [(tuple(a) + (-ONE,), -b) for a, b in f.pieces]
    rows += [(tuple(a) + (ZERO,), b) for a, b in f.domain.ineqs]
    eqs = [(tuple(c) + (ZERO,), d) for c, d in f.domain.eqs]
    return HPolyhedron(f.dim + 1, rows, eqs)


def subdifferential(f: PWLConvexFunction, z) -> VPolyhedron:
    """Hull of the active gradients plus ``N(z; dom f)``; empty off the domain."""
    z = tuple(Q(v) for v in z)
    if not f.domain.contains(z):
        return VPolyhedron(f.dim)
    grads = tuple(f.pieces[i][0] for i in f.active_pieces(z))
    normal = normal_cone_at(f.domain, z)
    return VPolyhedron(f.dim, grads, normal.rays, normal.lines)


def subdifferential_via_epigraph(f: PWLConvexFunction, z, singular=False) -> HPolyhedron:
    """``{x* : (x*, -1) in N((z, f(z)); epi f)}`` (``(x*, 0)`` when ``singular``).

    Independent route through the epigraph, used to cross-check
    :func:`subdifferential` and :func:`singular_subdifferential`.
    """
    z = tuple(Q(v) for v in z)
    if not f.domain.contains(z):
        return HPolyhedron(f.dim, (((ZERO,) * f.dim, Q(-1)),))
    n = f.dim
    cone = normal_cone_at(epigraph(f), z + (evaluate(f, z),)).h
    last = [ZERO] * n + [ONE]
    sliced = HPolyhedron(n + 1, cone.ineqs, cone.eqs + ((tuple(last), ZERO if singular else Q(-1)),))
    return project(sliced, range(n))


def singular_subdifferential(f: PWLConvexFunction, z) -> VPolyhedron:
    """``N(z; dom f)``, empty off the domain."""
    z = tuple(Q(v) for v in z)
    if not f.domain.contains(z):
        return VPolyhedron(f.dim)
    return normal_cone_at(f.domain, z)


def partial_subdifferential(f: PWLConvexFunction, nx, point, block) -> VPolyhedron:
    """Subdifferential in the ``x`` block (first ``nx`` coordinates) or the
    ``y`` block of a function on ``Q^nx x Q^ny``, the other block frozen."""
    point = tuple(Q(v) for v in point)
    if block == "x":
        keep = range(nx)
    elif block == "y":
        keep = range(nx, f.dim)
    else:
        raise ValueError(f"block must be 'x' or 'y', not {block!r}")
    g = f.restrict(keep, point)
    return subdifferential(g, tuple(point[j] for j in keep))


def pointwise_sum(fs) -> PWLConvexFunction:
    fs = list(fs)
    n = fs[0].dim
    pieces = [((ZERO,) * n, ZERO)]
    for f in fs:
        if f.dim != n:
            raise DimensionError("summands live in different spaces")
        pieces = [(tuple(x + y for x, y in zip(a, c)), b + d) for a, b in pieces for c, d in f.pieces]
    ineqs = sum((f.domain.ineqs for f in fs), ())
    eqs = sum((f.domain.eqs for f in fs), ())
    return PWLConvexFunction(n, pieces, HPolyhedron(n, ineqs, eqs))


class SumRule(NamedTuple):
    set: VPolyhedron
    qualified: bool  # False: only "sum of subdifferentials ⊆ subdifferential of the sum" is certified
    note: str = ""


def sum_subdifferential(fs, z) -> SumRule:
    """Moreau-Rockafellar: ``Σ ∂f_i(z)`` as a Minkowski sum.

    ``qualified`` records whether all but at most one ``f_i`` have ``z``
    in the interior of their domain; in that case the result is checked
    against the subdifferential of the pointwise sum.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one function")
    z = tuple(Q(v) for v in z)
    n = fs[0].dim
    outside = [i for i, f in enumerate(fs) if not f.domain.contains(z)]
    if outside:
        return SumRule(VPolyhedron(n), False, f"point outside dom f_{outside[0]}")
    boundary = [i for i, f in enumerate(fs) if not is_interior_point(f.domain, z)]
    qualified = len(boundary) <= 1
    total = minkowski_sum_all([subdifferential(f, z) for f in fs], n)
    if qualified and set_relation(total, subdifferential(pointwise_sum(fs), z)) != EQUAL:
        raise EngineError("sum rule failed under its qualification")
    note = "" if qualified else f"z is on the domain boundary of f_{boundary[0]} and f_{boundary[1]}"
    return SumRule(total, qualified, note)


def sublevel_normal_cone(f: PWLConvexFunction, z0) -> VPolyhedron:
    """``N(z0; {f <= f(z0)})`` as the cone generated by ``∂f(z0)``.

    Needs ``z0`` interior to ``dom f`` and a point where ``f < f(z0)``;
    raises :class:`SlaterError` when the latter does not exist.
    """
    z0 = tuple(Q(v) for v in z0)
    if not is_interior_point(f.domain, z0):
        raise MembershipError("z0 must lie in the interior of dom f")
    level = evaluate(f, z0)
    n = f.dim
    # min t  s.t.  a_i.z + b_i <= t,  z in dom f
    A = [list(a) + [-ONE] for a, _ in f.pieces] + [list(a) + [ZERO] for a, _ in f.domain.ineqs]
    b = [-c for _, c in f.pieces] + [c for _, c in f.domain.ineqs]
    res = lp.minimize([ZERO] * n + [ONE], A, b, n=n + 1)
    if res.status == lp.OPTIMAL and res.value >= level:
        raise SlaterError(f"no point with f < {level}: z0 minimises f")
    cone = cone_hull(subdifferential(f, z0))
    sub = HPolyhedron(n, [(a, level - c) for a, c in f.pieces] + list(f.domain.ineqs), f.domain.eqs)
    if set_relation(cone, normal_cone_at(sub, z0)) != EQUAL:
        raise EngineError("sublevel normal cone disagrees with the cone of the subdifferential")
    return cone


def affine_span_normal_cone(hs, z) -> VPolyhedron:
    """Normal cone of ``∩ {h_j = 0}`` at ``z``: the span of the gradients."""
    hs = list(hs)
    z = tuple(Q(v) for v in z)
    for j, h in enumerate(hs):
        if len(h.gradient) != len(z):
            raise DimensionError(f"h_{j} has {len(h.gradient)} coefficients for a point of length {len(z)}")
        if h(z) != 0:
            raise MembershipError(f"h_{j}(z) = {h(z)} != 0")
    n = len(z)
    span = span_hull([h.gradient for h in hs], n)
    flat = HPolyhedron(n, (), [(h.gradient, h.alpha) for h in hs])
    if set_relation(span, normal_cone_at(flat, z)) != EQUAL:
        raise EngineError("span formula disagrees with the direct normal cone")
    return span


class FarkasResult(NamedTuple):
    entailed: bool
    multipliers: tuple | None  # λ >= 0 with gamma = Σ λ_i alpha_i
    counterexample: tuple | None  # x with alpha_i.x <= 0 for all i and gamma.x > 0


def farkas_entailment(alphas, gamma) -> FarkasResult:
    """Decide whether ``alpha_i.x <= 0 (all i)`` implies ``gamma.x <= 0``."""
    alphas = [tuple(Q(v) for v in a) for a in alphas]
    gamma = tuple(Q(v) for v in gamma)
    n = len(gamma)
    if any(len(a) != n for a in alphas):
        raise DimensionError("alphas and gamma differ in length")
    m = len(alphas)
    if m:
        # λ >= 0,  Σ λ_i alpha_i = gamma
        neg = [[-ONE if i == j else ZERO for j in range(m)] for i in range(m)]
        eqs = [[alphas[i][k] for i in range(m)] for k in range(n)]
        res = lp.maximize([ZERO] * m, neg, [ZERO] * m, eqs, gamma, n=m)
        if res.feasible:
            return FarkasResult(True, res.x, None)
    elif not any(gamma):
        return FarkasResult(True, (), None)
    res = lp.maximize(gamma, alphas + [gamma], [ZERO] * m + [ONE], n=n)
    if res.status != lp.OPTIMAL or res.value <= 0:
        raise EngineError("Farkas alternative produced neither certificate")
    return FarkasResult(False, None, res.x)
