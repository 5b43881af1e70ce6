"""Brute-force ground truth for ``mu``.

Everything here goes through :func:`marginal.program.solve` only, so it shares
no code with the multiplier machinery it is used to check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import OracleError
from .geometry import HPolyhedron, project, support
from .program import INFEASIBLE, OPTIMAL, ParametricProgram, solve
from .rational import INF, Q

HALVING_CAP = 64


@dataclass(frozen=True)
class DirectionalDerivativeResult:
    direction: tuple
    value: object  # mpq or +inf
    stabilization_step: int


def directional_derivative(P: ParametricProgram, xbar, d, base_value=None) -> DirectionalDerivativeResult:
    """One-sided derivative ``mu'(xbar; d)`` by halving ``t`` until the slope repeats.

    ``mu`` is convex and piecewise linear, so difference quotients are
    monotone in ``t`` and two equal consecutive quotients mean ``mu`` is
    affine on the whole segment.  ``+inf`` is returned when every sampled
    ``xbar + t d`` is infeasible.
    """
    xbar = tuple(Q(v) for v in xbar)
    d = tuple(Q(v) for v in d)
    if base_value is None:
        base = solve(P, xbar)
        if base.status != OPTIMAL:
            raise ValueError(f"mu(xbar) is not finite (status {base.status})")
        base_value = base.value
    previous = None
    t = Q(1)
    for step in range(HALVING_CAP + 1):
        res = solve(P, tuple(x + t * v for x, v in zip(xbar, d)))
        if res.status == INFEASIBLE:
            slope = INF
        elif res.status == OPTIMAL:
            slope = (res.value - base_value) / t
        else:
            raise OracleError("mu became -inf near a point where it is finite")
        if previous is not None and slope == previous and slope != INF:
            return DirectionalDerivativeResult(d, slope, step)
        previous = slope
        t /= 2
    if previous == INF:
        return DirectionalDerivativeResult(d, INF, HALVING_CAP)
    raise OracleError(f"slope did not stabilise after {HALVING_CAP} halvings")


def dom_mu_projection(P: ParametricProgram) -> HPolyhedron:
    """``dom mu`` as the projection of the constraint graph onto ``x``."""
    return project(P.graph(), range(P.nx))


@dataclass(frozen=True)
class SupportVerdict:
    direction: tuple
    support: object
    derivative: object

    @property
    def equal(self):
        return self.support == self.derivative


def support_check(S, P: ParametricProgram, xbar, directions) -> list:
    """Compare ``sup_{S} <., d>`` with ``mu'(xbar; d)`` for each direction."""
    xbar = tuple(Q(v) for v in xbar)
    base = solve(P, xbar)
    if base.status != OPTIMAL:
        raise ValueError(f"mu(xbar) is not finite (status {base.status})")
    out = []
    for d in directions:
        d = tuple(Q(v) for v in d)
        dd = directional_derivative(P, xbar, d, base.value)
        out.append(SupportVerdict(d, support(S, d), dd.value))
    return out


def unit_directions(n):
    dirs = []
    for i in range(n):
        e = [Q(0)] * n
        e[i] = Q(1)
        dirs.append(tuple(e))
        dirs.append(tuple(-v for v in e))
    return dirs


def canonical_directions(n, count=50, seed=0):
    """``±`` unit vectors followed by seeded random rational directions."""
    rng = random.Random(seed)
    dirs = unit_directions(n)
    while len(dirs) < count:
        d = tuple(Q(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n))
        if any(d):
            dirs.append(d)
    return dirs[:count]
