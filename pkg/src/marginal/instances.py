"""Seeded random programs that satisfy the Slater condition and have a finite value.

Coefficients are integers in ``[-5, 5]``.  After a first solve, some
constraints are shifted so that they become active at the solution found;
the solution stays optimal because the feasible set only shrinks around it.
"""

from __future__ import annotations

import random
from typing import NamedTuple

from .functions import AffineFunctional, PWLConvexFunction
from .geometry import HPolyhedron
from .program import OPTIMAL, ParametricProgram, slater_point, solve
from .rational import Q, dot

COEF = 5


class Instance(NamedTuple):
    program: ParametricProgram
    xbar: tuple
    ybar: tuple
    seed: int


def _vec(rng, n):
    return tuple(rng.randint(-COEF, COEF) for _ in range(n))


def _pieces(rng, n, count):
    return [(_vec(rng, n), rng.randint(-COEF, COEF)) for _ in range(count)]


def _draft(rng, max_dim=3, max_m=3, max_k=2, max_pieces=4):
    nx, ny = rng.randint(1, max_dim), rng.randint(1, max_dim)
    n = nx + ny
    domain = None
    if rng.random() < 0.25:
        domain = HPolyhedron(n, [(_vec(rng, n), rng.randint(0, COEF)) for _ in range(rng.randint(1, 2))])
    phi = PWLConvexFunction(n, _pieces(rng, n, rng.randint(1, max_pieces)), domain)
    gs = [PWLConvexFunction(n, _pieces(rng, n, rng.randint(1, max_pieces)))
          for _ in range(rng.randint(0, max_m))]
    hs = []
    for _ in range(rng.randint(0, min(max_k, ny))):
        ystar = _vec(rng, ny)
        if any(ystar):
            hs.append(AffineFunctional(_vec(rng, nx), ystar, rng.randint(-COEF, COEF)))
    C = HPolyhedron(n, [(_vec(rng, n), rng.randint(0, COEF)) for _ in range(rng.randint(0, 2))])
    xbar = tuple(rng.randint(-1, 1) for _ in range(nx))
    return ParametricProgram(nx, ny, phi, gs, hs, C), xbar


def _in_range(values):
    return all(v.denominator == 1 and -COEF <= v <= COEF for v in values)


def _tighten(rng, P, xbar, ybar):
    """Shift some g_i and rows of C so that they are active at ``(xbar, ybar)``.

    A shift is skipped when it would leave the integer range of the generator.
    """
    z = tuple(Q(v) for v in xbar) + tuple(ybar)
    gs = []
    for g in P.gs:
        if rng.random() < 0.6:
            gap = g(z)
            shifted = [(a, b - gap) for a, b in g.pieces]
            if _in_range([b for _, b in shifted]):
                g = PWLConvexFunction(g.dim, shifted)
        gs.append(g)
    rows = []
    for a, b in P.C.ineqs:
        tight = dot(a, z)
        rows.append((a, tight) if rng.random() < 0.5 and _in_range([tight]) else (a, b))
    return ParametricProgram(P.nx, P.ny, P.phi, gs, P.hs, HPolyhedron(P.dim, rows, P.C.eqs))


def random_instance(seed, tighten=True, **limits) -> Instance | None:
    """One candidate from ``seed``; ``None`` if it is unqualified or ``mu(xbar)`` is not attained."""
    rng = random.Random(seed)
    P, xbar = _draft(rng, **limits)
    sol = solve(P, xbar)
    if sol.status != OPTIMAL:
        return None
    ybar = sol.witness
    if tighten:
        P = _tighten(rng, P, xbar, ybar)
    if not slater_point(P).ok:
        return None
    sol = solve(P, xbar)
    if sol.status != OPTIMAL or not sol.solutions.contains(ybar):
        return None
    return Instance(P, tuple(Q(v) for v in xbar), tuple(ybar), seed)


def qualified_instances(count, seed=0, **limits):
    """The first ``count`` qualified instances from consecutive seeds starting at ``seed``."""
    out, s = [], seed
    while len(out) < count:
        inst = random_instance(s, **limits)
        if inst is not None:
            out.append(inst)
        s += 1
    return out
