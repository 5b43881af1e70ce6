"""Exact rational linear programming.

Dictionary-form simplex with Bland's anti-cycling rule over ``mpq``.  All
variables are free; equality rows are eliminated by Gaussian substitution and
free variables are pivoted into the basis before the sign-constrained phase,
so the tableau only ever carries one column per original variable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rational import Q, ZERO

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: object = None  # mpq when optimal
    x: tuple | None = None  # a feasible point (optimal one when optimal)

    @property
    def optimal(self):
        return self.status == OPTIMAL

    @property
    def feasible(self):
        return self.status != INFEASIBLE


class _Dictionary:
    # Row i reads  basic[i] = beta[i] + sum_j D[i][j] * nonbasic[j].
    def __init__(self, D, beta, basic, nonbasic):
        self.D = D
        self.beta = beta
        self.basic = basic
        self.nonbasic = nonbasic

    def pivot(self, r, c, objectives):
        D, beta = self.D, self.beta
        row = D[r]
        piv = row[c]
        inv = 1 / piv
        new = [-a * inv for a in row]
        new[c] = inv
        nb = -beta[r] * inv
        D[r] = new
        beta[r] = nb
        for i, other in enumerate(D):
            if i == r:
                continue
            f = other[c]
            if not f:
                continue
            for j, a in enumerate(new):
                if a:
                    other[j] = other[j] + f * a if j != c else f * a
            beta[i] += f * nb
        for obj in objectives:
            coeffs, const = obj
            f = coeffs[c]
            if not f:
                continue
            for j, a in enumerate(new):
                if a:
                    coeffs[j] = coeffs[j] + f * a if j != c else f * a
            obj[1] = const + f * nb
        self.basic[r], self.nonbasic[c] = self.nonbasic[c], self.basic[r]


def _simplex(dct, obj, constrained_rows, allowed):
    """Maximise ``obj`` by Bland's rule.  Returns False if unbounded."""
    coeffs = obj[0]
    D, beta, basic, nonbasic = dct.D, dct.beta, dct.basic, dct.nonbasic
    while True:
        entering = None
        for j in allowed:
            if coeffs[j] > 0 and (entering is None or nonbasic[j] < nonbasic[entering]):
                entering = j
        if entering is None:
            return True
        leave = None
        best = None
        for i in constrained_rows:
            a = D[i][entering]
            if a < 0:
                ratio = beta[i] / -a
                if best is None or ratio < best or (ratio == best and basic[i] < basic[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return False
        dct.pivot(leave, entering, dct.objectives)


def maximize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), n=None) -> LPResult:
    """Maximise ``c.x`` subject to ``A_ub x <= b_ub`` and ``A_eq x = b_eq``.

    ``x`` ranges over all of Q^n.  Inputs may be any exact scalars.
    """
    n = len(c) if n is None else n
    c = [Q(v) for v in c]
    ineqs = [([Q(v) for v in a], Q(b)) for a, b in zip(A_ub, b_ub)]
    eqs = [([Q(v) for v in a], Q(b)) for a, b in zip(A_eq, b_eq)]
    const = ZERO

    # Gaussian elimination of equality rows.
    eliminated = []  # (pivot column, row, rhs)
    pending = eqs
    while pending:
        row, rhs = pending.pop()
        piv = next((j for j in range(n) if row[j]), None)
        if piv is None:
            if rhs:
                return LPResult(INFEASIBLE)
            continue
        eliminated.append((piv, row, rhs))
        inv = 1 / row[piv]

        def subst(vec, b):
            f = vec[piv]
            if not f:
                return vec, b
            f = f * inv
            return [v - f * r if r else v for v, r in zip(vec, row)], b - f * rhs

        pending = [subst(a, b) for a, b in pending]
        ineqs = [subst(a, b) for a, b in ineqs]
        f = c[piv] * inv
        if f:
            c = [v - f * r if r else v for v, r in zip(c, row)]
            const += f * rhs

    m = len(ineqs)
    # slack_i = b_i - a_i.x ; variable ids: x_j -> j, slack_i -> n + i, artificial -> n + m
    D = [[-v for v in a] + [ZERO] for a, _ in ineqs]
    beta = [b for _, b in ineqs]
    dct = _Dictionary(D, beta, [n + i for i in range(m)], list(range(n)) + [n + m])
    phase2 = [list(c) + [ZERO], const]
    phase1 = [[ZERO] * (n + 1), ZERO]
    dct.objectives = (phase2, phase1)

    free_rows = set()
    stuck_free = []
    for j in range(n):
        r = next((i for i in range(m) if i not in free_rows and D[i][j]), None)
        if r is None:
            stuck_free.append(j)
            continue
        dct.pivot(r, j, dct.objectives)
        free_rows.add(r)
    constrained = [i for i in range(m) if i not in free_rows]
    # nonbasic columns that still hold a free variable never enter the constrained phase
    allowed = [j for j in range(n + 1) if dct.nonbasic[j] >= n]
    art = n
    allowed_no_art = [j for j in allowed if j != art]

    worst = None
    for i in constrained:
        if beta[i] < 0 and (worst is None or beta[i] < beta[worst]):
            worst = i
    if worst is not None:
        for i in constrained:
            D[i][art] = Q(1)
        phase1[0][art] = Q(-1)
        dct.pivot(worst, art, dct.objectives)
        _simplex(dct, phase1, constrained, allowed)
        if phase1[1] < 0:
            return LPResult(INFEASIBLE)
        # drive the artificial out of the basis if it stayed there at level zero
        if n + m in dct.basic:
            r = dct.basic.index(n + m)
            c_ = next((j for j in range(n + 1)
                       if n <= dct.nonbasic[j] < n + m and D[r][j]), None)
            if c_ is not None:
                dct.pivot(r, c_, dct.objectives)
        art = dct.nonbasic.index(n + m) if n + m in dct.nonbasic else None
        if art is None:
            # artificial is basic with a row identically zero: the row is inert
            r = dct.basic.index(n + m)
            constrained = [i for i in constrained if i != r]
        else:
            for row in D:
                row[art] = ZERO
            phase2[0][art] = ZERO
        allowed_no_art = [j for j in range(n + 1)
                          if dct.nonbasic[j] >= n and dct.nonbasic[j] != n + m]

    bounded = _simplex(dct, phase2, constrained, allowed_no_art)

    values = [ZERO] * (n + m + 1)
    for i, v in enumerate(dct.basic):
        values[v] = beta[i]
    x = values[:n]
    for piv, row, rhs in reversed(eliminated):
        s = rhs
        for j, a in enumerate(row):
            if a and j != piv:
                s -= a * x[j]
        x[piv] = s / row[piv]
    x = tuple(x)

    if not bounded:
        return LPResult(UNBOUNDED, None, x)
    for j in range(n + 1):
        if dct.nonbasic[j] < n and phase2[0][j]:
            return LPResult(UNBOUNDED, None, x)
    return LPResult(OPTIMAL, phase2[1], x)


def minimize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), n=None) -> LPResult:
    res = maximize([-Q(v) for v in c], A_ub, b_ub, A_eq, b_eq, n)
    if res.status == OPTIMAL:
        return LPResult(OPTIMAL, -res.value, res.x)
    return res


def feasible_point(A_ub=(), b_ub=(), A_eq=(), b_eq=(), n=None):
    """A point of the system, or ``None`` if it is empty."""
    if n is None:
        rows = list(A_ub) + list(A_eq)
        if not rows:
            raise ValueError("dimension needed for an empty system")
        n = len(rows[0])
    res = maximize([ZERO] * n, A_ub, b_ub, A_eq, b_eq, n)
    return res.x if res.feasible else None
