"""The exact simplex against brute-force vertex enumeration on boxed problems."""

import itertools

from marginal import lp
from marginal.dd import rref
from marginal.rational import Q, dot


def solve_exact(A, b, n):
    """The unique solution of the square system, or None when it is singular."""
    R, piv = rref([list(a) + [bi] for a, bi in zip(A, b)], n)
    if piv != list(range(n)):
        return None
    return [R[i][n] for i in range(n)]


def brute_max(c, A, b, n):
    """Maximum over a bounded polytope by enumerating every basis."""
    best = None
    for rows in itertools.combinations(range(len(A)), n):
        x = solve_exact([A[i] for i in rows], [b[i] for i in rows], n)
        if x is None or any(dot(a, x) > bi for a, bi in zip(A, b)):
            continue
        v = dot(c, x)
        best = v if best is None else max(best, v)
    return best


def boxed(rng, n, rows):
    A = [[Q(rng.randint(-5, 5)) for _ in range(n)] for _ in range(rows)]
    b = [Q(rng.randint(-5, 5)) for _ in range(rows)]
    for j in range(n):
        e = [Q(0)] * n
        e[j] = Q(1)
        A.append(e)
        b.append(Q(4))
        A.append([-v for v in e])
        b.append(Q(4))
    return A, b


def test_matches_vertex_enumeration(rng):
    for _ in range(300):
        n = rng.randint(1, 3)
        A, b = boxed(rng, n, rng.randint(0, 4))
        c = [Q(rng.randint(-5, 5)) for _ in range(n)]
        res = lp.maximize(c, A, b, n=n)
        expected = brute_max(c, A, b, n)
        if expected is None:
            assert res.status == lp.INFEASIBLE
        else:
            assert res.status == lp.OPTIMAL and res.value == expected
            assert all(dot(a, res.x) <= bi for a, bi in zip(A, b))
            assert dot(c, res.x) == res.value


def test_equalities_and_unbounded():
    # max x + y  s.t.  x - y = 0, x <= 3
    res = lp.maximize([1, 1], [[1, 0]], [3], [[1, -1]], [0], n=2)
    assert res.optimal and res.value == 6 and tuple(res.x) == (3, 3)
    assert lp.maximize([1, 0], [[0, 1]], [1], n=2).status == lp.UNBOUNDED
    assert lp.maximize([1], [[1], [-1]], [-1, 0], n=1).status == lp.INFEASIBLE
    assert lp.minimize([1], [[-1]], [2], n=1).value == -2


def test_feasible_point():
    x = lp.feasible_point([[1, 1]], [1], [[1, -1]], [0], n=2)
    assert x is not None and x[0] == x[1] and x[0] + x[1] <= 1
    assert lp.feasible_point([[1], [-1]], [0, -1], n=1) is None
