"""Double description method for polyhedral cones.

``cone_generators`` turns ``{x : R x >= 0, E x = 0}`` into a minimal system of
generators: a canonical basis of the lineality space plus the extreme rays of
the pointed part, each taken orthogonal to the lineality space and scaled to
a primitive integer vector.  Both outputs depend only on the cone, never on
row order, which is what makes canonical H/V forms possible.
"""

from __future__ import annotations

from .rational import Q, ZERO, primitive


def rref(rows, n):
    """Reduced row echelon form over Q.  Returns ``(rows, pivot_columns)``."""
    M = [[Q(v) for v in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(M)) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows, n):
    return len(rref(rows, n)[1])


def nullspace(rows, n):
    """Basis of ``{x : row.x = 0 for all rows}``, one vector per free column."""
    R, pivots = rref(rows, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = Q(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def subspace_basis(vectors, n):
    """Canonical basis (RREF rows, primitive integers) of the span of ``vectors``."""
    R, _ = rref(vectors, n)
    return [primitive(r) for r in R]


def _solve_square(M, d):
    # columns of the inverse of a d x d rational matrix
    aug = [list(row) + [Q(int(i == j)) for j in range(d)] for i, row in enumerate(M)]
    R, piv = rref(aug, 2 * d)
    if piv[:d] != list(range(d)):
        raise ArithmeticError("singular basis in double description")
    return [[R[i][d + k] for i in range(d)] for k in range(d)]


def _pointed_rays(M, d):
    """Extreme rays of the pointed cone ``{t in Q^d : M t >= 0}`` (rank M = d)."""
    if d == 0:
        return []
    rows = [primitive(r) for r in M]
    basis_idx = []
    chosen = []
    for i, r in enumerate(rows):
        if not any(r):
            continue
        if rank(chosen + [r], d) > len(chosen):
            chosen.append(r)
            basis_idx.append(i)
            if len(chosen) == d:
                break
    if len(chosen) < d:
        raise ArithmeticError("cone is not pointed")
    inv_cols = _solve_square(chosen, d)
    rays = []
    for k, col in enumerate(inv_cols):
        zero = 0
        for kk, i in enumerate(basis_idx):
            if kk != k:
                zero |= 1 << i
        rays.append((tuple(primitive(col)), zero))

    in_basis = set(basis_idx)
    for i, a in enumerate(rows):
        if i in in_basis:
            continue
        bit = 1 << i
        pos, neg, zer = [], [], []
        for ray in rays:
            v = sum(x * y for x, y in zip(a, ray[0]))
            if v > 0:
                pos.append((ray, v))
            elif v < 0:
                neg.append((ray, v))
            else:
                zer.append(ray)
        new = []
        if pos and neg:
            masks = [z for _, z in rays]
            for (p, zp), vp in pos:
                for (q, zq), vq in neg:
                    common = zp & zq
                    if bin(common).count("1") < d - 2:
                        continue
                    if any(z != zp and z != zq and common & z == common for z in masks):
                        continue
                    vec = [vp * y - vq * x for x, y in zip(p, q)]
                    new.append((tuple(primitive(vec)), common | bit))
        rays = [r for r, _ in pos] + [(r, z | bit) for r, z in zer] + new
    return [r for r, _ in rays]


def cone_generators(ineq_rows, eq_rows, n):
    """Minimal generators of ``{x in Q^n : a.x >= 0 (ineq), c.x = 0 (eq)}``.

    Returns ``(lines, rays)`` as lists of primitive integer vectors.
    """
    ineq_rows = [list(r) for r in ineq_rows]
    eq_rows = [list(r) for r in eq_rows]
    lin = nullspace(ineq_rows + eq_rows, n)
    lines = subspace_basis(lin, n)
    # parametrise the part of the cone orthogonal to its lineality space
    B = nullspace(eq_rows + [[Q(v) for v in l] for l in lines], n)
    d = len(B)
    M = [[sum((a[k] * b[k] for k in range(n) if a[k] and b[k]), ZERO) for b in B]
         for a in ineq_rows]
    rays = []
    for t in _pointed_rays(M, d):
        x = [sum((t[j] * B[j][k] for j in range(d) if t[j]), ZERO) for k in range(n)]
        rays.append(primitive(x))
    return lines, sorted(rays)
