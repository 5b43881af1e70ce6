"""Exact polyhedral sets in H-form and V-form and the operations on them.

An :class:`HPolyhedron` is ``{z : a.z <= b (ineqs), c.z = d (eqs)}``; a
:class:`VPolyhedron` is ``conv(points) + cone(rays) + span(lines)`` and is
empty exactly when it has no points.  Conversions go through the double
description method and yield canonical, irredundant representations, so two
polyhedra are equal as sets iff their canonical forms coincide.

Coordinates are 0-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import lp
from .dd import cone_generators
from .errors import DimensionError, EngineError, MembershipError, QualificationError
from .rational import INF, ONE, Q, ZERO, dot, primitive

EQUAL = "equal"
SUBSET = "subset"
SUPERSET = "superset"
INCOMPARABLE = "incomparable"


def _vec(v):
    return tuple(Q(x) for x in v)


class Polyhedron:
    """Behaviour shared by both representations."""

    dim: int

    @property
    def h(self) -> "HPolyhedron":
        raise NotImplementedError

    @property
    def v(self) -> "VPolyhedron":
        raise NotImplementedError

    def contains(self, z) -> bool:
        return self.h.contains(z)

    def is_empty(self) -> bool:
        return not self.v.points

    def canonical_h(self) -> "HPolyhedron":
        return self.v.canonical_h()

    def canonical_v(self) -> "VPolyhedron":
        return self.h.canonical_v()

    def is_bounded(self) -> bool:
        v = self.v
        return not v.rays and not v.lines


@dataclass(frozen=True)
class HPolyhedron(Polyhedron):
    dim: int
    ineqs: tuple = ()
    eqs: tuple = ()

    def __post_init__(self):
        ineqs = tuple((_vec(a), Q(b)) for a, b in self.ineqs)
        eqs = tuple((_vec(c), Q(d)) for c, d in self.eqs)
        for a, _ in ineqs + eqs:
            if len(a) != self.dim:
                raise DimensionError(f"row of length {len(a)} in a {self.dim}-dimensional polyhedron")
        object.__setattr__(self, "ineqs", ineqs)
        object.__setattr__(self, "eqs", eqs)

    @property
    def h(self):
        return self

    @cached_property
    def v(self):
        return to_vrep(self)

    def contains(self, z) -> bool:
        if len(z) != self.dim:
            raise DimensionError(f"point of length {len(z)} for dimension {self.dim}")
        return (all(dot(a, z) <= b for a, b in self.ineqs)
                and all(dot(c, z) == d for c, d in self.eqs))

    def canonical_v(self):
        return self.v

    def is_trivially_empty(self) -> bool:
        return any(not any(a) and b < 0 for a, b in self.ineqs)

    @cached_property
    def _canonical_h(self):
        return to_hrep(self.v)

    def canonical_h(self):
        return self._canonical_h

    def feasible(self) -> bool:
        """LP feasibility; agrees with ``not is_empty()``."""
        if self.dim == 0:
            return all(b >= 0 for _, b in self.ineqs) and all(d == 0 for _, d in self.eqs)
        return lp.feasible_point([a for a, _ in self.ineqs], [b for _, b in self.ineqs],
                                 [c for c, _ in self.eqs], [d for _, d in self.eqs],
                                 n=self.dim) is not None

    def __str__(self):
        return format_h(self)


@dataclass(frozen=True)
class VPolyhedron(Polyhedron):
    dim: int
    points: tuple = ()
    rays: tuple = ()
    lines: tuple = ()

    def __post_init__(self):
        for name in ("points", "rays", "lines"):
            vecs = tuple(_vec(p) for p in getattr(self, name))
            for p in vecs:
                if len(p) != self.dim:
                    raise DimensionError(f"generator of length {len(p)} in dimension {self.dim}")
            object.__setattr__(self, name, vecs)

    @cached_property
    def h(self):
        return to_hrep(self)

    @property
    def v(self):
        return self

    def canonical_h(self):
        return self.h

    def canonical_v(self):
        return self.h.v

    def __str__(self):
        return format_v(self)


# ---------------------------------------------------------------- constructors

def full_space(n) -> HPolyhedron:
    return HPolyhedron(n)


def empty(n) -> HPolyhedron:
    return HPolyhedron(n, (((ZERO,) * n, Q(-1)),))


def singleton(z) -> VPolyhedron:
    return VPolyhedron(len(z), (tuple(z),))


def origin(n) -> VPolyhedron:
    return VPolyhedron(n, ((ZERO,) * n,))


def interval(lo, hi) -> HPolyhedron:
    """1-D interval; ``None`` for an infinite end."""
    rows = []
    if hi is not None:
        rows.append(((1,), hi))
    if lo is not None:
        rows.append(((-1,), -Q(lo)))
    return HPolyhedron(1, rows)


def as_h(P) -> HPolyhedron:
    return P.h


def as_v(P) -> VPolyhedron:
    return P.v


# ---------------------------------------------------------------- conversions

def to_vrep(P) -> VPolyhedron:
    """Canonical irredundant V-form of an H-polyhedron."""
    P = as_h(P)
    n = P.dim
    ineq = [[-a for a in row] + [b] for row, b in P.ineqs]
    ineq.append([ZERO] * n + [ONE])
    eq = [[-c for c in row] + [d] for row, d in P.eqs]
    lines, rays = cone_generators(ineq, eq, n + 1)
    points, out_rays = [], []
    for r in rays:
        t = r[n]
        if t > 0:
            points.append(tuple(Q(x, t) for x in r[:n]))
        else:
            out_rays.append(tuple(Q(x) for x in r[:n]))
    if not points:
        return VPolyhedron(n)
    out_lines = [tuple(Q(x) for x in l[:n]) for l in lines]
    return VPolyhedron(n, tuple(sorted(points)), tuple(sorted(out_rays)), tuple(sorted(out_lines)))


def _normalize_eq(c, d):
    lead = next((x for x in c if x), None)
    if lead is not None and lead < 0:
        c, d = [-x for x in c], -d
    ints = primitive(list(c) + [d])
    return tuple(Q(x) for x in ints[:-1]), Q(ints[-1])


def to_hrep(V) -> HPolyhedron:
    """Canonical irredundant H-form of a V-polyhedron."""
    V = as_v(V)
    n = V.dim
    if not V.points:
        return empty(n)
    ineq = [list(p) + [ONE] for p in V.points] + [list(r) + [ZERO] for r in V.rays]
    eq = [list(l) + [ZERO] for l in V.lines]
    lines, rays = cone_generators(ineq, eq, n + 1)
    eqs = sorted(_normalize_eq([-x for x in l[:n]], Q(l[n])) for l in lines)
    ineqs = []
    for r in rays:
        if not any(r[:n]):
            continue
        ineqs.append((tuple(Q(-x) for x in r[:n]), Q(r[n])))
    return HPolyhedron(n, tuple(sorted(ineqs)), tuple(eqs))


# ---------------------------------------------------------------- set algebra

def _check_dims(P, Q_):
    if P.dim != Q_.dim:
        raise DimensionError(f"dimension mismatch: {P.dim} vs {Q_.dim}")


def minkowski_sum(P, Q_) -> VPolyhedron:
    """``{p + q}``: pairwise sums of points, concatenated rays and lines."""
    _check_dims(P, Q_)
    A, B = as_v(P), as_v(Q_)
    if not A.points or not B.points:
        return VPolyhedron(P.dim)
    points = {tuple(x + y for x, y in zip(p, q)) for p in A.points for q in B.points}
    return VPolyhedron(P.dim, tuple(sorted(points)), _dedupe(A.rays + B.rays), _dedupe(A.lines + B.lines))


def minkowski_sum_all(sets, dim) -> VPolyhedron:
    out = origin(dim)
    for S in sets:
        out = minkowski_sum(out, S)
    return out


def _dedupe(vecs):
    seen = {}
    for v in vecs:
        if any(v):
            key = tuple(primitive(v))
            seen.setdefault(key, tuple(Q(x) for x in key))
    return tuple(sorted(seen.values()))


def scale(P, factor) -> VPolyhedron:
    """``factor * P`` for ``factor >= 0``; ``0 * P`` is ``{0}`` for nonempty P."""
    factor = Q(factor)
    if factor < 0:
        raise ValueError("negative scaling factor")
    V = as_v(P)
    if not V.points:
        return V
    if factor == 0:
        return origin(V.dim)
    return VPolyhedron(V.dim, tuple(tuple(factor * x for x in p) for p in V.points), V.rays, V.lines)


def negate(P) -> VPolyhedron:
    V = as_v(P)
    return VPolyhedron(V.dim, tuple(tuple(-x for x in p) for p in V.points), tuple(tuple(-x for x in r) for r in V.rays), V.lines)


def intersect(P, Q_) -> HPolyhedron:
    """Exact intersection; rows concatenated then pruned by LP."""
    _check_dims(P, Q_)
    A, B = as_h(P), as_h(Q_)
    return remove_redundant(HPolyhedron(A.dim, A.ineqs + B.ineqs, A.eqs + B.eqs))


def intersect_all(sets, dim) -> HPolyhedron:
    ineqs, eqs = (), ()
    for S in sets:
        if S.dim != dim:
            raise DimensionError(f"dimension mismatch: {S.dim} vs {dim}")
        H = as_h(S)
        ineqs += H.ineqs
        eqs += H.eqs
    return remove_redundant(HPolyhedron(dim, ineqs, eqs))


def _normalize_row(a, b):
    ints = primitive(list(a) + [b])
    return tuple(Q(x) for x in ints[:-1]), Q(ints[-1])


def _prefilter(rows, n):
    """Scale rows to primitive integers and keep the tightest copy of each normal.

    Returns ``None`` when a row reads ``0 <= negative``.
    """
    best = {}
    for a, b in rows:
        if not any(a):
            if b < 0:
                return None
            continue
        # normalise the direction only, so rows with the same normal collapse
        ints = primitive(a)
        f = next(Q(x) / y for x, y in zip(a, ints) if y)
        key = tuple(ints)
        rhs = Q(b) / f
        if key not in best or rhs < best[key]:
            best[key] = rhs
    return [(tuple(Q(x) for x in k), r) for k, r in best.items()]


def remove_redundant(P) -> HPolyhedron:
    """Drop every inequality implied by the others (exact LP per row)."""
    H = as_h(P)
    n = H.dim
    rows = _prefilter(H.ineqs, n)
    eqs = []
    for c, d in H.eqs:
        if not any(c):
            if d:
                return empty(n)
            continue
        eqs.append(_normalize_eq(c, d))
    eqs = sorted(set(eqs))
    if rows is None:
        return empty(n)
    if n == 0:
        return HPolyhedron(0)
    E = [c for c, _ in eqs]
    e = [d for _, d in eqs]
    if not lp.maximize([ZERO] * n, [a for a, _ in rows], [b for _, b in rows], E, e, n=n).feasible:
        return empty(n)
    keep = list(rows)
    i = 0
    while i < len(keep):
        a, b = keep[i]
        others = keep[:i] + keep[i + 1:]
        res = lp.maximize(a, [r for r, _ in others], [s for _, s in others], E, e, n=n)
        if res.optimal and res.value <= b:
            keep.pop(i)
        else:
            i += 1
    return HPolyhedron(n, tuple(sorted(keep)), tuple(eqs))


def project(P, coords) -> HPolyhedron:
    """Coordinate projection onto ``coords`` (0-based, in the given order).

    Fourier-Motzkin elimination: equality rows are used for substitution
    first, then each remaining variable is eliminated by pairing rows of
    opposite sign, with LP redundancy removal after every step.
    """
    H = as_h(P)
    n = H.dim
    coords = list(coords)
    if len(set(coords)) != len(coords) or any(not 0 <= c < n for c in coords):
        raise DimensionError(f"bad coordinate list {coords} for dimension {n}")
    out_dim = len(coords)
    keep = set(coords)
    elim = [j for j in range(n) if j not in keep]
    ineqs = [(list(a), b) for a, b in H.ineqs]
    eqs = [(list(c), d) for c, d in H.eqs]

    for j in elim:
        r = next((i for i, (c, _) in enumerate(eqs) if c[j]), None)
        if r is None:
            continue
        c, d = eqs.pop(r)
        inv = 1 / c[j]

        def subst(row):
            a, b = row
            f = a[j]
            if not f:
                return row
            f *= inv
            return [x - f * y for x, y in zip(a, c)], b - f * d

        eqs = [subst(row) for row in eqs]
        ineqs = [subst(row) for row in ineqs]

    for c, d in eqs:
        if not any(c) and d:
            return empty(out_dim)
    ineqs = _prefilter(ineqs, n)
    if ineqs is None:
        return empty(out_dim)
    current = remove_redundant(HPolyhedron(n, ineqs, [(c, d) for c, d in eqs if any(c)]))
    if current.is_trivially_empty():
        return empty(out_dim)

    remaining = [j for j in elim if any(a[j] for a, _ in current.ineqs)]
    while remaining:
        def cost(j):
            p = sum(1 for a, _ in current.ineqs if a[j] > 0)
            q = sum(1 for a, _ in current.ineqs if a[j] < 0)
            return (p * q - p - q, j)
        j = min(remaining, key=cost)
        pos = [(a, b) for a, b in current.ineqs if a[j] > 0]
        neg = [(a, b) for a, b in current.ineqs if a[j] < 0]
        new = [(a, b) for a, b in current.ineqs if not a[j]]
        for a, b in pos:
            for c, d in neg:
                fa, fc = -c[j], a[j]
                new.append(([fa * x + fc * y for x, y in zip(a, c)], fa * b + fc * d))
        new = _prefilter(new, n)
        if new is None:
            return empty(out_dim)
        current = remove_redundant(HPolyhedron(n, new, current.eqs))
        if current.is_trivially_empty():
            return empty(out_dim)
        remaining = [k for k in elim if any(a[k] for a, _ in current.ineqs)]

    def restrict(a):
        return tuple(a[k] for k in coords)

    return HPolyhedron(out_dim,
                       tuple((restrict(a), b) for a, b in current.ineqs),
                       tuple((restrict(c), d) for c, d in current.eqs))


def embed(P, dim, coords) -> HPolyhedron:
    """Lift ``P`` into ``Q^dim`` placing its coordinates at ``coords``."""
    H = as_h(P)

    def lift(a):
        out = [ZERO] * dim
        for k, c in enumerate(coords):
            out[c] = a[k]
        return out

    return HPolyhedron(dim, [(lift(a), b) for a, b in H.ineqs], [(lift(c), d) for c, d in H.eqs])


def cartesian_product(P, Q_) -> HPolyhedron:
    A, B = as_h(P), as_h(Q_)
    n = A.dim + B.dim
    left = embed(A, n, range(A.dim))
    right = embed(B, n, range(A.dim, n))
    return HPolyhedron(n, left.ineqs + right.ineqs, left.eqs + right.eqs)


def coordinate_subspace(dim, fixed, values=None) -> HPolyhedron:
    """``{z : z[i] = values[i] for i in fixed}`` (zeros by default)."""
    values = values or [ZERO] * len(fixed)
    eqs = []
    for i, val in zip(fixed, values):
        row = [ZERO] * dim
        row[i] = ONE
        eqs.append((row, val))
    return HPolyhedron(dim, (), eqs)


# ---------------------------------------------------------------- cones

def normal_cone_at(P, z) -> VPolyhedron:
    """``N(z; P)``: cone of active inequality normals plus span of equality normals."""
    H = as_h(P)
    z = _vec(z)
    if not H.contains(z):
        raise MembershipError(f"point {format_vector(z)} is not in the set")
    rays = [a for a, b in H.ineqs if dot(a, z) == b]
    lines = [c for c, _ in H.eqs]
    return VPolyhedron(H.dim, ((ZERO,) * H.dim,), _dedupe(rays), _dedupe(lines))


def interior_slack(sets, base=None, dim=None):
    """Largest common slack ``s <= 1`` with which a point strictly satisfies every
    inequality of ``sets`` while lying in ``base``.

    Returns ``(s, point)``; ``s`` is ``None`` if the system is infeasible and
    ``0`` when some set carries a nontrivial equality row (empty interior).
    """
    n = dim if dim is not None else sets[0].dim
    A, b, E, e = [], [], [], []
    for S in sets:
        H = as_h(S)
        for c, _ in H.eqs:
            if any(c):
                return ZERO, None
        for a, rhs in H.ineqs:
            A.append(list(a) + [ONE])
            b.append(rhs)
    if base is not None:
        H = as_h(base)
        for a, rhs in H.ineqs:
            A.append(list(a) + [ZERO])
            b.append(rhs)
        for c, d in H.eqs:
            E.append(list(c) + [ZERO])
            e.append(d)
    A.append([ZERO] * n + [ONE])
    b.append(ONE)
    res = lp.maximize([ZERO] * n + [ONE], A, b, E, e, n=n + 1)
    if not res.feasible:
        return None, None
    return res.value, res.x[:n]


def is_interior_point(P, z) -> bool:
    H = as_h(P)
    if any(any(c) for c, _ in H.eqs):
        return False
    return all(dot(a, z) < b for a, b in H.ineqs)


def normal_cone_intersection_rule(sets, z) -> VPolyhedron:
    """``N(z; A_1 ∩ ... ∩ A_m)`` as the sum of the individual normal cones.

    Requires ``A_1 ∩ int A_2 ∩ ... ∩ int A_m`` nonempty (checked by LP);
    raises :class:`QualificationError` otherwise.
    """
    sets = list(sets)
    if not sets:
        raise ValueError("need at least one set")
    dim = sets[0].dim
    for S in sets:
        _check_dims(sets[0], S)
        if not S.contains(z):
            raise MembershipError(f"point {format_vector(z)} is not in every set")
    s, _ = interior_slack(sets[1:], base=sets[0], dim=dim)
    if s is None or s <= 0:
        raise QualificationError("A_1 ∩ int A_2 ∩ ... ∩ int A_m is empty")
    total = minkowski_sum_all([normal_cone_at(S, z) for S in sets], dim)
    whole = normal_cone_at(_stack(sets, dim), z)
    if set_relation(total, whole) != EQUAL:
        raise EngineError("intersection rule disagrees with the direct normal cone")
    return total


def _stack(sets, dim):
    ineqs, eqs = (), ()
    for S in sets:
        H = as_h(S)
        ineqs += H.ineqs
        eqs += H.eqs
    return HPolyhedron(dim, ineqs, eqs)


def cone_hull(P) -> VPolyhedron:
    """``{t v : t >= 0, v in P}``; points become rays."""
    V = as_v(P)
    n = V.dim
    return VPolyhedron(n, ((ZERO,) * n,), _dedupe(V.points + V.rays), V.lines)


def span_hull(vectors, dim=None) -> VPolyhedron:
    vectors = [_vec(v) for v in vectors]
    if dim is None:
        if not vectors:
            raise ValueError("dimension needed for an empty span")
        dim = len(vectors[0])
    return VPolyhedron(dim, ((ZERO,) * dim,), (), _dedupe(vectors))


# ---------------------------------------------------------------- comparison

def is_subset(P, Q_) -> bool:
    """Exact ``P ⊆ Q`` by checking P's generators against Q's inequalities."""
    _check_dims(P, Q_)
    V, H = as_v(P), as_h(Q_)
    if not V.points:
        return True
    if H.is_trivially_empty() or not all(H.contains(p) for p in V.points):
        return False
    for r in V.rays:
        if any(dot(a, r) > 0 for a, _ in H.ineqs) or any(dot(c, r) for c, _ in H.eqs):
            return False
    for l in V.lines:
        if any(dot(a, l) for a, _ in H.ineqs) or any(dot(c, l) for c, _ in H.eqs):
            return False
    return True


def set_relation(P, Q_) -> str:
    _check_dims(P, Q_)
    a = is_subset(P, Q_)
    b = is_subset(Q_, P)
    if a and b:
        return EQUAL
    if a:
        return SUBSET
    if b:
        return SUPERSET
    return INCOMPARABLE


def same_set(P, Q_) -> bool:
    return set_relation(P, Q_) == EQUAL


def support(P, d):
    """``sup {d.z : z in P}``; ``+inf`` if unbounded, ``-inf`` if empty."""
    H = as_h(P)
    if H.dim == 0:
        return ZERO if H.feasible() else -INF
    res = lp.maximize(d, [a for a, _ in H.ineqs], [b for _, b in H.ineqs],
                      [c for c, _ in H.eqs], [e for _, e in H.eqs], n=H.dim)
    if res.status == lp.INFEASIBLE:
        return -INF
    if res.status == lp.UNBOUNDED:
        return INF
    return res.value


# ---------------------------------------------------------------- formatting

def format_vector(z):
    from .rational import format_rational
    return "(" + ", ".join(format_rational(x) for x in z) + ")"


def interval_bounds(P):
    """``(lo, hi)`` of a 1-D polyhedron with ``None`` for infinite ends, or ``None`` if empty."""
    if P.dim != 1:
        raise DimensionError("interval_bounds needs a 1-dimensional set")
    V = as_v(P)
    if not V.points:
        return None
    if V.lines:
        return (None, None)
    lo = min(p[0] for p in V.points)
    hi = max(p[0] for p in V.points)
    for r in V.rays:
        if r[0] > 0:
            hi = None
        else:
            lo = None
    return lo, hi


def format_interval(P):
    from .rational import format_rational
    b = interval_bounds(P)
    if b is None:
        return "∅"
    lo, hi = b
    if lo is not None and lo == hi:
        return "{" + format_rational(lo) + "}"
    left = "(-inf" if lo is None else "[" + format_rational(lo)
    right = "+inf)" if hi is None else format_rational(hi) + "]"
    return f"{left}, {right}"


def format_h(P):
    from .rational import format_rational

    def term(a):
        parts = []
        for i, x in enumerate(a):
            if x:
                parts.append(f"{format_rational(x)}*z{i}")
        return " + ".join(parts) or "0"

    rows = [f"{term(a)} <= {format_rational(b)}" for a, b in P.ineqs]
    rows += [f"{term(c)} = {format_rational(d)}" for c, d in P.eqs]
    return "{" + "; ".join(rows) + "}" if rows else f"Q^{P.dim}"


def format_v(P):
    if not P.points:
        return "∅"
    parts = ["conv{" + ", ".join(format_vector(p) for p in P.points) + "}"]
    if P.rays:
        parts.append("cone{" + ", ".join(format_vector(r) for r in P.rays) + "}")
    if P.lines:
        parts.append("span{" + ", ".join(format_vector(l) for l in P.lines) + "}")
    return " + ".join(parts)
