"""JSON problem files and JSON/text reports.

Rationals travel as strings (``"-3/4"``) or integers, never as floats.
"""

from __future__ import annotations

import json

from .errors import DimensionError, ParseError
from .functions import AffineFunctional, PWLConvexFunction
from .geometry import HPolyhedron, as_h, format_interval, format_h, format_v, interval_bounds
from .program import ParametricProgram
from .rational import INF, as_rational, format_rational

SCHEMA_VERSION = 1


# ---------------------------------------------------------------- problems

def _field(obj, key, loc, required=True, default=None):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", loc)
    if key not in obj:
        if required:
            raise ParseError(f"missing key {key!r}", loc)
        return default
    return obj[key]


def _list(value, loc):
    if not isinstance(value, list):
        raise ParseError("expected a list", loc)
    return value


def _vector(value, n, loc):
    vec = tuple(as_rational(v, f"{loc}[{i}]") for i, v in enumerate(_list(value, loc)))
    if len(vec) != n:
        raise DimensionError(f"{loc}: expected {n} entries, got {len(vec)}")
    return vec


def _rows(value, n, loc):
    return [(_vector(_field(r, "a", f"{loc}[{i}]"), n, f"{loc}[{i}].a"),
             as_rational(_field(r, "b", f"{loc}[{i}]"), f"{loc}[{i}].b"))
            for i, r in enumerate(_list(value, loc))]


def _block(value, n, loc):
    if value is None:
        return None
    return HPolyhedron(n, _rows(_field(value, "ineqs", loc, False, []), n, f"{loc}.ineqs"),
                       _rows(_field(value, "eqs", loc, False, []), n, f"{loc}.eqs"))


def _pieces(value, n, loc):
    rows = _rows(value, n, loc)
    if not rows:
        raise ParseError("a piecewise-linear function needs at least one piece", loc)
    return rows


def _dimension(value, loc):
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ParseError(f"expected a nonnegative integer, got {value!r}", loc)
    return value


def problem_from_dict(data) -> ParametricProgram:
    nx = _dimension(_field(data, "nx", "$"), "nx")
    ny = _dimension(_field(data, "ny", "$"), "ny")
    if nx + ny == 0:
        raise ParseError("nx + ny must be positive", "$")
    n = nx + ny
    phi_data = _field(data, "phi", "$")
    phi = PWLConvexFunction(n, _pieces(_field(phi_data, "pieces", "phi"), n, "phi.pieces"),
                            _block(_field(phi_data, "domain", "phi", False), n, "phi.domain"))
    gs = []
    for i, g in enumerate(_list(_field(data, "g", "$", False, []), "g")):
        gs.append(PWLConvexFunction(n, _pieces(g, n, f"g[{i}]")))
    hs = []
    for j, h in enumerate(_list(_field(data, "h", "$", False, []), "h")):
        loc = f"h[{j}]"
        hs.append(AffineFunctional(_vector(_field(h, "xstar", loc), nx, f"{loc}.xstar"),
                                   _vector(_field(h, "ystar", loc), ny, f"{loc}.ystar"),
                                   as_rational(_field(h, "alpha", loc), f"{loc}.alpha")))
    C = _block(_field(data, "C", "$", False), n, "C")
    return ParametricProgram(nx, ny, phi, gs, hs, C)


def parse_problem(text) -> ParametricProgram:
    """Parse a problem file.  Raises :class:`ParseError` or :class:`DimensionError` with a location."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return problem_from_dict(data)


def _r(x):
    return format_rational(x)


def vector_out(vec):
    return [_r(x) for x in vec]


def _rows_out(rows):
    return [{"a": vector_out(a), "b": _r(b)} for a, b in rows]


def _block_out(P: HPolyhedron):
    return {"ineqs": _rows_out(P.ineqs), "eqs": _rows_out(P.eqs)}


def problem_to_dict(P: ParametricProgram) -> dict:
    out = {"nx": P.nx, "ny": P.ny,
           "phi": {"pieces": _rows_out(P.phi.pieces)},
           "g": [_rows_out(g.pieces) for g in P.gs],
           "h": [{"xstar": vector_out(h.xstar), "ystar": vector_out(h.ystar), "alpha": _r(h.alpha)} for h in P.hs]}
    if not P.phi.full_domain:
        out["phi"]["domain"] = _block_out(P.phi.domain)
    if P.C.ineqs or P.C.eqs:
        out["C"] = _block_out(P.C)
    return out


def serialize_problem(P: ParametricProgram) -> str:
    return dumps(problem_to_dict(P))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- reports

def polyhedron_to_dict(P) -> dict:
    """Canonical H- and V-forms; 1-D sets also get an ``interval`` entry."""
    H = as_h(P).canonical_h()
    V = as_h(P).canonical_v()
    out = {
        "dim": H.dim,
        "empty": not V.points,
        "h": {"ineqs": sorted(_rows_out(H.ineqs), key=_row_key),
              "eqs": sorted(_rows_out(H.eqs), key=_row_key)},
        "v": {name: [vector_out(g) for g in sorted(getattr(V, name))] for name in ("points", "rays", "lines")},
    }
    if H.dim == 1:
        bounds = interval_bounds(V)
        out["interval"] = None if bounds is None else [
            "-inf" if bounds[0] is None else _r(bounds[0]),
            "+inf" if bounds[1] is None else _r(bounds[1])]
    return out


def _row_key(row):
    return (row["a"], row["b"])


def multipliers_to_dict(M) -> dict:
    return {"kind": M.kind, "m": M.m, "k": M.k, "set": polyhedron_to_dict(M.set)}


def estimate_to_dict(E) -> dict:
    return {"set": polyhedron_to_dict(E.set), "strict": E.strict, "relation": E.relation}


def scalar_out(x):
    if x == INF:
        return "+inf"
    if x == -INF:
        return "-inf"
    return _r(x)


def solve_to_dict(xbar, sol) -> dict:
    out = {"x": vector_out(xbar), "status": sol.status, "mu": scalar_out(sol.value)}
    if sol.optimal:
        out["solutions"] = polyhedron_to_dict(sol.solutions)
    return out


def report_to_dict(report) -> dict:
    xbar, ybar = report.anchor
    out = {
        "anchor": {"x": vector_out(xbar), "y": None if ybar is None else vector_out(ybar)},
        "status": report.status,
        "mu": scalar_out(report.mu_value),
    }
    if report.solutions is None:
        return out
    slater = report.regularity["slater"]
    out.update({
        "solutions": polyhedron_to_dict(report.solutions),
        "qualified": report.qualified,
        "paths_agree": report.paths_agree,
        "subdiff_mu": polyhedron_to_dict(report.subdiff_mu),
        "singular_subdiff_mu": polyhedron_to_dict(report.singular_subdiff_mu),
        "lambda0": multipliers_to_dict(report.lambda0),
        "lambda": multipliers_to_dict(report.lambda_),
        "lambda_inf": multipliers_to_dict(report.lambda_inf),
        "upper_estimate": estimate_to_dict(report.upper_estimate),
        "singular_upper_estimate": estimate_to_dict(report.singular_upper_estimate),
        "strict_flags": dict(report.strict_flags),
        "regularity": {
            "slater": {"ok": slater.ok,
                       "point": None if slater.point is None else vector_out(slater.point),
                       "reason": slater.reason},
            "aubin": report.regularity["aubin"],
        },
        "oracle": {
            "support_ok": report.oracle["support_ok"],
            "singular_ok": report.oracle["singular_ok"],
            "support": [{"direction": vector_out(v.direction), "support": scalar_out(v.support),
                         "derivative": scalar_out(v.derivative), "equal": v.equal}
                        for v in report.oracle["support"]],
        },
        "warnings": list(report.warnings),
    })
    return out


def envelope(command, body) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, **body}


# ---------------------------------------------------------------- text

def describe(P) -> str:
    """A one-line human description; intervals for 1-D sets."""
    H = as_h(P)
    if H.dim == 0:
        return "{()}" if H.feasible() else "∅"
    if H.dim == 1:
        return format_interval(H)
    return f"{format_v(H.canonical_v())}    [{format_h(H.canonical_h())}]"
