"""JSON forms for polyhedra, functions, families, programs and results.

Rationals are written as ``[numerator, denominator]``.  On input, plain
integers and ``"p/q"`` strings are accepted too; floats are rejected so that
no rounding can sneak in.
"""

from __future__ import annotations

from fractions import Fraction

from . import polykernel as pk
from .convexfn import Affine, ImproperNegInf, Indicator, MaxAffine, Restricted
from .optimality import ConvexProgram, MultiplierCase, NormalConeCase, Refutation
from .polykernel import INF, NEG_INF, Polyhedron
from .suprema import CaratheodoryDecomposition, FunctionFamily, SetResult


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# ---------------------------------------------------------------------------
# scalars


def parse_rational(obj, path: str) -> Fraction:
    if isinstance(obj, bool):
        raise SchemaError(path, "expected a rational, got a boolean")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, f"malformed rational {obj!r}") from None
    if isinstance(obj, list) and len(obj) == 2 and all(isinstance(v, int) and not isinstance(v, bool) for v in obj):
        if obj[1] == 0:
            raise SchemaError(path, "zero denominator")
        return Fraction(obj[0], obj[1])
    raise SchemaError(path, f"malformed rational {obj!r} (use [num, den], an integer or 'p/q')")


def parse_vector(obj, path: str, dim: int | None = None) -> tuple:
    if not isinstance(obj, list):
        raise SchemaError(path, "expected a list of rationals")
    if dim is not None and len(obj) != dim:
        raise SchemaError(path, f"expected {dim} entries, got {len(obj)}")
    return tuple(parse_rational(v, f"{path}[{i}]") for i, v in enumerate(obj))


def parse_point(obj, path: str, dim: int) -> tuple:
    """A list of ``dim`` rationals; a bare integer or string is allowed in dimension one."""
    if not isinstance(obj, list):
        obj = [obj]
    return parse_vector(obj, path, dim)


def rational_json(q) -> list | str:
    if q == INF:
        return "+inf"
    if q == NEG_INF:
        return "-inf"
    q = Fraction(q)
    return [q.numerator, q.denominator]


def vector_json(v) -> list:
    return [rational_json(x) for x in v]


def _require(obj, key, path):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing field")
    return obj[key]


# ---------------------------------------------------------------------------
# polyhedra


def parse_polyhedron(obj, path: str = "polyhedron") -> Polyhedron:
    dim = _require(obj, "dim", path)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SchemaError(f"{path}.dim", "expected a positive integer")
    unknown = set(obj) - {"dim", "vertices", "rays", "inequalities"}
    if unknown:
        raise SchemaError(path, f"unknown fields {sorted(unknown)}")
    try:
        P = None
        if "vertices" in obj or "rays" in obj:
            verts = [parse_vector(v, f"{path}.vertices[{i}]", dim) for i, v in enumerate(obj.get("vertices", []))]
            rays = [parse_vector(r, f"{path}.rays[{i}]", dim) for i, r in enumerate(obj.get("rays", []))]
            if rays and not verts:
                raise SchemaError(f"{path}.vertices", "rays given without a vertex")
            P = pk.from_vrep(verts, rays, dim) if verts else pk.empty(dim)
        if "inequalities" in obj:
            rows = []
            for i, row in enumerate(obj["inequalities"]):
                p = f"{path}.inequalities[{i}]"
                rows.append((parse_vector(_require(row, "normal", p), f"{p}.normal", dim), parse_rational(_require(row, "offset", p), f"{p}.offset")))
            H = pk.from_hrep(rows, dim)
            if P is not None and not pk.set_equal(P, H):
                raise SchemaError(path, "vertex and inequality descriptions disagree")
            P = P or H
    except pk.DimensionError as exc:
        raise SchemaError(path, str(exc)) from None
    if P is None:
        raise SchemaError(path, "needs vertices/rays or inequalities")
    return P


def polyhedron_json(P: Polyhedron) -> dict:
    return {
        "dim": P.dim,
        "vertices": [vector_json(v) for v in P.vertices],
        "rays": [vector_json(r) for r in P.rays],
        "inequalities": [{"normal": vector_json(a), "offset": rational_json(b)} for a, b in P.inequalities],
    }


# ---------------------------------------------------------------------------
# functions, families, programs


KINDS = ("affine", "max_affine", "restricted", "indicator", "improper")


def _parse_pieces(obj, path, dim):
    if not isinstance(obj, list):
        raise SchemaError(path, "expected a list of pieces [a..., b]")
    out = []
    for i, row in enumerate(obj):
        vals = parse_vector(row, f"{path}[{i}]", dim + 1)
        out.append((vals[:dim], vals[dim]))
    return out


def parse_function(obj, path: str = "function", dim: int | None = None):
    kind = _require(obj, "kind", path)
    if kind not in KINDS:
        raise SchemaError(f"{path}.kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    dom = parse_polyhedron(obj["domain"], f"{path}.domain") if "domain" in obj else None
    if dom is not None:
        dim = dom.dim if dim is None else dim
        if dom.dim != dim:
            raise SchemaError(f"{path}.domain", f"dimension {dom.dim}, expected {dim}")
    if dim is None:
        pieces_raw = obj.get("pieces") or [[]]
        dim = len(pieces_raw[0]) - 1
        if dim < 1:
            raise SchemaError(f"{path}.pieces", "cannot infer dimension")
    pieces = _parse_pieces(obj.get("pieces", []), f"{path}.pieces", dim)
    try:
        if kind == "affine":
            if len(pieces) != 1:
                raise SchemaError(f"{path}.pieces", "affine needs exactly one piece")
            return Affine(*pieces[0])
        if kind == "max_affine":
            if not pieces:
                raise SchemaError(f"{path}.pieces", "max_affine needs at least one piece")
            return MaxAffine(pieces)
        if dom is None:
            raise SchemaError(f"{path}.domain", "missing field")
        if kind == "restricted":
            return Restricted(pieces, dom)
        if pieces:
            raise SchemaError(f"{path}.pieces", f"{kind} takes no pieces")
        if kind == "indicator":
            return Indicator(dom)
        return ImproperNegInf(dom)
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def function_json(f) -> dict:
    if isinstance(f, Affine):
        return {"kind": "affine", "pieces": [vector_json(f.a + (f.b,))]}
    if isinstance(f, MaxAffine):
        return {"kind": "max_affine", "pieces": [vector_json(a + (b,)) for a, b in f.pieces]}
    if isinstance(f, Restricted):
        return {
            "kind": "restricted",
            "pieces": [vector_json(a + (b,)) for a, b in f.pieces],
            "domain": polyhedron_json(f.domain),
        }
    kind = "indicator" if isinstance(f, Indicator) else "improper"
    return {"kind": kind, "domain": polyhedron_json(f.domain)}


def parse_family(obj, path: str = "family") -> FunctionFamily:
    dim = _require(obj, "dim", path)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SchemaError(f"{path}.dim", "expected a positive integer")
    if dim > pk.max_dim():
        raise SchemaError(f"{path}.dim", f"dimension {dim} exceeds cap {pk.max_dim()}")
    entries_raw = _require(obj, "entries", path)
    if not isinstance(entries_raw, dict) or not entries_raw:
        raise SchemaError(f"{path}.entries", "expected a nonempty object")
    entries = {str(k): parse_function(v, f"{path}.entries.{k}", dim) for k, v in entries_raw.items()}
    hints = [parse_vector(h, f"{path}.closure_hints[{i}]", dim) for i, h in enumerate(obj.get("closure_hints", []))]
    try:
        return FunctionFamily(entries, dim, tuple(hints))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def family_json(F: FunctionFamily) -> dict:
    out = {"dim": F.dim, "entries": {str(k): function_json(f) for k, f in F.entries.items()}}
    if F.closure_hints:
        out["closure_hints"] = [vector_json(h) for h in F.closure_hints]
    return out


def parse_program(obj, path: str = "program") -> ConvexProgram:
    F = parse_family(_require(obj, "constraints", path), f"{path}.constraints")
    f0 = parse_function(_require(obj, "objective", path), f"{path}.objective", F.dim)
    try:
        return ConvexProgram(f0, F)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def program_json(prog: ConvexProgram) -> dict:
    return {"objective": function_json(prog.objective), "constraints": family_json(prog.constraints)}


# ---------------------------------------------------------------------------
# results


def set_result_json(res: SetResult) -> dict:
    return {
        "set": polyhedron_json(res.set),
        "theorem": res.theorem,
        "eps": [rational_json(e) for e in res.eps],
        "scheme": res.scheme,
        "stabilized": res.stabilized,
        "schedule_stable": res.schedule_stable,
        "certified": res.certified,
        "hint_used": res.hint_used,
        "literal": polyhedron_json(res.literal) if res.literal is not None else None,
        "notes": list(res.notes),
    }


def certificate_json(cert) -> dict:
    if isinstance(cert, NormalConeCase):
        return {
            "case": "normal_cone",
            "theorem": cert.theorem,
            "witnesses": [
                {"eps": rational_json(e), "g0": vector_json(g0), "k": vector_json(k)} for e, g0, k in cert.witnesses
            ],
        }
    if isinstance(cert, MultiplierCase):
        return {
            "case": "multiplier",
            "theorem": cert.theorem,
            "lam": rational_json(cert.lam),
            "g0": vector_json(cert.g0),
            "s": vector_json(cert.s),
        }
    if isinstance(cert, Refutation):
        return {
            "case": "refutation",
            "theorem": cert.theorem,
            "direction": vector_json(cert.direction),
            "step": rational_json(cert.step),
            "new_point": vector_json(cert.new_point),
            "decrease": rational_json(cert.decrease),
        }
    raise TypeError(f"not a certificate: {cert!r}")


def decomposition_json(dec: CaratheodoryDecomposition) -> dict:
    return {
        "weights": {str(k): rational_json(v) for k, v in dec.weights.items()},
        "support": [str(t) for t in dec.support],
        "g": vector_json(dec.g),
        "eps": rational_json(dec.eps),
    }
