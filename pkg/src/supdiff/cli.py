"""Command-line front end: single queries and regression suites of scenarios.

Exit codes: 0 success, 1 expectation or certification mismatch,
2 usage or schema error, 3 computation refused because a hypothesis failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import polykernel as pk
from .jsonio import (
    SchemaError,
    certificate_json,
    decomposition_json,
    parse_family,
    parse_point,
    parse_polyhedron,
    parse_program,
    parse_rational,
    polyhedron_json,
    rational_json,
    set_result_json,
)
from .optimality import ConvexProgram, kkt_certify, silp_certify, verify_certificate
from .convexfn import Affine
from .suprema import (
    Custom,
    FunctionFamily,
    HypothesisError,
    Rho,
    SupremaError,
    Unit,
    active_set,
    caratheodory_decompose,
    geometric_schedule,
    normal_cone_dom,
    normal_cone_dom_mainfc,
    normal_cone_dom_proper,
    normal_cone_split,
    rho_weights,
    subdifferential_brondsted,
    subdifferential_split,
    subdifferential_sup,
    sup_value,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_REFUSED = 3

FAMILY_COMMANDS = (
    "normal-cone",
    "normal-cone-limit",
    "normal-cone-split",
    "subdiff",
    "subdiff-split",
    "brondsted",
    "decompose",
)
PROGRAM_COMMANDS = ("kkt", "silp")
COMMANDS = FAMILY_COMMANDS + PROGRAM_COMMANDS

QUERY_FIELDS = {"command", "point", "eps", "schedule", "weights", "exact_active", "certify", "g", "expected", "note"}


@dataclass
class Scenario:
    name: str
    family: FunctionFamily | None = None
    program: ConvexProgram | None = None
    queries: list = field(default_factory=list)
    path: str | None = None

    @property
    def dim(self) -> int:
        return self.family.dim if self.family is not None else self.program.dim


@dataclass
class QueryReport:
    scenario: str
    index: int
    command: str
    status: str  # "pass", "fail", "ok" (no expectation), "refused", "error"
    result: dict | None = None
    detail: str | None = None
    timing: float = 0.0

    def to_json(self, with_timing: bool = True) -> dict:
        out = {
            "scenario": self.scenario,
            "query": self.index,
            "command": self.command,
            "status": self.status,
            "result": self.result,
            "detail": self.detail,
        }
        if with_timing:
            out["timing_s"] = round(self.timing, 4)
        return out


# ---------------------------------------------------------------------------
# loading


def bundled_dir() -> Path:
    return Path(str(resources.files("supdiff") / "scenarios"))


def resolve_path(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    candidate = bundled_dir() / p.name
    if candidate.exists():
        return candidate
    raise SchemaError(str(path), "file not found")


def _read_json(path: Path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", f"invalid JSON: {exc.msg}") from None


def _parse_query(q, path: str) -> dict:
    if not isinstance(q, dict):
        raise SchemaError(path, "expected an object")
    unknown = set(q) - QUERY_FIELDS
    if unknown:
        raise SchemaError(path, f"unknown fields {sorted(unknown)}")
    cmd = q.get("command")
    if cmd not in COMMANDS:
        raise SchemaError(f"{path}.command", f"unknown command {cmd!r}")
    return q


def load_scenario(path) -> Scenario:
    """Scenario file, or a bare family/program JSON (then without queries)."""
    p = resolve_path(str(path))
    obj = _read_json(p)
    where = p.name
    if not isinstance(obj, dict):
        raise SchemaError(where, "expected an object")
    if "entries" in obj:
        return Scenario(p.stem, family=parse_family(obj, where), path=str(p))
    if "objective" in obj:
        return Scenario(p.stem, program=parse_program(obj, where), path=str(p))
    name = obj.get("name", p.stem)
    fam = parse_family(obj["family"], f"{where}:family") if "family" in obj else None
    prog = parse_program(obj["program"], f"{where}:program") if "program" in obj else None
    if (fam is None) == (prog is None):
        raise SchemaError(where, "scenario needs exactly one of 'family' or 'program'")
    queries = obj.get("queries", [])
    if not isinstance(queries, list):
        raise SchemaError(f"{where}:queries", "expected a list")
    parsed = [_parse_query(q, f"{where}:queries[{i}]") for i, q in enumerate(queries)]
    for i, q in enumerate(parsed):
        kind_ok = q["command"] in (FAMILY_COMMANDS if fam is not None else PROGRAM_COMMANDS)
        if not kind_ok:
            raise SchemaError(f"{where}:queries[{i}].command", f"{q['command']!r} does not apply to this scenario")
    return Scenario(name, fam, prog, parsed, str(p))


# ---------------------------------------------------------------------------
# execution


def _scheme(choice, base: Path | None = None):
    if choice is None or choice == "rho":
        return Rho()
    if choice == "unit":
        return Unit()
    if isinstance(choice, dict) and "custom" in choice:
        raw = choice["custom"]
    elif isinstance(choice, str) and choice.startswith("custom:"):
        fname = Path(choice[len("custom:"):])
        if base is not None and not fname.is_absolute() and not fname.exists():
            fname = base / fname
        raw = _read_json(fname)
    else:
        raise SchemaError("weights", f"unknown weight scheme {choice!r}")
    if not isinstance(raw, dict):
        raise SchemaError("weights", "custom weights must map index to rational")
    return Custom({str(k): parse_rational(v, f"weights.{k}") for k, v in raw.items()})


def _schedule(depth):
    if depth is None:
        return geometric_schedule()
    if not isinstance(depth, int) or isinstance(depth, bool) or depth < 2:
        raise SchemaError("schedule", "depth must be an integer >= 2")
    return geometric_schedule(depth)


def execute(sc: Scenario, q: dict) -> dict:
    """Run one query and return its JSON-ready result."""
    cmd = q["command"]
    dim = sc.dim
    if "point" not in q:
        raise SchemaError("point", "missing field")
    x = parse_point(q["point"], "point", dim)
    eps = parse_rational(q.get("eps", 0 if cmd == "decompose" else 1), "eps")
    if eps < 0 or (eps == 0 and cmd != "decompose"):
        raise SchemaError("eps", "must be positive" if cmd != "decompose" else "must be nonnegative")
    sched = _schedule(q.get("schedule"))
    base = Path(sc.path).parent if sc.path else None
    scheme = _scheme(q.get("weights"), base)
    certify = bool(q.get("certify", False))
    exact = bool(q.get("exact_active", False))
    F = sc.family
    if cmd == "normal-cone":
        if F.improper_set:
            res = normal_cone_dom(F, x, eps, scheme, certify=certify)
        else:
            res = normal_cone_dom_proper(F, x, eps, scheme, certify=certify)
        out = set_result_json(res)
        if F.proper_set and sup_value(F, x) not in (pk.INF, pk.NEG_INF):
            out["active"] = [str(t) for t in active_set(F, x, eps)]
            out["rho"] = {str(t): rational_json(w) for t, w in rho_weights(F, x, eps).items()}
        return out
    if cmd == "normal-cone-limit":
        return set_result_json(normal_cone_dom_mainfc(F, x, sched, scheme, certify=certify))
    if cmd == "normal-cone-split":
        a, b, c, res = normal_cone_split(F, x, eps, scheme, certify=certify)
        out = set_result_json(res)
        out["parts"] = {"A": polyhedron_json(a), "B": polyhedron_json(b), "C": polyhedron_json(c)}
        return out
    if cmd == "subdiff":
        return set_result_json(subdifferential_sup(F, x, sched, scheme, exact_active=exact, certify=certify))
    if cmd == "subdiff-split":
        a, b, c, res = subdifferential_split(F, x, sched, scheme, exact_active=exact, certify=certify)
        out = set_result_json(res)
        out["parts"] = {"A": polyhedron_json(a), "B": polyhedron_json(b), "C": polyhedron_json(c)}
        return out
    if cmd == "brondsted":
        return set_result_json(subdifferential_brondsted(F, x, sched, certify=certify))
    if cmd == "decompose":
        if "g" not in q:
            raise SchemaError("g", "decompose needs a subgradient g")
        g = parse_point(q["g"], "g", dim)
        return decomposition_json(caratheodory_decompose(F, x, eps, g))
    prog = sc.program
    if cmd == "kkt":
        cert = kkt_certify(prog, x, sched)
    else:
        if not isinstance(prog.objective, Affine):
            raise SchemaError("objective", "silp needs an affine objective")
        cert = silp_certify(prog.objective.a, prog.constraints, x, sched)
    out = certificate_json(cert)
    out["verified"] = verify_certificate(prog, x, cert)
    return out


# ---------------------------------------------------------------------------
# expectations


def _compare(expected: dict, result: dict | None, error: Exception | None, dim: int) -> str | None:
    """None when the expectation holds, otherwise a short description."""
    if "error" in expected:
        if isinstance(error, HypothesisError) and error.hypothesis == expected["error"]:
            return None
        got = f"{type(error).__name__}: {error}" if error else "a result"
        return f"expected refusal '{expected['error']}', got {got}"
    if error is not None:
        return f"unexpected error: {error}"
    for key, want in expected.items():
        if key == "set":
            P = parse_polyhedron(want, "expected.set")
            Q = parse_polyhedron(result["set"], "result.set")
            if not pk.set_equal(P, Q):
                return f"set differs: expected {P!r}, got {Q!r}"
        elif key in ("lam", "step"):
            if parse_rational(want, f"expected.{key}") != parse_rational(result.get(key), key):
                return f"{key}: expected {want}, got {result.get(key)}"
        elif key == "rho":
            for t, w in want.items():
                got = result.get("rho", {}).get(t)
                if got is None or parse_rational(w, "rho") != parse_rational(got, "rho"):
                    return f"rho[{t}]: expected {w}, got {got}"
        elif key == "active":
            if sorted(want) != sorted(result.get("active", [])):
                return f"active: expected {want}, got {result.get('active')}"
        elif key == "max_support":
            if len(result.get("support", [])) > want:
                return f"support {result.get('support')} larger than {want}"
        elif key == "direction_sign":
            d = [parse_rational(v, "direction") for v in result.get("direction", [])]
            if [(v > 0) - (v < 0) for v in d] != want:
                return f"direction {d} does not have signs {want}"
        else:
            if result.get(key) != want:
                return f"{key}: expected {want!r}, got {result.get(key)!r}"
    return None


def run_query(sc: Scenario, index: int, q: dict) -> QueryReport:
    start = time.perf_counter()
    result, error = None, None
    try:
        result = execute(sc, q)
    except (HypothesisError, SupremaError, pk.DimensionError) as exc:
        error = exc
    elapsed = time.perf_counter() - start
    expected = q.get("expected")
    if expected is None:
        if error is None:
            status = "ok"
            if result.get("certified") == "mismatch" or result.get("verified") is False:
                status = "fail"
        else:
            status = "refused" if isinstance(error, HypothesisError) else "error"
        return QueryReport(sc.name, index, q["command"], status, result, str(error) if error else None, elapsed)
    problem = _compare(expected, result, error, sc.dim)
    status = "pass" if problem is None else "fail"
    return QueryReport(sc.name, index, q["command"], status, result, problem, elapsed)


def run_suite(directory) -> tuple[int, list[QueryReport]]:
    """Run every scenario in a directory; exit code 0 iff all expectations hold."""
    d = Path(directory)
    if not d.is_dir():
        raise SchemaError(str(directory), "not a directory")
    files = sorted(d.glob("*.json"))
    if not files:
        return EXIT_USAGE, []
    scenarios = [load_scenario(f) for f in files]
    reports = []
    for sc in sorted(scenarios, key=lambda s: s.name):
        for i, q in enumerate(sc.queries):
            reports.append(run_query(sc, i, q))
    failed = [r for r in reports if r.status in ("fail", "error")]
    return (EXIT_MISMATCH if failed else EXIT_OK), reports


# ---------------------------------------------------------------------------
# presentation


def _fmt_rat(v) -> str:
    if isinstance(v, list):
        q = Fraction(v[0], v[1])
        return str(q)
    return str(v)


def _fmt_poly(p: dict) -> str:
    if not p["vertices"]:
        return "empty"
    vs = "; ".join("(" + ", ".join(_fmt_rat(c) for c in v) + ")" for v in p["vertices"])
    rs = "; ".join("(" + ", ".join(_fmt_rat(c) for c in r) + ")" for r in p["rays"])
    return f"vertices [{vs}]" + (f" rays [{rs}]" if rs else "")


def format_text(result: dict) -> str:
    lines = []
    for key, val in result.items():
        if isinstance(val, dict) and "vertices" in val:
            lines.append(f"{key}: {_fmt_poly(val)}")
        elif key == "parts":
            for name, p in val.items():
                lines.append(f"part {name}: {_fmt_poly(p)}")
        elif key == "literal" and val is None:
            continue
        elif isinstance(val, list) and val and isinstance(val[0], list):
            lines.append(f"{key}: " + ", ".join(_fmt_rat(v) for v in val))
        elif isinstance(val, list) and len(val) == 2 and all(isinstance(v, int) for v in val):
            lines.append(f"{key}: {_fmt_rat(val)}")
        elif isinstance(val, dict):
            lines.append(f"{key}: " + ", ".join(f"{k}={_fmt_rat(v)}" for k, v in val.items()))
        else:
            lines.append(f"{key}: {val}")
    return "\n".join(lines)


def _point_arg(text: str) -> list:
    return [part.strip() for part in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="supdiff", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS + ("run-suite",))
    p.add_argument("target", help="scenario/family/program JSON, or a directory for run-suite")
    p.add_argument("--point", help="comma-separated coordinates, e.g. 0 or 1/2,-1")
    p.add_argument("--eps", default=None, help="defaults to 1 (0 for decompose)")
    p.add_argument("--g", help="subgradient for decompose, comma-separated")
    p.add_argument("--schedule", type=int, default=None, metavar="DEPTH")
    p.add_argument("--weights", default="rho", help="rho | unit | custom:<file>")
    p.add_argument("--exact-active", action="store_true")
    p.add_argument("--certify", action="store_true")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    p.set_defaults(fmt="text")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "run-suite":
            code, reports = run_suite(args.target)
            if code == EXIT_USAGE:
                print(f"no scenarios found in {args.target}", file=sys.stderr)
                return code
            if args.fmt == "json":
                print(json.dumps([r.to_json() for r in reports], indent=2))
            else:
                for r in reports:
                    line = f"{r.status.upper():7s} {r.scenario}[{r.index}] {r.command}"
                    if r.detail and r.status in ("fail", "error"):
                        line += f": {r.detail}"
                    print(line)
                npass = sum(r.status in ("pass", "ok", "refused") for r in reports)
                print(f"{npass}/{len(reports)} queries passed")
            return code
        sc = load_scenario(args.target)
        if args.point is None:
            raise SchemaError("--point", "required")
        query = {
            "command": args.command,
            "point": _point_arg(args.point),
            "schedule": args.schedule,
            "weights": args.weights,
            "exact_active": args.exact_active,
            "certify": args.certify,
        }
        if args.eps is not None:
            query["eps"] = args.eps
        if args.g is not None:
            query["g"] = _point_arg(args.g)
        kind_ok = args.command in (FAMILY_COMMANDS if sc.family is not None else PROGRAM_COMMANDS)
        if not kind_ok:
            raise SchemaError(args.command, "command does not apply to this input")
        report = run_query(sc, 0, query)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if report.status == "refused" or report.status == "error":
        print(f"refused: {report.detail}", file=sys.stderr)
        return EXIT_REFUSED
    if args.fmt == "json":
        print(json.dumps(report.result, indent=2))
    else:
        print(format_text(report.result))
    return EXIT_MISMATCH if report.status == "fail" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
