"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any, Sequence

from . import catalog, gille
from .config import ConfigError, Model, dump_config, load_config
from .globalcoh import (
    GlobalError,
    GlobalModel,
    enumerate_classes,
    glue_local_classes,
    global_ab_group,
    index_bounds_global,
    make_global_class,
    per_equals_ind_guarantee,
    period2_property,
    period_global,
    power_global,
    sha_kernel,
    split_degree_global,
)
from .groups import GroupError, is_sylow_cyclic
from .grpmod import ModuleError
from .localcoh import (
    REAL,
    LocalClass,
    LocalError,
    local_group,
    local_index,
    period_local,
    power_local,
    split_degree_local,
)


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# output


class Output:
    """Collects ``(key, value)`` rows; prints an aligned table or one JSON object."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.rows: list[tuple[str, Any]] = []

    def add(self, key: str, value: Any) -> None:
        self.rows.append((key, value))

    def emit(self) -> None:
        if self.fmt == "json":
            print(json.dumps(dict(self.rows), sort_keys=True, separators=(",", ":")))
            return
        width = max((len(k) for k, _ in self.rows), default=0)
        for k, v in self.rows:
            if isinstance(v, list):
                print(f"{k:<{width}}  {len(v)} entries")
                for item in v:
                    print(f"{'':<{width}}  {_human(item)}")
            else:
                print(f"{k:<{width}}  {_human(v)}")


def _human(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, dict):
        return "  ".join(f"{k}={_human(x)}" for k, x in v.items())
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_human(x) for x in v) + ")"
    return str(v)


def _invariants(G) -> list[int]:
    return list(G.invariants) + [0] * G.free_rank


# ---------------------------------------------------------------------------
# class literals


_VECTOR = re.compile(r"^\(?\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\)?$")
_PART = re.compile(r"\(([^()]*)\)|([A-Za-z_][\w.]*)|(-?\d+)")


def parse_vector(text: str, length: int, what: str) -> list[int]:
    text = text.strip()
    m = _VECTOR.match(text)
    if not m:
        raise InputError(f"{what}: cannot parse {text!r} as an integer vector")
    body = m.group(1)
    vec = [int(x) for x in body.split(",")] if body else []
    if len(vec) != length:
        raise InputError(f"{what}: expected {length} coordinates, got {len(vec)}")
    return vec


def parse_global_class(model: GlobalModel, text: str):
    """``AB[;INF]``: canonical coordinates of the abelianized part, then one entry per real place."""
    ab_text, _, rest = text.partition(";")
    ab = model.group.element(parse_vector(ab_text, model.group.ngens, "class"))
    reals = model.pm.real_places()
    if not rest.strip():
        return make_global_class(model, ab)
    tokens = [m for m in _PART.finditer(rest.replace(";", ","))]
    if len(tokens) != len(reals):
        raise InputError(f"class: expected {len(reals)} archimedean components, got {len(tokens)}")
    inf = []
    for p, tok in zip(reals, tokens):
        fib = model.fiber(p.name)
        if fib is not None:
            label = tok.group(2) or tok.group(3) or tok.group(1)
            if label not in fib.labels:
                raise InputError(f"class: {label!r} is not in the fibre at {p.name}")
            inf.append(label)
        else:
            body = tok.group(1) if tok.group(1) is not None else (tok.group(3) or "")
            H = model.local[p.name].group
            inf.append(H.element(parse_vector(body, H.ngens, f"class at {p.name}")))
    return make_global_class(model, ab, inf)


def _describe_inf(model: GlobalModel, values) -> list:
    out = []
    for p, v in zip(model.pm.real_places(), values):
        out.append(v if isinstance(v, str) else list(v.coords))
    return out


# ---------------------------------------------------------------------------
# commands


def _model(args) -> Model:
    if not args.config:
        raise InputError("this command needs --config")
    return load_config(args.config, args.reservoir)


def _global(model: Model) -> GlobalModel:
    return global_ab_group(model.module, model.places)


def _local_place(model: Model, name: str):
    p = model.places.place(name)
    if p not in model.places.named:
        raise InputError(f"--local: {name!r} is not a named place")
    return p


def cmd_h1(args, out: Output) -> int:
    model = _model(args)
    if args.local:
        p = _local_place(model, args.local)
        H = local_group(model.module, p).group
        out.add("place", p.name)
        out.add("kind", p.kind)
        out.add("invariants", _invariants(H))
        out.add("order", H.order())
        return 0
    gm = _global(model)
    out.add("invariants", _invariants(gm.group))
    out.add("order", gm.group.order())
    out.add("places", [p.name for p in gm.places])
    if args.enumerate:
        rows = []
        for c in enumerate_classes(gm):
            rows.append({"ab": list(c.ab.coords), "inf": _describe_inf(gm, c.inf), "period": period_global(c)})
        out.add("classes", rows)
    return 0


def _local_class(model: Model, place_name: str, text: str) -> LocalClass:
    p = _local_place(model, place_name)
    lg = local_group(model.module, p)
    return LocalClass(lg, lg.group.element(parse_vector(text, lg.group.ngens, "class")))


def cmd_power(args, out: Output) -> int:
    model = _model(args)
    if args.local:
        xi = _local_class(model, args.local, args.cls)
        r = power_local(xi, args.d)
        out.add("place", args.local)
        out.add("class", list(r.value.coords))
        return 0
    gm = _global(model)
    r = power_global(parse_global_class(gm, args.cls), args.d)
    out.add("ab", list(r.ab.coords))
    out.add("inf", _describe_inf(gm, r.inf))
    return 0


def cmd_period(args, out: Output) -> int:
    model = _model(args)
    if args.local:
        out.add("period", period_local(_local_class(model, args.local, args.cls)))
        return 0
    gm = _global(model)
    out.add("period", period_global(parse_global_class(gm, args.cls)))
    return 0


def cmd_index(args, out: Output) -> int:
    model = _model(args)
    if args.local:
        xi = _local_class(model, args.local, args.cls)
        r = local_index(model.module, xi, args.max_degree, args.strict_quadratic)
        out.add("period", period_local(xi))
        out.add("lower_bound", r.lower_bound)
        out.add("search_gcd", r.search_gcd)
        out.add("splitting_degrees", list(r.splitting_degrees))
        return 0
    gm = _global(model)
    b = index_bounds_global(parse_global_class(gm, args.cls), args.max_degree, args.strict_quadratic)
    out.add("period", b.period)
    out.add("lower", b.lower)
    out.add("upper", b.upper)
    out.add("exponent_d", b.exponent)
    out.add("achieved", b.achieved)
    return 0


def cmd_split_bound(args, out: Output) -> int:
    model = _model(args)
    if args.local:
        b = split_degree_local(model.module, _local_place(model, args.local), args.n)
        out.add("theta", b.theta)
        out.add("theta_ab", b.theta_ab)
        out.add("bound_ab", b.bound_ab)
        out.add("bound_pow", b.bound_pow)
        return 0
    b = split_degree_global(model.module, args.n)
    out.add("theta", b.theta)
    out.add("guarantee_degree", b.guarantee_degree)
    out.add("sylow_cyclic", b.sylow_cyclic)
    return 0


def cmd_check(args, out: Output) -> int:
    model = _model(args)
    M = model.module
    if args.what == "period2":
        out.add("period2", period2_property(M))
    elif args.what == "per-eq-ind":
        out.add("per_eq_ind", per_equals_ind_guarantee(M))
    elif args.what == "sylow-cyclic":
        out.add("sylow_cyclic", is_sylow_cyclic(M.image_group()))
    else:
        s = sha_kernel(M, model.places)
        out.add("sha_invariants", _invariants(s.group))
        out.add("sha_order", s.group.order())
        out.add("stable", s.stable)
    return 0


def cmd_glue(args, out: Output) -> int:
    model = _model(args)
    gm = _global(model)
    prescribed: dict[str, Any] = {}
    for item in args.at:
        name, sep, text = item.partition("=")
        if not sep:
            raise InputError(f"--at: expected <place>=<class>, got {item!r}")
        p = _local_place(model, name)
        if p.kind == REAL and gm.fiber(name) is not None:
            prescribed[name] = text.strip()
            if prescribed[name] not in gm.fiber(name).labels:
                raise InputError(f"--at {name}: {text!r} is not in the fibre")
            continue
        H = gm.local[name].group
        prescribed[name] = H.element(parse_vector(text, H.ngens, f"--at {name}"))
    res = glue_local_classes(model.module, model.places, prescribed, model=gm)
    if not res.ok:
        out.add("status", "obstruction")
        out.add("obstruction", list(res.obstruction.coords))
        return 0
    out.add("status", "glued")
    out.add("reservoir", res.model.pm.reservoir)
    out.add("ab", list(res.cls.ab.coords))
    out.add("inf", _describe_inf(res.model, res.cls.inf))
    out.add("period", period_global(res.cls))
    return 0


def _report(out: Output, name: str, lines: list[tuple[str, bool, str]]) -> int:
    out.add("report", name)
    rows = []
    for desc, ok, detail in lines:
        rows.append({"status": "PASS" if ok else "FAIL", "fact": desc, "detail": detail})
    out.add("facts", rows)
    ok = all(x[1] for x in lines)
    out.add("result", "pass" if ok else "fail")
    return 0 if ok else 1


def cmd_verify(args, out: Output) -> int:
    if args.what == "gille":
        rep = gille.verify_witness()
        lines = [(c.description, c.passed, c.detail) for c in rep.checks]
        lines.append(("no functorial power operation over this field", rep.no_functorial_power,
                      f"|H^1(K', E8)| = {rep.h1_order}"))
        return _report(out, "gille", lines)
    if args.what == "appendix-a":
        reps = [catalog.verify_named("zi_torus", j=j) for j in (1, 2, 3)] + [catalog.verify_named("appendix_a_rank6")]
    elif args.what == "pgl":
        if args.n is None:
            raise InputError("verify pgl needs --n")
        reps = [catalog.verify_named("pgl", n=args.n)]
    elif args.what == "pu3":
        reps = [catalog.verify_named("pu3_local")]
    else:
        reps = [catalog.verify_period2_list()]
    lines = [(f"{rep.name}: {r.description}", r.passed, r.detail) for rep in reps for r in rep.results]
    return _report(out, args.what, lines)


def _parse_params(items: Sequence[str]) -> dict[str, str]:
    out = {}
    for item in items or ():
        k, sep, v = item.partition("=")
        if not sep:
            raise InputError(f"--param: expected key=value, got {item!r}")
        out[k] = v
    return out


def cmd_catalog(args, out: Output) -> int:
    if args.action == "list":
        out.add("entries", catalog.catalog_names())
        return 0
    if not args.name:
        raise InputError("catalog build needs an entry name")
    try:
        entry = catalog.build_named(args.name, **_parse_params(args.param))
    except (catalog.CatalogError, ValueError) as exc:
        raise InputError(str(exc).strip("'\"")) from None
    if args.format == "json":
        print(json.dumps(dump_config(entry.group, entry.module, entry.places), sort_keys=True))
        return 0
    out.add("name", entry.name)
    out.add("group_order", entry.group.order)
    out.add("module", entry.module.base.describe())
    out.add("places", [p.name for p in entry.places.named])
    out.add("reservoir", entry.places.reservoir)
    out.add("facts", [f.description for f in entry.facts])
    return 0


def cmd_dump(args, out: Output) -> int:
    model = _model(args)
    print(json.dumps(dump_config(model.group, model.module, model.places), sort_keys=True,
                     indent=None if args.format == "json" else 2))
    return 0


def cmd_props(args, out: Output) -> int:
    from .properties import run_all

    results = run_all(args.seed)
    rows = [{"status": "PASS" if r.passed else "FAIL", "property": r.name, "cases": r.cases,
             "failures": "; ".join(r.failures)} for r in results]
    out.add("seed", args.seed)
    out.add("properties", rows)
    ok = all(r.passed for r in results)
    out.add("result", "pass" if ok else "fail")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit code 2 with usage, as for any input error
        self.print_usage(sys.stderr)
        raise SystemExit(f"{self.prog}: error: {message}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="model description (JSON)")
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--reservoir", type=_nonneg, help="override the reservoir depth")

    p = _Parser(prog="galcoh", description="Galois cohomology of reductive groups over finite models.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    h1 = sub.add_parser("h1", parents=[common], help="local or global H^1")
    g = h1.add_mutually_exclusive_group(required=True)
    g.add_argument("--local", metavar="PLACE")
    g.add_argument("--global", dest="glob", action="store_true")
    h1.add_argument("--enumerate", action="store_true")
    h1.set_defaults(func=cmd_h1)

    pw = sub.add_parser("power", parents=[common], help="the power operation on a class")
    pw.add_argument("--d", type=int, required=True)
    pw.add_argument("--class", dest="cls", required=True)
    pw.add_argument("--local", metavar="PLACE")
    pw.set_defaults(func=cmd_power)

    pe = sub.add_parser("period", parents=[common], help="period of a class")
    pe.add_argument("--class", dest="cls", required=True)
    pe.add_argument("--local", metavar="PLACE")
    pe.set_defaults(func=cmd_period)

    ix = sub.add_parser("index", parents=[common], help="index bounds of a class")
    ix.add_argument("--class", dest="cls", required=True)
    ix.add_argument("--max-degree", type=_positive, required=True)
    ix.add_argument("--strict-quadratic", action="store_true")
    ix.add_argument("--local", metavar="PLACE")
    ix.set_defaults(func=cmd_index)

    sb = sub.add_parser("split-bound", parents=[common], help="splitting-degree guarantees")
    sb.add_argument("--n", type=_positive, required=True)
    g = sb.add_mutually_exclusive_group(required=True)
    g.add_argument("--local", metavar="PLACE")
    g.add_argument("--global", dest="glob", action="store_true")
    sb.set_defaults(func=cmd_split_bound)

    ck = sub.add_parser("check", parents=[common], help="structural criteria")
    ck.add_argument("what", choices=("period2", "per-eq-ind", "sylow-cyclic", "sha"))
    ck.set_defaults(func=cmd_check)

    gl = sub.add_parser("glue", parents=[common], help="glue local classes into a global one")
    gl.add_argument("--at", action="append", default=[], metavar="PLACE=CLASS")
    gl.set_defaults(func=cmd_glue)

    vf = sub.add_parser("verify", parents=[common], help="scripted verification reports")
    vf.add_argument("what", choices=("appendix-a", "gille", "pgl", "pu3", "period2-list"))
    vf.add_argument("--n", type=_positive)
    vf.set_defaults(func=cmd_verify)

    ct = sub.add_parser("catalog", parents=[common], help="named example models")
    ct.add_argument("action", choices=("list", "build"))
    ct.add_argument("name", nargs="?")
    ct.add_argument("--param", action="append", metavar="KEY=VALUE")
    ct.set_defaults(func=cmd_catalog)

    dp = sub.add_parser("dump", parents=[common], help="print the loaded model as JSON")
    dp.set_defaults(func=cmd_dump)

    pr = sub.add_parser("props", parents=[common], help="seeded property checks")
    pr.add_argument("--seed", type=_u64, default=0)
    pr.set_defaults(func=cmd_props)
    return p


INPUT_ERRORS = (InputError, ConfigError, GlobalError, LocalError, ModuleError, GroupError,
                catalog.CatalogError, ValueError)


def execute(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
        return 2
    out = Output(args.format)
    try:
        code = args.func(args, out)
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"galcoh: error: {msg}", file=sys.stderr)
        return 2
    if out.rows:
        out.emit()
    return code


def main() -> None:
    sys.exit(execute())

