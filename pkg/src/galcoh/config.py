"""JSON model descriptions.

Integers may be written as JSON numbers or as decimal strings; :func:`dump_config`
always writes strings so that large relation entries survive any JSON reader.

Layout::

    {
      "group":   {"order": "4", "table": [[...], ...], "generators": ["1"]}
                 or {"permutations": [["1", "0", "2"], ...]},
      "module":  {"rank": "2", "relations": [["2", "0"], ...],
                  "action": [<matrix for generator 1>, ...]},
      "places":  [{"name": "v", "kind": "finite", "decomposition": ["0", "2"],
                   "residue_size": "5", "quadratic_types": {"eps": ["0", "2"], "pi": null}},
                  {"name": "inf", "kind": "real", "sigma": "0",
                   "fiber": {"labels": ["1", "x"], "neutral": "1", "theta": {"1": ["0"], "x": ["1"]}}}],
      "reservoir": "1"
    }

``decomposition`` and the quadratic-type values list elements whose generated
subgroup is meant; relation columns and action matrices act on the ambient
coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .globalcoh import AbstractFiber, GlobalError, PlaceModel
from .groups import FinGroup, GroupError, Subgroup
from .grpmod import GModule, ModuleError
from .intlat import FgAbGroup
from .localcoh import COMPLEX, FINITE, KINDS, QUADRATIC_TYPES, REAL, LocalError, PlaceSpec


class ConfigError(ValueError):
    """Malformed configuration; the message starts with the offending location."""


@dataclass(frozen=True)
class Model:
    group: FinGroup
    module: GModule
    places: PlaceModel


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise ConfigError(f"{where}: expected an integer (number or decimal string), got {value!r}")


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(f"{where}: expected a list")
    return value


def _obj(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{where}: expected an object")
    return value


def _int_list(value: Any, where: str) -> list[int]:
    return [_int(x, f"{where}[{i}]") for i, x in enumerate(_list(value, where))]


def _matrix(value: Any, where: str) -> list[list[int]]:
    return [_int_list(r, f"{where}[{i}]") for i, r in enumerate(_list(value, where))]


def parse_group(doc: dict, where: str = "group") -> FinGroup:
    doc = _obj(doc, where)
    try:
        if "permutations" in doc:
            perms = _matrix(doc["permutations"], f"{where}.permutations")
            return FinGroup.from_permutations(perms)
        if "table" in doc:
            table = _matrix(doc["table"], f"{where}.table")
            if "order" in doc and _int(doc["order"], f"{where}.order") != len(table):
                raise ConfigError(f"{where}.order: does not match the table size {len(table)}")
            gens = _int_list(doc["generators"], f"{where}.generators") if "generators" in doc else None
            for i, g in enumerate(gens or []):
                if not 0 <= g < len(table):
                    raise ConfigError(f"{where}.generators[{i}]: element {g} out of range")
            return FinGroup(table, gens)
    except GroupError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}: give either 'table' or 'permutations'")


def parse_module(doc: dict, G: FinGroup, where: str = "module") -> GModule:
    doc = _obj(doc, where)
    if "rank" not in doc:
        raise ConfigError(f"{where}.rank: missing")
    n = _int(doc["rank"], f"{where}.rank")
    if n < 0:
        raise ConfigError(f"{where}.rank: must be non-negative")
    rels = _matrix(doc.get("relations", []), f"{where}.relations")
    for i, c in enumerate(rels):
        if len(c) != n:
            raise ConfigError(f"{where}.relations[{i}]: expected {n} entries")
    acts = _list(doc.get("action", []), f"{where}.action")
    if len(acts) != len(G.generators):
        raise ConfigError(f"{where}.action: expected one matrix per group generator ({len(G.generators)})")
    mats = {}
    for k, (g, A) in enumerate(zip(G.generators, acts)):
        mats[g] = _matrix(A, f"{where}.action[{k}]")
    try:
        return GModule(G, FgAbGroup(n, rels), mats)
    except (ModuleError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _subgroup(G: FinGroup, value: Any, where: str) -> Subgroup:
    elems = _int_list(value, where)
    for i, g in enumerate(elems):
        if not 0 <= g < G.order:
            raise ConfigError(f"{where}[{i}]: element {g} out of range")
    return G.subgroup(elems)


def parse_place(doc: dict, G: FinGroup, where: str) -> tuple[PlaceSpec, AbstractFiber | None]:
    doc = _obj(doc, where)
    name = doc.get("name")
    if not isinstance(name, str) or not name or "=" in name:
        raise ConfigError(f"{where}.name: expected a non-empty string without '='")
    kind = doc.get("kind", FINITE)
    if kind not in KINDS:
        raise ConfigError(f"{where}.kind: unknown kind {kind!r}")
    fiber = None
    try:
        if kind == REAL:
            sigma = _int(doc.get("sigma", 0), f"{where}.sigma")
            if not 0 <= sigma < G.order:
                raise ConfigError(f"{where}.sigma: element {sigma} out of range")
            place = PlaceSpec.real(name, G, sigma)
            if "fiber" in doc:
                f = _obj(doc["fiber"], f"{where}.fiber")
                labels = tuple(str(x) for x in _list(f.get("labels"), f"{where}.fiber.labels"))
                theta = {str(k): tuple(_int_list(v, f"{where}.fiber.theta.{k}"))
                         for k, v in _obj(f.get("theta"), f"{where}.fiber.theta").items()}
                fiber = AbstractFiber(labels, str(f.get("neutral")), theta)
        elif kind == COMPLEX:
            place = PlaceSpec.complex(name, G)
        else:
            D = _subgroup(G, doc.get("decomposition", [0]), f"{where}.decomposition")
            q = _int(doc["residue_size"], f"{where}.residue_size") if doc.get("residue_size") is not None else None
            types = None
            if "quadratic_types" in doc:
                raw = _obj(doc["quadratic_types"], f"{where}.quadratic_types")
                types = {}
                for t, v in raw.items():
                    if t not in QUADRATIC_TYPES:
                        raise ConfigError(f"{where}.quadratic_types.{t}: unknown type")
                    types[t] = None if v is None else _subgroup(G, v, f"{where}.quadratic_types.{t}")
            place = PlaceSpec.finite(name, D, q, types)
    except LocalError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    return place, fiber


def parse_config(doc: Any, reservoir: int | None = None) -> Model:
    doc = _obj(doc, "config")
    if "group" not in doc:
        raise ConfigError("group: missing")
    G = parse_group(doc["group"])
    if "module" not in doc:
        raise ConfigError("module: missing")
    M = parse_module(doc["module"], G)
    places, fibers = [], {}
    for i, p in enumerate(_list(doc.get("places", []), "places")):
        place, fib = parse_place(p, G, f"places[{i}]")
        places.append(place)
        if fib is not None:
            fibers[place.name] = fib
    r = reservoir if reservoir is not None else _int(doc.get("reservoir", 0), "reservoir")
    try:
        pm = PlaceModel(G, tuple(places), r, fibers)
    except GlobalError as exc:
        raise ConfigError(f"places: {exc}") from None
    return Model(G, M, pm)


def load_config(path: str, reservoir: int | None = None) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_config(doc, reservoir)


def _s(x: int) -> str:
    return str(int(x))


def dump_config(G: FinGroup, M: GModule, pm: PlaceModel) -> dict:
    places = []
    for p in pm.named:
        d: dict[str, Any] = {"name": p.name, "kind": p.kind}
        if p.kind == REAL:
            d["sigma"] = _s(p.sigma)
            fib = pm.fibers.get(p.name)
            if fib is not None:
                d["fiber"] = {"labels": list(fib.labels), "neutral": fib.neutral,
                              "theta": {k: [_s(x) for x in v] for k, v in fib.theta.items()}}
        elif p.kind == FINITE:
            d["decomposition"] = [_s(g) for g in p.decomposition.elements]
            if p.residue_size is not None:
                d["residue_size"] = _s(p.residue_size)
            if p.quadratic_types is not None:
                d["quadratic_types"] = {t: (None if H is None else [_s(g) for g in H.elements])
                                        for t, H in sorted(p.quadratic_types.items())}
        places.append(d)
    return {
        "group": {"order": _s(G.order), "table": [[_s(x) for x in row] for row in G.table],
                  "generators": [_s(g) for g in G.generators]},
        "module": {"rank": _s(M.rank), "relations": [[_s(x) for x in c] for c in M.base.relations],
                   "action": [[[_s(x) for x in row] for row in M.generator_action[g]] for g in G.generators]},
        "places": places,
        "reservoir": _s(pm.reservoir),
    }
