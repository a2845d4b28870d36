"""Named example models and the drivers that check their stated properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .groups import FinGroup, Subgroup, is_sylow_cyclic
from .grpmod import (
    GModule,
    augmentation_ideal,
    coinvariants,
    direct_sum_modules,
    tate_h_minus1,
    transfer,
    trivial_module,
)
from .globalcoh import (
    GlobalModel,
    PlaceModel,
    enumerate_classes,
    glue_local_classes,
    global_ab_group,
    index_bounds_global,
    per_equals_ind_guarantee,
    period2_property,
    period_global,
    period_witness,
    restrict_global,
    sha_kernel,
)
from .intlat import FgAbGroup
from .localcoh import (
    ExtensionModelLocal,
    LocalClass,
    PlaceSpec,
    h1_local,
    local_group,
    local_index,
    restrict_local,
    split_degree_local,
)


class CatalogError(KeyError):
    pass


@dataclass
class Fact:
    description: str
    operation: str
    check: Callable[[], tuple[bool, str]]


@dataclass
class CatalogEntry:
    name: str
    params: dict
    group: FinGroup
    module: GModule
    places: PlaceModel
    facts: list[Fact] = field(default_factory=list)

    def model(self) -> GlobalModel:
        return global_ab_group(self.module, self.places)


@dataclass(frozen=True)
class FactResult:
    description: str
    operation: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class Report:
    name: str
    results: tuple[FactResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        return [f"{'PASS' if r.passed else 'FAIL'}  {r.description}  [{r.operation}]  {r.detail}"
                for r in self.results]


ZI_ROTATION = [[0, -1], [1, 0]]  # multiplication by i on Z[i] in the basis 1, i
QUADRATIC_TYPE_OF = {1: "eps", 2: "pi", 3: "eps_pi"}
PERIOD2_ENTRIES = ("simply_connected", "sl1a_mu2", "so_q", "sp_adjoint", "e7_adjoint", "d2m_adjoint", "hspin")


def _zi_power(k: int) -> list[list[int]]:
    A = [[1, 0], [0, 1]]
    for _ in range(k % 4):
        A = [[sum(A[i][t] * ZI_ROTATION[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
    return A


def _trivial_group_model(n: int, reservoir: int = 1) -> tuple[FinGroup, GModule, PlaceModel]:
    G = FinGroup.trivial()
    base = FgAbGroup(1, [(n,)]) if n > 1 else FgAbGroup(0)
    M = trivial_module(G, base)
    pm = PlaceModel(G, (PlaceSpec.real("inf", G), PlaceSpec.finite("p", G.whole()),
                        PlaceSpec.finite("q", G.whole())), reservoir)
    return G, M, pm


def _exponent_two(name: str, invariants: tuple[int, ...]) -> CatalogEntry:
    G = FinGroup.trivial()
    k = len(invariants)
    base = FgAbGroup(k, [[d if i == j else 0 for i in range(k)] for j, d in enumerate(invariants)])
    M = trivial_module(G, base)
    pm = PlaceModel(G, (PlaceSpec.real("inf", G), PlaceSpec.finite("p", G.whole())), 1)
    e = CatalogEntry(name, {}, G, M, pm)
    e.facts.append(Fact("2 M = 0 (period-two property)", "period2_property",
                        lambda: (period2_property(M), f"M = {M.base.describe()}")))
    return e


def build_pgl(n: int) -> CatalogEntry:
    if n < 1:
        raise CatalogError("pgl needs n >= 1")
    G, M, pm = _trivial_group_model(n)
    e = CatalogEntry(f"pgl({n})", {"n": n}, G, M, pm)

    def per_ind():
        model = global_ab_group(M, pm)
        bad = []
        classes = enumerate_classes(model)
        for c in classes:
            b = index_bounds_global(c, search_bound=max(16, n))
            if not (b.period == b.achieved == b.lower):
                bad.append((c.ab.coords, b))
        return not bad, f"{len(classes)} classes, {len(bad)} mismatches"

    e.facts.append(Fact(f"M = Z/{n} with trivial action", "group_from_presentation",
                        lambda: (M.base.invariants == ((n,) if n > 1 else ()), M.base.describe())))
    e.facts.append(Fact("Theta trivial, so per = ind is guaranteed", "per_equals_ind_guarantee",
                        lambda: (per_equals_ind_guarantee(M), "")))
    e.facts.append(Fact("per = achieved index = lower bound for every class", "index_bounds_global", per_ind))
    e.facts.append(Fact(f"period-two property is {n <= 2}", "period2_property",
                        lambda: (period2_property(M) == (n <= 2), "")))
    if n > 2:
        def witness():
            c = period_witness(M, pm)
            per = period_global(c) if c is not None else None
            return per == n, f"witness period {per}"
        e.facts.append(Fact(f"a class of period {n} glued at trivial-decomposition places", "glue_local_classes",
                            witness))
    return e


def build_pu3_local() -> CatalogEntry:
    G = FinGroup.cyclic(2)
    M = GModule(G, FgAbGroup(1, [(3,)]), {1: [[-1]]})
    pm = PlaceModel(G, (PlaceSpec.finite("v", G.whole()),), 0)
    e = CatalogEntry("pu3_local", {}, G, M, pm)
    e.facts.append(Fact("H^1 at a place with full decomposition is trivial", "h1_local",
                        lambda: (h1_local(M, pm.named[0]).is_trivial(), h1_local(M, pm.named[0]).describe())))
    e.facts.append(Fact("2 M != 0", "period2_property", lambda: (not period2_property(M), M.base.describe())))
    return e


def _zi_module(G: FinGroup, exponent_of: Callable[[int], int]) -> GModule:
    return GModule(G, FgAbGroup(2), {g: _zi_power(exponent_of(g)) for g in G.generators})


def build_zi_torus(j: int = 1) -> CatalogEntry:
    if j not in QUADRATIC_TYPE_OF:
        raise CatalogError("zi_torus takes j in {1, 2, 3}")
    G = FinGroup.cyclic(4)
    M = _zi_module(G, lambda g: g)
    half = G.subgroup([2])
    types = {t: None for t in QUADRATIC_TYPE_OF.values()}
    types[QUADRATIC_TYPE_OF[j]] = half
    v = PlaceSpec.finite("v", G.whole(), 5, types)
    u = PlaceSpec.finite("u", G.whole())
    pm = PlaceModel(G, (v, u), 1)
    e = CatalogEntry(f"zi_torus({j})", {"j": j}, G, M, pm)
    e.facts += _zi_facts(M, half, v)
    return e


def _zi_facts(M: GModule, half: Subgroup, v: PlaceSpec) -> list[Fact]:
    def full():
        co = coinvariants(M)
        return co.group.invariants == (2,) and co.group.free_rank == 0, co.group.describe()

    def over_half():
        co = coinvariants(M, half)
        return co.group.invariants == (2, 2), co.group.describe()

    def tr():
        co, coH = coinvariants(M), coinvariants(M, half)
        x = co.torsion.generators()[0]
        y = transfer(M, half, x)
        expected = coH.torsion_class([1, 1])
        return y == expected and not y.is_zero(), f"T[1] = {y.coords}, [1+i] = {expected.coords}"

    def tate():
        t = tate_h_minus1(M)
        return t.group.isomorphic(coinvariants(M).torsion) and t.group.order() == 2, t.group.describe()

    def bound():
        b = split_degree_local(M, v, 2)
        return b.bound_ab == 8, f"bound_ab = {b.bound_ab}, bound_pow = {b.bound_pow}"

    return [
        Fact("M_Gamma = Z/2", "coinvariants", full),
        Fact("M_Delta = (Z/2)^2 for the index-2 subgroup", "coinvariants", over_half),
        Fact("transfer of [1] is [1+i], nonzero", "transfer", tr),
        Fact("H^-1 = ker N = M_Gamma", "tate_h_minus1", tate),
        Fact("local H^1 = Z/2", "h1_local", lambda: (h1_local(M, v).invariants == (2,), h1_local(M, v).describe())),
        Fact("split_degree_local(n=2) has bound_ab = 8", "split_degree_local", bound),
    ]


def appendix_a_parts() -> tuple[FinGroup, GModule, list[GModule], PlaceSpec, PlaceSpec]:
    """``Gamma = (Z/4)^2`` acting on three copies of ``Z[i]`` by ``i^x``, ``i^y``, ``i^(x+y)``."""
    G = FinGroup.abelian([4, 4])
    coords = lambda g: G.abelian_coords([4, 4], g)  # noqa: E731
    comps = [
        _zi_module(G, lambda g: coords(g)[0]),
        _zi_module(G, lambda g: coords(g)[1]),
        _zi_module(G, lambda g: coords(g)[0] + coords(g)[1]),
    ]
    M = direct_sum_modules(comps)
    members = lambda pred: [g for g in range(G.order) if pred(*coords(g))]  # noqa: E731
    types = {
        "eps": Subgroup(G, members(lambda x, y: x % 2 == 0)),
        "pi": Subgroup(G, members(lambda x, y: y % 2 == 0)),
        "eps_pi": Subgroup(G, members(lambda x, y: (x + y) % 2 == 0)),
    }
    v = PlaceSpec.finite("v", G.whole(), 5, types)
    u = PlaceSpec.finite("u", G.whole())
    return G, M, comps, v, u


def appendix_a_class(entry: CatalogEntry):
    """The global class with local components ``(1, 1, 1)`` at both ``v`` and ``u``."""
    model = entry.model()
    x = model.local["v"].group.element((1, 1, 1))
    y = model.local["u"].group.element((1, 1, 1))
    res = glue_local_classes(entry.module, entry.places, {"v": x, "u": y}, model=model)
    return res.cls


def build_appendix_a_rank6() -> CatalogEntry:
    G, M, comps, v, u = appendix_a_parts()
    pm = PlaceModel(G, (v, u), 0)
    e = CatalogEntry("appendix_a_rank6", {}, G, M, pm)

    def local_h1():
        H = h1_local(M, v)
        parts = [h1_local(C, PlaceSpec.finite("v", G.whole())).order() for C in comps]
        return H.invariants == (2, 2, 2) and H.order() == parts[0] * parts[1] * parts[2], H.describe()

    def residues():
        lg = local_group(M, v)
        xi = LocalClass(lg, lg.group.element((1, 1, 1)))
        orders = [restrict_local(M, xi, ExtensionModelLocal(H, 1)).order() for H in v.quadratic_types.values()]
        return orders == [2, 2, 2], f"orders of the three quadratic restrictions: {orders}"

    def period():
        c = appendix_a_class(e)
        return c is not None and period_global(c) == 2, f"per = {period_global(c) if c else None}"

    def local_idx():
        lg = local_group(M, v)
        xi = LocalClass(lg, lg.group.element((1, 1, 1)))
        r = local_index(M, xi, 16, strict_quadratic=True)
        ok = r.lower_bound % 4 == 0 and all(d % 4 == 0 for d in r.splitting_degrees)
        return ok, f"lower bound {r.lower_bound}, splitting degrees {list(r.splitting_degrees)}"

    def global_idx():
        c = appendix_a_class(e)
        b = index_bounds_global(c, 16)
        return b.period == 2 and b.lower % 4 == 0, f"per {b.period}, lower {b.lower}, achieved {b.achieved}"

    def restriction():
        c = appendix_a_class(e)
        H = v.quadratic_types["eps"]
        r = restrict_global(c, H, 1)
        return not r.ab.is_zero(), "restriction to an index-2 subgroup is nonzero"

    e.facts += [
        Fact("local H^1 = (Z/2)^3, the product of the three factors", "h1_local", local_h1),
        Fact("restriction to each quadratic subextension has order 2", "restrict_local", residues),
        Fact("glued global class has period 2", "period_global", period),
        Fact("strict local index bound divisible by 4, all splitting degrees = 0 mod 4", "local_index", local_idx),
        Fact("global index lower bound divisible by 4", "index_bounds_global", global_idx),
        Fact("restriction to an index-2 subgroup is nonzero", "restrict_global", restriction),
    ]
    return e


NORM_ONE_GROUPS = {
    "c2": lambda: FinGroup.cyclic(2),
    "c3": lambda: FinGroup.cyclic(3),
    "c4": lambda: FinGroup.cyclic(4),
    "v4": FinGroup.klein_four,
    "s3": lambda: FinGroup.symmetric(3),
}


def build_norm_one(group: str = "v4") -> CatalogEntry:
    if group not in NORM_ONE_GROUPS:
        raise CatalogError(f"norm_one takes group in {sorted(NORM_ONE_GROUPS)}")
    G = NORM_ONE_GROUPS[group]()
    M = augmentation_ideal(G)
    pm = PlaceModel(G, (), 1)
    e = CatalogEntry(f"norm_one({group})", {"group": group}, G, M, pm)

    def sha():
        s = sha_kernel(M, pm)
        expect_trivial = is_sylow_cyclic(G)
        ok = s.stable and (s.group.is_trivial() == expect_trivial or not expect_trivial)
        return ok, f"Sha = {s.group.describe()}, stable = {s.stable}"

    e.facts.append(Fact("Sha trivial when Gamma is Sylow-cyclic; stable under deeper reservoirs", "sha_kernel", sha))
    return e


def build_simply_connected() -> CatalogEntry:
    G = FinGroup.trivial()
    M = trivial_module(G, FgAbGroup(0))
    pm = PlaceModel(G, (PlaceSpec.real("inf", G), PlaceSpec.finite("p", G.whole())), 1)
    e = CatalogEntry("simply_connected", {}, G, M, pm)
    e.facts.append(Fact("M = 0, so 2 M = 0", "period2_property", lambda: (period2_property(M), "M = 0")))
    return e


BUILDERS: dict[str, Callable[..., CatalogEntry]] = {
    "pgl": build_pgl,
    "simply_connected": build_simply_connected,
    "sl1a_mu2": lambda: _exponent_two("sl1a_mu2", (2,)),
    "so_q": lambda: _exponent_two("so_q", (2,)),
    "sp_adjoint": lambda: _exponent_two("sp_adjoint", (2,)),
    "e7_adjoint": lambda: _exponent_two("e7_adjoint", (2,)),
    "d2m_adjoint": lambda: _exponent_two("d2m_adjoint", (2, 2)),
    "hspin": lambda: _exponent_two("hspin", (2,)),
    "pu3_local": build_pu3_local,
    "zi_torus": build_zi_torus,
    "appendix_a_rank6": build_appendix_a_rank6,
    "norm_one": build_norm_one,
}

PARAMS = {"pgl": {"n": int}, "zi_torus": {"j": int}, "norm_one": {"group": str}}


def catalog_names() -> list[str]:
    return sorted(BUILDERS)


def build_named(name: str, **params) -> CatalogEntry:
    if name not in BUILDERS:
        raise CatalogError(f"unknown catalog entry {name!r}")
    if name == "pgl" and "n" not in params:
        raise CatalogError("pgl needs the parameter n")
    allowed = PARAMS.get(name, {})
    extra = set(params) - set(allowed)
    if extra:
        raise CatalogError(f"{name} does not take {sorted(extra)}")
    return BUILDERS[name](**{k: allowed[k](v) for k, v in params.items()})


def verify_entry(entry: CatalogEntry) -> Report:
    out = []
    for f in entry.facts:
        try:
            ok, detail = f.check()
        except Exception as exc:  # a crashing check is a failed fact, reported as such
            ok, detail = False, f"error: {exc}"
        out.append(FactResult(f.description, f.operation, bool(ok), detail))
    return Report(entry.name, tuple(out))


def verify_named(name: str, **params) -> Report:
    return verify_entry(build_named(name, **params))


def verify_period2_list() -> Report:
    """Every exponent-two entry has the period-two property; ``pgl(3)`` does not and has a period-3 class."""
    results = []
    for name in PERIOD2_ENTRIES:
        rep = verify_named(name)
        results += [FactResult(f"{name}: {r.description}", r.operation, r.passed, r.detail) for r in rep.results]
    rep = verify_named("pgl", n=3)
    for r in rep.results:
        if r.operation in ("period2_property", "glue_local_classes"):
            results.append(FactResult(f"pgl(3): {r.description}", r.operation, r.passed, r.detail))
    return Report("period2-list", tuple(results))
