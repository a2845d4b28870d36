"""Acceptance criteria, one test each, timed against their budgets.

Each test prints ``CRITERION <k> PASS|FAIL (<seconds>s) <detail>``.  Run the
file directly for the report alone: ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time

import pytest

from galcoh import catalog
from galcoh.gille import ModFiveSymbol, all_symbols, rost_value
from galcoh.globalcoh import (
    PlaceModel,
    enumerate_classes,
    global_ab_group,
    glue_local_classes,
    index_bounds_global,
    index_exponent,
    localize,
    period2_property,
    period_global,
    period_witness,
    tate_sum,
)
from galcoh.groups import FinGroup
from galcoh.grpmod import (
    GModule,
    coinvariants,
    free_kernel_resolution,
    random_module,
    transfer,
    trivial_module,
    verify_resolution,
)
from galcoh.intlat import FgAbGroup
from galcoh.localcoh import (
    ExtensionModelLocal,
    PlaceSpec,
    capacity,
    extension_models,
    h1_local,
    local_class,
    local_index,
    realizable,
    restrict_local,
    split_degree_local,
)
from galcoh.properties import run_all, small_groups

SEED = 20240601


def _zi():
    G = FinGroup.cyclic(4)
    return G, GModule(G, FgAbGroup(2), {G.generators[0]: [[0, -1], [1, 0]]})


def criterion_1():
    G, M = _zi()
    half = G.subgroup([2])
    full = coinvariants(M).group
    sub = coinvariants(M, half).group
    gen = coinvariants(M).torsion.generators()[0]
    image = transfer(M, half, gen)
    one_plus_i = coinvariants(M, half).torsion_class([1, 1])
    ok = (full.invariants == (2,) and full.free_rank == 0 and sub.invariants == (2, 2)
          and sub.free_rank == 0 and image == one_plus_i and not image.is_zero())
    return ok, f"M_Gamma = {full.describe()}, M_Delta = {sub.describe()}, T[1] = {image.coords}"


def criterion_2():
    e = catalog.build_named("appendix_a_rank6")
    xi = catalog.appendix_a_class(e)
    per = period_global(xi)
    v = e.places.place("v")
    loc = local_class(e.module, v, [1, 1, 1])
    r = local_index(e.module, loc, 16, strict_quadratic=True)
    # every realizable extension model of degree <= 16 that splits the class
    degrees = [ext.degree(v.decomposition) for ext in extension_models(v, 16)
               if realizable(v, ext) and restrict_local(e.module, loc, ext).is_zero()]
    ok = per == 2 and r.lower_bound % 4 == 0 and bool(degrees) and all(d % 4 == 0 for d in degrees)
    return ok, f"per = {per}, strict lower bound = {r.lower_bound}, splitting degrees = {sorted(set(degrees))}"


def criterion_3():
    a = rost_value("rho2", ModFiveSymbol(2, 1, 0))
    b = rost_value("rho2", ModFiveSymbol(4, 2, 0))
    scaling = all(rost_value("rho", s.scale(2)) == 3 * rost_value("rho", s) % 5 for s in all_symbols())
    ok = a == 0 and b == 1 and scaling and len(all_symbols()) == 125
    return ok, f"rho2(2,1,0) = {a}, rho2(4,2,0) = {b}, scaling over 125 symbols: {scaling}"


def criterion_4():
    details, ok = [], True
    for n in (2, 3, 4, 6):
        e = catalog.build_named("pgl", n=n)
        named = list(e.places.named)
        ok &= e.group.order == 1 and len(named) == 3 and e.places.reservoir == 1
        classes = enumerate_classes(e.model())
        for xi in classes:
            b = index_bounds_global(xi, 2 * n)
            ok &= b.period == b.achieved == b.lower
        details.append(f"n={n}: {len(classes)} classes")
    return ok, ", ".join(details)


SUITES_5 = ("snf identities", "transfer section-independence", "transfer multiplication by the index",
            "power composition", "ab-compatibility of powers", "period divides splitting degrees")


def criterion_5():
    results = {r.name: r for r in run_all(SEED)}
    orders = {G.order for G in small_groups()}
    ok = max(orders) <= 8
    parts = []
    for name in SUITES_5:
        r = results[name]
        ok &= r.passed and r.cases >= 1000
        parts.append(f"{name} {r.cases}")
    return ok, "; ".join(parts)


def criterion_6():
    ok, parts = True, []
    for name in catalog.PERIOD2_ENTRIES:
        e = catalog.build_named(name)
        p2 = period2_property(e.module)
        ok &= p2
        parts.append(f"{name}={p2}")
    e = catalog.build_named("pgl", n=3)
    w = period_witness(e.module, e.places)
    ok &= not period2_property(e.module) and w is not None and period_global(w) == 3
    return ok, ", ".join(parts) + f"; pgl(3) period2 = {period2_property(e.module)}, witness period = " + (
        str(period_global(w)) if w is not None else "none")


def criterion_7():
    e = catalog.build_named("pu3_local")
    v = e.places.place("v")
    H = h1_local(e.module, v)
    twice = [2 * x for x in e.module.base.to_ambient(e.module.base.generators()[0])]
    ok = H.order() == 1 and not e.module.base.in_relations(twice)
    return ok, f"H^1 = {H.describe()}, M = {e.module.base.describe()}"


def capacity_oracle(n: int, theta: int) -> int:
    # e | n^l for some l iff e | n^e, since no prime exponent in e exceeds e
    return max(e for e in range(1, theta + 1) if theta % e == 0 and pow(n, e, e) == 0)


def criterion_8():
    mismatches = [(n, t) for n in range(1, 201) for t in range(1, 201) if capacity(n, t) != capacity_oracle(n, t)]
    G, M = _zi()
    b = split_degree_local(M, PlaceSpec.finite("v", G.whole()), 2)
    T = FinGroup.trivial()
    d = index_exponent(trivial_module(T, FgAbGroup(1, [(2,)])))
    ok = not mismatches and b.bound_ab == 8 and d == 2
    return ok, f"capacity mismatches: {len(mismatches)}, bound_ab = {b.bound_ab}, d = {d}"


def criterion_9():
    rng = random.Random(SEED)
    glued = obstructed = 0
    ok = True
    for _ in range(100):
        G = FinGroup.cyclic(rng.choice([1, 2, 3, 4, 5, 6, 8]))
        M = random_module(rng, G)
        cyclic_subs = sorted({G.generated([g]) for g in range(G.order)}, key=sorted)
        named = [PlaceSpec.finite(f"v{i}", G.subgroup(sorted(rng.choice(cyclic_subs)))) for i in range(rng.randint(1, 3))]
        involutions = [g for g in range(G.order) if G.mul(g, g) == 0]
        if rng.random() < 0.5:
            named.append(PlaceSpec.real("inf", G, rng.choice(involutions)))
        pm = PlaceModel(G, tuple(named), 1)
        model = global_ab_group(M, pm)
        pres = {p.name: rng.choice(list(model.local[p.name].group.elements())) for p in named}
        mu = tate_sum(model, pres)
        res = glue_local_classes(M, pm, pres, model=model)
        if res.ok != mu.is_zero():
            ok = False
            continue
        if not res.ok:
            obstructed += 1
            ok &= res.obstruction == mu
            continue
        glued += 1
        m = res.model
        loc = localize(res.cls)
        for p in m.places:
            if p.kind == "real":
                ok &= res.cls.inf[0] == pres[p.name] and loc[p.name] == m.theta(p.name, pres[p.name])
            else:
                ok &= loc[p.name] == pres.get(p.name, m.local[p.name].group.zero())
    ok &= glued > 0 and obstructed > 0
    return ok, f"100 prescriptions: {glued} glued and reproduced, {obstructed} obstructed with mu != 0"


def criterion_10():
    rng = random.Random(SEED)
    groups = small_groups()
    ok, failures = True, 0
    for _ in range(20):
        M = random_module(rng, rng.choice(groups))
        rep = verify_resolution(M, free_kernel_resolution(M))
        if not (rep.kappa_injective and rep.lambda_surjective and rep.exact and rep.torsion_free):
            ok, failures = False, failures + 1
    return ok, f"20 random modules, {failures} failures"


CRITERIA = {
    1: ("Z[i] coinvariants and transfer", criterion_1, 1.0),
    2: ("rank-6 period and index", criterion_2, 10.0),
    3: ("Gille suite", criterion_3, 1.0),
    4: ("PGL_n period = index", criterion_4, 30.0),
    5: ("Property suites", criterion_5, 60.0),
    6: ("Period-2 catalog", criterion_6, 5.0),
    7: ("PU3 local", criterion_7, 1.0),
    8: ("Capacity and bounds", criterion_8, 5.0),
    9: ("Gluing", criterion_9, 5.0),
    10: ("Resolution verifier", criterion_10, 10.0),
}


def evaluate(k: int) -> tuple[bool, str]:
    title, fn, budget = CRITERIA[k]
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    ok = bool(ok) and elapsed < budget
    line = f"CRITERION {k:>2} {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s of {budget:g}s) {title}: {detail}"
    return ok, line


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    ok, line = evaluate(k)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(k) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
