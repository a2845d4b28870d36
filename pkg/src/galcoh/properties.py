"""Seeded randomized checks of the algebraic identities the engine relies on.

Each check returns a :class:`PropertyResult` with the number of cases run and
the first few failures.  Groups have order at most 8, modules rank at most 4
and invariant factors at most 12.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .groups import FinGroup, Subgroup, all_subgroups
from .grpmod import (
    GModule,
    coinvariants,
    free_kernel_resolution,
    random_module,
    transfer,
    verify_resolution,
)
from .globalcoh import (
    GlobalClass,
    IncompatiblePair,
    PlaceModel,
    determine_inf,
    global_ab_group,
    period_global,
    power_global,
    splitting_models,
)
from .intlat import det, identity, matmul, smith
from .localcoh import PlaceSpec

MAX_FAILURES = 5


@dataclass
class PropertyResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def fail(self, msg: str) -> None:
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(msg)


def small_groups() -> list[FinGroup]:
    q8 = FinGroup.from_permutations([(1, 2, 3, 0, 5, 6, 7, 4), (4, 7, 6, 5, 2, 1, 0, 3)], name="Q8")
    return [FinGroup.trivial(), FinGroup.cyclic(2), FinGroup.cyclic(3), FinGroup.cyclic(4), FinGroup.cyclic(5),
            FinGroup.cyclic(6), FinGroup.cyclic(8), FinGroup.klein_four(), FinGroup.symmetric(3),
            FinGroup.dihedral(4), q8, FinGroup.abelian([2, 4]), FinGroup.abelian([2, 2, 2])]


def check_snf(rng: random.Random, cases: int = 1000) -> PropertyResult:
    res = PropertyResult("snf identities")
    for _ in range(cases):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        S = smith(A, m, n)
        res.cases += 1
        if matmul(matmul(S.U, A), S.V) != S.D():
            res.fail(f"U A V != D for {A}")
        if matmul(S.U, S.Uinv) != identity(m) or abs(det(S.U)) != 1 or abs(det(S.V)) != 1:
            res.fail(f"transform not unimodular for {A}")
        d = S.diagonal
        if any(x < 0 for x in d) or any((d[i + 1] % d[i] if d[i] else d[i + 1]) for i in range(len(d) - 1)):
            res.fail(f"divisibility chain broken for {A}: {d}")
    return res


def _random_setting(rng: random.Random, groups: list[FinGroup]):
    G = rng.choice(groups)
    M = random_module(rng, G)
    subs = all_subgroups(G)
    return G, M, subs


def _random_section(rng: random.Random, H: Subgroup) -> list[int]:
    return [rng.choice(c) for c in H.right_cosets()]


def check_transfer(rng: random.Random, cases: int = 1000) -> tuple[PropertyResult, PropertyResult]:
    """Section independence, and the multiplication law when the images in Aut(M) agree."""
    sec = PropertyResult("transfer section-independence")
    mult = PropertyResult("transfer multiplication by the index")
    groups = small_groups()
    while sec.cases < cases or mult.cases < cases:
        G, M, subs = _random_setting(rng, groups)
        big = coinvariants(M)
        elems = list(big.torsion.elements()) if big.torsion.order() <= 64 else None
        for _ in range(12):
            H = rng.choice(subs)
            alpha = rng.choice(elems) if elems else big.torsion.element(
                [rng.randrange(d) for d in big.torsion.invariants])
            t1 = transfer(M, H, alpha, section=_random_section(rng, H))
            t2 = transfer(M, H, alpha, section=_random_section(rng, H))
            sec.cases += 1
            if t1 != t2:
                sec.fail(f"sections disagree for |G|={G.order}, H={sorted(H.members)}")
            # images coincide iff H meets every coset of the kernel of the action
            K = M.kernel_of_action()
            if len({G.mul(h, k) for h in H.members for k in K.members}) == G.order:
                small = coinvariants(M, H)
                mult.cases += 1
                expected = small.torsion_class(big.ambient_of(alpha * H.index_in()))
                if t1 != expected:
                    mult.fail(f"transfer != index * alpha for |G|={G.order}, H={sorted(H.members)}")
    return sec, mult


def _random_place_model(rng: random.Random, G: FinGroup, subs: list[Subgroup]) -> PlaceModel:
    named = [PlaceSpec.finite(f"v{i}", rng.choice(subs)) for i in range(rng.randint(1, 2))]
    involutions = [g for g in range(G.order) if G.mul(g, g) == 0]
    if rng.random() < 0.5:
        named.append(PlaceSpec.real("inf", G, rng.choice(involutions)))
    return PlaceModel(G, tuple(named), 0)


def _random_classes(rng: random.Random, model, count: int) -> list[GlobalClass]:
    T = model.group
    out = []
    tries = 0
    while len(out) < count and tries < 4 * count:
        tries += 1
        ab = T.element([rng.randrange(d) for d in T.invariants])
        try:
            inf = determine_inf(model, ab)
        except IncompatiblePair:
            ab = ab * 2  # twice anything is compatible with the neutral archimedean tuple
            try:
                inf = determine_inf(model, ab)
            except IncompatiblePair:
                continue
        out.append(GlobalClass(model, ab, inf))
    return out


def check_powers(rng: random.Random, cases: int = 1000, split_bound: int = 8
                 ) -> tuple[PropertyResult, PropertyResult, PropertyResult]:
    comp = PropertyResult("power composition")
    abc = PropertyResult("ab-compatibility of powers")
    div = PropertyResult("period divides splitting degrees")
    groups = small_groups()
    while comp.cases < cases or div.cases < cases:
        G, M, subs = _random_setting(rng, groups)
        pm = _random_place_model(rng, G, subs)
        model = global_ab_group(M, pm)
        classes = _random_classes(rng, model, 40)
        for xi in classes:
            for _ in range(3):
                m, n = rng.randint(-6, 6), rng.randint(-6, 6)
                a = power_global(power_global(xi, m), n)
                b = power_global(xi, m * n)
                comp.cases += 1
                if a.ab != b.ab or any(not _same_inf(model, p, x, y) for p, x, y in
                                       zip(pm.real_places(), a.inf, b.inf)):
                    comp.fail(f"(xi^{m})^{n} != xi^{m * n} over |G|={G.order}")
                abc.cases += 1
                p = power_global(xi, n)
                for place in model.places:
                    if model.l(place.name, p.ab) != model.l(place.name, xi.ab) * n:
                        abc.fail(f"l_{place.name}(xi^{n}) != {n} l_{place.name}(xi)")
        for xi in classes[:6]:
            per = period_global(xi)
            for r in splitting_models(xi, split_bound):
                div.cases += 1
                if r.degree % per:
                    div.fail(f"period {per} does not divide splitting degree {r.degree}")
    return comp, abc, div


def _same_inf(model, place, x, y) -> bool:
    return model.is_neutral_inf(place.name, x) == model.is_neutral_inf(place.name, y) and (
        model.is_neutral_inf(place.name, x) or x == y)


def check_resolutions(rng: random.Random, cases: int = 20) -> PropertyResult:
    res = PropertyResult("free-kernel resolutions")
    groups = small_groups()
    while res.cases < cases:
        G, M, _ = _random_setting(rng, groups)
        r = free_kernel_resolution(M)
        rep = verify_resolution(M, r)
        res.cases += 1
        if not rep.ok:
            res.fail(f"resolution check failed over |G|={G.order}: {rep}")
        if not r.bound_achieved:
            res.fail(f"rank bound missed over |G|={G.order}")
    return res


ALL_CHECKS: dict[str, Callable[[random.Random], tuple[PropertyResult, ...]]] = {
    "snf": lambda rng: (check_snf(rng),),
    "transfer": check_transfer,
    "powers": check_powers,
    "resolutions": lambda rng: (check_resolutions(rng),),
}


def run_all(seed: int) -> list[PropertyResult]:
    out: list[PropertyResult] = []
    for name in ALL_CHECKS:
        out.extend(ALL_CHECKS[name](random.Random(f"{seed}:{name}")))
    return out


def module_summary(M: GModule) -> str:
    return f"{M.base.describe()} over a group of order {M.group.order}"
