import random

import pytest

from conftest import cyclic_trivial
from galcoh import catalog
from galcoh.globalcoh import (
    AbstractFiber,
    GlobalError,
    IncompatiblePair,
    PlaceModel,
    enumerate_classes,
    global_ab_group,
    glue_local_classes,
    index_bounds_global,
    index_exponent,
    is_compatible,
    localize,
    make_global_class,
    per_equals_ind_guarantee,
    period2_property,
    period_global,
    period_witness,
    power_global,
    restrict_global,
    sha_kernel,
    split_degree_global,
    tate_sum,
)
from galcoh.groups import FinGroup
from galcoh.grpmod import augmentation_ideal, random_module, trivial_module
from galcoh.intlat import FgAbGroup
from galcoh.localcoh import PlaceSpec


def trivial_gamma_model(n, names=("p", "q"), reservoir=0, real=False, fibers=None):
    G = FinGroup.trivial()
    M = cyclic_trivial(G, n) if n else trivial_module(G, FgAbGroup(1))
    places = [PlaceSpec.finite(x, G.whole()) for x in names]
    if real:
        places.insert(0, PlaceSpec.real("inf", G))
    return M, PlaceModel(G, tuple(places), reservoir, fibers or {})


@pytest.fixture(scope="module")
def appendix_a():
    e = catalog.build_named("appendix_a_rank6")
    return e, catalog.appendix_a_class(e)


class TestGlobalGroup:
    def test_two_ramified_places(self):
        M, pm = trivial_gamma_model(2)
        model = global_ab_group(M, pm)
        assert model.group.invariants == (2,)
        g = model.group.generators()[0]
        assert not model.l("p", g).is_zero() and not model.l("q", g).is_zero()

    def test_lattice_is_torsion_free(self):
        M, pm = trivial_gamma_model(0, names=("p", "q", "r"))
        assert global_ab_group(M, pm).group.order() == 1

    def test_zi_order_two_class(self, zi, c4):
        pm = PlaceModel(c4, (PlaceSpec.finite("v", c4.whole()), PlaceSpec.finite("u", c4.whole())), 1)
        model = global_ab_group(zi, pm)
        x = model.local["v"].group.element([1])
        y = model.local["u"].group.element([1])
        res = glue_local_classes(zi, pm, {"v": x, "u": y}, model=model)
        assert res.ok
        assert period_global(res.cls) == 2
        assert res.cls.model.l("v", res.cls.ab) == x and res.cls.model.l("u", res.cls.ab) == y

    def test_orbit_guard(self, monkeypatch):
        monkeypatch.setenv("GALCOH_MAX_ORBITS", "2")
        M, pm = trivial_gamma_model(2, names=("p", "q", "r"))
        with pytest.raises(GlobalError):
            global_ab_group(M, pm)


class TestCompatibility:
    def sign_model(self):
        """Z/4 with trivial action of Z/2; theta at the real place has image {0, 2}."""
        G = FinGroup.cyclic(2)
        M = cyclic_trivial(G, 4)
        pm = PlaceModel(G, (PlaceSpec.real("inf", G, G.generators[0]), PlaceSpec.finite("p", G.whole())), 1)
        return global_ab_group(M, pm)

    def test_neutral_accepted(self):
        model = self.sign_model()
        assert is_compatible(model, model.group.zero(), (model.inf_neutral("inf"),))

    def test_outside_theta_image_rejected(self):
        model = self.sign_model()
        bad = [ab for ab in model.group.elements() if model.l("inf", ab).order() == 4]
        assert bad
        with pytest.raises(IncompatiblePair):
            make_global_class(model, bad[0])
        assert not any(is_compatible(model, bad[0], (v,)) for v in model.inf_values("inf"))

    def test_torus_mode_inf_is_unique(self):
        model = self.sign_model()
        seen = {}
        for c in enumerate_classes(model):
            assert c.ab not in seen
            seen[c.ab] = c.inf


class TestPowersAndPeriods:
    def test_identity_power(self, appendix_a):
        _, xi = appendix_a
        assert power_global(xi, 1) == xi

    def test_appendix_a(self, appendix_a):
        _, xi = appendix_a
        assert period_global(xi) == 2
        assert power_global(xi, 2).is_neutral()

    def test_composition(self):
        rng = random.Random(8)
        M, pm = trivial_gamma_model(12, names=("p", "q", "r"), real=True)
        model = global_ab_group(M, pm)
        for c in rng.sample(enumerate_classes(model), 20):
            assert power_global(power_global(c, 2), 3) == power_global(c, 6)

    def test_neutral_period(self):
        M, pm = trivial_gamma_model(5)
        model = global_ab_group(M, pm)
        assert period_global(make_global_class(model, model.group.zero())) == 1

    def test_abstract_fiber_period(self):
        fib = AbstractFiber(("1", "x"), "1", {"1": (0,), "x": (0,)})
        M, pm = trivial_gamma_model(3, real=True, fibers={"inf": fib})
        model = global_ab_group(M, pm)
        res = glue_local_classes(M, pm, {"inf": "x", "p": model.local["p"].group.element([1]),
                                         "q": model.local["q"].group.element([2])}, model=model)
        assert res.ok and res.cls.ab.order() == 3 and res.cls.inf == ("x",)
        assert period_global(res.cls) == 6
        # brute-force check: the least n with xi^n neutral
        assert min(n for n in range(1, 13) if power_global(res.cls, n).is_neutral()) == 6


class TestGluing:
    def test_neutral_prescription(self, zi, c4):
        pm = PlaceModel(c4, (PlaceSpec.finite("v", c4.whole()),), 1)
        res = glue_local_classes(zi, pm, {})
        assert res.ok and res.cls.is_neutral()

    def test_obstruction(self, zi, c4):
        pm = PlaceModel(c4, (PlaceSpec.finite("v", c4.whole()), PlaceSpec.finite("u", c4.whole())), 1)
        model = global_ab_group(zi, pm)
        x = model.local["v"].group.element([1])
        res = glue_local_classes(zi, pm, {"v": x}, model=model)
        assert not res.ok
        assert res.obstruction == tate_sum(model, {"v": x}) and not res.obstruction.is_zero()

    def test_round_trip_cyclic(self):
        rng = random.Random(99)
        glued = 0
        for _ in range(30):
            G = FinGroup.cyclic(rng.choice([1, 2, 3, 4, 6]))
            M = random_module(rng, G)
            subs = [G.subgroup([g]) for g in range(G.order)]
            pm = PlaceModel(G, (PlaceSpec.finite("a", rng.choice(subs)), PlaceSpec.finite("b", rng.choice(subs))), 1)
            model = global_ab_group(M, pm)
            pres = {n: rng.choice(list(model.local[n].group.elements())) for n in ("a", "b")}
            res = glue_local_classes(M, pm, pres, model=model)
            assert res.ok == tate_sum(model, pres).is_zero()
            if res.ok:
                glued += 1
                loc = localize(res.cls)
                for p in res.model.places:
                    expect = pres.get(p.name, res.model.local[p.name].group.zero())
                    assert loc[p.name] == expect
        assert glued > 5


class TestSha:
    def test_cyclic(self):
        rng = random.Random(1)
        for n in (2, 3, 4, 6):
            G = FinGroup.cyclic(n)
            M = random_module(rng, G)
            assert sha_kernel(M, PlaceModel(G, (), 1)).group.order() == 1

    def test_klein_four_norm_one_torus(self):
        G = FinGroup.klein_four()
        M = augmentation_ideal(G)
        s1 = sha_kernel(M, PlaceModel(G, (), 1))
        s2 = sha_kernel(M, PlaceModel(G, (), 2))
        assert s1.group.invariants == s2.group.invariants == (2,)
        assert s1.stable

    def test_trivial_group(self):
        M, pm = trivial_gamma_model(6, reservoir=1)
        assert sha_kernel(M, pm).group.order() == 1


class TestRestriction:
    def test_whole_group(self, appendix_a):
        e, xi = appendix_a
        r = restrict_global(xi, e.group.whole(), 1)
        assert r.ab.coords == xi.ab.coords and r.degree == 1

    def test_index_two_nonzero(self, appendix_a):
        e, xi = appendix_a
        H = e.places.named[0].quadratic_types["pi"]
        assert not restrict_global(xi, H, 1).ab.is_zero()

    def test_period_multiple_kills(self):
        M, pm = trivial_gamma_model(6, reservoir=1)
        model = global_ab_group(M, pm)
        for c in enumerate_classes(model):
            p = period_global(c)
            assert restrict_global(c, model.M.group.whole(), p).is_neutral()


class TestBounds:
    def test_split_degree_global(self, zi):
        M, _ = trivial_gamma_model(5)
        assert (split_degree_global(M, 7).guarantee_degree, split_degree_global(M, 7).sylow_cyclic) == (7, True)
        b = split_degree_global(zi, 2)
        assert (b.guarantee_degree, b.sylow_cyclic) == (8, True)
        b = split_degree_global(augmentation_ideal(FinGroup.klein_four()), 2)
        assert (b.guarantee_degree, b.sylow_cyclic) == (8, False)

    def test_index_exponent(self):
        M, _ = trivial_gamma_model(2)
        assert index_exponent(M) == 2

    def test_appendix_a(self, appendix_a):
        _, xi = appendix_a
        b = index_bounds_global(xi, 16)
        assert b.period == 2 and b.lower % 4 == 0
        assert b.achieved is not None and b.achieved % 4 == 0

    def test_neutral(self):
        M, pm = trivial_gamma_model(4, reservoir=1)
        model = global_ab_group(M, pm)
        b = index_bounds_global(make_global_class(model, model.group.zero()), 8)
        assert (b.period, b.lower, b.upper, b.achieved) == (1, 1, 1, 1)

    def test_split_pi1(self):
        M, pm = trivial_gamma_model(4, reservoir=1)
        model = global_ab_group(M, pm)
        xi = next(c for c in enumerate_classes(model) if period_global(c) == 4)
        b = index_bounds_global(xi, 16)
        assert b.lower == b.achieved == 4
        assert b.upper % b.achieved == 0


class TestPeriodTwo:
    def test_z2(self):
        M, _ = trivial_gamma_model(2)
        assert period2_property(M) and per_equals_ind_guarantee(M)

    def test_z3_witness(self):
        M, pm = trivial_gamma_model(3)
        assert not period2_property(M)
        w = period_witness(M, pm)
        assert w is not None and period_global(w) == 3

    def test_z2_z4(self):
        M = trivial_module(FinGroup.trivial(), FgAbGroup(2, [(2, 0), (0, 4)]))
        assert not period2_property(M)

    def test_lattice(self):
        M, _ = trivial_gamma_model(0)
        assert not period2_property(M)
