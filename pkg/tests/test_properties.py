import random

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from galcoh.globalcoh import PlaceModel, global_ab_group, make_global_class, period_global, power_global
from galcoh.grpmod import coinvariants, free_kernel_resolution, random_module, transfer, verify_resolution
from galcoh.groups import all_subgroups
from galcoh.localcoh import PlaceSpec
from galcoh.properties import run_all, small_groups

GROUPS = small_groups()
settings.register_profile("galcoh", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("galcoh")

seeds = st.integers(0, 2 ** 32)


@settings(max_examples=60)
@given(seeds, st.integers(0, len(GROUPS) - 1))
def test_transfer_is_a_homomorphism(seed, gi):
    rng = random.Random(seed)
    G = GROUPS[gi]
    M = random_module(rng, G)
    H = rng.choice(all_subgroups(G))
    T = coinvariants(M).torsion
    if T.order() == 1:
        return
    xs = list(T.elements())
    a, b = rng.choice(xs), rng.choice(xs)
    assert transfer(M, H, a + b) == transfer(M, H, a) + transfer(M, H, b)


@settings(max_examples=40)
@given(seeds, st.integers(0, len(GROUPS) - 1), st.integers(-8, 8), st.integers(-8, 8))
def test_power_composition(seed, gi, m, n):
    rng = random.Random(seed)
    G = GROUPS[gi]
    M = random_module(rng, G)
    subs = all_subgroups(G)
    pm = PlaceModel(G, (PlaceSpec.finite("v", rng.choice(subs)), PlaceSpec.finite("w", rng.choice(subs))), 0)
    model = global_ab_group(M, pm)
    T = model.group
    ab = T.element([rng.randrange(d) for d in T.invariants])
    xi = make_global_class(model, ab)
    assert power_global(power_global(xi, m), n).ab == power_global(xi, m * n).ab
    per = period_global(xi)
    assert power_global(xi, per).is_neutral()
    assert all(not power_global(xi, k).is_neutral() for k in range(1, per))


@settings(max_examples=25)
@given(seeds, st.integers(0, len(GROUPS) - 1))
def test_resolution(seed, gi):
    rng = random.Random(seed)
    M = random_module(rng, GROUPS[gi])
    r = free_kernel_resolution(M)
    assert verify_resolution(M, r).ok and r.bound_achieved


def test_run_all_is_deterministic():
    a = [(r.name, r.cases, r.failures) for r in run_all(5)]
    b = [(r.name, r.cases, r.failures) for r in run_all(5)]
    assert a == b
    assert all(not f for _, _, f in a)
