from itertools import combinations

from galcoh.groups import (
    FinGroup,
    abelianization_invariants,
    all_subgroups,
    conjugacy_classes_of_subgroups,
    group_analysis,
    is_sylow_cyclic,
    quotient_group,
)


def brute_force_subgroups(G):
    """Every subset containing the identity and closed under multiplication."""
    found = []
    others = list(range(1, G.order))
    for k in range(len(others) + 1):
        for extra in combinations(others, k):
            S = {0, *extra}
            if all(G.mul(a, b) in S for a in S for b in S):
                found.append(frozenset(S))
    return set(found)


def test_cyclic_four():
    a = group_analysis(FinGroup.cyclic(4))
    assert a.sylow_cyclic
    assert a.abelianization == (4,)


def test_klein_four_not_sylow_cyclic():
    assert not is_sylow_cyclic(FinGroup.klein_four())


def test_s3():
    S3 = FinGroup.symmetric(3)
    a = group_analysis(S3)
    assert {s.members for s in a.subgroups} == brute_force_subgroups(S3)
    assert len(a.subgroups) == 6
    assert a.sylow_cyclic
    assert a.abelianization == (2,)
    # 1, the three order-2 subgroups, A3, S3
    assert sorted(len(c) for c in a.conjugacy_classes) == [1, 1, 1, 3]
    assert len(a.cyclic_representatives) == 3


def test_subgroups_against_brute_force():
    for G in (FinGroup.dihedral(4), FinGroup.abelian([2, 4]), FinGroup.cyclic(6)):
        assert {s.members for s in all_subgroups(G)} == brute_force_subgroups(G)


def test_group_axioms_and_cosets():
    G = FinGroup.dihedral(4)
    for a in range(G.order):
        assert G.mul(a, G.inv(a)) == 0
    H = G.subgroup([G.generators[1]])
    left, right = H.left_cosets(), H.right_cosets()
    assert len(left) == len(right) == H.index_in() == 4
    assert sorted(x for c in left for x in c) == list(range(8))


def test_quotient_and_abelianization():
    D4 = FinGroup.dihedral(4)
    assert abelianization_invariants(D4) == (2, 2)
    centre = D4.subgroup([D4.power(D4.generators[0], 2)])
    Q, proj = quotient_group(D4, centre)
    assert Q.order == 4 and not is_sylow_cyclic(Q)
    classes = conjugacy_classes_of_subgroups(all_subgroups(FinGroup.symmetric(3)))
    assert sum(len(c) for c in classes) == 6


def test_permutation_group():
    q8 = FinGroup.from_permutations([(1, 2, 3, 0, 5, 6, 7, 4), (4, 7, 6, 5, 2, 1, 0, 3)])
    assert q8.order == 8 and not q8.is_abelian()
    assert is_sylow_cyclic(q8) is False  # Q8 is not cyclic
