import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from galcoh.intlat import (
    FgAbGroup,
    Hom,
    NotAHomomorphism,
    cyclic_group,
    det,
    direct_sum,
    element_order,
    hom_parts,
    identity,
    integer_kernel,
    invariant_factors,
    matmul,
    min_generators,
    smith,
    solve_integer,
)


def sympy_invariants(A):
    """Nonzero diagonal of sympy's Smith form, made positive."""
    m, n = len(A), len(A[0])
    D = smith_normal_form(Matrix(A), domain=ZZ)
    return sorted(abs(D[i, i]) for i in range(min(m, n)) if D[i, i] != 0)


def _matrices():
    dims = st.tuples(st.integers(1, 5), st.integers(1, 5))
    return dims.flatmap(lambda mn: st.lists(
        st.lists(st.integers(-30, 30), min_size=mn[1], max_size=mn[1]), min_size=mn[0], max_size=mn[0]))


class TestSmith:
    def test_worked_example(self):
        S = smith([[2, 4], [6, 8]])
        assert S.diagonal == (2, 4)
        assert matmul(matmul(S.U, [[2, 4], [6, 8]]), S.V) == [[2, 0], [0, 4]]

    def test_zero_and_identity(self):
        S = smith([[0, 0], [0, 0]])
        assert S.rank == 0 and S.D() == [[0, 0], [0, 0]]
        assert smith(identity(3)).diagonal == (1, 1, 1)

    @settings(max_examples=300, deadline=None)
    @given(_matrices())
    def test_against_sympy(self, A):
        m, n = len(A), len(A[0])
        S = smith(A, m, n)
        assert matmul(matmul(S.U, A), S.V) == S.D()
        assert matmul(S.U, S.Uinv) == identity(m)
        assert abs(det(S.U)) == 1 and abs(det(S.V)) == 1
        nonzero = [d for d in S.diagonal if d]
        assert nonzero == sympy_invariants(A)
        assert all(nonzero[i + 1] % nonzero[i] == 0 for i in range(len(nonzero) - 1))

    def test_big_entries(self):
        big = 2 ** 200 + 7
        A = [[big, 0], [0, big * 3]]
        assert invariant_factors(A) == (big, 3 * big)


class TestFgAbGroup:
    def test_examples(self):
        assert FgAbGroup(1, [(2,)]).describe() == "Z/2"
        G = FgAbGroup(2, [(1, -1)])
        assert G.invariants == () and G.free_rank == 1
        assert FgAbGroup(2, [(2, 0), (0, 4)]).invariants == (2, 4)

    def test_orders(self):
        assert element_order(FgAbGroup(1, [(2,)]).element([1])) == 2
        assert element_order(FgAbGroup(1).element([3])) == "infinite"
        G = FgAbGroup(2, [(2, 0), (0, 4)])
        assert element_order(G.from_ambient([1, 2])) == 2

    def test_min_generators(self):
        assert min_generators(FgAbGroup(2, [(2, 0), (0, 4)])) == 2
        assert min_generators(FgAbGroup(2, [(3, 0)])) == 2  # Z + Z/3
        assert min_generators(FgAbGroup(2, [(2, 0), (0, 3)])) == 1

    def test_canonical_coordinates_are_stable(self):
        G = FgAbGroup(3, [(2, 2, 0), (0, 6, 6)])
        rng = random.Random(5)
        for _ in range(100):
            v = [rng.randint(-20, 20) for _ in range(3)]
            w = [rng.randint(-5, 5) for _ in range(2)]
            shifted = [v[i] + w[0] * 2 * (i < 2) + w[1] * 6 * (i > 0) for i in range(3)]
            assert G.from_ambient(v) == G.from_ambient(shifted)

    def test_element_enumeration_matches_order(self):
        G = direct_sum([cyclic_group(4), cyclic_group(6)])
        assert G.invariants == (2, 12)
        assert len(set(G.elements())) == G.order() == 24


class TestHom:
    def test_times_two_on_z(self):
        Z = FgAbGroup(1)
        parts = hom_parts(Hom(Z, Z, [[2]]))
        assert parts.kernel.order() == 1
        assert parts.cokernel.describe() == "Z/2"

    def test_sum_map(self):
        parts = hom_parts(Hom(FgAbGroup(2), FgAbGroup(1), [[1, 1]]))
        assert parts.kernel.free_rank == 1 and parts.kernel.invariants == ()

    def test_times_two_on_z4(self):
        Z4 = FgAbGroup(1, [(4,)])
        parts = hom_parts(Hom(Z4, Z4, [[2]]))
        assert parts.kernel.invariants == (2,)
        assert parts.cokernel.invariants == (2,)
        assert parts.image.invariants == (2,)

    def test_not_a_homomorphism(self):
        with pytest.raises(NotAHomomorphism):
            Hom(FgAbGroup(1, [(2,)]), FgAbGroup(1, [(3,)]), [[1]])

    def test_lift(self):
        f = Hom(FgAbGroup(1), FgAbGroup(1, [(6,)]), [[2]])
        y = f.target.from_ambient([4])
        x = f.lift(y)
        assert x is not None and f(x) == y
        assert f.lift(f.target.from_ambient([1])) is None


def test_integer_kernel_and_solve():
    A = [[1, 2, 3], [4, 5, 6]]
    K = integer_kernel(A, 2, 3)
    assert len(K) == 1
    assert matmul(A, [[x] for x in K[0]]) == [[0], [0]]
    x = solve_integer(A, [6, 15], 2, 3)
    assert x is not None and matmul(A, [[t] for t in x]) == [[6], [15]]
    assert solve_integer([[2]], [1], 1, 1) is None
