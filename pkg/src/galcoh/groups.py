"""Finite groups given by multiplication tables, and their subgroups.

Elements are the integers ``0 .. n-1`` and ``0`` is always the identity.
Everything here is brute force, which is fine for the desk-scale orders the
rest of the package works with (``|G| <= 64`` by default).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

DEFAULT_MAX_ORDER = 64


class GroupError(ValueError):
    pass


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FinGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]], generators: Sequence[int] | None = None,
                 check: bool = True, name: str | None = None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.name = name
        if check:
            self._check()
        self.inverses = tuple(next(b for b in range(self.order) if self.table[a][b] == 0)
                              for a in range(self.order))
        if generators is None:
            generators = self._greedy_generators()
        self.generators = tuple(int(g) for g in generators)
        if check and len(self.generated(self.generators)) != self.order:
            raise GroupError("the given generators do not generate the group")

    def _check(self) -> None:
        n = self.order
        if n == 0:
            raise GroupError("a group needs at least one element")
        T = self.table
        for a in range(n):
            if len(T[a]) != n:
                raise GroupError("multiplication table is not square")
            if sorted(T[a]) != list(range(n)):
                raise GroupError(f"row {a} of the table is not a permutation")
            if T[0][a] != a or T[a][0] != a:
                raise GroupError("element 0 must be the identity")
        for a, b, c in product(range(n), repeat=3):
            if T[T[a][b]][c] != T[a][T[b][c]]:
                raise GroupError(f"table is not associative at ({a}, {b}, {c})")

    def _greedy_generators(self) -> list[int]:
        gens: list[int] = []
        span = {0}
        for g in sorted(range(self.order), key=lambda x: -self.element_order(x)):
            if g not in span:
                gens.append(g)
                span = self.generated(gens)
                if len(span) == self.order:
                    break
        return gens

    # -- arithmetic ----------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 0
        for _ in range(k):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def conjugate(self, a: int, g: int) -> int:
        """``g a g^-1``."""
        return self.mul(self.mul(g, a), self.inv(g))

    def generated(self, gens: Iterable[int]) -> frozenset[int]:
        gens = list(gens)
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def subgroup(self, gens: Iterable[int]) -> Subgroup:
        gens = [int(g) for g in gens]
        return Subgroup(self, self.generated(gens), gens)

    def whole(self) -> Subgroup:
        return Subgroup(self, frozenset(range(self.order)), self.generators)

    def trivial_subgroup(self) -> Subgroup:
        return Subgroup(self, frozenset({0}), ())

    def is_abelian(self) -> bool:
        T = self.table
        return all(T[a][b] == T[b][a] for a in range(self.order) for b in range(a))

    def __repr__(self) -> str:
        return f"FinGroup(order={self.order}{', ' + self.name if self.name else ''})"

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]], name: str | None = None) -> FinGroup:
        """The group generated by permutations of ``0..d-1``, numbered breadth first."""
        if not perms:
            return cls.trivial()
        d = len(perms[0])
        ident = tuple(range(d))
        gens = [tuple(int(x) for x in p) for p in perms]
        for p in gens:
            if len(p) != d or sorted(p) != list(ident):
                raise GroupError(f"not a permutation of 0..{d - 1}: {list(p)}")
        elems = [ident]
        index = {ident: 0}
        i = 0
        while i < len(elems):
            x = elems[i]
            for g in gens:
                # x then g, written as composition g o x
                y = tuple(g[x[k]] for k in range(d))
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
            i += 1
        table = [[index[tuple(a[b[k]] for k in range(d))] for b in elems] for a in elems]
        return cls(table, [index[g] for g in gens if index[g] != 0] or [], check=False, name=name)

    @classmethod
    def trivial(cls) -> FinGroup:
        return cls([[0]], [], check=False, name="1")

    @classmethod
    def cyclic(cls, n: int) -> FinGroup:
        return cls([[(a + b) % n for b in range(n)] for a in range(n)], [1] if n > 1 else [],
                   check=False, name=f"Z/{n}")

    @classmethod
    def abelian(cls, moduli: Sequence[int]) -> FinGroup:
        """``Z/m_1 x ... x Z/m_k``; element index is mixed radix with the first factor fastest."""
        moduli = [int(m) for m in moduli]
        tuples = list(product(*(range(m) for m in reversed(moduli))))
        tuples = [tuple(reversed(t)) for t in tuples]
        index = {t: i for i, t in enumerate(tuples)}
        table = [[index[tuple((x + y) % m for x, y, m in zip(a, b, moduli))] for b in tuples] for a in tuples]
        gens = [index[tuple(int(i == j) for j in range(len(moduli)))] for i in range(len(moduli)) if moduli[i] > 1]
        return cls(table, gens, check=False, name=" x ".join(f"Z/{m}" for m in moduli) or "1")

    def abelian_coords(self, moduli: Sequence[int], element: int) -> tuple[int, ...]:
        """Inverse of the indexing used by :meth:`abelian`."""
        out = []
        for m in moduli:
            out.append(element % m)
            element //= m
        return tuple(out)

    @classmethod
    def symmetric(cls, n: int) -> FinGroup:
        if n < 2:
            return cls.trivial()
        perms = [tuple([1, 0] + list(range(2, n)))]
        if n > 2:
            perms.append(tuple(list(range(1, n)) + [0]))
        return cls.from_permutations(perms, name=f"S{n}")

    @classmethod
    def dihedral(cls, n: int) -> FinGroup:
        """Symmetries of the regular ``n``-gon (order ``2n``)."""
        rot = tuple((k + 1) % n for k in range(n))
        ref = tuple((-k) % n for k in range(n))
        return cls.from_permutations([rot, ref], name=f"D{n}")

    @classmethod
    def klein_four(cls) -> FinGroup:
        G = cls.abelian([2, 2])
        G.name = "V4"
        return G


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FinGroup
    members: frozenset[int]
    gens: tuple[int, ...] = ()

    def __init__(self, parent: FinGroup, members: Iterable[int], gens: Iterable[int] = ()):
        members = frozenset(int(x) for x in members)
        gens = tuple(int(g) for g in gens)
        if 0 not in members:
            raise GroupError("a subgroup must contain the identity")
        T = parent.table
        for a in members:
            if parent.inverses[a] not in members or any(T[a][b] not in members for b in members):
                raise GroupError("member set is not closed under the group law")
        if not gens or parent.generated(gens) != members:
            gens = tuple(_small_generators(parent, members))
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "gens", gens)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subgroup) and self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __contains__(self, g: int) -> bool:
        return g in self.members

    def __le__(self, other: Subgroup) -> bool:
        return self.members <= other.members

    def __repr__(self) -> str:
        return f"Subgroup({sorted(self.members)})"

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def elements(self) -> list[int]:
        return sorted(self.members)

    def index_in(self, big: Subgroup | None = None) -> int:
        n = big.order if big is not None else self.parent.order
        return n // self.order

    def is_cyclic(self) -> bool:
        return any(self.parent.element_order(g) == self.order for g in self.members)

    def conjugate(self, g: int) -> Subgroup:
        G = self.parent
        return Subgroup(G, {G.conjugate(a, g) for a in self.members}, [G.conjugate(a, g) for a in self.gens])

    def is_normal_in(self, big: Subgroup | None = None) -> bool:
        big_elems = big.members if big is not None else range(self.parent.order)
        return all(self.conjugate(g).members == self.members for g in big_elems)

    def left_cosets(self, big: Subgroup | None = None) -> list[list[int]]:
        """Left cosets ``g H`` inside ``big``; the coset of the identity comes first."""
        G = self.parent
        pool = sorted(big.members) if big is not None else list(range(G.order))
        seen: set[int] = set()
        out = []
        for g in pool:
            if g not in seen:
                coset = sorted(G.mul(g, h) for h in self.members)
                seen.update(coset)
                out.append([g] + [x for x in coset if x != g])
        return out

    def right_cosets(self, big: Subgroup | None = None) -> list[list[int]]:
        """Right cosets ``H g`` inside ``big``; each list starts with its chosen representative."""
        G = self.parent
        pool = sorted(big.members) if big is not None else list(range(G.order))
        seen: set[int] = set()
        out = []
        for g in pool:
            if g not in seen:
                coset = sorted(G.mul(h, g) for h in self.members)
                seen.update(coset)
                out.append([g] + [x for x in coset if x != g])
        return out

    @cached_property
    def as_group(self) -> FinGroup:
        """This subgroup as a standalone group; see :attr:`local_index` for the numbering."""
        elems = self._numbering
        pos = {g: i for i, g in enumerate(elems)}
        T = self.parent.table
        table = [[pos[T[a][b]] for b in elems] for a in elems]
        return FinGroup(table, [pos[g] for g in self.gens], check=False)

    @cached_property
    def _numbering(self) -> list[int]:
        return [0] + sorted(self.members - {0})

    def to_local(self, g: int) -> int:
        return self._numbering.index(g)

    def from_local(self, i: int) -> int:
        return self._numbering[i]


def _small_generators(G: FinGroup, members: frozenset[int]) -> list[int]:
    gens: list[int] = []
    span = frozenset({0})
    for g in sorted(members, key=lambda x: (-G.element_order(x), x)):
        if g not in span:
            gens.append(g)
            span = G.generated(gens)
            if span == members:
                break
    return gens


def quotient_group(G: FinGroup, N: Subgroup) -> tuple[FinGroup, list[int]]:
    """``G/N`` for normal ``N`` together with the projection as an element map."""
    if not N.is_normal_in():
        raise GroupError("quotient by a non-normal subgroup")
    cosets = N.left_cosets()
    label = [0] * G.order
    for i, c in enumerate(cosets):
        for g in c:
            label[g] = i
    reps = [c[0] for c in cosets]
    table = [[label[G.mul(a, b)] for b in reps] for a in reps]
    gens = sorted({label[g] for g in G.generators} - {0})
    return FinGroup(table, gens, check=False), label


def check_order(G: FinGroup, max_order: int = DEFAULT_MAX_ORDER) -> None:
    if G.order > max_order:
        raise GroupError(f"group order {G.order} exceeds the size bound {max_order}")


def all_subgroups(G: FinGroup, max_order: int = DEFAULT_MAX_ORDER) -> list[Subgroup]:
    """Every subgroup, sorted by order and then by member list."""
    check_order(G, max_order)
    cyclic = {G.generated([g]) for g in range(G.order)}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if not C <= H:
                    J = G.generated(H | C)
                    if J not in found:
                        found.add(J)
                        nxt.append(J)
        frontier = nxt
    return [Subgroup(G, m) for m in sorted(found, key=lambda m: (len(m), sorted(m)))]


def conjugacy_classes_of_subgroups(subgroups: Sequence[Subgroup]) -> list[list[Subgroup]]:
    classes: list[list[Subgroup]] = []
    placed: set[frozenset[int]] = set()
    for H in subgroups:
        if H.members in placed:
            continue
        conj = {H.conjugate(g).members for g in range(H.parent.order)}
        cls = [K for K in subgroups if K.members in conj]
        placed.update(conj)
        classes.append(cls)
    return classes


def commutator_subgroup(G: FinGroup) -> Subgroup:
    comms = {G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b))) for a in range(G.order) for b in range(G.order)}
    return G.subgroup(comms)


def abelian_invariants(G: FinGroup) -> tuple[int, ...]:
    """Invariant factors of an abelian group, counted from element orders."""
    if not G.is_abelian():
        raise GroupError("group is not abelian")
    orders = Counter(G.element_order(g) for g in range(G.order))
    factors: list[int] = []
    per_prime: dict[int, list[int]] = {}
    for p, e in _factorize(G.order).items():
        # number of elements killed by p^k, for k = 0..e
        killed = [sum(c for o, c in orders.items() if (p ** k) % o == 0) for k in range(e + 1)]
        ranks = []
        for k in range(1, e + 1):
            r, x = 0, killed[k] // killed[k - 1]
            while x > 1:
                x //= p
                r += 1
            ranks.append(r)  # number of cyclic p-factors of order >= p^k
        exps = []
        for k in range(e):
            nxt = ranks[k + 1] if k + 1 < e else 0
            exps += [k + 1] * (ranks[k] - nxt)
        per_prime[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in per_prime.values()), default=0)
    for i in range(width):
        d = 1
        for p, exps in per_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return tuple(sorted(factors))


def abelianization_invariants(G: FinGroup) -> tuple[int, ...]:
    Q, _ = quotient_group(G, commutator_subgroup(G))
    return abelian_invariants(Q)


def is_sylow_cyclic(G: FinGroup) -> bool:
    """Every Sylow subgroup is cyclic iff some element has the full ``p``-power order."""
    orders = {G.element_order(g) for g in range(G.order)}
    for p, e in _factorize(G.order).items():
        if not any(o % p ** e == 0 for o in orders):
            return False
    return True


@dataclass(frozen=True)
class GroupAnalysis:
    subgroups: list[Subgroup]
    conjugacy_classes: list[list[Subgroup]]
    cyclic_representatives: list[Subgroup]
    abelianization: tuple[int, ...]
    sylow_cyclic: bool


def group_analysis(G: FinGroup, max_order: int = DEFAULT_MAX_ORDER) -> GroupAnalysis:
    subs = all_subgroups(G, max_order)
    classes = conjugacy_classes_of_subgroups(subs)
    cyc = [cls[0] for cls in classes if cls[0].is_cyclic()]
    return GroupAnalysis(subs, classes, cyc, abelianization_invariants(G), is_sylow_cyclic(G))


def cyclic_subgroup_representatives(G: FinGroup) -> list[Subgroup]:
    """One cyclic subgroup per conjugacy class, without enumerating all subgroups."""
    cyclic = sorted({G.generated([g]) for g in range(G.order)}, key=lambda m: (len(m), sorted(m)))
    reps: list[Subgroup] = []
    seen: set[frozenset[int]] = set()
    for m in cyclic:
        if m in seen:
            continue
        H = Subgroup(G, m)
        seen.update(H.conjugate(g).members for g in range(G.order))
        reps.append(H)
    return reps

