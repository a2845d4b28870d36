"""Modules over finite groups: coinvariants, Tate H^-1, transfer, induction, duals.

A :class:`GModule` is an :class:`FgAbGroup` ``Z^n / R`` with a left action of
a finite group given by integer matrices on the ambient ``Z^n``.  Only the
generator matrices are supplied; the rest are obtained by closure and the
group law is checked on the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from .groups import FinGroup, Subgroup, quotient_group
from .intlat import (
    FgAbGroup,
    GroupElement,
    Hom,
    columns_to_matrix,
    hom_parts,
    identity,
    mat_vec,
    matmul,
    min_generators,
    rational_inverse,
    smith,
)


class ModuleError(ValueError):
    pass


def _mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


class GModule:
    """A finitely generated abelian group with a left action of a finite group."""

    def __init__(self, group: FinGroup, base: FgAbGroup, generator_action: Mapping[int, Sequence[Sequence[int]]]):
        self.group = group
        self.base = base
        n = base.rank
        gen_mats: dict[int, list[list[int]]] = {}
        for g in group.generators:
            if g not in generator_action:
                raise ModuleError(f"no action matrix given for generator {g}")
        for g, A in generator_action.items():
            A = [list(map(int, r)) for r in A]
            if len(A) != n or any(len(r) != n for r in A):
                raise ModuleError(f"action matrix of {g} must be {n} x {n}")
            for c in base.relations:
                if not base.in_relations(mat_vec(A, c)):
                    raise ModuleError(f"action of {g} does not preserve the relations")
            gen_mats[int(g)] = A
        self.generator_action = gen_mats
        self._cache: dict = {}
        self.action = self._close()
        self._check_law()

    def _close(self) -> list[list[list[int]]]:
        G = self.group
        mats: list[list[list[int]] | None] = [None] * G.order
        mats[0] = identity(self.base.rank)
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s in G.generators:
                    y = G.mul(s, x)
                    if mats[y] is None:
                        mats[y] = matmul(self.generator_action[s], mats[x])
                        nxt.append(y)
            frontier = nxt
        if any(m is None for m in mats):
            raise ModuleError("group generators do not reach every element")
        return mats  # type: ignore[return-value]

    def _check_law(self) -> None:
        G = self.group
        for s, A in self.generator_action.items():
            for x in range(G.order):
                if not self.same_on_base(self.action[G.mul(s, x)], matmul(A, self.action[x])):
                    raise ModuleError("action matrices do not satisfy the group law")

    def same_on_base(self, A, B) -> bool:
        D = _mat_sub(A, B)
        n = self.base.rank
        return all(self.base.in_relations([D[i][j] for i in range(n)]) for j in range(n))

    @property
    def rank(self) -> int:
        return self.base.rank

    def act(self, g: int, vec: Sequence[int]) -> list[int]:
        return mat_vec(self.action[g], vec)

    def act_element(self, g: int, x: GroupElement) -> GroupElement:
        return self.base.from_ambient(self.act(g, self.base.to_ambient(x)))

    def kernel_of_action(self, within: Subgroup | None = None) -> Subgroup:
        I = identity(self.rank)
        pool = within.members if within is not None else range(self.group.order)
        return Subgroup(self.group, [g for g in pool if self.same_on_base(self.action[g], I)])

    def image_group(self, within: Subgroup | None = None) -> FinGroup:
        """The image of ``within`` (default: the whole group) in ``Aut(base)``."""
        H = within if within is not None else self.group.whole()
        K = self.kernel_of_action(H)
        Hg = H.as_group
        Kloc = Subgroup(Hg, [H.to_local(k) for k in K.members])
        Q, _ = quotient_group(Hg, Kloc)
        return Q

    def restrict(self, H: Subgroup) -> GModule:
        """The same base viewed as a module over ``H`` (numbered as ``H.as_group``)."""
        Hg = H.as_group
        return GModule(Hg, self.base, {i: self.action[H.from_local(i)] for i in Hg.generators})

    def canonical_action(self, g: int) -> list[list[int]]:
        """Action of ``g`` in canonical coordinates of the base."""
        B = self.base
        cols = [B.canonical_of(self.act(g, B.to_ambient(e))) for e in B.generators()]
        return columns_to_matrix(cols, B.ngens)

    def __repr__(self) -> str:
        return f"GModule({self.base.describe()} over group of order {self.group.order})"


def trivial_module(group: FinGroup, base: FgAbGroup) -> GModule:
    return GModule(group, base, {g: identity(base.rank) for g in group.generators})


def direct_sum_modules(mods: Sequence[GModule]) -> GModule:
    G = mods[0].group
    n = sum(M.rank for M in mods)
    rels, off = [], 0
    for M in mods:
        for c in M.base.relations:
            rels.append([0] * off + list(c) + [0] * (n - off - M.rank))
        off += M.rank
    acts = {}
    for g in G.generators:
        A = [[0] * n for _ in range(n)]
        off = 0
        for M in mods:
            for i in range(M.rank):
                for j in range(M.rank):
                    A[off + i][off + j] = M.action[g][i][j]
            off += M.rank
        acts[g] = A
    return GModule(G, FgAbGroup(n, rels), acts)


def regular_module(G: FinGroup, copies: int = 1) -> GModule:
    """The free module ``Z[G]^copies``; basis vector ``(c, h)`` sits at ``c*|G| + h``."""
    n = G.order
    acts = {}
    for g in G.generators:
        A = [[0] * (n * copies) for _ in range(n * copies)]
        for c in range(copies):
            for h in range(n):
                A[c * n + G.mul(g, h)][c * n + h] = 1
        acts[g] = A
    return GModule(G, FgAbGroup(n * copies), acts)


def augmentation_ideal(G: FinGroup) -> GModule:
    """``I_G``: kernel of the augmentation ``Z[G] -> Z``, with basis ``h - e`` for ``h != e``."""
    n = G.order
    acts = {}
    for g in G.generators:
        # g.(h - e) = (gh - e) - (g - e)
        A = [[0] * (n - 1) for _ in range(n - 1)]
        for h in range(1, n):
            gh = G.mul(g, h)
            if gh:
                A[gh - 1][h - 1] += 1
            if g:
                A[g - 1][h - 1] -= 1
        acts[g] = A
    return GModule(G, FgAbGroup(n - 1), acts)


# ---------------------------------------------------------------------------
# coinvariants and Tate H^-1


@dataclass(frozen=True)
class Coinvariants:
    """``M_H`` with its torsion part.

    ``group`` is presented on the ambient coordinates of the base, so
    ``projection`` is the identity matrix.  ``torsion`` uses the torsion
    coordinates of ``group`` as its own ambient coordinates.
    """

    group: FgAbGroup
    projection: Hom
    torsion: FgAbGroup
    torsion_embedding: Hom

    def torsion_class(self, vec: Sequence[int]) -> GroupElement:
        """Torsion class of an ambient vector; raises when the class is not torsion."""
        c = self.group.canonical_of(vec)
        t = len(self.group.invariants)
        if any(c[t:]):
            raise ModuleError("vector does not define a torsion class")
        return self.torsion.from_ambient(c[:t])

    def ambient_of(self, x: GroupElement) -> list[int]:
        return mat_vec(self.torsion_embedding.matrix, self.torsion.to_ambient(x))


def coinvariants_from_matrices(base: FgAbGroup, gen_mats: Sequence[Sequence[Sequence[int]]]) -> Coinvariants:
    n = base.rank
    rels = list(base.relations)
    for A in gen_mats:
        for j in range(n):
            col = [A[i][j] - (i == j) for i in range(n)]
            if any(col):
                rels.append(col)
    C = FgAbGroup(n, rels)
    proj = Hom(base, C, identity(n), check=False)
    T = FgAbGroup(len(C.invariants), [[d if i == j else 0 for i in range(len(C.invariants))]
                                      for j, d in enumerate(C.invariants)])
    emb_cols = [C.to_ambient([int(i == j) for i in range(C.ngens)]) for j in range(len(C.invariants))]
    emb = Hom(T, C, columns_to_matrix(emb_cols, n) if emb_cols else [[] for _ in range(n)], check=False)
    return Coinvariants(C, proj, T, emb)


def coinvariants(M: GModule, H: Subgroup | None = None) -> Coinvariants:
    """``M_H`` (default ``H`` = the whole group); cached so classes stay comparable."""
    H = H if H is not None else M.group.whole()
    key = ("co", H.members)
    if key not in M._cache:
        M._cache[key] = coinvariants_from_matrices(M.base, [M.action[g] for g in H.gens])
    return M._cache[key]


@dataclass(frozen=True)
class TateMinusOne:
    group: FgAbGroup
    coinvariants: Coinvariants
    embedding: Hom  # into coinvariants.torsion

    def image_of(self, x: GroupElement) -> GroupElement:
        return self.embedding(x)

    def preimage(self, y: GroupElement) -> GroupElement | None:
        return self.embedding.lift(y)


def tate_from_matrices(base: FgAbGroup, gen_mats, all_mats) -> TateMinusOne:
    """Kernel of the norm ``sum(all_mats)`` on the coinvariants of ``gen_mats``."""
    co = coinvariants_from_matrices(base, gen_mats)
    n = base.rank
    N = [[0] * n for _ in range(n)]
    for A in all_mats:
        N = _mat_add(N, A)
    norm = Hom(co.group, base, N)
    parts = hom_parts(norm)
    K, emb = parts.kernel, parts.kernel_embedding
    cols = []
    for j in range(K.rank):
        v = [row[j] for row in emb.matrix]
        cols.append(co.torsion.to_ambient(co.torsion_class(v)))
    t = co.torsion.rank
    mat = columns_to_matrix(cols, t) if cols else [[] for _ in range(t)]
    return TateMinusOne(K, co, Hom(K, co.torsion, mat))


def tate_h_minus1(M: GModule, H: Subgroup | None = None) -> TateMinusOne:
    H = H if H is not None else M.group.whole()
    key = ("tate", H.members)
    if key not in M._cache:
        M._cache[key] = tate_from_matrices(M.base, [M.action[g] for g in H.gens],
                                           [M.action[g] for g in H.members])
    return M._cache[key]


# ---------------------------------------------------------------------------
# transfer


def transfer_matrix(M: GModule, small: Subgroup, big: Subgroup | None = None,
                    section: Sequence[int] | None = None) -> list[list[int]]:
    """``sum_s A_s`` over a section ``s`` of the right cosets of ``small`` in ``big``."""
    cosets = small.right_cosets(big)
    if section is None:
        section = [c[0] for c in cosets]
    else:
        if len(section) != len(cosets):
            raise ModuleError("a section needs one representative per right coset")
        for c in cosets:
            if sum(1 for s in section if s in c) != 1:
                raise ModuleError("section does not meet every right coset exactly once")
    n = M.rank
    T = [[0] * n for _ in range(n)]
    for s in section:
        T = _mat_add(T, M.action[s])
    return T


def transfer(M: GModule, small: Subgroup, alpha: GroupElement, big: Subgroup | None = None,
             section: Sequence[int] | None = None, source: Coinvariants | None = None,
             target: Coinvariants | None = None) -> GroupElement:
    """Transfer ``M_{big,Tors} -> M_{small,Tors}``."""
    big = big if big is not None else M.group.whole()
    if not small <= big:
        raise ModuleError("transfer needs a subgroup of the larger group")
    src = source if source is not None else coinvariants(M, big)
    dst = target if target is not None else coinvariants(M, small)
    if alpha.parent is not src.torsion:
        raise ModuleError("class is not in the torsion coinvariants of the larger group")
    v = src.ambient_of(alpha)
    return dst.torsion_class(mat_vec(transfer_matrix(M, small, big, section), v))


def corestriction_projection(M: GModule, small: Subgroup, big: Subgroup | None,
                             x: GroupElement, source: Coinvariants | None = None,
                             target: Coinvariants | None = None) -> GroupElement:
    """Natural projection ``M_{small,Tors} -> M_{big,Tors}``."""
    big = big if big is not None else M.group.whole()
    src = source if source is not None else coinvariants(M, small)
    dst = target if target is not None else coinvariants(M, big)
    return dst.torsion_class(src.ambient_of(x))


# ---------------------------------------------------------------------------
# induction and duality


def induced_module(G: FinGroup, H: Subgroup, N: GModule) -> GModule:
    """``Z[G] (x)_{Z[H]} N`` with blocks indexed by the left cosets ``g_i H``.

    ``N`` is a module over ``H.as_group``.  If ``g g_i = g_j h`` the action of
    ``g`` puts ``A_h`` into block ``(j, i)``.
    """
    if H.parent is not G:
        raise ModuleError("subgroup belongs to a different group")
    if N.group.order != H.order:
        raise ModuleError("module group does not match the subgroup")
    reps = [c[0] for c in H.left_cosets()]
    k, r = len(reps), N.rank
    where = {}
    for i, g in enumerate(reps):
        for h in H.members:
            where[G.mul(g, h)] = i
    rels = []
    for i in range(k):
        for c in N.base.relations:
            rels.append([0] * (i * r) + list(c) + [0] * ((k - i - 1) * r))
    acts = {}
    for g in G.generators:
        A = [[0] * (k * r) for _ in range(k * r)]
        for i, gi in enumerate(reps):
            x = G.mul(g, gi)
            j = where[x]
            h = G.mul(G.inv(reps[j]), x)
            B = N.action[H.to_local(h)]
            for a in range(r):
                for b in range(r):
                    A[j * r + a][i * r + b] = B[a][b]
        acts[g] = A
    return GModule(G, FgAbGroup(k * r, rels), acts)


def pontryagin_dual(X: GModule) -> GModule:
    """``Hom(base, Q/Z)`` with ``(g f)(x) = f(g^-1 x)``, in the dual of the canonical basis."""
    B = X.base
    if not B.is_finite():
        raise ModuleError("Pontryagin duality needs a finite base")
    d = B.invariants
    t = len(d)
    base = FgAbGroup(t, [[d[j] if i == j else 0 for i in range(t)] for j in range(t)])
    acts = {}
    G = X.group
    for g in G.generators:
        c = X.canonical_action(G.inv(g))
        acts[g] = [[d[j] * c[i][j] // d[i] for i in range(t)] for j in range(t)]
    return GModule(G, base, acts)


@dataclass(frozen=True)
class DualPairing:
    left: FgAbGroup   # A^dual / B^dual
    right: FgAbGroup  # B / A
    table: list[list[Fraction]]
    perfect: bool

    def value(self, x: GroupElement, y: GroupElement) -> Fraction:
        return self.table[_index(x)][_index(y)]


def _index(x: GroupElement) -> int:
    k = 0
    for c, d in zip(reversed(x.coords), reversed(x.parent.invariants)):
        k = k * d + c
    return k


def dual_pairing(inclusion: Sequence[Sequence[int]]) -> DualPairing:
    """Pairing between ``A^dual/B^dual`` and ``B/A`` for a lattice inclusion ``A -> B``.

    Columns of ``inclusion`` are the basis of ``A`` written in a basis of ``B``.
    """
    P = [list(map(int, r)) for r in inclusion]
    n = len(P)
    if any(len(r) != n for r in P):
        raise ModuleError("not finite index: the inclusion matrix is not square")
    if smith(P, n, n).rank < n:
        raise ModuleError("not finite index: the inclusion is degenerate")
    Pinv = rational_inverse(P)
    right = FgAbGroup(n, [[P[i][j] for i in range(n)] for j in range(n)])
    left = FgAbGroup(n, [[P[j][i] for i in range(n)] for j in range(n)])
    L = list(left.elements())
    R = list(right.elements())
    # order the lists so that _index agrees with list position
    L.sort(key=_index)
    R.sort(key=_index)
    table = []
    for x in L:
        phi = left.to_ambient(x)
        row_vec = [sum(Fraction(phi[i]) * Pinv[i][j] for i in range(n)) for j in range(n)]
        row = []
        for y in R:
            b = right.to_ambient(y)
            v = sum((row_vec[j] * b[j] for j in range(n)), Fraction(0))
            row.append(v - (v.numerator // v.denominator))
        table.append(row)
    perfect = (all(any(v for v in row) for row in table[1:])
               and all(any(table[i][j] for i in range(len(L))) for j in range(1, len(R))))
    return DualPairing(left, right, table, perfect)


# ---------------------------------------------------------------------------
# free-kernel resolutions


@dataclass(frozen=True)
class FreeKernelResolution:
    """``0 -> Z[G]^s -> M0 -> M -> 0`` with ``M0`` torsion-free."""

    free_rank: int
    M_minus1: GModule
    M0: GModule
    kappa: Hom
    lam: Hom
    rank_M0: int
    rank_bound: int

    @property
    def bound_achieved(self) -> bool:
        return self.rank_M0 <= self.rank_bound


def free_kernel_resolution(M: GModule) -> FreeKernelResolution:
    """Fibre product of ``M`` and ``Q[G]^s`` over ``(Q/Z)[G]^s``.

    With ``f`` the torsion canonical coordinates of ``M`` (scaled into
    ``Q/Z``) and ``phi(x) = sum_h f(h^-1 x) h``, the module
    ``M0 = {(x, y) : y = phi(x) mod Z[G]^s}`` is torsion-free, projects onto
    ``M``, and the kernel of the projection is ``Z[G]^s``.
    """
    G, B = M.group, M.base
    n, g = B.rank, G.order
    d = B.invariants
    s = len(d)
    D = lcm(*d) if d else 1
    off = B._offset
    U = B._U
    # Phi: Z^n -> Z^{s g}, row (i, h) is (D/d_i) * u_i(A_{h^-1} x)
    Phi = []
    for i in range(s):
        for h in range(g):
            u = U[off + i]
            Ah = M.action[G.inv(h)]
            row = [(D // d[i]) * sum(u[k] * Ah[k][j] for k in range(n)) for j in range(n)]
            Phi.append(row)
    m = s * g
    rels = []
    for c in B.relations:
        y = mat_vec(Phi, c)
        if any(v % D for v in y):  # pragma: no cover - relations have zero torsion coordinates
            raise AssertionError("relation with nonzero torsion coordinate")
        rels.append(list(c) + [-v // D for v in y])
    base0 = FgAbGroup(n + m, rels)
    acts = {}
    for x in G.generators:
        A = M.action[x]
        P = [[0] * m for _ in range(m)]
        for i in range(s):
            for h in range(g):
                P[i * g + G.mul(x, h)][i * g + h] = 1
        PPhi = matmul(P, Phi, inner=m, cols=n) if m else []
        PhiA = matmul(Phi, A, inner=n, cols=n) if m else []
        low = [[(a - b) // D for a, b in zip(r1, r2)] for r1, r2 in zip(PPhi, PhiA)]
        if any((a - b) % D for r1, r2 in zip(PPhi, PhiA) for a, b in zip(r1, r2)):  # pragma: no cover
            raise AssertionError("torsion coordinate map is not equivariant modulo D")
        top = [list(A[i]) + [0] * m for i in range(n)]
        bottom = [low[i] + P[i] for i in range(m)]
        acts[x] = top + bottom
    M0 = GModule(G, base0, acts)
    Mm1 = regular_module(G, s) if s else GModule(G, FgAbGroup(0), {x: [] for x in G.generators})
    kappa = Hom(Mm1.base, base0, [[0] * m for _ in range(n)] + identity(m))
    lam = Hom(base0, B, [[int(i == j) for j in range(n + m)] for i in range(n)])
    return FreeKernelResolution(s, Mm1, M0, kappa, lam, base0.free_rank,
                                G.order * min_generators(B))


@dataclass(frozen=True)
class ResolutionReport:
    kappa_injective: bool
    lambda_surjective: bool
    exact: bool
    torsion_free: bool
    equivariant: bool

    @property
    def ok(self) -> bool:
        return (self.kappa_injective and self.lambda_surjective and self.exact
                and self.torsion_free and self.equivariant)


def verify_resolution(M: GModule, res: FreeKernelResolution) -> ResolutionReport:
    kp, lp = hom_parts(res.kappa), hom_parts(res.lam)
    inj = kp.kernel.is_trivial()
    surj = lp.cokernel.is_trivial()
    composite_zero = res.lam.compose(res.kappa).is_zero()
    in_image = True
    for j in range(lp.kernel.rank):
        v = [row[j] for row in lp.kernel_embedding.matrix]
        if res.kappa.lift(res.M0.base.from_ambient(v)) is None:
            in_image = False
            break
    free = not res.M0.base.invariants and not res.M_minus1.base.invariants
    equi = True
    G = M.group
    for x in G.generators:
        # kappa and lambda commute with the action on the bases
        ka = matmul(res.kappa.matrix, res.M_minus1.action[x]) if res.free_rank else None
        if ka is not None:
            ak = matmul(res.M0.action[x], res.kappa.matrix)
            if not _same_in(res.M0.base, ka, ak):
                equi = False
        la = matmul(res.lam.matrix, res.M0.action[x])
        al = matmul(M.action[x], res.lam.matrix)
        if not _same_in(M.base, la, al):
            equi = False
    return ResolutionReport(inj, surj, composite_zero and in_image, free, equi)


def _same_in(B: FgAbGroup, X, Y) -> bool:
    cols = len(X[0]) if X else 0
    return all(B.in_relations([X[i][j] - Y[i][j] for i in range(B.rank)]) for j in range(cols))


def random_module(rng, G: FinGroup, max_rank: int = 4, max_factor: int = 12, attempts: int = 50) -> GModule:
    """A random module over ``G``: a permutation-type lattice with a torsion quotient.

    Built as a direct sum of summands ``Z[G/H]`` (coset permutation modules)
    and ``Z[G/H] / k`` so the action is valid by construction.
    """
    from .groups import all_subgroups

    subs = all_subgroups(G)
    for _ in range(attempts):
        parts = []
        rank = 0
        while True:
            H = rng.choice(subs)
            k = G.order // H.order
            if rank + k > max_rank:
                break
            kind = rng.random()
            if kind < 0.4:
                mod = 0
            else:
                mod = rng.randint(2, max_factor)
            parts.append((H, mod, rng.random() < 0.3))
            rank += k
            if rng.random() < 0.35:
                break
        if not parts:
            continue
        mods = [_coset_module(G, H, mod, sign) for H, mod, sign in parts]
        return direct_sum_modules(mods)
    return trivial_module(G, FgAbGroup(1))


def _coset_module(G: FinGroup, H: Subgroup, mod: int, sign: bool) -> GModule:
    """``Z[G/H]`` (optionally twisted by a sign character trivial on ``H``) modulo ``mod``."""
    cosets = H.left_cosets()
    k = len(cosets)
    where = {}
    for i, c in enumerate(cosets):
        for x in c:
            where[x] = i
    chi = _sign_character(G, H) if sign else None
    acts = {}
    for g in G.generators:
        A = [[0] * k for _ in range(k)]
        for i, c in enumerate(cosets):
            j = where[G.mul(g, c[0])]
            val = 1
            if chi is not None:
                # twist by the monomial cocycle chi(g_j^-1 g g_i), which lies in H
                h = G.mul(G.inv(cosets[j][0]), G.mul(g, c[0]))
                val = chi[h]
            A[j][i] = val
        acts[g] = A
    rels = [[mod if i == j else 0 for i in range(k)] for j in range(k)] if mod else []
    return GModule(G, FgAbGroup(k, rels), acts)


def _sign_character(G: FinGroup, H: Subgroup) -> dict[int, int] | None:
    """A character ``H -> {+1, -1}`` with kernel of index 2 in ``H`` if one exists, else trivial."""
    from .groups import all_subgroups

    Hg = H.as_group
    for K in all_subgroups(Hg):
        if K.order * 2 == Hg.order and K.is_normal_in():
            return {H.from_local(i): (1 if i in K.members else -1) for i in range(Hg.order)}
    return {h: 1 for h in H.members}

