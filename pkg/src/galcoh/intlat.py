"""Exact integer matrices and finitely generated abelian groups.

Matrices are plain lists of rows of Python ints, so entries never overflow.
A finitely generated abelian group is presented as ``Z^n / L`` where ``L`` is
spanned by a list of relation columns; its canonical form comes from the
Smith normal form of the relation matrix.

>>> G = FgAbGroup(2, [(2, 0), (0, 4)])
>>> G.invariants, G.free_rank
((2, 4), 0)
>>> G.from_ambient((1, 2)).order()
2
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd, lcm, prod
from typing import Iterable, Iterator, Sequence

INFINITE = "infinite"


# ---------------------------------------------------------------------------
# plain matrix helpers


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def transpose(A: Sequence[Sequence[int]], rows: int | None = None, cols: int | None = None) -> list[list[int]]:
    m = len(A) if rows is None else rows
    n = (len(A[0]) if A else 0) if cols is None else cols
    return [[A[i][j] for i in range(m)] for j in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None,
           cols: int | None = None) -> list[list[int]]:
    k = len(B) if inner is None else inner
    n = (len(B[0]) if B else 0) if cols is None else cols
    Bt = [[B[r][c] for r in range(k)] for c in range(n)]
    return [[sum(a * b for a, b in zip(row, col) if a) for col in Bt] for row in A]


def mat_vec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(row, v) if a) for row in A]


def columns_to_matrix(cols: Sequence[Sequence[int]], rows: int) -> list[list[int]]:
    """Stack column vectors into a ``rows x len(cols)`` matrix."""
    return [[c[i] for c in cols] for i in range(rows)]


def det(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with ``D`` diagonal; ``Uinv`` is the inverse of ``U``."""

    U: list[list[int]]
    Uinv: list[list[int]]
    V: list[list[int]]
    diagonal: tuple[int, ...]
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def D(self) -> list[list[int]]:
        out = zeros(self.rows, self.cols)
        for i, d in enumerate(self.diagonal):
            out[i][i] = d
        return out


def _nearest_quotient(a: int, p: int) -> int:
    # divmod leaves r with the sign of p, so one step towards p is always closer
    q, r = divmod(a, p)
    if 2 * abs(r) > abs(p):
        q += 1
    return q


def smith(A: Sequence[Sequence[int]], rows: int | None = None, cols: int | None = None) -> SmithForm:
    m = len(A) if rows is None else rows
    n = (len(A[0]) if m else 0) if cols is None else cols
    D = [list(r) for r in A] if m else []
    U, Ui, V = identity(m), identity(m), identity(n)

    def swap_rows(a: int, b: int) -> None:
        if a == b:
            return
        D[a], D[b] = D[b], D[a]
        U[a], U[b] = U[b], U[a]
        for row in Ui:
            row[a], row[b] = row[b], row[a]

    def swap_cols(a: int, b: int) -> None:
        if a == b:
            return
        for row in D:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        rs, rd = D[src], D[dst]
        D[dst] = [x + q * y for x, y in zip(rd, rs)]
        us = U[src]
        U[dst] = [x + q * y for x, y in zip(U[dst], us)]
        for row in Ui:
            if row[dst]:
                row[src] -= q * row[dst]

    def add_col(dst: int, src: int, q: int) -> None:
        # col_dst += q * col_src
        for row in D:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]

    diag: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -_nearest_quotient(D[i][t], p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -_nearest_quotient(D[t][j], p))
                    if D[t][j]:
                        dirty = True
            if dirty:
                cand = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
                cand += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
        diag.append(D[t][t])
        t += 1
    diag.extend([0] * (min(m, n) - len(diag)))
    return SmithForm(U, Ui, V, tuple(diag), m, n)


def snf_decompose(A: Sequence[Sequence[int]], rows: int | None = None, cols: int | None = None):
    """Return ``(U, D, V)`` with ``U A V = D`` and ``U``, ``V`` unimodular."""
    S = smith(A, rows, cols)
    return S.U, S.D(), S.V


def invariant_factors(A: Sequence[Sequence[int]], rows: int | None = None, cols: int | None = None) -> tuple[int, ...]:
    return smith(A, rows, cols).diagonal


def integer_kernel(A: Sequence[Sequence[int]], rows: int, cols: int) -> list[list[int]]:
    """A Z-basis (as column vectors) of ``{x in Z^cols : A x = 0}``."""
    S = smith(A, rows, cols)
    r = S.rank
    return [[S.V[i][j] for i in range(cols)] for j in range(r, cols)]


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int], rows: int, cols: int) -> list[int] | None:
    """Some integer ``x`` with ``A x = b``, or ``None`` when no solution exists."""
    S = smith(A, rows, cols)
    return _solve_with(S, b)


def _solve_with(S: SmithForm, b: Sequence[int]) -> list[int] | None:
    c = mat_vec(S.U, b)
    y = [0] * S.cols
    for i, ci in enumerate(c):
        d = S.diagonal[i] if i < len(S.diagonal) else 0
        if d == 0:
            if ci:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return mat_vec(S.V, y)


def lattice_basis(cols: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """A Z-basis of the lattice spanned by the given column vectors."""
    if not cols:
        return []
    S = smith(columns_to_matrix(cols, dim), dim, len(cols))
    out = []
    for i, d in enumerate(S.diagonal):
        if d:
            out.append([d * S.Uinv[k][i] for k in range(dim)])
    return out


def rational_inverse(A: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(A)
    S = smith(A, n, n)
    if S.rank < n:
        raise ValueError("matrix is singular")
    # A = Uinv D Vinv, so A^-1 = V D^-1 U
    return [[sum((Fraction(S.V[i][k], S.diagonal[k]) * S.U[k][j] for k in range(n)), Fraction(0))
             for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# finitely generated abelian groups


class FgAbGroup:
    """``Z^rank`` modulo the lattice spanned by ``relations`` (a list of columns).

    Canonical coordinates list the torsion coordinates first (invariant
    factors ``d_1 | d_2 | ...``, each ``>= 2``) followed by ``free_rank``
    free coordinates.
    """

    __slots__ = ("rank", "relations", "invariants", "free_rank", "_U", "_Uinv", "_offset", "_mods",
                 "_smith", "__weakref__")

    def __init__(self, rank: int, relations: Iterable[Sequence[int]] = ()):
        rels = tuple(tuple(int(x) for x in c) for c in relations)
        for c in rels:
            if len(c) != rank:
                raise ValueError(f"relation column of length {len(c)} for ambient rank {rank}")
        self.rank = rank
        self.relations = rels
        S = smith(columns_to_matrix(rels, rank), rank, len(rels))
        diag = list(S.diagonal) + [0] * (rank - len(S.diagonal))
        diag = diag[:rank]
        ones = sum(1 for d in diag if d == 1)
        self._offset = ones
        self._mods = tuple(diag[ones:])
        self._U = S.U
        self._Uinv = S.Uinv
        self._smith = S
        self.invariants = tuple(d for d in self._mods if d)
        self.free_rank = sum(1 for d in self._mods if d == 0)

    # -- structure ---------------------------------------------------------

    @property
    def ngens(self) -> int:
        """Number of canonical coordinates (= minimal number of generators)."""
        return len(self._mods)

    @property
    def moduli(self) -> tuple[int, ...]:
        return self._mods

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | str:
        return prod(self.invariants) if self.free_rank == 0 else INFINITE

    def exponent(self) -> int | str:
        if self.free_rank:
            return INFINITE
        return reduce(lcm, self.invariants, 1)

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def isomorphic(self, other: FgAbGroup) -> bool:
        return self.invariants == other.invariants and self.free_rank == other.free_rank

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariants] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"FgAbGroup({self.describe()})"

    # -- elements ----------------------------------------------------------

    def reduce_coords(self, coords: Sequence[int]) -> tuple[int, ...]:
        return tuple(c % d if d else c for c, d in zip(coords, self._mods))

    def element(self, coords: Sequence[int]) -> GroupElement:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} canonical coordinates, got {len(coords)}")
        return GroupElement(self, self.reduce_coords(coords))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.ngens)

    def canonical_of(self, vec: Sequence[int]) -> tuple[int, ...]:
        off = self._offset
        c = []
        for i, d in enumerate(self._mods):
            row = self._U[off + i]
            x = sum(a * b for a, b in zip(row, vec) if a)
            c.append(x % d if d else x)
        return tuple(c)

    def from_ambient(self, vec: Sequence[int]) -> GroupElement:
        if len(vec) != self.rank:
            raise ValueError(f"expected an ambient vector of length {self.rank}")
        return GroupElement(self, self.canonical_of(vec))

    def to_ambient(self, x: GroupElement | Sequence[int]) -> list[int]:
        coords = x.coords if isinstance(x, GroupElement) else x
        off = self._offset
        return [sum(self._Uinv[r][off + i] * c for i, c in enumerate(coords) if c) for r in range(self.rank)]

    def generators(self) -> list[GroupElement]:
        """Canonical generators, one per canonical coordinate."""
        n = self.ngens
        return [GroupElement(self, tuple(int(i == j) for j in range(n))) for i in range(n)]

    def elements(self) -> Iterator[GroupElement]:
        if self.free_rank:
            raise ValueError("cannot enumerate an infinite group")
        for coords in product(*(range(d) for d in self.invariants)):
            yield GroupElement(self, tuple(coords))

    def in_relations(self, vec: Sequence[int]) -> bool:
        return not any(self.canonical_of(vec))

    # -- derived groups ----------------------------------------------------

    def torsion_subgroup(self) -> tuple[FgAbGroup, Hom]:
        """The torsion subgroup together with its inclusion."""
        t = len(self.invariants)
        T = FgAbGroup(t, [tuple(d if i == j else 0 for i in range(t)) for j, d in enumerate(self.invariants)])
        off = self._offset
        cols = [[self._Uinv[r][off + i] for r in range(self.rank)] for i in range(t)]
        return T, Hom(T, self, columns_to_matrix(cols, self.rank), check=False)

    def canonical_presentation(self) -> FgAbGroup:
        n = self.ngens
        rels = [tuple(d if i == j else 0 for i in range(n)) for j, d in enumerate(self._mods) if d]
        return FgAbGroup(n, rels)


def direct_sum(groups: Sequence[FgAbGroup]) -> FgAbGroup:
    n = sum(G.rank for G in groups)
    rels = []
    off = 0
    for G in groups:
        for c in G.relations:
            rels.append(tuple([0] * off + list(c) + [0] * (n - off - G.rank)))
        off += G.rank
    return FgAbGroup(n, rels)


def cyclic_group(d: int) -> FgAbGroup:
    return FgAbGroup(1, [(d,)]) if d else FgAbGroup(1)


@dataclass(frozen=True)
class GroupElement:
    parent: FgAbGroup
    coords: tuple[int, ...]

    def __add__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return GroupElement(self.parent, self.parent.reduce_coords([a + b for a, b in zip(self.coords, other.coords)]))

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return GroupElement(self.parent, self.parent.reduce_coords([a - b for a, b in zip(self.coords, other.coords)]))

    def __neg__(self) -> GroupElement:
        return GroupElement(self.parent, self.parent.reduce_coords([-a for a in self.coords]))

    def __mul__(self, k: int) -> GroupElement:
        return GroupElement(self.parent, self.parent.reduce_coords([k * a for a in self.coords]))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GroupElement) and self.parent is other.parent
                and self.coords == other.coords)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.coords))

    def _same(self, other: GroupElement) -> None:
        if self.parent is not other.parent:
            raise ValueError("elements belong to different groups")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int | str:
        return element_order(self)

    def __repr__(self) -> str:
        return f"GroupElement({self.coords} in {self.parent.describe()})"


def element_order(x: GroupElement) -> int | str:
    """Least ``n >= 1`` with ``n x = 0``, or ``"infinite"``."""
    n = 1
    for c, d in zip(x.coords, x.parent.moduli):
        if d == 0:
            if c:
                return INFINITE
        elif c:
            n = lcm(n, d // gcd(d, c))
    return n


# ---------------------------------------------------------------------------
# homomorphisms


class NotAHomomorphism(ValueError):
    pass


class Hom:
    """A homomorphism given by an integer matrix on ambient coordinates."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix: Sequence[Sequence[int]], check: bool = True):
        M = [list(map(int, r)) for r in matrix]
        if len(M) != target.rank or any(len(r) != source.rank for r in M):
            raise ValueError(f"matrix must be {target.rank} x {source.rank}")
        self.source, self.target, self.matrix = source, target, M
        if check:
            for c in source.relations:
                if not target.in_relations(mat_vec(M, c)):
                    raise NotAHomomorphism("not a homomorphism: a relation maps to a nonzero element")

    def apply_ambient(self, vec: Sequence[int]) -> list[int]:
        return mat_vec(self.matrix, vec)

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.parent is not self.source:
            raise ValueError("element is not in the source group")
        return self.target.from_ambient(mat_vec(self.matrix, self.source.to_ambient(x)))

    def compose(self, inner: Hom) -> Hom:
        """``self o inner``."""
        if inner.target is not self.source:
            raise ValueError("composition mismatch")
        M = matmul(self.matrix, inner.matrix, inner=self.source.rank, cols=inner.source.rank)
        return Hom(inner.source, self.target, M, check=False)

    def is_zero(self) -> bool:
        return all(self.target.in_relations([r[j] for r in self.matrix]) for j in range(self.source.rank))

    def images_of_generators(self) -> list[GroupElement]:
        return [self(g) for g in self.source.generators()]

    def lift(self, y: GroupElement) -> GroupElement | None:
        """Some preimage of ``y``, or ``None`` when ``y`` is not in the image."""
        if y.parent is not self.target:
            raise ValueError("element is not in the target group")
        T = self.target
        A = [row + [c[i] for c in T.relations] for i, row in enumerate(self.matrix)]
        sol = solve_integer(A, T.to_ambient(y), T.rank, self.source.rank + len(T.relations))
        if sol is None:
            return None
        return self.source.from_ambient(sol[: self.source.rank])


def identity_hom(G: FgAbGroup) -> Hom:
    return Hom(G, G, identity(G.rank), check=False)


@dataclass(frozen=True)
class HomParts:
    kernel: FgAbGroup
    kernel_embedding: Hom
    image: FgAbGroup
    cokernel: FgAbGroup
    cokernel_projection: Hom


def hom_parts(f: Hom) -> HomParts:
    """Kernel (with embedding), image and cokernel (with projection) of ``f``."""
    G, H = f.source, f.target
    n, r = G.rank, len(H.relations)
    # x in ker iff f(x) lies in the relation lattice of H
    A = [row + [-c[i] for c in H.relations] for i, row in enumerate(f.matrix)]
    null = integer_kernel(A, H.rank, n + r)
    gens = [v[:n] for v in null]
    basis = lattice_basis(gens, n)
    k = len(basis)
    B = columns_to_matrix(basis, n)
    rels = []
    if k:
        S = smith(B, n, k)
        for c in G.relations:
            sol = _solve_with(S, c)
            if sol is None:  # pragma: no cover - relations always lie in the kernel lattice
                raise AssertionError("relation outside kernel lattice")
            rels.append(sol)
    K = FgAbGroup(k, rels)
    emb = Hom(K, G, B if k else [[] for _ in range(n)], check=False)
    # image = G / ker, presented on the ambient generators of G
    image = FgAbGroup(n, list(basis) + list(G.relations))
    coker = FgAbGroup(H.rank, list(H.relations) + [[row[j] for row in f.matrix] for j in range(n)])
    proj = Hom(H, coker, identity(H.rank), check=False)
    return HomParts(K, emb, image, coker, proj)


def is_injective(f: Hom) -> bool:
    return hom_parts(f).kernel.is_trivial()


def is_surjective(f: Hom) -> bool:
    return hom_parts(f).cokernel.is_trivial()


def group_from_presentation(ambient_rank: int, relations: Iterable[Sequence[int]]) -> FgAbGroup:
    return FgAbGroup(ambient_rank, relations)


def min_generators(G: FgAbGroup) -> int:
    """Minimal number of generators: invariant factors other than 1 plus free rank."""
    return G.ngens


def hom_from_images(source: FgAbGroup, target: FgAbGroup, images: Sequence[GroupElement],
                    check: bool = True) -> Hom:
    """The homomorphism sending the ``j``-th ambient basis vector of ``source`` to ``images[j]``."""
    if len(images) != source.rank:
        raise ValueError("need one image per ambient generator")
    cols = [target.to_ambient(y) for y in images]
    M = columns_to_matrix(cols, target.rank) if cols else [[] for _ in range(target.rank)]
    return Hom(source, target, M, check=check)
