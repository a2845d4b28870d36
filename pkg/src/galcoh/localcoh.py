"""Cohomology over models of local fields.

A place is described by its decomposition subgroup ``D`` of the splitting
group.  At a finite place the local group is ``M_{D,Tors}``; at a real place
it is Tate ``H^-1`` of the order-two group acting through complex
conjugation ``sigma``; at a complex place it is trivial.

Extensions of the local field are modelled by a pair ``(Delta, m)``: the
part inside the splitting field corresponds to ``Delta <= D`` and ``m`` is
the degree of a part linearly disjoint from it.  Restriction is then ``m``
times the transfer from ``D`` to ``Delta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Mapping

from .groups import FinGroup, Subgroup, abelianization_invariants, all_subgroups
from .grpmod import Coinvariants, GModule, coinvariants, tate_from_matrices, transfer
from .intlat import FgAbGroup, GroupElement, Hom, element_order, identity

FINITE, REAL, COMPLEX = "finite", "real", "complex"
KINDS = (FINITE, REAL, COMPLEX)
QUADRATIC_TYPES = ("eps", "pi", "eps_pi")
MAX_DEGREE_BOUND = 64


class LocalError(ValueError):
    pass


@dataclass(frozen=True)
class PlaceSpec:
    """A place of the base field.

    ``decomposition`` is the decomposition subgroup for finite places, the
    group generated by ``sigma`` for real places and trivial for complex
    ones.  ``quadratic_types`` optionally says which index-two subgroup of
    the decomposition group cuts out each of the three quadratic extensions
    ``K(sqrt eps)``, ``K(sqrt pi)``, ``K(sqrt eps pi)``; ``None`` means that
    quadratic extension is not contained in the splitting field.
    """

    name: str
    kind: str
    decomposition: Subgroup
    sigma: int = 0
    residue_size: int | None = None
    quadratic_types: Mapping[str, Subgroup | None] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise LocalError(f"place {self.name}: unknown kind {self.kind!r}")
        G = self.decomposition.parent
        if self.kind == REAL:
            if G.mul(self.sigma, self.sigma) != 0:
                raise LocalError(f"place {self.name}: complex conjugation must have order dividing 2")
            if self.decomposition.members != G.generated([self.sigma]):
                raise LocalError(f"place {self.name}: real decomposition must be generated by sigma")
        if self.kind == COMPLEX and self.decomposition.order != 1:
            raise LocalError(f"place {self.name}: complex places have trivial decomposition")
        if self.residue_size is not None and self.residue_size < 2:
            raise LocalError(f"place {self.name}: residue size must be at least 2")
        if self.quadratic_types is not None:
            for t, H in self.quadratic_types.items():
                if t not in QUADRATIC_TYPES:
                    raise LocalError(f"place {self.name}: unknown quadratic type {t!r}")
                if H is not None and not (H <= self.decomposition and 2 * H.order == self.decomposition.order):
                    raise LocalError(f"place {self.name}: type {t} must map to an index-2 subgroup")

    @property
    def group(self) -> FinGroup:
        return self.decomposition.parent

    @classmethod
    def finite(cls, name: str, decomposition: Subgroup, residue_size: int | None = None,
               quadratic_types: Mapping[str, Subgroup | None] | None = None) -> PlaceSpec:
        return cls(name, FINITE, decomposition, 0, residue_size, quadratic_types)

    @classmethod
    def real(cls, name: str, G: FinGroup, sigma: int = 0) -> PlaceSpec:
        return cls(name, REAL, G.subgroup([sigma]), sigma)

    @classmethod
    def complex(cls, name: str, G: FinGroup) -> PlaceSpec:
        return cls(name, COMPLEX, G.trivial_subgroup())


@dataclass(frozen=True)
class LocalGroup:
    """``H^1`` at a place together with its map ``theta`` into ``M_{D,Tors}``."""

    place: PlaceSpec
    group: FgAbGroup
    coinvariants: Coinvariants
    theta: Hom

    def element(self, coords) -> GroupElement:
        return self.group.element(coords)


@dataclass(frozen=True)
class LocalClass:
    local: LocalGroup
    value: GroupElement

    @property
    def place(self) -> PlaceSpec:
        return self.local.place

    def is_neutral(self) -> bool:
        return self.value.is_zero()


def _check_place(M: GModule, place: PlaceSpec) -> None:
    if place.group is not M.group:
        raise LocalError(f"place {place.name}: decomposition is not a subgroup of the module's group")


def local_group(M: GModule, place: PlaceSpec) -> LocalGroup:
    _check_place(M, place)
    key = ("local", place.name, place.kind, place.decomposition.members, place.sigma)
    if key in M._cache:
        return M._cache[key]
    co = coinvariants(M, place.decomposition)
    if place.kind == FINITE:
        T = co.torsion
        lg = LocalGroup(place, T, co, Hom(T, T, identity(T.rank), check=False))
    elif place.kind == REAL:
        # the abstract order-two group acting through sigma, even if sigma acts trivially
        A = M.action[place.sigma]
        tate = tate_from_matrices(M.base, [A], [identity(M.rank), A])
        if tate.coinvariants.torsion.invariants != co.torsion.invariants:  # pragma: no cover
            raise AssertionError("coinvariants of sigma disagree")
        # re-target the embedding at the cached coinvariants object
        emb = Hom(tate.group, co.torsion, tate.embedding.matrix, check=False)
        lg = LocalGroup(place, tate.group, co, emb)
    else:
        T = FgAbGroup(0)
        lg = LocalGroup(place, T, co, Hom(T, co.torsion, [[] for _ in range(co.torsion.rank)], check=False))
    M._cache[key] = lg
    return lg


def h1_local(M: GModule, place: PlaceSpec) -> FgAbGroup:
    return local_group(M, place).group


def local_class(M: GModule, place: PlaceSpec, coords) -> LocalClass:
    lg = local_group(M, place)
    return LocalClass(lg, lg.group.element(coords))


def nabla(x: LocalClass, n: int) -> LocalClass:
    """The real power operation: ``x`` for odd ``n`` and neutral for even ``n``."""
    if x.place.kind != REAL:
        raise LocalError("nabla is only defined at real places")
    return x if n % 2 else LocalClass(x.local, x.local.group.zero())


def power_local(xi: LocalClass, d: int) -> LocalClass:
    if xi.place.kind == REAL:
        return nabla(xi, d)
    return LocalClass(xi.local, xi.value * d)


def period_local(xi: LocalClass) -> int:
    return element_order(xi.value)  # finite groups only, so always an int


# ---------------------------------------------------------------------------
# capacity and splitting-degree bounds


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def capacity(n: int, theta: int) -> int:
    """Largest divisor of ``theta`` dividing some power of ``n``."""
    if n < 1 or theta < 1:
        raise ValueError("capacity needs positive integers")
    out = 1
    for p in _prime_factors(n):
        while theta % p == 0:
            theta //= p
            out *= p
    return out


def floor_log2(x: int) -> int:
    return x.bit_length() - 1


@dataclass(frozen=True)
class LocalSplitBound:
    theta: int
    theta_ab: int
    bound_ab: int
    bound_pow: int


def split_degree_local(M: GModule, place: PlaceSpec, n: int) -> LocalSplitBound:
    _check_place(M, place)
    image = M.image_group(place.decomposition)
    theta = image.order
    theta_ab = 1
    for d in abelianization_invariants(image):
        theta_ab *= d
    return LocalSplitBound(theta, theta_ab, n * capacity(n, theta_ab), n ** (floor_log2(theta) + 1))


# ---------------------------------------------------------------------------
# restriction and index


@dataclass(frozen=True)
class ExtensionModelLocal:
    delta: Subgroup
    multiplier: int = 1

    def degree(self, decomposition: Subgroup) -> int:
        return decomposition.order // self.delta.order * self.multiplier


def restrict_local(M: GModule, xi: LocalClass, ext: ExtensionModelLocal) -> GroupElement:
    """``m * Transfer_{D/Delta}(xi)`` in ``M_{Delta,Tors}``."""
    place = xi.place
    if place.kind != FINITE:
        raise LocalError("restriction models are only defined at finite places")
    if ext.multiplier < 1:
        raise LocalError("the disjoint multiplier must be at least 1")
    if not ext.delta <= place.decomposition:
        raise LocalError("extension subgroup is not inside the decomposition group")
    src = xi.local.coinvariants
    dst = coinvariants(M, ext.delta)
    return transfer(M, ext.delta, xi.value, big=place.decomposition, source=src, target=dst) * ext.multiplier


@dataclass(frozen=True)
class SquareClassModel:
    """``K^x / K^x2`` for a local field with odd residue field: ``{1, eps, pi, eps pi}``."""

    q: int
    classes: tuple[str, ...] = ("1", "eps", "pi", "eps_pi")

    def multiply(self, a: str, b: str) -> str:
        bits = {"1": (0, 0), "eps": (1, 0), "pi": (0, 1), "eps_pi": (1, 1)}
        x = tuple((u + v) % 2 for u, v in zip(bits[a], bits[b]))
        return {v: k for k, v in bits.items()}[x]


def square_class_model(q: int) -> SquareClassModel:
    if q % 2 == 0:
        raise LocalError("wild case unsupported: the residue field size must be odd")
    if q < 3:
        raise LocalError("residue field size must be an odd prime power")
    return SquareClassModel(q)


def _types(place: PlaceSpec) -> dict[str, Subgroup | None]:
    qt = dict(place.quadratic_types or {})
    return {t: qt.get(t) for t in QUADRATIC_TYPES}


def validate_quadratic_types(place: PlaceSpec) -> dict[str, Subgroup | None]:
    """Check the quadratic-type map against the decomposition group.

    The mapped subgroups must be exactly the index-2 subgroups of ``D``; for
    three of them the product of two quadratic extensions is the third.
    """
    types = _types(place)
    mapped = [H for H in types.values() if H is not None]
    if len(mapped) not in (0, 1, 3):
        raise LocalError(f"place {place.name}: map 0, 1 or 3 quadratic types, not {len(mapped)}")
    D = place.decomposition
    index2 = {H.members for H in all_subgroups(D.as_group) if 2 * H.order == D.order}
    index2 = {frozenset(D.from_local(i) for i in m) for m in index2}
    if {H.members for H in mapped} != index2:
        raise LocalError(f"place {place.name}: quadratic types must cover exactly the index-2 subgroups "
                         "of the decomposition group")
    if len(mapped) == 3:
        a, b, c = mapped
        if len({a.members, b.members, c.members}) != 3 or not (a.members & b.members) <= c.members:
            raise LocalError(f"place {place.name}: the three quadratic types are inconsistent")
    return types


def quadratic_subextensions(place: PlaceSpec, ext: ExtensionModelLocal) -> list[str]:
    """Quadratic types that an even-degree tame model can contain."""
    types = validate_quadratic_types(place)
    if ext.degree(place.decomposition) % 2:
        return []
    out = []
    for t, H in types.items():
        if H is not None and ext.delta <= H:
            out.append(t)
        elif H is None and ext.multiplier % 2 == 0:
            out.append(t)
    return out


def realizable(place: PlaceSpec, ext: ExtensionModelLocal) -> bool:
    """Odd degree, or the model contains one of the three quadratic extensions."""
    if ext.degree(place.decomposition) % 2:
        return True
    return bool(quadratic_subextensions(place, ext))


def extension_models(place: PlaceSpec, degree_bound: int) -> list[ExtensionModelLocal]:
    D = place.decomposition
    out = []
    for Hloc in all_subgroups(D.as_group):
        H = Subgroup(D.parent, [D.from_local(i) for i in Hloc.members])
        idx = D.order // H.order
        for m in range(1, degree_bound // idx + 1):
            out.append(ExtensionModelLocal(H, m))
    out.sort(key=lambda e: (e.degree(D), sorted(e.delta.members), e.multiplier))
    return out


@dataclass(frozen=True)
class LocalIndexResult:
    lower_bound: int
    search_gcd: int | None
    splitting_degrees: tuple[int, ...]


def strict_lower_bound(M: GModule, xi: LocalClass) -> int:
    per = period_local(xi)
    if per % 2:
        return per
    types = validate_quadratic_types(xi.place)
    best = None
    for H in types.values():
        if H is None:
            res = xi.value * 2
        else:
            res = restrict_local(M, xi, ExtensionModelLocal(H, 1))
        v = 0
        o = element_order(res)
        while o % 2 == 0:
            o //= 2
            v += 1
        best = v if best is None else min(best, v)
    return lcm(per, 2 ** (1 + best))


def local_index(M: GModule, xi: LocalClass, degree_bound: int, strict_quadratic: bool = False) -> LocalIndexResult:
    """Divisibility lower bound for the index and the gcd of splitting degrees found."""
    place = xi.place
    if place.kind != FINITE:
        raise LocalError("local index search needs a finite place")
    if degree_bound > MAX_DEGREE_BOUND:
        raise LocalError(f"degree bound {degree_bound} exceeds {MAX_DEGREE_BOUND}")
    if strict_quadratic:
        if place.residue_size is None:
            raise LocalError(f"place {place.name}: strict mode needs a residue field size")
        square_class_model(place.residue_size)
        lower = strict_lower_bound(M, xi)
    else:
        lower = period_local(xi)
    degrees = []
    for ext in extension_models(place, degree_bound):
        if strict_quadratic and not realizable(place, ext):
            continue
        if restrict_local(M, xi, ext).is_zero():
            degrees.append(ext.degree(place.decomposition))
    g = 0
    for d in degrees:
        g = gcd(g, d)
    return LocalIndexResult(lower, g or None, tuple(sorted(set(degrees))))
