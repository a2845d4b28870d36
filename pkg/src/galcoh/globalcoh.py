"""Global-field models: the fibre product of abelianized and archimedean data.

The set of places is truncated to the named places plus a reservoir of
unramified places, one batch per conjugacy class of cyclic subgroups.  Each
place ``v`` contributes the orbit ``Gamma / D_v`` of points above it; ``S``
is the union of those orbits.  Abelianized classes live in
``(M[S]_0)_{Gamma,Tors}`` where ``M[S]_0`` is the kernel of the total-sum map
``M[S] -> M``.

A global class is a pair (abelianized part, tuple of classes at the real
places) whose images in ``M_{<sigma_v>,Tors}`` agree place by place.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import lcm
from typing import Mapping, Sequence

from .groups import FinGroup, Subgroup, all_subgroups, cyclic_subgroup_representatives, is_sylow_cyclic
from .grpmod import GModule, coinvariants, corestriction_projection
from .intlat import (
    FgAbGroup,
    GroupElement,
    Hom,
    _solve_with,
    columns_to_matrix,
    direct_sum,
    element_order,
    hom_from_images,
    hom_parts,
    lattice_basis,
    min_generators,
    smith,
)
from .localcoh import (
    COMPLEX,
    FINITE,
    REAL,
    ExtensionModelLocal,
    LocalClass,
    LocalError,
    PlaceSpec,
    capacity,
    floor_log2,
    local_group,
    realizable,
    strict_lower_bound,
    validate_quadratic_types,
)

DEFAULT_MAX_ORBITS = 64
DEFAULT_GLUE_RETRIES = 3


class GlobalError(ValueError):
    pass


class IncompatiblePair(GlobalError):
    pass


class ModelTooSmall(GlobalError):
    pass


def max_orbits() -> int:
    raw = os.environ.get("GALCOH_MAX_ORBITS")
    if raw is None:
        return DEFAULT_MAX_ORBITS
    try:
        value = int(raw)
    except ValueError:
        raise GlobalError(f"GALCOH_MAX_ORBITS must be an integer, got {raw!r}") from None
    if value < 1:
        raise GlobalError("GALCOH_MAX_ORBITS must be positive")
    return value


@dataclass(frozen=True)
class AbstractFiber:
    """A finite pointed set standing in for ``H^1(R, G)`` at one real place.

    ``theta`` sends each label to canonical coordinates in ``M_{<sigma>,Tors}``;
    images must be killed by 2 so that the parity power rule stays compatible.
    """

    labels: tuple[str, ...]
    neutral: str
    theta: Mapping[str, tuple[int, ...]]


@dataclass(frozen=True)
class PlaceModel:
    group: FinGroup
    named: tuple[PlaceSpec, ...]
    reservoir: int = 0
    fibers: Mapping[str, AbstractFiber] = field(default_factory=dict)

    def __post_init__(self) -> None:
        names = [p.name for p in self.named]
        if len(set(names)) != len(names):
            raise GlobalError("place names must be distinct")
        if self.reservoir < 0:
            raise GlobalError("reservoir depth must be non-negative")
        for p in self.named:
            if p.group is not self.group:
                raise GlobalError(f"place {p.name}: decomposition is not a subgroup of the model group")
        for name in self.fibers:
            if name not in names or self.place(name).kind != REAL:
                raise GlobalError(f"abstract fibre given for {name!r}, which is not a real place")

    def place(self, name: str) -> PlaceSpec:
        for p in self.places():
            if p.name == name:
                return p
        raise GlobalError(f"unknown place {name!r}")

    def reservoir_places(self) -> list[PlaceSpec]:
        out = []
        for ci, C in enumerate(cyclic_subgroup_representatives(self.group)):
            for k in range(1, self.reservoir + 1):
                out.append(PlaceSpec.finite(f"res{ci}.{k}", C))
        return out

    def places(self) -> list[PlaceSpec]:
        return list(self.named) + self.reservoir_places()

    def with_reservoir(self, r: int) -> PlaceModel:
        return PlaceModel(self.group, self.named, r, self.fibers)

    def real_places(self) -> list[PlaceSpec]:
        return [p for p in self.named if p.kind == REAL]


# ---------------------------------------------------------------------------
# the sum-zero lattice and its coinvariants


@dataclass(frozen=True)
class Orbit:
    name: str
    kind: str
    origin: PlaceSpec
    rep: int  # index of the representative point
    stabilizer: Subgroup
    points: tuple[int, ...]
    coset_reps: tuple[int, ...]  # h with h . rep running over the orbit
    sigma: int = 0


class SumZeroLattice:
    """``M[S]_0`` for a fixed point set, with coordinates along an explicit basis."""

    def __init__(self, M: GModule, places: Sequence[PlaceSpec]):
        self.M = M
        G = M.group
        self.places = list(places)
        pts: list[tuple[int, int]] = []
        self.cosets: list[list[list[int]]] = []
        where: dict[tuple[int, int], int] = {}
        for vi, p in enumerate(self.places):
            cos = p.decomposition.left_cosets()
            self.cosets.append(cos)
            for ci, c in enumerate(cos):
                for g in c:
                    where[(vi, g)] = len(pts)
                pts.append((vi, ci))
        self.points = pts
        self.N = len(pts)
        # point_action[g][p] = g . p
        self.point_action = [[where[(vi, G.mul(g, self.cosets[vi][ci][0]))] for (vi, ci) in pts]
                             for g in range(G.order)]
        n = M.rank
        self.n = n
        self.Rb = lattice_basis([list(c) for c in M.base.relations], n)
        self._rb_smith = smith(columns_to_matrix(self.Rb, n), n, len(self.Rb)) if self.Rb else None
        self.dim = n * (self.N - 1) + len(self.Rb) if self.N else 0

    def act(self, g: int, X: Sequence[int]) -> list[int]:
        n = self.n
        out = [0] * (n * self.N)
        A = self.M.action[g]
        for p in range(self.N):
            x = X[p * n:(p + 1) * n]
            if any(x):
                q = self.point_action[g][p]
                out[q * n:(q + 1) * n] = [sum(a * b for a, b in zip(row, x)) for row in A]
        return out

    def to_vector(self, kc: Sequence[int]) -> list[int]:
        n, N = self.n, self.N
        if N == 0:
            return []
        X = [0] * (n * N)
        s = [0] * n
        for p in range(1, N):
            blk = kc[(p - 1) * n:p * n]
            X[p * n:(p + 1) * n] = list(blk)
            s = [a + b for a, b in zip(s, blk)]
        t = kc[n * (N - 1):]
        r = [sum(self.Rb[l][j] * t[l] for l in range(len(self.Rb))) for j in range(n)]
        X[:n] = [b - a for a, b in zip(s, r)]
        return X

    def coords(self, X: Sequence[int]) -> list[int]:
        n, N = self.n, self.N
        if N == 0:
            return []
        kc = list(X[n:])
        s = [sum(X[p * n + j] for p in range(N)) for j in range(n)]
        if self.Rb:
            t = _solve_with(self._rb_smith, s)
        else:
            t = [] if not any(s) else None
        if t is None:
            raise GlobalError("vector is not in the sum-zero lattice")
        return kc + list(t)

    def block_relations(self) -> list[list[int]]:
        n = self.n
        out = []
        for p in range(self.N):
            for c in self.M.base.relations:
                X = [0] * (n * self.N)
                X[p * n:(p + 1) * n] = list(c)
                out.append(self.coords(X))
        return out

    def basis_vectors(self) -> list[list[int]]:
        return [self.to_vector([int(i == j) for i in range(self.dim)]) for j in range(self.dim)]


class GlobalAbGroup:
    """``(M[S]_0)_{H,Tors}`` for an acting subgroup ``H`` (the whole group by default)."""

    def __init__(self, lattice: SumZeroLattice, acting: Subgroup):
        self.lattice = lattice
        self.M = lattice.M
        self.acting = acting
        L = lattice
        rels = L.block_relations()
        basis = L.basis_vectors()
        for g in acting.gens:
            for X in basis:
                Y = L.act(g, X)
                rels.append(L.coords([a - b for a, b in zip(Y, X)]))
        Q = FgAbGroup(L.dim, [r for r in rels if any(r)])
        t = len(Q.invariants)
        self.quotient = Q
        self.group = FgAbGroup(t, [[d if i == j else 0 for i in range(t)] for j, d in enumerate(Q.invariants)])
        self.orbits = self._orbits()

    def _orbits(self) -> list[Orbit]:
        L, H, G = self.lattice, self.acting, self.M.group
        seen: set[int] = set()
        out = []
        for p in range(L.N):
            if p in seen:
                continue
            orbit_pts = []
            reps = []
            for h in sorted(H.members):
                q = L.point_action[h][p]
                if q not in orbit_pts:
                    orbit_pts.append(q)
                    reps.append(h)
            seen.update(orbit_pts)
            stab = Subgroup(G, [h for h in H.members if L.point_action[h][p] == p])
            vi, ci = L.points[p]
            origin = L.places[vi]
            g = L.cosets[vi][ci][0]
            name = origin.name if H.order == G.order else f"{origin.name}@{g}"
            kind, sigma = origin.kind, 0
            if origin.kind == REAL:
                sigma = G.conjugate(origin.sigma, g)
                if sigma not in stab:
                    kind = COMPLEX
            out.append(Orbit(name, kind, origin, p, stab, tuple(orbit_pts), tuple(reps), sigma))
        return out

    # -- conversions ---------------------------------------------------------

    def class_of_vector(self, X: Sequence[int]) -> GroupElement:
        c = self.quotient.canonical_of(self.lattice.coords(X))
        t = self.group.rank
        if any(c[t:]):
            raise GlobalError("sum-zero vector does not define a torsion class")
        return self.group.from_ambient(c[:t])

    def vector_of(self, x: GroupElement) -> list[int]:
        kc = self.quotient.to_ambient(list(self.group.to_ambient(x)) + [0] * self.quotient.free_rank)
        return self.lattice.to_vector(kc)

    def localization_vector(self, orbit: Orbit, X: Sequence[int]) -> list[int]:
        """Shapiro sum ``sum_h h^-1 x_{h p}`` as an ambient vector of ``M``."""
        n, G = self.lattice.n, self.M.group
        out = [0] * n
        for h, q in zip(orbit.coset_reps, orbit.points):
            x = X[q * n:(q + 1) * n]
            if any(x):
                y = self.M.act(G.inv(h), x)
                out = [a + b for a, b in zip(out, y)]
        return out


@dataclass(frozen=True)
class Localization:
    place: PlaceSpec
    orbit: Orbit
    target: FgAbGroup  # M_{D_v,Tors}
    hom: Hom


class GlobalModel:
    """Everything needed to compute with global classes for ``(M, place model)``."""

    def __init__(self, M: GModule, pm: PlaceModel):
        if pm.group is not M.group:
            raise GlobalError("place model and module use different groups")
        places = pm.places()
        limit = max_orbits()
        if len(places) > limit:
            raise GlobalError(f"model has {len(places)} place orbits, above the size bound {limit}")
        self.M, self.pm = M, pm
        self.lattice = SumZeroLattice(M, places)
        self.ab = GlobalAbGroup(self.lattice, M.group.whole())
        self.group = self.ab.group
        self.places = places
        self.local = {p.name: local_group(M, p) for p in places}
        self.localizations: dict[str, Localization] = {}
        for orb in self.ab.orbits:
            p = orb.origin
            co = self.local[p.name].coinvariants
            images = [co.torsion_class(self.ab.localization_vector(orb, self.ab.vector_of(e)))
                      for e in self._ambient_basis()]
            self.localizations[p.name] = Localization(p, orb, co.torsion, hom_from_images(self.group, co.torsion, images))
        self.top = coinvariants(M)
        self._restricted: dict[frozenset[int], GlobalAbGroup] = {}

    def _ambient_basis(self) -> list[GroupElement]:
        T = self.group
        return [T.from_ambient([int(i == j) for i in range(T.rank)]) for j in range(T.rank)]

    def l(self, name: str, x: GroupElement) -> GroupElement:
        return self.localizations[name].hom(x)

    def mu_local(self, name: str, y: GroupElement) -> GroupElement:
        """Image of a local class in ``M_{Gamma,Tors}``."""
        p = self.pm.place(name)
        return corestriction_projection(self.M, p.decomposition, None, y,
                                        source=self.local[name].coinvariants, target=self.top)

    def restricted(self, delta: Subgroup) -> GlobalAbGroup:
        if delta.members not in self._restricted:
            self._restricted[delta.members] = GlobalAbGroup(self.lattice, delta)
        return self._restricted[delta.members]

    # -- archimedean fibres --------------------------------------------------

    def fiber(self, name: str) -> AbstractFiber | None:
        return self.pm.fibers.get(name)

    def inf_neutral(self, name: str):
        fib = self.fiber(name)
        return fib.neutral if fib else self.local[name].group.zero()

    def is_neutral_inf(self, name: str, value) -> bool:
        fib = self.fiber(name)
        return value == fib.neutral if fib else value.is_zero()

    def theta(self, name: str, value) -> GroupElement:
        fib = self.fiber(name)
        lg = self.local[name]
        if fib is None:
            return lg.theta(value)
        return lg.coinvariants.torsion.element(fib.theta[value])

    def inf_values(self, name: str) -> list:
        fib = self.fiber(name)
        return list(fib.labels) if fib else list(self.local[name].group.elements())

    def check_fibers(self) -> None:
        for name, fib in self.pm.fibers.items():
            T = self.local[name].coinvariants.torsion
            if fib.neutral not in fib.labels or set(fib.theta) != set(fib.labels):
                raise GlobalError(f"abstract fibre at {name}: labels, neutral point and theta disagree")
            if any(x for x in T.element(fib.theta[fib.neutral]).coords):
                raise GlobalError(f"abstract fibre at {name}: the neutral point must map to 0")
            for lab in fib.labels:
                if not (T.element(fib.theta[lab]) * 2).is_zero():
                    raise GlobalError(f"abstract fibre at {name}: theta({lab}) is not killed by 2")


# ---------------------------------------------------------------------------
# classes


@dataclass(frozen=True)
class GlobalClass:
    model: GlobalModel
    ab: GroupElement
    inf: tuple  # one value per real place, in model.pm.real_places() order

    def is_neutral(self) -> bool:
        return self.ab.is_zero() and all(
            self.model.is_neutral_inf(p.name, v) for p, v in zip(self.model.pm.real_places(), self.inf))


def global_ab_group(M: GModule, pm: PlaceModel) -> GlobalModel:
    model = GlobalModel(M, pm)
    model.check_fibers()
    return model


def compatibility_failure(model: GlobalModel, ab: GroupElement, inf: Sequence) -> str | None:
    reals = model.pm.real_places()
    if len(inf) != len(reals):
        return f"expected {len(reals)} archimedean components, got {len(inf)}"
    for p, v in zip(reals, inf):
        if model.l(p.name, ab) != model.theta(p.name, v):
            return p.name
    for p in model.places:
        if p.kind == COMPLEX and not model.l(p.name, ab).is_zero():
            return p.name
    return None


def is_compatible(model: GlobalModel, ab: GroupElement, inf: Sequence) -> bool:
    return compatibility_failure(model, ab, inf) is None


def make_global_class(model: GlobalModel, ab: GroupElement, inf: Sequence | None = None) -> GlobalClass:
    if ab.parent is not model.group:
        raise GlobalError("abelianized part belongs to a different model")
    if inf is None:
        inf = determine_inf(model, ab)
    bad = compatibility_failure(model, ab, inf)
    if bad is not None:
        raise IncompatiblePair(f"incompatible pair at place {bad}")
    return GlobalClass(model, ab, tuple(inf))


def determine_inf(model: GlobalModel, ab: GroupElement) -> tuple:
    """The archimedean tuple forced by ``ab`` in torus mode (theta is injective there)."""
    out = []
    for p in model.pm.real_places():
        target = model.l(p.name, ab)
        if model.fiber(p.name) is not None:
            matches = [v for v in model.inf_values(p.name) if model.theta(p.name, v) == target]
            if not matches:
                raise IncompatiblePair(f"incompatible pair at place {p.name}")
            out.append(matches[0])
        else:
            pre = model.local[p.name].theta.lift(target)
            if pre is None:
                raise IncompatiblePair(f"incompatible pair at place {p.name}")
            out.append(pre)
    return tuple(out)


def enumerate_classes(model: GlobalModel, limit: int = 4096) -> list[GlobalClass]:
    T = model.group
    if not T.is_finite() or T.order() > limit:
        raise GlobalError(f"too many abelianized classes to enumerate (limit {limit})")
    out = []
    reals = model.pm.real_places()
    for ab in T.elements():
        choices: list[list] = [[]]
        for p in reals:
            target = model.l(p.name, ab)
            opts = [v for v in model.inf_values(p.name) if model.theta(p.name, v) == target]
            choices = [c + [v] for c in choices for v in opts]
        if any(p.kind == COMPLEX and not model.l(p.name, ab).is_zero() for p in model.places):
            continue
        for c in choices:
            out.append(GlobalClass(model, ab, tuple(c)))
    return out


def power_global(xi: GlobalClass, d: int) -> GlobalClass:
    model = xi.model
    inf = tuple(v if d % 2 else model.inf_neutral(p.name) for p, v in zip(model.pm.real_places(), xi.inf))
    out = GlobalClass(model, xi.ab * d, inf)
    if not is_compatible(model, out.ab, out.inf):  # pragma: no cover - guaranteed by theta(2x) = 0
        raise AssertionError("power of a compatible class is incompatible")
    return out


def period_global(xi: GlobalClass) -> int:
    per = element_order(xi.ab)
    if any(not xi.model.is_neutral_inf(p.name, v) for p, v in zip(xi.model.pm.real_places(), xi.inf)):
        per = lcm(per, 2)
    return per


# ---------------------------------------------------------------------------
# gluing and Sha


@dataclass(frozen=True)
class GlueResult:
    cls: GlobalClass | None
    obstruction: GroupElement | None
    model: GlobalModel
    attempts: int

    @property
    def ok(self) -> bool:
        return self.cls is not None


def _targets(model: GlobalModel, prescribed: Mapping[str, object]) -> dict[str, GroupElement]:
    out = {}
    for name in prescribed:
        p = model.pm.place(name)
        if p not in model.pm.named:
            raise GlobalError(f"place {name!r} is not a named place")
    for p in model.places:
        if p.name in prescribed:
            value = prescribed[p.name]
            if p.kind == REAL:
                out[p.name] = model.theta(p.name, value)
            elif p.kind == COMPLEX:
                out[p.name] = model.local[p.name].coinvariants.torsion.zero()
            else:
                if value.parent is not model.local[p.name].group:
                    raise GlobalError(f"class for {p.name} is not in its local group")
                out[p.name] = value
        else:
            out[p.name] = model.local[p.name].coinvariants.torsion.zero()
    return out


def tate_sum(model: GlobalModel, prescribed: Mapping[str, object]) -> GroupElement:
    total = model.top.torsion.zero()
    for name, y in _targets(model, prescribed).items():
        total = total + model.mu_local(name, y)
    return total


def localization_hom(model: GlobalModel) -> tuple[Hom, list[str]]:
    names = [p.name for p in model.places]
    targets = [model.localizations[n].target for n in names]
    S = direct_sum(targets)
    rows = []
    for n in names:
        rows += model.localizations[n].hom.matrix
    return Hom(model.group, S, rows if rows else [[0] * model.group.rank for _ in range(0)], check=False), names


def glue_local_classes(M: GModule, pm: PlaceModel, prescribed: Mapping[str, object],
                       retries: int = DEFAULT_GLUE_RETRIES, model: GlobalModel | None = None) -> GlueResult:
    model = model if model is not None else global_ab_group(M, pm)
    mu = tate_sum(model, prescribed)
    if not mu.is_zero():
        return GlueResult(None, mu, model, 0)
    for attempt in range(retries + 1):
        if attempt:
            model = global_ab_group(M, model.pm.with_reservoir(model.pm.reservoir + 1))
        targets = _targets(model, prescribed)
        L, names = localization_hom(model)
        y = L.target.from_ambient([c for n in names for c in targets[n].parent.to_ambient(targets[n])])
        ab = L.lift(y)
        if ab is None:
            continue
        inf = []
        for p in model.pm.real_places():
            inf.append(prescribed.get(p.name, model.inf_neutral(p.name)))
        return GlueResult(make_global_class(model, ab, inf), None, model, attempt + 1)
    raise ModelTooSmall(f"model too small: no gluing found after enlarging the reservoir {retries} times")


def localize(xi: GlobalClass) -> dict[str, GroupElement]:
    """Local images at every place (theta images at real places)."""
    return {p.name: xi.model.l(p.name, xi.ab) for p in xi.model.places}


@dataclass(frozen=True)
class ShaResult:
    group: FgAbGroup
    embedding: Hom
    stable: bool


def _sha(model: GlobalModel):
    L, _ = localization_hom(model)
    parts = hom_parts(L)
    return parts.kernel, parts.kernel_embedding


def sha_kernel(M: GModule, pm: PlaceModel, check_stability: bool = True) -> ShaResult:
    model = global_ab_group(M, pm)
    K, emb = _sha(model)
    stable = True
    if check_stability:
        bigger = global_ab_group(M, pm.with_reservoir(pm.reservoir + 1))
        K2, _ = _sha(bigger)
        # zero-extend representatives along the point names
        idx = {pt: i for i, pt in enumerate(_point_names(bigger))}
        images = []
        for j in range(K.rank):
            x = model.group.from_ambient([r[j] for r in emb.matrix])
            X = model.ab.vector_of(x)
            n = model.lattice.n
            Y = [0] * (n * bigger.lattice.N)
            for p, nm in enumerate(_point_names(model)):
                q = idx[nm]
                Y[q * n:(q + 1) * n] = X[p * n:(p + 1) * n]
            images.append(bigger.ab.class_of_vector(Y))
        f = hom_from_images(K, bigger.group, images, check=False)
        parts = hom_parts(f)
        sha2_ok = all(bigger.localizations[p.name].hom(y).is_zero() for y in images for p in bigger.places)
        stable = (parts.kernel.is_trivial() and sha2_ok
                  and K.order() == K2.order() and parts.image.isomorphic(K2))
    return ShaResult(K, emb, stable)


def _point_names(model: GlobalModel) -> list[tuple[str, int]]:
    L = model.lattice
    return [(L.places[vi].name, L.cosets[vi][ci][0]) for vi, ci in L.points]


# ---------------------------------------------------------------------------
# restriction, splitting and index bounds


@dataclass(frozen=True)
class RestrictedClass:
    group: GlobalAbGroup
    ab: GroupElement
    inf: tuple  # (orbit name, neutral flag) for real orbits that stay real
    delta: Subgroup
    multiplier: int

    @property
    def degree(self) -> int:
        return self.delta.parent.order // self.delta.order * self.multiplier

    def is_neutral(self) -> bool:
        return self.ab.is_zero() and all(neutral for _, neutral in self.inf)


def restrict_global(xi: GlobalClass, delta: Subgroup, m: int = 1,
                    complexified: Sequence[str] = ()) -> RestrictedClass:
    model = xi.model
    G = model.M.group
    if delta.parent is not G:
        raise GlobalError("extension subgroup is not a subgroup of the model group")
    if m < 1:
        raise GlobalError("the disjoint multiplier must be at least 1")
    reals = model.pm.real_places()
    cx = set(complexified)
    unknown = cx - {p.name for p in reals}
    if unknown:
        raise GlobalError(f"not real places: {sorted(unknown)}")
    if m % 2 == 0 and cx != {p.name for p in reals}:
        raise GlobalError("parity violation: an even multiplier needs every real place complexified")
    R = model.restricted(delta)
    X = model.ab.vector_of(xi.ab)
    total = [0] * len(X)
    for c in delta.right_cosets():
        Y = model.lattice.act(c[0], X)
        total = [a + b for a, b in zip(total, Y)]
    ab = R.class_of_vector([m * a for a in total])
    inf = []
    values = dict(zip((p.name for p in reals), xi.inf))
    for orb in R.orbits:
        if orb.origin.kind != REAL or orb.origin.name in cx:
            continue
        if orb.kind == REAL:
            inf.append((orb.name, model.is_neutral_inf(orb.origin.name, values[orb.origin.name])))
    return RestrictedClass(R, ab, tuple(inf), delta, m)


def corestrict(xi_model: GlobalModel, r: RestrictedClass) -> GroupElement:
    """Project a restricted abelianized class back to ``Gamma``-coinvariants."""
    return xi_model.ab.class_of_vector(r.group.vector_of(r.ab))


@dataclass(frozen=True)
class SplitBoundGlobal:
    guarantee_degree: int
    sylow_cyclic: bool
    theta: int


def split_degree_global(M: GModule, n: int) -> SplitBoundGlobal:
    image = M.image_group()
    return SplitBoundGlobal(n * capacity(n, image.order), is_sylow_cyclic(image), image.order)


def index_exponent(M: GModule) -> int:
    theta = M.image_group().order
    return min_generators(M.base) * theta + floor_log2(theta) + 1


def strict_places(model: GlobalModel) -> list[PlaceSpec]:
    out = []
    for p in model.pm.named:
        if p.kind == FINITE and p.residue_size is not None and p.residue_size % 2:
            try:
                validate_quadratic_types(p)
            except LocalError:
                continue
            out.append(p)
    return out


def _locally_realizable(model: GlobalModel, delta: Subgroup, m: int, places: Sequence[PlaceSpec]) -> bool:
    G = model.M.group
    for p in places:
        for c in p.decomposition.left_cosets():
            g = c[0]
            conj = {G.conjugate(d, G.inv(g)) for d in delta.members}
            local = Subgroup(G, conj & p.decomposition.members)
            if not realizable(p, ExtensionModelLocal(local, m)):
                return False
    return True


def extension_candidates(G: FinGroup, search_bound: int) -> list[tuple[Subgroup, int]]:
    """All ``(Delta, m)`` with ``[G:Delta] m <= search_bound``, by degree then larger ``Delta`` first."""
    out = []
    for D in all_subgroups(G):
        idx = G.order // D.order
        for m in range(1, search_bound // idx + 1):
            out.append((idx * m, -D.order, m, sorted(D.members), D))
    out.sort(key=lambda c: c[:4])
    return [(c[4], c[2]) for c in out]


def splitting_models(xi: GlobalClass, search_bound: int, strict: Sequence[PlaceSpec] = ()):
    """Yield the restrictions of ``xi`` that are neutral, in increasing degree."""
    model = xi.model
    reals = [p.name for p in model.pm.real_places()]
    for D, m in extension_candidates(model.M.group, search_bound):
        if strict and not _locally_realizable(model, D, m, strict):
            continue
        r = restrict_global(xi, D, m, reals if m % 2 == 0 else ())
        if r.is_neutral():
            yield r


@dataclass(frozen=True)
class IndexBounds:
    period: int
    lower: int
    upper: int
    achieved: int | None
    exponent: int


def index_bounds_global(xi: GlobalClass, search_bound: int = 16, strict_quadratic: bool = True) -> IndexBounds:
    """Index bounds: ``lower | ind``, ``ind | upper`` and the smallest splitting degree found.

    With ``strict_quadratic`` the named finite places with odd residue field
    sharpen the lower bound, and candidate extensions must be locally
    realizable there.
    """
    model = xi.model
    M = model.M
    per = period_global(xi)
    lower = per
    strict = strict_places(model) if strict_quadratic else []
    strict_names = {p.name for p in strict}
    for p in model.pm.named:
        if p.kind != FINITE:
            continue
        loc = LocalClass(model.local[p.name], model.l(p.name, xi.ab))
        if p.name in strict_names:
            lower = lcm(lower, strict_lower_bound(M, loc))
        else:
            lower = lcm(lower, element_order(loc.value))
    d = index_exponent(M)
    achieved = None
    if xi.is_neutral():
        achieved = 1
    else:
        achieved = next((r.degree for r in splitting_models(xi, search_bound, strict)), None)
    return IndexBounds(per, lower, per ** d, achieved, d)


# ---------------------------------------------------------------------------
# period-two and split criteria


def period2_property(M: GModule) -> bool:
    """``2 M = 0``."""
    B = M.base
    return all(B.in_relations([2 * x for x in B.to_ambient(e)]) for e in B.generators()) and B.free_rank == 0


def per_equals_ind_guarantee(M: GModule) -> bool:
    return M.image_group().order == 1


def period_witness(M: GModule, pm: PlaceModel) -> GlobalClass | None:
    """A class whose period is the exponent of ``M_tors``, glued from ``x`` and ``-x``.

    Uses two finite places with trivial decomposition (reservoir places if needed).
    """
    model = global_ab_group(M, pm)
    trivial = [p for p in model.places if p.kind == FINITE and p.decomposition.order == 1]
    if len(trivial) < 2:
        model = global_ab_group(M, pm.with_reservoir(max(pm.reservoir, 2)))
        trivial = [p for p in model.places if p.kind == FINITE and p.decomposition.order == 1]
    T = model.local[trivial[0].name].group
    if T.is_trivial():
        return None
    x = T.generators()[-1]  # the largest invariant factor
    y = model.local[trivial[1].name].group.element((-x).coords)
    prescribed = {trivial[0].name: x, trivial[1].name: y}
    named = {p.name for p in model.pm.named}
    if not set(prescribed) <= named:
        # reservoir places are anonymous; glue them directly on the localization map
        targets = {p.name: model.local[p.name].coinvariants.torsion.zero() for p in model.places}
        targets.update(prescribed)
        L, names = localization_hom(model)
        yv = L.target.from_ambient([c for n in names for c in targets[n].parent.to_ambient(targets[n])])
        ab = L.lift(yv)
        if ab is None:
            return None
        return make_global_class(model, ab)
    res = glue_local_classes(M, model.pm, prescribed, model=model)
    return res.cls


def cyclic_gamma(G: FinGroup) -> bool:
    return any(G.element_order(g) == G.order for g in range(G.order))

