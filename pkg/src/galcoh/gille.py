"""Mod-5 invariant arithmetic for the E8 non-functoriality witness.

A symbol ``(i, j, l)`` stands for the class ``(x^i, y^j, z^l)`` in
``H^1(K, mu_5)^3``.  The three invariants take values in ``Z/5``:

* ``rho(i, j, l) = -i j l``
* ``rho1(i, j, l) = rho(i, j, l + 1)``
* ``rho2(i, j, l) = -(i + 1)(j + 1)(l + 1) + 1``

``H^1(K', E8)`` is identified with ``Z/5`` through ``rho2``; that
identification is recorded as a constant, not computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

MODULUS = 5
H1_E8_ORDER = 5
VARIANTS = ("rho", "rho1", "rho2")


@dataclass(frozen=True)
class ModFiveSymbol:
    i: int
    j: int
    l: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "i", self.i % MODULUS)
        object.__setattr__(self, "j", self.j % MODULUS)
        object.__setattr__(self, "l", self.l % MODULUS)

    def __add__(self, other: ModFiveSymbol) -> ModFiveSymbol:
        return ModFiveSymbol(self.i + other.i, self.j + other.j, self.l + other.l)

    def scale(self, k: int) -> ModFiveSymbol:
        return ModFiveSymbol(k * self.i, k * self.j, k * self.l)


def all_symbols() -> list[ModFiveSymbol]:
    return [ModFiveSymbol(i, j, l) for i, j, l in product(range(MODULUS), repeat=3)]


def rost_value(variant: str, s: ModFiveSymbol) -> int:
    if variant == "rho":
        return (-s.i * s.j * s.l) % MODULUS
    if variant == "rho1":
        return (-s.i * s.j * (s.l + 1)) % MODULUS
    if variant == "rho2":
        return (-(s.i + 1) * (s.j + 1) * (s.l + 1) + 1) % MODULUS
    raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def is_homomorphism(variant: str) -> bool:
    return find_non_additive_pair(variant) is None


def find_non_additive_pair(variant: str) -> tuple[ModFiveSymbol, ModFiveSymbol] | None:
    syms = all_symbols()
    for a in syms:
        for b in syms:
            if rost_value(variant, a + b) != (rost_value(variant, a) + rost_value(variant, b)) % MODULUS:
                return a, b
    return None


@dataclass(frozen=True)
class WitnessCheck:
    description: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class WitnessReport:
    checks: tuple[WitnessCheck, ...]
    no_functorial_power: bool
    h1_order: int = H1_E8_ORDER

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_witness() -> WitnessReport:
    syms = all_symbols()
    checks = []
    scaling = all(rost_value("rho", s.scale(2)) == (3 * rost_value("rho", s)) % MODULUS for s in syms)
    checks.append(WitnessCheck("rho(2a, 2b, 2c) = 3 rho(a, b, c) for all 125 symbols", scaling))
    one, two = ModFiveSymbol(1, 1, 1), ModFiveSymbol(2, 2, 2)
    r1, r2 = rost_value("rho", one), rost_value("rho", two)
    checks.append(WitnessCheck("rho is not additive along (1,1,1) -> (2,2,2)", r2 != (2 * r1) % MODULUS,
                               f"rho(1,1,1) = {r1}, rho(2,2,2) = {r2}"))
    gamma = ModFiveSymbol(2, 1, 0)
    g1, g2 = rost_value("rho2", gamma), rost_value("rho2", gamma.scale(2))
    checks.append(WitnessCheck("rho2(2,1,0) = 0, so gamma lies in the kernel", g1 == 0, f"value {g1}"))
    checks.append(WitnessCheck("rho2(4,2,0) = 1, so 2 gamma does not", g2 == 1, f"value {g2}"))
    for v in ("rho1", "rho2"):
        pair = find_non_additive_pair(v)
        detail = "" if pair is None else f"{(pair[0].i, pair[0].j, pair[0].l)} + {(pair[1].i, pair[1].j, pair[1].l)}"
        checks.append(WitnessCheck(f"{v} is not a homomorphism", pair is not None, detail))
    conclusion = g1 == 0 and g2 != 0
    return WitnessReport(tuple(checks), conclusion)
