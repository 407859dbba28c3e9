"""Three-body particle systems and the coefficients of their Hamiltonian.

Particle 1 sits at the origin of the relative coordinates
``r1 = R2 - R1``, ``r2 = R3 - R1`` and ``R = R3 - R2``.  Molecular presets
put the electron at particle 1 (so R is the internuclear distance), atomic
presets put the nucleus there (so R is the electron-electron distance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import data

INFINITE = math.inf
"""Marker for an infinitely heavy particle (clamped nucleus)."""


class InvalidSystemError(ValueError):
    pass


@dataclass(frozen=True)
class ThreeBodySystem:
    name: str
    m1: float
    m2: float
    m3: float
    z1: float
    z2: float
    z3: float
    symmetric_23: bool = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        for label, m in (("m1", self.m1), ("m2", self.m2), ("m3", self.m3)):
            if math.isnan(m) or m <= 0:
                raise InvalidSystemError(f"{label} must be positive or INFINITE, got {m!r}")
        if math.isinf(self.m2) or math.isinf(self.m3):
            raise InvalidSystemError("only particle 1 may have infinite mass")
        sym = self.m2 == self.m3 and self.z2 == self.z3
        if self.symmetric_23 is None:
            object.__setattr__(self, "symmetric_23", sym)
        elif self.symmetric_23 != sym:
            raise InvalidSystemError(
                "symmetric_23 must be true exactly when particles 2 and 3 have equal mass and charge"
            )

    @property
    def total_charge(self) -> float:
        return self.z1 + self.z2 + self.z3

    def swapped(self) -> "ThreeBodySystem":
        """The same system with particles 2 and 3 relabelled."""
        return ThreeBodySystem(self.name, self.m1, self.m3, self.m2, self.z1, self.z3, self.z2)

    def to_dict(self) -> dict:
        enc = lambda m: "infinite" if math.isinf(m) else m  # noqa: E731
        return {
            "name": self.name,
            "m1": enc(self.m1), "m2": enc(self.m2), "m3": enc(self.m3),
            "z1": self.z1, "z2": self.z2, "z3": self.z3,
            "symmetric_23": self.symmetric_23,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThreeBodySystem":
        dec = lambda m: INFINITE if isinstance(m, str) and m.lower() in ("inf", "infinite") else float(m)  # noqa: E731
        return cls(
            str(d.get("name", "custom")),
            dec(d["m1"]), dec(d["m2"]), dec(d["m3"]),
            float(d["z1"]), float(d["z2"]), float(d["z3"]),
        )


@dataclass(frozen=True)
class KineticCoefficients:
    """Prefactors of the center-of-mass Hamiltonian.

    H = -inv_2m12 lap_1 - inv_2m13 lap_2 - inv_m1 grad_1.grad_2
        + zz12/r1 + zz13/r2 + zz23/R
    """

    inv_2m12: float
    inv_2m13: float
    inv_m1: float
    zz12: float
    zz13: float
    zz23: float


def _inv_2reduced(m1: float, mj: float) -> float:
    # 1/(2 mu) with mu = m1 mj/(m1 + mj); the m1 -> inf limit is 1/(2 mj)
    if math.isinf(m1):
        return 1.0 / (2.0 * mj)
    return (m1 + mj) / (2.0 * m1 * mj)


def kinetic_coefficients(system: ThreeBodySystem) -> KineticCoefficients:
    for m in (system.m1, system.m2, system.m3):
        if not m > 0:
            raise InvalidSystemError(f"non-positive mass {m!r}")
    return KineticCoefficients(
        inv_2m12=_inv_2reduced(system.m1, system.m2),
        inv_2m13=_inv_2reduced(system.m1, system.m3),
        inv_m1=0.0 if math.isinf(system.m1) else 1.0 / system.m1,
        zz12=system.z1 * system.z2,
        zz13=system.z1 * system.z3,
        zz23=system.z2 * system.z3,
    )


def _presets(mp: float = data.PROTON_ELECTRON_MASS_RATIO,
             md: float = data.DEUTERON_ELECTRON_MASS_RATIO) -> dict[str, ThreeBodySystem]:
    return {
        "h2plus": ThreeBodySystem("h2plus", 1.0, mp, mp, -1.0, 1.0, 1.0),
        # deuteron is particle 2, so r1 is the electron-deuteron vector
        "hdplus": ThreeBodySystem("hdplus", 1.0, md, mp, -1.0, 1.0, 1.0),
        "helium": ThreeBodySystem("helium", INFINITE, 1.0, 1.0, 2.0, -1.0, -1.0),
        "hminus": ThreeBodySystem("hminus", INFINITE, 1.0, 1.0, 1.0, -1.0, -1.0),
    }


PRESET_NAMES = ("h2plus", "hdplus", "helium", "hminus")


def preset(name: str, *, proton_mass: float | None = None,
           deuteron_mass: float | None = None, deuteron_first: bool = True) -> ThreeBodySystem:
    """Return a built-in system.

    ``proton_mass``/``deuteron_mass`` override the CODATA ratios for
    sensitivity studies; ``deuteron_first=False`` puts the proton at
    particle 2 in HD+.
    """
    table = _presets(
        proton_mass or data.PROTON_ELECTRON_MASS_RATIO,
        deuteron_mass or data.DEUTERON_ELECTRON_MASS_RATIO,
    )
    try:
        system = table[name]
    except KeyError:
        raise KeyError(f"unknown system {name!r}; valid presets: {', '.join(PRESET_NAMES)}") from None
    if name == "hdplus" and not deuteron_first:
        system = system.swapped()
    return system
