"""Sparse linear array geometries on the integer half-wavelength grid.

All sensor locations are integer multiples of d = lambda/2, so co-array
arithmetic downstream is exact integer set work.  The augmented-ULA family
(AULAs and its shifted / transformed / compressed variants) is generated from
closed-form location sets parameterized only by the sensor count N; classic
ULA and two-level nested geometries are provided for comparison, and arbitrary
user-supplied geometries round-trip through a small JSON descriptor.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

POSITION_UNIT = "half-wavelength"


class DesignError(ValueError):
    """Invalid design parameters or malformed geometry input."""


@dataclass(frozen=True)
class SensorArray:
    """A physical linear array: named, with sorted integer positions."""

    name: str
    positions: tuple[int, ...]
    unit: str = POSITION_UNIT

    def __post_init__(self) -> None:
        if not self.positions:
            raise DesignError("array needs at least one sensor")
        pos = tuple(int(p) for p in self.positions)
        if any(int(p) != p for p in self.positions):
            raise DesignError("sensor positions must be integers")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise DesignError("sensor positions must be strictly increasing")
        object.__setattr__(self, "positions", pos)
        if self.unit != POSITION_UNIT:
            raise DesignError(f"unsupported position unit {self.unit!r}")

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def aperture(self) -> int:
        return self.positions[-1] - self.positions[0]

    @property
    def spacings(self) -> tuple[int, ...]:
        """Consecutive inter-sensor gaps, length n - 1."""
        return tuple(b - a for a, b in zip(self.positions, self.positions[1:]))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.positions, dtype=np.int64)

    def translated(self, shift: int, name: str | None = None) -> "SensorArray":
        """Rigidly translate every sensor by ``shift`` grid units."""
        shift = int(shift)
        return SensorArray(
            name=name if name is not None else f"{self.name}+{shift}",
            positions=tuple(p + shift for p in self.positions),
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "unit": self.unit,
            "positions": list(self.positions),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SensorArray":
        if not isinstance(data, dict):
            raise DesignError("array descriptor must be a JSON object")
        try:
            name = data["name"]
            positions = data["positions"]
        except KeyError as missing:
            raise DesignError(f"array descriptor missing key {missing}") from None
        unit = data.get("unit", POSITION_UNIT)
        return from_positions(name, positions, unit=unit)


@dataclass(frozen=True)
class AulasParams:
    """Sub-array bookkeeping for the augmented-ULA family.

    m is the sparse spacing 2*ceil(n/4); n1 sensors sit on the coarse grid and
    n2 / n3 form the dense tail(s).  Each family fixes (n1, n2, n3) its own
    way, so use the family-specific constructors.
    """

    n: int
    m: int
    n1: int
    n2: int
    n3: int

    @staticmethod
    def _spacing(n: int) -> int:
        return 2 * math.ceil(n / 4)

    @classmethod
    def for_aulas(cls, n: int) -> "AulasParams":
        if n < 9:
            raise DesignError(f"AULAs needs n >= 9, got {n}")
        m = cls._spacing(n)
        return cls(n=n, m=m, n1=n - m + 1, n2=m // 2 - 1, n3=m // 2 - 2)

    @classmethod
    def for_saulas(cls, n: int) -> "AulasParams":
        if n < 9:
            raise DesignError(f"SAULAs needs n >= 9, got {n}")
        m = cls._spacing(n)
        return cls(n=n, m=m, n1=n - m + 1, n2=m // 2 - 1, n3=m // 2 - 2)

    @classmethod
    def for_tsaulas(cls, n: int) -> "AulasParams":
        if n < 5:
            raise DesignError(f"TSAULAs needs n >= 5, got {n}")
        m = cls._spacing(n)
        return cls(n=n, m=m, n1=n - m + 1, n2=m // 2 - 1, n3=m // 2 - 1)

    @classmethod
    def for_cotsaulas(cls, n: int) -> "AulasParams":
        m = cls._spacing(n)
        if n - m < 1 or m < 6:
            raise DesignError(
                f"Co-TSAULAs needs n - m >= 1 and m >= 6 (n >= 9), got n={n}"
            )
        return cls(n=n, m=m, n1=n - m, n2=m // 2 - 1, n3=m // 2 - 1)


def _coarse_run(n1: int, m: int) -> list[int]:
    return [k * m for k in range(n1)]


def design_aulas(n: int) -> SensorArray:
    """Augmented ULA: a coarse n1-element grid of pitch m plus two dense
    tails straddling the last coarse sensor."""
    p = AulasParams.for_aulas(n)
    n1m, half = p.n1 * p.m, p.m // 2
    part1 = _coarse_run(p.n1, p.m)
    part2 = [n1m - half - 1 + k for k in range(1, half + 1)]
    part3 = [n1m + k for k in range(1, half)]
    return SensorArray("AULAs", tuple(sorted(part1 + part2 + part3)))


def design_saulas(n: int) -> SensorArray:
    """Shifted variant: the same structure as design_aulas moved up by m/2,
    which relocates the sum co-array without touching the difference set."""
    p = AulasParams.for_saulas(n)
    n1m, half = p.n1 * p.m, p.m // 2
    part1 = [half + k * p.m for k in range(p.n1)]
    part2 = [n1m - 1 + k for k in range(1, half + 1)]
    part3 = [n1m + half + k for k in range(1, half)]
    return SensorArray("SAULAs", tuple(sorted(part1 + part2 + part3)))


def design_tsaulas(n: int) -> SensorArray:
    """Transformed-shifted variant: dense tails opened up to pitch 2 and a
    single mirrored sensor far on the negative axis."""
    p = AulasParams.for_tsaulas(n)
    n1m, half = p.n1 * p.m, p.m // 2
    part1 = [half + k * p.m for k in range(p.n1)]
    part2 = [n1m - half + 2 * k for k in range(1, half)]
    part2.append(-n1m - half + 1)
    part3 = [n1m + half - 1 + 2 * k for k in range(1, half)]
    return SensorArray("TSAULAs", tuple(sorted(part1 + part2 + part3)))


def design_cotsaulas(n: int) -> SensorArray:
    """Compressed variant of design_tsaulas: one fewer coarse sensor and one
    extra tail sensor, trading a shorter span for a hole-free co-array."""
    p = AulasParams.for_cotsaulas(n)
    n1m, half = p.n1 * p.m, p.m // 2
    part1 = [half + k * p.m for k in range(p.n1)]
    part2 = [n1m - half + 2 * k for k in range(1, half)]
    part2.append(-n1m - half + 1)
    part3 = [n1m + half - 1 + 2 * k for k in range(1, half)]
    part3.append(n1m + 3 * half - 2)
    return SensorArray("Co-TSAULAs", tuple(sorted(part1 + part2 + part3)))


def design_ula(n: int) -> SensorArray:
    if n < 1:
        raise DesignError(f"ULA needs n >= 1, got {n}")
    return SensorArray("ULA", tuple(range(n)))


def design_nested(n_dense: int, n_sparse: int) -> SensorArray:
    """Two-level nested array: a dense ULA of n_dense sensors starting at 0,
    then n_sparse sensors at pitch n_dense + 1 ending each coarse period.

    design_nested(6, 6) -> positions {0..5, 6, 13, 20, 27, 34, 41}.
    """
    if n_dense < 1 or n_sparse < 1:
        raise DesignError("nested array needs n_dense >= 1 and n_sparse >= 1")
    dense = list(range(n_dense))
    sparse = [k * (n_dense + 1) - 1 for k in range(1, n_sparse + 1)]
    return SensorArray("NA", tuple(sorted(set(dense + sparse))))


_FAMILY_BUILDERS = {
    "aulas": design_aulas,
    "saulas": design_saulas,
    "tsaulas": design_tsaulas,
    "cotsaulas": design_cotsaulas,
    "ula": design_ula,
}


def design(family: str, n: int) -> SensorArray:
    """Build a named single-parameter geometry ('aulas', 'saulas', 'tsaulas',
    'cotsaulas', 'ula'); nested arrays take two parameters, use design_nested."""
    try:
        builder = _FAMILY_BUILDERS[family.lower()]
    except KeyError:
        known = ", ".join(sorted(_FAMILY_BUILDERS) + ["nested"])
        raise DesignError(f"unknown family {family!r} (known: {known})") from None
    return builder(n)


def from_positions(
    name: str, positions: Iterable[int], unit: str = POSITION_UNIT
) -> SensorArray:
    """Wrap externally supplied sensor locations; sorts and rejects
    duplicates and non-integers."""
    pos = list(positions)
    if len(pos) == 0:
        raise DesignError("array needs at least one sensor")
    cleaned = []
    for p in pos:
        if isinstance(p, bool) or int(p) != p:
            raise DesignError(f"non-integer sensor position {p!r}")
        cleaned.append(int(p))
    if len(set(cleaned)) != len(cleaned):
        raise DesignError("duplicate sensor positions")
    return SensorArray(str(name), tuple(sorted(cleaned)), unit=unit)


def load_descriptor(path) -> SensorArray:
    """Read a JSON array descriptor {"name", "unit", "positions"} from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise DesignError(f"malformed array descriptor {path}: {err}") from None
    return SensorArray.from_dict(data)


def save_descriptor(array: SensorArray, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(array.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def inbuilt_shared_locations(a: SensorArray, b: SensorArray) -> tuple[int, ...]:
    """Physical positions common to two arrays (useful when geometries for
    different N are deployed on the same rail)."""
    return tuple(sorted(set(a.positions) & set(b.positions)))
