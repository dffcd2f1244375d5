"""Gaussian-CGS physical constants plus the experimental numbers used by the
hydrogen and ammonia models.

CODATA 2018 values.  ``d_ammonia`` (1.47 D) is a literature value.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 2.99792458e10  # cm/s
    hbar: float = 1.054571817e-27  # erg s
    e_charge: float = 4.80320471e-10  # esu
    a_B: float = 5.29177211e-9  # cm
    alpha: float = 1 / 137.035999
    m_e: float = 9.1093837e-28  # g
    tau_2s: float = 0.14  # s
    tau_2p: float = 1.6e-9  # s
    B_res: float = 8.12e3  # G, 2s-2p motional level crossing at v = 1e6 cm/s
    d_ammonia: float = 1.47e-18  # esu cm
    omega_inv: float = 2 * math.pi * 23e9  # rad/s

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"constant {f.name} must be finite and positive, got {value!r}")

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c

    @property
    def gamma_2p(self) -> float:
        """2p radiative decay rate (1/s)."""
        return 1.0 / self.tau_2p

    def alpha_deviation(self) -> float:
        """Relative deviation of e^2/(hbar c) from ``alpha``."""
        return self.e_charge**2 / (self.hbar * self.c) / self.alpha - 1.0

    def bohr_radius_deviation(self) -> float:
        """Relative deviation of hbar^2/(m_e e^2) from ``a_B``."""
        return self.hbar**2 / (self.m_e * self.e_charge**2) / self.a_B - 1.0

    def is_consistent(self, rtol: float = 1e-6) -> bool:
        return abs(self.alpha_deviation()) <= rtol and abs(self.bohr_radius_deviation()) <= rtol

    def replace(self, **overrides) -> "PhysicalConstants":
        unknown = set(overrides) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise ValueError(f"unknown constants: {sorted(unknown)}")
        return dataclasses.replace(self, **{k: float(v) for k, v in overrides.items()})


_DEFAULT = PhysicalConstants()


def default_constants() -> PhysicalConstants:
    return _DEFAULT


@dataclass(frozen=True)
class Units:
    """The (hbar, c) pair a phase formula is evaluated in.

    ``REDUCED`` sets hbar = c = 1, which keeps property tests readable.
    """

    hbar: float
    c: float

    @classmethod
    def from_constants(cls, constants: PhysicalConstants | None = None) -> "Units":
        constants = constants or _DEFAULT
        return cls(constants.hbar, constants.c)

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c


CGS = Units.from_constants(_DEFAULT)
REDUCED = Units(1.0, 1.0)
