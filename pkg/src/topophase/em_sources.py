"""Idealized line sources, their exterior fields and vector potentials, and the
electric-magnetic duality map.

Four zero-radius sources are modeled:

* ``CHARGE_LINE``    line of electric charge, strength lambda_E (esu/cm)
* ``MONOPOLE_LINE``  line of magnetic monopoles, strength lambda_M (same units)
* ``MAG_FLUX_TUBE``  magnetic flux tube, strength Phi_M (G cm^2)
* ``ELEC_FLUX_TUBE`` electric flux tube, strength Phi_E

Positions may be a single 3-vector or any ``(..., 3)`` array; fields come back
with the same leading shape.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from topophase.errors import OnAxisError, WrongKindError

RHO_MIN = 1e-12  # cm


class SourceKind(str, enum.Enum):
    CHARGE_LINE = "ChargeLine"
    MONOPOLE_LINE = "MonopoleLine"
    MAG_FLUX_TUBE = "MagFluxTube"
    ELEC_FLUX_TUBE = "ElecFluxTube"


_DUAL_KIND = {
    SourceKind.CHARGE_LINE: SourceKind.MONOPOLE_LINE,
    SourceKind.MONOPOLE_LINE: SourceKind.CHARGE_LINE,
    SourceKind.MAG_FLUX_TUBE: SourceKind.ELEC_FLUX_TUBE,
    SourceKind.ELEC_FLUX_TUBE: SourceKind.MAG_FLUX_TUBE,
}

FLUX_TUBES = (SourceKind.MAG_FLUX_TUBE, SourceKind.ELEC_FLUX_TUBE)


def _vec(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    return v


@dataclass(frozen=True, eq=False)
class SourceConfig:
    kind: SourceKind
    strength: float
    axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    axis_point: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "kind", SourceKind(self.kind))
        axis = _vec(self.axis)
        if abs(np.linalg.norm(axis) - 1.0) > 1e-12:
            raise ValueError("source axis must be a unit vector")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "axis_point", _vec(self.axis_point))
        if not math.isfinite(self.strength):
            raise ValueError("source strength must be finite")
        object.__setattr__(self, "strength", float(self.strength))

    def __eq__(self, other):
        if not isinstance(other, SourceConfig):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.strength == other.strength
            and np.array_equal(self.axis, other.axis)
            and np.array_equal(self.axis_point, other.axis_point)
        )

    def cylindrical(self, point, rho_min: float = RHO_MIN):
        """Return (rho, rho_hat, phi_hat) of ``point`` about this line."""
        r = np.asarray(point, dtype=float) - self.axis_point
        perp = r - np.einsum("...i,i->...", r, self.axis)[..., None] * self.axis
        rho = np.linalg.norm(perp, axis=-1)
        if np.any(rho <= rho_min):
            raise OnAxisError(f"point within {rho_min} cm of the {self.kind.value} axis")
        rho_hat = perp / rho[..., None]
        phi_hat = np.cross(self.axis, rho_hat)
        return rho, rho_hat, phi_hat


@dataclass(frozen=True, eq=False)
class EMField:
    """Electric (statvolt/cm) and magnetic (G) field vectors."""

    E: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        E = np.asarray(self.E, dtype=float)
        B = np.asarray(self.B, dtype=float)
        if E.shape[-1:] != (3,) or B.shape[-1:] != (3,):
            raise ValueError("field vectors must have a trailing dimension of 3")
        if not (np.all(np.isfinite(E)) and np.all(np.isfinite(B))):
            raise ValueError("field components must be finite")
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "B", B)

    @classmethod
    def zero(cls, shape=()) -> "EMField":
        return cls(np.zeros(shape + (3,)), np.zeros(shape + (3,)))

    def __eq__(self, other):
        if not isinstance(other, EMField):
            return NotImplemented
        return np.array_equal(self.E, other.E) and np.array_equal(self.B, other.B)

    def __neg__(self) -> "EMField":
        return EMField(-self.E, -self.B)


@dataclass(frozen=True, eq=False)
class Probe:
    """A quantum particle: charge e (esu), monopole charge g, electric dipole d
    (esu cm) and magnetic dipole m (erg/G).  Absent attributes are zero."""

    e: float = 0.0
    g: float = 0.0
    d: np.ndarray = field(default_factory=lambda: np.zeros(3))
    m: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        if not (math.isfinite(self.e) and math.isfinite(self.g)):
            raise ValueError("probe charges must be finite")
        object.__setattr__(self, "e", float(self.e))
        object.__setattr__(self, "g", float(self.g))
        object.__setattr__(self, "d", _vec(self.d))
        object.__setattr__(self, "m", _vec(self.m))

    def __eq__(self, other):
        if not isinstance(other, Probe):
            return NotImplemented
        return (
            self.e == other.e
            and self.g == other.g
            and np.array_equal(self.d, other.d)
            and np.array_equal(self.m, other.m)
        )


def eval_field(src: SourceConfig, point, rho_min: float = RHO_MIN) -> EMField:
    """Exterior field of a line source.

    A line of charge gives E = 2 lambda rho_hat / rho; a monopole line gives the
    same form for B.  Flux tubes have no field anywhere off the axis.
    """
    rho, rho_hat, _ = src.cylindrical(point, rho_min)
    zero = np.zeros_like(rho_hat)
    if src.kind is SourceKind.CHARGE_LINE:
        return EMField(2.0 * src.strength * rho_hat / rho[..., None], zero)
    if src.kind is SourceKind.MONOPOLE_LINE:
        return EMField(zero, 2.0 * src.strength * rho_hat / rho[..., None])
    return EMField(zero, zero.copy())


def eval_vector_potential(src: SourceConfig, point, rho_min: float = RHO_MIN) -> np.ndarray:
    """Azimuthal-gauge vector potential Phi/(2 pi rho) phi_hat of a flux tube.

    For ``MAG_FLUX_TUBE`` this is the ordinary potential A_M; for
    ``ELEC_FLUX_TUBE`` it is the dual potential A_E.
    """
    if src.kind not in FLUX_TUBES:
        raise WrongKindError(f"{src.kind.value} has no vector potential in this model")
    rho, _, phi_hat = src.cylindrical(point, rho_min)
    return src.strength / (2.0 * math.pi * rho[..., None]) * phi_hat


def flux_from_dipole_density(density: float) -> float:
    """Flux 4 pi^2 x (dipoles per unit length) of a line of aligned dipoles."""
    return 4.0 * math.pi**2 * density


def dualize_field(f: EMField) -> EMField:
    """E -> B, B -> -E."""
    return EMField(-f.B, f.E.copy())


def dualize_config(src: SourceConfig, probe: Probe) -> tuple[SourceConfig, Probe]:
    """Swap each source for its dual (strength kept) and swap e<->g, d<->m."""
    new_src = SourceConfig(_DUAL_KIND[src.kind], src.strength, src.axis.copy(), src.axis_point.copy())
    new_probe = Probe(e=probe.g, g=probe.e, d=probe.m.copy(), m=probe.d.copy())
    return new_src, new_probe
