"""First-order (small v/c) Lorentz transforms and the co-moving-frame phase.

Sign convention: E' = E - v x B / c and B' = B + v x E / c.  Many texts
write +v x B / c for the field seen by the moving particle; the convention used
here is the one under which H' = -d . E' reduces to the Roentgen interaction
d . (v x B) / c for a dipole crossing a pure magnetic field, and it is kept
consistently for every source.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from topophase.constants import CGS, Units
from topophase.em_sources import (
    EMField,
    Probe,
    SourceConfig,
    SourceKind,
    eval_field,
    eval_vector_potential,
)
from topophase.errors import TooFastError
from topophase.paths import ParamPath, segment_romberg

MAX_BETA = 0.1


@dataclass(frozen=True, eq=False)
class Potentials:
    """Scalar/vector potentials (V, A) plus their duals (V_dual, A_E).

    The dual pair is what a magnetic monopole couples to; it transforms as the
    duality image of (V, A) under A -> -A_E.
    """

    V: float | np.ndarray = 0.0
    A: np.ndarray = field(default_factory=lambda: np.zeros(3))
    V_dual: float | np.ndarray = 0.0
    A_E: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        for name in ("V", "A", "V_dual", "A_E"):
            value = np.asarray(getattr(self, name), dtype=float)
            if not np.all(np.isfinite(value)):
                raise ValueError(f"potential {name} must be finite")
            object.__setattr__(self, name, value)

    def __eq__(self, other):
        if not isinstance(other, Potentials):
            return NotImplemented
        return all(np.array_equal(getattr(self, n), getattr(other, n)) for n in ("V", "A", "V_dual", "A_E"))


def _check_speed(v: np.ndarray, c: float) -> None:
    speed = np.linalg.norm(v, axis=-1)
    if np.any(speed >= MAX_BETA * c):
        raise TooFastError(f"|v| = {np.max(speed):.6g} exceeds the first-order limit {MAX_BETA} c")


def boost_fields(f: EMField, v, c: float = CGS.c) -> EMField:
    """Fields seen in the frame moving with velocity ``v`` (first order)."""
    v = np.asarray(v, dtype=float)
    _check_speed(v, c)
    return EMField(f.E - np.cross(v, f.B) / c, f.B + np.cross(v, f.E) / c)


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def boost_potentials(p: Potentials, v, c: float = CGS.c) -> Potentials:
    """V' = V - v.A/c, A'_par = A_par - V v/c, A'_perp = A_perp.

    Only the component of A along v is shifted, and the shift V v/c is itself
    along v, so the split never needs to be formed explicitly.
    """
    v = np.asarray(v, dtype=float)
    _check_speed(v, c)
    V = p.V - _dot(v, p.A) / c
    A = p.A - p.V[..., None] * v / c
    # dual pair: substitute A -> -A_E in the rules above
    V_dual = p.V_dual + _dot(v, p.A_E) / c
    A_E = p.A_E + p.V_dual[..., None] * v / c
    return Potentials(V, A, V_dual, A_E)


def comoving_hamiltonian(p: Probe, f_lab: EMField, pot_lab: Potentials, v, c: float = CGS.c):
    """Interaction energy in the particle's rest frame,
    H' = -e V' - g V'_dual - d . E' - m . B'.

    The kinetic coupling e p.A/mc drops out because p' = 0 in that frame.
    """
    f = boost_fields(f_lab, v, c)
    pot = boost_potentials(pot_lab, v, c)
    return -p.e * pot.V - p.g * pot.V_dual - _dot(p.d, f.E) - _dot(p.m, f.B)


def source_potentials(src: SourceConfig, points) -> Potentials:
    """Lab-frame potentials of ``src`` in the azimuthal gauge.

    Line charges are represented through their fields only; their logarithmic
    scalar potentials are not needed by any of the four topological set-ups.
    """
    points = np.asarray(points, dtype=float)
    zero = np.zeros(points.shape)
    if src.kind is SourceKind.MAG_FLUX_TUBE:
        return Potentials(A=eval_vector_potential(src, points), A_E=zero)
    if src.kind is SourceKind.ELEC_FLUX_TUBE:
        return Potentials(A=zero, A_E=eval_vector_potential(src, points))
    src.cylindrical(points)  # on-axis guard
    return Potentials(A=zero, A_E=zero.copy())


def phase_from_comoving(src: SourceConfig, p: Probe, path: ParamPath, units: Units = CGS,
                        levels: int = 3) -> float:
    """Phase (1/hbar) * integral of H' dtau along a timed path.

    Each polyline segment is flown at its constant velocity; the rest-frame
    Hamiltonian is integrated against the particle's proper time
    dtau = dt sqrt(1 - v^2/c^2) with Richardson-extrapolated midpoint sums.
    """
    c = units.c
    vel = path.velocities
    _check_speed(vel, c)
    dtau = path.durations * np.sqrt(1.0 - np.einsum("ij,ij->i", vel, vel) / c**2)

    def integrand(x, idx):
        v = vel[idx]
        h = comoving_hamiltonian(p, eval_field(src, x), source_potentials(src, x), v, c)
        return h * dtau[idx]

    value, _ = segment_romberg(path.points, integrand, levels)
    return value / units.hbar
