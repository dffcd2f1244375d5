"""Two-pulse Ramsey readout of the HMW phase on an ammonia beam.

A resonant pi/2 pulse at the magnet entrance puts each molecule into an equal
superposition of the two inversion states, i.e. of dipole-up and dipole-down.
Crossing the magnet, the two dipole orientations pick up opposite motional
Stark phases, so the superposition acquires a relative phase
phi = d_a B L / (hbar c).  A second pi/2 pulse at the exit converts that phase
into population.

Everything is in the frame rotating at the 23 GHz inversion frequency with
resonant, instantaneous pulses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from topophase.constants import PhysicalConstants, default_constants


@dataclass(frozen=True)
class RamseyParams:
    d_a: float = default_constants().d_ammonia  # esu cm
    v: float = 1e5  # cm/s
    L: float = 1.0  # cm
    B: float = 0.0  # G
    pulse_area_error: float = 0.0
    readout_detuning_phase: float = 0.0  # rad

    def __post_init__(self):
        if not self.d_a > 0:
            raise ValueError("dipole moment must be positive")
        if not self.v > 0:
            raise ValueError("beam speed must be positive")
        if not self.L > 0:
            raise ValueError("field length must be positive")
        if not self.B >= 0:
            raise ValueError("field must be non-negative")


def ammonia_hmw_phase(d_a: float, B: float, L: float, constants: PhysicalConstants | None = None) -> float:
    if d_a < 0 or B < 0 or L < 0:
        raise ValueError("inputs must be non-negative")
    k = constants or default_constants()
    return d_a * B * L / k.hbar_c


def pulse(area: float) -> np.ndarray:
    """Resonant rotation about y by ``area``; pi/2 takes (1, 0) to (1, 1)/sqrt 2."""
    c, s = math.cos(area / 2), math.sin(area / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def free_evolution(phase: float) -> np.ndarray:
    """Relative phase ``phase`` split symmetrically between the two arms."""
    return np.diag([np.exp(0.5j * phase), np.exp(-0.5j * phase)])


def ramsey_propagator(phase: float, pulse_area_error: float = 0.0) -> np.ndarray:
    area = 0.5 * math.pi * (1.0 + pulse_area_error)
    return pulse(area) @ free_evolution(phase) @ pulse(area)


def fringe_population(phase: float, pulse_area_error: float = 0.0) -> float:
    """Population detected in the upper inversion state after the second pulse,
    starting from the lower one.  Ideal pulses give (1 + cos phase)/2."""
    amp = ramsey_propagator(phase, pulse_area_error) @ np.array([1.0, 0.0])
    return float(min(1.0, max(0.0, abs(amp[1]) ** 2)))


def ramsey_fringe(params: RamseyParams, constants: PhysicalConstants | None = None) -> float:
    phi = ammonia_hmw_phase(params.d_a, params.B, params.L, constants)
    return fringe_population(phi + params.readout_detuning_phase, params.pulse_area_error)


def fringe_contrast(pulse_area_error: float = 0.0, samples: int = 721) -> float:
    """max - min of the fringe over one 2 pi period of phase."""
    phases = np.linspace(0.0, 2 * math.pi, samples)
    pops = [fringe_population(p, pulse_area_error) for p in phases]
    return max(pops) - min(pops)


@dataclass(frozen=True)
class FringeRow:
    B_gauss: float
    phi_rad: float
    population: float


FRINGE_COLUMNS = ("B_gauss", "phi_rad", "population")


def scan_fringes(B_grid, d_a: float | None = None, L: float = 1.0, v: float = 1e5,
                 pulse_area_error: float = 0.0, readout_detuning_phase: float = 0.0,
                 constants: PhysicalConstants | None = None) -> list[FringeRow]:
    k = constants or default_constants()
    d_a = k.d_ammonia if d_a is None else d_a
    rows = []
    for B in B_grid:
        params = RamseyParams(d_a, v, L, float(B), pulse_area_error, readout_detuning_phase)
        rows.append(FringeRow(float(B), ammonia_hmw_phase(d_a, float(B), L, k), ramsey_fringe(params, k)))
    return rows
