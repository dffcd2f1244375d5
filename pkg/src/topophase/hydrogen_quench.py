"""Metastable H(2s) beam crossing a transverse magnet.

In the atom's rest frame the lab field B appears as a motional electric field
E' = vB/c, which mixes |200> and |210> through the linear Stark effect.  The
resulting 2s <-> 2p oscillation, fed into the fast 2p -> 1s decay, quenches
the metastable beam.  The accumulated Stark phase across the magnet is the
He-McKellar-Wilkens phase.

Two rate models live here side by side:

* ``quench_rate`` is the hyperfine-averaged, solid-angle-integrated rate
  (3^10/2^8) alpha^-3 (a_B^3/hbar) (vB/c)^2, about 92.8 B^2 per second at
  v = 1e6 cm/s.  ``transmission`` uses it.
* ``elimination_rate`` is the 4 Omega^2 / Gamma_2p limit of the bare two-level
  model integrated by ``evolve_two_level``.  It is about 4x larger; the gap is
  reported by ``rate_model_ratio`` and is not reconciled.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from topophase.constants import PhysicalConstants, default_constants
from topophase.errors import StepSizeUnderflowError, ValidityWarning

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class StarkEigensystem:
    """Linear Stark doublet of the n = 2, m = 0 manifold in the (|200>, |210>) basis."""

    shift_plus: float
    shift_minus: float
    state_plus: tuple[float, float]
    state_minus: tuple[float, float]


def stark_eigensystem(E_prime: float, constants: PhysicalConstants | None = None) -> StarkEigensystem:
    if E_prime < 0:
        raise ValueError("field magnitude must be non-negative")
    k = constants or default_constants()
    shift = 3.0 * k.a_B * k.e_charge * E_prime
    return StarkEigensystem(shift, -shift, (_SQRT_HALF, _SQRT_HALF), (_SQRT_HALF, -_SQRT_HALF))


@dataclass(frozen=True)
class BeamParams:
    v: float = 1e6  # cm/s
    L: float = 1.0  # cm
    B: float = 0.0  # G
    detuning: float = 0.0  # rad/s, 2p above 2s
    constants: PhysicalConstants = field(default_factory=default_constants)

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError("beam speed must be positive")
        if not self.L > 0:
            raise ValueError("field length must be positive")
        if not self.B >= 0:
            raise ValueError("field must be non-negative")

    @property
    def t0(self) -> float:
        """Time of flight through the field region."""
        return self.L / self.v


@dataclass(frozen=True)
class TwoLevelAmplitudes:
    c_2s: complex = 1.0 + 0j
    c_2p: complex = 0j

    @property
    def norm(self) -> float:
        return abs(self.c_2s) ** 2 + abs(self.c_2p) ** 2

    @property
    def survival(self) -> float:
        return abs(self.c_2s) ** 2


def hmw_phase_hydrogen(B: float, L: float, constants: PhysicalConstants | None = None) -> float:
    """3 a_B e B L / (hbar c): about 0.241 rad per G cm."""
    if B < 0 or L <= 0:
        raise ValueError("need B >= 0 and L > 0")
    k = constants or default_constants()
    return 3.0 * k.a_B * k.e_charge * B * L / k.hbar_c


def rabi_frequency(B: float, v: float, constants: PhysicalConstants | None = None) -> float:
    """Stark coupling 3 a_B e (vB/c) / hbar, so that the phase is Omega * t0."""
    if B < 0 or v <= 0:
        raise ValueError("need B >= 0 and v > 0")
    k = constants or default_constants()
    return 3.0 * k.a_B * k.e_charge * v * B / k.hbar_c


def oscillation_period(B: float, L: float, v: float, constants: PhysicalConstants | None = None) -> float:
    """pi t0 / phi: time for a full 2s -> 2p -> 2s population cycle."""
    return math.pi * (L / v) / hmw_phase_hydrogen(B, L, constants)


def decay_length_2p(v: float, constants: PhysicalConstants | None = None) -> float:
    """Distance flown in one 2p lifetime (1.6e-3 cm at 1e6 cm/s)."""
    k = constants or default_constants()
    return v * k.tau_2p


def _generator(Omega, detuning, Gamma):
    # d/dt (c_2s, c_2p) = G @ c ; coupling sign chosen so c_2p = +i sin(Omega t)
    return np.array([[0.0, 1j * Omega], [1j * Omega, -1j * detuning - 0.5 * Gamma]])


def _rk4_matrix(gen: np.ndarray, h: float) -> np.ndarray:
    """One classic RK4 step for a constant linear generator, as a matrix."""
    z = gen * h
    z2 = z @ z
    z3 = z2 @ z
    return np.eye(2) + z + z2 / 2.0 + z3 / 6.0 + z3 @ z / 24.0


def _run(M: np.ndarray, c0: np.ndarray, nsteps: int, record: bool):
    a, b, c, d = (complex(x) for x in M.ravel())
    x, y = complex(c0[0]), complex(c0[1])
    if record:
        out = np.empty((nsteps + 1, 2), dtype=complex)
        out[0] = x, y
        for i in range(1, nsteps + 1):
            x, y = a * x + b * y, c * x + d * y
            out[i] = x, y
        return out
    for _ in range(nsteps):
        x, y = a * x + b * y, c * x + d * y
    return np.array([x, y])


def _integrate(state, Omega, detuning, Gamma, t, rtol, max_steps, record):
    if t < 0:
        raise ValueError("evolution time must be non-negative")
    if Omega < 0 or Gamma < 0:
        raise ValueError("Omega and Gamma must be non-negative")
    c0 = np.array([state.c_2s, state.c_2p], dtype=complex)
    if t == 0:
        return (np.array([0.0]), c0[None, :]) if record else c0
    rates = [r for r in (Omega, Gamma, abs(detuning)) if r > 0]
    h = min([0.02 / r for r in rates] + [t])
    n = max(1, math.ceil(t / h))
    gen = _generator(Omega, detuning, Gamma)
    prev = _run(_rk4_matrix(gen, t / n), c0, n, False)
    scale = max(1.0, float(np.max(np.abs(c0))))
    while True:
        n *= 2
        if n > max_steps:
            raise StepSizeUnderflowError(
                f"no convergence to rtol={rtol:g} within {max_steps} RK4 steps"
            )
        M = _rk4_matrix(gen, t / n)
        if record:
            traj = _run(M, c0, n, True)
            cur = traj[-1]
        else:
            cur = _run(M, c0, n, False)
        if np.max(np.abs(cur - prev)) <= rtol * scale:
            break
        prev = cur
    if record:
        return np.linspace(0.0, t, n + 1), traj
    return cur


def evolve_two_level(state: TwoLevelAmplitudes, Omega: float, detuning: float, Gamma: float, t: float,
                     rtol: float = 1e-8, max_steps: int = 2**22) -> TwoLevelAmplitudes:
    """Propagate (c_2s, c_2p) for time ``t`` under the non-Hermitian generator

        i dc_2s/dt = -Omega c_2p
        i dc_2p/dt = -Omega c_2s + (detuning - i Gamma/2) c_2p

    with fixed-step RK4.  The starting step is min(0.02/Omega, 0.02/Gamma,
    0.02/|detuning|); the step is halved until two successive resolutions agree
    to ``rtol``.  With Gamma = detuning = 0 and c(0) = (1, 0) the exact solution
    is (cos Omega t, i sin Omega t).
    """
    c = _integrate(state, Omega, detuning, Gamma, t, rtol, max_steps, record=False)
    return TwoLevelAmplitudes(complex(c[0]), complex(c[1]))


def evolve_two_level_trajectory(state: TwoLevelAmplitudes, Omega: float, detuning: float, Gamma: float,
                                t: float, rtol: float = 1e-8, max_steps: int = 2**22):
    """Like ``evolve_two_level`` but returns (times, amplitudes (N, 2)) on the
    accepted RK4 grid."""
    return _integrate(state, Omega, detuning, Gamma, t, rtol, max_steps, record=True)


def fitted_survival_rate(times: np.ndarray, amplitudes: np.ndarray, skip: float = 0.0) -> float:
    """Least-squares slope of -ln|c_2s|^2 against time, ignoring t < skip."""
    mask = times >= skip
    survival = np.abs(amplitudes[mask, 0]) ** 2
    slope = np.polyfit(times[mask], np.log(survival), 1)[0]
    return float(-slope)


def elimination_rate(v: float, B: float, constants: PhysicalConstants | None = None) -> float:
    """4 Omega^2 / Gamma_2p, the strongly damped limit of the two-level model."""
    k = constants or default_constants()
    omega = rabi_frequency(B, v, k)
    return 4.0 * omega**2 / k.gamma_2p


def is_perturbative(v: float, B: float, constants: PhysicalConstants | None = None) -> bool:
    """False once Omega/Gamma_2p > 0.1 or B reaches a tenth of the level-crossing field."""
    k = constants or default_constants()
    return rabi_frequency(B, v, k) / k.gamma_2p <= 0.1 and B < k.B_res / 10.0


def quench_rate(v: float, B: float, constants: PhysicalConstants | None = None, warn: bool = True) -> float:
    """Motional-Stark quench rate gamma(2s1/2 -> 1s1/2) in 1/s.

    Emits ``ValidityWarning`` outside the perturbative regime (see
    ``is_perturbative``); the value is still returned.
    """
    if v <= 0 or B < 0:
        raise ValueError("need v > 0 and B >= 0")
    k = constants or default_constants()
    rate = 3**10 / 2**8 / k.alpha**3 * k.a_B**3 / k.hbar * (v * B / k.c) ** 2
    if warn and not is_perturbative(v, B, k):
        warnings.warn(f"B = {B:g} G at v = {v:g} cm/s is outside the perturbative regime",
                      ValidityWarning, stacklevel=2)
    return rate


def quench_rate_from_phase(v: float, L: float, phase: float, constants: PhysicalConstants | None = None) -> float:
    """The same rate written through the phase: (3^8/2^8) alpha^-4 a_B/(c t0^2) phi^2."""
    k = constants or default_constants()
    t0 = L / v
    return 3**8 / 2**8 / k.alpha**4 * k.a_B / (k.c * t0**2) * phase**2


def rate_model_ratio(v: float = 1e6, constants: PhysicalConstants | None = None) -> float:
    """elimination_rate / quench_rate; independent of B (about 4.01 at 1e6 cm/s)."""
    k = constants or default_constants()
    return elimination_rate(v, 1.0, k) / quench_rate(v, 1.0, k, warn=False)


def transmission(params: BeamParams, warn: bool = True) -> float:
    """Surviving 2s fraction exp(-gamma t0 - t0/tau_2s) after the field region."""
    k = params.constants
    t0 = params.t0
    gamma = quench_rate(params.v, params.B, k, warn=warn)
    return math.exp(-gamma * t0 - t0 / k.tau_2s)


def field_for_transmission(target: float, v: float = 1e6, L: float = 1.0,
                           constants: PhysicalConstants | None = None) -> float:
    """Field B at which ``transmission`` equals ``target`` (closed-form inverse)."""
    if not 0 < target <= 1:
        raise ValueError("target transmission must lie in (0, 1]")
    k = constants or default_constants()
    t0 = L / v
    need = -math.log(target) - t0 / k.tau_2s
    if need < 0:
        raise ValueError("target is above the zero-field transmission")
    coeff = quench_rate(v, 1.0, k, warn=False)
    return math.sqrt(need / (coeff * t0))


def two_level_survival(params: BeamParams) -> float:
    """2s population after the field region from the two-level model (no
    hyperfine averaging), with the configured detuning."""
    k = params.constants
    omega = rabi_frequency(params.B, params.v, k)
    end = evolve_two_level(TwoLevelAmplitudes(), omega, params.detuning, k.gamma_2p, params.t0)
    return end.survival * math.exp(-params.t0 / k.tau_2s)


@dataclass(frozen=True)
class QuenchRow:
    B_gauss: float
    phi_hmw_rad: float
    gamma_per_s: float
    transmission: float
    valid: bool


QUENCH_COLUMNS = ("B_gauss", "phi_hmw_rad", "gamma_per_s", "transmission", "validity_flag")


def scan_transmission(B_grid, v: float = 1e6, L: float = 1.0,
                      constants: PhysicalConstants | None = None) -> list[QuenchRow]:
    k = constants or default_constants()
    rows = []
    for B in B_grid:
        B = float(B)
        params = BeamParams(v=v, L=L, B=B, constants=k)
        rows.append(QuenchRow(
            B,
            hmw_phase_hydrogen(B, L, k),
            quench_rate(v, B, k, warn=False),
            transmission(params, warn=False),
            is_perturbative(v, B, k),
        ))
    return rows
