"""Reproduce every headline number and consistency property in one pass.

``run_checks`` returns one ``Check`` per criterion; the CLI ``selfcheck``
subcommand prints them and exits non-zero on any failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from topophase import ammonia_ramsey as ar
from topophase import hydrogen_quench as hq
from topophase import paths
from topophase.constants import REDUCED, PhysicalConstants, default_constants
from topophase.em_sources import EMField, Probe, SourceConfig, SourceKind, dualize_config, dualize_field
from topophase.lorentz_frames import phase_from_comoving
from topophase.phase_engine import (
    PhaseKind,
    closed_form_phase,
    integral_phase,
    phase_ab_integral,
    phase_dab_integral,
)

DEFAULT_TOLERANCES = {
    "constants": 1e-6,
    "gamma_abs": 0.5,
    "power_law": 1e-9,
    "eight_pi": 0.05,
    "dynamics": 1e-8,
    "period": 1e-6,
    "decay_oracle": 0.02,
    "phase": 1e-6,
    "reparam": 1e-9,
    "gauge": 1e-9,
    "duality": 1e-9,
    "comoving_factor": 5.0,
    "convergence_ratio": 1.8,
    "contrast": 1e-9,
    "ammonia_abs": 0.02,
}


class ToleranceError(ValueError):
    pass


def resolve_tolerances(overrides: dict | None = None) -> dict:
    tol = dict(DEFAULT_TOLERANCES)
    for key, value in (overrides or {}).items():
        if key not in tol:
            raise ToleranceError(f"unknown tolerance {key!r}; known: {', '.join(sorted(tol))}")
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ToleranceError(f"tolerance {key!r} must be a number") from None
        if not (math.isfinite(value) and value > 0):
            raise ToleranceError(f"tolerance {key!r} must be positive, got {value}")
        tol[key] = value
    return tol


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.number:2d}] {self.name}: {self.detail}"


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def check_constants(k: PhysicalConstants, tol) -> Check:
    da, db = k.alpha_deviation(), k.bohr_radius_deviation()
    ok = abs(da) <= tol["constants"] and abs(db) <= tol["constants"]
    return Check(1, "constants consistency", ok, f"alpha rel dev {da:.3e}, a_B rel dev {db:.3e}")


def check_eq3a(k, tol) -> Check:
    phi = hq.hmw_phase_hydrogen(1.0, 1.0, k)
    return Check(2, "hydrogen phase per G cm", 0.239 <= phi <= 0.242, f"{phi:.6f} rad (window [0.239, 0.242])")


def check_quench_rate(k, tol) -> Check:
    g1 = hq.quench_rate(1e6, 1.0, k, warn=False)
    quad = max(_rel(hq.quench_rate(1e6, B, k, warn=False) / B**2, g1) for B in (0.5, 3.0, 50.0))
    vsq = _rel(hq.quench_rate(2e6, 1.0, k, warn=False), 4.0 * g1)
    ok = abs(g1 - 92.6) <= tol["gamma_abs"] and quad <= tol["power_law"] and vsq <= tol["power_law"]
    return Check(3, "quench rate coefficient", ok, f"{g1:.4f} /s/G^2; B^2 dev {quad:.1e}, v^2 dev {vsq:.1e}")


def check_one_over_e(k, tol) -> Check:
    B = hq.field_for_transmission(math.exp(-1.0), 1e6, 1.0, k)
    T = hq.transmission(hq.BeamParams(1e6, 1.0, B, constants=k), warn=False)
    ok = 100.0 <= B <= 108.0 and abs(T - math.exp(-1.0)) < 1e-12
    return Check(4, "1/e transmission field", ok, f"B = {B:.3f} G (window [100, 108])")


def check_eight_pi(k, tol) -> Check:
    phi = hq.hmw_phase_hydrogen(100.0, 1.0, k)
    dev = _rel(phi, 8 * math.pi)
    return Check(5, "phase at 100 G", dev <= tol["eight_pi"], f"{phi:.4f} rad vs 8 pi = {8 * math.pi:.4f} ({dev:.2%})")


def check_dynamics(k, tol) -> Check:
    omega = 1.0
    worst = 0.0
    for wt in (0.3, math.pi / 2, 10.0, 100.0):
        s = hq.evolve_two_level(hq.TwoLevelAmplitudes(), omega, 0.0, 0.0, wt)
        worst = max(worst, abs(s.c_2s - math.cos(wt)), abs(s.c_2p - 1j * math.sin(wt)))
    T = hq.oscillation_period(100.0, 1.0, 1e6, k)
    expect = math.pi * 1e-6 / hq.hmw_phase_hydrogen(100.0, 1.0, k)
    via_rabi = math.pi / hq.rabi_frequency(100.0, 1e6, k)
    pdev = max(_rel(T, expect), _rel(via_rabi, expect))
    ok = worst <= tol["dynamics"] and pdev <= tol["period"]
    return Check(6, "Stark oscillation dynamics", ok, f"max amplitude error {worst:.2e}; period {T:.4e} s (dev {pdev:.1e})")


def check_decay_oracle(k, tol) -> Check:
    Gamma = k.gamma_2p
    worst = 0.0
    for ratio in (0.05, 0.02):
        omega = ratio * Gamma
        rate = 4 * omega**2 / Gamma
        t_end = 3.0 / rate
        times, amps = hq.evolve_two_level_trajectory(hq.TwoLevelAmplitudes(), omega, 0.0, Gamma, t_end)
        fit = hq.fitted_survival_rate(times, amps, skip=20.0 / Gamma)
        worst = max(worst, _rel(fit, rate))
    gap = hq.rate_model_ratio(1e6, k)
    return Check(7, "two-level decay vs adiabatic elimination", worst <= tol["decay_oracle"],
                 f"max rate dev {worst:.2%}; two-level/quench-rate model ratio {gap:.3f}")


_STRENGTHS = {PhaseKind.AB: 2 * math.pi, PhaseKind.DAB: 2 * math.pi, PhaseKind.AC: 1.0, PhaseKind.HMW: 1.0}


def _grad_chi(x):
    # chi = 0.3 sin(x) cos(2y) + 0.1 x z
    return np.column_stack([
        0.3 * np.cos(x[:, 0]) * np.cos(2 * x[:, 1]) + 0.1 * x[:, 2],
        -0.6 * np.sin(x[:, 0]) * np.sin(2 * x[:, 1]),
        0.1 * x[:, 0],
    ])


def check_phase_engine(k, tol) -> Check:
    shapes = [paths.circle(1.3, n=1024), paths.ellipse(2.0, 1.0, n=1024), paths.square(1.0, n=1024)]
    worst = worst_rep = worst_n = 0.0
    warp = paths.from_function(lambda s: np.column_stack([
        np.cos(2 * np.pi * (s + 0.1 * np.sin(2 * np.pi * s))),
        np.sin(2 * np.pi * (s + 0.1 * np.sin(2 * np.pi * s))),
        np.zeros_like(s)]), n=1024)
    plain = paths.circle(1.0, n=1024)
    for kind, s in _STRENGTHS.items():
        cf = closed_form_phase(kind, 1.0, s, 1, REDUCED)
        for p in shapes:
            worst = max(worst, _rel(integral_phase(kind, p, 1.0, s, REDUCED).value, cf))
        twice = integral_phase(kind, plain.repeated(3), 1.0, s, REDUCED)
        worst_n = max(worst_n, _rel(twice.value, 3 * cf), abs(twice.winding - 3))
        worst_rep = max(worst_rep, _rel(integral_phase(kind, warp, 1.0, s, REDUCED).value,
                                        integral_phase(kind, plain, 1.0, s, REDUCED).value))
    worst_g = 0.0
    for fn, kind in ((phase_ab_integral, SourceKind.MAG_FLUX_TUBE), (phase_dab_integral, SourceKind.ELEC_FLUX_TUBE)):
        src = SourceConfig(kind, 2 * math.pi)
        for p in shapes:
            a = fn(p, 1.0, src, REDUCED).value
            b = fn(p, 1.0, src, REDUCED, gauge_gradient=_grad_chi).value
            worst_g = max(worst_g, _rel(b, a))
    ok = (worst <= tol["phase"] and worst_n <= tol["phase"] and worst_rep <= tol["reparam"]
          and worst_g <= tol["gauge"])
    return Check(8, "topological phase engine", ok,
                 f"shape dev {worst:.1e}, winding-3 dev {worst_n:.1e}, reparam dev {worst_rep:.1e}, gauge dev {worst_g:.1e}")


def check_duality(k, tol) -> Check:
    p = paths.ellipse(1.5, 0.7, n=1024)
    worst = 0.0
    for s, t in ((1.0, 1.0), (0.3, -2.5), (-4.0, 0.7)):
        hmw = integral_phase(PhaseKind.HMW, p, s, t, REDUCED).value
        ac = integral_phase(PhaseKind.AC, p, s, t, REDUCED).value
        worst = max(worst, _rel(hmw, -ac))
    f = EMField(np.array([1.0, -2.0, 0.5]), np.array([0.25, 3.0, -1.5]))
    f4 = dualize_field(dualize_field(dualize_field(dualize_field(f))))
    src = SourceConfig(SourceKind.CHARGE_LINE, 0.7, np.array([0.0, 0.6, 0.8]), np.array([1.0, 2.0, 3.0]))
    probe = Probe(e=1.5, g=-0.5, d=[0.1, 0.2, 0.3], m=[-1.0, 0.0, 2.0])
    s2, p2 = dualize_config(*dualize_config(src, probe))
    ok = worst <= tol["duality"] and f4 == f and s2 == src and p2 == probe
    return Check(9, "duality", ok, f"HMW/AC dev {worst:.1e}; D^4 field identity {f4 == f}; config involution {s2 == src and p2 == probe}")


def _comoving_errors(betas):
    out = []
    for beta in betas:
        ab = phase_from_comoving(SourceConfig(SourceKind.MAG_FLUX_TUBE, 2 * math.pi), Probe(e=1.0),
                                 paths.circle(1.0, n=1024, speed=beta), REDUCED)
        ref_ab = phase_ab_integral(paths.circle(1.0, n=1024), 1.0, SourceConfig(SourceKind.MAG_FLUX_TUBE, 2 * math.pi), REDUCED).value
        ac = phase_from_comoving(SourceConfig(SourceKind.CHARGE_LINE, 1.0), Probe(m=[0.0, 0.0, 1.0]),
                                 paths.ellipse(2.0, 1.0, n=1024, speed=beta), REDUCED)
        ref_ac = integral_phase(PhaseKind.AC, paths.ellipse(2.0, 1.0, n=1024), 1.0, 1.0, REDUCED).value
        out.append((beta, _rel(ab, ref_ab), _rel(ac, ref_ac)))
    return out


def check_comoving(k, tol) -> Check:
    errs = _comoving_errors([1e-3, 5e-4, 1e-5, 5e-6])
    bound_ok = all(e_ab <= tol["comoving_factor"] * b and e_ac <= tol["comoving_factor"] * b for b, e_ab, e_ac in errs)
    ratios = []
    for (b1, ab1, ac1), (b2, ab2, ac2) in ((errs[0], errs[1]), (errs[2], errs[3])):
        ratios += [ab1 / ab2, ac1 / ac2]
    ok = bound_ok and min(ratios) >= tol["convergence_ratio"]
    return Check(10, "co-moving frame phase", ok,
                 f"max rel err {max(max(e[1], e[2]) for e in errs):.2e} at v/c=1e-3; min halving ratio {min(ratios):.2f}")


def check_ammonia(k, tol) -> Check:
    contrast = ar.fringe_contrast(0.0)
    worst = max(abs(ar.fringe_population(p) - (1 + math.cos(p)) / 2) for p in np.linspace(-7, 7, 57))
    phi = ar.ammonia_hmw_phase(1.47e-18, 100.0, 1.0, k)
    ok = abs(contrast - 1.0) <= tol["contrast"] and worst <= tol["contrast"] and abs(phi - 4.65) <= tol["ammonia_abs"]
    return Check(11, "ammonia Ramsey fringe", ok, f"contrast {contrast:.12f}; fringe dev {worst:.1e}; phase(100 G) {phi:.4f} rad")


CHECKS = (
    check_constants, check_eq3a, check_quench_rate, check_one_over_e, check_eight_pi, check_dynamics,
    check_decay_oracle, check_phase_engine, check_duality, check_comoving, check_ammonia,
)


def run_checks(constants: PhysicalConstants | None = None, tolerances: dict | None = None) -> list[Check]:
    k = constants or default_constants()
    tol = resolve_tolerances(tolerances)
    results = []
    for fn in CHECKS:
        try:
            results.append(fn(k, tol))
        except Exception as exc:  # a crash counts as a failed criterion
            number = CHECKS.index(fn) + 1
            results.append(Check(number, fn.__name__.removeprefix("check_"), False, f"error: {exc}"))
    return results
