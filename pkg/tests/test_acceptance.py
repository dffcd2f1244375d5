"""Exit criteria, one test per criterion, each printing a PASS/FAIL line.

Expected values come from independent routes where one exists: scipy
matrix exponentials, brentq root finding, adaptive quadrature.
"""

import math

import numpy as np
import pytest
from scipy import linalg, optimize

from topophase import ammonia_ramsey as ar
from topophase import hydrogen_quench as hq
from topophase import paths
from topophase.cli import run
from topophase.constants import REDUCED, default_constants
from topophase.em_sources import EMField, Probe, SourceConfig, SourceKind, dualize_config, dualize_field
from topophase.lorentz_frames import phase_from_comoving
from topophase.phase_engine import (
    PhaseKind,
    closed_form_phase,
    integral_phase,
    phase_ab_integral,
    phase_ac_integral,
    phase_dab_integral,
    phase_hmw_integral,
)

K = default_constants()
TWO_PI = 2 * math.pi
Z = np.array([0.0, 0.0, 1.0])


def rel(a, b):
    return abs(a - b) / abs(b)


def test_01_constants_consistency(acceptance_report):
    da = rel(K.e_charge**2 / (K.hbar * K.c), K.alpha)
    db = rel(K.hbar**2 / (K.m_e * K.e_charge**2), K.a_B)
    acceptance_report(1, "constants consistency", da <= 1e-6 and db <= 1e-6,
                      f"alpha rel dev {da:.2e}, a_B rel dev {db:.2e} (tol 1e-6)")


def test_02_hydrogen_phase_coefficient(acceptance_report):
    phi = hq.hmw_phase_hydrogen(1.0, 1.0)
    acceptance_report(2, "hmw phase at B=1 G, L=1 cm", 0.239 <= phi <= 0.242, f"{phi:.6f} rad in [0.239, 0.242]")


def test_03_quench_rate_coefficient(acceptance_report):
    g = hq.quench_rate(1e6, 1.0)
    b2 = max(rel(hq.quench_rate(1e6, B, warn=False), g * B**2) for B in (0.3, 10.0, 150.0))
    v2 = max(rel(hq.quench_rate(v, 1.0), g * (v / 1e6) ** 2) for v in (5e5, 2e6, 7e6))
    ok = abs(g - 92.6) <= 0.5 and b2 <= 1e-9 and v2 <= 1e-9
    acceptance_report(3, "quench rate 92.6 B^2", ok, f"{g:.4f} /s at B=1 (92.6 +/- 0.5); B^2 dev {b2:.1e}; v^2 dev {v2:.1e}")


def test_04_one_over_e_field(acceptance_report):
    root = optimize.brentq(lambda B: hq.transmission(hq.BeamParams(1e6, 1.0, B), warn=False) - math.exp(-1),
                           1.0, 1000.0, xtol=1e-12)
    acceptance_report(4, "1/e transmission field", 100.0 <= root <= 108.0, f"root {root:.3f} G in [100, 108]")


def test_05_eight_pi(acceptance_report):
    phi = hq.hmw_phase_hydrogen(100.0, 1.0)
    dev = rel(phi, 8 * math.pi)
    acceptance_report(5, "phase at 100 G within 5% of 8 pi", dev <= 0.05, f"{phi:.4f} rad, dev {dev:.2%}")


def test_06_stark_oscillation(acceptance_report):
    Omega = hq.rabi_frequency(100.0, 1e6)
    worst = 0.0
    for wt in np.linspace(0.0, 100.0, 9):
        s = hq.evolve_two_level(hq.TwoLevelAmplitudes(), Omega, 0.0, 0.0, wt / Omega)
        worst = max(worst, abs(s.c_2s - math.cos(wt)), abs(s.c_2p - 1j * math.sin(wt)))
    t0 = 1.0 / 1e6
    T_formula = math.pi * t0 / hq.hmw_phase_hydrogen(100.0, 1.0)
    # the evolved state returns to |2s> (up to sign) after one period
    back = hq.evolve_two_level(hq.TwoLevelAmplitudes(), Omega, 0.0, 0.0, T_formula)
    pdev = max(rel(hq.oscillation_period(100.0, 1.0, 1e6), T_formula), abs(abs(back.c_2s) - 1.0))
    ok = worst <= 1e-8 and pdev <= 1e-6
    acceptance_report(6, "Stark oscillation (cos, i sin)", ok, f"max component error {worst:.2e} (tol 1e-8); period dev {pdev:.1e} (tol 1e-6)")


def test_07_decay_oracle(acceptance_report):
    Gamma = K.gamma_2p
    devs = []
    for ratio in (0.05, 0.04, 0.02):
        Omega = ratio * Gamma
        rate = 4 * Omega**2 / Gamma
        t = np.linspace(30 / Gamma, 3 / rate, 200)
        gen = np.array([[0, 1j * Omega], [1j * Omega, -Gamma / 2]])
        # brute-force oracle: exact propagation, then a log-linear fit
        surv = np.array([abs((linalg.expm(gen * ti) @ [1, 0])[0]) ** 2 for ti in t])
        oracle_rate = -np.polyfit(t, np.log(surv), 1)[0]
        assert rel(oracle_rate, rate) <= 0.02
        times, amps = hq.evolve_two_level_trajectory(hq.TwoLevelAmplitudes(), Omega, 0.0, Gamma, 3 / rate)
        fit = hq.fitted_survival_rate(times, amps, skip=30 / Gamma)
        devs.append(rel(fit, rate))
    gap = hq.rate_model_ratio(1e6)
    print(f"      model note: two-level elimination rate / quench rate = {gap:.3f} at v = 1e6 cm/s")
    acceptance_report(7, "fitted decay vs 4 Omega^2/Gamma", max(devs) <= 0.02,
                      f"max dev {max(devs):.2%} (tol 2%); elimination/quench-rate ratio {gap:.3f}")


def _grad_chi(x):
    return np.column_stack([np.cos(x[:, 0]) * np.cos(x[:, 1]), -np.sin(x[:, 0]) * np.sin(x[:, 1]), 0.0 * x[:, 2]])


def test_08_phase_engine(acceptance_report):
    strengths = {PhaseKind.AB: TWO_PI, PhaseKind.DAB: TWO_PI, PhaseKind.AC: 1.0, PhaseKind.HMW: 1.0}
    shapes = [paths.circle(1.0), paths.ellipse(2.0, 1.0), paths.square(1.0)]
    shape_dev = wind_dev = rep_dev = 0.0
    circle = paths.circle(1.0, n=2048)
    warped = paths.from_function(lambda s: np.column_stack([
        np.cos(TWO_PI * (s + 0.12 * np.sin(TWO_PI * s))),
        np.sin(TWO_PI * (s + 0.12 * np.sin(TWO_PI * s))),
        0 * s]), n=2048)
    for kind, s in strengths.items():
        cf = closed_form_phase(kind, 1.0, s, 1, REDUCED)
        for p in shapes:
            shape_dev = max(shape_dev, rel(integral_phase(kind, p, 1.0, s, REDUCED).value, cf))
        for n in (2, 4):
            r = integral_phase(kind, circle.repeated(n), 1.0, s, REDUCED)
            wind_dev = max(wind_dev, rel(r.value, n * cf) + abs(r.winding - n))
        # same geometric loop, different parametrization of its samples and of time
        a = integral_phase(kind, circle, 1.0, s, REDUCED).value
        b = integral_phase(kind, warped.with_times(np.cumsum(np.linspace(1, 3, len(warped)))), 1.0, s, REDUCED).value
        rep_dev = max(rep_dev, rel(b, a))
    gauge_dev = 0.0
    for fn, kind in ((phase_ab_integral, SourceKind.MAG_FLUX_TUBE), (phase_dab_integral, SourceKind.ELEC_FLUX_TUBE)):
        src = SourceConfig(kind, TWO_PI)
        for p in shapes:
            gauge_dev = max(gauge_dev, rel(fn(p, 1.0, src, REDUCED, gauge_gradient=_grad_chi).value,
                                           fn(p, 1.0, src, REDUCED).value))
    ok = shape_dev <= 1e-6 and wind_dev <= 1e-6 and rep_dev < 1e-9 and gauge_dev < 1e-9
    acceptance_report(8, "topological phase engine", ok,
                      f"shapes {shape_dev:.1e} (1e-6), winding-n {wind_dev:.1e} (1e-6), "
                      f"reparam {rep_dev:.1e} (1e-9), gauge {gauge_dev:.1e} (1e-9)")


def test_09_duality(acceptance_report):
    p = paths.ellipse(1.7, 0.9, center=(0.2, 0.1))
    dev = 0.0
    for s, t in ((1.0, 1.0), (2.5, -0.4), (-0.3, 7.0)):
        hmw = phase_hmw_integral(p, s * Z, SourceConfig(SourceKind.MONOPOLE_LINE, t), REDUCED).value
        ac = phase_ac_integral(p, s * Z, SourceConfig(SourceKind.CHARGE_LINE, t), REDUCED).value
        dev = max(dev, rel(hmw, -ac))
    rng = np.random.default_rng(11)
    fields_ok = True
    configs_ok = True
    for _ in range(10):
        f = EMField(rng.normal(size=3), rng.normal(size=3))
        fields_ok &= dualize_field(dualize_field(dualize_field(dualize_field(f)))) == f
        axis = rng.normal(size=3)
        src = SourceConfig(list(SourceKind)[rng.integers(4)], rng.normal(), axis / np.linalg.norm(axis), rng.normal(size=3))
        probe = Probe(rng.normal(), rng.normal(), rng.normal(size=3), rng.normal(size=3))
        configs_ok &= dualize_config(*dualize_config(src, probe)) == (src, probe)
    ok = dev <= 1e-9 and fields_ok and configs_ok
    acceptance_report(9, "duality", ok, f"HMW vs -AC dev {dev:.1e} (1e-9); D^4 = 1 {fields_ok}; config involution {configs_ok}")


def test_10_comoving_frame(acceptance_report):
    ab_src = SourceConfig(SourceKind.MAG_FLUX_TUBE, TWO_PI)
    ac_src = SourceConfig(SourceKind.CHARGE_LINE, 1.0)
    ab_ref = phase_ab_integral(paths.circle(1.0), 1.0, ab_src, REDUCED).value
    ac_ref = phase_ac_integral(paths.ellipse(2.0, 1.0), Z, ac_src, REDUCED).value
    bound_ok, ratios, worst = True, [], 0.0
    for beta in (1e-3, 1e-4, 1e-5):
        errs = []
        for b in (beta, beta / 2):
            e_ab = rel(phase_from_comoving(ab_src, Probe(e=1.0), paths.circle(1.0, speed=b), REDUCED), ab_ref)
            e_ac = rel(phase_from_comoving(ac_src, Probe(m=Z), paths.ellipse(2.0, 1.0, speed=b), REDUCED), ac_ref)
            bound_ok &= e_ab <= 5 * b and e_ac <= 5 * b
            worst = max(worst, e_ab / b, e_ac / b)
            errs.append((e_ab, e_ac))
        ratios += [errs[0][0] / errs[1][0], errs[0][1] / errs[1][1]]
    ok = bound_ok and min(ratios) >= 1.8
    acceptance_report(10, "co-moving phase vs line integral", ok,
                      f"max err/(v/c) {worst:.1e} (<= 5); min halving ratio {min(ratios):.2f} (>= 1.8)")


def test_11_ammonia(acceptance_report):
    phis = np.linspace(0, TWO_PI, 1441)
    pops = np.array([ar.fringe_population(p) for p in phis])
    shape_dev = np.max(np.abs(pops - (1 + np.cos(phis)) / 2))
    contrast = pops.max() - pops.min()
    phi = ar.ammonia_hmw_phase(1.47e-18, 100.0, 1.0)
    ok = abs(contrast - 1) <= 1e-9 and shape_dev <= 1e-9 and abs(phi - 4.65) <= 0.02
    acceptance_report(11, "ammonia Ramsey", ok, f"contrast {contrast:.12f}; fringe dev {shape_dev:.1e}; phase {phi:.4f} rad (4.65 +/- 0.02)")


COMMANDS = [
    ["phase", "--reduced-units", "--kind", "HMW", "--geometry", "square"],
    ["dual", "--kind", "AC"],
    ["boost", "--E", "1,2,3", "--B", "0,0,100", "--v", "1e6,2e5,0"],
    ["quench", "--grid", "0:300:31"],
    ["ramsey", "--grid", "0:200:41", "--pulse-error", "0.05"],
    ["selfcheck"],
]


def test_12_cli_determinism(acceptance_report, tmp_path):
    same = True
    codes = []
    for i, argv in enumerate(COMMANDS):
        outputs = []
        for j in range(2):
            target = tmp_path / f"{i}_{j}.out"
            codes.append(run(argv + ["--out", str(target)]))
            outputs.append(target.read_bytes())
        same &= outputs[0] == outputs[1] and len(outputs[0]) > 0
    selfcheck_text = (tmp_path / f"{len(COMMANDS) - 1}_0.out").read_text()
    ok = same and all(c == 0 for c in codes) and "11/11 checks passed" in selfcheck_text
    acceptance_report(12, "CLI determinism and selfcheck", ok,
                      f"byte-identical reruns {same}; exit codes {sorted(set(codes))}; selfcheck exit 0 with 11/11")
