"""The four topological phases, in closed form and as numerical loop integrals.

==========  ==================  =============  ==========================
kind        probe               source         closed form (per winding)
==========  ==================  =============  ==========================
AB          charge e            MagFluxTube    e Phi_M / hbar c
AC          magnetic dipole m   ChargeLine     4 pi m lambda_E / hbar c
DAB         monopole g          ElecFluxTube   -g Phi_E / hbar c
HMW         electric dipole d   MonopoleLine   -4 pi d lambda_M / hbar c
==========  ==================  =============  ==========================

Loop integrals are midpoint sums over the path polyline with Richardson
extrapolation (see ``paths.segment_romberg``).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from topophase.constants import CGS, Units
from topophase.em_sources import SourceConfig, SourceKind, eval_field, eval_vector_potential
from topophase.errors import NonParallelDipoleWarning, NotClosedError, WrongKindError
from topophase.paths import ParamPath, segment_romberg, winding_number


class PhaseKind(str, enum.Enum):
    AB = "AB"
    AC = "AC"
    DAB = "DAB"
    HMW = "HMW"


SOURCE_FOR_KIND = {
    PhaseKind.AB: SourceKind.MAG_FLUX_TUBE,
    PhaseKind.AC: SourceKind.CHARGE_LINE,
    PhaseKind.DAB: SourceKind.ELEC_FLUX_TUBE,
    PhaseKind.HMW: SourceKind.MONOPOLE_LINE,
}

DUAL_KIND = {
    PhaseKind.AB: PhaseKind.DAB,
    PhaseKind.DAB: PhaseKind.AB,
    PhaseKind.AC: PhaseKind.HMW,
    PhaseKind.HMW: PhaseKind.AC,
}


@dataclass(frozen=True)
class PhaseResult:
    value: float
    kind: PhaseKind
    winding: int
    error_estimate: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("phase must be finite")


def closed_form_phase(kind, probe_strength: float, source_strength: float, winding: int = 1,
                      units: Units = CGS) -> float:
    kind = PhaseKind(kind)
    q, s = probe_strength, source_strength
    per_turn = {
        PhaseKind.AB: q * s,
        PhaseKind.AC: 4.0 * math.pi * q * s,
        PhaseKind.DAB: -q * s,
        PhaseKind.HMW: -4.0 * math.pi * q * s,
    }[kind]
    return winding * per_turn / units.hbar_c


def _require(src: SourceConfig, kind: PhaseKind, path: ParamPath) -> int:
    if src.kind is not SOURCE_FOR_KIND[kind]:
        raise WrongKindError(f"{kind.value} phase needs a {SOURCE_FOR_KIND[kind].value}, got {src.kind.value}")
    if not path.closed:
        raise NotClosedError(f"{kind.value} phase needs a closed path")
    return winding_number(path, src.axis, src.axis_point)


def _line_integral(path: ParamPath, field_fn) -> tuple[float, float]:
    """Romberg-extrapolated  sum over segments of  field_fn(x) . dl."""
    dl = path.segments

    def integrand(x, idx):
        return np.einsum("ij,ij->i", field_fn(x), dl[idx])

    return segment_romberg(path.points, integrand)


def _flux_tube_phase(kind, path, charge, src, units, gauge_gradient, sign):
    winding = _require(src, kind, path)

    def potential(x):
        a = eval_vector_potential(src, x)
        if gauge_gradient is not None:
            a = a + gauge_gradient(x)
        return a

    loop, err = _line_integral(path, potential)
    scale = sign * charge / units.hbar_c
    return PhaseResult(scale * loop, kind, winding, abs(scale) * err)


def phase_ab_integral(path: ParamPath, e: float, src: SourceConfig, units: Units = CGS,
                      gauge_gradient=None) -> PhaseResult:
    """(e / hbar c) * loop integral of A . dl around a magnetic flux tube.

    ``gauge_gradient(x) -> (M, 3)`` adds grad(chi) to A; closed-loop results
    must not depend on it.
    """
    return _flux_tube_phase(PhaseKind.AB, path, e, src, units, gauge_gradient, +1.0)


def phase_dab_integral(path: ParamPath, g: float, src: SourceConfig, units: Units = CGS,
                       gauge_gradient=None) -> PhaseResult:
    """-(g / hbar c) * loop integral of A_E . dl around an electric flux tube."""
    return _flux_tube_phase(PhaseKind.DAB, path, g, src, units, gauge_gradient, -1.0)


def _check_parallel(dipole: np.ndarray, src: SourceConfig) -> None:
    norm = np.linalg.norm(dipole)
    if norm == 0.0:
        return
    sin_angle = np.linalg.norm(np.cross(dipole, src.axis)) / norm
    if sin_angle > 1e-9:
        warnings.warn(
            f"dipole is {math.asin(min(sin_angle, 1.0)):.3g} rad off the source axis; "
            "the loop integral is computed anyway",
            NonParallelDipoleWarning,
            stacklevel=3,
        )


def phase_hmw_integral(path: ParamPath, d, src: SourceConfig, units: Units = CGS) -> PhaseResult:
    """-(1 / hbar c) * loop integral of (d x B) . dl around a monopole line."""
    d = np.asarray(d, dtype=float)
    winding = _require(src, PhaseKind.HMW, path)
    _check_parallel(d, src)
    loop, err = _line_integral(path, lambda x: np.cross(d, eval_field(src, x).B))
    return PhaseResult(-loop / units.hbar_c, PhaseKind.HMW, winding, err / units.hbar_c)


def phase_ac_integral(path: ParamPath, m, src: SourceConfig, units: Units = CGS) -> PhaseResult:
    """+(1 / hbar c) * loop integral of (m x E) . dl around a line of charge."""
    m = np.asarray(m, dtype=float)
    winding = _require(src, PhaseKind.AC, path)
    _check_parallel(m, src)
    loop, err = _line_integral(path, lambda x: np.cross(m, eval_field(src, x).E))
    return PhaseResult(loop / units.hbar_c, PhaseKind.AC, winding, err / units.hbar_c)


def integral_phase(kind, path: ParamPath, probe_strength: float, source_strength: float,
                   units: Units = CGS, axis=(0.0, 0.0, 1.0), axis_point=(0.0, 0.0, 0.0)) -> PhaseResult:
    """Dispatch on ``kind`` with scalar strengths; dipoles are taken along the axis."""
    kind = PhaseKind(kind)
    src = SourceConfig(SOURCE_FOR_KIND[kind], source_strength, np.asarray(axis, float), np.asarray(axis_point, float))
    if kind is PhaseKind.AB:
        return phase_ab_integral(path, probe_strength, src, units)
    if kind is PhaseKind.DAB:
        return phase_dab_integral(path, probe_strength, src, units)
    dipole = probe_strength * src.axis
    if kind is PhaseKind.HMW:
        return phase_hmw_integral(path, dipole, src, units)
    return phase_ac_integral(path, dipole, src, units)
