"""Four-stroke quantum Otto cycles for the anyonic working media.

The cycle runs hot isochore (A -> B, levels fixed at the hot control value,
populations relax from the transported cold state to hot equilibrium),
adiabat (B -> C, populations frozen while the control moves to its cold
value), cold isochore (C -> D, relaxation to cold equilibrium), adiabat
(D -> A, control back to hot).  Only B and D are equilibrium states.
Populations transport across adiabats by quantum-number label, so

    Q_in  = sum_n E_n(hot)  [P_n(B) - P_n(A)]
    Q_out = sum_n E_n(cold) [P_n(B) - P_n(A)]
    W_out = Q_in - Q_out,    eta = W_out / Q_in = 1 - Q_out / Q_in.

Media and their control parameters:

* ``ring``:        flux parameter alpha_h (hot) vs alpha_l (cold) at fixed eps0.
* ``cs-volume``:   ring sizes (L1, L2) at fixed coupling alpha.  The hot
  isochore runs at the compressed size L2 < L1; every level scales as 1/L^2,
  which collapses the efficiency to 1 - L2^2/L1^2 independent of alpha and of
  both temperatures.
* ``cs-coupling``: couplings (alpha1, alpha2) at fixed L, heat intake at
  alpha2 (the engine that trades statistics for work; alpha1 = 0, alpha2 = 1
  is the Bose <-> Fermi cycle).

The efficiency field always carries the raw ratio 1 - Q_out/Q_in; the regime
flag says whether that number is an engine efficiency.  Parameter sweeps
cross regime boundaries, so non-engine points are flagged rather than
rejected.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateCycle, DomainError
from .spectra import CSPairSpectrum, RingAnyonSpectrum
from .thermo import (
    DEFAULT_TAIL_TOL,
    adiabat_path,
    gibbs,
    heat_work_split,
    linear_isochore_path,
)

__all__ = [
    "MEDIA",
    "OttoCycleSpec",
    "CycleReport",
    "StrokeResult",
    "StrokeReport",
    "SweepRow",
    "run_cycle",
    "cycle_strokes",
    "efficiency_cs_volume",
    "sweep_efficiency",
]

MEDIA = ("ring", "cs-volume", "cs-coupling")

REGIME_ENGINE = "engine"
REGIME_REFRIGERATOR = "refrigerator"
REGIME_DEGENERATE = "degenerate"

_ZERO_SCALE = 1e-300


@dataclass(frozen=True)
class OttoCycleSpec:
    """Full description of one cycle: medium, bath temperatures, controls.

    ``control_hot`` / ``control_cold`` are the control-parameter values of
    the hot and cold isochores (ring: alpha; cs-volume: L; cs-coupling:
    alpha).  Use the per-medium constructors, which spell out which named
    parameter lands on which side.
    """

    medium: str
    beta_h: float
    beta_l: float
    control_hot: float
    control_cold: float
    eps0: float = 1.0  # ring energy scale
    cs_alpha: float = 0.0  # cs-volume coupling
    cs_length: float = 1.0  # cs-coupling ring size
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if self.medium not in MEDIA:
            raise DomainError(f"medium must be one of {MEDIA}, got {self.medium!r}")
        if not self.beta_h > 0.0:
            raise DomainError(f"beta_h must be positive, got {self.beta_h}")
        if self.beta_h > self.beta_l:
            raise DomainError(
                f"need beta_h <= beta_l (T_h >= T_l), got {self.beta_h} > {self.beta_l}"
            )
        if not self.tail_tol > 0.0:
            raise DomainError("tail_tol must be positive")
        if self.medium == "ring":
            if not self.eps0 > 0.0:
                raise DomainError("eps0 must be positive")
        elif self.medium == "cs-volume":
            if not (self.control_hot > 0.0 and self.control_cold > 0.0):
                raise DomainError("ring sizes must be positive")
            if self.cs_alpha < 0.0:
                raise DomainError("alpha must be >= 0")
        else:
            if not self.cs_length > 0.0:
                raise DomainError("length must be positive")
            if self.control_hot < 0.0 or self.control_cold < 0.0:
                raise DomainError("couplings must be >= 0")

    @classmethod
    def ring_cycle(
        cls,
        alpha_h: float,
        alpha_l: float,
        beta_h: float,
        beta_l: float,
        eps0: float = 1.0,
        tail_tol: float = DEFAULT_TAIL_TOL,
    ) -> "OttoCycleSpec":
        """Ring medium: hot isochore at flux alpha_h, cold at alpha_l."""
        return cls(
            medium="ring",
            beta_h=beta_h,
            beta_l=beta_l,
            control_hot=alpha_h,
            control_cold=alpha_l,
            eps0=eps0,
            tail_tol=tail_tol,
        )

    @classmethod
    def cs_volume_cycle(
        cls,
        l1: float,
        l2: float,
        alpha: float,
        beta_h: float,
        beta_l: float,
        tail_tol: float = DEFAULT_TAIL_TOL,
    ) -> "OttoCycleSpec":
        """Variable-volume pair medium: compression L1 -> L2, heat intake at L2."""
        return cls(
            medium="cs-volume",
            beta_h=beta_h,
            beta_l=beta_l,
            control_hot=l2,
            control_cold=l1,
            cs_alpha=alpha,
            tail_tol=tail_tol,
        )

    @classmethod
    def cs_coupling_cycle(
        cls,
        alpha1: float,
        alpha2: float,
        beta_h: float,
        beta_l: float,
        length: float = 1.0,
        tail_tol: float = DEFAULT_TAIL_TOL,
    ) -> "OttoCycleSpec":
        """Variable-coupling pair medium: heat intake at alpha2, rejection at alpha1."""
        return cls(
            medium="cs-coupling",
            beta_h=beta_h,
            beta_l=beta_l,
            control_hot=alpha2,
            control_cold=alpha1,
            cs_length=length,
            tail_tol=tail_tol,
        )

    def spectrum_at(self, control: float):
        if self.medium == "ring":
            return RingAnyonSpectrum(eps0=self.eps0, alpha=control)
        if self.medium == "cs-volume":
            return CSPairSpectrum(L=control, alpha=self.cs_alpha)
        return CSPairSpectrum(L=self.cs_length, alpha=control)

    def spectrum_hot(self):
        return self.spectrum_at(self.control_hot)

    def spectrum_cold(self):
        return self.spectrum_at(self.control_cold)


@dataclass(frozen=True)
class CycleReport:
    """Outcome of one cycle over the common (union) label set.

    ``efficiency`` is the raw ratio 1 - Q_out/Q_in; interpret it through
    ``regime``.  ``oracle_residual`` is filled in by callers that also
    evaluate a closed-form efficiency for the same cycle.
    """

    q_in: float
    q_out: float
    w_out: float
    efficiency: float
    regime: str
    labels: tuple
    energies_hot: tuple
    energies_cold: tuple
    populations_b: tuple
    populations_a: tuple
    oracle_residual: Optional[float] = None


def _labelwise(ensemble, spec, labels):
    """Energies and Boltzmann-consistent populations for an arbitrary label list."""
    index = {lab: i for i, lab in enumerate(ensemble.levels.labels)}
    e0 = ensemble.ground_energy
    z_shifted = ensemble.shifted_z
    beta = ensemble.beta
    energies = np.empty(len(labels))
    pops = np.empty(len(labels))
    for k, lab in enumerate(labels):
        i = index.get(lab)
        if i is not None:
            energies[k] = ensemble.levels.energies[i]
            pops[k] = ensemble.populations[i]
        else:
            e = spec.energy(*lab) if isinstance(lab, tuple) else spec.energy(lab)
            energies[k] = e
            pops[k] = math.exp(-beta * (e - e0)) / z_shifted
    return energies, pops


def _cycle_table(spec: OttoCycleSpec):
    hot_spec = spec.spectrum_hot()
    cold_spec = spec.spectrum_cold()
    ens_b = gibbs(hot_spec, spec.beta_h, spec.tail_tol)
    ens_a = gibbs(cold_spec, spec.beta_l, spec.tail_tol)
    labels = sorted(set(ens_b.levels.labels) | set(ens_a.levels.labels))
    e_hot, p_b = _labelwise(ens_b, hot_spec, labels)
    e_cold, p_a = _labelwise(ens_a, cold_spec, labels)
    return labels, e_hot, e_cold, p_b, p_a


def run_cycle(spec: OttoCycleSpec) -> CycleReport:
    """Run one Otto cycle and report heats, work, efficiency and regime.

    Raises DegenerateCycle when Q_in vanishes identically (for example
    beta_h = beta_l with identical hot and cold controls), where the
    efficiency ratio is 0/0.
    """
    labels, e_hot, e_cold, p_b, p_a = _cycle_table(spec)
    dp = p_b - p_a
    q_in = float(e_hot @ dp)
    q_out = float(e_cold @ dp)
    w_out = q_in - q_out

    scale = max(1.0, float(np.max(np.abs(e_hot)))) if len(labels) else 1.0
    if abs(q_in) < _ZERO_SCALE * scale:
        raise DegenerateCycle(
            "denominator sum E_hot (P_B - P_A) vanishes; hot and cold states coincide"
        )

    if w_out == 0.0 or abs(w_out) < _ZERO_SCALE * scale:
        regime = REGIME_DEGENERATE
    elif q_in > 0.0 and w_out > 0.0:
        regime = REGIME_ENGINE
    else:
        regime = REGIME_REFRIGERATOR

    return CycleReport(
        q_in=q_in,
        q_out=q_out,
        w_out=w_out,
        efficiency=1.0 - q_out / q_in,
        regime=regime,
        labels=tuple(labels),
        energies_hot=tuple(float(e) for e in e_hot),
        energies_cold=tuple(float(e) for e in e_cold),
        populations_b=tuple(float(p) for p in p_b),
        populations_a=tuple(float(p) for p in p_a),
    )


def efficiency_cs_volume(l1: float, l2: float) -> float:
    """Analytic efficiency 1 - L2^2/L1^2 of the variable-volume pair engine.

    Every level scales as 1/L^2, so the population-weighted sums cancel and
    the compression ratio alone fixes the efficiency.
    """
    if not (l1 > 0.0 and l2 > 0.0):
        raise DomainError("ring sizes must be positive")
    return 1.0 - (l2 * l2) / (l1 * l1)


@dataclass(frozen=True)
class StrokeResult:
    name: str
    heat: float
    work: float


@dataclass(frozen=True)
class StrokeReport:
    """Discretized four-stroke breakdown with corner entropies."""

    strokes: tuple
    entropy_a: float
    entropy_b: float
    entropy_c: float
    entropy_d: float

    def stroke(self, name: str) -> StrokeResult:
        for s in self.strokes:
            if s.name == name:
                return s
        raise KeyError(name)


def _entropy_of(populations: np.ndarray) -> float:
    nz = populations > 0.0
    return float(-(populations[nz] * np.log(populations[nz])).sum())


def cycle_strokes(spec: OttoCycleSpec, steps_per_stroke: int = 1000) -> StrokeReport:
    """Discretize the four strokes and return per-stroke heat and work.

    Isochores interpolate populations linearly at fixed levels (W = 0
    exactly); adiabats move the control linearly at frozen populations
    (Q = 0 exactly).  Heat and work follow the convention of
    ``thermo.heat_work_split``: both count energy into the system, so the
    cycle's output work is minus the summed adiabat work.
    """
    labels, e_hot, e_cold, p_b, p_a = _cycle_table(spec)
    if spec.medium == "ring":
        n_arr = np.asarray(labels, dtype=float)
    else:
        n1_arr = np.asarray([lab[0] for lab in labels], dtype=float)
        n2_arr = np.asarray([lab[1] for lab in labels], dtype=float)

    def energies_at(control: float) -> np.ndarray:
        s = spec.spectrum_at(control)
        if spec.medium == "ring":
            return s.energies(n_arr)
        return s.energies(n1_arr, n2_arr)

    controls = np.linspace(spec.control_hot, spec.control_cold, steps_per_stroke + 1)
    grids_fwd = [energies_at(float(cv)) for cv in controls]
    grids_bwd = grids_fwd[::-1]

    iso_ab = linear_isochore_path(e_hot, p_a, p_b, steps_per_stroke)
    adi_bc = adiabat_path(grids_fwd, p_b)
    iso_cd = linear_isochore_path(e_cold, p_b, p_a, steps_per_stroke)
    adi_da = adiabat_path(grids_bwd, p_a)

    strokes = []
    for name, path in (
        ("A->B", iso_ab),
        ("B->C", adi_bc),
        ("C->D", iso_cd),
        ("D->A", adi_da),
    ):
        q, w = heat_work_split(path)
        strokes.append(StrokeResult(name=name, heat=q, work=w))

    s_b = _entropy_of(np.asarray(p_b))
    s_a = _entropy_of(np.asarray(p_a))
    return StrokeReport(
        strokes=tuple(strokes),
        entropy_a=s_a,
        entropy_b=s_b,
        entropy_c=s_b,  # populations are carried unchanged across B -> C
        entropy_d=s_a,  # and across D -> A
    )


@dataclass(frozen=True)
class SweepRow:
    """One sweep grid point: either a report or an error message."""

    value: float
    report: Optional[CycleReport]
    error: Optional[str] = None


_AXIS_FIELDS = {
    "ring": {
        "beta_h": "beta_h",
        "beta_l": "beta_l",
        "alpha_h": "control_hot",
        "alpha_l": "control_cold",
        "eps0": "eps0",
    },
    "cs-volume": {
        "beta_h": "beta_h",
        "beta_l": "beta_l",
        "l1": "control_cold",
        "l2": "control_hot",
        "alpha": "cs_alpha",
    },
    "cs-coupling": {
        "beta_h": "beta_h",
        "beta_l": "beta_l",
        "alpha1": "control_cold",
        "alpha2": "control_hot",
        "length": "cs_length",
    },
}


def sweep_axes(medium: str) -> tuple:
    """Sweepable parameter names for a medium."""
    return tuple(_AXIS_FIELDS[medium])


def sweep_efficiency(
    template: OttoCycleSpec, sweep_axis: str, values: Sequence[float]
) -> list:
    """Run one cycle per grid value of the named parameter.

    Rows keep the input order.  A failing point (degenerate cycle, domain
    violation) is recorded in its row and does not abort the sweep.
    """
    try:
        field = _AXIS_FIELDS[template.medium][sweep_axis]
    except KeyError:
        raise DomainError(
            f"cannot sweep {sweep_axis!r} for medium {template.medium!r}; "
            f"choose one of {sweep_axes(template.medium)}"
        ) from None
    rows = []
    for value in values:
        try:
            cycle_spec = dataclasses.replace(template, **{field: float(value)})
            rows.append(SweepRow(value=float(value), report=run_cycle(cycle_spec)))
        except (DomainError, DegenerateCycle, ValueError) as exc:
            rows.append(
                SweepRow(
                    value=float(value),
                    report=None,
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
    return rows
