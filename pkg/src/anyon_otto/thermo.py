"""Gibbs ensembles on truncated level sets and the heat/work bookkeeping.

The equilibrium state at inverse temperature beta populates level n with
P_n proportional to exp(-beta E_n); internal energy is E = sum P_n E_n and
the von Neumann entropy (kB = 1) is S = -sum P_n ln P_n.  All Boltzmann
factors are evaluated relative to the ground-state energy, which leaves
populations and entropy unchanged while keeping exponents in range; the
reported log partition function is for the unshifted energies.

A change of the ensemble's energy splits into heat (population change at
fixed levels) and work (level shifts at fixed populations).  Discretized
parameter paths are lists of PathStep records; ``heat_work_split`` pairs
midpoint energies with population increments and midpoint populations with
energy increments, which makes Q + W telescope to the exact endpoint energy
difference at any step count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ShapeError
from .spectra import LevelSet, enumerate_levels

__all__ = [
    "GibbsEnsemble",
    "PathStep",
    "DEFAULT_TAIL_TOL",
    "ensemble_from_levels",
    "gibbs",
    "partition_function",
    "entropy",
    "heat_work_split",
    "gibbs_isochore_path",
    "linear_isochore_path",
    "adiabat_path",
]

DEFAULT_TAIL_TOL = 1e-13


@dataclass(frozen=True)
class GibbsEnsemble:
    """Thermal state on a truncated level set.

    ``logZ`` refers to the unshifted energies: logZ = log(sum exp(-beta E)).
    Populations are normalized over the retained levels only; the level set's
    tail bound certifies what that truncation can cost.
    """

    levels: LevelSet
    beta: float
    populations: tuple
    logZ: float
    internal_energy: float
    entropy: float

    @property
    def ground_energy(self) -> float:
        return self.levels.energies[0]

    @property
    def shifted_z(self) -> float:
        """Partition function of the ground-shifted energies, sum exp(-beta (E - E0))."""
        return math.exp(self.logZ + self.beta * self.ground_energy)


def ensemble_from_levels(levels: LevelSet, beta: float) -> GibbsEnsemble:
    """Build the Gibbs state for an already enumerated level set."""
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    energies = np.asarray(levels.energies, dtype=float)
    if energies.size == 0:
        raise DomainError("cannot build an ensemble on an empty level set")
    e0 = energies[0]
    weights = np.exp(-beta * (energies - e0))
    z_shifted = float(weights.sum())
    populations = weights / z_shifted
    nonzero = populations > 0.0
    ent = float(-(populations[nonzero] * np.log(populations[nonzero])).sum())
    return GibbsEnsemble(
        levels=levels,
        beta=float(beta),
        populations=tuple(float(p) for p in populations),
        logZ=math.log(z_shifted) - beta * e0,
        internal_energy=float(populations @ energies),
        entropy=max(ent, 0.0),
    )


def gibbs(spec, beta: float, tail_tol: float = DEFAULT_TAIL_TOL) -> GibbsEnsemble:
    """Equilibrium ensemble of a spectrum at inverse temperature beta."""
    return ensemble_from_levels(enumerate_levels(spec, beta, tail_tol), beta)


def partition_function(spec, beta: float, tail_tol: float = DEFAULT_TAIL_TOL) -> float:
    """Truncated partition function by direct summation over enumerated levels.

    This is the summation oracle for the theta-function closed forms: no
    theta identity enters, only exp(-beta E) term by term (evaluated against
    the ground state for range, then rescaled).
    """
    levels = enumerate_levels(spec, beta, tail_tol)
    energies = np.asarray(levels.energies, dtype=float)
    e0 = energies[0]
    return float(np.exp(-beta * (energies - e0)).sum() * math.exp(-beta * e0))


def entropy(ensemble: GibbsEnsemble) -> float:
    """Von Neumann entropy -sum P ln P of the ensemble's populations (0 ln 0 = 0)."""
    p = np.asarray(ensemble.populations, dtype=float)
    nz = p > 0.0
    return float(-(p[nz] * np.log(p[nz])).sum())


@dataclass(frozen=True)
class PathStep:
    """One discretization step: levels and populations before and after.

    All four lists follow one label order; only values are stored because
    every consumer works on a fixed common label set.
    """

    energies_before: tuple
    energies_after: tuple
    populations_before: tuple
    populations_after: tuple

    def __post_init__(self):
        n = len(self.energies_before)
        if not (
            len(self.energies_after) == n
            and len(self.populations_before) == n
            and len(self.populations_after) == n
        ):
            raise ShapeError("all four PathStep lists must have equal length")


def heat_work_split(path: Sequence[PathStep]) -> tuple:
    """Split the energy change along a discretized path into (Q, W).

    Per step, dQ = sum dP * E_mid and dW = sum P_mid * dE with midpoint
    (trapezoidal) pairing, so Q + W equals the total energy change exactly
    up to floating-point roundoff.  Steps must share one label set; a path
    whose steps disagree in length raises ShapeError.
    """
    q = 0.0
    w = 0.0
    width = None
    for step in path:
        eb = np.asarray(step.energies_before, dtype=float)
        ea = np.asarray(step.energies_after, dtype=float)
        pb = np.asarray(step.populations_before, dtype=float)
        pa = np.asarray(step.populations_after, dtype=float)
        if width is None:
            width = eb.size
        elif eb.size != width:
            raise ShapeError("steps along one path must share a label set")
        q += float((pa - pb) @ ((ea + eb) * 0.5))
        w += float(((pa + pb) * 0.5) @ (ea - eb))
    return q, w


def gibbs_isochore_path(
    spec,
    beta_start: float,
    beta_end: float,
    n_steps: int,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> list:
    """Sequence-of-baths isochore: equilibrium populations at each grid beta.

    Levels are enumerated once at the hotter endpoint (the larger level set)
    and held fixed; the energies never change along the path, so W = 0
    exactly and Q equals the endpoint energy difference.
    """
    if n_steps < 1:
        raise DomainError("n_steps must be >= 1")
    levels = enumerate_levels(spec, min(beta_start, beta_end), tail_tol)
    energies = np.asarray(levels.energies, dtype=float)
    e0 = energies[0]
    e_tuple = tuple(float(e) for e in energies)

    def pops(beta: float) -> tuple:
        w = np.exp(-beta * (energies - e0))
        return tuple(float(v) for v in w / w.sum())

    betas = np.linspace(beta_start, beta_end, n_steps + 1)
    steps = []
    prev = pops(betas[0])
    for b in betas[1:]:
        cur = pops(float(b))
        steps.append(PathStep(e_tuple, e_tuple, prev, cur))
        prev = cur
    return steps


def linear_isochore_path(energies, pops_start, pops_end, n_steps: int) -> list:
    """Isochore with populations interpolated linearly between two states."""
    if n_steps < 1:
        raise DomainError("n_steps must be >= 1")
    e_tuple = tuple(float(e) for e in energies)
    p0 = np.asarray(pops_start, dtype=float)
    p1 = np.asarray(pops_end, dtype=float)
    if p0.size != len(e_tuple) or p1.size != len(e_tuple):
        raise ShapeError("population and energy lists must share a label set")
    steps = []
    prev = tuple(float(v) for v in p0)
    for k in range(1, n_steps + 1):
        t = k / n_steps
        cur = tuple(float(v) for v in (1.0 - t) * p0 + t * p1)
        steps.append(PathStep(e_tuple, e_tuple, prev, cur))
        prev = cur
    return steps


def adiabat_path(energy_grids: Sequence, populations) -> list:
    """Adiabat through a sequence of energy lists at fixed populations.

    ``energy_grids`` holds the level energies at successive control values
    (at least two entries); populations are carried unchanged, so Q = 0
    exactly and W telescopes to sum P (E_final - E_initial).
    """
    if len(energy_grids) < 2:
        raise DomainError("an adiabat needs at least two energy grids")
    p = tuple(float(v) for v in populations)
    steps = []
    prev = tuple(float(e) for e in energy_grids[0])
    for grid in energy_grids[1:]:
        cur = tuple(float(e) for e in grid)
        if len(cur) != len(p) or len(prev) != len(p):
            raise ShapeError("energy grids must match the population label set")
        steps.append(PathStep(prev, cur, p, p))
        prev = cur
    return steps
