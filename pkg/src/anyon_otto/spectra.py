"""Working-medium level families and certified level enumeration.

Two one-parameter spectra are provided, in natural units hbar = m = kB = 1:

* a charged particle on a flux-threaded ring,  E_n = eps0 (n - alpha)^2 with
  n in Z, where eps0 carries the 1/(2 m a^2) scale and alpha is the
  dimensionless flux / statistics parameter; and
* an interacting pair on a ring of size parameter L,
  E_{n1,n2} = pi^2 alpha^2 / L^2 + (2 pi^2 / L^2)(n1^2 + n2^2 + alpha(n1-n2))
  over integer pairs n1 <= n2.  The pair interaction strength
  pi^2 alpha(alpha-1)/L^2 is fully determined by (alpha, L) and is not stored
  separately; alpha = 0 gives free bosons and alpha = 1 free-fermion-like
  level spacing.

``enumerate_levels`` truncates either family to a finite LevelSet whose
omitted Boltzmann weight (measured relative to the ground state) is bounded
analytically, and which is downward closed: no omitted level lies below any
returned one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoConvergence, OrderingError
from .special_functions import _log_gauss_tail, _logaddexp, _exp_round_up

__all__ = [
    "RingAnyonSpectrum",
    "CSPairSpectrum",
    "LevelSet",
    "ring_energy",
    "cs_energy",
    "enumerate_levels",
    "pauli_energy",
]

# Safety inflation applied to tail certificates to absorb floating-point
# rounding in their own evaluation.
_CERT_SLACK = 1.0 + 1e-9

_RING_WINDOW_CAP = 1_000_000
_CS_WINDOW_CAP = 1_500


@dataclass(frozen=True)
class RingAnyonSpectrum:
    """Flux-ring anyon levels E_n = eps0 (n - alpha)^2, n in Z.

    The eigenvalue SET is invariant under alpha -> alpha + 1 (relabel
    n -> n + 1) and under alpha -> -alpha (relabel n -> -n).
    """

    eps0: float = 1.0
    alpha: float = 0.0

    def __post_init__(self):
        if not self.eps0 > 0.0:
            raise DomainError(f"eps0 must be positive, got {self.eps0}")

    def energy(self, n: int) -> float:
        return self.eps0 * (n - self.alpha) ** 2

    def energies(self, n: np.ndarray) -> np.ndarray:
        return self.eps0 * (np.asarray(n, dtype=float) - self.alpha) ** 2


@dataclass(frozen=True)
class CSPairSpectrum:
    """Interacting two-anyon levels on a ring of size parameter L.

    In center-of-mass / relative coordinates m = n1 + n2, n = n2 - n1 >= 0
    (m and n share parity) the energy is (pi^2/L^2) (m^2 + (n - alpha)^2),
    which is what the closed-form machinery exploits.
    """

    L: float
    alpha: float

    def __post_init__(self):
        if not self.L > 0.0:
            raise DomainError(f"L must be positive, got {self.L}")
        if self.alpha < 0.0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")

    def energy(self, n1: int, n2: int) -> float:
        if n1 > n2:
            raise OrderingError(f"require n1 <= n2, got ({n1}, {n2})")
        unit = math.pi**2 / self.L**2
        return unit * self.alpha**2 + 2.0 * unit * (
            n1 * n1 + n2 * n2 + self.alpha * (n1 - n2)
        )

    def energies(self, n1: np.ndarray, n2: np.ndarray) -> np.ndarray:
        n1 = np.asarray(n1, dtype=float)
        n2 = np.asarray(n2, dtype=float)
        unit = math.pi**2 / self.L**2
        return unit * self.alpha**2 + 2.0 * unit * (
            n1 * n1 + n2 * n2 + self.alpha * (n1 - n2)
        )


@dataclass(frozen=True)
class LevelSet:
    """A truncated, energy-ascending list of labeled levels.

    ``tail_bound`` certifies the truncation for the inverse temperature the
    set was built for: it bounds sum over omitted levels of
    exp(-beta (E - E_ground)).  (The ground-state shift keeps the bound
    meaningful at large beta, where the unshifted weights underflow.)
    """

    labels: tuple
    energies: tuple
    tail_bound: float
    beta: float

    def __post_init__(self):
        if len(self.labels) != len(self.energies):
            raise DomainError("labels and energies must have equal length")
        if self.tail_bound < 0.0:
            raise DomainError("tail_bound must be >= 0")


def ring_energy(spec: RingAnyonSpectrum, n: int) -> float:
    """Energy of ring level n."""
    return spec.energy(n)


def cs_energy(spec: CSPairSpectrum, n1: int, n2: int) -> float:
    """Energy of the pair level (n1, n2); raises OrderingError if n1 > n2."""
    return spec.energy(n1, n2)


def pauli_energy(N: int, omega: float) -> float:
    """Ground-state energy gap between N trapped fermions and N trapped bosons.

    For a harmonic trap of frequency omega this is omega * N (N - 1) / 2
    (hbar = 1): the bosons all sit in the lowest level while the fermions
    fill the lowest N levels.
    """
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    if not omega > 0.0:
        raise DomainError(f"omega must be positive, got {omega}")
    return omega * N * (N - 1) / 2.0


def _sorted_level_set(labels, energies, tail_bound, beta) -> LevelSet:
    order = sorted(range(len(labels)), key=lambda i: (energies[i], labels[i]))
    return LevelSet(
        labels=tuple(labels[i] for i in order),
        energies=tuple(float(energies[i]) for i in order),
        tail_bound=float(tail_bound),
        beta=float(beta),
    )


def _ring_levels(spec: RingAnyonSpectrum, beta: float, tail_tol: float) -> LevelSet:
    lam = beta * spec.eps0
    gamma = spec.alpha
    peak = int(round(gamma))
    g_shift = (peak - gamma) ** 2  # dimensionless ground energy E_min/eps0
    inv_sqrt_lam = 1.0 / math.sqrt(lam)

    # Initial half-width from the analytic tail, then verify and grow.
    guess = math.sqrt(max(g_shift, 0.0) + math.log(1.0 / tail_tol) / lam)
    K = max(3, int(math.ceil(guess + 2.0 * inv_sqrt_lam + 2.0)))
    while True:
        if 2 * K + 1 > _RING_WINDOW_CAP:
            raise NoConvergence(
                f"ring window exceeded {_RING_WINDOW_CAP} levels at tail_tol={tail_tol:g}"
            )
        ns = np.arange(peak - K, peak + K + 1)
        energies = spec.energies(ns)
        e_min = float(energies.min())

        u_hi = (peak + K) - gamma
        u_lo = gamma - (peak - K)
        if min(u_hi, u_lo) < inv_sqrt_lam:
            K *= 2
            continue
        log_tail = beta * e_min + _logaddexp(
            _log_gauss_tail(lam, u_hi, 0.0, 0), _log_gauss_tail(lam, u_lo, 0.0, 0)
        )

        # Downward closure: drop window levels above the lowest omitted energy
        # and charge their weight to the tail bound.
        e_floor = spec.eps0 * min((peak + K + 1 - gamma) ** 2, (peak - K - 1 - gamma) ** 2)
        keep = energies <= e_floor
        dropped = float(np.exp(-beta * (energies[~keep] - e_min)).sum())
        tail = (_exp_round_up(log_tail) + dropped) * _CERT_SLACK
        if tail <= tail_tol:
            return _sorted_level_set(
                [int(n) for n in ns[keep]], energies[keep], tail, beta
            )
        K *= 2


def _cs_levels(spec: CSPairSpectrum, beta: float, tail_tol: float) -> LevelSet:
    unit = math.pi**2 / spec.L**2
    lam = beta * unit  # decay rate in (m, n) coordinates
    alpha = spec.alpha
    inv_sqrt_lam = 1.0 / math.sqrt(lam)

    # Bound on a full or half lattice Gaussian sum with peak weight <= 1.
    log_lattice = math.log(2.0 + math.sqrt(math.pi / lam))
    # Minimum of (n - alpha)^2 over n >= 0.
    mu_n = (max(0, int(round(alpha))) - alpha) ** 2

    guess = math.sqrt(alpha**2 + math.log(1.0 / tail_tol) / lam + 1.0)
    K = max(3 + int(math.ceil(alpha / 2.0)), int(math.ceil(guess + 2.0 * inv_sqrt_lam + 2.0)))
    while True:
        if K > _CS_WINDOW_CAP:
            raise NoConvergence(
                f"pair window exceeded K={_CS_WINDOW_CAP} at tail_tol={tail_tol:g}"
            )
        rng = np.arange(-K, K + 1)
        n1g, n2g = np.meshgrid(rng, rng, indexing="ij")
        mask = n1g <= n2g
        n1 = n1g[mask]
        n2 = n2g[mask]
        energies = spec.energies(n1, n2)
        e_min = float(energies.min())

        if (K - alpha) < inv_sqrt_lam or K < inv_sqrt_lam:
            K *= 2
            continue
        # Any omitted pair has |n1+n2| > K or n2-n1 > K in (m, n) coordinates;
        # bound the two overlapping half-tails (parity constraint ignored,
        # which only overcounts).
        log_tail_m = math.log(2.0) + _log_gauss_tail(lam, float(K), 0.0, 0) + log_lattice
        log_tail_n = _log_gauss_tail(lam, float(K - alpha), 0.0, 0) + log_lattice
        log_tail = beta * e_min + _logaddexp(log_tail_m, log_tail_n)

        e_floor = unit * min((K + 1.0) ** 2 + mu_n, (K + 1.0 - alpha) ** 2)
        keep = energies <= e_floor
        dropped = float(np.exp(-beta * (energies[~keep] - e_min)).sum())
        tail = (_exp_round_up(log_tail) + dropped) * _CERT_SLACK
        if tail <= tail_tol:
            labels = [(int(a), int(b)) for a, b in zip(n1[keep], n2[keep])]
            return _sorted_level_set(labels, energies[keep], tail, beta)
        K *= 2


def enumerate_levels(spec, beta: float, tail_tol: float) -> LevelSet:
    """Enumerate every level that matters at inverse temperature beta.

    The quantum-number window grows until the analytic bound on the omitted
    ground-shifted Boltzmann weight drops below ``tail_tol``; the returned set
    is then cut at an energy below every omitted level, so it is downward
    closed in energy.  Levels come back energy-ascending, degeneracies as
    separate labeled entries.
    """
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    if not tail_tol > 0.0:
        raise DomainError(f"tail_tol must be positive, got {tail_tol}")
    if isinstance(spec, RingAnyonSpectrum):
        return _ring_levels(spec, beta, tail_tol)
    if isinstance(spec, CSPairSpectrum):
        return _cs_levels(spec, beta, tail_tol)
    raise DomainError(f"unsupported spectrum type: {type(spec).__name__}")
