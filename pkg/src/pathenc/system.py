"""Quantum systems and piecewise-constant control fields.

A system is a diagonal field-free Hamiltonian (its eigenenergies, hbar = 1)
plus one or more Hermitian, zero-diagonal dipole coupling matrices.  States
are indexed 0 .. d-1 throughout the package.  Control fields are sampled on
a uniform time grid and held constant within each step, with the sample for
step n taken at the left endpoint t = n * dt.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonHermitianDipole, NonzeroDiagonal

HERMITICITY_ATOL = 1e-12


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QuantumSystem:
    """Field-free energies and dipole coupling matrices.

    Use :func:`build_system` instead of constructing directly; it validates
    the invariants (Hermitian dipoles, zero diagonals, matching shapes).
    """

    energies: np.ndarray            # (d,) real
    dipoles: tuple                  # one or more (d, d) complex matrices

    @property
    def dim(self):
        return len(self.energies)

    @property
    def transitions(self):
        """Sorted (i, j) pairs, i < j, where any dipole is nonzero."""
        mask = np.zeros((self.dim, self.dim), dtype=bool)
        for mu in self.dipoles:
            mask |= mu != 0
        return [(i, j) for i in range(self.dim) for j in range(i + 1, self.dim)
                if mask[i, j] or mask[j, i]]


@dataclass(frozen=True)
class ControlField:
    """Per-dipole field samples on a uniform grid of step dt."""

    dt: float
    samples: np.ndarray             # (n_controls, n_steps) real

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        if samples.shape[1] < 1:
            raise ValueError("need at least one field sample per control")
        object.__setattr__(self, "samples", _frozen(samples))

    @property
    def n_steps(self):
        return self.samples.shape[1]

    @property
    def horizon(self):
        return self.dt * self.n_steps

    def scaled(self, factor):
        """New field with every sample multiplied by ``factor``."""
        return ControlField(self.dt, self.samples * factor)

    def refined(self, factor):
        """Same piecewise-constant field on a grid ``factor`` times finer."""
        if factor < 1 or int(factor) != factor:
            raise ValueError("refinement factor must be a positive integer")
        return ControlField(self.dt / int(factor),
                            np.repeat(self.samples, int(factor), axis=1))


@dataclass(frozen=True)
class Propagator:
    """Final-time propagator together with the modulation parameter used."""

    matrix: np.ndarray
    s_value: float = 0.0


def build_system(energies, dipoles) -> QuantumSystem:
    """Validate and freeze a quantum system.

    Raises ``DimensionMismatch``, ``NonHermitianDipole`` or
    ``NonzeroDiagonal`` when the inputs violate the system invariants.
    """
    energies = np.asarray(energies, dtype=float)
    if energies.ndim != 1 or len(energies) < 2:
        raise DimensionMismatch("energies must be a vector of length >= 2")
    d = len(energies)
    mats = []
    for idx, mu in enumerate(dipoles):
        mu = np.asarray(mu, dtype=complex)
        if mu.shape != (d, d):
            raise DimensionMismatch(
                f"dipole {idx} has shape {mu.shape}, expected {(d, d)}")
        scale = max(np.abs(mu).max(), 1.0)
        if not np.allclose(mu, mu.conj().T, rtol=0, atol=HERMITICITY_ATOL * scale):
            raise NonHermitianDipole(f"dipole {idx} is not Hermitian")
        if np.any(mu.diagonal() != 0):
            raise NonzeroDiagonal(f"dipole {idx} has nonzero diagonal entries")
        mats.append(_frozen(mu))
    if not mats:
        raise DimensionMismatch("at least one dipole matrix is required")
    return QuantumSystem(energies=_frozen(energies), dipoles=tuple(mats))
