"""Time propagation of the (possibly modulated) interaction-picture dynamics.

The evolution over horizon T is the ordered product of per-step propagators
(latest step leftmost),

    U(T) = W(T - dt) ... W(dt) W(0),
    W(n*dt) = exp(i * e^{iH0 t} M_n e^{-iH0 t} * dt),
    M_n = sum_c mu_c * eps_c(n*dt),

with hbar = 1 and the sign convention H = H0 - sum_c mu_c eps_c(t).  Since
H0 is diagonal, the conjugation by exp(iH0 t) is an elementwise phase, so
each step costs one small matrix exponential: by eigendecomposition when
M_n is exactly Hermitian, by scaling-and-squaring otherwise (accuracy
target 1e-12).  Steps whose field samples are all zero contribute the
identity exactly, which makes zero-field and s = 0 consistency bitwise.

This module is the straightforward single-propagation path; the s-grid
fan-out used by the decoder lives in :mod:`pathenc.kernels`.
"""

import numpy as np

from .errors import ShapeMismatch
from .kernels import expm_stack
from .system import Propagator


def _effective_matrix(system, fields, step, dipole_overrides):
    mats = system.dipoles if dipole_overrides is None else dipole_overrides
    if dipole_overrides is not None:
        if len(mats) != len(system.dipoles):
            raise ShapeMismatch(
                f"expected {len(system.dipoles)} override matrices, got {len(mats)}")
        d = system.dim
        for mu in mats:
            if np.shape(mu) != (d, d):
                raise ShapeMismatch(f"override has shape {np.shape(mu)}, "
                                    f"expected {(d, d)}")
    eps_n = fields.samples[:, step]
    if len(mats) != len(eps_n):
        raise ShapeMismatch("control count does not match dipole count")
    M = np.zeros((system.dim, system.dim), dtype=complex)
    for c, mu in enumerate(mats):
        if eps_n[c] != 0.0:
            M += eps_n[c] * np.asarray(mu, dtype=complex)
    return M


def step_propagator(system, fields, step, dipole_overrides=None):
    """Single-step propagator exp(i * V * dt) at t = step * dt.

    ``dipole_overrides`` substitutes modulated dipole matrices; Hermiticity
    of the effective coupling is detected exactly and selects the
    eigendecomposition route, anything else goes through scaling-and-
    squaring.  A step with all-zero field samples returns the identity.
    """
    if not 0 <= step < fields.n_steps:
        raise IndexError(f"step {step} outside 0..{fields.n_steps - 1}")
    d = system.dim
    M = _effective_matrix(system, fields, step, dipole_overrides)
    if not M.any():
        return np.eye(d, dtype=complex)
    if np.array_equal(M, M.conj().T):
        lam, V = np.linalg.eigh(M)
        W = (V * np.exp(1j * lam * fields.dt)) @ V.conj().T
    else:
        W = expm_stack(1j * fields.dt * M)
    pj = np.exp(1j * system.energies * (step * fields.dt))
    return W * (pj[:, None] * pj.conj()[None, :])


def propagate_final(system, fields, dipole_overrides=None, s_value=0.0):
    """Ordered product of all step propagators; deterministic for fixed input."""
    U = np.eye(system.dim, dtype=complex)
    for n in range(fields.n_steps):
        U = step_propagator(system, fields, n, dipole_overrides) @ U
    return Propagator(matrix=U, s_value=s_value)


def propagate_trajectory(system, fields, initial_state=0):
    """State populations after every step, starting from a basis state.

    Returns an (n_steps + 1, d) array whose first row is the initial
    populations (t = 0) and whose last row is at t = T.
    """
    d = system.dim
    psi = np.zeros(d, dtype=complex)
    psi[initial_state] = 1.0
    populations = np.empty((fields.n_steps + 1, d))
    populations[0] = np.abs(psi) ** 2
    for n in range(fields.n_steps):
        psi = step_propagator(system, fields, n) @ psi
        populations[n + 1] = np.abs(psi) ** 2
    return populations
