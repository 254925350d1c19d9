"""Bundled example systems and ready-to-run analysis configurations.

Three fixtures ship with the package (states are indexed from 0):

* a three-level system with all three transitions coupled (atomic units),
* three coupled qubits driven through x and y spin sums, whose transition
  graph is a cube (frequencies in rad/s, time in seconds),
* a ladder three-level system (nearest-neighbor transitions only) used to
  demonstrate frequency aliasing between pathway classes.

The ``*_config`` helpers return dicts in the CLI configuration schema; the
CLI bundles them as JSON files under ``configs/``.
"""

import numpy as np

from .system import build_system

SPIN_X = 0.5 * np.array([[0, 1], [1, 0]], dtype=complex)
SPIN_Y = 0.5 * np.array([[0, -1j], [1j, 0]], dtype=complex)
SPIN_Z = 0.5 * np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)


def three_level_system():
    """Three levels, every pair coupled; energies in atomic units."""
    energies = [0.0, 0.0082, 0.016]
    mu = np.array([
        [0.0, 0.061, -0.013],
        [0.061, 0.0, 0.083],
        [-0.013, 0.083, 0.0],
    ], dtype=complex)
    return build_system(energies, [mu])


def ladder_three_level():
    """Three levels with nearest-neighbor transitions only (a path graph)."""
    energies = [0.0, 0.0082, 0.016]
    mu = np.array([
        [0.0, 0.061, 0.0],
        [0.061, 0.0, 0.083],
        [0.0, 0.083, 0.0],
    ], dtype=complex)
    return build_system(energies, [mu])


def _embed(op, position):
    mats = [IDENTITY2] * 3
    mats[position] = op
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def three_qubit_system():
    """Three coupled qubits; basis index = q0*4 + q1*2 + q2.

    Offsets and couplings are angular frequencies in rad/s; the two
    controls couple through the x and y spin sums, which share the
    single-flip sparsity pattern (the cube graph).
    """
    two_pi = 2.0 * np.pi
    omegas = [two_pi * 12039.6, two_pi * -6855.5, two_pi * -12039.0]
    couplings = {(0, 1): two_pi * 54.0, (0, 2): two_pi * -1.3,
                 (1, 2): two_pi * 35.0}
    h0 = np.zeros((8, 8), dtype=complex)
    for q, w in enumerate(omegas):
        h0 += w * _embed(SPIN_Z, q)
    for (p, q), j in couplings.items():
        h0 += j * (_embed(SPIN_Z, p) @ _embed(SPIN_Z, q))
    mu_x = sum(_embed(SPIN_X, q) for q in range(3))
    mu_y = sum(_embed(SPIN_Y, q) for q in range(3))
    return build_system(np.real(np.diag(h0)), [mu_x, mu_y])


def _dipole_triples(system):
    out = []
    for mu in system.dipoles:
        entries = []
        for i in range(system.dim):
            for j in range(i + 1, system.dim):
                if mu[j, i] != 0:
                    entries.append([i, j, [mu[j, i].real, mu[j, i].imag]])
        out.append(entries)
    return out


def _system_block(system):
    return {"energies": [float(e) for e in system.energies],
            "dipoles": _dipole_triples(system)}


def three_level_config(mode="ohpe", base=7):
    """Analysis config for the 0 -> 2 transfer on the three-level system."""
    return {
        "system": _system_block(three_level_system()),
        "pulse": {"synthesis": {
            "start": 0, "target": 2, "duration": 6000.0, "dt": 3.0,
            "amplitude_bound": 0.02, "max_iterations": 1500,
            "target_infidelity": 1e-3, "seed": 7,
        }},
        "encoding": {"mode": mode, "base": base, "epsilon_rel": 0.01,
                     "tree_edges": [[0, 1], [1, 2]]},
        "report": {"start": 0, "target": 2, "l_max": 8},
    }


def three_qubit_config(mode="ohpe", base=7):
    """Analysis config for the 000 -> 001 transfer on the cube system."""
    return {
        "system": _system_block(three_qubit_system()),
        "pulse": {"synthesis": {
            "start": 0, "target": 1, "duration": 0.004, "dt": 4e-6,
            "amplitude_bound": 6000.0, "max_iterations": 3000,
            "target_infidelity": 1e-3, "seed": 11,
        }},
        "encoding": {"mode": mode, "base": base, "epsilon_rel": 0.02},
        "report": {"start": 0, "target": 1, "l_max": 6},
    }


def ladder_aliasing_config(base=3):
    """Full non-Hermitian encoding of the ladder system (aliasing demo)."""
    return {
        "system": _system_block(ladder_three_level()),
        "pulse": {"synthesis": {
            "start": 0, "target": 2, "duration": 6000.0, "dt": 3.0,
            "amplitude_bound": 0.02, "max_iterations": 1500,
            "target_infidelity": 1e-3, "seed": 7,
        }},
        "encoding": {"mode": "full-nh", "base": base, "epsilon_rel": 0.05},
        "report": {"start": 0, "target": 2, "l_max": 7},
    }
