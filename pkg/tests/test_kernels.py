"""Backend parity: the numba kernels and the numpy fallback must agree."""

import numpy as np
import pytest

import pathenc as pe
from pathenc import kernels

numba_kernels = pytest.importorskip("pathenc._numba_kernels")


@pytest.fixture
def triangle_setup(three_level, triangle_graph, ladder_tree, rng):
    dipoles = np.stack(three_level.dipoles)
    fields = pe.ControlField(3.0, [rng.uniform(-0.02, 0.02, 300)])
    return three_level, dipoles, fields


def _run_both(system, dipoles, scheme, fields, route, count=32):
    s_values = np.arange(min(count, scheme.sample_count), dtype=np.int64)
    args = (np.ascontiguousarray(system.energies), dipoles,
            np.ascontiguousarray(scheme.freq_multiples), scheme.n_exp,
            s_values, fields.samples, fields.dt, route)
    return (kernels.propagate_sgrid_numpy(*args),
            numba_kernels.propagate_sgrid(*args))


def test_parity_hermitian_single(triangle_setup, triangle_graph, ladder_tree):
    system, dipoles, fields = triangle_setup
    scheme = pe.assign_ohpe(triangle_graph, ladder_tree, 7)
    a, b = _run_both(system, dipoles, scheme, fields, kernels.ROUTE_HERMITIAN_SINGLE)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_parity_general(triangle_setup, triangle_graph, ladder_tree):
    system, dipoles, fields = triangle_setup
    scheme = pe.assign_nhpe(triangle_graph, ladder_tree, 16)
    a, b = _run_both(system, dipoles, scheme, fields, kernels.ROUTE_GENERAL)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_parity_hermitian_multi(three_qubit, rng):
    graph = pe.build_graph(three_qubit)
    scheme = pe.assign_ohpe(graph, pe.spanning_tree(graph), 7)
    dipoles = np.stack(three_qubit.dipoles)
    fields = pe.ControlField(4e-6, rng.uniform(-3000, 3000, (2, 50)))
    a, b = _run_both(three_qubit, dipoles, scheme, fields,
                     kernels.ROUTE_HERMITIAN_MULTI, count=16)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_parity_grape_pass(three_level, rng):
    dipoles = np.stack(three_level.dipoles)
    eps = rng.uniform(-0.02, 0.02, (1, 200))
    args = (np.ascontiguousarray(three_level.energies), dipoles, eps, 3.0, 0, 2)
    z_np, g_np = kernels.grape_pass_numpy(*args)
    z_nb, g_nb = numba_kernels.grape_pass(*args)
    assert abs(z_np - z_nb) < 1e-13
    np.testing.assert_allclose(g_np, g_nb, atol=1e-13)


def test_parity_propagate_column(three_level, rng):
    dipoles = np.stack(three_level.dipoles)
    eps = rng.uniform(-0.02, 0.02, (1, 200))
    args = (np.ascontiguousarray(three_level.energies), dipoles, eps, 3.0, 0)
    np.testing.assert_allclose(kernels.propagate_column_numpy(*args),
                               numba_kernels.propagate_column(*args),
                               atol=1e-13)


def test_column_matches_full_propagation(three_level, rng):
    fields = pe.ControlField(3.0, [rng.uniform(-0.02, 0.02, 150)])
    u = pe.propagate_final(three_level, fields).matrix
    psi = kernels.propagate_column(three_level.energies,
                                   np.stack(three_level.dipoles),
                                   fields.samples, fields.dt, 0)
    np.testing.assert_allclose(psi, u[:, 0], atol=1e-12)


def test_expm_stack_against_eigendecomposition(rng):
    # independent oracle: diagonalize a generic complex matrix with eig
    mats = rng.normal(size=(5, 4, 4)) + 1j * rng.normal(size=(5, 4, 4))
    result = kernels.expm_stack(mats)
    for a, computed in zip(mats, result):
        w, v = np.linalg.eig(a)
        reference = v @ np.diag(np.exp(w)) @ np.linalg.inv(v)
        np.testing.assert_allclose(computed, reference, atol=1e-10)


def test_expm_single_numba_matches_stack(rng):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    np.testing.assert_allclose(numba_kernels._expm(a.copy()),
                               kernels.expm_stack(a), atol=1e-13)


def test_active_backend_reports_known_name():
    assert kernels.active_backend() in ("numba", "numpy")


def test_backend_env_selects_numpy(tmp_path):
    import subprocess
    import sys
    code = ("import pathenc.kernels as k; print(k.active_backend())")
    out = subprocess.run([sys.executable, "-c", code],
                         env={"PATH": "/usr/bin:/bin",
                              "PATHENC_BACKEND": "numpy"},
                         capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
