"""Hot numeric kernels with selectable backend.

The s-grid fan-out (one time-stepped propagation per modulation parameter)
dominates runtime, so it is implemented twice: a numba @njit version in
``pathenc._numba_kernels`` and the pure-numpy batched fallback in this
module.  The backend is chosen once per process from the ``PATHENC_BACKEND``
environment variable ("numba" or "numpy"; default is numba when importable).
``benchmarks/bench_kernels.py`` times the two against each other.

Routes for the per-step matrix exponential:

* 0  Hermitian modulation, single control: the modulated dipole is
     diagonalized once per s-point and reused for every time step.
* 1  Hermitian modulation, several controls: the effective coupling matrix
     is rediagonalized every step.
* 2  non-Hermitian modulation: scaling-and-squaring Taylor exponential
     every step (accurate far below 1e-12 at these step norms).

All kernels share the convention that step n covers [n*dt, (n+1)*dt) with
the field sample taken at the left endpoint, and that steps where every
control sample is exactly zero contribute the identity exactly.
"""

import os

import numpy as np

# portable threading layer; avoids TBB/OMP version probing noise
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

ROUTE_HERMITIAN_SINGLE = 0
ROUTE_HERMITIAN_MULTI = 1
ROUTE_GENERAL = 2

BACKEND_ENV = "PATHENC_BACKEND"
_EXPM_THETA = 0.25
_EXPM_MAX_TERMS = 24

_backend = None


def active_backend():
    """Resolve the kernel backend once per process."""
    global _backend
    if _backend is None:
        choice = os.environ.get(BACKEND_ENV, "").strip().lower()
        if choice == "numpy":
            _backend = "numpy"
        elif choice == "numba":
            from . import _numba_kernels  # noqa: F401  fail loudly if absent
            _backend = "numba"
        else:
            try:
                from . import _numba_kernels  # noqa: F401
                _backend = "numba"
            except ImportError:
                _backend = "numpy"
    return _backend


def set_worker_threads(workers):
    """Bound the numba thread pool; no-op on the numpy backend."""
    if workers is None or active_backend() != "numba":
        return
    import numba
    limit = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(max(1, min(int(workers), limit)))


def expm_stack(a):
    """Matrix exponential of a (..., d, d) stack, scaling and squaring.

    The whole stack shares the squaring count of its largest matrix; the
    Taylor series is truncated once the term norm drops below 1e-16.
    """
    a = np.asarray(a, dtype=complex)
    norm = np.abs(a).sum(axis=-1).max()
    squarings = 0
    while norm > _EXPM_THETA:
        norm *= 0.5
        squarings += 1
    b = a * (0.5 ** squarings)
    d = a.shape[-1]
    eye = np.broadcast_to(np.eye(d, dtype=complex), a.shape).copy()
    out = eye.copy()
    term = eye
    for k in range(1, _EXPM_MAX_TERMS):
        term = term @ b / k
        out += term
        if np.abs(term).max() < 1e-16:
            break
    for _ in range(squarings):
        out = out @ out
    return out


def _modulated_stack(dipoles, kmat, n_exp, s_values):
    """(S, C, d, d) dipoles with exact integer-index phase factors."""
    modulus = np.int64(1) << n_exp
    idx = (kmat[None, :, :] * s_values[:, None, None]) % modulus
    phases = np.exp((2j * np.pi / modulus) * idx)
    return dipoles[None, :, :, :] * phases[:, None, :, :]


def propagate_sgrid_numpy(energies, dipoles, kmat, n_exp, s_values, eps, dt,
                          route):
    """Final propagators U(T; s) for every s, batched over the grid.

    Parameters mirror the numba twin: energies (d,), dipoles (C, d, d),
    kmat (d, d) int64 frequency multiples, s_values (S,) int64, eps
    (C, n_steps) field samples, dt step size.  Returns (S, d, d).
    """
    s_values = np.asarray(s_values, dtype=np.int64)
    mus = _modulated_stack(dipoles, kmat, n_exp, s_values)
    S, C, d, _ = mus.shape
    n_steps = eps.shape[1]
    U = np.broadcast_to(np.eye(d, dtype=complex), (S, d, d)).copy()
    if route == ROUTE_HERMITIAN_SINGLE:
        lam, V = np.linalg.eigh(mus[:, 0])
        Vh = V.conj().transpose(0, 2, 1)
    for n in range(n_steps):
        eps_n = eps[:, n]
        if not eps_n.any():
            continue
        if route == ROUTE_HERMITIAN_SINGLE:
            ph = np.exp(1j * lam * (eps_n[0] * dt))
            W = (V * ph[:, None, :]) @ Vh
        elif route == ROUTE_HERMITIAN_MULTI:
            M = np.tensordot(eps_n, mus, axes=(0, 1))
            lam_n, V_n = np.linalg.eigh(M)
            ph = np.exp(1j * lam_n * dt)
            W = (V_n * ph[:, None, :]) @ V_n.conj().transpose(0, 2, 1)
        else:
            M = np.tensordot(eps_n, mus, axes=(0, 1))
            W = expm_stack(1j * dt * M)
        pj = np.exp(1j * energies * (n * dt))
        W *= pj[None, :, None] * pj.conj()[None, None, :]
        U = W @ U
    return U


def propagate_column_numpy(energies, dipoles, eps, dt, start):
    """Propagate the single basis state ``start`` (unmodulated, Hermitian)."""
    d = dipoles.shape[1]
    psi = np.zeros(d, dtype=complex)
    psi[start] = 1.0
    n_steps = eps.shape[1]
    for n in range(n_steps):
        eps_n = eps[:, n]
        if not eps_n.any():
            continue
        M = np.tensordot(eps_n, dipoles, axes=(0, 0))
        lam, V = np.linalg.eigh(M)
        pj = np.exp(1j * energies * (n * dt))
        psi = pj * (V @ (np.exp(1j * lam * dt) * (V.conj().T @ (pj.conj() * psi))))
    return psi


def _sinc(u):
    small = np.abs(u) < 1e-7
    safe = np.where(small, 1.0, u)
    return np.where(small, 1.0 - u * u / 6.0, np.sin(safe) / safe)


def grape_pass_numpy(energies, dipoles, eps, dt, start, target):
    """Transfer amplitude z = <target|U(T)|start> and d|z|^2/d(eps).

    The derivative of each step exponential is exact (divided-difference
    formula on the step eigenbasis), so the returned gradient matches
    finite differences to machine precision.
    """
    C, n_steps = eps.shape
    d = len(energies)
    lam_all = np.empty((n_steps, d))
    V_all = np.empty((n_steps, d, d), dtype=complex)
    psi = np.zeros((n_steps + 1, d), dtype=complex)
    psi[0, start] = 1.0
    for n in range(n_steps):
        M = np.tensordot(eps[:, n], dipoles, axes=(0, 0))
        lam, V = np.linalg.eigh(M)
        lam_all[n] = lam
        V_all[n] = V
        pj = np.exp(1j * energies * (n * dt))
        psi[n + 1] = pj * (V @ (np.exp(1j * lam * dt) * (V.conj().T @ (pj.conj() * psi[n]))))
    z = psi[n_steps, target]

    chi = np.zeros(d, dtype=complex)
    chi[target] = 1.0
    grad = np.empty((C, n_steps))
    for n in range(n_steps - 1, -1, -1):
        lam, V = lam_all[n], V_all[n]
        Vh = V.conj().T
        pj = np.exp(1j * energies * (n * dt))
        mean = 0.5 * dt * (lam[:, None] + lam[None, :])
        diff = 0.5 * dt * (lam[:, None] - lam[None, :])
        factor = 1j * dt * np.exp(1j * mean) * _sinc(diff)
        row = (chi.conj() * pj) @ V          # chi^dag diag(pj) V
        col = Vh @ (pj.conj() * psi[n])
        for c in range(C):
            Xt = Vh @ dipoles[c] @ V
            dz = row @ (Xt * factor) @ col
            grad[c, n] = 2.0 * np.real(np.conj(z) * dz)
        # chi_n = U_n^dag chi_{n+1}
        chi = pj * (V @ (np.exp(-1j * lam * dt) * (Vh @ (pj.conj() * chi))))
    return z, grad


def _impl(name):
    if active_backend() == "numba":
        from . import _numba_kernels
        return getattr(_numba_kernels, name)
    return globals()[name + "_numpy"]


def propagate_sgrid(energies, dipoles, kmat, n_exp, s_values, eps, dt, route,
                    workers=None):
    set_worker_threads(workers)
    return _impl("propagate_sgrid")(
        np.ascontiguousarray(energies, dtype=float),
        np.ascontiguousarray(dipoles, dtype=complex),
        np.ascontiguousarray(kmat, dtype=np.int64),
        int(n_exp),
        np.ascontiguousarray(s_values, dtype=np.int64),
        np.ascontiguousarray(eps, dtype=float),
        float(dt), int(route))


def propagate_column(energies, dipoles, eps, dt, start):
    return _impl("propagate_column")(
        np.ascontiguousarray(energies, dtype=float),
        np.ascontiguousarray(dipoles, dtype=complex),
        np.ascontiguousarray(eps, dtype=float),
        float(dt), int(start))


def grape_pass(energies, dipoles, eps, dt, start, target):
    return _impl("grape_pass")(
        np.ascontiguousarray(energies, dtype=float),
        np.ascontiguousarray(dipoles, dtype=complex),
        np.ascontiguousarray(eps, dtype=float),
        float(dt), int(start), int(target))
