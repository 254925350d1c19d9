"""numba @njit twins of the kernels in ``pathenc.kernels``.

Same math, loop style: one s-point per prange iteration instead of batched
array operations.  Signatures match the numpy versions exactly so the
dispatcher can swap them freely.
"""

import numpy as np
from numba import njit, prange

_EXPM_THETA = 0.25
_EXPM_MAX_TERMS = 24


@njit(cache=True, inline="always")
def _matmul_into(a, b, out):
    d = a.shape[0]
    for i in range(d):
        for j in range(d):
            acc = complex(0.0, 0.0)
            for k in range(d):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc


@njit(cache=True)
def _expm_into(a, out, term, tmp):
    """out = exp(a); term and tmp are scratch (d, d) buffers."""
    d = a.shape[0]
    norm = 0.0
    for i in range(d):
        row = 0.0
        for j in range(d):
            row += abs(a[i, j])
        if row > norm:
            norm = row
    squarings = 0
    while norm > _EXPM_THETA:
        norm *= 0.5
        squarings += 1
    scale = 0.5 ** squarings
    for i in range(d):
        for j in range(d):
            out[i, j] = complex(1.0, 0.0) if i == j else complex(0.0, 0.0)
            term[i, j] = out[i, j]
            a[i, j] = a[i, j] * scale
    for k in range(1, _EXPM_MAX_TERMS):
        _matmul_into(term, a, tmp)
        tmax = 0.0
        inv_k = 1.0 / k
        for i in range(d):
            for j in range(d):
                term[i, j] = tmp[i, j] * inv_k
                out[i, j] += term[i, j]
                if abs(term[i, j]) > tmax:
                    tmax = abs(term[i, j])
        if tmax < 1e-16:
            break
    for _ in range(squarings):
        _matmul_into(out, out, tmp)
        for i in range(d):
            for j in range(d):
                out[i, j] = tmp[i, j]


@njit(cache=True)
def _expm(a):
    d = a.shape[0]
    out = np.empty((d, d), np.complex128)
    _expm_into(a.copy(), out, np.empty((d, d), np.complex128),
               np.empty((d, d), np.complex128))
    return out


@njit(cache=True)
def _modulated(dipoles, kmat, n_exp, s):
    C, d, _ = dipoles.shape
    modulus = np.int64(1) << np.int64(n_exp)
    unit = 2.0 * np.pi / modulus
    mus = np.empty((C, d, d), np.complex128)
    for i in range(d):
        for j in range(d):
            idx = (kmat[i, j] * s) % modulus
            ang = unit * idx
            ph = complex(np.cos(ang), np.sin(ang))
            for c in range(C):
                mus[c, i, j] = dipoles[c, i, j] * ph
    return mus


@njit(cache=True)
def _phase_sandwich(W, energies, t):
    # W[i, j] *= exp(i E_i t) * exp(-i E_j t)
    d = W.shape[0]
    for i in range(d):
        pi = complex(np.cos(energies[i] * t), np.sin(energies[i] * t))
        for j in range(d):
            pj = complex(np.cos(energies[j] * t), -np.sin(energies[j] * t))
            W[i, j] = pi * W[i, j] * pj
    return W


@njit(cache=True, parallel=True)
def propagate_sgrid(energies, dipoles, kmat, n_exp, s_values, eps, dt, route):
    S = s_values.shape[0]
    C, d, _ = dipoles.shape
    n_steps = eps.shape[1]
    out = np.empty((S, d, d), np.complex128)
    for si in prange(S):
        mus = _modulated(dipoles, kmat, n_exp, s_values[si])
        U = np.eye(d, dtype=np.complex128)
        W = np.empty((d, d), np.complex128)
        M = np.empty((d, d), np.complex128)
        scratch1 = np.empty((d, d), np.complex128)
        scratch2 = np.empty((d, d), np.complex128)
        lam0 = np.zeros(d, dtype=np.float64)
        V0 = np.eye(d, dtype=np.complex128)
        Vh0 = np.eye(d, dtype=np.complex128)
        if route == 0:
            lam0, V0 = np.linalg.eigh(mus[0])
            Vh0 = np.ascontiguousarray(V0.conj().T)
        for n in range(n_steps):
            active = False
            for c in range(C):
                if eps[c, n] != 0.0:
                    active = True
            if not active:
                continue
            if route == 0:
                x = eps[0, n] * dt
                for j in range(d):
                    ph = complex(np.cos(lam0[j] * x), np.sin(lam0[j] * x))
                    for i in range(d):
                        scratch1[i, j] = V0[i, j] * ph
                _matmul_into(scratch1, Vh0, W)
            else:
                for i in range(d):
                    for j in range(d):
                        acc = complex(0.0, 0.0)
                        for c in range(C):
                            acc += eps[c, n] * mus[c, i, j]
                        M[i, j] = acc
                if route == 1:
                    lam, V = np.linalg.eigh(M)
                    for j in range(d):
                        ph = complex(np.cos(lam[j] * dt), np.sin(lam[j] * dt))
                        for i in range(d):
                            scratch1[i, j] = V[i, j] * ph
                    for i in range(d):
                        for j in range(d):
                            scratch2[i, j] = np.conj(V[j, i])
                    _matmul_into(scratch1, scratch2, W)
                else:
                    for i in range(d):
                        for j in range(d):
                            M[i, j] = 1j * dt * M[i, j]
                    _expm_into(M, W, scratch1, scratch2)
            _phase_sandwich(W, energies, n * dt)
            _matmul_into(W, U, scratch1)
            for i in range(d):
                for j in range(d):
                    U[i, j] = scratch1[i, j]
        out[si] = U
    return out


@njit(cache=True)
def propagate_column(energies, dipoles, eps, dt, start):
    C, d, _ = dipoles.shape
    n_steps = eps.shape[1]
    psi = np.zeros(d, dtype=np.complex128)
    psi[start] = 1.0
    for n in range(n_steps):
        active = False
        for c in range(C):
            if eps[c, n] != 0.0:
                active = True
        if not active:
            continue
        M = np.zeros((d, d), np.complex128)
        for c in range(C):
            if eps[c, n] != 0.0:
                M += eps[c, n] * dipoles[c]
        lam, V = np.linalg.eigh(M)
        Vh = np.ascontiguousarray(V.conj().T)
        t = n * dt
        for i in range(d):
            pj = complex(np.cos(energies[i] * t), -np.sin(energies[i] * t))
            psi[i] = pj * psi[i]
        psi = np.dot(Vh, psi)
        for i in range(d):
            ph = complex(np.cos(lam[i] * dt), np.sin(lam[i] * dt))
            psi[i] = ph * psi[i]
        psi = np.dot(V, psi)
        for i in range(d):
            pj = complex(np.cos(energies[i] * t), np.sin(energies[i] * t))
            psi[i] = pj * psi[i]
    return psi


@njit(cache=True)
def grape_pass(energies, dipoles, eps, dt, start, target):
    C = dipoles.shape[0]
    d = dipoles.shape[1]
    n_steps = eps.shape[1]
    lam_all = np.empty((n_steps, d), np.float64)
    V_all = np.empty((n_steps, d, d), np.complex128)
    psi = np.zeros((n_steps + 1, d), np.complex128)
    psi[0, start] = 1.0
    for n in range(n_steps):
        M = np.zeros((d, d), np.complex128)
        for c in range(C):
            M += eps[c, n] * dipoles[c]
        lam, V = np.linalg.eigh(M)
        lam_all[n] = lam
        V_all[n] = V
        vec = np.empty(d, np.complex128)
        t = n * dt
        for i in range(d):
            pj = complex(np.cos(energies[i] * t), -np.sin(energies[i] * t))
            vec[i] = pj * psi[n, i]
        vec = np.dot(np.ascontiguousarray(V.conj().T), vec)
        for i in range(d):
            ph = complex(np.cos(lam[i] * dt), np.sin(lam[i] * dt))
            vec[i] = ph * vec[i]
        vec = np.dot(V, vec)
        for i in range(d):
            pj = complex(np.cos(energies[i] * t), np.sin(energies[i] * t))
            psi[n + 1, i] = pj * vec[i]
    z = psi[n_steps, target]

    chi = np.zeros(d, np.complex128)
    chi[target] = 1.0
    grad = np.empty((C, n_steps), np.float64)
    factor = np.empty((d, d), np.complex128)
    for n in range(n_steps - 1, -1, -1):
        lam = lam_all[n]
        V = V_all[n]
        Vh = np.ascontiguousarray(V.conj().T)
        t = n * dt
        for i in range(d):
            for j in range(d):
                u = 0.5 * dt * (lam[i] - lam[j])
                if abs(u) < 1e-7:
                    s = 1.0 - u * u / 6.0
                else:
                    s = np.sin(u) / u
                m = 0.5 * dt * (lam[i] + lam[j])
                factor[i, j] = 1j * dt * complex(np.cos(m), np.sin(m)) * s
        row = np.empty(d, np.complex128)
        col = np.empty(d, np.complex128)
        for i in range(d):
            pj = complex(np.cos(energies[i] * t), np.sin(energies[i] * t))
            row[i] = np.conj(chi[i]) * pj
            col[i] = np.conj(pj) * psi[n, i]
        row = np.dot(row, V)
        col = np.dot(Vh, col)
        for c in range(C):
            Xt = np.dot(Vh, np.dot(dipoles[c], V))
            dz = complex(0.0, 0.0)
            for i in range(d):
                acc = complex(0.0, 0.0)
                for j in range(d):
                    acc += Xt[i, j] * factor[i, j] * col[j]
                dz += row[i] * acc
            grad[c, n] = 2.0 * (np.conj(z) * dz).real
        vec = np.empty(d, np.complex128)
        for i in range(d):
            pj = complex(np.cos(energies[i] * t), -np.sin(energies[i] * t))
            vec[i] = pj * chi[i]
        vec = np.dot(Vh, vec)
        for i in range(d):
            ph = complex(np.cos(lam[i] * dt), -np.sin(lam[i] * dt))
            vec[i] = ph * vec[i]
        vec = np.dot(V, vec)
        for i in range(d):
            pj = complex(np.cos(energies[i] * t), np.sin(energies[i] * t))
            chi[i] = pj * vec[i]
    return z, grad
