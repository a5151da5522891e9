"""Hot numerical kernels with numba and pure-numpy implementations.

Every kernel operates on a density matrix stored as a contiguous complex128
array of shape (N, R, N, R): N is the Fock cutoff of the mode being damped,
R is the dimension of whatever rides along (R = 1 for a single mode, R = N
for the undamped partner of a two-mode state).  Row index = (n, m), column
index = (n', m'); the damped mode always sits on the first slot of each
pair, so callers that damp the second mode transpose before and after.

numba is used when importable; set THERMOFOCK_DISABLE_NUMBA=1 to force the
pure-numpy path (the benchmark script compares the two directly).
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "THERMOFOCK_DISABLE_NUMBA"

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

NUMBA_ENABLED = HAS_NUMBA and not os.environ.get(DISABLE_ENV)


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------


def _apply_damping_np(rho4: np.ndarray, weights: np.ndarray, n_kraus: int) -> np.ndarray:
    """Operator-sum damping: out[j,m,k,m'] = sum_n W[n,j] W[n,k] rho[j+n,m,k+n,m']."""
    n_modes = rho4.shape[0]
    out = np.zeros_like(rho4)
    for n in range(min(n_kraus, n_modes)):
        span = n_modes - n
        coef = np.outer(weights[n, :span], weights[n, :span])
        out[:span, :, :span, :] += coef[:, None, :, None] * rho4[n:, :, n:, :]
    return out


def _lindblad_rhs_np(rho4: np.ndarray, kappa: float) -> np.ndarray:
    """Damping generator: kappa * (2 a rho a+ - {a+a, rho}) on the first mode."""
    n_modes = rho4.shape[0]
    idx = np.arange(n_modes, dtype=np.float64)
    out = -(idx[:, None, None, None] + idx[None, None, :, None]) * rho4
    if n_modes > 1:
        gain = np.outer(np.sqrt(idx[1:]), np.sqrt(idx[1:]))
        out[:-1, :, :-1, :] += 2.0 * gain[:, None, :, None] * rho4[1:, :, 1:, :]
    return kappa * out


def _hermitize_np(rho4: np.ndarray) -> np.ndarray:
    return 0.5 * (rho4 + rho4.transpose(2, 3, 0, 1).conj())


def _rk4_np(rho4: np.ndarray, kappa: float, dt: float, n_steps: int) -> np.ndarray:
    out = rho4.copy()
    for _ in range(n_steps):
        k1 = _lindblad_rhs_np(out, kappa)
        k2 = _lindblad_rhs_np(out + (0.5 * dt) * k1, kappa)
        k3 = _lindblad_rhs_np(out + (0.5 * dt) * k2, kappa)
        k4 = _lindblad_rhs_np(out + dt * k3, kappa)
        out += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out = _hermitize_np(out)
    return out


def _herm_defect_np(mat: np.ndarray) -> float:
    # blockwise so the defect of a large matrix never allocates a full copy
    dim = mat.shape[0]
    step = 512
    worst = 0.0
    for lo in range(0, dim, step):
        hi = min(lo + step, dim)
        block = np.abs(mat[lo:hi, :] - mat[:, lo:hi].conj().T)
        worst = max(worst, float(block.max()))
    return worst


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True)
    def _apply_damping_nb(rho4, weights, n_kraus):
        n_modes, ride = rho4.shape[0], rho4.shape[1]
        out = np.zeros_like(rho4)
        for j in range(n_modes):
            for k in range(n_modes):
                n_max = min(n_kraus, n_modes - j, n_modes - k)
                for m in range(ride):
                    for mp in range(ride):
                        acc = 0.0 + 0.0j
                        for n in range(n_max):
                            acc += weights[n, j] * weights[n, k] * rho4[j + n, m, k + n, mp]
                        out[j, m, k, mp] = acc
        return out

    @njit(cache=True)
    def _rhs_into_nb(rho4, kappa, out):
        n_modes, ride = rho4.shape[0], rho4.shape[1]
        root = np.sqrt(np.arange(1.0, n_modes + 1.0))
        if ride == 1:
            src = rho4.reshape(n_modes, n_modes)
            dst = out.reshape(n_modes, n_modes)
            last = n_modes - 1
            for j in range(last):
                decay_j = kappa * j
                gain_j = 2.0 * kappa * root[j]
                for k in range(last):
                    dst[j, k] = (
                        gain_j * root[k] * src[j + 1, k + 1]
                        - (decay_j + kappa * k) * src[j, k]
                    )
                dst[j, last] = -(decay_j + kappa * last) * src[j, last]
            decay_j = kappa * last
            for k in range(n_modes):
                dst[last, k] = -(decay_j + kappa * k) * src[last, k]
            return
        for j in range(n_modes):
            for k in range(n_modes):
                decay = kappa * (j + k)
                gain = 0.0
                if j + 1 < n_modes and k + 1 < n_modes:
                    gain = 2.0 * kappa * root[j] * root[k]
                for m in range(ride):
                    for mp in range(ride):
                        val = -decay * rho4[j, m, k, mp]
                        if gain != 0.0:
                            val += gain * rho4[j + 1, m, k + 1, mp]
                        out[j, m, k, mp] = val

    @njit(cache=True)
    def _lindblad_rhs_nb(rho4, kappa):
        out = np.empty_like(rho4)
        _rhs_into_nb(rho4, kappa, out)
        return out

    @njit(cache=True)
    def _hermitize_inplace_nb(rho4):
        dim = rho4.shape[0] * rho4.shape[1]
        flat = rho4.reshape(dim, dim)
        for i in range(dim):
            for j in range(i, dim):
                h = 0.5 * (flat[i, j] + flat[j, i].conjugate())
                flat[i, j] = h
                flat[j, i] = h.conjugate()

    @njit(cache=True)
    def _rk4_nb(rho4, kappa, dt, n_steps):
        out = rho4.copy()
        k1 = np.empty_like(out)
        k2 = np.empty_like(out)
        k3 = np.empty_like(out)
        k4 = np.empty_like(out)
        stage = np.empty_like(out)
        flat_out = out.reshape(-1)
        flat_k1 = k1.reshape(-1)
        flat_k2 = k2.reshape(-1)
        flat_k3 = k3.reshape(-1)
        flat_k4 = k4.reshape(-1)
        flat_stage = stage.reshape(-1)
        size = flat_out.size
        for _ in range(n_steps):
            _rhs_into_nb(out, kappa, k1)
            for i in range(size):
                flat_stage[i] = flat_out[i] + (0.5 * dt) * flat_k1[i]
            _rhs_into_nb(stage, kappa, k2)
            for i in range(size):
                flat_stage[i] = flat_out[i] + (0.5 * dt) * flat_k2[i]
            _rhs_into_nb(stage, kappa, k3)
            for i in range(size):
                flat_stage[i] = flat_out[i] + dt * flat_k3[i]
            _rhs_into_nb(stage, kappa, k4)
            for i in range(size):
                flat_out[i] += (dt / 6.0) * (
                    flat_k1[i] + 2.0 * flat_k2[i] + 2.0 * flat_k3[i] + flat_k4[i]
                )
            _hermitize_inplace_nb(out)
        return out

    @njit(cache=True)
    def _herm_defect_nb(mat):
        dim = mat.shape[0]
        worst = 0.0
        for i in range(dim):
            for j in range(i, dim):
                d = abs(mat[i, j] - mat[j, i].conjugate())
                if d > worst:
                    worst = d
        return worst


# ---------------------------------------------------------------------------
# dispatchers
# ---------------------------------------------------------------------------


def apply_damping(rho4: np.ndarray, weights: np.ndarray, n_kraus: int) -> np.ndarray:
    """Apply the amplitude-damping operator sum to the first mode of rho4.

    weights[n, j] is the matrix element of the n-th damping operator that
    maps occupation j+n down to j; rows beyond n_kraus are ignored.
    """
    if NUMBA_ENABLED:
        return _apply_damping_nb(rho4, weights, n_kraus)
    return _apply_damping_np(rho4, weights, n_kraus)


def lindblad_rhs4(rho4: np.ndarray, kappa: float) -> np.ndarray:
    """Evaluate the damping generator on the first mode of rho4."""
    if NUMBA_ENABLED:
        return _lindblad_rhs_nb(rho4, kappa)
    return _lindblad_rhs_np(rho4, kappa)


def rk4_evolve(rho4: np.ndarray, kappa: float, dt: float, n_steps: int) -> np.ndarray:
    """Integrate the damping generator with fixed-step RK4.

    The state is re-hermitized after every step so round-off cannot
    accumulate an anti-hermitian component over long integrations.
    """
    if n_steps <= 0:
        return rho4.copy()
    if NUMBA_ENABLED:
        return _rk4_nb(rho4, kappa, dt, n_steps)
    return _rk4_np(rho4, kappa, dt, n_steps)


def hermiticity_defect(mat: np.ndarray) -> float:
    """max |mat - mat^dagger| entrywise, without forming the full difference."""
    if NUMBA_ENABLED:
        return float(_herm_defect_nb(mat))
    return _herm_defect_np(mat)
