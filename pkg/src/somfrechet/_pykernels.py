"""Pure numpy implementations of the hot kernels.

Every function here has a twin of the same name and signature in the
compiled ``_ckernels`` extension. Results agree to rounding; within one
backend they are bit-reproducible.
"""
import numpy as np

# keeps the (chunk, K, T) difference tensor small for large V
_BMU_CHUNK = 4096

KIND_T, KIND_S, KIND_ST = 0, 1, 2


def bmu_assign(X, W):
    """Index of the nearest prototype for every row of X (ties -> lowest)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    W = np.ascontiguousarray(W, dtype=np.float64)
    out = np.empty(X.shape[0], dtype=np.int64)
    for start in range(0, X.shape[0], _BMU_CHUNK):
        chunk = X[start:start + _BMU_CHUNK]
        d2 = ((chunk[:, None, :] - W[None, :, :]) ** 2).sum(axis=-1)
        out[start:start + _BMU_CHUNK] = d2.argmin(axis=1)
    return out


def batch_update(X, bmu, sq_grid, sigma):
    """One batch-SOM weight update from fixed BMUs.

    Each unit becomes the kernel-weighted mean of all inputs. Kernel
    weights are computed in log space with a per-unit shift so they never
    underflow to an all-zero row; the shift cancels in the ratio.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    K = sq_grid.shape[0]
    counts = np.bincount(bmu, minlength=K).astype(np.float64)
    sums = np.zeros((K, X.shape[1]))
    np.add.at(sums, bmu, X)
    logk = -np.asarray(sq_grid, dtype=np.float64) / (2.0 * sigma * sigma)
    occupied = counts > 0
    shift = logk[:, occupied].max(axis=1, keepdims=True)
    H = np.exp(np.where(occupied, logk - shift, -np.inf))
    num = H @ sums
    den = H @ counts
    return num / den[:, None]


def _euclid(Wa, Wb):
    return np.sqrt(((Wa[:, None, :] - Wb[None, :, :]) ** 2).sum(axis=-1))


def _hamming_table(a, b, Ka, Kb, V):
    joint = np.bincount(a * Kb + b, minlength=Ka * Kb).reshape(Ka, Kb)
    na = joint.sum(axis=1)
    nb = joint.sum(axis=0)
    return (na[:, None] + nb[None, :] - 2 * joint) / V


def smd_pair(Wa, a, Wb, b, kind):
    """SMD between two maps given weights and assignments."""
    Ka, Kb = Wa.shape[0], Wb.shape[0]
    if kind == KIND_T:
        E = _euclid(Wa, Wb)
        V = a.shape[0]
        return (E.min(axis=1).sum() + E.min(axis=0).sum()) / (2.0 * V)
    V = a.shape[0]
    H = _hamming_table(a, b, Ka, Kb, V)
    if kind == KIND_S:
        return (H.min(axis=1).sum() + H.min(axis=0).sum()) / (2.0 * V)
    E = _euclid(Wa, Wb)
    best_b = E.argmin(axis=1)
    best_a = E.argmin(axis=0)
    return (H[np.arange(Ka), best_b].sum() + H[best_a, np.arange(Kb)].sum()) / 2.0


def smd_matrix(W, A, kind):
    """All pairwise SMD values for stacked maps.

    W : (n, K, T) weights; A : (n, V) assignments (ignored for T-SMD).
    """
    n = W.shape[0]
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = smd_pair(W[i], A[i], W[j], A[j], kind)
    return D


def floyd_warshall(D):
    """All-pairs shortest paths, repeated until a fixed point is reached."""
    D = np.array(D, dtype=np.float64, copy=True)
    n = D.shape[0]
    for _ in range(n + 1):
        before = D.copy()
        for k in range(n):
            np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :], out=D)
        if np.array_equal(before, D):
            break
    return D
