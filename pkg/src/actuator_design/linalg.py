"""Small dense symmetric eigensolver (cyclic Jacobi)."""

import numpy as np

# off-diagonal entries below this fraction of ||A||_max are treated as converged
OFFDIAG_TOL = 1e-13
_REL_TOL = 1e-15
_MAX_SWEEPS = 60


def jacobi_eigh(a, max_sweeps=_MAX_SWEEPS):
    """Eigen-decompose a real symmetric matrix with cyclic Jacobi rotations.

    A pair (p, q) is rotated while ``|a_pq|`` exceeds ``1e-15 * sqrt(|a_pp a_qq|)``,
    which keeps the small eigenvalues of graded positive definite matrices
    accurate in a relative sense.  Iteration stops once a full sweep performs
    no rotation, at which point every off-diagonal magnitude is also below
    ``OFFDIAG_TOL * ||A||_max``.

    Returns:
        (w, v): eigenvalues in ascending order and the matching orthonormal
        eigenvectors as columns of ``v``.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("jacobi_eigh expects a square matrix")
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v
    scale = np.abs(a).max()
    if scale == 0.0:
        return np.zeros(n), v
    floor = OFFDIAG_TOL * scale * 1e-3

    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                if abs(apq) <= max(_REL_TOL * np.sqrt(abs(a[p, p] * a[q, q])), floor):
                    # small enough to drop without perturbing eigenvalues
                    if abs(apq) <= floor:
                        a[p, q] = a[q, p] = 0.0
                    continue
                rotated = True
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
        if not rotated:
            break

    w = a.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def canonical_sign(vec, rel_tol=1e-12):
    """Flip ``vec`` so that its first non-negligible entry is positive."""
    vec = np.asarray(vec, dtype=float)
    big = np.abs(vec).max() if vec.size else 0.0
    for entry in vec:
        if abs(entry) > rel_tol * big:
            return vec if entry > 0 else -vec
    return vec


def readonly(arr):
    arr = np.asarray(arr)
    arr.flags.writeable = False
    return arr
