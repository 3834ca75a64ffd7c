"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def jacobi_eigenvalues(matrix, rtol=1e-12, max_sweeps=100):
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    target = rtol * np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                with np.errstate(over="ignore"):
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a).copy())


def soft_threshold(v, thresh):
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - thresh, 0.0)


def hard_threshold(v, s):
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    if s <= 0:
        return out
    # stable sort keeps the lowest index among equal magnitudes
    keep = np.argsort(-np.abs(v), kind="stable")[:s]
    out[keep] = v[keep]
    return out


def project_ball(v, center, radius):
    v = np.asarray(v, dtype=float)
    center = np.asarray(center, dtype=float)
    d = v - center
    dist = np.linalg.norm(d)
    if dist <= radius:
        return v.copy()
    return center + (radius / dist) * d


def project_sphere(v, center, radius):
    v = np.asarray(v, dtype=float)
    center = np.asarray(center, dtype=float)
    d = v - center
    dist = np.linalg.norm(d)
    if dist == 0.0:
        out = center.copy()
        out[0] += radius
        return out
    return center + (radius / dist) * d
