"""Pure-Python twin of ``_ckernels`` used when the extension is not built."""

import math

import numpy as np

MAX_ITER = 400


def _boundary_lhs(v, p2, expo):
    return math.pow(v, expo) * p2 + v * v


def vstar_bisect(p, u, M):
    target = 1.0 + u * u
    hi = math.sqrt(target)
    p2 = p * p
    expo = 8.0 / (M + 2.0)
    lo = 1e-12
    if p2 == 0.0:
        return hi
    if _boundary_lhs(lo, p2, expo) >= target:
        lo = 0.0
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _boundary_lhs(mid, p2, expo) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def vstar_bisect_array(p, u, M):
    pb, ub = np.broadcast_arrays(np.asarray(p, dtype=np.float64), np.asarray(u, dtype=np.float64))
    out = np.fromiter(
        (vstar_bisect(float(a), float(b), M) for a, b in zip(pb.ravel(), ub.ravel())),
        dtype=np.float64,
        count=pb.size,
    )
    return out.reshape(pb.shape)


def veff(rho, z, p, u, v, M):
    r2 = rho * rho + z * z
    if r2 == 0.0:
        return math.inf
    val = 0.5 * (1.0 + u * u) * rho * rho - u * p + 0.5 * v * v * z * z
    val += math.pow(r2, -0.5 * M) / M
    if p != 0.0:
        if rho == 0.0:
            return math.inf
        val += p * p / (2.0 * rho * rho)
    return val


def veff_grid(rho, z, p, u, v, M):
    r = np.ascontiguousarray(rho, dtype=np.float64).ravel()
    zz = np.ascontiguousarray(z, dtype=np.float64).ravel()
    return np.array([[veff(float(a), float(b), p, u, v, M) for b in zz] for a in r])
