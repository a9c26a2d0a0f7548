"""Brute-force checks for the analytic equilibria and modes.

Everything here works from the reduced potential alone: a coarse grid,
golden-section coordinate descent, and a Newton polish on the potential
gradient.  The potential is re-implemented in numpy so that the oracle
shares no code with the production kernels or the closed-form families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError

N_GRID = 400
RHO_LO, RHO_HI = 1e-3, 5.0


def veff_np(rho, z, p_phi, u, v, M):
    """Reduced relative potential; even in rho and z, no centrifugal term at p = 0."""
    rho = np.asarray(rho, dtype=float)
    z = np.asarray(z, dtype=float)
    r2 = rho * rho + z * z
    with np.errstate(divide="ignore"):
        val = 0.5 * (1 + u * u) * rho**2 - u * p_phi + 0.5 * v * v * z**2 + r2 ** (-0.5 * M) / M
        if p_phi != 0:
            val = val + p_phi**2 / (2 * rho**2)
    return val


def veff_grad(x, p_phi, u, v, M):
    rho, z = x
    r2 = rho * rho + z * z
    w = r2 ** (-0.5 * M - 1)
    g_rho = (1 + u * u) * rho - rho * w
    if p_phi != 0:
        g_rho -= p_phi**2 / rho**3
    return np.array([g_rho, v * v * z - z * w])


def cm_veff(rho, z, p_star, u, v):
    """Centre-of-mass reduced potential (no interaction)."""
    return p_star**2 / (2 * rho**2) - u * p_star + 0.5 * (1 + u * u) * rho**2 + 0.5 * v * v * z**2


def _steps(x, h):
    x = np.asarray(x, dtype=float)
    return h * np.maximum(1.0, np.abs(x))


def fd_gradient(f: Callable, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient with step h * max(1, |x_i|)."""
    x = np.asarray(x, dtype=float)
    hs = _steps(x, h)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = hs[i]
        g[i] = (f(x + e) - f(x - e)) / (2 * hs[i])
    return g


def fd_hessian(f: Callable, x, h: float = 1e-4) -> np.ndarray:
    """Central second differences of f, symmetrised.

    The default step is larger than the gradient step because the
    round-off error of a second difference grows like eps / h^2.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    hs = _steps(x, h)
    H = np.empty((n, n))
    f0 = f(x)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = hs[i]
        H[i, i] = (f(x + ei) - 2 * f0 + f(x - ei)) / hs[i] ** 2
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = hs[j]
            H[i, j] = H[j, i] = (
                f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)
            ) / (4 * hs[i] * hs[j])
    return H


def fd_jacobian(g: Callable, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian of a vector function, symmetrised."""
    x = np.asarray(x, dtype=float)
    hs = _steps(x, h)
    J = np.empty((x.size, x.size))
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = hs[i]
        J[:, i] = (g(x + e) - g(x - e)) / (2 * hs[i])
    return 0.5 * (J + J.T)


@dataclass(frozen=True)
class OracleMinimum:
    rho: float
    z: float
    energy: float
    grad_norm: float


class OracleFailure(RuntimeError):
    pass


def _grid_start(f2, p_phi, v, M, n):
    rho_hi = RHO_HI
    z_hi = 3.0 * v ** (-2.0 / (M + 2))
    for _ in range(8):
        rho = np.geomspace(RHO_LO, rho_hi, n)
        if p_phi == 0:
            rho = np.concatenate(([0.0], rho))
        z = np.linspace(0.0, z_hi, n)
        R, Z = np.meshgrid(rho, z, indexing="ij")
        E = f2(R, Z)
        E[~np.isfinite(E)] = np.inf
        i, j = np.unravel_index(np.argmin(E), E.shape)
        if i == len(rho) - 1:
            rho_hi *= 3.0
            continue
        if j == len(z) - 1:
            z_hi *= 3.0
            continue
        return np.array([rho[i], z[j]]), rho, z
    raise OracleFailure("grid minimum stuck on the grid edge")


def _golden_cd(f, x, rho_axis, z_axis, sweeps=60):
    """Golden-section coordinate descent inside one grid cell per axis."""
    x = x.copy()
    axes = (rho_axis, z_axis)
    for _ in range(sweeps):
        x_old = x.copy()
        for k in range(2):
            ax = axes[k]
            i = int(np.clip(np.searchsorted(ax, x[k]), 1, len(ax) - 1))
            lo = ax[max(i - 2, 0)]
            hi = ax[min(i + 1, len(ax) - 1)]

            def line(t, k=k):
                y = x.copy()
                y[k] = t
                return f(y)

            res = minimize_scalar(line, bracket=None, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-12})
            x[k] = res.x
        if np.max(np.abs(x - x_old)) < 1e-12:
            break
    return x


def minimize_veff(u: float, v: float, p_phi: float, M: float, n: int = N_GRID,
                  tol: float = 1e-8) -> OracleMinimum:
    """Global minimum of the reduced potential over rho >= 0, z >= 0."""
    if u < 0 or v <= 0 or M <= 0:
        raise DomainError("need u >= 0, v > 0, M > 0")
    f2 = lambda R, Z: veff_np(R, Z, p_phi, u, v, M)  # noqa: E731
    f = lambda x: float(veff_np(abs(x[0]), abs(x[1]), p_phi, u, v, M))  # noqa: E731
    x0, rho_axis, z_axis = _grid_start(f2, p_phi, v, M, n)
    x = _golden_cd(f, x0, rho_axis, z_axis)
    g = lambda y: veff_grad(y, p_phi, u, v, M)  # noqa: E731
    # Newton polish on the potential gradient; coordinates are reflected
    # back into rho, z >= 0 (the potential is even in both)
    for _ in range(50):
        gr = g(x)
        if np.linalg.norm(gr) < 1e-13 * max(1.0, abs(f(x))):
            break
        H = fd_jacobian(g, x)
        try:
            step = np.linalg.solve(H, -gr)
        except np.linalg.LinAlgError:
            break
        x_new = np.abs(x + step)
        if not f(x_new) <= f(x) + 1e-12 * max(1.0, abs(f(x))):
            break
        x = x_new
        if np.max(np.abs(step)) < 1e-15:
            break
    gn = float(np.linalg.norm(g(x)))
    if gn > tol * max(1.0, abs(f(x))):
        raise OracleFailure(f"gradient norm {gn:.3g} after refinement (u={u}, v={v}, p={p_phi}, M={M})")
    return OracleMinimum(rho=float(x[0]), z=float(x[1]), energy=f(x), grad_norm=gn)


@dataclass(frozen=True)
class NumericModes:
    """Signed frequencies sign(l) sqrt|l| of the Hessian eigenvalues l."""

    omega_hi: float
    omega_lo: float
    eig_hi: float
    eig_lo: float


def _signed(l):
    return math.copysign(math.sqrt(abs(l)), l)


def _modes_at(u, v, p_phi, M, x):
    g = lambda y: veff_grad(y, p_phi, u, v, M)  # noqa: E731
    lo, hi = np.linalg.eigvalsh(fd_jacobian(g, np.asarray(x, dtype=float)))
    return NumericModes(_signed(hi), _signed(lo), float(hi), float(lo))


def numeric_modes(u: float, v: float, p_phi: float, M: float, at=None, eps: float = 1e-4) -> NumericModes:
    """Frequencies from the FD Hessian of the reduced potential at ``at``.

    ``at`` defaults to the oracle minimum.  An on-axis p_phi = 0 point is a
    coordinate singularity of (rho, z): the rho mode there is the p -> 0
    limit, obtained by Richardson extrapolation from p = eps and 2 eps.
    """
    if at is None:
        m = minimize_veff(u, v, p_phi, M)
        at = (m.rho, m.z)
    if p_phi == 0 and abs(at[0]) <= 1e-9 * max(1.0, abs(at[1])):
        a = numeric_modes(u, v, eps, M)
        b = numeric_modes(u, v, 2 * eps, M)
        hi = 2 * a.omega_hi - b.omega_hi
        lo = 2 * a.omega_lo - b.omega_lo
        return NumericModes(hi, lo, math.copysign(hi * hi, hi), math.copysign(lo * lo, lo))
    return _modes_at(u, v, p_phi, M, at)


def cm_numeric_modes(u: float, v: float, p_star: float = 1.0) -> tuple[float, float]:
    """(rho, z) frequencies of the centre-of-mass potential at its minimum."""
    if p_star == 0:
        raise DomainError("use p_star != 0 (rho = 0 is a coordinate singularity)")
    f = lambda x: cm_veff(x[0], x[1], p_star, u, v)  # noqa: E731
    res = minimize_scalar(lambda r: f((r, 0.0)), bounds=(1e-3, 10.0), method="bounded",
                          options={"xatol": 1e-12})
    # the Hessian is diagonal at z = 0, so its entries are labelled modes
    H = fd_hessian(f, np.array([res.x, 0.0]))
    return math.sqrt(H[0, 0]), math.sqrt(H[1, 1])


# -- verification suite -------------------------------------------------------


@dataclass(frozen=True)
class VerifyRow:
    u: float
    v: float
    p_phi: float
    M: float
    family: str
    d_energy: float
    d_position: float
    d_mode: float
    grad: float


SAMPLE_M = (0.5, 1.0, 2.0, 3.0, 6.0)


def sample_tuples(n: int = 200, seed: int = 20240917, soft_min: float = 0.05):
    """Seeded (u, v, p_phi, M, family) samples, half A and half S where possible.

    Points with a nearly vanishing soft mode are skipped: the minimum there
    is quartic and a brute-force location is ill-conditioned.
    """
    from .equilibria import p_max
    from .modes import state_modes

    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        u = float(rng.uniform(0, 10))
        v = float(rng.uniform(0.3, 6))
        M = float(rng.choice(SAMPLE_M))
        want_a = len(out) % 2 == 0
        d2 = 1 + u * u - v * v
        if want_a:
            if d2 <= 0.05:
                continue
            p = float(rng.uniform(0.02, 0.98)) * p_max(u, v, M)
        else:
            base = p_max(u, v, M) if d2 > 0 else 0.0
            p = base + float(rng.uniform(0.05, 3.0))
        if rng.uniform() < 0.2:
            p = -p
        ms = state_modes(u, v, p, M)
        if ms.soft_sq < soft_min:
            continue
        out.append((u, v, p, M, "A" if want_a else "S"))
    return out


def verify_suite(n: int = 200, seed: int = 20240917) -> list[VerifyRow]:
    """Compare analytic equilibria and modes with the brute-force oracle."""
    from .equilibria import state
    from .modes import state_modes

    rows = []
    for u, v, p, M, fam in sample_tuples(n, seed):
        st = state(u, v, p, M)
        z_an = getattr(st, "z", 0.0)
        mn = minimize_veff(u, v, p, M)
        ms = state_modes(u, v, p, M)
        nm = numeric_modes(u, v, p, M, at=(st.rho, z_an))
        d_mode = max(abs(nm.omega_hi - ms.omega_hi) / ms.omega_hi,
                     abs(nm.omega_lo - ms.omega_lo) / ms.omega_lo)
        gr = float(np.linalg.norm(fd_gradient(lambda x: float(veff_np(x[0], x[1], p, u, v, M)),
                                              np.array([st.rho, z_an]))))
        rows.append(VerifyRow(
            u=u, v=v, p_phi=p, M=M, family=fam,
            d_energy=abs(mn.energy - st.energy),
            d_position=max(abs(mn.rho - st.rho), abs(mn.z - z_an)),
            d_mode=d_mode,
            grad=gr,
        ))
    return rows
