"""Harmonic quantisation, additional energies and ground-state scans.

Energies are in units of E_dia.  The orbital momenta are quantised as
p_phi = m q_dia, p_phi* = m* q_dia.  For ground levels with k_z = 0 the
spin projection follows the parity of m, M_S = -(m mod 2).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .equilibria import (
    asymmetric_state,
    in_asymmetric_family,
    symmetric_energy,
    u_crit,
    vstar,
)
from .errors import DomainError, UnstableStateError
from .modes import Stability, a_modes, s_modes
from .units import ModelPoint, ScaleSet, power_scale as h

NEAR_CRIT_WINDOW = 0.05


@dataclass(frozen=True)
class LevelIndex:
    k_rho: int = 0
    k_z: int = 0
    m: int = 0
    k_rho_star: int = 0
    k_z_star: int = 0
    m_star: int = 0
    M_S: int = 0

    def __post_init__(self):
        for name in ("k_rho", "k_z", "k_rho_star", "k_z_star"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")
        if self.M_S not in (-1, 0, 1):
            raise DomainError("M_S must be -1, 0 or 1")

    @classmethod
    def ground(cls, m: int) -> "LevelIndex":
        """Lowest level at relative momentum m with the Pauli spin projection."""
        return cls(m=m, M_S=-(m % 2))


@dataclass(frozen=True)
class LevelEnergy:
    total: float
    cm_part: float
    rel_part: float
    zeeman_part: float
    family: str


@dataclass(frozen=True)
class ScanPoint:
    u: float
    m: int
    M_S: int
    E_add: float
    family: str
    near_critical: bool


def cm_level_energy(idx: LevelIndex, u: float, v: float, q_dia: float) -> float:
    ms = idx.m_star
    return q_dia * (
        math.sqrt(1.0 + u * u) * (abs(ms) + 2 * idx.k_rho_star + 1)
        - u * ms
        + (0.5 + idx.k_z_star) * v
    )


def relative_level_energy(idx: LevelIndex, point: ModelPoint) -> tuple[float, str]:
    u, v, M, q = point.u, point.v, point.M, point.q_dia
    p = idx.m * q
    if in_asymmetric_family(p, u, v, M):
        st = asymmetric_state(u, v, p, M)
        ms = a_modes(u, v, p, M)
        return st.energy + q * (ms.omega_rho * (idx.k_rho + 0.5) + ms.omega_z * (idx.k_z + 0.5)), "A"
    vs = vstar(p, u, M)
    ms = s_modes(u, v, p, M, v_star=vs)
    if ms.stability is not Stability.S_PLUS:
        raise UnstableStateError(
            f"cannot quantise a {ms.stability} state (u={u}, v={v}, p_phi={p})"
        )
    e = symmetric_energy(vs, u, M, -1 if p < 0 else 1)
    return e + q * (ms.omega_rho * (idx.k_rho + 0.5) + ms.omega_z * (idx.k_z + 0.5)), "S"


def total_energy(idx: LevelIndex, point: ModelPoint, E_S: float) -> LevelEnergy:
    cm = cm_level_energy(idx, point.u, point.v, point.q_dia)
    rel, fam = relative_level_energy(idx, point)
    zee = point.u * E_S * idx.M_S
    return LevelEnergy(total=cm + rel + zee, cm_part=cm, rel_part=rel, zeeman_part=zee, family=fam)


def additional_energy(idx: LevelIndex, point: ModelPoint, E_S: float) -> float:
    ref = cm_level_energy(LevelIndex(), point.u, point.v, point.q_dia)
    rel, _ = relative_level_energy(idx, point)
    return -ref + rel + point.u * E_S * idx.M_S


def ground_band(u: float, v: float, q_dia: float, M: float, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Relative energies of the k = 0 levels for an array of m >= 0.

    Vectorised twin of :func:`relative_level_energy`.  Returns (energy,
    is_A); saddle or zero-mode S levels come back as +inf.
    """
    m = np.asarray(m)
    p = m * q_dia
    one_u2 = 1.0 + u * u
    gm = np.power(v, 8.0 / (M + 2.0)) * p * p - u * u + v * v
    is_a = gm < 1.0 - 1e-12
    core_coef = 0.5 * (1.0 + 2.0 / M)
    out = np.empty(p.shape, dtype=float)
    if is_a.any():
        pa = np.abs(p[is_a])
        d = math.sqrt(one_u2 - v * v)
        T = 4.0 * one_u2 + (M - 2.0) * v * v
        D = 4.0 * one_u2 - (6.0 + M) * v * v
        dsq = 16.0 * (M + 2.0) * h(M, 2 * (M + 4), v) * d * pa
        hi_sq = 0.5 * (T + np.sqrt(D * D + dsq))
        lo_sq = (T * T - D * D - dsq) / (4.0 * hi_sq)
        e = core_coef * h(M, 2 * M, v) + d * pa - u * p[is_a]
        out[is_a] = e + 0.5 * q_dia * (np.sqrt(hi_sq) + np.sqrt(np.maximum(lo_sq, 0.0)))
    if (~is_a).any():
        ps = p[~is_a]
        vs = kernels.vstar_bisect_array(ps, np.full(ps.shape, u), M)
        ds = np.sqrt(np.maximum(one_u2 - vs * vs, 0.0))
        eps = np.where(ps < 0, -1.0, 1.0)
        e = core_coef * np.power(vs, 2.0 * M / (M + 2.0)) + np.power(vs, -4.0 / (M + 2.0)) * ds * (ds - eps * u)
        om_rho = np.sqrt(np.maximum(4.0 * one_u2 + (M - 2.0) * vs * vs, 0.0))
        z_sq = v * v - vs * vs
        stable = (v - vs) > 1e-10 * max(1.0, v)
        om_z = np.sqrt(np.where(stable, z_sq, 0.0))
        out[~is_a] = np.where(stable, e + 0.5 * q_dia * (om_rho + om_z), np.inf)
    return out, is_a


def m_window(u: float, q_dia: float) -> int:
    return int(math.ceil(3.0 * u / q_dia)) + 20


def _ground_m(u: float, v: float, q_dia: float, M: float, E_S: float) -> tuple[int, float, bool]:
    m = np.arange(m_window(u, q_dia) + 1)
    rel, is_a = ground_band(u, v, q_dia, M, m)
    tot = rel - u * E_S * (m % 2)
    # argmin returns the first (smallest m) index on ties
    k = int(np.argmin(tot))
    if not math.isfinite(tot[k]):
        raise UnstableStateError(f"no quantisable level at u={u}")
    return int(m[k]), float(rel[k]), bool(is_a[k])


def ground_state_scan(u_grid, v: float, q_dia: float, M: float, E_S: float) -> list[ScanPoint]:
    """Ground level over m in [0, m_window] at each u (k = k* = 0)."""
    us = np.asarray(u_grid, dtype=float)
    if us.size > 1 and np.any(np.diff(us) < 0):
        raise DomainError("u grid must be ascending")
    out = []
    for u in us:
        u = float(u)
        m, rel, is_a = _ground_m(u, v, q_dia, M, E_S)
        if m == m_window(u, q_dia):
            warnings.warn(f"optimal m hit the scan window at u={u}", RuntimeWarning, stacklevel=2)
        ms = -(m % 2)
        e_add = -q_dia * (math.sqrt(1.0 + u * u) + 0.5 * v) + rel + u * E_S * ms
        try:
            near = abs(u - u_crit(v, m * q_dia, M)) < NEAR_CRIT_WINDOW
        except DomainError:
            near = False
        out.append(ScanPoint(u, m, ms, e_add, "A" if is_a else "S", near))
    return out


def _level_total(m: int, u: float, v: float, q_dia: float, M: float, E_S: float) -> float:
    rel, _ = ground_band(u, v, q_dia, M, np.array([m]))
    return float(rel[0]) - u * E_S * (m % 2)


def transition_fields(scan: list[ScanPoint], v: float, q_dia: float, M: float, E_S: float) -> list[tuple[float, int, int]]:
    """(u, m_before, m_after) at each change of the optimal m, refined by
    root finding on the level crossing between neighbouring grid points."""
    out = []
    for a, b in zip(scan, scan[1:]):
        if a.m == b.m:
            continue
        f = lambda uu: _level_total(b.m, uu, v, q_dia, M, E_S) - _level_total(a.m, uu, v, q_dia, M, E_S)  # noqa: E731
        try:
            uc = brentq(f, a.u, b.u, xtol=1e-13)
        except ValueError:
            uc = 0.5 * (a.u + b.u)
        out.append((uc, a.m, b.m))
    return out


def branch_table(u_grid, v: float, q_dia: float, M: float, E_S: float, m_values) -> np.ndarray:
    """E_add of every requested m (ground level, Pauli spin) on a u grid."""
    ms = np.asarray(list(m_values))
    rows = []
    for u in np.asarray(u_grid, dtype=float):
        rel, _ = ground_band(float(u), v, q_dia, M, ms)
        ref = q_dia * (math.sqrt(1.0 + u * u) + 0.5 * v)
        rows.append(-ref + rel - u * E_S * (ms % 2))
    return np.array(rows)


def momentum_staircase(s: ScaleSet, L_z_over_hbar: int) -> float:
    if L_z_over_hbar < 0:
        raise DomainError("L_z/hbar must be >= 0")
    return L_z_over_hbar * s.B_bullet_tesla
