"""Harmonic normal modes of the equilibria and their stability.

The kinetic part of the reduced dynamics is (1/2)(p_rho^2 + p_z^2), so the
squared mode frequencies are the eigenvalues of the Hessian of the reduced
potential at the equilibrium.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .equilibria import asymmetric_state, deficit, in_asymmetric_family, u_crit, vstar
from .errors import DomainError
from .units import power_scale as h


class Stability(str, enum.Enum):
    A = "A"
    S_PLUS = "S_plus"
    S_ZERO = "S_zero"
    S_MINUS = "S_minus"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ModeSet:
    """Relative-motion normal modes.

    ``omega_rho``/``omega_z`` follow the mode labels used for quantisation
    (in the A family the rho label goes with the upper branch); ``omega_hi``
    and ``omega_lo`` are the same pair sorted.  ``soft_sq`` is the signed
    squared frequency of the soft mode, negative for saddles.
    """

    omega_hi: float
    omega_lo: float
    omega_rho: float
    omega_z: float
    mixing_angle: float
    stability: Stability
    soft_sq: float

    def __post_init__(self):
        if not (self.omega_hi >= self.omega_lo >= 0):
            raise DomainError("ModeSet needs omega_hi >= omega_lo >= 0")


def cm_modes(u: float, v: float) -> tuple[float, float]:
    if u < 0:
        raise DomainError("u must be >= 0")
    return 2.0 * math.sqrt(1.0 + u * u), v


def a_hessian(u: float, v: float, p_phi: float, M: float) -> tuple[float, float, float]:
    """(k_rho_rho, k_zz, k_rho_z) of the reduced potential at the A state."""
    st = asymmetric_state(u, v, p_phi, M)
    d = deficit(u, v)
    c = (M + 2.0) * h(M, 2 * (M + 4), v)
    A = c * st.rho**2
    return 4.0 * d * d + A, (M + 2.0) * v * v - A, c * st.rho * st.z


def mixing_angle(k_rr: float, k_zz: float, k_rz: float) -> float:
    if k_rr == k_zz:
        return 0.0 if k_rz == 0 else math.copysign(math.pi / 4.0, k_rz)
    return 0.5 * math.atan(2.0 * k_rz / (k_rr - k_zz))


def a_modes(u: float, v: float, p_phi: float, M: float) -> ModeSet:
    k_rr, k_zz, k_rz = a_hessian(u, v, p_phi, M)  # raises OutOfFamilyError
    d = deficit(u, v)
    T = 4.0 * (1.0 + u * u) + (M - 2.0) * v * v
    D = 4.0 * (1.0 + u * u) - (6.0 + M) * v * v
    delta_sq = 16.0 * (M + 2.0) * h(M, 2 * (M + 4), v) * d * abs(p_phi)
    root = math.sqrt(D * D + delta_sq)
    hi_sq = 0.5 * (T + root)
    # product form of (T - root)/2, free of cancellation near the boundary
    lo_sq = (T * T - D * D - delta_sq) / (4.0 * hi_sq)
    hi = math.sqrt(hi_sq)
    lo = math.sqrt(max(lo_sq, 0.0))
    return ModeSet(
        omega_hi=hi,
        omega_lo=lo,
        omega_rho=hi,
        omega_z=lo,
        mixing_angle=mixing_angle(k_rr, k_zz, k_rz),
        stability=Stability.A,
        soft_sq=lo_sq,
    )


def _s_tag(v: float, v_star: float) -> Stability:
    if abs(v - v_star) <= 1e-10 * max(1.0, v):
        return Stability.S_ZERO
    return Stability.S_PLUS if v > v_star else Stability.S_MINUS


def s_modes(u: float, v: float, p_phi: float, M: float, v_star: float | None = None) -> ModeSet:
    if u < 0:
        raise DomainError("u must be >= 0")
    vs = vstar(p_phi, u, M) if v_star is None else v_star
    rho_sq = 4.0 * (1.0 + u * u) + (M - 2.0) * vs * vs
    z_sq = v * v - vs * vs
    tag = _s_tag(v, vs)
    om_rho = math.sqrt(max(rho_sq, 0.0))
    om_z = 0.0 if tag is not Stability.S_PLUS else math.sqrt(z_sq)
    return ModeSet(
        omega_hi=max(om_rho, om_z),
        omega_lo=min(om_rho, om_z),
        omega_rho=om_rho,
        omega_z=om_z,
        mixing_angle=0.0,
        stability=tag,
        soft_sq=z_sq,
    )


def classify_state(u: float, v: float, p_phi: float, M: float) -> Stability:
    if u < 0 or v <= 0:
        raise DomainError("need u >= 0 and v > 0")
    if in_asymmetric_family(p_phi, u, v, M):
        return Stability.A
    return _s_tag(v, vstar(p_phi, u, M))


def state_modes(u: float, v: float, p_phi: float, M: float) -> ModeSet:
    """Modes of whichever family is selected by the boundary function."""
    if in_asymmetric_family(p_phi, u, v, M):
        return a_modes(u, v, p_phi, M)
    return s_modes(u, v, p_phi, M)


def lambda_profile(v: float, p_phi: float, M: float, delta_u: float) -> tuple[float, float]:
    """Leading-order soft-mode frequency at u_crit -/+ |delta_u|.

    Returns (S side, A side).  Both vanish like sqrt(|delta_u|) with
    amplitudes in the ratio 1 : sqrt(2).
    """
    ub = u_crit(v, p_phi, M)
    z_M = 4.0 * p_phi * p_phi * h(M, 8, v) / (M + 2.0)
    slope = ub * v / (v * v + z_M)
    du = abs(delta_u)
    s_side = math.sqrt(v * slope) * math.sqrt(2.0 * du)
    a_side = 2.0 * math.sqrt(v * slope * du)
    return s_side, a_side
