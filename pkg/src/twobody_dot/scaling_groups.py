"""One-parameter symmetry actions on the physical parameters.

``g4_action`` rescales the effective mass (and with it the field unit) at
fixed dimensionless point (u, v, q_dia, E_S).  ``g7_map`` moves a trap to a
different interaction exponent M at fixed q_dia.
"""

from __future__ import annotations

from dataclasses import replace

from .errors import DomainError
from .units import MaterialSpec, TrapSpec, interaction_beta, gamma_factor, power_scale


def g4_action(a: float, mat: MaterialSpec, B_tesla: float) -> tuple[MaterialSpec, float]:
    """Map (material, field) to the conjugate system with mass a^2 m*.

    The field scales as a^2 with the mass.  To leave L_dia and E_S unchanged
    the dielectric constant scales as a (so beta^2 gamma is fixed for the
    Coulomb case) and |g*| as a^-2.  Traps with an explicit ``beta`` need
    :func:`g4_trap` as well.
    """
    if a <= 0:
        raise DomainError("G4 parameter a must be > 0")
    a2 = a * a
    new = replace(
        mat,
        mass_ratio=mat.mass_ratio * a2,
        epsilon_r=mat.epsilon_r * a,
        g_star_abs=mat.g_star_abs / a2,
    )
    return new, B_tesla * a2


def g4_trap(a: float, trap: TrapSpec) -> TrapSpec:
    """Companion of :func:`g4_action` for traps carrying a beta override."""
    if a <= 0:
        raise DomainError("G4 parameter a must be > 0")
    if trap.beta_override is None:
        return trap
    return replace(trap, beta_override=trap.beta_override * a ** (-trap.M))


def g7_beta(beta: float, gamma: float, M: float, L: float) -> float:
    """Interaction strength for exponent L giving the same L_dia as (beta, gamma, M).

    beta_L = beta (L h_{M,-L-2}(M))^s (gamma/beta)^((M-L)/(M+2)) with s = -1.
    """
    if L <= 0 or M <= 0:
        raise DomainError("interaction exponents must be > 0")
    s = -1.0
    return beta * (L * power_scale(M, -L - 2, M)) ** s * (gamma / beta) ** ((M - L) / (M + 2))


def g7_map(target_M: float, mat: MaterialSpec, trap: TrapSpec) -> TrapSpec:
    """Trap with exponent ``target_M`` and the beta that preserves q_dia."""
    if target_M <= 0:
        raise DomainError("target M must be > 0")
    if target_M == trap.M:
        return trap
    beta = interaction_beta(mat, trap)
    gamma = gamma_factor(mat, trap)
    return replace(trap, M=target_M, beta_override=g7_beta(beta, gamma, trap.M, target_M))


def display_factor(M: float) -> float:
    """Cross-M display factor 3/(1 + M/2), as printed (gives 2 at M = 1)."""
    if M <= 0:
        raise DomainError("M must be > 0")
    return 3.0 / (1.0 + M / 2.0)


def normalized_display_factor(M: float) -> float:
    """Display factor 3/(1 + 2/M), equal to 1 at M = 1.

    Multiplies the classical minimal-band energy (1/2)(1 + 2/M) of
    exponent M onto the M = 1 value 3/2.
    """
    if M <= 0:
        raise DomainError("M must be > 0")
    return 3.0 / (1.0 + 2.0 / M)
