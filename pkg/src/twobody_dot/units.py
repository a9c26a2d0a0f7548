"""Physical parameters, dimensionless scales and unit conversions.

Energies enter in meV, fields in Tesla.  Everything downstream works with
the dimensionless point ``(u, v, M, q_dia)``:

* ``u = omega_L / omega_rho`` and ``v = omega_z / omega_rho``;
* ``q_dia = hbar / L_dia`` measures quantum against classical strength;
* ``E_dia = hbar omega_rho / q_dia`` is the energy unit and
  ``B_dia = 2 m* omega_rho / e`` the field unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import constants as C
from .errors import DomainError


def power_scale(M: float, k: float, x: float) -> float:
    """Return ``x ** (k / (M + 2))``."""
    if x <= 0:
        raise DomainError(f"power_scale needs x > 0, got {x!r}")
    if M <= -2:
        raise DomainError(f"power_scale needs M > -2, got {M!r}")
    return x ** (k / (M + 2))


@dataclass(frozen=True)
class MaterialSpec:
    mass_ratio: float  # m*/m_e
    epsilon_r: float
    g_star_abs: float

    def __post_init__(self):
        for name in ("mass_ratio", "epsilon_r", "g_star_abs"):
            if not getattr(self, name) > 0:
                raise DomainError(f"MaterialSpec.{name} must be > 0")


GAAS = MaterialSpec(mass_ratio=0.067, epsilon_r=12.0, g_star_abs=0.3)


@dataclass(frozen=True)
class TrapSpec:
    hw_rho: float  # meV
    hw_z: float  # meV
    M: float = 1.0
    beta_override: float | None = None

    def __post_init__(self):
        if not (self.hw_rho > 0 and self.hw_z > 0):
            raise DomainError("confinement energies must be > 0")
        if not self.M > 0:
            raise DomainError(f"interaction exponent M must be > 0, got {self.M!r}")
        if self.beta_override is not None and not self.beta_override > 0:
            raise DomainError("beta_override must be > 0")

    @property
    def v(self) -> float:
        return self.hw_z / self.hw_rho


@dataclass(frozen=True)
class ScaleSet:
    beta: float
    gamma: float
    L_dia_over_hbar: float
    q_dia: float
    E_dia_mev: float
    B_dia_tesla: float
    E_S: float

    @property
    def B_bullet_tesla(self) -> float:
        """Field step that adds one hbar of L_z along the minimal band."""
        return self.q_dia * self.B_dia_tesla


@dataclass(frozen=True)
class ModelPoint:
    u: float
    v: float
    M: float
    q_dia: float

    def __post_init__(self):
        if self.u < 0:
            raise DomainError("u must be >= 0; reflect (p, u) -> (-p, -u) first")
        if not self.v > 0:
            raise DomainError("v must be > 0")
        if not self.M > 0:
            raise DomainError("M must be > 0")
        if not self.q_dia > 0:
            raise DomainError("q_dia must be > 0")


def interaction_beta(mat: MaterialSpec, trap: TrapSpec) -> float:
    if trap.beta_override is not None:
        return trap.beta_override
    if trap.M != 1:
        raise DomainError("beta must be supplied explicitly for M != 1")
    return C.FINE_STRUCTURE / mat.epsilon_r


def gamma_factor(mat: MaterialSpec, trap: TrapSpec) -> float:
    """m* c^2 / (2 hbar omega_rho)."""
    return mat.mass_ratio * C.ME_C2_MEV / (2.0 * trap.hw_rho)


def length_scale(beta: float, gamma: float, M: float) -> float:
    """L_dia / hbar from the dimensionless interaction and mass constants."""
    # root of the product beta^2 gamma^M: under the mass rescaling the two
    # factors change by reciprocal powers, which cancel exactly for dyadic a
    return power_scale(M, -2 * C.S_AUX, M) * (beta * beta * gamma**M) ** (1.0 / (M + 2))


def field_unit_tesla(mat: MaterialSpec, hw_rho: float) -> float:
    omega = hw_rho * C.MEV / C.HBAR
    return 2.0 * mat.mass_ratio * C.M_E * omega / C.E_CHARGE


def scales_from_physical(mat: MaterialSpec, trap: TrapSpec) -> ScaleSet:
    beta = interaction_beta(mat, trap)
    gamma = gamma_factor(mat, trap)
    L = length_scale(beta, gamma, trap.M)
    q = 1.0 / L
    return ScaleSet(
        beta=beta,
        gamma=gamma,
        L_dia_over_hbar=L,
        q_dia=q,
        E_dia_mev=trap.hw_rho / q,
        B_dia_tesla=field_unit_tesla(mat, trap.hw_rho),
        E_S=mat.g_star_abs * q * mat.mass_ratio,
    )


def field_to_u(B_tesla: float, s: ScaleSet) -> float:
    if B_tesla < 0:
        raise DomainError("field must be >= 0")
    return B_tesla / s.B_dia_tesla


def u_to_field(u: float, s: ScaleSet) -> float:
    if u < 0:
        raise DomainError("u must be >= 0")
    return u * s.B_dia_tesla


def model_point(mat: MaterialSpec, trap: TrapSpec, B_tesla: float = 0.0) -> ModelPoint:
    s = scales_from_physical(mat, trap)
    return ModelPoint(u=field_to_u(B_tesla, s), v=trap.v, M=trap.M, q_dia=s.q_dia)


def b_bullet_prefactor(mat: MaterialSpec, trap: TrapSpec) -> float:
    """B_bullet / [(m*/m_e eps_r)^(2/3) (hbar omega_rho / meV)^(4/3)] in Tesla.

    Independent of the inputs for M = 1 (about 0.724 T).
    """
    s = scales_from_physical(mat, trap)
    return s.B_bullet_tesla / (
        (mat.mass_ratio * mat.epsilon_r) ** (2.0 / 3.0) * trap.hw_rho ** (4.0 / 3.0)
    )


def hw_for_q_dia(mat: MaterialSpec, q_dia: float) -> float:
    """Coulomb (M = 1) confinement energy in meV that yields ``q_dia``."""
    q1 = scales_from_physical(mat, TrapSpec(1.0, 1.0, 1.0)).q_dia
    return (q_dia / q1) ** 3
