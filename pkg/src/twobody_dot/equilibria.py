"""Classical equilibria of the relative motion.

Two families exist at fixed orbital momentum ``p_phi``:

* asymmetric (A) states sit off the z = 0 plane at ``(rho_A, +-z_A)``;
  they exist while ``G_M(p_phi, u, v) < 1``;
* symmetric (S) states sit in the plane and are labelled by the auxiliary
  anisotropy ``v*`` solving ``G_M(p_phi, u, v*) = 1``.

All energies are in units of E_dia and all coordinates in the scaled units
of the dimensionless Hamiltonian (interaction ``r^-M / M``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels
from .errors import DomainError, OutOfFamilyError
from .units import MaterialSpec, TrapSpec, power_scale, scales_from_physical

h = power_scale


def _sign(x: float) -> int:
    return -1 if x < 0 else 1


def _core(v: float, M: float) -> float:
    """Trap plus interaction energy of a maximal state, (1/2)(1 + 2/M) v^(2M/(M+2))."""
    return 0.5 * (1.0 + 2.0 / M) * h(M, 2 * M, v)


@dataclass(frozen=True)
class AsymmetricState:
    p_phi: float
    rho: float
    z: float  # canonical z >= 0; the mirror state at -z is degenerate
    r: float
    energy: float


@dataclass(frozen=True)
class SymmetricState:
    p_phi: float
    v_star: float
    rho: float
    energy: float


@dataclass(frozen=True)
class MinimalState:
    p_phi: float
    rho_sq: float
    energy: float
    family: str  # "A" or "S"


def deficit(u: float, v: float) -> float:
    d2 = 1.0 + u * u - v * v
    if d2 < 0:
        raise DomainError(
            f"1 + u^2 < v^2 (u={u}, v={v}): no asymmetric family for this trap"
        )
    return math.sqrt(d2)


def gm_value(p_phi: float, u: float, v: float, M: float) -> float:
    """Boundary function G_M; G_M = 1 on the A/S phase boundary."""
    return h(M, 8, v) * p_phi * p_phi - u * u + v * v


BOUNDARY_TOL = 1e-12


def in_asymmetric_family(p_phi: float, u: float, v: float, M: float) -> bool:
    """Family selection: A strictly inside G_M < 1 (with a rounding margin)."""
    return gm_value(p_phi, u, v, M) < 1.0 - BOUNDARY_TOL


def u_crit(v: float, p_phi: float, M: float) -> float:
    arg = h(M, 8, v) * p_phi * p_phi - 1.0 + v * v
    if arg < 0:
        raise DomainError(f"no critical field for v={v}, p_phi={p_phi}, M={M}")
    return math.sqrt(arg)


def p_max(u: float, v: float, M: float) -> float:
    """Largest |p_phi| of the asymmetric family at (u, v)."""
    return deficit(u, v) * h(M, -4, v)


def asymmetric_state(u: float, v: float, p_phi: float, M: float) -> AsymmetricState:
    d2 = 1.0 + u * u - v * v
    if d2 <= 0:
        raise OutOfFamilyError(
            f"d^2 = {d2:.6g} <= 0: asymmetric states need omega_rho^2 + omega_L^2 > omega_z^2",
            "deficit",
        )
    d = math.sqrt(d2)
    pabs = abs(p_phi)
    pm = d * h(M, -4, v)
    if pabs >= pm:
        raise OutOfFamilyError(
            f"|p_phi| = {pabs:.6g} >= p_max = {pm:.6g}: state belongs to the symmetric family",
            "momentum",
        )
    r_sq = h(M, -2, v * v)
    rho = math.sqrt(pabs / d)
    z = math.sqrt(max(r_sq - pabs / d, 0.0))
    energy = _core(v, M) + d * pabs - u * p_phi
    return AsymmetricState(p_phi=p_phi, rho=rho, z=z, r=h(M, -2, v), energy=energy)


def vstar_closed_m1(p_phi: float, u: float) -> float:
    """Closed-form root of the M = 1 quartic for v*.

    The resolvent quantity is evaluated in a rearranged but algebraically
    identical form that avoids the cancellation of its two O(p) terms.
    """
    c = 1.0 + u * u
    p2 = p_phi * p_phi
    if p2 == 0.0:
        return math.sqrt(c)
    disc = math.sqrt(729.0 * c * c + 6912.0 * p2**3 * c**3)
    Q3 = 27.0 * c + disc
    Q = Q3 ** (1.0 / 3.0)
    K = 12.0 * 2.0 ** (2.0 / 3.0) * c * p2
    # Q^2 - K, rewritten through Q^6 - K^3 = 1458 c^2 + 54 c disc
    num = 1458.0 * c * c + 54.0 * c * disc
    Q2 = Q * Q
    diff = num / (Q2 * Q2 + Q2 * K + K * K)
    s = diff / (3.0 * 2.0 ** (1.0 / 3.0) * c * Q)
    rs = math.sqrt(s)
    Z = 0.5 * rs + 0.5 * math.sqrt(-s + 2.0 / (rs * c))
    return Z ** -1.5


def vstar(p_phi: float, u: float, M: float, method: str = "bisect") -> float:
    """Auxiliary anisotropy v* of the symmetric state with momentum ``p_phi``.

    ``method`` is ``"bisect"`` (monotone bisection, any M), ``"closed_m1"``
    (quartic formula, M = 1 only), ``"closed"`` (quartic for M = 1, closed
    inverse forms for M = 2, 6, 10, 14) or ``"series"`` (inverse-series
    representation; falls back to bisection outside its validated domain).
    """
    if u < 0:
        raise DomainError("u must be >= 0")
    if method == "bisect":
        return kernels.vstar_bisect(float(p_phi), float(u), float(M))
    if method == "closed_m1":
        if M != 1:
            raise DomainError("closed_m1 applies to M = 1 only")
        return vstar_closed_m1(p_phi, u)
    if method == "closed":
        if M == 1:
            return vstar_closed_m1(p_phi, u)
        from .inversion import vstar_closed

        return vstar_closed(p_phi, u, M)
    if method == "series":
        from .inversion import SeriesDomainError, vstar_series

        try:
            return vstar_series(p_phi, u, M)
        except SeriesDomainError:
            return kernels.vstar_bisect(float(p_phi), float(u), float(M))
    raise DomainError(f"unknown vstar method {method!r}")


def symmetric_energy(v_star: float, u: float, M: float, eps: int = 1) -> float:
    """Relative energy of the S state labelled by ``v_star`` (eps = sign p_phi)."""
    d = math.sqrt(max(1.0 + u * u - v_star * v_star, 0.0))
    return _core(v_star, M) + h(M, -4, v_star) * d * (d - eps * u)


def symmetric_state(p_phi: float, u: float, M: float, method: str = "bisect") -> SymmetricState:
    vs = vstar(p_phi, u, M, method)
    return SymmetricState(
        p_phi=p_phi,
        v_star=vs,
        rho=h(M, -2, vs),
        energy=symmetric_energy(vs, u, M, _sign(p_phi)),
    )


def cm_equilibrium_energy(p_phi_star: float, u: float) -> float:
    if u < 0:
        raise DomainError("u must be >= 0")
    return math.sqrt(1.0 + u * u) * abs(p_phi_star) - u * p_phi_star


def minimal_state(u: float, v: float, M: float) -> MinimalState:
    """Classical ground state of the relative motion at fixed (u, v)."""
    if u < 0 or v <= 0:
        raise DomainError("need u >= 0 and v > 0")
    if v <= 1:
        return MinimalState(0.0, 0.0, _core(v, M), "A")
    return MinimalState(u, 1.0, 0.5 * (1.0 + 2.0 / M), "S")


def b_bullet(mat: MaterialSpec, trap: TrapSpec) -> float:
    """Field increment (Tesla) adding one hbar of L_z on the minimal band."""
    return scales_from_physical(mat, trap).B_bullet_tesla


def reduced_potential(rho: float, z: float, p_phi: float, u: float, v: float, M: float) -> float:
    """Effective potential of the relative (rho, z) motion at fixed p_phi.

    The centrifugal term is dropped identically when p_phi == 0, so the
    z axis (rho = 0) is then a regular point.
    """
    if rho == 0.0 and z == 0.0:
        raise DomainError("reduced potential is singular at r = 0")
    if p_phi != 0.0 and rho == 0.0:
        raise DomainError("centrifugal singularity at rho = 0 for p_phi != 0")
    return kernels.veff(float(rho), float(z), float(p_phi), float(u), float(v), float(M))


def state(u: float, v: float, p_phi: float, M: float) -> AsymmetricState | SymmetricState:
    """Stable equilibrium at (u, v, p_phi): A below the boundary, S otherwise."""
    if in_asymmetric_family(p_phi, u, v, M):
        return asymmetric_state(u, v, p_phi, M)
    return symmetric_state(p_phi, u, M)
