"""Command-line front end: ``twobody-dot <subcommand> ...``.

Scalar results are printed as JSON, tables as CSV with one header row.
Numbers use 12 significant digits.  Exit codes: 0 success, 2 config error,
3 domain error, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import equilibria, inversion, modes, oracle, scaling_groups, spectra
from .config import load_config
from .errors import ConfigError, DomainError
from .units import GAAS, MaterialSpec, TrapSpec, b_bullet_prefactor, power_scale, scales_from_physical

EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer, Fraction, str)):
        return str(x)
    return format(float(x), ".12g")


def _num(x):
    """JSON value rounded to 12 significant digits."""
    if isinstance(x, (int, str)) or x is None:
        return x
    x = float(x)
    return float(format(x, ".12g")) if math.isfinite(x) else str(x)


def emit_json(obj: dict, out) -> None:
    out.write(json.dumps({k: _num(v) for k, v in obj.items()}, indent=2) + "\n")


def emit_csv(header, rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])


def parse_range(text: str, name: str = "range") -> tuple[float, float, int]:
    """``lo:hi:n`` (n points, inclusive)."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ConfigError(f"bad {name} {text!r}; expected lo:hi:n") from None
    if n < 1 or (n > 1 and hi < lo):
        raise ConfigError(f"bad {name} {text!r}; need n >= 1 and hi >= lo")
    return lo, hi, n


def parse_step_range(text: str) -> np.ndarray:
    """``lo:hi:step`` (inclusive of hi up to rounding)."""
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise ConfigError(f"bad field range {text!r}; expected lo:hi:step") from None
    if step <= 0 or hi < lo:
        raise ConfigError(f"bad field range {text!r}; need step > 0 and hi >= lo")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def parse_grid(text: str, names=("rho", "z")):
    parts = dict(p.split(":", 1) for p in text.split(",") if ":" in p)
    if set(parts) != set(names):
        raise ConfigError(f"grid must name {' and '.join(names)}, e.g. {names[0]}:0.1:2:50,{names[1]}:0:1:50")
    return [np.linspace(*parse_range(parts[k], k)) for k in names]


def parse_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"bad number list {text!r}") from None


# -- configuration ------------------------------------------------------------


def add_material_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value material/trap file")
    p.add_argument("--m-star", type=float, help="effective mass ratio m*/m_e")
    p.add_argument("--epsilon", type=float, help="relative permittivity")
    p.add_argument("--g-star", type=float, help="|g*|")
    p.add_argument("--hw-rho", type=float, help="hbar omega_rho in meV")
    p.add_argument("--hw-z", type=float, help="hbar omega_z in meV")
    p.add_argument("--M", dest="M_phys", type=float, help="interaction exponent")
    p.add_argument("--beta", type=float, help="interaction strength (needed for M != 1)")
    p.add_argument("--g4-a", type=float,
                   help="apply the mass-rescaling action with this a; --B stays in the "
                        "original system's fields and output fields are scaled by a^2")


def material_from_args(args) -> tuple[MaterialSpec, TrapSpec]:
    """Material and trap from --config and/or flags; flags win over the file."""
    if args.config:
        try:
            mat, trap = load_config(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    else:
        if args.hw_rho is None or args.hw_z is None:
            raise ConfigError("give --config or both --hw-rho and --hw-z")
        mat, trap = GAAS, TrapSpec(args.hw_rho, args.hw_z, 1.0, None)
    pick = lambda flag, current: current if flag is None else flag  # noqa: E731
    mat = MaterialSpec(
        pick(args.m_star, mat.mass_ratio),
        pick(args.epsilon, mat.epsilon_r),
        abs(pick(args.g_star, mat.g_star_abs)),
    )
    trap = TrapSpec(
        pick(args.hw_rho, trap.hw_rho),
        pick(args.hw_z, trap.hw_z),
        pick(args.M_phys, trap.M),
        pick(args.beta, trap.beta_override),
    )
    return mat, trap


def _g4(args, mat, trap):
    if getattr(args, "g4_a", None) is None:
        return mat, trap, 1.0
    a = args.g4_a
    mat, _ = scaling_groups.g4_action(a, mat, 0.0)
    return mat, scaling_groups.g4_trap(a, trap), a * a


# -- subcommands ----------------------------------------------------------------


def cmd_convert(args, out) -> int:
    mat, trap = material_from_args(args)
    mat, trap, _ = _g4(args, mat, trap)
    s = scales_from_physical(mat, trap)
    emit_json(
        {
            "M": trap.M,
            "v": trap.v,
            "beta": s.beta,
            "gamma": s.gamma,
            "L_dia_over_hbar": s.L_dia_over_hbar,
            "q_dia": s.q_dia,
            "E_dia_mev": s.E_dia_mev,
            "B_dia_tesla": s.B_dia_tesla,
            "B_bullet_tesla": s.B_bullet_tesla,
            "B_bullet_prefactor": b_bullet_prefactor(mat, trap) if trap.M == 1 else None,
            "E_S": s.E_S,
        },
        out,
    )
    return 0


def cmd_surface(args, out) -> int:
    M = args.M
    if args.fig2:
        if args.vstar is None:
            raise ConfigError("--fig2 needs --vstar")
        vs = args.vstar
        d2 = 1 + args.u**2 - vs * vs
        if d2 < 0:
            raise DomainError("v* > sqrt(1 + u^2): no symmetric state with this v*")
        p = math.sqrt(d2) * power_scale(M, -4, vs)
        rho = power_scale(M, -2, vs)
        vgrid, zgrid = parse_grid(args.grid, ("v", "z"))
        rows = [(v, z, equilibria.reduced_potential(rho, z, p, args.u, v, M)) for v in vgrid for z in zgrid]
        emit_csv(["v", "z", "E"], rows, out)
        return 0
    if args.v is None or args.p is None:
        raise ConfigError("surface needs --v and --p (or --fig2 --vstar)")
    rgrid, zgrid = parse_grid(args.grid)
    if args.p != 0 and np.any(rgrid <= 0):
        raise DomainError("rho grid must be > 0 when p != 0")
    if np.any((rgrid[:, None] == 0) & (zgrid[None, :] == 0)):
        raise DomainError("grid contains r = 0")
    from . import kernels

    E = kernels.veff_grid(rgrid, zgrid, args.p, args.u, args.v, M)
    rows = [(r, z, E[i, j]) for i, r in enumerate(rgrid) for j, z in enumerate(zgrid)]
    emit_csv(["rho", "z", "E"], rows, out)
    return 0


def contour_p(v_star: float, u: float, M: float) -> float | None:
    """p >= 0 on the v* contour at field u, from h_{M,8}(v*) p^2 = 1 + u^2 - v*^2."""
    rhs = 1 + u * u - v_star * v_star
    if rhs < 0:
        return None
    return math.sqrt(rhs / power_scale(M, 8, v_star))


def cmd_phase_diagram(args, out) -> int:
    ulo, uhi, nu = parse_range(args.u, "u range")
    plo, phi, np_ = parse_range(args.p, "p range")
    if ulo < 0:
        raise DomainError("u must be >= 0")
    us = np.linspace(ulo, uhi, nu)
    ps = np.linspace(plo, phi, np_)
    rows = []
    for u in us:
        for p in ps:
            rows.append((u, p, equilibria.symmetric_state(float(p), float(u), args.M).energy))
    emit_csv(["u", "p", "E_S"], rows, out)
    contours = parse_list(args.vstar_contours) if args.vstar_contours else []
    crow = []
    for vs in contours:
        for u in us:
            p = contour_p(vs, float(u), args.M)
            if p is not None:
                crow.append((fmt(vs), u, p))
    for u in us:
        crow.append(("minimal", u, u))
    target = open(args.contours_out, "w", encoding="utf-8") if args.contours_out else out
    try:
        if target is out:
            out.write("\n")
        emit_csv(["contour", "u", "p"], crow, target)
    finally:
        if target is not out:
            target.close()
    return 0


def _eadd_rows(mat, trap, B_grid, use_zeeman, b_scale):
    s = scales_from_physical(mat, trap)
    # B_grid holds fields of the unmapped system; b_scale carries them over
    us = B_grid * b_scale / s.B_dia_tesla
    E_S = s.E_S if use_zeeman else 0.0
    scan = spectra.ground_state_scan(us, trap.v, s.q_dia, trap.M, E_S)
    rows = []
    for B, pt in zip(B_grid, scan):
        rows.append((B * b_scale, pt.u, pt.m, pt.M_S, pt.E_add * s.E_dia_mev, pt.E_add, pt.near_critical))
    return rows


def cmd_eadd(args, out) -> int:
    mat, trap = material_from_args(args)
    mat, trap, b_scale = _g4(args, mat, trap)
    B = parse_step_range(args.B)
    if B[0] < 0:
        raise DomainError("fields must be >= 0")
    flagged = 0
    if args.map_M:
        factor = (scaling_groups.normalized_display_factor if args.display_factor == "normalized"
                  else scaling_groups.display_factor)
        rows = []
        for L in parse_list(args.map_M):
            tL = scaling_groups.g7_map(L, mat, trap)
            g = factor(L)
            for r in _eadd_rows(mat, tL, B, not args.no_zeeman, b_scale):
                flagged += r[-1]
                rows.append((L,) + r[:-1] + (g * r[5],))
        emit_csv(["M", "B_tesla", "u", "m_opt", "M_S", "E_add_mev", "E_add_Edia", "gM_E_add_Edia"], rows, out)
    else:
        rows = _eadd_rows(mat, trap, B, not args.no_zeeman, b_scale)
        flagged = sum(r[-1] for r in rows)
        emit_csv(["B_tesla", "u", "m_opt", "M_S", "E_add_mev", "E_add_Edia"], [r[:-1] for r in rows], out)
    if flagged:
        print(f"note: {flagged} point(s) within {spectra.NEAR_CRIT_WINDOW} of u_crit; "
              "the harmonic result is unreliable there", file=sys.stderr)
    return 0


def cmd_spectrum(args, out) -> int:
    mat, trap = material_from_args(args)
    mat, trap, b_scale = _g4(args, mat, trap)
    s = scales_from_physical(mat, trap)
    B = parse_step_range(args.B)
    ms = [int(m) for m in parse_list(args.m)]
    if any(m < 0 for m in ms):
        raise DomainError("m must be >= 0")
    us = B * b_scale / s.B_dia_tesla
    E_S = 0.0 if args.no_zeeman else s.E_S
    tab = spectra.branch_table(us, trap.v, s.q_dia, trap.M, E_S, ms)
    rows = []
    for i, Bi in enumerate(B):
        for j, m in enumerate(ms):
            rows.append((Bi * b_scale, us[i], m, -(m % 2), tab[i, j] * s.E_dia_mev, tab[i, j]))
    emit_csv(["B_tesla", "u", "m", "M_S", "E_add_mev", "E_add_Edia"], rows, out)
    return 0


def _closed_available(M: float) -> bool:
    return M == 1 or (M >= 2 and (M - 2) % 4 == 0 and M <= 14)


def cmd_vstar(args, out) -> int:
    if args.compare:
        vals = {"bisect": equilibria.vstar(args.p, args.u, args.M, "bisect")}
        if _closed_available(args.M):
            vals["closed"] = equilibria.vstar(args.p, args.u, args.M, "closed")
        try:
            vals["series"] = inversion.vstar_series(args.p, args.u, args.M)
        except inversion.SeriesDomainError as exc:
            vals["series"] = None
            print(f"note: {exc}", file=sys.stderr)
        res = {}
        for k, v in vals.items():
            res[k] = v
        for k in ("closed", "series"):
            if vals.get(k) is not None:
                res[f"delta_{k}"] = vals[k] - vals["bisect"]
        branch = inversion.series_branch(args.p, args.u, args.M)
        res["series_branch"] = branch if branch else "none"
        emit_json(res, out)
        return 0
    if args.method == "closed" and not _closed_available(args.M):
        raise DomainError(f"no closed form for M = {args.M}")
    method = args.method
    if method == "series":
        val = inversion.vstar_series(args.p, args.u, args.M)
    else:
        val = equilibria.vstar(args.p, args.u, args.M, method)
    emit_json({"method": method, "v_star": val}, out)
    return 0


def cmd_modes(args, out) -> int:
    tag = modes.classify_state(args.u, args.v, args.p, args.M)
    ms = modes.state_modes(args.u, args.v, args.p, args.M)
    cm = modes.cm_modes(args.u, args.v)
    st = equilibria.state(args.u, args.v, args.p, args.M)
    emit_json(
        {
            "family": "A" if tag is modes.Stability.A else "S",
            "stability": str(tag),
            "energy": st.energy,
            "rho": st.rho,
            "z": getattr(st, "z", 0.0),
            "omega_hi": ms.omega_hi,
            "omega_lo": ms.omega_lo,
            "omega_rho": ms.omega_rho,
            "omega_z": ms.omega_z,
            "mixing_angle": ms.mixing_angle,
            "soft_sq": ms.soft_sq,
            "omega_rho_cm": cm[0],
            "omega_z_cm": cm[1],
        },
        out,
    )
    return 0


def cmd_series(args, out) -> int:
    if args.terms < 1:
        raise DomainError("--terms must be >= 1")
    exact = float(args.M).is_integer()
    a = Fraction(-(int(args.M) + 2), 4) if exact else inversion.exponent_a(args.M)
    taylor = inversion.f_a_taylor(a, args.terms)
    rev = inversion.invert_series(taylor)
    poch = inversion.g_minus_coeffs(a, args.terms)
    rows = [(k, taylor[k], rev[k], poch[k]) for k in range(1, args.terms + 1)]
    emit_csv(["k", "F_a_coeff", "G_a_coeff_reversion", "G_a_coeff_pochhammer"], rows, out)
    return 0


def cmd_verify(args, out) -> int:
    rows = oracle.verify_suite(args.samples, args.seed)
    limits = {"d_energy": 1e-8, "d_position": 1e-6, "d_mode": 1e-5, "grad": 1e-6}
    ok = True
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["check", "worst", "limit", "status"])
    for key, lim in limits.items():
        worst = max(getattr(r, key) for r in rows)
        good = worst <= lim
        ok &= good
        w.writerow([key, fmt(worst), fmt(lim), "pass" if good else "FAIL"])
    return 0 if ok else EXIT_VERIFY


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twobody-dot", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("convert", help="physical parameters -> dimensionless scales (JSON)")
    add_material_args(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("surface", help="reduced potential on a (rho, z) grid (CSV)")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--M", type=float, default=1.0)
    p.add_argument("--grid", default="rho:0.05:1.5:60,z:-1:1:60",
                   help="rho:lo:hi:n,z:lo:hi:n (v:...,z:... with --fig2)")
    p.add_argument("--fig2", action="store_true", help="(v, z) slice at rho = rho_S(v*)")
    p.add_argument("--vstar", type=float, help="v* of the slice for --fig2")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("phase-diagram", help="S-family energy over (u, p) and v* contours (CSV)")
    p.add_argument("--u", default="0:10:41", help="lo:hi:n")
    p.add_argument("--p", default="0:10:41", help="lo:hi:n")
    p.add_argument("--M", type=float, default=1.0)
    p.add_argument("--vstar-contours", default="1,2,3", help="comma-separated v* values")
    p.add_argument("--contours-out", help="write the contour table here instead of after a blank line")
    p.set_defaults(func=cmd_phase_diagram)

    for name, fn, hlp in (
        ("eadd", cmd_eadd, "ground-state additional energy versus B (CSV)"),
        ("spectrum", cmd_spectrum, "additional energy of fixed-m branches versus B (CSV)"),
    ):
        p = sub.add_parser(name, help=hlp)
        add_material_args(p)
        p.add_argument("--B", default="0:12:0.05", help="lo:hi:step in Tesla")
        p.add_argument("--no-zeeman", action="store_true", help="drop the spin Zeeman term")
        if name == "eadd":
            p.add_argument("--map-M", help="comma-separated exponents; one block per M at fixed q_dia")
            p.add_argument("--display-factor", choices=("printed", "normalized"), default="printed",
                           help="printed: 3/(1+M/2); normalized: 3/(1+2/M), equal to 1 at M = 1")
        else:
            p.add_argument("--m", default="0,1,2,3,4,5", help="comma-separated m values")
        p.set_defaults(func=fn)

    p = sub.add_parser("vstar", help="auxiliary anisotropy v* of an S state (JSON)")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--M", type=float, default=1.0)
    p.add_argument("--method", choices=("bisect", "closed", "series"), default="bisect")
    p.add_argument("--compare", action="store_true", help="print every available method and deltas")
    p.set_defaults(func=cmd_vstar)

    p = sub.add_parser("modes", help="equilibrium and normal modes at (u, v, p) (JSON)")
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--M", type=float, default=1.0)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("series", help="coefficients of F_a and its inverse series (CSV)")
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--terms", type=int, default=8)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("verify")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=20240917)
    p.set_defaults(func=cmd_verify)
    # keep verify out of the help listing
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "verify"]
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NotImplementedError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BrokenPipeError:
        # reader closed early (e.g. piped into head)
        sys.stderr.close()
        return 0


if __name__ == "__main__":
    sys.exit(main())
