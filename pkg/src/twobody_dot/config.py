"""Flat ``key = value`` material/trap configuration files.

Recognised keys::

    m_star_ratio  epsilon_r  g_star  hw_rho_mev  hw_z_mev  M  beta

``#`` starts a comment.  ``M`` defaults to 1 and ``beta`` is optional
(required when M != 1).  Values are plain decimal numbers.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ConfigError, DomainError
from .units import MaterialSpec, TrapSpec

REQUIRED = ("m_star_ratio", "epsilon_r", "g_star", "hw_rho_mev", "hw_z_mev")
OPTIONAL = ("M", "beta")


def parse_config(text: str) -> tuple[MaterialSpec, TrapSpec]:
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in REQUIRED and key not in OPTIONAL:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = float(val)
        except ValueError:
            raise ConfigError(f"value for {key!r} is not a number: {val!r}", lineno) from None

    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ConfigError("missing keys: " + ", ".join(missing))
    try:
        mat = MaterialSpec(values["m_star_ratio"], values["epsilon_r"], abs(values["g_star"]))
        trap = TrapSpec(
            values["hw_rho_mev"],
            values["hw_z_mev"],
            values.get("M", 1.0),
            values.get("beta"),
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    return mat, trap


def load_config(path: str | Path) -> tuple[MaterialSpec, TrapSpec]:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def format_config(mat: MaterialSpec, trap: TrapSpec) -> str:
    lines = [
        f"m_star_ratio = {mat.mass_ratio:.12g}",
        f"epsilon_r = {mat.epsilon_r:.12g}",
        f"g_star = {mat.g_star_abs:.12g}",
        f"hw_rho_mev = {trap.hw_rho:.12g}",
        f"hw_z_mev = {trap.hw_z:.12g}",
        f"M = {trap.M:.12g}",
    ]
    if trap.beta_override is not None:
        lines.append(f"beta = {trap.beta_override:.12g}")
    return "\n".join(lines) + "\n"
