"""Frozen CODATA 2018 constants (SI unless the name says otherwise)."""

HBAR = 1.054571817e-34  # J s
E_CHARGE = 1.602176634e-19  # C
M_E = 9.1093837015e-31  # kg
ME_C2_MEV = 0.51099895000e9  # electron rest energy in meV
FINE_STRUCTURE = 7.2973525693e-3

MEV = 1e-3 * E_CHARGE  # J per meV

# Auxiliary exponent of the scaled interaction M^s r^-M; all equilibrium
# formulas below assume this value.
S_AUX = -1
