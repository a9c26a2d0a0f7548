"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when importable, otherwise
the pure-Python ``_pykernels`` twin.  ``BACKEND`` names the active one.
"""

try:
    from ._ckernels import veff, veff_grid, vstar_bisect, vstar_bisect_array

    BACKEND = "cython"
except ImportError:  # extension not built
    from ._pykernels import veff, veff_grid, vstar_bisect, vstar_bisect_array

    BACKEND = "python"

__all__ = ["BACKEND", "veff", "veff_grid", "vstar_bisect", "vstar_bisect_array"]
