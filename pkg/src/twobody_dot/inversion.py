"""Series inversion of ``F_a(y) = y (1 - y)^a`` and the v* representations.

The symmetric-family condition can be written ``F_a(Y) = X`` with
``a = -(M + 2)/4``, ``Y = (v*)^2 / (1 + u^2)`` and ``X = (p_phi / b)^(2a)``.
Its inverse ``G_a`` is built three ways:

* reversion of the Taylor series of ``F_a`` through partition sums
  (:func:`invert_series`), carried out in rational arithmetic (float
  input is converted exactly and the result rounded once);
* the closed Pochhammer form of the reverted coefficients
  (:func:`g_minus_series`);
* elementary / hypergeometric closed forms for M = 2, 6, 10, 14
  (:func:`g_closed`).

Arithmetic in the combinatorial routines is generic, so ``Fraction``
coefficients give exact rational results.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .errors import DomainError
from .units import power_scale


class SeriesDomainError(DomainError):
    """Argument outside the validated convergence domain; use bisection."""


class SeriesDivergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class SeriesCoeffs:
    """Coefficients (a_1, ..., a_n) of sum_k a_k y^k (no constant term)."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence):
        object.__setattr__(self, "coeffs", tuple(coeffs))
        if not self.coeffs:
            raise DomainError("SeriesCoeffs needs at least one coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int):
        """1-based access, a[k] = a_k."""
        if not 1 <= k <= self.order:
            raise IndexError(k)
        return self.coeffs[k - 1]

    def __call__(self, y):
        return sum(c * y**k for k, c in enumerate(self.coeffs, start=1))


def f_a(a: float, y: float) -> float:
    if a < 0 and y >= 1:
        raise DomainError("F_a(y) with a < 0 needs y < 1")
    if a > 0 and not 0 <= y <= 1:
        raise DomainError("F_a(y) with a > 0 needs 0 <= y <= 1")
    return y * (1.0 - y) ** a


def exponent_a(M: float) -> float:
    return -(M + 2.0) / 4.0


def b_M(u: float, M: float) -> float:
    """Momentum scale h_{M,2} (1 + u^2)^((M-2)/(2(M+2))) as printed.

    The leading factor h_{M,2} = M^(2/(M+2)) belongs to the s = 0
    normalisation of the interaction; :func:`momentum_scale` drops it for
    the s = -1 convention used everywhere else (identical for M = 1).
    """
    if u < 0:
        raise DomainError("u must be >= 0")
    return power_scale(M, 2, M) * power_scale(M, (M - 2) / 2, 1.0 + u * u)


def momentum_scale(u: float, M: float) -> float:
    """b_M(u) in the s = -1 convention, (1 + u^2)^((M-2)/(2(M+2)))."""
    return b_M(u, M) / power_scale(M, 2, M)


# -- partitions and reversion -------------------------------------------------


@lru_cache(maxsize=None)
def partitions_with_first_part(k: int, first: int) -> tuple[tuple[int, ...], ...]:
    """Nonincreasing partitions of ``k`` whose largest part is ``first``.

    Ordered from (first, k - first) down to (first, 1, ..., 1).
    """
    if first < 1 or first > k:
        return ()
    rest = k - first
    if rest == 0:
        return ((first,),)
    out = []
    for nxt in range(min(first, rest), 0, -1):
        for tail in partitions_with_first_part(rest, nxt):
            out.append((first,) + tail)
    return tuple(out)


def _exact(cs: tuple) -> tuple:
    """Promote all-integer coefficient lists to Fractions for exact sums."""
    if all(isinstance(c, (int, Fraction)) for c in cs):
        return tuple(Fraction(c) for c in cs)
    return cs


def _rational(cs: Sequence) -> tuple[tuple, bool]:
    """Exact Fractions for int, Fraction or float input, plus a flag saying
    whether the caller passed floats (results are then rounded once)."""
    was_float = any(isinstance(c, float) for c in cs)
    return tuple(Fraction(c) for c in cs), was_float


def _finish(cs: Sequence, was_float: bool, exact: bool) -> "SeriesCoeffs":
    return SeriesCoeffs([float(c) for c in cs] if was_float and not exact else cs)


def partition_d_coeffs(c: SeriesCoeffs | Sequence, l: int, k: int):
    """Coefficient of x^k in (sum_m c_m x^m)^l via partition sums.

    Each partition (k_1 = l >= k_2 >= ...) of k contributes
    l! prod_i c_i^(k_i - k_{i+1}) / (k_i - k_{i+1})!.
    """
    cs = _exact(c.coeffs if isinstance(c, SeriesCoeffs) else tuple(c))
    if not (1 <= l <= k):
        raise IndexError(f"need 1 <= l <= k, got l={l}, k={k}")
    if k > len(cs) and l < k:
        # parts up to k - l + 1 may be needed
        if k - l + 1 > len(cs):
            raise IndexError(f"need at least {k - l + 1} coefficients, have {len(cs)}")
    total = 0
    for part in partitions_with_first_part(k, l):
        term = math.factorial(l)
        ext = part + (0,)
        for i in range(len(part)):
            dk = ext[i] - ext[i + 1]
            if dk:
                term = term * cs[i] ** dk / math.factorial(dk)
        total = total + term
    return total


def invert_series(a: SeriesCoeffs | Sequence, exact: bool = False) -> SeriesCoeffs:
    """Coefficients of the compositional inverse, to the same order.

    Float input is rounded back to floats unless ``exact`` is set, in which
    case the Fractions of the exact inverse are returned.
    """
    cs, was_float = _rational(a.coeffs if isinstance(a, SeriesCoeffs) else tuple(a))
    if cs[0] == 0:
        raise DomainError("series inversion needs a nonzero leading coefficient")
    n = len(cs)
    a1 = cs[0]
    inv = [1 / a1]
    for i in range(1, n):
        acc = 0
        for m in range(1, i + 1):
            acc = acc + inv[m - 1] * partition_d_coeffs(cs, m, i + 1)
        inv.append(-acc / a1 ** (i + 1))
    return _finish(inv, was_float, exact)


def compose(outer: SeriesCoeffs, inner: SeriesCoeffs, exact: bool = False) -> SeriesCoeffs:
    """Truncated composition outer(inner(y)), order min of the two."""
    n = min(outer.order, inner.order)
    oc, f1 = _rational(outer.coeffs)
    ic, f2 = _rational(inner.coeffs)
    out = []
    for p in range(1, n + 1):
        acc = 0
        for k in range(1, p + 1):
            acc = acc + oc[k - 1] * partition_d_coeffs(ic, k, p)
        out.append(acc)
    return _finish(out, f1 or f2, exact)


def _binom(a, j: int):
    num = Fraction(1) if isinstance(a, (int, Fraction)) else 1.0
    for i in range(j):
        num = num * (a - i)
    return num / math.factorial(j)


def f_a_taylor(a, n: int) -> SeriesCoeffs:
    """Taylor coefficients of F_a about 0: a_k = (-1)^(k-1) binom(a, k-1)."""
    return SeriesCoeffs([(-1) ** (k - 1) * _binom(a, k - 1) for k in range(1, n + 1)])


# -- Pochhammer form ----------------------------------------------------------


def _pochhammer(t, n: int):
    out = 1
    for i in range(n):
        out = out * (t + i)
    return out


def g_minus_coeffs(a, n: int) -> SeriesCoeffs:
    """Reverted coefficients of F_a from the closed Pochhammer expression.

    Exact for ``Fraction`` (or int) ``a``.  Float ``a`` uses the running
    ratio form of (t)_{k-2}/(k-1)! so large orders do not overflow.
    """
    exact = isinstance(a, (int, Fraction))
    out = [Fraction(1) if exact else 1.0]
    for k in range(2, n + 1):
        t = 2 - k * (a + 1)
        if exact:
            c = a * _pochhammer(t, k - 2) / Fraction(math.factorial(k - 1))
        else:
            c = a / (k - 1)
            for i in range(k - 2):
                c *= (t + i) / (i + 1)
        out.append(c if k % 2 == 0 else -c)
    return SeriesCoeffs(out)


def convergence_radius(a: float) -> float:
    """Radius of convergence of the G_a series (distance to the nearest
    critical value of F_a)."""
    if a == 0:
        return math.inf
    if a == -1:
        return 1.0
    tau = 1.0 / (1.0 + a)
    return abs(tau) * abs(1.0 - tau) ** a


@lru_cache(maxsize=64)
def _scaled_coeffs(a: float, n: int) -> tuple[float, ...]:
    """c_k R^k for k = 1..n; bounded where the raw c_k would overflow."""
    R = convergence_radius(a)
    if math.isinf(R):
        return (1.0,) + (0.0,) * (n - 1)
    out = [R]
    for k in range(2, n + 1):
        t = 2.0 - k * (a + 1.0)
        c = a * R * R / (k - 1)
        for i in range(k - 2):
            c *= (t + i) * R / (i + 1)
        out.append(c if k % 2 == 0 else -c)
    return tuple(out)


def _partial_sum(a: float, x: float, n: int) -> tuple[float, float, float]:
    """(sum, last nonzero term, the nonzero term before it) over n terms."""
    R = convergence_radius(a)
    cs = _scaled_coeffs(float(a), int(n))
    w = x if math.isinf(R) else x / R
    total = 0.0
    wp = 1.0
    prev = cur = 0.0
    for c in cs:
        wp *= w
        term = c * wp
        if term != 0.0:
            prev, cur = cur, term
        total += term
    return total, cur, prev


def g_minus_series(a: float, x: float, n_terms: int = 16) -> float:
    """Partial sum of G_a through x^n_terms.

    Emits :class:`SeriesDivergenceWarning` when the last two nonzero terms
    grow in magnitude.
    """
    if n_terms < 2:
        raise DomainError("n_terms must be >= 2")
    total, cur, prev = _partial_sum(a, x, n_terms)
    if prev != 0.0 and abs(cur) > abs(prev):
        warnings.warn(
            f"G_a series terms grow at x={x} (a={a}); outside the convergence radius",
            SeriesDivergenceWarning,
            stacklevel=2,
        )
    return total


def g_minus_adaptive(a: float, x: float, ratio_max: float = 0.85, max_terms: int = 400) -> float:
    """Sum G_a(x) to double precision inside |x| <= ratio_max * radius."""
    R = convergence_radius(a)
    ratio = abs(x) / R
    if ratio > ratio_max:
        raise SeriesDomainError(
            f"|x| = {abs(x):.6g} beyond {ratio_max} x radius {R:.6g} for a = {a:.6g}"
        )
    # scaled terms decay at least like ratio^k; round n up to a multiple of
    # 16 so the coefficient cache stays small
    n = 16 if ratio == 0 else int(math.log(1e-17) / math.log(ratio)) + 4
    n = min(-(-n // 16) * 16, max_terms)
    return _partial_sum(a, x, n)[0]


# -- closed forms -------------------------------------------------------------


def g_closed(M: float, x: float) -> float:
    """Closed-form G_{M,-}(x) for M = 2 + 4k, k = 0..3, and x >= 0."""
    if x < 0:
        raise DomainError("closed forms are evaluated for x >= 0")
    k = (M - 2) / 4
    if k != int(k) or k < 0:
        raise DomainError(f"no closed form for M = {M}; use the series or bisection")
    k = int(k)
    if x == 0:
        return 0.0
    if k == 0:
        return x / (1.0 + x)
    if k == 1:
        # (1 + 2x - sqrt(1 + 4x)) / (2x), rationalised
        return 2.0 * x / (1.0 + 2.0 * x + math.sqrt(1.0 + 4.0 * x))
    if k == 2:
        return 1.0 - 2.0 / math.sqrt(3.0 * x) * math.sinh(
            math.asinh(math.sqrt(27.0 * x) / 2.0) / 3.0
        )
    if k == 3:
        import mpmath

        z = -mpmath.mpf(4) ** 4 / 3**3 * x
        return float(1 - mpmath.hyper([0.25, 0.5, 0.75], [2 / mpmath.mpf(3), 4 / mpmath.mpf(3)], z))
    raise NotImplementedError(f"no closed form implemented for M = {M} (k = {k} >= 4)")


def phi_conjugate(g: Callable[[float, float], float], a: float, x: float) -> float:
    """Conjugate inverse branch 1 - G_{1/a}(x^(1/a))."""
    if x < 0:
        raise DomainError("phi conjugation needs x >= 0 for a fractional power")
    if x == 0:
        if a < 0:
            return 1.0 - g(1.0 / a, math.inf)
        return 1.0 - g(1.0 / a, 0.0)
    return 1.0 - g(1.0 / a, x ** (1.0 / a))


# -- v* representations -------------------------------------------------------


def _branch_ratios(p_phi: float, u: float, M: float) -> tuple[float, float, float]:
    a = exponent_a(M)
    z = abs(p_phi) / momentum_scale(u, M)
    xbar = z * z
    # compare in logs: z^(2a) overflows for tiny z
    far = math.inf if z == 0 else math.exp(min(2 * a * math.log(z) - math.log(convergence_radius(a)), 700.0))
    near = xbar / convergence_radius(1.0 / a)
    return z, far, near


def series_branch(p_phi: float, u: float, M: float, ratio_max: float = 0.85) -> str | None:
    """Branch whose series argument lies deepest inside its disc, or None."""
    _, far, near = _branch_ratios(p_phi, u, M)
    best = "far" if far <= near else "near"
    return best if min(far, near) <= ratio_max else None


def vstar_series(
    p_phi: float,
    u: float,
    M: float,
    branch: str | None = None,
    ratio_max: float = 0.85,
) -> float:
    """v* from the inverse series of F_a.

    ``"far"`` expands in (p/b)^(2a), small for large |p_phi|; ``"near"`` is
    its phi-conjugate, an expansion in (p/b)^2, small for small |p_phi|.
    ``None`` picks whichever argument is deeper inside its disc.  Raises
    :class:`SeriesDomainError` outside ``ratio_max`` times the radius.
    """
    if u < 0:
        raise DomainError("u must be >= 0")
    a = exponent_a(M)
    z, far, near = _branch_ratios(p_phi, u, M)
    if branch is None:
        branch = "far" if far <= near else "near"
    series = lambda aa, xx: g_minus_adaptive(aa, xx, ratio_max)  # noqa: E731
    if branch == "far":
        if z == 0:
            raise SeriesDomainError("far branch undefined at p_phi = 0")
        y2 = series(a, z ** (2 * a))
    elif branch == "near":
        # phi conjugate of the far branch; its argument (z^(2a))^(1/a) is
        # z^2, passed directly so tiny z does not overflow
        y2 = 1.0 - series(1.0 / a, z * z)
    else:
        raise DomainError(f"unknown branch {branch!r}")
    return math.sqrt(1.0 + u * u) * math.sqrt(max(y2, 0.0))


def vstar_closed(p_phi: float, u: float, M: float) -> float:
    """v* through the closed forms of G for M = 2, 6, 10, 14."""
    a = exponent_a(M)
    z = abs(p_phi) / momentum_scale(u, M)
    if z == 0:
        return math.sqrt(1.0 + u * u)
    y2 = g_closed(M, z ** (2 * a))
    return math.sqrt(1.0 + u * u) * math.sqrt(y2)
