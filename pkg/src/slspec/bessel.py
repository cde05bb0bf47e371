"""Bessel functions of the first kind J_n for the Chebyshev expansions.

Only integer orders and real arguments are needed, over a narrow range
(orders to ~200, arguments to ~1e4), so the implementation is
self-contained: an ascending power series for small arguments and
Miller's backward recurrence with the normalization
J_0(x) + 2*sum_k J_2k(x) = 1 otherwise.
"""

from __future__ import annotations

import math

import numpy as np

MAX_ORDER = 200
MAX_ARGUMENT = 1.0e4
SERIES_CUTOFF = 12.0
_RESCALE_LIMIT = 1.0e250
_RESCALE_FACTOR = 1.0e-250


def _validate(n: int, x: float) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0 or n > MAX_ORDER:
        raise ValueError(f"order must be an integer in [0, {MAX_ORDER}], got {n!r}")
    if not math.isfinite(x) or abs(x) > MAX_ARGUMENT:
        raise ValueError(f"argument must be finite with |x| <= {MAX_ARGUMENT:g}, got {x!r}")


def _ascending_series(n: int, x: float) -> float:
    # J_n(x) = sum_m (-1)^m (x/2)^(n+2m) / (m! (n+m)!), |x| <= 12
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    half = 0.5 * x
    log_t0 = n * math.log(abs(half)) - math.lgamma(n + 1)
    if log_t0 < -745.0:  # below double underflow
        return 0.0
    term = math.exp(log_t0)
    if half < 0 and n % 2 == 1:
        term = -term
    q = half * half
    total = term
    for m in range(1, 400):
        term *= -q / (m * (n + m))
        total += term
        if abs(term) <= 1e-18 * abs(total):
            return total
    raise RuntimeError("ascending Bessel series did not converge")  # pragma: no cover


def _miller_start(n_max: int, x: float) -> int:
    base = max(n_max, int(1.2 * x) + 1, 4)
    m = base + 2 * int(math.sqrt(40.0 * base)) + 20
    return m + (m % 2)


def _miller_sequence(n_max: int, x: float) -> np.ndarray:
    # x > 0; backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalized
    # by J_0 + 2*sum J_{2k} = 1.  Rescale on overflow; early (large-order)
    # entries that underflow after rescaling are genuinely negligible.
    m = _miller_start(n_max, x)
    out = np.zeros(n_max + 1)
    bkp1 = 0.0
    bk = 1.0e-30
    norm = 0.0
    for k in range(m, 0, -1):
        if k <= n_max:
            out[k] = bk
        if k % 2 == 0:
            norm += 2.0 * bk
        bkm1 = (2.0 * k / x) * bk - bkp1
        bkp1 = bk
        bk = bkm1
        if abs(bk) > _RESCALE_LIMIT:
            bk *= _RESCALE_FACTOR
            bkp1 *= _RESCALE_FACTOR
            norm *= _RESCALE_FACTOR
            out *= _RESCALE_FACTOR
    out[0] = bk
    norm += bk
    return out / norm


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer n >= 0 and real x.

    Relative accuracy ~1e-13 over the validated range; ascending series
    for |x| <= 12, Miller backward recurrence above.
    """
    _validate(n, x)
    ax = abs(x)
    sign = -1.0 if (x < 0 and n % 2 == 1) else 1.0
    if ax <= SERIES_CUTOFF:
        return sign * _ascending_series(n, ax)
    return sign * float(_miller_sequence(n, ax)[n])


def bessel_j_sequence(n_max: int, x: float) -> np.ndarray:
    """[J_0(x), ..., J_n_max(x)] in one backward-recurrence pass."""
    _validate(n_max, x)
    if x == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    out = _miller_sequence(n_max, abs(x))
    if x < 0:
        out[1::2] = -out[1::2]
    return out
