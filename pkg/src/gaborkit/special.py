"""Normalized Hermite functions and the restricted Jacobi theta-3 function."""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_SQRT_PI = math.sqrt(math.pi)

# theta series truncation: certified relative tail below this level
_THETA_TAIL = 1e-16
_THETA_K_MIN = 6
_THETA_K_MAX = 256


def hermite(n, t):
    """Evaluate the n-th normalized Hermite function h_n(t).

    The normalization is the one for which ||h_n||_2 = 1 and the Fourier
    transform acts diagonally, F h_n = (-i)^n h_n.  Evaluation uses the
    Gaussian-weighted three-term recurrence

        h_0(t)     = 2^(1/4) exp(-pi t^2)
        h_1(t)     = 2 sqrt(pi) t h_0(t)
        h_(k+1)(t) = (2 sqrt(pi) t / sqrt(k+1)) h_k(t) - sqrt(k/(k+1)) h_(k-1)(t)

    Carrying the Gaussian factor through the recurrence avoids the
    cancellation and overflow of the polynomial-times-Gaussian form; the
    evaluation is safe for |t| up to 50 (values underflow to 0 long before).

    Parameters
    ----------
    n : int
        Hermite order, n >= 0.
    t : float or array_like
        Evaluation points.

    Returns
    -------
    float or ndarray
    """
    if n != int(n) or n < 0:
        raise ValueError(f"Hermite order must be a nonnegative integer, got {n!r}")
    n = int(n)
    t = np.asarray(t, dtype=float)
    h_prev = 2.0 ** 0.25 * np.exp(-np.pi * t * t)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h_cur = 2.0 * _SQRT_PI * t * h_prev
    for k in range(1, n):
        h_next = (2.0 * _SQRT_PI / math.sqrt(k + 1.0)) * t * h_cur \
            - math.sqrt(k / (k + 1.0)) * h_prev
        h_prev, h_cur = h_cur, h_next
    return h_cur if h_cur.ndim else float(h_cur)


def hermite_stack(n_max, t):
    """Evaluate h_0 .. h_n_max at the points t, returned as rows of one array."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((n_max + 1, t.size))
    out[0] = 2.0 ** 0.25 * np.exp(-np.pi * t * t)
    if n_max >= 1:
        out[1] = 2.0 * _SQRT_PI * t * out[0]
    for k in range(1, n_max):
        out[k + 1] = (2.0 * _SQRT_PI / math.sqrt(k + 1.0)) * t * out[k] \
            - math.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


@lru_cache(maxsize=128)
def hermite_envelope_constant(n):
    """Return C such that |h_n(t)| <= C (1 + |t|)^n exp(-pi t^2) for all t.

    Built from the absolute-coefficient sum of the degree-n Hermite
    polynomial, so the bound is rigorous (if crude for large n).
    """
    if n == 0:
        return 2.0 ** 0.25
    prev, cur = [1], [0, 2]
    for k in range(1, n):
        nxt = [0] * (k + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    coeff_sum = sum(abs(c) for c in cur)
    return 2.0 ** 0.25 / math.sqrt(2.0 ** n * math.factorial(n)) \
        * coeff_sum * max(1.0, math.sqrt(2.0 * math.pi)) ** n


@dataclass(frozen=True)
class ThetaValue:
    """Value and alpha-derivative of theta_3 at a positive argument."""

    alpha: float
    value: float
    derivative: float


def theta3(alpha):
    """Evaluate theta_3(alpha) = sum_k exp(-pi alpha k^2) and its derivative.

    Both series are truncated at |k| <= K, with K >= 6 the smallest integer
    for which the dropped tail, dominated by the geometric envelope
    exp(-pi alpha K) per step, stays below 1e-16 of the partial sum.

    Parameters
    ----------
    alpha : float
        Strictly positive argument.

    Returns
    -------
    ThetaValue
    """
    if not alpha > 0:
        raise ValueError(f"theta3 requires alpha > 0, got {alpha!r}")
    alpha = float(alpha)
    K = _THETA_K_MIN
    while K < _THETA_K_MAX:
        partial = 1.0 + 2.0 * math.fsum(
            math.exp(-math.pi * alpha * k * k) for k in range(1, K + 1))
        if math.exp(-math.pi * alpha * K * K) * (2 * K + 2) < _THETA_TAIL * partial:
            break
        K += 1
    k = np.arange(1, K + 1, dtype=float)
    terms = np.exp(-math.pi * alpha * k * k)
    value = 1.0 + 2.0 * float(np.sum(terms))
    derivative = -2.0 * math.pi * float(np.sum(k * k * terms))
    return ThetaValue(alpha=alpha, value=value, derivative=derivative)
