"""The Zak transform of windows: point values, grid surfaces, identities.

Z f(x, omega) = sum_k f(k - x) exp(2 pi i omega k), truncated with a
certified Gaussian-envelope tail bound.  Grids cover the half-open
fundamental domain [0, 1)^2 with nodes at i/N, so structural zeros at
small-denominator rationals land exactly on nodes.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoissonUnavailable
from .operators import Fourier
from .windows import (Window, descriptor, envelope, evaluate, fourier_window,
                      is_interpolated, is_real, parity, shifted, window)

_TRUNC_TOL = 1e-14
TRUNC_MIN = 8
TRUNC_MAX = 64


def auto_truncation(w, scale=1.0):
    """Smallest K in [8, 64] whose envelope tail at distance scale*(K-1) is < 1e-14."""
    env = envelope(w)
    for K in range(TRUNC_MIN, TRUNC_MAX):
        if env.tail(scale * (K - 1)) < _TRUNC_TOL:
            return K
    return TRUNC_MAX


def zak_tail_bound(w, trunc, scale=1.0):
    """Certified bound on the dropped series tail for truncation trunc.

    For interpolated windows the bound includes the interpolation budget.
    """
    env = envelope(w)
    return env.tail(scale * (trunc - 1)) + env.floor


def zak_point(w, x, omega, trunc=None):
    """Zak transform of a window at (x, omega); broadcasts over arrays.

    The sum runs over 2*trunc + 1 integers centered where the window lives;
    trunc defaults to the envelope-certified choice of
    :func:`auto_truncation`.
    """
    x_arr = np.asarray(x, dtype=float)
    om_arr = np.asarray(omega, dtype=float)
    scalar = x_arr.ndim == 0 and om_arr.ndim == 0
    x_b, om_b = np.broadcast_arrays(np.atleast_1d(x_arr), np.atleast_1d(om_arr))
    K = int(trunc) if trunc is not None else auto_truncation(w)
    if K < 1:
        raise ValueError(f"truncation must be at least 1, got {trunc!r}")
    center = envelope(w).center
    k_lo = math.floor(float(x_b.min()) + center) - K
    k_hi = math.ceil(float(x_b.max()) + center) + K
    ks = np.arange(k_lo, k_hi + 1, dtype=float)
    vals = evaluate(w, ks[None, :] - x_b.ravel()[:, None])
    phases = np.exp(2j * np.pi * om_b.ravel()[:, None] * ks[None, :])
    out = np.sum(vals * phases, axis=1).reshape(x_b.shape)
    return complex(out[(0,) * out.ndim]) if scalar else out


@dataclass
class ZakSurface:
    """Zak values on the N x N grid (i/N, j/N) over [0, 1)^2.

    values[i, j] = Z w (i/N, j/N).
    """

    values: np.ndarray
    window_desc: Window
    resolution: int
    truncation: int
    tail_bound: float


def zak_surface(w, resolution, trunc=None):
    """Evaluate the Zak transform of a window on the fundamental-domain grid."""
    N = int(resolution)
    if N < 8:
        raise ValueError(f"surface resolution must be at least 8, got {resolution!r}")
    K = int(trunc) if trunc is not None else auto_truncation(w)
    env = envelope(w)
    center = env.center
    k_lo, k_hi = math.floor(center) - K, math.ceil(center) + 1 + K
    ks = np.arange(k_lo, k_hi + 1, dtype=float)
    xs = np.arange(N, dtype=float) / N
    vals = evaluate(w, ks[None, :] - xs[:, None])          # N x nk
    phases = np.exp(2j * np.pi * np.outer(ks, np.arange(N) / N))  # nk x N
    return ZakSurface(values=vals @ phases, window_desc=w, resolution=N,
                      truncation=K, tail_bound=env.tail(K - 1) + env.floor)


def zak_scaled(a, w, x, omega, trunc=None):
    """Scaled Zak transform sqrt(a) sum_k w(a k - x) exp(2 pi i a k omega).

    Coincides with the ordinary transform at a = 1 and satisfies
    Z_a w (x, omega) = Z (D_{1/a} w)(x/a, a omega).
    """
    if not a > 0:
        raise ValueError(f"scaled Zak transform requires a > 0, got {a!r}")
    a = float(a)
    env = envelope(w)
    if trunc is not None:
        K = int(trunc)
    else:
        K = TRUNC_MAX
        for cand in range(TRUNC_MIN, TRUNC_MAX):
            if env.tail(a * (cand - 1)) < _TRUNC_TOL:
                K = cand
                break
    k0 = round((float(x) + env.center) / a)
    ks = k0 + np.arange(-K, K + 1, dtype=float)
    vals = evaluate(w, a * ks - float(x))
    return complex(math.sqrt(a) * np.sum(vals * np.exp(2j * np.pi * a * float(omega) * ks)))


_DEFAULT_COVARIANCE_SHIFTS = ((0.35, 0.75), (-0.4, 0.2), (1.25, -0.6))


def verify_identities(w, sample_points, shifts=None, poisson="closed", trunc=None):
    """Max absolute defect of the structural Zak identities at sample points.

    Checks quasi-periodicity in both variables, covariance under
    time-frequency shifts of the window, the Fourier/Poisson relation
    Z f (x, omega) = exp(2 pi i x omega) Z f^ (omega, -x), and (when the
    window has definite parity or is real-valued) the parity zeros and
    conjugate symmetry.

    Parameters
    ----------
    w : Window
    sample_points : array_like, shape (n, 2)
    shifts : iterable of (xi, eta), optional
        Window shifts for the covariance check.
    poisson : {"closed", "frft", "skip"}
        "closed" uses the closed-form Fourier transform of the window and
        raises :class:`PoissonUnavailable` if there is none; "frft" falls
        back to a sampled Fourier transform; "skip" omits the check.

    Returns
    -------
    dict mapping identity name to max absolute defect.
    """
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    xs, oms = pts[:, 0], pts[:, 1]
    base = zak_point(w, xs, oms, trunc)
    report = {}
    # index shift k -> k+1 in the defining series gives the phase
    # exp(+2 pi i omega) for the unit step in x
    plus_x = zak_point(w, xs + 1.0, oms, trunc)
    report["quasi_periodicity_x"] = float(
        np.max(np.abs(plus_x - np.exp(2j * np.pi * oms) * base)))
    plus_om = zak_point(w, xs, oms + 1.0, trunc)
    report["quasi_periodicity_omega"] = float(np.max(np.abs(plus_om - base)))

    worst = 0.0
    for xi, eta in (shifts if shifts is not None else _DEFAULT_COVARIANCE_SHIFTS):
        lhs = zak_point(shifted(w, xi, eta), xs, oms, trunc)
        rhs = np.exp(-2j * np.pi * xs * eta) * zak_point(w, xs + xi, oms + eta, trunc)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    report["shift_covariance"] = worst

    if poisson != "skip":
        fw = fourier_window(w)
        if fw is None:
            if poisson == "closed":
                raise PoissonUnavailable(
                    "window has no closed-form Fourier transform; "
                    "pass poisson='frft' or poisson='skip'")
            fw = window(w.n, (Fourier(),) + w.chain, w.phase)
        # Poisson summation applied to the defining series:
        # Z f (x, omega) = exp(2 pi i x omega) Z f^ (omega, -x)
        rhs = np.exp(2j * np.pi * xs * oms) * zak_point(fw, oms, -xs, trunc)
        report["poisson"] = float(np.max(np.abs(base - rhs)))

    par = parity(w)
    if par is not None:
        zero_pts = [(0.5, 0.5)] if par == 1 else [(0.0, 0.0), (0.0, 0.5), (0.5, 0.0)]
        zp = np.array(zero_pts)
        report["parity_zeros"] = float(
            np.max(np.abs(zak_point(w, zp[:, 0], zp[:, 1], trunc))))
    if is_real(w):
        conj_defect = zak_point(w, xs, -oms, trunc) - np.conj(base)
        report["conjugate_symmetry"] = float(np.max(np.abs(conj_defect)))
    return report


def _fmt(x):
    return repr(float(x))


def write_surface_csv(surface, csv_path, meta_path=None):
    """Write a surface as CSV rows x,omega,re,im,abs plus a JSON sidecar."""
    N = surface.resolution
    grid = np.arange(N) / N
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,omega,re,im,abs\n")
        for i in range(N):
            vi = surface.values[i]
            for j in range(N):
                v = vi[j]
                fh.write(f"{_fmt(grid[i])},{_fmt(grid[j])},{_fmt(v.real)},"
                         f"{_fmt(v.imag)},{_fmt(abs(v))}\n")
    if meta_path is not None:
        meta = {
            "window": descriptor(surface.window_desc),
            "resolution": surface.resolution,
            "truncation": surface.truncation,
            "tail_bound": float(surface.tail_bound),
            "interpolated": is_interpolated(surface.window_desc),
        }
        with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
