"""Legendre polynomials, associated Legendre functions, real spherical
harmonics, and stable evaluation of Legendre series.

Real harmonics follow the cos/sin convention

  Y_{l,m} = sqrt(2) N_{lm} P_{lm}(cos t) cos(m p),   m > 0,
  Y_{l,0} = N_{l0} P_l(cos t),
  Y_{l,m} = sqrt(2) N_{l|m|} P_{l|m|}(cos t) sin(|m| p),  m < 0,

with N_{lm} = sqrt((2l+1)/(4 pi) (l-|m|)!/(l+|m|)!) and P_{lm} carrying the
Condon-Shortley factor (-1)^m. Batch evaluation runs on the fully
normalized functions Pbar_{lm} = N_{lm} P_{lm}, whose three-term recurrence
stays O(1) in magnitude for arbitrary degree; the raw P_{lm} themselves
overflow float64 around l ~ 150 for m near l.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np
from numpy.polynomial import legendre as npleg

from .sphere import UnitVector

FOUR_PI = 4.0 * np.pi


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("argument outside [-1, 1]")
    return x


def legendre_p(ell: int, x):
    """Legendre polynomial P_ell(x) by the three-term recurrence."""
    if ell < 0:
        raise ValueError("degree must be >= 0")
    x = _check_domain(x)
    p_prev = np.ones_like(x)
    if ell == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for l in range(1, ell):
        p, p_prev = ((2 * l + 1) * x * p - l * p_prev) / (l + 1), p
    return p if p.ndim else float(p)


def legendre_table(L: int, x) -> np.ndarray:
    """All P_0(x)..P_L(x), stacked along a leading axis."""
    x = _check_domain(x)
    out = np.empty((L + 1,) + x.shape)
    out[0] = 1.0
    if L >= 1:
        out[1] = x
    for l in range(1, L):
        out[l + 1] = ((2 * l + 1) * x * out[l] - l * out[l - 1]) / (l + 1)
    return out


def legendre_series_eval(coeffs, x):
    """Evaluate sum_l c_l P_l(x) by Clenshaw's backward recurrence."""
    x = _check_domain(x)
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 1 or len(coeffs) == 0:
        raise ValueError("coefficients must be a non-empty 1-d sequence")
    val = npleg.legval(x, coeffs)
    return val if np.ndim(val) else float(val)


def assoc_legendre(ell: int, m: int, x):
    """Associated Legendre function P_{lm}(x), Condon-Shortley phase.

    Standard scheme: diagonal start P_{mm} = (-1)^m (2m-1)!! (1-x^2)^{m/2},
    then upward recurrence in degree. Magnitudes overflow float64 for
    large (l, m); use real_sph_harm for normalized values at high degree.
    """
    if m < 0 or m > ell:
        raise ValueError("order must satisfy 0 <= m <= ell")
    x = _check_domain(x)
    somx2 = np.sqrt(np.maximum(0.0, (1.0 - x) * (1.0 + x)))
    pmm = np.ones_like(x)
    for i in range(1, m + 1):
        pmm = -(2 * i - 1) * somx2 * pmm
    if ell == m:
        return pmm if pmm.ndim else float(pmm)
    pm1 = x * (2 * m + 1) * pmm
    if ell == m + 1:
        return pm1 if pm1.ndim else float(pm1)
    for l in range(m + 2, ell + 1):
        pmm, pm1 = pm1, (x * (2 * l - 1) * pm1 - (l + m - 1) * pmm) / (l - m)
    return pm1 if pm1.ndim else float(pm1)


def normalized_plm_scan(L: int, x) -> Iterator[tuple[int, int, np.ndarray]]:
    """Yield (l, m, Pbar_{lm}(x)) for m = 0..L, l = m..L (m-major order).

    Pbar_{lm} = N_{lm} P_{lm}; all values computed by the normalized
    recurrence, stable for degrees far beyond the factorial overflow point.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.maximum(0.0, (1.0 - x) * (1.0 + x)))
    pmm = np.full_like(x, 1.0 / np.sqrt(FOUR_PI))
    for m in range(L + 1):
        if m > 0:
            pmm = -np.sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * pmm
        yield m, m, pmm
        if m + 1 > L:
            continue
        p_prev, p = pmm, np.sqrt(2.0 * m + 3.0) * x * pmm
        yield m + 1, m, p
        for l in range(m + 2, L + 1):
            a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = np.sqrt(((2.0 * l + 1.0) * ((l - 1.0) ** 2 - m * m))
                        / ((2.0 * l - 3.0) * (l * l - m * m)))
            p_prev, p = p, a * x * p - b * p_prev
            yield l, m, p


def real_sph_harm(ell: int, m: int, s: UnitVector) -> float:
    """Real spherical harmonic Y_{lm} at a point on the sphere."""
    if abs(m) > ell:
        raise ValueError("order must satisfy |m| <= ell")
    ct = s.z
    phi = np.arctan2(s.y, s.x)
    ma = abs(m)
    pbar = None
    for l, mm, val in normalized_plm_scan(ell, np.asarray(ct)):
        if l == ell and mm == ma:
            pbar = float(val)
            break
    if m == 0:
        return pbar
    if m > 0:
        return np.sqrt(2.0) * pbar * np.cos(m * phi)
    return np.sqrt(2.0) * pbar * np.sin(ma * phi)


def flat_harmonic_index(ell: int, m: int) -> int:
    """Position of (l, m) in the l-major, m = -l..l flattened ordering."""
    return ell * ell + ell + m


def _angles_of(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ct = np.clip(points[:, 2], -1.0, 1.0)
    phi = np.arctan2(points[:, 1], points[:, 0])
    return ct, phi


def sph_harm_moments(L: int, points: np.ndarray,
                     weights: np.ndarray) -> np.ndarray:
    """Weighted sums sum_k w_k Y_{lm}(x_k) for all l <= L, |m| <= l.

    Returns a flat vector of length (L+1)^2 in l-major, m ascending order.
    Memory stays O(npoints) regardless of L.
    """
    ct, phi = _angles_of(points)
    w = np.asarray(weights, dtype=float)
    out = np.zeros((L + 1) * (L + 1))
    sqrt2 = np.sqrt(2.0)
    cos_m = {0: np.ones_like(phi)}
    sin_m = {}
    for l, m, pbar in normalized_plm_scan(L, ct):
        if m not in cos_m:
            cos_m[m] = np.cos(m * phi)
            sin_m[m] = np.sin(m * phi)
        if m == 0:
            out[flat_harmonic_index(l, 0)] = w @ pbar
        else:
            wp = w @ (sqrt2 * pbar * cos_m[m])
            out[flat_harmonic_index(l, m)] = wp
            out[flat_harmonic_index(l, -m)] = w @ (sqrt2 * pbar * sin_m[m])
    return out


def sph_harm_synthesis(coeffs: np.ndarray, L: int,
                       points: np.ndarray) -> np.ndarray:
    """Evaluate sum_{l<=L, m} c_{lm} Y_{lm} at each point.

    coeffs is flat of length (L+1)^2 in the l-major, m ascending order.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if len(coeffs) != (L + 1) * (L + 1):
        raise ValueError("coefficient length does not match the band limit")
    ct, phi = _angles_of(points)
    out = np.zeros(len(points))
    sqrt2 = np.sqrt(2.0)
    cos_m = {0: np.ones_like(phi)}
    sin_m = {}
    for l, m, pbar in normalized_plm_scan(L, ct):
        if m not in cos_m:
            cos_m[m] = np.cos(m * phi)
            sin_m[m] = np.sin(m * phi)
        if m == 0:
            c = coeffs[flat_harmonic_index(l, 0)]
            if c != 0.0:
                out += c * pbar
        else:
            cp = coeffs[flat_harmonic_index(l, m)]
            cm = coeffs[flat_harmonic_index(l, -m)]
            if cp != 0.0:
                out += cp * sqrt2 * pbar * cos_m[m]
            if cm != 0.0:
                out += cm * sqrt2 * pbar * sin_m[m]
    return out
