"""Angular power spectra and the decay conditions behind needlet
localisation.

A spectrum is a truncated table A_0..A_L of non-negative variances,
optionally backed by a closed form valid for every degree (power-law
family). Localisation of spectrum-modified needlets is governed by the
forward differences of sqrt(A_l): if |Delta^r_l| <= c (1+l)^{-(1+beta+r)},
the level-j needlet peaks decay like 2^{-beta j}. validate_decay measures
the best constants on the available range; no finite computation can
certify the all-l condition, so the verdict is a threshold on measured
constants, not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np


class SpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class PowerSpectrum:
    """Variance sequence A_0..A_L with an optional closed-form extension."""

    values: np.ndarray
    family: str = "table"
    closed_form: Callable[[np.ndarray], np.ndarray] | None = None
    params: dict | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or len(vals) == 0:
            raise SpectrumError("spectrum must be a non-empty 1-d sequence")
        if np.any(vals < 0.0):
            raise SpectrumError("spectrum values must be non-negative")

    @property
    def l_max(self) -> int:
        return len(self.values) - 1

    def sqrt_values(self) -> np.ndarray:
        return np.sqrt(self.values)

    def resized(self, l_max: int) -> "PowerSpectrum":
        """Same spectrum truncated or extended (closed form required)."""
        if l_max <= self.l_max:
            return PowerSpectrum(self.values[:l_max + 1], self.family,
                                 self.closed_form, self.params)
        if self.closed_form is None:
            raise SpectrumError(
                f"table spectrum covers l <= {self.l_max}, cannot extend "
                f"to {l_max}")
        ells = np.arange(l_max + 1, dtype=float)
        return PowerSpectrum(self.closed_form(ells), self.family,
                             self.closed_form, self.params)

    def describe(self) -> dict:
        d = {"family": self.family, "l_max": self.l_max}
        if self.params:
            d.update(self.params)
        return d


def power_law_spectrum(beta: float, l_max: int) -> PowerSpectrum:
    """A_l = (1+l)^{-2(1+beta)}, the power-law family."""
    if beta <= 0.0:
        raise SpectrumError("power-law exponent beta must be > 0")
    expo = -2.0 * (1.0 + beta)
    form = lambda ells: (1.0 + np.asarray(ells, dtype=float)) ** expo
    return PowerSpectrum(form(np.arange(l_max + 1)), family="power-law",
                         closed_form=form, params={"beta": beta})


def constant_spectrum(l_max: int, value: float = 1.0) -> PowerSpectrum:
    if value < 0.0:
        raise SpectrumError("spectrum values must be non-negative")
    form = lambda ells: np.full(np.shape(ells), value, dtype=float)
    return PowerSpectrum(np.full(l_max + 1, value), family="constant",
                         closed_form=form, params={"value": value})


def load_spectrum_table(source) -> PowerSpectrum:
    """Read "l A_l" pairs, one per line, l dense from 0."""
    if hasattr(source, "read"):
        text = source.read()
        name = getattr(source, "name", "<stream>")
    else:
        name = str(source)
        text = Path(source).read_text()
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise SpectrumError(f"{name}:{lineno}: expected 'l A_l' pair")
        try:
            ell, val = int(parts[0]), float(parts[1])
        except ValueError as exc:
            raise SpectrumError(f"{name}:{lineno}: {exc}") from None
        if ell != len(values):
            raise SpectrumError(
                f"{name}:{lineno}: degrees must be dense from 0, got {ell}")
        values.append(val)
    if not values:
        raise SpectrumError(f"{name}: empty spectrum table")
    return PowerSpectrum(np.asarray(values), family="table")


def summability_proxy(spec: PowerSpectrum) -> tuple[float, float | None]:
    """Truncated sum_(l<=L) (2l+1) A_l and a tail bound when available.

    The tail bound integrates the closed form beyond the table; it is None
    for table spectra and infinite for non-decaying families.
    """
    ells = np.arange(len(spec.values), dtype=float)
    partial = float(np.sum((2.0 * ells + 1.0) * spec.values))
    tail: float | None = None
    if spec.family == "power-law":
        beta = spec.params["beta"]
        L = spec.l_max
        # integral_(L+1)^inf (2x+1)(1+x)^{-2-2beta} dx, monotone integrand
        p = 2.0 * beta + 2.0
        tail = (2.0 * (2.0 + L) ** (2.0 - p) / (p - 2.0)
                - (2.0 + L) ** (1.0 - p) / (p - 1.0))
    elif spec.family == "constant":
        tail = np.inf if spec.params["value"] > 0.0 else 0.0
    return partial, tail


def forward_differences(sqrt_a, order: int) -> list[np.ndarray]:
    """Iterated forward differences of a sequence.

    Returns [D^0, ..., D^order] with D^0 = the input and
    D^i_l = D^{i-1}_{l+1} - D^{i-1}_l; D^i has len(input) - i entries.
    """
    seq = np.asarray(sqrt_a, dtype=float)
    if order < 0:
        raise SpectrumError("difference order must be >= 0")
    if order >= len(seq):
        raise SpectrumError(
            f"order {order} needs a sequence longer than {order}")
    out = [seq]
    for _ in range(order):
        seq = np.diff(seq)
        out.append(seq)
    return out


@dataclass(frozen=True)
class DecayReport:
    """Measured decay constants c_i = max_l |Delta^i_l| (1+l)^{1+beta+i}."""

    beta: float
    order: int
    constants: np.ndarray       # c_0..c_r over the available range
    threshold: float
    order_passed: np.ndarray    # per-order flag c_i <= threshold
    sqrt_tends_to_zero: bool
    passed: bool

    def to_dict(self) -> dict:
        return {
            "beta": self.beta, "order": self.order,
            "constants": [float(c) for c in self.constants],
            "threshold": self.threshold,
            "order_passed": [bool(p) for p in self.order_passed],
            "sqrt_tends_to_zero": self.sqrt_tends_to_zero,
            "passed": self.passed,
        }


def validate_decay(spec: PowerSpectrum, beta: float, order: int,
                   threshold: float = 100.0) -> DecayReport:
    """Measure the difference-decay constants for orders 0..order.

    Passing means every measured c_i stays below the threshold over the
    truncated range, and is evidence, not proof, of the all-degree decay
    condition. The sqrt(A_l) -> 0 requirement is checked as a trend: the
    largest value over the last quarter of the range must fall below half
    the largest over the first quarter.
    """
    if order < 0:
        raise SpectrumError("order must be >= 0")
    if beta <= 0.0:
        raise SpectrumError("beta must be > 0")
    sqrt_a = spec.sqrt_values()
    diffs = forward_differences(sqrt_a, order)
    consts = np.empty(order + 1)
    for i, d in enumerate(diffs):
        ells = np.arange(len(d), dtype=float)
        consts[i] = np.max(np.abs(d) * (1.0 + ells) ** (1.0 + beta + i)) \
            if len(d) else 0.0
    quarter = max(1, len(sqrt_a) // 4)
    head = float(np.max(sqrt_a[:quarter]))
    tail = float(np.max(sqrt_a[-quarter:]))
    tends_to_zero = tail < 0.5 * head if head > 0.0 else True
    order_ok = consts <= threshold
    return DecayReport(beta=beta, order=order, constants=consts,
                       threshold=threshold, order_passed=order_ok,
                       sqrt_tends_to_zero=tends_to_zero,
                       passed=bool(order_ok.all() and tends_to_zero))


def regularity_sum(spec: PowerSpectrum, beta: float) -> float:
    """Truncated sum_(l<=L) (1+l)^{1+2beta} A_l (Hoelder-regularity proxy)."""
    if beta < 0.0:
        raise SpectrumError("beta must be >= 0")
    ells = np.arange(len(spec.values), dtype=float)
    return float(np.sum((1.0 + ells) ** (1.0 + 2.0 * beta) * spec.values))


def regularity_tail_bound(spec: PowerSpectrum, beta: float) -> float | None:
    """Tail bound for regularity_sum via the closed form; None for tables."""
    if spec.family == "power-law":
        b = spec.params["beta"]
        p = 2.0 * (1.0 + b) - (1.0 + 2.0 * beta)
        if p <= 1.0:
            return np.inf
        return (2.0 + spec.l_max) ** (1.0 - p) / (p - 1.0)
    if spec.family == "constant":
        return np.inf if spec.params["value"] > 0.0 else 0.0
    return None
