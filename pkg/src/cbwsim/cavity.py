"""
Recursive (bow-tie) cavity model and the Fabry-Perot Airy reference.

Pass n through the cavity contributes the upper-port amplitude of an
n-block asymmetric chain, ``(-1)^n cos(n phi)``, weighted by ``eta^(n-1)``
for the n-1 output-coupler reflections it has survived. The passes add
coherently. Off resonance the alternating signs cancel; at ``phi = pi``
every term is ``+eta^(n-1)``.

The constant transmission factor of the output coupler is left out; all
spectra here are peak-normalised, so it would cancel anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import TWO_PI, Curve, fwhm, phase_grid
from .optics import FieldPair, apply, chain_closed_form

# classical single-MZI fringe period; the reference for the paper-style width ratio
CLASSICAL_PERIOD = np.pi


@dataclass(frozen=True)
class CavityParams:
    eta: float  # amplitude reflection of the output coupler
    passes: int

    def __post_init__(self):
        if not (math.isfinite(self.eta) and 0 < self.eta <= 1):
            raise ValueError(f"eta must lie in (0, 1], got {self.eta!r}")
        if isinstance(self.passes, bool) or int(self.passes) != self.passes or self.passes < 1:
            raise ValueError(f"passes must be a positive integer, got {self.passes!r}")


@dataclass(frozen=True)
class AiryParams:
    reflectance: float  # intensity reflectance R, i.e. eta**2

    def __post_init__(self):
        if not (math.isfinite(self.reflectance) and 0 <= self.reflectance < 1):
            raise ValueError(f"reflectance must lie in [0, 1), got {self.reflectance!r}")

    @property
    def finesse_coefficient(self) -> float:
        r = self.reflectance
        return 4.0 * r / (1.0 - r) ** 2


def cavity_field_sum(phi, params: CavityParams) -> np.ndarray:
    """Coherent sum ``S_N(phi) = sum_{n=1..N} eta^(n-1) E_C^(n)(phi)``.

    ``E_C^(n)`` is taken from :func:`chain_closed_form` applied to a unit
    input, so the retained ``(-1)^n`` sign does the cancelling.
    """
    phi = np.asarray(phi, dtype=np.float64)
    unit = FieldPair.source(1.0)
    total = np.zeros(phi.shape, dtype=np.complex128)
    weight = 1.0
    for n in range(1, params.passes + 1):
        total += weight * apply(chain_closed_form(phi, n), unit).upper
        weight *= params.eta
    return total


def resonance_amplitude(params: CavityParams) -> float:
    """``S_N(pi)``: ``(1 - eta^N) / (1 - eta)``, or N for a lossless coupler."""
    if params.eta == 1.0:
        return float(params.passes)
    return (1.0 - params.eta**params.passes) / (1.0 - params.eta)


def _check_grid(grid) -> np.ndarray:
    xs = np.asarray(grid, dtype=np.float64)
    if xs.ndim != 1 or xs.size == 0:
        raise ValueError("grid must be a non-empty 1-D sequence")
    if xs.size < 2:
        raise ValueError("grid needs at least two points")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("grid must be strictly increasing")
    if xs[0] < 0 or xs[-1] > TWO_PI:
        raise ValueError("grid must lie within [0, 2 pi]")
    return xs


def cavity_spectrum(grid, params: CavityParams) -> Curve:
    """Peak-normalised ``|S_N(phi)|^2`` sampled on ``grid``."""
    xs = _check_grid(grid)
    power = np.abs(cavity_field_sum(xs, params)) ** 2
    top = float(np.max(power))
    if top <= 0:
        raise ValueError("cavity spectrum vanishes on this grid")
    period = TWO_PI if abs((xs[-1] - xs[0]) - TWO_PI) <= 1e-9 else None
    return Curve(xs, power / top, f"cavity eta={params.eta:g} N={params.passes}", period)


def airy_transmission(phi, params: AiryParams) -> np.ndarray:
    """Fabry-Perot transmission ``1 / (1 + F sin^2(phi / 2))``, period 2 pi."""
    phi = np.asarray(phi, dtype=np.float64)
    return 1.0 / (1.0 + params.finesse_coefficient * np.sin(0.5 * phi) ** 2)


def airy_spectrum(grid, params: AiryParams) -> Curve:
    xs = np.asarray(grid, dtype=np.float64)
    period = TWO_PI if abs((xs[-1] - xs[0]) - TWO_PI) <= 1e-9 else None
    return Curve(xs, airy_transmission(xs, params), f"airy R={params.reflectance:g}", period)


def spectral_width_ratio(curve: Curve, around: float | None = None, period: float | None = None) -> float:
    """
    FWHM of the dominant peak divided by a reference period.

    Parameters
    ----------
    curve : Curve
        One period of a spectrum with a single dominant peak.
    around : float, optional
        Where to look for the peak; defaults to the global maximum.
    period : float, optional
        Reference period. Defaults to ``curve.period``, else the span of
        the samples.
    """
    if around is None:
        around = float(curve.xs[int(np.argmax(curve.ys))])
    if period is None:
        period = curve.period if curve.period is not None else float(curve.xs[-1] - curve.xs[0])
    return fwhm(curve, around) / period


def default_cavity_grid(points: int = 100_000) -> np.ndarray:
    return phase_grid(points)
