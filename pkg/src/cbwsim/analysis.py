"""
Phase sweeps, (phi, psi) maps and curve metrology.

A :class:`Curve` may carry a ``period``. When it does, the samples are
treated as one cycle of a periodic signal: a last sample sitting exactly one
period after the first is a duplicate of it, and peak searches wrap around
the ends. Sweeps over a full ``[0, 2 pi]`` grid are tagged this way, which
lets :func:`fwhm` measure the fringe sitting on ``phi = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .optics import (
    BlockParams,
    Coupling,
    FieldPair,
    Matrix2,
    apply,
    chain_product,
    intensities,
)

TWO_PI = 2.0 * np.pi
DEFAULT_SWEEP_POINTS = 2001
DEFAULT_MAP_POINTS = 501
# relative tie tolerance for plateau and extremum detection
TIE_RTOL = 1e-9
_PERIOD_ATOL = 1e-9


class MetrologyError(ValueError):
    """A curve does not support the requested measurement."""


@dataclass(frozen=True, eq=False)
class Curve:
    xs: np.ndarray
    ys: np.ndarray
    label: str = ""
    period: float | None = None

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.float64)
        ys = np.asarray(self.ys, dtype=np.float64)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise ValueError("curve xs and ys must be 1-D and of equal length")
        if xs.size < 2:
            raise ValueError("curve needs at least two samples")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("curve samples must be finite")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("curve xs must be strictly increasing")
        if self.period is not None and xs[-1] - xs[0] > self.period + _PERIOD_ATOL:
            raise ValueError("curve spans more than one period")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def scaled(self, factor: float) -> "Curve":
        return Curve(self.xs, self.ys * factor, self.label, self.period)


@dataclass(frozen=True, eq=False)
class Map2D:
    """Intensity grid; ``values[i, j]`` belongs to ``(psis[i], phis[j])``."""

    phis: np.ndarray
    psis: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        phis = np.asarray(self.phis, dtype=np.float64)
        psis = np.asarray(self.psis, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (psis.size, phis.size):
            raise ValueError(f"map values shape {values.shape} != ({psis.size}, {phis.size})")
        object.__setattr__(self, "phis", phis)
        object.__setattr__(self, "psis", psis)
        object.__setattr__(self, "values", values)


def phase_grid(points: int = DEFAULT_SWEEP_POINTS, start: float = 0.0, stop: float = TWO_PI) -> np.ndarray:
    """Evenly spaced grid with both endpoints included."""
    if points < 2:
        raise ValueError(f"a grid needs at least 2 points, got {points}")
    return np.linspace(start, stop, int(points))


def _full_period(xs: np.ndarray) -> float | None:
    return TWO_PI if abs((xs[-1] - xs[0]) - TWO_PI) <= _PERIOD_ATOL else None


def sweep_matrix(
    matrix_at: Callable[[np.ndarray], Matrix2],
    grid,
    input_intensity: float = 1.0,
    label: str = "",
) -> tuple[Curve, Curve]:
    """Sweep any phi-parameterised circuit and record both port intensities.

    ``matrix_at`` receives the whole grid and must return a matrix stack.
    """
    xs = np.asarray(grid, dtype=np.float64)
    out = apply(matrix_at(xs), FieldPair.source(input_intensity))
    i_c, i_d = intensities(out)
    period = _full_period(xs)
    return (
        Curve(xs, np.broadcast_to(i_c, xs.shape), f"{label}I_C".strip(), period),
        Curve(xs, np.broadcast_to(i_d, xs.shape), f"{label}I_D".strip(), period),
    )


def sweep_phi(
    n_blocks: int,
    psi: float = 0.0,
    grid=None,
    input_intensity: float = 1.0,
) -> tuple[Curve, Curve]:
    """
    Output intensities of an n-block asymmetric chain versus phi.

    Parameters
    ----------
    n_blocks : int
        Number of ACD blocks in series.
    psi : float
        Control phase shared by every block. ``0`` gives the enhanced
        ``cos^2(n phi)`` fringe, ``pi`` the flat identity response.
    grid : array_like, optional
        Phase samples; defaults to 2001 points over ``[0, 2 pi]``.
    input_intensity : float
        Source intensity ``I0``.

    Returns
    -------
    (Curve, Curve)
        ``I_C`` (upper port) and ``I_D`` (lower port).
    """
    grid = phase_grid() if grid is None else grid
    return sweep_matrix(
        lambda phi: chain_product(BlockParams(phi, psi, Coupling.ASYMMETRIC), n_blocks),
        grid,
        input_intensity,
        label=f"n={n_blocks} ",
    )


def map_phi_psi(
    n_blocks: int,
    phi_grid=None,
    psi_grid=None,
    input_intensity: float = 1.0,
    eta: float = 1.0,
) -> tuple[Map2D, Map2D]:
    """Port intensities over a (phi, psi) grid for an n-block chain.

    ``eta`` is an optional amplitude factor applied once per block. It is
    an extension for imitating lossy chains; the default 1 is lossless and
    then ``I_C + I_D = I0`` in every cell.
    """
    if not 0 < eta <= 1:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    phis = phase_grid(DEFAULT_MAP_POINTS) if phi_grid is None else np.asarray(phi_grid, dtype=np.float64)
    psis = phase_grid(DEFAULT_MAP_POINTS) if psi_grid is None else np.asarray(psi_grid, dtype=np.float64)
    phi_mesh, psi_mesh = np.meshgrid(phis, psis)
    chain = chain_product(BlockParams(phi_mesh, psi_mesh, Coupling.ASYMMETRIC), n_blocks)
    if eta != 1.0:
        chain = chain * eta**n_blocks
    i_c, i_d = intensities(apply(chain, FieldPair.source(input_intensity)))
    return Map2D(phis, psis, i_c, "I_C"), Map2D(phis, psis, i_d, "I_D")


def _one_cycle(curve: Curve) -> tuple[np.ndarray, np.ndarray]:
    xs, ys = curve.xs, curve.ys
    if curve.period is not None and abs((xs[-1] - xs[0]) - curve.period) <= _PERIOD_ATOL:
        return xs[:-1], ys[:-1]
    return xs, ys


def _unrolled(curve: Curve) -> tuple[np.ndarray, np.ndarray, int]:
    """Samples laid out so a search may walk past either end.

    Returns xs, ys and the offset of the original first sample.
    """
    xs, ys = _one_cycle(curve)
    if curve.period is None:
        return xs, ys, 0
    p = curve.period
    return np.concatenate([xs - p, xs, xs + p]), np.tile(ys, 3), xs.size


def _crossing(xs: np.ndarray, ys: np.ndarray, inside: int, outside: int, level: float) -> float:
    x0, x1, y0, y1 = xs[inside], xs[outside], ys[inside], ys[outside]
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def find_peak(curve: Curve, around: float) -> int:
    """Index into the unrolled samples of the local maximum reached from ``around``.

    Starts at the sample nearest ``around`` and climbs to the higher
    neighbour until neither neighbour is higher.
    """
    xs, ys, offset = _unrolled(curve)
    i = int(np.argmin(np.abs(xs - around)))
    while True:
        left = ys[i - 1] if i > 0 else -np.inf
        right = ys[i + 1] if i + 1 < ys.size else -np.inf
        if right > ys[i] and right >= left:
            i += 1
        elif left > ys[i]:
            i -= 1
        else:
            return i


def fwhm(curve: Curve, around: float = 0.0) -> float:
    """
    Full width at half maximum of the peak nearest ``around``.

    Half maximum is half the peak value. Each crossing is placed by linear
    interpolation between the last sample at or above it and the first
    sample below it.

    Raises
    ------
    MetrologyError
        If the peak is not positive or a crossing falls outside the curve.
    """
    xs, ys, _ = _unrolled(curve)
    peak = find_peak(curve, around)
    top = ys[peak]
    if not top > 0:
        raise MetrologyError("peak value must be positive")
    half = 0.5 * top

    right = peak + 1
    while right < ys.size and ys[right] >= half:
        right += 1
    left = peak - 1
    while left >= 0 and ys[left] >= half:
        left -= 1
    if right >= ys.size or left < 0:
        raise MetrologyError("no half-maximum crossing on both sides of the peak")
    return float(_crossing(xs, ys, right - 1, right, half) - _crossing(xs, ys, left + 1, left, half))


def visibility(curve: Curve) -> float:
    """Fringe visibility ``(max - min) / (max + min)``."""
    hi, lo = float(np.max(curve.ys)), float(np.min(curve.ys))
    if hi + lo <= 0 or hi - lo <= TIE_RTOL * abs(hi):
        raise MetrologyError("visibility is undefined for a constant or zero curve")
    return (hi - lo) / (hi + lo)


def modulation_depth(curve: Curve) -> float:
    """Relative dip ``1 - min / max``."""
    hi, lo = float(np.max(curve.ys)), float(np.min(curve.ys))
    if hi <= 0:
        raise MetrologyError("modulation depth needs a positive maximum")
    return 1.0 - lo / hi


def _plateaus(ys: np.ndarray, tol: float) -> list[float]:
    runs = [float(ys[0])]
    for y in ys[1:]:
        if abs(y - runs[-1]) > tol:
            runs.append(float(y))
    return runs


def fringe_count(curve: Curve) -> int:
    """
    Number of local maxima.

    Samples within a small relative tolerance of each other form one
    plateau, which counts once if it is strictly above both neighbouring
    plateaus. Periodic curves wrap; otherwise the end plateaus never count.
    """
    _, ys = _one_cycle(curve)
    tol = TIE_RTOL * max(float(np.max(np.abs(ys))), np.finfo(float).tiny)
    runs = _plateaus(ys, tol)
    periodic = curve.period is not None
    if periodic and len(runs) > 1 and abs(runs[0] - runs[-1]) <= tol:
        runs.pop()
    if len(runs) < 3 and not (periodic and len(runs) == 2):
        return 0
    count = 0
    for k, y in enumerate(runs):
        if periodic:
            left, right = runs[k - 1], runs[(k + 1) % len(runs)]
        elif 0 < k < len(runs) - 1:
            left, right = runs[k - 1], runs[k + 1]
        else:
            continue
        if y > left + tol and y > right + tol:
            count += 1
    return count
