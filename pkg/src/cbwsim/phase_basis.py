"""Binary phase-basis combinatorics for q coupled MZIs.

Each MZI contributes the two-element basis ``{0, phi}``. The tensor product
over q factors has 2**q terms; a term's order is the number of ``phi``
branches it picks, so the order histogram is row q of Pascal's triangle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

MAX_EXPAND_Q = 30
MAX_HISTOGRAM_Q = 62


class BasisTerm(NamedTuple):
    index: int
    choices: tuple[int, ...]  # 0 -> basis "0", 1 -> basis "phi", one entry per MZI
    order: int


@dataclass(frozen=True)
class OrderHistogram:
    q: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def as_csv_row(self) -> str:
        return ",".join(str(c) for c in self.counts)


def _check_q(q: int, upper: int) -> int:
    if isinstance(q, bool) or int(q) != q:
        raise ValueError(f"q must be an integer, got {q!r}")
    q = int(q)
    if not 1 <= q <= upper:
        raise ValueError(f"q must lie in 1..{upper}, got {q}")
    return q


def tensor_expand(q: int) -> np.ndarray:
    """
    Orders of all 2**q terms of ``{0, phi}`` tensored q times.

    The product is built factor by factor as a Kronecker sum of exponents,
    so the result is in lexicographic order of the choice word with the
    first MZI most significant: ``tensor_expand(2) -> [0, 1, 1, 2]``.

    Returns
    -------
    numpy.ndarray
        ``uint8`` array of length ``2**q``.

    Raises
    ------
    ValueError
        If q is outside ``1..30``.
    """
    q = _check_q(q, MAX_EXPAND_Q)
    factor = np.array([0, 1], dtype=np.uint8)
    orders = factor
    for _ in range(q - 1):
        orders = (orders[:, None] + factor[None, :]).ravel()
    return orders


def iter_basis_terms(q: int) -> Iterator[BasisTerm]:
    """Lazily enumerate the tensor-product terms with their choice words."""
    q = _check_q(q, MAX_EXPAND_Q)
    for index, choices in enumerate(itertools.product((0, 1), repeat=q)):
        yield BasisTerm(index, choices, sum(choices))


def order_histogram(q: int) -> OrderHistogram:
    """Multiplicity of each phase order ``phi^j``, j = 0..q (exact integers)."""
    q = _check_q(q, MAX_HISTOGRAM_Q)
    return OrderHistogram(q, tuple(math.comb(q, j) for j in range(q + 1)))


def tally_orders(orders: np.ndarray, q: int) -> tuple[int, ...]:
    """Histogram of an explicit order array; cross-check for :func:`order_histogram`."""
    return tuple(int(c) for c in np.bincount(orders, minlength=q + 1))


def _check_length(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite length, got {value!r}")
    return value


def cbw_wavelength(lambda0: float, q: int) -> float:
    """Effective wavelength ``lambda0 / (2 q)`` of the q-fold coherence fringe."""
    lambda0 = _check_length("lambda0", lambda0)
    q = _check_q(q, math.inf)
    return lambda0 / (2 * q)


def pbw_wavelength(lambda0: float, photons: int) -> float:
    """Entangled N-photon comparison wavelength ``lambda0 / (4 N)``."""
    lambda0 = _check_length("lambda0", lambda0)
    photons = _check_q(photons, math.inf)
    return lambda0 / (4 * photons)


def fringe_extrema(q: int) -> np.ndarray:
    """Peak positions ``(pi / q) m``, m = 0..2q-1, of ``cos^2(q phi)`` on [0, 2 pi)."""
    q = _check_q(q, math.inf)
    return (np.pi / q) * np.arange(2 * q)
