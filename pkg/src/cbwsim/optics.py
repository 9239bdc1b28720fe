"""
Complex 2x2 transfer matrices for coupled Mach-Zehnder interferometers.

Matrices are numpy ``complex128`` arrays of shape ``(..., 2, 2)``. Every
builder broadcasts over array-valued phases, so a whole phase sweep is one
stack of matrices. Products are written in application order: the
rightmost factor acts first on the input column ``[E_upper, E_lower]``.

An ACD block (asymmetrically coupled double MZI) is::

    [-M][Psi][M],  [M] = [BS][phi][BS],  [-M] = [BS][-phi][BS]

with ``[BS] = (1/sqrt 2) [[1, i], [i, 1]]``, ``[phi] = diag(1, e^{i phi})``
and ``[Psi] = diag(1, e^{i psi})``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

Matrix2 = np.ndarray

_BS = np.array([[1.0, 1.0j], [1.0j, 1.0]], dtype=np.complex128) / np.sqrt(2.0)
_EYE = np.eye(2, dtype=np.complex128)


class Coupling(enum.Enum):
    """Sign relation between the two MZIs of an ACD block."""

    ASYMMETRIC = "asym"
    SYMMETRIC = "sym"


@dataclass(frozen=True, eq=False)
class BlockParams:
    """Settings of one ACD block.

    ``phi`` and ``psi`` may be scalars or broadcast-compatible arrays.
    Asymmetric coupling puts ``-phi`` in the second MZI, symmetric ``+phi``.
    """

    phi: float | np.ndarray
    psi: float | np.ndarray = 0.0
    coupling: Coupling = Coupling.ASYMMETRIC


@dataclass(frozen=True, eq=False)
class FieldPair:
    """Field amplitudes in the upper and lower arm, plus the source intensity."""

    upper: complex | np.ndarray
    lower: complex | np.ndarray
    input_intensity: float = 1.0

    @classmethod
    def source(cls, input_intensity: float = 1.0) -> "FieldPair":
        """Input column ``[E0, 0]`` with ``|E0|^2 = input_intensity``."""
        if not np.isfinite(input_intensity) or input_intensity < 0:
            raise ValueError(f"input intensity must be finite and >= 0, got {input_intensity!r}")
        return cls(complex(np.sqrt(input_intensity)), 0j, float(input_intensity))


def _finite(name: str, value: ArrayLike) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def _check_count(n: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"block count must be an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise ValueError(f"block count must be >= 1, got {n}")
    return n


def bs_matrix() -> Matrix2:
    """Lossless 50:50 beam splitter ``(1/sqrt 2) [[1, i], [i, 1]]``."""
    return _BS.copy()


def phase_matrix(phi: ArrayLike) -> Matrix2:
    """Phase plate ``diag(1, e^{i phi})`` acting on the lower arm.

    Parameters
    ----------
    phi : float or array_like
        Phase in radians. An array gives a stack of matrices with shape
        ``phi.shape + (2, 2)``.

    Raises
    ------
    ValueError
        If any phase is NaN or infinite.
    """
    phi = _finite("phi", phi)
    out = np.zeros(phi.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = np.exp(1j * phi)
    return out


def mzi_matrix(phi: ArrayLike) -> Matrix2:
    """Single MZI, ``[BS][phi][BS]``."""
    return _BS @ phase_matrix(phi) @ _BS


def acd_block(params: BlockParams) -> Matrix2:
    """
    Transfer matrix of one ACD block, ``[+-M][Psi][M]``.

    At ``psi = 0`` with asymmetric coupling this is ``-R(phi)`` where
    ``R(phi) = [[cos phi, sin phi], [-sin phi, cos phi]]``. At ``psi = pi``
    it is ``diag(1, -1)``, which returns the input column ``[E0, 0]``
    unchanged.
    """
    phi = _finite("phi", params.phi)
    psi = _finite("psi", params.psi)
    second_phi = -phi if params.coupling is Coupling.ASYMMETRIC else phi
    return mzi_matrix(second_phi) @ phase_matrix(psi) @ mzi_matrix(phi)


def chain_product(params: BlockParams, n: int) -> Matrix2:
    """Literal n-fold product of identical ACD blocks.

    Kept as plain repeated multiplication; it serves as the brute-force
    reference for :func:`chain_closed_form`.
    """
    n = _check_count(n)
    block = acd_block(params)
    out = block
    for _ in range(n - 1):
        out = block @ out
    return out


def rotation_matrix(angle: ArrayLike) -> Matrix2:
    """Real rotation ``[[cos a, sin a], [-sin a, cos a]]`` as a complex matrix."""
    angle = _finite("angle", angle)
    c, s = np.cos(angle), np.sin(angle)
    out = np.empty(angle.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    out[..., 1, 1] = c
    return out


def chain_closed_form(phi: ArrayLike, n: int) -> Matrix2:
    """
    Closed form of ``n`` asymmetric ACD blocks at ``psi = 0``.

    Returns ``(-1)^n R(n phi)``. The global sign is kept on purpose; the
    cavity sum depends on it.
    """
    n = _check_count(n)
    phi = _finite("phi", phi)
    sign = -1.0 if n % 2 else 1.0
    return sign * rotation_matrix(n * phi)


def apply(matrix: Matrix2, fields: FieldPair) -> FieldPair:
    """Matrix-vector product on ``[upper, lower]``; broadcasts over stacks."""
    m = np.asarray(matrix)
    upper = m[..., 0, 0] * fields.upper + m[..., 0, 1] * fields.lower
    lower = m[..., 1, 0] * fields.upper + m[..., 1, 1] * fields.lower
    return FieldPair(upper, lower, fields.input_intensity)


def intensities(fields: FieldPair) -> tuple[np.ndarray, np.ndarray]:
    """Port intensities ``(|upper|^2, |lower|^2)``."""
    return np.abs(fields.upper) ** 2, np.abs(fields.lower) ** 2


def unitarity_error(matrix: Matrix2) -> float:
    """Largest elementwise deviation of ``M^dagger M`` from the identity."""
    m = np.asarray(matrix)
    gram = np.conj(np.swapaxes(m, -1, -2)) @ m
    return float(np.max(np.abs(gram - _EYE)))
