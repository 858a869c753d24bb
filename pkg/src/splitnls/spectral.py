"""
Periodic grids, unitary Fourier transforms and discrete norms.

All whole-space norms are realized on a periodic box. A field's L^r norm is
the Riemann sum ``(dV * sum |f_i|^r)^(1/r)``; spectral norms use the same
cell volume so that Parseval holds exactly under the unitary (``norm="ortho"``)
transform pair.

Wavenumber layout follows ``numpy.fft.fftfreq``: per axis
``k = 2*pi*m/L`` with ``m`` in ``[-M/2, M/2)`` and the Nyquist mode at ``-M/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np
import scipy.fft as sfft

Space = Literal["physical", "spectral"]


class SpaceError(ValueError):
    """A field was passed in the wrong representation."""


def _per_axis(value, d: int, cast) -> tuple:
    if np.ndim(value) == 0:
        return (cast(value),) * d
    out = tuple(cast(v) for v in value)
    if len(out) != d:
        raise ValueError(f"expected {d} values per axis, got {len(out)}")
    return out


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-L/2, L/2)^d``.

    Parameters
    ----------
    d : int
        Dimension, 1, 2 or 3.
    box_length : float or sequence of float
        Box length per axis. A scalar is broadcast to all axes.
    points : int or sequence of int
        Number of nodes per axis; even and at least 8.
    """

    d: int
    box_length: tuple[float, ...] = field(default=(2 * np.pi,))
    points: tuple[int, ...] = field(default=(64,))

    def __init__(self, d: int, box_length=2 * np.pi, points=64):
        if d not in (1, 2, 3):
            raise ValueError(f"d must be 1, 2 or 3, got {d}")
        lengths = _per_axis(box_length, d, float)
        npts = _per_axis(points, d, int)
        for L in lengths:
            if not (L > 0 and np.isfinite(L)):
                raise ValueError(f"box_length must be positive, got {L}")
        for M in npts:
            if M < 8 or M % 2:
                raise ValueError(f"points per axis must be even and >= 8, got {M}")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "box_length", lengths)
        object.__setattr__(self, "points", npts)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.points

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(L / M for L, M in zip(self.box_length, self.points))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def volume(self) -> float:
        return float(np.prod(self.box_length))

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Per-axis wavenumber tables in FFT order."""
        return tuple(
            2 * np.pi * np.fft.fftfreq(M, d=L / M)
            for L, M in zip(self.box_length, self.points)
        )

    @cached_property
    def mode_indices(self) -> tuple[np.ndarray, ...]:
        """Per-axis integer mode indices ``m`` in FFT order."""
        return tuple(np.rint(np.fft.fftfreq(M) * M).astype(np.int64) for M in self.points)

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        """Per-axis node coordinates, ``x_j = -L/2 + j*L/M``."""
        return tuple(
            -L / 2 + np.arange(M) * (L / M) for L, M in zip(self.box_length, self.points)
        )

    @cached_property
    def coordinates(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.axes, indexing="ij"))

    @cached_property
    def k_squared(self) -> np.ndarray:
        ks = np.meshgrid(*self.wavenumbers, indexing="ij")
        out = np.zeros(self.shape)
        for k in ks:
            out += k * k
        out.setflags(write=False)
        return out

    @property
    def k_max(self) -> float:
        """Largest ``|k|`` on the grid."""
        return float(np.sqrt(self.k_squared.max()))

    def wavevector(self, axis: int) -> np.ndarray:
        """Wavenumber of ``axis`` broadcast against the grid shape."""
        shape = [1] * self.d
        shape[axis] = self.points[axis]
        return self.wavenumbers[axis].reshape(shape)


@dataclass(frozen=True, eq=False)
class Field:
    """Complex grid function tagged with its representation.

    ``values`` has shape ``grid.shape`` (row-major over axes) and is stored
    read-only.
    """

    grid: Grid
    values: np.ndarray
    space: Space = "physical"

    def __post_init__(self):
        if self.space not in ("physical", "spectral"):
            raise SpaceError(f"unknown space tag {self.space!r}")
        vals = np.array(self.values, dtype=np.complex128, order="C")
        if vals.size != self.grid.size:
            raise ValueError(
                f"field has {vals.size} values, grid has {self.grid.size} nodes"
            )
        vals = vals.reshape(self.grid.shape)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def physical(cls, grid: Grid, values) -> "Field":
        return cls(grid, values, "physical")

    @classmethod
    def spectral(cls, grid: Grid, values) -> "Field":
        return cls(grid, values, "spectral")

    @classmethod
    def zeros(cls, grid: Grid, space: Space = "physical") -> "Field":
        return cls(grid, np.zeros(grid.shape, dtype=np.complex128), space)

    def __mul__(self, other) -> "Field":
        return Field(self.grid, self.values * other, self.space)

    __rmul__ = __mul__

    def __add__(self, other: "Field") -> "Field":
        _same_space(self, other)
        return Field(self.grid, self.values + other.values, self.space)

    def __sub__(self, other: "Field") -> "Field":
        _same_space(self, other)
        return Field(self.grid, self.values - other.values, self.space)

    def __neg__(self) -> "Field":
        return Field(self.grid, -self.values, self.space)


def _same_space(a: Field, b: Field) -> None:
    if a.space != b.space:
        raise SpaceError(f"cannot combine {a.space} and {b.space} fields")
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


def fft(values: np.ndarray) -> np.ndarray:
    return sfft.fftn(values, norm="ortho")


def ifft(values: np.ndarray) -> np.ndarray:
    return sfft.ifftn(values, norm="ortho")


def forward_dft(f: Field) -> Field:
    """Unitary forward transform of a physical field."""
    if f.space != "physical":
        raise SpaceError("forward_dft expects a physical field")
    return Field(f.grid, fft(f.values), "spectral")


def inverse_dft(f: Field) -> Field:
    """Unitary inverse transform of a spectral field."""
    if f.space != "spectral":
        raise SpaceError("inverse_dft expects a spectral field")
    return Field(f.grid, ifft(f.values), "physical")


def to_physical(f: Field) -> Field:
    return f if f.space == "physical" else inverse_dft(f)


def to_spectral(f: Field) -> Field:
    return f if f.space == "spectral" else forward_dft(f)


def gradient(f: Field) -> list[Field]:
    """Spectral gradient; one physical field per axis."""
    fh = to_spectral(f).values
    return [
        Field(f.grid, ifft(1j * f.grid.wavevector(j) * fh), "physical")
        for j in range(f.grid.d)
    ]


def _lp(values: np.ndarray, r: float, cell_volume: float) -> float:
    a = np.abs(values)
    if np.isinf(r):
        return float(a.max()) if a.size else 0.0
    if r == 2:
        return float(np.sqrt(cell_volume * np.sum(a * a)))
    if r == 1:
        return float(cell_volume * a.sum())
    # scale by the max so large r does not overflow
    m = a.max()
    if m == 0:
        return 0.0
    return float(m * (cell_volume * np.sum((a / m) ** r)) ** (1.0 / r))


def lp_norm(f: Field, r: float) -> float:
    """Discrete L^r norm of a physical field, ``r`` in ``[1, inf]``."""
    if not r >= 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if f.space != "physical":
        raise SpaceError("lp_norm expects a physical field")
    return _lp(f.values, r, f.grid.cell_volume)


def spectral_l2_norm(f: Field) -> float:
    """L^2 norm computed from the coefficients (Parseval)."""
    fh = to_spectral(f).values
    return float(np.sqrt(f.grid.cell_volume * np.sum(np.abs(fh) ** 2)))


def sobolev_norm(f: Field, s: float) -> float:
    """H^s norm ``(dV * sum (1+|k|^2)^s |f_k|^2)^(1/2)``."""
    if not s >= 0:
        raise ValueError(f"s must be >= 0, got {s}")
    fh = to_spectral(f).values
    weight = (1.0 + f.grid.k_squared) ** s
    return float(np.sqrt(f.grid.cell_volume * np.sum(weight * np.abs(fh) ** 2)))


def w1r_norm(f: Field, r: float) -> float:
    """``||f||_r + sum_j ||d_j f||_r``."""
    phys = to_physical(f)
    total = lp_norm(phys, r)
    for g in gradient(phys):
        total += lp_norm(g, r)
    return total


def w1r_norm_values(values: np.ndarray, grid: Grid, r: float) -> float:
    """Array-level ``w1r_norm`` for hot loops over trajectories."""
    total = _lp(values, r, grid.cell_volume)
    fh = fft(values)
    for j in range(grid.d):
        total += _lp(ifft(1j * grid.wavevector(j) * fh), r, grid.cell_volume)
    return total


def l2_values(values: np.ndarray, grid: Grid) -> float:
    return _lp(values, 2, grid.cell_volume)


def lr_values(values: np.ndarray, grid: Grid, r: float) -> float:
    return _lp(values, r, grid.cell_volume)
