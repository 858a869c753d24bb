"""Elementary flows of the split NLS: nonlinear phase rotation, free
Schrödinger propagation and the frequency cutoff projector."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .spectral import Field, Grid, SpaceError, to_physical, to_spectral


class CutoffWarning(UserWarning):
    """The projector's transition band is not resolved by the grid."""


def critical_exponent(d: int) -> float:
    """Upper end ``p_d`` of the energy-subcritical range."""
    return 4.0 if d == 3 else math.inf


@dataclass(frozen=True)
class EquationParams:
    """``du/dt = i Lap u + i lam |u|^p u`` in dimension ``d``."""

    d: int = 1
    p: float = 2.0
    lam: int = 1

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ValueError(f"d must be 1, 2 or 3, got {self.d}")
        if not self.p > 0:
            raise ValueError(f"p must be positive, got {self.p}")
        pd = critical_exponent(self.d)
        if not self.p < pd:
            raise ValueError(f"p must satisfy p < {pd:g} when d = {self.d}")
        if self.lam not in (-1, 1):
            raise ValueError(f"lambda must be -1 or +1, got {self.lam}")


def _bump(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t, dtype=float)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


@dataclass(frozen=True)
class CutoffProfile:
    """Radial cutoff ``chi`` with ``chi = 1`` on ``|xi| <= 1`` and ``chi = 0``
    on ``|xi| >= 2``.

    ``"sharp"`` is the indicator of the closed unit ball. ``"smooth"`` is the
    C-infinity ratio ``g(2-r) / (g(2-r) + g(r-1))`` with ``g(t) = exp(-1/t)``.
    """

    kind: Literal["smooth", "sharp"] = "smooth"

    def __post_init__(self):
        if self.kind not in ("smooth", "sharp"):
            raise ValueError(f"cutoff kind must be 'smooth' or 'sharp', got {self.kind!r}")

    def radial(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if self.kind == "sharp":
            return (r <= 1.0).astype(float)
        a = _bump(2.0 - r)
        b = _bump(r - 1.0)
        return a / (a + b)


def cutoff_eval(profile: CutoffProfile, xi) -> float:
    """Evaluate ``chi(xi)`` at one point of R^d."""
    return float(profile.radial(np.linalg.norm(np.atleast_1d(np.asarray(xi, dtype=float)))))


def cutoff_multiplier(grid: Grid, tau: float, profile: CutoffProfile) -> np.ndarray:
    """Array of ``chi(sqrt(tau) * k)`` over the grid's wavenumbers."""
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    return profile.radial(np.sqrt(tau * grid.k_squared))


def cutoff_resolved(grid: Grid, tau: float) -> bool:
    """True when the grid reaches ``|k| >= 2 / sqrt(tau)``."""
    return grid.k_max >= 2.0 / math.sqrt(tau)


def nonlinear_flow(f: Field, t: float, params: EquationParams) -> Field:
    """``v -> exp(i t lam |v|^p) v`` pointwise."""
    if f.space != "physical":
        raise SpaceError("nonlinear_flow expects a physical field")
    return Field(f.grid, apply_nonlinear(f.values, t, params), "physical")


def cis(theta: np.ndarray) -> np.ndarray:
    """``exp(i theta)`` for real ``theta``."""
    out = np.empty(np.shape(theta), dtype=np.complex128)
    out.real = np.cos(theta)
    out.imag = np.sin(theta)
    return out


def modulus_power(v: np.ndarray, p: float) -> np.ndarray:
    """``|v|^p``; zero stays zero for every ``p > 0``."""
    a2 = v.real * v.real + v.imag * v.imag
    return a2 if p == 2 else a2 ** (0.5 * p)


def apply_nonlinear(v: np.ndarray, t: float, params: EquationParams) -> np.ndarray:
    return v * cis((t * params.lam) * modulus_power(v, params.p))


def linear_flow(f: Field, t: float) -> Field:
    """Free Schrödinger flow, multiplier ``exp(-i t |k|^2)``.

    Returns a field in the same representation as ``f``.
    """
    mult = np.exp(-1j * t * f.grid.k_squared)
    fh = to_spectral(f)
    out = Field(f.grid, fh.values * mult, "spectral")
    return out if f.space == "spectral" else to_physical(out)


def projector(f: Field, tau: float, profile: CutoffProfile) -> Field:
    """Frequency cutoff ``chi(sqrt(tau) k)``; same representation as ``f``."""
    mult = cutoff_multiplier(f.grid, tau, profile)
    if not cutoff_resolved(f.grid, tau):
        warnings.warn(
            f"grid k_max={f.grid.k_max:.4g} < 2/sqrt(tau)={2 / math.sqrt(tau):.4g}; "
            "cutoff transition not fully on the grid",
            CutoffWarning,
            stacklevel=2,
        )
    fh = to_spectral(f)
    out = Field(f.grid, fh.values * mult, "spectral")
    return out if f.space == "spectral" else to_physical(out)


def localized_flow(f: Field, t: float, tau: float, profile: CutoffProfile) -> Field:
    """``S(t)`` after the cutoff projector."""
    return linear_flow(projector(f, tau, profile), t)


def nonlinear_increment(v: np.ndarray, tau: float, params: EquationParams) -> np.ndarray:
    """``(N(tau) - I) v / tau``, computed without cancellation."""
    theta = tau * params.lam * modulus_power(v, params.p)
    # exp(i th) - 1 = 2i sin(th/2) exp(i th/2)
    return v * (2j * np.sin(theta / 2) * cis(0.5 * theta)) / tau

