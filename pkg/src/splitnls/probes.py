"""Randomized checks of the pointwise and multiplier inequalities behind the
stability analysis.

Each probe returns a :class:`ProbeResult` counting violations of
``lhs <= const * rhs``. Comparisons allow ``rtol`` relative slack for
floating-point rounding only; the bounds themselves are not loosened.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.fft as sfft

from .flows import CutoffProfile, cutoff_multiplier
from .spectral import Grid, fft, ifft, l2_values

# roughly six roundings per side, both directions
RTOL = 16 * np.finfo(float).eps


@dataclass
class ProbeResult:
    name: str
    samples: int
    violations: int
    worst_ratio: float

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _count(name: str, lhs: np.ndarray, rhs: np.ndarray, rtol: float = RTOL) -> ProbeResult:
    lhs = np.asarray(lhs, dtype=float).ravel()
    rhs = np.asarray(rhs, dtype=float).ravel()
    bad = lhs > rhs * (1 + rtol)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0, lhs / rhs, np.where(lhs > 0, np.inf, 0.0))
    return ProbeResult(name, lhs.size, int(bad.sum()), float(ratio.max(initial=0.0)))


def _random_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    mag = 10.0 ** rng.uniform(-3, 1, n)
    return mag * np.exp(2j * np.pi * rng.uniform(size=n))


def _increment(v: np.ndarray, tau: np.ndarray, p: np.ndarray, lam: np.ndarray) -> np.ndarray:
    theta = tau * lam * np.abs(v) ** p
    return v * (2j * np.sin(theta / 2) * np.exp(0.5j * theta)) / tau


def _draw(rng, n, ps):
    tau = 10.0 ** rng.uniform(-4, 0, n)
    p = rng.choice(np.asarray(ps, dtype=float), n)
    lam = rng.choice([-1.0, 1.0], n)
    return tau, p, lam


def increment_bound_probe(
    n: int = 10**6, seed: int = 0, ps: Sequence[float] = (0.5, 1, 2, 3, 4, 6)
) -> ProbeResult:
    """``|(N(tau) - I) v / tau| <= |v|^(p+1)``."""
    rng = np.random.default_rng(seed)
    v = _random_complex(rng, n)
    tau, p, lam = _draw(rng, n, ps)
    lhs = np.abs(_increment(v, tau, p, lam))
    return _count("increment", lhs, np.abs(v) ** (p + 1))


def lipschitz_bound_probe(
    n: int = 10**6, seed: int = 1, ps: Sequence[float] = (0.5, 1, 2, 3, 4, 6)
) -> ProbeResult:
    """``|F(v) - F(w)| <= (p+1) |v-w| (|v|^p + |w|^p)`` for
    ``F = (N(tau) - I)/tau``."""
    rng = np.random.default_rng(seed)
    v = _random_complex(rng, n)
    # half the pairs are close together, where the bound is tightest
    near = rng.uniform(size=n) < 0.5
    w = np.where(near, v + _random_complex(rng, n) * 1e-3, _random_complex(rng, n))
    tau, p, lam = _draw(rng, n, ps)
    lhs = np.abs(_increment(v, tau, p, lam) - _increment(w, tau, p, lam))
    rhs = (p + 1) * np.abs(v - w) * (np.abs(v) ** p + np.abs(w) ** p)
    return _count("lipschitz", lhs, rhs)


def gradient_bound_probe(
    grid: Grid | None = None,
    taus: Sequence[float] = (1e-3, 1e-2, 1e-1, 1.0),
    ps: Sequence[float] = (1, 1.5, 2, 3, 4),
) -> ProbeResult:
    """``|d/dx F(f)| <= (p+1) |f|^p |f'|`` on ``f = exp(-x^2)`` with the
    exact derivative of the composition."""
    grid = grid or Grid(1, 20.0, 4096)
    x = grid.axes[0]
    f = np.exp(-x * x)
    df = -2 * x * f
    lhs, rhs = [], []
    for tau in taus:
        for p in ps:
            for lam in (-1, 1):
                phase = np.exp(1j * tau * lam * f**p)
                d_comp = ((phase - 1) / tau + 1j * lam * p * f**p * phase) * df
                lhs.append(np.abs(d_comp))
                rhs.append((p + 1) * f**p * np.abs(df))
    return _count("gradient", np.concatenate(lhs), np.concatenate(rhs))


def random_fields(grid: Grid, count: int, seed: int = 0, decay: float = 1.0) -> np.ndarray:
    """``count`` random physical fields with coefficient envelope
    ``(1+|k|)^-decay``, stacked on the first axis."""
    rng = np.random.default_rng(seed)
    env = (1.0 + np.sqrt(grid.k_squared)) ** (-decay)
    coef = (rng.standard_normal((count, *grid.shape)) + 1j * rng.standard_normal((count, *grid.shape)))
    axes = tuple(range(1, grid.d + 1))
    return sfft.ifftn(coef * env, axes=axes, norm="ortho")


def _grad_l2(values: np.ndarray, grid: Grid) -> float:
    vh = fft(values)
    return float(np.sqrt(grid.cell_volume * np.sum(grid.k_squared * np.abs(vh) ** 2)))


def projection_error_probe(
    grid: Grid | None = None,
    taus: Sequence[float] = (1e-3, 3e-3, 1e-2, 3e-2, 1e-1),
    count: int = 100,
    seed: int = 0,
) -> ProbeResult:
    """Sharp cutoff: ``||Pi_tau f - f||_2 <= tau^(1/2) ||grad f||_2``."""
    grid = grid or Grid(1, 2 * np.pi * 8, 1024)
    profile = CutoffProfile("sharp")
    lhs, rhs = [], []
    for f in random_fields(grid, count, seed):
        fh = fft(f)
        g = _grad_l2(f, grid)
        for tau in taus:
            chi = cutoff_multiplier(grid, tau, profile)
            lhs.append(l2_values(ifft(fh * (chi - 1)), grid))
            rhs.append(np.sqrt(tau) * g)
    return _count("projection_error", np.array(lhs), np.array(rhs))


def projector_gradient_probe(
    grid: Grid | None = None,
    taus: Sequence[float] = (1e-3, 3e-3, 1e-2, 3e-2, 1e-1),
    count: int = 100,
    seed: int = 1,
) -> ProbeResult:
    """Sharp cutoff: ``||grad Pi_tau f||_2 <= tau^(-1/2) ||f||_2``."""
    grid = grid or Grid(1, 2 * np.pi * 8, 1024)
    profile = CutoffProfile("sharp")
    lhs, rhs = [], []
    for f in random_fields(grid, count, seed, decay=0.0):
        fh = fft(f)
        for tau in taus:
            chi = cutoff_multiplier(grid, tau, profile)
            lhs.append(_grad_l2(ifft(fh * chi), grid))
            rhs.append(l2_values(f, grid) / np.sqrt(tau))
    return _count("projector_gradient", np.array(lhs), np.array(rhs))

