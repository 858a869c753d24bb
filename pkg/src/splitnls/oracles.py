"""Initial data, closed-form solutions, fine-step references and conserved
functionals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Literal

import numpy as np

from .flows import CutoffProfile, EquationParams
from .schemes import SchemeConfig, Trajectory, iterate_scheme, run_scheme, step_count
from .spectral import (
    Field,
    Grid,
    fft,
    gradient,
    ifft,
    l2_values,
    lp_norm,
    sobolev_norm,
    to_physical,
)

DataKind = Literal["gaussian", "soliton", "plane_wave", "rough"]


class ConfigError(ValueError):
    """Inconsistent experiment inputs."""


@dataclass(frozen=True)
class InitialDataSpec:
    """Menu of test data.

    ``rough`` data has Fourier coefficients ``exp(i theta_k) (1+|k|)^(-alpha)``
    with hash-derived phases, normalized to unit H^1 norm; it lies in H^s
    exactly for ``s < alpha - d/2``.
    """

    kind: DataKind = "gaussian"
    amplitude: float = 1.0
    width: float = 1.0
    mode: tuple[int, ...] = (1,)
    decay_exponent: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("gaussian", "soliton", "plane_wave", "rough"):
            raise ConfigError(f"unknown data kind {self.kind!r}")
        if not self.width > 0:
            raise ConfigError("width must be positive")
        object.__setattr__(self, "mode", tuple(int(m) for m in np.atleast_1d(self.mode)))

    def alpha(self, d: int) -> float:
        return default_decay_exponent(d) if self.decay_exponent is None else self.decay_exponent


def default_decay_exponent(d: int, s: float = 1.0) -> float:
    """Place rough data in H^s but in no H^(s+0.1)."""
    return s + d / 2 + 0.05


_U64 = np.uint64


def _splitmix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = x + _U64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
        return z ^ (z >> _U64(31))


def mode_phases(grid: Grid, seed: int) -> np.ndarray:
    """Phase in ``[0, 2 pi)`` per Fourier mode, a pure function of
    ``(seed, integer mode index)`` so shared modes agree across grid sizes."""
    h = _splitmix64(np.full(grid.shape, seed & 0xFFFFFFFFFFFFFFFF, dtype=np.uint64))
    for axis, m in enumerate(grid.mode_indices):
        shape = [1] * grid.d
        shape[axis] = m.size
        h = _splitmix64(h ^ m.astype(np.int64).view(np.uint64).reshape(shape))
    return (h >> _U64(11)).astype(np.float64) * (2 * np.pi / 2.0**53)


def rough_coefficients(grid: Grid, alpha: float, seed: int) -> np.ndarray:
    """Unnormalized coefficient array ``exp(i theta) (1+|k|)^(-alpha)``."""
    return np.exp(1j * mode_phases(grid, seed)) * (1.0 + np.sqrt(grid.k_squared)) ** (-alpha)


def make_initial_data(
    spec: InitialDataSpec, grid: Grid, params: EquationParams | None = None
) -> Field:
    x = grid.coordinates
    A = spec.amplitude
    if spec.kind == "gaussian":
        r2 = sum(xi * xi for xi in x)
        return Field.physical(grid, A * np.exp(-r2 / spec.width**2))
    if spec.kind == "plane_wave":
        return Field.physical(grid, A * np.exp(1j * _phase(grid, spec.mode)))
    if spec.kind == "soliton":
        _check_soliton(grid, params)
        return Field.physical(grid, math.sqrt(2) / np.cosh(x[0]))
    alpha = spec.alpha(grid.d)
    if not alpha > grid.d / 2:
        raise ConfigError(f"rough data needs decay_exponent > d/2 = {grid.d / 2}")
    f = Field.spectral(grid, rough_coefficients(grid, alpha, spec.seed))
    scale = A / sobolev_norm(f, 1.0)
    return Field.physical(grid, ifft(f.values * scale))


def _check_soliton(grid: Grid, params: EquationParams | None) -> None:
    if grid.d != 1:
        raise ConfigError("soliton data is only defined for d = 1")
    if params is not None and (params.d, params.p, params.lam) != (1, 2, 1):
        raise ConfigError("soliton data requires (d, p, lambda) = (1, 2, +1)")


def _wavevector(grid: Grid, mode) -> list[float]:
    mode = tuple(mode) + (0,) * (grid.d - len(mode))
    return [2 * np.pi * m / L for m, L in zip(mode, grid.box_length)]


def _phase(grid: Grid, mode) -> np.ndarray:
    return sum(k * xi for k, xi in zip(_wavevector(grid, mode), grid.coordinates))


def plane_wave_frequency(spec: InitialDataSpec, grid: Grid, params: EquationParams) -> float:
    """``lam A^p - |k|^2`` for the constant-modulus solution."""
    k2 = sum(k * k for k in _wavevector(grid, spec.mode))
    return params.lam * abs(spec.amplitude) ** params.p - k2


def analytic_solution(
    spec: InitialDataSpec, t: float, grid: Grid, params: EquationParams
) -> Field:
    """Exact solution for plane-wave and soliton data."""
    if spec.kind == "plane_wave":
        omega = plane_wave_frequency(spec, grid, params)
        return Field.physical(
            grid, spec.amplitude * np.exp(1j * (_phase(grid, spec.mode) + omega * t))
        )
    if spec.kind == "soliton":
        _check_soliton(grid, params)
        return Field.physical(grid, math.sqrt(2) / np.cosh(grid.coordinates[0]) * np.exp(1j * t))
    raise ConfigError(f"no closed-form solution for {spec.kind!r} data")


def analytic_time_derivative(
    spec: InitialDataSpec, t: float, grid: Grid, params: EquationParams
) -> Field:
    u = analytic_solution(spec, t, grid, params)
    if spec.kind == "plane_wave":
        return u * (1j * plane_wave_frequency(spec, grid, params))
    return u * 1j


def pde_residual(u: Field, du_dt: Field, params: EquationParams) -> float:
    """L^2 norm of ``du/dt - i Lap u - i lam |u|^p u`` with spectral Lap."""
    uh = fft(u.values)
    lap = ifft(-u.grid.k_squared * uh)
    nl = params.lam * np.abs(u.values) ** params.p * u.values
    res = du_dt.values - 1j * lap - 1j * nl
    return l2_values(res, u.grid)


@dataclass(frozen=True)
class ReferenceConfig:
    """Fine-step stand-in for the exact flow, sampled every ``sample_interval``.

    ``sample_interval / tau_ref`` must be an integer.
    """

    tau_ref: float
    sample_interval: float
    scheme: str = "strang"
    profile: CutoffProfile = field(default_factory=CutoffProfile)

    def __post_init__(self):
        if not (self.tau_ref > 0 and self.sample_interval > 0):
            raise ConfigError("tau_ref and sample_interval must be positive")
        ratio = self.sample_interval / self.tau_ref
        if abs(ratio - round(ratio)) > 1e-9 * ratio or round(ratio) < 1:
            raise ConfigError(
                f"tau_ref={self.tau_ref} does not divide sample interval {self.sample_interval}"
            )

    @property
    def stride(self) -> int:
        return int(round(self.sample_interval / self.tau_ref))

    def halved(self) -> "ReferenceConfig":
        return replace(self, tau_ref=self.tau_ref / 2)


def _reference_scheme(T: float, ref: ReferenceConfig, params: EquationParams) -> SchemeConfig:
    n_samples = step_count(T, ref.sample_interval)
    # horizon covers exactly n_samples * stride fine steps
    horizon = n_samples * ref.stride * ref.tau_ref * (1 + 1e-9)
    return SchemeConfig(
        params=params,
        scheme=ref.scheme,
        tau=ref.tau_ref,
        horizon_T=horizon,
        profile=ref.profile,
        record_every=ref.stride,
    )


def iterate_reference(
    phi: Field, T: float, ref: ReferenceConfig, params: EquationParams
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(n, u(n * sample_interval))`` from the fine-step run."""
    cfg = _reference_scheme(T, ref, params)
    stride = ref.stride
    for m, v in iterate_scheme(phi, cfg):
        if m % stride == 0:
            yield m // stride, v


def reference_solve(
    phi: Field, T: float, ref: ReferenceConfig, params: EquationParams
) -> Trajectory:
    return run_scheme(phi, _reference_scheme(T, ref, params))


def reference_uncertainty(
    phi: Field, T: float, ref: ReferenceConfig, params: EquationParams
) -> float:
    """Max-over-samples L^2 change when ``tau_ref`` is halved."""
    worst = 0.0
    pairs = zip(
        iterate_reference(phi, T, ref, params),
        iterate_reference(phi, T, ref.halved(), params),
    )
    for (_, a), (_, b) in pairs:
        worst = max(worst, l2_values(a - b, phi.grid))
    return worst


def mass(f: Field) -> float:
    """Squared L^2 norm."""
    return l2_values(f.values, f.grid) ** 2


def energy(f: Field, params: EquationParams) -> float:
    """``1/2 ||grad u||^2 - lam/(p+2) ||u||_{p+2}^{p+2}``."""
    kinetic = sum(lp_norm(g, 2) ** 2 for g in gradient(f))
    r = params.p + 2
    with np.errstate(over="ignore"):
        potential = float(np.float64(lp_norm(to_physical(f), r)) ** r)
    return 0.5 * kinetic - params.lam / r * potential
