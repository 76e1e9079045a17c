"""Spectral solution of beta dphi/dt + (1 - cosh(a dx))/a^2 phi = 0 on a periodic lattice.

With beta = -i m / hbar each Fourier mode turns with frequency
omega_a(k) = (hbar/m) (1 - cos ka) / a^2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np


class ModeOutOfBand(ValueError):
    pass


class Unresolvable(ValueError):
    pass


@dataclass(frozen=True)
class LatticeParams:
    a: float = 0.1
    sites: int = 256
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError(f"lattice spacing must be positive, got {self.a}")
        if self.sites < 4:
            raise ValueError(f"need at least 4 sites, got {self.sites}")
        if self.mass <= 0 or self.hbar <= 0:
            raise ValueError("mass and hbar must be positive")

    @property
    def length(self) -> float:
        return self.sites * self.a

    @property
    def beta(self) -> complex:
        """-i m / hbar, the unitary choice."""
        return -1j * self.mass / self.hbar

    def positions(self) -> np.ndarray:
        return self.a * np.arange(self.sites)

    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi * np.fft.fftfreq(self.sites, d=self.a)


@dataclass(frozen=True)
class LatticeState:
    amplitudes: np.ndarray
    params: LatticeParams
    beta: complex | None = field(default=None)

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.params.sites,):
            raise ValueError(f"expected {self.params.sites} amplitudes, got shape {amp.shape}")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite")
        amp = amp.copy()
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def effective_beta(self) -> complex:
        return self.params.beta if self.beta is None else self.beta

    def norm(self) -> float:
        return discrete_norm(self.amplitudes, self.params.a)


def discrete_inner(phi: np.ndarray, psi: np.ndarray, a: float) -> complex:
    return complex(a * np.vdot(phi, psi))


def discrete_norm(phi: np.ndarray, a: float) -> float:
    return math.sqrt(a * float(np.sum(np.abs(phi) ** 2)))


def spatial_symbol(k, a: float):
    """(1 - cos ka) / a^2, the Fourier symbol of the spatial Casimir term."""
    return (1 - np.cos(np.asarray(k) * a)) / (a * a)


def omega(k: float, a: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    """Frequency of wavenumber k; computed as 2 sin^2(ka/2)/a^2 to avoid cancellation."""
    s = math.sin(k * a / 2)
    return hbar / mass * 2 * s * s / (a * a)


def omega_continuum(k: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    return hbar * k * k / (2 * mass)


def dispersion(n: int, p: LatticeParams) -> float:
    if abs(n) > p.sites / 2:
        raise ModeOutOfBand(f"mode {n} outside |n| <= {p.sites / 2}")
    return omega(2 * math.pi * n / p.length, p.a, p.mass, p.hbar)


def evolve(s: LatticeState, t: float) -> LatticeState:
    """Multiply each Fourier mode by exp(-(1 - cos ka) t / (a^2 beta))."""
    if t == 0:
        return s
    p = s.params
    k = p.wavenumbers()
    rate = spatial_symbol(k, p.a) / s.effective_beta
    modes = np.fft.fft(s.amplitudes)
    return replace(s, amplitudes=np.fft.ifft(modes * np.exp(-rate * t)))


def check_unitarity(s: LatticeState, t: float) -> float:
    """|norm(evolve(s, t)) - norm(s)|."""
    return abs(evolve(s, t).norm() - s.norm())


def plane_wave(p: LatticeParams, n: int, beta: complex | None = None) -> LatticeState:
    k = 2 * math.pi * n / p.length
    return LatticeState(np.exp(1j * k * p.positions()), p, beta)


def gaussian_packet(p: LatticeParams, width: float | None = None, k0: float = 0.0,
                    beta: complex | None = None) -> LatticeState:
    x = p.positions()
    centre = p.length / 2
    width = width if width is not None else p.length / 10
    amp = np.exp(-((x - centre) ** 2) / (2 * width * width) + 1j * k0 * x)
    return LatticeState(amp, p, beta)


def shift_matrix(sites: int, step: int) -> np.ndarray:
    """(S phi)_j = phi_{j+step} with periodic wrap."""
    return np.roll(np.eye(sites), step, axis=1)


def check_discrete_adjointness(p: LatticeParams, seed: int = 0) -> dict[str, float]:
    """Residuals of: (S+ - S-) skew-adjoint, (S+ + S-) symmetric, under a*sum conj(phi) psi."""
    rng = np.random.default_rng(seed)
    n = p.sites
    phi = rng.normal(size=n) + 1j * rng.normal(size=n)
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    sp, sm = shift_matrix(n, 1), shift_matrix(n, -1)
    sinh_op = (sp - sm) / (2 * p.a)
    cosh_op = (sp + sm) / 2
    scale = discrete_norm(phi, p.a) * discrete_norm(psi, p.a)
    skew = discrete_inner(phi, sinh_op @ psi, p.a) + discrete_inner(sinh_op @ phi, psi, p.a)
    sym = discrete_inner(phi, cosh_op @ psi, p.a) - discrete_inner(cosh_op @ phi, psi, p.a)
    return {"sinh_skew": abs(skew) / (scale / p.a), "cosh_symmetric": abs(sym) / scale}


def kernel_omega(p: LatticeParams, n: int) -> float:
    """Frequency read off by applying (2 phi_j - phi_{j+1} - phi_{j-1}) / (2 a^2) to a plane wave.

    That kernel is (1 - cos ka)/a^2 times phi, so hbar/m times the ratio is omega.
    """
    phi = plane_wave(p, n).amplitudes
    lap = (2 * phi - np.roll(phi, -1) - np.roll(phi, 1)) / (2 * p.a * p.a)
    ratio = lap / phi
    return float(np.mean(ratio.real)) * p.hbar / p.mass


@dataclass(frozen=True)
class StudyRow:
    a: float
    omega_a: float
    omega_0: float
    abs_err: float
    ratio: float | None


def dispersion_study(spacings: Sequence[float], k: float = 1.0, template: LatticeParams | None = None) -> list[StudyRow]:
    template = template or LatticeParams()
    rows: list[StudyRow] = []
    prev = None
    for a in spacings:
        p = replace(template, a=float(a))
        if abs(k) * p.a > math.pi:
            raise Unresolvable(f"k={k} is beyond the band edge for a={a}")
        w = omega(k, p.a, p.mass, p.hbar)
        w0 = omega_continuum(k, p.mass, p.hbar)
        err = abs(w - w0)
        ratio = (prev / err) if (prev is not None and err > 0) else None
        rows.append(StudyRow(p.a, w, w0, err, ratio))
        prev = err
    return rows


def taylor_error(k: float, a: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    return hbar / mass * a * a * k ** 4 / 24


def study_csv(rows: Sequence[StudyRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "omega_a", "omega_0", "abs_err", "ratio"])
    for r in rows:
        w.writerow([_g(r.a), _g(r.omega_a), _g(r.omega_0), _g(r.abs_err), "" if r.ratio is None else _g(r.ratio)])
    return buf.getvalue()


def _g(x: float) -> str:
    return f"{x:.10g}"
