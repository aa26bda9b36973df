"""White and fractional Gaussian noise with verifiable autocovariance."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .signals import Seed

# Circulant embedding allocates complex arrays of twice the requested
# length; this cap keeps a single generation under ~0.5 GB.
MAX_FGN_LENGTH = 1 << 23


class LengthTooLarge(ValueError):
    """Requested length exceeds the circulant-embedding memory cap."""


@dataclass(frozen=True)
class FgnParams:
    """Parameters of one fractional Gaussian noise realization."""

    hurst: float
    sigma: float
    length: int
    seed: Seed

    def __post_init__(self) -> None:
        if not 0.0 < self.hurst < 1.0:
            raise ValueError("hurst must lie strictly inside (0, 1)")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if self.length < 1:
            raise ValueError("length must be positive")


def fgn_autocovariance(hurst: float, sigma: float, lag: int) -> float:
    """Closed-form autocovariance of fGn at an integer lag.

    (sigma^2 / 2) * (|k-1|^(2H) - 2|k|^(2H) + |k+1|^(2H)); equals sigma^2
    at lag 0 and vanishes for positive lags when H = 0.5.
    """
    if not 0.0 < hurst < 1.0:
        raise ValueError("hurst must lie strictly inside (0, 1)")
    k = abs(int(lag))
    h2 = 2.0 * hurst
    return 0.5 * sigma * sigma * (abs(k - 1) ** h2 - 2.0 * k**h2 + (k + 1) ** h2)


def generate_white(sigma: float, length: int, seed: Seed) -> np.ndarray:
    """I.i.d. Gaussian(0, sigma^2) samples, deterministic for a fixed seed."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if length < 1:
        raise ValueError("length must be positive")
    rng = np.random.default_rng(seed)
    return sigma * rng.standard_normal(length)


def generate_fgn(p: FgnParams) -> np.ndarray:
    """Fractional Gaussian noise via circulant embedding of the covariance.

    The first row of the 2N-circulant holds the target autocovariance, so
    the synthesized sequence has exactly that covariance (not an
    approximation). The unit-variance draw is scaled by ``sigma`` at the
    end, which makes output exactly linear in ``sigma`` for a fixed seed.

    Spectral eigenvalues that go slightly negative from float round-off
    are clamped to zero; a warning is emitted if the clamped magnitude is
    more than 1e-8 of the largest eigenvalue.
    """
    n = p.length
    if n > MAX_FGN_LENGTH:
        raise LengthTooLarge(f"length {n} exceeds cap {MAX_FGN_LENGTH}")
    m = 2 * n
    k = np.arange(n + 1, dtype=np.float64)
    h2 = 2.0 * p.hurst
    gamma = 0.5 * (np.abs(k - 1.0) ** h2 - 2.0 * k**h2 + (k + 1.0) ** h2)
    row = np.concatenate((gamma, gamma[-2:0:-1]))
    lam = np.fft.fft(row).real
    negative = lam < 0.0
    if np.any(negative):
        worst = float(-lam[negative].min())
        if worst > 1e-8 * float(lam.max()):
            warnings.warn(
                f"clamped embedding eigenvalue of magnitude {worst:.3e}",
                RuntimeWarning,
            )
        lam = np.where(negative, 0.0, lam)
    rng = np.random.default_rng(p.seed)
    z = np.empty(m, dtype=np.complex128)
    z[0] = rng.standard_normal()
    z[n] = rng.standard_normal()
    if n > 1:
        ab = rng.standard_normal((n - 1, 2))
        z[1:n] = (ab[:, 0] + 1j * ab[:, 1]) / np.sqrt(2.0)
        z[n + 1 :] = np.conj(z[1:n][::-1])
    x = np.sqrt(m) * np.fft.ifft(np.sqrt(lam) * z).real[:n]
    return p.sigma * x
