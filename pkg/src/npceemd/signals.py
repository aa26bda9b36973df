"""Signal container and the scalar statistics used across the toolkit."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

# Anything numpy's default_rng accepts as entropy; tuples let callers derive
# independent per-trial streams deterministically.
Seed = Union[int, Sequence[int], np.random.SeedSequence]


class ZeroVariance(ValueError):
    """All samples equal; kurtosis is undefined."""


class ZeroPower(ValueError):
    """Signal has zero power; SNR mixing is undefined."""


@dataclass(frozen=True, eq=False)
class Signal:
    """Uniformly sampled real-valued time series.

    Samples are coerced to a float64 array and must be finite, at least
    four long, with a strictly positive sample rate.
    """

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if samples.size < 4:
            raise ValueError(f"need at least 4 samples, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must all be finite")
        rate = float(self.sample_rate_hz)
        if not rate > 0:
            raise ValueError("sample_rate_hz must be positive")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate_hz", rate)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    @property
    def nyquist_hz(self) -> float:
        return self.sample_rate_hz / 2.0

    def times(self) -> np.ndarray:
        """Sample instants starting at t = 0."""
        return np.arange(self.samples.size) / self.sample_rate_hz


def _as_array(s: "Signal | np.ndarray | Sequence[float]") -> np.ndarray:
    if isinstance(s, Signal):
        return s.samples
    return np.asarray(s, dtype=np.float64)


def rms(s: "Signal | np.ndarray") -> float:
    """Root mean square of the samples."""
    x = _as_array(s)
    return float(np.sqrt(np.mean(x * x)))


def kurtosis(s: "Signal | np.ndarray") -> float:
    """Fourth central moment over squared variance (population, non-excess).

    Gaussian data scores about 3, impulsive data far more. Raises
    ZeroVariance for constant input, which must never win a
    kurtosis-based selection.
    """
    x = _as_array(s)
    if x.size == 0 or np.all(x == x[0]):
        raise ZeroVariance("all samples equal")
    centered = x - np.mean(x)
    m2 = float(np.mean(centered * centered))
    if m2 == 0.0:
        raise ZeroVariance("zero sample variance")
    m4 = float(np.mean(centered**4))
    return m4 / (m2 * m2)


def mix_to_snr(clean: Signal, noise_seed: Seed, snr_db: float) -> Signal:
    """Add white Gaussian noise rescaled so the realized SNR is exact.

    The drawn noise is rescaled so that 10*log10(P_clean / P_noise)
    equals ``snr_db`` on the realization itself, not just in expectation.
    Deterministic for a fixed seed.
    """
    x = clean.samples
    p_clean = float(np.mean(x * x))
    if p_clean == 0.0:
        raise ZeroPower("clean signal has zero power")
    rng = np.random.default_rng(noise_seed)
    w = rng.standard_normal(x.size)
    p_target = p_clean / 10.0 ** (snr_db / 10.0)
    w *= np.sqrt(p_target / np.mean(w * w))
    return Signal(x + w, clean.sample_rate_hz)
