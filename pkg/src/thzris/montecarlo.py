"""Ground-truth simulator for the SNR law, independent of the Gamma fit.

Fading magnitudes are sampled as magnitudes of unit-variance circularly
symmetric complex Gaussians (Rayleigh with unit mean square, matching the
cascade-moment normalization); misalignment values come from the inverse
CDF applied to uniforms.  Noise enters only through the deterministic
rho_s scale: the simulator draws exact SNR realizations, not noisy
received signals.

Reproducibility: batch ``i`` uses a counter-based Philox stream jumped to
substream ``i`` of the configured seed, and batch results are reduced in
batch order, so estimates depend only on (model, config) and never on how
many workers executed the batches.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .capacity import LinkModel, _snr_coefficient
from .channel import MisalignmentParams
from .errors import DomainError

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class McConfig:
    """Trial count, base seed and trials-per-batch reduction block."""

    trials: int = 1_000_000
    seed: int = 20260810
    batch: int = 16_384

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials!r}")
        if self.batch < 1:
            raise DomainError(f"batch must be >= 1, got {self.batch!r}")
        if not (0 <= self.seed < 2**64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


@dataclass(frozen=True)
class McEstimate:
    """Sample mean with its standard error over ``n`` trials."""

    mean: float
    std_error: float
    n: int

    def __post_init__(self):
        if self.std_error < 0.0:
            raise DomainError(f"std_error must be >= 0, got {self.std_error!r}")


def batch_rng(seed: int, batch_index: int) -> np.random.Generator:
    """Independent substream for one batch, derived from (seed, index)."""
    return np.random.Generator(np.random.Philox(key=seed).jumped(batch_index))


def _chi_batch(num_elements: int, rng: np.random.Generator, n: int) -> np.ndarray:
    """n samples of chi = (sum_m |f_m||g_m|)^2."""
    z = rng.standard_normal((4, n, num_elements))
    f = np.sqrt(0.5 * (z[0] * z[0] + z[1] * z[1]))
    g = np.sqrt(0.5 * (z[2] * z[2] + z[3] * z[3]))
    s = np.sum(f * g, axis=1)
    return s * s


def _misalignment_batch(p: MisalignmentParams, rng: np.random.Generator, n: int) -> np.ndarray:
    """n misalignment samples via the inverse CDF of uniforms."""
    return p.phi * rng.random(n) ** (1.0 / p.zeta)


def _snr_batch(model: LinkModel, rng: np.random.Generator, n: int) -> np.ndarray:
    """n SNR samples; draw order is fixed (fading first, then misalignment)."""
    chi = _chi_batch(model.ris.num_elements, rng, n)
    x = _misalignment_batch(model.misalign, rng, n)
    return _snr_coefficient(model) * x * x * chi


def sample_cascade(num_elements: int, rng: np.random.Generator) -> float:
    """One sample of the cascade power chi."""
    if num_elements < 1:
        raise DomainError(f"num_elements must be >= 1, got {num_elements!r}")
    return float(_chi_batch(num_elements, rng, 1)[0])


def sample_snr(model: LinkModel, rng: np.random.Generator) -> float:
    """One SNR sample distributed per the model."""
    return float(_snr_batch(model, rng, 1)[0])


def _batch_sizes(cfg: McConfig) -> list[int]:
    full, rest = divmod(cfg.trials, cfg.batch)
    return [cfg.batch] * full + ([rest] if rest else [])


def _map_batches(task, cfg: McConfig, workers: int) -> list:
    """Run ``task(batch_index, size)`` over all batches, results in batch order."""
    sizes = _batch_sizes(cfg)
    if workers <= 1:
        return [task(i, size) for i, size in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, range(len(sizes)), sizes))


def snr_samples(model: LinkModel, cfg: McConfig, workers: int = 1) -> np.ndarray:
    """All ``cfg.trials`` SNR samples, concatenated in batch order."""

    def task(index: int, size: int) -> np.ndarray:
        return _snr_batch(model, batch_rng(cfg.seed, index), size)

    return np.concatenate(_map_batches(task, cfg, workers))


def cascade_samples(num_elements: int, cfg: McConfig, workers: int = 1) -> np.ndarray:
    """All ``cfg.trials`` cascade-power samples, concatenated in batch order."""
    if num_elements < 1:
        raise DomainError(f"num_elements must be >= 1, got {num_elements!r}")

    def task(index: int, size: int) -> np.ndarray:
        return _chi_batch(num_elements, batch_rng(cfg.seed, index), size)

    return np.concatenate(_map_batches(task, cfg, workers))


def estimate_ergodic_rate(model: LinkModel, cfg: McConfig, workers: int = 1) -> McEstimate:
    """Sample mean of log2(1 + gamma) with its standard error.

    log1p keeps full precision when gamma is many orders of magnitude
    below 1, where 1 + gamma would round away the signal.
    """

    def task(index: int, size: int) -> tuple[int, float, float]:
        rates = np.log1p(_snr_batch(model, batch_rng(cfg.seed, index), size)) / _LN2
        return size, float(np.sum(rates)), float(np.sum(rates * rates))

    total_n = 0
    total_sum = 0.0
    total_sumsq = 0.0
    for size, s1, s2 in _map_batches(task, cfg, workers):
        total_n += size
        total_sum += s1
        total_sumsq += s2

    mean = total_sum / total_n
    if total_n > 1:
        var = max(0.0, (total_sumsq - total_sum * total_sum / total_n) / (total_n - 1))
    else:
        var = 0.0
    return McEstimate(mean=mean, std_error=math.sqrt(var / total_n), n=total_n)
