"""KL expressibility of circuit instances.

For each repetition, `n_pairs` parameter pairs (theta, phi) are drawn uniformly
on [0, 2pi) per coordinate, the fidelity |<psi(phi)|psi(theta)>|^2 of each pair
is histogrammed over `n_bins` equal bins of [0, 1], and the KL divergence of
that histogram against the binned Haar fidelity law
P(F) = (N - 1)(1 - F)^(N - 2), N = 2^n, is taken in nats.

Random streams: pairs are drawn in fixed blocks of `PAIR_BLOCK_SIZE`; block
``b`` of repetition ``r`` comes from a Philox generator seeded with
``SeedSequence(master_seed, spawn_key=(template_id, n_qubits, n_layers, r, b))``.
Neither the simulation batch size nor the thread count changes which numbers a
pair receives.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .cache import haar_cache, memoize
from .circuit import CircuitInstance, GateKind, GateOp, fidelity_batch, run_circuit_batch
from .constants import (
    DEFAULT_BINS,
    DEFAULT_REPS,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    HAAR_MASS_FLOOR,
    MAX_BATCH_AMPLITUDES,
    MIN_QUBITS,
    PAIR_BLOCK_SIZE,
    REFERENCE_IDLE,
    REFERENCE_KINDS,
    REFERENCE_RX,
    REFERENCE_TEMPLATE_ID,
    TWO_PI,
)
from .errors import CircuitError, ConfigError
from .messages import (
    ERROR_BIN_COUNT,
    ERROR_BIN_INDEX,
    ERROR_NOT_DECOMPOSED,
    ERROR_QUBIT_COUNT,
    ERROR_SAMPLING_CONFIG,
    ERROR_UNKNOWN_REFERENCE,
    LOG_ESTIMATE_START,
    LOG_REPETITION_DONE,
)
from .utils import setup_logger

logger = setup_logger(__name__)

FloatArray = NDArray[np.float64]


@dataclass(frozen=True)
class SamplingConfig:
    """Sampling settings of one estimate.

    Attributes:
        n_pairs: Fidelity pairs per repetition (S).
        n_bins: Histogram bins (B).
        n_repetitions: Independent repetitions (R).
        master_seed: Root of every random stream (non-negative, 64-bit).

    """

    n_pairs: int = DEFAULT_SAMPLES
    n_bins: int = DEFAULT_BINS
    n_repetitions: int = DEFAULT_REPS
    master_seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        problems = []
        if self.n_pairs < 1:
            problems.append(f"n_pairs={self.n_pairs} < 1")
        if self.n_bins < 2:
            problems.append(f"n_bins={self.n_bins} < 2")
        if self.n_repetitions < 1:
            problems.append(f"n_repetitions={self.n_repetitions} < 1")
        if not 0 <= self.master_seed < 2**64:
            problems.append(f"master_seed={self.master_seed} outside [0, 2^64)")
        if problems:
            raise ConfigError(ERROR_SAMPLING_CONFIG.format(detail="; ".join(problems)))

    def with_pairs(self, n_pairs: int) -> SamplingConfig:
        return SamplingConfig(n_pairs, self.n_bins, self.n_repetitions, self.master_seed)


@dataclass(frozen=True)
class StreamKey:
    """Identity of the random stream of one repetition."""

    master_seed: int
    template_id: int
    n_qubits: int
    n_layers: int
    repetition: int

    @classmethod
    def for_instance(cls, instance: CircuitInstance, master_seed: int, repetition: int) -> StreamKey:
        return cls(master_seed, instance.template_id, instance.n_qubits, instance.n_layers, repetition)

    def generator(self, block: int) -> np.random.Generator:
        """Counter-based generator for pair block `block`."""
        seed = np.random.SeedSequence(
            self.master_seed,
            spawn_key=(self.template_id, self.n_qubits, self.n_layers, self.repetition, block),
        )
        return np.random.Generator(np.random.Philox(seed))


@dataclass(frozen=True)
class FidelityHistogram:
    """Normalized fidelity histogram over equal bins of [0, 1]."""

    bin_probabilities: FloatArray
    sample_count: int

    @classmethod
    def from_fidelities(cls, fidelities: ArrayLike, n_bins: int) -> FidelityHistogram:
        """Bin fidelities; bin i is [i/B, (i+1)/B) and the last bin also holds F = 1."""
        values = np.clip(np.asarray(fidelities, dtype=np.float64), 0.0, 1.0)
        index = np.minimum(np.floor(values * n_bins).astype(np.int64), n_bins - 1)
        counts = np.bincount(index, minlength=n_bins).astype(np.float64)
        total = values.shape[0]
        probabilities = counts / total if total else counts
        return cls(bin_probabilities=probabilities, sample_count=int(total))

    @property
    def n_bins(self) -> int:
        return int(self.bin_probabilities.shape[0])


@dataclass(frozen=True)
class ExpressibilityEstimate:
    """Result of `estimate_expressibility` (values in nats)."""

    mean_kl: float
    std_kl: float
    per_repetition: tuple[float, ...]
    config: SamplingConfig


@dataclass(frozen=True)
class ConvergenceRow:
    """One line of a convergence table."""

    samples: int
    mean_kl: float
    std_kl: float


# Haar reference ----------------------------------------------------------------


def _haar_masses(n_qubits: int, n_bins: int) -> FloatArray:
    if n_qubits < MIN_QUBITS:
        raise CircuitError(ERROR_QUBIT_COUNT.format(min=MIN_QUBITS, max="any", value=n_qubits))
    if n_qubits == 1:
        # N = 2: the density is uniform
        masses = np.full(n_bins, 1.0 / n_bins)
    else:
        exponent = float((1 << n_qubits) - 1)
        edges = np.arange(n_bins + 1, dtype=np.float64) / n_bins
        with np.errstate(divide="ignore"):
            log_tail = exponent * np.log1p(-edges)  # log (1 - x)^(N-1); -inf at x = 1
        lower, upper = log_tail[:-1], log_tail[1:]
        # (1-a)^(N-1) - (1-b)^(N-1) = (1-a)^(N-1) * (1 - exp(log_b - log_a))
        masses = np.exp(lower) * -np.expm1(upper - lower)
    masses = np.maximum(masses, HAAR_MASS_FLOOR)
    masses.setflags(write=False)
    return masses


@memoize(haar_cache, key_fn=lambda n_qubits, n_bins: (n_qubits, n_bins))
def haar_bin_masses(n_qubits: int, n_bins: int) -> FloatArray:
    """Haar probability mass of every fidelity bin (read-only, memoized).

    Tail bins whose mass underflows are clamped to `HAAR_MASS_FLOOR`.

    Args:
        n_qubits: Register size (N = 2^n).
        n_bins: Number of equal bins of [0, 1].

    Returns:
        Array of `n_bins` masses summing to 1.

    """
    return _haar_masses(n_qubits, n_bins)


def haar_bin_mass(n_qubits: int, bin_index: int, n_bins: int) -> float:
    """Haar mass of a single bin.

    Raises:
        CircuitError: If `bin_index` is outside [0, n_bins).

    """
    if not 0 <= bin_index < n_bins:
        raise CircuitError(ERROR_BIN_INDEX.format(index=bin_index, n_bins=n_bins))
    return float(haar_bin_masses(n_qubits, n_bins)[bin_index])


def kl_divergence(p: FidelityHistogram | ArrayLike, q: ArrayLike) -> float:
    """KL(p || q) in nats over bins with p > 0.

    Raises:
        CircuitError: If the bin counts differ.

    """
    p_values = p.bin_probabilities if isinstance(p, FidelityHistogram) else np.asarray(p, dtype=np.float64)
    q_values = np.asarray(q, dtype=np.float64)
    if p_values.shape != q_values.shape:
        raise CircuitError(ERROR_BIN_COUNT.format(left=p_values.shape[0], right=q_values.shape[0]))
    support = p_values > 0
    ratio = p_values[support] / np.maximum(q_values[support], HAAR_MASS_FLOOR)
    return float(max(0.0, np.sum(p_values[support] * np.log(ratio))))


# Sampling ----------------------------------------------------------------------


def _pair_block(key: StreamKey, block: int, n_pairs: int, n_params: int) -> tuple[FloatArray, FloatArray]:
    size = min(PAIR_BLOCK_SIZE, n_pairs - block * PAIR_BLOCK_SIZE)
    rng = key.generator(block)
    theta = rng.uniform(0.0, TWO_PI, size=(size, n_params))
    phi = rng.uniform(0.0, TWO_PI, size=(size, n_params))
    return theta, phi


def sample_fidelities(instance: CircuitInstance, n_pairs: int, stream_key: StreamKey) -> FloatArray:
    """Draw `n_pairs` fidelities of independently parameterized copies.

    Args:
        instance: Decomposed circuit instance.
        n_pairs: Number of (theta, phi) pairs.
        stream_key: Random stream identity.

    Returns:
        Fidelities in [0, 1], in pair order.

    Raises:
        CircuitError: If the instance still contains controlled rotations.

    """
    if not instance.is_elementary:
        kinds = sorted({g.kind.value for g in instance.gates if g.kind.is_controlled_rotation})
        raise CircuitError(ERROR_NOT_DECOMPOSED.format(kinds=", ".join(kinds)))
    if instance.n_params == 0:
        return np.ones(n_pairs, dtype=np.float64)

    # both halves of a pair are simulated in one batch
    batch_pairs = max(1, MAX_BATCH_AMPLITUDES // (2 << instance.n_qubits))
    fidelities = np.empty(n_pairs, dtype=np.float64)
    cached_block: tuple[int, tuple[FloatArray, FloatArray]] | None = None
    for start in range(0, n_pairs, batch_pairs):
        stop = min(n_pairs, start + batch_pairs)
        thetas, phis = [], []
        for block in range(start // PAIR_BLOCK_SIZE, (stop - 1) // PAIR_BLOCK_SIZE + 1):
            if cached_block is None or cached_block[0] != block:
                cached_block = (block, _pair_block(stream_key, block, n_pairs, instance.n_params))
            theta, phi = cached_block[1]
            offset = block * PAIR_BLOCK_SIZE
            lo, hi = max(start, offset) - offset, min(stop, offset + theta.shape[0]) - offset
            thetas.append(theta[lo:hi])
            phis.append(phi[lo:hi])
        count = stop - start
        states = run_circuit_batch(instance, np.vstack(thetas + phis))
        fidelities[start:stop] = fidelity_batch(states[:count], states[count:])
    return fidelities


def _repetition_kl(instance: CircuitInstance, config: SamplingConfig, repetition: int) -> float:
    key = StreamKey.for_instance(instance, config.master_seed, repetition)
    fidelities = sample_fidelities(instance, config.n_pairs, key)
    histogram = FidelityHistogram.from_fidelities(fidelities, config.n_bins)
    value = kl_divergence(histogram, haar_bin_masses(instance.n_qubits, config.n_bins))
    logger.debug(LOG_REPETITION_DONE, repetition, _label(instance), value)
    return value


def _label(instance: CircuitInstance) -> str:
    return f"template {instance.template_id} (n={instance.n_qubits}, L={instance.n_layers})"


def estimate_expressibility(
    instance: CircuitInstance,
    config: SamplingConfig | None = None,
    threads: int = 1,
) -> ExpressibilityEstimate:
    """Estimate the KL expressibility of a decomposed instance.

    Args:
        instance: Decomposed circuit instance.
        config: Sampling settings (defaults: S=20000, B=75, R=10).
        threads: Repetitions evaluated concurrently; results do not depend on it.

    Returns:
        Mean, population std and per-repetition KL values.

    """
    config = config or SamplingConfig()
    logger.debug(LOG_ESTIMATE_START, _label(instance), config.n_pairs, config.n_bins, config.n_repetitions)
    repetitions = range(config.n_repetitions)
    if threads > 1 and config.n_repetitions > 1:
        with ThreadPoolExecutor(max_workers=min(threads, config.n_repetitions)) as pool:
            values = list(pool.map(lambda r: _repetition_kl(instance, config, r), repetitions))
    else:
        values = [_repetition_kl(instance, config, r) for r in repetitions]

    array = np.asarray(values, dtype=np.float64)
    mean = float(np.mean(array))
    std = 0.0 if np.ptp(array) == 0.0 else float(np.std(array))
    return ExpressibilityEstimate(mean_kl=mean, std_kl=std, per_repetition=tuple(values), config=config)


def convergence_study(
    instance: CircuitInstance,
    sample_sizes: Sequence[int],
    config: SamplingConfig | None = None,
    threads: int = 1,
) -> list[ConvergenceRow]:
    """Repeat the estimate at several sample sizes (std of KL vs S)."""
    config = config or SamplingConfig()
    rows = []
    for samples in sample_sizes:
        estimate = estimate_expressibility(instance, config.with_pairs(int(samples)), threads)
        rows.append(ConvergenceRow(int(samples), estimate.mean_kl, estimate.std_kl))
    return rows


def reference_instance(kind: str) -> CircuitInstance:
    """One-qubit reference circuits.

    Args:
        kind: "idle" (no gates, every fidelity is 1) or "rx" (one RX gate,
            fidelities follow the arcsine law).

    Raises:
        ConfigError: For an unknown reference kind.

    """
    if kind == REFERENCE_IDLE:
        return CircuitInstance(REFERENCE_TEMPLATE_ID, 1, 1, (), 0)
    if kind == REFERENCE_RX:
        return CircuitInstance(REFERENCE_TEMPLATE_ID, 1, 1, (GateOp(GateKind.RX, 0, slot=0),), 1)
    raise ConfigError(ERROR_UNKNOWN_REFERENCE.format(reference=kind, choices=", ".join(REFERENCE_KINDS)))


def arcsine_oracle_kl(n_bins: int = DEFAULT_BINS) -> float:
    """Exact binned KL of the single-RX fidelity law against 1-qubit Haar.

    For uniform angle differences F = cos^2(delta/2) has CDF (2/pi) asin(sqrt(F)),
    so each bin mass is integrated in closed form.
    """
    edges = np.arange(n_bins + 1, dtype=np.float64) / n_bins
    cdf = (2.0 / math.pi) * np.arcsin(np.sqrt(edges))
    masses = np.diff(cdf)
    return kl_divergence(masses, haar_bin_masses(1, n_bins))


__all__ = [
    "ConvergenceRow",
    "ExpressibilityEstimate",
    "FidelityHistogram",
    "SamplingConfig",
    "StreamKey",
    "arcsine_oracle_kl",
    "convergence_study",
    "estimate_expressibility",
    "haar_bin_mass",
    "haar_bin_masses",
    "kl_divergence",
    "reference_instance",
    "sample_fidelities",
]
