import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.config import ConfigurationManager
from core.exceptions import DegenerateArguments, InsufficientSamples
from core.specs import EnergyArgs, EnsembleSpec
from ensembles_mc.sampling import (
    SEED_LIMIT, batch_eigenvalues, chunk_bounds, chunk_stream, log_ratio, sample_batch,
)
from kernels.services import KernelService, KernelValue

logger = logging.getLogger(__name__)

MIN_SAMPLES_FOR_STDERR = 100


@dataclass(frozen=True)
class MCConfig:
    """Sampling budget for one Monte Carlo run. eta=None picks a point-dependent default."""
    ensemble: EnsembleSpec
    samples: int
    seed: int = 0
    eta: Optional[float] = None
    workers: int = 1
    chunk: int = 2048
    richardson: bool = False

    def __post_init__(self):
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValueError(f"samples must be a positive integer (got {self.samples}).")
        if not 0 <= self.seed < SEED_LIMIT:
            raise ValueError(f"seed must be a 64-bit unsigned integer (got {self.seed}).")
        if self.eta is not None and not self.eta > 0:
            raise ValueError(f"eta must be positive (got {self.eta}).")
        if self.workers < 1 or self.chunk < 1:
            raise ValueError("workers and chunk must be at least 1.")

    @classmethod
    def build(cls, ensemble: EnsembleSpec, samples: int = None, seed: int = None, eta: float = None,
              workers: int = None, richardson: bool = False) -> 'MCConfig':
        """Fill unset fields from settings.RMTK; RMTK_THREADS overrides `workers`."""
        return cls(
            ensemble=ensemble,
            samples=samples if samples is not None else ConfigurationManager.get_setting('MC_SAMPLES', 100000, int),
            seed=seed if seed is not None else ConfigurationManager.get_setting('MC_SEED', 0, int),
            eta=eta,
            workers=ConfigurationManager.worker_count(workers),
            chunk=ConfigurationManager.get_setting('MC_CHUNK_SIZE', 2048, int),
            richardson=richardson,
        )


@dataclass(frozen=True)
class MCEstimate:
    mean: complex
    stderr: float
    samples: int
    seed: int


@dataclass
class RatioMoments:
    """
    One-pass moments of paired samples (a_i, b_i) for the ratio mean(a)/mean(b).
    Chunks merge with the pairwise update, so the result depends only on merge order.
    """
    count: int = 0
    mean_a: complex = 0j
    mean_b: complex = 0j
    m2_a: float = 0.0
    m2_b: float = 0.0
    co_ab: complex = 0j

    @classmethod
    def of(cls, a: np.ndarray, b: np.ndarray) -> 'RatioMoments':
        mean_a, mean_b = a.mean(), b.mean()
        da, db = a - mean_a, b - mean_b
        return cls(
            count=a.size, mean_a=complex(mean_a), mean_b=complex(mean_b),
            m2_a=float(np.sum(np.abs(da) ** 2)), m2_b=float(np.sum(np.abs(db) ** 2)),
            co_ab=complex(np.sum(da * np.conj(db))),
        )

    def merge(self, other: 'RatioMoments') -> 'RatioMoments':
        if self.count == 0:
            return other
        n = self.count + other.count
        weight = self.count * other.count / n
        delta_a = other.mean_a - self.mean_a
        delta_b = other.mean_b - self.mean_b
        return RatioMoments(
            count=n,
            mean_a=self.mean_a + delta_a * other.count / n,
            mean_b=self.mean_b + delta_b * other.count / n,
            m2_a=self.m2_a + other.m2_a + abs(delta_a) ** 2 * weight,
            m2_b=self.m2_b + other.m2_b + abs(delta_b) ** 2 * weight,
            co_ab=self.co_ab + other.co_ab + delta_a * np.conj(delta_b) * weight,
        )

    @property
    def ratio(self) -> complex:
        if self.mean_a == self.mean_b:
            return complex(1.0)
        return self.mean_a / self.mean_b

    @property
    def ratio_stderr(self) -> float:
        """Delta-method standard error of mean(a)/mean(b)."""
        if self.count < 2:
            return math.inf
        z = self.ratio
        spread = self.m2_a + abs(z) ** 2 * self.m2_b - 2.0 * (np.conj(z) * self.co_ab).real
        variance = max(spread, 0.0) / (self.count - 1)
        return math.sqrt(variance / self.count) / abs(self.mean_b)


def _merge_in_order(parts: Sequence[RatioMoments]) -> RatioMoments:
    total = RatioMoments()
    for part in parts:
        total = total.merge(part)
    return total


class MonteCarloService:
    """
    Ensemble averages over sampled matrices. Each chunk of samples has its own
    Philox stream; chunks are evaluated by a thread pool and merged in chunk order.
    """

    @staticmethod
    def _map_chunks(config: MCConfig, evaluate) -> list:
        """[evaluate(eigenvalues) per chunk] in chunk order."""
        ensemble = config.ensemble

        def run(bounds: Tuple[int, int, int]):
            index, start, stop = bounds
            rng = chunk_stream(config.seed, index)
            return evaluate(batch_eigenvalues(ensemble, sample_batch(ensemble, rng, stop - start)))

        bounds = chunk_bounds(config.samples, config.chunk)
        if config.workers == 1 or len(bounds) == 1:
            return [run(b) for b in bounds]
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(run, bounds))

    @staticmethod
    def default_eta(ensemble: EnsembleSpec, x_p: float, x_q: float) -> float:
        """MC_ETA_FRACTION of the mean level spacing at the midpoint, clamped to MC_ETA_CLAMP."""
        fraction = ConfigurationManager.get_setting('MC_ETA_FRACTION', 0.05, float)
        lo, hi = ConfigurationManager.get_setting('MC_ETA_CLAMP', (1e-4, 0.1))
        density = float(KernelService.level_density(ensemble.beta, ensemble.n_levels, (x_p + x_q) / 2.0))
        eta = hi if density <= 0 else min(max(fraction / density, lo), hi)
        logger.debug(f"default eta for {ensemble.name} N={ensemble.n_levels} at ({x_p}, {x_q}): {eta:g}")
        return eta

    @staticmethod
    def _ratio_arguments(ensemble: EnsembleSpec, x_p: float, x_q: float):
        """(numerator energy, pole energy, power); the GSE pole sits on x_q."""
        if ensemble.beta == 4:
            return x_p, x_q, 2
        return x_q, x_p, abs(ensemble.gamma)

    @staticmethod
    def z1_moments(config: MCConfig, arguments: Sequence[EnergyArgs]) -> List[RatioMoments]:
        """
        Ratio moments of Z_1 at every (x_p, x_q, η) from one set of samples. The
        normalizer is the same average with the numerator moved onto the pole.
        """
        plan = [
            MonteCarloService._ratio_arguments(config.ensemble, args.x_p, args.x_q) + (args.eta,)
            for args in arguments
        ]

        def evaluate(eigenvalues: np.ndarray) -> List[RatioMoments]:
            parts = []
            for numerator, pole, power, eta in plan:
                a = np.exp(power * log_ratio(eigenvalues, numerator, pole, eta))
                b = np.exp(power * log_ratio(eigenvalues, pole, pole, eta))
                parts.append(RatioMoments.of(a, b))
            return parts

        per_chunk = MonteCarloService._map_chunks(config, evaluate)
        return [_merge_in_order([chunk[i] for chunk in per_chunk]) for i in range(len(plan))]

    @staticmethod
    def _check_samples(config: MCConfig) -> None:
        if config.samples < MIN_SAMPLES_FOR_STDERR:
            raise InsufficientSamples(
                f"{config.samples} samples requested; at least {MIN_SAMPLES_FOR_STDERR} are needed for a standard error."
            )

    @staticmethod
    def z1_mc(config: MCConfig, x_p: float, x_q: float) -> MCEstimate:
        """Self-normalized estimate of Z_1^(β)(x_p, x_q); exactly 1 at x_p = x_q."""
        MonteCarloService._check_samples(config)
        eta = config.eta or MonteCarloService.default_eta(config.ensemble, x_p, x_q)
        moments = MonteCarloService.z1_moments(config, [EnergyArgs(x_p, x_q, eta)])[0]
        return MCEstimate(mean=moments.ratio, stderr=moments.ratio_stderr, samples=config.samples, seed=config.seed)

    @staticmethod
    def _kernel_estimates(config: MCConfig, arguments: Sequence[EnergyArgs]) -> List[Tuple[float, float]]:
        """K(x_p, x_q) and its standard error per argument triple; Z_1 is taken at (x_q, x_p)."""
        beta, N = config.ensemble.beta, config.ensemble.n_levels
        swapped = [EnergyArgs(args.x_q, args.x_p, args.eta) for args in arguments]
        results = []
        for args, moments in zip(arguments, MonteCarloService.z1_moments(config, swapped)):
            value = KernelService.kernel_from_z1(beta, N, args.x_q, args.x_p, moments.ratio)
            scale = abs(KernelService.difference_prefactor(beta, args.x_q, args.x_p)) / abs(args.x_p - args.x_q)
            results.append((value, scale * moments.ratio_stderr))
        return results

    @staticmethod
    def kernel_arguments(config: MCConfig, x_p: float, x_q: float) -> EnergyArgs:
        """(x_p, x_q, η) for kernel_mc, η from the config or the local level spacing."""
        floor = ConfigurationManager.get_setting('DEGENERACY_FLOOR', 1e-8, float)
        if abs(x_p - x_q) < floor:
            raise DegenerateArguments(f"|x_p - x_q| = {abs(x_p - x_q):.3e} below floor {floor:g}.")

        eta = config.eta or MonteCarloService.default_eta(config.ensemble, x_p, x_q)
        if abs(x_p - x_q) < 10 * eta:
            logger.warning(f"kernel_mc: |x_p - x_q| = {abs(x_p - x_q):.3g} is below 10*eta = {10 * eta:.3g}")
        return EnergyArgs(x_p, x_q, eta)

    @staticmethod
    def kernel_mc_points(config: MCConfig, points: Sequence[Tuple[float, float]]) -> List[KernelValue]:
        """kernel_mc at every (x_p, x_q) pair, all from one set of samples."""
        MonteCarloService._check_samples(config)
        arguments = [MonteCarloService.kernel_arguments(config, x_p, x_q) for x_p, x_q in points]
        halved = [replace(args, eta=args.eta / 2.0) for args in arguments] if config.richardson else []
        estimates = MonteCarloService._kernel_estimates(config, arguments + halved)

        results = []
        for i, args in enumerate(arguments):
            value, error = estimates[i]
            if config.richardson:
                half_value, half_error = estimates[len(arguments) + i]
                value, error = 2.0 * half_value - value, math.sqrt(4.0 * half_error ** 2 + error ** 2)

            logger.info(
                f"kernel_mc {config.ensemble.name} N={config.ensemble.n_levels} ({args.x_p}, {args.x_q}) "
                f"eta={args.eta:g} samples={config.samples} seed={config.seed}: {value:.6g} +- {error:.2g}"
            )
            results.append(KernelValue(value=float(value), route='mc', uncertainty=float(error)))
        return results

    @staticmethod
    def kernel_mc(config: MCConfig, x_p: float, x_q: float) -> KernelValue:
        """
        K_N^(β)(x_p, x_q) from the difference quotient of the sampled generating
        function, with propagated standard error.
        """
        return MonteCarloService.kernel_mc_points(config, [(x_p, x_q)])[0]

    @staticmethod
    def source_derivative_check(config: MCConfig, x: float, h: float) -> KernelValue:
        """
        Level density at x from Z_1 at (x - h, x + h): the difference quotient
        in the source variable at step h.
        """
        if not h > 0:
            raise ValueError(f"h must be positive (got {h}).")
        beta, N = config.ensemble.beta, config.ensemble.n_levels
        eta = config.eta or MonteCarloService.default_eta(config.ensemble, x - h, x + h)
        estimate = MonteCarloService.z1_mc(replace(config, eta=eta), x - h, x + h)
        value = KernelService.kernel_from_z1(beta, N, x - h, x + h, estimate.mean)
        error = abs(KernelService.difference_prefactor(beta, x - h, x + h)) * estimate.stderr / (2.0 * h)
        return KernelValue(value=float(value), route='mc', uncertainty=float(error))

    @staticmethod
    def eigen_histogram(config: MCConfig, edges: np.ndarray) -> 'EigenHistogram':
        """Histogram of all eigenvalues (GSE doublets once), per-sample bin counts for errors."""
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("Histogram edges must be strictly increasing with at least two entries.")
        bins = edges.size - 1

        def evaluate(eigenvalues: np.ndarray):
            index = np.searchsorted(edges, eigenvalues, side='right') - 1
            inside = (index >= 0) & (index < bins)
            rows = np.broadcast_to(np.arange(eigenvalues.shape[0])[:, None], eigenvalues.shape)
            counts = np.zeros((eigenvalues.shape[0], bins), dtype=np.int64)
            np.add.at(counts, (rows[inside], index[inside]), 1)
            return counts.sum(axis=0), (counts ** 2).sum(axis=0), int(np.sum(index < 0)), int(np.sum(index >= bins))

        per_chunk = MonteCarloService._map_chunks(config, evaluate)
        return EigenHistogram(
            edges=edges,
            counts=sum(c[0] for c in per_chunk),
            counts_sq=sum(c[1] for c in per_chunk),
            underflow=sum(c[2] for c in per_chunk),
            overflow=sum(c[3] for c in per_chunk),
            samples=config.samples,
        )

    @staticmethod
    def tuple_density(config: MCConfig, xs: Sequence[float], half_width: float) -> MCEstimate:
        """
        Box estimate of R_k(x_1, ..., x_k): mean number of ordered tuples of
        distinct eigenvalues with λ_j within half_width of x_j, over (2 half_width)^k.
        Boxes must be disjoint.
        """
        xs = [float(x) for x in xs]
        if not half_width > 0:
            raise ValueError(f"half_width must be positive (got {half_width}).")
        ordered = sorted(xs)
        if any(b - a <= 2 * half_width for a, b in zip(ordered, ordered[1:])):
            raise DegenerateArguments("Counting boxes overlap; points must be more than 2*half_width apart.")

        def evaluate(eigenvalues: np.ndarray):
            product = np.ones(eigenvalues.shape[0])
            for x in xs:
                product *= np.sum(np.abs(eigenvalues - x) <= half_width, axis=-1)
            return float(product.sum()), float(np.sum(product ** 2))

        per_chunk = MonteCarloService._map_chunks(config, evaluate)
        total = math.fsum(c[0] for c in per_chunk)
        total_sq = math.fsum(c[1] for c in per_chunk)
        n = config.samples
        volume = (2.0 * half_width) ** len(xs)
        mean = total / n
        variance = max(total_sq / n - mean * mean, 0.0) * n / max(n - 1, 1)
        return MCEstimate(mean=mean / volume, stderr=math.sqrt(variance / n) / volume, samples=n, seed=config.seed)

    @staticmethod
    def trace_moment(config: MCConfig) -> MCEstimate:
        """Sample mean of tr H² with its standard error."""
        ensemble = config.ensemble

        def run(bounds):
            index, start, stop = bounds
            matrices = sample_batch(ensemble, chunk_stream(config.seed, index), stop - start)
            traces = np.einsum('kij,kji->k', matrices, matrices).real
            return float(traces.sum()), float(np.sum(traces ** 2))

        parts = [run(b) for b in chunk_bounds(config.samples, config.chunk)]
        n = config.samples
        mean = math.fsum(p[0] for p in parts) / n
        variance = max(math.fsum(p[1] for p in parts) / n - mean * mean, 0.0) * n / max(n - 1, 1)
        return MCEstimate(mean=mean, stderr=math.sqrt(variance / n), samples=n, seed=config.seed)


@dataclass
class EigenHistogram:
    edges: np.ndarray
    counts: np.ndarray
    counts_sq: np.ndarray
    underflow: int
    overflow: int
    samples: int
    widths: np.ndarray = field(init=False)

    def __post_init__(self):
        self.widths = np.diff(self.edges)

    @property
    def centers(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2.0

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.samples * self.widths)

    @property
    def stderr(self) -> np.ndarray:
        n = self.samples
        mean = self.counts / n
        variance = np.maximum(self.counts_sq / n - mean ** 2, 0.0) * n / max(n - 1, 1)
        return np.sqrt(variance / n) / self.widths

    @property
    def mass(self) -> float:
        """Eigenvalues per sample, out-of-range ones included."""
        return (int(self.counts.sum()) + self.underflow + self.overflow) / self.samples

    @property
    def in_range_mass(self) -> float:
        return float(np.sum(self.density * self.widths))
