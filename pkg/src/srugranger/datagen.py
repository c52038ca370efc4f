"""Synthetic benchmark generators with known ground-truth causal graphs.

Two families: Lorenz-96 trajectories (nonlinear, chaotic for large forcing)
and sparse stable VAR(3) series (linear).  Both are pure functions of their
config, bit-reproducible per seed.  Also hosts the dataset container type,
per-component standardization, and the CSV emit used by the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import make_rng

#: Significant digits used when emitting floats; enough for exact round-trip.
CSV_FLOAT_DIGITS = 17


@dataclass
class TimeSeriesDataset:
    """One or more ordered sequences of n-dimensional real measurements.

    ``sequences`` is a list of (T_s, n) float arrays, rows = time steps,
    columns = component series.  All sequences share the component count;
    every sequence has at least 2 samples; all values are finite.
    """

    sequences: list[np.ndarray]
    n: int
    labels: list[str] | None = None

    def __post_init__(self):
        if not self.sequences:
            raise ValueError("dataset needs at least one sequence")
        self.sequences = [np.ascontiguousarray(s, dtype=np.float64) for s in self.sequences]
        for k, s in enumerate(self.sequences):
            if s.ndim != 2 or s.shape[1] != self.n:
                raise ValueError(f"sequence {k} has shape {s.shape}, expected (*, {self.n})")
            if s.shape[0] < 2:
                raise ValueError(f"sequence {k} has {s.shape[0]} samples, need at least 2")
            if not np.all(np.isfinite(s)):
                raise ValueError(f"sequence {k} contains non-finite values")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("label count does not match component count")

    def pooled(self) -> np.ndarray:
        """All samples stacked into one (sum T_s, n) array."""
        return np.vstack(self.sequences)

    def component_labels(self) -> list[str]:
        return self.labels if self.labels is not None else [f"x{j}" for j in range(self.n)]


@dataclass
class GroundTruthAdjacency:
    """Binary causal graph; edges[i, j] = 1 means series j drives series i."""

    edges: np.ndarray

    def __post_init__(self):
        self.edges = np.asarray(self.edges)
        if self.edges.ndim != 2 or self.edges.shape[0] != self.edges.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {self.edges.shape}")
        if not np.isin(self.edges, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        self.edges = self.edges.astype(np.int64)

    @property
    def n(self) -> int:
        return self.edges.shape[0]


@dataclass
class Lorenz96Config:
    """Cyclic advection-diffusion ODE system under constant forcing F.

    States are integrated with classical RK4 at ``integrator_step`` and one
    sample is retained every ``sample_stride`` steps; the first ``burn_in``
    retained samples are discarded.  i.i.d. N(0, obs_noise_std^2) noise is
    added to the retained samples.
    """

    n: int = 10
    F: float = 10.0
    T: int = 500
    integrator_step: float = 0.01
    sample_stride: int = 5
    burn_in: int = 1000
    obs_noise_std: float = 0.1
    seed: int = 0
    init_state: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("lorenz96 needs n >= 4 for distinct cyclic neighbors")
        if self.T < 2:
            raise ValueError("need T >= 2 output samples")
        if not self.integrator_step > 0:
            raise ValueError("integrator_step must be positive")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be at least 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if self.obs_noise_std < 0:
            raise ValueError("obs_noise_std must be nonnegative")


@dataclass
class VarConfig:
    """Sparse VAR(3) with one support mask shared by all three lag matrices."""

    n: int = 10
    T: int = 1000
    support_fraction: float = 0.3
    coeff_value: float = 0.0994
    noise_cov_scale: float = 0.01
    burn_in: int = 100
    seed: int = 0
    order: int = field(default=3, init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        if self.T < 2:
            raise ValueError("need T >= 2")
        if not 0 < self.support_fraction <= 1:
            raise ValueError("support_fraction must be in (0, 1]")
        if self.noise_cov_scale < 0:
            raise ValueError("noise_cov_scale must be nonnegative")


def _lorenz96_rhs(x: np.ndarray, F: float) -> np.ndarray:
    # dx_i/dt = -x_{i-1} (x_{i-2} - x_{i+1}) - x_i + F, indices cyclic
    return (np.roll(x, -1) - np.roll(x, 2)) * np.roll(x, 1) - x + F


def lorenz96_ground_truth(n: int) -> GroundTruthAdjacency:
    """Row i has ones at cyclic offsets i-2 .. i+1 (circulant graph)."""
    edges = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for off in (-2, -1, 0, 1):
            edges[i, (i + off) % n] = 1
    return GroundTruthAdjacency(edges)


def simulate_lorenz96(cfg: Lorenz96Config) -> tuple[TimeSeriesDataset, GroundTruthAdjacency]:
    """Integrate the Lorenz-96 ODE and return sampled noisy measurements.

    The initial state is all-F plus a N(0, 0.01) perturbation unless
    ``cfg.init_state`` pins it explicitly.  Divergence (a non-finite state)
    aborts with the failing integrator step index.
    """
    rng = make_rng(cfg.seed)
    if cfg.init_state is not None:
        x = np.asarray(cfg.init_state, dtype=np.float64).copy()
        if x.shape != (cfg.n,):
            raise ValueError(f"init_state must have shape ({cfg.n},)")
    else:
        x = cfg.F + rng.normal(0.0, 0.1, size=cfg.n)

    dt = cfg.integrator_step
    total_keep = cfg.burn_in + cfg.T
    out = np.empty((total_keep, cfg.n))
    out[0] = x
    step = 0
    for k in range(1, total_keep):
        for _ in range(cfg.sample_stride):
            k1 = _lorenz96_rhs(x, cfg.F)
            k2 = _lorenz96_rhs(x + 0.5 * dt * k1, cfg.F)
            k3 = _lorenz96_rhs(x + 0.5 * dt * k2, cfg.F)
            k4 = _lorenz96_rhs(x + dt * k3, cfg.F)
            x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            step += 1
            if not np.all(np.isfinite(x)):
                raise RuntimeError(
                    f"lorenz96 integration diverged at integrator step {step} "
                    f"(F={cfg.F}, dt={dt})")
        out[k] = x

    series = out[cfg.burn_in:]
    if cfg.obs_noise_std > 0:
        series = series + rng.normal(0.0, cfg.obs_noise_std, size=series.shape)
    ds = TimeSeriesDataset([series], n=cfg.n)
    return ds, lorenz96_ground_truth(cfg.n)


def var3_companion(A: np.ndarray, n: int) -> np.ndarray:
    """Companion matrix of a VAR(3) whose three lag matrices all equal A."""
    comp = np.zeros((3 * n, 3 * n))
    comp[:n, :n] = A
    comp[:n, n:2 * n] = A
    comp[:n, 2 * n:] = A
    comp[n:2 * n, :n] = np.eye(n)
    comp[2 * n:, n:2 * n] = np.eye(n)
    return comp


def simulate_var3(cfg: VarConfig) -> tuple[TimeSeriesDataset, GroundTruthAdjacency]:
    """Simulate the jointly-sparse VAR(3) and return series plus true support.

    ceil(support_fraction * n^2) coefficient positions are drawn uniformly
    without replacement and set to ``coeff_value`` in all three lag matrices.
    Instability (companion spectral radius >= 1) is rejected before any
    simulation happens.
    """
    rng = make_rng(cfg.seed)
    n = cfg.n
    k = math.ceil(cfg.support_fraction * n * n)
    flat = rng.choice(n * n, size=k, replace=False)
    mask = np.zeros(n * n, dtype=np.int64)
    mask[flat] = 1
    mask = mask.reshape(n, n)
    A = cfg.coeff_value * mask

    radius = float(np.max(np.abs(np.linalg.eigvals(var3_companion(A, n)))))
    if radius >= 1.0:
        raise ValueError(
            f"unstable VAR draw: companion spectral radius {radius:.6f} >= 1 "
            f"(seed={cfg.seed}, coeff_value={cfg.coeff_value})")

    total = cfg.burn_in + cfg.T
    noise = rng.normal(0.0, np.sqrt(cfg.noise_cov_scale), size=(total, n))
    xs = np.zeros((total + 3, n))
    for t in range(total):
        xs[t + 3] = A @ xs[t + 2] + A @ xs[t + 1] + A @ xs[t] + noise[t]
    series = xs[3 + cfg.burn_in:]
    ds = TimeSeriesDataset([series], n=n)
    return ds, GroundTruthAdjacency(mask)


def standardize(ds: TimeSeriesDataset) -> tuple[TimeSeriesDataset, np.ndarray, np.ndarray]:
    """Per-component z-scoring, pooled over all sequences.

    Returns the standardized dataset together with the applied means and
    scales (population standard deviations) so the transform can be inverted.
    A zero-variance component is rejected by index.
    """
    pooled = ds.pooled()
    means = pooled.mean(axis=0)
    scales = pooled.std(axis=0)
    for j in range(ds.n):
        if scales[j] == 0.0:
            raise ValueError(f"component {j} has zero variance; cannot standardize")
    out = [(s - means) / scales for s in ds.sequences]
    return TimeSeriesDataset(out, n=ds.n, labels=ds.labels), means, scales


def _fmt(v: float) -> str:
    return f"{v:.{CSV_FLOAT_DIGITS}g}"


def write_series_csv(ds: TimeSeriesDataset, path) -> None:
    """Emit a dataset as CSV: header of component labels, one row per step.

    Multi-sequence datasets get a leading integer ``sequence_id`` column.
    Floats carry 17 significant digits so the file round-trips bit-exactly.
    """
    multi = len(ds.sequences) > 1
    labels = ds.component_labels()
    with open(path, "w", encoding="utf-8") as fh:
        header = (["sequence_id"] if multi else []) + labels
        fh.write(",".join(header) + "\n")
        for sid, seq in enumerate(ds.sequences):
            for row in seq:
                cells = ([str(sid)] if multi else []) + [_fmt(v) for v in row]
                fh.write(",".join(cells) + "\n")


def write_adjacency_csv(adj: GroundTruthAdjacency, path) -> None:
    """Emit an n x n 0/1 adjacency as headerless CSV."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in adj.edges:
            fh.write(",".join(str(int(v)) for v in row) + "\n")


def write_scores_csv(scores: np.ndarray, path) -> None:
    """Emit a real-valued n x n score matrix as headerless CSV."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in np.asarray(scores, dtype=np.float64):
            fh.write(",".join(_fmt(v) for v in row) + "\n")
