"""Shared numeric primitives: activations, the group soft-thresholding
proximal operator, and deterministic seeded Gaussian sampling.

All arithmetic is IEEE double precision. Random streams come from numpy's
PCG64 bit generator seeded through ``SeedSequence``, so a given 64-bit seed
reproduces the same stream bit-for-bit on every platform. Parallel work must
not share a generator; each task derives its own seed with :func:`child_seed`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Name of the deterministic bit generator behind every random draw.
RNG_ALGORITHM = "pcg64"

_ACT_KINDS = ("relu", "elu")


@dataclass(frozen=True)
class Activation:
    """Elementwise nonlinearity used throughout the recurrent cells.

    ``relu``: max(x, 0).  ``elu``: x for x > 0 and alpha*(exp(x) - 1)
    otherwise, continuous and monotone.  The exposed derivative uses the
    right-derivative convention at x = 0 (value 1 for both kinds), the
    standard subgradient choice.
    """

    kind: str = "elu"
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in _ACT_KINDS:
            raise ValueError(f"unknown activation kind {self.kind!r}")
        if self.kind == "elu" and not self.alpha > 0:
            raise ValueError("elu requires alpha > 0")

    @property
    def code(self) -> int:
        """Integer tag used by the compiled kernels (0 = relu, 1 = elu)."""
        return _ACT_KINDS.index(self.kind)

    def f(self, x):
        """Apply the activation elementwise."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "relu":
            return np.maximum(x, 0.0)
        return np.where(x > 0.0, x, self.alpha * np.expm1(np.minimum(x, 0.0)))

    def df(self, x):
        """Derivative of the activation, right-derivative 1 at x = 0."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "relu":
            return np.where(x >= 0.0, 1.0, 0.0)
        return np.where(x >= 0.0, 1.0, self.alpha * np.exp(np.minimum(x, 0.0)))


def activate(act: Activation, x):
    """Evaluate ``act`` at ``x`` (alias for ``act.f``)."""
    return act.f(x)


def activate_derivative(act: Activation, x):
    """Evaluate the derivative of ``act`` at ``x`` (alias for ``act.df``)."""
    return act.df(x)


def group_soft_threshold(w, tau: float):
    """Proximal operator of ``tau * ||.||_2``: shrink the norm of ``w`` by tau.

    Returns the exact zero vector when ||w||_2 <= tau, otherwise
    ``w * (1 - tau/||w||_2)``.  Zeros are exact, never epsilon-small.

    Parameters
    ----------
    w : array_like
        Vector to threshold.
    tau : float
        Nonnegative threshold.
    """
    if tau < 0:
        raise ValueError(f"threshold must be nonnegative, got {tau}")
    w = np.asarray(w, dtype=np.float64)
    nrm = float(np.linalg.norm(w))
    if nrm <= tau:
        return np.zeros_like(w)
    return w * (1.0 - tau / nrm)


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator (PCG64) for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def child_seed(seed: int, *key: int) -> int:
    """Derive a child seed for a parallel task.

    Splitting rule: the child is the first 64-bit word of
    ``SeedSequence(seed, spawn_key=key)``.  Fixed key conventions used in
    this package: component ``i`` of a run trains under ``(0, i)``; the
    shared eSRU encoder matrix is drawn under ``(1,)``.
    """
    ss = np.random.SeedSequence(seed, spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_gaussian_matrix(rows: int, cols: int, variance: float,
                           rng: np.random.Generator) -> np.ndarray:
    """Matrix of i.i.d. N(0, variance) entries, deterministic per generator state."""
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix shape must be at least 1x1, got {rows}x{cols}")
    if not variance > 0:
        raise ValueError(f"variance must be positive, got {variance}")
    return rng.normal(0.0, np.sqrt(variance), size=(rows, cols))
