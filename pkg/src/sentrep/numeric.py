"""Shared numeric kernel: softmax losses, negative sampling, SGD schedule,
matrix init, cosine similarity, seeded RNG, and training reports.

Parameters are stored as float32 for throughput; every routine here inherits
the dtype of its inputs, so tests can run the exact same code in float64 for
gradient checking.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError

logger = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    dim: int = 100
    epochs: int = 1
    lr0: float = 0.025
    lr_min: float = 1e-4
    seed: int = 1
    workers: int = 1
    negative_samples: int = 0  # 0 = exact softmax
    subsample: float = 0.0  # frequent-token downsampling threshold, 0 = off

    def __post_init__(self):
        if self.dim <= 0:
            raise ValueError("dim must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not (0.0 < self.lr_min <= self.lr0):
            raise ValueError("need 0 < lr_min <= lr0")
        if self.negative_samples < 0:
            raise ValueError("negative_samples must be >= 0")


def make_rng(seed: int) -> np.random.Generator:
    """Seeded 64-bit generator; identical seed gives identical draws."""
    return np.random.default_rng(seed)


def init_matrix(
    rows: int,
    dim: int,
    seed: int | np.random.Generator,
    dtype=np.float32,
) -> np.ndarray:
    """Fresh parameter matrix, entries i.i.d. uniform in [-0.5/dim, +0.5/dim]."""
    if rows <= 0 or dim <= 0:
        raise ValueError("rows and dim must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(seed)
    bound = 0.5 / dim
    return rng.uniform(-bound, bound, size=(rows, dim)).astype(dtype)


def lr_at(progress: float, cfg: TrainConfig) -> float:
    """Linear decay from lr0 toward lr_min over training progress in [0, 1]."""
    progress = min(1.0, max(0.0, progress))
    return max(cfg.lr0 * (1.0 - progress), cfg.lr_min)


def softmax_nll(scores: np.ndarray, target: int) -> tuple[float, np.ndarray]:
    """Negative log softmax probability of `target`, with gradient.

    loss = -log(exp(scores[target]) / sum_j exp(scores[j])), computed with
    max-subtraction; grad = softmax(scores) - onehot(target).
    """
    s = np.asarray(scores)
    if not np.all(np.isfinite(s)):
        raise NumericError("non-finite scores in softmax_nll")
    if not 0 <= target < s.shape[0]:
        raise IndexError(f"target {target} out of range for {s.shape[0]} scores")
    shifted = s - s.max()
    ez = np.exp(shifted)
    z = ez.sum()
    loss = float(np.log(z) - shifted[target])
    grad = ez / z
    grad[target] -= 1.0
    return loss, grad


def log_softmax(scores: np.ndarray) -> np.ndarray:
    s = np.asarray(scores)
    shifted = s - s.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def sigmoid(x):
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-x))


def sampled_nll(scores: np.ndarray) -> tuple[float, np.ndarray]:
    """Negative-sampling logistic loss over a target plus k noise words.

    scores[0] is the target (positive) score, scores[1:] the sampled negative
    scores.  loss = -log sigmoid(s_0) - sum_i log sigmoid(-s_i); the gradient
    touches only these k+1 entries.
    """
    s = np.asarray(scores)
    if not np.all(np.isfinite(s)):
        raise NumericError("non-finite scores in sampled_nll")
    # -log sigmoid(x) == logaddexp(0, -x), stable at both ends
    loss = float(np.logaddexp(0.0, -s[0]) + np.logaddexp(0.0, s[1:]).sum())
    grad = sigmoid(s)
    grad[0] -= 1.0
    return loss, grad


class NegativeSampler:
    """Draws k negative ids from the unigram^0.75 noise distribution,
    excluding the current target; deterministic per seeded generator."""

    def __init__(self, counts, k: int, rng: np.random.Generator):
        counts = np.asarray(counts, dtype=np.float64)
        if k < 1:
            raise ValueError("k must be >= 1")
        if k >= counts.shape[0]:
            raise ValueError("negative_samples must be smaller than the vocabulary")
        self.k = k
        self._cum = np.cumsum(counts**0.75)
        self._rng = rng

    def draw(self, exclude: int) -> np.ndarray:
        out = np.empty(self.k, dtype=np.int64)
        n = 0
        total = self._cum[-1]
        while n < self.k:
            w = int(np.searchsorted(self._cum, self._rng.random() * total, side="right"))
            if w != exclude:
                out[n] = w
                n += 1
        return out


def cosine(a, b) -> float:
    """Cosine similarity for dense vectors or sparse {index: weight} dicts.

    Defined as 0.0 when either norm is 0 (logged, not an error).
    """
    if isinstance(a, dict) or isinstance(b, dict):
        if not (isinstance(a, dict) and isinstance(b, dict)):
            raise ValueError("cannot mix sparse and dense representations")
        dot = sum(v * b[i] for i, v in a.items() if i in b)
        na = np.sqrt(sum(v * v for v in a.values()))
        nb = np.sqrt(sum(v * v for v in b.values()))
    else:
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if a.shape != b.shape:
            raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
        dot = float(a @ b)
        na = float(np.linalg.norm(a))
        nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        logger.debug("cosine of zero-norm vector defined as 0")
        return 0.0
    return float(dot / (na * nb))


def as_dense(vec, dim: int) -> np.ndarray:
    """Densify a sparse {index: weight} vector; dense input passes through."""
    if isinstance(vec, dict):
        out = np.zeros(dim, dtype=np.float64)
        for i, v in vec.items():
            out[i] = v
        return out
    return np.asarray(vec)


@dataclass
class TrainingReport:
    examples: int
    skipped: int
    wall_time: float
    loss_curve: list[tuple[int, float]] = field(default_factory=list)
    mean_loss_first_decile: float | None = None
    mean_loss_last_decile: float | None = None

    def summary(self) -> str:
        parts = [f"examples={self.examples}", f"skipped={self.skipped}"]
        if self.mean_loss_first_decile is not None:
            parts.append(f"loss_first10%={self.mean_loss_first_decile:.4f}")
        if self.mean_loss_last_decile is not None:
            parts.append(f"loss_last10%={self.mean_loss_last_decile:.4f}")
        parts.append(f"wall_time={self.wall_time:.2f}s")
        return " ".join(parts)


class LossTracker:
    """Accumulates per-example losses into 10k-example buckets plus
    first/last decile means (the latter only while the run is small enough
    to keep raw losses around)."""

    KEEP_RAW_LIMIT = 2_000_000

    def __init__(self, planned_examples: int, bucket: int = 10_000):
        self.planned = planned_examples
        self.bucket = bucket
        self.skipped = 0
        self._bucket_sum = 0.0
        self._bucket_n = 0
        self._seen = 0
        self.loss_curve: list[tuple[int, float]] = []
        self._raw: list[float] | None = (
            [] if planned_examples <= self.KEEP_RAW_LIMIT else None
        )

    def add(self, loss: float) -> None:
        self._seen += 1
        self._bucket_sum += loss
        self._bucket_n += 1
        if self._raw is not None:
            self._raw.append(loss)
        if self._bucket_n == self.bucket:
            self.loss_curve.append((self._seen, self._bucket_sum / self._bucket_n))
            self._bucket_sum = 0.0
            self._bucket_n = 0

    def skip(self) -> None:
        self.skipped += 1

    def report(self, wall_time: float) -> TrainingReport:
        if self._bucket_n:
            self.loss_curve.append((self._seen, self._bucket_sum / self._bucket_n))
        first = last = None
        if self._raw:
            n10 = max(1, len(self._raw) // 10)
            first = float(np.mean(self._raw[:n10]))
            last = float(np.mean(self._raw[-n10:]))
        return TrainingReport(
            examples=self._seen,
            skipped=self.skipped,
            wall_time=wall_time,
            loss_curve=self.loss_curve,
            mean_loss_first_decile=first,
            mean_loss_last_decile=last,
        )
