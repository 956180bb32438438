"""Complex linear algebra, special functions and reproducible sampling.

Everything downstream (channel draws, beamformer construction, rate
evaluation) is built on the primitives here: a gauge-fixed thin SVD,
counter-based random streams, and a couple of scalar helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, RankError

_MASK64 = (1 << 64) - 1

# sigma_k at or below this fraction of sigma_1 counts as rank-deficient
RANK_TOL = 1e-9


@dataclass(frozen=True)
class SeededRng:
    """Value-type handle on a counter-based random stream.

    Identical (master_seed, stream_id) pairs reproduce identical sample
    sequences on any platform, and distinct stream_ids give statistically
    independent streams.  Each ``generator()`` call restarts the stream
    from its origin, so a SeededRng can be shared freely between workers;
    derive per-task streams with ``stream()`` instead of sharing generator
    state.
    """

    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.master_seed & _MASK64, self.stream_id & _MASK64], dtype=np.uint64
        )
        return np.random.Generator(np.random.Philox(key=key))

    def stream(self, stream_id: int) -> "SeededRng":
        return SeededRng(self.master_seed, stream_id)


@dataclass(frozen=True)
class SvdResult:
    """Truncated SVD factors with singular values in descending order.

    ``u`` (rows x m) and ``v`` (cols x m) have orthonormal columns.  The
    per-column phase gauge is fixed so the largest-magnitude entry of each
    column of ``v`` is real and nonnegative, with ``u`` rotated to match;
    this keeps the factorization exact while making repeated runs
    byte-for-byte reproducible.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def thin_svd(a, m: int) -> SvdResult:
    """Rank-``m`` thin SVD of a complex matrix.

    Parameters
    ----------
    a : array_like
        Matrix to factor, any complex or real 2-D array.
    m : int
        Number of leading singular triplets to keep,
        ``1 <= m <= min(a.shape)``.
    """
    a = as_complex_matrix(a, "a")
    if not 1 <= m <= min(a.shape):
        raise DimensionError(
            f"m={m} outside 1..min{a.shape} for a {a.shape[0]}x{a.shape[1]} matrix"
        )
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    u = u[:, :m].copy()
    s = s[:m].copy()
    v = vh[:m].conj().T.copy()
    for k in range(m):
        i = int(np.argmax(np.abs(v[:, k])))
        p = v[i, k]
        mag = abs(p)
        if mag > 0.0:
            rot = (p / mag).conjugate()
            v[:, k] *= rot
            u[:, k] *= rot
    return SvdResult(u=u, sigma=s, v=v)


def require_rank(sigma: np.ndarray, k: int) -> None:
    """Raise RankError unless the first k singular values are all significant."""
    if k > sigma.size or sigma[k - 1] <= RANK_TOL * sigma[0]:
        raise RankError(f"requested {k} streams but effective rank is smaller")


def erf(x: float) -> float:
    """Gauss error function; odd symmetry holds exactly by construction."""
    return math.copysign(math.erf(abs(x)), x)


def _complex_gaussian(gen: np.random.Generator, n: int) -> np.ndarray:
    z = gen.standard_normal(2 * n)
    return (z[0::2] + 1j * z[1::2]) / math.sqrt(2.0)


def sample_complex_gaussian(rng: SeededRng, n: int) -> np.ndarray:
    """Draw ``n`` i.i.d. CN(0,1) samples (real/imag parts N(0, 1/2))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _complex_gaussian(rng.generator(), n)


def ks_statistic(samples, cdf) -> float:
    """Sup-norm distance between the empirical CDF of ``samples`` and ``cdf``.

    ``cdf`` may be vectorized over ndarrays or a plain scalar function.
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise ValueError("samples must be nonempty")
    try:
        f = np.asarray(cdf(x), dtype=float)
        if f.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError):
        f = np.fromiter((cdf(t) for t in x), dtype=float, count=n)
    steps = np.arange(n + 1) / n
    d_hi = float(np.max(steps[1:] - f))
    d_lo = float(np.max(f - steps[:-1]))
    return max(d_hi, d_lo, 0.0)


def rayleigh_cdf(x, sigma: float = 1.0 / math.sqrt(2.0)):
    """CDF of a Rayleigh variable with scale ``sigma``."""
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0.0, 0.0, 1.0 - np.exp(-x * x / (2.0 * sigma * sigma)))


def normal_cdf(x, sigma: float = 1.0):
    """CDF of a zero-mean normal with standard deviation ``sigma``."""
    x = np.asarray(x, dtype=float)
    return 0.5 * (1.0 + np.vectorize(erf)(x / (sigma * math.sqrt(2.0))))
