"""Haar sampling on SO(N) and Monte Carlo estimates of the integral forms.

Random streams: shard ``s`` of a run with seed ``seed`` draws from
``Generator(Philox(SeedSequence([seed, s])))``.  Shards have a fixed size,
so a run is reproducible bit for bit regardless of the worker count, and
shard statistics are merged in shard order.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _kernels
from .errors import ConstraintViolated, DimensionMismatch, NearSingularIntegrand
from .exact import EvalPoint
from .series import WeightLabel

RNG_ALGORITHM = "Philox4x64-10 keyed by SeedSequence([seed, shard])"
SHARD_SIZE = 1 << 15
DEFAULT_SEED = 20240611
SINGULAR_EPS = 1e-9


def shard_rng(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(shard)])))


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return shard_rng(DEFAULT_SEED if rng is None else rng, 0)


@dataclass(frozen=True)
class EulerAngles:
    phi: float
    theta: float
    psi: float

    def __post_init__(self):
        two_pi = 2 * math.pi
        if not (0 <= self.phi < two_pi and 0 <= self.theta <= math.pi and 0 <= self.psi < two_pi):
            raise ValueError(f"Euler angles out of range: {self}")


@dataclass(frozen=True, eq=False)
class OrthoFrame:
    """An element of SO(N) stored by columns ``k^(1), ..., k^(N)``."""

    columns: np.ndarray
    euler: EulerAngles | None = None

    def __post_init__(self):
        k = np.asarray(self.columns, dtype=float)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise DimensionMismatch("frame must be square")
        resid = np.abs(k.T @ k - np.eye(k.shape[0])).max()
        if resid > 1e-12:
            raise ValueError(f"columns not orthonormal (residual {resid:.2e})")
        if abs(np.linalg.det(k) - 1) > 1e-12:
            raise ValueError("determinant is not +1")
        k.setflags(write=False)
        object.__setattr__(self, "columns", k)

    @property
    def N(self) -> int:
        return self.columns.shape[0]

    def column(self, j: int) -> np.ndarray:
        return self.columns[:, j]


@dataclass(frozen=True)
class XiValues:
    values: tuple


@dataclass(frozen=True)
class MCEstimate:
    mean: complex
    stderr: float
    samples: int
    seed: int

    def to_json(self) -> dict:
        return {
            "mean_re": self.mean.real,
            "mean_im": self.mean.imag,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
        }

    def within(self, exact: complex, nsigma: float = 5.0) -> bool:
        return abs(self.mean - exact) <= nsigma * self.stderr


def sample_frames(N: int, count: int, rng) -> np.ndarray:
    """``count`` Haar-distributed SO(N) matrices, shape ``(count, N, N)``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    G = _as_rng(rng).standard_normal((count, N, N))
    return _kernels.orthonormalize(G)


def sample_haar(N: int, rng=None) -> OrthoFrame:
    return OrthoFrame(sample_frames(N, 1, rng)[0])


def euler_frame(angles: EulerAngles) -> OrthoFrame:
    """Columns ``(n, l, m)`` with ``l = m x n``."""
    f, t, s = angles.phi, angles.theta, angles.psi
    n = np.array([math.cos(f) * math.sin(t), math.sin(f) * math.sin(t), math.cos(t)])
    a = np.array([-math.sin(f), math.cos(f), 0.0])
    b = np.array([-math.cos(f) * math.cos(t), -math.sin(f) * math.cos(t), math.sin(t)])
    m = math.cos(s) * a + math.sin(s) * b
    l = np.cross(m, n)
    return OrthoFrame(np.column_stack([n, l, m]), euler=angles)


def sample_euler(rng) -> EulerAngles:
    """phi, psi uniform on [0, 2pi); cos(theta) uniform on [-1, 1]."""
    rng = _as_rng(rng)
    phi, psi = rng.uniform(0, 2 * math.pi, 2)
    theta = math.acos(rng.uniform(-1.0, 1.0))
    return EulerAngles(float(phi), float(theta), float(psi))


def _coords(x, N: int) -> np.ndarray:
    coords = np.asarray(x.coords if isinstance(x, EvalPoint) else list(x), dtype=np.complex128)
    if coords.shape != (N,):
        raise DimensionMismatch(f"point of length {coords.size} for N={N}")
    return coords


def _xi_setup(x, N: int, upto: int):
    if not 1 <= upto <= N - 1:
        raise DimensionMismatch(f"upto must lie in 1..{N - 1}")
    rows, sizes = _kernels.subset_table(N, upto)
    return rows, sizes, _kernels.subset_weights(_coords(x, N), rows, sizes)


def xi_batch(x, frames: np.ndarray, upto: int) -> np.ndarray:
    """Xi_1..Xi_upto for a stack of frames, shape ``(count, upto)``."""
    N = frames.shape[-1]
    rows, sizes, w = _xi_setup(x, N, upto)
    return _kernels.xi_batch(np.ascontiguousarray(frames), rows, sizes, w, upto)


def xi_values(x, frame: OrthoFrame, upto: int) -> XiValues:
    """``Xi_j = sum_S det(k[S, :j])^2 prod_{i in S} x_i`` over j-subsets S."""
    vals = xi_batch(x, frame.columns[None, :, :], upto)[0]
    return XiValues(tuple(complex(v) for v in vals))


# Shard driver.


def _shard_stats(values: np.ndarray):
    n = values.shape[0]
    mean = values.mean(axis=0)
    m2 = (np.abs(values - mean) ** 2).sum(axis=0)
    return n, mean, m2


def run_sharded(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    samples: int,
    seed: int,
    threads: int = 1,
):
    """Monte Carlo mean and standard error of ``draw`` over fixed-size shards.

    ``draw(rng, count)`` returns integrand values of shape ``(count, K)``.
    Returns ``(mean, stderr)`` arrays of length K.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    counts = [SHARD_SIZE] * (samples // SHARD_SIZE)
    if samples % SHARD_SIZE:
        counts.append(samples % SHARD_SIZE)

    def work(s):
        return _shard_stats(draw(shard_rng(seed, s), counts[s]))

    if threads > 1 and len(counts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(work, range(len(counts))))
    else:
        stats = [work(s) for s in range(len(counts))]

    n, mean, m2 = stats[0]
    for nb, mb, m2b in stats[1:]:
        tot = n + nb
        delta = mb - mean
        mean = mean + delta * (nb / tot)
        m2 = m2 + m2b + np.abs(delta) ** 2 * (n * nb / tot)
        n = tot
    if n > 1:
        stderr = np.sqrt(m2 / (n - 1)) / math.sqrt(n)
    else:
        stderr = np.zeros_like(m2)
    return mean, stderr


def _estimates(mean, stderr, samples, seed) -> list[MCEstimate]:
    return [MCEstimate(complex(m), float(e), int(samples), int(seed)) for m, e in zip(mean, stderr)]


def mc_phi_many(
    labels: Sequence[WeightLabel], x, samples: int, seed: int = DEFAULT_SEED, threads: int = 1
) -> list[MCEstimate]:
    """Estimate several Phi_l at one point from one shared stream of frames."""
    if not labels:
        return []
    N = labels[0].N
    if any(lab.N != N for lab in labels):
        raise DimensionMismatch("all labels must share N")
    upto = N - 1
    rows, sizes, w = _xi_setup(x, N, upto)
    powers = np.array([lab.parts for lab in labels], dtype=np.int64)

    def draw(rng, count):
        Q = _kernels.orthonormalize(rng.standard_normal((count, N, N)))
        xi = _kernels.xi_batch(Q, rows, sizes, w, upto)
        out = np.ones((count, len(labels)), dtype=np.complex128)
        for j in range(upto):
            out *= xi[:, j : j + 1] ** powers[None, :, j]
        return out

    mean, stderr = run_sharded(draw, samples, seed, threads)
    return _estimates(mean, stderr, samples, seed)


def mc_phi(label: WeightLabel, x, samples: int, seed: int = DEFAULT_SEED, threads: int = 1) -> MCEstimate:
    """Sample mean of ``prod_j Xi_j^l_j`` over Haar frames."""
    return mc_phi_many([label], x, samples, seed, threads)[0]


def mc_genfun(x, t: Sequence[complex], samples: int, seed: int = DEFAULT_SEED, threads: int = 1) -> MCEstimate:
    """Sample mean of ``prod_j 1/(1 - Xi_j t_j)``."""
    t = np.asarray(t, dtype=np.complex128)
    N = t.size + 1
    rows, sizes, w = _xi_setup(x, N, N - 1)

    def draw(rng, count):
        Q = _kernels.orthonormalize(rng.standard_normal((count, N, N)))
        den = 1.0 - _kernels.xi_batch(Q, rows, sizes, w, N - 1) * t[None, :]
        if np.abs(den).min() < SINGULAR_EPS:
            raise NearSingularIntegrand("|1 - Xi_j t_j| < 1e-9 at a sample")
        return (1.0 / den.prod(axis=1))[:, None]

    mean, stderr = run_sharded(draw, samples, seed, threads)
    return _estimates(mean, stderr, samples, seed)[0]


def bc_integrand(n: np.ndarray, x: np.ndarray, t1: complex, t2: complex) -> np.ndarray:
    """``B^-1 C^-1/2`` at unit vectors ``n`` (rows), principal branch.

    ``B = 1 - t1 sum n_j^2 x_j`` and ``C = sum_j n_j^2 prod_{k != j} (1 - t2/x_k)``.
    """
    n2 = n * n
    # divide by |n|^2 so the forms are exactly 1 at t = 0 despite rounding
    s = n2.sum(axis=1)
    B = 1.0 - t1 * ((n2 @ x) / s)
    d = 1.0 - t2 / x
    cof = np.array([d[1] * d[2], d[0] * d[2], d[0] * d[1]])
    C = (n2 @ cof) / s
    if min(np.abs(B).min(), np.abs(C).min()) < SINGULAR_EPS:
        raise NearSingularIntegrand("B or C within 1e-9 of zero")
    return 1.0 / (B * np.sqrt(C))


def mc_bc_sphere(x, t1: complex, t2: complex, samples: int, seed: int = DEFAULT_SEED, threads: int = 1) -> MCEstimate:
    """Monte Carlo over uniform n on S^2 of ``B^-1 C^-1/2``."""
    coords = _coords(x, 3)
    if abs(coords.prod() - 1) > 1e-12:
        raise ConstraintViolated("x1 x2 x3 must equal 1")
    t1, t2 = complex(t1), complex(t2)

    def draw(rng, count):
        g = rng.standard_normal((count, 3))
        n = g / np.linalg.norm(g, axis=1, keepdims=True)
        return bc_integrand(n, coords, t1, t2)[:, None]

    mean, stderr = run_sharded(draw, samples, seed, threads)
    return _estimates(mean, stderr, samples, seed)[0]


def mc_moments(N: int, samples: int, seed: int = DEFAULT_SEED, threads: int = 1) -> list[MCEstimate]:
    """Estimates of ``E[k11^2]`` and ``E[k11^4]`` under the Haar sampler."""

    def draw(rng, count):
        Q = _kernels.orthonormalize(rng.standard_normal((count, N, N)))
        k = Q[:, 0, 0]
        return np.stack([k ** 2, k ** 4], axis=1).astype(np.complex128)

    mean, stderr = run_sharded(draw, samples, seed, threads)
    return _estimates(mean, stderr, samples, seed)
