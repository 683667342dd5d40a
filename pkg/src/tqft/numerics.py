"""Self-contained numerical kernels: statevectors, a dense symmetric
eigensolver, a deterministic counter-based PRNG, and circular phase
distances.

Conventions used throughout the package:

- Statevector amplitudes are complex128, index i runs over the 2^m basis
  states with qubit 0 holding the most significant bit of i.
- Phases live on the unit circle [0, 1) in "turns" (fractions of 2*pi).
- The PRNG is SplitMix64 (Steele, Lea & Flood; the finalizer popularised
  by Vigna's splitmix64.c). It is counter-based, so output i depends only
  on (seed, i): identical seeds give identical streams on every platform,
  and batches can be generated out of order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """Eigensolver failed to converge within its sweep budget."""


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitudes over the 2^m computational basis states."""

    m: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.m}")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.m,):
            raise ValueError(
                f"expected {1 << self.m} amplitudes for m={self.m}, got shape {amps.shape}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"statevector norm {norm!r} deviates from 1 by more than {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 1 << self.m

    @classmethod
    def basis_state(cls, m: int, index: int) -> "StateVector":
        amps = np.zeros(1 << m, dtype=np.complex128)
        amps[index] = 1.0
        return cls(m, amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric matrix; construction enforces exact symmetry."""

    dim: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.float64)
        if a.shape != (self.dim, self.dim):
            raise ValueError(f"expected shape ({self.dim}, {self.dim}), got {a.shape}")
        # (a + a.T)/2 is bitwise symmetric: both (i,j) and (j,i) evaluate
        # the same float expression.
        a = (a + a.T) / 2.0
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_array(cls, entries) -> "SymmetricMatrix":
        a = np.asarray(entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square 2-D array, got shape {a.shape}")
        return cls(a.shape[0], a)

    def trace(self) -> float:
        return float(np.trace(self.entries))


# SplitMix64 constants (64-bit golden-ratio increment and finalizer).
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK = 0xFFFFFFFFFFFFFFFF


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Deterministic 64-bit counter-based generator.

    Output i is mix(seed + (i+1)*gamma), so the stream is a pure function
    of the seed. `random()` maps the top 53 bits to a double in [0, 1).
    """

    def __init__(self, seed: int):
        self.seed = seed & _MASK
        self._counter = 0

    def next_u64(self) -> int:
        self._counter += 1
        return _mix((self.seed + self._counter * _GAMMA) & _MASK)

    def random(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self.random()

    def next_u64_array(self, n: int) -> np.ndarray:
        """Vectorized batch; continues the stream exactly like next_u64."""
        counters = np.arange(self._counter + 1, self._counter + n + 1, dtype=np.uint64)
        self._counter += n
        z = np.uint64(self.seed) + counters * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    def random_array(self, n: int) -> np.ndarray:
        return (self.next_u64_array(n) >> np.uint64(11)) * 2.0**-53

    def spawn(self, task_index: int) -> "SplitMix64":
        """Independent generator for parallel task `task_index` (seed + index)."""
        return SplitMix64((self.seed + task_index) & _MASK)


def circular_distance(a: float, b: float) -> float:
    """Distance between two phases on the unit circle, in [0, 0.5].

    Inputs are reduced modulo 1 first, so any real arguments are accepted.
    """
    diff = abs(a % 1.0 - b % 1.0)
    return min(diff, 1.0 - diff)


def circular_distance_array(a, b) -> np.ndarray:
    diff = np.abs(np.asarray(a) % 1.0 - np.asarray(b) % 1.0)
    return np.minimum(diff, 1.0 - diff)


def jacobi_eigh(matrix: SymmetricMatrix, max_sweeps: int = 50) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Returns (eigenvalues ascending, eigenvectors as orthonormal columns),
    with eigenvectors[:, i] belonging to eigenvalues[i]. Rotations below a
    per-sweep threshold are skipped; convergence is declared when the
    off-diagonal Frobenius norm falls below 1e-13 times the matrix norm.

    Raises ConvergenceError if the sweep budget is exhausted first -- a
    partial decomposition is never returned.
    """
    n = matrix.dim
    if n > 1024:
        raise ValueError(f"eigensolver is desk-scale only (dim <= 1024), got {n}")
    a = matrix.entries.copy()
    v = np.eye(n)
    if n == 1:
        return a[0, :1].copy(), v

    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), v
    tol = 1e-13 * scale

    for sweep in range(max_sweeps):
        off = _off_norm(a)
        if off <= tol:
            break
        # Rotating away entries much smaller than the current off-norm is
        # wasted work early on; the threshold tightens as the sweep count grows.
        threshold = off / n if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold or apq == 0.0:
                    continue
                _rotate(a, v, p, q)
    else:
        raise ConvergenceError(
            f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
            f"(dim={n}, off-norm={_off_norm(a):.3e}, tol={tol:.3e})"
        )

    order = np.argsort(np.diag(a), kind="stable")
    return np.diag(a)[order].copy(), v[:, order].copy()


def _off_norm(a: np.ndarray) -> float:
    d = np.diag(np.diag(a))
    return float(np.linalg.norm(a - d))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One symmetric Schur rotation zeroing a[p, q], accumulated into v."""
    apq = a[p, q]
    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
    # Smaller-magnitude root of t^2 + 2*tau*t - 1 = 0 for stability.
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    rp = a[p, :].copy()
    rq = a[q, :].copy()
    a[p, :] = c * rp - s * rq
    a[q, :] = s * rp + c * rq
    cp = a[:, p].copy()
    cq = a[:, q].copy()
    a[:, p] = c * cp - s * cq
    a[:, q] = s * cp + c * cq
    a[p, q] = 0.0
    a[q, p] = 0.0

    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp - s * vq
    v[:, q] = s * vp + c * vq
