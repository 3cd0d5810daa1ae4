"""Geometric value types, tolerance policy and resampling shared by the package.

Curves are stored as numpy arrays of shape ``(m, n)``. Closed curves carry no
duplicated closing sample; the sample after the last one is the first sample
translated by ``shift`` (zero for loops in R^n, a lattice vector for loops in
a flat quotient R^n/G).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class SkewLoopError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SkewLoopError, ValueError):
    """Malformed or non-finite input."""


class DimensionError(InputError):
    pass


class ZeroVectorError(InputError):
    pass


class ImmersionError(SkewLoopError):
    """Consecutive samples (or a central difference) collapse below eps_imm."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class FullnessError(SkewLoopError):
    """A direction set does not span R^n."""

    def __init__(self, message, rank=None, dimension=None):
        super().__init__(message)
        self.rank = rank
        self.dimension = dimension


class RankError(SkewLoopError):
    pass


@dataclass(frozen=True)
class ToleranceConfig:
    eps_imm: float = 1e-12
    eps_rank: float = 1e-10
    eps_emb: float = 1e-8
    delta_int: float = 1e-9
    eps_close: float = 1e-8
    eps_tan: float = 1e-6
    eps_hemi: float = 1e-3

    def __post_init__(self):
        for name, value in vars(self).items():
            if not (np.isfinite(value) and value > 0):
                raise InputError(f"tolerance {name} must be finite and positive, got {value!r}")


DEFAULT_TOL = ToleranceConfig()


def as_vector(x, name="vector") -> np.ndarray:
    """Return ``x`` as a finite 1-d float array (a read-only copy)."""
    v = np.array(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InputError(f"{name} must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(v)):
        raise InputError(f"{name} has non-finite coordinates")
    v.setflags(write=False)
    return v


def as_points(x, name="points") -> np.ndarray:
    a = np.array(x, dtype=float)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise InputError(f"{name} must be a non-empty (m, n) array")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} has non-finite coordinates")
    a.setflags(write=False)
    return a


def uniform_params(m: int, closed: bool = True) -> np.ndarray:
    """Equally spaced parameters: ``k/m`` for loops, ``k/(m-1)`` for arcs."""
    if closed:
        return np.arange(m) / m
    return np.linspace(0.0, 1.0, m)


def _check_params(params, m, closed):
    if params.shape != (m,):
        raise InputError(f"expected {m} parameters, got shape {params.shape}")
    if params[0] != 0.0:
        raise InputError("params[0] must be 0")
    if np.any(np.diff(params) <= 0):
        raise InputError("params must be strictly increasing")
    if closed and params[-1] >= 1.0:
        raise InputError("loop params must lie in [0, 1)")
    if not closed and params[-1] != 1.0:
        raise InputError("arc params must end at 1")


@dataclass(frozen=True)
class SampledLoop:
    """Closed immersed curve sampled at ``params`` in [0, 1).

    ``shift`` is the lift displacement: the curve continues past the last
    sample into ``samples[0] + shift`` at parameter 1.
    """

    samples: np.ndarray
    params: np.ndarray = None
    shift: np.ndarray = None
    tol: ToleranceConfig = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        samples = as_points(self.samples, "samples")
        m, n = samples.shape
        if m < 3:
            raise InputError(f"a loop needs at least 3 samples, got {m}")
        params = uniform_params(m) if self.params is None else as_vector(self.params, "params")
        _check_params(params, m, closed=True)
        shift = np.zeros(n) if self.shift is None else np.array(as_vector(self.shift, "shift"))
        if shift.shape != (n,):
            raise DimensionError("shift dimension does not match samples")
        shift.setflags(write=False)
        steps = np.linalg.norm(np.diff(samples, axis=0, append=(samples[0] + shift)[None]), axis=1)
        bad = np.flatnonzero(steps <= self.tol.eps_imm)
        if bad.size:
            raise ImmersionError(f"samples {bad[0]} and {(bad[0] + 1) % m} coincide", index=int(bad[0]))
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "shift", shift)

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    def __len__(self):
        return self.samples.shape[0]

    def transformed(self, matrix=None, offset=None) -> "SampledLoop":
        """Apply ``x -> matrix @ x + offset`` to the samples (shift is rotated only)."""
        samples, shift = self.samples, self.shift
        if matrix is not None:
            matrix = np.asarray(matrix, dtype=float)
            samples, shift = samples @ matrix.T, matrix @ shift
        if offset is not None:
            samples = samples + np.asarray(offset, dtype=float)
        return SampledLoop(samples, self.params, shift, self.tol)


@dataclass(frozen=True)
class SampledArc:
    """Open arc sampled at ``params`` in [0, 1], both endpoints included."""

    samples: np.ndarray
    params: np.ndarray = None
    tol: ToleranceConfig = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        samples = as_points(self.samples, "samples")
        m = samples.shape[0]
        if m < 2:
            raise InputError("an arc needs at least 2 samples")
        params = uniform_params(m, closed=False) if self.params is None else as_vector(self.params, "params")
        _check_params(params, m, closed=False)
        steps = np.linalg.norm(np.diff(samples, axis=0), axis=1)
        bad = np.flatnonzero(steps <= self.tol.eps_imm)
        if bad.size:
            raise ImmersionError(f"samples {bad[0]} and {bad[0] + 1} coincide", index=int(bad[0]))
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "params", params)

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    def __len__(self):
        return self.samples.shape[0]

    @property
    def displacement(self) -> np.ndarray:
        return self.samples[-1] - self.samples[0]

    def as_loop(self) -> SampledLoop:
        """The projected loop in R^n/G: drop the closing sample, keep its offset as shift."""
        return SampledLoop(self.samples[:-1], self.params[:-1], self.displacement, self.tol)


@dataclass(frozen=True)
class Lattice:
    """Discrete translation group generated by ``r <= n`` independent rows."""

    generators: np.ndarray
    dimension: int = None
    tol: ToleranceConfig = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        gens = np.array(self.generators, dtype=float)
        if gens.size == 0:
            if self.dimension is None:
                raise InputError("a rank-0 lattice needs an explicit dimension")
            gens = np.zeros((0, int(self.dimension)))
        if gens.ndim != 2 or not np.all(np.isfinite(gens)):
            raise InputError("generators must be a finite (r, n) array")
        r, n = gens.shape
        if self.dimension is not None and n != self.dimension:
            raise DimensionError(f"generators live in R^{n}, lattice declared in R^{self.dimension}")
        if r > n:
            raise RankError(f"{r} generators cannot be independent in R^{n}")
        if r and pivoted_rank(gens, self.tol.eps_rank) != r:
            raise RankError("lattice generators are linearly dependent")
        gens.setflags(write=False)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "dimension", n)

    @classmethod
    def integer(cls, n: int) -> "Lattice":
        """The standard lattice Z^n."""
        return cls(np.eye(n))

    @property
    def rank(self) -> int:
        return self.generators.shape[0]

    def element(self, coeffs) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (self.rank,):
            raise DimensionError(f"expected {self.rank} coefficients")
        return coeffs.astype(float) @ self.generators

    def coordinates(self, p) -> tuple[np.ndarray, float]:
        """Generator-basis coordinates of the projection of ``p`` onto the span, and the residual norm."""
        p = as_vector(p, "point")
        if p.shape != (self.dimension,):
            raise DimensionError("point dimension does not match lattice")
        if self.rank == 0:
            return np.zeros(0), float(np.linalg.norm(p))
        c = np.linalg.pinv(self.generators.T) @ p
        return c, float(np.linalg.norm(c @ self.generators - p))


@dataclass(frozen=True)
class HomotopyClass:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def element(self, lattice: Lattice) -> np.ndarray:
        return lattice.element(self.coeffs)

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)


def pivoted_rank(matrix, eps_rank: float = DEFAULT_TOL.eps_rank) -> int:
    """Numerical rank by Gaussian elimination with complete pivoting.

    Elimination stops once the largest remaining entry is at most
    ``eps_rank`` times the largest entry of the input.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2:
        raise InputError("expected a 2-d matrix")
    scale = np.abs(a).max(initial=0.0)
    if scale == 0.0:
        return 0
    threshold = eps_rank * scale
    rank = 0
    for _ in range(min(a.shape)):
        sub = np.abs(a[rank:, rank:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= threshold:
            break
        i += rank
        j += rank
        a[[rank, i]] = a[[i, rank]]
        a[:, [rank, j]] = a[:, [j, rank]]
        below = a[rank + 1:, rank] / a[rank, rank]
        a[rank + 1:, rank:] -= np.outer(below, a[rank, rank:])
        rank += 1
    return rank


def resample_uniform(loop: SampledLoop, m_new: int) -> SampledLoop:
    """Piecewise-linear resampling of ``loop`` at ``m_new`` equally spaced parameters."""
    if m_new < 3:
        raise InputError(f"resampling needs at least 3 samples, got {m_new}")
    closed_samples = np.vstack([loop.samples, loop.samples[0] + loop.shift])
    closed_params = np.append(loop.params, 1.0)
    targets = uniform_params(m_new)
    seg = np.clip(np.searchsorted(closed_params, targets, side="right") - 1, 0, len(loop) - 1)
    t0, t1 = closed_params[seg], closed_params[seg + 1]
    w = ((targets - t0) / (t1 - t0))[:, None]
    out = (1.0 - w) * closed_samples[seg] + w * closed_samples[seg + 1]
    # exact hits reproduce input samples bit-for-bit
    hit = w[:, 0] == 0.0
    out[hit] = closed_samples[seg[hit]]
    return SampledLoop(out, targets, loop.shift, loop.tol)


def orthonormal_complement_pair(g) -> tuple[np.ndarray, np.ndarray]:
    """Two orthonormal vectors perpendicular to ``g``.

    The standard basis vectors are orthogonalized against ``g`` (and against
    earlier survivors) in index order; the first two survivors are returned.
    Each projection is applied twice so orthogonality holds to rounding.
    """
    g = as_vector(g, "g")
    n = g.size
    if n < 3:
        raise DimensionError(f"need dimension >= 3 for a complement pair, got {n}")
    norm = np.linalg.norm(g)
    if norm == 0.0:
        raise ZeroVectorError("g must be non-zero")
    basis = [g / norm]
    for k in range(n):
        v = np.zeros(n)
        v[k] = 1.0
        for _ in range(2):
            for b in basis:
                v -= (v @ b) * b
        length = np.linalg.norm(v)
        if length > 1e-6:
            basis.append(v / length)
        if len(basis) == 3:
            break
    return basis[1], basis[2]


def random_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random orthogonal matrix."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
