"""Loop synthesis: helices, positive densities for a prescribed tantrix, and class search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cone import ConeCertificate, cone_membership, interior_margin, require_full
from .core import (
    DEFAULT_TOL,
    DimensionError,
    HomotopyClass,
    InputError,
    Lattice,
    RankError,
    SampledArc,
    SkewLoopError,
    ToleranceConfig,
    ZeroVectorError,
    as_vector,
    orthonormal_complement_pair,
)
from .lp import LpProblem, LpStatus, solve_lp
from .tantrix import SkewVerdict, TantrixSamples, avoids_antipodes, is_embedded, is_skew

# Fourier degrees tried, in order, when looking for a smooth density.
SMOOTH_DEGREES = (0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32)
# A smooth density is accepted when its margin is at least this fraction of the nodal optimum.
SMOOTH_MARGIN_FRACTION = 0.25


class NotRealizableError(SkewLoopError):
    """The tantrix cannot realize the requested class.

    ``condition`` is 1 (not embedded), 2 (meets its antipodal image) or 3
    (``g`` not interior to the cone). ``witness`` is a parameter pair for
    conditions 1 and 2; ``certificate`` is the cone certificate for 3.
    """

    def __init__(self, message, condition=3, witness=None, certificate=None):
        super().__init__(message)
        self.condition = condition
        self.witness = witness
        self.certificate = certificate


class NotFoundError(SkewLoopError):
    """No admissible class within the search radius (not a refutation)."""


@dataclass(frozen=True)
class HelixSpec:
    v: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    r: float
    m: int = 512

    def __post_init__(self):
        v = as_vector(self.v, "v")
        u1 = as_vector(self.u1, "u1")
        u2 = as_vector(self.u2, "u2")
        if v.size < 3:
            raise DimensionError("helices need dimension >= 3")
        if u1.shape != v.shape or u2.shape != v.shape:
            raise DimensionError("u1, u2 and v must share a dimension")
        if not np.any(v):
            raise ZeroVectorError("helix axis v must be non-zero")
        if not (np.isfinite(self.r) and self.r > 0):
            raise InputError(f"helix radius must be positive, got {self.r}")
        if int(self.m) < 16:
            raise InputError("helices need at least 16 samples")
        vhat = v / np.linalg.norm(v)
        gram = (abs(u1 @ u2), abs(u1 @ u1 - 1), abs(u2 @ u2 - 1), abs(u1 @ vhat), abs(u2 @ vhat))
        if max(gram) > 1e-12:
            raise InputError("u1, u2 must be orthonormal and perpendicular to v")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)
        object.__setattr__(self, "m", int(self.m))

    @property
    def tantrix_radius(self) -> float:
        return self.r / np.hypot(np.linalg.norm(self.v), self.r)


def helix_arc(spec: HelixSpec) -> SampledArc:
    """Samples of ``t v + r (u1 cos t + u2 sin t)`` at ``m`` equally spaced ``t`` in [0, 2 pi]."""
    k = np.arange(spec.m)
    t = 2.0 * np.pi * k / (spec.m - 1)
    # periodic part evaluated at k mod (m-1) so the endpoints differ by exactly 2 pi v
    tp = 2.0 * np.pi * (k % (spec.m - 1)) / (spec.m - 1)
    samples = t[:, None] * spec.v + spec.r * (np.cos(tp)[:, None] * spec.u1 + np.sin(tp)[:, None] * spec.u2)
    samples[-1] = samples[0] + 2.0 * np.pi * spec.v
    return SampledArc(samples, k / (spec.m - 1))


def helix_spec_for_class(g, r: float, m: int = 512) -> HelixSpec:
    g = as_vector(g, "g")
    u1, u2 = orthonormal_complement_pair(g)
    return HelixSpec(g / (2.0 * np.pi), u1, u2, r, m)


def helix_loop_for_class(g, r: float, m: int = 512) -> SampledArc:
    """Helix whose endpoints differ by exactly ``g``, so it closes up in R^n/G in class ``g``."""
    return helix_arc(helix_spec_for_class(g, r, m))


@dataclass(frozen=True)
class DensityProfile:
    """Positive nodal density, periodic over the tantrix parameters."""

    values: np.ndarray
    margin: float = None
    degree: int | None = None

    def __post_init__(self):
        values = as_vector(self.values, "density values")
        if np.any(values <= 0):
            raise InputError("densities must be strictly positive")
        object.__setattr__(self, "values", values)
        if self.margin is None:
            object.__setattr__(self, "margin", float(values.min()))

    def scaled(self, factor: float) -> "DensityProfile":
        return DensityProfile(self.values * factor, self.margin * factor, self.degree)


def _segments(tx: TantrixSamples):
    h = np.diff(np.append(tx.params, 1.0))
    return h, tx.dirs, np.roll(tx.dirs, -1, axis=0)


def quadrature_vectors(tx: TantrixSamples) -> np.ndarray:
    """Rows ``w_j`` with ``integral(mu tau) = sum_j mu_j w_j`` for piecewise-linear ``mu`` and ``tau``.

    Segment ``[t_j, t_{j+1}]`` of length ``h`` contributes
    ``h/6 (mu_j (2 tau_j + tau_{j+1}) + mu_{j+1} (tau_j + 2 tau_{j+1}))``.
    """
    h, tau, tau_next = _segments(tx)
    own = h[:, None] / 6.0 * (2.0 * tau + tau_next)
    nxt = h[:, None] / 6.0 * (tau + 2.0 * tau_next)
    return own + np.roll(nxt, 1, axis=0)


def _trig_basis(params, degree):
    cols = [np.ones_like(params)]
    for k in range(1, degree + 1):
        cols.append(np.cos(2.0 * np.pi * k * params))
        cols.append(np.sin(2.0 * np.pi * k * params))
    return np.column_stack(cols)


def _smooth_density(w, g, params, degree, cap):
    """Max-min density restricted to trigonometric polynomials of the given degree."""
    phi = _trig_basis(params, degree)
    m, nb = phi.shape
    n = w.shape[1]
    # variables: coefficients (free), delta (free), s (m), slack for delta <= cap
    nv = nb + 1 + m + 1
    a = np.zeros((n + m + 1, nv))
    a[:n, :nb] = w.T @ phi
    a[n:n + m, :nb] = phi
    a[n:n + m, nb] = -1.0
    a[n:n + m, nb + 1:nb + 1 + m] = -np.eye(m)
    a[-1, nb] = 1.0
    a[-1, -1] = 1.0
    b = np.concatenate([g, np.zeros(m), [cap]])
    c = np.zeros(nv)
    c[nb] = 1.0
    lower = np.zeros(nv)
    lower[:nb + 1] = -np.inf
    sol = solve_lp(LpProblem(c, a, b, lower))
    if sol.status is not LpStatus.OPTIMAL:
        return None, -np.inf
    return phi @ sol.x[:nb], float(sol.x[nb])


def _polish(mu, w, g, floor):
    """Remove the equality residual with a minimum-norm correction if it keeps ``mu >= floor``."""
    for _ in range(2):
        resid = g - mu @ w
        if np.max(np.abs(resid)) <= 1e-14 * max(1.0, np.abs(g).max()):
            break
        step = np.linalg.lstsq(w.T, resid, rcond=None)[0]
        if np.min(mu + step) < floor:
            break
        mu = mu + step
    return mu


def solve_density(tx: TantrixSamples, g, tol: ToleranceConfig = DEFAULT_TOL) -> DensityProfile:
    """Positive nodal density ``mu`` whose exact piecewise-linear integral of ``mu tau`` is ``g``.

    The nodal max-min LP decides realizability. The returned profile is the
    lowest-degree trigonometric density whose own max-min margin is within a
    fixed fraction of the nodal optimum; smooth densities keep the
    synthesized arc's tantrix faithful to ``tx`` between nodes. If none
    qualifies the nodal optimum itself is returned.
    """
    require_full(tx.dirs, tol)
    g = as_vector(g, "g")
    if g.shape != (tx.dimension,):
        raise DimensionError("g does not match the tantrix dimension")
    w = quadrature_vectors(tx)
    nodal = interior_margin(g, w)
    if nodal.delta <= tol.delta_int:
        cert = cone_membership(g, tx.dirs, tol)
        raise NotRealizableError(
            f"no positive density reaches g (margin {nodal.delta:.3e})", condition=3, certificate=cert
        )
    m = len(tx)
    for degree in SMOOTH_DEGREES:
        if 2 * degree + 1 > m:
            break
        mu, delta = _smooth_density(w, g, tx.params, degree, nodal.delta)
        if mu is not None and delta >= SMOOTH_MARGIN_FRACTION * nodal.delta and delta > tol.delta_int:
            mu = _polish(mu, w, g, tol.delta_int)
            return DensityProfile(mu, float(mu.min()), degree)
    mu = _polish(nodal.weights, w, g, tol.delta_int)
    return DensityProfile(mu, float(mu.min()), None)


def integrate_loop(tx: TantrixSamples, mu: DensityProfile) -> SampledArc:
    """Cumulative exact quadrature of ``mu tau`` from 0 to every node; the arc starts at the origin."""
    if mu.values.shape != (len(tx),):
        raise DimensionError("density and tantrix sample counts differ")
    h, tau, tau_next = _segments(tx)
    mv = mu.values
    mv_next = np.roll(mv, -1)
    steps = h[:, None] / 6.0 * (
        mv[:, None] * (2.0 * tau + tau_next) + mv_next[:, None] * (tau + 2.0 * tau_next)
    )
    samples = np.vstack([np.zeros(tx.dimension), np.cumsum(steps, axis=0)])
    return SampledArc(samples, np.append(tx.params, 1.0))


@dataclass(frozen=True)
class Realization:
    arc: SampledArc
    verdict: SkewVerdict
    certificate: ConeCertificate
    density: DensityProfile


def _lattice_coeffs(g, lattice: Lattice, atol=1e-9):
    coords, resid = lattice.coordinates(g)
    if resid > atol or np.any(np.abs(coords - np.round(coords)) > atol):
        raise InputError("g is not an element of the lattice")
    return np.round(coords).astype(int)


def realize_skew_loop(tx: TantrixSamples, g, lattice: Lattice, tol: ToleranceConfig = DEFAULT_TOL) -> Realization:
    """Build a g-homotopic skew loop in R^n/G with tantrix ``tx``, or say which condition fails.

    The three conditions are checked in order: embedded tantrix, no antipodal
    contact, ``g`` interior to the cone over the tantrix.
    """
    g = as_vector(g, "g")
    if g.shape != (tx.dimension,) or lattice.dimension != tx.dimension:
        raise DimensionError("g, lattice and tantrix dimensions disagree")
    _lattice_coeffs(g, lattice)
    require_full(tx.dirs, tol)
    ok, witness = is_embedded(tx, tol)
    if not ok:
        raise NotRealizableError("tantrix is not embedded", condition=1, witness=witness)
    ok, witness = avoids_antipodes(tx, tol)
    if not ok:
        raise NotRealizableError("tantrix meets its antipodal image", condition=2, witness=witness)
    cert = cone_membership(g, tx.dirs, tol)
    if not cert.is_interior:
        raise NotRealizableError(f"g is not interior to the cone ({cert.verdict.value})", condition=3, certificate=cert)
    density = solve_density(tx, g, tol)
    arc = integrate_loop(tx, density)
    return Realization(arc, is_skew(arc.as_loop(), tol), cert, density)


def find_lattice_class(tx: TantrixSamples, lattice: Lattice, search_radius: int, tol: ToleranceConfig = DEFAULT_TOL):
    """All classes with coefficients in ``[-R, R]`` whose lattice vector is interior to the cone.

    Sorted by the length of the lattice vector, then lexicographically.
    """
    dirs = require_full(tx.dirs, tol)
    if lattice.dimension != tx.dimension:
        raise DimensionError("lattice and tantrix dimensions disagree")
    if lattice.rank != lattice.dimension:
        raise RankError(f"class search needs a full-rank lattice, got rank {lattice.rank} in R^{lattice.dimension}")
    if search_radius < 0:
        raise InputError("search radius must be non-negative")
    found = []
    for coeffs in itertools.product(range(-search_radius, search_radius + 1), repeat=lattice.rank):
        g = lattice.element(coeffs)
        if interior_margin(g, dirs).delta > tol.delta_int:
            found.append((float(np.linalg.norm(g)), coeffs))
    if not found:
        raise NotFoundError(f"no admissible class with coefficients in [-{search_radius}, {search_radius}]")
    found.sort()
    return [HomotopyClass(c) for _, c in found]
