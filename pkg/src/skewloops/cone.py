"""Membership in the interior of the convex cone over a finite direction set.

For a full direction set, ``g`` is interior iff ``g = sum_i lam_i d_i`` with
every ``lam_i > 0``. The primary LP maximizes the smallest weight ``delta``
with ``delta`` free, so its optimum is a signed margin: positive inside,
zero on the boundary, negative outside. Non-interior answers come with a
unit normal ``u`` satisfying ``u.g <= 0 <= u.d_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import DEFAULT_TOL, DimensionError, FullnessError, InputError, ToleranceConfig, as_points, as_vector, pivoted_rank
from .lp import LpProblem, LpStatus, solve_lp

CERT_TOL = 1e-8


class Verdict(str, Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


class OracleVerdict(str, Enum):
    INTERIOR = "Interior"
    NOT_INTERIOR = "NotInterior"


@dataclass(frozen=True)
class ConeCertificate:
    verdict: Verdict
    margin: float
    weights: np.ndarray | None = None
    delta: float | None = None
    normal: np.ndarray | None = None

    @property
    def is_interior(self) -> bool:
        return self.verdict is Verdict.INTERIOR

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict.value, "margin": float(self.margin)}
        if self.weights is not None:
            out["weights"] = [float(w) for w in self.weights]
            out["delta"] = float(self.delta)
        if self.normal is not None:
            out["normal"] = [float(u) for u in self.normal]
        return out


@dataclass(frozen=True)
class InteriorMargin:
    delta: float
    weights: np.ndarray
    unbounded: bool = False


def _directions(dirs, g=None):
    d = as_points(dirs, "dirs")
    if g is not None:
        g = as_vector(g, "g")
        if g.shape != (d.shape[1],):
            raise DimensionError(f"g has dimension {g.size}, directions have {d.shape[1]}")
    return d, g


def fullness_rank(dirs, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    return pivoted_rank(as_points(dirs, "dirs"), tol.eps_rank)


def require_full(dirs, tol: ToleranceConfig = DEFAULT_TOL):
    d = as_points(dirs, "dirs")
    rank = fullness_rank(d, tol)
    if rank != d.shape[1]:
        raise FullnessError(f"directions span a {rank}-dimensional subspace of R^{d.shape[1]}", rank, d.shape[1])
    return d


def interior_margin(g, dirs) -> InteriorMargin:
    """Solve ``max delta`` s.t. ``sum lam_i d_i = g``, ``lam_i >= delta`` (delta free).

    With ``lam_i = delta + s_i`` the equality reads ``delta * sum(d) + D s = g``.
    When the cone is all of R^n the LP is unbounded; it is then re-solved with
    ``delta <= 1`` to obtain concrete positive weights.
    """
    d, g = _directions(dirs, g)
    m, n = d.shape
    a = np.hstack([d.sum(axis=0)[:, None], d.T])
    c = np.zeros(m + 1)
    c[0] = 1.0
    lower = np.zeros(m + 1)
    lower[0] = -np.inf
    sol = solve_lp(LpProblem(c, a, g, lower))
    unbounded = sol.status is LpStatus.UNBOUNDED
    if unbounded:
        cap = np.zeros((1, m + 2))
        cap[0, 0] = cap[0, -1] = 1.0
        a_cap = np.vstack([np.hstack([a, np.zeros((n, 1))]), cap])
        sol = solve_lp(LpProblem(np.append(c, 0.0), a_cap, np.append(g, 1.0), np.append(lower, 0.0)))
    if sol.status is not LpStatus.OPTIMAL:
        # only possible for a non-spanning direction set
        raise FullnessError("interior LP has no solution; directions do not span")
    delta = float(sol.x[0])
    return InteriorMargin(delta, delta + sol.x[1:m + 1], unbounded)


def _normal_lp(g, d, min_clearance=None):
    """Normal ``u`` with ``u . mean(d) = 1`` and ``u . d_i >= 0``-type constraints.

    Without ``min_clearance``: maximize ``t`` s.t. ``u.d_i >= t``, ``u.g <= 0``.
    With it: minimize ``u.g`` s.t. ``u.d_i >= min_clearance``.
    The normalization row excludes ``u = 0``; the slice of the dual cone it
    cuts out is compact because ``mean(d)`` is interior to a full cone.
    """
    m, n = d.shape
    center = d.mean(axis=0)
    if min_clearance is None:
        # variables: u (n, free), t (free), s (m), w
        nv = n + 1 + m + 1
        a = np.zeros((m + 2, nv))
        a[:m, :n] = d
        a[:m, n] = -1.0
        a[:m, n + 1:n + 1 + m] = -np.eye(m)
        a[m, :n] = g
        a[m, -1] = 1.0
        a[m + 1, :n] = center
        b = np.zeros(m + 2)
        b[m + 1] = 1.0
        c = np.zeros(nv)
        c[n] = 1.0
        lower = np.zeros(nv)
        lower[:n + 1] = -np.inf
    else:
        # variables: u (n, free), s (m)
        nv = n + m
        a = np.zeros((m + 1, nv))
        a[:m, :n] = d
        a[:m, n:] = -np.eye(m)
        a[m, :n] = center
        b = np.append(np.full(m, min_clearance), 1.0)
        c = np.concatenate([-g, np.zeros(m)])
        lower = np.zeros(nv)
        lower[:n] = -np.inf
    sol = solve_lp(LpProblem(c, a, b, lower))
    if sol.status is not LpStatus.OPTIMAL:
        return None, None
    u = sol.x[:n]
    t = float(sol.x[n]) if min_clearance is None else float(np.min(d @ u))
    return u, t


def separating_normal(g, dirs, strict: bool = False):
    """Unit normal ``u`` with ``u.g <= 0`` maximizing ``min_i u.d_i``.

    With ``strict`` the normal is then tilted to make ``u.g`` as negative as
    possible while keeping half of the optimal clearance.
    """
    d, g = _directions(dirs, g)
    u, t = _normal_lp(g, d)
    if u is None:
        return None
    if strict and u @ g >= -CERT_TOL * np.linalg.norm(u):
        tilted, _ = _normal_lp(g, d, min_clearance=max(t, 0.0) / 2.0)
        if tilted is not None and tilted @ g / np.linalg.norm(tilted) < u @ g / np.linalg.norm(u):
            u = tilted
    return u / np.linalg.norm(u)


def cone_membership(g, dirs, tol: ToleranceConfig = DEFAULT_TOL) -> ConeCertificate:
    """Classify ``g`` against the interior of the convex cone over ``dirs``.

    Interior when the max-min weight exceeds ``delta_int``; otherwise a
    separating normal is attached and the verdict is Boundary when ``g`` lies
    in the closed cone up to the band, Outside when the normal strictly
    separates.
    """
    d = require_full(dirs, tol)
    d, g = _directions(d, g)
    lp = interior_margin(g, d)
    if lp.delta > tol.delta_int:
        return ConeCertificate(Verdict.INTERIOR, lp.delta, weights=lp.weights, delta=lp.delta)
    feasible = lp.delta >= -tol.delta_int
    u = separating_normal(g, d, strict=not feasible)
    if u is None:
        raise RuntimeError("separation LP failed for a non-interior point")
    if feasible or u @ g >= -CERT_TOL:
        verdict = Verdict.BOUNDARY if abs(u @ g) <= CERT_TOL else Verdict.OUTSIDE
    else:
        verdict = Verdict.OUTSIDE
    return ConeCertificate(verdict, lp.delta, normal=u)


def certificate_is_sound(cert: ConeCertificate, g, dirs, atol: float = CERT_TOL) -> bool:
    """Check a certificate against ``g`` and ``dirs`` without consulting any solver."""
    d, g = _directions(dirs, g)
    if cert.verdict is Verdict.INTERIOR:
        w = cert.weights
        return bool(
            w is not None
            and w.shape == (d.shape[0],)
            and cert.delta > 0
            and np.all(w >= cert.delta)
            and np.max(np.abs(w @ d - g)) <= atol
        )
    u = cert.normal
    if u is None or abs(np.linalg.norm(u) - 1.0) > 1e-9 or np.min(d @ u) < -atol:
        return False
    if cert.verdict is Verdict.BOUNDARY:
        return bool(abs(u @ g) <= atol)
    return bool(u @ g < -atol)


def sphere_grid(n: int, size: int) -> np.ndarray:
    """Quasi-uniform unit vectors: an angle grid on S^1, a Fibonacci lattice on S^2."""
    k = np.arange(size)
    if n == 2:
        theta = 2.0 * np.pi * k / size
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if n == 3:
        z = 1.0 - (2.0 * k + 1.0) / size
        rho = np.sqrt(1.0 - z * z)
        phi = k * np.pi * (3.0 - np.sqrt(5.0))
        return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    raise DimensionError(f"grid oracle supports n in {{2, 3}}, got {n}")


def brute_force_membership(g, dirs, grid_size: int = 20000, slack: float = 1e-6) -> OracleVerdict:
    """Grid-search oracle: not interior iff some grid normal (nearly) separates ``g``."""
    d, g = _directions(dirs, g)
    n = d.shape[1]
    if n not in (2, 3):
        raise DimensionError(f"grid oracle supports n in {{2, 3}}, got {n}")
    if grid_size < 1000:
        raise InputError("grid_size must be at least 1000")
    u = sphere_grid(n, grid_size)
    separating = (u @ g <= slack) & ((u @ d.T).min(axis=1) >= -slack)
    return OracleVerdict.NOT_INTERIOR if separating.any() else OracleVerdict.INTERIOR


def _hull_then_scale_margin(probe, d) -> float:
    """Max-min hull weight for ``sum w_i d_i = s * probe``, ``sum w_i = 1``, ``w_i, s >= delta``."""
    m, n = d.shape
    # variables: delta (free), e_i = w_i - delta >= 0, f = s - delta >= 0
    a = np.zeros((n + 1, m + 2))
    a[:n, 0] = d.sum(axis=0) - probe
    a[:n, 1:m + 1] = d.T
    a[:n, -1] = -probe
    a[n, 0] = m
    a[n, 1:m + 1] = 1.0
    b = np.append(np.zeros(n), 1.0)
    c = np.zeros(m + 2)
    c[0] = 1.0
    lower = np.zeros(m + 2)
    lower[0] = -np.inf
    sol = solve_lp(LpProblem(c, a, b, lower))
    if sol.status is LpStatus.OPTIMAL:
        return float(sol.x[0])
    return -np.inf


def _classify(margin, band):
    if margin > band:
        return Verdict.INTERIOR
    if margin >= -band:
        return Verdict.BOUNDARY
    return Verdict.OUTSIDE


def hull_cone_verdicts(points, probes, tol: ToleranceConfig = DEFAULT_TOL):
    """Per-probe verdicts for the hull of the cone and the cone of the hull."""
    d = require_full(points, tol)
    out = []
    for probe in as_points(probes, "probes"):
        if probe.shape != (d.shape[1],):
            raise DimensionError("probe dimension does not match points")
        first = _classify(interior_margin(probe, d).delta, tol.delta_int)
        second = _classify(_hull_then_scale_margin(probe, d), tol.delta_int)
        out.append((first, second))
    return out


def hull_cone_commutation_check(points, probes, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff both constructions agree on every probe; a Boundary verdict on either side is a tie."""
    for first, second in hull_cone_verdicts(points, probes, tol):
        if first != second and Verdict.BOUNDARY not in (first, second):
            return False
    return True
