"""Bookkeeping in the quotient R^n/G and the hemisphere region test on S^2."""

from __future__ import annotations

import numpy as np

from .core import (
    DEFAULT_TOL,
    DimensionError,
    HomotopyClass,
    Lattice,
    SampledArc,
    SkewLoopError,
    ToleranceConfig,
    as_vector,
    orthonormal_complement_pair,
)
from .tantrix import TantrixSamples, segment_distances


class NotALoopError(SkewLoopError):
    """The arc's displacement is not a lattice vector, so it does not close up in R^n/G."""


class HemisphereError(SkewLoopError):
    pass


class EmbeddednessError(SkewLoopError):
    pass


def _snap(coords, atol=1e-12):
    near = np.round(coords)
    return np.where(np.abs(coords - near) <= atol * np.maximum(1.0, np.abs(coords)), near, coords)


def reduce_mod_lattice(p, lattice: Lattice):
    """Representative of ``p`` with generator coordinates in [0, 1), and the class removed.

    Directions orthogonal to the generator span are left untouched.
    """
    p = as_vector(p, "p")
    coords, _ = lattice.coordinates(p)
    k = np.floor(_snap(coords)).astype(np.int64)
    rep = p - k.astype(float) @ lattice.generators
    return rep, HomotopyClass(k)


def homotopy_class_of(arc: SampledArc, lattice: Lattice, tol: ToleranceConfig = DEFAULT_TOL, atol: float = 1e-6) -> HomotopyClass:
    if arc.dimension != lattice.dimension:
        raise DimensionError("arc and lattice dimensions disagree")
    coords, resid = lattice.coordinates(arc.displacement)
    near = np.round(coords)
    if resid > atol or np.any(np.abs(coords - near) > atol):
        raise NotALoopError(f"displacement {arc.displacement.tolist()} is not a lattice vector")
    return HomotopyClass(near.astype(np.int64))


def _winding(poly, point):
    """Winding number of a closed planar polygon around ``point`` (crossing rule)."""
    a = poly - point
    b = np.roll(a, -1, axis=0)
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    up = (a[:, 1] <= 0) & (b[:, 1] > 0) & (cross > 0)
    down = (a[:, 1] > 0) & (b[:, 1] <= 0) & (cross < 0)
    return int(up.sum() - down.sum())


def _simple_polygon_gap(poly):
    m = len(poly)
    starts, ends = poly, np.roll(poly, -1, axis=0)
    i, j = np.triu_indices(m, k=2)
    keep = (j - i) < m - 1
    i, j = i[keep], j[keep]
    if i.size == 0:
        return np.inf
    dist, _, _ = segment_distances(starts[i], ends[i], starts[j], ends[j])
    return float(dist.min())


def gnomonic_winding(tx: TantrixSamples, d, pole, tol: ToleranceConfig = DEFAULT_TOL):
    """Centrally project ``tx`` and ``d`` to the tangent plane at ``pole``.

    Returns ``(winding, clearance)``: the winding number of the projected
    polygon about the image of ``d`` and the planar distance from that image
    to the polygon. Central projection sends great circles to lines, so the
    projected polygon is exactly the cross-section of the cone over ``tx``.
    """
    if tx.dimension != 3:
        raise DimensionError("region test is defined on S^2 only")
    d = as_vector(d, "d")
    pole = as_vector(pole, "pole")
    if d.shape != (3,) or pole.shape != (3,):
        raise DimensionError("d and pole must be vectors in R^3")
    pole = pole / np.linalg.norm(pole)
    d = d / np.linalg.norm(d)
    heights = tx.dirs @ pole
    if heights.min() < tol.eps_hemi:
        raise HemisphereError(f"tantrix leaves the open hemisphere about the pole (min height {heights.min():.3e})")
    if d @ pole <= 0:
        raise HemisphereError("direction lies outside the hemisphere about the pole")
    e1, e2 = orthonormal_complement_pair(pole)
    frame = np.column_stack([e1, e2])
    poly = (tx.dirs @ frame) / heights[:, None]
    point = (d @ frame) / (d @ pole)
    if _simple_polygon_gap(poly) <= tol.eps_emb:
        raise EmbeddednessError("projected tantrix polygon is not simple")
    clearance, _, _ = segment_distances(poly, np.roll(poly, -1, axis=0), point[None, :], point[None, :])
    return _winding(poly, point), float(clearance.min())


def region_contains_direction(tx: TantrixSamples, d, pole, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Whether ``d`` lies in the region of S^2 bounded by ``tx`` inside the hemisphere about ``pole``."""
    winding, _ = gnomonic_winding(tx, d, pole, tol)
    return winding != 0
