"""Test curves and random instance generators shared by the test modules."""

import numpy as np

from skewloops.core import SampledLoop, random_rotation, uniform_params
from skewloops.tantrix import TantrixSamples

TAU = 2 * np.pi


def circle_loop(m, radius=1.0, n=2):
    t = uniform_params(m)
    pts = np.zeros((m, n))
    pts[:, 0] = radius * np.cos(TAU * t)
    pts[:, 1] = radius * np.sin(TAU * t)
    return SampledLoop(pts)


def ellipse_loop(m, a=2.0, b=1.0, n=3):
    t = uniform_params(m)
    pts = np.zeros((m, n))
    pts[:, 0] = a * np.cos(TAU * t)
    pts[:, 1] = b * np.sin(TAU * t)
    return SampledLoop(pts)


def cap_circle(m, colatitude, axis=(0.0, 0.0, 1.0)):
    """Small circle at the given colatitude about ``axis`` (a unit vector in R^3)."""
    t = uniform_params(m)
    s, c = np.sin(colatitude), np.cos(colatitude)
    local = np.column_stack([s * np.cos(TAU * t), s * np.sin(TAU * t), np.full(m, c)])
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    if np.allclose(axis, [0, 0, 1]):
        return TantrixSamples.normalized(local)
    # rotation taking e3 to axis (Rodrigues)
    e3 = np.array([0.0, 0.0, 1.0])
    v = np.cross(e3, axis)
    cth = e3 @ axis
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    rot = np.eye(3) + vx + vx @ vx / (1 + cth)
    return TantrixSamples.normalized(local @ rot.T)


def great_circle(m):
    return cap_circle(m, np.pi / 2)


def figure_eight(m):
    """Spherical figure-eight crossing itself at the north pole at t = 0 and t = 1/2."""
    t = uniform_params(m)
    v = np.column_stack([0.5 * np.sin(TAU * t), 0.5 * np.sin(2 * TAU * t), np.ones(m)])
    return TantrixSamples.normalized(v)


def star_cap(rng, m, cap_range=(0.25, 1.25), wobble=0.08):
    """Star-shaped cap boundary with mild wobble about a random pole; returns (tantrix, pole).

    The boundary is written in a random rotated frame whose third axis is the
    pole, with gnomonic radius ``tan(cap) * (1 + a1 cos(phi + p1) + a2 cos(2 phi + p2))``.
    """
    cap = rng.uniform(*cap_range)
    a = rng.uniform(-wobble, wobble, 2)
    ph = rng.uniform(0, TAU, 2)
    phi = TAU * uniform_params(m)
    rho = np.tan(cap) * (1 + a[0] * np.cos(phi + ph[0]) + a[1] * np.cos(2 * phi + ph[1]))
    v = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), np.ones(m)])
    q = random_rotation(3, rng)
    return TantrixSamples.normalized(v @ q.T), q[:, 2]


def star_tantrix(rng, m):
    """Randomly rotated star-shaped cap boundary with mild wobble (bounded bending)."""
    return star_cap(rng, m)[0]


def random_smooth_loop(rng, m, n=3, harmonics=3):
    """Random trigonometric loop in R^n; generically immersed."""
    t = uniform_params(m)
    pts = np.zeros((m, n))
    for k in range(1, harmonics + 1):
        a = rng.standard_normal(n) / k
        b = rng.standard_normal(n) / k
        pts += np.outer(np.cos(TAU * k * t), a) + np.outer(np.sin(TAU * k * t), b)
    return SampledLoop(pts)


def cap_directions(rng, n, m, center=None, half_angle=None):
    """``m`` unit vectors within a random angular radius of a random center."""
    if center is None:
        center = rng.standard_normal(n)
    center = center / np.linalg.norm(center)
    if half_angle is None:
        half_angle = rng.uniform(0.2, 2.0)
    out = []
    while len(out) < m:
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        if np.arccos(np.clip(v @ center, -1, 1)) <= half_angle:
            out.append(v)
    return np.array(out)


def cone_instance(rng):
    """Random cone-membership instance: n in {2, 3}, 8..128 directions from a random cap."""
    n = int(rng.choice([2, 3]))
    m = int(rng.integers(8, 129))
    dirs = cap_directions(rng, n, m)
    g = rng.standard_normal(n)
    g *= rng.uniform(0.1, 3) / np.linalg.norm(g)
    return dirs, g
