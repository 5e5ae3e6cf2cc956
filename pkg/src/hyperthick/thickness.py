"""Average m-dimensional thickness and related functionals of star-shaped bodies.

The central quantity is the mean m-volume of the m-dimensional planar sections
of a body through the origin, averaged over all section orientations. For a
star-shaped body with radial function f this reduces to a solid-angle
integral:

    T(m, n) = (V_m / S_{n-1}) * integral of f^m over the sphere

with V_m the unit m-ball volume and S_{n-1} the sphere area. Volume and
centroid are the analogous integrals of f^n/n and f^{n+1}/(n+1) times the
direction cosines. For bodies given only by an indicator function the same
thickness is estimated by Monte Carlo over the volume element, where each
volume element at distance r contributes proportionally to r^{m-n}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import (
    DegenerateBodyError,
    DomainError,
    InsufficientSamplingError,
)
from .geometry import (
    DirectionGrid,
    cartesian_to_spherical,
    frame_from_pole,
    unit_vectors,
)
from .nsphere import unit_ball_volume, unit_sphere_area

__all__ = [
    "BodyProperties",
    "IndicatorBody",
    "StarShape",
    "average_thickness",
    "axis_section_average",
    "centroid",
    "thickness_montecarlo",
    "volume",
]

ORIGIN_EXCLUSION = 1e-12  # sampling radius below which points are redrawn


class StarShape:
    """Star-shaped body: boundary at radius f(direction) from the origin.

    ``radial_fn`` receives a (B, n-1) array of direction angles and must
    return the (B,) array of boundary radii. Radii are validated to be
    positive and finite on every evaluation; continuity is assumed.
    """

    def __init__(self, dimension: int, radial_fn: Callable, name: str = "custom"):
        if not isinstance(dimension, int) or isinstance(dimension, bool) or dimension < 2:
            raise DomainError(f"shape dimension must be an integer >= 2, got {dimension!r}")
        self.dimension = dimension
        self.name = name
        self._radial_fn = radial_fn

    def __repr__(self):
        return f"StarShape(dimension={self.dimension}, name={self.name!r})"

    def radial(self, angles) -> np.ndarray:
        angles = np.asarray(angles, dtype=float)
        single = angles.ndim == 1
        batch = angles[None, :] if single else angles
        if batch.shape[1] != self.dimension - 1:
            raise DomainError(
                f"expected {self.dimension - 1} angles per direction, got {batch.shape[1]}"
            )
        r = np.asarray(self._radial_fn(batch), dtype=float)
        r = np.broadcast_to(r, (batch.shape[0],)).copy() if r.ndim == 0 else r
        if r.shape != (batch.shape[0],):
            raise DomainError(f"radial function returned shape {r.shape}")
        if not np.all(np.isfinite(r)) or np.any(r <= 0.0):
            raise DomainError("radial function must be positive and finite everywhere")
        return r[0] if single else r

    @staticmethod
    def ball(dimension: int, radius: float = 1.0) -> "StarShape":
        if not (radius > 0.0 and math.isfinite(radius)):
            raise DomainError(f"ball radius must be positive, got {radius!r}")
        return StarShape(
            dimension,
            lambda a: np.full(a.shape[0], float(radius)),
            name=f"ball:{radius:g}",
        )

    @staticmethod
    def cosine_series(dimension: int, cos_coeffs, sin_coeffs=()) -> "StarShape":
        """Radial cosine series in the first angle.

        f = c0 + c1 cos(phi_1) + c2 cos(2 phi_1) + ... (+ s_k sin(k phi_1)).
        For n = 2 the first angle is the full azimuth, so sine terms make
        sense; for n >= 3 it is the polar angle and the shape is axisymmetric
        (sine terms are rejected there).
        """
        cos_coeffs = [float(c) for c in cos_coeffs]
        sin_coeffs = [float(s) for s in sin_coeffs]
        if not cos_coeffs:
            raise DomainError("cosine series needs at least the constant term")
        if sin_coeffs and dimension != 2:
            raise DomainError("sine terms are only meaningful for dimension 2")

        def fn(a, _c=cos_coeffs, _s=sin_coeffs):
            phi = a[:, 0]
            r = np.full(phi.shape, _c[0])
            for k, c in enumerate(_c[1:], start=1):
                if c:
                    r += c * np.cos(k * phi)
            for k, s in enumerate(_s, start=1):
                if s:
                    r += s * np.sin(k * phi)
            return r

        return StarShape(dimension, fn, name="cosine_series")

    def scaled(self, factor: float) -> "StarShape":
        if not (factor > 0.0 and math.isfinite(factor)):
            raise DomainError(f"scale factor must be positive, got {factor!r}")
        return StarShape(
            self.dimension,
            lambda a, _f=float(factor): _f * self.radial(a),
            name=f"{self.name}*{factor:g}",
        )

    def rotated(self, matrix) -> "StarShape":
        """Precompose directions with an orthogonal map (rows act on the right)."""
        q = np.asarray(matrix, dtype=float)
        n = self.dimension
        if q.shape != (n, n):
            raise DomainError(f"rotation matrix must be {n}x{n}, got {q.shape}")
        if not np.allclose(q @ q.T, np.eye(n), atol=1e-10):
            raise DomainError("rotation matrix must be orthogonal")

        def fn(a, _q=q):
            # g(d) = f(Q^T d): the body is carried forward by Q
            world = unit_vectors(a) @ _q
            _, ang = cartesian_to_spherical(world)
            return self.radial(ang)

        return StarShape(n, fn, name=f"{self.name}@rot")

    def bounding_radius(self, scan_resolution: int = 64, pad: float = 1.05) -> float:
        """Upper bound on the radial function from a padded grid scan.

        The pad covers excursions between scan nodes; an overestimate only
        costs Monte Carlo acceptance, never correctness.
        """
        from .geometry import build_grid

        grid = build_grid(self.dimension, scan_resolution)
        top = 0.0
        for ang, _ in grid.iter_blocks():
            top = max(top, float(self.radial(ang).max()))
        return top * pad

    def indicator(self, scan_resolution: int = 64) -> "IndicatorBody":
        """Indicator view of the same body, for the Monte Carlo estimator."""

        def contains(points, _self=self):
            pts = np.asarray(points, dtype=float)
            r, ang = cartesian_to_spherical(pts)
            return r <= _self.radial(ang)

        return IndicatorBody(
            dimension=self.dimension,
            contains=contains,
            bounding_radius=self.bounding_radius(scan_resolution),
        )


@dataclass(frozen=True)
class IndicatorBody:
    """Body known only through membership tests inside a bounding ball.

    ``contains`` maps a (B, n) point array to a (B,) boolean array and must be
    false everywhere outside the bounding ball.
    """

    dimension: int
    contains: Callable
    bounding_radius: float

    def __post_init__(self):
        if not (self.bounding_radius > 0.0 and math.isfinite(self.bounding_radius)):
            raise DomainError(
                f"bounding radius must be positive and finite, got {self.bounding_radius!r}"
            )


@dataclass(frozen=True)
class BodyProperties:
    """Volume, axial first moment, and average thickness of one body.

    ``moment`` is the first moment of volume along the symmetry axis (the
    chart pole); the centroid sits at moment / volume. ``moment_vector``
    carries all n components when they were computed.
    """

    volume: float
    moment: float
    thickness: float
    moment_vector: tuple | None = None


def _check_pair(shape: StarShape, grid: DirectionGrid):
    if grid.dimension != shape.dimension:
        raise DomainError(
            f"grid dimension {grid.dimension} != shape dimension {shape.dimension}"
        )


def average_thickness(shape: StarShape, m: int, grid: DirectionGrid) -> float:
    """Mean m-volume of m-planar sections through the origin."""
    n = shape.dimension
    if not isinstance(m, int) or isinstance(m, bool) or not 1 <= m < n:
        raise DomainError(f"section dimension must satisfy 1 <= m < {n}, got {m!r}")
    _check_pair(shape, grid)
    coef = unit_ball_volume(m) / unit_sphere_area(n - 1)
    total = 0.0
    for ang, w in grid.iter_blocks():
        total += float(np.dot(shape.radial(ang) ** m, w))
    return coef * total


def volume(shape: StarShape, grid: DirectionGrid) -> float:
    n = shape.dimension
    _check_pair(shape, grid)
    total = 0.0
    for ang, w in grid.iter_blocks():
        total += float(np.dot(shape.radial(ang) ** n, w))
    return total / n


def moment_vector(shape: StarShape, grid: DirectionGrid) -> np.ndarray:
    """First moment of volume, all n components (not divided by volume)."""
    n = shape.dimension
    _check_pair(shape, grid)
    acc = np.zeros(n)
    for ang, w in grid.iter_blocks():
        u = unit_vectors(ang)
        acc += (shape.radial(ang) ** (n + 1) * w) @ u
    return acc / (n + 1)


def centroid(shape: StarShape, grid: DirectionGrid) -> np.ndarray:
    v = volume(shape, grid)
    if v <= 0.0:
        raise DegenerateBodyError(f"volume {v!r} admits no centroid")
    return moment_vector(shape, grid) / v


def thickness_montecarlo(
    body: IndicatorBody, m: int, samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo thickness of an indicator body: (estimate, one-sigma stderr).

    Uniform sampling in the bounding ball; each sample contributes
    contains(x) * |x|^(m-n), scaled by m V_m / S_{n-1} times the ball volume.
    Deterministic for a fixed seed. Samples closer than 1e-12 to the origin
    are redrawn (the weight is integrable but not finite pointwise).
    """
    n = body.dimension
    if not isinstance(m, int) or isinstance(m, bool) or not 1 <= m < n:
        raise DomainError(f"section dimension must satisfy 1 <= m < {n}, got {m!r}")
    if not isinstance(samples, int) or samples < 1:
        raise DomainError(f"samples must be a positive integer, got {samples!r}")
    radius = float(body.bounding_radius)
    rng = np.random.default_rng(seed)
    ball_volume = unit_ball_volume(n) * radius**n
    coef = m * unit_ball_volume(m) / unit_sphere_area(n - 1) * ball_volume

    total = 0
    accepted = 0
    acc_sum = 0.0
    acc_sq = 0.0
    chunk = 1_000_000
    while total < samples:
        c = min(chunk, samples - total)
        dirs = rng.standard_normal((c, n))
        norms = np.linalg.norm(dirs, axis=1)
        while np.any(norms < 1e-300):
            bad = norms < 1e-300
            dirs[bad] = rng.standard_normal((int(bad.sum()), n))
            norms = np.linalg.norm(dirs, axis=1)
        radii = radius * rng.random(c) ** (1.0 / n)
        while np.any(radii < ORIGIN_EXCLUSION):
            bad = radii < ORIGIN_EXCLUSION
            radii[bad] = radius * rng.random(int(bad.sum())) ** (1.0 / n)
        pts = dirs * (radii / norms)[:, None]
        inside = np.asarray(body.contains(pts), dtype=bool)
        vals = np.where(inside, radii ** (m - n), 0.0)
        total += c
        accepted += int(inside.sum())
        acc_sum += float(vals.sum())
        acc_sq += float(np.dot(vals, vals))
    if accepted == 0:
        raise InsufficientSamplingError(
            f"no sample of {samples} landed inside the body; "
            "bounding radius may be far too large"
        )
    mean = acc_sum / total
    var = max(acc_sq / total - mean * mean, 0.0)
    if total > 1:
        var *= total / (total - 1)
    return coef * mean, coef * math.sqrt(var / total)


def axis_section_average(shape: StarShape, axis, grid: DirectionGrid) -> float:
    """Average area of planar sections through a fixed axis, n = 3 only.

    Averaging directions in a chart whose pole is the axis cancels the
    1/sqrt(1 - (d.axis)^2) kernel against the chart's own sine density, so
    the integral reduces to f^2 over the two chart angles with uniform
    measure, divided by 2 pi. Averaging this quantity over all axes
    reproduces average_thickness with m = 2. Only the resolution is taken
    from the grid; the aligned rule is built here.
    """
    if shape.dimension != 3:
        raise DomainError("axis-conditional sections are implemented for dimension 3")
    _check_pair(shape, grid)
    axis = np.asarray(axis, dtype=float)
    q = frame_from_pole(axis)  # validates unit length

    n_theta = grid.resolution * grid.refine
    x, w = leggauss(n_theta)
    theta = (x + 1.0) * (math.pi / 2.0)
    w_theta = w * (math.pi / 2.0)
    n_phi = grid.resolution
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    w_phi = 2.0 * math.pi / n_phi

    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    chart = np.stack([tt.reshape(-1), pp.reshape(-1)], axis=1)
    world = unit_vectors(chart) @ q.T
    _, ang = cartesian_to_spherical(world)
    f = shape.radial(ang)
    ww = np.repeat(w_theta, n_phi) * w_phi
    return float(np.dot(f * f, ww)) / (2.0 * math.pi)
