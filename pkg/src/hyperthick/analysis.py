"""Variational verification tools.

Three independent ways of probing stationarity and optimality:

* sphere_optimality_test perturbs the unit ball with random volume- and
  centroid-preserving radial deformations and confirms the average thickness
  never increases (and drops quadratically in the amplitude);
* nullvector_recover rebuilds the multipliers (lambda, mu vector) from n+2
  boundary samples of a candidate shape via the rank-deficiency of the
  deformation matrix, failing loudly when the shape is not stationary;
* dumbbell_thickness realizes the two-disc configuration showing that with
  the centroid pinned away from the section point the thickness supremum
  2 sqrt(A/pi) is approached but never attained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError, ProjectionError, RankError
from .geometry import DirectionGrid, build_grid, unit_vectors
from .nsphere import unit_ball_volume, unit_sphere_area
from .stationary import StationaryParams, radial_profile
from .thickness import ORIGIN_EXCLUSION, StarShape

__all__ = [
    "DeformationSample",
    "DumbbellConfig",
    "dumbbell_thickness",
    "nullvector_recover",
    "sphere_optimality_test",
    "stationarity_residual",
    "stationary_shape",
]

RANK_THRESHOLD = 1e-8
PROJECTION_TOL = 1e-14


def _check_axis(axis, n):
    a = np.asarray(axis, dtype=float)
    if a.shape != (n,) or abs(np.linalg.norm(a) - 1.0) > 1e-10:
        raise DomainError(f"axis must be a unit vector in R^{n}")
    return a


def stationary_shape(params: StationaryParams) -> StarShape:
    """Radial-function view of a stationary profile, cusp axis along +x1.

    The profile depends on the first angle only (axisymmetry); for n = 2 the
    lone angle is the azimuth, whose cosine plays the same role.
    """

    def radial_fn(angles):
        return radial_profile(params, np.asarray(angles, dtype=float)[:, 0])

    return StarShape(
        params.n, radial_fn, name=f"stationary:{params.shape_class.value}"
    )


def stationarity_residual(
    shape: StarShape, m: int, lam: float, mu: float, axis, grid: DirectionGrid
) -> float:
    """Worst-case relative defect of the stationary equation over the grid.

    Returns max |r^(m-1) - lambda r^(n-1) - mu r^n cos(theta)| / r^(m-1)
    with theta measured from the given axis. Zero (to quadrature rounding)
    exactly when the shape is stationary with these multipliers.
    """
    n = shape.dimension
    if not isinstance(m, int) or isinstance(m, bool) or not 1 <= m < n:
        raise DomainError(f"section dimension must satisfy 1 <= m < {n}, got {m!r}")
    if grid.dimension != n:
        raise DomainError(f"grid dimension {grid.dimension} != shape dimension {n}")
    a = _check_axis(axis, n)
    worst = 0.0
    for ang, _ in grid.iter_blocks():
        r = shape.radial(ang)
        cos_t = unit_vectors(ang) @ a
        lead = r ** (m - 1)
        res = np.abs(lead - lam * r ** (n - 1) - mu * r**n * cos_t) / lead
        worst = max(worst, float(res.max()))
    return worst


@dataclass(frozen=True)
class DeformationSample:
    """n+2 boundary samples of a candidate stationary shape.

    Each point contributes the row (r^(m-1), r^(n-1), r^n u_1, ..., r^n u_n)
    with u the direction cosines; the stationary equation says the vector
    (1, -lambda, -mu_1, ..., -mu_n) annihilates every row, so for a true
    stationary shape the matrix is rank-deficient by exactly one.
    """

    n: int
    m: int
    radii: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        angles = np.asarray(self.angles, dtype=float)
        count = self.n + 2
        if radii.shape != (count,) or angles.shape != (count, self.n - 1):
            raise DomainError(
                f"need exactly n+2 = {count} points with {self.n - 1} angles each"
            )
        if not 1 <= self.m < self.n:
            raise DomainError(f"need 1 <= m < n, got m={self.m}, n={self.n}")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "angles", angles)

    @classmethod
    def from_shape(cls, shape: StarShape, m: int, angles) -> "DeformationSample":
        angles = np.asarray(angles, dtype=float)
        return cls(n=shape.dimension, m=m, radii=shape.radial(angles), angles=angles)

    def matrix(self) -> np.ndarray:
        r = self.radii
        u = unit_vectors(self.angles)
        cols = [r ** (self.m - 1), r ** (self.n - 1)]
        cols.extend(r**self.n * u[:, i] for i in range(self.n))
        return np.stack(cols, axis=1)


def nullvector_recover(
    sample: DeformationSample, threshold: float = RANK_THRESHOLD
) -> tuple[float, np.ndarray, float]:
    """Multipliers (lambda, mu vector) from the null space of the sample matrix.

    The null direction is taken from the SVD and normalized to a leading 1;
    the returned condition number is the smallest over second-smallest
    singular value, the published degeneracy diagnostic. A ratio at or above
    the threshold means the points do not lie on one stationary shape (or are
    degenerate) and raises a rank error carrying the spectrum.
    """
    a = sample.matrix()
    _, s, vt = np.linalg.svd(a)
    if s[0] == 0.0 or not s[-2] > threshold * s[0]:
        # two vanishing singular values: the multipliers are not identifiable
        raise RankError(
            "null space dimension exceeds one; sample directions are degenerate",
            singular_values=s,
        )
    ratio = s[-1] / s[-2]
    if not ratio < threshold:
        raise RankError(
            f"null space is not one-dimensional (sv ratio {ratio:.3e})",
            singular_values=s,
        )
    v = vt[-1]
    if abs(v[0]) < 1e-8 * np.linalg.norm(v):
        raise RankError(
            "null vector has no leading component; points are degenerate",
            singular_values=s,
        )
    v = v / v[0]
    return float(-v[1]), -v[2:].copy(), float(ratio)


# ---------------------------------------------------------------------------
# sphere optimality
# ---------------------------------------------------------------------------


def _random_direction_polynomial(rng, u: np.ndarray, terms: int = 8) -> np.ndarray:
    """Node values of a random polynomial (degree <= 4) in direction cosines,
    scaled to unit max magnitude."""
    b, n = u.shape
    while True:
        p = np.zeros(b)
        for _ in range(terms):
            deg = int(rng.integers(1, 5))
            idx = rng.integers(0, n, size=deg)
            term = rng.standard_normal() * np.ones(b)
            for i in idx:
                term = term * u[:, i]
            p += term
        top = float(np.abs(p).max())
        if top > 1e-9:
            return p / top


def _project_constraints(f, u, w, n, v_target, max_iter=300):
    """Alternate exact volume rescale and first-harmonic centroid shift.

    Both constraints are low-dimensional; at small amplitude the alternation
    contracts by a factor of the amplitude per sweep.
    """
    for _ in range(max_iter):
        vol = float(np.dot(f**n, w)) / n
        f = f * (v_target / vol) ** (1.0 / n)
        mom = ((f ** (n + 1) * w) @ u) / (n + 1)
        g = mom / v_target
        f = f - u @ g
        vol = float(np.dot(f**n, w)) / n
        if abs(vol / v_target - 1.0) <= PROJECTION_TOL and np.abs(g).max() <= PROJECTION_TOL:
            return f
    raise ProjectionError(
        "volume/centroid projection did not converge; amplitude too large?"
    )


def sphere_optimality_test(
    n: int,
    m: int,
    trials: int,
    amplitude: float,
    seed: int,
    resolution: int | None = None,
) -> list[tuple[int, float]]:
    """Thickness change of random constrained perturbations of the unit ball.

    Each trial draws a random radial perturbation (polynomial in the
    direction cosines), restores the ball's volume and a centered centroid by
    alternating projection, and reports deltaT = T_perturbed - T_ball. The
    ball maximizes T under these constraints, so deltaT <= 0 is the expected
    outcome for every trial. Trial randomness derives from (seed, trial), so
    any subset reproduces. The default grid is exact for these polynomial
    integrands; the comparison baseline is the grid value of the ball's own
    thickness, cancelling what little quadrature rounding there is.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    if not isinstance(m, int) or isinstance(m, bool) or not 1 <= m < n:
        raise DomainError(f"need 1 <= m < n, got m={m!r}")
    if not isinstance(trials, int) or trials < 1:
        raise DomainError(f"trials must be a positive integer, got {trials!r}")
    if not 0.0 <= amplitude <= 0.1:
        raise DomainError(f"amplitude must lie in [0, 0.1], got {amplitude!r}")
    if resolution is None:
        resolution = {2: 64, 3: 48}.get(n, 32)
    grid = build_grid(n, resolution)
    ang = grid.angles()
    w = grid.weights()
    u = unit_vectors(ang)
    coef = unit_ball_volume(m) / unit_sphere_area(n - 1)
    t_ball = coef * float(w.sum())
    v_ball = unit_ball_volume(n)

    out = []
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        p = _random_direction_polynomial(rng, u)
        f = 1.0 + amplitude * p
        f = _project_constraints(f, u, w, n, v_ball)
        t = coef * float(np.dot(f**m, w))
        out.append((trial, t - t_ball))
    return out


# ---------------------------------------------------------------------------
# dumbbell
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DumbbellConfig:
    """Two-disc configuration with total area A and centroid at distance G.

    The near disc (area A(1-gamma)) is centered at the origin; the far disc
    (area gamma A) sits on the axis at x_far, fixed by the centroid
    constraint gamma A x_far = G A.
    """

    area: float
    centroid_distance: float
    gamma: float

    def __post_init__(self):
        if not (self.area > 0.0 and math.isfinite(self.area)):
            raise DomainError(f"area must be positive, got {self.area!r}")
        if not (self.centroid_distance > 0.0 and math.isfinite(self.centroid_distance)):
            raise DomainError(
                f"centroid distance must be positive, got {self.centroid_distance!r}"
            )
        if not 0.0 < self.gamma < 1.0:
            raise DomainError(f"gamma must lie in (0, 1), got {self.gamma!r}")

    @property
    def area_near(self) -> float:
        return self.area * (1.0 - self.gamma)

    @property
    def area_far(self) -> float:
        return self.area * self.gamma

    @property
    def x_far(self) -> float:
        return self.centroid_distance / self.gamma

    @property
    def radius_near(self) -> float:
        return math.sqrt(self.area_near / math.pi)

    @property
    def radius_far(self) -> float:
        return math.sqrt(self.area_far / math.pi)


def _disc_mean_inverse_distance(rng, radius, center_x, count):
    """Monte Carlo mean and variance of 1/|x| over a uniform disc."""
    acc = 0.0
    acc_sq = 0.0
    done = 0
    while done < count:
        c = min(2_000_000, count - done)
        rho = radius * np.sqrt(rng.random(c))
        if center_x == 0.0:
            while np.any(rho < ORIGIN_EXCLUSION):
                bad = rho < ORIGIN_EXCLUSION
                rho[bad] = radius * np.sqrt(rng.random(int(bad.sum())))
            vals = 1.0 / rho
        else:
            psi = 2.0 * math.pi * rng.random(c)
            d = np.sqrt(center_x**2 + 2.0 * center_x * rho * np.cos(psi) + rho * rho)
            vals = 1.0 / d
        acc += float(vals.sum())
        acc_sq += float(np.dot(vals, vals))
        done += c
    mean = acc / count
    var = max(acc_sq / count - mean * mean, 0.0)
    if count > 1:
        var *= count / (count - 1)
    return mean, var


def dumbbell_thickness(
    config: DumbbellConfig,
    exact: bool = False,
    samples: int = 2_000_000,
    seed: int = 0,
):
    """Average 1-section thickness of the two-disc body.

    exact=False returns the closed asymptotic value
    2 sqrt(A_near/pi) + A_far/(pi x_far) as a float. exact=True evaluates the
    volume-element thickness integral by Monte Carlo and returns
    (estimate, stderr). The integral is additive over the two discs, so each
    disc is sampled uniformly in itself (with its exact area as the weight)
    rather than rejection-sampled from a bounding ball that would almost
    never hit the far disc; most samples go to the near disc, whose 1/r
    weight carries nearly all the variance.
    """
    r_near, r_far, x_far = config.radius_near, config.radius_far, config.x_far
    if x_far <= r_near + r_far:
        raise GeometryError(
            f"discs overlap: separation {x_far:.6g} <= radii sum {r_near + r_far:.6g}"
        )
    if not exact:
        return 2.0 * r_near + config.area_far / (math.pi * x_far)

    if not isinstance(samples, int) or samples < 2:
        raise DomainError(f"samples must be an integer >= 2, got {samples!r}")
    # n = 2, m = 1: the estimator prefactor m V_m / S_{n-1} is 1/pi
    coef = 1.0 * unit_ball_volume(1) / unit_sphere_area(1)
    n_far = max(1, min(samples // 2, max(10_000, samples // 20)))
    n_near = samples - n_far
    seq = np.random.SeedSequence(seed)
    rng_near, rng_far = (np.random.default_rng(s) for s in seq.spawn(2))
    mean_near, var_near = _disc_mean_inverse_distance(rng_near, r_near, 0.0, n_near)
    mean_far, var_far = _disc_mean_inverse_distance(rng_far, r_far, x_far, n_far)
    a_near, a_far = config.area_near, config.area_far
    estimate = coef * (a_near * mean_near + a_far * mean_far)
    stderr = coef * math.sqrt(
        a_near**2 * var_near / n_near + a_far**2 * var_far / n_far
    )
    return estimate, stderr
