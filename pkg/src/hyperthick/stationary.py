"""Stationary shapes of the constrained thickness problem.

Bodies at which the average m-dimensional thickness is stationary under fixed
volume and fixed centroid are axisymmetric, and their boundary radius r(theta)
solves

    1 - lambda r^k - mu r^(k+1) cos(theta) = 0,      k = n - m,

with theta measured from the symmetry axis. The multiplier mu is tied to
lambda through a dimensionless parameter e >= 0 (eccentricity-like): e = 0 is
the sphere, 0 < e < 1 a smooth egg, e = 1 the critical shape whose meridian
touches the axis in a cusp, and e > 1 an open region. The sign convention
used throughout puts mu <= 0, which places the centroid and the cusp on the
positive side of the axis. In hyper-cylindrical coordinates the meridian is

    R^2(z) = (lambda + mu z)^(-2/k) - z^2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    NoRootError,
    OutsideSupportError,
    PoleError,
    UnboundedRegionError,
)

__all__ = [
    "ProfileCurve",
    "ShapeClass",
    "StationaryParams",
    "classify",
    "critical_support",
    "cusp_angle_2d",
    "cylindrical_radius",
    "ecc_from_mu",
    "factorization_residual",
    "mu_from_ecc",
    "profile_curve",
    "radial_profile",
    "support_interval",
]

RESIDUAL_TOL = 1e-10  # every returned radius is checked against this
NEWTON_TOL = 1e-13


class ShapeClass(enum.Enum):
    SPHERE = "sphere"
    EGG = "egg"
    CRITICAL = "critical"
    OPEN = "open"


def classify(ecc: float) -> ShapeClass:
    """Shape class from the eccentricity-like parameter, exact comparisons."""
    if not (ecc >= 0.0 and math.isfinite(ecc)):
        raise DomainError(f"eccentricity must be finite and >= 0, got {ecc!r}")
    if ecc == 0.0:
        return ShapeClass.SPHERE
    if ecc < 1.0:
        return ShapeClass.EGG
    if ecc == 1.0:
        return ShapeClass.CRITICAL
    return ShapeClass.OPEN


def mu_from_ecc(k: int, lam: float, ecc: float) -> float:
    """Second multiplier from the eccentricity scaling.

    mu = -k lambda^((k+1)/k) / (k+1)^((k+1)/k) * e; at e = 1 the meridian
    R^2(z) acquires a double root on the axis.
    """
    _check_k(k)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be positive, got {lam!r}")
    if not (ecc >= 0.0 and math.isfinite(ecc)):
        raise DomainError(f"eccentricity must be >= 0, got {ecc!r}")
    p = (k + 1.0) / k
    return -k * lam**p / (k + 1.0) ** p * ecc


def ecc_from_mu(k: int, lam: float, mu: float) -> float:
    """Inverse of mu_from_ecc on |mu|; accepts either sign of mu."""
    _check_k(k)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be positive, got {lam!r}")
    p = (k + 1.0) / k
    return abs(mu) * (k + 1.0) ** p / (k * lam**p)


def _check_k(k):
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise DomainError(f"dimension gap n - m must be a positive integer, got {k!r}")


@dataclass(frozen=True)
class StationaryParams:
    """Full parameter set (n, m, lambda, e) of one stationary shape.

    mu is derived, never stored independently; use from_multipliers to ingest
    a (lambda, mu) pair. The profile depends on (k, lambda, e) only, with
    k = n - m; n and m additionally fix volume elements and the thickness.
    """

    n: int
    m: int
    lam: float
    ecc: float
    mu: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name, v in (("n", self.n), ("m", self.m)):
            if not isinstance(v, int) or isinstance(v, bool):
                raise DomainError(f"{name} must be an integer, got {v!r}")
        if not 1 <= self.m < self.n:
            raise DomainError(f"need 1 <= m < n, got m={self.m}, n={self.n}")
        classify(self.ecc)  # validates ecc
        object.__setattr__(self, "mu", mu_from_ecc(self.k, self.lam, self.ecc))

    @property
    def k(self) -> int:
        return self.n - self.m

    @property
    def shape_class(self) -> ShapeClass:
        return classify(self.ecc)

    @property
    def sphere_radius(self) -> float:
        """Radius of the e = 0 member of this family."""
        return self.lam ** (-1.0 / self.k)

    @classmethod
    def from_multipliers(cls, n: int, m: int, lam: float, mu: float) -> "StationaryParams":
        return cls(n=n, m=m, lam=lam, ecc=ecc_from_mu(n - m, lam, mu))

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "lambda": self.lam,
            "ecc": self.ecc,
            "mu": self.mu,
            "class": self.shape_class.value,
        }


@dataclass(frozen=True)
class ProfileCurve:
    """Sampled meridian of an axisymmetric stationary shape, z ascending."""

    params: StationaryParams
    z: np.ndarray
    radius: np.ndarray
    z_minus: float
    z_plus: float


def _residual(k: int, lam: float, mu: float, r, cos_t):
    return 1.0 - lam * r**k - mu * r ** (k + 1) * cos_t


def _solve_radial_scalar(k: int, lam: float, mu: float, cos_t: float) -> float:
    """Smallest positive root of the stationary equation, bracketed Newton."""
    c = mu * cos_t  # the r^(k+1) coefficient enters as -c
    sphere = lam ** (-1.0 / k)
    if c == 0.0:
        return sphere
    if c < 0.0:
        # radius polynomial dips to a minimum at r_star and rises after it;
        # the boundary is the root before the dip. That first root never
        # exceeds the critical-support radius, which caps the bracket when
        # mu is so small that r_star itself would overflow.
        z_plus = ((k + 1.0) / lam) ** (1.0 / k)
        if k * lam > (k + 1.0) * (-c) * z_plus:
            lo, hi = 0.0, z_plus
            x = sphere
        else:
            r_star = k * lam / ((k + 1.0) * (-c))
            p_star = _residual(k, lam, mu, r_star, cos_t)
            if p_star > NEWTON_TOL:
                raise NoRootError(
                    "no positive boundary radius in this direction (open region)"
                )
            if p_star >= 0.0:
                return r_star  # tangency: the critical double root
            lo, hi = 0.0, r_star
            x = min(sphere, 0.5 * r_star)
    else:
        # strictly decreasing: unique root at or below the sphere radius
        lo, hi = 0.0, sphere
        x = sphere

    for _ in range(120):
        fx = _residual(k, lam, mu, x, cos_t)
        if abs(fx) <= NEWTON_TOL:
            return x
        if fx > 0.0:
            lo = x
        else:
            hi = x
        d = -lam * k * x ** (k - 1) - c * (k + 1.0) * x**k
        x_new = x - fx / d if d != 0.0 else 0.5 * (lo + hi)
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 1e-16 * max(1.0, abs(x)):
            return x_new
        x = x_new
    raise ConvergenceError(
        f"radial Newton iteration stalled at k={k}, lambda={lam}, cos={cos_t}"
    )


def radial_profile(params: StationaryParams, theta):
    """Boundary radius r(theta), theta measured from the symmetry axis.

    Closed forms for k = 1 (quadratic) and k = 2 (the real Cardano branch
    that bounds the closed region); safeguarded Newton for k >= 3. Every
    returned radius is validated against the stationary equation. Open-class
    directions without a positive root raise.
    """
    theta_arr = np.asarray(theta, dtype=float)
    single = theta_arr.ndim == 0
    t = np.atleast_1d(theta_arr)
    k, lam, mu, e = params.k, params.lam, params.mu, params.ecc
    cos_t = np.cos(t)
    q = e * cos_t
    if e <= 1.0:
        q = np.clip(q, -1.0, 1.0)  # guards rounding at the tangency
    elif np.any(q > 1.0):
        raise NoRootError(
            "no positive boundary radius in this direction (open region)"
        )

    if k == 1:
        r = (2.0 / lam) / (1.0 + np.sqrt(1.0 - q))
    elif k == 2:
        r = np.empty_like(q)
        trig = q >= -1.0
        ang = (math.pi - np.arccos(np.clip(q[trig], -1.0, 1.0))) / 3.0
        r[trig] = math.sqrt(3.0 / lam) / (2.0 * np.cos(ang))
        if not np.all(trig):
            # q < -1 is reachable only for open shapes; hyperbolic branch
            rho = 2.0 * np.cosh(np.arccosh(-q[~trig]) / 3.0)
            r[~trig] = math.sqrt(3.0 / lam) / rho
    else:
        r = np.empty_like(q)
        for i, ct in enumerate(cos_t):
            r[i] = _solve_radial_scalar(k, lam, mu, float(ct))

    res = np.abs(_residual(k, lam, mu, r, cos_t))
    if np.any(res > RESIDUAL_TOL):
        raise ConvergenceError(
            f"stationary-equation residual {res.max():.3e} exceeds {RESIDUAL_TOL}"
        )
    return float(r[0]) if single else r


def cylindrical_radius(params: StationaryParams, z):
    """Transverse meridian radius R(z) = sqrt((lambda + mu z)^(-2/k) - z^2)."""
    z_arr = np.asarray(z, dtype=float)
    single = z_arr.ndim == 0
    zz = np.atleast_1d(z_arr)
    k, lam, mu = params.k, params.lam, params.mu
    u = lam + mu * zz
    if np.any(u <= 0.0):
        raise PoleError(f"lambda + mu z <= 0 at z={zz[u <= 0.0][0]!r}")
    rsq = u ** (-2.0 / k) - zz * zz
    scale = np.maximum(u ** (-2.0 / k), zz * zz)
    bad = rsq < -1e-12 * np.maximum(scale, 1.0)
    if np.any(bad):
        raise OutsideSupportError(f"R^2 < 0 at z={zz[bad][0]!r}: outside the body")
    out = np.sqrt(np.maximum(rsq, 0.0))
    return float(out[0]) if single else out


# closed-form roots of the deflated critical polynomial on the negative side:
# 1 - (k+1)u^k - k u^(k+1) = 0 with z_- = -u z_+. Only these gaps have
# radical solutions; the k = 4 constant is the real root of 4w^3+3w^2+2w+1.
_CRITICAL_NEG_ROOT = {
    1: math.sqrt(2.0) - 1.0,
    2: 0.5,
    4: (
        3.0
        + (15.0 * (4.0 * math.sqrt(6.0) + 9.0)) ** (1.0 / 3.0)
        - (15.0 * (4.0 * math.sqrt(6.0) - 9.0)) ** (1.0 / 3.0)
    )
    / 12.0,
}


def _critical_neg_root_newton(k: int) -> float:
    """Root of 1 - (k+1)u^k - k u^(k+1) on (0, 1); strictly decreasing there."""

    def h(u):
        return 1.0 - (k + 1.0) * u**k - k * u ** (k + 1)

    lo, hi = 0.0, 1.0
    x = 0.5
    for _ in range(200):
        fx = h(x)
        if abs(fx) <= NEWTON_TOL:
            return x
        if fx > 0.0:
            lo = x
        else:
            hi = x
        d = -k * (k + 1.0) * (x ** (k - 1) + x**k)
        x_new = x - fx / d if d != 0.0 else 0.5 * (lo + hi)
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 1e-17:
            return x_new
        x = x_new
    raise ConvergenceError(f"negative-side support root stalled for k={k}")


def critical_support(k: int, lam: float, method: str = "auto") -> tuple[float, float]:
    """Axis crossings (z_minus, z_plus) of the critical (e = 1) meridian.

    z_plus = ((k+1)/lambda)^(1/k) exactly (the double root w = 1 of the
    scaled polynomial). The negative crossing uses the radical closed form
    where one exists (k in {1, 2, 4}) and bracketed Newton otherwise;
    method='closed' or 'newton' forces one route.
    """
    _check_k(k)
    if not (lam > 0.0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be positive, got {lam!r}")
    if method not in ("auto", "closed", "newton"):
        raise DomainError(f"unknown method {method!r}")
    z_plus = ((k + 1.0) / lam) ** (1.0 / k)
    if method == "closed" or (method == "auto" and k in _CRITICAL_NEG_ROOT):
        try:
            u0 = _CRITICAL_NEG_ROOT[k]
        except KeyError:
            raise DomainError(f"no radical closed form for the k={k} crossing") from None
    else:
        u0 = _critical_neg_root_newton(k)
    return -u0 * z_plus, z_plus


def support_interval(params: StationaryParams) -> tuple[float, float]:
    """z range of the body: the two axis crossings of the meridian."""
    cls = params.shape_class
    if cls is ShapeClass.OPEN:
        raise UnboundedRegionError("open shapes (e > 1) have no bounded support")
    if cls is ShapeClass.SPHERE:
        rho = params.sphere_radius
        return -rho, rho
    if cls is ShapeClass.CRITICAL:
        return critical_support(params.k, params.lam)
    # egg: the axis crossings are the polar boundary radii
    z_plus = float(radial_profile(params, 0.0))
    z_minus = -float(radial_profile(params, math.pi))
    return z_minus, z_plus


def profile_curve(params: StationaryParams, count: int) -> ProfileCurve:
    """Meridian sampled at Chebyshev-spaced z, endpoints exactly on the axis.

    Chebyshev spacing clusters samples near the endpoints, where R behaves
    like a square root (smooth cap) or meets the axis in the cusp.
    """
    if not isinstance(count, int) or count < 2:
        raise DomainError(f"count must be an integer >= 2, got {count!r}")
    z_minus, z_plus = support_interval(params)
    s = np.linspace(0.0, math.pi, count)
    z = z_minus + 0.5 * (z_plus - z_minus) * (1.0 - np.cos(s))
    z[0], z[-1] = z_minus, z_plus
    radius = cylindrical_radius(params, z)
    radius[0] = 0.0
    radius[-1] = 0.0
    return ProfileCurve(params=params, z=z, radius=radius, z_minus=z_minus, z_plus=z_plus)


def cusp_angle_2d() -> float:
    """Opening angle of the critical cusp for k = 1: 2 arctan(sqrt 2)."""
    return 2.0 * math.atan(math.sqrt(2.0))


def factorization_residual(k: int, w) -> np.ndarray:
    """Relative defect of the scaled critical polynomial factorization.

    1 - (k+1)w^k + k w^(k+1) factors exactly as (w-1)^2 times
    sum_{j=1..k} j w^(j-1); the return value is |lhs - rhs| over the largest
    term magnitude, per point.
    """
    _check_k(k)
    ww = np.atleast_1d(np.asarray(w, dtype=float))
    lhs = 1.0 - (k + 1.0) * ww**k + k * ww ** (k + 1)
    cof = np.zeros_like(ww)
    for j in range(k, 0, -1):
        cof = cof * ww + j
    rhs = (ww - 1.0) ** 2 * cof
    scale = np.maximum.reduce(
        [np.ones_like(ww), (k + 1.0) * np.abs(ww) ** k, k * np.abs(ww) ** (k + 1)]
    )
    return np.abs(lhs - rhs) / scale
