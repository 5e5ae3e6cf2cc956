"""Directions on the unit sphere in R^n and tensor-product quadrature grids.

Angle convention: a direction in R^n is described by n-1 angles
(phi_1, ..., phi_{n-1}) with the polar angles phi_1 .. phi_{n-2} in [0, pi]
and the azimuthal angle phi_{n-1} in [0, 2 pi). The Cartesian components are

    x_1 = r cos phi_1
    x_2 = r sin phi_1 cos phi_2
    ...
    x_n = r sin phi_1 ... sin phi_{n-1}

so the pole of the chart is the +x_1 axis. The solid-angle element carries the
density sin^{n-2}(phi_1) sin^{n-3}(phi_2) ... sin(phi_{n-2}).

Quadrature grids are tensor products: Gauss-Jacobi nodes in cos(phi_i) for
each polar angle (the sin-power density is the Jacobi weight function, so
weight sums are exact) and a uniform trapezoid rule in the azimuth. Grids are
stored in factored per-axis form; dense enumeration happens in blocks so large
grids never materialize all at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi

from .errors import BudgetError, DomainError
from .nsphere import unit_sphere_area

__all__ = [
    "DEFAULT_NODE_BUDGET",
    "DirectionGrid",
    "axis_polar_angle",
    "build_grid",
    "cartesian_to_spherical",
    "frame_from_pole",
    "solid_angle_density",
    "spherical_to_cartesian",
    "unit_vectors",
]

DEFAULT_NODE_BUDGET = 1 << 28
DEFAULT_BLOCK = 1 << 22

TWO_PI = 2.0 * math.pi


def _as_angle_batch(angles) -> tuple[np.ndarray, bool]:
    """Coerce to a (B, n-1) float array; report whether input was a single direction."""
    arr = np.asarray(angles, dtype=float)
    if arr.ndim == 1:
        return arr[None, :], True
    if arr.ndim == 2:
        return arr, False
    raise DomainError(f"angles must be 1-D or 2-D, got shape {arr.shape}")


def unit_vectors(angles) -> np.ndarray:
    """Cartesian unit vectors for a batch of directions.

    Accepts (n-1,) for one direction or (B, n-1) for a batch; returns (n,)
    or (B, n) correspondingly.
    """
    arr, single = _as_angle_batch(angles)
    b, m = arr.shape
    n = m + 1
    if n < 2:
        raise DomainError("directions need at least one angle")
    out = np.empty((b, n))
    sin_running = np.ones(b)
    for i in range(m):
        out[:, i] = sin_running * np.cos(arr[:, i])
        sin_running = sin_running * np.sin(arr[:, i])
    out[:, n - 1] = sin_running
    return out[0] if single else out


def spherical_to_cartesian(r, angles) -> np.ndarray:
    """Map radius and direction angles to Cartesian coordinates."""
    u = unit_vectors(angles)
    r = np.asarray(r, dtype=float)
    if u.ndim == 1:
        return float(r) * u
    return r[:, None] * u if r.ndim == 1 else r * u


def cartesian_to_spherical(points) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`spherical_to_cartesian`.

    Returns (r, angles). Polar angles come out in [0, pi] and the azimuth in
    [0, 2 pi). The origin has no direction and raises.
    """
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    b, n = pts.shape
    if n < 2:
        raise DomainError("points must live in R^n with n >= 2")
    sq = pts * pts
    # suffix[:, i] = |(x_i, ..., x_{n-1})|
    suffix = np.sqrt(np.cumsum(sq[:, ::-1], axis=1)[:, ::-1])
    r = suffix[:, 0]
    if np.any(r == 0.0):
        raise DomainError("the origin has no defined direction")
    ang = np.empty((b, n - 1))
    for i in range(n - 2):
        ang[:, i] = np.arctan2(suffix[:, i + 1], pts[:, i])
    az = np.arctan2(pts[:, n - 1], pts[:, n - 2])
    ang[:, n - 2] = np.where(az < 0.0, az + TWO_PI, az)
    if single:
        return float(r[0]), ang[0]
    return r, ang


def solid_angle_density(angles) -> np.ndarray | float:
    """Solid-angle density sin^{n-2}(phi_1) ... sin(phi_{n-2}) at the given angles."""
    arr, single = _as_angle_batch(angles)
    b, m = arr.shape
    n = m + 1
    dens = np.ones(b)
    for i in range(n - 2):
        dens *= np.sin(arr[:, i]) ** (n - 2 - i)
    return float(dens[0]) if single else dens


def _check_axis(axis, n: int) -> np.ndarray:
    a = np.asarray(axis, dtype=float)
    if a.shape != (n,):
        raise DomainError(f"axis must be a length-{n} vector, got shape {a.shape}")
    norm = float(np.linalg.norm(a))
    if abs(norm - 1.0) > 1e-10:
        raise DomainError(f"axis must be unit length, |axis| = {norm!r}")
    return a


def axis_polar_angle(angles, axis) -> np.ndarray | float:
    """Angle between each direction and a fixed unit axis, in [0, pi]."""
    arr, single = _as_angle_batch(angles)
    axis = _check_axis(axis, arr.shape[1] + 1)
    u = unit_vectors(arr)
    c = np.clip(u @ axis, -1.0, 1.0)
    theta = np.arccos(c)
    return float(theta[0]) if single else theta


def frame_from_pole(axis) -> np.ndarray:
    """Orthogonal matrix Q with Q e_1 = axis (Householder reflection).

    Used to re-align a chart so its pole sits on an arbitrary axis; being a
    reflection rather than a rotation is immaterial for integration.
    """
    axis = np.asarray(axis, dtype=float)
    n = axis.shape[0]
    axis = _check_axis(axis, n)
    v = axis.copy()
    v[0] -= 1.0
    vv = float(v @ v)
    if vv < 1e-30:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(v, v) / vv


# ---------------------------------------------------------------------------
# quadrature grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectionGrid:
    """Tensor-product quadrature rule over the unit sphere in R^n.

    ``axes`` holds one (nodes, weights) pair per angle, polar angles first and
    the azimuth last. Weights of a full tensor node multiply together and
    already include the solid-angle density, so summing f(direction) * weight
    over all nodes approximates the integral of f over the sphere.
    """

    dimension: int
    resolution: int
    refine: int
    axes: tuple = field(repr=False)
    node_budget: int = DEFAULT_NODE_BUDGET

    @property
    def node_count(self) -> int:
        count = 1
        for nodes, _ in self.axes:
            count *= nodes.size
        return count

    def sum_weights(self) -> float:
        """Exact total weight (the area of the unit (n-1)-sphere up to rounding)."""
        total = 1.0
        for _, weights in self.axes:
            total *= float(weights.sum())
        return total

    def descriptor(self) -> dict:
        return {
            "dimension": self.dimension,
            "resolution": self.resolution,
            "refine": self.refine,
            "node_count": self.node_count,
        }

    def iter_blocks(self, max_block: int = DEFAULT_BLOCK):
        """Yield (angles, weights) blocks covering the full tensor product.

        ``angles`` is (B, n-1) and ``weights`` is (B,). Both arrays are reused
        between blocks; copy them if they must outlive one iteration. Blocks
        are aligned with the trailing axes so enumeration is mostly array
        reuse rather than integer arithmetic per node.
        """
        sizes = [nodes.size for nodes, _ in self.axes]
        num_axes = len(sizes)
        # longest suffix whose node count fits in a block
        t = 1
        tail_size = sizes[-1]
        while t < num_axes and tail_size * sizes[num_axes - t - 1] <= max_block:
            tail_size *= sizes[num_axes - t - 1]
            t += 1
        q = num_axes - t  # prefix axes enumerated one combination per block

        tail_nodes = [self.axes[q + j][0] for j in range(t)]
        tail_weights = [self.axes[q + j][1] for j in range(t)]
        mesh = np.meshgrid(*tail_nodes, indexing="ij")
        tail_angles = np.stack([g.reshape(-1) for g in mesh], axis=1)
        tw = tail_weights[0]
        for wnext in tail_weights[1:]:
            tw = (tw[:, None] * wnext[None, :]).reshape(-1)

        buf = np.empty((tail_size, num_axes))
        buf[:, q:] = tail_angles
        wbuf = np.empty(tail_size)

        prefix_sizes = sizes[:q]
        total_prefix = 1
        for s in prefix_sizes:
            total_prefix *= s
        for flat in range(total_prefix):
            rem = flat
            scale = 1.0
            for col in range(q - 1, -1, -1):
                j = rem % prefix_sizes[col]
                rem //= prefix_sizes[col]
                buf[:, col] = self.axes[col][0][j]
                scale *= self.axes[col][1][j]
            np.multiply(tw, scale, out=wbuf)
            yield buf, wbuf

    def angles(self, limit: int = 1 << 24) -> np.ndarray:
        """Materialize every node's angles as one (N, n-1) array."""
        n = self.node_count
        if n > limit:
            raise BudgetError(f"{n} nodes exceed the materialization limit {limit}")
        out = np.empty((n, len(self.axes)))
        pos = 0
        for ang, _ in self.iter_blocks():
            out[pos : pos + ang.shape[0]] = ang
            pos += ang.shape[0]
        return out

    def weights(self, limit: int = 1 << 26) -> np.ndarray:
        """Materialize every node's weight as one (N,) array."""
        n = self.node_count
        if n > limit:
            raise BudgetError(f"{n} nodes exceed the materialization limit {limit}")
        out = np.empty(n)
        pos = 0
        for _, w in self.iter_blocks():
            out[pos : pos + w.shape[0]] = w
            pos += w.shape[0]
        return out


def build_grid(
    n: int,
    resolution: int,
    refine: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> DirectionGrid:
    """Build the tensor-product sphere rule for R^n.

    Polar angle i (density power p = n-1-i) gets ``resolution * refine``
    Gauss-Jacobi nodes in the cosine variable with exponent (p-1)/2, which
    integrates the density exactly and smooth integrands spectrally. The
    azimuth gets ``resolution`` uniform nodes (trapezoid on the circle). Total
    node count is resolution^(n-1) when refine == 1.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise DomainError(f"grids require an integer dimension n >= 2, got {n!r}")
    if not isinstance(resolution, int) or resolution < 1:
        raise DomainError(f"resolution must be a positive integer, got {resolution!r}")
    if not isinstance(refine, int) or refine < 1:
        raise DomainError(f"refine must be a positive integer, got {refine!r}")
    count = (resolution * refine) ** (n - 2) * resolution
    if count > node_budget:
        raise BudgetError(
            f"grid would hold {count} nodes, over the budget of {node_budget}; "
            "lower the resolution or raise node_budget"
        )
    axes = []
    for i in range(1, n - 1):
        p = n - 1 - i
        alpha = (p - 1) / 2.0
        t, w = roots_jacobi(resolution * refine, alpha, alpha)
        # ascending polar angle; arccos reverses the node order
        axes.append((np.arccos(t)[::-1].copy(), w[::-1].copy()))
    az_nodes = TWO_PI * np.arange(resolution) / resolution
    az_weights = np.full(resolution, TWO_PI / resolution)
    axes.append((az_nodes, az_weights))
    grid = DirectionGrid(
        dimension=n,
        resolution=resolution,
        refine=refine,
        axes=tuple(axes),
        node_budget=node_budget,
    )
    # cheap self-check: the factored weight sum must reproduce the sphere area
    assert abs(grid.sum_weights() / unit_sphere_area(n - 1) - 1.0) < 1e-12
    return grid
