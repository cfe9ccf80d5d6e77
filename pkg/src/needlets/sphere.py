"""Geometry of the unit sphere: points, angles, distances, grids.

Conventions: colatitude theta in [0, pi] measured from the north pole
(0, 0, 1), longitude phi in [0, 2*pi). Batch operations work on plain
(n, 3) float arrays; the UnitVector / SphericalAngles wrappers carry the
unit-norm and angle-range invariants for scalar call sites.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class UnitVector:
    """Point on the unit sphere, Cartesian components."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n2 = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(n2 - 1.0) > 3.0 * UNIT_NORM_TOL:
            raise ValueError(f"not a unit vector: |v|^2 = {n2!r}")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "UnitVector":
        n = np.sqrt(x * x + y * y + z * z)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def from_array(cls, v) -> "UnitVector":
        v = np.asarray(v, dtype=float)
        return cls.normalized(v[0], v[1], v[2])

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def dot(self, other: "UnitVector") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z


@dataclass(frozen=True)
class SphericalAngles:
    """Colatitude/longitude pair with theta in [0, pi], phi in [0, 2*pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta = {self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError(f"phi = {self.phi} outside [0, 2*pi)")


def point_from_angles(a: SphericalAngles) -> UnitVector:
    """Cartesian point (sin t cos p, sin t sin p, cos t) for angles (t, p)."""
    st = np.sin(a.theta)
    return UnitVector.normalized(st * np.cos(a.phi), st * np.sin(a.phi),
                                 np.cos(a.theta))


def angles_from_point(s: UnitVector) -> SphericalAngles:
    """Inverse of point_from_angles; phi = 0 at the poles."""
    theta = float(np.arccos(np.clip(s.z, -1.0, 1.0)))
    phi = float(np.mod(np.arctan2(s.y, s.x), 2.0 * np.pi))
    if theta == 0.0 or theta == np.pi:
        phi = 0.0
    return SphericalAngles(theta, phi)


def geodesic_distance(s: UnitVector, t: UnitVector) -> float:
    """Great-circle distance arccos(s . t), clamped against rounding."""
    return float(np.arccos(np.clip(s.dot(t), -1.0, 1.0)))


def pairwise_min_distance(points: np.ndarray, block: int = 2048) -> float:
    """Smallest geodesic distance between distinct points of an (n, 3) set."""
    n = len(points)
    best = -1.0  # track max dot product of distinct pairs
    for i0 in range(0, n, block):
        chunk = points[i0:i0 + block]
        dots = chunk @ points.T
        # mask the diagonal of this block
        for r in range(len(chunk)):
            dots[r, i0 + r] = -2.0
        best = max(best, dots.max())
    return float(np.arccos(np.clip(best, -1.0, 1.0)))


def fibonacci_points(n: int) -> np.ndarray:
    """Quasi-uniform spiral point set, used as a probe grid for mesh norms."""
    i = np.arange(n)
    golden = np.pi * (3.0 - np.sqrt(5.0))
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = golden * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def mesh_quantities(points, probes: int | None = None,
                    block: int = 2048) -> tuple[float, float]:
    """Mesh norm and minimum separation of a point set.

    The mesh norm sup_s min_k d(s, x_k) is estimated by probing a dense
    Fibonacci grid (at least 4x the point count); the estimate is a lower
    bound that improves with probe density. The separation is exact.
    """
    pts = as_point_array(points)
    n = len(pts)
    if n < 2:
        raise ValueError("mesh quantities need at least 2 points")
    if probes is None:
        probes = max(8192, 16 * n)
    if probes < 4 * n:
        raise ValueError("probe grid must have at least 4x the point count")
    probe_pts = fibonacci_points(probes)
    worst = 1.0  # min over probes of max dot = cos(mesh norm)
    for i0 in range(0, probes, block):
        dots = probe_pts[i0:i0 + block] @ pts.T
        worst = min(worst, dots.max(axis=1).min())
    mesh_norm = float(np.arccos(np.clip(worst, -1.0, 1.0)))
    return mesh_norm, pairwise_min_distance(pts, block=block)


def as_point_array(points) -> np.ndarray:
    """Coerce a list of UnitVector or an (n, 3) array to an (n, 3) array."""
    if isinstance(points, np.ndarray):
        pts = np.asarray(points, dtype=float)
    else:
        seq = list(points)
        if seq and isinstance(seq[0], UnitVector):
            pts = np.array([[p.x, p.y, p.z] for p in seq])
        else:
            pts = np.asarray(seq, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("expected an (n, 3) point array")
    return pts


@dataclass(frozen=True)
class EvalGrid:
    """Ordered evaluation points, either an equirectangular grid or a list.

    Equirectangular layout enumerates row-major: theta index runs slowest,
    phi fastest, with cell-centre angles theta_i = (i + 1/2) pi / n_theta
    and phi_k = (k + 1/2) 2 pi / n_phi.
    """

    points: np.ndarray
    layout: str = "explicit"
    n_theta: int = 0
    n_phi: int = 0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if self.layout == "equirect" and len(pts) != self.n_theta * self.n_phi:
            raise ValueError("equirect grid size mismatch")

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def equirectangular(cls, n_theta: int, n_phi: int) -> "EvalGrid":
        theta = (np.arange(n_theta) + 0.5) * np.pi / n_theta
        phi = (np.arange(n_phi) + 0.5) * 2.0 * np.pi / n_phi
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        st = np.sin(tt)
        pts = np.stack([st * np.cos(pp), st * np.sin(pp), np.cos(tt)],
                       axis=-1).reshape(-1, 3)
        return cls(points=pts, layout="equirect", n_theta=n_theta, n_phi=n_phi)

    @classmethod
    def from_points(cls, points) -> "EvalGrid":
        return cls(points=as_point_array(points), layout="explicit")

    def describe(self) -> dict:
        d = {"layout": self.layout, "count": len(self)}
        if self.layout == "equirect":
            d["n_theta"] = self.n_theta
            d["n_phi"] = self.n_phi
        return d
