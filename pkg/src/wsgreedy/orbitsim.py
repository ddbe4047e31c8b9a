"""Walker-Delta constellations on ideal circular orbits, plus Earth-grid geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

R_EARTH = 6378.137  # km
MU_EARTH = 398600.4418  # km^3 / s^2
OMEGA_EARTH = 7.2921159e-5  # rad / s


@dataclass(frozen=True)
class WalkerDeltaConfig:
    inclination: float  # rad
    total: int
    planes: int
    phasing: int
    altitude: float = 2000.0  # km
    epoch: float = 0.0  # s

    def __post_init__(self):
        if self.total < 1 or self.planes < 1:
            raise ValueError("need at least one satellite and one plane")
        if self.total % self.planes:
            raise ValueError(f"{self.planes} planes do not divide {self.total} satellites")
        if not 0 <= self.phasing < self.planes:
            raise ValueError("phasing must satisfy 0 <= f < P")
        if self.altitude <= 0:
            raise ValueError("altitude must be positive")

    @classmethod
    def from_degrees(cls, inclination_deg, total, planes, phasing, altitude=2000.0, epoch=0.0):
        return cls(math.radians(inclination_deg), total, planes, phasing, altitude, epoch)


@dataclass
class SatelliteEphemeris:
    semi_major_axis: float
    inclination: float
    raan: np.ndarray  # rad, per satellite
    arg_lat0: np.ndarray  # rad, argument of latitude at epoch
    epoch: float = 0.0

    @property
    def count(self) -> int:
        return self.raan.size

    @property
    def mean_motion(self) -> float:
        return math.sqrt(MU_EARTH / self.semi_major_axis**3)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.mean_motion


def build_walker_delta(config: WalkerDeltaConfig) -> SatelliteEphemeris:
    per_plane = config.total // config.planes
    plane = np.repeat(np.arange(config.planes), per_plane)
    slot = np.tile(np.arange(per_plane), config.planes)
    raan = 2.0 * np.pi * plane / config.planes
    u0 = 2.0 * np.pi * slot / per_plane + 2.0 * np.pi * config.phasing * plane / config.total
    return SatelliteEphemeris(
        semi_major_axis=R_EARTH + config.altitude,
        inclination=config.inclination,
        raan=raan,
        arg_lat0=np.mod(u0, 2.0 * np.pi),
        epoch=config.epoch,
    )


def propagate_all(eph: SatelliteEphemeris, t: float) -> np.ndarray:
    """ECI positions (km) of every satellite at time ``t`` (s), shape (T, 3)."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    u = eph.arg_lat0 + eph.mean_motion * (t - eph.epoch)
    cu, su = np.cos(u), np.sin(u)
    cO, sO = np.cos(eph.raan), np.sin(eph.raan)
    ci, si = math.cos(eph.inclination), math.sin(eph.inclination)
    a = eph.semi_major_axis
    return a * np.stack([cO * cu - sO * su * ci, sO * cu + cO * su * ci, su * si], axis=1)


def propagate(eph: SatelliteEphemeris, sat_index: int, t: float) -> np.ndarray:
    return propagate_all(eph, t)[sat_index]


def eci_to_ecef(position, t: float) -> np.ndarray:
    """Rotate about the pole by the Earth angle at ``t``; frames coincide at t=0."""
    theta = OMEGA_EARTH * t
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])
    return np.asarray(position, dtype=float) @ rot.T


def latlon_to_ecef(lat, lon, radius: float = R_EARTH) -> np.ndarray:
    lat, lon = np.asarray(lat, dtype=float), np.asarray(lon, dtype=float)
    cl = np.cos(lat)
    return radius * np.stack([cl * np.cos(lon), cl * np.sin(lon), np.sin(lat)], axis=-1)


def visibility(sat_ecef: np.ndarray, ground_ecef: np.ndarray, half_angle: float) -> np.ndarray:
    """(satellites, points) mask of nadir-cone containment with horizon occlusion.

    The cone is closed; a tiny slack absorbs rounding at the boundary.
    """
    sats = np.atleast_2d(sat_ecef)
    pts = np.atleast_2d(ground_ecef)
    los = pts[None, :, :] - sats[:, None, :]
    los_norm = np.linalg.norm(los, axis=2)
    sat_norm = np.linalg.norm(sats, axis=1)
    nadir = -sats / sat_norm[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_off = np.einsum("spk,sk->sp", los, nadir) / los_norm
    in_cone = cos_off >= math.cos(half_angle) - 1e-12
    # ground point faces the satellite: p . (s - p) >= 0
    facing = np.einsum("pk,spk->sp", pts, -los) >= -1e-9 * R_EARTH**2
    return in_cone & facing


def fov_contains(sat_ecef, ground_point_ecef, half_angle: float) -> bool:
    if np.linalg.norm(sat_ecef) <= R_EARTH:
        raise ValueError("satellite must be above the surface")
    return bool(visibility(np.asarray(sat_ecef, float), np.asarray(ground_point_ecef, float), half_angle)[0, 0])


def footprint_central_angle(semi_major_axis: float, half_angle: float) -> float:
    """Earth central angle of the cone edge, capped at the horizon."""
    s = semi_major_axis * math.sin(half_angle) / R_EARTH
    horizon = math.acos(R_EARTH / semi_major_axis)
    if s >= 1.0:
        return horizon
    return min(math.asin(s) - half_angle, horizon)


@dataclass
class EarthGrid:
    resolution: float  # deg
    lat_bounds: np.ndarray  # (cells, 2) rad
    lon_bounds: np.ndarray  # (cells, 2) rad
    centroids: np.ndarray  # (cells, 3) ECEF km
    areas: np.ndarray  # (cells,) km^2

    @property
    def size(self) -> int:
        return self.areas.size

    @property
    def total_area(self) -> float:
        return float(np.sum(self.areas))


def build_grid(resolution_deg: float = 2.0) -> EarthGrid:
    n_lat = 180.0 / resolution_deg
    n_lon = 360.0 / resolution_deg
    if abs(n_lat - round(n_lat)) > 1e-9:
        raise ValueError("resolution must divide 180 degrees")
    n_lat, n_lon = int(round(n_lat)), int(round(n_lon))
    lat_edges = np.radians(np.linspace(-90.0, 90.0, n_lat + 1))
    lon_edges = np.radians(np.linspace(-180.0, 180.0, n_lon + 1))
    lat_lo, lon_lo = np.meshgrid(lat_edges[:-1], lon_edges[:-1], indexing="ij")
    lat_hi, lon_hi = np.meshgrid(lat_edges[1:], lon_edges[1:], indexing="ij")
    dlon = lon_hi - lon_lo
    areas = R_EARTH**2 * dlon * (np.sin(lat_hi) - np.sin(lat_lo))
    c_lat = 0.5 * (lat_lo + lat_hi)
    c_lon = 0.5 * (lon_lo + lon_hi)
    return EarthGrid(
        resolution=float(resolution_deg),
        lat_bounds=np.stack([lat_lo.ravel(), lat_hi.ravel()], axis=1),
        lon_bounds=np.stack([lon_lo.ravel(), lon_hi.ravel()], axis=1),
        centroids=latlon_to_ecef(c_lat.ravel(), c_lon.ravel()),
        areas=areas.ravel(),
    )


def covered_cells(eph: SatelliteEphemeris, grid: EarthGrid, selection, t: float, half_angle: float) -> frozenset:
    sel = sorted(selection)
    if not sel:
        return frozenset()
    sats = eci_to_ecef(propagate_all(eph, t)[sel], t)
    vis = visibility(sats, grid.centroids, half_angle)
    return frozenset(np.flatnonzero(vis.any(axis=0)).tolist())


def sample_sphere_points(rng: np.random.Generator, count: int) -> np.ndarray:
    """Area-uniform surface points (ECEF km)."""
    lon = rng.uniform(-np.pi, np.pi, count)
    lat = np.arcsin(rng.uniform(-1.0, 1.0, count))
    return latlon_to_ecef(lat, lon)
