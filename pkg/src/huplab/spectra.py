"""Dirichlet spectra of -Delta on disks and rectangles, and eigen-densities."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .specfun import bessel_j, bessel_j_prime, bessel_j_zeros, bessel_j_zeros_below
from .transform import C2, LP, Density

DEFAULT_TOL = 1e-9


class CoverageError(ValueError):
    pass


@dataclass(frozen=True)
class SpectrumTable:
    domain: dict
    values: np.ndarray
    labels: tuple  # (m, k, family)

    def __post_init__(self):
        v = np.asarray(self.values)
        if len(v) != len(self.labels):
            raise ValueError("one label per eigenvalue")
        if np.any(v <= 0) or np.any(np.diff(v) < 0):
            raise ValueError("eigenvalues must be positive and ascending")

    def __len__(self):
        return len(self.values)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["value", "m", "k", "family"])
            for v, (m, k, fam) in zip(self.values, self.labels):
                w.writerow([repr(float(v)), m, k, fam])

    def to_dict(self):
        return {"domain": self.domain,
                "values": [float(v) for v in self.values],
                "labels": [list(l) for l in self.labels]}


def _disk_entries(radius, cutoff):
    """(value, m, k, family) for all Bessel modes with j_{m,k} < cutoff."""
    out = []
    m = 0
    while m < cutoff:
        zs = bessel_j_zeros_below(m, cutoff).zeros
        if not zs:
            break
        for k, z in enumerate(zs, start=1):
            val = (z / radius) ** 2
            if m == 0:
                out.append((val, 0, k, "radial"))
            else:
                out.append((val, m, k, "cos"))
                out.append((val, m, k, "sin"))
        m += 1
    return out


def disk_spectrum(radius: float, count: int) -> SpectrumTable:
    """First `count` Dirichlet eigenvalues (j_{m,k}/r)^2 with multiplicity:
    modes m >= 1 appear twice (cos and sin families)."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    cutoff = 8.0
    while True:
        ent = _disk_entries(radius, cutoff)
        if len(ent) >= count:
            # all zeros below cutoff are present, so the smallest `count` are exact
            ent.sort(key=lambda e: (e[0], e[1], e[2], e[3]))
            ent = ent[:count]
            return SpectrumTable({"kind": "disk", "radius": float(radius)},
                                 np.array([e[0] for e in ent]), tuple(e[1:] for e in ent))
        cutoff *= 1.5


def rectangle_spectrum(T: float, L: float, count: int) -> SpectrumTable:
    """First `count` eigenvalues pi^2 (m^2/T^2 + k^2/L^2), m, k >= 1."""
    if not (T > 0 and L > 0):
        raise ValueError("side lengths must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")
    lam = lambda m, k: math.pi ** 2 * (m * m / T ** 2 + k * k / L ** 2)
    cutoff = lam(1, 1)
    while True:
        mmax = int(math.sqrt(cutoff) * T / math.pi) + 1
        kmax = int(math.sqrt(cutoff) * L / math.pi) + 1
        ent = [(lam(m, k), m, k, "rect") for m in range(1, mmax + 1) for k in range(1, kmax + 1)
               if lam(m, k) <= cutoff]
        if len(ent) >= count:
            ent.sort()
            ent = ent[:count]
            return SpectrumTable({"kind": "rectangle", "T": float(T), "L": float(L)},
                                 np.array([e[0] for e in ent]), tuple(e[1:] for e in ent))
        cutoff *= 2.0


@dataclass(frozen=True)
class EigenReport:
    is_eigenvalue: bool
    nearest: float
    distance: float
    label: tuple

    def to_dict(self):
        return {"is_eigenvalue": bool(self.is_eigenvalue), "nearest": float(self.nearest),
                "distance": float(self.distance), "label": list(self.label)}


def is_eigenvalue(c_squared: float, table: SpectrumTable, tol: float = DEFAULT_TOL) -> EigenReport:
    if not 0 < tol <= 1:
        raise ValueError("tol must lie in (0, 1]")
    if table.values[-1] <= c_squared:
        raise CoverageError(f"spectrum table tops out at {table.values[-1]!r} <= {c_squared!r}; "
                            "build a larger table")
    d = np.abs(table.values - c_squared)
    i = int(np.argmin(d))
    return EigenReport(bool(d[i] <= tol), float(table.values[i]), float(d[i]), tuple(table.labels[i]))


def _trig(kind):
    if kind in ("cos", "radial"):
        return np.cos
    if kind == "sin":
        return np.sin
    raise ValueError(f"angular type must be cos or sin, got {kind!r}")


def eigenfunction(radius, mode, kind="cos"):
    """u(x) = J_m(j_{m,k} |x| / r) * trig(m theta) for points x (N, 2)."""
    m, k = mode
    j = bessel_j_zeros(m, k)[k - 1]
    trig = _trig(kind)

    def u(x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        rr = np.linalg.norm(x, axis=-1)
        return bessel_j(m, j * rr / radius) * trig(m * np.arctan2(x[:, 1], x[:, 0]))

    return u


def eigen_density(radius: float, mode, kind: str = "cos", domain: geo.ConvexDomain = None) -> Density:
    """Outward normal derivative of the Dirichlet eigenfunction of the disk,
    g(theta) = (j/r) J_m'(j) trig(m theta), as a density on the circle."""
    m, k = mode
    if m < 0 or k < 1:
        raise ValueError("mode needs m >= 0 and k >= 1")
    if m == 0 and kind == "sin":
        raise ValueError("the sin family has no m = 0 mode")
    trig = _trig(kind)
    if domain is None:
        domain = geo.disk(radius)
    if domain.kind != "disk" or abs(domain.params["radius"] - radius) > 1e-14:
        raise ValueError("eigen_density needs a disk of the given radius")
    j = bessel_j_zeros(m, k)[k - 1]
    amp = j / radius * bessel_j_prime(m, j)
    return Density.from_angle(domain.boundary, lambda th: amp * trig(m * th),
                              center=domain.params["center"], regularity=C2)


def rectangle_eigen_density(T: float, L: float, mode, domain: geo.ConvexDomain = None) -> Density:
    """Outward normal derivative of u = sin(m pi x/T) sin(k pi y/L) on the
    boundary of [0, T] x [0, L]; continuous, vanishing at the corners."""
    m, k = mode
    if m < 1 or k < 1:
        raise ValueError("rectangle modes need m, k >= 1")
    if domain is None:
        domain = geo.rectangle_domain(T, L)
    p = domain.params
    if domain.kind != "rectangle" or abs(p["T"] - T) > 1e-14 or abs(p["L"] - L) > 1e-14:
        raise ValueError("rectangle_eigen_density needs the matching rectangle")
    o = p["origin"]
    am, ak = m * math.pi / T, k * math.pi / L
    curve = domain.boundary

    def rule(t):
        _, idx, _ = curve._split(t)
        x = curve.point(t) - o
        sx, sy = np.sin(am * x[..., 0]), np.sin(ak * x[..., 1])
        vals = np.choose(idx, [-ak * sx, am * math.cos(m * math.pi) * sy,
                               ak * math.cos(k * math.pi) * sx, -am * sy])
        return vals + 0j

    return Density(curve, rule, LP, math.inf)
