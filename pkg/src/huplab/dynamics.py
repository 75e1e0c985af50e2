"""Chord involutions on strictly convex curves and the circle maps they induce.

For a direction angle rho, s_rho sends x in Gamma to the other end of the
chord through x with direction angle rho + pi/2.  t_rho = s_rho o s_0 is read
on the unit circle through the radial projection p(x) = (x - O)/|x - O|.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from . import geometry as geo
from .transform import Density, fourier_coefficients

TWO_PI = 2.0 * math.pi
RATIONAL_TOL = 1e-6
MAX_DENOMINATOR = 20


class DynamicsError(ValueError):
    pass


def _require_strict(curve):
    if curve.regularity != geo.C2_STRICTLY_CONVEX:
        raise DynamicsError("chord maps need a strictly convex C2 curve "
                            f"(got regularity {curve.regularity!r})")


def _extremum(fun, n, samples=4096, sign=1.0):
    """Parameter maximising sign * fun on [0, n) (grid then bounded Brent)."""
    t = np.linspace(0.0, n, samples, endpoint=False)
    v = sign * fun(t)
    k = int(np.argmax(v))
    h = n / samples
    res = optimize.minimize_scalar(lambda u: -sign * float(fun(np.array([u]))[0]),
                                   bounds=(t[k] - h, t[k] + h), method="bounded",
                                   options={"xatol": 1e-13})
    return float(res.x) % n


class ChordInvolution:
    """s_rho on the global curve parameter."""

    def __init__(self, curve: geo.ParamCurve, rho: float):
        _require_strict(curve)
        self.curve = curve
        self.rho = float(rho)
        self.normal = np.array([math.cos(rho), math.sin(rho)])  # constant along each chord
        n = curve.n_pieces
        self._h = lambda t: curve.point(t) @ self.normal
        self.t_max = _extremum(self._h, n, sign=1.0)
        self.t_min = _extremum(self._h, n, sign=-1.0)

    @property
    def fixed_points(self):
        return self.t_min, self.t_max

    def __call__(self, t, iters=64):
        n = self.curve.n_pieces
        t = np.atleast_1d(np.asarray(t, dtype=float)) % n
        target = self._h(t)
        lenA = (self.t_max - self.t_min) % n
        onA = ((t - self.t_min) % n) < lenA
        # other end lies on the opposite arc; h rises along A and falls along B
        lo = np.where(onA, self.t_max, self.t_min)
        hi = np.where(onA, self.t_max + (n - lenA), self.t_min + lenA)
        rising = ~onA
        target = np.clip(target, self._h(np.array([self.t_min]))[0], self._h(np.array([self.t_max]))[0])
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            hm = self._h(mid % n)
            go_right = np.where(rising, hm < target, hm > target)
            lo = np.where(go_right, mid, lo)
            hi = np.where(go_right, hi, mid)
        return (0.5 * (lo + hi)) % n


def chord_involution(curve: geo.ParamCurve, rho: float, x, tol=1e-10):
    """Other end of the chord through the curve point x with direction angle
    rho + pi/2; tangency points are returned unchanged."""
    x = np.asarray(x, dtype=float)
    t, d = geo.closest_point(curve, x)
    if d > tol:
        raise DynamicsError(f"point {x.tolist()} is not on the curve (distance {d:.3g})")
    s = ChordInvolution(curve, rho)
    return curve.point(s(t))[0]


# -- circle maps -------------------------------------------------------------------

class CircleMap:
    """Orientation preserving circle homeomorphism through a degree-one lift F."""

    def __init__(self, scalar: Callable, vector: Callable, provenance: str, validate=True):
        self._scalar = scalar
        self._vector = vector
        self.provenance = provenance
        if validate:
            self.validate()

    def __call__(self, x):
        return self._scalar(float(x))

    def lift(self, x):
        return self._vector(np.asarray(x, dtype=float))

    def circle(self, theta):
        """f on the circle: angles in [0, 2 pi)."""
        return np.mod(self.lift(theta), TWO_PI)

    def validate(self, grid=4096):
        x = np.linspace(0.0, TWO_PI, grid + 1)
        F = self.lift(x)
        if np.any(np.diff(F) <= 0):
            raise DynamicsError("lift is not strictly increasing")
        per = self.lift(x + TWO_PI) - F
        if np.max(np.abs(per - TWO_PI)) > 1e-9:
            raise DynamicsError("lift does not satisfy F(x + 2 pi) = F(x) + 2 pi")

    @classmethod
    def rotation(cls, alpha):
        a = TWO_PI * alpha
        return cls(lambda x: x + a, lambda x: x + a, "pure rotation")

    @classmethod
    def from_samples(cls, F, provenance):
        """Lift from values F_j = F(2 pi j / N), j = 0..N-1, interpolated by a
        periodic monotone cubic (harmonic-mean slopes)."""
        F = np.asarray(F, dtype=float)
        N = len(F)
        h = TWO_PI / N
        Fx = np.append(F, F[0] + TWO_PI)
        sec = np.diff(Fx) / h
        if np.any(sec <= 0):
            raise DynamicsError("sampled lift is not strictly increasing")
        prev = np.roll(sec, 1)
        m = 2.0 * prev * sec / (prev + sec)
        m = np.append(m, m[0])
        # cubic per cell in local s in [0, h]
        c0 = Fx[:-1]
        c1 = m[:-1]
        c2 = (3.0 * sec - 2.0 * m[:-1] - m[1:]) / h
        c3 = (m[:-1] + m[1:] - 2.0 * sec) / (h * h)
        L0, L1, L2, L3 = c0.tolist(), c1.tolist(), c2.tolist(), c3.tolist()

        def scalar(x):
            k = math.floor(x / TWO_PI)
            th = x - k * TWO_PI
            j = int(th / h)
            if j >= N:
                j = N - 1
            s = th - j * h
            return k * TWO_PI + L0[j] + s * (L1[j] + s * (L2[j] + s * L3[j]))

        def vector(x):
            k = np.floor(x / TWO_PI)
            th = x - k * TWO_PI
            j = np.minimum((th / h).astype(int), N - 1)
            s = th - j * h
            return k * TWO_PI + c0[j] + s * (c1[j] + s * (c2[j] + s * c3[j]))

        return cls(scalar, vector, provenance)


def conjugated_rotation(tau, h0, h0_scalar, h0_inv_scalar, h0_inv_vector):
    """f = h0^{-1} o R_tau o h0 for a lift h0 of a circle homeomorphism."""
    a = TWO_PI * tau
    return CircleMap(lambda x: h0_inv_scalar(h0_scalar(x) + a),
                     lambda x: h0_inv_vector(h0(x) + a), "conjugated rotation")


def sine_conjugacy(eps=0.3):
    """h0(x) = x + eps sin x with a Newton inverse (|eps| < 1)."""
    if not abs(eps) < 1:
        raise DynamicsError("need |eps| < 1")
    h0 = lambda x: x + eps * np.sin(x)

    def inv_s(y):
        x = y
        for _ in range(50):
            dx = (x + eps * math.sin(x) - y) / (1.0 + eps * math.cos(x))
            x -= dx
            if abs(dx) < 1e-16 * max(1.0, abs(x)):
                break
        return x

    def inv_v(y):
        y = np.asarray(y, dtype=float)
        x = y.copy()
        for _ in range(50):
            dx = (x + eps * np.sin(x) - y) / (1.0 + eps * np.cos(x))
            x = x - dx
            if np.max(np.abs(dx)) < 1e-15:
                break
        return x

    h0s = lambda x: x + eps * math.sin(x)
    return h0, h0s, inv_s, inv_v


def t_rho_map(curve: geo.ParamCurve, rho: float, origin=None, samples=4096) -> CircleMap:
    """Circle map p o s_rho o s_0 o p^{-1} sampled on `samples` angles."""
    _require_strict(curve)
    O = curve.centroid() if origin is None else np.asarray(origin, dtype=float)
    if geo.classify_point(geo.ConvexDomain(curve, "generic-convex", {}, O), O) != geo.INTERIOR:
        raise DynamicsError("projection centre must lie strictly inside the curve")
    if math.remainder(rho, math.pi) == 0.0:
        # s_rho = s_0 and t_rho = s_0 o s_0 is the identity
        return CircleMap.rotation(0.0)
    th = TWO_PI * np.arange(samples) / samples
    t = geo.angle_to_param(curve, O, th)
    s0 = ChordInvolution(curve, 0.0)
    sr = ChordInvolution(curve, rho)
    img = curve.point(sr(s0(t))) - O
    phi = np.arctan2(img[:, 1], img[:, 0])
    d = np.unwrap(np.mod(phi - th + math.pi, TWO_PI) - math.pi)
    if abs(d[-1] - d[0]) > math.pi:
        raise DynamicsError("displacement is not periodic; radial projection failed")
    return CircleMap.from_samples(th + d, f"t_rho map (rho={rho!r})")


# -- rotation numbers ------------------------------------------------------------------

@dataclass(frozen=True)
class RotationEstimate:
    value: float
    iterations: int
    spread: float
    p: int
    q: int
    distance: float

    @property
    def rational(self):
        return self.distance <= RATIONAL_TOL

    def to_dict(self):
        return {"tau": self.value, "iterations": self.iterations, "spread": self.spread,
                "p": self.p, "q": self.q, "distance": self.distance, "rational": self.rational}


def nearest_rational(v, qmax=MAX_DENOMINATOR):
    best = (1.0, 0, 1)
    for q in range(1, qmax + 1):
        p = round(v * q)
        d = abs(v - p / q)
        if d < best[0] - 1e-15:
            best = (d, int(p) % q if p != q else 0, q)
            if p == q:
                best = (d, 0, 1)
    fr = Fraction(best[1], best[2])
    return best[0], fr.numerator, fr.denominator


def _snap(v):
    v = v % 1.0
    return 0.0 if v > 1.0 - 1e-12 else v


def rotation_number(f: CircleMap, N: int = 100000, x0: float = 0.0) -> RotationEstimate:
    """(F^N(x0) - x0) / (2 pi N) mod 1, with the spread of the estimates at
    N/4, N/2 and N; the estimator error is at most 1/N."""
    if N < 1000:
        raise DynamicsError("need N >= 1000 iterations")
    marks = {N // 4: None, N // 2: None, N: None}
    x = float(x0)
    F = f._scalar
    for n in range(1, N + 1):
        x = F(x)
        if n in marks:
            marks[n] = (x - x0) / (TWO_PI * n)
    est = [marks[k] for k in sorted(marks)]
    spread = max(est) - min(est)
    v = _snap(est[-1])
    d, p, q = nearest_rational(v)
    return RotationEstimate(v, N, spread, p, q, d)


def weighted_rotation_number(f: CircleMap, N: int = 20000, x0: float = 0.0) -> float:
    """Weighted Birkhoff average of the displacement with the C-infinity bump
    weight exp(-1/(s(1-s))); converges fast for smoothly conjugate maps."""
    disp = np.empty(N)
    x = float(x0)
    F = f._scalar
    for n in range(N):
        y = F(x)
        disp[n] = y - x
        x = y - TWO_PI * math.floor(y / TWO_PI)
    s = (np.arange(N) + 0.5) / N
    w = np.exp(-1.0 / (s * (1.0 - s)))
    w /= w.sum()
    return _snap(float(np.sum(w * disp) / TWO_PI))


# -- Denjoy conjugacy -------------------------------------------------------------------

@dataclass(frozen=True)
class Conjugacy:
    grid: np.ndarray
    values: np.ndarray     # lift of h on the grid, h(grid[0]) chosen by the base point
    tau: float
    defect: float
    M: int
    orbit_length: int

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        k = np.floor(x / TWO_PI)
        th = x - k * TWO_PI
        xp = np.append(self.grid, TWO_PI)
        fp = np.append(self.values, self.values[0] + TWO_PI)
        return k * TWO_PI + np.interp(th, xp, fp)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "h"])
            for a, b in zip(self.grid, self.values):
                w.writerow([repr(float(a)), repr(float(b))])


def denjoy_conjugacy(f: CircleMap, M: int = 4096, tau: Optional[float] = None, x0: float = 0.0,
                     orbit_factor: int = 16) -> Conjugacy:
    """Approximate h with h o f = R_tau o h from the circular order of an orbit.

    h sends f^n(x0) to 2 pi n tau; grid values come from linear interpolation
    between consecutive orbit points, and the defect
    sup |h(f(x)) - h(x) - 2 pi tau| is measured on the grid.
    """
    if tau is None:
        tau = weighted_rotation_number(f)
    d, p, q = nearest_rational(tau)
    if d <= 1e-4:
        raise DynamicsError(f"rotation number {tau!r} is within {d:.2g} of {p}/{q}; "
                            "no conjugacy to an irrational rotation")
    K = orbit_factor * M
    orbit = np.empty(K)
    x = float(x0)
    F = f._scalar
    for n in range(K):
        orbit[n] = x
        x = F(x)
        # stay on [0, 2pi) so rounding does not grow with the lift
        x -= TWO_PI * math.floor(x / TWO_PI)
    theta = np.mod(orbit, TWO_PI)
    target = TWO_PI * np.mod(tau * np.arange(K), 1.0)
    order = np.argsort(theta, kind="stable")
    ts, ps = theta[order], target[order]
    if np.min(np.diff(ts)) < 1e-12:
        raise DynamicsError("orbit points collide; the rotation number looks rational")
    # circular order must be preserved: after one unwrap the targets increase
    steps = np.diff(ps)
    steps = np.where(steps < 0, steps + TWO_PI, steps)
    pu = ps[0] + np.concatenate([[0.0], np.cumsum(steps)])
    if pu[-1] - pu[0] >= TWO_PI:
        raise DynamicsError("orbit order is not that of a rotation")
    grid = TWO_PI * np.arange(M) / M
    xp = np.concatenate([ts - TWO_PI, ts, ts + TWO_PI])
    fp = np.concatenate([pu - TWO_PI, pu, pu + TWO_PI])
    vals = np.interp(grid, xp, fp)
    # anchor h(x0) = 0 (x0 maps to target 0 exactly)
    hc = Conjugacy(grid, vals, tau, 0.0, M, K)
    shift = float(hc(np.array([x0]))[0])
    vals = vals - shift
    hc = Conjugacy(grid, vals, tau, 0.0, M, K)
    diff = hc(f.lift(grid)) - hc(grid) - TWO_PI * tau
    diff = np.mod(diff + math.pi, TWO_PI) - math.pi
    return Conjugacy(grid, vals, tau, float(np.max(np.abs(diff))), M, K)


# -- scans -----------------------------------------------------------------------------------

def tangency_angle(curve: geo.ParamCurve):
    """rho_1: the chord M1 M2 between the vertical tangency points (M1 with the
    largest x1) has direction angle rho_1 + pi/2."""
    _require_strict(curve)
    n = curve.n_pieces
    x1 = lambda t: curve.point(t)[..., 0]
    t1 = _extremum(x1, n, sign=1.0)
    t2 = _extremum(x1, n, sign=-1.0)
    M1, M2 = curve.point(np.array([t1, t2]))
    ang = math.atan2(M2[1] - M1[1], M2[0] - M1[0]) - math.pi / 2
    rho1 = ang % math.pi
    return (math.pi if rho1 == 0.0 else rho1), M1, M2


@dataclass(frozen=True)
class ScanRow:
    rho: float
    tau: float
    spread: float
    p: int
    q: int
    distance: float

    @property
    def rational(self):
        return self.distance <= RATIONAL_TOL


@dataclass(frozen=True)
class ScanTable:
    rho1: float
    rows: tuple

    @property
    def candidates(self):
        """Grid angles whose tau is not within the tolerance of a p/q, q <= 20."""
        return [r.rho for r in self.rows if not r.rational]

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rho", "tau", "spread", "nearest_pq", "distance"])
            for r in self.rows:
                w.writerow([repr(r.rho), repr(r.tau), repr(r.spread), f"{r.p}/{r.q}", repr(r.distance)])


def rho_scan(curve: geo.ParamCurve, origin=None, rhos=None, N: int = 20000, points: int = 41) -> ScanTable:
    """tau(t_rho) over a grid of angles in [0, rho_1]."""
    rho1, _, _ = tangency_angle(curve)
    if rhos is None:
        rhos = np.linspace(0.0, rho1, points)
    rhos = np.asarray(rhos, dtype=float)
    if rhos.size == 0:
        raise DynamicsError("the rho grid is empty")
    if np.any(rhos < -1e-12) or np.any(rhos > rho1 + 1e-9):
        raise DynamicsError(f"grid must lie in [0, rho_1] = [0, {rho1!r}]")
    rows = []
    for rho in rhos:
        est = rotation_number(t_rho_map(curve, float(rho), origin), N)
        rows.append(ScanRow(float(rho), est.value, est.spread, est.p, est.q, est.distance))
    return ScanTable(rho1, tuple(rows))


# -- transport counterexamples -----------------------------------------------------------------

@dataclass(frozen=True)
class RationalCounterexample:
    n: int
    k: int
    rho: float
    density: Density
    domain: geo.ConvexDomain

    def angle_function(self, theta):
        return np.exp(1j * self.n * theta) - np.exp(-1j * self.n * theta)

    def line_samples(self, count=64, extent=20.0):
        """Points on Delta_0 and Delta_rho (lines through 0 at angles 0 and rho)."""
        s = np.linspace(-extent, extent, count)
        d0 = np.stack([s, np.zeros_like(s)], axis=-1)
        dr = np.stack([s * math.cos(self.rho), s * math.sin(self.rho)], axis=-1)
        return np.vstack([d0, dr])

    def lines(self):
        return {"angles": [0.0, self.rho]}


def rational_counterexample(n: int, k: int, domain: geo.ConvexDomain = None) -> RationalCounterexample:
    """g(e^{i theta}) = e^{i n theta} - e^{-i n theta} with rho = k pi / n."""
    if n < 1:
        raise DynamicsError("n must be >= 1")
    dom = domain or geo.disk(1.0)
    f = lambda th: np.exp(1j * n * th) - np.exp(-1j * n * th)
    g = Density.from_angle(dom.boundary, f)
    return RationalCounterexample(n, k, k * math.pi / n, g, dom)


def period_check(g: Density, rho: float, max_n: int = 64, center=(0.0, 0.0)) -> bool:
    """2 rho is a period of theta -> g(e^{i theta}): every coefficient with
    |a_n| > 1e-10 has |1 - e^{2 i n rho}| <= 1e-8."""
    a = fourier_coefficients(g, max_n, center)
    n = np.arange(-max_n, max_n + 1)
    live = np.abs(a) > 1e-10
    return bool(np.all(np.abs(1.0 - np.exp(2j * n[live] * rho)) <= 1e-8))
