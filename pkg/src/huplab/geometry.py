"""Plane curves, convex domains and the radial 3D sphere.

Curves are explicit piecewise parameterisations.  A curve with ``n`` pieces
uses a global parameter ``t`` in ``[0, n)``; piece ``i`` is evaluated at the
local parameter ``s = t - i`` in ``[0, 1]``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize

C1_PIECEWISE = "C1-piecewise"
C2 = "C2"
C2_STRICTLY_CONVEX = "C2-strictly-convex"
_REG_RANK = {C1_PIECEWISE: 0, C2: 1, C2_STRICTLY_CONVEX: 2}

INTERIOR, BOUNDARY, EXTERIOR = "interior", "boundary", "exterior"


class GeometryError(ValueError):
    pass


class CornerError(GeometryError):
    def __init__(self, t, normals):
        self.normals = normals
        super().__init__(
            f"parameter t={t} is a corner; one-sided normals {normals[0].tolist()} "
            f"and {normals[1].tolist()}")


def _gauss(n):
    return np.polynomial.legendre.leggauss(n)


@dataclass(frozen=True)
class Piece:
    """Smooth map [0, 1] -> R^2 with derivatives (vectorised over s)."""

    point: Callable
    deriv: Callable
    deriv2: Optional[Callable] = None


class ParamCurve:
    """Closed, simple, positively oriented piecewise-C^1 plane curve."""

    def __init__(self, pieces: Sequence[Piece], regularity: str = C1_PIECEWISE,
                 validate: bool = True):
        if regularity not in _REG_RANK:
            raise GeometryError(f"unknown regularity tag {regularity!r}")
        self.pieces = tuple(pieces)
        self.regularity = regularity
        if validate:
            self._validate()

    @property
    def n_pieces(self):
        return len(self.pieces)

    def has_regularity(self, required):
        return _REG_RANK[self.regularity] >= _REG_RANK[required]

    # -- evaluation on the global parameter --------------------------------
    def _split(self, t):
        t = np.asarray(t, dtype=float)
        n = self.n_pieces
        tt = np.mod(t, n)
        # t == n after wrapping means the end of the last piece
        idx = np.clip(np.floor(tt).astype(int), 0, n - 1)
        return tt, idx, tt - idx

    def _eval(self, t, which):
        tt, idx, s = self._split(t)
        out = np.empty(tt.shape + (2,))
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                fn = getattr(piece, which)
                if fn is None:
                    raise GeometryError(f"piece {i} has no {which}")
                out[mask] = np.asarray(fn(s[mask])).reshape(-1, 2)
        return out

    def point(self, t):
        return self._eval(t, "point")

    def deriv(self, t):
        return self._eval(t, "deriv")

    def deriv2(self, t):
        return self._eval(t, "deriv2")

    def speed(self, t):
        return np.linalg.norm(self.deriv(t), axis=-1)

    def curvature(self, t):
        d1, d2 = self.deriv(t), self.deriv2(t)
        cross = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
        return cross / np.linalg.norm(d1, axis=-1) ** 3

    def nodes(self, n_per_piece: int):
        """Gauss-Legendre nodes: (t, points, weights) with weights including speed."""
        x, w = _gauss(n_per_piece)
        s = 0.5 * (x + 1.0)
        t = (np.arange(self.n_pieces)[:, None] + s[None, :]).ravel()
        ww = np.tile(0.5 * w, self.n_pieces)
        return t, self.point(t), ww * self.speed(t)

    def sample(self, n_per_piece: int, endpoint=False):
        s = np.linspace(0.0, 1.0, n_per_piece, endpoint=endpoint)
        return (np.arange(self.n_pieces)[:, None] + s[None, :]).ravel()

    # -- derived quantities ----------------------------------------------
    def length(self, n_per_piece=64):
        return float(arc_quadrature(self, lambda x: np.ones(len(x)), n_per_piece).real)

    def signed_area(self, n_per_piece=64):
        t, x, _ = self.nodes(n_per_piece)
        d = self.deriv(t)
        _, w = _gauss(n_per_piece)
        ww = np.tile(0.5 * w, self.n_pieces)
        return 0.5 * float(np.sum(ww * (x[:, 0] * d[:, 1] - x[:, 1] * d[:, 0])))

    def centroid(self, n_per_piece=64):
        t, x, _ = self.nodes(n_per_piece)
        d = self.deriv(t)
        _, w = _gauss(n_per_piece)
        ww = np.tile(0.5 * w, self.n_pieces)
        cross = x[:, 0] * d[:, 1] - x[:, 1] * d[:, 0]
        area = 0.5 * np.sum(ww * cross)
        cx = np.sum(ww * cross * x[:, 0]) / (6 * area)
        cy = np.sum(ww * cross * x[:, 1]) / (6 * area)
        return np.array([cx, cy])

    def corners(self, angle_tol=1e-8):
        """Piece junctions where the one-sided tangents differ."""
        out = []
        n = self.n_pieces
        for i in range(n):
            left = np.asarray(self.pieces[i - 1].deriv(np.array([1.0]))).reshape(2)
            right = np.asarray(self.pieces[i].deriv(np.array([0.0]))).reshape(2)
            c = (left[0] * right[1] - left[1] * right[0]) / (np.linalg.norm(left) * np.linalg.norm(right))
            if abs(c) > angle_tol or np.dot(left, right) < 0:
                out.append(float(i))
        return out

    def translated(self, shift):
        shift = np.asarray(shift, dtype=float)
        pieces = [Piece(lambda s, p=p: np.asarray(p.point(s)) + shift, p.deriv, p.deriv2)
                  for p in self.pieces]
        return ParamCurve(pieces, self.regularity, validate=False)

    def mapped(self, matrix):
        """Image under an invertible linear map (orientation restored if det < 0)."""
        M = np.asarray(matrix, dtype=float)
        if abs(np.linalg.det(M)) < 1e-14:
            raise GeometryError("linear map must be invertible")

        def lift(fn):
            return None if fn is None else (lambda s: np.asarray(fn(s)) @ M.T)

        pieces = [Piece(lift(p.point), lift(p.deriv), lift(p.deriv2)) for p in self.pieces]
        if np.linalg.det(M) < 0:
            pieces = [_reverse(p) for p in reversed(pieces)]
        return ParamCurve(pieces, self.regularity, validate=False)

    def _validate(self, samples=64):
        n = self.n_pieces
        scale = 0.0
        for i, p in enumerate(self.pieces):
            end = np.asarray(p.point(np.array([1.0]))).reshape(2)
            nxt = np.asarray(self.pieces[(i + 1) % n].point(np.array([0.0]))).reshape(2)
            scale = max(scale, float(np.max(np.abs(end))), 1.0)
            if np.linalg.norm(end - nxt) > 1e-9 * scale:
                raise GeometryError(f"curve not closed between piece {i} and {(i + 1) % n}")
        t = self.sample(samples)
        if np.any(self.speed(t) <= 1e-12) or np.any(self.speed(t + 0.5 / samples) <= 1e-12):
            raise GeometryError("curve has vanishing speed")
        if self.signed_area() <= 0:
            raise GeometryError("curve must be positively oriented")
        pts = self.point(t)
        if _polygon_self_intersects(pts):
            raise GeometryError("curve is not simple on the sampled grid")


def _reverse(p):
    return Piece(lambda s: p.point(1.0 - np.asarray(s)),
                 lambda s: -np.asarray(p.deriv(1.0 - np.asarray(s))),
                 None if p.deriv2 is None else (lambda s: p.deriv2(1.0 - np.asarray(s))))


def _polygon_self_intersects(pts):
    a = pts
    b = np.roll(pts, -1, axis=0)
    m = len(a)

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    A1, B1 = a[:, None, :], b[:, None, :]
    A2, B2 = a[None, :, :], b[None, :, :]
    d1 = orient(A1, B1, A2)
    d2 = orient(A1, B1, B2)
    d3 = orient(A2, B2, A1)
    d4 = orient(A2, B2, B1)
    hit = (d1 * d2 < 0) & (d3 * d4 < 0)
    i, j = np.indices((m, m))
    adjacent = (np.abs(i - j) <= 1) | (np.abs(i - j) == m - 1)
    return bool(np.any(hit & ~adjacent))


# -- curve constructors ------------------------------------------------------

def _arc_pieces(cx, cy, a, b, npieces):
    q = 2.0 * math.pi / npieces
    pieces = []
    for k in range(npieces):
        def point(s, k=k):
            th = q * (k + np.asarray(s, dtype=float))
            return np.stack([cx + a * np.cos(th), cy + b * np.sin(th)], axis=-1)

        def deriv(s, k=k):
            th = q * (k + np.asarray(s, dtype=float))
            return np.stack([-q * a * np.sin(th), q * b * np.cos(th)], axis=-1)

        def deriv2(s, k=k):
            th = q * (k + np.asarray(s, dtype=float))
            return np.stack([-q * q * a * np.cos(th), -q * q * b * np.sin(th)], axis=-1)

        pieces.append(Piece(point, deriv, deriv2))
    return pieces


def circle(radius=1.0, center=(0.0, 0.0), npieces=4) -> ParamCurve:
    """Circle as `npieces` equal arcs; angle theta = 2 pi t / npieces."""
    if radius <= 0:
        raise GeometryError("radius must be positive")
    return ParamCurve(_arc_pieces(center[0], center[1], radius, radius, npieces),
                      C2_STRICTLY_CONVEX)


def ellipse(a, b, center=(0.0, 0.0), npieces=4) -> ParamCurve:
    if a <= 0 or b <= 0:
        raise GeometryError("semi-axes must be positive")
    return ParamCurve(_arc_pieces(center[0], center[1], a, b, npieces), C2_STRICTLY_CONVEX)


def _segment(p, q):
    p, q = np.asarray(p, float), np.asarray(q, float)
    d = q - p
    return Piece(lambda s: p + np.asarray(s, float)[..., None] * d,
                 lambda s: np.broadcast_to(d, np.shape(s) + (2,)).copy(),
                 lambda s: np.zeros(np.shape(s) + (2,)))


def rectangle(T, L, origin=(0.0, 0.0)) -> ParamCurve:
    """Boundary of (0,T) x (0,L) shifted by `origin`, edges in the order
    bottom, right, top, left."""
    if T <= 0 or L <= 0:
        raise GeometryError("rectangle sides must be positive")
    ox, oy = origin
    v = [(ox, oy), (ox + T, oy), (ox + T, oy + L), (ox, oy + L)]
    return ParamCurve([_segment(v[i], v[(i + 1) % 4]) for i in range(4)], C1_PIECEWISE)


def smooth_curve(point, deriv, deriv2=None, regularity=C2) -> ParamCurve:
    """Single-piece closed curve from a 1-periodic parameterisation on [0, 1]."""
    return ParamCurve([Piece(point, deriv, deriv2)], regularity)


def tabulated_curve(t, x1, x2, dx1=None, dx2=None) -> ParamCurve:
    """Closed curve through tabulated points (t strictly increasing, last point
    equal to the first).  With derivative columns a cubic Hermite interpolant is
    used (C^1); without them a periodic cubic spline (C^2)."""
    from scipy.interpolate import CubicHermiteSpline, CubicSpline

    t = np.asarray(t, float)
    span = t[-1] - t[0]
    s = (t - t[0]) / span
    xy = np.stack([x1, x2], axis=-1).astype(float)
    if dx1 is not None and dx2 is not None:
        dxy = np.stack([dx1, dx2], axis=-1).astype(float) * span
        spl = CubicHermiteSpline(s, xy, dxy, axis=0)
        reg = C1_PIECEWISE
    else:
        xy[-1] = xy[0]
        spl = CubicSpline(s, xy, bc_type="periodic", axis=0)
        reg = C2
    d1, d2 = spl.derivative(1), spl.derivative(2)
    piece = Piece(lambda u: spl(np.asarray(u, float)),
                  lambda u: d1(np.asarray(u, float)),
                  lambda u: d2(np.asarray(u, float)))
    return ParamCurve([piece], reg)


def load_curve_csv(path) -> ParamCurve:
    """Read columns t, x1, x2[, dx1, dx2] (header row required)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    col = lambda k: np.array([float(r[k]) for r in rows]) if k in rows[0] else None
    return tabulated_curve(col("t"), col("x1"), col("x2"), col("dx1"), col("dx2"))


# -- quadrature --------------------------------------------------------------

def arc_quadrature(curve: ParamCurve, f, nodes_per_piece: int = 64) -> complex:
    """Composite Gauss-Legendre value of int_curve f dsigma.

    `f` maps an (N, 2) array of points to N values.  Nodes never sit on piece
    junctions, so corners carry no mass.
    """
    if nodes_per_piece < 2:
        raise ValueError("nodes_per_piece must be >= 2")
    t, x, w = curve.nodes(nodes_per_piece)
    vals = np.asarray(f(x), dtype=complex)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        raise GeometryError(f"integrand not finite at curve parameter t={t[bad][0]!r}")
    return complex(np.sum(w * vals))


# -- normals and closest points ------------------------------------------------

def _rot_out(d):
    # positive orientation: outward normal is the tangent turned clockwise
    return np.stack([d[..., 1], -d[..., 0]], axis=-1)


def outward_normal(curve: ParamCurve, t):
    """Unit outward normal at parameter t (scalar)."""
    t = float(t)
    n = curve.n_pieces
    tt = t % n
    if abs(tt - round(tt)) < 1e-13:
        i = int(round(tt)) % n
        left = np.asarray(curve.pieces[i - 1].deriv(np.array([1.0]))).reshape(2)
        right = np.asarray(curve.pieces[i].deriv(np.array([0.0]))).reshape(2)
        nl = _rot_out(left) / np.linalg.norm(left)
        nr = _rot_out(right) / np.linalg.norm(right)
        if np.linalg.norm(nl - nr) > 1e-8:
            raise CornerError(t, (nl, nr))
        return nr
    d = curve.deriv(np.array([t]))[0]
    return _rot_out(d) / np.linalg.norm(d)


def _newton_polish(curve, x, u, lo, hi, iters=6):
    # minimising |gamma - x|^2 only resolves u to sqrt(machine eps); solve
    # (gamma(u) - x) . gamma'(u) = 0 instead
    for _ in range(iters):
        uu = np.array([u])
        try:
            d2 = curve.deriv2(uu)[0]
        except GeometryError:
            return u
        r = curve.point(uu)[0] - x
        d1 = curve.deriv(uu)[0]
        den = d1 @ d1 + r @ d2
        if den <= 0:
            return u
        u_new = u - float(r @ d1) / den
        if not lo <= u_new <= hi:
            return u
        u = u_new
    return u


def closest_point(curve: ParamCurve, x, samples_per_piece=256):
    """(t, distance) of the point of the curve nearest to x."""
    x = np.asarray(x, dtype=float)
    t = curve.sample(samples_per_piece)
    d = np.linalg.norm(curve.point(t) - x, axis=-1)
    best_t, best_d = None, np.inf
    h = 1.0 / samples_per_piece
    for k in np.argsort(d)[:4]:
        t0 = t[k]
        lo, hi = t0 - h, t0 + h
        # stay on one piece so the objective is smooth; junctions are checked below
        i = int(math.floor(t0 + 1e-12)) % curve.n_pieces
        lo, hi = max(lo, i), min(hi, i + 1.0)
        res = optimize.minimize_scalar(
            lambda u: float(np.sum((curve.point(np.array([u]))[0] - x) ** 2)),
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
        u = _newton_polish(curve, x, float(res.x), lo, hi)
        dist = float(np.linalg.norm(curve.point(np.array([u]))[0] - x))
        if dist < best_d:
            best_t, best_d = u, dist
        dist = math.sqrt(max(res.fun, 0.0))
        if dist < best_d:
            best_t, best_d = float(res.x), dist
    for i in range(curve.n_pieces):
        dist = float(np.linalg.norm(curve.point(np.array([float(i)]))[0] - x))
        if dist < best_d:
            best_t, best_d = float(i), dist
    return best_t % curve.n_pieces, best_d


def angle_to_param(curve: ParamCurve, center, theta, table=4096):
    """Invert the radial projection: parameters t with arg(gamma(t) - center) = theta."""
    center = np.asarray(center, dtype=float)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    n = curve.n_pieces
    tg = np.linspace(0.0, n, table + 1)
    pts = curve.point(tg[:-1]) - center
    phi = np.unwrap(np.arctan2(pts[:, 1], pts[:, 0]))
    phi = np.append(phi, phi[0] + 2 * math.pi)
    th = phi[0] + np.mod(theta - phi[0], 2 * math.pi)
    t = np.interp(th, phi, tg)
    for _ in range(8):
        p = curve.point(t) - center
        d = curve.deriv(t)
        ang = np.arctan2(p[:, 1], p[:, 0])
        r2 = np.sum(p * p, axis=-1)
        dphi = (p[:, 0] * d[:, 1] - p[:, 1] * d[:, 0]) / r2
        err = np.mod(ang - th + math.pi, 2 * math.pi) - math.pi
        t = np.mod(t - err / dphi, n)
    return t


# -- domains -----------------------------------------------------------------

@dataclass(frozen=True)
class ConvexDomain:
    boundary: ParamCurve
    kind: str
    params: dict = field(default_factory=dict)
    witness: np.ndarray = None

    def __post_init__(self):
        if self.kind not in ("disk", "ellipse", "rectangle", "generic-convex"):
            raise GeometryError(f"unknown domain kind {self.kind!r}")
        if self.witness is None:
            object.__setattr__(self, "witness", self.boundary.centroid())


def disk(radius=1.0, center=(0.0, 0.0)) -> ConvexDomain:
    c = np.asarray(center, float)
    return ConvexDomain(circle(radius, c), "disk", {"center": c, "radius": float(radius)}, c)


def ellipse_domain(a, b, center=(0.0, 0.0)) -> ConvexDomain:
    c = np.asarray(center, float)
    return ConvexDomain(ellipse(a, b, c), "ellipse", {"center": c, "a": float(a), "b": float(b)}, c)


def rectangle_domain(T, L, origin=(0.0, 0.0)) -> ConvexDomain:
    o = np.asarray(origin, float)
    return ConvexDomain(rectangle(T, L, o), "rectangle", {"T": float(T), "L": float(L), "origin": o},
                        o + 0.5 * np.array([T, L]))


def generic_convex(curve: ParamCurve, grid=4096) -> ConvexDomain:
    """Wrap a C^2 curve, certifying positive curvature on a fine grid."""
    if not curve.has_regularity(C2):
        raise GeometryError("generic convex domains need a C^2 parameterisation")
    t = np.linspace(0.0, curve.n_pieces, grid, endpoint=False)
    if np.min(curve.curvature(t)) <= 0:
        raise GeometryError("curvature must be positive everywhere")
    curve = ParamCurve(curve.pieces, C2_STRICTLY_CONVEX, validate=False)
    return ConvexDomain(curve, "generic-convex", {})


def support_function(domain: ConvexDomain, xi, with_bound=False, samples=4096):
    """H(xi) = sup over the closed domain of xi . x.

    Closed forms for disk, ellipse and rectangle.  Generic domains use the
    boundary grid maximum, which underestimates H by at most
    |xi| * kappa_max * h^2 / 8 (h the largest sample spacing in arclength);
    with ``with_bound`` that bound is returned as a second value.
    """
    xi = np.asarray(xi, dtype=float)
    p = domain.params
    bound = 0.0
    if domain.kind == "disk":
        val = float(xi @ p["center"] + p["radius"] * np.linalg.norm(xi))
    elif domain.kind == "ellipse":
        val = float(xi @ p["center"] + math.hypot(p["a"] * xi[0], p["b"] * xi[1]))
    elif domain.kind == "rectangle":
        o = p["origin"]
        val = float(xi @ o + max(0.0, xi[0] * p["T"]) + max(0.0, xi[1] * p["L"]))
    else:
        curve = domain.boundary
        t = curve.sample(samples // curve.n_pieces)
        pts = curve.point(t)
        val = float(np.max(pts @ xi))
        h = float(np.max(np.linalg.norm(np.diff(np.vstack([pts, pts[:1]]), axis=0), axis=-1)))
        kmax = float(np.max(np.abs(curve.curvature(t))))
        bound = float(np.linalg.norm(xi) * kmax * h * h / 8.0)
    return (val, bound) if with_bound else val


def classify_point(domain: ConvexDomain, x, tol=1e-10) -> str:
    """Return 'interior', 'boundary' or 'exterior'."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    x = np.asarray(x, dtype=float)
    p = domain.params
    if domain.kind == "disk":
        r = np.linalg.norm(x - p["center"])
        dist, inside = abs(r - p["radius"]), r < p["radius"]
    elif domain.kind == "rectangle":
        u = x - p["origin"]
        T, L = p["T"], p["L"]
        inside = 0 < u[0] < T and 0 < u[1] < L
        if inside:
            dist = min(u[0], T - u[0], u[1], L - u[1])
        else:
            dx = max(-u[0], 0.0, u[0] - T)
            dy = max(-u[1], 0.0, u[1] - L)
            dist = math.hypot(dx, dy)
    else:
        curve = domain.boundary
        area = curve.signed_area()
        if not area > 1e-14:
            raise GeometryError("degenerate domain")
        t, dist = closest_point(curve, x)
        if dist <= tol:
            return BOUNDARY
        try:
            nrm = outward_normal(curve, t)
            inside = float(np.dot(x - curve.point(np.array([t]))[0], nrm)) < 0
        except CornerError:
            inside = float(np.dot(x - domain.witness, curve.point(np.array([t]))[0] - domain.witness)) < 0
    if dist <= tol:
        return BOUNDARY
    return INTERIOR if inside else EXTERIOR


# -- radial 3D extension -------------------------------------------------------

@dataclass(frozen=True)
class Sphere3:
    """Origin-centred sphere in R^3; only radial densities are supported."""

    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError("radius must be positive")

    @property
    def area(self):
        return 4.0 * math.pi * self.radius ** 2

    def transform_constant(self, g0, lam_norm):
        """Fourier-Stieltjes transform of the constant density g0 at |lambda|."""
        k = np.asarray(lam_norm, dtype=float) * self.radius
        return g0 * self.area * np.sinc(k / math.pi)

    def helmholtz_potential_constant(self, g0, c1, r):
        """int_S g0 * (-cos(c1 |x-y|) / (4 pi |x-y|)) dsigma(y) at |x| = r."""
        R = self.radius
        r = np.asarray(r, dtype=float)
        return -g0 * R / (2.0 * c1 * r) * (np.sin(c1 * (r + R)) - np.sin(c1 * np.abs(r - R)))
