"""Single-layer potentials  Phi g(x) = int_Gamma g(y) E(x - y) dsigma(y).

Helmholtz potentials use composite Gauss-Legendre panels on each curve
piece, graded geometrically toward the point of the piece nearest to x, so
the logarithmic (or near-logarithmic) peak of the kernel is resolved.  The
Schroedinger, wave and transport potentials live on the rectangle / unit
circle and are evaluated from their one-dimensional reductions.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from . import geometry as geo
from . import kernels as ker
from .specfun import fresnel_quadrature
from .transform import C1, C2, LP, Density, SCHEMA_VERSION

# limit of Phi_2 g(t, x) as t -> T (either side) is EDGE_LIMIT * exp(i pi/4) * g(T, x)
EDGE_LIMIT = 2.0 * math.sqrt(math.pi)

RICHARDSON_EPS0 = 1e-2
RICHARDSON_RUNGS = 5


class PotentialError(ValueError):
    pass


class RegularityError(PotentialError):
    pass


@dataclass(frozen=True)
class QuadPolicy:
    """Far-field nodes per panel, uniform panels per piece, and the near-field
    radius (as a multiple of the local panel length) inside which the
    geometric grading is switched on."""

    far_nodes: int = 8
    base_panels: int = 4
    delta_factor: float = 4.0
    tol: float = 1e-8
    max_nodes: int = 64

    def __post_init__(self):
        if min(self.far_nodes, self.base_panels, self.delta_factor, self.tol, self.max_nodes) <= 0:
            raise PotentialError("quadrature policy parameters must be positive")


@dataclass(frozen=True)
class PotentialField:
    kernel: ker.Kernel
    domain: geo.ConvexDomain
    density: Density
    policy: QuadPolicy = field(default_factory=QuadPolicy)

    def __post_init__(self):
        if self.density.curve is not self.domain.boundary:
            raise PotentialError("density must live on the domain boundary")
        k = self.kernel.kind
        if k == ker.HELMHOLTZ2D and self.density.exponent() <= 1:
            raise RegularityError("Helmholtz potentials need a density in Lp with p > 1")
        if k in (ker.SCHRODINGER1D, ker.WAVE1D) and self.domain.kind != "rectangle":
            raise PotentialError(f"{k} potentials are defined on rectangles only")
        if k == ker.SCHRODINGER1D and not self.density.has_regularity(C2):
            raise RegularityError("the Schroedinger potential requires g to be of class C2 "
                                  "on Gamma_1 and Gamma_3 (the horizontal sides)")
        if k == ker.WAVE1D and not self.density.has_regularity(C1):
            raise RegularityError("the wave potential requires a density of class C1")

    def evaluate(self, x, with_error=False):
        k = self.kernel.kind
        if k == ker.HELMHOLTZ2D:
            val, err = helmholtz_potential(self, x, with_error=True)
        elif k == ker.WAVE1D:
            val, err = wave_potential(self.domain, self.density, x[0], x[1]), 0.0
        elif k == ker.SCHRODINGER1D:
            val, err = schrodinger_potential(self.domain, self.density, x[0], x[1]), self.policy.tol
        else:
            raise PotentialError(f"no evaluator for kernel {k}")
        return (val, err) if with_error else val


# -- Helmholtz -------------------------------------------------------------------

def _piece_closest(piece, x, samples=65):
    s = np.linspace(0.0, 1.0, samples)
    d = np.linalg.norm(np.asarray(piece.point(s)) - x, axis=-1)
    k = int(np.argmin(d))
    lo, hi = s[max(k - 1, 0)], s[min(k + 1, samples - 1)]
    res = optimize.minimize_scalar(
        lambda u: float(np.sum((np.asarray(piece.point(np.array([u])))[0] - x) ** 2)),
        bounds=(lo, hi), method="bounded", options={"xatol": 1e-15})
    cand = [(math.sqrt(max(res.fun, 0.0)), float(res.x)), (float(d[k]), float(s[k]))]
    return min(cand)[::-1]


def _graded_breaks(s0, dist_param, base, delta_factor):
    """Panel breakpoints on [0, 1]: `base` uniform panels plus dyadic panels
    toward s0 when the point is within delta_factor panel lengths."""
    br = set(np.linspace(0.0, 1.0, base + 1).tolist())
    if dist_param < delta_factor / base:
        floor = max(dist_param, 1e-10)
        for side in (-1.0, 1.0):
            ell = (1.0 - s0) if side > 0 else s0
            if ell <= 0:
                continue
            h = ell
            while h > 0.25 * floor:
                br.add(s0 + side * h)
                h *= 0.5
            br.add(s0)
        # a uniform break a hair away from s0 would leave a sliver panel whose
        # nodes round onto the singularity
        br = {b for b in br if b == s0 or abs(b - s0) > 1e-12}
        if not any(b <= 1e-12 for b in br):
            br.add(0.0)
        if not any(b >= 1.0 - 1e-12 for b in br):
            br.add(1.0)
    return np.array(sorted(b for b in br if 0.0 <= b <= 1.0))


def _helmholtz_rule(curve, x, policy):
    """Per-piece breakpoints (list of arrays) adapted to the point x."""
    rules = []
    for p in curve.pieces:
        s0, d = _piece_closest(p, x)
        sp = float(np.linalg.norm(np.asarray(p.deriv(np.array([s0])))[0]))
        rules.append(_graded_breaks(s0, d / sp, policy.base_panels, policy.delta_factor))
    return rules


def _helmholtz_sum(field, x, rules, n):
    curve, g, k = field.domain.boundary, field.density, field.kernel
    gx, gw = np.polynomial.legendre.leggauss(n)
    total = 0.0j
    for i, br in enumerate(rules):
        a, b = br[:-1], br[1:]
        s = (0.5 * (a + b))[:, None] + (0.5 * (b - a))[:, None] * gx[None, :]
        w = (0.5 * (b - a))[:, None] * gw[None, :]
        t = (i + s).ravel()
        pts = curve.point(t)
        r = np.linalg.norm(pts - x, axis=-1)
        if np.any(r == 0):
            raise PotentialError("quadrature node coincides with the evaluation point")
        vals = g(t) * ker.helmholtz_radial(k, r) * curve.speed(t)
        total += np.sum(w.ravel() * vals)
    return total


def helmholtz_potential(field: PotentialField, x, with_error=False):
    """Phi g(x) for the 2D Helmholtz kernel; x may lie on Gamma."""
    if field.kernel.kind != ker.HELMHOLTZ2D:
        raise PotentialError("helmholtz_potential needs a Helmholtz2D kernel")
    x = np.asarray(x, dtype=float)
    pol = field.policy
    rules = _helmholtz_rule(field.domain.boundary, x, pol)
    n = pol.far_nodes
    prev = _helmholtz_sum(field, x, rules, n)
    while True:
        n *= 2
        cur = _helmholtz_sum(field, x, rules, n)
        err = abs(cur - prev)
        if err <= pol.tol * max(1.0, abs(cur)):
            return (cur, err) if with_error else cur
        if n >= pol.max_nodes:
            raise ArithmeticError(f"helmholtz_potential not converged at x={x.tolist()}: "
                                  f"estimates {prev!r}, {cur!r}")
        prev = cur


def helmholtz_sweep(field, points):
    out = [helmholtz_potential(field, p, with_error=True) for p in np.atleast_2d(points)]
    return np.array([v for v, _ in out]), np.array([e for _, e in out])


# -- boundary probes ---------------------------------------------------------------

def _neville(xs, ys, x0=0.0):
    p = [complex(y) for y in ys]
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = ((x0 - xs[i + m]) * p[i] + (xs[i] - x0) * p[i + 1]) / (xs[i] - xs[i + m])
    return p[0]


@dataclass(frozen=True)
class JumpProbe:
    point: np.ndarray
    normal: np.ndarray
    eps: np.ndarray
    interior: np.ndarray
    exterior: np.ndarray
    interior_limit: complex
    exterior_limit: complex
    on_curve: complex

    @property
    def jump(self):
        return abs(self.interior_limit - self.exterior_limit)

    def to_dict(self):
        cpx = lambda z: [float(np.real(z)), float(np.imag(z))]
        return {
            "schema_version": SCHEMA_VERSION,
            "point": [float(v) for v in self.point],
            "normal": [float(v) for v in self.normal],
            "eps": [float(e) for e in self.eps],
            "interior": [cpx(v) for v in self.interior],
            "exterior": [cpx(v) for v in self.exterior],
            "interior_limit": cpx(self.interior_limit),
            "exterior_limit": cpx(self.exterior_limit),
            "on_curve": cpx(self.on_curve),
            "jump": float(self.jump),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def jump_test(field: PotentialField, t0: float, eps0=RICHARDSON_EPS0, rungs=RICHARDSON_RUNGS) -> JumpProbe:
    """One-sided limits at gamma(t0) along -+ the outward normal, extrapolated
    to eps = 0 from the ladder eps_k = eps0 2^-k."""
    if rungs < 3:
        raise PotentialError("need at least three rungs")
    curve = field.domain.boundary
    nrm = geo.outward_normal(curve, t0)  # raises at corners
    x0 = curve.point(np.array([float(t0)]))[0]
    eps = eps0 * 2.0 ** -np.arange(rungs)
    inner = np.array([field.evaluate(x0 - e * nrm) for e in eps])
    outer = np.array([field.evaluate(x0 + e * nrm) for e in eps])
    on = field.evaluate(x0) if field.kernel.kind == ker.HELMHOLTZ2D else np.nan
    return JumpProbe(x0, nrm, eps, inner, outer, _neville(eps, inner), _neville(eps, outer), on)


@dataclass(frozen=True)
class ExteriorReport:
    points: np.ndarray
    values: np.ndarray
    errors: np.ndarray

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.values)))

    @property
    def max_error(self):
        return float(np.max(self.errors))

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "max_abs": self.max_abs,
            "max_error": self.max_error,
            "points": [[float(a) for a in p] for p in self.points],
            "values": [[float(v.real), float(v.imag)] for v in self.values],
            "errors": [float(e) for e in self.errors],
        }


def exterior_support_test(evaluator, points, is_exterior: Callable) -> ExteriorReport:
    """Max |Phi g| over exterior samples.

    `evaluator(p)` returns (value, error estimate); `is_exterior(p)` guards
    the precondition.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    for p in pts:
        if not is_exterior(p):
            raise PotentialError(f"sample {p.tolist()} is not exterior")
    res = [evaluator(p) for p in pts]
    return ExteriorReport(pts, np.array([complex(v) for v, _ in res]), np.array([float(e) for _, e in res]))


def field_exterior_test(field: PotentialField, points, tol=1e-10) -> ExteriorReport:
    dom = field.domain
    return exterior_support_test(lambda p: field.evaluate(p, with_error=True), points,
                                 lambda p: geo.classify_point(dom, p, tol) == geo.EXTERIOR)


def write_sweep_csv(path, points, values, errors, names=("x1", "x2")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([names[0], names[1], "re_phi", "im_phi", "est_error"])
        for p, v, e in zip(points, values, errors):
            v = complex(v)
            w.writerow([repr(float(p[0])), repr(float(p[1])), repr(v.real), repr(v.imag), repr(float(e))])


# -- rectangle boundary access ------------------------------------------------------

def _rect_params(domain):
    if domain.kind != "rectangle":
        raise PotentialError("a rectangle domain is required")
    p = domain.params
    if np.any(p["origin"] != 0):
        raise PotentialError("the rectangle must have its corner at the origin")
    return p["T"], p["L"]


def _side(g: Density, T, L, which):
    """g restricted to a side as a function of u (horizontal) or y (vertical)."""
    if which == 1:      # bottom, u in [0, T]
        return lambda u: g(np.asarray(u, float) / T)
    if which == 2:      # right, y in [0, L]
        return lambda y: g(1.0 + np.asarray(y, float) / L)
    if which == 3:      # top, u in [0, T]
        return lambda u: g(2.0 + (T - np.asarray(u, float)) / T)
    return lambda y: g(3.0 + (L - np.asarray(y, float)) / L)


# -- wave ----------------------------------------------------------------------------

def _clip_segment(p, q, t, x):
    """Parameter interval of the segment p->q inside the open sector
    u < t, u - y < t - x, u + y < t + x."""
    d = q - p
    lo, hi = 0.0, 1.0
    for a, c in (((1.0, 0.0), t), ((1.0, -1.0), t - x), ((1.0, 1.0), t + x)):
        # a . (p + s d) < c
        a0 = a[0] * p[0] + a[1] * p[1]
        a1 = a[0] * d[0] + a[1] * d[1]
        if a1 == 0.0:
            if not a0 < c:
                return None
        elif a1 > 0:
            hi = min(hi, (c - a0) / a1)
        else:
            lo = max(lo, (c - a0) / a1)
    return (lo, hi) if hi > lo else None


def wave_potential(rect: geo.ConvexDomain, g: Density, t: float, x: float, nodes: int = 48) -> complex:
    """int over Gamma cut by the backward sector of (t, x) of g dsigma."""
    if not g.has_regularity(C1):
        raise RegularityError("the wave potential requires a density of class C1")
    curve = rect.boundary
    gx, gw = np.polynomial.legendre.leggauss(nodes)
    total = 0.0j
    for i in range(curve.n_pieces):
        p = curve.point(np.array([float(i)]))[0]
        q = curve.point(np.array([float(i + 1)]))[0]
        iv = _clip_segment(p, q, t, x)
        if iv is None:
            continue
        lo, hi = iv
        s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx
        total += 0.5 * (hi - lo) * np.linalg.norm(q - p) * np.sum(gw * g(i + s))
    return complex(total)


# -- Schroedinger ---------------------------------------------------------------------

_QUAD = dict(epsabs=1e-12, epsrel=1e-11, limit=500)


def _weighted(f, a, b, kappa):
    """int_a^b f(r) exp(i kappa r) dr for complex f (b may be inf)."""
    fr = lambda r: f(r).real
    fi = lambda r: f(r).imag
    if math.isinf(b):
        kw = dict(epsabs=_QUAD["epsabs"], limlst=200, limit=_QUAD["limit"])
        cr = integrate.quad(fr, a, np.inf, weight="cos", wvar=kappa, **kw)[0]
        sr = integrate.quad(fr, a, np.inf, weight="sin", wvar=kappa, **kw)[0]
        ci = integrate.quad(fi, a, np.inf, weight="cos", wvar=kappa, **kw)[0]
        si = integrate.quad(fi, a, np.inf, weight="sin", wvar=kappa, **kw)[0]
    else:
        cr = integrate.quad(fr, a, b, weight="cos", wvar=kappa, **_QUAD)[0]
        sr = integrate.quad(fr, a, b, weight="sin", wvar=kappa, **_QUAD)[0]
        ci = integrate.quad(fi, a, b, weight="cos", wvar=kappa, **_QUAD)[0]
        si = integrate.quad(fi, a, b, weight="sin", wvar=kappa, **_QUAD)[0]
    return complex(cr - si, sr + ci)


def _singular_oscillatory(h, lo, hi, kappa):
    """int_lo^hi h(w) exp(i kappa / w) / sqrt(w) dw, 0 <= lo < hi, kappa >= 0.

    Split at w = kappa.  Below it the substitution r = 1/w gives a Fourier
    integral in r with r^{-3/2} decay (QAWF/QAWO); above it the phase moves by
    less than one radian and w = v^2 removes the square-root singularity.
    """
    if hi <= lo:
        return 0.0j
    hs = lambda w: complex(np.asarray(h(np.array([w])))[0])
    wc = min(max(kappa, lo), hi)
    total = 0.0j
    if kappa > 0 and wc > lo:
        f = lambda r: hs(1.0 / r) * r ** -1.5
        total += _weighted(f, 1.0 / wc, (1.0 / lo) if lo > 0 else math.inf, kappa)
    if hi > wc:
        f = lambda v: 2.0 * hs(v * v) * np.exp(1j * kappa / (v * v))
        total += integrate.quad(f, math.sqrt(wc), math.sqrt(hi), complex_func=True, **_QUAD)[0]
    return total


def _horizontal_part(h, T, t, X):
    """int_0^T h(u) E(t - u, X) du with the branch sqrt(v) = -i sqrt|v| for v < 0."""
    kappa = X * X / 4.0
    total = 0.0j
    if t > 0:   # v = t - u in (max(t - T, 0), t]
        total += _singular_oscillatory(lambda w: h(t - w), max(t - T, 0.0), t, kappa)
    if t < T:   # v < 0, w = -v in (max(-t, 0), T - t]
        conj_part = _singular_oscillatory(lambda w: np.conj(h(t + w)), max(-t, 0.0), T - t, kappa)
        total += 1j * np.conj(conj_part)
    return total


def _vertical_part(h, L, delta, x):
    """int_0^L h(y) E(delta, x - y) dy for delta != 0 via the Fresnel form."""
    eps = 4.0 * abs(delta)
    if delta > 0:
        return EDGE_LIMIT * fresnel_quadrature(-x, L - x, eps, lambda yp: h(x + yp))
    val = fresnel_quadrature(-x, L - x, eps, lambda yp: np.conj(h(x + yp)))
    return 1j * EDGE_LIMIT * np.conj(val)


def schrodinger_parts(rect: geo.ConvexDomain, g: Density, t: float, x: float):
    """The four side integrals (bottom, right, top, left), each with positive
    arc measure; their sum is Phi g(t, x)."""
    T, L = _rect_params(rect)
    if not g.has_regularity(C2):
        raise RegularityError("the Schroedinger potential requires a density of class C2 "
                              "on the horizontal sides")
    on_edge = t in (0.0, T)
    if on_edge and not 0.0 < x < L:
        if x in (0.0, L):
            return (np.nan,) * 4
        raise PotentialError(f"limit at t={t} for x={x} outside (0, L) is not implemented")
    phase = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))
    p1 = _horizontal_part(_side(g, T, L, 1), T, t, x)
    p3 = _horizontal_part(_side(g, T, L, 3), T, t, x - L)
    g2, g4 = _side(g, T, L, 2), _side(g, T, L, 4)
    p2 = EDGE_LIMIT * phase * complex(g2(x)) if t == T else _vertical_part(g2, L, t - T, x)
    p4 = EDGE_LIMIT * phase * complex(g4(x)) if t == 0.0 else _vertical_part(g4, L, t, x)
    return p1, p2, p3, p4


def schrodinger_potential(rect: geo.ConvexDomain, g: Density, t: float, x: float) -> complex:
    """Phi g(t, x); at t in {0, T} the one-sided limit is returned, and the
    right corners give NaN (the limit is discontinuous there)."""
    return complex(sum(schrodinger_parts(rect, g, t, x)))


def schrodinger_right_side(rect: geo.ConvexDomain, g: Density, t: float, x: float) -> complex:
    """The right-side integral alone (its one-sided limit at t = T)."""
    T, L = _rect_params(rect)
    g2 = _side(g, T, L, 2)
    if t == T:
        if not 0.0 < x < L:
            if x in (0.0, L):
                return complex(np.nan)
            raise PotentialError(f"limit at t={t} for x={x} outside (0, L) is not implemented")
        return EDGE_LIMIT * complex(math.cos(math.pi / 4), math.sin(math.pi / 4)) * complex(g2(x))
    return complex(_vertical_part(g2, L, t - T, x))


# -- transport --------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitDensity:
    """Density on the unit circle as g+(s) (upper half, x2 >= 0) and g-(s)."""

    g_plus: Callable
    g_minus: Callable

    @classmethod
    def from_angle(cls, f):
        """From theta -> g(e^{i theta})."""
        return cls(lambda s: f(np.arccos(np.clip(s, -1, 1))),
                   lambda s: f(-np.arccos(np.clip(s, -1, 1))))

    @classmethod
    def from_density(cls, g: Density):
        def at(theta):
            t = geo.angle_to_param(g.curve, (0.0, 0.0), theta)
            return g(t)
        return cls.from_angle(lambda th: at(np.atleast_1d(th)))

    def rotated(self, rho):
        """Split of g o R_rho, i.e. theta -> g(e^{i(theta + rho)})."""
        def f(theta):
            theta = np.asarray(theta, float)
            s = np.cos(theta + rho)
            up = np.sin(theta + rho) >= 0
            return np.where(up, self.g_plus(s), self.g_minus(s))
        return SplitDensity.from_angle(f)


def transport_potential(g: SplitDensity, s, u, rho: float = 0.0):
    """Potential for the transport kernel whose rays point along angle
    rho + pi/2; rho = 0 is the operator d/dy.  Vectorised over (s, u)."""
    s = np.asarray(s, dtype=float)
    u = np.asarray(u, dtype=float)
    if rho != 0.0:
        c, sn = math.cos(rho), math.sin(rho)
        s, u = c * s + sn * u, -sn * s + c * u
        g = g.rotated(rho)
    if np.any(np.abs(s) >= 1):
        raise PotentialError("transport potential needs |s| < 1")
    root = np.sqrt(1.0 - s * s)
    weight = np.abs(s) / root
    in_disk = s * s + u * u < 1.0
    above = u > root
    gp = np.asarray(g.g_plus(s), dtype=complex)
    gm = np.asarray(g.g_minus(s), dtype=complex)
    return np.where(in_disk, gm * weight, 0.0) + np.where(above, (gp + gm) * weight, 0.0)
