"""Densities on curves and their Fourier-Stieltjes transforms

    g^(lambda) = int_Gamma exp(-i lambda.x) g(x) dsigma(x).
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import geometry as geo

L1, LP, C1, C2 = "L1", "Lp", "C1", "C2"
_REG = {L1: 0, LP: 1, C1: 2, C2: 3}
SCHEMA_VERSION = 1


class DensityError(ValueError):
    pass


class TransformError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Density:
    """Complex function on a curve, given as a rule of the global parameter t."""

    curve: geo.ParamCurve
    rule: Callable
    regularity: str = C2
    p: Optional[float] = None
    table: Optional[np.ndarray] = field(default=None, repr=False)  # raw samples of tabulated densities

    def __post_init__(self):
        if self.regularity not in _REG:
            raise DensityError(f"unknown regularity tag {self.regularity!r}")
        if self.regularity == LP and not (self.p and self.p >= 1):
            raise DensityError("Lp densities need p >= 1")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.reshape(-1)
        vals = np.asarray(self.rule(flat), dtype=complex) * np.ones(flat.shape)
        return vals.reshape(t.shape)

    def at_nodes(self, n_per_piece):
        t, x, w = self.curve.nodes(n_per_piece)
        return t, x, w, self(t)

    def has_regularity(self, tag):
        return _REG[self.regularity] >= _REG[tag]

    def exponent(self):
        """Integrability exponent p (infinity for continuous densities)."""
        if self.regularity in (C1, C2):
            return math.inf
        return 1.0 if self.regularity == L1 else float(self.p)

    def l1_norm(self, n_per_piece=64):
        _, _, w, v = self.at_nodes(n_per_piece)
        return float(np.sum(w * np.abs(v)))

    def _combine(self, other, a, b):
        if other.curve is not self.curve:
            raise DensityError("densities live on different curves")
        reg = min(self.regularity, other.regularity, key=_REG.get)
        p = None if reg != LP else min(self.exponent(), other.exponent())
        return Density(self.curve, lambda t: a * self(t) + b * other(t), reg, p)

    def __add__(self, other):
        return self._combine(other, 1.0, 1.0)

    def __sub__(self, other):
        return self._combine(other, 1.0, -1.0)

    def __mul__(self, s):
        return Density(self.curve, lambda t: s * self(t), self.regularity, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    # -- constructors --------------------------------------------------------
    @classmethod
    def constant(cls, curve, value=1.0):
        return cls(curve, lambda t: np.full(np.shape(t), value, dtype=complex), C2)

    @classmethod
    def from_points(cls, curve, f, regularity=C2, p=None):
        """g(gamma(t)) = f(points), f vectorised over (N, 2) arrays."""
        return cls(curve, lambda t: f(curve.point(t)), regularity, p)

    @classmethod
    def from_angle(cls, curve, f, center=(0.0, 0.0), regularity=C2, p=None):
        """g = f(theta) with theta the polar angle of the point seen from `center`."""
        c = np.asarray(center, dtype=float)

        def rule(t):
            d = curve.point(t) - c
            return f(np.arctan2(d[..., 1], d[..., 0]))

        return cls(curve, rule, regularity, p)

    @classmethod
    def tabulated(cls, curve, values, order=3):
        """Per-piece samples on a uniform local grid s = 0..1 (endpoints
        included), interpolated by splines of the given order (1 or 3)."""
        from scipy.interpolate import make_interp_spline

        vals = np.asarray(values, dtype=complex)
        if vals.ndim != 2 or vals.shape[0] != curve.n_pieces:
            raise DensityError(f"tabulated values need shape ({curve.n_pieces}, m), got {vals.shape}")
        m = vals.shape[1]
        if order not in (1, 3) or m < order + 1:
            raise DensityError("interpolation order must be 1 or 3 with enough samples")
        s = np.linspace(0.0, 1.0, m)
        splines = [make_interp_spline(s, vals[i], k=order) for i in range(curve.n_pieces)]

        def rule(t):
            tt, idx, ss = curve._split(t)
            out = np.empty(tt.shape, dtype=complex)
            for i, sp in enumerate(splines):
                mask = idx == i
                if np.any(mask):
                    out[mask] = sp(ss[mask])
            return out

        return cls(curve, rule, C2 if order == 3 else LP, None if order == 3 else math.inf, vals)


# -- transform ---------------------------------------------------------------

def _phase_sum(lam, x, wv):
    lam = np.asarray(lam)
    return np.exp(-1j * (lam @ x.T)) @ wv


def fourier_stieltjes(g: Density, lam, nodes: int = 32, tol=1e-10, max_nodes=4096):
    """g^ at one point or an (M, 2) array of points (complex lambda allowed).

    Nodes per piece are doubled until successive values agree to `tol`
    relative to max(1, int |g| dsigma).
    """
    if nodes < 8:
        raise ValueError("nodes must be >= 8")
    lam = np.asarray(lam)
    single = lam.ndim == 1
    lam2 = np.atleast_2d(lam)
    n = nodes
    _, x, w, v = g.at_nodes(n)
    prev = _phase_sum(lam2, x, w * v)
    scale = max(1.0, float(np.sum(w * np.abs(v))))
    while True:
        n *= 2
        if n > max_nodes:
            raise TransformError(f"fourier_stieltjes not converged at {n // 2} nodes per piece; "
                                 f"last estimates differ by {np.max(np.abs(cur - prev0))!r}")
        _, x, w, v = g.at_nodes(n)
        cur = _phase_sum(lam2, x, w * v)
        if np.max(np.abs(cur - prev)) <= tol * scale:
            return cur[0] if single else cur
        prev0, prev = prev, cur


@dataclass(frozen=True)
class TransformReport:
    points: np.ndarray
    values: np.ndarray
    max_abs: float
    scale: float
    nodes: int
    tol_rel: float
    verdict: bool

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "verdict": bool(self.verdict),
            "max_abs": float(self.max_abs),
            "scale": float(self.scale),
            "tol_rel": float(self.tol_rel),
            "nodes": int(self.nodes),
            "points": [[float(a) for a in p] for p in self.points],
            "values": [[float(v.real), float(v.imag)] for v in self.values],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["lambda1", "lambda2", "re_ghat", "im_ghat"])
            for p, v in zip(self.points, self.values):
                wr.writerow([repr(float(p[0])), repr(float(p[1])), repr(float(v.real)), repr(float(v.imag))])


def vanishes_on(g: Density, lams, tol_rel: float, nodes: int = 32) -> TransformReport:
    """Verdict max_Lambda |g^| <= tol_rel * int |g| dsigma on a sampled Lambda."""
    pts = np.atleast_2d(np.asarray(lams, dtype=float))
    if pts.shape[0] == 0:
        raise ValueError("Lambda sample is empty")
    if not 0 < tol_rel < 1:
        raise ValueError("tol_rel must lie in (0, 1)")
    scale = g.l1_norm(max(nodes, 64))
    if scale == 0:
        if g.table is not None and np.any(g.table != 0):
            raise DensityError("density has zero quadrature scale but nonzero tabulated values")
        vals = np.zeros(len(pts), dtype=complex)
    else:
        vals = np.asarray(fourier_stieltjes(g, pts, nodes))
    mx = float(np.max(np.abs(vals)))
    return TransformReport(pts, vals, mx, scale, nodes, tol_rel, mx <= tol_rel * scale)


def fourier_coefficients(g: Density, max_n: int, center=(0.0, 0.0), samples: Optional[int] = None):
    """a_n = (1/2pi) int g(p^{-1}(e^{i theta})) e^{-i n theta} d theta, n = -max_n..max_n,

    with p the radial projection from `center`; trapezoid rule in theta.
    Returns an array indexed so that a[max_n + n] = a_n.
    """
    N = samples or max(256, 8 * (max_n + 1))
    th = 2.0 * math.pi * np.arange(N) / N
    t = geo.angle_to_param(g.curve, center, th)
    v = g(t)
    n = np.arange(-max_n, max_n + 1)
    return np.exp(-1j * np.outer(n, th)) @ v / N
