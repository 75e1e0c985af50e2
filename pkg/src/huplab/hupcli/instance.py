"""Turn an ExperimentConfig into a domain, a zero set Z_R(P) and densities."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import geometry as geo
from .. import spectra as sp
from .. import transform as tr
from .. import varieties as var
from ..potentials import SplitDensity
from .config import ConfigError

HELMHOLTZ, SCHRODINGER, WAVE, TRANSPORT = "helmholtz", "schrodinger", "wave", "transport"

SUPPORTED = (
    ("any convex domain (spectrum for disk and rectangle only)", "circle |xi| = c1", HELMHOLTZ),
    ("rectangle [0,T]x[0,L]", "parabola X1 + X2^2 = 0", SCHRODINGER),
    ("rectangle [0,T]x[0,L]", "lines X1 = X2 and X1 = -X2", WAVE),
    ("unit disk centred at 0", "two lines through 0", TRANSPORT),
)


class UnsupportedError(ConfigError):
    def __init__(self, what):
        rows = "; ".join(f"{d} + {l} -> {k}" for d, l, k in SUPPORTED)
        super().__init__(f"unsupported combination ({what}); supported: {rows}")


def support_matrix():
    return [{"domain": d, "lambda": l, "family": k} for d, l, k in SUPPORTED]


# -- domain ------------------------------------------------------------------

def build_domain(cfg) -> geo.ConvexDomain:
    kind = cfg.get("curve", "kind", "circle")
    if kind == "circle":
        return geo.disk(cfg.number("curve", "radius", "1"), cfg.vector("curve", "center", 2, "0, 0"))
    if kind == "ellipse":
        return geo.ellipse_domain(cfg.number("curve", "a"), cfg.number("curve", "b"),
                                  cfg.vector("curve", "center", 2, "0, 0"))
    if kind == "rectangle":
        return geo.rectangle_domain(cfg.number("curve", "T"), cfg.number("curve", "L"))
    if kind == "csv":
        return geo.generic_convex(geo.load_curve_csv(cfg.require("curve", "path")))
    raise ConfigError(f"unknown curve kind {kind!r} (circle, ellipse, rectangle, csv)")


# -- zero set ------------------------------------------------------------------

def lines_polynomial(a1, a2):
    """P = (n1 . X)(n2 . X) for the lines through 0 at angles a1 and a2."""
    n1 = np.array([-math.sin(a1), math.cos(a1)])
    n2 = np.array([-math.sin(a2), math.cos(a2)])
    M = 0.5 * (np.outer(n1, n2) + np.outer(n2, n1))
    return var.QuadraticVariety(-M, np.zeros(2), 0.0)


def parabola_polynomial():
    """P = X1 + X2^2."""
    return var.QuadraticVariety(np.diag([0.0, -1.0]), np.array([1.0, 0.0]), 0.0)


def _line_angles(P):
    # zero set of the form X^T A X: solve along (cos a, sin a)
    a11, a12, a22 = P.A[0, 0], P.A[0, 1], P.A[1, 1]
    if abs(a22) > 1e-14:
        # a22 t^2 + 2 a12 t + a11 = 0 with t = tan a
        disc = a12 * a12 - a11 * a22
        r = math.sqrt(max(disc, 0.0))
        return sorted(math.atan((-a12 + s * r) / a22) % math.pi for s in (1, -1))
    # a11 + 2 a12 tan a = 0, plus the vertical line
    return sorted([math.pi / 2, math.atan2(-a11, 2 * a12) % math.pi])


@dataclass(frozen=True)
class ZeroSet:
    kind: str           # circle | parabola | lines
    P: var.QuadraticVariety
    radius: float = None
    angles: tuple = None

    def to_dict(self):
        out = {"kind": self.kind, "A": self.P.A.tolist(), "b": self.P.b.tolist(), "c": self.P.c}
        if self.radius is not None:
            out["radius"] = self.radius
        if self.angles is not None:
            out["angles"] = list(self.angles)
        return out


def build_zero_set(cfg) -> ZeroSet:
    kind = cfg.get("lambda", "kind", "circle")
    if kind == "circle":
        r = cfg.number("lambda", "radius")
        if not r > 0:
            raise ConfigError("[lambda] radius must be positive")
        return ZeroSet("circle", var.circle_polynomial(r), radius=r)
    if kind == "parabola":
        return ZeroSet("parabola", parabola_polynomial())
    if kind == "lines":
        a1, a2 = cfg.vector("lambda", "angles", 2)
        return ZeroSet("lines", lines_polynomial(a1, a2), angles=(a1 % math.pi, a2 % math.pi))
    if kind == "quadric":
        a = cfg.vector("lambda", "A")
        if len(a) == 4:
            A = np.array(a).reshape(2, 2)
        elif len(a) == 3:
            A = np.array([[a[0], a[1]], [a[1], a[2]]])
        else:
            raise ConfigError("[lambda] A takes 4 row-major entries (or a11, a12, a22)")
        P = var.QuadraticVariety(A, np.array(cfg.vector("lambda", "b", 2, "0, 0")),
                                 cfg.number("lambda", "c", "0"))
        return zero_set_from_polynomial(P)
    raise ConfigError(f"unknown [lambda] kind {kind!r} (circle, parabola, lines, quadric)")


def zero_set_from_polynomial(P) -> ZeroSet:
    """Recognise the quadrics the pipeline can handle."""
    cls = var.classify(P)
    s = var._scale(P)
    if cls.tag == var.CIRCLE and np.linalg.norm(cls.center) <= 1e-12 * max(1.0, cls.radius):
        return ZeroSet("circle", P, radius=float(cls.radius))
    if cls.tag == var.PARABOLA:
        ref = parabola_polynomial()
        k = P.b[0]
        if k != 0 and np.allclose(P.A, k * ref.A, atol=1e-12 * s) and np.allclose(P.b, k * ref.b, atol=1e-12 * s) \
                and abs(P.c) <= 1e-12 * s:
            return ZeroSet("parabola", P)
    if cls.tag == var.LINE_PAIR and not np.any(np.abs(P.b) > 1e-12 * s) and abs(P.c) <= 1e-12 * s:
        return ZeroSet("lines", P, angles=tuple(_line_angles(P)))
    raise UnsupportedError(f"zero set of type {cls.tag}")


# -- family -----------------------------------------------------------------------

def _is_unit_disk(dom):
    return (dom.kind == "disk" and abs(dom.params["radius"] - 1.0) <= 1e-14
            and not np.any(dom.params["center"]))


def family_of(dom: geo.ConvexDomain, zs: ZeroSet) -> str:
    if zs.kind == "circle":
        return HELMHOLTZ
    if zs.kind == "parabola" and dom.kind == "rectangle":
        return SCHRODINGER
    if zs.kind == "lines":
        a = sorted(zs.angles)
        if dom.kind == "rectangle" and np.allclose(a, [math.pi / 4, 3 * math.pi / 4], atol=1e-12):
            return WAVE
        if _is_unit_disk(dom):
            return TRANSPORT
    raise UnsupportedError(f"{dom.kind} + {zs.kind}")


def transport_angle(zs: ZeroSet) -> float:
    """rho in [0, pi) with the lines at angles a and a + rho."""
    a1, a2 = zs.angles
    return (a2 - a1) % math.pi


def lambda_samples(zs: ZeroSet, count, seed, extent=20.0):
    """Deterministic points of Z_R(P): evenly spaced on circles, seeded on the rest."""
    if zs.kind == "circle":
        th = 2.0 * math.pi * np.arange(count) / count
        return zs.radius * np.stack([np.cos(th), np.sin(th)], axis=-1)
    spread = extent if zs.kind == "lines" else 3.0
    return np.array(var.sample_real_zeros(zs.P, count, seed, spread=spread))


# -- densities ----------------------------------------------------------------------

def trig_coefficients(degree, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(2 * degree + 1) + 1j * rng.standard_normal(2 * degree + 1)


def trig_function(coef):
    deg = (len(coef) - 1) // 2
    n = np.arange(-deg, deg + 1)
    return lambda th: np.exp(1j * np.multiply.outer(np.asarray(th, float), n)) @ coef


def build_density(cfg, dom: geo.ConvexDomain, seed=0) -> tr.Density:
    g = _base_density(cfg, dom, seed)
    tag = cfg.get("density", "regularity")
    if tag is None:
        return g
    if tag not in tr._REG:
        raise ConfigError(f"unknown regularity tag {tag!r} (L1, Lp, C1, C2)")
    if tr._REG[tag] > tr._REG[g.regularity]:
        raise ConfigError(f"cannot promote a {g.regularity} density to {tag}")
    p = cfg.number("density", "p") if tag == tr.LP else None
    return tr.Density(g.curve, g.rule, tag, p, g.table)


def _base_density(cfg, dom, seed):
    kind = cfg.get("density", "kind", "constant")
    curve = dom.boundary
    if kind == "constant":
        return tr.Density.constant(curve, cfg.number("density", "value", "1"))
    if kind == "eigen":
        if dom.kind != "disk":
            raise ConfigError("eigen densities need a disk")
        m, k = (int(v) for v in cfg.vector("density", "mode", 2))
        return sp.eigen_density(dom.params["radius"], (m, k), cfg.get("density", "type", "cos"), dom)
    if kind == "rect-eigen":
        if dom.kind != "rectangle":
            raise ConfigError("rect-eigen densities need a rectangle")
        m, k = (int(v) for v in cfg.vector("density", "mode", 2))
        return sp.rectangle_eigen_density(dom.params["T"], dom.params["L"], (m, k), dom)
    if kind == "rational":
        n = cfg.integer("density", "n")
        f = lambda th: np.exp(1j * n * th) - np.exp(-1j * n * th)
        return tr.Density.from_angle(curve, f, center=dom.witness)
    if kind == "trig":
        coef = trig_coefficients(cfg.integer("density", "degree", "4"), seed)
        return tr.Density.from_angle(curve, trig_function(coef), center=dom.witness)
    if kind == "csv":
        vals = np.loadtxt(cfg.require("density", "path"), delimiter=",", ndmin=2)
        if vals.shape[1] != 2:
            raise ConfigError("density CSV needs two columns re, im")
        z = vals[:, 0] + 1j * vals[:, 1]
        if len(z) % curve.n_pieces:
            raise ConfigError(f"density CSV length must be a multiple of {curve.n_pieces}")
        return tr.Density.tabulated(curve, z.reshape(curve.n_pieces, -1),
                                    cfg.integer("density", "order", "3"))
    raise ConfigError(f"unknown density kind {kind!r}")


def build_split_density(cfg, seed=0) -> SplitDensity:
    """Densities for the transport kernel on the unit circle."""
    kind = cfg.get("density", "kind", "rational")
    if kind == "rational":
        n = cfg.integer("density", "n")
        return SplitDensity.from_angle(lambda th: np.exp(1j * n * th) - np.exp(-1j * n * th))
    if kind == "trig":
        return SplitDensity.from_angle(trig_function(trig_coefficients(cfg.integer("density", "degree", "4"), seed)))
    if kind == "constant":
        v = cfg.number("density", "value", "1")
        return SplitDensity(lambda s: np.full(np.shape(s), v, complex), lambda s: np.full(np.shape(s), v, complex))
    raise ConfigError(f"transport potentials take rational, trig or constant densities, not {kind!r}")
