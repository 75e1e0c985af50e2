"""Fundamental solutions E with P(-iD) E = delta for the operators in use.

* Helmholtz in R^2 / R^3:  (Delta + c1^2) E = delta
* Schroedinger (t, x):     t^{-1/2} exp(i x^2 / (4t)), sqrt(t) = -i sqrt|t| for t < 0
* wave (t, x):             indicator of the forward cone t > |x|
* transport:               only available through closed-form potentials
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .specfun import bessel_y

HELMHOLTZ2D = "Helmholtz2D"
HELMHOLTZ3D = "Helmholtz3D"
SCHRODINGER1D = "Schrodinger1D"
WAVE1D = "Wave1D"
TRANSPORT = "Transport"


class SingularityError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    def __init__(self, msg, estimates):
        self.estimates = estimates
        super().__init__(f"{msg}; last estimates {estimates[0]!r}, {estimates[1]!r}")


@dataclass(frozen=True)
class Kernel:
    """`scale` multiplies the basis function Y0(c1 r) (2D) or cos(c1 r)/r (3D)."""

    kind: str
    c1: Optional[float] = None
    rho: Optional[float] = None
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in (HELMHOLTZ2D, HELMHOLTZ3D, SCHRODINGER1D, WAVE1D, TRANSPORT):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind in (HELMHOLTZ2D, HELMHOLTZ3D) and not (self.c1 and self.c1 > 0):
            raise ValueError("Helmholtz kernels need c1 > 0")
        if self.kind == TRANSPORT and self.rho is None:
            raise ValueError("transport kernel needs an angle rho")

    @property
    def dim(self):
        return 3 if self.kind == HELMHOLTZ3D else 2


def normalization_constant(k: Kernel) -> float:
    """Constant in front of the Helmholtz basis function that makes E fundamental.

    In 2D it is +1/4: near 0, Y0(c r) ~ (2/pi) log r and (1/2pi) log r is the
    fundamental solution of the Laplacian.
    """
    if k.kind == HELMHOLTZ2D:
        return 0.25
    if k.kind == HELMHOLTZ3D:
        return -1.0 / (4.0 * math.pi)
    raise ValueError(f"normalization_constant is defined for Helmholtz kernels only, not {k.kind}")


def helmholtz2d(c1) -> Kernel:
    return Kernel(HELMHOLTZ2D, c1=float(c1), scale=0.25)


def helmholtz3d(c1) -> Kernel:
    return Kernel(HELMHOLTZ3D, c1=float(c1), scale=-1.0 / (4.0 * math.pi))


def schrodinger1d() -> Kernel:
    return Kernel(SCHRODINGER1D)


def wave1d() -> Kernel:
    return Kernel(WAVE1D)


def transport(rho) -> Kernel:
    return Kernel(TRANSPORT, rho=float(rho))


def helmholtz_radial(k: Kernel, r):
    """E as a function of |x| (array); r must be positive."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise SingularityError("Helmholtz kernel is singular at the origin")
    if k.kind == HELMHOLTZ2D:
        return k.scale * bessel_y(0, k.c1 * r)
    if k.kind == HELMHOLTZ3D:
        return k.scale * np.cos(k.c1 * r) / r
    raise ValueError("not a Helmholtz kernel")


def eval_kernel(k: Kernel, x):
    """Pointwise kernel value; for Schroedinger and wave kernels x = (t, x)."""
    x = np.asarray(x, dtype=float)
    if k.kind in (HELMHOLTZ2D, HELMHOLTZ3D):
        if x.shape[-1] != k.dim:
            raise ValueError(f"{k.kind} expects points of dimension {k.dim}")
        return helmholtz_radial(k, np.linalg.norm(x, axis=-1)) + 0j
    if k.kind == SCHRODINGER1D:
        t, y = x[..., 0], x[..., 1]
        if np.any(t == 0):
            raise SingularityError("Schroedinger kernel is singular on the line t = 0")
        phase = np.exp(1j * y * y / (4.0 * t))
        return np.where(t > 0, 1.0, 1j) / np.sqrt(np.abs(t)) * phase
    if k.kind == WAVE1D:
        t, y = x[..., 0], x[..., 1]
        return np.where(t > np.abs(y), 1.0, 0.0) + 0j
    raise ValueError("transport kernels are only exposed through closed-form potentials")


# -- test functions --------------------------------------------------------------

@dataclass(frozen=True)
class Bump:
    """phi(x) = amplitude * exp(1 - 1/(1 - q)), q = |x - center|^2 / radius^2 < 1."""

    center: tuple
    radius: float
    amplitude: float = 1.0

    @property
    def dim(self):
        return len(self.center)

    def _q(self, x):
        d = np.asarray(x, dtype=float) - np.asarray(self.center, dtype=float)
        return np.sum(d * d, axis=-1) / self.radius ** 2

    def value(self, x):
        q = self._q(x)
        inside = q < 1
        out = np.zeros_like(q)
        out[inside] = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - q[inside]))
        return out

    def laplacian(self, x):
        q = self._q(x)
        inside = q < 1
        qi = q[inside]
        f = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - qi))
        f1 = -f / (1.0 - qi) ** 2
        f2 = f * (2.0 * qi - 1.0) / (1.0 - qi) ** 4
        out = np.zeros_like(q)
        R2 = self.radius ** 2
        out[inside] = f2 * 4.0 * qi / R2 + f1 * 2.0 * self.dim / R2
        return out


def _radial_rule(rmax, n, levels=30):
    """Gauss-Legendre on geometric panels [rmax 2^-(j+1), rmax 2^-j]."""
    x, w = np.polynomial.legendre.leggauss(n)
    edges = rmax * 2.0 ** -np.arange(levels + 1)
    a, b = edges[1:], edges[:-1]
    r = (0.5 * (a + b))[:, None] + (0.5 * (b - a))[:, None] * x[None, :]
    wr = (0.5 * (b - a))[:, None] * w[None, :]
    return r.ravel(), wr.ravel()


def check_fundamental(k: Kernel, phi: Bump, tol=1e-8, max_refinements=12) -> complex:
    """int E(x) (Delta phi + c1^2 phi)(x) dx, which should equal phi(0).

    Polar quadrature centred on the kernel singularity: geometric radial
    panels in r, trapezoid in the angle (2D); a radial integral in 3D, where
    only bumps centred at the origin are accepted.
    """
    if k.kind not in (HELMHOLTZ2D, HELMHOLTZ3D):
        raise ValueError("check_fundamental supports Helmholtz kernels only")
    if phi.dim != k.dim:
        raise ValueError("test function dimension does not match the kernel")
    if phi.radius > 10:
        raise ValueError("test function support radius must be <= 10")
    c2 = k.c1 ** 2
    rmax = float(np.linalg.norm(phi.center)) + phi.radius
    if k.dim == 3 and np.any(np.asarray(phi.center) != 0):
        raise ValueError("3D check supports radial test functions centred at 0 only")

    def estimate(level):
        n = 8 * 2 ** level
        r, wr = _radial_rule(rmax, n)
        E = helmholtz_radial(k, r)
        if k.dim == 3:
            pts = np.stack([r, np.zeros_like(r), np.zeros_like(r)], axis=-1)
            g = phi.laplacian(pts) + c2 * phi.value(pts)
            return complex(np.sum(wr * 4.0 * math.pi * r * r * E * g))
        m = 32 * 2 ** level
        th = 2.0 * math.pi * np.arange(m) / m
        cs, sn = np.cos(th), np.sin(th)
        total = 0.0
        step = max(1, 2 ** 20 // m)
        for i in range(0, len(r), step):
            rr = r[i:i + step, None]
            pts = np.stack([rr * cs, rr * sn], axis=-1)
            g = phi.laplacian(pts) + c2 * phi.value(pts)
            total += np.sum((wr * r * E)[i:i + step, None] * g)
        return complex(total * (2.0 * math.pi / m))

    prev = estimate(0)
    for level in range(1, max_refinements + 1):
        cur = estimate(level)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev, last = cur, prev
    raise ConvergenceError("check_fundamental did not converge", (last, prev))


def fit_normalization(kind: str, c1: float, phi: Bump) -> float:
    """Constant s such that s * basis passes check_fundamental for `phi`."""
    raw = Kernel(kind, c1=c1, scale=1.0)
    val = check_fundamental(raw, phi)
    phi0 = float(phi.value(np.zeros((1, phi.dim)))[0])
    return phi0 / val.real
