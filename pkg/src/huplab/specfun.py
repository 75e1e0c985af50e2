"""Bessel functions of integer order, their zeros, and Fresnel-type integrals.

Everything here is computed in-repo:

* J_m by the power series for |x| <= 1 and Miller's backward recurrence
  (normalised with J_0 + 2 sum J_2k = 1) above that,
* Y_0 and Y_1 by their Neumann expansions in J_k,
* zeros of J_m by unit-step sign-change bracketing and bisection,
* (1/sqrt(pi eps)) int_a^b exp(i y^2/eps) a(y) dy by the substitution
  w = y/sqrt(eps) near the stationary point and s = w^2 on the tails.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

EULER_GAMMA = 0.57721566490153286061

_RESCALE = 1e250


def _series_table(x, nmax):
    """J_0..J_nmax by the power series (only used for |x| <= 1)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros((nmax + 1,) + x.shape)
    h = 0.5 * x
    h2 = h * h
    for m in range(nmax + 1):
        term = np.ones_like(x) / math.factorial(m) if m < 170 else np.zeros_like(x)
        term = term * h**m
        total = term.copy()
        for k in range(1, 30):
            term = -term * h2 / (k * (k + m))
            total += term
        out[m] = total
    return out


def _miller_table(x, nmax):
    """J_0..J_nmax for x > 0 by backward recurrence."""
    x = np.asarray(x, dtype=float)
    xmax = float(np.max(x)) if x.size else 1.0
    start = int(max(nmax, xmax) + 30 + 10 * math.sqrt(xmax + 1.0))
    start += start % 2
    out = np.zeros((nmax + 1,) + x.shape)
    jp = np.zeros_like(x)
    j = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    for k in range(start, 0, -1):
        jm = (2.0 * k / x) * j - jp
        jp, j = j, jm
        n = k - 1
        if n <= nmax:
            out[n] = j
        if n > 0 and n % 2 == 0:
            norm += 2.0 * j
        big = np.abs(j) > _RESCALE
        if np.any(big):
            j = np.where(big, j / _RESCALE, j)
            jp = np.where(big, jp / _RESCALE, jp)
            norm = np.where(big, norm / _RESCALE, norm)
            out[:, big] /= _RESCALE
    norm += j
    return out / norm


def bessel_j_table(x, nmax):
    """Array of shape (nmax+1,) + shape(x) holding J_0(x) .. J_nmax(x)."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("bessel_j: non-finite argument")
    ax = np.abs(x)
    out = np.empty((nmax + 1,) + x.shape)
    small = ax <= 1.0
    if np.any(small):
        out[:, small] = _series_table(ax[small], nmax)
    if np.any(~small):
        out[:, ~small] = _miller_table(ax[~small], nmax)
    neg = x < 0
    if np.any(neg):
        odd = np.arange(nmax + 1) % 2 == 1
        sub = out[:, neg]
        sub[odd] *= -1.0
        out[:, neg] = sub
    return out


def bessel_j(m: int, x):
    """Bessel function of the first kind J_m(x) for integer m >= 0."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    x_arr = np.asarray(x, dtype=float)
    val = bessel_j_table(x_arr, m)[m]
    return float(val) if val.ndim == 0 else val


def bessel_j_prime(m: int, x):
    """Derivative J_m'(x) via J_m' = (J_{m-1} - J_{m+1}) / 2."""
    tab = bessel_j_table(np.asarray(x, dtype=float), m + 1)
    if m == 0:
        val = -tab[1]
    else:
        val = 0.5 * (tab[m - 1] - tab[m + 1])
    return float(val) if val.ndim == 0 else val


def bessel_y(m: int, x):
    """Bessel function of the second kind Y_m(x), m in {0, 1}, x > 0."""
    if m not in (0, 1):
        raise ValueError("bessel_y supports orders 0 and 1 only")
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("bessel_y: domain error, argument must be > 0")
    nmax = int(np.max(x)) + 50
    tab = bessel_j_table(x, nmax)
    log_term = np.log(0.5 * x)
    if m == 0:
        acc = np.zeros_like(x)
        for k in range(1, nmax // 2 + 1):
            acc += (-1.0) ** k * tab[2 * k] / k
        val = (2.0 / math.pi) * (log_term + EULER_GAMMA) * tab[0] - (4.0 / math.pi) * acc
    else:
        acc = np.zeros_like(x)
        for k in range(1, (nmax - 1) // 2 + 1):
            acc += (-1.0) ** k * (2 * k + 1) * tab[2 * k + 1] / (k * (k + 1))
        psi2 = 1.0 - EULER_GAMMA
        val = (-2.0 / (math.pi * x) * tab[0]
               + (2.0 / math.pi) * (log_term - psi2) * tab[1]
               - (2.0 / math.pi) * acc)
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class BesselZeroTable:
    order: int
    zeros: tuple

    def __post_init__(self):
        z = np.asarray(self.zeros)
        if z.size and (np.any(np.diff(z) <= 1.0) or z[0] <= 0):
            raise ValueError("zero table must be positive, ascending, gaps > 1")

    def __len__(self):
        return len(self.zeros)

    def __getitem__(self, k):
        return self.zeros[k]

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["order", "index", "zero"])
            for k, z in enumerate(self.zeros, start=1):
                w.writerow([self.order, k, repr(float(z))])


def _bisect(f, a, b, fa, width=1e-14):
    for _ in range(200):
        if b - a <= width:
            break
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def bessel_j_zeros(m: int, count: int) -> BesselZeroTable:
    """First `count` positive zeros of J_m."""
    if count < 1:
        raise ValueError("count must be >= 1")
    f = lambda t: bessel_j(m, t)
    a = max(float(m), 0.5)
    fa = f(a)
    zeros = []
    while len(zeros) < count:
        b = a + 1.0
        fb = f(b)
        if fa == 0.0:
            zeros.append(a)
        elif fa * fb < 0:
            zeros.append(_bisect(f, a, b, fa))
        a, fa = b, fb
    return BesselZeroTable(m, tuple(zeros))


# --- oscillatory quadrature ---------------------------------------------------

def _gl(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _check_finite(vals, where):
    bad = ~np.isfinite(vals)
    if np.any(bad):
        loc = np.asarray(where)[bad].ravel()[0]
        raise ValueError(f"fresnel_quadrature: non-finite amplitude at y={loc!r}")


def _core(lo, hi, eps, amplitude, n):
    # (1/sqrt(pi)) int_lo^hi exp(i w^2) amp(sqrt(eps) w) dw, |w| <= 1
    x, w = _gl(n)
    mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
    wn = mid + half * x
    y = math.sqrt(eps) * wn
    amp = np.asarray(amplitude(y), dtype=complex) * np.ones_like(y)
    _check_finite(amp, y)
    return half * np.sum(w * np.exp(1j * wn * wn) * amp) / math.sqrt(math.pi)


def _tail(s0, s1, eps, amplitude, sign, n, panel=0.5 * math.pi, chunk=20000):
    # (1/sqrt(pi)) int_s0^s1 exp(i s) amp(sign sqrt(eps s)) / (2 sqrt s) ds
    if s1 <= s0:
        return 0.0j
    npan = max(1, int(math.ceil((s1 - s0) / panel)))
    edges = np.linspace(s0, s1, npan + 1)
    x, w = _gl(n)
    total = 0.0j
    for start in range(0, npan, chunk):
        stop = min(start + chunk, npan)
        a = edges[start:stop]
        b = edges[start + 1:stop + 1]
        half = 0.5 * (b - a)
        s = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
        y = sign * np.sqrt(eps * s)
        amp = np.asarray(amplitude(y), dtype=complex) * np.ones_like(y)
        _check_finite(amp, y)
        vals = np.exp(1j * s) * amp / (2.0 * np.sqrt(s))
        total += np.sum(half[:, None] * w[None, :] * vals)
    return total / math.sqrt(math.pi)


def _fresnel_once(a, b, eps, amplitude, n):
    sq = math.sqrt(eps)
    total = 0.0j
    lo, hi = max(a, -sq), min(b, sq)
    if hi > lo:
        total += _core(lo / sq, hi / sq, eps, amplitude, n)
    if b > sq:
        total += _tail(max(a, sq) ** 2 / eps, b * b / eps, eps, amplitude, 1.0, n)
    if a < -sq:
        total += _tail(min(b, -sq) ** 2 / eps, a * a / eps, eps, amplitude, -1.0, n)
    return total


def fresnel_quadrature(a: float, b: float, eps: float, amplitude, tol: float = 1e-8,
                       max_nodes: int = 128) -> complex:
    """Compute (1/sqrt(pi eps)) * int_a^b exp(i y^2 / eps) amplitude(y) dy.

    `amplitude` must accept numpy arrays. Node counts per panel are doubled
    until two successive values agree to `tol` (absolute, relative to
    max(1, |value|)).

    When a < 0 < b the value tends to exp(i pi/4) * amplitude(0). Endpoints
    with nonzero amplitude add an oscillating O(sqrt(eps)) term, so the
    O(eps) rate only holds for amplitudes vanishing at a and b.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not b > a:
        raise ValueError("need a < b")
    n = 8
    prev = _fresnel_once(a, b, eps, amplitude, n)
    while n < max_nodes:
        n *= 2
        cur = _fresnel_once(a, b, eps, amplitude, n)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise ArithmeticError(f"fresnel_quadrature did not converge: last estimates {prev}, {cur}")


def bessel_j_zeros_below(m: int, xmax: float) -> BesselZeroTable:
    """All positive zeros of J_m smaller than xmax."""
    f = lambda t: bessel_j(m, t)
    a = max(float(m), 0.5)
    fa = f(a)
    zeros = []
    while a < xmax:
        b = a + 1.0
        fb = f(b)
        if fa == 0.0:
            zeros.append(a)
        elif fa * fb < 0:
            z = _bisect(f, a, b, fa)
            if z < xmax:
                zeros.append(z)
        a, fa = b, fb
    return BesselZeroTable(m, tuple(zeros))
