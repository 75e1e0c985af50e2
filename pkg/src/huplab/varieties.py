"""Real quadratics P(X) = -X^T A X + b.X + c and their real zero sets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

ZERO_RESIDUAL = 1e-12
GRAD_NONZERO = 1e-8

EMPTY_REAL = "EmptyReal"
SINGLE_POINT = "SinglePoint"
CIRCLE = "Circle"
ELLIPSE = "Ellipse"
PARABOLA = "Parabola"
HYPERBOLA = "Hyperbola"
LINE_PAIR = "LinePair"
PARALLEL_LINES = "ParallelLines"
SINGLE_LINE = "SingleLine"
SPHERE = "Sphere"
OTHER_QUADRIC = "OtherQuadric"


class VarietyError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticVariety:
    A: np.ndarray
    b: np.ndarray
    c: float

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        n = A.shape[0]
        b = np.zeros(n) if self.b is None else np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape != (n, n) or n not in (2, 3) or b.shape != (n,):
            raise VarietyError("A must be 2x2 or 3x3 and b of matching length")
        if not np.allclose(A, A.T, rtol=0, atol=1e-14 * max(1.0, np.abs(A).max())):
            raise VarietyError("A must be symmetric")
        if not np.all(np.isfinite(A)) or not np.all(np.isfinite(b)) or not math.isfinite(self.c):
            raise VarietyError("coefficients must be finite")
        if not (np.any(A) or np.any(b) or self.c):
            raise VarietyError("P must not be the zero polynomial")
        object.__setattr__(self, "A", 0.5 * (A + A.T))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))

    @property
    def dim(self):
        return self.A.shape[0]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return -np.einsum("...i,ij,...j->...", x, self.A, x) + x @ self.b + self.c

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        return -2.0 * x @ self.A + self.b

    def rotated(self, R):
        """Polynomial Q(y) = P(R^T y), i.e. the zero set rotated by R."""
        R = np.asarray(R, dtype=float)
        return QuadraticVariety(R @ self.A @ R.T, R @ self.b, self.c)

    def homogenized(self):
        n = self.dim
        M = np.zeros((n + 1, n + 1))
        M[:n, :n] = -self.A
        M[:n, n] = M[n, :n] = 0.5 * self.b
        M[n, n] = self.c
        return M


def square_of_linear(l, m=0.0, alpha=1.0) -> QuadraticVariety:
    """alpha * (l.X + m)^2 written as a QuadraticVariety."""
    l = np.asarray(l, dtype=float)
    return QuadraticVariety(-alpha * np.outer(l, l), 2 * alpha * m * l, alpha * m * m)


@dataclass(frozen=True)
class VarietyClass:
    tag: str
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None
    angle: Optional[float] = None
    axes: Optional[np.ndarray] = None
    # parameterised real components; closed ones are 2 pi periodic
    components: tuple = field(default=(), repr=False)
    closed: tuple = field(default=(), repr=False)

    def to_dict(self):
        out = {"tag": self.tag}
        if self.center is not None:
            out["center"] = [float(v) for v in self.center]
        if self.radius is not None:
            out["radius"] = float(self.radius)
        if self.angle is not None:
            out["angle"] = float(self.angle)
        return out


def _scale(P):
    return max(np.abs(P.A).max(), np.abs(P.b).max(), abs(P.c), 1e-300)


def _eig(P):
    lam, V = np.linalg.eigh(P.A)
    tol = 1e-12 * _scale(P)
    lam = np.where(np.abs(lam) <= tol, 0.0, lam)
    return lam, V, tol


def classify(P: QuadraticVariety) -> VarietyClass:
    """Real conic (or quadric) type of Z_R(P)."""
    if P.dim == 3:
        return _classify3(P)
    lam, V, tol = _eig(P)
    nz = int(np.count_nonzero(lam))
    if nz == 2:
        x0 = np.linalg.solve(2.0 * P.A, P.b)
        k = float(P(x0))
        if abs(k) <= tol:
            k = 0.0
        if lam[0] * lam[1] > 0:
            # definite: sign-normalise so that z^T A z = k with A positive
            s = 1.0 if lam[0] > 0 else -1.0
            lp, kk = s * lam, s * k
            if kk < 0:
                return VarietyClass(EMPTY_REAL, center=x0)
            if kk == 0:
                return VarietyClass(SINGLE_POINT, center=x0, components=(lambda t: x0 + 0 * np.asarray(t)[..., None],),
                                    closed=(True,))
            ax = np.sqrt(kk / lp)

            def ell(t, ax=ax):
                t = np.asarray(t, dtype=float)
                return x0 + ax[0] * np.cos(t)[..., None] * V[:, 0] + ax[1] * np.sin(t)[..., None] * V[:, 1]

            if abs(lp[0] - lp[1]) <= 1e-12 * max(lp):
                return VarietyClass(CIRCLE, center=x0, radius=float(ax[0]), axes=V, components=(ell,), closed=(True,))
            return VarietyClass(ELLIPSE, center=x0, axes=V, components=(ell,), closed=(True,))
        # indefinite
        if k == 0:
            m = math.sqrt(-lam[0] / lam[1])
            dirs = [V[:, 0] + m * V[:, 1], V[:, 0] - m * V[:, 1]]
            dirs = [d / np.linalg.norm(d) for d in dirs]
            ang = math.acos(min(1.0, abs(float(dirs[0] @ dirs[1]))))
            comps = tuple((lambda t, d=d: x0 + np.asarray(t, dtype=float)[..., None] * d) for d in dirs)
            return VarietyClass(LINE_PAIR, center=x0, angle=ang, axes=np.array(dirs), components=comps,
                                closed=(False, False))
        # z^T A z = k; choose the eigen-direction whose eigenvalue shares k's sign
        i, j = (0, 1) if lam[0] * k > 0 else (1, 0)
        a1 = math.sqrt(k / lam[i])
        a2 = math.sqrt(-k / lam[j])
        comps = tuple(
            (lambda t, sg=sg: x0 + sg * a1 * np.cosh(np.asarray(t, float))[..., None] * V[:, i]
             + a2 * np.sinh(np.asarray(t, float))[..., None] * V[:, j])
            for sg in (1.0, -1.0))
        return VarietyClass(HYPERBOLA, center=x0, axes=V, components=comps, closed=(False, False))
    if nz == 1:
        i = int(np.argmax(np.abs(lam)))
        j = 1 - i
        e1, e2 = V[:, i], V[:, j]
        l1 = lam[i]
        b1, b2 = float(P.b @ e1), float(P.b @ e2)
        if abs(b2) > tol:
            def par(u):
                u = np.asarray(u, dtype=float)
                v = (l1 * u * u - b1 * u - P.c) / b2
                return u[..., None] * e1 + v[..., None] * e2

            return VarietyClass(PARABOLA, axes=np.array([e1, e2]), components=(par,), closed=(False,))
        # -l1 u^2 + b1 u + c = 0
        disc = b1 * b1 + 4 * l1 * P.c
        if abs(disc) <= 1e-12 * max(b1 * b1, abs(4 * l1 * P.c), tol):
            u0 = b1 / (2 * l1)
            line = lambda s, u0=u0: u0 * e1 + np.asarray(s, float)[..., None] * e2
            return VarietyClass(SINGLE_LINE, axes=np.array([e1, e2]), components=(line,), closed=(False,))
        if disc < 0:
            return VarietyClass(EMPTY_REAL)
        roots = [(b1 + sg * math.sqrt(disc)) / (2 * l1) for sg in (1.0, -1.0)]
        comps = tuple((lambda s, u0=u0: u0 * e1 + np.asarray(s, float)[..., None] * e2) for u0 in roots)
        return VarietyClass(PARALLEL_LINES, axes=np.array([e1, e2]), components=comps, closed=(False, False))
    # A = 0: affine or constant
    nb = float(np.linalg.norm(P.b))
    if nb <= tol:
        return VarietyClass(EMPTY_REAL)
    xp = -P.c * P.b / nb ** 2
    d = np.array([-P.b[1], P.b[0]]) / nb
    return VarietyClass(SINGLE_LINE, components=(lambda s: xp + np.asarray(s, float)[..., None] * d,),
                        closed=(False,))


def _classify3(P):
    lam, V, tol = _eig(P)
    if np.all(lam > 0) or np.all(lam < 0):
        x0 = np.linalg.solve(2.0 * P.A, P.b)
        k = float(P(x0))
        s = 1.0 if lam[0] > 0 else -1.0
        kk = s * k if abs(k) > tol else 0.0
        if kk < 0:
            return VarietyClass(EMPTY_REAL, center=x0)
        if kk == 0:
            return VarietyClass(SINGLE_POINT, center=x0)
        lp = s * lam
        if np.ptp(lp) <= 1e-12 * lp.max():
            r = math.sqrt(kk / lp[0])

            def sph(t):
                t = np.asarray(t, float)
                # t[..., 0] azimuth, t[..., 1] in [-1, 1] the height cosine
                ct = t[..., 1]
                st = np.sqrt(np.clip(1 - ct * ct, 0, None))
                return x0 + r * np.stack([st * np.cos(t[..., 0]), st * np.sin(t[..., 0]), ct], axis=-1)

            return VarietyClass(SPHERE, center=x0, radius=r, components=(sph,), closed=(True,))
    return VarietyClass(OTHER_QUADRIC)


def is_square_free(P: QuadraticVariety) -> bool:
    """False exactly when P = alpha * (affine form)^2 with a nonconstant form."""
    if not np.any(np.abs(P.A) > 1e-12 * _scale(P)):
        return True
    s = np.linalg.svd(P.homogenized(), compute_uv=False)
    return not (s[1] <= 1e-12 * s[0])


def leading_direction(P: QuadraticVariety, seed: int = 0, tries: int = 64):
    """A unit direction e with e^T A e != 0, so that after a rotation putting e
    first the coefficient of X_1^2 is a nonzero constant.  Coordinate axes are
    tried first, then seeded random rotations.  Returns None if A = 0."""
    tol = 1e-12 * _scale(P)
    n = P.dim
    for i in range(n):
        if abs(P.A[i, i]) > tol:
            return np.eye(n)[i]
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        e = rng.standard_normal(n)
        e /= np.linalg.norm(e)
        if abs(e @ P.A @ e) > tol:
            return e
    return None


def _refine(P, x, iters=60):
    x = np.array(x, dtype=float)
    for _ in range(iters):
        r = P(x)
        g = P.gradient(x)
        gg = np.sum(g * g, axis=-1)
        done = (np.abs(r) <= 0.1 * ZERO_RESIDUAL) | (gg == 0)
        if np.all(done):
            break
        step = np.where(done, 0.0, r / np.where(gg == 0, 1.0, gg))
        x = x - step[..., None] * g
    return x


def smooth_real_point(P: QuadraticVariety):
    """One smooth real point per real component, or None if there are none."""
    cls = classify(P)
    out = []
    for comp, closed in zip(cls.components, cls.closed):
        if P.dim == 3:
            seeds = np.array([[0.3, 0.2], [1.7, -0.4], [3.0, 0.5]])
        else:
            seeds = np.array([0.0, 0.7, 1.3, -2.1])
        for s in seeds:
            x = _refine(P, comp(s))
            if abs(P(x)) <= ZERO_RESIDUAL and np.linalg.norm(P.gradient(x)) > GRAD_NONZERO:
                out.append(x)
                break
    return out or None


def real_component_report(P: QuadraticVariety) -> dict:
    """Does every irreducible factor of P have real coefficients?

    Definite quadratics with a single real point, or with no real points,
    factor over C into non-real conjugate factors (X1^2 + X2^2 =
    (X1 + i X2)(X1 - i X2)), and an empty conic has no real component at all.
    Such P are reported as an obstruction rather than decided.
    """
    cls = classify(P)
    lam, _, _ = _eig(P)
    obstruction = None
    if cls.tag == EMPTY_REAL:
        obstruction = "Z_R(P) is empty"
    elif cls.tag == SINGLE_POINT:
        obstruction = "P factors over C into non-real conjugate factors; the only real point is singular"
    elif cls.tag == SINGLE_LINE and np.count_nonzero(lam) == 1:
        obstruction = "P is the square of a real affine form"
    return {"tag": cls.tag, "real_components": len(cls.components), "obstruction": obstruction}


def sample_real_zeros(P: QuadraticVariety, count: int, seed: int, spread: float = 3.0) -> List[np.ndarray]:
    """`count` deterministic points of Z_R(P), spread over its components."""
    if count < 1:
        raise VarietyError("count must be >= 1")
    cls = classify(P)
    if cls.tag == EMPTY_REAL:
        raise VarietyError("Z_R(P) is empty; nothing to sample")
    if not cls.components:
        raise VarietyError(f"sampling not supported for {cls.tag}")
    rng = np.random.default_rng(seed)
    ncomp = len(cls.components)
    per = [count // ncomp + (1 if i < count % ncomp else 0) for i in range(ncomp)]
    pts = []
    for comp, closed, m in zip(cls.components, cls.closed, per):
        if m == 0:
            continue
        if P.dim == 3:
            s = np.stack([rng.uniform(0, 2 * math.pi, m), rng.uniform(-1, 1, m)], axis=-1)
        elif closed:
            s = np.sort(rng.uniform(0, 2 * math.pi, m))
        else:
            s = np.sort(rng.uniform(-spread, spread, m))
        x = _refine(P, comp(s))
        pts.extend(np.atleast_2d(x))
    bad = [p for p in pts if abs(P(p)) > ZERO_RESIDUAL]
    if bad:
        raise VarietyError(f"refinement failed to reach |P| <= {ZERO_RESIDUAL} at {bad[0].tolist()}")
    return pts


def circle_polynomial(radius: float, dim: int = 2) -> QuadraticVariety:
    """P = r^2 - |X|^2 (A = I, b = 0, c = r^2)."""
    return QuadraticVariety(np.eye(dim), np.zeros(dim), radius * radius)


def line_pair_polynomial(rho: float) -> QuadraticVariety:
    """Product of the linear forms vanishing on the lines through 0 at angles 0
    and rho (the lines Delta_0 and Delta_rho): P = X2 * (sin(rho) X1 - cos(rho) X2)."""
    s, c = math.sin(rho), math.cos(rho)
    # X2 (s X1 - c X2) = s X1 X2 - c X2^2 = -X^T A X
    A = np.array([[0.0, -0.5 * s], [-0.5 * s, c]])
    return QuadraticVariety(A, np.zeros(2), 0.0)
