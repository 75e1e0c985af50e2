"""The five subcommands.  Each returns (report dict, exit code) and writes its
files into the output directory; nothing depends on the clock."""
from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .. import dynamics as dyn
from .. import geometry as geo
from .. import kernels as ker
from .. import potentials as pot
from .. import spectra as sp
from .. import transform as tr
from .. import varieties as var
from . import instance as ins
from .config import ConfigError, _floats

SCHEMA_VERSION = 1
HUP, NOT_HUP, INCONCLUSIVE = "HUP-consistent", "not-HUP", "inconclusive"
PASS, FAIL, UNTESTED = "pass", "fail", "untested"
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2
JUMP_TOL = 1e-4
EXTERIOR_TOL = 1e-6


class NoConstructionError(ConfigError):
    pass


# -- io helpers --------------------------------------------------------------------

def _clean(obj):
    """JSON-safe copy: numpy scalars to python, complex to [re, im], nan/inf to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [_clean(float(obj.real)), _clean(float(obj.imag))]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False))
        fh.write("\n")


def _pmap(fn, items, jobs=1):
    """Ordered map, fanned out over threads when jobs > 1."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _hypothesis(status, **evidence):
    return {"status": status, "evidence": evidence}


def write_density_csv(path, g: tr.Density, per_piece=16):
    n = g.curve.n_pieces
    t = np.arange(n * per_piece) / per_piece
    x = g.curve.point(t)
    v = g(t)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x1", "x2", "re_g", "im_g"])
        for ti, xi, vi in zip(t, x, v):
            w.writerow([repr(float(ti)), repr(float(xi[0])), repr(float(xi[1])),
                        repr(float(vi.real)), repr(float(vi.imag))])


# -- shared pipeline pieces ---------------------------------------------------------

def _run_params(cfg):
    return dict(seed=cfg.integer("run", "seed"), nodes=cfg.integer("run", "nodes"),
                samples=cfg.integer("run", "samples"), n_ext=cfg.integer("run", "exterior_points"),
                n_jump=cfg.integer("run", "jump_points"), tol_rel=cfg.number("run", "tol_rel"),
                eigen_tol=cfg.number("run", "eigen_tol"), jobs=cfg.integer("run", "jobs"))


def _structural_hypotheses(P, seed):
    sf = var.is_square_free(P)
    e = var.leading_direction(P, seed)
    h1 = _hypothesis(PASS if sf and e is not None else FAIL, square_free=sf,
                     leading_direction=None if e is None else e)
    rep = var.real_component_report(P)
    pts = var.smooth_real_point(P)
    ok = rep["obstruction"] is None and pts is not None and len(pts) == rep["real_components"]
    h2 = _hypothesis(PASS if ok else FAIL, smooth_points=pts or [], **rep)
    return h1, h2


def _spectrum_for(dom, c2):
    count = 32
    while True:
        if dom.kind == "disk":
            tab = sp.disk_spectrum(dom.params["radius"], count)
        else:
            tab = sp.rectangle_spectrum(dom.params["T"], dom.params["L"], count)
        if tab.values[-1] > c2:
            return tab
        count *= 2


def _eigen_density(dom, label):
    m, k, fam = label
    if fam == "rect":
        return sp.rectangle_eigen_density(dom.params["T"], dom.params["L"], (m, k), dom)
    return sp.eigen_density(dom.params["radius"], (m, k), "cos" if fam == "radial" else fam, dom)


def _ring_points(dom, count, seed):
    """Exterior samples on a ring around the domain, seeded radii."""
    c = np.asarray(dom.witness, float)
    pts = dom.boundary.point(dom.boundary.sample(64))
    R = float(np.max(np.linalg.norm(pts - c, axis=-1)))
    rng = np.random.default_rng(seed)
    th = 2.0 * math.pi * (np.arange(count) + 0.5) / count
    r = R * (1.25 + 1.25 * rng.random(count))
    return c + r[:, None] * np.stack([np.cos(th), np.sin(th)], axis=-1)


def _verify(g, lam, tol_rel, nodes):
    """vanishes_on at `nodes` and again at doubled nodes."""
    a = tr.vanishes_on(g, lam, tol_rel, nodes)
    b = tr.vanishes_on(g, lam, tol_rel, 2 * nodes)
    ok = a.verdict and b.verdict and a.scale > 0
    return ok, {"nodes": a.to_dict(), "doubled_nodes": b.to_dict()}


def _jump_probes(field, params, jobs):
    ts = [(i + 0.5) * field.domain.boundary.n_pieces / params for i in range(params)]
    probes = _pmap(lambda t: pot.jump_test(field, t), ts, jobs)
    return probes, max(p.jump for p in probes)


# -- helmholtz ------------------------------------------------------------------------

def _helmholtz_instance(cfg, dom, zs, rp):
    c1 = zs.radius
    c2 = c1 * c1
    tab = _spectrum_for(dom, c2)
    eig = sp.is_eigenvalue(c2, tab, rp["eigen_tol"])
    lam = ins.lambda_samples(zs, rp["samples"], rp["seed"])
    g = _eigen_density(dom, eig.label)
    field = pot.PotentialField(ker.helmholtz2d(c1), dom, g)
    return dict(c1=c1, table=tab, eig=eig, lam=lam, density=g, field=field)


def _exterior(field, pts, jobs):
    dom = field.domain
    for p in pts:
        if geo.classify_point(dom, p) != geo.EXTERIOR:
            raise pot.PotentialError(f"sample {p.tolist()} is not exterior")
    res = _pmap(lambda p: field.evaluate(p, with_error=True), pts, jobs)
    return pot.ExteriorReport(np.asarray(pts), np.array([complex(v) for v, _ in res]),
                              np.array([float(e) for _, e in res]))


def _interior_probe(hi):
    dom = hi["field"].domain
    if dom.kind != "disk":
        return None
    r = dom.params["radius"]
    x = np.asarray(dom.params["center"]) + np.array([0.5 * r, 0.0])
    m, k, fam = hi["eig"].label
    u = sp.eigenfunction(r, (m, k), "cos" if fam == "radial" else fam)
    return {"point": x, "phi": complex(hi["field"].evaluate(x)), "u": float(u(x - dom.params["center"])[0])}


def _check_helmholtz(cfg, dom, zs, rp, out):
    c1 = zs.radius
    one = pot.PotentialField(ker.helmholtz2d(c1), dom, tr.Density.constant(dom.boundary))
    probes, jmax = _jump_probes(one, rp["n_jump"], rp["jobs"])
    h4 = _hypothesis(PASS if jmax <= JUMP_TOL else FAIL, max_jump=jmax, tol=JUMP_TOL,
                     probes=[p.to_dict() for p in probes])
    if dom.kind not in ("disk", "rectangle"):
        h3 = _hypothesis(UNTESTED, note=f"eigenvalue condition untested: no closed-form spectrum "
                                        f"for a {dom.kind} domain", c_squared=c1 * c1)
        return [h3, h4], {}, None, INCONCLUSIVE
    hi = _helmholtz_instance(cfg, dom, zs, rp)
    eig = hi["eig"]
    h3 = _hypothesis(FAIL if eig.is_eigenvalue else PASS, **eig.to_dict())
    evidence = {"eigenvalue": eig.to_dict()}
    counter = None
    if eig.is_eigenvalue:
        ok, rep = _verify(hi["density"], hi["lam"], rp["tol_rel"], rp["nodes"])
        ext = _exterior(hi["field"], _ring_points(dom, rp["n_ext"], rp["seed"]), rp["jobs"])
        ok = ok and ext.max_abs <= EXTERIOR_TOL
        write_density_csv(os.path.join(out, "density.csv"), hi["density"])
        counter = {"kind": "eigen-density", "mode": list(eig.label), "file": "density.csv",
                   "vanishes_on": rep, "exterior_support": ext.to_dict(), "verified": ok,
                   "interior_probe": _interior_probe(hi)}
        label = NOT_HUP if ok else INCONCLUSIVE
    else:
        # the nearest eigen-density must not be annihilated on Lambda
        vals = tr.fourier_stieltjes(hi["density"], hi["lam"], rp["nodes"])
        evidence["nearest_eigen_density_min_abs"] = float(np.min(np.abs(vals)))
        evidence["nearest_eigen_density_scale"] = hi["density"].l1_norm()
        label = HUP
    return [h3, h4], evidence, counter, label


# -- transport -----------------------------------------------------------------------

def _transport_counterexample(zs, n):
    a1 = zs.angles[0]
    f = lambda th: np.exp(1j * n * (th - a1)) - np.exp(-1j * n * (th - a1))
    return f


def _transport_exterior(split, rhos, count, seed):
    rng = np.random.default_rng(seed)
    rows = []
    for rho in rhos:
        sp_ = rng.uniform(-0.95, 0.95, count)
        up = np.where(np.arange(count) % 2 == 0, 1.0, -1.0) * rng.uniform(1.05, 4.0, count)
        c, s = math.cos(rho), math.sin(rho)
        x1, x2 = c * sp_ - s * up, s * sp_ + c * up
        vals = pot.transport_potential(split, x1, x2, rho)
        for a, b, v in zip(x1, x2, vals):
            rows.append((a, b, v))
    pts = np.array([[a, b] for a, b, _ in rows])
    return pot.ExteriorReport(pts, np.array([v for _, _, v in rows]), np.zeros(len(rows)))


def _check_transport(cfg, dom, zs, rp, out):
    rho = ins.transport_angle(zs)
    d, p, q = dyn.nearest_rational(rho / math.pi)
    rational = d <= dyn.RATIONAL_TOL
    h3 = _hypothesis(FAIL if rational else UNTESTED, rho=rho, rho_over_pi=rho / math.pi,
                     nearest_p=p, nearest_q=q, distance=d, max_denominator=dyn.MAX_DENOMINATOR)
    h4 = _hypothesis(UNTESTED, note="transport potentials are available in closed form only; "
                                    "continuity depends on the density")
    evidence = {"rotation_flag": {"rational": rational, "p": p, "q": q, "distance": d}}
    counter = None
    if rational:
        n, k = q, p
        f = _transport_counterexample(zs, n)
        g = tr.Density.from_angle(dom.boundary, f)
        lam = ins.lambda_samples(zs, rp["samples"], rp["seed"])
        ok, rep = _verify(g, lam, rp["tol_rel"], rp["nodes"])
        ext = _transport_exterior(pot.SplitDensity.from_angle(f), zs.angles, rp["n_ext"], rp["seed"])
        ok = ok and ext.max_abs <= EXTERIOR_TOL
        write_density_csv(os.path.join(out, "density.csv"), g)
        counter = {"kind": "rational_counterexample", "n": n, "k": k, "rho": rho,
                   "file": "density.csv", "vanishes_on": rep, "exterior_support": ext.to_dict(),
                   "period_check": dyn.period_check(g, rho), "verified": ok}
        label = NOT_HUP if ok else INCONCLUSIVE
    else:
        label = INCONCLUSIVE
    return [h3, h4], evidence, counter, label


# -- wave / schroedinger ---------------------------------------------------------------

def _ratio_flag(T, L):
    r = T / L
    fr = Fraction(r).limit_denominator(dyn.MAX_DENOMINATOR)
    d = abs(r - fr.numerator / fr.denominator)
    return {"T_over_L": r, "p": fr.numerator, "q": fr.denominator, "distance": d,
            "rational": d <= dyn.RATIONAL_TOL}


def _check_wave(cfg, dom, zs, rp, out):
    flag = _ratio_flag(dom.params["T"], dom.params["L"])
    h3 = _hypothesis(FAIL if flag["rational"] else UNTESTED, **flag)
    field = pot.PotentialField(ker.wave1d(), dom, tr.Density.constant(dom.boundary))
    probes, jmax = _jump_probes(field, rp["n_jump"], rp["jobs"])
    h4 = _hypothesis(PASS if jmax <= JUMP_TOL else FAIL, max_jump=jmax, tol=JUMP_TOL,
                     probes=[p.to_dict() for p in probes])
    note = ("T/L is rational: uniqueness fails, but no counterexample is constructed here"
            if flag["rational"] else "T/L is only flagged as an irrational candidate")
    return [h3, h4], {"ratio_flag": flag, "note": note}, None, INCONCLUSIVE


def _check_schrodinger(cfg, dom, zs, rp, out):
    h3 = _hypothesis(PASS, note="the Dirichlet problem for the Schroedinger operator has only "
                                "the zero solution on every rectangle")
    field = pot.PotentialField(ker.schrodinger1d(), dom, tr.Density.constant(dom.boundary))
    # probes on the horizontal sides, where the density must be C2
    ts = [0.5, 2.5]
    probes = _pmap(lambda t: pot.jump_test(field, t), ts, rp["jobs"])
    jmax = max(p.jump for p in probes)
    h4 = _hypothesis(PASS if jmax <= JUMP_TOL else FAIL, max_jump=jmax, tol=JUMP_TOL,
                     probes=[p.to_dict() for p in probes])
    return [h3, h4], {}, None, HUP if h4["status"] == PASS else INCONCLUSIVE


_CHECKERS = {ins.HELMHOLTZ: _check_helmholtz, ins.TRANSPORT: _check_transport,
             ins.WAVE: _check_wave, ins.SCHRODINGER: _check_schrodinger}


def build_instance(cfg):
    dom = ins.build_domain(cfg)
    zs = ins.build_zero_set(cfg)
    return dom, zs, ins.family_of(dom, zs)


def cmd_check(cfg, out):
    """Run the hypothesis predicates and the family pipeline; write verdict.json."""
    rp = _run_params(cfg)
    dom, zs, fam = build_instance(cfg)
    h1, h2 = _structural_hypotheses(zs.P, rp["seed"])
    (h3, h4), evidence, counter, label = _CHECKERS[fam](cfg, dom, zs, rp, out)
    hyps = {"i": h1, "ii": h2, "iii": h3, "iv": h4}
    if label == HUP and any(h["status"] != PASS for h in hyps.values()):
        label = INCONCLUSIVE
    if label == NOT_HUP and not (counter and counter["verified"]):
        label = INCONCLUSIVE
    report = {"schema_version": SCHEMA_VERSION, "command": "check", "family": fam,
              "domain": dom.kind, "lambda": zs.to_dict(), "hypotheses": hyps,
              "evidence": evidence, "counterexample": counter, "verdict": label,
              "config": cfg.to_dict()}
    write_json(os.path.join(out, "verdict.json"), report)
    return report, EXIT_INCONCLUSIVE if label == INCONCLUSIVE else EXIT_OK


def cmd_counterexample(cfg, out):
    """Density samples plus a verification report for a constructive counterexample."""
    rp = _run_params(cfg)
    dom, zs, fam = build_instance(cfg)
    if fam == ins.HELMHOLTZ:
        if dom.kind not in ("disk", "rectangle"):
            raise NoConstructionError(f"no counterexample construction: no spectrum for a {dom.kind} domain")
        hi = _helmholtz_instance(cfg, dom, zs, rp)
        if not hi["eig"].is_eigenvalue:
            raise NoConstructionError(
                f"no counterexample construction: c1^2 = {hi['c1'] ** 2!r} is not an eigenvalue "
                f"(nearest {hi['eig'].nearest!r})")
        g, lam = hi["density"], hi["lam"]
        ext = _exterior(hi["field"], _ring_points(dom, rp["n_ext"], rp["seed"]), rp["jobs"])
        desc = {"kind": "eigen-density", "mode": list(hi["eig"].label)}
    elif fam == ins.TRANSPORT:
        rho = ins.transport_angle(zs)
        d, p, q = dyn.nearest_rational(rho / math.pi)
        if d > dyn.RATIONAL_TOL:
            raise NoConstructionError(f"no counterexample construction: rho/pi = {rho / math.pi!r} "
                                      f"is not within {dyn.RATIONAL_TOL} of a p/q with q <= {dyn.MAX_DENOMINATOR}")
        f = _transport_counterexample(zs, q)
        g = tr.Density.from_angle(dom.boundary, f)
        lam = ins.lambda_samples(zs, rp["samples"], rp["seed"])
        ext = _transport_exterior(pot.SplitDensity.from_angle(f), zs.angles, rp["n_ext"], rp["seed"])
        desc = {"kind": "rational_counterexample", "n": q, "k": p, "rho": rho}
    else:
        raise NoConstructionError(f"no counterexample construction for the {fam} family")
    ok, rep = _verify(g, lam, rp["tol_rel"], rp["nodes"])
    ok = ok and ext.max_abs <= EXTERIOR_TOL
    write_density_csv(os.path.join(out, "density.csv"), g)
    report = {"schema_version": SCHEMA_VERSION, "command": "counterexample", "family": fam,
              "counterexample": desc, "file": "density.csv", "vanishes_on": rep,
              "exterior_support": ext.to_dict(), "checks_pass": ok, "config": cfg.to_dict()}
    write_json(os.path.join(out, "verification.json"), report)
    return report, EXIT_OK if ok else EXIT_INCONCLUSIVE


def cmd_rotation_scan(cfg, out):
    """rho -> tau(t_rho) table in scan.csv and the flagged candidates in scan.json."""
    rp = _run_params(cfg)
    dom = ins.build_domain(cfg)
    if not dom.boundary.has_regularity(geo.C2_STRICTLY_CONVEX):
        raise ConfigError(f"rotation scans need a strictly convex C2 curve; the {dom.kind} "
                          f"boundary is tagged {dom.boundary.regularity}")
    origin = np.asarray(cfg.vector("scan", "origin", 2)) if cfg.get("scan", "origin") else dom.witness
    N = cfg.integer("scan", "iterations")
    rho1, M1, M2 = dyn.tangency_angle(dom.boundary)
    if cfg.get("scan", "rhos") is not None:
        rhos = np.asarray(cfg.vector("scan", "rhos"))
    else:
        pts = cfg.integer("scan", "points")
        if pts < 1:
            raise ConfigError("the rho grid is empty")
        rhos = np.linspace(0.0, rho1, pts)
    if rhos.size == 0:
        raise ConfigError("the rho grid is empty")
    if np.any(rhos < -1e-12) or np.any(rhos > rho1 + 1e-9):
        raise ConfigError(f"grid must lie in [0, rho_1] = [0, {rho1!r}]")

    def row(rho):
        est = dyn.rotation_number(dyn.t_rho_map(dom.boundary, float(rho), origin), N)
        return dyn.ScanRow(float(rho), est.value, est.spread, est.p, est.q, est.distance)

    table = dyn.ScanTable(rho1, tuple(_pmap(row, rhos, rp["jobs"])))
    table.to_csv(os.path.join(out, "scan.csv"))
    report = {"schema_version": SCHEMA_VERSION, "command": "rotation-scan", "rho1": rho1,
              "tangency_points": [M1, M2], "origin": origin, "iterations": N,
              "tau_first": table.rows[0].tau, "tau_last": table.rows[-1].tau,
              "candidates": table.candidates, "file": "scan.csv", "config": cfg.to_dict()}
    write_json(os.path.join(out, "scan.json"), report)
    return report, EXIT_OK


def _sweep_points(cfg):
    if cfg.get("sweep", "points") is not None:
        rows = [r for r in cfg.get("sweep", "points").split(";") if r.strip()]
        # a pair is "x, y" or "x y"
        pts = [_floats(r if "," in r else ",".join(r.split()), 2, "[sweep] points") for r in rows]
        return np.array(pts, dtype=float)
    if cfg.get("sweep", "grid") is not None:
        x0, x1, y0, y1, n = cfg.vector("sweep", "grid", 5)
        n = int(n)
        if n < 1:
            raise ConfigError("[sweep] grid needs n >= 1")
        xs, ys = np.linspace(x0, x1, n), np.linspace(y0, y1, n)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return np.stack([X.ravel(), Y.ravel()], axis=-1)
    raise ConfigError("[sweep] needs points or grid")


def cmd_potential(cfg, out):
    """Potential values (with error estimates) in sweep.csv; jump probes in jumps.json."""
    rp = _run_params(cfg)
    kind = cfg.get("kernel", "kind", "helmholtz")
    pts = _sweep_points(cfg)
    dom = ins.build_domain(cfg)
    report = {"schema_version": SCHEMA_VERSION, "command": "potential", "kernel": kind,
              "file": "sweep.csv", "config": cfg.to_dict()}
    names = ("x1", "x2")
    field = None
    if kind == "transport":
        if not ins._is_unit_disk(dom):
            raise ins.UnsupportedError("transport potentials live on the unit circle")
        rho = cfg.number("kernel", "rho", "0")
        split = ins.build_split_density(cfg, rp["seed"])
        vals = pot.transport_potential(split, pts[:, 0], pts[:, 1], rho)
        errs = np.zeros(len(pts))
    else:
        g = ins.build_density(cfg, dom, rp["seed"])
        if kind == "helmholtz":
            k = ker.helmholtz2d(cfg.number("kernel", "c1"))
        elif kind == "wave":
            k = ker.wave1d()
            names = ("t", "x")
        elif kind == "schrodinger":
            k = ker.schrodinger1d()
            names = ("t", "x")
        else:
            raise ConfigError(f"unknown kernel kind {kind!r} (helmholtz, schrodinger, wave, transport)")
        field = pot.PotentialField(k, dom, g)
        res = _pmap(lambda p: field.evaluate(p, with_error=True), pts, rp["jobs"])
        vals = np.array([complex(v) for v, _ in res])
        errs = np.array([float(e) for _, e in res])
    pot.write_sweep_csv(os.path.join(out, "sweep.csv"), pts, vals, errs, names)
    report["max_abs"] = float(np.max(np.abs(vals)))
    report["count"] = len(pts)
    if cfg.get("sweep", "jumps") is not None:
        if field is None:
            raise ConfigError("jump probes are not available for transport potentials")
        ts = cfg.vector("sweep", "jumps")
        probes = _pmap(lambda t: pot.jump_test(field, t), ts, rp["jobs"])
        write_json(os.path.join(out, "jumps.json"),
                   {"schema_version": SCHEMA_VERSION, "probes": [p.to_dict() for p in probes]})
        report["max_jump"] = max(p.jump for p in probes)
    write_json(os.path.join(out, "potential.json"), report)
    return dict(report, points=pts, values=vals), EXIT_OK


def cmd_spectrum(cfg, out):
    """Dirichlet eigenvalue table in spectrum.csv; optional membership test for c1^2."""
    dom = ins.build_domain(cfg)
    count = cfg.integer("spectrum", "count")
    if dom.kind == "disk":
        tab = sp.disk_spectrum(dom.params["radius"], count)
    elif dom.kind == "rectangle":
        tab = sp.rectangle_spectrum(dom.params["T"], dom.params["L"], count)
    else:
        raise ins.UnsupportedError(f"closed-form spectra exist for disks and rectangles, not {dom.kind}")
    tab.to_csv(os.path.join(out, "spectrum.csv"))
    report = {"schema_version": SCHEMA_VERSION, "command": "spectrum", "domain": tab.domain,
              "count": len(tab), "file": "spectrum.csv", "config": cfg.to_dict()}
    c1 = None
    if cfg.get("kernel", "c1") is not None:
        c1 = cfg.number("kernel", "c1")
    elif cfg.get("lambda", "radius") is not None:
        c1 = cfg.number("lambda", "radius")
    if c1 is not None:
        report["eigenvalue"] = sp.is_eigenvalue(c1 * c1, _spectrum_for(dom, c1 * c1),
                                                cfg.number("run", "eigen_tol")).to_dict()
    write_json(os.path.join(out, "spectrum.json"), report)
    return dict(report, table=tab), EXIT_OK


COMMANDS = {"check": cmd_check, "counterexample": cmd_counterexample,
            "rotation-scan": cmd_rotation_scan, "potential": cmd_potential, "spectrum": cmd_spectrum}
