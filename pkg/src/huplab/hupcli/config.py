"""Experiment configuration: a flat INI file with section headers.

Recognised sections and keys (all optional unless the command needs them):

    [curve]      kind = circle | ellipse | rectangle | csv
                 radius, center | a, b, center | T, L | path
    [lambda]     kind = circle | parabola | lines | quadric
                 radius | (none) | angles = a1, a2 | A = a11, a12, a21, a22 ; b = b1, b2 ; c
                 (P = -X.A.X + b.X + c)
    [density]    kind = eigen | rect-eigen | constant | rational | trig | csv
                 mode = m, k ; type = cos | sin ; value ; n ; degree ; path ; order
                 regularity = L1 | Lp | C1 | C2 (downgrade only) ; p
    [kernel]     kind = helmholtz | schrodinger | wave | transport ; c1 ; rho
    [run]        seed, nodes, samples, exterior_points, jump_points, tol_rel,
                 eigen_tol, jobs
    [scan]       origin = o1, o2 ; points ; iterations ; rhos = r1, r2, ...
    [sweep]      points = x1 y1; x2 y2; ...  or  grid = x0, x1, y0, y1, n
                 jumps = t1, t2, ...
    [spectrum]   count
"""
from __future__ import annotations

import ast
import configparser
import math
import operator
import os
from dataclasses import dataclass, field
from typing import Optional


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "run": {"seed": "0", "nodes": "32", "samples": "64", "exterior_points": "32",
            "jump_points": "4", "tol_rel": "1e-8", "eigen_tol": "1e-9", "jobs": "1"},
    "scan": {"points": "41", "iterations": "20000"},
    "spectrum": {"count": "20"},
}


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _jzero(m, k):
    from ..specfun import bessel_j_zeros
    return bessel_j_zeros(int(m), int(k))[int(k) - 1]


_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt, "atan": math.atan, "jzero": _jzero}


def number_expr(text):
    """Evaluate a small arithmetic expression: numbers, pi, + - * / **,
    sqrt(), atan() and jzero(m, k) (k-th positive zero of J_m)."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and not node.keywords):
            return float(_FUNCS[node.func.id](*[ev(a) for a in node.args]))
        raise ConfigError(f"unsupported expression element in {text!r}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc
    try:
        return ev(tree)
    except (ZeroDivisionError, OverflowError, ValueError, TypeError) as exc:
        raise ConfigError(f"cannot evaluate {text!r}: {exc}") from exc


def _split_top(s):
    # commas inside parentheses belong to function calls
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in ",;" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [v for v in out if v.strip()]


def _floats(s, n=None, key="value"):
    out = [number_expr(v) for v in _split_top(s)]
    if n is not None and len(out) != n:
        raise ConfigError(f"{key} needs {n} numbers, got {len(out)}")
    return out


@dataclass
class ExperimentConfig:
    sections: dict = field(default_factory=dict)
    source: Optional[str] = None

    def get(self, section, key, default=None):
        sec = self.sections.get(section, {})
        if key in sec:
            return sec[key]
        return DEFAULTS.get(section, {}).get(key, default)

    def has(self, section):
        return section in self.sections

    def require(self, section, key):
        v = self.get(section, key)
        if v is None:
            raise ConfigError(f"missing [{section}] {key}")
        return v

    def number(self, section, key, default=None):
        v = self.get(section, key, default)
        if v is None:
            raise ConfigError(f"missing [{section}] {key}")
        return number_expr(str(v))

    def integer(self, section, key, default=None):
        x = self.number(section, key, default)
        if x != int(x):
            raise ConfigError(f"[{section}] {key} must be an integer")
        return int(x)

    def vector(self, section, key, n=None, default=None):
        v = self.get(section, key, default)
        if v is None:
            raise ConfigError(f"missing [{section}] {key}")
        return _floats(v, n, f"[{section}] {key}")

    def override(self, section, key, value):
        if value is not None:
            self.sections.setdefault(section, {})[key] = str(value)

    def validate(self):
        for key in ("tol_rel", "eigen_tol"):
            if not self.number("run", key) > 0:
                raise ConfigError(f"[run] {key} must be positive")
        for key in ("nodes", "samples", "exterior_points", "jobs"):
            if self.integer("run", key) < 1:
                raise ConfigError(f"[run] {key} must be >= 1")
        if self.integer("run", "nodes") < 8:
            raise ConfigError("[run] nodes must be >= 8")
        return self

    def to_dict(self):
        merged = {s: dict(v) for s, v in DEFAULTS.items()}
        for s, kv in self.sections.items():
            merged.setdefault(s, {}).update(kv)
        return {s: dict(sorted(kv.items())) for s, kv in sorted(merged.items())}


def parse_config(text: str, source=None) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = str  # keys such as T and L are case sensitive
    try:
        cp.read_string(text, source=source or "<config>")
    except configparser.Error as exc:
        raise ConfigError(f"unparseable config: {exc}") from exc
    secs = {s: {k: v.strip() for k, v in cp.items(s)} for s in cp.sections()}
    return ExperimentConfig(secs, source)


def load_config(path=None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    if not os.path.exists(path):
        raise ConfigError(f"config file {path!r} not found")
    with open(path) as fh:
        return parse_config(fh.read(), path)


def output_dir(cli_out=None, default="hup_out"):
    """--out wins; otherwise the OUTPUT_DIR environment variable; otherwise `default`."""
    out = cli_out or os.environ.get("OUTPUT_DIR") or default
    os.makedirs(out, exist_ok=True)
    return out
