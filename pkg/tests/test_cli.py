import json
import os
import subprocess
import sys

import pytest

from huplab.hupcli import cli
from huplab.hupcli import config as cfgmod

DISK = "[curve]\nkind = circle\nradius = 1\n"
RECT = "[curve]\nkind = rectangle\nT = 2\nL = 1\n"
ELL = "[curve]\nkind = ellipse\na = 2\nb = 1\n"

CASES = {
    "hit": ("check", DISK + "[lambda]\nkind = circle\nradius = jzero(0, 1)\n[density]\nkind = eigen\nmode = 0, 1\n", 0),
    "miss": ("check", DISK + "[lambda]\nkind = circle\nradius = 2\n[density]\nkind = eigen\nmode = 0, 1\n", 0),
    "rat": ("check", DISK + "[lambda]\nkind = lines\nangles = 0, pi/3\n[density]\nkind = rational\nn = 3\n", 0),
    "irr": ("check", DISK + "[lambda]\nkind = lines\nangles = 0, 1\n", 2),
    "schr": ("check", RECT + "[lambda]\nkind = parabola\n[density]\nkind = constant\n", 0),
    "wave": ("check", RECT + "[lambda]\nkind = lines\nangles = pi/4, 3*pi/4\n", 2),
    "ellipse-circle": ("check", ELL + "[lambda]\nkind = circle\nradius = 1.5\n", 2),
    "counterexample": ("counterexample", DISK + "[lambda]\nkind = circle\nradius = jzero(1, 1)\n", 0),
    "counterexample-lines": ("counterexample", DISK + "[lambda]\nkind = lines\nangles = 0, pi/3\n", 0),
    "counterexample-n4": ("counterexample", DISK + "[lambda]\nkind = lines\nangles = 0, pi/4\n", 0),
    "potential": ("potential", DISK + "[kernel]\nkind = helmholtz\nc1 = 1\n[sweep]\npoints = 2 0; 0 0.5\n", 0),
    "spectrum": ("spectrum", RECT + "[spectrum]\ncount = 6\n", 0),
    "rotation-scan": ("rotation-scan", ELL + "[scan]\norigin = 0.1, 0\npoints = 5\niterations = 5000\n", 0),
    "unsupported": ("check", ELL + "[lambda]\nkind = parabola\n", 1),
    "bad-config": ("check", "[curve\nkind = circle\n", 1),
    "eigen-miss-counterexample": ("counterexample", DISK + "[lambda]\nkind = circle\nradius = 2\n", 1),
    "rectangle-scan": ("rotation-scan", RECT, 1),
    "l1-schrodinger": ("potential", RECT + "[kernel]\nkind = schrodinger\n[density]\nkind = constant\n"
                                       "regularity = L1\n[sweep]\npoints = 1 0.5\n", 1),
    "c2-schrodinger": ("potential", RECT + "[kernel]\nkind = schrodinger\n[density]\nkind = constant\n"
                                       "[sweep]\npoints = 1, 0.5; 3 0.25\n", 0),
}


def _run(tmp_path, name, extra=()):
    cmd, text, _ = CASES[name]
    cfg = tmp_path / f"{name}.ini"
    cfg.write_text(text)
    out = tmp_path / f"out-{name}"
    return cli.main([cmd, "--config", str(cfg), "--out", str(out), *extra]), out


@pytest.mark.parametrize("name", sorted(CASES))
def test_exit_codes(tmp_path, name, capsys):
    code, _ = _run(tmp_path, name)
    assert code == CASES[name][2], capsys.readouterr()


def test_verdicts(tmp_path):
    for name, verdict in (("hit", "not-HUP"), ("miss", "HUP-consistent"), ("rat", "not-HUP"),
                          ("irr", "inconclusive"), ("wave", "inconclusive")):
        _, out = _run(tmp_path, name)
        rep = json.loads((out / "verdict.json").read_text())
        assert rep["verdict"] == verdict and rep["schema_version"] == 1


@pytest.mark.parametrize("name", ["hit", "rat"])
def test_not_hup_reverifies_with_doubled_nodes(tmp_path, name):
    _, out = _run(tmp_path, name, ["--nodes", "64"])
    rep = json.loads((out / "verdict.json").read_text())
    assert rep["verdict"] == "not-HUP" and rep["counterexample"]["verified"]


def test_disk_counterexample_density_value(tmp_path):
    cmd, text, _ = CASES["hit"]
    cfg = tmp_path / "c.ini"
    cfg.write_text(text)
    assert cli.main(["counterexample", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    rep = json.loads((tmp_path / "o" / "verification.json").read_text())
    assert rep["checks_pass"] and rep["counterexample"]["mode"][:2] == [0, 1]
    rows = (tmp_path / "o" / "density.csv").read_text().splitlines()
    re_col = rows[0].split(",").index("re_g")
    vals = [float(r.split(",")[re_col]) for r in rows[1:]]
    assert max(abs(v + 1.2485) for v in vals) <= 1e-4


def test_every_json_output_has_schema_version(tmp_path):
    for name in ("hit", "counterexample", "potential", "spectrum", "rotation-scan"):
        _, out = _run(tmp_path, name)
        files = list(out.glob("*.json"))
        assert files
        for f in files:
            assert "schema_version" in json.loads(f.read_text())


def test_output_dir_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("OUTPUT_DIR", str(tmp_path / "env"))
    cfg = tmp_path / "s.ini"
    cfg.write_text(CASES["spectrum"][1])
    assert cli.main(["spectrum", "--config", str(cfg)]) == 0
    assert (tmp_path / "env" / "spectrum.csv").exists()
    assert cfgmod.output_dir(str(tmp_path / "flag")) == str(tmp_path / "flag")


def _files(out, drop_jobs=False):
    res = {}
    for p in sorted(out.iterdir()):
        if drop_jobs and p.suffix == ".json":
            rep = json.loads(p.read_text())
            rep["config"]["run"].pop("jobs")
            res[p.name] = rep
        else:
            res[p.name] = p.read_bytes()
    return res


@pytest.mark.parametrize("name", ["hit", "rat", "potential", "rotation-scan"])
def test_byte_identical_reruns_and_jobs(tmp_path, name):
    a = tmp_path / "a"
    b = tmp_path / "b"
    a.mkdir()
    b.mkdir()
    _, out1 = _run(a, name)
    _, again = _run(b, name)
    assert _files(out1) == _files(again)
    c = tmp_path / "c"
    c.mkdir()
    _, out4 = _run(c, name, ["--jobs", "4"])
    # only the echoed jobs setting may differ
    assert _files(out1, True) == _files(out4, True)


def test_seed_override_changes_sampled_output(tmp_path):
    text = DISK + "[lambda]\nkind = lines\nangles = 0, 1\n"
    cfg = tmp_path / "c.ini"
    cfg.write_text(text)
    cli.main(["check", "--config", str(cfg), "--out", str(tmp_path / "s1"), "--seed", "1"])
    cli.main(["check", "--config", str(cfg), "--out", str(tmp_path / "s2"), "--seed", "2"])
    r1 = json.loads((tmp_path / "s1" / "verdict.json").read_text())
    r2 = json.loads((tmp_path / "s2" / "verdict.json").read_text())
    assert r1["config"]["run"]["seed"] == "1" and r2["config"]["run"]["seed"] == "2"


def test_number_expressions():
    ne = cfgmod.number_expr
    assert ne("pi/3") == pytest.approx(1.0471975511965976)
    assert ne("2**-1 + sqrt(4)") == 2.5
    assert ne("jzero(0, 1)") == pytest.approx(2.404825557695773, abs=1e-14)
    assert ne("-atan(1)*4") == pytest.approx(-3.141592653589793)
    for bad in ("__import__('os')", "1/0", "x + 1", "open('f')", "1 +"):
        with pytest.raises(cfgmod.ConfigError):
            ne(bad)


def test_config_vectors_and_validation():
    c = cfgmod.parse_config("[lambda]\nangles = 0, atan(1)\nA = 1, 0; 0, 1\n[run]\nnodes = 4\n")
    assert c.vector("lambda", "angles", 2) == [0.0, pytest.approx(0.7853981633974483)]
    assert c.vector("lambda", "A") == [1, 0, 0, 1]
    with pytest.raises(cfgmod.ConfigError):
        c.vector("lambda", "angles", 3)
    with pytest.raises(cfgmod.ConfigError):
        c.validate()
    with pytest.raises(cfgmod.ConfigError):
        cfgmod.load_config("/nonexistent/file.ini")
    assert cfgmod.parse_config("[curve]\nT = 2\n").get("curve", "T") == "2"


def test_l1_into_schrodinger_names_the_requirement(tmp_path, capsys):
    _run(tmp_path, "l1-schrodinger")
    assert "C2" in capsys.readouterr().err


def test_entry_point_subprocess(tmp_path):
    cfg = tmp_path / "s.ini"
    cfg.write_text(CASES["spectrum"][1])
    env = dict(os.environ, OUTPUT_DIR=str(tmp_path / "o"))
    r = subprocess.run([sys.executable, "-m", "huplab.hupcli", "spectrum", "--config", str(cfg)],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 0, r.stderr
    assert "command\tspectrum" in r.stdout
    r = subprocess.run([sys.executable, "-m", "huplab.hupcli", "check", "--config", str(tmp_path / "nope.ini")],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 1 and r.stderr.startswith("error:")


def test_figures_flag_writes_svg(tmp_path):
    code, out = _run(tmp_path, "spectrum", ["--figures"])
    assert code == 0 and list(out.glob("*.svg"))
