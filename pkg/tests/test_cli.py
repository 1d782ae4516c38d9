import csv
import json
import math

import numpy as np
import pytest

from vortex4 import __version__
from vortex4.cli import main, metadata_line
from vortex4.poincare import SectionData, rotation_number
from vortex4.resolution import project
from vortex4.vortex_core import Strengths


def write_config(tmp_path, name="cfg.json", **kw):
    cfg = {"gamma": 1.0, "n_sat": 3}
    cfg.update(kw)
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def read_csv(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    assert lines[0].startswith(f"# vortex4 {__version__} config_hash=")
    rows = list(csv.reader(lines[1:]))
    return lines[0], rows[0], rows[1:]


def test_simulate_O_period(tmp_path):
    cfg = write_config(tmp_path, preset={"family": "O", "alpha": 1.0})
    out = tmp_path / "o.csv"
    period = 2 * math.pi * 3 * math.pi
    assert main(["simulate", "--config", cfg, "--t-end", repr(period), "--out", str(out)]) == 0
    _, head, rows = read_csv(out)
    assert head == ["t", "x0", "y0", "x1", "y1", "x2", "y2", "x3", "y3", "H", "mu", "nu_re", "nu_im"]
    first = np.array([float(x) for x in rows[0][1:9]])
    last = np.array([float(x) for x in rows[-1][1:9]])
    assert abs(float(rows[-1][0]) - period) < 1e-12
    assert np.max(np.abs(first - last)) < 1e-7


def test_simulate_collision_exit_2(tmp_path, capsys):
    cfg = write_config(tmp_path, positions=[[0, 0], [1, 0], [1 + 1e-13, 0], [0, 2]])
    assert main(["simulate", "--config", cfg, "--t-end", "1", "--out", str(tmp_path / "x.csv")]) == 2
    assert "CollisionError" in capsys.readouterr().err


def test_config_errors_exit_1(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "missing.json"), "--t-end", "1"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["simulate", "--config", str(bad), "--t-end", "1"]) == 1
    cfg = write_config(tmp_path, "dup.json", positions=[[0, 0], [1, 0], [1, 0], [0, 2]])
    assert main(["simulate", "--config", cfg, "--t-end", "1"]) == 1
    cfg = write_config(tmp_path, "n.json", positions=[[0, 0], [1, 0]])
    assert main(["simulate", "--config", cfg, "--t-end", "1"]) == 1
    cfg = write_config(tmp_path, "k.json", positions=[[0, 0], [1, 0], [2, 0], [0, 2]], integrator={"tol": 1})
    assert main(["simulate", "--config", cfg, "--t-end", "1"]) == 1


def test_usage_errors_exit_1(monkeypatch):
    assert main([]) == 1
    assert main(["nonsense"]) == 1
    assert main(["req", "--family", "O", "--alph", "1"]) == 1
    monkeypatch.setenv("VORTEX_LOG", "loud")
    assert main(["req", "--family", "O"]) == 1


def test_req_and_linearize(tmp_path):
    out = tmp_path / "y.json"
    assert main(["req", "--family", "Y", "--alpha", "1", "--gamma", "1", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    v1, v2 = complex(*d["v"]["v1"]), complex(*d["v"]["v2"])
    assert abs(v2 / v1 - 0.4354205447) < 1e-9
    assert main(["req", "--family", "X", "--out", str(out)]) == 1
    lo = tmp_path / "lin.json"
    assert main(["linearize", "--family", "O", "--out", str(lo)]) == 0
    d = json.loads(lo.read_text())
    ev = np.array([complex(*x) for x in d["eigenvalues"]])
    ue = d["req"]["u_e"]
    assert np.sum(np.abs(ev) < 1e-6 * ue) == 2
    assert np.min(np.abs(ev - 1j * ue)) < 1e-6 * ue and np.min(np.abs(ev + 1j * ue)) < 1e-6 * ue


def test_reduce_reconstruct_round_trip(tmp_path):
    pos = [[0.1, 0.05], [1.0, 0.2], [-0.4, 0.9], [-0.6, -0.8]]
    cfg = write_config(tmp_path, positions=pos)
    red, amb, rec = tmp_path / "r.csv", tmp_path / "a.csv", tmp_path / "rc.csv"
    assert main(["reduce", "--config", cfg, "--t-end", "3", "--out", str(red)]) == 0
    assert main(["simulate", "--config", cfg, "--t-end", "3", "--out", str(amb)]) == 0
    assert main(["reconstruct", "--config", cfg, "--input", str(red), "--out", str(rec)]) == 0
    _, _, arows = read_csv(amb)
    _, _, rrows = read_csv(rec)
    A = np.array([[float(x) for x in r[1:9]] for r in arows])
    R = np.array([[float(x) for x in r[1:9]] for r in rrows])
    za = A[:, 0::2] + 1j * A[:, 1::2]
    zr = R[:, 0::2] + 1j * R[:, 1::2]
    # same shapes: the lift differs from the original by one fixed rigid motion
    g = Strengths.family(1.0, 3)
    for a, b in zip(za, zr):
        pa, pb = project(a, g), project(b, g)
        assert np.max(np.abs(pa.u - pb.u)) < 1e-6
    rot = (za[0, 1] - za[0, 0]) / (zr[0, 1] - zr[0, 0])
    shift = za[0, 0] - rot * zr[0, 0]
    assert np.max(np.abs(rot * zr + shift - za)) < 1e-6


def test_reconstruct_rejects_bad_input(tmp_path):
    cfg = write_config(tmp_path, positions=[[0.1, 0.05], [1.0, 0.2], [-0.4, 0.9], [-0.6, -0.8]])
    bad = tmp_path / "bad.csv"
    bad.write_text("# x\nfoo,bar\n1,2\n")
    assert main(["reconstruct", "--config", cfg, "--input", str(bad)]) == 1


def test_determinism(tmp_path):
    cfg = write_config(tmp_path, positions=[[0.1, 0.05], [1.0, 0.2], [-0.4, 0.9], [-0.6, -0.8]], seed=3)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["simulate", "--config", cfg, "--t-end", "2", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    assert main(["simulate", "--config", cfg, "--t-end", "2.5", "--out", str(c)]) == 0
    assert a.read_text().splitlines()[0] != c.read_text().splitlines()[0]


def test_poincare_command(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["poincare", "--alpha", "2", "--u", "0.075", "--iters", "30", "--out", str(out)]) == 0
    meta, head, rows = read_csv(out)
    assert head == ["iter", "q", "p", "H"] and len(rows) == 30
    anchor = complex(*json.loads(meta.split("params=", 1)[1])["anchor"])
    pts = np.array([[float(r[1]), float(r[2])] for r in rows])
    sd = SectionData(pts, np.array([float(r[3]) for r in rows]), {}, anchor)
    assert rotation_number(sd) < 0


def test_levels_command(tmp_path):
    out = tmp_path / "l.csv"
    assert main(["levels", "--mu", "0.5", "--resolution", "101", "--out", str(out)]) == 0
    _, head, rows = read_csv(out)
    assert head == ["re(v)", "im(v)", "H"] and len(rows) == 101 * 101
    flagged = [complex(float(r[0]), float(r[1])) for r in rows if r[2] == "sing"]
    targets = np.concatenate([np.exp(2j * math.pi * np.arange(3) / 3), -np.exp(2j * math.pi * np.arange(3) / 3)])
    near = {int(np.argmin(np.abs(targets - f))) for f in flagged}
    assert near == set(range(6))
    assert all(np.min(np.abs(targets - f)) < 0.1 for f in flagged)
    assert main(["levels", "--mu", "-1", "--resolution", "11"]) == 2


def test_crawl_command(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["crawl", "--alpha", "1", "--eps", "1e-3", "--out", str(out)]) == 0
    _, head, rows = read_csv(out)
    assert head[:4] == ["drift_re", "drift_im", "predicted_re", "predicted_im"]
    assert float(rows[0][4]) < 0.05 and float(rows[0][5]) < 5


def test_metadata_line_hash_is_stable():
    a = metadata_line("x", {"b": 1, "a": [1.0, 2.0]})
    b = metadata_line("x", {"a": [1.0, 2.0], "b": 1})
    assert a == b and a.startswith("# vortex4 ")


def test_log_levels(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv("VORTEX_LOG", "info")
    cfg = write_config(tmp_path, preset={"family": "O", "alpha": 1.0})
    assert main(["simulate", "--config", cfg, "--t-end", "0.5", "--out", str(tmp_path / "o.csv")]) == 0
    assert "simulate" in capsys.readouterr().err
