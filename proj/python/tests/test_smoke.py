from fractions import Fraction

import numpy as np
import pytest

import delone

C2 = {"d": 2, "p": [0, 5, 10, 15], "c": [2, 2, 2], "mode": "plain"}
C3 = {"d": 2, "p": [0, 8, 16], "c": [3, 3], "mode": "palette"}


def test_schedule_validation():
    assert all(c["pass"] for c in delone.schedule(C2).validate())
    bad = delone.Schedule(2, [0, 5, 6], [2, 2], False)
    assert any(not c["pass"] and c["name"] == "p_n - p_{n-1} >= 2" for c in bad.validate())
    assert delone.schedule(C3).derive(2) == {"t": 65212, "h": 65212, "alpha": 0}


def test_bk_schedule():
    s = delone.Schedule.bk(2, 6)
    assert s.c[0] == 3
    assert all(c["pass"] for c in s.validate())


def test_base_shades_and_origin():
    pal = delone.palette(C3)
    assert pal.shade(1, 1) == Fraction(1)
    assert pal.shade(1, 2) == Fraction(2)
    assert pal.colour(2, 1, [0, 0]) == 1
    assert pal.colour(2, 3, [160, 0]) == 1


def test_materialize_matches_descent():
    pal = delone.palette(C2)
    grid = pal.materialize(2, 2)
    assert grid.shape == (32, 32)
    for x in range(0, 32, 3):
        for y in range(0, 32, 5):
            assert grid[x, y] == pal.colour(2, 2, [x, y])
    assert Fraction(int(grid.sum()), grid.size) == pal.shade(2, 2)


def test_goodness_and_encoding():
    assert delone.palette(C2).check_goodness(2)["pass"]
    rep = delone.palette(C3).encoding(2)
    assert rep["pass"]
    assert rep["data"]["max_normalized_error"] <= 1.0


def test_psi_and_points():
    f = delone.field(C2)
    assert f.psi([0, 0]) == 1
    assert f.cover_level([-1, -1]) == 2
    assert f.shift(2) == [-32, -32]
    w = f.window([-10, -10], 20)
    assert w[10, 10] == f.psi([0, 0])
    assert set(np.unique(w)) <= {1, 2}
    pts = f.points(["0", "0"], ["1", "1"])
    assert pts == [(0.5, 0.5)]
    n = len(f.points(["0", "0"], ["64", "64"]))
    assert 4096 <= n <= 8192
    dc = f.delone_constants(["-16", "-16"], ["16", "16"])
    assert dc["separation_sq"] == Fraction(1, 4)
    assert dc["covering_radius_sq"] <= Fraction(9 * 2, 16)


def test_repetitivity():
    f = delone.field(C2)
    rep = f.repetitivity(2, "8", pairs=4)
    assert rep["pass"] and rep["data"]["ok"] == 4
    assert f.net_repetitivity("2", pairs=2)["pass"]
    assert f.nesting()["pass"]


def test_errors():
    with pytest.raises(ValueError):
        delone.schedule({"d": 2, "p": [0, 5], "c": [2], "mode": "weird"})
    with pytest.raises(ValueError):
        delone.palette(C2).encoding(2)
    with pytest.raises(IndexError):
        delone.palette(C2).colour(2, 1, [40, 0])
    with pytest.raises(MemoryError):
        delone.palette(C2, cap=0).materialize(2, 1)
