import math

import numpy as np
import pytest

from trefftz import demosolver
from trefftz.basisgen import FAN3_CORNER_ANGLES, FAN5_ANGLES
from trefftz.demosolver import (
    BoundaryKind,
    SolverConfig,
    assemble_system,
    boundary_stencils,
    compare_fields,
    error_report,
    solve,
)
from trefftz.errors import SolverError

# 21 x 21 nodes at ten points per half wavelength
SMALL = dict(L=1.0, h=0.1, k0=math.pi)


def cfg(bc="flame5", **kw):
    return SolverConfig(**{**SMALL, **kw}, bc=BoundaryKind(bc))


def grid_index(n):
    return lambda i, j: i * n + j


def test_zero_source_gives_zero_field():
    field = solve(cfg(amplitude=0.0))
    assert not np.any(field.u)


@pytest.mark.parametrize("bc", ["em1", "flame5", "method2"])
def test_solve_is_deterministic(bc):
    a, b = solve(cfg(bc)), solve(cfg(bc))
    assert np.array_equal(a.u, b.u)


def test_field_dimensions():
    c = cfg()
    field = solve(c)
    assert field.u.shape == (c.cells + 1, c.cells + 1)
    assert field.h == pytest.approx(c.h)
    assert field.x[0] == pytest.approx(-c.L) and field.x[-1] == pytest.approx(c.L)


def test_compared_with_itself():
    field = solve(cfg())
    rep = compare_fields(field, field, 0.5)
    assert rep.l2_rel == 0 and rep.linf_rel == 0


@pytest.mark.parametrize("bc", ["em1", "flame5", "method2"])
def test_boundary_rows_follow_orientation_maps(bc):
    c = cfg(bc)
    A, _, _ = assemble_system(c)
    A = A.tolil()
    n = c.cells + 1
    idx = grid_index(n)
    side, corner = boundary_stencils(c.bc, c.h, c.k0)
    mid, last = n // 2, n - 1
    # hand-written node offsets: normal component a points into the domain
    sides = {
        "left": ((0, mid), lambda a, b: (a, b)),
        "right": ((last, mid), lambda a, b: (-a, b)),
        "bottom": ((mid, 0), lambda a, b: (b, a)),
        "top": ((mid, last), lambda a, b: (b, -a)),
    }
    corners = {
        (0, 0): lambda a, b: (a, b),
        (last, 0): lambda a, b: (-a, b),
        (0, last): lambda a, b: (a, -b),
        (last, last): lambda a, b: (-a, -b),
    }
    for (i, j), rot in sides.values():
        row = A[idx(i, j)]
        assert row.nnz == len(side)
        for (a, b), coef in side:
            di, dj = rot(a, b)
            assert row[0, idx(i + di, j + dj)] == coef
    for (i, j), rot in corners.items():
        row = A[idx(i, j)]
        assert row.nnz == len(corner)
        for (a, b), coef in corner:
            di, dj = rot(a, b)
            assert row[0, idx(i + di, j + dj)] == coef


def test_interior_rows_are_five_point():
    c = cfg()
    A, b, _ = assemble_system(c)
    n = c.cells + 1
    r = grid_index(n)(5, 7)
    row = A.getrow(r).toarray().ravel()
    assert row[r] == pytest.approx(c.k0**2 - 4 / c.h**2)
    assert np.count_nonzero(row) == 5
    src = grid_index(n)(n // 2, n // 2)
    assert b[src] == pytest.approx(1 / c.h**2) and np.count_nonzero(b) == 1


@pytest.mark.parametrize("bc", ["em1", "flame5", "method2"])
def test_mirror_symmetry(bc):
    a = solve(cfg(bc, source=(0.2, -0.1)))
    b = solve(cfg(bc, source=(-0.2, -0.1)))
    assert np.linalg.norm(a.u - b.u[::-1, :]) <= 1e-10 * np.linalg.norm(a.u)


def test_flame_rows_annihilate_outgoing_fan_waves():
    c = cfg("flame5")
    A, _, xs = assemble_system(c)
    n = c.cells + 1
    idx = grid_index(n)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    k = c.k0
    mid, last = n // 2, n - 1
    # outgoing direction at each side, written as a phase in (x, y)
    sides = {
        (0, mid): lambda ca, sa: -X * ca + Y * sa,
        (last, mid): lambda ca, sa: X * ca + Y * sa,
        (mid, 0): lambda ca, sa: X * sa - Y * ca,
        (mid, last): lambda ca, sa: X * sa + Y * ca,
    }
    for (i, j), phase in sides.items():
        for a in FAN5_ANGLES:
            w = np.exp(1j * k * phase(math.cos(a), math.sin(a))).ravel()
            assert abs(A.getrow(idx(i, j)) @ w)[0] <= 1e-10
    corners = {
        (0, 0): (-1, -1), (last, 0): (1, -1), (0, last): (-1, 1), (last, last): (1, 1),
    }
    for (i, j), (sx, sy) in corners.items():
        for a in FAN3_CORNER_ANGLES:
            w = np.exp(1j * k * (sx * X * math.cos(a) + sy * Y * math.sin(a))).ravel()
            assert abs(A.getrow(idx(i, j)) @ w)[0] <= 1e-10


def test_em1_rows_annihilate_normal_wave():
    c = cfg("em1")
    A, _, xs = assemble_system(c)
    n = c.cells + 1
    X, _ = np.meshgrid(xs, xs, indexing="ij")
    w = np.exp(-1j * c.k0 * X).ravel()
    assert abs(A.getrow(grid_index(n)(0, n // 2)) @ w)[0] <= 1e-12


def test_reference_shares_grid():
    c = cfg("method2")
    big = c.enlarged()
    assert big.L == pytest.approx(3 * c.L) and big.h == c.h and big.bc is c.bc
    rep = error_report(solve(c), c)
    assert 0 <= rep.l2_rel < 1 and 0 <= rep.linf_rel < 1


def test_singular_system_reports_bc(monkeypatch):
    original = demosolver.boundary_stencils

    def zero_side_rows(bc, h, k0):
        side, corner = original(bc, h, k0)
        return [(o, 0j) for o, _ in side], corner

    monkeypatch.setattr(demosolver, "boundary_stencils", zero_side_rows)
    with pytest.raises(SolverError, match="flame5"):
        solve(cfg("flame5"))


def test_residual_check(monkeypatch):
    monkeypatch.setattr(demosolver.spla, "spsolve", lambda A, b: np.ones_like(b))
    with pytest.raises(SolverError, match="residual"):
        solve(cfg("em1"))


@pytest.mark.parametrize(
    "kw",
    [
        dict(h=0.3),  # 2L/h not an integer
        dict(k0=7.0),  # k0 h beyond pi/5
        dict(source=(0.5, 0.0)),  # on the inner-quarter edge
        dict(reference_factor=1),
        dict(L=-1.0),
    ],
)
def test_config_errors(kw):
    with pytest.raises(ValueError):
        cfg(**kw)


def test_coarse_grid_warns():
    with pytest.warns(UserWarning, match="points per wavelength"):
        cfg(k0=5.0)


def test_config_round_trip():
    d = cfg("method2", source=(0.1, 0.2), amplitude=2 - 1j).to_dict()
    assert d["bc"] == "method2" and d["amplitude"] == [2.0, -1.0] and d["source"] == [0.1, 0.2]
