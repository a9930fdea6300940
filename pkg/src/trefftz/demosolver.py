"""Finite-difference Helmholtz solve on a square with generated absorbing boundary rows.

Interior nodes use the 5-point Laplacian.  Every side node carries a 6-node
side scheme and every corner a 4-node corner scheme, both built for the
boundary ``x = 0`` with the domain at ``x > 0`` and then mapped onto each
side/corner by the reflections below.  Fields are stored as ``u[i, j]`` with
``i`` along x and ``j`` along y.
"""

from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import SolverError
from .machine import CORNER_STENCIL, SIDE_STENCIL, flame_corner_scheme, flame_side_scheme, method2_schemes

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10


class BoundaryKind(enum.Enum):
    EM1 = "em1"
    FLAME5 = "flame5"
    METHOD2 = "method2"


@dataclass(frozen=True)
class SolverConfig:
    L: float
    h: float
    k0: float
    bc: BoundaryKind
    source: tuple[float, float] = (0.0, 0.0)
    amplitude: complex = 1.0
    reference_factor: int = 3

    def __post_init__(self):
        if not (self.L > 0 and self.h > 0 and self.k0 > 0):
            raise ValueError("L, h and k0 must be positive")
        n = 2 * self.L / self.h
        if abs(n - round(n)) > 1e-9 * max(n, 1.0) or round(n) < 4:
            raise ValueError(f"2L/h must be an integer >= 4, got {n!r}")
        kh = self.k0 * self.h
        if kh > math.pi / 5 + 1e-12:
            raise ValueError(f"k0*h = {kh:.4g} exceeds pi/5 (fewer than 10 points per wavelength)")
        if kh > math.pi / 10 + 1e-12:
            warnings.warn(f"only {2 * math.pi / kh:.1f} points per wavelength (20 recommended)",
                          stacklevel=3)
        xs, ys = self.source
        if not (abs(xs) < self.L / 2 and abs(ys) < self.L / 2):
            raise ValueError("source must lie strictly inside the inner quarter of the domain")
        if int(self.reference_factor) != self.reference_factor or self.reference_factor < 2:
            raise ValueError("reference_factor must be an integer >= 2")
        object.__setattr__(self, "bc", BoundaryKind(self.bc))

    @property
    def cells(self) -> int:
        return int(round(2 * self.L / self.h))

    def enlarged(self) -> "SolverConfig":
        return SolverConfig(self.L * self.reference_factor, self.h, self.k0, self.bc,
                            self.source, self.amplitude, self.reference_factor)

    def to_dict(self) -> dict:
        return {"L": self.L, "h": self.h, "k0": self.k0, "bc": self.bc.value,
                "source": list(self.source), "amplitude": [complex(self.amplitude).real,
                                                           complex(self.amplitude).imag],
                "reference_factor": self.reference_factor}


@dataclass(frozen=True)
class FieldGrid:
    x: np.ndarray
    y: np.ndarray
    u: np.ndarray

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    def window(self, half_width: float) -> np.ndarray:
        """Values at nodes with ``|x|, |y| <= half_width``."""
        tol = 1e-9 * self.h
        ix = np.abs(self.x) <= half_width + tol
        iy = np.abs(self.y) <= half_width + tol
        return self.u[np.ix_(ix, iy)]


@dataclass(frozen=True)
class ErrorReport:
    l2_rel: float
    linf_rel: float


# offset maps: scheme offset (a, b), a along the inward normal -> grid offset (di, dj)
SIDE_MAPS: dict[str, Callable[[int, int], tuple[int, int]]] = {
    "left": lambda a, b: (a, b),
    "right": lambda a, b: (-a, b),
    "bottom": lambda a, b: (b, a),
    "top": lambda a, b: (b, -a),
}
CORNER_MAPS: dict[str, Callable[[int, int], tuple[int, int]]] = {
    "bottom-left": lambda a, b: (a, b),
    "bottom-right": lambda a, b: (-a, b),
    "top-left": lambda a, b: (a, -b),
    "top-right": lambda a, b: (-a, -b),
}


def boundary_stencils(bc: BoundaryKind, h: float, k0: float):
    """``(side, corner)`` as lists of ``((a, b), coefficient)`` in scheme coordinates."""
    bc = BoundaryKind(bc)
    if bc is BoundaryKind.EM1:
        # one-sided outgoing condition exp(-i k h) u_b - u_in = 0; corners along the diagonal
        side = [((0, 0), np.exp(-1j * k0 * h)), ((1, 0), -1.0 + 0j)]
        corner = [((0, 0), np.exp(-1j * k0 * h * math.sqrt(2))), ((1, 1), -1.0 + 0j)]
        return side, corner
    if bc is BoundaryKind.FLAME5:
        side_s, corner_s = flame_side_scheme(h, k0), flame_corner_scheme(h, k0)
    else:
        side_s, corner_s = method2_schemes(h, k0)
    return list(zip(SIDE_STENCIL, side_s.s)), list(zip(CORNER_STENCIL, corner_s.s))


def _classify(i: int, j: int, n: int) -> tuple[str, str] | None:
    last = n - 1
    xi = "left" if i == 0 else "right" if i == last else None
    yj = "bottom" if j == 0 else "top" if j == last else None
    if xi and yj:
        return "corner", f"{yj}-{xi}"
    if xi:
        return "side", xi
    if yj:
        return "side", yj
    return None


def assemble_system(cfg: SolverConfig):
    """Sparse matrix, right-hand side and node coordinates for ``cfg``."""
    N = cfg.cells
    n = N + 1
    h, k0 = cfg.h, cfg.k0
    coords = -cfg.L + h * np.arange(n)
    side, corner = boundary_stencils(cfg.bc, h, k0)

    def idx(i, j):
        return i * n + j

    rows, cols, vals = [], [], []
    inv_h2 = 1.0 / (h * h)
    for i in range(n):
        for j in range(n):
            r = idx(i, j)
            kind = _classify(i, j, n)
            if kind is None:
                rows += [r] * 5
                cols += [r, idx(i + 1, j), idx(i - 1, j), idx(i, j + 1), idx(i, j - 1)]
                vals += [k0 * k0 - 4 * inv_h2] + [inv_h2] * 4
                continue
            what, where = kind
            stencil, mapping = (side, SIDE_MAPS[where]) if what == "side" else (corner, CORNER_MAPS[where])
            for (a, b), c in stencil:
                di, dj = mapping(a, b)
                rows.append(r)
                cols.append(idx(i + di, j + dj))
                vals.append(c)
    A = sp.csr_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(n * n, n * n))

    b = np.zeros(n * n, dtype=complex)
    xs, ys = cfg.source
    si = int(round((xs + cfg.L) / h))
    sj = int(round((ys + cfg.L) / h))
    b[idx(si, sj)] = cfg.amplitude * inv_h2
    return A, b, coords


def solve(cfg: SolverConfig) -> FieldGrid:
    A, b, coords = assemble_system(cfg)
    n = len(coords)
    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        return FieldGrid(coords, coords.copy(), np.zeros((n, n), dtype=complex))
    with warnings.catch_warnings():
        warnings.simplefilter("error", spla.MatrixRankWarning)
        try:
            u = spla.spsolve(A.tocsc(), b)
        except (RuntimeError, spla.MatrixRankWarning) as exc:
            raise SolverError(f"{cfg.bc.value} boundary system is singular: {exc}") from exc
    if not np.all(np.isfinite(u)):
        raise SolverError(f"{cfg.bc.value} boundary system is singular (non-finite solution)")
    res = float(np.linalg.norm(A @ u - b) / bnorm)
    if res > RESIDUAL_TOL:
        raise SolverError(f"{cfg.bc.value} solve residual {res:.3e} exceeds {RESIDUAL_TOL:g}")
    logger.debug("solved %s system of size %d, residual %.2e", cfg.bc.value, n * n, res)
    return FieldGrid(coords, coords.copy(), u.reshape(n, n))


def compare_fields(u: FieldGrid, ref: FieldGrid, half_width: float) -> ErrorReport:
    """Relative L2 and max-norm differences on ``[-half_width, half_width]^2``."""
    a = u.window(half_width)
    b = ref.window(half_width)
    if a.shape != b.shape:
        raise ValueError("fields do not share the comparison window")
    diff = a - b
    return ErrorReport(
        l2_rel=float(np.linalg.norm(diff) / np.linalg.norm(b)),
        linf_rel=float(np.max(np.abs(diff)) / np.max(np.abs(b))),
    )


def error_report(u: FieldGrid, cfg: SolverConfig, reference: FieldGrid | None = None) -> ErrorReport:
    """Errors on the inner quarter against an enlarged-domain solve with the same bc."""
    if reference is None:
        reference = solve(cfg.enlarged())
    return compare_fields(u, reference, cfg.L / 2)
