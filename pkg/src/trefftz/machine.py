"""Assemble dof-on-basis matrices and extract boundary schemes from their nullspace.

A scheme ``s`` makes ``sum_b s_b l_b(u) = 0`` exact for every member of a
local basis.  With ``M[a, b] = l_b(psi_a)`` that means ``M @ s = 0``, so ``s``
is taken as the right-singular vector of ``M`` with the smallest singular value.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import mpmath
import numpy as np

from . import dof as dofs_mod
from .basisgen import (
    FAN3_CORNER_ANGLES,
    FAN5_ANGLES,
    BasisSet,
    asymptotic_radial_basis,
    plane_wave_fan,
    theta_derivative_basis,
    trig_theta_basis,
)
from .dof import DofSpec, MixedDerivative, Nodal, RadialDerivative, apply
from .errors import SchemeError
from .wavecore import Point, WaveContext, theta_derivative_plane_wave

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10

# stencil offsets in units of h; x is the inward normal, the boundary node first
SIDE_STENCIL = ((0, 0), (1, 0), (0, -1), (1, -1), (0, 1), (1, 1))
CORNER_STENCIL = ((0, 0), (1, 0), (0, 1), (1, 1))

# mixed-derivative dofs reproducing the n=3 and n=5 angular-derivative matrices
EM_N3_DOFS = ((0, 0, 2), (0, 2, 0), (1, 0, 1))
EM_N5_DOFS = ((0, 0, 3), (0, 2, 1), (1, 0, 2), (1, 2, 0))


@dataclass(frozen=True)
class TrefftzMatrix:
    """Matrix of dofs (columns) applied to basis functions (rows)."""

    entries: np.ndarray
    basis_label: str
    dof_labels: tuple[str, ...]

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


@dataclass(frozen=True)
class Scheme:
    """Boundary-scheme coefficients together with their provenance.

    ``residual`` is ``|M s| / (|M|_2 |s|)``; ``null_dim`` counts singular
    values at or below ``tol * sigma_max`` (including the ``m - n`` implicit
    zeros of a wide matrix).
    """

    s: np.ndarray
    dofs: tuple
    residual: float
    null_dim: int
    exact: bool
    pivot: int | None = None
    basis_label: str = ""
    ctx: WaveContext | None = None
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        s = np.array(self.s, dtype=complex)
        if s.ndim != 1 or len(s) != len(self.dofs):
            raise ValueError("one coefficient per dof is required")
        if not np.any(s != 0):
            raise ValueError("scheme coefficients must not all vanish")
        s.flags.writeable = False
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "dofs", tuple(self.dofs))

    def __len__(self):
        return len(self.s)


def assemble(basis: BasisSet | Sequence, dofs: Sequence[DofSpec]) -> TrefftzMatrix:
    """Entries ``apply(dofs[b], basis[a])``."""
    funcs = list(basis)
    entries = np.array([[apply(d, f) for d in dofs] for f in funcs], dtype=complex)
    label = basis.label if isinstance(basis, BasisSet) else "custom"
    return TrefftzMatrix(entries.reshape(len(funcs), len(dofs)), label,
                         tuple(d.label for d in dofs))


def _relative_residual(entries: np.ndarray, s: np.ndarray) -> float:
    norm = np.linalg.norm(entries, 2)
    return float(np.linalg.norm(entries @ s) / (norm * np.linalg.norm(s)))


def nullspace_scheme(M: TrefftzMatrix, tol: float = DEFAULT_TOL, dofs: Sequence[DofSpec] | None = None,
                     ctx: WaveContext | None = None) -> Scheme:
    """Scheme from the smallest right-singular vector of ``M``.

    If the numerical nullspace is empty the least-annihilating vector is
    returned with ``exact=False``; if it has more than one dimension the
    result is one arbitrary member and a warning is attached.
    """
    A = M.entries
    n, m = A.shape
    if m < 2:
        raise SchemeError("a scheme needs at least two degrees of freedom")
    if not np.any(A != 0):
        raise SchemeError("all-zero matrix has no meaningful scheme")
    _, sigma, vh = np.linalg.svd(A, full_matrices=True)
    sigma_full = np.zeros(m)
    sigma_full[: len(sigma)] = sigma
    null_dim = int(np.count_nonzero(sigma_full <= tol * sigma[0]))
    s = vh[-1].conj()
    if null_dim >= 1:
        # row scaling leaves the nullspace alone; equilibrating first makes the
        # computed vector insensitive to how the basis functions are normalized
        norms = np.linalg.norm(A, axis=1)
        rows = A[norms > 0] / norms[norms > 0, None]
        s = np.linalg.svd(rows, full_matrices=True)[2][-1].conj()
    warnings: list[str] = []
    if null_dim > 1:
        msg = f"degenerate nullspace of dimension {null_dim} for {M.basis_label}; scheme is not unique"
        logger.warning(msg)
        warnings.append(msg)
    elif null_dim == 0:
        msg = f"no exact nullspace for {M.basis_label}; smallest singular value {sigma_full[-1]:.3e}"
        logger.info(msg)
        warnings.append(msg)
    if dofs is None:
        dofs = tuple(_LabelOnlyDof(lbl) for lbl in M.dof_labels)
    return Scheme(
        s=s,
        dofs=tuple(dofs),
        residual=_relative_residual(A, s),
        null_dim=null_dim,
        exact=null_dim >= 1,
        basis_label=M.basis_label,
        ctx=ctx,
        warnings=tuple(warnings),
    )


@dataclass(frozen=True)
class _LabelOnlyDof:
    """Placeholder when a scheme is built from a bare matrix."""

    label: str


def normalize(scheme: Scheme, pivot: int | None = None) -> Scheme:
    """Rescale so that ``s[pivot] == 1`` (default pivot: largest |s|)."""
    s = scheme.s
    if pivot is None:
        pivot = int(np.argmax(np.abs(s)))
    if not 0 <= pivot < len(s):
        raise SchemeError(f"pivot {pivot} out of range for {len(s)} coefficients")
    if abs(s[pivot]) <= 1e-14 * np.max(np.abs(s)):
        raise SchemeError(f"pivot coefficient s[{pivot}] is numerically zero")
    scaled = s / s[pivot]
    scaled[pivot] = 1.0
    return replace(scheme, s=scaled, pivot=pivot)


def refine_mp(scheme: Scheme, basis: BasisSet, dps: int = 50) -> list:
    """Re-solve an exact scheme in extended precision.

    With the pivot coefficient fixed at 1, the remaining coefficients solve
    the (consistent) system ``M[:, rest] s_rest = -M[:, pivot]`` in mpmath
    through its normal equations.
    Supports nodal and mixed-derivative dofs on PolyExp bases with a
    one-dimensional nullspace.
    """
    if not scheme.exact or scheme.null_dim != 1 or scheme.pivot is None:
        raise SchemeError("refinement needs a normalized scheme with a one-dimensional nullspace")
    with mpmath.workdps(dps):
        rows = []
        for f in basis:
            row = []
            for d in scheme.dofs:
                if isinstance(d, MixedDerivative):
                    g = f.differentiate("x", d.mx).differentiate("y", d.my).differentiate("t", d.mt)
                elif isinstance(d, Nodal):
                    g = f
                else:
                    raise SchemeError(f"cannot refine {type(d).__name__} dofs")
                row.append(g.evaluate_mp(d.point.x, d.point.y, d.point.t))
            rows.append(row)
        p = scheme.pivot
        rest = [j for j in range(len(scheme.s)) if j != p]
        A = mpmath.matrix([[r[j] for j in rest] for r in rows])
        b = mpmath.matrix([-r[p] for r in rows])
        # drop identically zero rows; they carry no constraint
        keep = [i for i in range(A.rows) if any(A[i, j] != 0 for j in range(A.cols)) or b[i] != 0]
        A = mpmath.matrix([[A[i, j] for j in range(A.cols)] for i in keep])
        b = mpmath.matrix([b[i] for i in keep])
        AH = A.transpose_conj()
        x = mpmath.lu_solve(AH * A, AH * b)
        out = [mpmath.mpc(0)] * len(scheme.s)
        out[p] = mpmath.mpc(1)
        for j, v in zip(rest, x):
            out[j] = v
        return out


def scheme_apply(scheme: Scheme, u) -> complex:
    """``sum_b s_b l_b(u)``."""
    return complex(sum(c * apply(d, u) for c, d in zip(scheme.s, scheme.dofs)))


def generate(basis: BasisSet, dofs: Sequence[DofSpec], pivot: int | None = None,
             tol: float = DEFAULT_TOL) -> Scheme:
    """Assemble, take the nullspace and normalize in one call."""
    M = assemble(basis, dofs)
    return normalize(nullspace_scheme(M, tol, dofs=dofs, ctx=basis.ctx), pivot)


# -- named constructions ------------------------------------------------------

def _check_k0h(h: float, k0: float):
    kh = k0 * h
    if not (h > 0 and k0 > 0 and 0 < kh < math.pi):
        raise ValueError(f"k0*h must lie in (0, pi), got {kh!r}")


def stencil_dofs(offsets, h: float) -> list[Nodal]:
    return [Nodal(Point(a * h, b * h)) for a, b in offsets]


def flame_side_scheme(h: float, k0: float, tol: float = DEFAULT_TOL) -> Scheme:
    """Six-node side scheme annihilating five plane waves at 0, +-30, +-60 degrees."""
    _check_k0h(h, k0)
    basis = plane_wave_fan(FAN5_ANGLES, WaveContext.frequency(k0), label="fan5")
    return generate(basis, stencil_dofs(SIDE_STENCIL, h), pivot=3, tol=tol)


def flame_corner_scheme(h: float, k0: float, tol: float = DEFAULT_TOL) -> Scheme:
    """Four-node corner scheme annihilating plane waves at 0, 30 and 60 degrees."""
    _check_k0h(h, k0)
    basis = plane_wave_fan(FAN3_CORNER_ANGLES, WaveContext.frequency(k0), label="fan3-corner")
    return generate(basis, stencil_dofs(CORNER_STENCIL, h), pivot=3, tol=tol)


def method2_schemes(h: float, k0: float, tol: float = DEFAULT_TOL) -> tuple[Scheme, Scheme]:
    """Side and corner schemes from the angular-derivative basis (5 and 3 members)."""
    _check_k0h(h, k0)
    ctx = WaveContext.frequency(k0)
    side = generate(theta_derivative_basis(5, ctx), stencil_dofs(SIDE_STENCIL, h), pivot=3, tol=tol)
    corner = generate(theta_derivative_basis(3, ctx), stencil_dofs(CORNER_STENCIL, h), pivot=3, tol=tol)
    return side, corner


def em_matrix_scheme(n: int, tol: float = DEFAULT_TOL) -> Scheme:
    """Time-domain scheme from ``n`` angular derivatives (3 or 5) and mixed-derivative dofs."""
    orders = {3: EM_N3_DOFS, 5: EM_N5_DOFS}.get(n)
    if orders is None:
        raise SchemeError("mixed-derivative presets exist for n = 3 and n = 5 only")
    basis = theta_derivative_basis(n, WaveContext.time())
    return generate(basis, [MixedDerivative(*o) for o in orders], pivot=0, tol=tol)


def bt2_scheme(k0: float, r0: float, tol: float = DEFAULT_TOL) -> Scheme:
    """Radial scheme from two far-field terms and radial derivatives of order 0..2."""
    if not r0 > 0:
        raise SchemeError("radius must be positive")
    basis = asymptotic_radial_basis(2, k0)
    return generate(basis, [RadialDerivative(o, r0) for o in range(3)], pivot=2, tol=tol)


def trig_galerkin_scheme(n: int = 12, m: int | None = None, delta: float = math.pi / 2,
                         points_per_axis: int = dofs_mod.DEFAULT_QUADRATURE_POINTS,
                         pivot: int | None = None, tol: float = DEFAULT_TOL) -> Scheme:
    """Trigonometric basis of size ``n`` tested against the first ``m`` trig functions.

    Tests are integrals over ``[-delta, delta]^3``; ``m`` defaults to ``n + 1``
    so that a one-dimensional nullspace can exist.
    """
    m = n + 1 if m is None else m
    basis = trig_theta_basis(n)
    tests = trig_theta_basis(m)
    dofs = dofs_mod.volume_galerkin_dofs(list(tests), delta, dofs_mod.QuadratureRule(points_per_axis))
    return generate(basis, dofs, pivot=pivot, tol=tol)


def method3_scheme(k0: float, delta: float | None = None, n: int = 5,
                   points_per_axis: int = dofs_mod.DEFAULT_QUADRATURE_POINTS,
                   tol: float = DEFAULT_TOL) -> Scheme:
    """Line-integral scheme on the angular-derivative basis.

    Odd members vanish on the line ``y = 0``, so the tests are the even
    angular derivatives ``0, 2, ..., 2 * (n // 2 + 1)``; there is one more
    test than there are nonzero basis rows.
    """
    ctx = WaveContext.frequency(k0)
    delta = dofs_mod.default_delta(k0) if delta is None else delta
    basis = theta_derivative_basis(n, ctx)
    tests = [theta_derivative_plane_wave(a, ctx) for a in range(0, 2 * (n // 2 + 1) + 1, 2)]
    dofs = dofs_mod.line_galerkin_dofs(tests, delta, True, dofs_mod.QuadratureRule(points_per_axis))
    return generate(basis, dofs, pivot=0, tol=tol)
