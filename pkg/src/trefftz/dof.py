"""Linear functionals (degrees of freedom) acting on basis functions.

Each dof is a small frozen dataclass; :func:`apply` dispatches on its type.
Integral dofs use tensor Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .errors import FamilyMismatchError
from .wavecore import ORIGIN, PolyExpFunction, Point, RadialFunction

DEFAULT_QUADRATURE_POINTS = 16


@dataclass(frozen=True)
class QuadratureRule:
    points_per_axis: int = DEFAULT_QUADRATURE_POINTS

    def __post_init__(self):
        if self.points_per_axis < 1:
            raise ValueError("quadrature needs at least one point per axis")

    def nodes(self, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights mapped onto ``[lo, hi]``."""
        x, w = _leggauss(self.points_per_axis)
        half = 0.5 * (hi - lo)
        return lo + half * (x + 1.0), half * w


@lru_cache(maxsize=None)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@dataclass(frozen=True)
class Nodal:
    point: Point

    @property
    def label(self) -> str:
        p = self.point
        return f"nodal@({p.x:g},{p.y:g})" if p.t == 0 else f"nodal@({p.x:g},{p.y:g},{p.t:g})"


@dataclass(frozen=True)
class MixedDerivative:
    mx: int
    my: int
    mt: int
    point: Point = ORIGIN

    def __post_init__(self):
        if min(self.mx, self.my, self.mt) < 0:
            raise ValueError("derivative orders must be non-negative")

    @property
    def orders(self) -> tuple[int, int, int]:
        return (self.mx, self.my, self.mt)

    @property
    def label(self) -> str:
        return f"mixed:{self.mx},{self.my},{self.mt}"


@dataclass(frozen=True)
class RadialDerivative:
    order: int
    r0: float

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("radial derivative order must be non-negative")
        if not self.r0 > 0:
            raise ValueError("radial dof needs r0 > 0")

    @property
    def label(self) -> str:
        return f"radial:{self.order}@{self.r0:g}"


@dataclass(frozen=True)
class VolumeIntegral:
    """Integral of ``f * test`` over the cube ``[-delta, delta]^3`` in (x, y, t)."""

    test: PolyExpFunction
    delta: float
    rule: QuadratureRule = field(default_factory=QuadratureRule)

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("integration limit delta must be positive")

    @property
    def label(self) -> str:
        return f"volint:{self.delta:g},{self.rule.points_per_axis}"


@dataclass(frozen=True)
class LineIntegral:
    """Integral of ``f * test`` (or ``f * conj(test)``) over ``x in [0, delta]`` at y = t = 0."""

    test: PolyExpFunction
    delta: float
    conjugate_test: bool = False
    rule: QuadratureRule = field(default_factory=QuadratureRule)

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("integration limit delta must be positive")

    @property
    def label(self) -> str:
        return f"lineint:{self.delta:g},{self.rule.points_per_axis}"


DofSpec = Union[Nodal, MixedDerivative, RadialDerivative, VolumeIntegral, LineIntegral]


def _require_polyexp(dof, f):
    if not isinstance(f, PolyExpFunction):
        raise FamilyMismatchError(f"{type(dof).__name__} dof needs a PolyExpFunction, got {type(f).__name__}")


def apply(dof: DofSpec, f: PolyExpFunction | RadialFunction) -> complex:
    """Value of the functional ``dof`` on ``f``."""
    if isinstance(dof, RadialDerivative):
        if not isinstance(f, RadialFunction):
            raise FamilyMismatchError(f"radial dof needs a RadialFunction, got {type(f).__name__}")
        return f.radial_derivative(dof.order).evaluate(dof.r0)
    _require_polyexp(dof, f)
    if isinstance(dof, Nodal):
        return f(dof.point)
    if isinstance(dof, MixedDerivative):
        g = f.differentiate("x", dof.mx).differentiate("y", dof.my).differentiate("t", dof.mt)
        return g(dof.point)
    if isinstance(dof, VolumeIntegral):
        nodes, weights = dof.rule.nodes(-dof.delta, dof.delta)
        X, Y, T = np.meshgrid(nodes, nodes, nodes, indexing="ij")
        W = weights[:, None, None] * weights[None, :, None] * weights[None, None, :]
        return complex(np.sum(W * f.evaluate(X, Y, T) * dof.test.evaluate(X, Y, T)))
    if isinstance(dof, LineIntegral):
        nodes, weights = dof.rule.nodes(0.0, dof.delta)
        test = dof.test.evaluate(nodes, 0.0, 0.0)
        if dof.conjugate_test:
            test = np.conj(test)
        return complex(np.sum(weights * f.evaluate(nodes, 0.0, 0.0) * test))
    raise TypeError(f"unknown dof type {type(dof).__name__}")


def apply_to_plane_wave(dof: DofSpec, kx: float, ky: float, omega: float = 0.0) -> complex:
    """Value of ``dof`` on ``exp(i (kx x + ky y + omega t))``."""
    if isinstance(dof, RadialDerivative):
        raise FamilyMismatchError("radial dofs cannot act on plane waves")
    if isinstance(dof, (Nodal, MixedDerivative)):
        p = dof.point
        value = np.exp(1j * (kx * p.x + ky * p.y + omega * p.t))
        if isinstance(dof, MixedDerivative):
            value *= (1j * kx) ** dof.mx * (1j * ky) ** dof.my * (1j * omega) ** dof.mt
        return complex(value)
    return apply(dof, PolyExpFunction.plane_wave(kx, ky, omega))


def default_delta(k: float) -> float:
    """A quarter wavelength, ``pi / (2 k)``."""
    return math.pi / (2.0 * k)


def volume_galerkin_dofs(tests: Sequence[PolyExpFunction], delta: float,
                         rule: QuadratureRule | None = None) -> list[VolumeIntegral]:
    rule = rule or QuadratureRule()
    return [VolumeIntegral(t, delta, rule) for t in tests]


def line_galerkin_dofs(tests: Sequence[PolyExpFunction], delta: float, conjugate_test: bool = True,
                       rule: QuadratureRule | None = None) -> list[LineIntegral]:
    rule = rule or QuadratureRule()
    return [LineIntegral(t, delta, conjugate_test, rule) for t in tests]


# -- text presets -------------------------------------------------------------

_NODAL_RE = re.compile(r"^nodal@\(\s*([^,()]+)\s*,\s*([^,()]+)\s*(?:,\s*([^,()]+)\s*)?\)$")


def parse_dof(text: str, tests: Sequence[PolyExpFunction] | None = None) -> list[DofSpec]:
    """Parse a dof preset string into one or more dofs.

    ``nodal@(x,y)``, ``mixed:mx,my,mt`` and ``radial:order@r0`` give a single
    dof.  ``volint:delta,q`` and ``lineint:delta,q`` expand into one integral
    dof per function in ``tests``.
    """
    text = text.strip()
    m = _NODAL_RE.match(text)
    if m:
        x, y, t = m.groups()
        return [Nodal(Point(float(x), float(y), float(t) if t else 0.0))]
    head, _, arg = text.partition(":")
    try:
        if head == "mixed":
            mx, my, mt = (int(v) for v in arg.split(","))
            return [MixedDerivative(mx, my, mt)]
        if head == "radial":
            order, r0 = arg.split("@")
            return [RadialDerivative(int(order), float(r0))]
        if head in ("volint", "lineint"):
            delta, q = arg.split(",")
            if not tests:
                raise ValueError(f"{head} dof needs a set of test functions")
            rule = QuadratureRule(int(q))
            if head == "volint":
                return volume_galerkin_dofs(tests, float(delta), rule)
            return line_galerkin_dofs(tests, float(delta), True, rule)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed dof preset {text!r}: {exc}") from None
    raise ValueError(f"unknown dof preset {text!r}")


# -- JSON ---------------------------------------------------------------------

def dof_to_json(dof: DofSpec) -> dict:
    if isinstance(dof, Nodal):
        p = dof.point
        return {"kind": "nodal", "point": [p.x, p.y, p.t]}
    if isinstance(dof, MixedDerivative):
        p = dof.point
        return {"kind": "mixed", "orders": list(dof.orders), "point": [p.x, p.y, p.t]}
    if isinstance(dof, RadialDerivative):
        return {"kind": "radial", "order": dof.order, "r0": dof.r0}
    if isinstance(dof, VolumeIntegral):
        return {"kind": "volint", "delta": dof.delta, "points_per_axis": dof.rule.points_per_axis,
                "test": dof.test.to_json()}
    if isinstance(dof, LineIntegral):
        return {"kind": "lineint", "delta": dof.delta, "points_per_axis": dof.rule.points_per_axis,
                "conjugate_test": dof.conjugate_test, "test": dof.test.to_json()}
    raise TypeError(f"unknown dof type {type(dof).__name__}")


def dof_from_json(data: dict) -> DofSpec:
    kind = data["kind"]
    if kind == "nodal":
        return Nodal(Point(*data["point"]))
    if kind == "mixed":
        return MixedDerivative(*data["orders"], point=Point(*data["point"]))
    if kind == "radial":
        return RadialDerivative(data["order"], data["r0"])
    if kind == "volint":
        return VolumeIntegral(PolyExpFunction.from_json(data["test"]), data["delta"],
                              QuadratureRule(data["points_per_axis"]))
    if kind == "lineint":
        return LineIntegral(PolyExpFunction.from_json(data["test"]), data["delta"],
                            data["conjugate_test"], QuadratureRule(data["points_per_axis"]))
    raise ValueError(f"unknown dof kind {kind!r}")
