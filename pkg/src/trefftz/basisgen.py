"""Ordered basis sets of outgoing waves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .wavecore import (
    MAX_THETA_ORDER,
    Mode,
    PolyExpFunction,
    RadialFunction,
    WaveContext,
    theta_derivative_plane_wave,
)

BasisFunction = Union[PolyExpFunction, RadialFunction]

FAN5_ANGLES = tuple(a * math.pi / 6 for a in (-2, -1, 0, 1, 2))
FAN3_CORNER_ANGLES = tuple(a * math.pi / 6 for a in (0, 1, 2))


@dataclass(frozen=True)
class BasisSet:
    functions: tuple
    label: str
    ctx: WaveContext

    def __post_init__(self):
        if not self.functions:
            raise ValueError("basis set must be nonempty")
        kinds = {type(f) for f in self.functions}
        if len(kinds) != 1 or not kinds <= {PolyExpFunction, RadialFunction}:
            raise TypeError(f"basis functions must share one family, got {kinds}")
        object.__setattr__(self, "functions", tuple(self.functions))

    @property
    def family(self) -> type:
        return type(self.functions[0])

    def __len__(self):
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    def __getitem__(self, i):
        return self.functions[i]

    def scaled(self, factors: Sequence[complex]) -> "BasisSet":
        """Copy with each member multiplied by the matching factor."""
        return BasisSet(
            tuple(c * f for c, f in zip(factors, self.functions, strict=True)),
            self.label + "*scaled",
            self.ctx,
        )


def plane_wave_fan(angles: Sequence[float], ctx: WaveContext, label: str | None = None) -> BasisSet:
    """Plane waves ``exp(i k0 (-x cos(a) - y sin(a)))`` for each angle ``a``."""
    if ctx.mode is not Mode.FREQUENCY:
        raise ValueError("plane-wave fans are defined in the frequency domain only")
    angles = [float(a) for a in angles]
    if len(set(angles)) != len(angles):
        raise ValueError("fan angles must be distinct")
    k = ctx.k0
    funcs = tuple(
        PolyExpFunction.plane_wave(-k * math.cos(a), -k * math.sin(a)) for a in angles
    )
    if label is None:
        label = "fan[" + ",".join(f"{math.degrees(a):g}" for a in angles) + "]"
    return BasisSet(funcs, label, ctx)


def theta_derivative_basis(n: int, ctx: WaveContext) -> BasisSet:
    """The first ``n`` angular derivatives of the normally incident outgoing wave."""
    if not 1 <= n <= 9:
        raise ValueError("theta-derivative basis size must be in [1, 9]")
    funcs = tuple(theta_derivative_plane_wave(a, ctx) for a in range(n))
    return BasisSet(funcs, f"theta-deriv:{n}", ctx)


def trig_theta_basis(n: int) -> BasisSet:
    """Real trigonometric outgoing waves in the time domain.

    Member ``2a`` is the ``a``-th angular derivative of
    ``cos(-x cos(theta) - y sin(theta) + t)`` at ``theta = 0``; member ``2a - 1``
    is the ``a``-th angular derivative of the matching sine.  Each function is
    stored as a pair of conjugate carriers.
    """
    if not 1 <= n <= 13:
        raise ValueError("trig basis size must be in [1, 13]")
    ctx = WaveContext.time()
    funcs = []
    for j in range(n):
        alpha = (j + 1) // 2
        assert alpha <= MAX_THETA_ORDER
        w = theta_derivative_plane_wave(alpha, ctx)
        if j % 2 == 0:
            funcs.append(0.5 * (w + w.conj()))
        else:
            funcs.append(-0.5j * (w - w.conj()))
    return BasisSet(tuple(funcs), f"trig:{n}", ctx)


def asymptotic_radial_basis(L: int, k0: float) -> BasisSet:
    """Leading terms ``(k0 r)^(-1/2) r^(-l) exp(i k0 r)``, ``l = 0..L-1``.

    The angular factors of the far-field expansion are set to 1; radial
    degrees of freedom cannot see them.
    """
    if not 1 <= L <= 6:
        raise ValueError("radial basis size must be in [1, 6]")
    amp = k0**-0.5
    funcs = tuple(RadialFunction([(amp, -0.5 - l)], k0) for l in range(L))
    return BasisSet(funcs, f"radial:{L}", WaveContext.frequency(k0))


def basis_from_preset(name: str, k0: float | None = None) -> BasisSet:
    """Resolve ``fan5``, ``fan3-corner``, ``theta-deriv:<n>``, ``trig:<n>`` or ``radial:<L>``.

    ``theta-deriv`` uses the frequency domain when ``k0`` is given and the
    time domain otherwise.
    """
    head, _, arg = name.partition(":")
    if head in ("fan5", "fan3-corner"):
        if k0 is None:
            raise ValueError(f"basis {name!r} needs k0")
        angles = FAN5_ANGLES if head == "fan5" else FAN3_CORNER_ANGLES
        return plane_wave_fan(angles, WaveContext.frequency(k0), label=head)
    try:
        count = int(arg)
    except ValueError:
        raise ValueError(f"unknown basis preset {name!r}") from None
    if head == "theta-deriv":
        ctx = WaveContext.time() if k0 is None else WaveContext.frequency(k0)
        return theta_derivative_basis(count, ctx)
    if head == "trig":
        return trig_theta_basis(count)
    if head == "radial":
        if k0 is None:
            raise ValueError("radial basis needs k0")
        return asymptotic_radial_basis(count, k0)
    raise ValueError(f"unknown basis preset {name!r}")
