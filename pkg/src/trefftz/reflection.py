"""Reflection coefficient of a boundary scheme and angle sweeps.

For incidence angle ``theta`` the outgoing wave has wavevector
``k(-cos theta, sin theta)`` and the reflected wave ``k(cos theta, sin theta)``,
both with the context's angular frequency.  ``R`` is the amplitude of the
reflected wave that the scheme admits alongside a unit outgoing wave.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from .dof import MixedDerivative, Nodal, RadialDerivative, apply_to_plane_wave
from .errors import FamilyMismatchError, SchemeError
from .machine import Scheme
from .wavecore import WaveContext

UNDEFINED_TOL = 1e-13


@dataclass(frozen=True)
class ReflectionSample:
    theta: float
    R: complex
    defined: bool = True

    @property
    def magnitude(self) -> float:
        return abs(self.R) if self.defined else math.nan


@dataclass(frozen=True)
class SweepConfig:
    theta_min: float
    theta_max: float
    steps: int
    ctx: WaveContext

    def __post_init__(self):
        if not self.theta_min < self.theta_max:
            raise ValueError("theta_min must be below theta_max")
        if self.steps < 2:
            raise ValueError("a sweep needs at least two steps")

    @property
    def thetas(self) -> np.ndarray:
        return np.linspace(self.theta_min, self.theta_max, self.steps)


def _scheme_ctx(scheme: Scheme, ctx: WaveContext | None) -> WaveContext:
    ctx = ctx or scheme.ctx
    if ctx is None:
        raise SchemeError("reflection needs a wave context")
    return ctx


def _scheme_sum(scheme: Scheme, kx: float, ky: float, omega: float) -> complex:
    return complex(sum(c * apply_to_plane_wave(d, kx, ky, omega) for c, d in zip(scheme.s, scheme.dofs)))


def reflection(scheme: Scheme, ctx: WaveContext | None = None, theta: float = 0.0) -> ReflectionSample:
    """Reflection coefficient at one incidence angle (radians)."""
    if any(isinstance(d, RadialDerivative) for d in scheme.dofs):
        raise FamilyMismatchError("reflection is defined for planar-boundary schemes only")
    ctx = _scheme_ctx(scheme, ctx)
    k, w = ctx.wavenumber, ctx.omega
    c, s = math.cos(theta), math.sin(theta)
    num = _scheme_sum(scheme, -k * c, k * s, w)
    den = _scheme_sum(scheme, k * c, k * s, w)
    if abs(den) <= UNDEFINED_TOL * np.linalg.norm(scheme.s):
        return ReflectionSample(theta, complex(math.nan, math.nan), defined=False)
    return ReflectionSample(theta, -num / den)


def sweep(scheme: Scheme, cfg: SweepConfig) -> list[ReflectionSample]:
    return [reflection(scheme, cfg.ctx, float(t)) for t in cfg.thetas]


def compare_sweeps(a: Sequence[ReflectionSample], b: Sequence[ReflectionSample]) -> float:
    """Largest gap between ``|R|`` values over samples defined in both sweeps."""
    if len(a) != len(b) or any(x.theta != y.theta for x, y in zip(a, b)):
        raise ValueError("sweeps must share the same angle grid")
    gaps = [abs(x.magnitude - y.magnitude) for x, y in zip(a, b) if x.defined and y.defined]
    return max(gaps, default=0.0)


def reflection_mp(coefficients: Sequence, dofs: Sequence, ctx: WaveContext, theta, dps: int = 50):
    """Reflection coefficient in extended precision.

    Only nodal and mixed-derivative dofs are supported.  ``coefficients`` may
    be mpmath numbers; double-precision coefficients cap the attainable
    accuracy at about 1e-16 relative.
    """
    with mpmath.workdps(dps):
        k = mpmath.mpf(ctx.wavenumber)
        w = mpmath.mpf(ctx.omega)
        th = mpmath.mpf(theta)
        c, s = mpmath.cos(th), mpmath.sin(th)

        def total(kx, ky):
            acc = mpmath.mpc(0)
            for coef, d in zip(coefficients, dofs):
                if not isinstance(d, (Nodal, MixedDerivative)):
                    raise FamilyMismatchError("extended-precision reflection supports point dofs only")
                p = d.point
                v = mpmath.exp(1j * (kx * mpmath.mpf(p.x) + ky * mpmath.mpf(p.y) + w * mpmath.mpf(p.t)))
                if isinstance(d, MixedDerivative):
                    v *= (1j * kx) ** d.mx * (1j * ky) ** d.my * (1j * w) ** d.mt
                acc += mpmath.mpc(coef) * v
            return acc

        return -total(-k * c, k * s) / total(k * c, k * s)


def annihilation_exponents(coefficients: Sequence, dofs: Sequence, ctx: WaveContext,
                           thetas: Sequence[float] = (1e-2, 1e-3), dps: int = 50) -> list[float]:
    """``log|R(theta)| / log(theta)`` at each probe angle, in extended precision."""
    out = []
    for th in thetas:
        with mpmath.workdps(dps):
            r = reflection_mp(coefficients, dofs, ctx, th, dps)
            out.append(float(mpmath.log(abs(r)) / mpmath.log(mpmath.mpf(th))))
    return out
