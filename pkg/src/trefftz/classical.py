"""Closed-form boundary conditions used as references for generated schemes.

Convention: boundary at x = 0, domain x > 0, unit wave speed, and outgoing
waves carry ``exp(i(-x cos(theta) + y sin(theta) + t))``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .dof import MixedDerivative
from .errors import SchemeError
from .machine import Scheme
from .wavecore import WaveContext


@dataclass(frozen=True)
class DifferentialOperator:
    """Linear combination of mixed partials ``d_x^mx d_y^my d_t^mt``."""

    terms: tuple[tuple[int, int, int, complex], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("operator needs at least one term")
        for mx, my, mt, c in self.terms:
            if min(mx, my, mt) < 0 or not cmath.isfinite(complex(c)):
                raise ValueError(f"bad operator term {(mx, my, mt, c)!r}")

    @property
    def orders(self) -> list[tuple[int, int, int]]:
        return [(mx, my, mt) for mx, my, mt, _ in self.terms]

    @property
    def coefficients(self) -> list[complex]:
        return [complex(c) for *_, c in self.terms]

    def symbol(self, kx: complex, ky: complex, omega: complex = 1.0) -> complex:
        """Action on ``exp(i(kx x + ky y + omega t))`` divided by the wave."""
        return sum(c * (1j * kx) ** mx * (1j * ky) ** my * (1j * omega) ** mt
                   for mx, my, mt, c in self.terms)

    def to_scheme(self) -> Scheme:
        """The operator as a mixed-derivative scheme anchored at the origin."""
        return Scheme(
            s=self.coefficients,
            dofs=tuple(MixedDerivative(*o) for o in self.orders),
            residual=0.0,
            null_dim=1,
            exact=True,
            basis_label="closed-form",
            ctx=WaveContext.time(),
        )


_EM = {
    1: ((0, 0, 1, 1), (1, 0, 0, 1)),
    2: ((0, 0, 2, 1), (0, 2, 0, -0.5), (1, 0, 1, 1)),
    3: ((0, 0, 3, 1), (0, 2, 1, -0.75), (1, 0, 2, 1), (1, 2, 0, -0.25)),
}


def em_operator(order: int) -> DifferentialOperator:
    if order not in _EM:
        raise ValueError(f"Engquist-Majda order must be 1, 2 or 3, got {order!r}")
    return DifferentialOperator(tuple((mx, my, mt, complex(c)) for mx, my, mt, c in _EM[order]))


def em_reflection(order: int, theta: float) -> complex:
    """``-((1 - cos theta) / (1 + cos theta)) ** order``."""
    if order not in _EM:
        raise ValueError(f"Engquist-Majda order must be 1, 2 or 3, got {order!r}")
    if not abs(theta) < math.pi / 2:
        raise ValueError("incidence angle must satisfy |theta| < pi/2")
    c = math.cos(theta)
    return complex(-(((1 - c) / (1 + c)) ** order))


def bt2_coefficients(k0: float, r: float) -> tuple[complex, complex, complex]:
    """Coefficients of ``(u, du/dr, d2u/dr2)`` in the second-order Bayliss-Turkel condition."""
    if not r > 0:
        raise ValueError("radius must be positive")
    return (3 / (4 * r * r) - k0 * k0 - 3j * k0 / r, 3 / r - 2j * k0, 1 + 0j)


def method2_closed_form(h: float, k0: float) -> tuple[tuple[complex, ...], tuple[complex, ...]]:
    """Explicit side (6) and corner (4) coefficients of the angular-derivative schemes."""
    kh = k0 * h
    if not 0 < kh < math.pi:
        raise ValueError(f"k0*h must lie in (0, pi), got {kh!r}")
    den = kh * kh + 3j * kh + 3
    if abs(den) < 1e-14:
        raise SchemeError("Method 2 closed form has a vanishing denominator")
    ph = cmath.exp(-1j * kh)
    s1 = -2 * ph * (5 * kh * kh + 3j * kh - 3) / den
    s2 = -2 * (-5 * kh * kh + 3j * kh + 3) / den
    s3 = -ph * (kh * kh - 3j * kh + 3) / den
    side = (s1, s2, s3, 1 + 0j, s3, 1 + 0j)
    corner = (ph, -1 + 0j, -ph, 1 + 0j)
    return side, corner
