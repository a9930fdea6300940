"""Exact function families for outgoing waves.

Two families are supported:

``PolyExpFunction``
    Finite sums of ``p(x, y, t) * exp(i (kx x + ky y + w t))`` where ``p`` is a
    polynomial with complex coefficients.  Plane waves, their angular
    derivatives and real trigonometric combinations all live here, and
    evaluation, partial differentiation and conjugation stay closed-form.

``RadialFunction``
    Finite sums of ``A * r**p * exp(i k0 r)`` with real (possibly half-integer)
    powers ``p``.  Only radial differentiation and evaluation are needed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import mpmath
import numpy as np

Carrier = tuple[float, float, float]
Monomial = tuple[int, int, int]

# highest angular derivative order supported by theta_derivative_plane_wave
MAX_THETA_ORDER = 12

_AXES = {"x": 0, "y": 1, "t": 2}


class Mode(enum.Enum):
    FREQUENCY = "frequency"
    TIME = "time"


@dataclass(frozen=True)
class WaveContext:
    """Physical setting for a family of waves.

    In frequency-domain mode waves are ``exp(i k0 (...))`` with no time
    dependence.  In time-domain mode the velocity and the carrier angular
    frequency are both 1, so the wavenumber is 1 as well.
    """

    mode: Mode
    k0: float | None = None

    def __post_init__(self):
        if self.mode is Mode.FREQUENCY:
            if self.k0 is None or not (math.isfinite(self.k0) and self.k0 > 0):
                raise ValueError(f"frequency-domain context needs k0 > 0, got {self.k0!r}")

    @classmethod
    def frequency(cls, k0: float) -> "WaveContext":
        return cls(Mode.FREQUENCY, float(k0))

    @classmethod
    def time(cls) -> "WaveContext":
        return cls(Mode.TIME, None)

    @property
    def wavenumber(self) -> float:
        return self.k0 if self.mode is Mode.FREQUENCY else 1.0

    @property
    def omega(self) -> float:
        return 0.0 if self.mode is Mode.FREQUENCY else 1.0

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "k0": self.k0}

    @classmethod
    def from_dict(cls, data: Mapping) -> "WaveContext":
        mode = Mode(data["mode"])
        return cls.frequency(data["k0"]) if mode is Mode.FREQUENCY else cls.time()


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    t: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.t)):
            raise ValueError(f"point coordinates must be finite: {self!r}")


ORIGIN = Point(0.0, 0.0, 0.0)


def _check_coefficient(c: complex) -> complex:
    c = complex(c)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError(f"non-finite coefficient {c!r}")
    return c


class PolyExpFunction:
    """Sum of polynomial times complex-exponential terms.

    Parameters
    ----------
    terms : mapping
        ``{(kx, ky, w): {(a, b, c): coefficient}}`` where ``(a, b, c)`` are
        the exponents of ``x**a * y**b * t**c``.  Zero coefficients and empty
        tables are dropped; carriers that compare equal are merged.

    Instances are immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Carrier, Mapping[Monomial, complex]]):
        merged: dict[Carrier, dict[Monomial, complex]] = {}
        for carrier, table in terms.items():
            key = tuple(float(k) for k in carrier)
            if len(key) != 3 or not all(math.isfinite(k) for k in key):
                raise ValueError(f"bad carrier {carrier!r}")
            dest = merged.setdefault(key, {})
            for mono, coef in table.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != 3 or min(mono) < 0:
                    raise ValueError(f"bad monomial exponent {mono!r}")
                dest[mono] = dest.get(mono, 0j) + _check_coefficient(coef)
        self._terms = {}
        for carrier, table in merged.items():
            table = {m: c for m, c in table.items() if c != 0}
            if table:
                self._terms[carrier] = table

    @classmethod
    def plane_wave(cls, kx: float, ky: float, omega: float = 0.0, amplitude: complex = 1.0):
        """``amplitude * exp(i (kx x + ky y + omega t))``."""
        return cls({(kx, ky, omega): {(0, 0, 0): amplitude}})

    @classmethod
    def zero(cls) -> "PolyExpFunction":
        return cls({})

    @property
    def terms(self) -> dict[Carrier, dict[Monomial, complex]]:
        """A copy of the coefficient tables, keyed by carrier."""
        return {c: dict(t) for c, t in self._terms.items()}

    @property
    def carriers(self) -> list[Carrier]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_time_independent(self) -> bool:
        return all(c[2] == 0 and all(m[2] == 0 for m in t) for c, t in self._terms.items())

    def __iter__(self) -> Iterator[tuple[Carrier, dict[Monomial, complex]]]:
        for carrier, table in self._terms.items():
            yield carrier, dict(table)

    # -- evaluation -------------------------------------------------------

    def evaluate(self, x, y, t=0.0):
        """Evaluate at scalar or array coordinates (numpy broadcasting)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        t = np.asarray(t, dtype=float)
        total = np.zeros(np.broadcast(x, y, t).shape, dtype=complex)
        for (kx, ky, w), table in self._terms.items():
            poly = np.zeros_like(total)
            for (a, b, c), coef in table.items():
                poly = poly + coef * x**a * y**b * t**c
            total = total + poly * np.exp(1j * (kx * x + ky * y + w * t))
        if total.ndim == 0:
            return complex(total)
        return total

    def __call__(self, pt: Point) -> complex:
        return self.evaluate(pt.x, pt.y, pt.t)

    def evaluate_mp(self, x, y, t=0):
        """Scalar evaluation in mpmath at the current working precision."""
        x, y, t = mpmath.mpf(x), mpmath.mpf(y), mpmath.mpf(t)
        total = mpmath.mpc(0)
        for (kx, ky, w), table in self._terms.items():
            poly = mpmath.fsum(mpmath.mpc(c) * x**a * y**b * t**e for (a, b, e), c in table.items())
            total += poly * mpmath.expj(mpmath.mpf(kx) * x + mpmath.mpf(ky) * y + mpmath.mpf(w) * t)
        return total

    # -- calculus ---------------------------------------------------------

    def differentiate(self, axis: str, order: int = 1) -> "PolyExpFunction":
        """Exact partial derivative along ``axis`` ('x', 'y' or 't')."""
        if axis not in _AXES:
            raise ValueError(f"unknown axis {axis!r}")
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        ax = _AXES[axis]
        terms = self._terms
        for _ in range(order):
            new: dict[Carrier, dict[Monomial, complex]] = {}
            for carrier, table in terms.items():
                ik = 1j * carrier[ax]
                out: dict[Monomial, complex] = {}
                for mono, coef in table.items():
                    if ik != 0:
                        out[mono] = out.get(mono, 0j) + ik * coef
                    e = mono[ax]
                    if e > 0:
                        lowered = list(mono)
                        lowered[ax] -= 1
                        lowered = tuple(lowered)
                        out[lowered] = out.get(lowered, 0j) + e * coef
                new[carrier] = out
            terms = PolyExpFunction(new)._terms
        return PolyExpFunction(terms)

    def conj(self) -> "PolyExpFunction":
        """Complex conjugate for real coordinates."""
        return PolyExpFunction(
            {
                (-kx, -ky, -w): {m: c.conjugate() for m, c in table.items()}
                for (kx, ky, w), table in self._terms.items()
            }
        )

    # -- linear structure -------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, PolyExpFunction):
            return NotImplemented
        merged = self.terms
        for carrier, table in other._terms.items():
            dest = merged.setdefault(carrier, {})
            for m, c in table.items():
                dest[m] = dest.get(m, 0j) + c
        return PolyExpFunction(merged)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if not isinstance(other, PolyExpFunction):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, PolyExpFunction):
            return NotImplemented
        scalar = _check_coefficient(scalar)
        return PolyExpFunction(
            {c: {m: scalar * v for m, v in t.items()} for c, t in self._terms.items()}
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PolyExpFunction):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(sorted((c, tuple(sorted(t.items(), key=lambda kv: kv[0])))
                                 for c, t in self._terms.items())))

    def allclose(self, other: "PolyExpFunction", atol: float = 1e-12) -> bool:
        keys = set(self._terms) | set(other._terms)
        for carrier in keys:
            a = self._terms.get(carrier, {})
            b = other._terms.get(carrier, {})
            for m in set(a) | set(b):
                if abs(a.get(m, 0j) - b.get(m, 0j)) > atol:
                    return False
        return True

    def __repr__(self):
        parts = []
        for (kx, ky, w), table in self._terms.items():
            poly = " + ".join(f"({c:g})x^{a}y^{b}t^{e}" for (a, b, e), c in sorted(table.items()))
            parts.append(f"[{poly}]*exp(i({kx:g}x + {ky:g}y + {w:g}t))")
        return "PolyExpFunction(" + (" + ".join(parts) or "0") + ")"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> list:
        return [
            {
                "carrier": list(carrier),
                "terms": [[a, b, c, [v.real, v.imag]] for (a, b, c), v in sorted(table.items())],
            }
            for carrier, table in self._terms.items()
        ]

    @classmethod
    def from_json(cls, data: list) -> "PolyExpFunction":
        return cls(
            {
                tuple(item["carrier"]): {
                    (a, b, c): complex(re, im) for a, b, c, (re, im) in item["terms"]
                }
                for item in data
            }
        )


def evaluate(f: PolyExpFunction, pt: Point) -> complex:
    return f(pt)


def differentiate(f: PolyExpFunction, axis: str, order: int = 1) -> PolyExpFunction:
    return f.differentiate(axis, order)


class RadialFunction:
    """Sum of ``amplitude * r**p * exp(i k0 r)`` terms sharing one ``k0``."""

    __slots__ = ("_terms", "k0")

    def __init__(self, terms, k0: float):
        if not (math.isfinite(k0) and k0 > 0):
            raise ValueError(f"k0 must be positive, got {k0!r}")
        merged: dict[float, complex] = {}
        for amp, p in terms:
            p = float(p)
            merged[p] = merged.get(p, 0j) + _check_coefficient(amp)
        self._terms = {p: a for p, a in merged.items() if a != 0}
        self.k0 = float(k0)

    @property
    def terms(self) -> list[tuple[complex, float]]:
        return [(a, p) for p, a in sorted(self._terms.items())]

    def evaluate(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise ValueError("radial functions need r > 0")
        total = np.zeros(r.shape, dtype=complex)
        for p, a in self._terms.items():
            total = total + a * r**p
        total = total * np.exp(1j * self.k0 * r)
        return complex(total) if total.ndim == 0 else total

    def radial_derivative(self, order: int = 1) -> "RadialFunction":
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        terms = self._terms
        for _ in range(order):
            new: dict[float, complex] = {}
            for p, a in terms.items():
                if p != 0:
                    new[p - 1] = new.get(p - 1, 0j) + a * p
                new[p] = new.get(p, 0j) + 1j * self.k0 * a
            terms = {p: a for p, a in new.items() if a != 0}
        return RadialFunction([(a, p) for p, a in terms.items()], self.k0)

    def __mul__(self, scalar):
        scalar = _check_coefficient(scalar)
        return RadialFunction([(scalar * a, p) for p, a in self._terms.items()], self.k0)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, RadialFunction):
            return NotImplemented
        if other.k0 != self.k0:
            raise ValueError("cannot add radial functions with different k0")
        return RadialFunction(self.terms + other.terms, self.k0)

    def __eq__(self, other):
        if not isinstance(other, RadialFunction):
            return NotImplemented
        return self.k0 == other.k0 and self._terms == other._terms

    def __hash__(self):
        return hash((self.k0, tuple(sorted(self._terms.items()))))

    def __repr__(self):
        body = " + ".join(f"({a:g})r^{p:g}" for a, p in self.terms) or "0"
        return f"RadialFunction([{body}]*exp(i{self.k0:g}r))"


def radial_derivative(f: RadialFunction, order: int) -> RadialFunction:
    return f.radial_derivative(order)


def _theta_derivative_table(alpha: int) -> dict[tuple[int, int], complex]:
    """Polynomial P with d^alpha/dtheta^alpha exp(i phi) |_0 = P(x, y) exp(i phi(0)).

    Here ``phi = -x cos(theta) - y sin(theta)`` with unit wavenumber.  The
    recurrence carries ``cos`` and ``sin`` as formal symbols C and S:

        d/dtheta [P E] = (dP/dtheta + i (x S - y C) P) E,
        dP/dtheta = -S dP/dC + C dP/dS.
    """
    # keys (a, b, c, s) -> coefficient of x^a y^b C^c S^s
    poly: dict[tuple[int, int, int, int], complex] = {(0, 0, 0, 0): 1 + 0j}
    for _ in range(alpha):
        new: dict[tuple[int, int, int, int], complex] = {}

        def add(key, val):
            new[key] = new.get(key, 0j) + val

        for (a, b, c, s), coef in poly.items():
            if c:
                add((a, b, c - 1, s + 1), -c * coef)
            if s:
                add((a, b, c + 1, s - 1), s * coef)
            add((a + 1, b, c, s + 1), 1j * coef)
            add((a, b + 1, c + 1, s), -1j * coef)
        poly = {k: v for k, v in new.items() if v != 0}
    # theta = 0: C = 1, S = 0
    out: dict[tuple[int, int], complex] = {}
    for (a, b, c, s), coef in poly.items():
        if s == 0:
            out[(a, b)] = out.get((a, b), 0j) + coef
    return {k: v for k, v in out.items() if v != 0}


def theta_derivative_plane_wave(alpha: int, ctx: WaveContext) -> PolyExpFunction:
    """Angular derivative of the outgoing plane wave at normal incidence.

    Returns ``d^alpha/dtheta^alpha exp(i k (-x cos(theta) - y sin(theta)) + i w t)``
    at ``theta = 0`` with ``k, w`` taken from ``ctx``.
    """
    if not 0 <= alpha <= MAX_THETA_ORDER:
        raise ValueError(f"theta derivative order must be in [0, {MAX_THETA_ORDER}]")
    k = ctx.wavenumber
    table = _theta_derivative_table(alpha)
    # each spatial power carries one factor of k
    scaled = {(a, b, 0): coef * k ** (a + b) for (a, b), coef in table.items()}
    return PolyExpFunction({(-k, 0.0, ctx.omega): scaled})
