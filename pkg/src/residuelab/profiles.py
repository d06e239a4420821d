"""Compactly supported radial profiles, piecewise polynomial in t = |x|^2.

The exact Mellin machinery needs knots contained in {0, 1}: a knot at any
other point would put factors like 4^s into the transform, which no rational
function of the parameters can represent.  Profiles with other rational
knots are still valid data for the floating-point paths (quadrature, tube
integrals); the exact evaluator rejects them with ExactnessError.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple


class ExactnessError(ValueError):
    """Profile not in the exactly integrable class (knots must be 0 and 1)."""


def _fr(x) -> Fraction:
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {x!r}")


@dataclass(frozen=True)
class RadialProfile:
    """rho(t) on [knots[0], knots[-1]], one polynomial piece per knot interval, zero outside."""

    knots: Tuple[Fraction, ...]
    pieces: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        knots = tuple(_fr(k) for k in self.knots)
        pieces = tuple(tuple(_fr(c) for c in p) for p in self.pieces)
        if knots:
            if len(pieces) != len(knots) - 1:
                raise ValueError("need one polynomial piece per knot interval")
            if any(b <= a for a, b in zip(knots, knots[1:])):
                raise ValueError("knots must be strictly increasing")
            if knots[0] < 0:
                raise ValueError("knots must be nonnegative")
        elif pieces:
            raise ValueError("pieces without knots")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "pieces", pieces)

    @staticmethod
    def zero() -> "RadialProfile":
        return RadialProfile((), ())

    @staticmethod
    def on_unit(coeffs: Sequence) -> "RadialProfile":
        """Polynomial with the given coefficients (constant first) on [0, 1]."""
        cs = tuple(_fr(c) for c in coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        if not cs:
            return RadialProfile.zero()
        return RadialProfile((Fraction(0), Fraction(1)), (cs,))

    @staticmethod
    def bump(degree: int = 2) -> "RadialProfile":
        """(1 - t)^degree on [0, 1]; value 1 at the origin."""
        coeffs = [Fraction(0)] * (degree + 1)
        sign = 1
        from math import comb

        for k in range(degree + 1):
            coeffs[k] = Fraction((-1) ** k * comb(degree, k))
        return RadialProfile.on_unit(coeffs)

    def is_zero(self) -> bool:
        return not self.pieces or all(not any(p) for p in self.pieces)

    def support_end(self) -> Fraction:
        return self.knots[-1] if self.knots else Fraction(0)

    def value(self, t):
        """Evaluate at an exact rational or a float."""
        if not self.knots:
            return 0 * t
        if t < self.knots[0] or t > self.knots[-1]:
            return 0 * t
        idx = len(self.knots) - 2
        for j in range(len(self.knots) - 1):
            if t < self.knots[j + 1]:
                idx = j
                break
        acc = 0 * t
        for c in reversed(self.pieces[idx]):
            acc = acc * t + (Fraction(c) if isinstance(t, Fraction) else float(c))
        return acc

    def value_at_zero(self) -> Fraction:
        if not self.knots or self.knots[0] != 0 or not self.pieces[0]:
            return Fraction(0)
        return self.pieces[0][0]

    def is_exact_class(self) -> bool:
        if self.is_zero():
            return True
        return self.knots == (Fraction(0), Fraction(1))

    def mellin_terms(self) -> Tuple[Tuple[int, Fraction], ...]:
        """Taylor data (k, c_k) with integral t^s rho dt = sum_k c_k / (s + k + 1).

        Only profiles supported on [0, 1] with a single piece stay rational in s.
        """
        if self.is_zero():
            return ()
        if not self.is_exact_class():
            raise ExactnessError(
                f"profile knots {tuple(map(str, self.knots))} not in {{0,1}}: "
                "Mellin transform is not a rational function"
            )
        return tuple((k, c) for k, c in enumerate(self.pieces[0]) if c)

    def derivative(self) -> "RadialProfile":
        if self.is_zero():
            return RadialProfile.zero()
        pieces = []
        for p in self.pieces:
            d = tuple(Fraction(k) * c for k, c in enumerate(p) if k >= 1)
            pieces.append(d if d else (Fraction(0),))
        return RadialProfile(self.knots, tuple(pieces))

    def mul_poly(self, coeffs: Sequence) -> "RadialProfile":
        """Multiply by a polynomial in t (coefficients constant-first)."""
        cs = [_fr(c) for c in coeffs]
        if self.is_zero() or not any(cs):
            return RadialProfile.zero()
        pieces = []
        for p in self.pieces:
            out = [Fraction(0)] * (len(p) + len(cs) - 1)
            for i, a in enumerate(p):
                for j, b in enumerate(cs):
                    out[i + j] += a * b
            pieces.append(tuple(out))
        return RadialProfile(self.knots, tuple(pieces))

    def scale(self, c) -> "RadialProfile":
        return self.mul_poly([c])

    def moment_tail(self, b: int, t0: Fraction) -> Fraction:
        """Exact integral of t^b * rho(t) over [max(t0, 0), support end]."""
        if self.is_zero():
            return Fraction(0)
        t0 = Fraction(t0)
        total = Fraction(0)
        for j, p in enumerate(self.pieces):
            lo = max(self.knots[j], t0)
            hi = self.knots[j + 1]
            if lo >= hi:
                continue
            for k, c in enumerate(p):
                if not c:
                    continue
                e = b + k + 1
                total += c * (hi**e - lo**e) / e
        return total

    def moment(self, b: int) -> Fraction:
        return self.moment_tail(b, Fraction(0))

    def to_obj(self) -> dict:
        return {
            "knots": [[k.numerator, k.denominator] for k in self.knots],
            "pieces": [[[c.numerator, c.denominator] for c in p] for p in self.pieces],
        }

    @staticmethod
    def from_obj(obj: dict, path: str = "rho") -> "RadialProfile":
        from .charts import ScenarioError, _rational

        if not isinstance(obj, dict) or "knots" not in obj or "pieces" not in obj:
            raise ScenarioError(path, "expected {knots, pieces}")
        knots = [_rational(v, f"{path}.knots[{i}]") for i, v in enumerate(obj["knots"])]
        pieces = [
            tuple(_rational(c, f"{path}.pieces[{i}][{j}]") for j, c in enumerate(p))
            for i, p in enumerate(obj["pieces"])
        ]
        try:
            return RadialProfile(tuple(knots), tuple(pieces))
        except ValueError as exc:
            raise ScenarioError(path, str(exc)) from exc

    def __str__(self):
        if self.is_zero():
            return "0"
        segs = []
        for j, p in enumerate(self.pieces):
            poly = " + ".join(
                (f"{c}" if k == 0 else (f"{c}*t^{k}" if k > 1 else f"{c}*t"))
                for k, c in enumerate(p)
                if c
            )
            segs.append(f"[{self.knots[j]},{self.knots[j + 1]}]: {poly or '0'}")
        return "; ".join(segs)
