"""Exact meromorphic values: rational functions of the continuation parameters.

A MeroValue is

    (2*pi*i)^k * num(L1..Lm) / prod_j form_j ^ mult_j

with num a polynomial over Q(i) and every denominator factor a normalized
integer affine form.  The 2*pi*i token stays symbolic, so pi never enters
the exact engine.  reduce() cancels denominator forms dividing the
numerator; after reduction the representation is canonical (affine forms
are irreducible and Q(i)[L] has unique factorization), so equality is
structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .gaussian import QI
from .linform import AffineForm, LinForm
from .poly import Poly


class MeroError(ValueError):
    pass


class TokenPowerError(MeroError):
    """Adding values with different powers of the 2*pi*i token."""


class PoleAtPointError(MeroError):
    def __init__(self, forms):
        self.forms = tuple(forms)
        super().__init__("value has a pole at the requested point: " + ", ".join(map(str, self.forms)))


class PoleAtOriginError(PoleAtPointError):
    def __init__(self, forms):
        self.forms = tuple(forms)
        MeroError.__init__(self, "PoleAtOrigin: " + ", ".join(map(str, self.forms)))


class HigherOrderPoleError(MeroError):
    def __init__(self, form, mult):
        self.form = form
        self.mult = mult
        super().__init__(f"HigherOrderPole: {form} has multiplicity {mult}")


@dataclass(frozen=True)
class TokenScalar:
    """An exact scalar of the shape coeff * (2*pi*i)^power."""

    coeff: QI
    power: int = 0

    def __post_init__(self):
        if not self.coeff and self.power:
            object.__setattr__(self, "power", 0)

    def as_complex(self) -> complex:
        import math

        return self.coeff.as_complex() * (2j * math.pi) ** self.power

    def __eq__(self, other):
        if not isinstance(other, TokenScalar):
            return NotImplemented
        return self.coeff == other.coeff and (not self.coeff or self.power == other.power)

    def __hash__(self):
        return hash((self.coeff, self.power if self.coeff else 0))

    def __mul__(self, other):
        if isinstance(other, TokenScalar):
            return TokenScalar(self.coeff * other.coeff, self.power + other.power)
        return TokenScalar(self.coeff * other, self.power)

    def __neg__(self):
        return TokenScalar(-self.coeff, self.power)

    def __str__(self):
        if not self.coeff:
            return "0"
        if self.power == 0:
            return str(self.coeff)
        if self.power == 1:
            tok = "(2*pi*i)"
        else:
            tok = f"(2*pi*i)^{self.power}"
        return f"({self.coeff})*{tok}"


def divmod_affine(p: Poly, form: AffineForm) -> Tuple[Poly, Poly]:
    """Polynomial division by a degree-one form: p = q*form + r with r free of the pivot variable."""
    pivot = next(j for j, c in enumerate(form.coeffs) if c)
    a = QI.of(form.coeffs[pivot])
    fpoly = form.as_poly()
    q = Poly.zero(p.nvars)
    r = p
    while True:
        d = r.deg_in(pivot)
        if d < 1:
            break
        lead = r.coeff_of_power(pivot, d)
        shift = [0] * p.nvars
        shift[pivot] = d - 1
        t = lead.mul_monomial(shift, QI.one() / a)
        q = q + t
        r = r - t * fpoly
    return q, r


def divides_affine(p: Poly, form: AffineForm) -> bool:
    q, r = divmod_affine(p, form)
    return r.is_zero()


_PRIME = (1 << 61) - 1


def _vanishes_on_form(p: Poly, form: AffineForm) -> bool:
    """Cheap necessary test: evaluate modulo a large prime at a point of the
    form's zero hyperplane.

    Divisibility forces a zero value, so a nonzero value rules the division
    out; a zero value may still be a false positive and callers confirm with
    the exact division.
    """
    P = _PRIME
    pivot = next(j for j, c in enumerate(form.coeffs) if c)
    a = form.coeffs[pivot] % P
    values = [(2 * j + 3) % P for j in range(p.nvars)]
    rest = (form.const + sum(
        c * values[j] for j, c in enumerate(form.coeffs) if c and j != pivot
    )) % P
    values[pivot] = (-rest) * pow(a, P - 2, P) % P
    degs = [0] * p.nvars
    for e in p.terms:
        for j, k in enumerate(e):
            if k > degs[j]:
                degs[j] = k
    pows = []
    for j in range(p.nvars):
        row = [1] * (degs[j] + 1)
        for d in range(1, degs[j] + 1):
            row[d] = row[d - 1] * values[j] % P
        pows.append(row)
    inv_cache = {1: 1}

    def inv(d: int) -> int:
        r = inv_cache.get(d)
        if r is None:
            r = pow(d, P - 2, P)
            inv_cache[d] = r
        return r

    sre = sim = 0
    for e, c in p.terms.items():
        m = 1
        for j, k in enumerate(e):
            if k:
                m = m * pows[j][k] % P
        dre = c.re.denominator % P
        dim = c.im.denominator % P
        if dre == 0 or dim == 0:
            return True  # cannot decide modulo P; let the exact division settle it
        sre = (sre + c.re.numerator * inv(dre) % P * m) % P
        sim = (sim + c.im.numerator * inv(dim) % P * m) % P
    return sre == 0 and sim == 0


def _merge_dens(entries: Iterable[Tuple[AffineForm, int]]) -> Tuple[Tuple[AffineForm, int], ...]:
    acc: Dict[AffineForm, int] = {}
    for f, m in entries:
        if m == 0:
            continue
        if m < 0:
            raise MeroError("denominator multiplicities must be positive")
        acc[f] = acc.get(f, 0) + m
    return tuple(sorted(acc.items(), key=lambda t: t[0].sort_key()))


@dataclass(frozen=True)
class MeroValue:
    num: Poly
    den: Tuple[Tuple[AffineForm, int], ...] = ()
    token_pow: int = 0

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @staticmethod
    def zero(nvars: int) -> "MeroValue":
        return MeroValue(Poly.zero(nvars))

    @staticmethod
    def const(nvars: int, c, token_pow: int = 0) -> "MeroValue":
        c = c if isinstance(c, QI) else QI.of(c)
        if not c:
            return MeroValue.zero(nvars)
        return MeroValue(Poly.const(nvars, c), (), token_pow)

    @staticmethod
    def from_poly(num: Poly, den=(), token_pow: int = 0) -> "MeroValue":
        if num.is_zero():
            return MeroValue(num)
        return MeroValue(num, _merge_dens(den), token_pow)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "MeroValue") -> "MeroValue":
        if not isinstance(other, MeroValue):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.token_pow != other.token_pow:
            raise TokenPowerError(
                f"cannot add token powers {self.token_pow} and {other.token_pow}"
            )
        da = dict(self.den)
        db = dict(other.den)
        union: Dict[AffineForm, int] = dict(da)
        for f, m in db.items():
            union[f] = max(union.get(f, 0), m)
        na = self.num
        nb = other.num
        for f, m in union.items():
            extra_a = m - da.get(f, 0)
            extra_b = m - db.get(f, 0)
            fp = f.as_poly()
            for _ in range(extra_a):
                na = na * fp
            for _ in range(extra_b):
                nb = nb * fp
        return MeroValue.from_poly(na + nb, union.items(), self.token_pow).reduced()

    def __neg__(self) -> "MeroValue":
        return MeroValue(-self.num, self.den, self.token_pow)

    def __sub__(self, other: "MeroValue") -> "MeroValue":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, MeroValue):
            if self.is_zero() or other.is_zero():
                return MeroValue.zero(self.nvars)
            return MeroValue.from_poly(
                self.num * other.num,
                list(self.den) + list(other.den),
                self.token_pow + other.token_pow,
            ).reduced()
        if isinstance(other, (int, Fraction, QI)):
            c = other if isinstance(other, QI) else QI.of(other)
            if not c:
                return MeroValue.zero(self.nvars)
            return MeroValue(self.num.scale(c), self.den, self.token_pow)
        return NotImplemented

    __rmul__ = __mul__

    def mul_token(self, k: int) -> "MeroValue":
        if self.is_zero():
            return self
        return MeroValue(self.num, self.den, self.token_pow + k)

    def div_form(self, form: AffineForm, mult: int = 1) -> "MeroValue":
        if self.is_zero():
            return self
        return MeroValue.from_poly(self.num, list(self.den) + [(form, mult)], self.token_pow).reduced()

    def mul_poly(self, p: Poly) -> "MeroValue":
        if self.is_zero() or p.is_zero():
            return MeroValue.zero(self.nvars)
        return MeroValue.from_poly(self.num * p, self.den, self.token_pow).reduced()

    def reduced(self) -> "MeroValue":
        """Cancel every denominator form dividing the numerator; idempotent."""
        if self.num.is_zero():
            return MeroValue.zero(self.nvars)
        num = self.num
        out: List[Tuple[AffineForm, int]] = []
        for form, mult in self.den:
            while mult > 0:
                if not _vanishes_on_form(num, form):
                    break
                q, r = divmod_affine(num, form)
                if r.is_zero():
                    num = q
                    mult -= 1
                else:
                    break
            if mult:
                out.append((form, mult))
        return MeroValue(num, tuple(out), self.token_pow)

    def denominator_forms(self) -> Tuple[Tuple[AffineForm, int], ...]:
        return self.den

    def hyperplane_forms(self) -> frozenset:
        """Normalized homogeneous denominator forms (pole hyperplanes through 0)."""
        return frozenset(f.linear_part() for f, _ in self.den if f.is_homogeneous())

    def eval_rational(self, point: Sequence[Fraction]) -> TokenScalar:
        point = tuple(Fraction(v) for v in point)
        blocking = [f for f, _ in self.den if f.eval(point) == 0]
        if blocking:
            raise PoleAtPointError(blocking)
        val = self.num.eval(point)
        val = val if isinstance(val, QI) else QI.of(val)
        for f, m in self.den:
            d = QI.of(f.eval(point)) ** m
            val = val / d
        return TokenScalar(val, self.token_pow if val else 0)

    def eval_complex(self, point: Sequence[complex], token: complex | None = None) -> complex:
        import math

        tok = token if token is not None else 2j * math.pi
        num = 0j
        for e, c in self.num.terms.items():
            v = c.as_complex()
            for j, k in enumerate(e):
                if k:
                    v *= point[j] ** k
            num += v
        den = 1 + 0j
        for f, m in self.den:
            den *= f.eval_complex(point) ** m
        return num / den * tok**self.token_pow

    def value_at_origin(self) -> TokenScalar:
        v = self.reduced()
        offending = sorted(v.hyperplane_forms(), key=lambda f: f.sort_key())
        if offending:
            raise PoleAtOriginError(offending)
        return v.eval_rational((Fraction(0),) * v.nvars)

    def residue_on(self, form: LinForm, point: Sequence[Fraction]) -> TokenScalar:
        """Exact simple-pole coefficient: (form * value) evaluated on the hyperplane."""
        v = self.reduced()
        point = tuple(Fraction(x) for x in point)
        target = form.as_affine(0)
        mult = dict(v.den).get(target, 0)
        if mult == 0:
            return TokenScalar(QI.zero(), 0)
        if mult > 1:
            raise HigherOrderPoleError(form, mult)
        if form.eval(point) != 0:
            raise MeroError(f"point is not on the hyperplane {form}=0")
        rest = [(f, m) for f, m in v.den if f != target]
        blocking = [f for f, _ in rest if f.eval(point) == 0]
        if blocking:
            raise PoleAtPointError(blocking)
        stripped = MeroValue(v.num, tuple(rest), v.token_pow)
        return stripped.eval_rational(point)

    def __eq__(self, other):
        if not isinstance(other, MeroValue):
            return NotImplemented
        a = self.reduced()
        b = other.reduced()
        return (
            a.num == b.num
            and a.den == b.den
            and (a.token_pow == b.token_pow or a.is_zero())
        )

    def __hash__(self):
        a = self.reduced()
        return hash((a.num, a.den, a.token_pow))

    def to_obj(self) -> dict:
        """JSON-ready exact representation."""
        num = [
            {
                "exps": list(e),
                "re": [c.re.numerator, c.re.denominator],
                "im": [c.im.numerator, c.im.denominator],
            }
            for e, c in self.num.sorted_terms()
        ]
        den = [
            {"coeffs": list(f.coeffs), "const": f.const, "mult": m} for f, m in self.den
        ]
        return {"num": num, "den": den, "twopii_power": self.token_pow}

    def __str__(self):
        if self.is_zero():
            return "0"
        tok = ""
        if self.token_pow == 1:
            tok = "(2*pi*i)*"
        elif self.token_pow:
            tok = f"(2*pi*i)^{self.token_pow}*"
        num = str(self.num).replace("x", "L")
        if not self.den:
            return f"{tok}({num})"
        den = "*".join(f"({f})" if m == 1 else f"({f})^{m}" for f, m in self.den)
        return f"{tok}({num}) / ({den})"
