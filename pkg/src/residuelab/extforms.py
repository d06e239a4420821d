"""Polynomial exterior algebra and the coordinate-hyperplane division lemma.

Forms have rational polynomial coefficients on strictly increasing wedge
index tuples.  The interpolant built by alternating restrictions matches a
form on every coordinate hyperplane of a given index set, so the difference
becomes divisible by those coordinates; this is what lets the engine absorb
logarithmic conjugate differentials on the principal-value divisor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .poly import Poly

IndexTuple = Tuple[int, ...]


class DegreeError(ValueError):
    pass


def _sorted_signed(idx: Sequence[int]) -> Tuple[IndexTuple, int]:
    """Sort wedge indices, tracking the permutation sign; repeated index kills the term."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return (), 0
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return tuple(idx), sign


@dataclass(frozen=True)
class PolyForm:
    """Degree-d form: map from increasing 1-based index tuples to Poly coefficients."""

    nvars: int
    degree: int
    terms: Mapping[IndexTuple, Poly]

    def __post_init__(self):
        clean: Dict[IndexTuple, Poly] = {}
        for idx, c in self.terms.items():
            if len(idx) != self.degree:
                raise DegreeError(f"index tuple {idx} does not match degree {self.degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index tuple {idx} must be strictly increasing")
            if any(i < 1 or i > self.nvars for i in idx):
                raise ValueError(f"index out of range in {idx}")
            if not c.is_zero():
                clean[tuple(idx)] = c
        object.__setattr__(self, "terms", clean)

    @staticmethod
    def zero(nvars: int, degree: int = 0) -> "PolyForm":
        return PolyForm(nvars, degree, {})

    @staticmethod
    def function(poly: Poly) -> "PolyForm":
        return PolyForm(poly.nvars, 0, {(): poly})

    @staticmethod
    def basis(nvars: int, idx: Sequence[int], coeff: Poly | None = None) -> "PolyForm":
        srt, sign = _sorted_signed(idx)
        if sign == 0:
            return PolyForm.zero(nvars, len(idx))
        c = coeff if coeff is not None else Poly.const(nvars, Fraction(1))
        if sign < 0:
            c = -c
        return PolyForm(nvars, len(idx), {srt: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if self.nvars != other.nvars:
            raise ValueError("arity mismatch")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise DegreeError("cannot add forms of different degree")
        out = dict(self.terms)
        for idx, c in other.terms.items():
            s = out.get(idx)
            out[idx] = c if s is None else s + c
        return PolyForm(self.nvars, self.degree, out)

    def __neg__(self) -> "PolyForm":
        return PolyForm(self.nvars, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, c) -> "PolyForm":
        return PolyForm(
            self.nvars, self.degree, {i: p.scale(c) for i, p in self.terms.items()}
        )

    def mul_poly(self, poly: Poly) -> "PolyForm":
        return PolyForm(
            self.nvars, self.degree, {i: p * poly for i, p in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and (self.is_zero() and other.is_zero() or
                 (self.degree == other.degree and dict(self.terms) == dict(other.terms)))
        )

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self.terms.keys())))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for idx, c in sorted(self.terms.items()):
            wedge = "^".join(f"dx{i}" for i in idx) or "1"
            parts.append(f"({c}) {wedge}")
        return " + ".join(parts)


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    """Graded-anticommutative product; degree overflow gives the zero form."""
    if a.nvars != b.nvars:
        raise ValueError("arity mismatch")
    d = a.degree + b.degree
    if d > a.nvars:
        return PolyForm.zero(a.nvars, min(d, a.nvars))
    out: Dict[IndexTuple, Poly] = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            idx, sign = _sorted_signed(ia + ib)
            if sign == 0:
                continue
            c = ca * cb
            if sign < 0:
                c = -c
            s = out.get(idx)
            out[idx] = c if s is None else s + c
    return PolyForm(a.nvars, d, out)


def wedge_all(forms: Iterable[PolyForm]) -> PolyForm:
    forms = list(forms)
    if not forms:
        raise ValueError("empty wedge")
    acc = forms[0]
    for f in forms[1:]:
        acc = wedge(acc, f)
    return acc


def d_monomial(nvars: int, alpha: Sequence[int]) -> PolyForm:
    """d(x^alpha) = sum_i alpha_i x^(alpha - e_i) dx_i."""
    if not any(alpha):
        raise ValueError("zero exponent vector has no differential")
    terms: Dict[IndexTuple, Poly] = {}
    for i, a in enumerate(alpha):
        if not a:
            continue
        e = list(alpha)
        e[i] -= 1
        terms[(i + 1,)] = Poly.monomial(nvars, e, Fraction(a))
    return PolyForm(nvars, 1, terms)


def restrict_extend(f: PolyForm, S: Iterable[int]) -> PolyForm:
    """Pull back to {x_i = 0 : i in S} and extend constantly: kill x_i in the
    coefficients and drop every term whose wedge contains dx_i."""
    S = set(S)
    out: Dict[IndexTuple, Poly] = {}
    for idx, c in f.terms.items():
        if any(i in S for i in idx):
            continue
        for i in S:
            c = c.eval_partial(i - 1, Fraction(0))
        if not c.is_zero():
            out[idx] = c
    return PolyForm(f.nvars, f.degree, out)


def build_interpolant(psi: PolyForm, K: Iterable[int]) -> PolyForm:
    """Alternating sum of restrictions over nonempty subsets of K.

    The result matches psi on each hyperplane {x_j = 0}, j in K, so the
    difference has all dx_j-free coefficients divisible by x_j.
    """
    K = sorted(set(K))
    total = PolyForm.zero(psi.nvars, psi.degree)
    for size in range(1, len(K) + 1):
        sign = 1 if size % 2 else -1
        for subset in combinations(K, size):
            piece = restrict_extend(psi, subset)
            total = total + (piece if sign > 0 else -piece)
    return total


def log_wedge_nonsingular(psi: PolyForm, omega: PolyForm, K: Iterable[int]) -> Dict[int, bool]:
    """For each j in K: does (dx_j / x_j) ^ (psi - omega) stay polynomial?

    Equivalent check: every coefficient of psi - omega on wedge tuples not
    containing dx_j is divisible by x_j.
    """
    diff = psi - omega
    report: Dict[int, bool] = {}
    for j in sorted(set(K)):
        ok = True
        for idx, c in diff.terms.items():
            if j in idx:
                continue
            if not c.divisible_monomial(j - 1):
                ok = False
                break
        report[j] = ok
    return report


def annihilated_by_row_differentials(omega: PolyForm, rows: Sequence[Sequence[int]]) -> bool:
    """True when d(x^row_1) ^ ... ^ d(x^row_m) ^ omega vanishes identically."""
    acc = omega
    for row in rows:
        acc = wedge(d_monomial(omega.nvars, row), acc)
        if acc.is_zero():
            return True
    return acc.is_zero()


def pullback_monomial(form: PolyForm, subst: Sequence[Sequence[int]], nvars_out: int) -> PolyForm:
    """Pull back under the monomial map x_i = z^(subst[i]); exact on polynomials."""
    if len(subst) != form.nvars:
        raise ValueError("need one exponent row per source variable")

    def pull_poly(p: Poly) -> Poly:
        out = Poly.zero(nvars_out)
        for e, c in p.terms.items():
            exps = [0] * nvars_out
            for i, k in enumerate(e):
                if k:
                    for j, s in enumerate(subst[i]):
                        exps[j] += k * s
            out = out + Poly.monomial(nvars_out, exps, c)
        return out

    total = PolyForm.zero(nvars_out, form.degree)
    for idx, c in form.terms.items():
        piece = PolyForm.function(pull_poly(c))
        ok = True
        for i in idx:
            if not any(subst[i - 1]):
                ok = False
                break
            piece = wedge(piece, d_monomial(nvars_out, subst[i - 1]))
        if ok and not piece.is_zero():
            total = total + piece
    return total


# --- form literals for the CLI and scenario files --------------------------


def form_from_obj(obj: dict, nvars: int, path: str = "form") -> PolyForm:
    from .charts import ScenarioError, _rational

    if not isinstance(obj, dict) or "degree" not in obj or "terms" not in obj:
        raise ScenarioError(path, "expected {degree, terms}")
    degree = obj["degree"]
    terms: Dict[IndexTuple, Poly] = {}
    for ti, t in enumerate(obj["terms"]):
        tb = f"{path}.terms[{ti}]"
        idx = t.get("idx")
        if not isinstance(idx, list):
            raise ScenarioError(f"{tb}.idx", "expected index list")
        poly = Poly.zero(nvars)
        for mi, mono in enumerate(t.get("poly", [])):
            exps = mono.get("exps")
            if not isinstance(exps, list) or len(exps) != nvars:
                raise ScenarioError(f"{tb}.poly[{mi}].exps", f"expected {nvars} exponents")
            coeff = _rational(mono.get("coeff"), f"{tb}.poly[{mi}].coeff")
            poly = poly + Poly.monomial(nvars, exps, coeff)
        sidx, sign = _sorted_signed(idx)
        if sign == 0:
            continue
        if sign < 0:
            poly = -poly
        existing = terms.get(sidx)
        terms[sidx] = poly if existing is None else existing + poly
    return PolyForm(nvars, degree, terms)


def form_to_obj(form: PolyForm) -> dict:
    return {
        "degree": form.degree,
        "terms": [
            {
                "idx": list(idx),
                "poly": [
                    {
                        "exps": list(e),
                        "coeff": [c.numerator, c.denominator],
                    }
                    for e, c in coeff.sorted_terms()
                ],
            }
            for idx, coeff in sorted(form.terms.items())
        ],
    }
