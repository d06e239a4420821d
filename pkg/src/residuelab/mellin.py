"""Exact evaluation of the continued integral on the separable class.

Angular selection reduces every chart integral to a product of one-variable
radial Mellin transforms, each a rational function of the composite column
parameter; the assembled value is an exact MeroValue and serves as the
oracle for all pole claims.  A floating-point polar quadrature provides an
independent numeric cross-check in the absolute-convergence zone.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .charts import ChartSpec, Scenario, SeparableTerm
from .gaussian import QI
from .leibniz import check_units, subset_determinant
from .linform import LinForm, normalize_affine_scaled
from .merovalue import MeroValue, TokenScalar
from .orientation import dbar_front_sign
from .poly import Poly
from .profiles import RadialProfile


class DimensionTooLargeError(ValueError):
    pass


class DivergenceError(ValueError):
    """Integrand not locally integrable and no parameter available to continue in."""


def _mellin_sum(nvars: int, mu_vec: Sequence[int], shift: int, rho: RadialProfile) -> MeroValue:
    """Sum_k c_k / (mu + shift + k + 1) as a MeroValue; mu may be the zero column."""
    terms = rho.mellin_terms()
    if not terms:
        return MeroValue.zero(nvars)
    total = MeroValue.zero(nvars)
    homogeneous = not any(mu_vec)
    for k, c in terms:
        d = shift + k + 1
        if homogeneous:
            if d <= 0:
                raise DivergenceError(
                    f"radial integrand t^{shift + k} has no parameter to continue in"
                )
            total = total + MeroValue.const(nvars, QI.of(Fraction(c, d)))
        else:
            form, g = normalize_affine_scaled(mu_vec, d)
            piece = MeroValue.from_poly(
                Poly.const(nvars, QI.of(c) / g), [(form, 1)]
            )
            total = total + piece
    return total


def radial_factor(nvars: int, mu_vec: Sequence[int], shift: int, rho: RadialProfile) -> MeroValue:
    """Value of one angularly selected variable: -2*pi*i times the Mellin sum."""
    s = _mellin_sum(nvars, mu_vec, shift, rho)
    return (s * QI.of(-1)).mul_token(1)


def radial_integral(mu: LinForm, c: int, rho: RadialProfile) -> MeroValue:
    """Exact 2*pi * integral of r^(2*mu+c) rho(r^2) r dr as a rational function of mu.

    The twist-free angular factor always makes c even; poles sit at
    mu = -(c + 2k + 2)/2 over the nonzero Taylor data of rho.
    """
    if c % 2:
        raise ValueError("odd radial shift cannot arise from a zero angular twist")
    s = _mellin_sum(mu.nvars, mu.coeffs, c // 2, rho)
    return (s * QI.of(0, Fraction(-1, 2))).mul_token(1)


def radial_extreme_pole(shift: int, rho: RadialProfile) -> Optional[Fraction]:
    """Largest pole location of the shifted Mellin transform in the composite variable."""
    terms = rho.mellin_terms()
    if not terms:
        return None
    kmin = min(k for k, _ in terms)
    return Fraction(-(shift + kmin + 1))


def _resolve_chart(scenario: Scenario, chart: Union[ChartSpec, str]) -> ChartSpec:
    if isinstance(chart, str):
        return scenario.chart(chart)
    return chart


def mellin_exact(scenario: Scenario, chart: Union[ChartSpec, str]) -> MeroValue:
    """Exact chart contribution to the continued integral, reduced."""
    chart = _resolve_chart(scenario, chart)
    sig = scenario.signature
    check_units(chart)
    tf = scenario.testform(chart.name)
    n, p, N = sig.n, sig.p, sig.N
    nv = sig.nfactors
    columns = [chart.column(i) for i in range(1, n + 1)]
    coltot = [sum(col) for col in columns]
    axis_poly = Poly.const(nv, QI.one())
    if p:
        exps = [1] * p + [0] * (nv - p)
        axis_poly = Poly.monomial(nv, exps, QI.one())
    result = MeroValue.zero(nv)
    for term in tf.terms:
        if not term.coeff:
            continue
        D = sorted(term.dbar_slots)
        I = [i for i in range(1, n + 1) if i not in term.dbar_slots]
        det = subset_determinant(chart.alpha, I)
        if det == 0:
            continue
        sgn = dbar_front_sign(I, n, D)
        scalar = term.coeff * (det * sgn * chart.sign)
        val = MeroValue.const(nv, scalar).mul_poly(axis_poly)
        for i in range(1, n + 1):
            f = term.factors[i - 1]
            u = f.a + chart.jac[i - 1] - N * coltot[i - 1]
            # variables carrying a derivative differential pick up 1/conj(x)
            v = f.b - (0 if i in term.dbar_slots else 1)
            if u != v:
                val = MeroValue.zero(nv)
                break
            fac = radial_factor(nv, columns[i - 1], u, f.rho)
            if fac.is_zero():
                val = MeroValue.zero(nv)
                break
            val = val * fac
        result = result + val
    return result.reduced()


def value_at_origin(v: MeroValue) -> TokenScalar:
    return v.value_at_origin()


def residue_on(form: LinForm, v: MeroValue, point: Sequence[Fraction]) -> TokenScalar:
    return v.residue_on(form, point)


def extreme_pole(v: MeroValue) -> Optional[Fraction]:
    """Largest pole location of a one-parameter value; None when entire."""
    v = v.reduced()
    if v.nvars != 1:
        raise ValueError("extreme_pole expects a one-parameter value")
    roots = [Fraction(-f.const, f.coeffs[0]) for f, _ in v.denominator_forms()]
    return max(roots) if roots else None


# ---------------------------------------------------------------------------
# Floating-point quadrature oracle.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float


def _pmap(fn, items):
    try:
        workers = int(os.environ.get("RML_THREADS", "1"))
    except ValueError:
        workers = 1
    items = list(items)
    if workers > 1 and len(items) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _quad_variable(mu: complex, u: int, v: int, rho: RadialProfile, nr: int, nt: int) -> complex:
    """Numeric integral over C of |x|^(2 mu) x^u conj(x)^v rho(|x|^2) dx ^ conj(dx)."""
    if rho.is_zero():
        return 0j
    twist = u - v
    theta = (np.arange(nt) + 0.5) * (2 * np.pi / nt)
    ang = np.exp(1j * twist * theta).sum() * (2 * np.pi / nt)
    nodes, weights = np.polynomial.legendre.leggauss(nr)
    radial = 0j
    knots = [float(k) for k in rho.knots]
    for a_t, b_t, piece in zip(knots, knots[1:], rho.pieces):
        ra, rb = np.sqrt(a_t), np.sqrt(b_t)
        r = 0.5 * (rb - ra) * nodes + 0.5 * (rb + ra)
        w = 0.5 * (rb - ra) * weights
        t = r * r
        rho_t = np.zeros_like(t)
        for k, c in reversed(list(enumerate(piece))):
            rho_t = rho_t * t + float(c)
        vals = np.exp((2 * mu + u + v + 1) * np.log(r)) * rho_t
        radial += np.sum(w * vals)
    return -2j * ang * radial


def _quad_total(
    scenario: Scenario, chart: ChartSpec, lam: Sequence[complex], nr: int, nt: int
) -> complex:
    sig = scenario.signature
    n, p, N = sig.n, sig.p, sig.N
    tf = scenario.testform(chart.name)
    columns = [chart.column(i) for i in range(1, n + 1)]
    coltot = [sum(col) for col in columns]

    def term_value(term: SeparableTerm) -> complex:
        if not term.coeff:
            return 0j
        D = sorted(term.dbar_slots)
        I = [i for i in range(1, n + 1) if i not in term.dbar_slots]
        det = subset_determinant(chart.alpha, I)
        if det == 0:
            return 0j
        sgn = dbar_front_sign(I, n, D)
        total = term.coeff.as_complex() * det * sgn * chart.sign
        for t in range(p):
            total *= lam[t]
        for i in range(1, n + 1):
            f = term.factors[i - 1]
            u = f.a + chart.jac[i - 1] - N * coltot[i - 1]
            v = f.b - (0 if i in term.dbar_slots else 1)
            mu = sum(c * lam[j] for j, c in enumerate(columns[i - 1]))
            total *= _quad_variable(mu, u, v, f.rho, nr, nt)
            if not total:
                return 0j
        return total

    return sum(_pmap(term_value, tf.terms))


def mellin_quadrature(
    scenario: Scenario,
    chart: Union[ChartSpec, str],
    lam: Sequence[complex],
    base_nodes: int = 24,
    base_angles: int = 32,
) -> QuadResult:
    """Adaptive polar cubature of the chart integrand at a fixed parameter point.

    Deterministic: one coarse and one refined tensor schedule, the difference
    serving as the error estimate.
    """
    chart = _resolve_chart(scenario, chart)
    sig = scenario.signature
    if sig.n > 3:
        raise DimensionTooLargeError("DimensionTooLarge: quadrature supports n <= 3")
    lam = [complex(z) for z in lam]
    if len(lam) != sig.nfactors:
        raise ValueError(f"expected {sig.nfactors} parameter values")
    if any(z.real < 2 for z in lam):
        raise ValueError("quadrature needs Re(lambda_j) >= 2 (absolute convergence zone)")
    max_twist = 0
    for term in scenario.testform(chart.name).terms:
        for f in term.factors:
            max_twist = max(max_twist, abs(f.a - f.b) + 1)
    nt = max(base_angles, 4 * max_twist)
    coarse = _quad_total(scenario, chart, lam, base_nodes, nt)
    fine = _quad_total(scenario, chart, lam, 2 * base_nodes, 2 * nt)
    return QuadResult(fine, abs(fine - coarse))
