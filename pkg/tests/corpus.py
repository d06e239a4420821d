"""Seeded random data for the property suites."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from residuelab import (
    ChartSpec,
    Factor,
    ProblemSignature,
    Scenario,
    SeparableTerm,
    SeparableTestForm,
    QI,
    RadialProfile,
)
from residuelab.extforms import PolyForm, pullback_monomial
from residuelab.poly import Poly


def random_profile(rng: random.Random, maxdeg: int = 2) -> RadialProfile:
    deg = rng.randint(0, maxdeg)
    coeffs = [Fraction(rng.randint(-2, 2)) for _ in range(deg + 1)]
    if not any(coeffs):
        coeffs[0] = Fraction(1)
    return RadialProfile.on_unit(coeffs)


def random_chart(rng: random.Random, nmax=4, pmax=4, qmax=4, emax=3, allow_q0=True) -> ChartSpec:
    n = rng.randint(1, nmax)
    p = rng.randint(1, min(pmax, n))
    q = rng.randint(0 if allow_q0 else 1, qmax)
    alpha = []
    for _ in range(p):
        row = [rng.randint(0, emax) for _ in range(n)]
        if not any(row):
            row[rng.randrange(n)] = rng.randint(1, emax)
        alpha.append(tuple(row))
    beta = [tuple(rng.randint(0, emax) for _ in range(n)) for _ in range(q)]
    jac = tuple(rng.randint(0, 1) for _ in range(n))
    return ChartSpec("c", tuple(alpha), tuple(beta), jac, rng.choice((1, -1)))


def absorbing_testform(rng: random.Random, chart: ChartSpec, N: int = 1, n_terms: int = 2) -> SeparableTestForm:
    """Random separable data with conjugate divisibility on the principal-value
    divisor, the property the division lemma provides for genuine pullbacks."""
    n, p = chart.n, chart.p
    K = chart.pv_divisor_vars()
    coltot = [chart.column_total(i) for i in range(1, n + 1)]
    terms = []
    for _ in range(rng.randint(1, n_terms)):
        slots = frozenset(rng.sample(range(1, n + 1), n - p))
        factors = []
        for i in range(1, n + 1):
            in_I = i not in slots
            b = rng.randint(0, 2)
            if in_I and (i in K or coltot[i - 1] == 0):
                b = max(b, 1)
            a = b - (1 if in_I else 0) + N * coltot[i - 1] - chart.jac[i - 1]
            if a < 0:
                b += -a
                a = b - (1 if in_I else 0) + N * coltot[i - 1] - chart.jac[i - 1]
            factors.append(Factor(a, b, random_profile(rng)))
        coeff = QI.of(
            Fraction(rng.randint(-3, 3), rng.randint(1, 2)),
            Fraction(rng.randint(-2, 2), 2),
        )
        if not coeff:
            coeff = QI.one()
        terms.append(SeparableTerm(coeff, tuple(factors), slots))
    return SeparableTestForm(tuple(terms))


def random_chart_scenario(rng: random.Random, nmax=4, pmax=4, qmax=4, emax=3) -> Scenario:
    chart = random_chart(rng, nmax, pmax, qmax, emax)
    sig = ProblemSignature(n=chart.n, p=chart.p, q=chart.q, N=1)
    return Scenario(sig, (chart,), {"c": absorbing_testform(rng, chart)})


def random_poly(rng: random.Random, n: int, maxdeg=2, terms=3) -> Poly:
    p = Poly.zero(n)
    for _ in range(rng.randint(1, terms)):
        e = tuple(rng.randint(0, maxdeg) for _ in range(n))
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        if c:
            p = p + Poly.monomial(n, e, c)
    return p


def random_polyform(rng: random.Random, n: int, degree: int) -> PolyForm:
    f = PolyForm.zero(n, degree)
    idxs = list(combinations(range(1, n + 1), degree))
    for _ in range(rng.randint(1, 4)):
        f = f + PolyForm.basis(n, rng.choice(idxs), random_poly(rng, n))
    return f


def unimodular_substitution(rng: random.Random, n: int, steps: int = 3):
    """Monomial coordinate change assembled from elementary shears, the shape
    blow-up charts take."""
    S = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, k = rng.sample(range(n), 2)
        S[i] = [a + b for a, b in zip(S[i], S[k])]
    return S


def ci_pullback_instance(rng: random.Random):
    """Chart data pulled back from diagonal complete-intersection base data,
    together with the pulled-back test form piece the division lemma eats."""
    n = rng.randint(2, 4)
    p = rng.randint(1, n - 1)
    q = rng.randint(1, n - p)
    S = unimodular_substitution(rng, n)
    cs = [rng.randint(1, 3) for _ in range(p)]
    ds = [rng.randint(1, 3) for _ in range(q)]
    alpha_rows = [tuple(cs[i] * S[i][j] for j in range(n)) for i in range(p)]
    beta_rows = [tuple(ds[j] * S[p + j][jj] for jj in range(n)) for j in range(q)]
    K = frozenset(i + 1 for i in range(n) if any(r[i] for r in beta_rows))
    psi = PolyForm.zero(n, n - p)
    for _ in range(rng.randint(1, 3)):
        idx = tuple(sorted(rng.sample(range(1, n + 1), n - p)))
        psi = psi + PolyForm.basis(n, idx, random_poly(rng, n, 1, 2))
    psih = pullback_monomial(psi, S, n)
    return psih, K, alpha_rows
