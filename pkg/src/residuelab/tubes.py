"""Residue integrals over tubular sets, admissible-path limits, and the
iterated Mellin cross-check.

Only diagonal data (distinct-variable powers) is supported: these factor
into one-variable circle and exterior integrals, which is enough to
exercise the Mellin identity and the limit values the exact engine
predicts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .charts import ChartSpec, Scenario, SeparableTestForm
from .mellin import mellin_exact
from .orientation import dbar_front_sign


class UnsupportedTubeError(ValueError):
    pass


@dataclass(frozen=True)
class TubeSpec:
    """Diagonal data f_i = x_i^{k_i}: first p factors residue-type (level sets),
    the rest principal-value-type (exteriors)."""

    n: int
    vars: Tuple[int, ...]
    ks: Tuple[int, ...]
    p: int
    eps: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "ks", tuple(self.ks))
        object.__setattr__(self, "eps", tuple(Fraction(e) for e in self.eps))
        if len(set(self.vars)) != len(self.vars):
            raise UnsupportedTubeError("UnsupportedTube: variables must be distinct")
        if len(self.ks) != len(self.vars) or len(self.eps) != len(self.vars):
            raise ValueError("vars, ks, eps must have equal length")
        if any(k < 1 for k in self.ks):
            raise ValueError("exponents must be >= 1")
        if any(e <= 0 for e in self.eps):
            raise ValueError("tube radii must be positive")
        if not 0 <= self.p <= len(self.vars):
            raise ValueError("invalid residue count")
        if any(v < 1 or v > self.n for v in self.vars):
            raise ValueError("variable index out of range")

    @property
    def q(self) -> int:
        return len(self.vars) - self.p

    def with_eps(self, eps: Sequence[Fraction]) -> "TubeSpec":
        return TubeSpec(self.n, self.vars, self.ks, self.p, tuple(eps))


def tube_spec_from_chart(chart: ChartSpec, eps: Sequence[Fraction]) -> TubeSpec:
    """Interpret a diagonal chart as a tube; reject non-diagonal data."""
    rows = chart.rows()
    vars_: List[int] = []
    ks: List[int] = []
    for row in rows:
        hits = [(i + 1, e) for i, e in enumerate(row) if e]
        if len(hits) != 1:
            raise UnsupportedTubeError(
                "UnsupportedTube: factors must be powers of distinct single variables"
            )
        vars_.append(hits[0][0])
        ks.append(hits[0][1])
    if any(chart.jac):
        raise UnsupportedTubeError("UnsupportedTube: tube charts carry no Jacobian factor")
    return TubeSpec(chart.n, tuple(vars_), tuple(ks), chart.p, tuple(eps))


def tube_integral(spec: TubeSpec, testform: SeparableTestForm) -> complex:
    """Separable evaluation: circles for residue factors, exteriors for
    principal-value factors, full planes for spectator variables.

    The tube is oriented so that its admissible limit represents the same
    current the analytic continuation evaluates: counterclockwise circles,
    with the block sign of moving the circle directions in front of the
    ambient orientation and one flip per residue factor.
    """
    circle_vars = set(spec.vars[: spec.p])
    role = {v: ("circle" if j < spec.p else "pv", spec.ks[j], spec.eps[j]) for j, v in enumerate(spec.vars)}
    total = 0j
    for term in testform.terms:
        if not term.coeff:
            continue
        if circle_vars & term.dbar_slots:
            continue  # a conjugate differential dies on its own circle
        if set(range(1, spec.n + 1)) - circle_vars != set(term.dbar_slots):
            continue  # missing conjugate differential: not a top form on the tube
        sgn = dbar_front_sign(sorted(circle_vars), spec.n, term.dbar_slots) * (
            (-1) ** len(circle_vars)
        )
        val = complex(term.coeff.as_complex()) * sgn
        for i in range(1, spec.n + 1):
            f = term.factors[i - 1]
            if i in role:
                kind, k, eps = role[i]
            else:
                kind, k, eps = "spectator", 0, Fraction(0)
            if kind == "circle":
                # integral over |x|^(2k) = eps of x^a conj(x)^b rho / x^k dx
                if f.a - f.b - k + 1 != 0:
                    val = 0j
                    break
                t0 = float(eps) ** (1.0 / k)
                val *= 2j * np.pi * t0 ** f.b * f.rho.value(t0)
            elif kind == "pv":
                if f.a - f.b - k != 0:
                    val = 0j
                    break
                if k == 1:
                    tail = float(f.rho.moment_tail(f.b, Fraction(eps)))
                else:
                    tail = _moment_tail_float(f.rho, f.b, float(eps) ** (1.0 / k))
                val *= -2j * np.pi * tail
            else:
                if f.a != f.b:
                    val = 0j
                    break
                val *= -2j * np.pi * float(f.rho.moment(f.a))
            if not val:
                break
        total += val
    return complex(total)


def _moment_tail_float(rho, b: int, t0: float) -> float:
    total = 0.0
    for j, piece in enumerate(rho.pieces):
        lo = max(float(rho.knots[j]), t0)
        hi = float(rho.knots[j + 1])
        if lo >= hi:
            continue
        for k, c in enumerate(piece):
            if not c:
                continue
            e = b + k + 1
            total += float(c) * (hi**e - lo**e) / e
    return total


@dataclass(frozen=True)
class AdmissiblePath:
    """eps_j(t) = t^(exponents[j]); exponents decrease fast enough that every
    ratio eps_j / eps_{j+1}^k with k <= bound tends to zero."""

    exponents: Tuple[int, ...]
    bound: int

    @staticmethod
    def default(count: int, M: int = 10) -> "AdmissiblePath":
        # base M+1 keeps the ratio condition strict at k = M
        return AdmissiblePath(tuple((M + 1) ** (count - 1 - j) for j in range(count)), M)

    def ratio_condition_ok(self) -> bool:
        for a, b in zip(self.exponents, self.exponents[1:]):
            for k in range(1, self.bound + 1):
                if a - k * b <= 0:
                    return False
        return True

    def eps_at(self, t: Fraction) -> Tuple[Fraction, ...]:
        t = Fraction(t)
        return tuple(t**e for e in self.exponents)


@dataclass(frozen=True)
class LimitResult:
    value: complex
    error: float
    samples: Tuple[complex, ...]
    converged: bool


def admissible_limit(
    spec: TubeSpec,
    testform: SeparableTestForm,
    path: Optional[AdmissiblePath] = None,
    samples: int = 14,
    t0: Fraction = Fraction(1, 2),
    tol: float = 1e-9,
) -> LimitResult:
    """Extrapolate the tube integral along an admissible path to t -> 0."""
    if path is None:
        path = AdmissiblePath.default(len(spec.vars))
    if not path.ratio_condition_ok():
        raise ValueError("path does not satisfy the admissible ratio condition")
    ts = [t0 * Fraction(1, 2) ** j for j in range(samples)]
    vals = [tube_integral(spec.with_eps(path.eps_at(t)), testform) for t in ts]
    seq = list(vals)
    # iterated Aitken acceleration; geometric t-sampling makes power-law
    # corrections geometric, which Aitken removes
    for _ in range(3):
        if len(seq) < 3:
            break
        nxt = []
        for a, b, c in zip(seq, seq[1:], seq[2:]):
            d = (c - b) - (b - a)
            nxt.append(c - (c - b) ** 2 / d if abs(d) > 1e-300 else c)
        seq = nxt
    est = seq[-1]
    err = abs(seq[-1] - seq[-2]) if len(seq) >= 2 else abs(vals[-1] - vals[-2])
    scale = max(abs(est), 1.0)
    return LimitResult(est, err, tuple(vals), err <= tol * scale or err <= tol)


@dataclass(frozen=True)
class MellinCheckRow:
    lam: Tuple[complex, ...]
    transform: complex
    reference: complex
    rel_error: float
    sign: int


def _mellin_weight(lam: complex, s: np.ndarray) -> np.ndarray:
    return lam * s ** (lam - 1)


def _panels(bounds: List[float], splits: int = 10) -> List[Tuple[float, float]]:
    out = []
    for a, b in zip(bounds, bounds[1:]):
        if b <= a:
            continue
        # geometric refinement toward 0 keeps s^(lam-1) accurate
        if a == 0.0:
            left = b
            for _ in range(splits):
                out.append((left / 2, left))
                left /= 2
            out.append((0.0, left))
        else:
            out.append((a, b))
    return out


def mellin_check(
    spec: TubeSpec,
    testform: SeparableTestForm,
    lambdas: Sequence[Sequence[complex]],
    nodes: int = 40,
) -> List[MellinCheckRow]:
    """Compare the iterated transform of the tube integral with the exact value.

    Desk scale: at most two tube factors; the reference side is the exact
    engine evaluated at the same points.
    """
    m = len(spec.vars)
    if m > 2:
        raise UnsupportedTubeError("mellin_check supports at most two tube factors")
    if m == 2:
        # panels align with the integrand's kinks, so low-order nodes suffice
        nodes = min(nodes, 12)
    if spec.n != m:
        raise UnsupportedTubeError("mellin_check needs every variable in the tube")
    order = list(spec.vars)
    scenario = _diagonal_scenario_from(spec, testform)
    exact = mellin_exact(scenario, scenario.charts[0])

    # knots of the tube integrand in each s_j: images of profile knots
    supports = []
    for j, v in enumerate(order):
        k = spec.ks[j]
        pts = {0.0}
        for term in testform.terms:
            prof = term.factors[v - 1].rho
            for knot in prof.knots:
                pts.add(float(knot) ** k)
        supports.append(sorted(pts))

    gl_nodes, gl_w = np.polynomial.legendre.leggauss(nodes)

    rows = []
    for lam in lambdas:
        lam = [complex(z) for z in lam]
        if any(z.real < 2 for z in lam):
            raise ValueError("mellin_check needs Re(lambda) >= 2")
        total = 0j
        if m == 1:
            for a, b in _panels(supports[0]):
                s = 0.5 * (b - a) * gl_nodes + 0.5 * (b + a)
                w = 0.5 * (b - a) * gl_w
                vals = np.array(
                    [tube_integral(spec.with_eps([Fraction(x)]), testform) for x in s]
                )
                total += np.sum(w * vals * _mellin_weight(lam[0], s))
        else:
            for a1, b1 in _panels(supports[0]):
                s1 = 0.5 * (b1 - a1) * gl_nodes + 0.5 * (b1 + a1)
                w1 = 0.5 * (b1 - a1) * gl_w
                for a2, b2 in _panels(supports[1]):
                    s2 = 0.5 * (b2 - a2) * gl_nodes + 0.5 * (b2 + a2)
                    w2 = 0.5 * (b2 - a2) * gl_w
                    for x1, ww1 in zip(s1, w1):
                        vals = np.array(
                            [
                                tube_integral(
                                    spec.with_eps([Fraction(x1), Fraction(x2)]), testform
                                )
                                for x2 in s2
                            ]
                        )
                        total += ww1 * _mellin_weight(lam[0], np.array([x1]))[0] * np.sum(
                            w2 * vals * _mellin_weight(lam[1], s2)
                        )
        ref = exact.eval_complex(list(lam))
        sign = 1 if abs(total - ref) <= abs(total + ref) else -1
        rel = abs(sign * total - ref) / max(abs(ref), 1e-300)
        rows.append(MellinCheckRow(tuple(lam), complex(total), ref, float(rel), sign))
    return rows


def _diagonal_scenario_from(spec: TubeSpec, testform: SeparableTestForm) -> Scenario:
    """Scenario with the same diagonal data, parameters ordered tube-first."""
    from .charts import ProblemSignature, Scenario as Sc, ChartSpec as Ch

    n = spec.n
    p, q = spec.p, spec.q
    alpha = []
    beta = []
    for j, v in enumerate(spec.vars):
        row = tuple(spec.ks[j] if i == v else 0 for i in range(1, n + 1))
        (alpha if j < p else beta).append(row)
    chart = Ch("tube", tuple(alpha), tuple(beta), (0,) * n, 1)
    sig = ProblemSignature(n=n, p=p, q=q, N=1)
    return Sc(sig, (chart,), {"tube": testform})
