"""Data model for normal-crossings chart data and separable test forms.

Factor ordering convention: the engine numbers the continuation parameters
L1..L(p+q) with the antiholomorphic-derivative factors first (rows of
`alpha`, indices 1..p) and the principal-value factors last (rows of
`beta`, indices p+1..p+q).  Variable indices are 1-based throughout the
public API and the file format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .gaussian import QI
from .profiles import RadialProfile


class ScenarioError(ValueError):
    """Validation failure, carrying the path of the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


def _rational(v, path: str) -> Fraction:
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, int) for x in v):
        if v[1] == 0:
            raise ScenarioError(path, "zero denominator")
        return Fraction(v[0], v[1])
    if isinstance(v, int):
        return Fraction(v)
    raise ScenarioError(path, f"expected rational as [num, den], got {v!r}")


def _int(v, path: str, minimum: Optional[int] = None) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise ScenarioError(path, f"expected integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ScenarioError(path, f"must be >= {minimum}, got {v}")
    return v


@dataclass(frozen=True)
class ProblemSignature:
    n: int
    p: int
    q: int
    N: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ScenarioError("signature.n", "dimension must be >= 1")
        if self.p < 0 or self.q < 0:
            raise ScenarioError("signature", "p and q must be nonnegative")
        if self.p + self.q < 1:
            raise ScenarioError("signature", "need at least one factor (p+q >= 1)")
        if self.N < 1:
            raise ScenarioError("signature.N", "power must be >= 1")
        if self.p > self.n:
            raise ScenarioError("signature", "p cannot exceed the dimension n")

    @property
    def nfactors(self) -> int:
        return self.p + self.q


@dataclass(frozen=True)
class ChartSpec:
    name: str
    alpha: Tuple[Tuple[int, ...], ...]
    beta: Tuple[Tuple[int, ...], ...]
    jac: Tuple[int, ...]
    sign: int = 1
    unit_flags: Tuple[bool, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(tuple(r) for r in self.alpha))
        object.__setattr__(self, "beta", tuple(tuple(r) for r in self.beta))
        object.__setattr__(self, "jac", tuple(self.jac))
        if not self.unit_flags:
            object.__setattr__(
                self, "unit_flags", (False,) * (len(self.alpha) + len(self.beta))
            )

    @property
    def n(self) -> int:
        return len(self.jac)

    @property
    def p(self) -> int:
        return len(self.alpha)

    @property
    def q(self) -> int:
        return len(self.beta)

    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return self.alpha + self.beta

    def column(self, i: int) -> Tuple[int, ...]:
        """Exponents of variable x_i (1-based) across all factor rows."""
        return tuple(row[i - 1] for row in self.rows())

    def column_total(self, i: int) -> int:
        return sum(self.column(i))

    def max_column_total(self) -> int:
        return max((self.column_total(i) for i in range(1, self.n + 1)), default=0)

    def pv_divisor_vars(self) -> frozenset:
        """Variables dividing at least one principal-value factor monomial."""
        return frozenset(
            i for i in range(1, self.n + 1) if any(row[i - 1] > 0 for row in self.beta)
        )


def pv_divisor_vars(chart: ChartSpec) -> frozenset:
    return chart.pv_divisor_vars()


@dataclass(frozen=True)
class Factor:
    a: int
    b: int
    rho: RadialProfile

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("monomial exponents must be nonnegative")


@dataclass(frozen=True)
class SeparableTerm:
    coeff: QI
    factors: Tuple[Factor, ...]
    dbar_slots: frozenset

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "dbar_slots", frozenset(self.dbar_slots))


@dataclass(frozen=True)
class SeparableTestForm:
    terms: Tuple[SeparableTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True)
class Scenario:
    signature: ProblemSignature
    charts: Tuple[ChartSpec, ...]
    testforms: Mapping[str, SeparableTestForm] = field(default_factory=dict)
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "charts", tuple(self.charts))
        object.__setattr__(self, "testforms", dict(self.testforms))
        object.__setattr__(self, "metadata", dict(self.metadata))

    def chart(self, name: str) -> ChartSpec:
        for c in self.charts:
            if c.name == name:
                return c
        raise KeyError(f"no chart named {name!r}")

    def testform(self, name: str) -> SeparableTestForm:
        tf = self.testforms.get(name)
        if tf is None:
            raise KeyError(f"no test form for chart {name!r}")
        return tf

    def without_chart(self, name: str) -> "Scenario":
        self.chart(name)
        return Scenario(
            self.signature,
            tuple(c for c in self.charts if c.name != name),
            {k: v for k, v in self.testforms.items() if k != name},
            dict(self.metadata),
        )

    def to_obj(self) -> dict:
        sig = self.signature
        out = {
            "signature": {"n": sig.n, "p": sig.p, "q": sig.q, "N": sig.N},
            "charts": [
                {
                    "name": c.name,
                    "alpha": [list(r) for r in c.alpha],
                    "beta": [list(r) for r in c.beta],
                    "jac": list(c.jac),
                    "sign": c.sign,
                    **({"unit_flags": list(c.unit_flags)} if any(c.unit_flags) else {}),
                }
                for c in self.charts
            ],
            "testforms": {
                name: {
                    "terms": [
                        {
                            "coeff": {
                                "re": [t.coeff.re.numerator, t.coeff.re.denominator],
                                "im": [t.coeff.im.numerator, t.coeff.im.denominator],
                            },
                            "factors": [
                                {"a": f.a, "b": f.b, "rho": f.rho.to_obj()} for f in t.factors
                            ],
                            "dbar_slots": sorted(t.dbar_slots),
                        }
                        for t in tf.terms
                    ]
                }
                for name, tf in sorted(self.testforms.items())
            },
        }
        if self.metadata:
            out["metadata"] = self.metadata
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, **kw)


def parse_scenario(document) -> Scenario:
    """Validate a scenario document (dict, JSON string, or path-like of JSON)."""
    if isinstance(document, (str, bytes)):
        try:
            obj = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScenarioError("$", f"invalid JSON: {exc}") from exc
    elif hasattr(document, "read"):
        obj = json.load(document)
    else:
        obj = document
    if not isinstance(obj, dict):
        raise ScenarioError("$", "top level must be an object")

    sig_obj = obj.get("signature")
    if not isinstance(sig_obj, dict):
        raise ScenarioError("signature", "missing or not an object")
    sig = ProblemSignature(
        _int(sig_obj.get("n"), "signature.n", 1),
        _int(sig_obj.get("p"), "signature.p", 0),
        _int(sig_obj.get("q"), "signature.q", 0),
        _int(sig_obj.get("N", 1), "signature.N", 1),
    )

    charts_obj = obj.get("charts")
    if not isinstance(charts_obj, list) or not charts_obj:
        raise ScenarioError("charts", "need a nonempty chart list")
    charts = []
    names = set()
    for ci, c in enumerate(charts_obj):
        base = f"charts[{ci}]"
        if not isinstance(c, dict):
            raise ScenarioError(base, "expected object")
        name = c.get("name")
        if not isinstance(name, str) or not name:
            raise ScenarioError(f"{base}.name", "chart name must be a nonempty string")
        if name in names:
            raise ScenarioError(f"{base}.name", f"duplicate chart name {name!r}")
        names.add(name)
        alpha = _matrix(c.get("alpha", []), sig.p, sig.n, f"{base}.alpha")
        beta = _matrix(c.get("beta", []), sig.q, sig.n, f"{base}.beta")
        jac_obj = c.get("jac", [0] * sig.n)
        if not isinstance(jac_obj, list) or len(jac_obj) != sig.n:
            raise ScenarioError(f"{base}.jac", f"expected {sig.n} exponents")
        jac = tuple(_int(v, f"{base}.jac[{j}]", 0) for j, v in enumerate(jac_obj))
        sign = c.get("sign", 1)
        if sign not in (1, -1):
            raise ScenarioError(f"{base}.sign", "sign must be +1 or -1")
        flags_obj = c.get("unit_flags", [False] * sig.nfactors)
        if not isinstance(flags_obj, list) or len(flags_obj) != sig.nfactors:
            raise ScenarioError(f"{base}.unit_flags", f"expected {sig.nfactors} booleans")
        flags = tuple(bool(v) for v in flags_obj)
        for ri, row in enumerate(alpha):
            if not any(row) and not flags[ri]:
                raise ScenarioError(
                    f"{base}.alpha[{ri}]",
                    "zero exponent row needs an explicit unit flag",
                )
        charts.append(ChartSpec(name, alpha, beta, jac, sign, flags))

    testforms: Dict[str, SeparableTestForm] = {}
    tf_obj = obj.get("testforms", {})
    if not isinstance(tf_obj, dict):
        raise ScenarioError("testforms", "expected object keyed by chart name")
    for name, body in tf_obj.items():
        base = f"testforms[{name!r}]"
        if name not in names:
            raise ScenarioError(base, "no chart with this name")
        terms_obj = body.get("terms") if isinstance(body, dict) else None
        if not isinstance(terms_obj, list):
            raise ScenarioError(f"{base}.terms", "expected a term list")
        terms = []
        for ti, t in enumerate(terms_obj):
            tb = f"{base}.terms[{ti}]"
            if not isinstance(t, dict):
                raise ScenarioError(tb, "expected object")
            co = t.get("coeff", {})
            coeff = QI(
                _rational(co.get("re", [0, 1]), f"{tb}.coeff.re"),
                _rational(co.get("im", [0, 1]), f"{tb}.coeff.im"),
            )
            fs = t.get("factors")
            if not isinstance(fs, list) or len(fs) != sig.n:
                raise ScenarioError(f"{tb}.factors", f"expected {sig.n} per-variable factors")
            factors = []
            for fi, f in enumerate(fs):
                fb = f"{tb}.factors[{fi}]"
                if not isinstance(f, dict):
                    raise ScenarioError(fb, "expected object")
                a = _int(f.get("a", 0), f"{fb}.a", 0)
                b = _int(f.get("b", 0), f"{fb}.b", 0)
                rho = RadialProfile.from_obj(f.get("rho"), f"{fb}.rho")
                factors.append(Factor(a, b, rho))
            slots_obj = t.get("dbar_slots", [])
            if not isinstance(slots_obj, list):
                raise ScenarioError(f"{tb}.dbar_slots", "expected index list")
            slots = [
                _int(v, f"{tb}.dbar_slots[{si}]", 1) for si, v in enumerate(slots_obj)
            ]
            if any(v > sig.n for v in slots):
                raise ScenarioError(f"{tb}.dbar_slots", f"index out of range 1..{sig.n}")
            if len(set(slots)) != len(slots):
                raise ScenarioError(f"{tb}.dbar_slots", "indices must be distinct")
            if len(slots) != sig.n - sig.p:
                raise ScenarioError(
                    f"{tb}.dbar_slots",
                    f"need exactly n-p = {sig.n - sig.p} antiholomorphic slots",
                )
            terms.append(SeparableTerm(coeff, tuple(factors), frozenset(slots)))
        testforms[name] = SeparableTestForm(tuple(terms))

    metadata = obj.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ScenarioError("metadata", "expected object")
    return Scenario(sig, tuple(charts), testforms, metadata)


def _matrix(rows, nrows: int, ncols: int, path: str) -> Tuple[Tuple[int, ...], ...]:
    if not isinstance(rows, list) or len(rows) != nrows:
        raise ScenarioError(path, f"expected {nrows} rows")
    out = []
    for ri, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != ncols:
            raise ScenarioError(f"{path}[{ri}]", f"expected {ncols} entries")
        out.append(
            tuple(_int(v, f"{path}[{ri}][{j}]", 0) for j, v in enumerate(row))
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# Built-in axis blow-up example and companion scenarios.
#
# Base data in C^3: one principal-value factor x1 and two derivative factors
# x2 and x2*x3-shaped after blowing up along the x1-axis.  The test function
# is phi1(x1)*phi2(x2)*phi3(x3) dx ^ conj(dx1) with phi1 the conjugate
# derivative of a bump phi.  Parameter order: L1, L2 for the two derivative
# factors, L3 for the principal-value factor.
# ---------------------------------------------------------------------------


def example_profiles(profile_degree: int = 2, seed: Optional[int] = None):
    """Bump profiles (phi, phi2, phi3), each nonvanishing at 0 and zero at t=1.

    With a seed, multiplies each bump by a random positive-at-zero linear
    factor; the golden identities hold for every admissible choice.
    """
    if profile_degree < 1:
        raise ValueError("profile degree must be >= 1 so profiles vanish at the support edge")
    base = RadialProfile.bump(profile_degree)
    if seed is None:
        return base, base, base
    import random

    rng = random.Random(seed)

    def jitter():
        c0 = Fraction(rng.randint(1, 8), rng.randint(1, 4))
        c1 = Fraction(rng.randint(-4, 4), rng.randint(2, 5))
        return base.mul_poly([c0, c1])

    return jitter(), jitter(), jitter()


def _unit_indicator() -> RadialProfile:
    return RadialProfile.on_unit([1])


def _poly_coeffs(rho: RadialProfile) -> Tuple[Fraction, ...]:
    if rho.is_zero():
        return ()
    if not rho.is_exact_class():
        raise ValueError("profile must live on [0,1] for the built-in construction")
    return rho.pieces[0]


def blowup_example(
    profile_degree: int = 2, seed: Optional[int] = None, profiles=None
) -> Scenario:
    """Two-chart axis blow-up scenario whose factor pullbacks are genuine.

    Chart "z" covers |x3/x2| bounded, chart "zeta" the reciprocal patch; the
    partition of unity on the exceptional line is the exact indicator split
    at radius 1, so every radial integral stays rational.
    """
    rho_phi, rho2, rho3 = profiles if profiles is not None else example_profiles(
        profile_degree, seed
    )
    if rho_phi.value_at_zero() == 0 or rho2.value_at_zero() == 0 or rho3.value_at_zero() == 0:
        raise ValueError("profiles must not vanish at the origin")
    sig = ProblemSignature(n=3, p=2, q=1, N=1)
    chart_z = ChartSpec(
        "z", alpha=((0, 1, 0), (0, 1, 1)), beta=((1, 0, 0),), jac=(0, 1, 0), sign=1
    )
    chart_zeta = ChartSpec(
        "zeta", alpha=((0, 1, 1), (0, 1, 0)), beta=((1, 0, 0),), jac=(0, 1, 0), sign=-1
    )
    dphi = rho_phi.derivative()
    part = _unit_indicator()

    def pullback_terms(inner: RadialProfile, composed: RadialProfile):
        # composed(w) = P(|w|^2) restricted to |w| <= 1; substituting the
        # product of two unit-disc variables turns t^j into paired exponents.
        terms = []
        for j, c in enumerate(_poly_coeffs(composed)):
            if not c:
                continue
            terms.append(
                SeparableTerm(
                    QI.of(c),
                    (
                        Factor(1, 0, dphi),
                        Factor(j, j, inner),
                        Factor(j, j, part),
                    ),
                    frozenset({1}),
                )
            )
        return SeparableTestForm(tuple(terms))

    testforms = {
        "z": pullback_terms(rho2, rho3),
        "zeta": pullback_terms(rho3, rho2),
    }
    metadata = {
        "substitutions": {
            "z": [[1, 0, 0], [0, 1, 0], [0, 1, 1]],
            "zeta": [[1, 0, 0], [0, 1, 1], [0, 1, 0]],
        },
        "base_alpha": [[0, 1, 0], [0, 0, 1]],
        "base_beta": [[1, 0, 0]],
        "profile_values_at_zero": {
            "phi": str(rho_phi.value_at_zero()),
            "phi2": str(rho2.value_at_zero()),
            "phi3": str(rho3.value_at_zero()),
        },
    }
    return Scenario(sig, (chart_z, chart_zeta), testforms, metadata)


def blowup_base(profile_degree: int = 2, seed: Optional[int] = None, profiles=None) -> Scenario:
    """The same integral before blowing up: a single identity chart."""
    rho_phi, rho2, rho3 = profiles if profiles is not None else example_profiles(
        profile_degree, seed
    )
    sig = ProblemSignature(n=3, p=2, q=1, N=1)
    chart = ChartSpec(
        "base", alpha=((0, 1, 0), (0, 0, 1)), beta=((1, 0, 0),), jac=(0, 0, 0), sign=1
    )
    term = SeparableTerm(
        QI.one(),
        (Factor(1, 0, rho_phi.derivative()), Factor(0, 0, rho2), Factor(0, 0, rho3)),
        frozenset({1}),
    )
    return Scenario(sig, (chart,), {"base": SeparableTestForm((term,))})


def blowup_parts(profile_degree: int = 2, seed: Optional[int] = None, profiles=None) -> Scenario:
    """Independent reference: both derivative factors moved onto the test
    function by integration by parts, leaving a principal-value-only integral."""
    rho_phi, rho2, rho3 = profiles if profiles is not None else example_profiles(
        profile_degree, seed
    )
    if rho2.value(Fraction(1)) != 0 or rho3.value(Fraction(1)) != 0:
        raise ValueError("integration by parts needs profiles vanishing at the support edge")
    sig = ProblemSignature(n=3, p=0, q=3, N=1)
    chart = ChartSpec(
        "parts",
        alpha=(),
        beta=((0, 1, 0), (0, 0, 1), (1, 0, 0)),
        jac=(0, 0, 0),
        sign=1,
    )
    term = SeparableTerm(
        QI.one(),
        (
            Factor(1, 0, rho_phi.derivative()),
            Factor(1, 0, rho2.derivative()),
            Factor(1, 0, rho3.derivative()),
        ),
        frozenset({1, 2, 3}),
    )
    return Scenario(sig, (chart,), {"parts": SeparableTestForm((term,))})


def diagonal_scenario(
    ks: Sequence[int],
    p: int,
    N: int = 1,
    factors: Optional[Sequence[Factor]] = None,
    name: str = "diag",
) -> Scenario:
    """Scenario for f_i = x_i^{k_i} on distinct variables, first p under dbar.

    Without explicit factors, picks per-variable data with zero angular twist
    so the value is nonzero: a = N*k (+ b adjustments) against a unit bump.
    """
    n = len(ks)
    q = n - p
    sig = ProblemSignature(n=n, p=p, q=q, N=N)
    alpha = tuple(
        tuple(ks[i] if j == i else 0 for j in range(n)) for i in range(p)
    )
    beta = tuple(
        tuple(ks[i] if j == i else 0 for j in range(n)) for i in range(p, n)
    )
    chart = ChartSpec(name, alpha, beta, (0,) * n, 1)
    if factors is None:
        bump = RadialProfile.bump(2)
        fs = []
        for i in range(n):
            if i < p:
                # Cauchy-type pairing: angular twist zero on the circle slot
                # and a nonzero limit at the origin.
                fs.append(Factor(N * ks[i] - 1, 0, bump))
            else:
                fs.append(Factor(N * ks[i], 0, bump))
        factors = tuple(fs)
    term = SeparableTerm(QI.one(), tuple(factors), frozenset(range(p + 1, n + 1)))
    return Scenario(sig, (chart,), {name: SeparableTestForm((term,))})
