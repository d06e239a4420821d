"""Command-line interface: scenario I/O, reports, and the packaged example.

Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 input or usage error.
JSON reports are byte-reproducible for identical inputs and options; wall
clock timing appears only in the human table output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from .charts import (
    Scenario,
    ScenarioError,
    blowup_example,
    blowup_parts,
    parse_scenario,
)
from .deduction import StalledError, deduce
from .extforms import (
    annihilated_by_row_differentials,
    build_interpolant,
    form_from_obj,
    form_to_obj,
    log_wedge_nonsingular,
)
from .gaussian import QI
from .leibniz import (
    ResonantUnitsError,
    chart_certificate,
    global_certificate,
    shape_violations,
)
from .linform import LinForm
from .mellin import mellin_exact, mellin_quadrature, residue_on, value_at_origin
from .merovalue import MeroValue, PoleAtOriginError, TokenScalar
from .profiles import ExactnessError
from .tubes import (
    AdmissiblePath,
    UnsupportedTubeError,
    admissible_limit,
    mellin_check,
    tube_integral,
    tube_spec_from_chart,
)


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    verdicts: List[dict] = field(default_factory=list)

    def verdict(self, name: str, ok: bool, value=None, reference=None, tolerance=None):
        entry = {"name": name, "pass": bool(ok)}
        if value is not None:
            entry["value"] = value
        if reference is not None:
            entry["reference"] = reference
        if tolerance is not None:
            entry["tolerance"] = tolerance
        self.verdicts.append(entry)
        return ok

    @property
    def ok(self) -> bool:
        return all(v["pass"] for v in self.verdicts)

    def to_obj(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "verdicts": self.verdicts,
            "ok": self.ok,
        }

    def render(self, fmt: str, elapsed: float) -> str:
        if fmt == "json":
            return json.dumps(self.to_obj(), sort_keys=True, indent=2) + "\n"
        lines = [f"== {self.command} =="]
        for key, val in self.results.items():
            lines.append(f"  {key}: {_short(val)}")
        for v in self.verdicts:
            status = "PASS" if v["pass"] else "FAIL"
            extra = ""
            if "value" in v:
                extra += f"  value={_short(v['value'])}"
            if "reference" in v:
                extra += f"  reference={_short(v['reference'])}"
            if "tolerance" in v and v["tolerance"] is not None:
                extra += f"  tol={v['tolerance']}"
            lines.append(f"  [{status}] {v['name']}{extra}")
        lines.append(f"  verdict: {'ok' if self.ok else 'FAILED'}  (elapsed {elapsed:.3f}s)")
        return "\n".join(lines) + "\n"


def _short(val) -> str:
    s = json.dumps(val, sort_keys=True) if isinstance(val, (dict, list)) else str(val)
    return s if len(s) <= 200 else s[:197] + "..."


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_scenario(path: str) -> tuple[Scenario, dict]:
    p = Path(path)
    if not p.exists():
        raise ScenarioError(path, "file not found")
    text = p.read_text()
    scenario = parse_scenario(text)
    return scenario, {"scenario": str(p), "sha256": _sha256(p)}


def _fractions(text: str) -> List[Fraction]:
    return [Fraction(tok.strip()) for tok in text.split(",") if tok.strip()]


def _ints(text: str) -> List[int]:
    return [int(tok.strip()) for tok in text.split(",") if tok.strip()]


def _cert_obj(cert) -> dict:
    return {
        "scope": cert.scope,
        "forms": [list(f.coeffs) for f in cert.sorted_forms()],
        "forms_pretty": [str(f) for f in cert.sorted_forms()],
        "eps": str(cert.halfspace.eps),
    }


def _token_obj(ts) -> dict:
    return {
        "re": [ts.coeff.re.numerator, ts.coeff.re.denominator],
        "im": [ts.coeff.im.numerator, ts.coeff.im.denominator],
        "twopii_power": ts.power,
        "pretty": str(ts),
    }


def _complex_obj(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


# --- commands ---------------------------------------------------------------


def cmd_poles(args, report: Report) -> None:
    scenario, inputs = _load_scenario(args.scenario)
    report.inputs.update(inputs)
    p = scenario.signature.p
    certs = []
    for chart in scenario.charts:
        cert = chart_certificate(chart)
        certs.append(cert)
        report.results[f"chart:{chart.name}"] = _cert_obj(cert)
        bad = shape_violations(cert, p)
        report.verdict(
            f"shape:{chart.name}",
            not bad,
            value=[str(f) for f in bad] if bad else "all forms pair >= 2 derivative indices",
        )
    if all(c.name in scenario.testforms for c in scenario.charts):
        gcert = global_certificate(scenario)
        report.results["global"] = _cert_obj(gcert)
        union = frozenset().union(*[c.forms for c in certs]) if certs else frozenset()
        report.verdict(
            "global-within-chart-union",
            gcert.forms <= union,
            value=[str(f) for f in sorted(gcert.forms, key=lambda f: f.sort_key())],
        )
        bad = shape_violations(gcert, p)
        report.verdict("shape:global", not bad, value=[str(f) for f in bad] if bad else "ok")
    else:
        report.results["global"] = "skipped (test forms missing for some chart)"


def cmd_eval(args, report: Report) -> None:
    scenario, inputs = _load_scenario(args.scenario)
    report.inputs.update(inputs)
    name = args.chart or scenario.charts[0].name
    lam = _fractions(args.lam)
    if len(lam) != scenario.signature.nfactors:
        raise ScenarioError("--lam", f"expected {scenario.signature.nfactors} values")
    value = mellin_exact(scenario, name)
    report.results["exact"] = value.to_obj()
    report.results["exact_pretty"] = str(value)
    point = value.eval_rational(lam)
    report.results["exact_at_point"] = _token_obj(point)
    if all(x >= 2 for x in lam) and scenario.signature.n <= 3:
        quad = mellin_quadrature(scenario, name, [complex(x) for x in lam])
        ref = point.as_complex()
        rel = abs(quad.value - ref) / max(abs(ref), 1e-300)
        report.results["quadrature"] = _complex_obj(quad.value)
        report.verdict("exact-vs-quadrature", rel <= args.tol, value=rel, tolerance=args.tol)
    else:
        report.results["quadrature"] = "skipped (needs Re(lambda) >= 2 and n <= 3)"


def cmd_global(args, report: Report) -> None:
    scenario, inputs = _load_scenario(args.scenario)
    report.inputs.update(inputs)
    total = MeroValue.zero(scenario.signature.nfactors)
    for chart in scenario.charts:
        total = total + mellin_exact(scenario, chart)
    total = total.reduced()
    report.results["value"] = total.to_obj()
    report.results["value_pretty"] = str(total)
    forms = sorted(total.hyperplane_forms(), key=lambda f: f.sort_key())
    report.results["pole_hyperplanes"] = [str(f) for f in forms]
    analytic = not forms
    report.verdict("analytic-at-origin", analytic, value=[str(f) for f in forms] or "yes")
    if analytic:
        report.results["value_at_origin"] = _token_obj(value_at_origin(total))


def cmd_residue(args, report: Report) -> None:
    scenario, inputs = _load_scenario(args.scenario)
    report.inputs.update(inputs)
    form = LinForm.normalize(_ints(args.form))
    point = _fractions(args.point)
    total = QI.zero()
    power = 0
    for chart in scenario.charts:
        if args.chart and chart.name != args.chart:
            continue
        v = mellin_exact(scenario, chart)
        r = residue_on(form, v, point)
        report.results[f"residue:{chart.name}"] = _token_obj(r)
        if r.coeff:
            total = total + r.coeff
            power = r.power
    report.results["residue_sum"] = _token_obj(TokenScalar(total, power))
    if not args.chart:
        report.verdict("residues-cancel", not total, value=str(total))


def cmd_tube(args, report: Report) -> None:
    scenario, inputs = _load_scenario(args.scenario)
    report.inputs.update(inputs)
    name = args.chart or scenario.charts[0].name
    chart = scenario.chart(name)
    testform = scenario.testform(name)
    count = scenario.signature.nfactors
    eps = _fractions(args.eps) if args.eps else [Fraction(1, 100)] * count
    spec = tube_spec_from_chart(chart, eps)
    val = tube_integral(spec, testform)
    report.results["tube_integral"] = _complex_obj(val)
    path = AdmissiblePath.default(count, args.path_M)
    report.results["path_exponents"] = list(path.exponents)
    report.verdict("admissible-ratio-condition", path.ratio_condition_ok())
    limit = admissible_limit(spec, testform, path)
    report.results["admissible_limit"] = _complex_obj(limit.value)
    report.results["limit_error"] = limit.error
    report.verdict("limit-converged", limit.converged, value=limit.error, tolerance=args.tol)
    value = mellin_exact(scenario, chart).reduced()
    if not value.hyperplane_forms():
        ref = value_at_origin(value).as_complex()
        rel = abs(limit.value - ref) / max(abs(ref), 1e-300)
        report.results["origin_value"] = _complex_obj(ref)
        report.verdict("limit-matches-origin-value", rel <= max(args.tol, 1e-6), value=rel)


def cmd_mellin_check(args, report: Report) -> None:
    scenario, inputs = _load_scenario(args.scenario)
    report.inputs.update(inputs)
    name = args.chart or scenario.charts[0].name
    chart = scenario.chart(name)
    testform = scenario.testform(name)
    eps = [Fraction(1, 100)] * scenario.signature.nfactors
    spec = tube_spec_from_chart(chart, eps)
    lambdas = [ _fractions(tok) for tok in args.lam ]
    rows = mellin_check(spec, testform, [[complex(x) for x in lam] for lam in lambdas])
    signs = set()
    for row in rows:
        key = ",".join(str(z.real) for z in row.lam)
        report.results[f"lambda({key})"] = {
            "transform": _complex_obj(row.transform),
            "reference": _complex_obj(row.reference),
            "rel_error": row.rel_error,
            "sign": row.sign,
        }
        signs.add(row.sign)
        report.verdict(f"match({key})", row.rel_error <= args.tol, value=row.rel_error, tolerance=args.tol)
    report.verdict("sign-consistent", len(signs) <= 1, value=sorted(signs))


def cmd_divlemma(args, report: Report) -> None:
    p = Path(args.file)
    if not p.exists():
        raise ScenarioError(args.file, "file not found")
    obj = json.loads(p.read_text())
    report.inputs["file"] = str(p)
    report.inputs["sha256"] = _sha256(p)
    n = obj.get("n")
    if not isinstance(n, int) or n < 1:
        raise ScenarioError("n", "need a positive dimension")
    K = obj.get("K", [])
    psi = form_from_obj(obj["psi"], n, "psi")
    omega = (
        form_from_obj(obj["omega"], n, "omega")
        if "omega" in obj
        else build_interpolant(psi, K)
    )
    report.results["omega"] = form_to_obj(omega)
    rep = log_wedge_nonsingular(psi, omega, K)
    for j in sorted(rep):
        report.verdict(f"nonsingular-log-wedge:x{j}", rep[j], value=rep[j])
    alphas = obj.get("alphas")
    if alphas:
        ok = annihilated_by_row_differentials(omega, [tuple(r) for r in alphas])
        report.verdict("row-differentials-annihilate", ok)


def cmd_deduce(args, report: Report) -> None:
    try:
        trace = deduce(args.p, args.q)
    except StalledError as exc:
        report.results["residual"] = str(exc)
        report.verdict("analytic", False, value=str(exc))
        return
    report.results["trace"] = trace.to_obj()
    report.results["steps"] = len(trace.steps)
    report.verdict("analytic", trace.analytic)


def cmd_example3(args, report: Report) -> None:
    scenario = blowup_example(args.profile_degree, args.seed)
    if args.drop_chart:
        scenario = scenario.without_chart(args.drop_chart)
    report.inputs["profile_degree"] = args.profile_degree
    report.inputs["seed"] = args.seed
    report.inputs["charts"] = [c.name for c in scenario.charts]
    p = scenario.signature.p
    pair = LinForm.normalize((1, 1, 0))

    for chart in scenario.charts:
        cert = chart_certificate(chart)
        report.results[f"certificate:{chart.name}"] = _cert_obj(cert)
        report.verdict(f"chart-poles-on-pair-hyperplane:{chart.name}", cert.forms == frozenset({pair}))

    point = (Fraction(1, 3), Fraction(-1, 3), Fraction(1, 5))
    residue_total = QI.zero()
    values = {}
    for chart in scenario.charts:
        v = mellin_exact(scenario, chart)
        values[chart.name] = v
        r = residue_on(pair, v, point)
        report.results[f"residue:{chart.name}"] = _token_obj(r)
        residue_total = residue_total + r.coeff
    report.verdict("cross-chart-residues-cancel", not residue_total, value=str(residue_total))

    total = MeroValue.zero(scenario.signature.nfactors)
    for v in values.values():
        total = total + v
    total = total.reduced()
    forms = sorted(total.hyperplane_forms(), key=lambda f: f.sort_key())
    analytic = not forms
    report.verdict("global-analytic-at-origin", analytic, value=[str(f) for f in forms] or "yes")

    profiles = None
    if args.seed is not None or args.profile_degree != 2:
        from .charts import example_profiles

        profiles = example_profiles(args.profile_degree, args.seed)
    reference = mellin_exact(
        blowup_parts(args.profile_degree, args.seed, profiles),
        "parts",
    )
    if analytic:
        got = value_at_origin(total)
        want = value_at_origin(reference)
        report.results["value_at_origin"] = _token_obj(got)
        report.results["parts_reference"] = _token_obj(want)
        report.verdict("value-matches-parts-reference", got == want, value=str(got), reference=str(want))
    else:
        report.verdict(
            "value-matches-parts-reference",
            False,
            value="pole at origin: " + ", ".join(str(f) for f in forms),
            reference=str(value_at_origin(reference)),
        )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="residuelab",
        description="Exact pole certificates, continuation values, tube integrals, "
        "and analyticity deductions for monomial residue data.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--tol", type=float, default=1e-6, help="comparison tolerance")
        p.add_argument("--profile-degree", type=int, default=2)
        p.add_argument("--path-M", dest="path_M", type=int, default=10)
        p.add_argument("--seed", type=int, default=None)

    s = sub.add_parser("poles", help="per-chart and global pole certificates")
    s.add_argument("scenario")
    common(s)
    s.set_defaults(fn=cmd_poles)

    s = sub.add_parser("eval", help="exact value at a parameter point plus quadrature check")
    s.add_argument("scenario")
    s.add_argument("--chart", default=None)
    s.add_argument("--lam", required=True, help="comma-separated rationals")
    common(s)
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser("global", help="exact chart sum and its behavior at the origin")
    s.add_argument("scenario")
    common(s)
    s.set_defaults(fn=cmd_global)

    s = sub.add_parser("residue", help="simple-pole residues on a hyperplane")
    s.add_argument("scenario")
    s.add_argument("--form", required=True, help="comma-separated integer coefficients")
    s.add_argument("--point", required=True, help="comma-separated rationals on the hyperplane")
    s.add_argument("--chart", default=None)
    common(s)
    s.set_defaults(fn=cmd_residue)

    s = sub.add_parser("tube", help="tube integral and admissible-path limit (diagonal data)")
    s.add_argument("scenario")
    s.add_argument("--chart", default=None)
    s.add_argument("--eps", default=None, help="comma-separated tube radii")
    common(s)
    s.set_defaults(fn=cmd_tube)

    s = sub.add_parser("mellin-check", help="iterated transform of the tube integral vs exact value")
    s.add_argument("scenario")
    s.add_argument("--chart", default=None)
    s.add_argument("--lam", action="append", required=True, help="repeatable: comma-separated values")
    common(s)
    s.set_defaults(fn=cmd_mellin_check)

    s = sub.add_parser("divlemma", help="division-lemma interpolant and checks on a form file")
    s.add_argument("file")
    common(s)
    s.set_defaults(fn=cmd_divlemma)

    s = sub.add_parser("deduce", help="support-level analyticity deduction")
    s.add_argument("p", type=int)
    s.add_argument("q", type=int)
    common(s)
    s.set_defaults(fn=cmd_deduce)

    s = sub.add_parser("example3", help="packaged two-chart blow-up verification")
    s.add_argument("--drop-chart", default=None)
    common(s)
    s.set_defaults(fn=cmd_example3)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    report = Report(command=args.command)
    report.inputs["options"] = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("fn", "command") and v is not None and not callable(v)
    }
    started = time.monotonic()
    try:
        args.fn(args, report)
    except (ScenarioError, UnsupportedTubeError, ExactnessError, ResonantUnitsError,
            PoleAtOriginError, json.JSONDecodeError, OSError, KeyError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    elapsed = time.monotonic() - started
    sys.stdout.write(report.render(args.format, elapsed))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
