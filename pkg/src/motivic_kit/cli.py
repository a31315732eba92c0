"""Command line front end: ``motivic-kit <command> ...``.

Every command builds a RunReport of named results and golden checks.  The
exit status is 0 iff every check passed and nothing raised.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import List, Optional, Tuple

from . import __version__
from .counting import (
    CONGRUENCE,
    CONTACT,
    JET,
    DenominatorShape,
    assemble_series,
    count_congruence,
    count_contact,
    count_jet_points,
    count_series,
    fit_rational,
    verify_rational,
)
from .errors import MotivicKitError, PoleAtOne, SchemaError
from .exactalg import (
    CLASS,
    Factor,
    MPoly,
    RatFunc,
    TermSum,
    TruncSeries,
    eval_at_prime,
    format_rational,
    parse_poly,
    parse_ratfunc,
    parse_rational,
    ratfunc_series,
    series_expand,
    specialize_chi,
    specialize_hodge,
)
from .invariants import (
    J_from_Z,
    SeifertData,
    birational_terms,
    candidate_poles,
    extract_poles,
    factored_form,
    fermat_terms,
    monodromy_check,
    motivic_volume,
    motivic_zeta,
    nc_integral,
    seifert_e_st,
    stringy_invariants,
    stringy_zeta,
    z_top,
    limit_s1,
)
from .jets import AffineSystem, jet_equations
from .strata import SingularityClass, check_additivity, classify, load_resolution

COUNT_MODES = {"congruence": CONGRUENCE, "jet": JET, "contact": CONTACT}


# -- reports ------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    expected: str
    actual: str


@dataclass
class RunReport:
    command: str
    inputs_digest: str = ""
    results: List[Tuple[str, object]] = field(default_factory=list)
    checks: List[Check] = field(default_factory=list)
    elapsed: Optional[float] = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, value):
        self.results.append((name, value))

    def check(self, name: str, passed: bool, expected, actual):
        self.checks.append(Check(name, bool(passed), str(expected), str(actual)))

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "results": {k: v for k, v in self.results},
            "checks": [c.__dict__ for c in self.checks],
            "ok": self.ok,
        }

    def to_text(self) -> str:
        out = [f"command: {self.command}", f"inputs: {self.inputs_digest}"]
        for k, v in self.results:
            if isinstance(v, str) and "\n" in v:
                out.append(f"{k}:")
                out.extend("  " + line for line in v.rstrip("\n").splitlines())
            elif isinstance(v, (dict, list)):
                out.append(f"{k} = {json.dumps(v, sort_keys=True)}")
            else:
                out.append(f"{k} = {v}")
        for c in self.checks:
            if c.passed:
                out.append(f"[PASS] {c.name}")
            else:
                out.append(f"[FAIL] {c.name}: expected {c.expected}, actual {c.actual}")
        if self.checks:
            passed = sum(c.passed for c in self.checks)
            out.append(f"{passed}/{len(self.checks)} checks passed")
        return "\n".join(out) + "\n"


def _digest(blobs: List[bytes]) -> str:
    h = hashlib.sha256()
    for b in blobs:
        h.update(hashlib.sha256(b).digest())
    return "sha256:" + h.hexdigest()


# -- inputs -------------------------------------------------------------------


def data_dir():
    return resources.files("motivic_kit") / "data"


def bundled_names() -> List[str]:
    return sorted(p.name for p in data_dir().iterdir() if p.name.endswith((".json", ".poly")))


def _resolve(path: str, hint: Optional[str] = None):
    """A filesystem path, or the name of a bundled document.

    For bundled names the context may be left out: ``cusp.json`` resolves
    to ``cusp_zeta.json`` when a zeta document is wanted.
    """
    if os.path.exists(path):
        return path
    base = data_dir()
    if (base / path).is_file():
        return base / path
    if hint:
        stem, ext = os.path.splitext(os.path.basename(path))
        alt = base / f"{stem}_{hint}{ext}"
        if alt.is_file():
            return alt
    raise SchemaError(f"no such file {path!r}")


class Inputs:
    def __init__(self):
        self.blobs: List[bytes] = []

    def read(self, path: str, hint: Optional[str] = None) -> bytes:
        p = _resolve(path, hint)
        blob = p.read_bytes() if hasattr(p, "read_bytes") else open(p, "rb").read()
        self.blobs.append(blob)
        return blob

    def document(self, path: str, hint: Optional[str] = None) -> dict:
        blob = self.read(path, hint)
        try:
            raw = json.loads(blob)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise SchemaError(f"{path}: document must be a JSON object")
        return raw

    def system(self, path: str) -> AffineSystem:
        return AffineSystem.parse(self.read(path).decode())


def load_seifert(raw: dict) -> SeifertData:
    try:
        return SeifertData(
            g=int(raw.get("g", 0)),
            kappa=int(raw["kappa"]),
            chains=tuple((int(n), int(q)) for n, q in raw["chains"]),
            chi_complement=parse_rational(raw.get("chi_complement", 0)),
            d=None if raw.get("d") is None else int(raw["d"]),
            chi_symbol=raw.get("chi_symbol"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad Seifert document: {exc}") from exc


def load_fermat(raw: dict) -> List[dict]:
    cases = raw.get("cases")
    if not isinstance(cases, list) or not cases:
        raise SchemaError("fermat document needs a nonempty list of cases")
    out = []
    for i, c in enumerate(cases):
        try:
            d, k = int(c["d"]), int(c["k"])
        except (KeyError, TypeError, ValueError):
            raise SchemaError(f"cases[{i}]: needs integer d and k") from None
        if d < 1 or k < 1:
            raise SchemaError(f"cases[{i}]: d and k must be positive")
        e = parse_poly(c["classE"]) if c.get("classE") is not None else None
        out.append({"d": d, "k": k, "classE": e})
    return out


def _kind(raw: dict) -> str:
    return raw.get("kind", "resolution")


# -- comparison helpers ---------------------------------------------------------


def _check_ratfunc(report: RunReport, name: str, expected: str, actual: RatFunc, values=None):
    exp = parse_ratfunc(expected)
    if values:
        exp = exp.subs(values)
    report.check(name, exp == actual, expected, actual)


def _check_rational(report: RunReport, name: str, expected, actual: Fraction):
    report.check(name, parse_rational(expected) == actual, expected, format_rational(actual))


def _fmt_list(values) -> List[str]:
    return [format_rational(v) for v in values]


# -- document commands ----------------------------------------------------------


def _zeta_oracles(report: RunReport, data, z: TermSum, oracle: dict, budget=None, threads=1):
    """Point counts against the zeta function and the jet classes."""
    sys_ = AffineSystem.parse(oracle["poly"])
    m = sys_.num_vars
    primes = [int(p) for p in oracle.get("primes", [2, 3])]
    max_level = int(oracle.get("max_level", 4))
    coeffs = series_expand(z, max_level).coeffs
    for p in primes:
        for n in range(max_level + 1):
            expected = (coeffs[n] * RatFunc.coerce(p ** (m * n))).subs({"L": p})
            got = count_contact(sys_, p, n, budget, threads)
            report.check(f"contact count p={p} n={n}", expected == RatFunc.coerce(got), expected, got)
    classes = data.extra.get("expected", {}).get("jet_classes", [])
    for p in primes:
        for n, cls in enumerate(classes[: int(oracle.get("jet_levels", len(classes)))]):
            expected = eval_at_prime(parse_poly(cls), p)
            got = count_jet_points(jet_equations(sys_, n), p, budget, threads)
            report.check(f"jet points p={p} n={n}", expected == got, expected, got)


def cmd_zeta(args, report: RunReport, inputs: Inputs):
    data = load_resolution(inputs.document(args.input, "zeta"))
    z = motivic_zeta(data)
    Z = z.to_ratfunc()
    J = J_from_Z(z, data.ambient_dim)
    report.add("terms", str(z))
    report.add("motivic_zeta", str(Z))
    report.add("J", str(J))
    expected = data.extra.get("expected", {})
    classes = expected.get("jet_classes", [])
    order = max(args.order, len(classes) - 1)
    series = ratfunc_series(J, "T", order)
    report.add("jet_classes", [str(c) for c in series.coeffs])
    if "total_chi" in data.extra:
        report.check("chi additivity", check_additivity(data, data.extra["total_chi"]), data.extra["total_chi"],
                     format_rational(sum((s.chi for s in data.strata), Fraction(0))))
    if "motivic_zeta" in expected:
        _check_ratfunc(report, "motivic_zeta", expected["motivic_zeta"], Z)
    if "J" in expected:
        _check_ratfunc(report, "J", expected["J"], J)
    for n, cls in enumerate(classes):
        _check_ratfunc(report, f"jet class n={n}", cls, series.coeffs[n])
    oracle = data.extra.get("oracle")
    if oracle and not args.no_oracle:
        _zeta_oracles(report, data, z, oracle, args.budget, args.threads)


def cmd_ztop(args, report: RunReport, inputs: Inputs):
    data = load_resolution(inputs.document(args.input, "zeta"))
    zt = z_top(data)
    cands = candidate_poles(data)
    poles = extract_poles(zt, cands)
    report.add("z_top", str(zt))
    report.add("z_top_factored", factored_form(zt, poles))
    report.add("poles", _fmt_list(poles.locations))
    report.add("pole_orders", [k for _, k in poles])
    report.check("poles among candidates", set(poles.locations) <= set(cands), _fmt_list(sorted(set(cands))),
                 _fmt_list(poles.locations))
    expected = data.extra.get("expected", {})
    if "z_top" in expected:
        _check_ratfunc(report, "z_top", expected["z_top"], zt)
    if "poles" in expected:
        want = sorted(parse_rational(p) for p in expected["poles"])
        report.check("poles", want == sorted(poles.locations), _fmt_list(want), _fmt_list(poles.locations))
    exponents = args.exponents if args.exponents is not None else data.extra.get("monodromy_exponents")
    if exponents is not None:
        _monodromy(report, poles, exponents)


def _monodromy(report: RunReport, poles, exponents):
    verdicts = monodromy_check(poles, exponents)
    report.add("monodromy", [str(v) for v in verdicts])
    for v in verdicts:
        report.check(f"monodromy s0={format_rational(v.pole)}", v.satisfied,
                     f"exponent in {{{', '.join(_fmt_list(sorted(map(parse_rational, exponents))))}}}",
                     format_rational(v.exponent))


def cmd_check_monodromy(args, report: RunReport, inputs: Inputs):
    if args.input:
        data = load_resolution(inputs.document(args.input, "zeta"))
        zt = z_top(data)
        poles = extract_poles(zt, candidate_poles(data))
        exponents = args.exponents if args.exponents is not None else data.extra.get("monodromy_exponents")
    else:
        if args.poles is None:
            raise UsageError("--input or --poles is required")
        from .invariants import PoleList

        poles = PoleList(tuple((p, 1) for p in sorted(set(args.poles))))
        exponents = args.exponents
    if exponents is None:
        raise UsageError("--exponents is required (the document lists no monodromy exponents)")
    report.add("poles", _fmt_list(poles.locations))
    _monodromy(report, poles, exponents)


def cmd_volume(args, report: RunReport, inputs: Inputs):
    data = load_resolution(inputs.document(args.input, "volume"))
    v = motivic_volume(data)
    value = v.to_ratfunc()
    chi = specialize_chi(v)
    report.add("terms", str(v))
    report.add("volume", str(value))
    report.add("arc_euler", format_rational(chi))
    expected = data.extra.get("expected", {})
    if "volume" in expected:
        _check_ratfunc(report, "volume", expected["volume"], value)
    if "arc_euler" in expected:
        _check_rational(report, "arc_euler", expected["arc_euler"], chi)


def cmd_nc_integral(args, report: RunReport, inputs: Inputs):
    data = load_resolution(inputs.document(args.input, "nc_integral"))
    v = nc_integral(data)
    value = v.to_ratfunc()
    report.add("terms", str(v))
    report.add("nc_integral", str(value))
    expected = data.extra.get("expected", {})
    if "nc_integral" in expected:
        _check_ratfunc(report, "nc_integral", expected["nc_integral"], value)


def _fermat(report: RunReport, cases: List[dict]):
    L = MPoly.var("L")
    for c in cases:
        d, k, E = c["d"], c["k"], c["classE"]
        tag = f"d={d} k={k}"
        a = d + 1 - k
        cls = classify([a])
        report.add(f"{tag} class", str(cls))
        lt = cls.rank <= SingularityClass.LOG_TERMINAL.rank
        slc = cls is SingularityClass.STRICTLY_LOG_CANONICAL
        nlc = cls is SingularityClass.NOT_LOG_CANONICAL
        want = "log terminal" if k < d + 1 else "strictly log canonical" if k == d + 1 else "not log canonical"
        got = "log terminal" if lt else "strictly log canonical" if slc else "not log canonical" if nlc else str(cls)
        report.check(f"{tag} trichotomy", want == got, want, got)
        if E is None:
            continue
        stringy, volume, X = fermat_terms(d, k, E)
        open_part = (L - 1) * E
        if stringy is not None:
            want_st = TermSum(CLASS, [(open_part, []), (E, [Factor(d + 1 - k)])])
            report.add(f"{tag} calE_st", str(stringy.to_ratfunc()))
            report.check(f"{tag} calE_st termwise", stringy.same_terms(want_st), want_st, stringy)
        want_vol = TermSum(CLASS, [(open_part, []), (E, [Factor(d)])])
        report.add(f"{tag} volume", str(volume.to_ratfunc()))
        report.check(f"{tag} volume termwise", volume.same_terms(want_vol), want_vol, volume)
        report.add(f"{tag} [X]", str(X))
        report.check(f"{tag} [X]", X == open_part + 1, open_part + 1, X)


def cmd_stringy(args, report: RunReport, inputs: Inputs):
    raw = inputs.document(args.input, "stringy")
    if _kind(raw) == "fermat":
        _fermat(report, load_fermat(raw))
        return
    data = load_resolution(raw)
    st = stringy_invariants(data)
    cls = classify([c.a for c in data.components])
    report.add("class", str(cls))
    report.add("e_st", format_rational(st.e_st))
    if st.E_st is not None:
        report.add("E_st", str(st.E_st.to_ratfunc()))
    if st.calE_st is not None:
        report.add("calE_st", str(st.calE_st.to_ratfunc()))
    # specialization chain: class level -> Hodge level -> Euler characteristic
    if st.calE_st is not None and st.E_st is not None:
        down = specialize_hodge(st.calE_st)
        report.check("chain calE_st -> E_st", down.to_ratfunc() == st.E_st.to_ratfunc(), st.E_st, down)
    if st.E_st is not None:
        report.check("chain E_st -> e_st", specialize_chi(st.E_st) == st.e_st, format_rational(st.e_st),
                     format_rational(specialize_chi(st.E_st)))
    if st.calE_st is not None:
        report.check("chain calE_st -> e_st", specialize_chi(st.calE_st) == st.e_st, format_rational(st.e_st),
                     format_rational(specialize_chi(st.calE_st)))
    expected = data.extra.get("expected", {})
    if "e_st" in expected:
        _check_rational(report, "e_st", expected["e_st"], st.e_st)
    if "E_st" in expected and st.E_st is not None:
        _check_ratfunc(report, "E_st", expected["E_st"], st.E_st.to_ratfunc())
    if "calE_st" in expected and st.calE_st is not None:
        _check_ratfunc(report, "calE_st", expected["calE_st"], st.calE_st.to_ratfunc())
    if "class" in expected:
        report.check("class", expected["class"] == str(cls), expected["class"], cls)


def _with_offset(value: str, symbol: Optional[str]) -> str:
    return f"{value} + {symbol}" if symbol else value


def cmd_stringy_zeta(args, report: RunReport, inputs: Inputs):
    data = load_resolution(inputs.document(args.input, "stringy_zeta"))
    z = stringy_zeta(data)
    offset = data.offset_symbol
    report.add("stringy_zeta", _with_offset(str(z), offset))
    expected = data.extra.get("expected", {})
    try:
        lim = limit_s1(z)
    except PoleAtOne as exc:
        report.add("limit_s1", f"pole of order {exc.multiplicity} at s = 1")
        lim = None
    else:
        report.add("limit_s1", _with_offset(format_rational(lim), offset))
    if "stringy_zeta" in expected:
        _check_ratfunc(report, "stringy_zeta", expected["stringy_zeta"], z)
    if "limit_s1" in expected:
        if lim is None:
            report.check("limit_s1", False, expected["limit_s1"], "pole at s = 1")
        else:
            _check_rational(report, "limit_s1", expected["limit_s1"], lim)


def cmd_seifert(args, report: RunReport, inputs: Inputs):
    raw = inputs.document(args.input)
    if _kind(raw) != "seifert":
        raise SchemaError("expected a document of kind 'seifert'")
    sd = load_seifert(raw)
    res = seifert_e_st(sd)
    report.add("a", format_rational(res.a))
    report.add("e_st", _with_offset(format_rational(res.e_st), sd.chi_symbol))
    report.add("d_derived", res.d_derived)
    if sd.d is not None:
        report.check("d consistency", abs(res.d_derived) == sd.d, sd.d, abs(res.d_derived))
    expected = raw.get("expected", {})
    if "a" in expected:
        _check_rational(report, "a", expected["a"], res.a)
    if "e_st" in expected:
        _check_rational(report, "e_st", expected["e_st"], res.e_st)


def cmd_classify(args, report: RunReport, inputs: Inputs):
    if args.a is not None:
        cls = classify(args.a)
        report.add("class", str(cls))
        if args.expect:
            report.check("class", args.expect == str(cls), args.expect, cls)
        return
    if not args.input:
        raise UsageError("--input or --a is required")
    raw = inputs.document(args.input, "stringy")
    if _kind(raw) == "fermat":
        for c in load_fermat(raw):
            report.add(f"d={c['d']} k={c['k']} class", str(classify([c["d"] + 1 - c["k"]])))
        return
    data = load_resolution(raw)
    a_values = [c.a if c.a is not None else c.nu for c in data.components]
    cls = classify(a_values)
    report.add("class", str(cls))
    want = args.expect or data.extra.get("expected", {}).get("class")
    if want:
        report.check("class", want == str(cls), want, cls)


def cmd_identity(args, report: RunReport, inputs: Inputs):
    data = load_resolution(inputs.document(args.input, "identity"))
    terms = birational_terms(data)
    lhs = parse_poly(data.extra.get("lhs_class", "L^" + str(data.ambient_dim)))
    value = terms.to_ratfunc()
    chi = specialize_chi(terms)
    report.add("terms", str(terms))
    report.add("class_sum", str(value))
    report.add("chi_sum", format_rational(chi))
    report.check("class identity", value == RatFunc(lhs), lhs, value)
    lhs_chi = lhs.evaluate({"L": 1}) if lhs.vars else lhs.constant_value()
    report.check("chi identity", chi == lhs_chi, format_rational(lhs_chi), format_rational(chi))
    if "total_chi" in data.extra:
        report.check("chi additivity", check_additivity(data, data.extra["total_chi"]), data.extra["total_chi"],
                     format_rational(sum((s.chi for s in data.strata), Fraction(0))))


# -- polynomial commands --------------------------------------------------------


def cmd_jets(args, report: RunReport, inputs: Inputs):
    js = jet_equations(inputs.system(args.poly_file), args.level)
    report.add("variables", js.variables)
    report.add("equations", js.to_text())


def cmd_count(args, report: RunReport, inputs: Inputs):
    sys_ = inputs.system(args.poly_file)
    start = time.perf_counter()
    mode = COUNT_MODES[args.mode]
    if mode == CONGRUENCE:
        value = count_congruence(sys_, args.prime, args.level, args.budget, args.threads)
    elif mode == CONTACT:
        value = count_contact(sys_, args.prime, args.level, args.budget, args.threads)
    else:
        value = count_jet_points(jet_equations(sys_, args.level), args.prime, args.budget, args.threads)
    report.elapsed = time.perf_counter() - start
    report.add("count", value)
    report.add("record", {"mode": args.mode, "p": args.prime, "n": args.level, "count": value})
    if args.expect is not None:
        report.check("count", value == args.expect, args.expect, value)


def _series_arg(args, inputs: Inputs) -> TruncSeries:
    if args.series is not None:
        return TruncSeries(args.series, "T")
    if not args.poly_file:
        raise UsageError("--poly-file or --series is required")
    if args.prime is None or args.terms is None:
        raise UsageError("--prime and --terms are required with --poly-file")
    sys_ = inputs.system(args.poly_file)
    cs = count_series(sys_, args.prime, COUNT_MODES[args.mode], args.terms - 1, args.budget, args.threads)
    return assemble_series(cs)


def cmd_fit(args, report: RunReport, inputs: Inputs):
    series = _series_arg(args, inputs)
    if args.prime is None:
        raise UsageError("--prime is required")
    report.add("series", [str(c) for c in series.coeffs])
    fit = fit_rational(series, args.shape, args.prime, args.num_degree)
    report.add("fit", "NoFit" if fit is None else str(fit))
    if args.expect:
        if fit is None:
            report.check("fit", False, args.expect, "NoFit")
        else:
            _check_ratfunc(report, "fit", args.expect, fit, {"p": args.prime})


def cmd_verify(args, report: RunReport, inputs: Inputs):
    series = _series_arg(args, inputs)
    f = parse_ratfunc(args.closed_form)
    if args.prime is not None:
        f = f.subs({"p": args.prime})
    report.add("series", [str(c) for c in series.coeffs])
    ok = verify_rational(series, f)
    report.add("verified", ok)
    report.check("closed form", ok, args.closed_form, "match" if ok else "mismatch")


# -- selftest -------------------------------------------------------------------

CONTEXT_COMMANDS = {
    "zeta": [cmd_zeta, cmd_ztop],
    "volume": [cmd_volume],
    "nc-integral": [cmd_nc_integral],
    "stringy": [cmd_stringy],
    "stringy-zeta": [cmd_stringy_zeta],
    "birational-identity": [cmd_identity],
}


def _congruence_suite(report: RunReport, inputs: Inputs):
    closed = {
        "parabola.poly": lambda p, n: p ** (n + 1),
        "node.poly": lambda p, n: (n + 2) * p ** (n + 1) - (n + 1) * p**n,
    }

    def cusp(p, n):
        if n == 0:
            return p
        if n <= 4:
            return p**n * (2 * p - 1)
        return p**n * (p * p + p - 1)

    closed["cusp.poly"] = cusp
    for name, F in closed.items():
        sys_ = inputs.system(name)
        for p in (2, 3):
            top = 5 if name == "cusp.poly" and p == 2 else 4
            for n in range(top + 1):
                got = count_congruence(sys_, p, n)
                report.check(f"{name} F_{n} p={p}", got == F(p, n), F(p, n), got)
    igusa = {
        "parabola.poly": "p/(1 - p*T)",
        "node.poly": "(2*p - 1 - p^2*T)/(1 - p*T)^2",
        "cusp.poly": "p*(1 + (p-1)*T + (p^6 - p^5)*T^5 - p^7*T^6)/((1 - p^7*T^6)*(1 - p*T))",
    }
    for name, form in igusa.items():
        sys_ = inputs.system(name)
        for p in (2, 3):
            terms = 8 if name == "cusp.poly" and p == 2 else 6
            s = assemble_series(count_series(sys_, p, CONGRUENCE, terms - 1))
            f = parse_ratfunc(form).subs({"p": p})
            report.check(f"{name} J_p p={p}", verify_rational(s, f), form, [str(c) for c in s.coeffs])


def cmd_selftest(args, report: RunReport, inputs: Inputs):
    for name in bundled_names():
        if not name.endswith(".json"):
            continue
        raw = json.loads((data_dir() / name).read_bytes())
        sub = RunReport(name)
        ns = argparse.Namespace(input=name, order=4, no_oracle=False, budget=args.budget, threads=1,
                                exponents=None, a=None, expect=None)
        kind = _kind(raw)
        if kind == "seifert":
            handlers = [cmd_seifert]
        elif kind == "fermat":
            handlers = [cmd_stringy]
        else:
            handlers = CONTEXT_COMMANDS.get(raw.get("context"), [])
        for h in handlers:
            h(ns, sub, inputs)
        for c in sub.checks:
            report.checks.append(Check(f"{name}: {c.name}", c.passed, c.expected, c.actual))
    _congruence_suite(report, inputs)
    report.add("documents", [n for n in bundled_names() if n.endswith(".json")])


# -- argument parsing -------------------------------------------------------------


class UsageError(Exception):
    pass


def _prime(text):
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid prime {text!r}") from None
    if p < 2 or any(p % i == 0 for i in range(2, int(p**0.5) + 1)):
        raise argparse.ArgumentTypeError(f"{p} is not a prime")
    return p


def _nonneg(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"{n} is negative")
    return n


def _positive(text):
    n = _nonneg(text)
    if n == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _rationals(text):
    try:
        return [parse_rational(t.strip()) for t in text.split(",") if t.strip()]
    except MotivicKitError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _integers(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from None


def _shape(text):
    try:
        shape = DenominatorShape.parse(text)
    except SchemaError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not shape.factors:
        raise argparse.ArgumentTypeError("empty denominator shape")
    return shape


COMMANDS = {
    "jets": cmd_jets,
    "count": cmd_count,
    "fit": cmd_fit,
    "verify": cmd_verify,
    "zeta": cmd_zeta,
    "ztop": cmd_ztop,
    "volume": cmd_volume,
    "nc-integral": cmd_nc_integral,
    "stringy": cmd_stringy,
    "stringy-zeta": cmd_stringy_zeta,
    "seifert": cmd_seifert,
    "classify": cmd_classify,
    "check-monodromy": cmd_check_monodromy,
    "identity": cmd_identity,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motivic-kit", description="Zeta functions, motivic volumes and "
                                     "stringy invariants from resolution data, with point-count oracles.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--budget", type=_positive, default=None, help="enumeration budget for point counts")
    common.add_argument("--threads", type=_positive, default=1, help="worker processes for point counts")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    parser.subcommands = {}

    def add(name, help_text):
        parser.subcommands[name] = sub.add_parser(name, parents=[common], help=help_text)
        return parser.subcommands[name]

    p = add("jets", "equations of the n-jet scheme")
    p.add_argument("--poly-file", required=True)
    p.add_argument("--level", type=_nonneg, required=True)

    p = add("count", "brute-force point count")
    p.add_argument("--mode", choices=sorted(COUNT_MODES), required=True)
    p.add_argument("--poly-file", required=True)
    p.add_argument("--prime", type=_prime, required=True)
    p.add_argument("--level", type=_nonneg, required=True)
    p.add_argument("--expect", type=_nonneg)

    for name, help_text in (("fit", "fit a rational function to a count series"),
                            ("verify", "check a closed form against a count series")):
        p = add(name, help_text)
        p.add_argument("--poly-file")
        p.add_argument("--series", type=_rationals, help="comma-separated coefficients instead of counting")
        p.add_argument("--mode", choices=sorted(COUNT_MODES), default="congruence")
        p.add_argument("--prime", type=_prime)
        p.add_argument("--terms", type=_positive, help="number of coefficients to count")
        if name == "fit":
            p.add_argument("--shape", type=_shape, required=True, help="denominator factors a:b for (1 - p^a T^b)")
            p.add_argument("--num-degree", type=_nonneg)
            p.add_argument("--expect")
        else:
            p.add_argument("--closed-form", required=True)

    for name, help_text in (("zeta", "motivic zeta function and J(T)"), ("ztop", "topological zeta function"),
                            ("volume", "motivic volume"), ("nc-integral", "normal crossings integral"),
                            ("stringy", "stringy invariants"), ("stringy-zeta", "stringy zeta function"),
                            ("seifert", "stringy Euler number from Seifert data"),
                            ("identity", "birational class identity")):
        p = add(name, help_text)
        p.add_argument("--input", required=True)
        if name == "zeta":
            p.add_argument("--order", type=_nonneg, default=4, help="number of jet classes to expand")
            p.add_argument("--no-oracle", action="store_true", help="skip the point-count cross-checks")
        if name == "ztop":
            p.add_argument("--exponents", type=_rationals)

    p = add("classify", "singularity class from log discrepancies")
    p.add_argument("--input")
    p.add_argument("--a", type=_rationals)
    p.add_argument("--expect", choices=[c.value for c in SingularityClass])

    p = add("check-monodromy", "monodromy check of poles against eigenvalues")
    p.add_argument("--input")
    p.add_argument("--poles", type=_rationals)
    p.add_argument("--exponents", type=_rationals)

    add("selftest", "run the bundled golden examples")
    return parser


def _execute(parser, args) -> Tuple[RunReport, int]:
    report = RunReport(args.command)
    inputs = Inputs()
    try:
        COMMANDS[args.command](args, report, inputs)
    except UsageError as exc:
        parser.subcommands[args.command].error(str(exc))
    report.inputs_digest = _digest(inputs.blobs)
    return report, 0 if report.ok else 1


def run(argv: Optional[List[str]] = None) -> Tuple[RunReport, int]:
    """Parse argv and run the command; returns the report and the exit status."""
    parser = build_parser()
    return _execute(parser, parser.parse_args(argv))


def _emit(report: RunReport, fmt: str):
    if fmt == "json":
        d = report.to_dict()
        if report.elapsed is not None:
            d["results"]["record"] = dict(d["results"]["record"], elapsed=round(report.elapsed, 6))
        print(json.dumps(d, indent=2, sort_keys=False))
    elif report.command == "count":
        results = dict(report.results)
        record = dict(results["record"], elapsed=round(report.elapsed, 6))
        print(results["count"])
        print(json.dumps(record))
        for c in report.checks:
            print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}" +
                  ("" if c.passed else f": expected {c.expected}, actual {c.actual}"))
    else:
        sys.stdout.write(report.to_text())


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, status = _execute(parser, args)
    except MotivicKitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(report, args.format)
    return status


if __name__ == "__main__":
    sys.exit(main())
