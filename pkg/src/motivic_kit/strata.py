"""Resolution / stratification data: model, JSON documents, validation.

A document describes the components E_i of a resolution (or of a normal
crossings divisor) with their numerical data, and the strata E_I° with
their Euler characteristic, and optionally Hodge-Deligne polynomial and
class in L::

    {"schema": "motivic-kit/v1",
     "context": "zeta",
     "ambient_dim": 2,
     "components": [{"id": "E1", "N": 2, "nu": "2"}, ...],
     "strata": [{"subset": ["E1"], "chi": "1", "classL": "L"}, ...]}

Strata with chi = 0 and no other data may be left out.  The empty-subset
stratum may carry ``"chi_symbol"`` instead of a number, for a quantity
such as chi(X minus P) that should stay symbolic; it then counts as 0 in
every computation and is reported as an additive offset.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

from .errors import (
    ForbiddenZeroPair,
    InconsistentStratumData,
    MissingEmptyStratum,
    MissingMultiplicity,
    ParseError,
    SchemaError,
)
from .exactalg import MPoly, format_rational, parse_poly, parse_rational

SCHEMA = "motivic-kit/v1"
CONTEXTS = ("zeta", "volume", "stringy", "stringy-zeta", "nc-integral", "birational-identity")


@dataclass(frozen=True)
class ComponentRecord:
    id: str
    N: Optional[Fraction] = None
    nu: Optional[Fraction] = None
    a: Optional[Fraction] = None


@dataclass(frozen=True)
class StratumRecord:
    subset: FrozenSet[str]
    chi: Fraction
    hodge: Optional[MPoly] = None
    classL: Optional[MPoly] = None
    chi_symbol: Optional[str] = None

    def sorted_subset(self, order: Sequence[str]) -> List[str]:
        return sorted(self.subset, key=order.index)


@dataclass
class ResolutionData:
    ambient_dim: int
    context: str
    components: List[ComponentRecord]
    strata: List[StratumRecord]
    name: str = ""
    extra: Dict[str, object] = field(default_factory=dict)

    def component(self, cid: str) -> ComponentRecord:
        for c in self.components:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def ids(self) -> List[str]:
        return [c.id for c in self.components]

    @property
    def offset_symbol(self) -> Optional[str]:
        for s in self.strata:
            if s.chi_symbol:
                return s.chi_symbol
        return None

    def factors_of(self, stratum: StratumRecord):
        return [self.component(cid) for cid in stratum.sorted_subset(self.ids)]


class SingularityClass(str, enum.Enum):
    TERMINAL = "terminal"
    CANONICAL = "canonical"
    LOG_TERMINAL = "log-terminal"
    STRICTLY_LOG_CANONICAL = "strictly-log-canonical"
    NOT_LOG_CANONICAL = "not-log-canonical"

    @property
    def rank(self) -> int:
        return list(SingularityClass).index(self)

    def __str__(self):
        return self.value


def classify(a_values: Iterable) -> SingularityClass:
    """Strictest class allowed by the log discrepancies.

    >>> classify(["2/3"])
    <SingularityClass.LOG_TERMINAL: 'log-terminal'>
    """
    vals = [parse_rational(a) for a in a_values]
    if not vals:
        return SingularityClass.TERMINAL
    m = min(vals)
    if m > 1:
        return SingularityClass.TERMINAL
    if m >= 1:
        return SingularityClass.CANONICAL
    if m > 0:
        return SingularityClass.LOG_TERMINAL
    if m == 0:
        return SingularityClass.STRICTLY_LOG_CANONICAL
    return SingularityClass.NOT_LOG_CANONICAL


# -- loading ----------------------------------------------------------


def _opt_rational(raw, key, where):
    if key not in raw or raw[key] is None:
        return None
    try:
        return parse_rational(raw[key])
    except ParseError as exc:
        raise SchemaError(f"{where}: field {key!r}: {exc}") from exc


def _opt_poly(raw, key, where, allowed):
    if key not in raw or raw[key] is None:
        return None
    try:
        p = parse_poly(raw[key])
    except ParseError as exc:
        raise SchemaError(f"{where}: field {key!r}: {exc}") from exc
    bad = set(p.vars) - set(allowed)
    if bad:
        raise SchemaError(f"{where}: {key} uses variables {sorted(bad)}, allowed {list(allowed)}")
    return p


def _load_stratum(raw, known: Sequence[str], i: int) -> StratumRecord:
    where = f"strata[{i}]"
    if not isinstance(raw, dict):
        raise SchemaError(f"{where} must be an object")
    subset = raw.get("subset")
    if not isinstance(subset, list) or not all(isinstance(x, str) for x in subset):
        raise SchemaError(f"{where}: 'subset' must be a list of component ids")
    if len(set(subset)) != len(subset):
        raise SchemaError(f"{where}: repeated id in subset {subset}")
    for cid in subset:
        if cid not in known:
            raise SchemaError(f"{where}: unknown component id {cid!r}")
    chi = _opt_rational(raw, "chi", where)
    hodge = _opt_poly(raw, "hodge", where, ("u", "v"))
    class_l = _opt_poly(raw, "classL", where, ("L",))
    symbol = raw.get("chi_symbol")
    if symbol is not None:
        if subset:
            raise SchemaError(f"{where}: chi_symbol is only allowed on the empty-subset stratum")
        if chi is not None or hodge is not None or class_l is not None:
            raise SchemaError(f"{where}: chi_symbol excludes numeric stratum data")
        return StratumRecord(frozenset(), Fraction(0), chi_symbol=str(symbol))
    derived = []
    if class_l is not None:
        derived.append(("classL", class_l.evaluate({"L": 1}) if class_l.vars else class_l.constant_value()))
        if hodge is not None and class_l.subs({"L": MPoly.var("u") * MPoly.var("v")}) != hodge:
            raise InconsistentStratumData(f"{where}: hodge {hodge} is not classL {class_l} at L = uv")
    if hodge is not None:
        derived.append(("hodge", hodge.evaluate({v: 1 for v in hodge.vars})))
    for source, value in derived:
        if chi is None:
            chi = value
        elif chi != value:
            raise InconsistentStratumData(f"{where}: chi = {chi} but {source} gives {value}")
    if chi is None:
        raise SchemaError(f"{where}: needs one of chi, hodge, classL")
    return StratumRecord(frozenset(subset), chi, hodge, class_l)


def _check_context(data: ResolutionData):
    ctx = data.context
    for c in data.components:
        where = f"component {c.id!r}"
        if ctx in ("zeta", "nc-integral") and c.N is None:
            raise MissingMultiplicity(f"{where}: context {ctx} needs N")
        if ctx in ("zeta", "volume", "birational-identity", "stringy-zeta") and c.nu is None:
            raise MissingMultiplicity(f"{where}: context {ctx} needs nu")
        if ctx == "stringy" and c.a is None:
            raise MissingMultiplicity(f"{where}: context stringy needs a")
        if ctx == "stringy-zeta" and c.N is None:
            raise MissingMultiplicity(f"{where}: context stringy-zeta needs N")
        if ctx == "zeta":
            if c.N < 1 or c.nu < 1 or c.N.denominator != 1 or c.nu.denominator != 1:
                raise SchemaError(f"{where}: zeta context needs integers N >= 1, nu >= 1")
        if ctx == "nc-integral" and (c.N < 1 or c.N.denominator != 1):
            raise SchemaError(f"{where}: nc-integral context needs integer N >= 1")
        if ctx in ("volume", "birational-identity") and (c.nu < 1 or c.nu.denominator != 1):
            raise SchemaError(f"{where}: {ctx} context needs integer nu >= 1")
        if ctx == "stringy-zeta":
            if c.nu == 0 and c.N == 0:
                raise ForbiddenZeroPair(f"{where}: (nu, N) = (0, 0) cannot occur")
            if c.nu < 0 or c.N > 0:
                raise SchemaError(f"{where}: stringy-zeta needs nu >= 0 and N <= 0")
            if c.a is not None and c.a != c.nu + c.N:
                raise SchemaError(f"{where}: a = {c.a} but nu + N = {c.nu + c.N}")


def load_resolution(document) -> ResolutionData:
    """Parse and validate a document (JSON text, bytes or already-decoded dict)."""
    if isinstance(document, (str, bytes)):
        try:
            raw = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    else:
        raw = document
    if not isinstance(raw, dict):
        raise SchemaError("document must be a JSON object")
    schema = raw.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise SchemaError(f"unsupported schema {schema!r}, expected {SCHEMA!r}")
    ctx = raw.get("context")
    if ctx not in CONTEXTS:
        raise SchemaError(f"context must be one of {CONTEXTS}, got {ctx!r}")
    dim = raw.get("ambient_dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        raise SchemaError("ambient_dim must be a non-negative integer")
    comps_raw = raw.get("components", [])
    strata_raw = raw.get("strata")
    if not isinstance(comps_raw, list) or not isinstance(strata_raw, list):
        raise SchemaError("components and strata must be lists")

    components = []
    for i, c in enumerate(comps_raw):
        where = f"components[{i}]"
        if not isinstance(c, dict) or not isinstance(c.get("id"), str):
            raise SchemaError(f"{where}: needs a string id")
        N = _opt_rational(c, "N", where)
        if N is not None and N.denominator != 1 and ctx != "stringy-zeta":
            raise SchemaError(f"{where}: N must be an integer in context {ctx}")
        components.append(ComponentRecord(c["id"], N, _opt_rational(c, "nu", where), _opt_rational(c, "a", where)))
    ids = [c.id for c in components]
    if len(set(ids)) != len(ids):
        raise SchemaError(f"duplicate component ids in {ids}")
    if ctx == "stringy-zeta":
        # a = nu + N is part of the record once both halves are known
        components = [
            ComponentRecord(c.id, c.N, c.nu, c.a if c.a is not None or c.nu is None or c.N is None else c.nu + c.N)
            for c in components
        ]

    strata = [_load_stratum(s, ids, i) for i, s in enumerate(strata_raw)]
    subsets = [s.subset for s in strata]
    if len(set(subsets)) != len(subsets):
        raise SchemaError("two strata share the same subset")

    data = ResolutionData(dim, ctx, components, strata, name=str(raw.get("name", "")))
    data.extra = {k: v for k, v in raw.items() if k not in _CORE_KEYS}
    _check_context(data)
    return data


_CORE_KEYS = {"schema", "context", "ambient_dim", "components", "strata", "name"}


def load_resolution_file(path) -> ResolutionData:
    with open(path, "rb") as fh:
        return load_resolution(fh.read())


def dump_resolution(data: ResolutionData) -> dict:
    """Serialize back to the document form (inverse of load_resolution)."""
    comps = []
    for c in data.components:
        d = {"id": c.id}
        if c.N is not None:
            d["N"] = int(c.N) if c.N.denominator == 1 else format_rational(c.N)
        if c.nu is not None:
            d["nu"] = format_rational(c.nu)
        if c.a is not None:
            d["a"] = format_rational(c.a)
        comps.append(d)
    strata = []
    for s in data.strata:
        d = {"subset": s.sorted_subset(data.ids)}
        if s.chi_symbol:
            d["chi_symbol"] = s.chi_symbol
        else:
            d["chi"] = format_rational(s.chi)
        if s.hodge is not None:
            d["hodge"] = str(s.hodge)
        if s.classL is not None:
            d["classL"] = str(s.classL)
        strata.append(d)
    doc = {"schema": SCHEMA, "context": data.context, "ambient_dim": data.ambient_dim}
    if data.name:
        doc["name"] = data.name
    doc["components"] = comps
    doc["strata"] = strata
    doc.update(data.extra)
    return doc


def check_additivity(data: ResolutionData, total_chi) -> bool:
    """True iff the stratum Euler characteristics add up to ``total_chi``."""
    if not any(not s.subset for s in data.strata):
        raise MissingEmptyStratum("additivity check needs the empty-subset stratum")
    return sum((s.chi for s in data.strata), Fraction(0)) == parse_rational(total_chi)
