"""Independent certificate checker.

Re-verifies a certificate file using only the exterior algebra: type
bookkeeping is redone with plain bit arithmetic and every trace is recomputed
by wedging monomials. Nothing from the descent engine is imported here.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exterior import (
    Element,
    ExteriorError,
    parse_monomial,
    parse_scalar,
    render_monomial,
    render_scalar,
    top_trace,
    wedge,
)

_RECORD_KEYS = ("type", "weight", "in_ledger", "K", "I0", "J0", "partner", "H", "trace", "mu", "descended", "derivation")


class CertificateFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Mismatch:
    index: int  # record index, -1 for certificate-level problems
    field: str
    detail: str


@dataclass
class CheckReport:
    verdict: bool | None
    mismatches: list[Mismatch] = field(default_factory=list)
    n_records: int = 0

    @property
    def confirmed(self) -> bool:
        return self.verdict is True and not self.mismatches

    def to_json(self) -> dict:
        return {
            "confirmed": self.confirmed,
            "verdict": self.verdict,
            "records": self.n_records,
            "mismatches": [{"index": m.index, "field": m.field, "detail": m.detail} for m in self.mismatches],
        }


def _lefschetz_block(genera, g: int, zeta: list[Fraction], H: int) -> Element:
    out = Element.one(genera)
    for s in range(g):
        if H >> s & 1:
            out = wedge(out, Element.monomial(genera, (1 << s) | (1 << (g + s)), zeta[s]))
    return out


def _load(doc: Any) -> dict:
    if isinstance(doc, (bytes, bytearray)):
        try:
            doc = doc.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CertificateFormatError(f"certificate is not UTF-8: {exc}") from None
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"certificate is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CertificateFormatError("certificate must be a JSON object")
    for key in ("config", "axioms", "records", "verdict"):
        if key not in doc:
            raise CertificateFormatError(f"missing {key!r}")
    return doc


def check_certificate(doc: Any) -> CheckReport:
    doc = _load(doc)
    cfg = doc["config"]
    try:
        genera = tuple(cfg["factors"])
        if not genera or any(not isinstance(x, int) or isinstance(x, bool) or x < 1 for x in genera):
            raise CertificateFormatError(f"bad factors {cfg['factors']!r}")
        g = sum(genera)
        zeta = [Fraction(0)] * g
        seen = set()
        for key, val in cfg["zeta"].items():
            mask = parse_monomial(genera, key)
            if mask.bit_count() != 1 or mask >= 1 << g:
                raise CertificateFormatError(f"zeta key {key!r} is not an unbarred generator")
            s = mask.bit_length() - 1
            zeta[s] = parse_scalar(val)
            seen.add(s)
        if seen != set(range(g)):
            raise CertificateFormatError("zeta does not cover every unbarred generator")
    except (KeyError, TypeError, AttributeError, ExteriorError) as exc:
        raise CertificateFormatError(f"bad config: {exc}") from None

    verdict = doc["verdict"]
    if verdict not in (True, False, None):
        raise CertificateFormatError(f"bad verdict {verdict!r}")
    records = doc["records"]
    if not isinstance(records, list):
        raise CertificateFormatError("'records' must be a list")
    report = CheckReport(verdict, n_records=len(records))
    if verdict is None:
        if records:
            report.mismatches.append(Mismatch(-1, "verdict", "withheld verdict with records present"))
        return report

    low = (1 << g) - 1
    r_ = lambda m: render_monomial(genera, m)  # noqa: E731
    covered: dict[int, int] = {}
    all_nonzero = True
    for idx, rec in enumerate(records):
        if not isinstance(rec, dict) or any(k not in rec for k in _RECORD_KEYS):
            raise CertificateFormatError(f"record {idx} is missing fields")
        bad = lambda f, d: report.mismatches.append(Mismatch(idx, f, d))  # noqa: E731
        try:
            mask = parse_monomial(genera, rec["type"])
            trace = parse_scalar(rec["trace"])
            mu = parse_scalar(rec["mu"])
            T = Element.from_json(genera, rec["descended"])
        except (ExteriorError, AttributeError, TypeError) as exc:
            raise CertificateFormatError(f"record {idx}: {exc}") from None
        if mask in covered:
            bad("type", f"duplicate of record {covered[mask]}")
        covered[mask] = idx

        I, J = mask & low, mask >> g
        K = I & J
        I0, J0 = I & ~K, J & ~K
        partner = J0 | (I0 << g)
        H = low & ~(K | I0 | J0)
        expected = {
            "weight": mask.bit_count(),
            "K": r_(K),
            "I0": r_(I0),
            "J0": r_(J0 << g),
            "partner": r_(partner),
            "H": r_(H),
        }
        for key, val in expected.items():
            if rec[key] != val:
                bad(key, f"expected {val!r}, found {rec[key]!r}")

        witness = wedge(wedge(_lefschetz_block(genera, g, zeta, H), Element.monomial(genera, mask)), Element.monomial(genera, partner))
        actual = top_trace(witness)
        if rec["trace"] != render_scalar(trace) or trace != actual:
            bad("trace", f"recomputed {render_scalar(actual)}, found {rec['trace']!r}")
        if actual == 0:
            all_nonzero = False

        # w_IJ = mu * L_K ^ T with T a generator of type (I0, J0)
        if set(T.terms) != {I0 | (J0 << g)}:
            bad("descended", "not a nonzero class of the reduced type")
        elif rec["mu"] != render_scalar(mu) or mu == 0 or wedge(_lefschetz_block(genera, g, zeta, K), T).scale(mu) != Element.monomial(genera, mask):
            bad("mu", "w_IJ != mu * L_K ^ descended")

    if len(covered) != 1 << (2 * g):
        report.mismatches.append(Mismatch(-1, "records", f"{len(covered)} of {1 << (2 * g)} types covered"))
    if verdict != all_nonzero:
        report.mismatches.append(Mismatch(-1, "verdict", f"recorded {verdict}, traces give {all_nonzero}"))
    return report
