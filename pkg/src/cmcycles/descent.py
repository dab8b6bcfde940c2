"""Algebraicity ledger, Lambda-descent, division by Lefschetz components and
the pairing certificate for "numerically trivial implies zero".

The ledger records, for each type known to carry an algebraic generator,
the rule that put it there. Rules:

    axiom                (empty, empty): the unit class
    lefschetz-component  (sigma, c sigma): an isotypic piece of L
    product              cup product of two ledger types with disjoint supports
    division             one Lambda step, or a full division by L_{K'}
    conjugation          (I, J) -> (cJ, cI)
    hypothesis           the generator assumed algebraic by the certificate
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .cm import (
    CMConfig,
    CycleType,
    EigenvalueTuple,
    all_types,
    conjugate_element,
    conjugate_type,
    lefschetz_type,
    project,
)
from .exterior import Element, bits_of, popcount, render_scalar, top_trace, wedge
from .lefschetz import (
    HardLefschetzError,
    LefschetzClass,
    lambda_apply,
    lambda_type_support,
    lefschetz_component,
    lefschetz_product,
    theta,
)

RULES = ("axiom", "lefschetz-component", "product", "division", "conjugation", "hypothesis")


class DescentError(ValueError):
    pass


@dataclass(frozen=True)
class DescentData:
    K: int
    I0: int
    J0: int

    @property
    def k(self) -> int:
        return popcount(self.K)

    @property
    def reduced(self) -> CycleType:
        return CycleType(self.I0, self.J0)


def descent_data(t: CycleType) -> DescentData:
    K = t.I & t.J
    return DescentData(K, t.I & ~K, t.J & ~K)


@dataclass(frozen=True)
class Derivation:
    rule: str
    premises: tuple[CycleType, ...] = ()
    note: str = ""

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")


@dataclass
class Ledger:
    config: CMConfig
    lc: LefschetzClass
    derivations: dict[CycleType, Derivation] = field(default_factory=dict)

    def __contains__(self, t: CycleType) -> bool:
        return t in self.derivations

    def __len__(self) -> int:
        return len(self.derivations)

    @property
    def algebraic_types(self) -> frozenset[CycleType]:
        return frozenset(self.derivations)

    def add(self, t: CycleType, derivation: Derivation) -> bool:
        """Insert ``t`` unless it is already known. Returns True if new."""
        missing = [p for p in derivation.premises if p not in self.derivations]
        if missing:
            raise DescentError(f"premises {missing} are not in the ledger")
        if t in self.derivations:
            return False
        self.derivations[t] = derivation
        return True

    def copy(self) -> Ledger:
        return Ledger(self.config, self.lc, dict(self.derivations))

    def tree(self, roots: Iterable[CycleType]) -> list[tuple[CycleType, Derivation]]:
        """Derivations needed for ``roots``, premises before conclusions."""
        seen: set[CycleType] = set()
        out: list[tuple[CycleType, Derivation]] = []

        def visit(t: CycleType) -> None:
            if t in seen:
                return
            seen.add(t)
            d = self.derivations[t]
            for p in d.premises:
                visit(p)
            out.append((t, d))

        for r in roots:
            visit(r)
        return out

    def realize(self, t: CycleType) -> Element:
        """An explicit class of type ``t`` built by replaying its derivation."""
        cache: dict[CycleType, Element] = {}

        def build(u: CycleType) -> Element:
            if u in cache:
                return cache[u]
            d = self.derivations[u]
            if d.rule == "axiom":
                x = self.config.one()
            elif d.rule == "hypothesis":
                x = self.config.monomial(u.mask(self.config.g))
            elif d.rule == "lefschetz-component":
                x = lefschetz_component(self.lc, u.I.bit_length() - 1)
            elif d.rule == "product":
                x = wedge(build(d.premises[0]), build(d.premises[1]))
            elif d.rule == "conjugation":
                x = conjugate_element(build(d.premises[0]))
            elif len(d.premises) == 1:
                src = d.premises[0]
                x = project(lambda_apply(self.lc, build(src), src.weight), u)
            else:
                # division by L_{K'}: descended class times the remaining L_K
                x = wedge(build(d.premises[0]), build(d.premises[1]))
            cache[u] = x
            return x

        return build(t)


def _ensure_lefschetz_product(ledger: Ledger, K: int) -> CycleType:
    """Put (K, cK) in the ledger as a product of Lefschetz components."""
    cur = CycleType(0, 0)
    for s in bits_of(K):
        nxt = CycleType(cur.I | 1 << s, cur.J | 1 << s)
        if nxt not in ledger:
            ledger.add(nxt, Derivation("product", (cur, lefschetz_type(s))))
        cur = nxt
    return cur


def descent_chain(lc: LefschetzClass, t: CycleType) -> list[CycleType]:
    """Lambda steps from ``t`` down to its reduced type (I0, J0).

    Each step keeps the least support type of Lambda w_cur; every support type
    is checked to carry the reduced label of ``t``.
    """
    target = descent_data(t).reduced
    chain = [t]
    cur = t
    while cur.I & cur.J:
        support = lambda_type_support(lc, cur)
        if not support:
            raise DescentError(f"Lambda kills the non-primitive type {cur}")
        for s in support:
            if s.weight != cur.weight - 2 or descent_data(s).reduced != target:
                raise DescentError(f"Lambda moved {cur} to {s}, changing the reduced label")
        cur = min(support)
        chain.append(cur)
    if cur != target:
        raise DescentError(f"descent of {t} stopped at {cur}, expected {target}")
    return chain


def _insert_chain(ledger: Ledger, chain: list[CycleType]) -> None:
    for prev, nxt in zip(chain, chain[1:]):
        ledger.add(nxt, Derivation("division", (prev,), "lambda"))


def descend(ledger: Ledger, t: CycleType) -> CycleType:
    if t not in ledger:
        raise DescentError(f"type {t} is not in the ledger")
    if t.weight % 2:
        raise DescentError(f"type {t} has odd weight {t.weight}")
    chain = descent_chain(ledger.lc, t)
    _insert_chain(ledger, chain)
    return chain[-1]


def divide(ledger: Ledger, t: CycleType, K_sub: int) -> CycleType:
    """Divide the class of type ``t`` by L_{K_sub}, K_sub inside I ∩ cJ."""
    if t not in ledger:
        raise DescentError(f"type {t} is not in the ledger")
    data = descent_data(t)
    if K_sub & ~data.K:
        raise DescentError(f"K' is not contained in I ∩ cJ for {t}")
    if not K_sub:
        return t
    chain = descent_chain(ledger.lc, t)
    _insert_chain(ledger, chain)
    rest = data.K & ~K_sub
    target = CycleType(t.I & ~K_sub, t.J & ~K_sub)
    if rest:
        lk = _ensure_lefschetz_product(ledger, rest)
        ledger.add(target, Derivation("division", (chain[-1], lk), "multiply by L_{K minus K'}"))
    return target


def close_ledger(config: CMConfig, lc: LefschetzClass | None = None) -> Ledger:
    """Least set of types containing the axioms and closed under product,
    division and conjugation."""
    lc = lc or LefschetzClass.standard(config)
    ledger = Ledger(config, lc)
    ledger.add(CycleType(0, 0), Derivation("axiom"))
    for s in range(config.g):
        ledger.add(lefschetz_type(s), Derivation("lefschetz-component"))
    changed = True
    while changed:
        changed = False
        current = sorted(ledger.algebraic_types)
        for a, b in combinations(current, 2):
            if a.disjoint(b):
                changed |= ledger.add(a.union(b), Derivation("product", (a, b)))
        for t in current:
            K = t.I & t.J
            sub = K
            while sub:
                target = CycleType(t.I & ~sub, t.J & ~sub)
                if target not in ledger:
                    divide(ledger, t, sub)
                    changed = True
                sub = (sub - 1) & K
            changed |= ledger.add(conjugate_type(t), Derivation("conjugation", (t,)))
    return ledger


# --- certificate ----------------------------------------------------------


@dataclass(frozen=True)
class CertificateRecord:
    type: CycleType
    in_ledger: bool
    data: DescentData
    partner: CycleType
    H: int
    trace: Fraction
    mu: Fraction
    descended: Element
    derivation: tuple[tuple[CycleType, Derivation], ...]

    def to_json(self, config: CMConfig) -> dict:
        g = config.g
        return {
            "type": self.type.render(config),
            "weight": self.type.weight,
            "in_ledger": self.in_ledger,
            "K": config.render(self.data.K),
            "I0": config.render(self.data.I0),
            "J0": config.render(self.data.J0 << g),
            "partner": self.partner.render(config),
            "H": config.render(self.H),
            "trace": render_scalar(self.trace),
            "mu": render_scalar(self.mu),
            "descended": self.descended.to_json(),
            "derivation": [
                {
                    "type": t.render(config),
                    "rule": d.rule,
                    "premises": [p.render(config) for p in d.premises],
                    **({"note": d.note} if d.note else {}),
                }
                for t, d in self.derivation
            ],
        }


@dataclass(frozen=True)
class Certificate:
    config: CMConfig
    zeta: EigenvalueTuple
    axioms: tuple[CycleType, ...]
    records: tuple[CertificateRecord, ...]
    verdict: bool | None
    diagnostic: str | None = None

    def to_json(self) -> dict:
        cfg = self.config
        out = {
            "config": {
                "factors": list(cfg.factor_genera),
                "zeta": {cfg.render(1 << s): render_scalar(self.zeta[s]) for s in range(cfg.g)},
            },
            "axioms": [t.render(cfg) for t in self.axioms],
            "records": [r.to_json(cfg) for r in self.records],
            "verdict": self.verdict,
        }
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, ensure_ascii=False) + "\n"


def _record(base: Ledger, t: CycleType) -> CertificateRecord:
    config, lc = base.config, base.lc
    g = config.g
    ledger = base.copy()
    in_ledger = t in ledger
    ledger.add(t, Derivation("hypothesis"))
    data = descent_data(t)
    _insert_chain(ledger, descent_chain(lc, t))
    reduced = data.reduced
    T = ledger.realize(reduced)
    if set(T.terms) != {reduced.mask(g)}:
        raise DescentError(f"descended class for {t} is not a generator of {reduced}")
    partner = conjugate_type(reduced)
    ledger.add(partner, Derivation("conjugation", (reduced,)))
    H = config.sigma_mask & ~(data.K | data.I0 | data.J0)
    lh = _ensure_lefschetz_product(ledger, H)

    scale = wedge(lefschetz_product(lc, data.K), T).coefficient(t.mask(g))
    if scale == 0:
        raise DescentError(f"L_K times the descended class vanishes for {t}")
    witness = wedge(
        wedge(lefschetz_product(lc, H), config.monomial(t.mask(g))),
        config.monomial(partner.mask(g)),
    )
    return CertificateRecord(
        type=t,
        in_ledger=in_ledger,
        data=data,
        partner=partner,
        H=H,
        trace=top_trace(witness),
        mu=1 / scale,
        descended=T,
        derivation=tuple(ledger.tree([t, reduced, partner, lh])),
    )


def certify_theorem(config: CMConfig, lc: LefschetzClass | None = None) -> Certificate:
    """Replay the pairing argument for every isotypic type of ``config``."""
    lc = lc or LefschetzClass.standard(config)
    axioms = (CycleType(0, 0),) + tuple(lefschetz_type(s) for s in range(config.g))
    try:
        if lc.degenerate:
            raise HardLefschetzError(0, lc.degenerate)
        for i in range(config.g + 1):
            theta(lc, i)
    except HardLefschetzError as exc:
        return Certificate(config, lc.zeta, axioms, (), None, f"verdict withheld: {exc}")
    base = close_ledger(config, lc)
    types = sorted(all_types(config), key=lambda t: (t.weight, t.mask(config.g)))
    records = tuple(_record(base, t) for t in types)
    return Certificate(config, lc.zeta, axioms, records, all(r.trace != 0 for r in records))
