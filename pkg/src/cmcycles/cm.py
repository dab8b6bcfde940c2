"""CM configurations, isotypic types (I, J) and the endomorphism action.

A type is stored as two g-bit slot masks: bit ``s`` of ``I`` means sigma_s is
in I, bit ``s`` of ``J`` means c sigma_s is in J. With this encoding the
conjugation (I, J) -> (cJ, cI) is a swap and I ∩ cJ is ``I & J``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping

from .exterior import (
    Element,
    ExteriorError,
    GeneratorIndex,
    bit_generator,
    generator_bit,
    parse_monomial,
    parse_scalar,
    popcount,
    render_monomial,
    render_scalar,
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CMConfig:
    factor_genera: tuple[int, ...]

    def __post_init__(self):
        genera = tuple(self.factor_genera)
        object.__setattr__(self, "factor_genera", genera)
        if not genera:
            raise ConfigError("a CM configuration needs at least one factor")
        if any(not isinstance(gt, int) or isinstance(gt, bool) or gt < 1 for gt in genera):
            raise ConfigError(f"factor genera must be positive integers, got {list(genera)}")

    @classmethod
    def of(cls, *genera: int) -> CMConfig:
        return cls(tuple(genera))

    @property
    def g(self) -> int:
        return sum(self.factor_genera)

    @property
    def n_factors(self) -> int:
        return len(self.factor_genera)

    @property
    def sigma_mask(self) -> int:
        return (1 << self.g) - 1

    def generators(self) -> list[GeneratorIndex]:
        """All 2g generators in canonical order."""
        return [bit_generator(self.factor_genera, b) for b in range(2 * self.g)]

    def sigma(self, factor: int, slot: int) -> int:
        """Bit of the unbarred generator (factor, slot); 1-based."""
        return generator_bit(self.factor_genera, GeneratorIndex(factor, slot))

    def factor_slots(self, t: int) -> int:
        """Slot mask of factor ``t`` (1-based)."""
        off = sum(self.factor_genera[: t - 1])
        return ((1 << self.factor_genera[t - 1]) - 1) << off

    def one(self) -> Element:
        return Element.one(self.factor_genera)

    def zero(self) -> Element:
        return Element.zero(self.factor_genera)

    def monomial(self, mask: int, coeff=1) -> Element:
        return Element.monomial(self.factor_genera, mask, coeff)

    def parse(self, text: str) -> int:
        return parse_monomial(self.factor_genera, text)

    def render(self, mask: int) -> str:
        return render_monomial(self.factor_genera, mask)


@dataclass(frozen=True, order=True)
class CycleType:
    I: int
    J: int

    @property
    def weight(self) -> int:
        return popcount(self.I) + popcount(self.J)

    def mask(self, g: int) -> int:
        """The canonical monomial w_{IJ} as a bit mask."""
        return self.I | (self.J << g)

    @classmethod
    def from_mask(cls, g: int, mask: int) -> CycleType:
        low = (1 << g) - 1
        return cls(mask & low, (mask >> g) & low)

    def disjoint(self, other: CycleType) -> bool:
        return not (self.I & other.I or self.J & other.J)

    def union(self, other: CycleType) -> CycleType:
        return CycleType(self.I | other.I, self.J | other.J)

    def components(self, config: CMConfig) -> list[tuple[int, int]]:
        """Per-factor pairs (I_t, J_t), as slot masks of the full config."""
        return [(self.I & config.factor_slots(t), self.J & config.factor_slots(t)) for t in range(1, config.n_factors + 1)]

    def render(self, config: CMConfig) -> str:
        return config.render(self.mask(config.g))

    @classmethod
    def parse(cls, config: CMConfig, text: str) -> CycleType:
        return cls.from_mask(config.g, config.parse(text))


def lefschetz_type(s: int) -> CycleType:
    """(sigma_s, c sigma_s)."""
    return CycleType(1 << s, 1 << s)


def all_types(config: CMConfig) -> Iterator[CycleType]:
    n = 1 << config.g
    for I, J in product(range(n), range(n)):
        yield CycleType(I, J)


def type_of(g: int, mask: int) -> CycleType:
    return CycleType.from_mask(g, mask)


def conjugate_type(t: CycleType) -> CycleType:
    return CycleType(t.J, t.I)


def project(a: Element, t: CycleType) -> Element:
    target = t.mask(a.g)
    return Element(a.genera, {m: c for m, c in a.items() if m == target})


def type_decomposition(a: Element) -> dict[CycleType, Element]:
    out: dict[CycleType, Element] = {}
    for m, c in a.items():
        out[type_of(a.g, m)] = Element.monomial(a.genera, m, c)
    return out


def conjugate_element(a: Element) -> Element:
    """Complex conjugation in the rational model: relabel each type (I, J) to
    (cJ, cI), coefficients untouched."""
    g = a.g
    return Element(a.genera, {conjugate_type(type_of(g, m)).mask(g): c for m, c in a.items()})


@dataclass(frozen=True)
class EigenvalueTuple:
    """Embedding images of an element of E, one per generator bit."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def from_sigma(cls, config: CMConfig, unbarred, barred) -> EigenvalueTuple:
        unbarred, barred = list(unbarred), list(barred)
        if len(unbarred) != config.g or len(barred) != config.g:
            raise ConfigError(f"need {config.g} unbarred and {config.g} barred values")
        return cls(tuple(unbarred + barred))

    @classmethod
    def constant(cls, config: CMConfig, value=1) -> EigenvalueTuple:
        return cls((Fraction(value),) * (2 * config.g))

    @classmethod
    def skew(cls, config: CMConfig, unbarred) -> EigenvalueTuple:
        """The tuple with zeta^{c sigma} = -zeta^{sigma}."""
        unbarred = [Fraction(v) for v in unbarred]
        return cls.from_sigma(config, unbarred, [-v for v in unbarred])

    @property
    def g(self) -> int:
        return len(self.values) // 2

    def __getitem__(self, bit: int) -> Fraction:
        return self.values[bit]

    def product(self, mask: int) -> Fraction:
        out = Fraction(1)
        for b, v in enumerate(self.values):
            if mask >> b & 1:
                out *= v
        return out

    def to_json(self, config: CMConfig) -> dict[str, str]:
        return {config.render(1 << b): render_scalar(v) for b, v in enumerate(self.values)}


def endo_action(lam: EigenvalueTuple, a: Element) -> Element:
    """[lambda] acts on a term of type (I, J) by lambda^I lambda^J."""
    if lam.g != a.g:
        raise ConfigError("eigenvalue tuple and element come from different configurations")
    return Element(a.genera, {m: c * lam.product(m) for m, c in a.items()})


def validate_frobenius(pi: EigenvalueTuple, q) -> bool:
    q = Fraction(q)
    if q <= 0:
        raise ConfigError(f"q must be positive, got {q}")
    g = pi.g
    return all(pi[s] * pi[g + s] == q for s in range(g))


def is_skew(zeta: EigenvalueTuple) -> bool:
    g = zeta.g
    return all(zeta[g + s] == -zeta[s] for s in range(g))


def degenerate_slots(zeta: EigenvalueTuple) -> list[int]:
    return [s for s in range(zeta.g) if zeta[s] == 0]


def riemann_form_element(config: CMConfig, zeta: EigenvalueTuple) -> Element:
    """sum_s zeta^s w_s ^ w_{cs}: the class of the Riemann form Tr(zeta x^c y).

    Components with zeta^s = 0 are absent; callers that need an ample class
    check :func:`degenerate_slots`.
    """
    if zeta.g != config.g:
        raise ConfigError("zeta has the wrong number of values")
    if not is_skew(zeta):
        raise ConfigError("zeta is not skew under complex conjugation")
    g = config.g
    return Element(config.factor_genera, {lefschetz_type(s).mask(g): zeta[s] for s in range(g)})


# --- JSON loading ---------------------------------------------------------

_TOP_KEYS = {"factors", "frobenius", "zeta"}
_FROB_KEYS = {"q", "values"}


@dataclass(frozen=True)
class CMData:
    config: CMConfig
    zeta: EigenvalueTuple
    frobenius: EigenvalueTuple | None = None
    q: Fraction | None = None


def read_tuple(config: CMConfig, data: Mapping[str, str], *, skew: bool, what: str) -> EigenvalueTuple:
    if not isinstance(data, Mapping):
        raise ConfigError(f"{what} must be an object keyed by generator labels")
    vals: dict[int, Fraction] = {}
    for key, raw in data.items():
        try:
            mask = config.parse(key)
            val = parse_scalar(raw) if isinstance(raw, str) else Fraction(raw)
        except (ExteriorError, TypeError, ValueError) as exc:
            raise ConfigError(f"{what}: bad entry {key!r}: {exc}") from None
        if popcount(mask) != 1:
            raise ConfigError(f"{what}: key {key!r} is not a single generator")
        vals[mask.bit_length() - 1] = val
    g = config.g
    if skew:
        for s in range(g):
            if s not in vals:
                raise ConfigError(f"{what}: missing {config.render(1 << s)}")
            if g + s in vals and vals[g + s] != -vals[s]:
                raise ConfigError(f"{what}: not skew at {config.render(1 << s)}")
            vals[g + s] = -vals[s]
    missing = [config.render(1 << b) for b in range(2 * g) if b not in vals]
    if missing:
        raise ConfigError(f"{what}: missing values for {missing}")
    return EigenvalueTuple(tuple(vals[b] for b in range(2 * g)))


def load_cm_data(doc: Mapping | str) -> CMData:
    """Build a :class:`CMData` from the JSON document (or its text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")
    if "factors" not in doc:
        raise ConfigError("missing 'factors'")
    factors = doc["factors"]
    if not isinstance(factors, list):
        raise ConfigError("'factors' must be a list of genera")
    config = CMConfig(tuple(factors))
    if "zeta" in doc:
        zeta = read_tuple(config, doc["zeta"], skew=True, what="zeta")
    else:
        zeta = EigenvalueTuple.skew(config, [1] * config.g)
    frob = q = None
    if "frobenius" in doc:
        fdoc = doc["frobenius"]
        if not isinstance(fdoc, Mapping):
            raise ConfigError("'frobenius' must be an object")
        unknown = set(fdoc) - _FROB_KEYS
        if unknown:
            raise ConfigError(f"unknown frobenius keys {sorted(unknown)}")
        if "q" not in fdoc or "values" not in fdoc:
            raise ConfigError("frobenius needs 'q' and 'values'")
        try:
            q = parse_scalar(fdoc["q"])
        except ExteriorError as exc:
            raise ConfigError(f"frobenius q: {exc}") from None
        if q <= 0:
            raise ConfigError("frobenius q must be positive")
        frob = read_tuple(config, fdoc["values"], skew=False, what="frobenius values")
        if not validate_frobenius(frob, q):
            raise ConfigError("frobenius values do not satisfy pi^s pi^cs = q")
    return CMData(config, zeta, frob, q)
