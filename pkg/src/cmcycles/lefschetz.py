"""Lefschetz class, its powers, the inverse theta_i of L^{g-i}, and Lambda.

Everything is exact. theta_i is obtained by inverting the matrix of
L^{g-i}: H^i -> H^{2g-i} on the canonical monomial bases; inverses are cached
per (Lefschetz class, i).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction

from .cm import (
    CMConfig,
    ConfigError,
    CycleType,
    EigenvalueTuple,
    degenerate_slots,
    lefschetz_type,
    riemann_form_element,
    type_of,
)
from .exterior import Element, ExteriorError, monomial_basis, render_scalar, wedge
from .linalg import SingularMatrixError, identity, invert, matvec


class HardLefschetzError(ArithmeticError):
    """L^{g-i}: H^i -> H^{2g-i} is not bijective (degenerate zeta)."""

    def __init__(self, degree: int, degenerate: list[int]):
        super().__init__(
            f"hard Lefschetz fails in degree {degree}: L^{{g-{degree}}} is singular"
            + (f" (zeta vanishes at slots {degenerate})" if degenerate else "")
        )
        self.degree = degree
        self.degenerate = degenerate


@dataclass(frozen=True)
class LefschetzClass:
    config: CMConfig
    zeta: EigenvalueTuple
    element: Element = field(compare=False, repr=False)

    @classmethod
    def from_zeta(cls, config: CMConfig, zeta: EigenvalueTuple) -> LefschetzClass:
        return cls(config, zeta, riemann_form_element(config, zeta))

    @classmethod
    def standard(cls, config: CMConfig) -> LefschetzClass:
        """zeta = 1 on Sigma, -1 on c Sigma."""
        return cls.from_zeta(config, EigenvalueTuple.skew(config, [1] * config.g))

    @property
    def g(self) -> int:
        return self.config.g

    @property
    def genera(self) -> tuple[int, ...]:
        return self.config.factor_genera

    @property
    def degenerate(self) -> list[int]:
        return degenerate_slots(self.zeta)

    @property
    def nondegenerate(self) -> bool:
        return not self.degenerate


def lefschetz_component(lc: LefschetzClass, bit: int) -> Element:
    """L_sigma for the unbarred generator at ``bit``."""
    if not 0 <= bit < lc.g:
        raise ConfigError(f"bit {bit} is not an unbarred generator")
    t = lefschetz_type(bit)
    return Element(lc.genera, {t.mask(lc.g): lc.zeta[bit]})


def lefschetz_product(lc: LefschetzClass, K: int) -> Element:
    """L_K = prod_{s in K} L_s, K a slot mask."""
    out = Element.one(lc.genera)
    for s in range(lc.g):
        if K >> s & 1:
            out = wedge(out, lefschetz_component(lc, s))
    return out


_power_cache: dict[tuple[LefschetzClass, int], Element] = {}
_theta_cache: dict[tuple[LefschetzClass, int], "OperatorMatrix"] = {}
_cache_lock = threading.Lock()


def lefschetz_power(lc: LefschetzClass, n: int) -> Element:
    if n < 0:
        raise ValueError("exponent must be non-negative")
    key = (lc, n)
    hit = _power_cache.get(key)
    if hit is not None:
        return hit
    out = Element.one(lc.genera) if n == 0 else wedge(lefschetz_power(lc, n - 1), lc.element)
    with _cache_lock:
        _power_cache.setdefault(key, out)
    return out


def L_power_apply(lc: LefschetzClass, a: Element, n: int) -> Element:
    """a ^ L^n."""
    return wedge(a, lefschetz_power(lc, n))


@dataclass(frozen=True)
class OperatorMatrix:
    """A linear map H^domain_degree -> H^codomain_degree on canonical bases."""

    genera: tuple[int, ...]
    domain_degree: int
    codomain_degree: int
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def g(self) -> int:
        return sum(self.genera)

    def domain_basis(self) -> list[int]:
        return monomial_basis(self.g, self.domain_degree)

    def codomain_basis(self) -> list[int]:
        return monomial_basis(self.g, self.codomain_degree)

    def apply(self, a: Element) -> Element:
        if a.genera != self.genera:
            raise ExteriorError("element from a different configuration")
        if not a.is_homogeneous(self.domain_degree):
            raise ExteriorError(f"operator expects degree {self.domain_degree}")
        v = [a.coefficient(m) for m in self.domain_basis()]
        out = matvec(self.entries, v)
        return Element(self.genera, dict(zip(self.codomain_basis(), out)))

    def to_json(self) -> dict:
        return {
            "domain_degree": self.domain_degree,
            "codomain_degree": self.codomain_degree,
            "entries": [[render_scalar(x) for x in row] for row in self.entries],
        }


def power_matrix(lc: LefschetzClass, n: int, domain_degree: int) -> OperatorMatrix:
    """Matrix of a -> a ^ L^n from degree ``domain_degree``."""
    g = lc.g
    dom = monomial_basis(g, domain_degree)
    cod_deg = domain_degree + 2 * n
    cod = monomial_basis(g, cod_deg)
    index = {m: r for r, m in enumerate(cod)}
    rows = [[Fraction(0)] * len(dom) for _ in cod]
    Ln = lefschetz_power(lc, n)
    for col, m in enumerate(dom):
        for mm, c in wedge(Element.monomial(lc.genera, m), Ln).items():
            rows[index[mm]][col] = c
    return OperatorMatrix(lc.genera, domain_degree, cod_deg, tuple(map(tuple, rows)))


def theta(lc: LefschetzClass, i: int) -> OperatorMatrix:
    """Inverse of L^{g-i}: H^i -> H^{2g-i}, as a map H^{2g-i} -> H^i."""
    g = lc.g
    if not 0 <= i <= g:
        raise ValueError(f"theta_i needs 0 <= i <= g, got i={i}")
    key = (lc, i)
    hit = _theta_cache.get(key)
    if hit is not None:
        return hit
    if i == g:
        inv = identity(len(monomial_basis(g, g)))
    else:
        fwd = power_matrix(lc, g - i, i)
        try:
            inv = invert(fwd.entries)
        except SingularMatrixError:
            raise HardLefschetzError(i, lc.degenerate) from None
    out = OperatorMatrix(lc.genera, 2 * g - i, i, tuple(map(tuple, inv)))
    with _cache_lock:
        _theta_cache.setdefault(key, out)
    return out


def hard_lefschetz_holds(lc: LefschetzClass, i: int) -> bool:
    try:
        theta(lc, i)
    except HardLefschetzError:
        return False
    return True


def lambda_apply(lc: LefschetzClass, a: Element, i: int) -> Element:
    """The lowering operator Lambda: H^i -> H^{i-2}.

    theta_{i-2} L^{g-i+1} for i <= g, and L^{i-1-g} theta_{2g-i} for i > g.
    """
    g = lc.g
    if not 2 <= i <= 2 * g:
        raise ValueError(f"Lambda needs 2 <= i <= 2g, got i={i}")
    if not a.is_homogeneous(i):
        raise ExteriorError(f"element is not homogeneous of degree {i}")
    if i <= g:
        return theta(lc, i - 2).apply(L_power_apply(lc, a, g - i + 1))
    return L_power_apply(lc, theta(lc, 2 * g - i).apply(a), i - 1 - g)


def is_primitive(lc: LefschetzClass, a: Element, i: int) -> bool:
    g = lc.g
    if not 0 <= i <= g:
        raise ValueError(f"primitivity is defined for 0 <= i <= g, got i={i}")
    if not a.is_homogeneous(i):
        raise ExteriorError(f"element is not homogeneous of degree {i}")
    return not L_power_apply(lc, a, g - i + 1)


def support_types(a: Element) -> set[CycleType]:
    return {type_of(a.g, m) for m, _ in a.items()}


def lambda_type_support(lc: LefschetzClass, t: CycleType) -> set[CycleType]:
    """Types carrying a nonzero component of Lambda w_t."""
    w = t.weight
    if w < 2:
        raise ValueError("Lambda needs weight >= 2")
    return support_types(lambda_apply(lc, Element.monomial(lc.genera, t.mask(lc.g)), w))

