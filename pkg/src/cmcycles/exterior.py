"""Sparse exterior algebra on the 2g generators w_s, w_{cs} with exact
rational coefficients.

A monomial is an int bit mask over 2g positions. Position ``s`` (``0 <= s < g``)
is the unbarred generator of global slot ``s``; position ``g + s`` is its
conjugate. Slots are numbered factor-major, so the canonical generator order is
"all unbarred, then all barred, each block by (factor, slot)". A monomial is
always read in increasing bit order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping

Scalar = Fraction

_SCALAR_RE = re.compile(r"-?\d+(?:/\d+)?")
_GEN_RE = re.compile(r"w\[(\d+)\.(\d+)\](\^bar)?")


class ExteriorError(ValueError):
    pass


def render_scalar(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_scalar(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Stricter than ``Fraction(str)``: no
    whitespace, no ``+``, no decimals, nonzero denominator."""
    if not isinstance(text, str) or not _SCALAR_RE.fullmatch(text):
        raise ExteriorError(f"malformed scalar {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ExteriorError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


@dataclass(frozen=True, order=True)
class GeneratorIndex:
    factor: int  # 1-based
    slot: int  # 1-based within the factor
    bar: bool = False

    def conjugate(self) -> GeneratorIndex:
        return GeneratorIndex(self.factor, self.slot, not self.bar)

    def render(self) -> str:
        return f"w[{self.factor}.{self.slot}]" + ("^bar" if self.bar else "")


def _offsets(genera: tuple[int, ...]) -> list[int]:
    out, acc = [], 0
    for gt in genera:
        out.append(acc)
        acc += gt
    return out


def generator_bit(genera: tuple[int, ...], gen: GeneratorIndex) -> int:
    if not 1 <= gen.factor <= len(genera) or not 1 <= gen.slot <= genera[gen.factor - 1]:
        raise ExteriorError(f"generator {gen.render()} outside factors {list(genera)}")
    s = _offsets(genera)[gen.factor - 1] + gen.slot - 1
    return s + sum(genera) if gen.bar else s


def bit_generator(genera: tuple[int, ...], bit: int) -> GeneratorIndex:
    g = sum(genera)
    if not 0 <= bit < 2 * g:
        raise ExteriorError(f"bit {bit} outside 0..{2 * g - 1}")
    bar, s = divmod(bit, g)
    for t, off in enumerate(_offsets(genera)):
        if s < off + genera[t]:
            return GeneratorIndex(t + 1, s - off + 1, bool(bar))
    raise AssertionError("unreachable")


def bits_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def render_monomial(genera: tuple[int, ...], mask: int) -> str:
    if mask == 0:
        return "1"
    return "*".join(bit_generator(genera, b).render() for b in bits_of(mask))


def parse_monomial(genera: tuple[int, ...], text: str) -> int:
    """Inverse of :func:`render_monomial`. Only the canonical, strictly
    increasing spelling is accepted so that rendering round-trips."""
    if text == "1":
        return 0
    mask, last = 0, -1
    for part in text.split("*"):
        m = _GEN_RE.fullmatch(part)
        if not m:
            raise ExteriorError(f"malformed generator {part!r}")
        bit = generator_bit(genera, GeneratorIndex(int(m[1]), int(m[2]), bool(m[3])))
        if bit <= last:
            raise ExteriorError(f"monomial {text!r} is not in canonical order")
        mask |= 1 << bit
        last = bit
    return mask


def merge_sign(a: int, b: int) -> int:
    """Sign of w_a ^ w_b relative to the canonical monomial w_{a|b};
    0 when the masks share a generator."""
    if a & b:
        return 0
    inversions = 0
    for y in bits_of(b):
        inversions += (a >> (y + 1)).bit_count()
    return -1 if inversions & 1 else 1


def monomial_basis(g: int, degree: int) -> list[int]:
    """Degree-``degree`` monomials in canonical (lexicographic by bit) order."""
    if not 0 <= degree <= 2 * g:
        raise ExteriorError(f"degree {degree} outside 0..{2 * g}")
    return [sum(1 << b for b in c) for c in combinations(range(2 * g), degree)]


def popcount(mask: int) -> int:
    return mask.bit_count()


class Element:
    """An immutable element of H^*: a sparse map monomial mask -> Fraction."""

    __slots__ = ("genera", "_terms", "_hash")

    def __init__(self, genera: Iterable[int], terms: Mapping[int, object] | None = None):
        self.genera = tuple(genera)
        g = sum(self.genera)
        top = 1 << (2 * g)
        clean: dict[int, Fraction] = {}
        for mask, coeff in (terms or {}).items():
            if not 0 <= mask < top:
                raise ExteriorError(f"monomial mask {mask} outside {2 * g} generators")
            c = Fraction(coeff)
            if c:
                clean[mask] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def zero(cls, genera) -> Element:
        return cls(genera)

    @classmethod
    def one(cls, genera) -> Element:
        return cls(genera, {0: 1})

    @classmethod
    def monomial(cls, genera, mask: int, coeff=1) -> Element:
        return cls(genera, {mask: coeff})

    @classmethod
    def generator(cls, genera, gen: GeneratorIndex, coeff=1) -> Element:
        return cls(genera, {1 << generator_bit(tuple(genera), gen): coeff})

    @property
    def g(self) -> int:
        return sum(self.genera)

    @property
    def terms(self) -> Mapping[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mask: int) -> Fraction:
        return self._terms.get(mask, Fraction(0))

    def degrees(self) -> set[int]:
        return {popcount(m) for m in self._terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        d = self.degrees()
        if not d:
            return True
        return len(d) == 1 and (degree is None or d == {degree})

    def _check(self, other: Element) -> None:
        if self.genera != other.genera:
            raise ExteriorError(f"mixed configurations {self.genera} and {other.genera}")

    def __add__(self, other: Element) -> Element:
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Element(self.genera, out)

    def __neg__(self) -> Element:
        return Element(self.genera, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Element) -> Element:
        return self + (-other)

    def scale(self, x) -> Element:
        x = Fraction(x)
        return Element(self.genera, {m: c * x for m, c in self._terms.items()})

    def __mul__(self, x) -> Element:
        if isinstance(x, Element):
            return NotImplemented
        return self.scale(x)

    __rmul__ = __mul__

    def __xor__(self, other: Element) -> Element:
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.genera == other.genera and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.genera, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __repr__(self) -> str:
        return f"Element({self.render()})"

    def render(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"{render_scalar(c)} {render_monomial(self.genera, m)}" for m, c in sorted(self._terms.items())
        )

    def to_json(self) -> dict[str, str]:
        return {render_monomial(self.genera, m): render_scalar(c) for m, c in sorted(self._terms.items())}

    @classmethod
    def from_json(cls, genera, data: Mapping[str, str]) -> Element:
        genera = tuple(genera)
        return cls(genera, {parse_monomial(genera, k): parse_scalar(v) for k, v in data.items()})


def wedge(a: Element, b: Element) -> Element:
    a._check(b)
    out: dict[int, Fraction] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            sign = merge_sign(ma, mb)
            if sign:
                m = ma | mb
                out[m] = out.get(m, 0) + sign * ca * cb
    return Element(a.genera, out)


def degree_component(a: Element, i: int) -> Element:
    if not 0 <= i <= 2 * a.g:
        raise ExteriorError(f"degree {i} outside 0..{2 * a.g}")
    return Element(a.genera, {m: c for m, c in a._terms.items() if popcount(m) == i})


def top_trace(a: Element) -> Fraction:
    """Coefficient of the full monomial; models H^{2g} = coefficients."""
    return a.coefficient((1 << (2 * a.g)) - 1)


def numerically_trivial(a: Element, i: int) -> bool:
    """True iff ``a`` (homogeneous of degree ``i``) pairs to zero against every
    monomial of complementary degree."""
    if not 0 <= i <= 2 * a.g:
        raise ExteriorError(f"degree {i} outside 0..{2 * a.g}")
    if not a.is_homogeneous(i):
        raise ExteriorError(f"element is not homogeneous of degree {i}")
    for b in monomial_basis(a.g, 2 * a.g - i):
        if top_trace(wedge(a, Element.monomial(a.genera, b))):
            return False
    return True


def dimension(g: int, i: int) -> int:
    return comb(2 * g, i)
