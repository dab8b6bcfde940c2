"""Group-level Chebotarev density for primes whose decomposition group
contains complex conjugation.

For an unramified prime the decomposition group is generated by a Frobenius
element F, so the favorable primes are those whose Frobenius class satisfies
c in <F>. Groups come as Cayley tables (identity = 0) or as permutation
generators, from which a table is synthesized by closure.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

HEADER = "density of g in G with c in <g>; equals the Chebotarev density of unramified primes whose decomposition group contains c"


class GroupError(ValueError):
    def __init__(self, kind: str, detail: str, witness: tuple = ()):
        super().__init__(f"{kind}: {detail}" + (f" at {witness}" if witness else ""))
        self.kind = kind
        self.witness = witness


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.table[a].index(0)

    def power(self, a: int, n: int) -> int:
        out = 0
        for _ in range(n):
            out = self.table[out][a]
        return out

    def cyclic_subgroup(self, a: int) -> frozenset[int]:
        seen = {0}
        x = a
        while x not in seen:
            seen.add(x)
            x = self.table[x][a]
        return frozenset(seen)

    def element_order(self, a: int) -> int:
        return len(self.cyclic_subgroup(a))

    def conjugacy_classes(self) -> list[list[int]]:
        left = set(range(self.order))
        out = []
        while left:
            a = min(left)
            cls = sorted({self.mul(self.mul(h, a), self.inverse(h)) for h in range(self.order)})
            out.append(cls)
            left -= set(cls)
        return out

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)


def validate_group(table: Sequence[Sequence[int]], labels: Sequence[str] | None = None) -> FiniteGroup:
    """Check the group axioms exhaustively; element 0 must be the identity."""
    n = len(table)
    if n == 0:
        raise GroupError("shape", "empty table")
    rows = []
    for i, row in enumerate(table):
        if len(row) != n:
            raise GroupError("shape", f"row {i} has length {len(row)}, expected {n}", (i,))
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < n:
                raise GroupError("closure", f"entry {x!r} is not an element", (i, j))
        rows.append(tuple(row))
    for a in range(n):
        if rows[0][a] != a or rows[a][0] != a:
            raise GroupError("identity", "element 0 is not a two-sided identity", (a,))
    for a in range(n):
        inv = [b for b in range(n) if rows[a][b] == 0]
        if not inv or rows[inv[0]][a] != 0:
            raise GroupError("inverse", f"element {a} has no two-sided inverse", (a,))
    for a in range(n):
        ra = rows[a]
        for b in range(n):
            ab = ra[b]
            rb = rows[b]
            rab = rows[ab]
            for c in range(n):
                if rab[c] != ra[rb[c]]:
                    raise GroupError("associativity", "(ab)c != a(bc)", (a, b, c))
    return FiniteGroup(tuple(rows), tuple(labels) if labels else None)


def check_central_involution(G: FiniteGroup, c: int) -> None:
    if not 0 <= c < G.order:
        raise GroupError("involution", f"{c} is not an element", (c,))
    if c == 0:
        raise GroupError("involution", "c is the identity", (c,))
    if G.mul(c, c) != 0:
        raise GroupError("involution", "c^2 is not the identity", (c,))
    for h in range(G.order):
        if G.mul(c, h) != G.mul(h, c):
            raise GroupError("central", "c does not commute with an element", (c, h))


@dataclass(frozen=True)
class DensityReport:
    order: int
    c: int
    favorable: tuple[int, ...]
    favorable_classes: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    @property
    def favorable_count(self) -> int:
        return len(self.favorable)

    @property
    def density(self) -> Fraction:
        return Fraction(self.favorable_count, self.order)

    def to_json(self) -> dict:
        lab = (lambda a: self.labels[a]) if self.labels else (lambda a: a)
        d = self.density
        return {
            "header": HEADER,
            "order": self.order,
            "c": lab(self.c),
            "favorable_count": self.favorable_count,
            "density": f"{d.numerator}/{d.denominator}",
            "favorable": [lab(a) for a in self.favorable],
            "favorable_classes": [[lab(a) for a in cls] for cls in self.favorable_classes],
        }


def frobenius_density(G: FiniteGroup, c: int) -> DensityReport:
    check_central_involution(G, c)
    favorable = tuple(a for a in range(G.order) if c in G.cyclic_subgroup(a))
    fav = set(favorable)
    classes = tuple(tuple(cls) for cls in G.conjugacy_classes() if cls[0] in fav)
    return DensityReport(G.order, c, favorable, classes, G.labels)


def _cosets(G: FiniteGroup, c: int) -> tuple[list[int], dict[int, int]]:
    reps: list[int] = []
    coset_of: dict[int, int] = {}
    for a in range(G.order):
        if a not in coset_of:
            coset_of[a] = coset_of[G.mul(a, c)] = len(reps)
            reps.append(a)
    return reps, coset_of


def quotient_table(G: FiniteGroup, c: int) -> list[list[int]]:
    """Cayley table of G / {1, c}, cosets numbered by least representative."""
    reps, coset_of = _cosets(G, c)
    return [[coset_of[G.mul(a, b)] for b in reps] for a in reps]


def quotient_check(G: FiniteGroup, c: int) -> bool:
    """{1, c} is normal and G/{1, c} is a group of order |G|/2."""
    try:
        check_central_involution(G, c)
    except GroupError:
        return False
    reps, coset_of = _cosets(G, c)
    if 2 * len(reps) != G.order:
        return False
    # coset products must not depend on the representatives
    for a in range(G.order):
        for b in range(G.order):
            ab = coset_of[G.mul(a, b)]
            if coset_of[G.mul(G.mul(a, c), b)] != ab or coset_of[G.mul(a, G.mul(b, c))] != ab:
                return False
    try:
        validate_group(quotient_table(G, c))
    except GroupError:
        return False
    return True


# --- permutations ---------------------------------------------------------

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> tuple[int, ...]:
    """Cycle notation on points 1..n, e.g. ``"(1 2 3)(4 5)"``; ``"()"`` is the
    identity. Returned as an image tuple on 0..n-1."""
    text = text.strip()
    if _CYCLE_RE.sub("", text).strip():
        raise GroupError("permutation", f"malformed cycle notation {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        try:
            pts = [int(p) for p in body.replace(",", " ").split()]
        except ValueError:
            raise GroupError("permutation", f"non-integer point in ({body})") from None
        if any(p < 1 for p in pts) or len(set(pts)) != len(pts):
            raise GroupError("permutation", f"bad cycle ({body})")
        cycles.append(pts)
    n = max([degree or 0] + [p for cy in cycles for p in cy])
    img = list(range(n))
    used: set[int] = set()
    for cy in cycles:
        if used & set(cy):
            raise GroupError("permutation", f"cycles overlap in {text!r}")
        used |= set(cy)
        for a, b in zip(cy, cy[1:] + cy[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def render_cycles(perm: Sequence[int]) -> str:
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cy, x = [], start
        while x not in seen:
            seen.add(x)
            cy.append(str(x + 1))
            x = perm[x]
        out.append("(" + " ".join(cy) + ")")
    return "".join(out) or "()"


def _compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """p*q = apply q, then p."""
    return tuple(p[q[x]] for x in range(len(q)))


def group_from_permutations(generators: Sequence[Sequence[int]]) -> tuple[FiniteGroup, list[tuple[int, ...]]]:
    if not generators:
        n = 1
    else:
        n = max(len(p) for p in generators)
    gens = [tuple(p) + tuple(range(len(p), n)) for p in generators]
    ident = tuple(range(n))
    elements = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = _compose(x, s)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    table = [[index[_compose(a, b)] for b in elements] for a in elements]
    return validate_group(table, [render_cycles(e) for e in elements]), elements


_WORD_RE = re.compile(r"g(\d+)(?:\^(-?\d+))?")


def _resolve_c(spec_c, G: FiniteGroup, elements=None, gen_idx=None) -> int:
    if isinstance(spec_c, int) and not isinstance(spec_c, bool):
        return spec_c
    if not isinstance(spec_c, str):
        raise GroupError("spec", f"bad c {spec_c!r}")
    if elements is None:
        if spec_c.isdigit():
            return int(spec_c)
        raise GroupError("spec", f"c {spec_c!r} must be an element index for a table group")
    if spec_c.strip().startswith("("):
        perm = parse_cycles(spec_c, len(elements[0]))
        try:
            return elements.index(perm)
        except ValueError:
            raise GroupError("spec", f"c = {spec_c} is not in the generated group") from None
    x = 0
    for tok in spec_c.replace("*", " ").split():
        m = _WORD_RE.fullmatch(tok)
        if not m or int(m[1]) >= len(gen_idx):
            raise GroupError("spec", f"bad word token {tok!r} in c")
        k = gen_idx[int(m[1])]
        e = int(m[2]) if m[2] else 1
        if e < 0:
            k, e = G.inverse(k), -e
        for _ in range(e):
            x = G.mul(x, k)
    return x


def load_group_spec(doc: Mapping | str) -> tuple[FiniteGroup, int]:
    """Read ``{"order", "table", "c"}`` or ``{"perm_generators", "c"}``."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise GroupError("spec", f"not valid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise GroupError("spec", "group spec must be a JSON object")
    if "c" not in doc:
        raise GroupError("spec", "missing 'c'")
    if "table" in doc:
        unknown = set(doc) - {"order", "table", "c"}
        if unknown:
            raise GroupError("spec", f"unknown keys {sorted(unknown)}")
        G = validate_group(doc["table"])
        if "order" in doc and doc["order"] != G.order:
            raise GroupError("spec", f"order {doc['order']} does not match table size {G.order}")
        return G, _resolve_c(doc["c"], G)
    if "perm_generators" in doc:
        unknown = set(doc) - {"perm_generators", "c"}
        if unknown:
            raise GroupError("spec", f"unknown keys {sorted(unknown)}")
        raw = doc["perm_generators"]
        gens = []
        for gen in raw:
            text = gen if isinstance(gen, str) else "".join(gen)
            gens.append(parse_cycles(text))
        degree = max([1] + [len(p) for p in gens])
        gens = [p + tuple(range(len(p), degree)) for p in gens]
        G, elements = group_from_permutations(gens)
        gen_idx = [elements.index(p) for p in gens]
        return G, _resolve_c(doc["c"], G, elements, gen_idx)
    raise GroupError("spec", "need 'table' or 'perm_generators'")


# --- small constructors ---------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    return validate_group([[(a + b) % n for b in range(n)] for a in range(n)])


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; element r^k s^e has index k + n*e."""

    def mul(x: int, y: int) -> int:
        k1, e1 = x % n, x // n
        k2, e2 = y % n, y // n
        k = (k1 + (-k2 if e1 else k2)) % n
        return k + n * ((e1 + e2) % 2)

    m = 2 * n
    return validate_group([[mul(a, b) for b in range(m)] for a in range(m)])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """(g, h) has index g * |H| + h."""
    n, m = G.order, H.order
    table = [
        [G.mul(a // m, b // m) * m + H.mul(a % m, b % m) for b in range(n * m)]
        for a in range(n * m)
    ]
    return validate_group(table)


def central_involutions(G: FiniteGroup) -> list[int]:
    out = []
    for c in range(1, G.order):
        try:
            check_central_involution(G, c)
        except GroupError:
            continue
        out.append(c)
    return out
