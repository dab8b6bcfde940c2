"""Tabulate the density of g with c in <g> over small groups.

    python scripts/density_survey.py [--max-order N]

Covers cyclic, dihedral and products C_a x C_b, D_n x C_b up to the bound,
for every central involution c.
"""
import argparse
from fractions import Fraction

from cmcycles.density import central_involutions, cyclic_group, dihedral_group, direct_product, frobenius_density


def groups(max_order):
    for n in range(2, max_order + 1):
        yield f"C{n}", cyclic_group(n)
    for n in range(2, max_order // 2 + 1):
        yield f"D{n}", dihedral_group(n)
    for a in range(2, max_order + 1):
        for b in range(a, max_order // a + 1):
            yield f"C{a}xC{b}", direct_product(cyclic_group(a), cyclic_group(b))
    for n in range(2, max_order // 4 + 1):
        for b in range(2, max_order // (2 * n) + 1):
            yield f"D{n}xC{b}", direct_product(dihedral_group(n), cyclic_group(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=24)
    args = ap.parse_args(argv)
    print(f"{'group':<10} {'order':>5} {'c':>4} {'density':>8}")
    lowest = None
    for name, G in groups(args.max_order):
        for c in central_involutions(G):
            d = frobenius_density(G, c).density
            assert d >= Fraction(1, G.order)
            lowest = d if lowest is None else min(lowest, d)
            print(f"{name:<10} {G.order:>5} {c:>4} {str(d):>8}")
    print(f"minimum density seen: {lowest}")


if __name__ == "__main__":
    main()
