"""Embed a lower bounded lattice into a product of small lower bounded factors.

For each join-irreducible p the factor L_p consists of all joins of the
elements D-reachable from p, plus a fresh zero O.  The map
x -> (join of the reachable elements below x)_p is then an order-embedding
that preserves joins and all meets.  The script prints the factors, the
embedding table and the verification record for N5, then shows M3 being
refused because of its D-cycle.

    python demos/fermentable_embedding.py
"""

from latkit.errors import LeavenInvalid
from latkit.fermentable import decompose, merge_factors
from latkit.generators import fig1, m_k, n5


def show(L):
    dec = decompose(L)
    print(f"{L.name}: {len(dec.factors)} factors")
    for f in dec.factors:
        reach = ", ".join(L.labels[q] for q in f.sigma_p)
        print(f"  L_{L.labels[f.p]}: {f.lattice.n} elements, generated by {{{reach}}}")
    names = [f"L_{L.labels[f.p]}" for f in dec.factors]
    print("  " + "x".ljust(8) + "".join(n.ljust(8) for n in names))
    for x in range(L.n):
        row = [f.lattice.labels[v] for f, v in zip(dec.factors, dec.phi[x])]
        print("  " + L.labels[x].ljust(8) + "".join(v.ljust(8) for v in row))
    print("  verification:", dec.verification.to_json())
    print("  factors with equal kernels:", merge_factors(dec))
    print()


def main():
    show(n5())
    show(fig1(1))
    try:
        decompose(m_k(3))
    except LeavenInvalid as exc:
        rep = exc.report
        M = m_k(3)
        print(f"M3 refused: {rep.failed}, cycle {[M.labels[v] for v in rep.witness]}")


if __name__ == "__main__":
    main()
