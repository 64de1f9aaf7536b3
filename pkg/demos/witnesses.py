"""Premise checks on truncated sequences.

In the lattice of order-convex subsets of a chain z < x_0 < x_1 < ..., the
singletons a_m = {x_m} with c = {z} satisfy the three premises on every
truncation.  In subspace lattices over GF(2) an independent family of
pairwise perspective lines is found by search, and c is assembled from the
common complements.

    python demos/witnesses.py
"""

from latkit.generators import co_chain, subspaces
from latkit.witnesses import co_chain_instance, independence_check, modhom_witness_search, nonhom_check


def main():
    print("order-convex subsets")
    for n in range(3, 9):
        L = co_chain(n)
        rep = nonhom_check(co_chain_instance(L, n))
        print(f"  co_chain({n}): {L.n:>3} elements, (i)={rep.i} (ii)={rep.ii} (iii)={rep.iii}")
    print("subspaces of GF(2)^d")
    for d in (2, 3, 4):
        L = subspaces(2, d)
        inst = modhom_witness_search(L, d)
        ok, _ = independence_check(L, inst.a)
        rep = nonhom_check(inst)
        a = " ".join(L.labels[x] for x in inst.a)
        print(f"  d={d}: a = {a}, c = {L.labels[inst.c]}, independent={ok}, "
              f"(i)={rep.i} (ii)={rep.ii} (iii)={rep.iii}")


if __name__ == "__main__":
    main()
