"""The special convergence family and its axioms.

The special family collects the sets s <> (a * t) for all triples a, b, c
and all translation sequences s.  On a lattice satisfying SD_join^omega the
family passes axioms S1 to S4 and the closure of every filter under the
family equals the closed filter it generates.  On M3 the last axiom fails:
the meet of a * {b, c} is the top instead of a v (b ^ c) = a.

    python demos/convergence.py
"""

from latkit.convergence import check_axioms, cl_closure, fil_lattice, filters, fl_closure, special_family
from latkit.generators import m_k, n5
from latkit.lattice import iter_bits


def describe(L):
    F = special_family(L)
    rep = check_axioms(F)
    print(f"{L.name}: {len(F)} sets in the special family")
    for X in list(F)[:6]:
        print("  {" + ", ".join(L.labels[x] for x in iter_bits(X)) + "}")
    print("  axioms:", rep.results)
    for name, v in rep.violations.items():
        print(f"  {name} violated:", {k: (L.labels[x] if isinstance(x, int) else x) for k, x in v.items()})
    same = all(cl_closure(F, A) == fl_closure(F, A) for A in filters(L))
    print("  closure equals closed filter on every filter:", same)
    if rep.ok:
        fil = fil_lattice(F, rep)
        print("  closed filters:", len(fil.filters), "isomorphic to L:", fil.iso_to_L,
              "join-semidistributive:", fil.sd_join)
    print()


def main():
    describe(n5())
    describe(m_k(3))


if __name__ == "__main__":
    main()
