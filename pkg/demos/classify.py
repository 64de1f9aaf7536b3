"""Classify a handful of small lattices.

Prints one row per lattice with the verdicts of every decision procedure:
lower boundedness (no cycle in the D relation), join-semidistributivity,
dual zipper distributivity, the largest dual staircase depth checked, and
the SD_join^omega identity.  On finite lattices the last four always agree.

    python demos/classify.py
"""

from latkit.generators import boolean, co_chain, fig1, m_k, n5, random_lattice, subspaces
from latkit.report import analyze

LATTICES = [n5(), m_k(3), boolean(3), co_chain(4), subspaces(2, 3), fig1(3),
            random_lattice(8, 11)]


def main():
    header = f"{'lattice':<16}{'size':>5}  {'lb':<6}{'sd':<6}{'zip':<6}{'stair':>5}  {'omega':<6}{'orbit':>7}"
    print(header)
    print("-" * len(header))
    for L in LATTICES:
        rep = analyze(L, convergence=False, witnesses=False)
        print(f"{L.name:<16}{L.n:>5}  {str(rep['lower_bounded']):<6}{str(rep['sd_join']):<6}"
              f"{str(rep['zipper']):<6}{rep['staircase_upto']:>5}  {rep['sd_omega']:<6}"
              f"{rep['orbit_size']:>7}")
        if rep["d_cycle"]:
            print(f"{'':<16}D-cycle: {' -> '.join(rep['d_cycle'])}")
        if rep["witness"]:
            w = rep["witness"]
            print(f"{'':<16}SD_omega fails at s={w['s']} a={w['a']} b={w['b']} c={w['c']}: "
                  f"{w['lhs']} != {w['rhs']}")


if __name__ == "__main__":
    main()
