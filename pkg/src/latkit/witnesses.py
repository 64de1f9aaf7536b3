"""Premise checks for non-embeddability arguments: sequences (a_n) with an
element c in a lattice with zero, independence and perspectivity in modular
lattices, and witness searches in the built-in families.

Everything here is evaluated on finite truncations: a NonHomInstance with
bound N stands for the first N terms of an infinite sequence, and the report
says whether the premises hold up to N.  No conclusion about embeddings of
the finite lattice itself is drawn.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NotModular, SearchBudgetExceeded
from .lattice import FiniteLattice

DEFAULT_BUDGET = 10**6


def modularity_witness(L: FiniteLattice):
    """First triple (x, y, z) with x <= z and x v (y ^ z) != (x v y) ^ z, or None."""
    J, M = L.join, L.meet
    for x in range(L.n):
        zs = np.flatnonzero(L.leq[x])
        lhs = J[x][M[:, zs]]                        # lhs[y, k] = x v (y ^ z_k)
        rhs = M[J[x][:, None], zs[None, :]]         # rhs[y, k] = (x v y) ^ z_k
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            y, k = map(int, bad[0])
            return x, y, int(zs[k])
    return None


def is_modular(L: FiniteLattice) -> bool:
    return modularity_witness(L) is None


def _require_modular(L):
    w = modularity_witness(L)
    if w is not None:
        raise NotModular(w)


@dataclass(frozen=True)
class NonHomInstance:
    lattice: FiniteLattice
    a: tuple[int, ...]
    c: int
    N: int | None = None

    @property
    def bound(self) -> int:
        return len(self.a) if self.N is None else self.N


@dataclass
class NonHomReport:
    i: bool
    i_violation: tuple[int, int] | None
    ii: list[int | None]
    iii: bool
    nontrivial: bool

    @property
    def premises_hold(self) -> bool:
        return self.i and all(n is not None for n in self.ii) and self.iii

    @property
    def ok(self) -> bool:
        return self.premises_hold and self.nontrivial

    def to_json(self) -> dict:
        return {"i": self.i, "i_violation": self.i_violation, "ii": self.ii,
                "iii": self.iii, "nontrivial": self.nontrivial,
                "premises_hold_up_to_N": self.premises_hold}


def nonhom_check(inst: NonHomInstance) -> NonHomReport:
    """Evaluate the three premises on the first N terms.

    (i) ``join(a_i, i < m) ^ join(a_{m+j}, j < n) = 0`` for m + n <= N;
    (ii) for each m < N the least n with m + n <= N and
    ``a_0 <= join(a_{m+j}, j < n) v c`` (None when there is none);
    (iii) ``a_0 ^ c = 0``.
    """
    L, a, c, N = inst.lattice, inst.a, inst.c, inst.bound
    if N > len(a):
        raise IndexError(f"bound {N} exceeds sequence length {len(a)}")
    zero = L.bottom
    # seg[m][n] = join of a_m .. a_{m+n-1}
    seg = [[zero] * (N - m + 1) for m in range(N + 1)]
    for m in range(N):
        for n in range(1, N - m + 1):
            seg[m][n] = int(L.join[seg[m][n - 1], a[m + n - 1]])
    i_violation = None
    for m in range(N + 1):
        for n in range(N - m + 1):
            if L.meet[seg[0][m], seg[m][n]] != zero:
                i_violation = (m, n)
                break
        if i_violation:
            break
    ii = []
    for m in range(N):
        ii.append(next((n for n in range(N - m + 1)
                        if L.le(a[0], int(L.join[seg[m][n], c]))), None))
    return NonHomReport(i=i_violation is None, i_violation=i_violation, ii=ii,
                        iii=int(L.meet[a[0], c]) == zero, nontrivial=a[0] != zero)


def independence_check(L: FiniteLattice, family):
    """Independence of ``family`` in a modular lattice.

    Uses the singleton form: ``a_i ^ join(a_j, j in Y) = 0`` for every i and
    every Y of indices other than i.  Returns ``(True, None)`` or
    ``(False, (i, Y))`` for the first failure, smallest Y first.
    """
    _require_modular(L)
    fam = list(family)
    idx = range(len(fam))
    for r in range(1, len(fam)):
        for i in idx:
            for Y in itertools.combinations([j for j in idx if j != i], r):
                if L.meet[fam[i], L.join_all(fam[j] for j in Y)] != L.bottom:
                    return False, (i, Y)
    return True, None


def independence_brute_force(L: FiniteLattice, family) -> bool:
    """``join(X) ^ join(Y) = join(X n Y)`` for all index sets X, Y."""
    fam = list(family)
    subsets = [frozenset(s) for r in range(len(fam) + 1)
               for s in itertools.combinations(range(len(fam)), r)]
    jn = {s: L.join_all(fam[i] for i in s) for s in subsets}
    return all(L.meet[jn[X], jn[Y]] == jn[X & Y] for X in subsets for Y in subsets)


@dataclass(frozen=True)
class PerspectivityWitness:
    a: int
    b: int
    c: int

    def valid(self, L: FiniteLattice) -> bool:
        return (L.join[self.a, self.c] == L.join[self.b, self.c]
                and L.meet[self.a, self.c] == L.bottom
                and L.meet[self.b, self.c] == L.bottom)


def _common_complements(L, a, b, join_value=None):
    for c in range(L.n):
        if L.meet[a, c] != L.bottom or L.meet[b, c] != L.bottom:
            continue
        ja = int(L.join[a, c])
        if ja == L.join[b, c] and (join_value is None or ja == join_value):
            yield c


def perspectivity_witness(L: FiniteLattice, a: int, b: int) -> PerspectivityWitness | None:
    """First c (by index) with ``a (+) c = b (+) c``, or None."""
    _require_modular(L)
    c = next(_common_complements(L, a, b), None)
    return None if c is None else PerspectivityWitness(a, b, c)


def _assemble(L, a):
    cs = []
    target = a[0]
    for an in a[1:]:
        c = next(_common_complements(L, target, an, int(L.join[target, an])), None)
        if c is None:
            return None
        cs.append(c)
    return NonHomInstance(L, tuple(a), L.join_all(cs), len(a))


def modhom_witness_search(L: FiniteLattice, k: int, budget: int = DEFAULT_BUDGET):
    """Nonzero independent pairwise perspective ``a_0..a_{k-1}`` with the assembled c.

    Candidates are the atoms first, then every nonzero element; tuples are
    tried in lexicographic order.  For each n > 0 the proof recipe picks c_n
    with ``a_0 (+) c_n = a_n (+) c_n = a_0 v a_n`` and c is the join of the c_n.
    Returns the NonHomInstance or None; raises SearchBudgetExceeded after
    ``budget`` candidate extensions.
    """
    _require_modular(L)
    atoms = [x for x in range(L.n) if L.lower_covers[x] == (L.bottom,)]
    rest = [x for x in range(L.n) if x != L.bottom and x not in atoms]
    spent = 0

    def search(pool):
        def extend(chosen, start, joined):
            nonlocal spent
            if len(chosen) == k:
                return _assemble(L, chosen)
            for pos in range(start, len(pool)):
                x = pool[pos]
                spent += 1
                if spent > budget:
                    raise SearchBudgetExceeded(spent, budget)
                if L.meet[x, joined] != L.bottom:
                    continue
                if any(next(_common_complements(L, y, x), None) is None for y in chosen):
                    continue
                found = extend(chosen + [x], pos + 1, int(L.join[joined, x]))
                if found is not None:
                    return found
            return None

        return extend([], 0, L.bottom)

    found = search(atoms)
    if found is None and rest:
        found = search(atoms + rest)
    return found


def co_chain_instance(L: FiniteLattice, n: int) -> NonHomInstance:
    """In co_chain(n): z = 1, x_m = m + 2, a_m = {x_m}, c = {z}."""
    a = tuple(L.index("{" + str(m + 2) + "}") for m in range(n - 1))
    return NonHomInstance(L, a, L.index("{1}"), n - 1)


def report_fragment(L: FiniteLattice) -> dict:
    out: dict = {"modular": is_modular(L)}
    if not out["modular"]:
        return out
    inst = modhom_witness_search(L, 2)
    if inst is None:
        out.update(independent=None, perspective_pairs=[], nonhom=None)
        return out
    ok, _ = independence_check(L, inst.a)
    rep = nonhom_check(inst)
    out.update(independent=ok,
               perspective_pairs=[[L.labels[x] for x in inst.a] + [L.labels[inst.c]]],
               nonhom={"i": rep.i, "ii": rep.ii, "iii": rep.iii, "nontrivial": rep.nontrivial})
    return out
