"""Notions of convergence on a finite lattice: families of downward directed
subsets closed under translations, the closures they induce, and the lattice
of closed filters.

A family is either explicit (a sorted tuple of bitmasks) or the implicit
family of all nonempty subsets having a least element, which is far too large
to list but has an obvious membership test.

On a finite lattice every nonempty filter is principal, so the filter lattice
always comes out isomorphic to L; reports say so with ``finite_degenerate``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .distributivity import _triple_closures, image_orbit, is_join_semidistributive
from .errors import AxiomViolation, SubsetBoundExceeded
from .lattice import FiniteLattice, as_mask, find_isomorphism, iter_bits

LEAST_ELEMENT_LIMIT = 1 << 16


def _sort_key(mask: int):
    return list(iter_bits(mask))


@dataclass
class ConvergenceFamily:
    owner: FiniteLattice
    members: tuple[int, ...] = ()
    special: bool = False
    least_element: bool = False

    def __post_init__(self):
        self.members = tuple(sorted(set(self.members), key=_sort_key))
        self._set = frozenset(self.members)

    def __contains__(self, X) -> bool:
        m = as_mask(X)
        if self.least_element:
            return m != 0 and self.owner.meet_all(iter_bits(m)) in set(iter_bits(m))
        return m in self._set

    def __len__(self):
        if self.least_element:
            return sum(1 << (self.owner.up[x].bit_count() - 1) for x in range(self.owner.n))
        return len(self.members)

    def __iter__(self):
        if not self.least_element:
            yield from self.members
            return
        if len(self) > LEAST_ELEMENT_LIMIT:
            raise SubsetBoundExceeded(len(self), LEAST_ELEMENT_LIMIT)
        L = self.owner
        for x in range(L.n):
            above = list(iter_bits(L.up[x] & ~(1 << x)))
            for r in range(len(above) + 1):
                for extra in combinations(above, r):
                    yield (1 << x) | sum(1 << y for y in extra)

    def meets_inside(self, A: int) -> int:
        """Mask of the meets of all members contained in ``A``."""
        if self.least_element:
            return A                        # singletons are members, every meet is a member
        L = self.owner
        out = 0
        for X in self.members:
            if X & ~A == 0:
                out |= 1 << L.meet_all(iter_bits(X))
        return out

    def labels(self) -> list[list[str]]:
        return [[self.owner.labels[x] for x in iter_bits(X)] for X in self]


def least_element_family(L: FiniteLattice) -> ConvergenceFamily:
    """All nonempty subsets of L with a least element."""
    return ConvergenceFamily(L, least_element=True)


def saturate(L: FiniteLattice, seeds, special: bool = False, cap: int | None = None) -> ConvergenceFamily:
    """Close ``seeds`` under the pointwise maps a v (-) and a ^ (-)."""
    orb = image_orbit(L, [(-1, as_mask(X)) for X in seeds], cap)
    return ConvergenceFamily(L, tuple(orb.images()), special=special)


def special_family(L: FiniteLattice, cap: int | None = None, orbit=None) -> ConvergenceFamily:
    """All sets ``s <> (a * {b, c})`` with the adjoined top removed.

    The closures a * {b, c} are the seeds; the translated images are found
    by :func:`image_orbit`, which reaches exactly the sets f[W] for f in the
    translation monoid.  An orbit computed for the SD_join^omega check may be
    reused: it reaches the same image sets.
    """
    if orbit is not None:
        return ConvergenceFamily(L, tuple(orbit.images()), special=True)
    seeds = sorted({W for _, W in _triple_closures(L)})
    return saturate(L, seeds, special=True, cap=cap)


@dataclass
class AxiomReport:
    results: dict[str, bool] = field(default_factory=dict)
    violations: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def to_json(self) -> dict:
        return {"axioms": dict(self.results), "violations": dict(self.violations)}


def _image(row, ws) -> int:
    m = 0
    for w in ws:
        m |= 1 << row[w]
    return m


def check_axioms(F: ConvergenceFamily, groups=None) -> AxiomReport:
    """Check (S1)-(S3), and (S4) when ``F.special``; keep the first violation of each.

    ``groups`` may carry the precomputed output of ``sd_omega_seeds``.
    """
    L = F.owner
    J, M = L.join.tolist(), L.meet.tolist()
    rep = AxiomReport()
    names = ["S1", "S2", "S3"] + (["S4"] if F.special else [])
    for name in names:
        rep.results[name] = True

    def fail(name, instance):
        if rep.results[name]:
            rep.results[name] = False
            rep.violations[name] = instance

    for X in F:
        ws = list(iter_bits(X))
        if not ws:
            fail("S1", {"X": []})
            continue
        for x, y in combinations(ws, 2):
            if not L.down[x] & L.down[y] & X:
                fail("S1", {"X": ws, "pair": [x, y]})
                break
        mX = L.meet_all(ws)
        for a in range(L.n):
            up = _image(J[a], ws)
            if up not in F:
                fail("S2", {"a": a, "X": ws, "missing": list(iter_bits(up))})
            elif L.meet_all(iter_bits(up)) != J[a][mX]:
                fail("S2", {"a": a, "X": ws, "meet": L.meet_all(iter_bits(up)), "expected": J[a][mX]})
            down = _image(M[a], ws)
            if down not in F:
                fail("S3", {"a": a, "X": ws, "missing": list(iter_bits(down))})
            else:
                assert L.meet_all(iter_bits(down)) == M[a][mX]
    if F.special:
        groups = _triple_closures(L) if groups is None else groups
        for (t, W), (a, b, c) in groups.items():
            if W not in F:
                fail("S4", {"a": a, "b": b, "c": c, "missing": list(iter_bits(W))})
                break
            mW = L.meet_all(iter_bits(W))
            if mW != t:
                fail("S4", {"a": a, "b": b, "c": c, "meet": mW, "expected": t})
                break
    return rep


def cl_closure(F: ConvergenceFamily, A) -> int:
    """Least superset of A containing the meet of every member of F inside it."""
    A = as_mask(A)
    while True:
        B = A | F.meets_inside(A)
        if B == A:
            return A
        A = B


def _filter_step(L: FiniteLattice, A: int) -> int:
    B = A
    xs = list(iter_bits(A))
    for x in xs:
        B |= L.up[x]
    for x, y in combinations(xs, 2):
        B |= 1 << int(L.meet[x, y])
    return B


def fl_closure(F: ConvergenceFamily, A, with_top: bool = False) -> int:
    """Least S-closed filter containing A (the empty set counts as a filter).

    ``with_top=True`` also puts the top of L in, as elements of the filter
    lattice require.
    """
    L = F.owner
    A = as_mask(A)
    if with_top:
        A |= 1 << L.top
    while True:
        B = _filter_step(L, A | F.meets_inside(A))
        if B == A:
            return A
        A = B


def is_filter(L: FiniteLattice, A: int) -> bool:
    return _filter_step(L, A) == A


def filters(L: FiniteLattice) -> list[int]:
    """Every filter of L: the empty one and the principal ones."""
    return [0] + [L.up[x] for x in range(L.n)]


def is_closed(F: ConvergenceFamily, A) -> bool:
    A = as_mask(A)
    return F.meets_inside(A) & ~A == 0


def translate_sets(F: ConvergenceFamily, X, a: int) -> tuple[int, int]:
    """``({y : a ^ y in X}, {y : a v y in X})`` as bitmasks."""
    L = F.owner
    X = as_mask(X)
    meet_pre = join_pre = 0
    for y in range(L.n):
        if X >> int(L.meet[a, y]) & 1:
            meet_pre |= 1 << y
        if X >> int(L.join[a, y]) & 1:
            join_pre |= 1 << y
    return meet_pre, join_pre


@dataclass
class SFilterLattice:
    """Closed filters containing the top, ordered by reverse inclusion."""

    owner: FiniteLattice
    filters: tuple[int, ...]
    lattice: FiniteLattice
    embedding: tuple[int, ...]
    order_embedding: bool
    joins_preserved: bool
    top_preserved: bool
    iso_to_L: bool
    sd_join: bool
    finite_degenerate: bool = True

    def to_json(self) -> dict:
        return {"size": len(self.filters), "order_embedding": self.order_embedding,
                "joins_preserved": self.joins_preserved, "top_preserved": self.top_preserved,
                "fil_iso_to_L": self.iso_to_L, "fil_sd_join": self.sd_join,
                "finite_degenerate": self.finite_degenerate}


def fil_lattice(F: ConvergenceFamily, axioms: AxiomReport | None = None) -> SFilterLattice:
    """Build the lattice of S-closed filters containing the top and check x -> up(x).

    Raises AxiomViolation when F fails one of (S1)-(S3).
    """
    rep = check_axioms(F) if axioms is None else axioms
    for name in ("S1", "S2", "S3"):
        if not rep.results.get(name, True):
            raise AxiomViolation(name, rep.violations[name])
    L = F.owner
    # every nonempty filter of a finite lattice is principal
    fs = sorted({A for A in filters(L) if A >> L.top & 1 and is_closed(F, A)},
                key=lambda A: (-A.bit_count(), _sort_key(A)))
    pos = {A: i for i, A in enumerate(fs)}
    m = len(fs)
    leq = np.array([[B & ~A == 0 for B in fs] for A in fs], dtype=bool)
    K = FiniteLattice.from_leq([",".join(L.labels[x] for x in iter_bits(A)) for A in fs],
                               leq, f"Fil({L.name})")
    emb = tuple(pos.get(L.up[x], -1) for x in range(L.n))
    ok = all(e >= 0 for e in emb)
    e = np.array(emb)
    order = ok and len(set(emb)) == L.n and bool((K.leq[np.ix_(e, e)] == L.leq).all())
    joins = ok and bool((e[L.join] == K.join[np.ix_(e, e)]).all())
    top = ok and emb[L.top] == K.top
    iso = m == L.n and find_isomorphism(L, K) is not None
    sd, _ = is_join_semidistributive(K)
    return SFilterLattice(L, tuple(fs), K, emb, order, joins, top, iso, sd)


def report_fragment(F: ConvergenceFamily, groups=None) -> dict:
    rep = check_axioms(F, groups)
    out = {"axioms": dict(rep.results), "special": F.special}
    try:
        fil = fil_lattice(F, rep)
        out.update(fil_iso_to_L=fil.iso_to_L, fil_sd_join=fil.sd_join, finite_degenerate=True)
    except AxiomViolation:
        out.update(fil_iso_to_L=None, fil_sd_join=None, finite_degenerate=True)
    return out
