"""Join-covers, minimal join-covers, the join-dependency relation D and
lower-boundedness of finite lattices.

A join-cover is never materialised as an arbitrary finite set: a cover and
the antichain of its maximal elements refine each other, so every
quantification over covers runs over antichains only.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import NotAHomomorphism, SigmaNotJoinIrreducible, WMCRPFails
from .lattice import ElementSet, FiniteLattice, as_mask, iter_bits, join_irreducibles


@dataclass(frozen=True)
class JoinCover:
    target: int
    cover: ElementSet

    def labels(self, L: FiniteLattice) -> list[str]:
        return [L.labels[x] for x in self.cover]


def join_of_mask(L: FiniteLattice, mask: int) -> int:
    return L.join_all(iter_bits(mask))


def down_mask(L: FiniteLattice, mask: int) -> int:
    m = 0
    for x in iter_bits(mask):
        m |= L.down[x]
    return m


def is_nontrivial_join_cover(L: FiniteLattice, a: int, X) -> bool:
    """``a <= join(X)`` while ``a`` lies below no single member of ``X``."""
    mask = as_mask(X)
    if L.up[a] & mask:
        return False
    return L.le(a, join_of_mask(L, mask))


def refines(L: FiniteLattice, X, Y) -> bool:
    """``X << Y``: every member of X lies below some member of Y."""
    return as_mask(X) & ~down_mask(L, as_mask(Y)) == 0


def iter_antichains(L: FiniteLattice, candidates: int) -> Iterator[int]:
    """All antichains (as bitmasks, the empty one included) inside ``candidates``."""
    comp = [L.up[x] | L.down[x] for x in range(L.n)]
    elems = list(iter_bits(candidates))

    def rec(start, chosen, allowed):
        yield chosen
        for i in range(start, len(elems)):
            x = elems[i]
            if allowed >> x & 1:
                yield from rec(i + 1, chosen | 1 << x, allowed & ~comp[x])

    yield from rec(0, 0, candidates)


def _sigma_mask(L, Sigma) -> int:
    J = join_irreducibles(L).mask
    return J if Sigma is None else as_mask(Sigma)


def is_minimal_cover(L: FiniteLattice, a: int, E: int) -> bool:
    """Minimality of a nontrivial join-cover ``E`` of ``a``.

    Some cover X << E misses a member e of E exactly when the largest such
    candidate, every y in down(E) other than e with a not below y, still
    covers ``a``; so one join per member of E decides the question.
    """
    if not is_nontrivial_join_cover(L, a, E):
        return False
    below = down_mask(L, E) & ~L.up[a]
    for e in iter_bits(E):
        if L.le(a, join_of_mask(L, below & ~(1 << e))):
            return False
    return True


def minimal_join_covers(L: FiniteLattice, a: int, Sigma=None) -> list[JoinCover]:
    """M_Sigma(a): the minimal nontrivial join-covers of ``a`` inside Sigma.

    Candidates are the antichains of Sigma n J(L) whose members are not above ``a``.
    """
    J = join_irreducibles(L).mask
    cand = _sigma_mask(L, Sigma) & J & ~L.up[a]
    out = []
    for E in iter_antichains(L, cand):
        if E and is_minimal_cover(L, a, E):
            out.append(JoinCover(a, ElementSet(L.n, E)))
    out.sort(key=lambda jc: (len(jc.cover), jc.cover.tolist()))
    return out


def _check_sigma(L, Sigma) -> int:
    S = _sigma_mask(L, Sigma)
    bad = S & ~join_irreducibles(L).mask
    if bad:
        raise SigmaNotJoinIrreducible(next(iter_bits(bad)))
    return S


def wmcrp_counterexample(L: FiniteLattice, Sigma=None, method: str = "minimal"):
    """A pair ``(p, X)`` with X in C(p) not refined by any member of M_Sigma(p), or None.

    ``method="exhaustive"`` walks every antichain cover of every p in Sigma.
    ``method="minimal"`` only walks the minimal covers of p taken over all of
    J(L): every cover is refined by one of those, and a minimal cover can only
    be refined by a cover containing it, so the property holds iff each of
    them already lies inside Sigma.
    """
    S = _check_sigma(L, Sigma)
    for p in iter_bits(S):
        if method == "minimal":
            for jc in minimal_join_covers(L, p, None):
                if jc.cover.mask & ~S:
                    return p, jc.cover
        elif method == "exhaustive":
            Ms = [jc.cover.mask for jc in minimal_join_covers(L, p, S)]
            for X in iter_antichains(L, L.full & ~L.up[p]):
                if X and L.le(p, join_of_mask(L, X)):
                    if not any(refines(L, E, X) for E in Ms):
                        return p, ElementSet(L.n, X)
        else:
            raise ValueError(f"unknown method {method!r}")
    return None


def wmcrp_check(L: FiniteLattice, Sigma=None, method: str = "minimal") -> bool:
    return wmcrp_counterexample(L, Sigma, method) is None


def mcrp_check(L: FiniteLattice, Sigma=None, method: str = "minimal") -> bool:
    # M_Sigma(p) is a set of subsets of a finite lattice, hence always finite
    return wmcrp_check(L, Sigma, method)


# ---------------------------------------------------------------------------
# the join-dependency relation


@dataclass
class DGraph:
    """The D relation on a set of join-irreducibles; edges map to a witness ``c``."""

    vertices: tuple[int, ...]
    edges: dict[tuple[int, int], int] = field(default_factory=dict)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges)

    def successors(self, a: int) -> list[int]:
        return sorted(b for (x, b) in self.edges if x == a)

    def restricted(self, Sigma) -> "DGraph":
        S = as_mask(Sigma)
        vs = tuple(v for v in self.vertices if S >> v & 1)
        return DGraph(vs, {e: c for e, c in self.edges.items()
                           if S >> e[0] & 1 and S >> e[1] & 1})

    def reachable(self, p: int) -> list[int]:
        """Reflexive-transitive D-successors of ``p``."""
        seen = {p}
        stack = [p]
        while stack:
            for b in self.successors(stack.pop()):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return sorted(seen)

    def find_cycle(self) -> list[int] | None:
        """A D-cycle ``[v0, v1, ..., v0]`` or None (deterministic DFS order)."""
        state: dict[int, int] = {}
        path: list[int] = []

        def dfs(v):
            state[v] = 1
            path.append(v)
            for w in self.successors(v):
                if state.get(w) == 1:
                    return path[path.index(w):] + [w]
                if w not in state:
                    found = dfs(w)
                    if found:
                        return found
            path.pop()
            state[v] = 2
            return None

        for v in self.vertices:
            if v not in state:
                found = dfs(v)
                if found:
                    return found
        return None

    def topological_order(self) -> list[int] | None:
        """Vertices ordered so every D-edge points forward, or None on a cycle."""
        indeg = {v: 0 for v in self.vertices}
        for _, b in self.edges:
            indeg[b] += 1
        ready = sorted(v for v, d in indeg.items() if d == 0)
        out = []
        while ready:
            v = ready.pop(0)
            out.append(v)
            for w in self.successors(v):
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
            ready.sort()
        return out if len(out) == len(self.vertices) else None

    def to_json(self, L: FiniteLattice) -> list[list[str]]:
        return [[L.labels[a], L.labels[b], L.labels[c]] for (a, b), c in sorted(self.edges.items())]

    def to_dot(self, L: FiniteLattice) -> str:
        import json

        lines = [f"digraph {json.dumps('D ' + (L.name or 'lattice'))} {{"]
        for v in self.vertices:
            lines.append(f"  n{v} [label={json.dumps(L.labels[v], ensure_ascii=False)}];")
        for (a, b), c in sorted(self.edges.items()):
            lines.append(f"  n{a} -> n{b} [label={json.dumps(L.labels[c], ensure_ascii=False)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _d_edges_into(L: FiniteLattice, b: int, J: list[int], fast: bool) -> dict:
    joins_b = L.join[b]
    ok = L.leq[:, joins_b]                      # ok[a, c]: a <= b v c
    strict = list(iter_bits(L.down[b] & ~(1 << b)))
    if fast:
        strict = list(L.lower_covers[b])        # b is join-irreducible: one lower cover
    bad = np.zeros_like(ok)
    for x in strict:
        bad |= L.leq[:, L.join[x]]              # a <= x v c for some x < b
    good = ok & ~bad
    out = {}
    for a in J:
        if a != b:
            cs = np.flatnonzero(good[a])
            if cs.size:
                out[(a, b)] = int(cs[0])
    return out


def d_relation_direct(L: FiniteLattice, fast: bool = False, jobs: int = 1) -> DGraph:
    """a D b iff a != b and some c has a <= b v c but a not <= x v c for all x < b.

    The literal definition ranges over every x < b; ``fast=True`` only uses
    the unique lower cover of b, which is equivalent by monotonicity.  The
    witness kept for each edge is the least-indexed c.
    """
    J = join_irreducibles(L).tolist()
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            parts = list(pool.map(lambda b: _d_edges_into(L, b, J, fast), J))
    else:
        parts = [_d_edges_into(L, b, J, fast) for b in J]
    edges = {}
    for part in parts:
        edges.update(part)
    return DGraph(tuple(J), dict(sorted(edges.items())))


def d_relation_from_covers(L: FiniteLattice, Sigma=None) -> DGraph:
    """a D b iff b belongs to some minimal join-cover E of a inside Sigma.

    The witness stored for the edge is the join of E minus b.
    """
    S = _check_sigma(L, Sigma)
    bad = wmcrp_counterexample(L, S)
    if bad is not None:
        raise WMCRPFails(bad[0], bad[1].tolist())
    edges = {}
    for a in iter_bits(S):
        for jc in minimal_join_covers(L, a, S):
            for b in jc.cover:
                if (a, b) not in edges:
                    edges[(a, b)] = join_of_mask(L, jc.cover.mask & ~(1 << b))
    return DGraph(tuple(iter_bits(S)), dict(sorted(edges.items())))


def is_lower_bounded_lattice(L: FiniteLattice, D: DGraph | None = None):
    """Finite criterion: the D relation on J(L) has no cycle.

    Returns ``(True, topological order of J(L))`` or ``(False, cycle)``.
    """
    D = d_relation_direct(L) if D is None else D
    cycle = D.find_cycle()
    if cycle is not None:
        return False, cycle
    return True, D.topological_order()


# ---------------------------------------------------------------------------
# homomorphisms


def check_homomorphism(K: FiniteLattice, L: FiniteLattice, f: Sequence[int]) -> None:
    f = np.asarray(f, dtype=np.intp)
    for name, tk, tl in (("join", K.join, L.join), ("meet", K.meet, L.meet)):
        lhs = f[tk]
        rhs = tl[np.ix_(f, f)]
        diff = np.argwhere(lhs != rhs)
        if diff.size:
            raise NotAHomomorphism(tuple(map(int, diff[0])), name)


def is_lower_bounded_hom(K: FiniteLattice, L: FiniteLattice, f: Sequence[int]) -> bool:
    """Every preimage of a principal filter of L is empty or has a least element."""
    check_homomorphism(K, L, f)
    for y in range(L.n):
        pre = 0
        for x in range(K.n):
            if L.leq[y, f[x]]:
                pre |= 1 << x
        if pre and not any(K.up[x] & pre == pre for x in iter_bits(pre)):
            return False
    return True
