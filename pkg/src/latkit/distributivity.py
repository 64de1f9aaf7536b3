"""Join-semidistributivity, the * operation, dual *-distributivity, the
alternating translations ``s <> x`` and the infinitary axiom SD_join^omega.

The ambient lattice for ``a * s`` is L with a fresh top ``1*`` adjoined; it is
encoded as the extra index ``L.n`` in extended join/meet tables.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import CapExceeded, SubsetBoundExceeded
from .lattice import FiniteLattice, as_mask, iter_bits

DEFAULT_MONOID_CAP = 10**6
EXHAUSTIVE_SUBSET_N = 15
BATCH = 1 << 14


def monoid_cap() -> int:
    return int(os.environ.get("LATKIT_MONOID_CAP", DEFAULT_MONOID_CAP))


def is_join_semidistributive(L: FiniteLattice):
    """Check ``x v y = x v z  =>  x v y = x v (y ^ z)`` on all triples.

    Returns ``(True, None)`` or ``(False, (x, y, z))`` for the first failure.
    """
    J, M = L.join, L.meet
    for x in range(L.n):
        jx = J[x]
        same = jx[:, None] == jx[None, :]
        bad = same & (jx[M] != jx[:, None])
        if bad.any():
            y, z = map(int, np.argwhere(bad)[0])
            return False, (x, y, z)
    return True, None


# ---------------------------------------------------------------------------
# the * operation


class ToppedLattice:
    """L together with an adjoined top ``1*`` (index ``L.n``)."""

    def __init__(self, L: FiniteLattice):
        self.base = L
        n = L.n
        self.top_star = n
        J = np.empty((n + 1, n + 1), dtype=np.intp)
        M = np.empty((n + 1, n + 1), dtype=np.intp)
        J[:n, :n], M[:n, :n] = L.join, L.meet
        J[n, :], J[:, n] = n, n
        M[n, :], M[:, n] = np.arange(n + 1), np.arange(n + 1)
        self.join, self.meet = J, M

    def label(self, v: int) -> str:
        return "1*" if v == self.top_star else self.base.labels[v]

    def meet_all(self, values) -> int:
        acc = self.top_star
        for v in values:
            acc = int(self.meet[acc, v])
        return acc


def topped(L: FiniteLattice) -> ToppedLattice:
    return ToppedLattice(L)


def star_eval(T: ToppedLattice, a: int, s: Sequence[int]) -> int:
    """``a * s`` with ``a * () = 1*`` and ``a * (s + <b>) = a v (b ^ (a * s))``."""
    v = T.top_star
    for b in s:
        v = int(T.join[a, T.meet[b, v]])
    return v


@dataclass(frozen=True)
class StarClosure:
    a: int
    B: tuple[int, ...]
    values: frozenset[int]
    top_star: int

    def proper(self) -> frozenset[int]:
        """The values other than the adjoined top."""
        return self.values - {self.top_star}


def star_closure(T: ToppedLattice, a: int, B) -> StarClosure:
    """``{a * s : s a finite sequence over B}`` as the fixpoint of the maps v -> a v (b ^ v)."""
    Bl = tuple(sorted(set(iter_bits(as_mask(B)))))
    seen = {T.top_star}
    frontier = [T.top_star]
    while frontier:
        new = []
        for v in frontier:
            for b in Bl:
                w = int(T.join[a, T.meet[b, v]])
                if w not in seen:
                    seen.add(w)
                    new.append(w)
        frontier = new
    return StarClosure(a, Bl, frozenset(seen), T.top_star)


def star_closure_meet(T: ToppedLattice, a: int, B) -> int:
    """Meet of the star closure with ``1*`` removed (``1*`` itself when B is empty)."""
    return T.meet_all(sorted(star_closure(T, a, B).proper()))


def _descend(T: ToppedLattice, A: np.ndarray, Bs: np.ndarray) -> np.ndarray:
    """Least element of a*B for every row (a, B) at once.

    Each map v -> a v (b ^ v) is decreasing on the values above ``a`` and all
    closure values lie above ``a`` or equal ``1*``, so applying the maps of B
    cyclically from ``1*`` descends to their common fixpoint.  That fixpoint
    is the least member of a*B: it lies below ``1*`` and is preserved under
    every map, so by induction it lies below every a * s.
    """
    U = np.full(A.shape, T.top_star, dtype=np.intp)
    while True:
        prev = U
        for i in range(Bs.shape[1]):
            U = T.join[A, T.meet[Bs[:, i:i + 1], U]]
        if np.array_equal(U, prev):
            return U


def _subsets(n: int, k):
    if k == "all":
        for r in range(1, n + 1):
            for B in itertools.combinations(range(n), r):
                yield B + (B[0],) * (n - r)
    else:
        yield from itertools.combinations_with_replacement(range(n), k)


def dual_k_star_distributive(L: FiniteLattice, k="all", method: str = "descent",
                             subset_n: int = EXHAUSTIVE_SUBSET_N):
    """Check ``meet(a * B) = a v meet(B)`` for every a and every nonempty B with |B| <= k.

    ``k="all"`` ranges over every nonempty subset of L and is limited to
    ``subset_n`` elements.  ``method="descent"`` computes meet(a * B) as the
    common fixpoint reached by cyclic application; ``method="closure"``
    enumerates the whole closure set and takes its meet.  Returns
    ``(True, None)`` or ``(False, (a, B))``.
    """
    n = L.n
    if k == "all":
        if n > subset_n:
            raise SubsetBoundExceeded(n, subset_n)
    elif not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer or 'all', got {k!r}")
    T = ToppedLattice(L)
    if method == "closure":
        for B in _subsets(n, k):
            Bset = sorted(set(B))
            rhs_b = L.meet_all(Bset)
            for a in range(n):
                if star_closure_meet(T, a, Bset) != L.join[a, rhs_b]:
                    return False, (a, tuple(Bset))
        return True, None
    if method != "descent":
        raise ValueError(f"unknown method {method!r}")
    gen = _subsets(n, k)
    arange = np.arange(n)
    while True:
        chunk = list(itertools.islice(gen, max(1, BATCH // n)))
        if not chunk:
            return True, None
        Bs = np.array(chunk, dtype=np.intp)
        mB = Bs[:, 0]
        for i in range(1, Bs.shape[1]):
            mB = L.meet[mB, Bs[:, i]]
        rows = np.repeat(Bs, n, axis=0)
        A = np.tile(arange, len(chunk))[:, None]
        least = _descend(T, A, rows)[:, 0]
        rhs = L.join[A[:, 0], np.repeat(mB, n)]
        bad = np.flatnonzero(least != rhs)
        if bad.size:
            r = int(bad[0])
            return False, (int(A[r, 0]), tuple(sorted(set(map(int, rows[r])))))


def staircase_upto(L: FiniteLattice, kmax: int = 3) -> int:
    """Largest k <= kmax such that L is dually k-*-distributive."""
    best = 0
    for k in range(1, kmax + 1):
        ok, _ = dual_k_star_distributive(L, k)
        if not ok:
            break
        best = k
    return best


# ---------------------------------------------------------------------------
# alternating translations


def diamond_eval(L: FiniteLattice, s: Sequence[int], x: int) -> int:
    """``s <> x``: entry i of s is joined on when i is even, met on when odd."""
    v = x
    for i, a in enumerate(s):
        v = int(L.join[a, v]) if i % 2 == 0 else int(L.meet[a, v])
    return v


def j_map(L: FiniteLattice, u: int, s: Sequence[int]) -> tuple[int, ...]:
    """A sequence t with ``u v (s <> x) = t <> x`` for every x."""
    s = tuple(s)
    if not s:
        return (u,)
    if len(s) % 2 == 0:
        return s + (u,)
    return s[:-1] + (int(L.join[u, s[-1]]),)


def m_map(L: FiniteLattice, u: int, y: int, s: Sequence[int]) -> tuple[int, ...]:
    """A sequence t with ``u ^ (s <> x) = t <> x`` for every x >= y."""
    s = tuple(s)
    if not s:
        return (y, u)
    if len(s) % 2 == 0:
        return s[:-1] + (int(L.meet[u, s[-1]]),)
    return s + (u,)


def _rows(S) -> np.ndarray:
    S = np.asarray(S, dtype=np.intp)
    return S.reshape(len(S), S.shape[1] if S.ndim == 2 else 0)


def diamond_eval_batch(L: FiniteLattice, S: np.ndarray, X) -> np.ndarray:
    """``s <> x`` for every row s of ``S`` (shape (k, len)) and every x in ``X``.

    Returns an array of shape (k, len(X)).
    """
    S = _rows(S)
    V = np.broadcast_to(np.asarray(X, dtype=np.intp), (len(S), len(X))).copy()
    for i in range(S.shape[1]):
        table = L.join if i % 2 == 0 else L.meet
        V = table[S[:, i:i + 1], V]
    return V


def j_map_batch(L: FiniteLattice, u: int, S: np.ndarray) -> np.ndarray:
    """:func:`j_map` applied to every row of ``S`` (all rows share one length)."""
    S = _rows(S)
    k, n = S.shape
    if n == 0:
        return np.full((k, 1), u, dtype=np.intp)
    if n % 2 == 0:
        return np.hstack([S, np.full((k, 1), u, dtype=np.intp)])
    return np.hstack([S[:, :-1], L.join[u, S[:, -1]][:, None]])


def m_map_batch(L: FiniteLattice, u: int, y: int, S: np.ndarray) -> np.ndarray:
    """:func:`m_map` applied to every row of ``S`` (all rows share one length)."""
    S = _rows(S)
    k, n = S.shape
    if n == 0:
        return np.tile(np.array([y, u], dtype=np.intp), (k, 1))
    if n % 2 == 0:
        return np.hstack([S[:, :-1], L.meet[u, S[:, -1]][:, None]])
    return np.hstack([S, np.full((k, 1), u, dtype=np.intp)])


@dataclass
class TranslationMonoid:
    """All maps x -> s <> x with the parity of |s|, found by breadth-first search.

    Row i of ``functions`` is the map; ``parent[i]`` and ``via[i]`` record the
    BFS edge that produced it so that a generating sequence can be rebuilt.
    """

    lattice: FiniteLattice
    functions: np.ndarray
    parity: np.ndarray
    parent: np.ndarray
    via: np.ndarray

    def __len__(self):
        return len(self.functions)

    def sequence(self, i: int) -> tuple[int, ...]:
        s = []
        while self.parent[i] >= 0:
            s.append(int(self.via[i]))
            i = int(self.parent[i])
        return tuple(reversed(s))

    @cached_property
    def distinct_functions(self) -> np.ndarray:
        return np.unique(self.functions, axis=0)

    def is_monotone(self) -> bool:
        L = self.lattice
        xs, ys = np.nonzero(L.leq)
        F = self.functions.astype(np.intp)
        return bool(L.leq[F[:, xs], F[:, ys]].all())


def translation_monoid(L: FiniteLattice, cap: int | None = None) -> TranslationMonoid:
    """Close (identity, even) under f -> a v f (from even) and f -> a ^ f (from odd).

    Raises CapExceeded when more than ``cap`` (map, parity) states appear.
    """
    cap = monoid_cap() if cap is None else cap
    n = L.n
    dtype = np.uint8 if n <= 256 else np.uint16
    tables = (L.join.astype(dtype), L.meet.astype(dtype))
    ident = np.arange(n, dtype=dtype)
    funcs = [ident]
    parity = [0]
    parent = [-1]
    via = [-1]
    seen = {(0, ident.tobytes())}
    frontier = [0]
    while frontier:
        new = []
        for par in (0, 1):
            idx = [i for i in frontier if parity[i] == par]
            if not idx:
                continue
            table = tables[par]
            for start in range(0, len(idx), max(1, BATCH // n)):
                part = idx[start:start + max(1, BATCH // n)]
                F = np.stack([funcs[i] for i in part])
                images = table[:, F]                    # images[a, r, x] = a op F[r, x]
                for a in range(n):
                    for r, row in enumerate(images[a]):
                        key = (1 - par, row.tobytes())
                        if key in seen:
                            continue
                        seen.add(key)
                        funcs.append(row)
                        parity.append(1 - par)
                        parent.append(part[r])
                        via.append(a)
                        new.append(len(funcs) - 1)
                        if len(funcs) > cap:
                            raise CapExceeded(len(funcs), cap)
        frontier = new
    return TranslationMonoid(L, np.stack(funcs), np.array(parity, dtype=np.int8),
                             np.array(parent), np.array(via))


def _triple_closures(L: FiniteLattice):
    """Map (target, closure-mask) -> first triple (a, b, c) producing it.

    The closure is a * {b, c} without 1*, the target is a v (b ^ c).  Both are
    symmetric in b and c, so only b <= c is enumerated.
    """
    T = ToppedLattice(L)
    out: dict[tuple[int, int], tuple[int, int, int]] = {}
    for a in range(L.n):
        for b in range(L.n):
            for c in range(b, L.n):
                W = star_closure(T, a, (1 << b) | (1 << c)).proper()
                key = (int(L.join[a, L.meet[b, c]]), sum(1 << w for w in W))
                out.setdefault(key, (a, b, c))
    return out


@dataclass
class ImageOrbit:
    """Reachable states ``(parity of s, s <> t, s <> W)`` from seeds ``(t, W)``.

    Translations act pointwise, so ``a v f(W)`` only depends on the image set
    ``f(W)``; searching image sets instead of whole maps gives exactly the
    projections of the translation monoid onto each seed.  ``target`` is -1
    for seeds that carry no point.
    """

    lattice: FiniteLattice
    parity: list[int]
    target: list[int]
    image: list[int]
    parent: list[int]
    via: list[int]
    seed: list[int]

    def __len__(self):
        return len(self.image)

    def sequence(self, i: int) -> tuple[int, ...]:
        s = []
        while self.parent[i] >= 0:
            s.append(self.via[i])
            i = self.parent[i]
        return tuple(reversed(s))

    def images(self) -> list[int]:
        return sorted(set(self.image))


def image_orbit(L: FiniteLattice, seeds, cap: int | None = None) -> ImageOrbit:
    """Breadth-first closure of ``seeds`` (pairs ``(t, W mask)``) under translations.

    From even parity every a v (-) is applied, from odd parity every a ^ (-).
    Raises CapExceeded when more than ``cap`` states appear.
    """
    cap = monoid_cap() if cap is None else cap
    n = L.n
    tables = (L.join.tolist(), L.meet.tolist())
    bit = [1 << i for i in range(n)]
    orb = ImageOrbit(L, [], [], [], [], [], [])
    seen = set()

    def add(par, t, m, parent, a, seed):
        key = (par, t, m)
        if key in seen:
            return False
        seen.add(key)
        orb.parity.append(par)
        orb.target.append(t)
        orb.image.append(m)
        orb.parent.append(parent)
        orb.via.append(a)
        orb.seed.append(seed)
        if len(seen) > cap:
            raise CapExceeded(len(seen), cap)
        return True

    for k, (t, W) in enumerate(seeds):
        add(0, t, W, -1, -1, k)
    frontier = list(range(len(orb.image)))
    while frontier:
        new = []
        for i in frontier:
            par, t, seed = orb.parity[i], orb.target[i], orb.seed[i]
            ws = list(iter_bits(orb.image[i]))
            for a in range(n):
                row = tables[par][a]
                m = 0
                for w in ws:
                    m |= bit[row[w]]
                if add(1 - par, row[t] if t >= 0 else -1, m, i, a, seed):
                    new.append(len(orb.image) - 1)
        frontier = new
    return orb


def sd_omega_seeds(L: FiniteLattice):
    """The distinct (target, closure mask) pairs with a triple producing each."""
    return _triple_closures(L)


def sd_omega_check(L: FiniteLattice, cap: int | None = None,
                   monoid: TranslationMonoid | None = None, method: str = "images",
                   orbit: ImageOrbit | None = None, groups=None):
    """Decide ``s <> (a v (b ^ c)) = meet{ s <> (a * t) : t nonempty over {b, c} }``.

    The quantifier over all finite sequences s is replaced by a finite search.
    ``method="monoid"`` runs through the maps x -> s <> x; ``method="images"``
    runs through the pairs (s <> target, s <> closure) reachable from each
    distinct (target, closure) pair, which is the same data without the
    other coordinates of each map.  The t = () term (s applied to 1*) is left
    out of the meet: every other term lies below it.  Returns ``(True, None)``
    or ``(False, witness)`` where the witness holds the sequence s and the
    triple.  Raises CapExceeded when the search does not close within ``cap``.
    A precomputed ``orbit`` of the seeds from :func:`sd_omega_seeds` may be
    passed in together with those ``groups``.
    """
    groups = _triple_closures(L) if groups is None else groups
    M = L.meet

    def check(F: np.ndarray):
        for (t, W), triple in groups.items():
            ws = list(iter_bits(W))
            acc = F[:, ws[0]]
            for w in ws[1:]:
                acc = M[acc, F[:, w]]
            bad = np.flatnonzero(F[:, t] != acc)
            if bad.size:
                return int(bad[0]), triple, int(F[bad[0], t]), int(acc[bad[0]])
        return None

    ident = np.arange(L.n, dtype=np.intp)[None, :]
    fail = check(ident)
    if fail is not None:
        _, triple, lhs, rhs = fail
        s = ()
    elif method == "images":
        keys = list(groups)
        orb = image_orbit(L, keys, cap) if orbit is None else orbit
        M = L.meet.tolist()
        for i in range(len(orb)):
            ws = iter_bits(orb.image[i])
            acc = next(ws)
            for w in ws:
                acc = M[acc][w]
            if acc != orb.target[i]:
                triple, lhs, rhs = groups[keys[orb.seed[i]]], orb.target[i], acc
                s = orb.sequence(i)
                break
        else:
            return True, None
    elif method == "monoid":
        if monoid is None:
            monoid = translation_monoid(L, cap)
        fail = check(monoid.functions.astype(np.intp))
        if fail is None:
            return True, None
        row, triple, lhs, rhs = fail
        s = monoid.sequence(row)
    else:
        raise ValueError(f"unknown method {method!r}")
    a, b, c = triple
    return False, {"s": list(s), "a": a, "b": b, "c": c, "lhs": lhs, "rhs": rhs}
