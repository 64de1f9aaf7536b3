"""Finite lattices as dense join/meet tables.

Elements are the integers ``0..n-1``; labels are cosmetic.  The order is kept
both as a boolean matrix and as per-element bitset rows (Python ints), so that
``x <= y`` tests and subset algebra are single integer operations.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CycleInCovers,
    DuplicateCover,
    IndexOutOfRange,
    InvalidInput,
    NotALattice,
    SizeCapExceeded,
)

DEFAULT_MAX_N = 4096


def max_n() -> int:
    return int(os.environ.get("LATKIT_MAX_N", DEFAULT_MAX_N))


def iter_bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(items: Iterable[int]) -> int:
    m = 0
    for i in items:
        m |= 1 << int(i)
    return m


@dataclass(frozen=True)
class ElementSet:
    """A subset of the elements of an ``n``-element lattice, stored as a bitmask."""

    n: int
    mask: int = 0

    @classmethod
    def of(cls, n: int, items: Iterable[int]) -> "ElementSet":
        m = to_mask(items)
        if m >> n:
            raise IndexOutOfRange(m.bit_length() - 1, n)
        return cls(n, m)

    def __iter__(self):
        return iter_bits(self.mask)

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, x):
        return bool(self.mask >> x & 1)

    def __or__(self, other):
        return ElementSet(self.n, self.mask | _m(other))

    def __and__(self, other):
        return ElementSet(self.n, self.mask & _m(other))

    def __sub__(self, other):
        return ElementSet(self.n, self.mask & ~_m(other))

    def __le__(self, other):
        return self.mask & ~_m(other) == 0

    def tolist(self) -> list[int]:
        return list(self)

    def __repr__(self):
        return f"ElementSet({self.tolist()})"


def _m(X) -> int:
    if isinstance(X, ElementSet):
        return X.mask
    if isinstance(X, int):
        return X
    return to_mask(X)


def as_mask(X) -> int:
    """Coerce an ElementSet, bitmask or iterable of indices to a bitmask."""
    return _m(X)


@dataclass
class LatticeFile:
    """The on-disk lattice description: labels plus Hasse cover pairs.

    ``leq`` may be given instead of ``covers``; each pair ``[i, j]`` then
    states ``i <= j`` and the reflexive-transitive closure is taken.
    """

    name: str
    elements: list[str]
    covers: list[tuple[int, int]] = field(default_factory=list)
    leq: list[tuple[int, int]] | None = None

    @classmethod
    def from_json(cls, data: dict) -> "LatticeFile":
        if not isinstance(data, dict) or "elements" not in data:
            raise InvalidInput("lattice file needs an 'elements' list")
        elements = [str(e) for e in data["elements"]]
        pairs = data.get("covers")
        leq = data.get("leq")
        try:
            covers = [(int(a), int(b)) for a, b in (pairs or [])]
            leq = None if leq is None else [(int(a), int(b)) for a, b in leq]
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed pair list: {exc}") from None
        return cls(str(data.get("name", "")), elements, covers, leq)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "elements": list(self.elements),
            "covers": [list(p) for p in self.covers],
        }


class FiniteLattice:
    """An immutable finite lattice with precomputed join and meet tables."""

    def __init__(self, labels, leq, join, meet, name=""):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.leq = np.asarray(leq, dtype=bool)
        self.join = np.asarray(join, dtype=np.intp)
        self.meet = np.asarray(meet, dtype=np.intp)
        for arr in (self.leq, self.join, self.meet):
            arr.setflags(write=False)
        self.name = name
        self.bottom = _reduce_table(self.meet, self.n)
        self.top = _reduce_table(self.join, self.n)

    # construction -------------------------------------------------------

    @classmethod
    def from_leq(cls, labels: Sequence[str], leq, name: str = "", cap: int | None = None):
        """Build from a full order matrix, validating that it is a lattice."""
        leq = np.array(leq, dtype=bool)
        n = len(labels)
        if n < 1:
            raise InvalidInput("a lattice needs at least one element")
        cap = max_n() if cap is None else cap
        if n > cap:
            raise SizeCapExceeded(n, cap)
        if leq.shape != (n, n):
            raise InvalidInput(f"order matrix has shape {leq.shape}, expected {(n, n)}")
        if not leq.diagonal().all():
            raise InvalidInput("order relation is not reflexive")
        sym = leq & leq.T
        np.fill_diagonal(sym, False)
        if sym.any():
            a, b = map(int, np.argwhere(sym)[0])
            raise CycleInCovers([a, b, a])
        up = [to_mask(np.flatnonzero(leq[x])) for x in range(n)]
        down = [to_mask(np.flatnonzero(leq[:, x])) for x in range(n)]
        for x in range(n):
            for y in iter_bits(up[x]):
                if up[y] & ~up[x]:
                    raise InvalidInput(f"order relation is not transitive at {x} <= {y}")
        join, meet = _tables_from_masks(n, up, down)
        return cls(labels, leq, join, meet, name)

    # basic queries ------------------------------------------------------

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self.leq[a, b])

    @cached_property
    def up(self) -> tuple[int, ...]:
        """``up[x]`` is the bitmask of the principal filter of ``x``."""
        return tuple(to_mask(np.flatnonzero(self.leq[x])) for x in range(self.n))

    @cached_property
    def down(self) -> tuple[int, ...]:
        return tuple(to_mask(np.flatnonzero(self.leq[:, x])) for x in range(self.n))

    @cached_property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for x in range(self.n):
            strict = self.down[x] & ~(1 << x)
            out.append(tuple(y for y in iter_bits(strict)
                             if self.up[y] & strict == 1 << y))
        return tuple(out)

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        ups = [[] for _ in range(self.n)]
        for x in range(self.n):
            for y in self.lower_covers[x]:
                ups[y].append(x)
        return tuple(tuple(u) for u in ups)

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(lower, upper)``, sorted."""
        return sorted((y, x) for x in range(self.n) for y in self.lower_covers[x])

    def join_all(self, xs: Iterable[int]) -> int:
        return reduce(lambda a, b: int(self.join[a, b]), xs, self.bottom)

    def meet_all(self, xs: Iterable[int]) -> int:
        return reduce(lambda a, b: int(self.meet[a, b]), xs, self.top)

    def label(self, x: int) -> str:
        return self.labels[x]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidInput(f"no element labelled {label!r}") from None

    def elements(self, items: Iterable[int] = ()) -> ElementSet:
        return ElementSet.of(self.n, items)

    def __len__(self):
        return self.n

    def __repr__(self):
        name = f" {self.name!r}" if self.name else ""
        return f"<FiniteLattice{name} n={self.n}>"


def _reduce_table(table, n) -> int:
    acc = 0
    for x in range(1, n):
        acc = int(table[acc, x])
    return acc


def _tables_from_masks(n, up, down):
    # positions in a linear extension: |down x| strictly increases along <
    order = sorted(range(n), key=lambda x: (down[x].bit_count(), x))
    pos = [0] * n
    for i, x in enumerate(order):
        pos[x] = i
    up_p = [to_mask(pos[y] for y in iter_bits(up[x])) for x in range(n)]
    down_p = [to_mask(pos[y] for y in iter_bits(down[x])) for x in range(n)]
    join = np.empty((n, n), dtype=np.intp)
    meet = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        ua, da = up_p[a], down_p[a]
        for b in range(a, n):
            m = ua & up_p[b]
            if not m:
                raise NotALattice((a, b), "upper bound")
            c = order[(m & -m).bit_length() - 1]
            if m & ~up_p[c]:
                raise NotALattice((a, b), "least upper bound")
            join[a, b] = join[b, a] = c
            m = da & down_p[b]
            if not m:
                raise NotALattice((a, b), "lower bound")
            c = order[m.bit_length() - 1]
            if m & ~down_p[c]:
                raise NotALattice((a, b), "greatest lower bound")
            meet[a, b] = meet[b, a] = c
    return join, meet


# ---------------------------------------------------------------------------
# building from cover lists


def _closure_masks(n: int, pairs: Sequence[tuple[int, int]]) -> list[int]:
    """Up-set bitmasks of the reflexive-transitive closure of ``pairs``."""
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in pairs:
        succ[a].append(b)
        indeg[b] += 1
    queue = [x for x in range(n) if indeg[x] == 0]
    topo = []
    while queue:
        x = queue.pop()
        topo.append(x)
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if len(topo) < n:
        raise CycleInCovers(_find_cycle(n, succ, set(topo)))
    up = [0] * n
    for x in reversed(topo):
        m = 1 << x
        for y in succ[x]:
            m |= up[y]
        up[x] = m
    return up


def _find_cycle(n, succ, acyclic):
    color = {}
    stack_path = []

    def dfs(x):
        color[x] = 1
        stack_path.append(x)
        for y in succ[x]:
            if y in acyclic:
                continue
            if color.get(y) == 1:
                return stack_path[stack_path.index(y):] + [y]
            if y not in color:
                found = dfs(y)
                if found:
                    return found
        stack_path.pop()
        color[x] = 2
        return None

    for x in range(n):
        if x not in acyclic and x not in color:
            found = dfs(x)
            if found:
                return found
    return []


def _check_pairs(n, pairs, *, allow_loops=False):
    seen = set()
    for a, b in pairs:
        for i in (a, b):
            if not 0 <= i < n:
                raise IndexOutOfRange(i, n)
        if a == b and not allow_loops:
            raise CycleInCovers([a, a])
        if (a, b) in seen:
            raise DuplicateCover((a, b))
        seen.add((a, b))


def poset_up_masks(file: LatticeFile) -> list[int]:
    n = len(file.elements)
    if file.leq is not None:
        _check_pairs(n, file.leq, allow_loops=True)
        return _closure_masks(n, [(a, b) for a, b in file.leq if a != b])
    _check_pairs(n, file.covers)
    return _closure_masks(n, file.covers)


def _leq_from_up(n, up):
    leq = np.zeros((n, n), dtype=bool)
    for x in range(n):
        leq[x, list(iter_bits(up[x]))] = True
    return leq


def build_from_covers(file: LatticeFile, cap: int | None = None) -> FiniteLattice:
    """Lattice whose order is the reflexive-transitive closure of the covers.

    Raises CycleInCovers, DuplicateCover, IndexOutOfRange or NotALattice.
    """
    n = len(file.elements)
    cap = max_n() if cap is None else cap
    if n > cap:
        raise SizeCapExceeded(n, cap)
    up = poset_up_masks(file)
    return FiniteLattice.from_leq(file.elements, _leq_from_up(n, up), file.name, cap)


def load_lattice(source) -> FiniteLattice:
    """Read a lattice from a JSON path, JSON text or an already-decoded dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        try:
            if text.lstrip().startswith("{"):
                data = json.loads(text)
            else:
                with open(text, encoding="utf-8") as fh:
                    data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"cannot read lattice file: {exc}") from None
    return build_from_covers(LatticeFile.from_json(data))


def to_lattice_file(L: FiniteLattice) -> LatticeFile:
    return LatticeFile(L.name, list(L.labels), L.covers())


def dump_lattice(L: FiniteLattice) -> str:
    return json.dumps(to_lattice_file(L).to_json(), ensure_ascii=False)


def hasse_dot(L: FiniteLattice) -> str:
    """DOT text of the Hasse diagram, drawn bottom-up."""
    lines = [f"digraph {json.dumps(L.name or 'lattice')} {{", "  rankdir=BT;"]
    for x in range(L.n):
        lines.append(f"  n{x} [label={json.dumps(L.labels[x], ensure_ascii=False)}];")
    for a, b in L.covers():
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# order closures and join-irreducibles


def down_set(L: FiniteLattice, X) -> ElementSet:
    m = 0
    for x in iter_bits(_m(X)):
        m |= L.down[x]
    return ElementSet(L.n, m)


def up_set(L: FiniteLattice, X) -> ElementSet:
    m = 0
    for x in iter_bits(_m(X)):
        m |= L.up[x]
    return ElementSet(L.n, m)


def join_irreducibles(L: FiniteLattice) -> ElementSet:
    """Elements with exactly one lower cover (the bottom is excluded)."""
    return ElementSet.of(L.n, (x for x in range(L.n) if len(L.lower_covers[x]) == 1))


def is_valid_lattice(L: FiniteLattice) -> bool:
    """Recheck every table entry against the order matrix (used as an audit)."""
    try:
        join, meet = _tables_from_masks(L.n, L.up, L.down)
    except NotALattice:
        return False
    return bool((join == L.join).all() and (meet == L.meet).all())


# ---------------------------------------------------------------------------
# combinators


class ProductLattice(FiniteLattice):
    """Direct product; ``coords[x]`` holds the factor coordinates of ``x``."""

    def __init__(self, factors, coords, labels, leq, join, meet, name=""):
        super().__init__(labels, leq, join, meet, name)
        self.factors = tuple(factors)
        self.coords = np.asarray(coords, dtype=np.intp)

    def projection(self, i: int) -> np.ndarray:
        """The projection onto factor ``i`` as an index map."""
        return self.coords[:, i].copy()

    def element(self, coords: Sequence[int]) -> int:
        idx = 0
        for c, f in zip(coords, self.factors):
            idx = idx * f.n + int(c)
        return idx


def direct_product(factors: Sequence[FiniteLattice], cap: int | None = None) -> ProductLattice:
    if not factors:
        raise InvalidInput("direct product needs at least one factor")
    cap = max_n() if cap is None else cap
    size = 1
    for f in factors:
        size *= f.n
    if size > cap:
        raise SizeCapExceeded(size, cap)
    coords = np.array(list(itertools.product(*(range(f.n) for f in factors))), dtype=np.intp)
    coords = coords.reshape(size, len(factors))
    strides = np.ones(len(factors), dtype=np.intp)
    for i in range(len(factors) - 2, -1, -1):
        strides[i] = strides[i + 1] * factors[i + 1].n
    leq = np.ones((size, size), dtype=bool)
    join = np.zeros((size, size), dtype=np.intp)
    meet = np.zeros((size, size), dtype=np.intp)
    for i, f in enumerate(factors):
        c = coords[:, i]
        leq &= f.leq[np.ix_(c, c)]
        join += f.join[np.ix_(c, c)] * strides[i]
        meet += f.meet[np.ix_(c, c)] * strides[i]
    labels = ["(" + ",".join(f.labels[k] for f, k in zip(factors, row)) + ")" for row in coords]
    name = " x ".join(f.name or f"L{f.n}" for f in factors)
    return ProductLattice(factors, coords, labels, leq, join, meet, name)


@dataclass(frozen=True)
class Sublattice:
    lattice: FiniteLattice
    inclusion: tuple[int, ...]


def sublattice_closure(L: FiniteLattice, G) -> int:
    """Bitmask of the least subset containing ``G`` closed under join and meet."""
    mask = _m(G)
    frontier = list(iter_bits(mask))
    members = list(frontier)
    while frontier:
        new = []
        for a in frontier:
            for b in members:
                for c in (int(L.join[a, b]), int(L.meet[a, b])):
                    if not mask >> c & 1:
                        mask |= 1 << c
                        new.append(c)
        members.extend(new)
        frontier = new
    return mask


def induced_sublattice(L: FiniteLattice, mask: int, name: str = "") -> Sublattice:
    """The lattice on a join- and meet-closed subset, with its inclusion map."""
    idx = list(iter_bits(mask))
    pos = {x: i for i, x in enumerate(idx)}
    sub = np.ix_(idx, idx)
    try:
        join = np.vectorize(pos.__getitem__, otypes=[np.intp])(L.join[sub])
        meet = np.vectorize(pos.__getitem__, otypes=[np.intp])(L.meet[sub])
    except KeyError:
        raise InvalidInput("subset is not closed under join and meet") from None
    K = FiniteLattice([L.labels[x] for x in idx], L.leq[sub], join, meet, name)
    return Sublattice(K, tuple(idx))


def sublattice_generated(L: FiniteLattice, G) -> Sublattice:
    if not _m(G):
        raise InvalidInput("generating set must be nonempty")
    return induced_sublattice(L, sublattice_closure(L, G), name=f"<{L.name}>")


def dedekind_macneille(P: LatticeFile, cap: int | None = None) -> FiniteLattice:
    """Completion by cuts of a finite poset.

    The cuts are exactly the intersections of principal ideals (the whole
    poset being the empty intersection).  Each point ``p`` is embedded as the
    cut ``down(p)`` and keeps its label.
    """
    n = len(P.elements)
    cap = max_n() if cap is None else cap
    up = poset_up_masks(P)
    down = [0] * n
    for x in range(n):
        for y in iter_bits(up[x]):
            down[y] |= 1 << x
    full = (1 << n) - 1
    cuts = {full}
    frontier = [full]
    while frontier:
        new = []
        for S in frontier:
            for p in range(n):
                T = S & down[p]
                if T not in cuts:
                    cuts.add(T)
                    new.append(T)
                    if len(cuts) > cap:
                        raise SizeCapExceeded(len(cuts), cap)
        frontier = new
    cuts = sorted(cuts, key=lambda c: (c.bit_count(), c))
    principal = {down[p]: p for p in range(n)}
    labels = []
    for c in cuts:
        if c in principal:
            labels.append(P.elements[principal[c]])
        elif c == full:
            labels.append("top")
        elif c == 0:
            labels.append("bot")
        else:
            tops = [x for x in iter_bits(c) if up[x] & c == 1 << x]
            labels.append("join(" + ",".join(P.elements[x] for x in tops) + ")")
    m = len(cuts)
    leq = np.zeros((m, m), dtype=bool)
    for i, a in enumerate(cuts):
        for j in range(i, m):
            if a & ~cuts[j] == 0:
                leq[i, j] = True
    return FiniteLattice.from_leq(labels, leq, P.name, max(cap, m))


def embedding_of_poset(P: LatticeFile, L: FiniteLattice) -> list[int]:
    """Positions of the poset points inside their completion, by label."""
    return [L.labels.index(lbl) for lbl in P.elements]


# ---------------------------------------------------------------------------
# isomorphism (test utility)


def _invariants(L: FiniteLattice):
    height = [0] * L.n
    for x in sorted(range(L.n), key=lambda x: L.down[x].bit_count()):
        height[x] = max((height[y] + 1 for y in L.lower_covers[x]), default=0)
    return [
        (height[x], len(L.lower_covers[x]), len(L.upper_covers[x]),
         L.down[x].bit_count(), L.up[x].bit_count())
        for x in range(L.n)
    ]


def find_isomorphism(K: FiniteLattice, L: FiniteLattice) -> list[int] | None:
    """An order isomorphism K -> L as an index map, or None.

    Elements are first bucketed by (height, cover degrees, principal ideal and
    filter sizes); backtracking then extends a partial map that must respect
    the order relation in both directions.
    """
    if K.n != L.n:
        return None
    ik, il = _invariants(K), _invariants(L)
    if sorted(ik) != sorted(il):
        return None
    order = sorted(range(K.n), key=lambda x: (ik[x][0], ik[x]))
    candidates = {x: [y for y in range(L.n) if il[y] == ik[x]] for x in range(K.n)}
    phi: dict[int, int] = {}
    used = set()

    def extend(i):
        if i == len(order):
            return True
        x = order[i]
        for y in candidates[x]:
            if y in used:
                continue
            if all(K.leq[x, u] == L.leq[y, v] and K.leq[u, x] == L.leq[v, y]
                   for u, v in phi.items()):
                phi[x] = y
                used.add(y)
                if extend(i + 1):
                    return True
                del phi[x]
                used.discard(y)
        return False

    if not extend(0):
        return None
    return [phi[x] for x in range(K.n)]


def is_isomorphic(K: FiniteLattice, L: FiniteLattice) -> bool:
    return find_isomorphism(K, L) is not None
