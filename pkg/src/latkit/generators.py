"""Named lattice families and random lattices."""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass

import numpy as np

from .errors import ConstructionInvalid, ParamOutOfRange
from .lattice import FiniteLattice, LatticeFile, build_from_covers, dedekind_macneille

FAMILIES = ("chain", "boolean", "m_k", "n5", "co_chain", "subspaces", "fig1", "random")

LIMITS = {"n": 64, "q": 5, "d": 4, "N": 16, "boolean": 6}
PRIMES = (2, 3, 5)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int | None = None
    k: int | None = None
    q: int | None = None
    d: int | None = None
    N: int | None = None
    seed: int | None = None

    @property
    def id(self) -> str:
        f = self.family
        if f in ("chain", "boolean", "co_chain"):
            return f"{f}({self.n})"
        if f == "m_k":
            return f"m_k({self.k})"
        if f == "subspaces":
            return f"subspaces({self.q},{self.d})"
        if f == "fig1":
            return f"fig1({self.N})"
        if f == "random":
            return f"random({self.n},{self.seed})"
        return f


def parse_spec_id(text: str) -> FamilySpec:
    """Inverse of ``FamilySpec.id``: ``"chain(4)"``, ``"subspaces(2,3)"``, ``"n5"``, ..."""
    m = re.fullmatch(r"\s*([a-z_0-9]+)\s*(?:\(([^)]*)\))?\s*", text)
    if not m:
        raise ParamOutOfRange(f"cannot parse family spec {text!r}")
    family, args = m.group(1), m.group(2)
    try:
        vals = [int(v) for v in args.split(",")] if args and args.strip() else []
    except ValueError:
        raise ParamOutOfRange(f"non-integer parameter in {text!r}") from None
    fields = {"chain": ("n",), "boolean": ("n",), "co_chain": ("n",), "m_k": ("k",),
              "n5": (), "subspaces": ("q", "d"), "fig1": ("N",), "random": ("n", "seed")}
    if family not in fields:
        raise ParamOutOfRange(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if len(vals) != len(fields[family]):
        raise ParamOutOfRange(f"{family} takes {len(fields[family])} parameter(s)")
    return FamilySpec(family, **dict(zip(fields[family], vals)))


def _require(value, name, lo, hi):
    if value is None or not isinstance(value, (int, np.integer)) or not lo <= value <= hi:
        raise ParamOutOfRange(f"{name}={value!r} outside {lo}..{hi}")


def generate(spec: FamilySpec) -> FiniteLattice:
    f = spec.family
    if f == "chain":
        _require(spec.n, "n", 1, LIMITS["n"])
        return chain(spec.n)
    if f == "boolean":
        _require(spec.n, "n", 0, LIMITS["boolean"])
        return boolean(spec.n)
    if f == "m_k":
        _require(spec.k, "k", 1, LIMITS["n"])
        return m_k(spec.k)
    if f == "n5":
        return n5()
    if f == "co_chain":
        _require(spec.n, "n", 0, LIMITS["n"])
        return co_chain(spec.n)
    if f == "subspaces":
        if spec.q not in PRIMES:
            raise ParamOutOfRange(f"q={spec.q!r} must be a prime <= {LIMITS['q']}")
        _require(spec.d, "d", 0, LIMITS["d"])
        return subspaces(spec.q, spec.d)
    if f == "fig1":
        _require(spec.N, "N", 0, LIMITS["N"])
        return fig1(spec.N)
    if f == "random":
        _require(spec.n, "n", 1, LIMITS["n"])
        return random_lattice(spec.n, 0 if spec.seed is None else spec.seed)
    raise ParamOutOfRange(f"unknown family {f!r}; expected one of {', '.join(FAMILIES)}")


def _from_covers(name, labels, covers):
    return build_from_covers(LatticeFile(name, list(labels), list(covers)))


def chain(n: int) -> FiniteLattice:
    return _from_covers(f"chain({n})", [str(i) for i in range(n)],
                        [(i, i + 1) for i in range(n - 1)])


def boolean(k: int) -> FiniteLattice:
    subsets = sorted(range(1 << k), key=lambda s: (s.bit_count(), s))
    pos = {s: i for i, s in enumerate(subsets)}
    labels = ["{" + ",".join(str(i) for i in range(k) if s >> i & 1) + "}" for s in subsets]
    covers = [(pos[s], pos[s | 1 << i]) for s in subsets for i in range(k) if not s >> i & 1]
    return _from_covers(f"boolean({k})", labels, covers)


def _atom_names(k):
    if k <= 26:
        return [chr(ord("a") + i) for i in range(k)]
    return [f"a{i}" for i in range(k)]


def m_k(k: int) -> FiniteLattice:
    """Bottom, ``k`` pairwise incomparable atoms, top."""
    labels = ["0", *_atom_names(k), "1"]
    covers = [(0, i) for i in range(1, k + 1)] + [(i, k + 1) for i in range(1, k + 1)]
    return _from_covers(f"m_k({k})", labels, covers)


def n5() -> FiniteLattice:
    """The pentagon 0 < x < z < 1, 0 < y < 1."""
    return _from_covers("n5", ["0", "x", "y", "z", "1"],
                        [(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)])


def co_chain(n: int) -> FiniteLattice:
    """Order-convex subsets of the chain 1 < 2 < ... < n, ordered by inclusion."""
    sets = [()] + [tuple(range(i, j + 1)) for i in range(1, n + 1) for j in range(i, n + 1)]
    sets.sort(key=lambda s: (len(s), s))
    labels = ["{" + ",".join(map(str, s)) + "}" for s in sets]
    leq = np.array([[set(a) <= set(b) for b in sets] for a in sets], dtype=bool)
    return FiniteLattice.from_leq(labels, leq, f"co_chain({n})")


# ---------------------------------------------------------------------------
# subspace lattices


def _rref_bases(q: int, d: int):
    for r in range(d + 1):
        for pivots in itertools.combinations(range(d), r):
            free = [(i, col) for i, p in enumerate(pivots) for col in range(p + 1, d)
                    if col not in pivots]
            for values in itertools.product(range(q), repeat=len(free)):
                rows = [[0] * d for _ in range(r)]
                for i, p in enumerate(pivots):
                    rows[i][p] = 1
                for (i, col), v in zip(free, values):
                    rows[i][col] = v
                yield rows


def _encode(vec, q):
    return sum(c * q ** i for i, c in enumerate(vec))


def _span(rows, q, d):
    out = set()
    for coeffs in itertools.product(range(q), repeat=len(rows)):
        v = [0] * d
        for c, row in zip(coeffs, rows):
            if c:
                v = [(x + c * y) % q for x, y in zip(v, row)]
        out.add(_encode(v, q))
    return out


def subspaces(q: int, d: int) -> FiniteLattice:
    """All subspaces of GF(q)^d ordered by inclusion.

    Vectors are coded little-endian (``e_i`` has code ``q**i``); subspaces are
    listed by dimension, then by their sorted vector codes, so for ``q = 2``
    the atoms come out as <e_0>, <e_1>, <e_0+e_1>, <e_2>, ...
    """
    items = []
    for rows in _rref_bases(q, d):
        span = _span(rows, q, d)
        label = "0" if not rows else "<" + ",".join("".join(map(str, r)) for r in rows) + ">"
        items.append((len(rows), tuple(sorted(span)), label))
    items.sort()
    masks = [sum(1 << v for v in span) for _, span, _ in items]
    n = len(items)
    leq = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            leq[i, j] = masks[i] & ~masks[j] == 0
    return FiniteLattice.from_leq([lbl for *_, lbl in items], leq, f"subspaces({q},{d})")


def gaussian_binomial(d: int, r: int, q: int) -> int:
    num = den = 1
    for i in range(r):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# ---------------------------------------------------------------------------
# the locally finite lower bounded example and random lattices


def fig1_poset(N: int) -> LatticeFile:
    """Presentation of the fig1(N) lattice as a finite poset.

    Points are ``a0..aN`` and ``b0..bN`` (two chains), ``c``, the joins
    ``p{i},{j}`` of ``a_i`` with ``b_j``, and a chain ``q0 < ... < q{2N+1}``
    with ``q{2i} = a_i v c`` and ``q{2i+1} = b_i v c``.  Every point is coded
    by (highest a below it, highest b below it, whether c is below it), and
    the order is the componentwise one on these codes.
    """
    pts: list[tuple[str, tuple[int, int, int]]] = [("0", (-1, -1, 0))]
    pts += [(f"a{i}", (i, -1, 0)) for i in range(N + 1)]
    pts += [(f"b{j}", (-1, j, 0)) for j in range(N + 1)]
    pts.append(("c", (-1, -1, 1)))
    pts += [(f"p{i},{j}", (i, j, 0)) for i in range(N + 1) for j in range(N + 1)]
    pts += [(f"q{k}", (k // 2, (k - 1) // 2, 1)) for k in range(2 * N + 2)]
    leq = [(i, j) for i, (_, u) in enumerate(pts) for j, (_, v) in enumerate(pts)
           if i != j and all(s <= t for s, t in zip(u, v))]
    return LatticeFile(f"fig1({N})", [name for name, _ in pts], leq=leq)


def fig1(N: int) -> FiniteLattice:
    return dedekind_macneille(fig1_poset(N))


@dataclass
class Fig1Report:
    N: int
    checked: list[str]
    lower_bounded: bool
    sd_join: bool

    @property
    def ok(self) -> bool:
        return self.lower_bounded and self.sd_join


def verify_fig1(L: FiniteLattice, N: int | None = None) -> Fig1Report:
    """Check the relations of the fig1 construction; raise on the first failure."""
    from .distributivity import is_join_semidistributive
    from .joincover import is_lower_bounded_lattice

    if N is None:
        N = sum(1 for lbl in L.labels if lbl.startswith("a") and lbl[1:].isdigit()) - 1
    a = [L.index(f"a{i}") for i in range(N + 1)]
    b = [L.index(f"b{i}") for i in range(N + 1)]
    c = L.index("c")
    J, M = L.join, L.meet
    checked = []

    def need(cond, text):
        if not cond:
            raise ConstructionInvalid(text)
        checked.append(text)

    for i in range(N):
        need(L.le(a[i], J[b[i], c]), f"a{i} <= b{i} v c")
        need(L.le(b[i], J[a[i + 1], c]), f"b{i} <= a{i + 1} v c")
        need(L.lt(a[i], a[i + 1]), f"a{i} < a{i + 1}")
        need(L.lt(b[i], b[i + 1]), f"b{i} < b{i + 1}")
    for i in range(N + 1):
        need(M[a[i], b[i]] == L.bottom, f"a{i} ^ b{i} = 0")
    if N >= 1:
        need(not L.le(a[1], c), "a1 not <= c")
    lb, _ = is_lower_bounded_lattice(L)
    need(lb, "lower bounded (D-acyclic)")
    sd, _ = is_join_semidistributive(L)
    need(sd, "join-semidistributive")
    return Fig1Report(N, checked, lb, sd)


def random_poset(n: int, seed: int) -> LatticeFile:
    """Random poset: each pair along a random linear order is related with probability 1/2."""
    rng = random.Random(seed)
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
    return LatticeFile(f"random({n},{seed})", [f"p{i}" for i in range(n)], leq=pairs)


def random_lattice(n: int, seed: int) -> FiniteLattice:
    """Dedekind-MacNeille completion of :func:`random_poset`."""
    if not 1 <= n <= LIMITS["n"]:
        raise ParamOutOfRange(f"n={n} outside 1..{LIMITS['n']}")
    return dedekind_macneille(random_poset(n, seed))
