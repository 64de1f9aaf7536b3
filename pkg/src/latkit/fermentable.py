"""Leavens and the embedding of a lattice with a leaven into a product of
finite lower bounded lattices.

For a leaven Sigma and p in Sigma, ``Sigma_p`` is the set of elements of
Sigma reachable from p along D.  The factor ``L_p`` consists of the joins of
nonempty subsets of ``Sigma_p`` together with a fresh zero ``O``, and
``phi_p(x)`` is the join of the members of ``Sigma_p`` below x (``O`` when
there are none).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import LeavenInvalid, NotAHomomorphism
from .joincover import (
    DGraph,
    d_relation_from_covers,
    is_lower_bounded_hom,
    is_lower_bounded_lattice,
    wmcrp_counterexample,
)
from .lattice import ElementSet, FiniteLattice, as_mask, iter_bits, join_irreducibles

ZERO_LABEL = "O"


@dataclass
class LeavenReport:
    """Outcome of :func:`leaven_check`; ``failed`` names the first failing condition."""

    sigma: ElementSet
    checks: dict[str, bool]
    failed: str | None = None
    witness: object = None
    dgraph: DGraph | None = None

    @property
    def valid(self) -> bool:
        return self.failed is None

    def to_json(self, L: FiniteLattice) -> dict:
        return {"sigma": [L.labels[x] for x in self.sigma], "valid": self.valid,
                "checks": self.checks, "failed": self.failed,
                "witness": _label_witness(L, self.witness)}


def _label_witness(L, w):
    if w is None:
        return None
    if isinstance(w, (int, np.integer)):
        return L.labels[w]
    if isinstance(w, ElementSet):
        return [L.labels[x] for x in w]
    if isinstance(w, (list, tuple)):
        return [_label_witness(L, v) for v in w]
    return w


def leaven_check(L: FiniteLattice, Sigma=None) -> LeavenReport:
    """Check that Sigma is a leaven: join-irreducible, join-generating, with the
    Sigma-MCRP and no D-cycle inside Sigma.

    Sigma defaults to J(L).  The conditions are checked in that order and the
    report stops at the first failure.
    """
    J = join_irreducibles(L).mask
    S = J if Sigma is None else as_mask(Sigma)
    rep = LeavenReport(ElementSet(L.n, S), {})

    def fail(name, witness):
        rep.checks[name] = False
        rep.failed, rep.witness = name, witness
        return rep

    bad = S & ~J
    if bad:
        return fail("join_irreducible", next(iter_bits(bad)))
    rep.checks["join_irreducible"] = True
    for x in range(L.n):
        if L.join_all(iter_bits(L.down[x] & S)) != x:
            return fail("join_generating", x)
    rep.checks["join_generating"] = True
    cx = wmcrp_counterexample(L, S)
    if cx is not None:
        return fail("mcrp", [cx[0], cx[1]])
    rep.checks["mcrp"] = True
    D = d_relation_from_covers(L, S)
    rep.dgraph = D
    cycle = D.find_cycle()
    if cycle is not None:
        return fail("d_acyclic", cycle)
    rep.checks["d_acyclic"] = True
    return rep


def _leaven_graph(L, Sigma) -> tuple[int, DGraph]:
    rep = leaven_check(L, Sigma)
    if not rep.valid:
        raise LeavenInvalid(rep)
    return rep.sigma.mask, rep.dgraph


def sigma_up(L: FiniteLattice, Sigma, p: int, D: DGraph | None = None) -> ElementSet:
    """Reflexive-transitive D-successors of ``p`` inside Sigma."""
    if D is None:
        _, D = _leaven_graph(L, Sigma)
    return ElementSet.of(L.n, D.reachable(p))


@dataclass
class Factor:
    """The factor ``L_p``; ``members[i]`` is the element of L behind element i,
    with -1 for the fresh zero (always element 0)."""

    p: int
    sigma_p: ElementSet
    lattice: FiniteLattice
    members: tuple[int, ...]
    join_irreducibles_ok: bool
    lower_bounded: bool

    def image(self, L: FiniteLattice, x: int) -> int:
        """``phi_p(x)`` as an element of the factor."""
        below = L.down[x] & self.sigma_p.mask
        if not below:
            return 0
        return self.members.index(L.join_all(iter_bits(below)))


def factor_lattice(L: FiniteLattice, Sigma, p: int, D: DGraph | None = None) -> Factor:
    Sp = sigma_up(L, Sigma, p, D)
    vals = set(Sp)
    while True:
        more = {int(L.join[u, v]) for u in vals for v in vals} - vals
        if not more:
            break
        vals |= more
    members = (-1, *sorted(vals))
    m = len(members)
    leq = np.ones((m, m), dtype=bool)
    idx = np.array(members[1:])
    leq[1:, 0] = False
    leq[1:, 1:] = L.leq[np.ix_(idx, idx)]
    labels = [ZERO_LABEL] + [L.labels[x] for x in members[1:]]
    Lp = FiniteLattice.from_leq(labels, leq, f"{L.name}_{L.labels[p]}")
    Jp = {members[j] for j in join_irreducibles(Lp)}
    lb, _ = is_lower_bounded_lattice(Lp)
    return Factor(p, Sp, Lp, members, Jp == set(Sp), lb)


@dataclass
class Verification:
    order_embedding: bool
    joins: bool
    meets_and_top: bool
    factor_homs_lower_bounded: bool
    factors_lower_bounded: bool

    @property
    def ok(self) -> bool:
        return all(vars(self).values())

    def to_json(self) -> dict:
        return {**vars(self), "ok": self.ok}


@dataclass
class Decomposition:
    """``phi[x, i]`` is ``phi_p(x)`` for the i-th member p of Sigma."""

    base: FiniteLattice
    sigma: ElementSet
    factors: list[Factor]
    phi: np.ndarray
    verification: Verification = field(default=None)

    def to_json(self) -> dict:
        L = self.base
        return {
            "lattice": L.name,
            "sigma": [L.labels[p] for p in self.sigma],
            "factors": [{"p": L.labels[f.p], "size": f.lattice.n,
                         "sigma_p": [L.labels[q] for q in f.sigma_p],
                         "elements": list(f.lattice.labels),
                         "join_irreducibles_ok": f.join_irreducibles_ok,
                         "lower_bounded": f.lower_bounded} for f in self.factors],
            "phi": {L.labels[x]: [f.lattice.labels[v] for f, v in zip(self.factors, row)]
                    for x, row in enumerate(self.phi.tolist())},
            "verification": self.verification.to_json(),
        }


def _verify(L: FiniteLattice, factors: list[Factor], phi: np.ndarray) -> Verification:
    k = len(factors)
    # le[x, y]: phi(x) <= phi(y) in every coordinate
    le = np.ones((L.n, L.n), dtype=bool)
    joins = meets = True
    for i, f in enumerate(factors):
        col = phi[:, i]
        le &= f.lattice.leq[np.ix_(col, col)]
        joins &= bool((col[L.join] == f.lattice.join[np.ix_(col, col)]).all())
        meets &= bool((col[L.meet] == f.lattice.meet[np.ix_(col, col)]).all())
        meets &= bool(col[L.top] == f.lattice.top)
    homs = True
    for i, f in enumerate(factors):
        try:
            homs &= is_lower_bounded_hom(L, f.lattice, phi[:, i])
        except NotAHomomorphism:
            homs = False
    return Verification(
        order_embedding=bool((le == L.leq).all()) and (k > 0 or L.n == 1),
        joins=joins,
        meets_and_top=meets,
        factor_homs_lower_bounded=homs,
        factors_lower_bounded=all(f.lower_bounded and f.join_irreducibles_ok for f in factors),
    )


def decompose(L: FiniteLattice, Sigma=None) -> Decomposition:
    """Build every factor ``L_p`` and the map ``phi = (phi_p)_p``, then verify it.

    Raises LeavenInvalid when Sigma (default J(L)) is not a leaven.
    """
    S, D = _leaven_graph(L, Sigma)
    factors = [factor_lattice(L, S, p, D) for p in iter_bits(S)]
    phi = np.array([[f.image(L, x) for f in factors] for x in range(L.n)],
                   dtype=np.intp).reshape(L.n, len(factors))
    dec = Decomposition(L, ElementSet(L.n, S), factors, phi)
    dec.verification = _verify(L, factors, phi)
    return dec


def merge_factors(dec: Decomposition) -> list[list[int]]:
    """Group factor positions whose maps phi_p have the same kernel."""
    groups: dict[tuple, list[int]] = {}
    for i in range(len(dec.factors)):
        col = dec.phi[:, i]
        # classes numbered by first occurrence, so equal kernels give equal keys
        first: dict[int, int] = {}
        key = tuple(first.setdefault(int(c), len(first)) for c in col)
        groups.setdefault(key, []).append(i)
    return list(groups.values())
