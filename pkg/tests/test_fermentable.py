import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from latkit.errors import LeavenInvalid
from latkit.fermentable import decompose, factor_lattice, leaven_check, merge_factors, sigma_up
from latkit.generators import boolean, chain, co_chain, m_k, n5, random_lattice
from latkit.joincover import is_lower_bounded_hom, is_lower_bounded_lattice
from latkit.lattice import is_isomorphic, join_irreducibles
from oracles import Brute

lattices = st.builds(random_lattice, st.integers(1, 8), st.integers(0, 10**6))


def ix(L, names):
    return [L.index(s) for s in names]


def names(L, X):
    return sorted(L.labels[x] for x in X)


def test_leaven_examples():
    assert leaven_check(n5()).valid
    M = m_k(3)
    rep = leaven_check(M)
    assert rep.failed == "d_acyclic" and rep.witness[0] == rep.witness[-1]
    L = n5()
    rep = leaven_check(L, ix(L, "xy"))
    assert rep.failed == "join_generating" and L.labels[rep.witness] == "z"
    rep = leaven_check(L, [L.top])
    assert rep.failed == "join_irreducible"


def test_sigma_up_examples():
    L = n5()
    assert names(L, sigma_up(L, None, L.index("z"))) == ["x", "y", "z"]
    assert names(L, sigma_up(L, None, L.index("x"))) == ["x"]
    C = chain(5)
    for p in join_irreducibles(C):
        assert list(sigma_up(C, None, p)) == [p]


def test_factor_examples():
    L = n5()
    fz = factor_lattice(L, None, L.index("z"))
    assert is_isomorphic(fz.lattice, L)
    assert fz.lattice.labels[0] == "O"
    assert is_isomorphic(factor_lattice(L, None, L.index("x")).lattice, chain(2))
    B = boolean(2)
    for p in join_irreducibles(B):
        assert is_isomorphic(factor_lattice(B, None, p).lattice, chain(2))


def test_decompose_examples():
    dec = decompose(n5())
    assert sorted(f.lattice.n for f in dec.factors) == [2, 2, 5]
    assert dec.verification.ok
    dec = decompose(chain(5))
    assert [f.lattice.n for f in dec.factors] == [2] * 4 and dec.verification.ok
    with pytest.raises(LeavenInvalid):
        decompose(m_k(3))
    with pytest.raises(LeavenInvalid):
        decompose(co_chain(4))


def test_decompose_json_and_merge():
    dec = decompose(n5())
    out = dec.to_json()
    assert out["verification"]["ok"] and set(out["phi"]) == set(n5().labels)
    groups = merge_factors(dec)
    assert sorted(i for g in groups for i in g) == list(range(len(dec.factors)))


def _phi_oracle(L):
    """phi_p(x) as an element of L (None for the fresh zero), from the order alone."""
    B = Brute(L)
    Js = B.join_irreducibles()
    edges = B.d_edges()
    out = {}
    for p in Js:
        reach, stack = {p}, [p]
        while stack:
            a = stack.pop()
            for u, v in edges:
                if u == a and v not in reach:
                    reach.add(v)
                    stack.append(v)
        for x in range(L.n):
            below = [q for q in reach if B.leq[q][x]]
            out[p, x] = B.join(below) if below else None
    return B, Js, out


@settings(max_examples=40, deadline=None)
@given(lattices)
def test_decomposition_matches_oracle(L):
    assume(is_lower_bounded_lattice(L)[0])
    dec = decompose(L)
    assert dec.verification.ok
    B, Js, phi = _phi_oracle(L)
    assert list(dec.sigma) == sorted(Js)
    for i, f in enumerate(dec.factors):
        for x in range(L.n):
            m = f.members[dec.phi[x, i]]
            assert (None if m == -1 else m) == phi[f.p, x]
    for x in range(L.n):
        for y in range(L.n):
            below = all(phi[p, x] is None or (phi[p, y] is not None and B.leq[phi[p, x]][phi[p, y]])
                        for p in Js)
            assert below == B.leq[x][y]


@settings(max_examples=40, deadline=None)
@given(lattices)
def test_factor_invariants(L):
    assume(is_lower_bounded_lattice(L)[0])
    dec = decompose(L)
    for i, f in enumerate(dec.factors):
        K, col = f.lattice, dec.phi[:, i]
        for q in f.sigma_p:
            qi = f.members.index(q)
            for x in range(L.n):
                assert L.le(q, x) == K.le(qi, col[x])
        for a in range(L.n):
            for b in range(L.n):
                assert col[L.join[a, b]] == K.join[col[a], col[b]]
                assert col[L.meet[a, b]] == K.meet[col[a], col[b]]
        assert is_lower_bounded_hom(L, K, col)
        assert is_lower_bounded_lattice(K)[0]


@settings(max_examples=40, deadline=None)
@given(lattices)
def test_fermentable_iff_lower_bounded(L):
    assert leaven_check(L).valid == Brute(L).lower_bounded()
