import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latkit.errors import CycleInCovers, DuplicateCover, IndexOutOfRange, NotALattice, SizeCapExceeded
from latkit.generators import boolean, chain, m_k, n5, random_lattice
from latkit.lattice import (
    ElementSet,
    LatticeFile,
    build_from_covers,
    dedekind_macneille,
    direct_product,
    down_set,
    dump_lattice,
    embedding_of_poset,
    find_isomorphism,
    hasse_dot,
    is_isomorphic,
    is_valid_lattice,
    join_irreducibles,
    load_lattice,
    sublattice_generated,
    to_lattice_file,
    up_set,
)
from oracles import Brute

lattices = st.builds(random_lattice, st.integers(1, 8), st.integers(0, 10**6))


def labels(L, X):
    return {L.labels[x] for x in X}


def test_two_chain_from_covers():
    L = build_from_covers(LatticeFile("c2", ["0", "1"], [(0, 1)]))
    assert L.n == 2 and L.join[0, 1] == 1 and L.meet[0, 1] == 0


def test_n5_tables():
    L = n5()
    x, y, z = (L.index(s) for s in "xyz")
    assert L.labels[L.join[x, y]] == "1"
    assert L.labels[L.meet[z, y]] == "0"


def test_not_a_lattice_reports_pair():
    f = LatticeFile("v", ["0", "a", "b"], [(0, 1), (0, 2)])
    with pytest.raises(NotALattice) as info:
        build_from_covers(f)
    assert set(info.value.pair) == {1, 2}


def test_cycle_and_duplicate_and_range():
    with pytest.raises(CycleInCovers):
        build_from_covers(LatticeFile("c", ["a", "b"], [(0, 1), (1, 0)]))
    with pytest.raises(DuplicateCover):
        build_from_covers(LatticeFile("d", ["a", "b"], [(0, 1), (0, 1)]))
    with pytest.raises(IndexOutOfRange):
        build_from_covers(LatticeFile("r", ["a", "b"], [(0, 2)]))


def test_size_cap(monkeypatch):
    monkeypatch.setenv("LATKIT_MAX_N", "3")
    with pytest.raises(SizeCapExceeded):
        chain(4)


def test_down_and_up_sets():
    L = n5()
    assert len(down_set(L, ElementSet(L.n, 0))) == 0
    assert labels(L, down_set(L, [L.index("z")])) == {"0", "x", "z"}
    assert len(up_set(L, [L.bottom])) == L.n


def test_join_irreducibles_examples():
    assert labels(boolean(2), join_irreducibles(boolean(2))) == {"{0}", "{1}"}
    assert labels(n5(), join_irreducibles(n5())) == {"x", "y", "z"}
    assert len(join_irreducibles(chain(6))) == 5


def test_direct_product_examples():
    L = n5()
    assert is_isomorphic(direct_product([L]), L)
    assert is_isomorphic(direct_product([chain(2), chain(2)]), boolean(2))
    P = direct_product([L, chain(2)])
    assert P.n == 10
    assert len(join_irreducibles(P)) == len(Brute(P).join_irreducibles()) == 4


def test_product_projections_reproduce_factors():
    P = direct_product([n5(), chain(3)])
    for i, F in enumerate(P.factors):
        pr = P.projection(i)
        assert (pr[P.join] == F.join[np.ix_(pr, pr)]).all()
        assert (pr[P.meet] == F.meet[np.ix_(pr, pr)]).all()
        assert sorted(set(pr.tolist())) == list(range(F.n))


def test_sublattice_generated_examples():
    L = n5()
    assert sublattice_generated(L, range(L.n)).lattice.n == L.n
    S = sublattice_generated(L, [L.index("x"), L.index("y")])
    assert {L.labels[i] for i in S.inclusion} == {"0", "x", "y", "1"}
    assert sublattice_generated(L, [L.index("z")]).lattice.n == 1


def test_dedekind_macneille_examples():
    anti2 = LatticeFile("a2", ["p", "q"], leq=[])
    assert is_isomorphic(dedekind_macneille(anti2), boolean(2))
    anti3 = LatticeFile("a3", ["p", "q", "r"], leq=[])
    assert is_isomorphic(dedekind_macneille(anti3), m_k(3))
    L = n5()
    assert is_isomorphic(dedekind_macneille(to_lattice_file(L)), L)


def test_poset_embeds_into_completion():
    P = LatticeFile("p", ["a", "b", "c", "d"], leq=[(0, 2), (1, 2), (0, 3)])
    L = dedekind_macneille(P)
    e = embedding_of_poset(P, L)
    rel = {(0, 0), (1, 1), (2, 2), (3, 3), (0, 2), (1, 2), (0, 3)}
    for i in range(4):
        for j in range(4):
            assert bool(L.leq[e[i], e[j]]) == ((i, j) in rel)


def test_leq_form_and_round_trip(tmp_path):
    L = n5()
    path = tmp_path / "n5.json"
    path.write_text(dump_lattice(L))
    assert is_isomorphic(load_lattice(str(path)), L)
    leq_form = {"name": "c3", "elements": ["a", "b", "c"], "leq": [[0, 1], [1, 2]]}
    assert is_isomorphic(load_lattice(leq_form), chain(3))


def test_hasse_dot_counts():
    text = hasse_dot(n5())
    assert text.count("[label=") == 5
    assert text.count("->") == 5


def test_isomorphism_negative():
    assert find_isomorphism(n5(), m_k(3)) is None


@settings(max_examples=40, deadline=None)
@given(lattices)
def test_tables_match_brute_force(L):
    B = Brute(L)
    assert L.join.tolist() == B.J and L.meet.tolist() == B.M
    assert (L.bottom, L.top) == (B.bot, B.top)
    assert is_valid_lattice(L)


@settings(max_examples=40, deadline=None)
@given(lattices)
def test_lattice_laws(L):
    J, M = L.join, L.meet
    assert (J == J.T).all() and (M == M.T).all()
    idx = np.arange(L.n)
    assert (J[idx, idx] == idx).all() and (M[idx, idx] == idx).all()
    a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
    assert (J[J[a, b], c] == J[a, J[b, c]]).all()
    assert (M[M[a, b], c] == M[a, M[b, c]]).all()
    assert (J[a, M[a, b]] == a).all() and (M[a, J[a, b]] == a).all()
    assert L.leq[L.bottom].all() and L.leq[:, L.top].all()


@settings(max_examples=40, deadline=None)
@given(lattices, st.data())
def test_down_set_is_closure(L, data):
    X = data.draw(st.sets(st.integers(0, L.n - 1)))
    Y = data.draw(st.sets(st.integers(0, L.n - 1)))
    dX = down_set(L, X)
    assert set(X) <= set(dX)
    assert down_set(L, dX).mask == dX.mask
    assert down_set(L, X | Y).mask & dX.mask == dX.mask
    uX = up_set(L, X)
    assert up_set(L, uX).mask == uX.mask and set(X) <= set(uX)


@settings(max_examples=40, deadline=None)
@given(lattices)
def test_join_irreducibles_generate(L):
    Js = join_irreducibles(L)
    assert sorted(Js) == sorted(Brute(L).join_irreducibles())
    for x in range(L.n):
        assert L.join_all(j for j in Js if L.le(j, x)) == x


@settings(max_examples=25, deadline=None)
@given(lattices)
def test_dedekind_macneille_idempotent(L):
    assert is_isomorphic(dedekind_macneille(to_lattice_file(L)), L)
