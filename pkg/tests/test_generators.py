import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latkit.errors import ConstructionInvalid, ParamOutOfRange
from latkit.generators import (
    FamilySpec,
    boolean,
    chain,
    co_chain,
    fig1,
    gaussian_binomial,
    generate,
    m_k,
    parse_spec_id,
    random_lattice,
    subspaces,
    verify_fig1,
)
from latkit.lattice import FiniteLattice, dump_lattice, is_isomorphic, is_valid_lattice
from latkit.witnesses import is_modular
from oracles import Brute, convex_subsets, count_subspaces


def test_co_chain_3():
    L = co_chain(3)
    assert set(L.labels) == {"{}", "{1}", "{2}", "{3}", "{1,2}", "{2,3}", "{1,2,3}"}


@pytest.mark.parametrize("n", range(0, 11))
def test_co_chain_size(n):
    L = co_chain(n)
    assert L.n == 1 + n * (n + 1) // 2 == len(convex_subsets(n))
    if n >= 3:
        assert not is_modular(L)


def test_co_chain_order_is_inclusion():
    L = co_chain(4)
    sets = [frozenset(map(int, lbl.strip("{}").split(","))) if lbl != "{}" else frozenset()
            for lbl in L.labels]
    for x in range(L.n):
        for y in range(L.n):
            assert L.le(x, y) == (sets[x] <= sets[y])


@pytest.mark.parametrize("q,d", [(2, 0), (2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_subspace_counts(q, d):
    L = subspaces(q, d)
    assert L.n == count_subspaces(q, d) == sum(gaussian_binomial(d, r, q) for r in range(d + 1))
    assert is_modular(L)


def test_small_families():
    assert is_isomorphic(subspaces(2, 2), m_k(3))
    assert chain(1).n == 1
    assert boolean(3).n == 8 and m_k(5).n == 7
    assert is_isomorphic(subspaces(3, 2), m_k(4))


@pytest.mark.parametrize("N", range(13))
def test_fig1_relations(N):
    rep = verify_fig1(fig1(N), N)
    assert rep.ok


def test_fig1_facts():
    assert verify_fig1(fig1(0), 0).ok
    assert Brute(fig1(2)).lower_bounded()
    # five pairwise incomparable atoms: a0 < a1 fails
    flat = FiniteLattice.from_leq(["0", "a0", "b0", "c", "a1", "b1", "1"],
                                  [[i == 0 or i == j or j == 6 for j in range(7)] for i in range(7)])
    with pytest.raises(ConstructionInvalid):
        verify_fig1(flat, 1)


def test_random_examples():
    L = random_lattice(1, 7)
    assert L.n in (1, 2)
    assert dump_lattice(random_lattice(9, 5)) == dump_lattice(random_lattice(9, 5))
    assert is_valid_lattice(random_lattice(6, 42))


def test_spec_parsing_and_ranges():
    for text in ("chain(4)", "boolean(3)", "m_k(3)", "n5", "co_chain(5)", "subspaces(2,3)",
                 "fig1(2)", "random(7,3)"):
        assert parse_spec_id(text).id == text
    with pytest.raises(ParamOutOfRange):
        parse_spec_id("petersen(3)")
    with pytest.raises(ParamOutOfRange):
        parse_spec_id("chain(a)")
    with pytest.raises(ParamOutOfRange):
        generate(FamilySpec("subspaces", q=4, d=2))
    with pytest.raises(ParamOutOfRange):
        generate(FamilySpec("fig1", N=17))
    with pytest.raises(ParamOutOfRange):
        generate(FamilySpec("chain", n=0))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 10**6))
def test_random_lattices_are_lattices(n, seed):
    L = random_lattice(n, seed)
    assert is_valid_lattice(L)
    Brute(L)                    # raises when some pair lacks a join or meet
    assert dump_lattice(L) == dump_lattice(random_lattice(n, seed))
