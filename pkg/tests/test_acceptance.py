"""Acceptance criteria 1-9, each checked exactly over the corpus.

Every test records a one-line verdict that is printed in the terminal
summary under "acceptance criteria".
"""

import itertools
import json
import random
import subprocess
import sys
import time

import numpy as np

from conftest import record
from latkit.convergence import (
    check_axioms,
    cl_closure,
    filters,
    fl_closure,
    least_element_family,
    special_family,
)
from latkit.distributivity import (
    diamond_eval,
    diamond_eval_batch,
    dual_k_star_distributive,
    is_join_semidistributive,
    j_map,
    j_map_batch,
    m_map,
    m_map_batch,
    sd_omega_check,
)
from latkit.errors import LeavenInvalid, ViolationFound
from latkit.fermentable import decompose
from latkit.generators import boolean, co_chain, fig1, generate, m_k, subspaces, verify_fig1
from latkit.joincover import d_relation_direct, d_relation_from_covers, is_lower_bounded_lattice
from latkit.lattice import dump_lattice, sublattice_generated
from latkit.report import analyze, default_corpus, dumps, run_corpus
from latkit.witnesses import (
    co_chain_instance,
    independence_check,
    modhom_witness_search,
    nonhom_check,
    perspectivity_witness,
)


def _verdict(ok: bool) -> str:
    return "true" if ok else "false"


def test_criterion_1_equivalent_procedures(full_corpus):
    start = time.perf_counter()
    mismatches = []
    for lid, L in full_corpus:
        v = (_verdict(is_join_semidistributive(L)[0]),
             _verdict(dual_k_star_distributive(L, 2)[0]),
             _verdict(dual_k_star_distributive(L, 3)[0]),
             _verdict(sd_omega_check(L)[0]))
        if len(set(v)) != 1:
            mismatches.append((lid, v))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 300
    record(1, ok, f"{len(full_corpus)} lattices, {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert not mismatches
    assert elapsed < 300


def test_criterion_2_d_relation_two_ways(full_corpus):
    bad = [lid for lid, L in full_corpus
           if d_relation_direct(L).edge_set() != d_relation_from_covers(L).edge_set()]
    record(2, not bad, f"{len(full_corpus)} lattices, mismatches: {bad}")
    assert not bad


def _lower_bounded_corpus(full_corpus):
    return [(lid, L) for lid, L in full_corpus if is_lower_bounded_lattice(L)[0]]


def test_criterion_3_decomposition_verified(full_corpus):
    failures = []
    count = 0
    for lid, L in _lower_bounded_corpus(full_corpus):
        count += 1
        dec = decompose(L)
        if not dec.verification.ok:
            failures.append((lid, dec.verification.to_json()))
    _record_3(decomposed=(count, failures))
    assert not failures


def test_criterion_3_refusals():
    accepted = []
    for L in (m_k(3), boolean(3), boolean(4)):
        try:
            decompose(L)
            accepted.append(L.name)
        except LeavenInvalid:
            pass
    _record_3(refused=accepted)
    assert not accepted, f"decompose accepted {accepted}"


_c3: dict = {}


def _record_3(**kw):
    _c3.update(kw)
    count, failures = _c3.get("decomposed", (None, []))
    accepted = _c3.get("refused", [])
    parts = []
    if count is not None:
        parts.append(f"{count} D-acyclic lattices decomposed, {len(failures)} failed verification")
    if "refused" in _c3:
        parts.append("refusals ok" if not accepted else f"not refused: {', '.join(accepted)}")
    record(3, not failures and not accepted and len(_c3) == 2, "; ".join(parts))


def test_criterion_4_lower_bounded_implies_sd(full_corpus):
    bad = []
    for lid, L in full_corpus:
        try:
            rep = analyze(L, convergence=False, witnesses=False)
        except ViolationFound as exc:
            bad.append((lid, exc.invariant))
            continue
        if rep["lower_bounded"] and not rep["sd_join"]:
            bad.append((lid, "lower_bounded=>sd_join"))
    record(4, not bad, f"{len(full_corpus)} lattices, violations: {bad}")
    assert not bad


def _circjm_exhaustive(L, max_len=6):
    n = L.n
    X = np.arange(n)
    for r in range(max_len + 1):
        S = np.array(list(itertools.product(range(n), repeat=r)), dtype=np.intp).reshape(n ** r, r)
        V = diamond_eval_batch(L, S, X)
        for u in range(n):
            if not (L.join[u][V] == diamond_eval_batch(L, j_map_batch(L, u, S), X)).all():
                return ("j", u, r)
            meets = L.meet[u][V]
            for y in range(n):
                xs = np.flatnonzero(L.leq[y])
                T = diamond_eval_batch(L, m_map_batch(L, u, y, S), xs)
                if not (meets[:, xs] == T).all():
                    return ("m", u, y, r)
    return None


def _circjm_random(L, count, rng):
    n = L.n
    for _ in range(count):
        s = [rng.randrange(n) for _ in range(rng.randrange(7))]
        u, x = rng.randrange(n), rng.randrange(n)
        y = rng.choice([v for v in range(n) if L.leq[v, x]])
        v = diamond_eval(L, s, x)
        if L.join[u, v] != diamond_eval(L, j_map(L, u, s), x):
            return ("j", u, s, x)
        if L.meet[u, v] != diamond_eval(L, m_map(L, u, y, s), x):
            return ("m", u, y, s, x)
    return None


def test_criterion_5_translation_identities(full_corpus):
    rng = random.Random(5)
    bad = []
    exhaustive = 0
    for lid, L in full_corpus:
        if L.n <= 8:
            exhaustive += 1
            w = _circjm_exhaustive(L)
        else:
            w = _circjm_random(L, 10**4, rng)
        if w is not None:
            bad.append((lid, w))
    record(5, not bad, f"{exhaustive} lattices exhaustive, "
                       f"{len(full_corpus) - exhaustive} sampled, failures: {bad}")
    assert not bad


def test_criterion_6_convergence(full_corpus):
    bad = []
    m3 = m_k(3)
    rep = check_axioms(special_family(m3))
    w = rep.violations.get("S4", {})
    a = m3.index("a")
    m3_ok = (not rep.results["S4"] and w.get("meet") == m3.top and w.get("expected") == a
             and w.get("a") == a)
    if not m3_ok:
        bad.append(("m_k(3)", "S4 witness", rep.to_json()))
    checked = 0
    for lid, L in full_corpus:
        F = special_family(L)
        if sd_omega_check(L)[0]:
            checked += 1
            rep = check_axioms(F)
            if not rep.ok:
                bad.append((lid, "axioms", rep.to_json()))
        G = least_element_family(L)
        for A in filters(L):
            for fam in (F, G):
                if cl_closure(fam, A) != fl_closure(fam, A):
                    bad.append((lid, "MonClass", A))
    record(6, not bad, f"S1-S4 on {checked} lattices, M3 S4 witness "
                       f"{'ok' if m3_ok else 'wrong'}, MonClass on all filters; failures: {bad[:3]}")
    assert not bad


def test_criterion_7_witnesses():
    start = time.perf_counter()
    bad = []
    for n in range(3, 9):
        L = co_chain(n)
        if not nonhom_check(co_chain_instance(L, n)).ok:
            bad.append(f"co_chain({n})")
    for d in (2, 3, 4):
        L = subspaces(2, d)
        inst = modhom_witness_search(L, 2)
        if inst is None:
            bad.append(f"subspaces(2,{d}) none")
            continue
        ok_ind, _ = independence_check(L, inst.a)
        w = perspectivity_witness(L, *inst.a)
        if not (ok_ind and w is not None and w.valid(L) and nonhom_check(inst).ok):
            bad.append(f"subspaces(2,{d})")
    for N in range(13):
        if not verify_fig1(fig1(N), N).ok:
            bad.append(f"fig1({N})")
    elapsed = time.perf_counter() - start
    record(7, not bad and elapsed < 60, f"failures: {bad}, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 60


def test_criterion_8_sublattices_preserve_sd_omega(full_corpus):
    rng = random.Random(8)
    bad = []
    lattices = 0
    for lid, L in full_corpus:
        if not sd_omega_check(L)[0]:
            continue
        lattices += 1
        for _ in range(100):
            G = rng.sample(range(L.n), rng.randint(1, min(4, L.n)))
            K = sublattice_generated(L, G).lattice
            if not sd_omega_check(K)[0]:
                bad.append((lid, sorted(G)))
                break
    record(8, not bad, f"100 random sublattices of each of {lattices} lattices, failures: {bad}")
    assert not bad


def _cli(*args, stdin=None):
    proc = subprocess.run([sys.executable, "-m", "latkit.cli", *args], input=stdin,
                          capture_output=True, text=True, check=False)
    return proc.returncode, proc.stdout


def test_criterion_9_determinism(tmp_path):
    ids = ["n5", "m_k(3)", "fig1(3)", "co_chain(4)", "subspaces(2,3)", "random(9,5)"]
    bad = []
    for lid in ids:
        L = generate(next(s for s in default_corpus(200) if s.id == lid))
        path = tmp_path / f"{abs(hash(lid))}.json"
        path.write_text(dump_lattice(L))
        runs = [_cli("analyze", str(path)), _cli("analyze", str(path)),
                _cli("analyze", str(path), "--jobs", "4")]
        if len({r for r in runs}) != 1 or runs[0][0] != 0:
            bad.append(lid)
        if dumps(analyze(L, jobs=1)) != dumps(analyze(L, jobs=3)):
            bad.append(lid + " (library)")
    specs = default_corpus(20)[-30:]
    if json.dumps(run_corpus(specs, jobs=1)) != json.dumps(run_corpus(specs, jobs=3)):
        bad.append("corpus jobs")
    record(9, not bad, f"{len(ids)} reports x 3 runs and corpus jobs 1 vs 3, differences: {bad}")
    assert not bad
