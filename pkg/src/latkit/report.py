"""Classification reports for single lattices and the corpus harness that
cross-checks the decision procedures against each other."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .convergence import report_fragment as convergence_fragment
from .convergence import special_family
from .distributivity import (
    dual_k_star_distributive,
    image_orbit,
    is_join_semidistributive,
    sd_omega_check,
    sd_omega_seeds,
    staircase_upto,
    translation_monoid,
)
from .errors import CapExceeded, LeavenInvalid, ViolationFound
from .fermentable import decompose
from .generators import FamilySpec, generate
from .joincover import d_relation_direct, d_relation_from_covers, is_lower_bounded_lattice
from .lattice import FiniteLattice, is_valid_lattice, join_irreducibles
from .witnesses import report_fragment as witness_fragment

SCHEMA = "latkit.classreport/1"
STAIRCASE_K = 3


def _labels(L: FiniteLattice, xs):
    return None if xs is None else [L.labels[x] for x in xs]


def figure2_violations(rep: dict) -> list[str]:
    """Containments every finite lattice must respect.

    Lower bounded implies SD_join^omega, and SD_join^omega, dual zipper
    distributivity, dual staircase distributivity up to the checked depth
    and join-semidistributivity all coincide.
    """
    out = []
    omega = rep["sd_omega"]
    if rep["lower_bounded"] and omega == "false":
        out.append("lower_bounded=>sd_omega")
    staircase = rep["staircase_upto"] == STAIRCASE_K
    if not rep["zipper"] == staircase == rep["sd_join"]:
        out.append("zipper<=>staircase<=>sd_join")
    if omega != "cap_exceeded" and (omega == "true") != rep["sd_join"]:
        out.append("sd_omega<=>sd_join")
    if rep["lower_bounded"] and not rep["sd_join"]:
        out.append("lower_bounded=>sd_join")
    return out


def analyze(L: FiniteLattice, *, monoid_cap: int | None = None, jobs: int = 1,
            monoid: bool = False, convergence: bool = True, witnesses: bool = True) -> dict:
    """Run every decision procedure on L and collect a ClassReport dict.

    ``monoid=True`` also builds the full translation monoid to report its
    size; the SD_join^omega verdict itself comes from the image search.
    Raises ViolationFound when the Figure-2 containments fail.
    """
    lab = L.labels
    J = join_irreducibles(L)
    D = d_relation_direct(L, jobs=jobs)
    lb, cert = is_lower_bounded_lattice(L, D)
    sd, sd_w = is_join_semidistributive(L)
    zipper, zip_w = dual_k_star_distributive(L, 2)
    rep: dict = {
        "schema": SCHEMA,
        "version": __version__,
        "lattice": {"name": L.name, "size": L.n, "elements": list(lab)},
        "join_irreducibles": _labels(L, J),
        "d_edges": D.to_json(L),
        "lower_bounded": lb,
        "d_cycle": None if lb else _labels(L, cert),
        "sd_join": sd,
        "sd_join_witness": _labels(L, sd_w),
        "zipper": zipper,
        "zipper_witness": None if zip_w is None else {"a": lab[zip_w[0]], "B": _labels(L, zip_w[1])},
        "staircase_upto": staircase_upto(L, STAIRCASE_K),
    }

    groups = sd_omega_seeds(L)
    orbit = None
    try:
        orbit = image_orbit(L, list(groups), monoid_cap)
        ok, w = sd_omega_check(L, monoid_cap, orbit=orbit, groups=groups)
        rep["sd_omega"] = "true" if ok else "false"
        rep["witness"] = None if w is None else {
            "s": _labels(L, w["s"]), "a": lab[w["a"]], "b": lab[w["b"]], "c": lab[w["c"]],
            "lhs": lab[w["lhs"]], "rhs": lab[w["rhs"]]}
        rep["orbit_size"] = len(orbit)
    except CapExceeded:
        rep.update(sd_omega="cap_exceeded", witness=None, orbit_size=None)
    rep["monoid_size"] = None
    if monoid:
        try:
            rep["monoid_size"] = len(translation_monoid(L, monoid_cap))
        except CapExceeded:
            pass

    if lb:
        dec = decompose(L)
        rep["fermentable"] = {"fermentable": True,
                              "factor_sizes": [f.lattice.n for f in dec.factors],
                              "verification": dec.verification.to_json()}
    else:
        try:
            decompose(L)
        except LeavenInvalid as exc:
            rep["fermentable"] = {"fermentable": False, "failed": exc.report.failed}

    if convergence:
        rep["convergence"] = (None if orbit is None else
                              convergence_fragment(special_family(L, orbit=orbit), groups))
    if witnesses:
        rep["witnesses"] = witness_fragment(L)

    bad = figure2_violations(rep)
    rep["figure2_consistent"] = not bad
    if bad:
        raise ViolationFound(L.name, bad[0], rep)
    return rep


def dumps(rep: dict) -> str:
    return json.dumps(rep, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# corpus


def default_corpus(random_count: int = 200) -> list[FamilySpec]:
    specs = [FamilySpec("chain", n=n) for n in range(1, 9)]
    specs += [FamilySpec("boolean", n=k) for k in range(1, 5)]
    specs += [FamilySpec("m_k", k=k) for k in range(3, 6)]
    specs.append(FamilySpec("n5"))
    specs += [FamilySpec("co_chain", n=n) for n in range(2, 7)]
    specs += [FamilySpec("subspaces", q=2, d=2), FamilySpec("subspaces", q=2, d=3),
              FamilySpec("subspaces", q=3, d=2)]
    specs += [FamilySpec("fig1", N=N) for N in range(7)]
    specs += [FamilySpec("random", n=4 + seed % 7, seed=seed) for seed in range(random_count)]
    return specs


def corpus_entry(L: FiniteLattice, lattice_id: str, monoid_cap: int | None = None) -> dict:
    """Cross-check the procedures on one lattice; violations are listed, not raised."""
    violations = []
    if not is_valid_lattice(L):
        return {"id": lattice_id, "size": L.n, "violations": ["table_audit"]}
    try:
        rep = analyze(L, monoid_cap=monoid_cap, convergence=False, witnesses=False)
    except ViolationFound as exc:
        rep = exc.detail
        violations.append(exc.invariant)
    k3, _ = dual_k_star_distributive(L, 3)
    verdicts = {"sd_join": rep["sd_join"], "dual_2_star": rep["zipper"], "dual_3_star": k3,
                "sd_omega": rep["sd_omega"]}
    if rep["sd_omega"] == "cap_exceeded":
        violations.append("sd_omega_cap_exceeded")
    elif len({str(v).lower() for v in verdicts.values()}) != 1:
        violations.append("equivalent_verdicts")
    direct = d_relation_direct(L).edge_set()
    if direct != d_relation_from_covers(L).edge_set():
        violations.append("d_direct=d_from_covers")
    ferm = rep.get("fermentable", {})
    if ferm.get("fermentable") and not ferm["verification"]["ok"]:
        violations.append("decomposition_verified")
    if ferm.get("fermentable", False) != rep["lower_bounded"]:
        violations.append("fermentable<=>lower_bounded")
    return {"id": lattice_id, "size": L.n, **verdicts, "lower_bounded": rep["lower_bounded"],
            "d_edges": len(direct), "violations": sorted(set(violations))}


def _entry_from_spec(args):
    spec, cap = args
    return corpus_entry(generate(spec), spec.id, cap)


def _entry_from_lattice(args):
    L, cap = args
    return corpus_entry(L, L.name, cap)


def run_corpus(specs=(), lattices=(), jobs: int = 1, monoid_cap: int | None = None,
               strict: bool = False) -> dict:
    """Run the cross-checks over generated specs and ready-made lattices.

    Entries are sorted by lattice id.  ``strict=True`` raises ViolationFound
    for the first entry with a violation.
    """
    work = [(_entry_from_spec, (s, monoid_cap)) for s in specs]
    work += [(_entry_from_lattice, (L, monoid_cap)) for L in lattices]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(min(jobs, os.cpu_count() or 1)) as pool:
            entries = list(pool.map(_call, work))
    else:
        entries = [fn(arg) for fn, arg in work]
    entries.sort(key=lambda e: e["id"])
    bad = [e for e in entries if e["violations"]]
    if strict and bad:
        raise ViolationFound(bad[0]["id"], bad[0]["violations"][0])
    return {"schema": "latkit.corpus/1", "count": len(entries),
            "violations": [{"id": e["id"], "invariants": e["violations"]} for e in bad],
            "lattices": entries}


def _call(item):
    fn, arg = item
    return fn(arg)
