"""Exhaustive corroboration of the NT_k / CSN_k results on a corpus of small groups.

Every checked implication holds in all finite groups, so a counterexample
means a bug in this package; it is reported with a replayable witness and a nonzero exit
status.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import OrderLimitExceeded, SearchBudgetExceeded
from .finite import (
    DEFAULT_ORDER_CAP,
    Subgroup,
    all_subgroups,
    build_family,
    center,
    class_exceeds,
    commutators_vanish,
    cyclic_subgroups,
    is_normal,
    iter_bits,
    nilpotency_class,
    normal_closure,
    subgroup_generate,
)
from .nilk import (
    DEFAULT_SUBGROUP_CAP,
    NTK_METHODS,
    Witness,
    WitnessKind,
    ck_mask,
    eval_nil,
    is_csnk,
    is_ntk,
    maximal_nilk_subgroups,
)

PROPOSITIONS = (
    "csn_implies_nt",
    "pairwise_iff_nt",
    "product_indecomposable",
    "ck_maximal",
    "subgroup_closure",
    "finite_csn_nilpotent",
    "center_trivial",
    "dichotomy",
)

LATTICE_LIMIT = 48
FALLBACK_LIMIT = 24
NIL_ORACLE_LIMIT = 24


@dataclass
class CorpusEntry:
    group: object
    provenance: str
    factors: tuple = ()


@dataclass
class Corpus:
    entries: list
    max_order: int
    families: tuple = ()

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass
class PropositionReport:
    proposition: str
    k: int
    groups_checked: int = 0
    counterexamples: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    observations: list = field(default_factory=list)
    elapsed: float = 0.0
    parameters: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.counterexamples and not self.skipped

    @property
    def status(self):
        if self.counterexamples:
            return "fail"
        if self.skipped:
            return "incomplete"
        return "pass"


# ---------------------------------------------------------------------------
# corpus


def _primes(limit):
    return [p for p in range(2, limit + 1) if all(p % d for d in range(2, int(p ** 0.5) + 1))]


def build_default_corpus(max_order, families=None, order_cap=DEFAULT_ORDER_CAP):
    """Deterministic corpus of groups of order at most ``max_order``.

    In order: C_1..C_max; D_n (order 2n, n >= 3); S_3..S_5; A_4, A_5; Q8;
    Heis(p) for primes p <= 7; C_q : C_p for prime q and 3 <= p | q-1
    (p = 2 would repeat the dihedral groups); then G x H for every pair of
    nontrivial groups above (G listed no later than H) with |G||H| within
    the bound.  ``families`` restricts the list to those family names.
    """
    if max_order < 1:
        raise ValueError("max_order must be positive")
    if max_order > order_cap:
        raise OrderLimitExceeded(f"max_order {max_order} exceeds cap {order_cap}")
    wanted = set(families) if families else None

    def use(name):
        return wanted is None or name in wanted

    base = []

    def add(family, *params):
        G = build_family(family, *params, order_cap=order_cap)
        base.append(CorpusEntry(G, G.provenance))

    if use("cyclic"):
        for n in range(1, max_order + 1):
            add("cyclic", n)
    if use("dihedral"):
        for n in range(3, max_order // 2 + 1):
            add("dihedral", n)
    if use("symmetric"):
        for n, size in ((3, 6), (4, 24), (5, 120)):
            if size <= max_order:
                add("symmetric", n)
    if use("alternating"):
        for n, size in ((4, 12), (5, 60)):
            if size <= max_order:
                add("alternating", n)
    if use("quaternion8") and max_order >= 8:
        add("quaternion8")
    if use("heisenberg_mod_p"):
        for p in _primes(7):
            if p ** 3 <= max_order:
                add("heisenberg_mod_p", p)
    if use("semidirect_z_p_on_z_q"):
        for q in _primes(max_order):
            for p in range(3, q):
                if (q - 1) % p == 0 and p * q <= max_order:
                    add("semidirect_z_p_on_z_q", p, q)
    entries = list(base)
    if use("direct_product"):
        factors = [e for e in base if e.group.order > 1]
        for i, a in enumerate(factors):
            for b in factors[i:]:
                if a.group.order * b.group.order <= max_order:
                    G = build_family("direct_product", a.group, b.group, order_cap=order_cap)
                    entries.append(CorpusEntry(G, G.provenance, (a.group, b.group)))
    return Corpus(entries, max_order, tuple(sorted(wanted)) if wanted else ())


# ---------------------------------------------------------------------------
# serialization helpers


def _element(G, g):
    return {"index": g, "label": G.label(g)}


def _subgroup(H):
    G = H.parent
    return {"order": H.order, "elements": list(H.elements()),
            "generators": [G.label(g) for g in H.generators()]}


def witness_to_dict(G, w):
    if w is None:
        return None
    elems = {}
    for name, v in w.elements.items():
        elems[name] = _element(G, v) if isinstance(v, int) and name not in ("n", "m") else v
    return {
        "kind": w.kind.value,
        "elements": elems,
        "subgroups": {name: _subgroup(H) for name, H in w.subgroups.items()},
        "note": w.note,
    }


def _record(entry, reason, witness=None, k=None, extra=None):
    G = entry.group
    rec = {"group": G.name, "order": G.order, "provenance": entry.provenance, "reason": reason}
    if witness is not None:
        rec["witness"] = witness_to_dict(G, witness)
        rec["witness_replays"] = bool(witness.replays(G, k)) if k is not None else None
    if extra:
        rec.update(extra)
    return rec


# ---------------------------------------------------------------------------
# per-group facts (memoized on the group)


def _ntk(G, k, cap, method="sentences"):
    return G.memo(("is_ntk", k, method), lambda: is_ntk(G, k, method, cap))


def _csnk(G, k, cap, method="structural"):
    return G.memo(("is_csnk", k, method), lambda: is_csnk(G, k, method, cap))


def _class(G):
    return nilpotency_class(G.whole())


def find_dichotomy_witness(G, k, cap=None):
    """Least subgroup G0 of class above k with a nontrivial normal nil_k subgroup A.

    Scans G0 by increasing (order, mask) and, inside G0, candidates A that are
    normal closures of one element.  This is complete: any nontrivial normal
    nil_k A contains the normal closure of any of its nonidentity elements,
    which is then nil_k as well.
    """
    def compute():
        for G0 in all_subgroups(G, cap):
            if not class_exceeds(nilpotency_class(G0), k):
                continue
            for g in G0.elements():
                if g == G.identity:
                    continue
                A = normal_closure(G, [g], within=G0)
                if commutators_vanish(G, A.generators(), k):
                    return Witness(WitnessKind.DichotomyWitness, {"g": g}, {"G0": G0, "A": A},
                                   note="G0 is not nil_k and has a nontrivial normal nil_k subgroup")
        return None
    return G.memo(("dichotomy", k), compute)


def find_dichotomy_witness_full(G, k, cap=None):
    """The same search over every subgroup A of G0 (slow reference)."""
    lattice = all_subgroups(G, cap)
    for G0 in lattice:
        if not class_exceeds(nilpotency_class(G0), k):
            continue
        for A in lattice:
            if A.is_trivial() or not A.issubset(G0) or A.order == G0.order:
                continue
            if is_normal(A, G0) and not class_exceeds(nilpotency_class(A), k):
                return Witness(WitnessKind.DichotomyWitness, {}, {"G0": G0, "A": A},
                               note="full lattice scan")
    return None


def _subgroup_sample(G):
    """Cyclic and two-generated subgroups, for groups above the lattice limit."""
    seen = {}
    for H in cyclic_subgroups(G):
        seen.setdefault(H.members, H)
    for a in range(G.order):
        for b in range(a + 1, G.order):
            H = subgroup_generate(G, [a, b])
            seen.setdefault(H.members, H)
    return sorted(seen.values(), key=lambda s: (s.order, s.members))


# ---------------------------------------------------------------------------
# checks; each returns (counterexample records, observations)


def _check_csn_implies_nt(entry, k, p):
    G = entry.group
    out = []
    csn = _csnk(G, k, p["subgroup_cap"])
    csn_sent = _csnk(G, k, p["subgroup_cap"], "sentences")
    nt = _ntk(G, k, p["subgroup_cap"])
    if csn.holds and not nt.holds:
        out.append(_record(entry, "CSN_k but not NT_k", nt.witness, k))
    if csn.holds != csn_sent.holds:
        out.append(_record(entry, "structural CSN_k disagrees with Subgp+Nil+Mal",
                           csn.witness or csn_sent.witness, k,
                           {"structural": csn.holds, "sentences": csn_sent.holds}))
    return out, []


def _check_pairwise_iff_nt(entry, k, p):
    G = entry.group
    verdicts = {m: _ntk(G, k, p["subgroup_cap"], m) for m in NTK_METHODS}
    out = []
    if len({v.holds for v in verdicts.values()}) != 1:
        out.append(_record(entry, "NT_k methods disagree", None, k,
                           {"methods": {m: v.holds for m, v in verdicts.items()}}))
    for m, v in verdicts.items():
        if not v.holds and not v.witness.replays(G, k):
            out.append(_record(entry, f"{m} witness does not replay", v.witness, k))
    if G.order <= p["nil_oracle_limit"]:
        lit = eval_nil(G, k, literal=True)
        short = eval_nil(G, k)
        if lit.holds != short.holds or lit.witness != short.witness:
            out.append(_record(entry, "literal Nil scan disagrees with class shortcut", None, k,
                               {"literal": lit.holds, "shortcut": short.holds}))
    return out, []


def _check_product_indecomposable(entry, k, p):
    G = entry.group
    if len(entry.factors) != 2 or any(F.order == 1 for F in entry.factors):
        return [], []
    if _ntk(G, k, p["subgroup_cap"]).holds and class_exceeds(_class(G), k):
        return [_record(entry, "NT_k direct product of class above k", None, k,
                        {"class": repr(_class(G))})], []
    return [], []


def _check_ck_maximal(entry, k, p):
    G = entry.group
    if G.order == 1 or not _ntk(G, k, p["subgroup_cap"]).holds:
        return [], []
    out = []
    ck = set()
    for x in range(G.order):
        if x == G.identity:
            continue
        S = ck_mask(G, k, x)
        if subgroup_generate(G, iter_bits(S)).members != S:
            out.append(_record(entry, "C^k(x) is not a subgroup in an NT_k group", None, k,
                               {"x": _element(G, x)}))
        ck.add(S)
    maxes = {H.members for H in maximal_nilk_subgroups(G, k, p["subgroup_cap"])}
    if ck != maxes:
        out.append(_record(entry, "C^k sets differ from the maximal nil_k subgroups", None, k,
                           {"ck_only": len(ck - maxes), "maximal_only": len(maxes - ck)}))
    return out, []


def _check_subgroup_closure(entry, k, p):
    G = entry.group
    if not _csnk(G, k, p["subgroup_cap"]).holds:
        return [], []
    if G.order <= p["lattice_limit"]:
        subs = all_subgroups(G, p["subgroup_cap"])
    else:
        subs = _subgroup_sample(G)
    out = []
    for H in subs:
        Hg, _ = H.as_group()
        v = is_csnk(Hg, k, "structural", p["subgroup_cap"])
        if not v.holds:
            out.append(_record(entry, "subgroup of a CSN_k group is not CSN_k", None, k,
                               {"subgroup": _subgroup(H),
                                "subgroup_witness": witness_to_dict(Hg, v.witness)}))
    return out, []


def _check_finite_csn_nilpotent(entry, k, p):
    G = entry.group
    if _csnk(G, k, p["subgroup_cap"]).holds and class_exceeds(_class(G), k):
        return [_record(entry, "finite CSN_k group of class above k", None, k,
                        {"class": repr(_class(G))})], []
    return [], []


def _check_center_trivial(entry, k, p):
    G = entry.group
    if _ntk(G, k, p["subgroup_cap"]).holds and class_exceeds(_class(G), k):
        Z = center(G)
        if not Z.is_trivial():
            return [_record(entry, "NT_k group of class above k with nontrivial center", None, k,
                            {"center_order": Z.order})], []
    return [], []


def _check_dichotomy(entry, k, p):
    G = entry.group
    cap = p["subgroup_cap"]
    nt = _ntk(G, k, cap).holds
    csn = _csnk(G, k, cap).holds
    w = find_dichotomy_witness(G, k, cap)
    out, obs = [], []
    if G.order <= p["fallback_limit"]:
        full = find_dichotomy_witness_full(G, k, cap)
        if (full is None) != (w is None):
            out.append(_record(entry, "normal-closure scan disagrees with full lattice scan",
                               w or full, k))
    if w is not None and not w.replays(G, k):
        out.append(_record(entry, "dichotomy witness does not replay", w, k))
    if w is not None and csn:
        out.append(_record(entry, "CSN_k group has a subgroup G0 with normal nil_k A", w, k))
    if nt and not csn:
        if w is None:
            out.append(_record(entry, "NT_k, not CSN_k, and no subgroup G0 found", None, k))
        else:
            obs.append({"group": G.name, "provenance": entry.provenance,
                        "G0_order": w.subgroups["G0"].order, "A_order": w.subgroups["A"].order,
                        "A_generators": [G.label(g) for g in w.subgroups["A"].generators()]})
    return out, obs


_CHECKS = {
    "csn_implies_nt": _check_csn_implies_nt,
    "pairwise_iff_nt": _check_pairwise_iff_nt,
    "product_indecomposable": _check_product_indecomposable,
    "ck_maximal": _check_ck_maximal,
    "subgroup_closure": _check_subgroup_closure,
    "finite_csn_nilpotent": _check_finite_csn_nilpotent,
    "center_trivial": _check_center_trivial,
    "dichotomy": _check_dichotomy,
}


def _default_params(subgroup_cap=DEFAULT_SUBGROUP_CAP):
    return {
        "subgroup_cap": subgroup_cap,
        "lattice_limit": LATTICE_LIMIT,
        "fallback_limit": FALLBACK_LIMIT,
        "nil_oracle_limit": NIL_ORACLE_LIMIT,
    }


def _run_entry(entry, tasks, params):
    """All requested (proposition, k) checks on one group."""
    results = []
    for prop, k in tasks:
        t0 = time.perf_counter()
        try:
            recs, obs = _CHECKS[prop](entry, k, params)
            skipped = None
        except SearchBudgetExceeded as exc:
            recs, obs, skipped = [], [], {"group": entry.group.name,
                                          "provenance": entry.provenance, "reason": str(exc)}
        results.append((prop, k, recs, obs, skipped, time.perf_counter() - t0))
    return results


def verify_proposition(prop, corpus, k, subgroup_cap=DEFAULT_SUBGROUP_CAP):
    """Check one proposition on every corpus group for one k."""
    return _run([prop], corpus, [k], subgroup_cap, jobs=1)[0]


def run_all(corpus, k_list, props=None, subgroup_cap=DEFAULT_SUBGROUP_CAP, jobs=1):
    """Every proposition for every k, ordered by k then proposition."""
    if not k_list:
        raise ValueError("k_list must not be empty")
    props = list(props or PROPOSITIONS)
    return _run(props, corpus, list(k_list), subgroup_cap, jobs)


def _run(props, corpus, k_list, subgroup_cap, jobs):
    for prop in props:
        if prop not in _CHECKS:
            raise ValueError(f"unknown proposition {prop!r}")
    for k in k_list:
        if k < 1:
            raise ValueError("k must be at least 1")
    if not len(corpus):
        raise ValueError("corpus is empty")
    params = _default_params(subgroup_cap)
    tasks = [(prop, k) for k in k_list for prop in props]
    reports = {(prop, k): PropositionReport(prop, k, parameters=dict(params, k=k,
                                                                      max_order=corpus.max_order))
               for prop, k in tasks}
    entries = list(corpus)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_entry = list(pool.map(_run_entry, entries, [tasks] * len(entries),
                                      [params] * len(entries)))
    else:
        per_entry = [_run_entry(e, tasks, params) for e in entries]
    for results in per_entry:
        for prop, k, recs, obs, skipped, dt in results:
            rep = reports[prop, k]
            rep.elapsed += dt
            if skipped:
                rep.skipped.append(skipped)
            else:
                rep.groups_checked += 1
                rep.counterexamples.extend(recs)
                rep.observations.extend(obs)
    return [reports[key] for key in tasks]


def exit_status(reports):
    if any(r.counterexamples for r in reports):
        return 1
    if any(r.skipped for r in reports):
        return 3
    return 0


__all__ = [
    "Corpus", "CorpusEntry", "PROPOSITIONS", "PropositionReport", "build_default_corpus",
    "exit_status", "find_dichotomy_witness", "find_dichotomy_witness_full", "run_all",
    "verify_proposition", "witness_to_dict", "Subgroup",
]
