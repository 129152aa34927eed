"""Nilpotency-transitivity (NT_k) and conjugate separation (CSN_k) on finite groups.

A subgroup is *nil_k* when it is nilpotent of class at most ``k``.  For
elements ``x, y`` the predicate ``Q(x, y)`` says every left-normed
commutator of length ``k+1`` with entries from ``{x, y}`` is trivial, which
holds exactly when ``<x, y>`` is nil_k.  ``C^k(x)`` is the set of ``y`` with
``Q(x, y)``.

* NT_k: nil_k subgroups with nontrivial intersection generate a nil_k subgroup.
* CSN_k: every maximal nil_k subgroup is malnormal.

Each decider returns a :class:`Verdict`; a failing verdict carries a
:class:`Witness` that :meth:`Witness.replays` re-checks from the definitions.
Witnesses are the lexicographically first failing tuple in element order.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .finite import (
    NOT_NILPOTENT,
    Subgroup,
    class_exceeds,
    commutators_vanish,
    conjugate_mask,
    grow_subgroups,
    is_normal,
    iter_bits,
    left_normed_commutator,
    nilpotency_class,
    subgroup_generate,
)

DEFAULT_SUBGROUP_CAP = 100_000
NTK_METHODS = ("sentences", "ck_characterization", "pairwise_intersections")


class WitnessKind(enum.Enum):
    SubgpFail = "SubgpFail"
    NilFail = "NilFail"
    MalFail = "MalFail"
    IntersectionFail = "IntersectionFail"
    MalnormalFail = "MalnormalFail"
    DichotomyWitness = "DichotomyWitness"


@dataclass(frozen=True)
class Witness:
    kind: WitnessKind
    elements: dict = field(default_factory=dict)
    subgroups: dict = field(default_factory=dict)
    note: str = ""

    def replays(self, G, k=None):
        """Re-evaluate the violated formula on the stored data.

        True means the witness genuinely exhibits the failure (or, for a
        DichotomyWitness, a non-nil_k G0 with a nontrivial normal nil_k A).  A witness
        with missing fields does not replay.  ``k`` may be omitted only for
        a MalnormalFail from :func:`is_malnormal`, where maximality among
        nil_k subgroups is then not checked.
        """
        try:
            return self._replays(G, k)
        except KeyError:
            return False

    def _replays(self, G, k):
        e = self.elements
        s = self.subgroups
        ident = G.identity
        if self.kind is WitnessKind.SubgpFail:
            x, y1, y2 = e["x"], e["y1"], e["y2"]
            return (x != ident and q_predicate(G, k, x, y1) and q_predicate(G, k, x, y2)
                    and not q_predicate(G, k, x, G.mul(G.inv(y1), y2)))
        if self.kind is WitnessKind.NilFail:
            x = e["x"]
            ys = [e[f"y{i}"] for i in range(1, k + 2)]
            return (x != ident and all(q_predicate(G, k, x, y) for y in ys)
                    and left_normed_commutator(G, ys) != ident)
        if self.kind is WitnessKind.MalFail:
            x, y, z = e["x"], e["y"], e["z"]
            return (x != ident and y != ident and q_predicate(G, k, x, y)
                    and q_predicate(G, k, x, G.conj(y, z)) and not q_predicate(G, k, x, z))
        if self.kind is WitnessKind.IntersectionFail:
            H1, H2, g = s["H1"], s["H2"], e["g"]
            both = H1.generators() + H2.generators()
            return (H1 != H2 and g != ident and g in H1 and g in H2
                    and not class_exceeds(nilpotency_class(H1), k)
                    and not class_exceeds(nilpotency_class(H2), k)
                    and not commutators_vanish(G, both, k))
        if self.kind is WitnessKind.MalnormalFail:
            H, x, g = s["H"], e["x"], e["g"]
            return (x not in H and g != ident and g in H
                    and (conjugate_mask(G, H.members, x) >> g) & 1 == 1
                    and (k is None or is_maximal_nilk(H, k)))
        if self.kind is WitnessKind.DichotomyWitness:
            G0, A = s["G0"], s["A"]
            return (A.issubset(G0) and not A.is_trivial() and is_normal(A, G0)
                    and class_exceeds(nilpotency_class(G0), k)
                    and not class_exceeds(nilpotency_class(A), k))
        raise ValueError(f"unknown witness kind {self.kind}")


@dataclass
class Verdict:
    holds: bool
    witness: Witness | None = None
    method: str = ""
    stats: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


# ---------------------------------------------------------------------------
# Q and C^k


def q_predicate(G, k, x, y):
    """True iff all 2^(k+1) left-normed commutators over {x, y} vanish."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return commutators_vanish(G, (x, y), k)


def q_predicate_literal(G, k, x, y):
    """Q(x, y) by evaluating every one of the 2^(k+1) commutators."""
    return all(left_normed_commutator(G, xs) == G.identity
               for xs in itertools.product((x, y), repeat=k + 1))


def _ck_masks(G, k):
    """Per element x, the bitmask of C^k(x).  Memoized on G."""
    def compute():
        n = G.order
        masks = [0] * n
        for x in range(n):
            for y in range(x, n):
                if commutators_vanish(G, (x, y), k):
                    masks[x] |= 1 << y
                    masks[y] |= 1 << x
        return masks
    return G.memo(("ck", k), compute)


def ck_set(G, k, x):
    """C^k_G(x) as a sorted tuple of element indices."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return tuple(iter_bits(_ck_masks(G, k)[x]))


def ck_mask(G, k, x):
    return _ck_masks(G, k)[x]


# ---------------------------------------------------------------------------
# the universal sentences


def eval_subgp(G, k):
    """(x != 1, Q(x,y1), Q(x,y2)) -> Q(x, y1^-1 y2)."""
    masks = _ck_masks(G, k)
    t, inv = G.table, G.inverses
    checks = 0
    for x in range(G.order):
        if x == G.identity:
            continue
        S = masks[x]
        elems = list(iter_bits(S))
        for y1 in elems:
            row = t[inv[y1]]
            for y2 in elems:
                checks += 1
                if not (S >> row[y2]) & 1:
                    w = Witness(WitnessKind.SubgpFail, {"x": x, "y1": y1, "y2": y2},
                                note="C^k(x) is not closed under y1^-1 y2")
                    return Verdict(False, w, "sentence:Subgp", {"evaluations": checks})
    return Verdict(True, None, "sentence:Subgp", {"evaluations": checks})


def _nil_tuple_in(G, k, x, S):
    """Lexicographically first (y1..y_{k+1}) in C^k(x) with nontrivial commutator."""
    elems = list(iter_bits(S))
    ident = G.identity
    comm = G.comm
    count = 0

    # depth-first in lexicographic order; a trivial prefix commutator stays
    # trivial, so its whole subtree is skipped
    def dfs(prefix, c):
        nonlocal count
        if len(prefix) == k + 1:
            count += 1
            return prefix if c != ident else None
        for y in elems:
            nc = comm(c, y)
            if nc == ident:
                count += len(elems) ** (k - len(prefix))
                continue
            found = dfs(prefix + (y,), nc)
            if found:
                return found
        return None

    for y1 in elems:
        if y1 == ident:
            count += len(elems) ** k
            continue
        found = dfs((y1,), y1)
        if found:
            return found, count
    return None, count


def _nil_witness(x, ys):
    elems = {"x": x}
    elems.update({f"y{i + 1}": y for i, y in enumerate(ys)})
    return Witness(WitnessKind.NilFail, elems, note="C^k(x) has class above k")


def eval_nil(G, k, literal=False):
    """(x != 1, Q(x,y_i) for all i) -> [y1, ..., y_{k+1}] = 1.

    The default route tests class(<C^k(x)>) <= k via the lower central
    series; the commutators of a generating set vanish iff the generated
    subgroup is nil_k, so this agrees with the literal (k+1)-tuple scan that
    ``literal=True`` performs.
    """
    masks = _ck_masks(G, k)
    count = 0
    for x in range(G.order):
        if x == G.identity:
            continue
        S = masks[x]
        if literal:
            ys, c = _nil_tuple_in(G, k, x, S)
            count += c
            if ys is not None:
                return Verdict(False, _nil_witness(x, ys), "sentence:Nil:literal",
                               {"evaluations": count})
        else:
            count += 1
            H = subgroup_generate(G, iter_bits(S))
            if class_exceeds(nilpotency_class(H), k):
                ys, _ = _nil_tuple_in(G, k, x, S)
                return Verdict(False, _nil_witness(x, ys), "sentence:Nil",
                               {"evaluations": count})
    return Verdict(True, None, "sentence:Nil:literal" if literal else "sentence:Nil",
                   {"evaluations": count})


def eval_mal(G, k):
    """(x, y != 1, Q(x,y), Q(x, y^z)) -> Q(x, z)."""
    masks = _ck_masks(G, k)
    ident = G.identity
    n = G.order
    checks = 0
    for x in range(n):
        if x == ident:
            continue
        S = masks[x]
        for y in iter_bits(S):
            if y == ident:
                continue
            for z in range(n):
                checks += 1
                if (S >> G.conj(y, z)) & 1 and not (S >> z) & 1:
                    w = Witness(WitnessKind.MalFail, {"x": x, "y": y, "z": z},
                                note="C^k(x) is not malnormal")
                    return Verdict(False, w, "sentence:Mal", {"evaluations": checks})
    return Verdict(True, None, "sentence:Mal", {"evaluations": checks})


# ---------------------------------------------------------------------------
# nil_k subgroups


def is_nilk(H, k):
    return not class_exceeds(nilpotency_class(H), k)


def enumerate_nilk_subgroups(G, k, cap=DEFAULT_SUBGROUP_CAP):
    """Every subgroup of class at most k, sorted by (order, mask)."""
    key = ("nilk_subgroups", k)
    if key in G._cache:
        result = G._cache[key]
        if cap is not None and len(result) > cap:
            from .errors import SearchBudgetExceeded
            raise SearchBudgetExceeded(f"more than {cap} subgroups in {G.name}")
        return result

    def accept(H):
        return commutators_vanish(G, H.generators(), k)

    result = G._cache[key] = grow_subgroups(G, accept=accept, cap=cap)
    return result


def is_maximal_nilk(H, k):
    """H is nil_k and no <H, g> with g outside H is nil_k."""
    G = H.parent
    gens = H.generators()
    if not commutators_vanish(G, gens, k):
        return False
    return all(not commutators_vanish(G, gens + (g,), k)
               for g in range(G.order) if g not in H)


def maximal_nilk_subgroups(G, k, cap=DEFAULT_SUBGROUP_CAP):
    """Maximal elements under inclusion of the nil_k subgroups of G."""
    def compute():
        whole = G.whole()
        if commutators_vanish(G, whole.generators(), k):
            return [whole]
        subs = enumerate_nilk_subgroups(G, k, cap)
        out = []
        for i, H in enumerate(subs):
            m = H.members
            if not any(m & ~K.members == 0 for K in subs[i + 1:] if K.order > H.order):
                out.append(H)
        return out
    return G.memo(("maximal_nilk", k), compute)


def is_malnormal(G, H):
    """H ∩ H^x = 1 for every x outside H."""
    ident_bit = 1 << G.identity
    t = G.table
    checked = H.members
    tested = 0
    for x in range(G.order):
        if (checked >> x) & 1:
            continue
        tested += 1
        common = H.members & conjugate_mask(G, H.members, x) & ~ident_bit
        if common:
            g = (common & -common).bit_length() - 1
            w = Witness(WitnessKind.MalnormalFail, {"x": x, "g": g}, {"H": H},
                        note="H meets its conjugate by x nontrivially")
            return Verdict(False, w, "malnormal", {"cosets": tested})
        # H^(hx) = H^x, so the whole coset Hx is settled
        for h in iter_bits(H.members):
            checked |= 1 << t[h][x]
    return Verdict(True, None, "malnormal", {"cosets": tested})


# ---------------------------------------------------------------------------
# NT_k and CSN_k


def _first_subgp_failure(G, x, S):
    t, inv = G.table, G.inverses
    elems = list(iter_bits(S))
    for y1 in elems:
        for y2 in elems:
            if not (S >> t[inv[y1]][y2]) & 1:
                return y1, y2
    return None


def _ntk_ck(G, k):
    masks = _ck_masks(G, k)
    for x in range(G.order):
        if x == G.identity:
            continue
        S = masks[x]
        H = subgroup_generate(G, iter_bits(S))
        if H.members != S:
            y1, y2 = _first_subgp_failure(G, x, S)
            w = Witness(WitnessKind.SubgpFail, {"x": x, "y1": y1, "y2": y2},
                        note="C^k(x) is not a subgroup")
            return Verdict(False, w, "ck_characterization", {"x_checked": x})
        if class_exceeds(nilpotency_class(H), k):
            ys, _ = _nil_tuple_in(G, k, x, S)
            return Verdict(False, _nil_witness(x, ys), "ck_characterization",
                           {"x_checked": x})
    return Verdict(True, None, "ck_characterization", {"x_checked": G.order - 1})


def _ntk_pairwise(G, k, cap):
    maxes = maximal_nilk_subgroups(G, k, cap)
    ident_bit = 1 << G.identity
    pairs = 0
    for i, H1 in enumerate(maxes):
        for H2 in maxes[i + 1:]:
            pairs += 1
            common = H1.members & H2.members & ~ident_bit
            if common:
                g = (common & -common).bit_length() - 1
                w = Witness(WitnessKind.IntersectionFail, {"g": g}, {"H1": H1, "H2": H2},
                            note="distinct maximal nil_k subgroups intersect nontrivially")
                return Verdict(False, w, "pairwise_intersections",
                               {"maximal": len(maxes), "pairs": pairs})
    return Verdict(True, None, "pairwise_intersections",
                   {"maximal": len(maxes), "pairs": pairs})


def is_ntk(G, k, method="sentences", cap=DEFAULT_SUBGROUP_CAP):
    """Decide NT_k by one of three independent routes.

    ``sentences``: Subgp and Nil both hold.  ``ck_characterization``: each
    C^k(x), x != 1, is a nil_k subgroup.  ``pairwise_intersections``:
    distinct maximal nil_k subgroups meet trivially.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if method == "sentences":
        sub = eval_subgp(G, k)
        if not sub.holds:
            return Verdict(False, sub.witness, "sentences", sub.stats)
        nil = eval_nil(G, k)
        stats = {"evaluations": sub.stats["evaluations"] + nil.stats["evaluations"]}
        return Verdict(nil.holds, nil.witness, "sentences", stats)
    if method == "ck_characterization":
        return _ntk_ck(G, k)
    if method == "pairwise_intersections":
        return _ntk_pairwise(G, k, cap)
    raise ValueError(f"unknown method {method!r}; expected one of {NTK_METHODS}")


def is_csnk(G, k, method="structural", cap=DEFAULT_SUBGROUP_CAP):
    """Every maximal nil_k subgroup is malnormal.

    ``method="sentences"`` evaluates Subgp, Nil and Mal instead.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if method == "sentences":
        total = 0
        for v in (eval_subgp(G, k), eval_nil(G, k), eval_mal(G, k)):
            total += v.stats.get("evaluations", 0)
            if not v.holds:
                return Verdict(False, v.witness, "sentences", {"evaluations": total})
        return Verdict(True, None, "sentences", {"evaluations": total})
    if method != "structural":
        raise ValueError(f"unknown method {method!r}")
    maxes = maximal_nilk_subgroups(G, k, cap)
    for H in maxes:
        v = is_malnormal(G, H)
        if not v.holds:
            return Verdict(False, v.witness, "structural", {"maximal": len(maxes)})
    return Verdict(True, None, "structural", {"maximal": len(maxes)})


# ---------------------------------------------------------------------------
# k = 1 reference checks


def is_ct(G):
    """Centralizers of nonidentity elements are abelian."""
    from .finite import centralizer
    t = G.table
    for x in range(G.order):
        if x == G.identity:
            continue
        C = centralizer(G, x).elements()
        for a in C:
            for b in C:
                if t[a][b] != t[b][a]:
                    return False
    return True


def maximal_abelian_subgroups(G):
    """Maximal abelian subgroups as the maximal cliques of the commuting graph.

    A maximal set of pairwise commuting elements is closed under products and
    inverses, so each maximal clique is a maximal abelian subgroup.
    """
    import networkx as nx

    t = G.table
    graph = nx.Graph()
    graph.add_nodes_from(range(G.order))
    graph.add_edges_from((a, b) for a in range(G.order) for b in range(a + 1, G.order)
                         if t[a][b] == t[b][a])
    out = []
    for clique in nx.find_cliques(graph):
        mask = 0
        for g in clique:
            mask |= 1 << g
        out.append(Subgroup(G, mask))
    return sorted(out, key=lambda s: (s.order, s.members))


def is_csa(G):
    """Every maximal abelian subgroup is malnormal."""
    return all(is_malnormal(G, H).holds for H in maximal_abelian_subgroups(G))


__all__ = [
    "DEFAULT_SUBGROUP_CAP", "NOT_NILPOTENT", "NTK_METHODS", "Verdict", "Witness",
    "WitnessKind", "ck_mask", "ck_set", "enumerate_nilk_subgroups", "eval_mal",
    "eval_nil", "eval_subgp", "is_csa", "is_csnk", "is_ct", "is_malnormal",
    "is_maximal_nilk", "is_nilk", "is_ntk", "maximal_abelian_subgroups",
    "maximal_nilk_subgroups", "q_predicate", "q_predicate_literal", "Subgroup",
]
