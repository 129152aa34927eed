import random

import pytest
from hypothesis import given, strategies as st

from nilkgroups.errors import ParseError, SearchBudgetExceeded
from nilkgroups.finite import cyclic, quaternion8, symmetric
from nilkgroups.freeprod import (
    FPWord,
    FiniteFactor,
    FreeNilpotentFactor,
    FreeProduct,
    bounded_malnormality,
    embed_conjugates,
    embed_remark,
    example2_check,
    random_words,
    remark_kernel_element,
)
from nilkgroups.magnus import is_identity_nmk

SEED = 7

A22 = FreeNilpotentFactor(2, 2)
P2 = FreeProduct.copies(A22, 2)
C2 = cyclic(2)
INF_DIHEDRAL = FreeProduct.copies(FiniteFactor(C2), 2)
MIXED = FreeProduct([FiniteFactor(cyclic(4)), FreeNilpotentFactor(2, 3), FiniteFactor(symmetric(3))])


def affine(w):
    """C2 * C2 acting on Z: copy 0 is n -> -n, copy 1 is n -> 1 - n (faithful)."""
    a, b = 1, 0  # n -> a*n + b
    for c, _ in w.syllables:
        # apply the syllable after the current map (left-to-right)
        a, b = -a, (-b if c == 0 else 1 - b)
    return a, b


def fp_words(P, max_syllables=5):
    return st.integers(0, 2**32 - 1).map(lambda s: P.random_word(random.Random(s), max_syllables))


def check_invariants(P, w):
    for (c, a), (d, _) in zip(w.syllables, w.syllables[1:]):
        assert c != d
    for c, a in w.syllables:
        assert not P.factors[c].is_identity(a)


# --- normal form -------------------------------------------------------------------


def test_normalize_examples():
    u = A22.parse("x1 x2")
    assert P2.normalize([(0, u), (0, A22.inv(u))]) == P2.identity
    v = A22.parse("x2^-1")
    w = P2.normalize([(0, u), (1, A22.identity), (0, v)])
    assert len(w) == 1 and P2.format(w) == "0:x1"
    assert P2.normalize([(0, u), (1, A22.identity), (0, A22.inv(u))]) == P2.identity
    x = INF_DIHEDRAL.parse("0:#1 | 1:#1 | 0:#1 | 1:#1")
    assert len(x) == 4


def test_mul_examples():
    rnd = random.Random(SEED)
    for _ in range(50):
        w = P2.random_word(rnd)
        assert P2.mul(w, P2.inverse(w)) == P2.identity
    x, y = INF_DIHEDRAL.parse("0:#1"), INF_DIHEDRAL.parse("1:#1")
    xy = INF_DIHEDRAL.mul(x, y)
    assert INF_DIHEDRAL.mul(INF_DIHEDRAL.inverse(x), xy, x) == INF_DIHEDRAL.mul(y, x)
    assert INF_DIHEDRAL.mul(y, x) == INF_DIHEDRAL.inverse(xy)
    z = P2.parse("0:x1 | 1:x2")
    assert len(P2.power(z, 3)) == 6


def test_parse_format_roundtrip():
    for text in ["0:x1 x2 | 1:x2^-1", "1:[x1,x2] | 0:x1^3", ""]:
        w = P2.parse(text)
        assert P2.parse(P2.format(w)) == w
    w = MIXED.parse("0:#1 | 1:[x1,x2,x1] | 2:#3")
    assert MIXED.parse(MIXED.format(w)) == w


@pytest.mark.parametrize("text", ["0x1", "2:x1", "0:#9", "0:x1 || 1:x1", "a:x1", "0:#x"])
def test_parse_errors(text):
    P = FreeProduct([FreeNilpotentFactor(2, 2), FiniteFactor(cyclic(3))])
    with pytest.raises(ParseError):
        P.parse(text.replace("0:#", "1:#"))


def test_normal_form_invariants_and_idempotence():
    rnd = random.Random(SEED)
    for P in (P2, INF_DIHEDRAL, MIXED):
        for _ in range(200):
            raw = []
            for _ in range(rnd.randint(0, 8)):
                c = rnd.randrange(P.r)
                raw.append((c, P.factors[c].random_element(rnd)))
            w = P.normalize(raw)
            check_invariants(P, w)
            assert P.normalize(w.syllables) == w


def test_group_axioms_10k_triples():
    rnd = random.Random(SEED)
    for i in range(10_000):
        P = (P2, INF_DIHEDRAL, MIXED)[i % 3]
        a, b, c = (P.random_word(rnd) for _ in range(3))
        assert P.mul(P.mul(a, b), c) == P.mul(a, P.mul(b, c))
        ai = P.inverse(a)
        assert P.mul(a, ai) == P.identity == P.mul(ai, a)
        assert P.mul(P.mul(a, b), P.inverse(b)) == a
        assert len(P.mul(a, b)) <= len(a) + len(b)


def test_infinite_dihedral_model():
    rnd = random.Random(SEED)
    for _ in range(2000):
        a, b = INF_DIHEDRAL.random_word(rnd, 6), INF_DIHEDRAL.random_word(rnd, 6)
        prod = INF_DIHEDRAL.mul(a, b)
        fa, fb = affine(a), affine(b)
        assert affine(prod) == (fa[0] * fb[0], fa[1] * fb[0] + fb[1])
        assert (a == b) == (fa == fb)


def test_nilpotent_syllables_match_magnus():
    # merged syllable keys agree with the series-based equality test
    rnd = random.Random(SEED)
    for k in (1, 2, 3):
        F = FreeNilpotentFactor(2, k)
        for _ in range(300):
            u, v = F.random_element(rnd), F.random_element(rnd)
            same = F.mul(u, F.inv(v)) == F.identity
            assert same == is_identity_nmk(u.word * v.word.inverse(), 2, k)
            assert F.magnus_check(u)


@given(fp_words(P2), fp_words(P2))
def test_cyclic_reduce_roundtrip(u, v):
    w = P2.mul(u, v, P2.inverse(u))
    core, conj = P2.cyclic_reduce(w)
    assert P2.is_cyclically_reduced(core)
    assert P2.mul(conj, core, P2.inverse(conj)) == w


def test_cyclic_reduce_examples():
    w = P2.parse("0:x1 | 1:x2")
    assert P2.cyclic_reduce(w) == (w, P2.identity)
    core, conj = P2.cyclic_reduce(P2.parse("0:x1 | 1:x2 | 0:x1^-1"))
    assert P2.format(core) == "1:x2" and P2.format(conj) == "0:x1"
    u, v = P2.parse("0:x2 | 1:x1"), P2.parse("0:x1 | 1:x2")
    core, conj = P2.cyclic_reduce(P2.mul(u, v, P2.inverse(u)))
    assert P2.mul(conj, core, P2.inverse(conj)) == P2.mul(u, v, P2.inverse(u))
    assert len(core) == 2


@given(fp_words(P2), st.integers(-4, 4))
def test_power_length_has_no_torsion(w, n):
    core, _ = P2.cyclic_reduce(w)
    if len(core) >= 2:
        assert len(P2.power(core, n)) == abs(n) * len(core)
        repeated = [core] * n if n >= 0 else [P2.inverse(core)] * -n
        assert P2.power(core, n) == P2.mul(P2.identity, *repeated)


# --- the involution example ------------------------------------------------------------


def test_involutions_invert_their_product():
    v = example2_check(C2, 1, C2, 1)
    assert v.holds and v.witness is None
    assert v.stats["lhs"] == v.stats["yx"] == v.stats["inverse_xy"]
    v = example2_check(cyclic(4), 2, C2, 1)
    assert v.holds
    assert example2_check(quaternion8(), 1, symmetric(3), 1).holds
    with pytest.raises(ValueError):
        example2_check(cyclic(3), 1, C2, 1)
    with pytest.raises(ValueError):
        example2_check(cyclic(4), 1, C2, 1)


# --- bounded malnormality ----------------------------------------------------------------


def test_bounded_malnormality_free_nilpotent():
    z = P2.parse("0:x1 | 1:x1")
    v = bounded_malnormality(P2, z, radius=3, exp_bound=3, seed=0)
    assert v.holds and v.witness is None
    assert v.stats["radius"] == 3 and v.stats["exp_bound"] == 3 and v.stats["seed"] == 0
    assert v.stats["words_checked"] > 100
    assert v.stats["alphabet"][0] == ["x1", "x1^-1", "x2", "x2^-1"]


def test_bounded_malnormality_involutions_fail():
    z = INF_DIHEDRAL.parse("0:#1 | 1:#1")
    v = bounded_malnormality(INF_DIHEDRAL, z, radius=3, exp_bound=3)
    assert not v.holds
    assert v.witness.elements == {"x": "0:#1", "n": 1, "m": -1}
    x = INF_DIHEDRAL.parse(v.witness.elements["x"])
    lhs = INF_DIHEDRAL.mul(INF_DIHEDRAL.inverse(x), z, x)
    assert lhs == INF_DIHEDRAL.power(z, -1)


def test_bounded_malnormality_rejects_bad_z():
    with pytest.raises(ValueError):
        bounded_malnormality(P2, P2.parse("0:x1 | 1:x1 | 0:x1^-1"))
    with pytest.raises(ValueError):
        bounded_malnormality(P2, P2.parse("0:x1"))


def test_bounded_malnormality_budget():
    with pytest.raises(SearchBudgetExceeded):
        bounded_malnormality(P2, P2.parse("0:x1 | 1:x1"), radius=3, node_cap=50)


def test_bounded_malnormality_detects_planted_conjugate():
    # with a third involution factor, copy 0 still inverts z = xy
    P = FreeProduct.copies(FiniteFactor(C2), 3)
    z = P.parse("0:#1 | 1:#1")
    assert not bounded_malnormality(P, z, radius=2).holds


# --- the embedding into A * A -----------------------------------------------------------


def test_embed_examples():
    P = FreeProduct.copies(A22, 2)
    assert embed_remark(2, P.identity, A22) == P2.identity
    u = A22.parse("x2")
    img = embed_remark(2, P.normalize([(1, u)]), A22)
    assert P2.format(img) == "0:x1^-1 | 1:x2 | 0:x1"
    P3 = FreeProduct.copies(A22, 3)
    w = P3.parse("1:x1 | 2:x2")
    assert P2.format(embed_remark(3, w, A22)) == "0:x1^-1 | 1:x1 | 0:x1^-1 | 1:x2 | 0:x1^2"
    # copy 0 passes through unchanged
    assert embed_remark(3, P3.parse("0:[x1,x2]"), A22) == P2.parse("0:[x1,x2]")


@pytest.mark.parametrize("m,embed", [(2, embed_remark), (3, embed_conjugates), (4, embed_conjugates)])
def test_embed_homomorphism_and_nontrivial(m, embed):
    P = FreeProduct.copies(A22, m)
    rnd = random.Random(SEED)
    for _ in range(1000):
        a, b = P.random_word(rnd), P.random_word(rnd)
        assert embed(m, P.mul(a, b), A22) == P2.mul(embed(m, a, A22), embed(m, b, A22))
        if a != P.identity:
            assert embed(m, a, A22) != P2.identity


def test_literal_embedding_not_injective_from_three_copies():
    for m in (3, 4):
        w = remark_kernel_element(m, A22)
        assert w != FreeProduct.copies(A22, m).identity
        assert embed_remark(m, w, A22) == P2.identity
        assert embed_conjugates(m, w, A22) != P2.identity
    with pytest.raises(ValueError):
        remark_kernel_element(2, A22)


def test_random_words_deterministic():
    assert random_words(P2, 20, seed=3) == random_words(P2, 20, seed=3)
    assert random_words(P2, 20, seed=3) != random_words(P2, 20, seed=4)


def test_fpword_structural_equality():
    w = P2.parse("0:x1 x2 x1^-1 x2^-1")
    assert w == P2.parse("0:[x1^-1,x2^-1]")
    assert P2.parse("0:x2 x1") == P2.parse("0:x1 x2 [x2,x1]")
    assert isinstance(w, FPWord) and hash(w) == hash(P2.parse("0:x1 x2 x1^-1 x2^-1"))
