import itertools
import random

import pytest
from hypothesis import given, strategies as st

from nilkgroups.errors import ParseError
from nilkgroups.finite import heisenberg_mod_p
from nilkgroups.magnus import (
    Class2Coordinates,
    FreeWord,
    TruncatedSeries,
    collect_class2,
    commutator,
    equal_nmk,
    is_identity_nmk,
    left_normed,
    magnus_image,
    parse_word,
)

SEED = 20240517


def random_word(rnd, m, max_len):
    n = rnd.randint(0, max_len)
    return FreeWord.from_letters([(rnd.randint(1, m), rnd.choice((1, -1))) for _ in range(n)])


def words(m, max_len=10):
    letter = st.tuples(st.integers(1, m), st.sampled_from((1, -1)))
    return st.lists(letter, max_size=max_len).map(FreeWord.from_letters)


# integer Heisenberg matrices: a faithful model of the free class-2 group of rank 2
def heis_int(w):
    a = b = c = 0
    for g, s in w.letters:
        if g == 1:
            a += s
        else:
            c += a * s
            b += s
    return a, b, c


# --- parsing ----------------------------------------------------------------------


def test_parse_examples():
    assert parse_word("x1 x1^-1") == FreeWord()
    assert parse_word("[x1,x2]").letters == ((1, -1), (2, -1), (1, 1), (2, 1))
    assert parse_word("(x1 x2)^2").letters == ((1, 1), (2, 1), (1, 1), (2, 1))
    assert parse_word("") == FreeWord() == parse_word("1")
    assert parse_word("[x1,x2,x3]") == parse_word("[[x1,x2],x3]")
    assert parse_word("x1x2") == parse_word("x1 x2")


@pytest.mark.parametrize("text,pos", [("x1^", 3), ("[x1]", 3), ("y1", 0), ("x0", 1),
                                      ("(x1", 3), ("x1)", 2), ("[x1,x2", 6)])
def test_parse_errors(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_word(text)
    assert exc.value.position == pos


@given(words(3, 12))
def test_format_roundtrip(w):
    assert parse_word(str(w)) == w


@given(words(3, 12))
def test_words_are_freely_reduced(w):
    for (g, s), (h, t) in zip(w.letters, w.letters[1:]):
        assert not (g == h and s == -t)


# --- series ----------------------------------------------------------------------


def test_image_examples():
    assert magnus_image(FreeWord(), 2, 3) == TruncatedSeries.one(2, 3)
    assert magnus_image(parse_word("x1^-1"), 1, 2).coeffs == {(): 1, (1,): -1, (1, 1): 1}
    s = magnus_image(parse_word("[x1,x2]"), 2, 2)
    assert s.coeffs == {(): 1, (1, 2): 1, (2, 1): -1}
    assert str(s) == "1 + X1X2 - X2X1"


def test_image_by_full_expansion():
    # expand the product without intermediate truncation, then truncate
    rnd = random.Random(SEED)
    for _ in range(100):
        m, k = rnd.randint(1, 3), rnd.randint(1, 3)
        w = random_word(rnd, m, 6)
        poly = {(): 1}
        for g, s in w.letters:
            factor = {(): 1, (g,): 1} if s == 1 else {(g,) * i: (-1) ** i for i in range(k + 1)}
            nxt = {}
            for a, ca in poly.items():
                for b, cb in factor.items():
                    nxt[a + b] = nxt.get(a + b, 0) + ca * cb
            poly = nxt
        expected = {mono: c for mono, c in poly.items() if c and len(mono) <= k}
        assert magnus_image(w, m, k).coeffs == expected


def test_series_invariants():
    rnd = random.Random(SEED)
    for _ in range(200):
        m, k = rnd.randint(1, 3), rnd.randint(1, 4)
        s = magnus_image(random_word(rnd, m, 12), m, k)
        assert all(c != 0 for c in s.coeffs.values())
        assert all(len(mono) <= k for mono in s.coeffs)
        assert list(s.monomials()) == sorted(s.monomials(), key=lambda mono: (len(mono), mono))


def test_homomorphism_and_inverse_1000():
    rnd = random.Random(SEED)
    for _ in range(1000):
        m, k = rnd.randint(1, 3), rnd.randint(1, 4)
        u, v = random_word(rnd, m, 10), random_word(rnd, m, 10)
        assert magnus_image(u * v, m, k) == magnus_image(u, m, k) * magnus_image(v, m, k)
        assert (magnus_image(u, m, k) * magnus_image(u.inverse(), m, k)).is_one()
        assert magnus_image(u, m, k).inverse() == magnus_image(u.inverse(), m, k)


def test_identity_examples():
    assert is_identity_nmk(parse_word("(x1 x2)^2 (x1^2 x2^2 [x2,x1])^-1"), 2, 2)
    assert equal_nmk(parse_word("(x1x2)^2"), parse_word("x1^2 x2^2 [x2,x1]"), 2, 2)
    assert not equal_nmk(parse_word("(x1x2)^2"), parse_word("x1^2 x2^2 [x2,x1]"), 2, 3)
    for m in (1, 2, 3):
        for k in (1, 2, 3, 4):
            assert not is_identity_nmk(parse_word("x1"), m, k)


def test_left_normed_weight_filtration():
    # every left-normed commutator of generators with distinct first two
    # entries has weight exactly its length
    for m in (2, 3):
        for k in (1, 2, 3, 4):
            for idx in itertools.product(range(1, m + 1), repeat=k + 1):
                if idx[0] == idx[1]:
                    continue
                c = left_normed([FreeWord.gen(i) for i in idx])
                assert is_identity_nmk(c, m, k), idx
                assert not is_identity_nmk(c, m, k + 1), idx
    for k in (1, 2, 3, 4):
        c = left_normed([FreeWord.gen(i) for i in range(1, k + 2)])
        assert is_identity_nmk(c, k + 1, k) and not is_identity_nmk(c, k + 1, k + 1)


@given(words(3, 10), st.integers(1, 4))
def test_k_filtration(w, k):
    if is_identity_nmk(w, 3, k + 1):
        assert is_identity_nmk(w, 3, k)


# --- class-2 collection oracle -------------------------------------------------------


def test_collect_examples():
    assert collect_class2(parse_word("x1 x2"), 2) == Class2Coordinates((1, 1), (0,))
    assert collect_class2(parse_word("x2 x1"), 2) == Class2Coordinates((1, 1), (1,))
    assert collect_class2(parse_word("(x1 x2)^2"), 2) == Class2Coordinates((2, 2), (1,))
    assert collect_class2(FreeWord(), 3).is_identity()
    assert collect_class2(parse_word("x1^2x2^2[x2,x1]"), 2) == collect_class2(parse_word("(x1x2)^2"), 2)


def test_collect_matches_integer_heisenberg():
    # c counts x1 ... x2 crossings; heis_int tracks the same as a matrix entry
    rnd = random.Random(SEED)
    for _ in range(500):
        w = random_word(rnd, 2, 14)
        c = collect_class2(w, 2)
        a, b, z = heis_int(w)
        assert c.exponents == (a, b)
        # x1^a x2^b [x2,x1]^c has matrix entry a*b - c
        assert a * b - c.commutator_coords[0] == z


def test_collect_arithmetic():
    rnd = random.Random(SEED)
    for _ in range(300):
        m = rnd.randint(2, 4)
        u, v = random_word(rnd, m, 10), random_word(rnd, m, 10)
        cu, cv = collect_class2(u, m), collect_class2(v, m)
        assert cu * cv == collect_class2(u * v, m)
        assert cu.inverse() == collect_class2(u.inverse(), m)
        assert collect_class2(cu.to_word(), m) == cu


def test_oracle_agreement_1000_pairs():
    rnd = random.Random(SEED)
    equal_pairs = 0
    for i in range(1000):
        u = random_word(rnd, 2, 12)
        if i % 3 == 0:
            v = collect_class2(u, 2).to_word()
        elif i % 3 == 1:
            a, b, c = (random_word(rnd, 2, 3) for _ in range(3))
            v = u * commutator(commutator(a, b), c)
        else:
            v = random_word(rnd, 2, 12)
        same_series = is_identity_nmk(u * v.inverse(), 2, 2)
        assert same_series == (collect_class2(u, 2) == collect_class2(v, 2))
        equal_pairs += same_series
    assert equal_pairs >= 600


def test_finite_quotient_is_one_sided():
    H = heisenberg_mod_p(3)
    gens = {1: 1, 2: 3}  # (1,0,0) and (0,1,0)
    rnd = random.Random(SEED)
    seen_nontrivial = 0
    for _ in range(500):
        w = random_word(rnd, 2, 14)
        g = H.identity
        for i, s in w.letters:
            g = H.mul(g, gens[i] if s == 1 else H.inv(gens[i]))
        if g != H.identity:
            seen_nontrivial += 1
            assert not is_identity_nmk(w, 2, 2)
    assert seen_nontrivial > 100
