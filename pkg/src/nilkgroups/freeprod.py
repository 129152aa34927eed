"""Normal forms in free products of groups.

A free product is given by a list of factors.  An element is an
:class:`FPWord`: a tuple of syllables ``(copy, element)`` in which no
element is the identity of its factor and neighbouring syllables come from
different factors.  Such a reduced word is unique, so equality of elements
is equality of tuples.

Two kinds of factor are supported: a finite group (elements are table
indices) and the free nilpotent group of rank m and class k (elements are
:class:`NilpotentElement`, compared through a canonical key).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import ParseError, SearchBudgetExceeded
from .magnus import (
    Class2Coordinates,
    FreeWord,
    collect_class2,
    magnus_image,
    parse_word,
)
from .nilk import Verdict, Witness, WitnessKind

DEFAULT_NODE_CAP = 10 ** 6


# ---------------------------------------------------------------------------
# factors


@dataclass(frozen=True)
class NilpotentElement:
    """An element of a free nilpotent group.

    ``key`` is canonical: class-2 coordinates when k <= 2, the truncated
    Magnus series otherwise.  ``word`` is a representative kept for display.
    """

    key: object
    word: FreeWord = field(compare=False)

    def __str__(self):
        return str(self.word)


class FreeNilpotentFactor:
    """The free nilpotent group of rank ``m`` and class ``k``."""

    torsion_free = True

    def __init__(self, m, k):
        if m < 1 or k < 1:
            raise ValueError("FreeNilpotent needs m >= 1 and k >= 1")
        self.m = m
        self.k = k
        self.identity = self.element(FreeWord())

    def __repr__(self):
        return f"FreeNilpotent({self.m}, {self.k})"

    def _key(self, w):
        if self.k <= 2:
            c = collect_class2(w, self.m)
            if self.k == 1:
                c = Class2Coordinates(c.exponents, (0,) * len(c.commutator_coords))
            return c
        return magnus_image(w, self.m, self.k)

    def element(self, w):
        if isinstance(w, str):
            w = parse_word(w)
        return NilpotentElement(self._key(w), w)

    def gen(self, i, power=1):
        return self.element(FreeWord.gen(i, power))

    def mul(self, a, b):
        w = a.word * b.word
        if self.k <= 2:
            key = a.key * b.key
            if self.k == 1:
                key = Class2Coordinates(key.exponents, (0,) * len(key.commutator_coords))
            return NilpotentElement(key, w)
        return NilpotentElement(a.key * b.key, w)

    def inv(self, a):
        w = a.word.inverse()
        if self.k <= 2:
            key = a.key.inverse()
            if self.k == 1:
                key = Class2Coordinates(key.exponents, (0,) * len(key.commutator_coords))
            return NilpotentElement(key, w)
        return NilpotentElement(a.key.inverse(), w)

    def is_identity(self, a):
        return a.key == self.identity.key

    def magnus_check(self, a):
        """Cross-check: the canonical key and the Magnus image agree on triviality."""
        return self.is_identity(a) == magnus_image(a.word, self.m, self.k).is_one()

    def parse(self, text):
        return self.element(text)

    def format(self, a):
        return str(a.word).replace(" ", "")

    def sample_alphabet(self):
        """x_1, x_1^-1, x_2, x_2^-1 (fewer when m = 1)."""
        out = []
        for i in range(1, min(self.m, 2) + 1):
            out += [self.gen(i), self.gen(i, -1)]
        return out

    def random_element(self, rnd, length=3):
        letters = [(rnd.randint(1, self.m), rnd.choice((1, -1))) for _ in range(length)]
        return self.element(FreeWord.from_letters(letters))


class FiniteFactor:
    """A finite group used as a free factor; elements are table indices."""

    def __init__(self, G):
        self.G = G
        self.identity = G.identity
        self.torsion_free = G.order == 1

    def __repr__(self):
        return f"Finite({self.G.name})"

    def mul(self, a, b):
        return self.G.table[a][b]

    def inv(self, a):
        return self.G.inverses[a]

    def is_identity(self, a):
        return a == self.G.identity

    def parse(self, text):
        text = text.strip()
        if not text.startswith("#"):
            raise ParseError(f"finite factor elements are written #index, got {text!r}")
        try:
            a = int(text[1:])
        except ValueError:
            raise ParseError(f"bad element index {text!r}") from None
        if not 0 <= a < self.G.order:
            raise ParseError(f"element index {a} out of range")
        return a

    def format(self, a):
        return f"#{a}"

    def sample_alphabet(self):
        return [a for a in range(self.G.order) if a != self.G.identity]

    def random_element(self, rnd, length=None):
        return rnd.randrange(self.G.order)


# ---------------------------------------------------------------------------
# words


@dataclass(frozen=True)
class FPWord:
    syllables: tuple = ()

    def __len__(self):
        return len(self.syllables)


class FreeProduct:
    """Free product of the given factors; ``FreeProduct.copies(A, r)`` is ``*^r A``."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("a free product needs at least one factor")
        self.identity = FPWord()

    @classmethod
    def copies(cls, factor, r):
        if r < 1:
            raise ValueError("need at least one copy")
        return cls([factor] * r)

    @property
    def r(self):
        return len(self.factors)

    def __repr__(self):
        return " * ".join(map(repr, self.factors))

    def normalize(self, raw):
        """Merge neighbouring syllables of one factor and drop identities.

        A single left-to-right pass with a stack reaches the fixpoint: after
        a merge cancels, the new top is compared with the next syllable.
        """
        stack = []
        for copy, a in raw:
            if not 0 <= copy < self.r:
                raise ValueError(f"copy index {copy} out of range")
            F = self.factors[copy]
            if F.is_identity(a):
                continue
            if stack and stack[-1][0] == copy:
                merged = F.mul(stack[-1][1], a)
                stack.pop()
                if not F.is_identity(merged):
                    stack.append((copy, merged))
            else:
                stack.append((copy, a))
        return FPWord(tuple(stack))

    def syllable(self, copy, a):
        return self.normalize([(copy, a)])

    def mul(self, *words):
        return self.normalize([s for w in words for s in w.syllables])

    def inverse(self, w):
        return FPWord(tuple((c, self.factors[c].inv(a)) for c, a in reversed(w.syllables)))

    def power(self, w, n):
        base = w if n >= 0 else self.inverse(w)
        out = self.identity
        sq = base
        n = abs(n)
        while n:
            if n & 1:
                out = self.mul(out, sq)
            sq = self.mul(sq, sq)
            n >>= 1
        return out

    def conj(self, w, x):
        """``x^-1 w x``."""
        return self.mul(self.inverse(x), w, x)

    def is_cyclically_reduced(self, w):
        s = w.syllables
        return len(s) <= 1 or s[0][0] != s[-1][0]

    def cyclic_reduce(self, w):
        """Return ``(core, conjugator)`` with ``w = conjugator * core * conjugator^-1``
        and ``core`` cyclically reduced."""
        core = self.normalize(w.syllables)
        conjugator = self.identity
        while not self.is_cyclically_reduced(core):
            first = FPWord((core.syllables[0],))
            core = self.conj(core, first)
            conjugator = self.mul(conjugator, first)
        return core, conjugator

    # text syntax: "0:x1x2 | 1:[x1,x2] | 0:#3"

    def parse(self, text):
        text = text.strip()
        if text in ("", "1"):
            return self.identity
        raw = []
        offset = 0
        for part in text.split("|"):
            copy_text, sep, body = part.partition(":")
            if not sep:
                raise ParseError("syllable must look like copy:element", position=offset)
            try:
                copy = int(copy_text)
            except ValueError:
                raise ParseError(f"bad copy index {copy_text.strip()!r}", position=offset) from None
            if not 0 <= copy < self.r:
                raise ParseError(f"copy index {copy} out of range", position=offset)
            try:
                raw.append((copy, self.factors[copy].parse(body)))
            except ParseError as exc:
                pos = offset + len(copy_text) + 1 + (exc.position or 0)
                raise ParseError(str(exc).split(" (")[0], position=pos) from None
            offset += len(part) + 1
        return self.normalize(raw)

    def format(self, w):
        if not w.syllables:
            return "1"
        return " | ".join(f"{c}:{self.factors[c].format(a)}" for c, a in w.syllables)

    def random_word(self, rnd, max_syllables=4):
        raw = []
        for _ in range(rnd.randint(0, max_syllables)):
            c = rnd.randrange(self.r)
            raw.append((c, self.factors[c].random_element(rnd)))
        return self.normalize(raw)


# ---------------------------------------------------------------------------
# constructions


def embed_remark(m, w, A):
    """Map a word over ``*^m A`` into ``A * A``.

    Copy 0 goes to copy 0 unchanged; a copy-i syllable u (i >= 1) goes to
    a_i^-1 u a_i with u in copy 1 and a_i = x_1^i in copy 0.

    For m = 2 this is an automorphism of A * A.  For m >= 3 it is a
    homomorphism with a nontrivial kernel (see :func:`remark_kernel_element`).
    """
    if m < 2:
        raise ValueError("embed_remark needs m >= 2 copies")
    if not isinstance(A, FreeNilpotentFactor):
        raise ValueError("embed_remark needs a free nilpotent factor")
    raw = []
    for copy, u in w.syllables:
        if not 0 <= copy < m:
            raise ValueError(f"copy index {copy} out of range for m = {m}")
        if copy == 0:
            raw.append((0, u))
        else:
            a = A.gen(1, copy)
            raw += [(0, A.inv(a)), (1, u), (0, a)]
    return FreeProduct.copies(A, 2).normalize(raw)


def embed_conjugates(m, w, A):
    """Map a word over ``*^m A`` into ``A * A`` by copy i -> a_i^-1 C a_i with
    a_i = x_1^i in copy 0 (so a_0 = 1) and C the second copy.

    The images lie in the normal closure of C, which is the free product of
    the conjugates C^b over b in the first factor; distinct a_i therefore
    give an injective map.
    """
    if not isinstance(A, FreeNilpotentFactor):
        raise ValueError("embed_conjugates needs a free nilpotent factor")
    raw = []
    for copy, u in w.syllables:
        if not 0 <= copy < m:
            raise ValueError(f"copy index {copy} out of range for m = {m}")
        a = A.gen(1, copy)
        raw += [(0, A.inv(a)), (1, u), (0, a)]
    return FreeProduct.copies(A, 2).normalize(raw)


def remark_kernel_element(m, A):
    """A nontrivial word of ``*^m A`` (m >= 3) that :func:`embed_remark` kills.

    With u = x_2 and b = a_1^-1 a_2 = x_1 in copy 0, the word
    (1,u)(0,b)(2,u^-1)(0,b^-1) maps to a_1^-1 u a_1 b a_2^-1 u^-1 a_2 b^-1 = 1.
    """
    if m < 3:
        raise ValueError("the m = 2 map is injective")
    u = A.gen(2) if A.m >= 2 else A.gen(1)
    b = A.gen(1)
    P = FreeProduct.copies(A, m)
    return P.normalize([(1, u), (0, b), (2, A.inv(u)), (0, A.inv(b))])


def _alphabet(P, z):
    """Per copy: the factor's sample alphabet plus z's syllables in that copy."""
    alpha = []
    for c, F in enumerate(P.factors):
        elems = list(F.sample_alphabet())
        for zc, a in z.syllables:
            if zc == c and a not in elems:
                elems.append(a)
        alpha.append(elems)
    return alpha


def _reduced_words(P, alpha, radius, node_cap):
    """Reduced words of syllable length <= radius over ``alpha``, by length then
    copy and alphabet position."""
    yield P.identity
    layer = [()]
    nodes = 1
    for _ in range(radius):
        nxt = []
        for raw in layer:
            last = raw[-1][0] if raw else None
            for c in range(P.r):
                if c == last:
                    continue
                for a in alpha[c]:
                    nodes += 1
                    if nodes > node_cap:
                        raise SearchBudgetExceeded(f"more than {node_cap} words enumerated")
                    word = raw + ((c, a),)
                    nxt.append(word)
                    yield FPWord(word)
        layer = nxt


def bounded_malnormality(P, z, radius=3, exp_bound=3, seed=0, node_cap=DEFAULT_NODE_CAP):
    """Search a ball for x outside <z> with x^-1 z^n x = z^m, 1 <= |n|, |m| <= N.

    Candidates x are the reduced words of syllable length at most ``radius``
    whose syllables come from each factor's sample alphabet and the
    syllables of z.  Words equal to z^j with |j| <= N*radius count as inside
    <z>.  ``holds`` means no such x was found in the ball; it is a claim
    about this ball only.  ``seed`` is recorded for reproducibility; the
    enumeration itself is deterministic.
    """
    z = P.normalize(z.syllables)
    if len(z) < 2 or not P.is_cyclically_reduced(z):
        raise ValueError("z must be cyclically reduced with syllable length >= 2")
    N = exp_bound
    powers = {}
    for j in range(-N * radius, N * radius + 1):
        powers.setdefault(P.power(z, j), j)
    targets = {P.power(z, j): j for j in range(-N, N + 1) if j}
    order_n = [s * n for n in range(1, N + 1) for s in (1, -1)]
    alpha = _alphabet(P, z)
    checked = 0
    for x in _reduced_words(P, alpha, radius, node_cap):
        checked += 1
        if x in powers:
            continue
        xi = P.inverse(x)
        for n in order_n:
            y = P.mul(xi, P.power(z, n), x)
            if y in targets:
                w = Witness(WitnessKind.MalnormalFail,
                            {"x": P.format(x), "n": n, "m": targets[y]},
                            note="x^-1 z^n x = z^m with x outside <z>")
                return Verdict(False, w, "bounded_malnormality",
                               _ball_stats(radius, N, seed, checked, alpha, P, node_cap))
    return Verdict(True, None, "bounded_malnormality",
                   _ball_stats(radius, N, seed, checked, alpha, P, node_cap))


def _ball_stats(radius, N, seed, checked, alpha, P, node_cap):
    return {
        "radius": radius,
        "node_cap": node_cap,
        "exp_bound": N,
        "seed": seed,
        "words_checked": checked,
        "alphabet": [[P.factors[c].format(a) for a in alpha[c]] for c in range(P.r)],
    }


def example2_check(A, x, B, y):
    """In A * B with involutions x, y: x^-1 (xy) x = yx = (xy)^-1.

    Hence <xy> meets its conjugate by x, which lies outside <xy>.
    """
    for G, g, nm in ((A, x, "x"), (B, y, "y")):
        if g == G.identity or G.table[g][g] != G.identity:
            raise ValueError(f"{nm} must be an element of order 2 in {G.name}")
    P = FreeProduct([FiniteFactor(A), FiniteFactor(B)])
    X = P.syllable(0, x)
    Y = P.syllable(1, y)
    xy = P.mul(X, Y)
    lhs = P.conj(xy, X)
    yx = P.mul(Y, X)
    rhs = P.inverse(xy)
    holds = lhs == yx == rhs
    stats = {
        "lhs": P.format(lhs),
        "yx": P.format(yx),
        "inverse_xy": P.format(rhs),
        "x_in_H": False,
    }
    if holds:
        return Verdict(True, None, "example2", stats)
    w = Witness(WitnessKind.MalnormalFail, {"x": P.format(X)},
                note="x^-1 (xy) x differs from (xy)^-1")
    return Verdict(False, w, "example2", stats)


def random_words(P, count, seed, max_syllables=4):
    rnd = random.Random(seed)
    return [P.random_word(rnd, max_syllables) for _ in range(count)]


__all__ = [
    "DEFAULT_NODE_CAP", "FPWord", "FiniteFactor", "FreeNilpotentFactor", "FreeProduct",
    "NilpotentElement", "bounded_malnormality", "embed_conjugates", "embed_remark",
    "example2_check", "random_words", "remark_kernel_element",
]
