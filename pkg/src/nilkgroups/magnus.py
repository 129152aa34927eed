"""Words in the free nilpotent group of rank m and class k.

Equality is decided with the Magnus expansion x_i -> 1 + X_i into
noncommutative power series with integer coefficients, truncated above
degree k.  A word is trivial in the free class-k group exactly when its
image is 1 + (terms of degree > k), i.e. exactly 1 after truncation.

For class 2 there is a second, independent route: collection into the
coordinates x_1^a_1 ... x_m^a_m * prod_{i<j} [x_j, x_i]^c_ji.

Word syntax::

    word := term+
    term := atom ('^' int)?
    atom := 'x' digits | '(' word ')' | '[' word (',' word)+ ']'

``[u, v] = u^-1 v^-1 u v`` and ``[u, v, w] = [[u, v], w]``.  Whitespace is
ignored, so ``x1x2`` and ``x1 x2`` are the same word.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

MAX_RANK = 6
MAX_CLASS = 6
MAX_WORD_LENGTH = 64


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word; letters are (generator 1..m, sign +-1)."""

    letters: tuple = ()

    @classmethod
    def from_letters(cls, letters):
        return cls(tuple(free_reduce(letters)))

    @classmethod
    def gen(cls, i, power=1):
        sign = 1 if power > 0 else -1
        return cls(((i, sign),) * abs(power))

    def __mul__(self, other):
        return FreeWord.from_letters(self.letters + other.letters)

    def inverse(self):
        return FreeWord(tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, n):
        base = self if n >= 0 else self.inverse()
        out = FreeWord()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __len__(self):
        return len(self.letters)

    def rank(self):
        return max((g for g, _ in self.letters), default=0)

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        prev, run = None, 0
        for letter in self.letters + ((None, 0),):
            if letter == prev:
                run += 1
                continue
            if prev is not None:
                g, s = prev
                e = run * s
                parts.append(f"x{g}" if e == 1 else f"x{g}^{e}")
            prev, run = letter, 1
        return " ".join(parts)


def free_reduce(letters):
    out = []
    for g, s in letters:
        if out and out[-1] == (g, -s):
            out.pop()
        else:
            out.append((g, s))
    return out


def commutator(u, v):
    return u.inverse() * v.inverse() * u * v


def left_normed(words):
    c = words[0]
    for w in words[1:]:
        c = commutator(c, w)
    return c


# ---------------------------------------------------------------------------
# parsing


class _WordParser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise ParseError(msg, position=self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self):
        self.skip()
        start = self.pos
        if self.peek() in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if digits in ("", "+", "-"):
            self.pos = start
            self.error("expected an integer")
        return int(digits)

    def word(self):
        terms = []
        while self.peek() in ("x", "(", "["):
            terms.append(self.term())
        if not terms:
            self.error("expected a generator, '(' or '['")
        out = FreeWord()
        for t in terms:
            out = out * t
        return out

    def term(self):
        c = self.peek()
        if c == "x":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                self.error("generator needs an index, e.g. x1")
            idx = int(self.text[start:self.pos])
            if idx < 1:
                self.pos = start
                self.error("generator indices start at 1")
            atom = FreeWord.gen(idx)
        elif c == "(":
            self.pos += 1
            atom = self.word()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        elif c == "[":
            self.pos += 1
            parts = [self.word()]
            while self.peek() == ",":
                self.pos += 1
                parts.append(self.word())
            if len(parts) < 2:
                self.error("a commutator needs at least two entries")
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            atom = left_normed(parts)
        else:
            self.error("expected a term")
        if self.peek() == "^":
            self.pos += 1
            atom = atom ** self.integer()
        return atom


def parse_word(text):
    """Parse a word; the empty string and ``"1"`` are the identity."""
    if text.strip() in ("", "1"):
        return FreeWord()
    p = _WordParser(text)
    w = p.word()
    if p.peek():
        p.error(f"unexpected {p.peek()!r}")
    return w


# ---------------------------------------------------------------------------
# truncated series


class TruncatedSeries:
    """Noncommutative polynomial in X_1..X_m with integer coefficients,
    truncated above total degree k.

    ``coeffs`` maps monomials (tuples of generator indices) to nonzero ints.
    """

    __slots__ = ("m", "k", "coeffs")

    def __init__(self, m, k, coeffs=None):
        self.m = m
        self.k = k
        self.coeffs = {mon: c for mon, c in (coeffs or {}).items() if c and len(mon) <= k}

    @classmethod
    def one(cls, m, k):
        return cls(m, k, {(): 1})

    def _check(self, other):
        if (self.m, self.k) != (other.m, other.k):
            raise ValueError("series from different truncations")

    def __mul__(self, other):
        self._check(other)
        k = self.k
        out = {}
        for a, ca in self.coeffs.items():
            room = k - len(a)
            for b, cb in other.coeffs.items():
                if len(b) <= room:
                    mon = a + b
                    out[mon] = out.get(mon, 0) + ca * cb
        return TruncatedSeries(self.m, k, out)

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for mon, c in other.coeffs.items():
            out[mon] = out.get(mon, 0) + c
        return TruncatedSeries(self.m, self.k, out)

    def __sub__(self, other):
        return self + TruncatedSeries(other.m, other.k, {m: -c for m, c in other.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.m, self.k, self.coeffs) == (other.m, other.k, other.coeffs)

    def __hash__(self):
        return hash((self.m, self.k, frozenset(self.coeffs.items())))

    def is_one(self):
        return self.coeffs == {(): 1}

    def inverse(self):
        """Inverse of a series with constant term 1: sum_j (1 - s)^j."""
        if self.coeffs.get((), 0) != 1:
            raise ValueError("only series with constant term 1 are inverted here")
        one = TruncatedSeries.one(self.m, self.k)
        nil = one - self
        out, term = one, one
        for _ in range(self.k):
            term = term * nil
            out = out + term
        return out

    def monomials(self):
        """Monomials in canonical order: by degree, then lexicographically."""
        return sorted(self.coeffs, key=lambda mon: (len(mon), mon))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for mon in self.monomials():
            c = self.coeffs[mon]
            body = "".join(f"X{i}" for i in mon)
            if not body:
                term = str(abs(c))
            elif abs(c) == 1:
                term = body
            else:
                term = f"{abs(c)}{body}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text

    __repr__ = __str__


def _letter_series(m, k, g, sign):
    if sign > 0:
        return TruncatedSeries(m, k, {(): 1, (g,): 1})
    return TruncatedSeries(m, k, {(g,) * j: (-1) ** j for j in range(k + 1)})


def _check_rank(w, m):
    r = w.rank()
    if r > m:
        raise ValueError(f"word uses x{r} but the rank is {m}")


def magnus_image(w, m, k):
    """Image of ``w`` under x_i -> 1 + X_i, x_i^-1 -> 1 - X_i + X_i^2 - ...,
    truncated above degree k."""
    if isinstance(w, str):
        w = parse_word(w)
    _check_rank(w, m)
    out = TruncatedSeries.one(m, k)
    for g, s in w.letters:
        # multiplying by one letter only touches monomials that end in g
        if s > 0:
            add = {mon + (g,): c for mon, c in out.coeffs.items() if len(mon) < k}
        else:
            add = {}
            for mon, c in out.coeffs.items():
                for j in range(1, k - len(mon) + 1):
                    key = mon + (g,) * j
                    add[key] = add.get(key, 0) + (-1) ** j * c
        coeffs = dict(out.coeffs)
        for mon, c in add.items():
            coeffs[mon] = coeffs.get(mon, 0) + c
        out = TruncatedSeries(m, k, coeffs)
    return out


def is_identity_nmk(w, m, k):
    """``w`` is trivial in the free nilpotent group of rank m and class k."""
    return magnus_image(w, m, k).is_one()


def equal_nmk(u, v, m, k):
    if isinstance(u, str):
        u = parse_word(u)
    if isinstance(v, str):
        v = parse_word(v)
    return is_identity_nmk(u * v.inverse(), m, k)


# ---------------------------------------------------------------------------
# class-2 collection


@dataclass(frozen=True)
class Class2Coordinates:
    """x_1^e_1 ... x_m^e_m * prod_{i<j} [x_j, x_i]^c_ji.

    ``commutator_coords`` is indexed by pairs (j, i), j > i, in the order
    (2,1), (3,1), (3,2), (4,1), ...
    """

    exponents: tuple
    commutator_coords: tuple

    @staticmethod
    def pairs(m):
        return [(j, i) for j in range(2, m + 1) for i in range(1, j)]

    @classmethod
    def identity(cls, m):
        return cls((0,) * m, (0,) * (m * (m - 1) // 2))

    @property
    def m(self):
        return len(self.exponents)

    def as_dict(self):
        return dict(zip(self.pairs(self.m), self.commutator_coords))

    def __mul__(self, other):
        # moving x^b past x^a contributes a_j * b_i to c_ji for j > i
        m = self.m
        exps = tuple(a + b for a, b in zip(self.exponents, other.exponents))
        coords = tuple(
            c + d + self.exponents[j - 1] * other.exponents[i - 1]
            for (j, i), c, d in zip(self.pairs(m), self.commutator_coords,
                                    other.commutator_coords))
        return Class2Coordinates(exps, coords)

    def inverse(self):
        # (x^a c)^-1 = c^-1 x^-a, and collecting x^-a gives c_ji += a_j a_i
        m = self.m
        neg = tuple(-a for a in self.exponents)
        coords = tuple(-c + self.exponents[j - 1] * self.exponents[i - 1]
                       for (j, i), c in zip(self.pairs(m), self.commutator_coords))
        return Class2Coordinates(neg, coords)

    def is_identity(self):
        return not any(self.exponents) and not any(self.commutator_coords)

    def to_word(self):
        w = FreeWord()
        for i, a in enumerate(self.exponents, start=1):
            w = w * FreeWord.gen(i, a)
        for (j, i), c in zip(self.pairs(self.m), self.commutator_coords):
            w = w * commutator(FreeWord.gen(j), FreeWord.gen(i)) ** c
        return w


def collect_class2(w, m):
    """Collect ``w`` letter by letter into class-2 coordinates.

    Adjacent letters x_j^e x_i^f with j > i are swapped using
    yx = xy[y, x] with [y, x] central; [x_j^e, x_i^f] = [x_j, x_i]^(ef) in
    class 2.  Each swap removes one inversion, so the loop terminates.
    """
    if isinstance(w, str):
        w = parse_word(w)
    _check_rank(w, m)
    letters = list(w.letters)
    coords = {pair: 0 for pair in Class2Coordinates.pairs(m)}
    swapped = True
    while swapped:
        swapped = False
        for p in range(len(letters) - 1):
            (j, e), (i, f) = letters[p], letters[p + 1]
            if j > i:
                letters[p], letters[p + 1] = letters[p + 1], letters[p]
                coords[j, i] += e * f
                swapped = True
    exps = [0] * m
    for g, s in letters:
        exps[g - 1] += s
    return Class2Coordinates(tuple(exps),
                             tuple(coords[pair] for pair in Class2Coordinates.pairs(m)))
