"""Finite groups given by a full multiplication table.

Elements are the integers ``0..order-1``.  Subgroups are bitmasks over the
parent's elements (bit ``g`` set iff ``g`` is a member), stored as Python
ints, so inclusion, intersection and equality are single integer operations.

Permutations compose left to right: ``x*y`` means apply ``x`` first, then
``y``.  With this convention ``[(1 2), (1 3)] = (1 3 2)`` in S_3.
"""

from __future__ import annotations

import functools
import random
import re
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import BadParams, NotAGroup, OrderLimitExceeded, ParseError

DEFAULT_ORDER_CAP = 5000
ASSOCIATIVITY_EXHAUSTIVE_LIMIT = 256
ASSOCIATIVITY_SAMPLES = 10_000
ASSOCIATIVITY_SEED = 20240101


class _NotNilpotent:
    """Sentinel class value for groups whose lower central series stalls."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NotNilpotent"

    def __reduce__(self):
        return (_NotNilpotent, ())


NOT_NILPOTENT = _NotNilpotent()


def iter_bits(mask):
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FiniteGroup:
    """A finite group as a Cayley table.

    Treat instances as immutable.  Derived data (subgroup lattices, C^k
    tables, ...) is memoized in ``_cache`` by the functions that compute it.
    """

    def __init__(self, table, identity, inverses, name="G", labels=None):
        self.table = table
        self.order = len(table)
        self.identity = identity
        self.inverses = inverses
        self.name = name
        self.labels = labels
        self.provenance = None
        self.permutations = None
        self._cache = {}

    def __repr__(self):
        return f"<FiniteGroup {self.name} of order {self.order}>"

    def __len__(self):
        return self.order

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverses[a]

    def conj(self, a, x):
        """``a^x = x^-1 a x``."""
        t = self.table
        return t[t[self.inverses[x]][a]][x]

    def comm(self, a, b):
        """``[a, b] = a^-1 b^-1 a b``."""
        t, inv = self.table, self.inverses
        return t[t[t[inv[a]][inv[b]]][a]][b]

    def power(self, a, n):
        if n < 0:
            a, n = self.inverses[a], -n
        r = self.identity
        for _ in range(n):
            r = self.table[r][a]
        return r

    def element_order(self, a):
        n, r = 1, a
        while r != self.identity:
            r = self.table[r][a]
            n += 1
        return n

    def label(self, a):
        if self.labels is not None:
            return self.labels[a]
        return str(a)

    @property
    def all_mask(self):
        return (1 << self.order) - 1

    def whole(self):
        return Subgroup(self, self.all_mask)

    def trivial(self):
        return Subgroup(self, 1 << self.identity, ())

    def memo(self, key, compute):
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = compute()
            return value


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent`` stored as a membership bitmask.

    Two subgroups of the same parent are equal iff their masks are equal.
    ``gens`` is an optional small generating set; it does not take part in
    comparisons.
    """

    parent: FiniteGroup
    members: int
    gens: tuple | None = field(default=None, compare=False, repr=False)

    def __contains__(self, g):
        return (self.members >> g) & 1 == 1

    def __len__(self):
        return self.members.bit_count()

    @property
    def order(self):
        return self.members.bit_count()

    def elements(self):
        return tuple(iter_bits(self.members))

    def is_trivial(self):
        return self.members == 1 << self.parent.identity

    def issubset(self, other):
        return self.members & ~other.members == 0

    def generators(self):
        if self.gens is not None:
            return self.gens
        gens, _ = _reduce_gens(self.parent, iter_bits(self.members))
        object.__setattr__(self, "gens", tuple(gens))
        return self.gens

    def as_group(self, name=None):
        """The subgroup as a standalone FiniteGroup, plus the element map.

        Returns ``(H, embed)`` where ``embed[i]`` is the parent index of the
        ``i``-th element of ``H``; elements keep their parent order.
        """
        G = self.parent
        elems = self.elements()
        pos = {g: i for i, g in enumerate(elems)}
        t = G.table
        table = [[pos[t[a][b]] for b in elems] for a in elems]
        inverses = [pos[G.inverses[a]] for a in elems]
        labels = [G.label(a) for a in elems] if G.labels is not None else None
        H = FiniteGroup(table, pos[G.identity], inverses,
                        name=name or f"subgroup of {G.name}", labels=labels)
        return H, elems

    def __repr__(self):
        return f"Subgroup(order={self.order}, members={self.members:#x})"


# ---------------------------------------------------------------------------
# construction


def _check_order(n, order_cap):
    if order_cap is not None and n > order_cap:
        raise OrderLimitExceeded(f"order {n} exceeds cap {order_cap}")


def _verify_table(T, identity):
    n = len(T)
    for a in range(n):
        if T[identity, a] != a or T[a, identity] != a:
            raise NotAGroup(f"{identity} is not a two-sided identity")
    rng = np.arange(n)
    for a in range(n):
        if not np.array_equal(np.sort(T[a]), rng):
            raise NotAGroup(f"row {a} is not a permutation")
        if not np.array_equal(np.sort(T[:, a]), rng):
            raise NotAGroup(f"column {a} is not a permutation")
    if n <= ASSOCIATIVITY_EXHAUSTIVE_LIMIT:
        for a in range(n):
            # (a b) c  versus  a (b c), for all b, c at once
            lhs = T[T[a]]
            rhs = T[a][T]
            if not np.array_equal(lhs, rhs):
                b, c = map(int, np.argwhere(lhs != rhs)[0])
                raise NotAGroup(f"associativity fails at ({a}, {b}, {c})")
    else:
        rnd = random.Random(ASSOCIATIVITY_SEED)
        for _ in range(ASSOCIATIVITY_SAMPLES):
            a, b, c = rnd.randrange(n), rnd.randrange(n), rnd.randrange(n)
            if T[T[a, b], c] != T[a, T[b, c]]:
                raise NotAGroup(f"associativity fails at ({a}, {b}, {c})")


def from_cayley_table(table, name="G", *, labels=None, order_cap=DEFAULT_ORDER_CAP):
    """Validate a multiplication table and wrap it as a FiniteGroup.

    ``table[a][b]`` is the index of ``a*b``.  Raises NotAGroup when there
    is no identity, an element lacks an inverse, or the product is not
    associative.
    """
    n = len(table)
    if n == 0:
        raise NotAGroup("empty table")
    _check_order(n, order_cap)
    if any(len(row) != n for row in table):
        raise NotAGroup("table is not square")
    T = np.asarray(table, dtype=np.int64)
    if T.min() < 0 or T.max() >= n:
        raise NotAGroup("entry out of range")
    identity = None
    for e in range(n):
        if np.array_equal(T[e], np.arange(n)) and np.array_equal(T[:, e], np.arange(n)):
            identity = e
            break
    if identity is None:
        raise NotAGroup("no identity element")
    inverses = []
    for a in range(n):
        hits = np.flatnonzero(T[a] == identity)
        if len(hits) != 1 or T[hits[0], a] != identity:
            raise NotAGroup(f"element {a} has no two-sided inverse")
        inverses.append(int(hits[0]))
    _verify_table(T, identity)
    rows = [list(map(int, row)) for row in T]
    return FiniteGroup(rows, identity, inverses, name=name, labels=labels)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text, degree):
    """Parse cycle notation such as ``"(1 2 3)(4 5)"`` into a 0-based image tuple."""
    perm = list(range(degree))
    stripped = text.strip()
    if stripped in ("", "()"):
        return tuple(perm)
    pos = 0
    seen = set()
    for m in _CYCLE_RE.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise ParseError("unexpected text outside a cycle", position=pos)
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        try:
            points = [int(p) for p in body]
        except ValueError:
            raise ParseError(f"non-integer point in cycle {m.group(0)!r}", position=m.start())
        for p in points:
            if not 1 <= p <= degree:
                raise ParseError(f"point {p} outside 1..{degree}", position=m.start())
            if p in seen:
                raise ParseError(f"point {p} repeated", position=m.start())
            seen.add(p)
        for i, p in enumerate(points):
            perm[p - 1] = points[(i + 1) % len(points)] - 1
    if stripped[pos:].strip():
        raise ParseError("unexpected text after last cycle", position=pos)
    return tuple(perm)


def format_permutation(perm):
    """Cycle notation of a 0-based image tuple, ``"()"`` for the identity."""
    seen = set()
    cycles = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        p = perm[start]
        while p != start:
            cyc.append(p)
            seen.add(p)
            p = perm[p]
        cycles.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(cycles) or "()"


def from_permutation_generators(degree, generators, name=None, *, order_cap=DEFAULT_ORDER_CAP):
    """Close permutation generators under composition.

    Elements are indexed in breadth-first discovery order from the identity,
    multiplying on the right by each generator in turn.
    """
    if degree < 1:
        raise BadParams("degree must be positive")
    gens = [parse_permutation(g, degree) if isinstance(g, str) else tuple(g)
            for g in generators]
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            p = tuple(g[x[j]] for j in range(degree))
            if p not in index:
                index[p] = len(elems)
                elems.append(p)
                _check_order(len(elems), order_cap)
        i += 1
    table = [[index[tuple(y[x[j]] for j in range(degree))] for y in elems] for x in elems]
    inverses = [table[a].index(0) for a in range(len(elems))]
    labels = [format_permutation(p) for p in elems]
    if name is None:
        name = "<" + ", ".join(format_permutation(g) for g in gens) + ">"
    G = FiniteGroup(table, 0, inverses, name=name, labels=labels)
    G.permutations = elems
    return G


# ---------------------------------------------------------------------------
# families


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def _from_rule(elements, mul, name, labels, order_cap):
    n = len(elements)
    _check_order(n, order_cap)
    pos = {e: i for i, e in enumerate(elements)}
    table = [[pos[mul(a, b)] for b in elements] for a in elements]
    return from_cayley_table(table, name=name, labels=labels, order_cap=order_cap)


def _family(fn):
    """Record ``family(params)`` as the provenance of the returned group."""
    @functools.wraps(fn)
    def build(*params, order_cap=DEFAULT_ORDER_CAP):
        G = fn(*params, order_cap=order_cap)
        G.provenance = f"{fn.__name__}({','.join(_param_text(q) for q in params)})"
        return G
    return build


def _param_text(q):
    if isinstance(q, FiniteGroup):
        return q.provenance or q.name
    return str(q)


@_family
def cyclic(n, order_cap=DEFAULT_ORDER_CAP):
    """C_n; index i is g^i."""
    if n < 1:
        raise BadParams("cyclic(n) needs n >= 1")
    elems = list(range(n))
    labels = ["1" if i == 0 else ("g" if i == 1 else f"g^{i}") for i in elems]
    return _from_rule(elems, lambda a, b: (a + b) % n, f"C{n}", labels, order_cap)


@_family
def dihedral(n, order_cap=DEFAULT_ORDER_CAP):
    """Dihedral group of order 2n; index a + n*b is r^a s^b.

    So index 1 is the rotation r and index n is the reflection s.
    """
    if n < 1:
        raise BadParams("dihedral(n) needs n >= 1")
    elems = [(a, b) for b in range(2) for a in range(n)]

    def mul(x, y):
        (a, b), (c, d) = x, y
        return ((a + (-c if b else c)) % n, (b + d) % 2)

    def lab(a, b):
        parts = []
        if a:
            parts.append("r" if a == 1 else f"r^{a}")
        if b:
            parts.append("s")
        return " ".join(parts) or "1"

    return _from_rule(elems, mul, f"D{n}", [lab(a, b) for a, b in elems], order_cap)


@_family
def symmetric(n, order_cap=DEFAULT_ORDER_CAP):
    """S_n from (1 2) and (1 2 ... n), breadth-first element order."""
    if not 1 <= n <= 6:
        raise BadParams("symmetric(n) supports 1 <= n <= 6")
    _check_order(factorial(n), order_cap)
    if n == 1:
        gens = []
    else:
        gens = ["(1 2)"] + (["(" + " ".join(map(str, range(1, n + 1))) + ")"] if n > 2 else [])
    return from_permutation_generators(n, gens, name=f"S{n}", order_cap=order_cap)


@_family
def alternating(n, order_cap=DEFAULT_ORDER_CAP):
    """A_n from the 3-cycles (i i+1 i+2), breadth-first element order."""
    if not 1 <= n <= 6:
        raise BadParams("alternating(n) supports 1 <= n <= 6")
    _check_order(max(1, factorial(n) // 2), order_cap)
    gens = [f"({i} {i + 1} {i + 2})" for i in range(1, n - 1)]
    return from_permutation_generators(n, gens, name=f"A{n}", order_cap=order_cap)


_Q8_NAMES = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]


@_family
def quaternion8(order_cap=DEFAULT_ORDER_CAP):
    """Q8 with element order 1, -1, i, -i, j, -j, k, -k."""
    # unit quaternions as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    elems = [(s, a) for a in range(4) for s in (1, -1)]
    unit = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def mul(x, y):
        s, a = unit[x[1], y[1]]
        return (x[0] * y[0] * s, a)

    return _from_rule(elems, mul, "Q8", _Q8_NAMES, order_cap)


@_family
def heisenberg_mod_p(p, order_cap=DEFAULT_ORDER_CAP):
    """Upper unitriangular 3x3 matrices over Z/p.

    (a, b, c) is [[1, a, c], [0, 1, b], [0, 0, 1]] at index a + p*b + p^2*c.
    """
    if not (_is_prime(p) and p <= 7):
        raise BadParams("heisenberg_mod_p(p) needs a prime p <= 7")
    elems = [(a, b, c) for c in range(p) for b in range(p) for a in range(p)]

    def mul(x, y):
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

    labels = [f"({a},{b},{c})" for a, b, c in elems]
    return _from_rule(elems, mul, f"Heis({p})", labels, order_cap)


@_family
def direct_product(G, H, order_cap=DEFAULT_ORDER_CAP):
    """G x H; index g*|H| + h."""
    n, m = G.order, H.order
    _check_order(n * m, order_cap)
    tg, th = G.table, H.table
    table = [[tg[a // m][b // m] * m + th[a % m][b % m] for b in range(n * m)]
             for a in range(n * m)]
    labels = [f"({G.label(a // m)}, {H.label(a % m)})" for a in range(n * m)]
    return from_cayley_table(table, name=f"{G.name}x{H.name}", labels=labels,
                             order_cap=order_cap)


@_family
def semidirect_z_p_on_z_q(p, q, order_cap=DEFAULT_ORDER_CAP):
    """Z_q semidirect Z_p, the generator of Z_p acting by an automorphism of order p.

    (a, b) at index a + q*b; (a, b)(c, d) = (a + u^b c, b + d) where u is the
    least unit of multiplicative order exactly p modulo q.
    """
    if p < 2 or q < 2 or (q - 1) % p:
        raise BadParams("semidirect_z_p_on_z_q needs q = 1 mod p")
    u = next((u for u in range(2, q) if pow(u, p, q) == 1
              and all(pow(u, d, q) != 1 for d in range(1, p))), None)
    if u is None:
        raise BadParams(f"no unit of order {p} modulo {q}")
    elems = [(a, b) for b in range(p) for a in range(q)]
    upow = [pow(u, b, q) for b in range(p)]

    def mul(x, y):
        return ((x[0] + upow[x[1]] * y[0]) % q, (x[1] + y[1]) % p)

    labels = [f"({a},{b})" for a, b in elems]
    return _from_rule(elems, mul, f"C{q}:C{p}", labels, order_cap)


FAMILIES = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "symmetric": symmetric,
    "alternating": alternating,
    "quaternion8": quaternion8,
    "heisenberg_mod_p": heisenberg_mod_p,
    "direct_product": direct_product,
    "semidirect_z_p_on_z_q": semidirect_z_p_on_z_q,
}


def build_family(family, *params, order_cap=DEFAULT_ORDER_CAP):
    """Construct a named group, e.g. ``build_family("dihedral", 5)``.

    ``direct_product`` takes two FiniteGroups.  The result's ``provenance``
    attribute is an expression that :func:`parse_family_expr` rebuilds.
    """
    try:
        ctor = FAMILIES[family]
    except KeyError:
        raise BadParams(f"unknown family {family!r}") from None
    if family == "direct_product":
        if len(params) != 2 or not all(isinstance(p, FiniteGroup) for p in params):
            raise BadParams("direct_product takes two groups")
    elif not all(isinstance(p, int) for p in params):
        raise BadParams(f"{family} takes integer parameters")
    try:
        G = ctor(*params, order_cap=order_cap)
    except TypeError as exc:
        raise BadParams(f"bad parameters for {family}: {exc}") from None
    return G


_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>\d+)|(?P<sym>[(),:]))")


def parse_family_expr(text, order_cap=DEFAULT_ORDER_CAP):
    """Build a group from ``dihedral(5)``, ``dihedral:5``, ``quaternion8`` or
    ``direct_product(symmetric(3),cyclic(2))``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", position=pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    i = 0

    def expect(kind, value=None):
        nonlocal i
        tk = tokens[i]
        if tk[0] != kind or (value is not None and tk[1] != value):
            raise ParseError(f"expected {value or kind}", position=tk[2])
        i += 1
        return tk

    def expr():
        nonlocal i
        name = expect("name")[1]
        args = []
        if tokens[i][:2] == ("sym", ":"):
            i += 1
            args.append(int(expect("int")[1]))
            while tokens[i][:2] == ("sym", ","):
                i += 1
                args.append(int(expect("int")[1]))
        elif tokens[i][:2] == ("sym", "("):
            i += 1
            if tokens[i][:2] != ("sym", ")"):
                args.append(arg())
                while tokens[i][:2] == ("sym", ","):
                    i += 1
                    args.append(arg())
            expect("sym", ")")
        return build_family(name, *args, order_cap=order_cap)

    def arg():
        if tokens[i][0] == "int":
            return int(expect("int")[1])
        return expr()

    G = expr()
    expect("end")
    return G


# ---------------------------------------------------------------------------
# subgroups and commutators


def left_normed_commutator(G, xs):
    """[x1, ..., xn] = [[...[x1, x2], ...], xn]; a single entry is returned as is."""
    if not xs:
        raise ValueError("need at least one element")
    it = iter(xs)
    c = next(it)
    for x in it:
        c = G.comm(c, x)
    return c


def _closure(G, mask, gens):
    """Smallest subgroup containing the subgroup ``mask`` and ``gens``."""
    t = G.table
    mask |= 1 << G.identity
    queue = list(iter_bits(mask))
    for e in queue:
        row = t[e]
        for s in gens:
            p = row[s]
            if not (mask >> p) & 1:
                mask |= 1 << p
                queue.append(p)
    return mask


def _reduce_gens(G, elems, start=None, start_gens=()):
    """Greedy generating set: keep an element only if it enlarges the span."""
    gens = list(start_gens)
    mask = _closure(G, start if start is not None else 0, gens)
    for g in elems:
        if not (mask >> g) & 1:
            gens.append(g)
            mask = _closure(G, mask, gens)
    return gens, mask


def subgroup_generate(G, gens):
    """``<gens>`` as a Subgroup."""
    reduced, mask = _reduce_gens(G, sorted(set(gens)))
    return Subgroup(G, mask, tuple(reduced))


def join(H, g):
    """``<H, g>`` for a Subgroup H and element g."""
    if g in H:
        return H
    gens = H.generators() + (g,)
    return Subgroup(H.parent, _closure(H.parent, H.members, gens), gens)


def normal_closure(G, S, within=None):
    """Smallest subgroup normal in ``within`` (default all of G) containing S."""
    ambient = within.generators() if within is not None else _group_gens(G)
    gens, mask = _reduce_gens(G, sorted(set(S)))
    changed = True
    while changed:
        changed = False
        for n in list(gens):
            for t in ambient:
                c = G.conj(n, t)
                if not (mask >> c) & 1:
                    gens.append(c)
                    mask = _closure(G, mask, gens)
                    changed = True
    return Subgroup(G, mask, tuple(gens))


def _group_gens(G):
    return G.memo("gens", lambda: tuple(G.whole().generators()))


def is_normal(K, H):
    """K normal in H (both Subgroups of one parent, K inside H)."""
    G = K.parent
    for t in H.generators():
        for g in K.generators():
            if G.conj(g, t) not in K:
                return False
    return True


def conjugate_mask(G, mask, x):
    """Mask of ``x^-1 H x``."""
    out = 0
    for h in iter_bits(mask):
        out |= 1 << G.conj(h, x)
    return out


@dataclass(frozen=True)
class CentralSeries:
    """Lower or upper central series of a subgroup, listed until it stabilizes.

    The stable term appears once, as the last entry.
    """

    parent: Subgroup
    direction: str
    terms: tuple

    @property
    def stable(self):
        return self.terms[-1]


def central_series(H, direction="lower"):
    if isinstance(H, FiniteGroup):
        H = H.whole()
    G = H.parent
    T = H.generators()
    if direction == "lower":
        terms = [H]
        while True:
            cur = terms[-1]
            comms = {G.comm(a, t) for a in cur.generators() for t in T}
            nxt = normal_closure(G, comms, within=H)
            if nxt.members == cur.members:
                break
            terms.append(nxt)
    elif direction == "upper":
        terms = [Subgroup(G, 1 << G.identity, ())]
        while True:
            z = terms[-1].members
            mask = 0
            for g in H.elements():
                if all((z >> G.comm(g, t)) & 1 for t in T):
                    mask |= 1 << g
            if mask == z:
                break
            terms.append(Subgroup(G, mask))
    else:
        raise ValueError(f"direction must be 'lower' or 'upper', not {direction!r}")
    return CentralSeries(H, direction, tuple(terms))


def nilpotency_class(H):
    """Least c with gamma_{c+1}(H) = 1, or NOT_NILPOTENT."""
    if isinstance(H, FiniteGroup):
        H = H.whole()
    G = H.parent
    return G.memo(("class", H.members), lambda: _class_of(H))


def _class_of(H):
    series = central_series(H, "lower")
    if not series.stable.is_trivial():
        return NOT_NILPOTENT
    return len(series.terms) - 1


def class_exceeds(c, k):
    """True when a class value (int or NOT_NILPOTENT) is larger than k."""
    return c is NOT_NILPOTENT or c > k


def commutators_vanish(G, gens, k):
    """All left-normed commutators of length k+1 with entries in ``gens`` are 1.

    For a generating set this is equivalent to the generated subgroup having
    class at most k, because gamma_{k+1} is the normal closure of these
    commutators.
    """
    e = G.identity
    gens = [g for g in set(gens) if g != e]
    level = set(gens)
    comm = G.comm
    for _ in range(k):
        level = {c for a in level for x in gens if (c := comm(a, x)) != e}
        if not level:
            return True
    return not level


def center(G):
    """{z : zx = xz for all x} as a Subgroup of G."""
    def compute():
        gens = _group_gens(G)
        t = G.table
        mask = 0
        for z in range(G.order):
            if all(t[z][x] == t[x][z] for x in gens):
                mask |= 1 << z
        return Subgroup(G, mask)
    return G.memo("center", compute)


def centralizer(G, x):
    t = G.table
    mask = 0
    for y in range(G.order):
        if t[x][y] == t[y][x]:
            mask |= 1 << y
    return Subgroup(G, mask)


def is_abelian(G):
    return all(G.table[a][b] == G.table[b][a]
               for a in _group_gens(G) for b in _group_gens(G))


# ---------------------------------------------------------------------------
# subgroup lattice


def grow_subgroups(G, accept=None, cap=None):
    """All subgroups reachable from the trivial group by adding one element
    at a time while ``accept(H)`` holds, sorted by (order, mask).

    With ``accept=None`` this is the full subgroup lattice.  When ``accept``
    describes a subgroup-closed property the result is every subgroup with
    that property, since any such subgroup is the top of a chain
    <g1> < <g1,g2> < ... of subgroups that all have it.
    """
    from .errors import SearchBudgetExceeded

    # one generator per cyclic subgroup is enough to extend by
    cyclic_reps = []
    seen_cyclic = set()
    for g in range(G.order):
        if g == G.identity:
            continue
        H = Subgroup(G, _closure(G, 0, (g,)), (g,))
        if H.members not in seen_cyclic:
            seen_cyclic.add(H.members)
            cyclic_reps.append((g, H.members))

    trivial = G.trivial()
    found = {trivial.members: trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in sorted(frontier, key=lambda s: s.members):
            for g, cmask in cyclic_reps:
                if cmask & ~H.members == 0:
                    continue
                gens = H.generators() + (g,)
                mask = _closure(G, H.members, gens)
                if mask in found:
                    continue
                K = Subgroup(G, mask, gens)
                if accept is not None and not accept(K):
                    continue
                found[mask] = K
                if cap is not None and len(found) > cap:
                    raise SearchBudgetExceeded(
                        f"more than {cap} subgroups in {G.name}")
                nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=lambda s: (s.order, s.members))


def all_subgroups(G, cap=None):
    """Full subgroup lattice of G, sorted by (order, mask); memoized."""
    from .errors import SearchBudgetExceeded

    lattice = G._cache.get("lattice")
    if lattice is None:
        lattice = G._cache["lattice"] = grow_subgroups(G, cap=cap)
    elif cap is not None and len(lattice) > cap:
        raise SearchBudgetExceeded(f"more than {cap} subgroups in {G.name}")
    return lattice


def cyclic_subgroups(G):
    seen = {}
    for g in range(G.order):
        H = subgroup_generate(G, [g])
        seen.setdefault(H.members, H)
    return sorted(seen.values(), key=lambda s: (s.order, s.members))
