"""Graphs coded as sub-orderings of the lexicographic order on rational sequences.

A member of the image of G is a sequence q1 r1 ... qn rn k where each q_i
lies in the dense class Q_{a_i} named by a vertex a_i, the r_i separate
positions (r_i in Q_0 before the last pair, r_n in Q_1 at the end), and the
integer tail k ranges over a discrete block whose size is fixed by the
atomic type of (a_1, ..., a_n).

The dense partition is Q_a = {q : the 2-adic valuation of q's denominator
is a}.  Each Q_a is dense, membership is one bit count, and 1/2^a is the
first element of Q_a under the height enumeration (0 for Q_0).
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterator, Mapping, Sequence

from .config import Budgets, get_budgets
from .core import FiniteStructure, is_simple_graph
from .errors import (
    BudgetExceeded,
    DecodeError,
    FamilyViolation,
    InconsistentDiagram,
    NotAMember,
    ShapeError,
)

MAX_TYPE_VARIABLES = 6


# ---------------------------------------------------------------------------
# the dense partition of Q

def class_of(q) -> int:
    """Index a with q in Q_a."""
    d = Fraction(q).denominator
    return (d & -d).bit_length() - 1


def first_in_class(a: int) -> Fraction:
    if a < 0:
        raise ShapeError("class indices are natural numbers")
    return Fraction(0) if a == 0 else Fraction(1, 2 ** a)


def height(q) -> int:
    q = Fraction(q)
    return max(abs(q.numerator), q.denominator)


def enumerate_rationals(pred=None) -> Iterator[Fraction]:
    """All rationals by height, then denominator, then |numerator|, positive first."""
    h = 1
    while True:
        for den in range(1, h + 1):
            nums = range(h + 1) if den == h else (h,)
            for p in nums:
                if math.gcd(p, den) != 1:
                    continue
                for s in ((p,) if p == 0 else (p, -p)):
                    q = Fraction(s, den)
                    if pred is None or pred(q):
                        yield q
        h += 1


def class_members(a: int) -> Iterator[Fraction]:
    """Q_a in enumeration order."""
    h = 2 ** a
    while True:
        for den in range(2 ** a, h + 1, 2 ** a):
            if class_of(Fraction(1, den)) != a:
                continue
            nums = range(h + 1) if den == h else (h,)
            for p in nums:
                if math.gcd(p, den) == 1:
                    yield from ((Fraction(p, den),) if p == 0 else (Fraction(p, den), Fraction(-p, den)))
        h += 1


@lru_cache(maxsize=None)
def class_prefix(a: int, H: int) -> tuple[Fraction, ...]:
    """The members of Q_a with class rank at most H."""
    return tuple(itertools.islice(class_members(a), H + 1))


def class_rank(q, budgets: Budgets | None = None) -> int:
    """Position of q within its class under the enumeration."""
    budgets = budgets or get_budgets()
    q = Fraction(q)
    for i, x in enumerate(class_members(class_of(q))):
        if x == q:
            return i
        if i >= budgets.fragment_elements:
            raise BudgetExceeded(f"class rank of {q} beyond {budgets.fragment_elements}")
    raise AssertionError("unreachable")


def dense_pick(a: int, interval: tuple, step_cap: int | None = None) -> Fraction:
    """Least-denominator member of Q_a strictly inside ``interval``.

    ``None`` endpoints are unbounded.  Candidates are tried by denominator
    2^a * r over odd r; the step cap bounds the number of r tried.
    """
    lo, hi = interval
    if lo is None and hi is None:
        return first_in_class(a)
    if lo is None:
        lo = Fraction(hi) - 1
    if hi is None:
        hi = Fraction(lo) + 1
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ShapeError(f"empty interval ({lo}, {hi})")
    step_cap = step_cap or get_budgets().step_cap
    for step in range(step_cap):
        den = 2 ** a * (2 * step + 1)
        p = math.floor(lo * den) + 1
        top = math.ceil(hi * den) - 1
        while p <= top:
            if math.gcd(p, den) == 1:
                return Fraction(p, den)
            p += 1
    raise BudgetExceeded(f"dense_pick({a}, ({lo}, {hi})) exceeded {step_cap} steps")


# ---------------------------------------------------------------------------
# atomic types of graph tuples

@dataclass(frozen=True)
class AtomicPattern:
    """Equality and adjacency bits over the pairs i < j of n variables."""

    n: int
    eq: tuple[int, ...]
    adj: tuple[int, ...]

    def is_consistent(self) -> bool:
        pairs = list(itertools.combinations(range(self.n), 2))
        if len(self.eq) != len(pairs) or len(self.adj) != len(pairs):
            return False
        eq = {p: b for p, b in zip(pairs, self.eq)}
        adj = {p: b for p, b in zip(pairs, self.adj)}
        same = lambda i, j: i == j or eq[(min(i, j), max(i, j))]
        edge = lambda i, j: i != j and adj[(min(i, j), max(i, j))]
        for i, j, k in itertools.permutations(range(self.n), 3):
            if same(i, j) and same(j, k) and not same(i, k):
                return False
            if same(i, j) and edge(j, k) != edge(i, k):
                return False
        return all(not (eq[p] and adj[p]) for p in pairs)


def _set_partitions(n: int):
    if n == 0:
        yield []
        return
    for part in _set_partitions(n - 1):
        for i in range(len(part)):
            yield part[:i] + [part[i] + [n - 1]] + part[i + 1:]
        yield part + [[n - 1]]


@lru_cache(maxsize=None)
def _types(n: int) -> tuple[AtomicPattern, ...]:
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for part in _set_partitions(n):
        block = {v: b for b, vs in enumerate(part) for v in vs}
        bpairs = list(itertools.combinations(range(len(part)), 2))
        for bits in itertools.product((0, 1), repeat=len(bpairs)):
            E = {p for p, b in zip(bpairs, bits) if b}
            eq = tuple(int(block[i] == block[j]) for i, j in pairs)
            adj = tuple(int((min(block[i], block[j]), max(block[i], block[j])) in E)
                        for i, j in pairs)
            out.append(AtomicPattern(n, eq, adj))
    return tuple(sorted(out, key=lambda t: (t.eq, t.adj)))


@lru_cache(maxsize=None)
def _offset(n: int) -> int:
    return sum(len(_types(m)) for m in range(1, n))


def count_types(n: int) -> int:
    return len(_types(n))


def atomic_type_index(pattern: AtomicPattern) -> int:
    """Position in the enumeration: by variable count, then (eq, adj) bits."""
    if pattern.n < 1:
        raise ShapeError("atomic types need at least one variable")
    if pattern.n > MAX_TYPE_VARIABLES:
        raise BudgetExceeded(f"type enumeration capped at {MAX_TYPE_VARIABLES} variables")
    if not pattern.is_consistent():
        raise InconsistentDiagram(f"inconsistent atomic pattern {pattern}")
    types = _types(pattern.n)
    i = bisect.bisect_left(types, (pattern.eq, pattern.adj), key=lambda t: (t.eq, t.adj))
    return _offset(pattern.n) + i


def atomic_type_of(G: FiniteStructure, a: Sequence[int]) -> AtomicPattern:
    pairs = list(itertools.combinations(range(len(a)), 2))
    E = G.relations["E"]
    return AtomicPattern(len(a), tuple(int(a[i] == a[j]) for i, j in pairs),
                         tuple(int((a[i], a[j]) in E) for i, j in pairs))


def block_size(G: FiniteStructure, a: Sequence[int]) -> int:
    """Number of tails allowed after a body naming ``a``: type index plus one."""
    return atomic_type_index(atomic_type_of(G, a)) + 1


# ---------------------------------------------------------------------------
# elements

@total_ordering
@dataclass(frozen=True)
class OrderElement:
    body: tuple[Fraction, ...]
    tail: int = 0

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(Fraction(x) for x in self.body))
        if self.tail < 0:
            raise ShapeError("tail must be a natural number")

    @property
    def key(self) -> tuple[Fraction, ...]:
        return self.body + (Fraction(self.tail),)

    def __lt__(self, other: "OrderElement") -> bool:
        return self.key < other.key

    @property
    def n(self) -> int:
        return len(self.body) // 2

    @property
    def qs(self) -> tuple[Fraction, ...]:
        return self.body[0::2]

    @property
    def rs(self) -> tuple[Fraction, ...]:
        return self.body[1::2]

    def to_json(self) -> dict:
        return {"body": [[q.numerator, q.denominator] for q in self.body], "tail": self.tail}

    @classmethod
    def from_json(cls, data: Mapping) -> "OrderElement":
        return cls(tuple(Fraction(p, q) for p, q in data["body"]), int(data["tail"]))


def _shape_ok(G: FiniteStructure, x: OrderElement) -> bool:
    if len(x.body) < 2 or len(x.body) % 2:
        return False
    verts = set(G.universe)
    if any(class_of(q) not in verts for q in x.qs):
        return False
    rs = x.rs
    return all(class_of(r) == 0 for r in rs[:-1]) and class_of(rs[-1]) == 1


def member(G: FiniteStructure, x: OrderElement) -> bool:
    if not _shape_ok(G, x):
        return False
    n = x.n
    if n > MAX_TYPE_VARIABLES:
        raise BudgetExceeded(f"body names {n} vertices; types are capped at {MAX_TYPE_VARIABLES}")
    return x.tail < block_size(G, tuple(class_of(q) for q in x.qs))


def f_map(G: FiniteStructure, a: Sequence[int]) -> OrderElement:
    if not a:
        raise ShapeError("f is defined on nonempty tuples")
    verts = set(G.universe)
    if any(v not in verts for v in a):
        raise ShapeError(f"{tuple(a)} is not a tuple of vertices")
    body = []
    for i, v in enumerate(a):
        body.append(first_in_class(v))
        body.append(first_in_class(1 if i == len(a) - 1 else 0))
    return OrderElement(tuple(body), 0)


def g_decode(G: FiniteStructure, x: OrderElement) -> tuple[int, ...]:
    if x.tail != 0:
        raise DecodeError("only tail-0 elements (left limit points) decode")
    if not member(G, x):
        raise DecodeError("not a member of the image")
    return tuple(class_of(q) for q in x.qs)


def discrete_block(G: FiniteStructure, x: OrderElement) -> tuple[int, int]:
    """(position of x inside its maximal discrete block, block size)."""
    if not member(G, x):
        raise NotAMember(f"{x.to_json()} is not a member")
    return x.tail, block_size(G, tuple(class_of(q) for q in x.qs))


def fragment_size(G: FiniteStructure, L: int, H: int) -> int:
    V = len(G.universe)
    per = H + 1
    return sum(V ** n * per ** (2 * n) * (_offset(n) + len(_types(n))) for n in range(1, L + 1))


def enumerate_fragment(G: FiniteStructure, L: int, H: int,
                       budgets: Budgets | None = None) -> list[OrderElement]:
    """Members with at most L pairs whose rationals all have class rank at most H."""
    budgets = budgets or get_budgets()
    if not is_simple_graph(G):
        raise ShapeError("enumerate_fragment needs a simple graph")
    if L > MAX_TYPE_VARIABLES:
        raise BudgetExceeded(f"L={L} exceeds the type cap {MAX_TYPE_VARIABLES}")
    bound = fragment_size(G, L, H)
    if bound > budgets.fragment_elements:
        raise BudgetExceeded(f"fragment bound {bound} exceeds {budgets.fragment_elements}")
    out = []
    r_mid, r_end = class_prefix(0, H), class_prefix(1, H)
    for n in range(1, L + 1):
        for a in itertools.product(G.universe, repeat=n):
            m = block_size(G, a)
            q_choices = [class_prefix(v, H) for v in a]
            r_choices = [r_mid] * (n - 1) + [r_end]
            coords = [c for pair in zip(q_choices, r_choices) for c in pair]
            for body in itertools.product(*coords):
                out.extend(OrderElement(body, k) for k in range(m))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# the family of partial isomorphisms between order images

class _Node:
    __slots__ = ("keys", "children")

    def __init__(self):
        self.keys: list[Fraction] = []
        self.children: dict[Fraction, tuple["_Node", Fraction]] = {}

    def neighbours(self, v: Fraction) -> tuple:
        i = bisect.bisect_left(self.keys, v)
        lo = self.keys[i - 1] if i else None
        hi = self.keys[i] if i < len(self.keys) else None
        return lo, hi


class FamilyMap:
    """A finite partial map between the images of G and G2 inside the family.

    Pairs (x, y) are admitted when both are members, bodies have equal
    length, tails agree, each q of y lies in the class sigma assigns to the
    matching q of x, and the map stays a lexicographic order isomorphism
    that preserves common-prefix lengths.  The two tries (keyed by source
    and by target coordinates) make the last condition local: it holds iff
    at every trie node the child values correspond monotonically.
    """

    def __init__(self, G: FiniteStructure, G2: FiniteStructure, sigma: Mapping[int, int],
                 step_cap: int | None = None):
        if sorted(sigma) != list(G.universe) or sorted(sigma.values()) != list(G2.universe):
            raise ShapeError("sigma must be a bijection between the vertex sets")
        self.G, self.G2 = G, G2
        self.sigma = dict(sigma)
        self.inverse = {v: k for k, v in sigma.items()}
        self.fwd, self.bwd = _Node(), _Node()
        self.pairs: dict[OrderElement, OrderElement] = {}
        self.step_cap = step_cap

    def __len__(self) -> int:
        return len(self.pairs)

    def _check_pair(self, x: OrderElement, y: OrderElement):
        if not member(self.G, x):
            raise FamilyViolation(f"source {x.to_json()} is not a member")
        if not member(self.G2, y):
            raise FamilyViolation(f"target {y.to_json()} is not a member")
        if len(x.body) != len(y.body) or x.tail != y.tail:
            raise FamilyViolation("bodies or tails do not match")
        if any(self.sigma[class_of(p)] != class_of(q) for p, q in zip(x.qs, y.qs)):
            raise FamilyViolation("q classes are not carried by sigma")

    def add(self, x: OrderElement, y: OrderElement):
        if x in self.pairs:
            if self.pairs[x] != y:
                raise FamilyViolation("source already mapped elsewhere")
            return
        self._check_pair(x, y)
        a, b = self.fwd, self.bwd
        for u, v in zip(x.key, y.key):
            hit = a.children.get(u)
            if hit is not None:
                if hit[1] != v:
                    raise FamilyViolation(f"coordinate {u} already maps to {hit[1]}, not {v}")
                a = hit[0]
                b = b.children[v][0]
                continue
            if v in b.children:
                raise FamilyViolation(f"target coordinate {v} already used")
            i, j = bisect.bisect_left(a.keys, u), bisect.bisect_left(b.keys, v)
            if i != j:
                raise FamilyViolation("order between siblings is not preserved")
            na, nb = _Node(), _Node()
            a.keys.insert(i, u)
            b.keys.insert(j, v)
            a.children[u] = (na, v)
            b.children[v] = (nb, u)
            a, b = na, nb
        self.pairs[x] = y

    def _extend(self, root: _Node, x: OrderElement, sigma: Mapping[int, int]) -> OrderElement:
        node = root
        out: list[Fraction] = []
        n = x.n
        for c, u in enumerate(x.body):
            if node is not None and u in node.children:
                node, v = node.children[u]
                out.append(v)
                continue
            if c % 2 == 0:
                cls = sigma[class_of(u)]
            else:
                cls = 1 if c == 2 * n - 1 else 0
            if node is None:
                out.append(first_in_class(cls))
                continue
            lo, hi = node.neighbours(u)
            lo_t = node.children[lo][1] if lo is not None else None
            hi_t = node.children[hi][1] if hi is not None else None
            out.append(dense_pick(cls, (lo_t, hi_t), self.step_cap))
            node = None
        return OrderElement(tuple(out), x.tail)

    def forth(self, x: OrderElement) -> OrderElement:
        if x in self.pairs:
            return self.pairs[x]
        y = self._extend(self.fwd, x, self.sigma)
        self.add(x, y)
        return y

    def back(self, y: OrderElement) -> OrderElement:
        hit = self._inverse_lookup(y)
        if hit is not None:
            return hit
        x = self._extend(self.bwd, y, self.inverse)
        self.add(x, y)
        return x

    def _inverse_lookup(self, y: OrderElement) -> OrderElement | None:
        node, out = self.bwd, []
        for v in y.key:
            if v not in node.children:
                return None
            node, u = node.children[v]
            out.append(u)
        return OrderElement(tuple(out[:-1]), int(out[-1]))

    def check(self) -> bool:
        """Re-verify every family condition from the stored pairs alone.

        In a sorted list the common prefix of any two entries is the
        minimum over adjacent ones, so matching sort order plus matching
        adjacent prefix lengths covers all pairs.
        """
        items = sorted(self.pairs.items())
        try:
            for x, y in items:
                self._check_pair(x, y)
        except FamilyViolation:
            return False
        ys = [y for _, y in items]
        if ys != sorted(ys) or len(set(ys)) != len(ys):
            return False
        return all(_lcp(x.key, x2.key) == _lcp(y.key, y2.key)
                   for (x, y), (x2, y2) in zip(items, items[1:]))


def _lcp(s: Sequence, t: Sequence) -> int:
    n = 0
    for u, v in zip(s, t):
        if u != v:
            break
        n += 1
    return n


def family_extension(G: FiniteStructure, G2: FiniteStructure, sigma: Mapping[int, int],
                     seeds: Mapping[OrderElement, OrderElement] | None,
                     source: Sequence[OrderElement], target: Sequence[OrderElement],
                     step_cap: int | None = None) -> FamilyMap:
    """Extend ``seeds`` forth over ``source`` and then back over ``target``.

    Raises FamilyViolation when some step leaves the family.
    """
    fm = FamilyMap(G, G2, sigma, step_cap)
    for x, y in (seeds or {}).items():
        fm.add(x, y)
    for x in source:
        fm.forth(x)
    for y in target:
        fm.back(y)
    return fm


def _bijections(G: FiniteStructure, G2: FiniteStructure, fix: Sequence[tuple[int, int]] = ()):
    if len(G.universe) != len(G2.universe):
        return
    fixed = dict(fix)
    if len(set(fixed.values())) != len(fixed):
        return
    rest = [v for v in G.universe if v not in fixed]
    free = [v for v in G2.universe if v not in fixed.values()]
    for perm in itertools.permutations(free):
        yield {**fixed, **dict(zip(rest, perm))}


def block_spectrum(G: FiniteStructure, L: int) -> list[int]:
    """Sorted block sizes over all bodies of at most L pairs (one per vertex tuple)."""
    return sorted(block_size(G, a) for n in range(1, L + 1)
                  for a in itertools.product(G.universe, repeat=n))


def order_images_isomorphic(G: FiniteStructure, G2: FiniteStructure, L: int = 2, H: int = 0,
                            budgets: Budgets | None = None) -> bool:
    """Image-side verdict on enumerated fragments.

    True iff some vertex bijection drives the family extension through
    both fragments without leaving the family.
    """
    if len(G.universe) != len(G2.universe) or block_spectrum(G, L) != block_spectrum(G2, L):
        return False
    src, dst = enumerate_fragment(G, L, H, budgets), enumerate_fragment(G2, L, H, budgets)
    for sigma in _bijections(G, G2):
        try:
            family_extension(G, G2, sigma, None, src, dst)
        except FamilyViolation:
            continue
        return True
    return False


def order_same_orbit(G: FiniteStructure, x: OrderElement, y: OrderElement, L: int = 2,
                     H: int = 0, budgets: Budgets | None = None) -> bool:
    """Whether the single pair {x -> y} extends through the fragment in the family."""
    if not (member(G, x) and member(G, y)) or x.tail != y.tail or len(x.body) != len(y.body):
        return False
    frag = enumerate_fragment(G, L, H, budgets)
    fix = list(zip((class_of(q) for q in x.qs), (class_of(q) for q in y.qs)))
    if any(dict(fix).get(a, b) != b for a, b in fix):
        return False
    for sigma in _bijections(G, G, fix):
        try:
            family_extension(G, G, sigma, {x: y}, frag, frag)
        except FamilyViolation:
            continue
        return True
    return False
