"""Independent brute-force references the library is checked against.

Nothing here imports the algorithms under test; only the plain data
classes (FiniteStructure, FiniteTree) are shared so results can be compared.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from scottkit.core import FiniteStructure, Signature

BINARY = Signature.of(("R", 2))


# -- isomorphism by permutation -------------------------------------------

def _maps(A: FiniteStructure, B: FiniteStructure):
    if len(A) != len(B):
        return
    for img in itertools.permutations(B.universe):
        yield dict(zip(A.universe, img))


def _preserves(A, B, m) -> bool:
    return all({tuple(m[x] for x in t) for t in A.relations[n]} == set(B.relations[n])
               for n in A.signature.names)


def brute_isomorphic(A: FiniteStructure, B: FiniteStructure) -> bool:
    return any(_preserves(A, B, m) for m in _maps(A, B))


def brute_automorphisms(A: FiniteStructure) -> list[dict]:
    return [m for m in _maps(A, A) if _preserves(A, A, m)]


def brute_orbit_ids(A: FiniteStructure, k: int) -> dict[tuple, int]:
    auts = brute_automorphisms(A)
    ids: dict[tuple, int] = {}
    for t in itertools.product(A.universe, repeat=k):
        if t not in ids:
            n = len(set(ids.values()))
            for g in auts:
                ids.setdefault(tuple(g[x] for x in t), n)
    return ids


# -- structures with one binary relation ----------------------------------

def binary_structures(n: int) -> list[FiniteStructure]:
    """One structure per iso type on n elements with a single binary relation."""
    cells = list(itertools.product(range(n), repeat=2))
    perms = list(itertools.permutations(range(n)))
    seen, out = set(), []
    for mask in range(1 << len(cells)):
        R = frozenset(c for i, c in enumerate(cells) if mask >> i & 1)
        if R in seen:
            continue
        for p in perms:
            seen.add(frozenset((p[a], p[b]) for a, b in R))
        out.append(FiniteStructure(BINARY, tuple(range(n)), {"R": R}))
    return out


# -- Scott rank by literal recursion --------------------------------------

def naive_scott_rank(A: FiniteStructure) -> int:
    """1 + max over tuples of the least β with a ≡^β b ⇒ (A, a) ≅ (A, b).

    ≡^0 is equality of atomic facts among the listed entries.  a ≡^α b for
    α > 0 iff for every β < α every one-point extension of either side is
    matched by one of the other at level β.  Evaluated top-down with memo.
    """
    U = A.universe
    auts = brute_automorphisms(A)
    rels = [(s.arity, A.relations[s.name]) for s in A.signature]

    @lru_cache(maxsize=None)
    def atomic(t):
        n = len(t)
        eq = tuple(t[i] == t[j] for i in range(n) for j in range(n))
        facts = tuple(tuple(tuple(t[i] for i in pos) in R for pos in itertools.product(range(n), repeat=ar))
                      for ar, R in rels)
        return eq, facts

    @lru_cache(maxsize=None)
    def equiv(alpha, a, b):
        if atomic(a) != atomic(b):
            return False
        for beta in range(alpha):
            for c in U:
                if not any(equiv(beta, a + (c,), b + (d,)) for d in U):
                    return False
            for d in U:
                if not any(equiv(beta, a + (c,), b + (d,)) for c in U):
                    return False
        return True

    def automorphic(a, b):
        return any(tuple(g[x] for x in a) == b for g in auts)

    best = 0
    for n in range(len(U) + 1):
        for a in itertools.permutations(U, n):
            others = [b for b in itertools.permutations(U, n) if not automorphic(a, b)]
            beta = 0
            while any(equiv(beta, a, b) for b in others):
                beta += 1
            best = max(best, beta)
    return best + 1


# -- rooted trees ---------------------------------------------------------

def ahu(nodes, v=()) -> str:
    """Canonical string of the subtree at ``v`` (nodes given as index tuples)."""
    kids = sorted(ahu(nodes, c) for c in nodes if len(c) == len(v) + 1 and c[:-1] == v)
    return "(" + "".join(kids) + ")"


def rooted_tree_codes(n: int) -> set[str]:
    """AHU codes of all rooted trees with exactly n nodes, built by attaching leaves."""
    layer = {"()"}
    for _ in range(n - 1):
        nxt = set()
        for code in layer:
            nxt |= _attach_leaf(code)
        layer = nxt
    return layer


def _parse(code: str):
    stack, root = [[]], None
    for ch in code:
        if ch == "(":
            stack.append([])
        else:
            node = stack.pop()
            stack[-1].append(node)
    root = stack[0][0]
    return root


def _code(node) -> str:
    return "(" + "".join(sorted(_code(c) for c in node)) + ")"


def _attach_leaf(code: str) -> set[str]:
    out = set()
    root = _parse(code)
    every = []

    def walk(node):
        every.append(node)
        for c in node:
            walk(c)
    walk(root)
    for node in every:
        node.append([])
        out.add(_code(root))
        node.pop()
    return out


def naive_rank_homogeneous(levels: dict[int, set[int]], k: int) -> set[tuple]:
    """Node set of the tree where each rank-α node at level n gets k children
    of each smaller rank listed at level n+1, built by direct recursion.

    Children are numbered copy-major (all ranks for copy 0, then copy 1),
    unlike the library, so agreement is only up to isomorphism.
    """
    def build(prefix: tuple, alpha: int, n: int, out: set):
        out.add(prefix)
        smaller = sorted((b for b in levels.get(n + 1, ()) if b < alpha), reverse=True)
        i = 0
        for _ in range(k):
            for beta in smaller:
                build(prefix + (i,), beta, n + 1, out)
                i += 1
        return out
    (root,) = levels[0]
    return build((), root, 0, set())


# -- tree -> graph gadget counts ------------------------------------------

def gadget_counts(n_nodes: int) -> tuple[int, int]:
    """Vertices and edges of the graph image of an n-node tree, by listing parts.

    Node part: representative plus a pendant triangle hung off one edge.
    Pair part (every successor pair and the root paired with itself):
    a hub, a 4-cycle through one hub neighbour, a path of 2 edges to the
    first end and a path of 3 edges to the second.
    """
    node_vertices = 1 + 3
    node_edges = 1 + 3
    pair_vertices = 1 + 4 + 1 + 2          # hub, square, 2-path interior, 3-path interior
    pair_edges = 1 + 4 + 2 + 3             # hub-square link, square, paths
    pairs = (n_nodes - 1) + 1
    return (n_nodes * node_vertices + pairs * pair_vertices,
            n_nodes * node_edges + pairs * pair_edges)


# -- order coding ---------------------------------------------------------

def two_adic_class(q) -> int:
    """Number of times 2 divides the reduced denominator."""
    from fractions import Fraction
    d, a = Fraction(q).denominator, 0
    while d % 2 == 0:
        d //= 2
        a += 1
    return a


def realized_types(n: int) -> list[tuple]:
    """(eq bits, adj bits) of every n-tuple in every graph on n labelled vertices, sorted."""
    pairs = list(itertools.combinations(range(n), 2))
    seen = set()
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        E = {p for p, b in zip(pairs, bits) if b}
        E |= {(v, u) for u, v in E}
        for t in itertools.product(range(n), repeat=n):
            seen.add((tuple(int(t[i] == t[j]) for i, j in pairs),
                      tuple(int((t[i], t[j]) in E) for i, j in pairs)))
    return sorted(seen)


def naive_type_index(eq: tuple, adj: tuple, n: int) -> int:
    """Types with fewer variables first, then lexicographic within a variable count."""
    before = sum(len(realized_types(m)) for m in range(1, n))
    return before + realized_types(n).index((tuple(eq), tuple(adj)))
