"""Finite trees under the prefix order: tree rank, thinness, rank-homogeneity.

A tree is a prefix-closed set of integer sequences; the empty sequence is
the root.  "Infinitely many successors of rank α" is truncated to a
multiplicity parameter ``k``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .config import Budgets, get_budgets
from .core import FiniteStructure, Signature, isomorphic
from .errors import BudgetExceeded, DecodeError, InvalidStructure, ShapeError, UnrealizableSpec

TREE = Signature.of(("S", 2), ("root", 1))

Node = tuple


@dataclass(frozen=True)
class FiniteTree:
    nodes: frozenset = frozenset()

    def __post_init__(self):
        nodes = frozenset(tuple(int(i) for i in s) for s in self.nodes)
        for s in nodes:
            if any(i < 0 for i in s):
                raise InvalidStructure(f"negative index in node {s}")
            if s and s[:-1] not in nodes:
                raise InvalidStructure(f"node {s} has no parent in the tree")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def of(cls, *nodes: Iterable[int]) -> "FiniteTree":
        """Build from nodes, adding all prefixes."""
        closed = set()
        for s in nodes:
            s = tuple(s)
            closed.update(s[:i] for i in range(len(s) + 1))
        return cls(frozenset(closed))

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, node):
        return tuple(node) in self.nodes

    def sorted_nodes(self) -> list[Node]:
        """Shortlex order; this fixes the element ids of :meth:`to_structure`."""
        return sorted(self.nodes, key=lambda s: (len(s), s))

    def children(self, node: Node) -> list[Node]:
        return sorted(s for s in self.nodes if len(s) == len(node) + 1 and s[:-1] == node)

    def level(self, n: int) -> list[Node]:
        return sorted(s for s in self.nodes if len(s) == n)

    @property
    def height(self) -> int:
        return max((len(s) for s in self.nodes), default=-1)

    def to_structure(self) -> FiniteStructure:
        ids = {s: i for i, s in enumerate(self.sorted_nodes())}
        succ = {(ids[s[:-1]], ids[s]) for s in self.nodes if s}
        root = {(ids[()],)} if self.nodes else set()
        return FiniteStructure(TREE, tuple(ids.values()), {"S": succ, "root": root})

    def to_json(self) -> list:
        return [list(s) for s in self.sorted_nodes()]

    @classmethod
    def from_json(cls, data) -> "FiniteTree":
        try:
            return cls(frozenset(tuple(s) for s in data))
        except TypeError as exc:
            raise InvalidStructure(f"malformed tree JSON: {exc}") from exc


def structure_to_tree(A: FiniteStructure) -> FiniteTree:
    """Inverse of :meth:`FiniteTree.to_structure` up to renaming of children."""
    if A.signature != TREE:
        raise DecodeError("not a tree-signature structure")
    if not A.universe:
        return FiniteTree()
    roots = [t[0] for t in A.relations["root"]]
    if len(roots) != 1:
        raise DecodeError(f"expected exactly one root, found {len(roots)}")
    kids: dict[int, list[int]] = {}
    parents: dict[int, int] = {}
    for u, v in A.relations["S"]:
        if v in parents:
            raise DecodeError(f"element {v} has two parents")
        parents[v] = u
        kids.setdefault(u, []).append(v)
    nodes = {roots[0]: ()}
    stack = [roots[0]]
    while stack:
        u = stack.pop()
        for i, v in enumerate(sorted(kids.get(u, ()))):
            if v in nodes:
                raise DecodeError("successor relation has a cycle")
            nodes[v] = nodes[u] + (i,)
            stack.append(v)
    if len(nodes) != len(A):
        raise DecodeError("successor relation is not connected to the root")
    return FiniteTree(frozenset(nodes.values()))


def trees_isomorphic(T: FiniteTree, U: FiniteTree) -> bool:
    return isomorphic(T.to_structure(), U.to_structure()) is not None


# ---------------------------------------------------------------------------
# ranks

def tree_ranks(T: FiniteTree) -> dict[Node, int]:
    """Rank of every node: 0 at leaves, else the least number above all child ranks."""
    ranks: dict[Node, int] = {}
    for s in sorted(T.nodes, key=len, reverse=True):
        kids = [ranks[c] for c in T.children(s)]
        ranks[s] = max(kids) + 1 if kids else 0
    return ranks


def tree_rank(T: FiniteTree, sigma: Iterable[int]) -> int:
    sigma = tuple(sigma)
    if sigma not in T.nodes:
        raise ShapeError(f"node {sigma} is not in the tree")
    return tree_ranks(T)[sigma]


def rank_spectrum(T: FiniteTree, n: int) -> list[int]:
    ranks = tree_ranks(T)
    return sorted(ranks[s] for s in T.level(n))


# ---------------------------------------------------------------------------
# ordinals below ω² and thinness

class SmallOrdinal(NamedTuple):
    """ω·a + b; tuple comparison is the ordinal order."""
    a: int
    b: int

    def __str__(self):
        if self.a == 0:
            return str(self.b)
        head = "ω" if self.a == 1 else f"ω·{self.a}"
        return head + (f"+{self.b}" if self.b else "")


@dataclass(frozen=True)
class LevelRanks:
    """A finitely described set of ordinals below ω².

    The set is ``explicit`` ∪ every ordinal in the blocks
    ``[ω·a, ω·(a+1))`` for ``a`` in ``full_blocks`` ∪ ``{ω·k + b : k ∈ N}``
    for ``b`` in ``columns``.  ``infinite`` flags that rank ∞ also occurs;
    it is an annotation only.
    """
    explicit: frozenset = frozenset()
    full_blocks: frozenset = frozenset()
    columns: frozenset = frozenset()
    infinite: bool = False

    def __post_init__(self):
        explicit = frozenset(SmallOrdinal(*o) if not isinstance(o, int) else SmallOrdinal(0, o)
                             for o in self.explicit)
        if any(o.a < 0 or o.b < 0 for o in explicit) or any(
                x < 0 for x in (*self.full_blocks, *self.columns)):
            raise ShapeError("ordinals must lie in [0, ω²)")
        object.__setattr__(self, "explicit", explicit)
        object.__setattr__(self, "full_blocks", frozenset(self.full_blocks))
        object.__setattr__(self, "columns", frozenset(self.columns))

    def finite_ranks(self) -> set[int] | None:
        """The ranks as naturals, or None when the set is not a finite set of naturals."""
        if self.full_blocks or self.columns or any(o.a for o in self.explicit):
            return None
        return {o.b for o in self.explicit}

    def order_type(self) -> SmallOrdinal:
        x, y = 0, 0
        last = max([o.a for o in self.explicit] + list(self.full_blocks), default=-1)
        for a in range(last + 1):
            if a in self.full_blocks:
                x, y = x + 1, 0
                continue
            count = len({o.b for o in self.explicit if o.a == a} | self.columns)
            y += count
        if self.columns:
            x, y = x + 1, 0
        return SmallOrdinal(x, y)


@dataclass(frozen=True)
class LevelSpec:
    levels: Mapping[int, LevelRanks] = field(default_factory=dict)

    @classmethod
    def finite(cls, levels: Mapping[int, Iterable[int]]) -> "LevelSpec":
        return cls({int(n): LevelRanks(explicit=frozenset(rs)) for n, rs in levels.items()})

    @classmethod
    def of_tree(cls, T: FiniteTree) -> "LevelSpec":
        ranks = tree_ranks(T)
        out: dict[int, set] = {}
        for s, r in ranks.items():
            out.setdefault(len(s), set()).add(r)
        return cls.finite(out)

    def finite_levels(self) -> dict[int, set[int]]:
        out = {}
        for n, lr in self.levels.items():
            rs = lr.finite_ranks()
            if rs is None:
                raise ShapeError(f"level {n} is not a finite set of finite ranks")
            out[n] = rs
        return out

    def to_json(self) -> dict:
        return {str(n): {"explicit": sorted([list(o) for o in lr.explicit]),
                         "full_blocks": sorted(lr.full_blocks),
                         "columns": sorted(lr.columns),
                         "infinite": lr.infinite}
                for n, lr in sorted(self.levels.items())}

    @classmethod
    def from_json(cls, data: Mapping) -> "LevelSpec":
        levels = {}
        for n, v in data.items():
            if isinstance(v, list):  # shorthand: a list of finite ranks
                levels[int(n)] = LevelRanks(explicit=frozenset(v))
            else:
                levels[int(n)] = LevelRanks(
                    explicit=frozenset(tuple(o) if isinstance(o, list) else o
                                       for o in v.get("explicit", ())),
                    full_blocks=frozenset(v.get("full_blocks", ())),
                    columns=frozenset(v.get("columns", ())),
                    infinite=bool(v.get("infinite", False)))
        return cls(levels)


def is_thin(spec: LevelSpec) -> bool:
    """Level n's ordinal ranks must have order type at most ω·n.

    Level 0 holds only the root, so it is held to ω·1 rather than ω·0.
    """
    return all(lr.order_type() <= SmallOrdinal(max(n, 1), 0) for n, lr in spec.levels.items())


# ---------------------------------------------------------------------------
# rank-homogeneity

def is_rank_homogeneous_k(T: FiniteTree, k: int, depth: int) -> bool:
    ranks = tree_ranks(T)
    for n in range(depth):
        below = {ranks[s] for s in T.level(n + 1)}
        for s in T.level(n):
            kid_ranks = [ranks[c] for c in T.children(s)]
            for alpha in below:
                if alpha < ranks[s] and kid_ranks.count(alpha) < k:
                    return False
    return True


def check_realizable(levels: Mapping[int, set[int]], depth: int):
    if not levels:
        return
    if sorted(levels) != list(range(len(levels))):
        raise UnrealizableSpec(f"levels must be 0..n without gaps, got {sorted(levels)}")
    if len(levels[0]) != 1:
        raise UnrealizableSpec("level 0 must hold exactly one rank (the root)")
    if max(levels) > depth:
        raise UnrealizableSpec(f"spec reaches level {max(levels)} beyond depth {depth}")
    for n, ranks in levels.items():
        nxt = levels.get(n + 1, set())
        for alpha in ranks:
            if alpha < 0:
                raise UnrealizableSpec("ranks must be natural numbers")
            if alpha > 0 and alpha - 1 not in nxt:
                raise UnrealizableSpec(f"rank {alpha} at level {n} needs rank {alpha - 1} at level {n + 1}")
        for beta in nxt:
            if not any(beta < alpha for alpha in ranks):
                raise UnrealizableSpec(f"rank {beta} at level {n + 1} has no possible parent at level {n}")


def generate_rank_homogeneous(spec: LevelSpec | Mapping[int, Iterable[int]], k: int, depth: int,
                              budgets: Budgets | None = None) -> FiniteTree:
    """The tree in which every node of rank α at level n has exactly ``k``
    children of each rank β < α listed at level n+1.

    Children are numbered by rank, then copy.
    """
    budgets = budgets or get_budgets()
    levels = spec.finite_levels() if isinstance(spec, LevelSpec) else {
        int(n): set(rs) for n, rs in spec.items()}
    if k < 1:
        raise UnrealizableSpec("multiplicity k must be at least 1")
    check_realizable(levels, depth)
    if not levels:
        return FiniteTree()
    nodes = {(): next(iter(levels[0]))}
    frontier = [()]
    while frontier:
        nxt = []
        for s in frontier:
            alpha = nodes[s]
            kid_ranks = sorted(b for b in levels.get(len(s) + 1, ()) if b < alpha)
            for i, (beta, _) in enumerate(itertools.product(kid_ranks, range(k))):
                nodes[s + (i,)] = beta
                nxt.append(s + (i,))
            if len(nodes) > budgets.tree_nodes:
                raise BudgetExceeded(f"tree exceeds {budgets.tree_nodes} nodes")
        frontier = nxt
    return FiniteTree(frozenset(nodes))


# ---------------------------------------------------------------------------
# exhaustive families

def ordered_trees(n: int) -> list[FiniteTree]:
    """Every tree with ``n`` nodes whose children are numbered 0..c-1."""
    def forests(m: int) -> list[list[FiniteTree]]:
        if m == 0:
            return [[]]
        out = []
        for first in range(1, m + 1):
            for head in ordered_trees(first):
                for rest in forests(m - first):
                    out.append([head] + rest)
        return out

    if n == 0:
        return [FiniteTree()]
    result = []
    for forest in forests(n - 1):
        nodes = {()}
        for i, sub in enumerate(forest):
            nodes.update((i,) + s for s in sub.nodes)
        result.append(FiniteTree(frozenset(nodes)))
    return result


def rooted_trees(max_nodes: int, min_nodes: int = 1) -> list[FiniteTree]:
    """One representative per isomorphism type of rooted tree, by size then shape."""
    reps: list[FiniteTree] = []
    for n in range(min_nodes, max_nodes + 1):
        found: list[FiniteTree] = []
        for T in ordered_trees(n):
            if not any(trees_isomorphic(T, U) for U in found):
                found.append(T)
        reps.extend(sorted(found, key=lambda t: t.to_json()))
    return reps
