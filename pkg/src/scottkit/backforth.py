"""Back-and-forth equivalence levels and exact Scott ranks of finite structures.

The levels are computed on a table holding every injective tuple of each
structure (lengths 0..|universe|).  A tuple with repeated entries is
equivalent, at every level, to its deduplication carrying the same
repetition pattern, so the injective table decides all tuples.  One round
of refinement keys a tuple by its previous class together with the set of
previous classes of its one-point extensions by fresh elements; extensions
by an element already present are neutral and contribute nothing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .config import Budgets, get_budgets
from .core import FiniteStructure, automorphism_group, tuple_orbits
from .errors import BudgetExceeded, ShapeError, SignatureMismatch


def _dedup(t: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    pattern = tuple(t.index(x) for x in t)
    seen = tuple(dict.fromkeys(t))
    return pattern, seen


def _qf_key(A: FiniteStructure, t: tuple[int, ...]) -> tuple:
    n = len(t)
    parts = []
    for sym in A.signature:
        R = A.relations[sym.name]
        parts.append(tuple(pos for pos in itertools.product(range(n), repeat=sym.arity)
                           if tuple(t[i] for i in pos) in R))
    return (n, tuple(parts))


class BfTable:
    """Joint refinement table over one or more structures of one signature."""

    def __init__(self, structures: Sequence[FiniteStructure], budgets: Budgets | None = None):
        budgets = budgets or get_budgets()
        sig = structures[0].signature
        if any(S.signature != sig for S in structures):
            raise SignatureMismatch("back-and-forth needs a shared signature")
        self.structures = list(structures)
        size = sum(sum(_falling(len(S), n) for n in range(len(S) + 1)) for S in structures)
        if size > budgets.bf_tuples:
            raise BudgetExceeded(f"{size} injective tuples exceed bf budget {budgets.bf_tuples}")

        self.index: dict[tuple[int, tuple], int] = {}
        entries = []
        for side, S in enumerate(structures):
            for n in range(len(S) + 1):
                for t in itertools.permutations(S.universe, n):
                    self.index[(side, t)] = len(entries)
                    entries.append((side, t))
        self.entries = entries

        qf_ids: dict = {}
        cls0 = np.fromiter((qf_ids.setdefault(_qf_key(structures[s], t), len(qf_ids))
                            for s, t in entries), dtype=np.int64, count=len(entries))
        ptr = np.zeros(len(entries) + 1, dtype=np.int64)
        idx = []
        for i, (side, t) in enumerate(entries):
            for c in structures[side].universe:
                if c not in t:
                    idx.append(self.index[(side, t + (c,))])
            ptr[i + 1] = len(idx)
        idx = np.asarray(idx, dtype=np.int64)

        self.levels = [cls0]
        n_cls = len(qf_ids)
        while True:
            nxt, m = kernels.refine_step(self.levels[-1], ptr, idx)
            if m == n_cls:
                break
            self.levels.append(nxt)
            n_cls = m

    @property
    def stable(self) -> int:
        """Least level from which the whole table no longer changes."""
        return len(self.levels) - 1

    def key(self, side: int, t: Sequence[int], alpha: int) -> tuple:
        pattern, core = _dedup(tuple(t))
        cls = self.levels[min(alpha, self.stable)]
        return pattern, int(cls[self.index[(side, core)]])


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def bf_equiv(A: FiniteStructure, a: Sequence[int], B: FiniteStructure, b: Sequence[int],
             alpha: int, budgets: Budgets | None = None) -> bool:
    """Decide ``(A, a) ≡^alpha (B, b)``."""
    if len(a) != len(b):
        raise ShapeError(f"tuple lengths differ: {len(a)} vs {len(b)}")
    if alpha < 0:
        raise ShapeError("alpha must be a natural number")
    table = BfTable([A, B], budgets)
    return table.key(0, a, alpha) == table.key(1, b, alpha)


@dataclass(frozen=True)
class BfLevel:
    alpha: int
    classes: tuple[tuple[tuple[int, tuple], ...], ...]  # members are (side, tuple)


@dataclass(frozen=True)
class BfFixpoint:
    levels: tuple[BfLevel, ...]
    stabilized_at: int


def bf_fixpoint(A: FiniteStructure, B: FiniteStructure, length: int,
                budgets: Budgets | None = None) -> BfFixpoint:
    """Refining partitions of all ``length``-tuples of A and B, up to stabilisation.

    Side 0 is ``A`` and side 1 is ``B``.  ``stabilized_at`` is the first
    level whose partition equals the limit partition.
    """
    budgets = budgets or get_budgets()
    if (len(A) + len(B)) ** length > budgets.bf_tuples:
        raise BudgetExceeded(f"({len(A)}+{len(B)})^{length} tuples exceed bf budget")
    table = BfTable([A, B], budgets)
    members = [(side, t) for side, S in enumerate((A, B))
               for t in itertools.product(S.universe, repeat=length)]

    def partition(alpha):
        cells: dict = {}
        for side, t in members:
            cells.setdefault(table.key(side, t, alpha), []).append((side, t))
        return tuple(sorted(tuple(c) for c in cells.values()))

    parts = [partition(alpha) for alpha in range(table.stable + 1)]
    final = parts[-1]
    stab = next(i for i, p in enumerate(parts) if p == final)
    return BfFixpoint(tuple(BfLevel(i, parts[i]) for i in range(stab + 1)), stab)


@dataclass(frozen=True)
class ScottReport:
    tuple_ranks: dict
    structure_rank: int

    def to_json(self) -> dict:
        ranks = sorted(self.tuple_ranks.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return {
            "structure_rank": self.structure_rank,
            "tuple_ranks": [{"tuple": list(t), "rank": r} for t, r in ranks],
        }


def scott_report(A: FiniteStructure, budgets: Budgets | None = None) -> ScottReport:
    """Ranks of every injective tuple of ``A`` (lengths 0..|A|) and the structure's rank."""
    budgets = budgets or get_budgets()
    table = BfTable([A], budgets)
    gens = automorphism_group(A, full=len(A) <= budgets.aut_listing, budgets=budgets)
    tuples = [t for _, t in table.entries]
    orbit_of = {}
    for i, cell in enumerate(tuple_orbits(tuples, gens)):
        for t in cell:
            orbit_of[t] = i

    ranks: dict[tuple, int] = {}
    for alpha in range(table.stable + 1):
        cls = table.levels[alpha]
        seen: dict[int, set] = {}
        for i, t in enumerate(tuples):
            seen.setdefault(int(cls[i]), set()).add(orbit_of[t])
        for i, t in enumerate(tuples):
            if t not in ranks and len(seen[int(cls[i])]) == 1:
                ranks[t] = alpha
    missing = [t for t in tuples if t not in ranks]
    if missing:  # limit classes must coincide with orbits on finite structures
        raise AssertionError(f"limit level does not separate orbits: {missing[:3]}")
    return ScottReport(ranks, 1 + max(ranks.values()))


def scott_rank_tuple(A: FiniteStructure, a: Sequence[int], budgets: Budgets | None = None) -> int:
    if not set(a) <= set(A.universe):
        raise ShapeError(f"tuple {tuple(a)} is not over the universe")
    return scott_report(A, budgets).tuple_ranks[_dedup(tuple(a))[1]]


def scott_rank(A: FiniteStructure, budgets: Budgets | None = None) -> int:
    return scott_report(A, budgets).structure_rank
