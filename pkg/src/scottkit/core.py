"""Finite relational structures, atomic diagrams and exact isomorphism search.

Every other module builds on :class:`FiniteStructure`: trees, graphs, finite
orders and field presentations all reduce to it.  Isomorphism search runs
colour refinement on the disjoint union of the two structures and then
backtracks over individualised elements in a fixed order, so the witness it
returns is a deterministic function of the inputs.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Protocol, Sequence

from .config import Budgets, get_budgets
from .errors import (
    BudgetExceeded,
    InconsistentDiagram,
    InvalidStructure,
    SignatureMismatch,
)

EQ = "="


# ---------------------------------------------------------------------------
# id pairing

def pair(x: int, y: int) -> int:
    """Cantor pairing, a bijection N x N -> N."""
    return (x + y) * (x + y + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    w = int(((8 * z + 1) ** 0.5 - 1) // 2)
    # float sqrt can be off by one for large z
    while (w + 1) * (w + 2) // 2 <= z:
        w += 1
    while w * (w + 1) // 2 > z:
        w -= 1
    y = z - w * (w + 1) // 2
    return w - y, y


# ---------------------------------------------------------------------------
# signatures and structures

@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    functional: bool = False


@dataclass(frozen=True)
class Signature:
    symbols: tuple[Symbol, ...]

    def __post_init__(self):
        names = [s.name for s in self.symbols]
        if len(set(names)) != len(names):
            raise InvalidStructure(f"duplicate symbol names in {names}")
        for s in self.symbols:
            if s.arity < 1:
                raise InvalidStructure(f"symbol {s.name!r} has arity {s.arity} < 1")
            if s.name == EQ:
                raise InvalidStructure("'=' is reserved for equality facts")

    @classmethod
    def of(cls, *specs) -> "Signature":
        """``Signature.of(("E", 2), ("root", 1))``."""
        return cls(tuple(s if isinstance(s, Symbol) else Symbol(*s) for s in specs))

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, name: str) -> Symbol:
        for s in self.symbols:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.symbols)


@dataclass(frozen=True)
class FiniteStructure:
    signature: Signature
    universe: tuple[int, ...]
    relations: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        universe = tuple(sorted(set(self.universe)))
        object.__setattr__(self, "universe", universe)
        rels = {}
        members = set(universe)
        for sym in self.signature:
            tuples = frozenset(tuple(t) for t in self.relations.get(sym.name, ()))
            for t in tuples:
                if len(t) != sym.arity:
                    raise InvalidStructure(f"{sym.name}{t} has arity {len(t)}, expected {sym.arity}")
                if not members.issuperset(t):
                    raise InvalidStructure(f"{sym.name}{t} leaves the universe")
            if sym.functional:
                images: dict[tuple, int] = {}
                for t in tuples:
                    if images.setdefault(t[:-1], t[-1]) != t[-1]:
                        raise InvalidStructure(f"{sym.name} is not single-valued at {t[:-1]}")
                if len(images) != len(universe) ** (sym.arity - 1):
                    raise InvalidStructure(f"{sym.name} is not total")
            rels[sym.name] = tuples
        extra = set(self.relations) - set(rels)
        if extra:
            raise InvalidStructure(f"relations {sorted(extra)} are not in the signature")
        object.__setattr__(self, "relations", rels)

    def __len__(self):
        return len(self.universe)

    def holds(self, name: str, *args: int) -> bool:
        return tuple(args) in self.relations[name]

    def relabel(self, mapping: Mapping[int, int]) -> "FiniteStructure":
        rels = {name: {tuple(mapping[x] for x in t) for t in ts}
                for name, ts in self.relations.items()}
        return FiniteStructure(self.signature, tuple(mapping[x] for x in self.universe), rels)

    def normalized(self) -> "FiniteStructure":
        """Relabel the universe to 0..n-1 preserving order."""
        return self.relabel({x: i for i, x in enumerate(self.universe)})

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "signature": [{"name": s.name, "arity": s.arity, "functional": s.functional}
                          for s in self.signature],
            "universe": list(self.universe),
            "relations": {name: [list(t) for t in sorted(self.relations[name])]
                          for name in self.signature.names},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteStructure":
        try:
            sig = Signature(tuple(Symbol(s["name"], int(s["arity"]), bool(s.get("functional", False)))
                                  for s in data["signature"]))
            return cls(sig, tuple(int(x) for x in data["universe"]),
                       {k: [tuple(int(x) for x in t) for t in v]
                        for k, v in data.get("relations", {}).items()})
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidStructure(f"malformed structure JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


GRAPH = Signature.of(("E", 2))
ORDER = Signature.of(("lt", 2))


def make_graph(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> FiniteStructure:
    """Simple undirected graph; ``E`` is stored symmetrically."""
    es = set()
    for u, v in edges:
        if u == v:
            raise InvalidStructure(f"loop at {u}")
        es.add((u, v))
        es.add((v, u))
    return FiniteStructure(GRAPH, tuple(vertices), {"E": es})


def graph_edges(G: FiniteStructure) -> list[tuple[int, int]]:
    return sorted((u, v) for u, v in G.relations["E"] if u < v)


def is_simple_graph(G: FiniteStructure) -> bool:
    E = G.relations.get("E")
    if G.signature != GRAPH or E is None:
        return False
    return all(u != v and (v, u) in E for u, v in E)


def linear_order(n: int) -> FiniteStructure:
    """The strict order 0 < 1 < ... < n-1."""
    return FiniteStructure(ORDER, tuple(range(n)),
                           {"lt": {(i, j) for i in range(n) for j in range(i + 1, n)}})


def to_dot(A: FiniteStructure, relation: str | None = None,
           colors: Mapping[int, str] | None = None, name: str = "S") -> str:
    """DOT text for a structure with a binary relation.

    A symmetric relation is drawn as an undirected graph.
    """
    binaries = [s.name for s in A.signature if s.arity == 2]
    if relation is None:
        if not binaries:
            raise InvalidStructure("no binary relation to draw")
        relation = binaries[0]
    R = A.relations[relation]
    undirected = all((v, u) in R for u, v in R)
    kind, arrow = ("graph", "--") if undirected else ("digraph", "->")
    lines = [f"{kind} {name} {{"]
    unary = [s.name for s in A.signature if s.arity == 1]
    for x in A.universe:
        attrs = []
        if colors and x in colors:
            attrs.append(f'color="{colors[x]}"')
        marks = [u for u in unary if (x,) in A.relations[u]]
        if marks:
            attrs.append(f'label="{x} [{",".join(marks)}]"')
        lines.append(f"  {x}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for u, v in sorted(R):
        if undirected and u > v:
            continue
        lines.append(f"  {u} {arrow} {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# atomic diagrams and operators

class Fact(NamedTuple):
    symbol: str
    args: tuple
    positive: bool = True


@dataclass(frozen=True)
class AtomicDiagram:
    facts: frozenset = frozenset()

    def __post_init__(self):
        facts = frozenset(Fact(f[0], tuple(f[1]), bool(f[2])) for f in self.facts)
        object.__setattr__(self, "facts", facts)
        for f in facts:
            if f._replace(positive=not f.positive) in facts:
                raise InconsistentDiagram(f"{f.symbol}{f.args} asserted with both polarities")

    def __le__(self, other: "AtomicDiagram") -> bool:
        return self.facts <= other.facts

    def __or__(self, other: "AtomicDiagram") -> "AtomicDiagram":
        return AtomicDiagram(self.facts | other.facts)

    def __len__(self):
        return len(self.facts)

    def __iter__(self):
        return iter(sorted(self.facts))

    def positive(self) -> list[Fact]:
        return sorted(f for f in self.facts if f.positive)

    def is_complete_for(self, signature: Signature, universe: Sequence[int]) -> bool:
        keys = {(f.symbol, f.args) for f in self.facts}
        arities = [(EQ, 2)] + [(s.name, s.arity) for s in signature]
        return all((name, t) in keys
                   for name, k in arities
                   for t in itertools.product(universe, repeat=k))


def diagram(A: FiniteStructure) -> AtomicDiagram:
    """The complete atomic diagram of ``A``, equality facts included."""
    facts = []
    for x, y in itertools.product(A.universe, repeat=2):
        facts.append(Fact(EQ, (x, y), x == y))
    for sym in A.signature:
        R = A.relations[sym.name]
        for t in itertools.product(A.universe, repeat=sym.arity):
            facts.append(Fact(sym.name, t, t in R))
    return AtomicDiagram(frozenset(facts))


def structure_from_diagram(signature: Signature, D: AtomicDiagram) -> FiniteStructure:
    """Read a structure off the positive facts; ``x = x`` puts ``x`` in the universe."""
    universe = set()
    rels: dict[str, set] = {s.name: set() for s in signature}
    for f in D.positive():
        if f.symbol == EQ:
            if f.args[0] != f.args[1]:
                raise InconsistentDiagram(f"distinct ids asserted equal: {f.args}")
            universe.add(f.args[0])
        elif f.symbol in rels:
            rels[f.symbol].add(f.args)
        else:
            raise InconsistentDiagram(f"symbol {f.symbol!r} is not in the target signature")
    return FiniteStructure(signature, tuple(universe), rels)


class DiagramOperator(Protocol):
    """Finite realisation of a computable embedding.

    ``apply`` must be monotone in its argument and must never emit both
    polarities of one fact.
    """

    source_signature: Signature
    target_signature: Signature

    def apply(self, fragment: AtomicDiagram) -> AtomicDiagram: ...


def apply_operator(op: DiagramOperator, A: FiniteStructure,
                   budgets: Budgets | None = None) -> FiniteStructure:
    budgets = budgets or get_budgets()
    if A.signature != op.source_signature:
        raise SignatureMismatch("structure signature differs from the operator's source")
    cost = len(A) ** 2 + sum(len(A) ** s.arity for s in A.signature)
    if cost > budgets.operator_input:
        raise BudgetExceeded(f"diagram of {cost} facts exceeds operator budget {budgets.operator_input}")
    image = op.apply(diagram(A))  # AtomicDiagram construction rejects inconsistency
    return structure_from_diagram(op.target_signature, image)


# ---------------------------------------------------------------------------
# isomorphism search

def _check_signatures(A: FiniteStructure, B: FiniteStructure):
    if A.signature != B.signature:
        raise SignatureMismatch(f"{A.signature.names} vs {B.signature.names}")


class _Refiner:
    """Joint colour refinement over one or two structures."""

    def __init__(self, structures: Sequence[FiniteStructure]):
        self.structures = structures
        self.incidence = []
        for A in structures:
            inc: dict[int, list] = {x: [] for x in A.universe}
            for ri, sym in enumerate(A.signature):
                for t in A.relations[sym.name]:
                    for pos, x in enumerate(t):
                        inc[x].append((ri, pos, t))
            self.incidence.append(inc)

    def refine(self, colors: list[dict[int, int]]) -> list[dict[int, int]]:
        n_old = len({c for side in colors for c in side.values()})
        while True:
            sigs = []
            for side, inc in enumerate(self.incidence):
                col = colors[side]
                sigs.append({
                    x: (col[x], tuple(sorted((ri, pos, tuple(col[y] for y in t))
                                             for ri, pos, t in inc[x])))
                    for x in inc
                })
            ordered = sorted({s for side in sigs for s in side.values()})
            index = {s: i for i, s in enumerate(ordered)}
            colors = [{x: index[s] for x, s in side.items()} for side in sigs]
            if len(ordered) == n_old:
                return colors
            n_old = len(ordered)


def _cells(col: Mapping[int, int]) -> dict[int, list[int]]:
    cells: dict[int, list[int]] = {}
    for x in sorted(col):
        cells.setdefault(col[x], []).append(x)
    return cells


def _is_isomorphism(A: FiniteStructure, B: FiniteStructure, m: Mapping[int, int]) -> bool:
    return all({tuple(m[x] for x in t) for t in A.relations[n]} == B.relations[n]
               for n in A.signature.names)


def _initial_colors(A, B, fix) -> list[dict[int, int]] | None:
    colA = {x: 0 for x in A.universe}
    colB = {y: 0 for y in B.universe}
    seen: dict[int, int] = {}
    seen_back: dict[int, int] = {}
    for x, y in fix:
        if x not in colA or y not in colB:
            raise InvalidStructure(f"pinned pair ({x}, {y}) outside the universes")
        if seen.setdefault(x, y) != y or seen_back.setdefault(y, x) != x:
            return None
    for i, x in enumerate(seen):
        colA[x] = colB[seen[x]] = i + 1
    return [colA, colB]


def iter_isomorphisms(A: FiniteStructure, B: FiniteStructure,
                      fix: Iterable[tuple[int, int]] = ()) -> Iterator[dict[int, int]]:
    """All isomorphisms ``A -> B`` extending ``fix``, in a deterministic order."""
    _check_signatures(A, B)
    if len(A) != len(B) or any(len(A.relations[n]) != len(B.relations[n])
                               for n in A.signature.names):
        return
    colors = _initial_colors(A, B, list(fix))
    if colors is None:
        return
    refiner = _Refiner([A, B])

    def search(colors):
        colors = refiner.refine(colors)
        cellsA, cellsB = _cells(colors[0]), _cells(colors[1])
        if {c: len(v) for c, v in cellsA.items()} != {c: len(v) for c, v in cellsB.items()}:
            return
        target = next((c for c in sorted(cellsA) if len(cellsA[c]) > 1), None)
        if target is None:
            m = {cellsA[c][0]: cellsB[c][0] for c in cellsA}
            if _is_isomorphism(A, B, m):
                yield m
            return
        x = cellsA[target][0]
        fresh = max(cellsA) + 1
        for y in cellsB[target]:
            colA, colB = dict(colors[0]), dict(colors[1])
            colA[x] = colB[y] = fresh
            yield from search([colA, colB])

    yield from search(colors)


def isomorphic(A: FiniteStructure, B: FiniteStructure,
               fix: Iterable[tuple[int, int]] = (),
               budgets: Budgets | None = None) -> dict[int, int] | None:
    """Return an isomorphism ``A -> B`` (extending the pinned pairs ``fix``), or None.

    Raises SignatureMismatch when the signatures differ and BudgetExceeded
    above the configured universe size.
    """
    budgets = budgets or get_budgets()
    _check_signatures(A, B)
    if max(len(A), len(B)) > budgets.iso_size:
        raise BudgetExceeded(f"universe size {max(len(A), len(B))} exceeds iso budget {budgets.iso_size}")
    return next(iter_isomorphisms(A, B, fix), None)


def same_orbit(A: FiniteStructure, a: Sequence[int], b: Sequence[int],
               budgets: Budgets | None = None) -> bool:
    """True iff some automorphism of ``A`` maps the tuple ``a`` onto ``b``."""
    if len(a) != len(b):
        return False
    return isomorphic(A, A, zip(a, b), budgets) is not None


def automorphism_group(A: FiniteStructure, full: bool = True,
                       budgets: Budgets | None = None) -> list[dict[int, int]]:
    """Automorphisms of ``A``.

    With ``full`` the complete group is listed (identity first), which is
    only allowed up to ``budgets.aut_listing`` elements.  Otherwise a
    generating set is returned: a transversal for each step of a pointwise
    stabiliser chain.
    """
    budgets = budgets or get_budgets()
    if full:
        if len(A) > budgets.aut_listing:
            raise BudgetExceeded(f"full automorphism listing capped at {budgets.aut_listing} elements")
        auts = list(iter_isomorphisms(A, A))
        ident = {x: x for x in A.universe}
        auts.sort(key=lambda m: (m != ident, [m[x] for x in A.universe]))
        return auts
    if len(A) > budgets.iso_size:
        raise BudgetExceeded(f"universe size {len(A)} exceeds iso budget {budgets.iso_size}")
    refiner = _Refiner([A])
    gens = []
    base: list[int] = []
    for x in A.universe:
        col = {y: 0 for y in A.universe}
        for i, b in enumerate(base):
            col[b] = i + 1
        col = refiner.refine([col])[0]
        if len(set(col.values())) == len(A):
            break
        for y in A.universe:
            if y != x and col[y] == col[x]:
                m = next(iter_isomorphisms(A, A, [(b, b) for b in base] + [(x, y)]), None)
                if m is not None:
                    gens.append(m)
        base.append(x)
    return gens


def tuple_orbits(nodes: list, gens: list[dict[int, int]]) -> list[list]:
    """Orbits of ``gens`` acting coordinatewise on ``nodes`` (which must be closed under it)."""
    parent = {t: t for t in nodes}

    def find(t):
        while parent[t] != t:
            parent[t] = parent[parent[t]]
            t = parent[t]
        return t

    for g in gens:
        for t in nodes:
            u = tuple(g[x] for x in t)
            ra, rb = find(t), find(u)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    cells: dict = {}
    for t in nodes:
        cells.setdefault(find(t), []).append(t)
    return sorted(cells.values())


def orbits(A: FiniteStructure, k: int, budgets: Budgets | None = None) -> list[list[tuple]]:
    """Partition of all k-tuples of ``A`` into automorphism orbits, cells sorted."""
    budgets = budgets or get_budgets()
    if len(A) ** k > budgets.orbit_tuples:
        raise BudgetExceeded(f"{len(A)}^{k} tuples exceed orbit budget {budgets.orbit_tuples}")
    gens = automorphism_group(A, full=len(A) <= budgets.aut_listing, budgets=budgets)
    return tuple_orbits(list(itertools.product(A.universe, repeat=k)), gens)


def orbit_partition(A: FiniteStructure, tuples: Sequence[Sequence[int]],
                    budgets: Budgets | None = None) -> list[list[tuple]]:
    """Group the given tuples by automorphism orbit using pointed isomorphism tests."""
    budgets = budgets or get_budgets()
    base = _Refiner([A]).refine([{x: 0 for x in A.universe}])[0]
    reps: dict[tuple, list[list[tuple]]] = {}
    cells: list[list[tuple]] = []
    for t in sorted(set(map(tuple, tuples))):
        pattern = tuple(t.index(x) for x in t)
        key = (pattern, tuple(base[x] for x in t))
        for cell in reps.setdefault(key, []):
            if same_orbit(A, t, cell[0], budgets):
                cell.append(t)
                break
        else:
            cell = [t]
            reps[key].append(cell)
            cells.append(cell)
    return sorted(cells)
