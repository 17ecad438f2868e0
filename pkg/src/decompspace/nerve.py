"""
Nerves of finite posets and finite categories
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import structlog

from .exceptions import DocumentError, PreconditionError
from .sset import Cell, Provenance, TruncatedSSet

logger = structlog.get_logger()

RESERVED = set("(),")


def _check_name(name: str, where: str) -> None:
    if not name or RESERVED & set(name) or name != name.strip():
        raise DocumentError(f"name {name!r} is empty or uses one of '(),' or outer spaces", where)


@dataclass(frozen=True, eq=False)
class Poset:
    """A finite partial order; graph holds the strict relation, transitively closed"""

    elements: Tuple[str, ...]
    graph: nx.DiGraph = field(repr=False)

    @classmethod
    def from_relations(
        cls, elements: Sequence[str], pairs: Iterable[Tuple[str, str]], kind: str = "covers"
    ) -> "Poset":
        for name in elements:
            _check_name(name, "elements")
        if len(set(elements)) != len(elements):
            raise DocumentError("duplicate element", "elements")
        pairs = [tuple(p) for p in pairs]
        known = set(elements)
        for index, (a, b) in enumerate(pairs):
            if a not in known or b not in known:
                raise DocumentError(f"unknown element in ({a}, {b})", f"relations[{index}]")

        strict = nx.DiGraph()
        strict.add_nodes_from(elements)
        strict.add_edges_from((a, b) for a, b in pairs if a != b)
        if not nx.is_directed_acyclic_graph(strict):
            cycle = nx.find_cycle(strict)
            raise DocumentError(f"cycle detected through {cycle[0][0]}", "relations")

        if kind == "order":
            given = set(pairs)
            missing = [x for x in elements if (x, x) not in given]
            if missing:
                raise DocumentError(f"order is not reflexive at {missing[0]}", "relations")
            for a, b in strict.edges:
                for c in strict.successors(b):
                    if (a, c) not in given:
                        raise DocumentError(f"order is not transitive at ({a}, {b}, {c})", "relations")
            closed = strict
        elif kind == "covers":
            closed = nx.transitive_closure_dag(strict)
        else:
            raise DocumentError(f"unknown relation kind {kind!r}", "kind")
        return cls(tuple(elements), closed)

    def leq(self, a: str, b: str) -> bool:
        return a == b or self.graph.has_edge(a, b)

    def above(self, a: str) -> List[str]:
        """Elements b with a <= b, in element order"""
        return [b for b in self.elements if self.leq(a, b)]

    @property
    def chain_bound(self) -> int:
        """Edge count of the longest strict chain"""
        return nx.dag_longest_path_length(self.graph) if self.elements else 0

    def interval(self, a: str, b: str) -> List[str]:
        return [z for z in self.elements if self.leq(a, z) and self.leq(z, b)]

    def as_category(self) -> "FiniteCategory":
        morphisms = {}
        compose = {}
        for a in self.elements:
            for b in self.above(a):
                morphisms[f"{a}<={b}"] = (a, b)
        for a in self.elements:
            for b in self.above(a):
                for c in self.above(b):
                    compose[(f"{b}<={c}", f"{a}<={b}")] = f"{a}<={c}"
        identities = {a: f"{a}<={a}" for a in self.elements}
        return FiniteCategory(self.elements, morphisms, identities, compose)


def chain_name(chain: Sequence[str]) -> Cell:
    return "(" + ",".join(chain) + ")"


def _weak_chains(P: Poset, n: int) -> List[Tuple[str, ...]]:
    chains: List[Tuple[str, ...]] = [(x,) for x in P.elements]
    for _ in range(n):
        chains = [c + (y,) for c in chains for y in P.above(c[-1])]
    return chains


def nerve(P: Poset, cap: Optional[int] = None, name: str = "") -> TruncatedSSet:
    """Weakly increasing chains; the cap defaults to one above the longest strict chain"""
    bound = P.chain_bound
    if cap is None:
        cap = max(bound + 1, 2)
    if cap < 2:
        raise PreconditionError(f"nerves are built with cap >= 2, got {cap}")
    levels = [_weak_chains(P, n) for n in range(cap + 1)]
    cells = [[chain_name(c) for c in level] for level in levels]
    faces = {
        (n, i): {chain_name(c): chain_name(c[:i] + c[i + 1 :]) for c in levels[n]}
        for n in range(1, cap + 1)
        for i in range(n + 1)
    }
    degeneracies = {
        (n, i): {chain_name(c): chain_name(c[: i + 1] + c[i:]) for c in levels[n]}
        for n in range(cap)
        for i in range(n + 1)
    }
    logger.debug("Nerve built", elements=len(P.elements), cap=cap, chain_bound=bound)
    return TruncatedSSet(
        cap, cells, faces, degeneracies, Provenance.NERVE, bound, name=name or "nerve"
    )


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """Objects, morphisms with (source, target), identities and a composition table

    compose[(g, f)] is g after f, for f: a -> b and g: b -> c.
    """

    objects: Sequence[str]
    morphisms: Mapping[str, Tuple[str, str]]
    identities: Mapping[str, str]
    compose: Mapping[Tuple[str, str], str]

    def __post_init__(self):
        for name in self.objects:
            _check_name(name, "objects")
        for f, (a, b) in self.morphisms.items():
            if not f or "->" in f or f != f.strip() or a not in self.objects or b not in self.objects:
                raise DocumentError(f"malformed morphism {f!r}", f"morphisms.{f}")
        for x in self.objects:
            ident = self.identities.get(x)
            if ident is None or self.morphisms.get(ident) != (x, x):
                raise DocumentError(f"no identity on {x}", f"identities.{x}")
        for f, (a, b) in self.morphisms.items():
            for g, (b2, c) in self.morphisms.items():
                if b2 != b:
                    continue
                h = self.compose.get((g, f))
                if h is None or self.morphisms.get(h) != (a, c):
                    raise DocumentError(f"composite {g} o {f} missing or mistyped", "compose")
        for f, (a, b) in self.morphisms.items():
            if self.compose[(f, self.identities[a])] != f or self.compose[(self.identities[b], f)] != f:
                raise DocumentError(f"identities are not units for {f}", "compose")
        for f, (a, b) in self.morphisms.items():
            for g in self.out_of(b):
                for h in self.out_of(self.morphisms[g][1]):
                    left = self.compose[(h, self.compose[(g, f)])]
                    right = self.compose[(self.compose[(h, g)], f)]
                    if left != right:
                        raise DocumentError(f"composition is not associative at ({h}, {g}, {f})", "compose")

    def out_of(self, a: str) -> List[str]:
        return [f for f, (src, _) in self.morphisms.items() if src == a]

    def is_identity(self, f: str) -> bool:
        src, tgt = self.morphisms[f]
        return src == tgt and self.identities[src] == f


def _category_chains(C: FiniteCategory, n: int) -> List[Tuple[str, ...]]:
    chains: List[Tuple[str, ...]] = [(f,) for f in C.morphisms]
    for _ in range(n - 1):
        chains = [c + (g,) for c in chains for g in C.out_of(C.morphisms[c[-1]][1])]
    return chains


def string_name(C: FiniteCategory, chain: Sequence[str]) -> Cell:
    parts = [C.morphisms[chain[0]][0]]
    for f in chain:
        parts.append(f"-{f}-> {C.morphisms[f][1]}")
    return " ".join(parts)


def nerve_category(
    C: FiniteCategory, cap: int, declared_bound: Optional[int] = None, name: str = ""
) -> TruncatedSSet:
    """Composable strings of morphisms; nerve provenance only when the declared bound checks out"""
    if cap < 2:
        raise PreconditionError(f"nerves are built with cap >= 2, got {cap}")
    levels: List[List[Tuple[str, ...]]] = [[(x,) for x in C.objects]]
    levels += [_category_chains(C, n) for n in range(1, cap + 1)]

    def named(n: int, chain: Tuple[str, ...]) -> Cell:
        return chain[0] if n == 0 else string_name(C, chain)

    def face(n: int, i: int, chain: Tuple[str, ...]) -> Tuple[str, ...]:
        if n == 1:
            src, tgt = C.morphisms[chain[0]]
            return (tgt,) if i == 0 else (src,)
        if i == 0:
            return chain[1:]
        if i == n:
            return chain[:-1]
        return chain[: i - 1] + (C.compose[(chain[i], chain[i - 1])],) + chain[i + 1 :]

    def degeneracy(n: int, i: int, chain: Tuple[str, ...]) -> Tuple[str, ...]:
        if n == 0:
            return (C.identities[chain[0]],)
        obj = C.morphisms[chain[i]][0] if i < n else C.morphisms[chain[-1]][1]
        return chain[:i] + (C.identities[obj],) + chain[i:]

    cells = [[named(n, c) for c in level] for n, level in enumerate(levels)]
    faces = {
        (n, i): {named(n, c): named(n - 1, face(n, i, c)) for c in levels[n]}
        for n in range(1, cap + 1)
        for i in range(n + 1)
    }
    degeneracies = {
        (n, i): {named(n, c): named(n + 1, degeneracy(n, i, c)) for c in levels[n]}
        for n in range(cap)
        for i in range(n + 1)
    }

    provenance, bound = Provenance.RAW, None
    if declared_bound is not None and declared_bound < cap:
        longer = [
            c for c in levels[declared_bound + 1] if not any(C.is_identity(f) for f in c)
        ]
        if longer:
            logger.warning(
                "Declared chain bound does not hold",
                declared=declared_bound,
                witness=named(declared_bound + 1, longer[0]),
            )
        else:
            provenance, bound = Provenance.NERVE, declared_bound
    return TruncatedSSet(
        cap, cells, faces, degeneracies, provenance, bound, name=name or "category nerve"
    )


def discrete_poset(elements: Sequence[str]) -> Poset:
    return Poset.from_relations(elements, [], "covers")


def chain_poset(length: int) -> Poset:
    """0 < 1 < ... < length"""
    names = [str(i) for i in range(length + 1)]
    return Poset.from_relations(names, list(zip(names, names[1:])), "covers")


def vertex_names(X: TruncatedSSet, names: Iterable[str]) -> List[Cell]:
    """Map element names to vertex cells, accepting bare poset element names"""
    level = set(X.level(0))
    resolved = []
    for name in names:
        if name in level:
            resolved.append(name)
        elif chain_name([name]) in level:
            resolved.append(chain_name([name]))
        else:
            raise DocumentError(f"{name!r} is not a vertex", "vertices")
    return resolved


def element_of(cell: Cell) -> str:
    return cell[1:-1] if cell.startswith("(") and cell.endswith(")") else cell
