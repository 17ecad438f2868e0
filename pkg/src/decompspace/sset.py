"""
Finite truncated simplicial sets
Face/degeneracy tables, the contravariant action of monotone maps, simplicial
maps and subobjects, and the finite-set pullback checker
"""

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import structlog

from .delta import MonotoneMap, epi_mono_factor, principal_edge
from .exceptions import (
    ArityError,
    InvalidMapError,
    NonCommutingSquareError,
    PreconditionError,
    SimplicialIdentityError,
)

logger = structlog.get_logger()

Cell = str
FiniteMap = Union[Mapping[Any, Any], Callable[[Any], Any]]


class Provenance(str, Enum):
    """How a simplicial set was obtained; nerves carry a chain bound"""

    NERVE = "nerve"
    RAW = "raw"


@dataclass(frozen=True)
class IdentityViolation:
    """A simplicial identity (or table entry) that fails on a given cell"""

    identity: str
    level: int
    cell: Cell
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.identity} fails on level-{self.level} cell {self.cell}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: Tuple[IdentityViolation, ...] = ()


@dataclass(frozen=True, eq=False)
class TruncatedSSet:
    """A finite simplicial set given up to level cap

    faces[(n, i)] is d_i: X_n -> X_{n-1} and degeneracies[(n, i)] is
    s_i: X_n -> X_{n+1}. Identities are checked at construction unless
    validate is false.
    """

    cap: int
    cells: Sequence[Sequence[Cell]]
    faces: Mapping[Tuple[int, int], Mapping[Cell, Cell]]
    degeneracies: Mapping[Tuple[int, int], Mapping[Cell, Cell]]
    provenance: Provenance = Provenance.RAW
    chain_bound: Optional[int] = None
    name: str = ""
    validate: bool = field(default=True, repr=False)
    _cache: Dict[Hashable, Any] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(tuple(level) for level in self.cells))
        object.__setattr__(self, "faces", {k: dict(v) for k, v in self.faces.items()})
        object.__setattr__(
            self, "degeneracies", {k: dict(v) for k, v in self.degeneracies.items()}
        )
        object.__setattr__(self, "provenance", Provenance(self.provenance))
        problems = self._structural_problems()
        if problems:
            raise SimplicialIdentityError(
                f"malformed simplicial set: {problems[0]}", violations=problems
            )
        if self.validate:
            report = validate(self)
            if not report.valid:
                raise SimplicialIdentityError(
                    f"{len(report.violations)} simplicial identity violations, "
                    f"first: {report.violations[0]}",
                    violations=list(report.violations),
                )

    def _structural_problems(self) -> List[IdentityViolation]:
        problems: List[IdentityViolation] = []
        if self.cap < 0 or len(self.cells) != self.cap + 1:
            return [IdentityViolation("levels", self.cap, "", f"expected {self.cap + 1} levels")]
        seen: Dict[Cell, int] = {}
        for n, level in enumerate(self.cells):
            for cell in level:
                if cell in seen:
                    problems.append(
                        IdentityViolation("disjoint levels", n, cell, f"also on level {seen[cell]}")
                    )
                seen[cell] = n
        for n in range(1, self.cap + 1):
            targets = set(self.cells[n - 1])
            for i in range(n + 1):
                table = self.faces.get((n, i))
                if table is None:
                    problems.append(IdentityViolation(f"d_{i}", n, "", "face table missing"))
                    continue
                for cell in self.cells[n]:
                    if table.get(cell) not in targets:
                        problems.append(
                            IdentityViolation(f"d_{i}", n, cell, "not a cell of the level below")
                        )
        for n in range(self.cap):
            targets = set(self.cells[n + 1])
            for i in range(n + 1):
                table = self.degeneracies.get((n, i))
                if table is None:
                    problems.append(IdentityViolation(f"s_{i}", n, "", "degeneracy table missing"))
                    continue
                for cell in self.cells[n]:
                    if table.get(cell) not in targets:
                        problems.append(
                            IdentityViolation(f"s_{i}", n, cell, "not a cell of the level above")
                        )
        return problems

    def level(self, n: int) -> Tuple[Cell, ...]:
        if not 0 <= n <= self.cap:
            raise ArityError(f"level {n} is outside the cap {self.cap}")
        return self.cells[n]

    def d(self, i: int, n: int, cell: Cell) -> Cell:
        """Face d_i of a level-n cell"""
        return self.faces[(n, i)][cell]

    def s(self, i: int, n: int, cell: Cell) -> Cell:
        """Degeneracy s_i of a level-n cell"""
        if n >= self.cap:
            raise ArityError(f"s_{i} on level {n} needs level {n + 1} above the cap {self.cap}")
        return self.degeneracies[(n, i)][cell]

    def level_of(self, cell: Cell) -> int:
        index = self._cache.get("level_of")
        if index is None:
            index = {c: n for n, level in enumerate(self.cells) for c in level}
            self._cache["level_of"] = index
        return index[cell]

    def is_empty(self) -> bool:
        return not self.cells[0]

    def nondegenerate(self, n: int) -> Tuple[Cell, ...]:
        key = ("nondegenerate", n)
        if key not in self._cache:
            if n == 0:
                self._cache[key] = self.level(0)
            else:
                self._cache[key] = tuple(c for c in self.level(n) if not is_degenerate(self, n, c))
        return self._cache[key]

    def vertex_tuples(self, n: int) -> Dict[Cell, Tuple[Cell, ...]]:
        key = ("vertices", n)
        if key not in self._cache:
            maps = [act(self, MonotoneMap(0, n, (j,))) for j in range(n + 1)]
            self._cache[key] = {c: tuple(m[c] for m in maps) for c in self.level(n)}
        return self._cache[key]

    def cells_by_vertices(self, n: int) -> Dict[Tuple[Cell, ...], List[Cell]]:
        key = ("by_vertices", n)
        if key not in self._cache:
            index: Dict[Tuple[Cell, ...], List[Cell]] = defaultdict(list)
            for cell, verts in self.vertex_tuples(n).items():
                index[verts].append(cell)
            self._cache[key] = dict(index)
        return self._cache[key]

    def is_vertex_determined(self) -> bool:
        """Every cell is determined by its vertex tuple"""
        return all(
            len(group) == 1
            for n in range(self.cap + 1)
            for group in self.cells_by_vertices(n).values()
        )

    def triangles_over(self) -> Dict[Cell, List[Cell]]:
        """Level-2 cells grouped by their d_1 face"""
        if "triangles" not in self._cache:
            index: Dict[Cell, List[Cell]] = defaultdict(list)
            for sigma in self.level(2):
                index[self.d(1, 2, sigma)].append(sigma)
            self._cache["triangles"] = dict(index)
        return self._cache["triangles"]

    def label(self) -> str:
        return self.name or f"sset(cap={self.cap})"


def validate(X: TruncatedSSet) -> ValidationReport:
    """Check every simplicial identity defined within the cap"""
    violations: List[IdentityViolation] = []
    d, s = X.d, X.s

    def expect(identity: str, n: int, cell: Cell, left: Cell, right: Cell):
        if left != right:
            violations.append(IdentityViolation(identity, n, cell, f"{left} != {right}"))

    for n in range(2, X.cap + 1):
        for x in X.cells[n]:
            for j in range(1, n + 1):
                for i in range(j):
                    expect(
                        f"d_{i} d_{j} = d_{j - 1} d_{i}",
                        n,
                        x,
                        d(i, n - 1, d(j, n, x)),
                        d(j - 1, n - 1, d(i, n, x)),
                    )
    for n in range(X.cap):
        for x in X.cells[n]:
            for j in range(n + 1):
                y = s(j, n, x)
                for i in range(n + 2):
                    if i in (j, j + 1):
                        expect(f"d_{i} s_{j} = id", n, x, d(i, n + 1, y), x)
                    elif i < j:
                        expect(
                            f"d_{i} s_{j} = s_{j - 1} d_{i}",
                            n,
                            x,
                            d(i, n + 1, y),
                            s(j - 1, n - 1, d(i, n, x)),
                        )
                    else:
                        expect(
                            f"d_{i} s_{j} = s_{j} d_{i - 1}",
                            n,
                            x,
                            d(i, n + 1, y),
                            s(j, n - 1, d(i - 1, n, x)),
                        )
    for n in range(X.cap - 1):
        for x in X.cells[n]:
            for j in range(n + 1):
                for i in range(j + 1):
                    expect(
                        f"s_{i} s_{j} = s_{j + 1} s_{i}",
                        n,
                        x,
                        s(i, n + 1, s(j, n, x)),
                        s(j + 1, n + 1, s(i, n, x)),
                    )
    if violations:
        logger.warning("Simplicial identities violated", name=X.label(), count=len(violations))
    return ValidationReport(valid=not violations, violations=tuple(violations))


def act(X: TruncatedSSet, phi: MonotoneMap) -> Dict[Cell, Cell]:
    """The table of X(phi): X_n -> X_m, evaluated through the epi-mono factorisation"""
    m, n = phi.source_arity, phi.target_arity
    if m > X.cap or n > X.cap:
        raise ArityError(f"{phi} needs levels above the cap {X.cap}")
    key = ("act", phi)
    cached = X._cache.get(key)
    if cached is not None:
        return cached

    surjection, injection = epi_mono_factor(phi)
    missing = [v for v in range(n + 1) if v not in set(injection.values)]
    table: Dict[Cell, Cell] = {}
    for cell in X.cells[n]:
        current, level = cell, n
        for j in reversed(missing):
            current = X.d(j, level, current)
            level -= 1
        for i in range(m):
            if surjection.values[i] == surjection.values[i + 1]:
                current = X.s(i, level, current)
                level += 1
        table[cell] = current
    X._cache[key] = table
    return table


def is_degenerate(X: TruncatedSSet, n: int, cell: Cell) -> bool:
    if n == 0:
        raise PreconditionError("vertices are nondegenerate by convention")
    return any(X.s(i, n - 1, X.d(i, n, cell)) == cell for i in range(n))


def long_edge(X: TruncatedSSet, n: int, cell: Cell) -> Cell:
    if n == 0:
        return X.s(0, 0, cell)
    return act(X, MonotoneMap(1, n, (0, n)))[cell]


def vertices(X: TruncatedSSet, n: int, cell: Cell) -> Tuple[Cell, ...]:
    return X.vertex_tuples(n)[cell]


def principal_edges(X: TruncatedSSet, n: int, cell: Cell) -> Tuple[Cell, ...]:
    return tuple(act(X, principal_edge(i, n))[cell] for i in range(1, n + 1))


def is_effective(X: TruncatedSSet, n: int, cell: Cell) -> bool:
    """All principal edges nondegenerate; vertices are effective"""
    return all(not is_degenerate(X, 1, e) for e in principal_edges(X, n, cell))


def terminal(cap: int) -> TruncatedSSet:
    """The one-point simplicial set"""
    cells = [[f"*{n}"] for n in range(cap + 1)]
    faces = {(n, i): {f"*{n}": f"*{n - 1}"} for n in range(1, cap + 1) for i in range(n + 1)}
    degeneracies = {(n, i): {f"*{n}": f"*{n + 1}"} for n in range(cap) for i in range(n + 1)}
    return TruncatedSSet(
        cap, cells, faces, degeneracies, Provenance.RAW, name="point"
    )


# Pullback squares of finite sets


def _apply(f: FiniteMap, x: Any) -> Any:
    return f[x] if isinstance(f, Mapping) else f(x)


@dataclass(frozen=True)
class Square:
    """A commutative square of finite sets

        P --top--> A
        |          |
       left      right
        v          v
        B --bottom--> C
    """

    P: Sequence[Any]
    A: Sequence[Any]
    B: Sequence[Any]
    C: Sequence[Any]
    top: FiniteMap
    left: FiniteMap
    right: FiniteMap
    bottom: FiniteMap
    label: str = ""


@dataclass(frozen=True)
class PullbackWitness:
    """missing: a fibre-product pair with no preimage; collision: two P elements with one image"""

    kind: str
    pair: Tuple[Any, Any]
    elements: Tuple[Any, ...] = ()

    def describe(self) -> str:
        if self.kind == "missing":
            return f"no element of P over {self.pair}"
        return f"{self.elements[0]} and {self.elements[1]} both map to {self.pair}"


@dataclass(frozen=True)
class PullbackVerdict:
    is_pullback: bool
    witness: Optional[PullbackWitness] = None
    label: str = ""

    def __bool__(self) -> bool:
        return self.is_pullback


def fiber_product(
    A: Iterable[Any], B: Iterable[Any], f: FiniteMap, g: FiniteMap
) -> List[Tuple[Any, Any]]:
    """A x_C B for f: A -> C and g: B -> C, in (A, B) order"""
    over: Dict[Any, List[Any]] = defaultdict(list)
    for b in B:
        over[_apply(g, b)].append(b)
    return [(a, b) for a in A for b in over.get(_apply(f, a), ())]


def is_injective(f: FiniteMap, domain: Iterable[Any]) -> bool:
    images = [_apply(f, x) for x in domain]
    return len(images) == len(set(images))


def is_pullback(sq: Square) -> PullbackVerdict:
    """Whether P -> A x_C B is a bijection"""
    images: Dict[Tuple[Any, Any], Any] = {}
    for p in sq.P:
        a, b = _apply(sq.top, p), _apply(sq.left, p)
        if _apply(sq.right, a) != _apply(sq.bottom, b):
            raise NonCommutingSquareError(
                f"square {sq.label or '?'} does not commute on {p}", element=p
            )
        if (a, b) in images:
            witness = PullbackWitness("collision", (a, b), (images[(a, b)], p))
            return PullbackVerdict(False, witness, sq.label)
        images[(a, b)] = p
    for pair in fiber_product(sq.A, sq.B, sq.right, sq.bottom):
        if pair not in images:
            return PullbackVerdict(False, PullbackWitness("missing", pair), sq.label)
    return PullbackVerdict(True, None, sq.label)


def diagonal_square(f: FiniteMap, domain: Sequence[Any], codomain: Sequence[Any]) -> Square:
    """The square with identities on P -> A, P -> B and f twice; a pullback iff f is mono"""
    identity = {x: x for x in domain}
    return Square(domain, domain, domain, codomain, identity, identity, f, f, "diagonal")


def paste(left: Square, right: Square) -> Square:
    """Horizontal composite; left.A is right.P and left.right is right.left"""
    if set(left.A) != set(right.P) or set(left.C) != set(right.B):
        raise InvalidMapError("squares do not share their middle edge")
    for a in left.A:
        if _apply(left.right, a) != _apply(right.left, a):
            raise InvalidMapError(f"middle edges disagree on {a}")
    return Square(
        left.P,
        right.A,
        left.B,
        right.C,
        {p: _apply(right.top, _apply(left.top, p)) for p in left.P},
        left.left,
        right.right,
        {b: _apply(right.bottom, _apply(left.bottom, b)) for b in left.B},
        f"{left.label}|{right.label}",
    )


# Simplicial maps and subobjects


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    """Levelwise map Y -> X commuting with all faces and degeneracies"""

    source: TruncatedSSet
    target: TruncatedSSet
    components: Mapping[int, Mapping[Cell, Cell]]

    def __post_init__(self):
        if self.source.cap != self.target.cap:
            raise InvalidMapError(
                f"mismatched caps {self.source.cap} and {self.target.cap}"
            )
        object.__setattr__(self, "components", {n: dict(c) for n, c in self.components.items()})
        Y, X = self.source, self.target
        for n in range(Y.cap + 1):
            component = self.components.get(n)
            if component is None:
                raise InvalidMapError(f"component f_{n} missing")
            level = set(X.cells[n])
            for y in Y.cells[n]:
                if component.get(y) not in level:
                    raise InvalidMapError(f"f_{n} sends {y} outside level {n} of the target")
        for n in range(1, Y.cap + 1):
            for i in range(n + 1):
                for y in Y.cells[n]:
                    if self.components[n - 1][Y.d(i, n, y)] != X.d(i, n, self.components[n][y]):
                        raise InvalidMapError(f"f does not commute with d_{i} on {y}")
        for n in range(Y.cap):
            for i in range(n + 1):
                for y in Y.cells[n]:
                    if self.components[n + 1][Y.s(i, n, y)] != X.s(i, n, self.components[n][y]):
                        raise InvalidMapError(f"f does not commute with s_{i} on {y}")

    def __call__(self, n: int, cell: Cell) -> Cell:
        return self.components[n][cell]

    @classmethod
    def identity(cls, X: TruncatedSSet) -> "SimplicialMap":
        return cls(X, X, {n: {c: c for c in X.cells[n]} for n in range(X.cap + 1)})

    @classmethod
    def to_terminal(cls, X: TruncatedSSet) -> "SimplicialMap":
        point = terminal(X.cap)
        return cls(X, point, {n: {c: f"*{n}" for c in X.cells[n]} for n in range(X.cap + 1)})

    @classmethod
    def from_vertex_map(
        cls, source: TruncatedSSet, target: TruncatedSSet, vertex_map: Mapping[Cell, Cell]
    ) -> "SimplicialMap":
        """Induce all components from f_0 when target cells are determined by vertices"""
        components: Dict[int, Dict[Cell, Cell]] = {}
        for n in range(source.cap + 1):
            index = target.cells_by_vertices(n)
            component = {}
            for y, verts in source.vertex_tuples(n).items():
                image = tuple(vertex_map.get(v) for v in verts)
                candidates = index.get(image, [])
                if len(candidates) != 1:
                    raise InvalidMapError(
                        f"{y} has {len(candidates)} candidate images over vertices {image}"
                    )
                component[y] = candidates[0]
            components[n] = component
        return cls(source, target, components)


def is_mono_on_objects(f: SimplicialMap) -> bool:
    return is_injective(f.components[0], f.source.cells[0])


@dataclass(frozen=True, eq=False)
class SubSSet:
    """Levelwise subset of an ambient simplicial set closed under faces and degeneracies"""

    ambient: TruncatedSSet
    selected: Sequence[FrozenSet[Cell]]
    _cache: Dict[str, Any] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        X = self.ambient
        object.__setattr__(self, "selected", tuple(frozenset(s) for s in self.selected))
        if len(self.selected) != X.cap + 1:
            raise InvalidMapError(f"expected {X.cap + 1} levels, got {len(self.selected)}")
        for n, chosen in enumerate(self.selected):
            stray = chosen - set(X.cells[n])
            if stray:
                raise InvalidMapError(f"{sorted(stray)[0]} is not a level-{n} cell of the ambient")
            for cell in chosen:
                if n > 0:
                    for i in range(n + 1):
                        if X.d(i, n, cell) not in self.selected[n - 1]:
                            raise InvalidMapError(f"not closed under d_{i} at {cell}")
                if n < X.cap:
                    for i in range(n + 1):
                        if X.s(i, n, cell) not in self.selected[n + 1]:
                            raise InvalidMapError(f"not closed under s_{i} at {cell}")

    @classmethod
    def whole(cls, X: TruncatedSSet) -> "SubSSet":
        return cls(X, [frozenset(level) for level in X.cells])

    @classmethod
    def empty(cls, X: TruncatedSSet) -> "SubSSet":
        return cls(X, [frozenset() for _ in X.cells])

    @property
    def vertex_set(self) -> FrozenSet[Cell]:
        return self.selected[0]

    def contains(self, n: int, cell: Cell) -> bool:
        return cell in self.selected[n]

    def is_empty(self) -> bool:
        return not self.selected[0]

    def as_sset(self) -> TruncatedSSet:
        """The subobject as a simplicial set in its own right, ambient order kept"""
        if "sset" not in self._cache:
            X = self.ambient
            cells = [[c for c in X.cells[n] if c in self.selected[n]] for n in range(X.cap + 1)]
            faces = {
                (n, i): {c: X.d(i, n, c) for c in cells[n]}
                for n in range(1, X.cap + 1)
                for i in range(n + 1)
            }
            degeneracies = {
                (n, i): {c: X.s(i, n, c) for c in cells[n]}
                for n in range(X.cap)
                for i in range(n + 1)
            }
            self._cache["sset"] = TruncatedSSet(
                X.cap,
                cells,
                faces,
                degeneracies,
                X.provenance,
                X.chain_bound,
                name=f"sub({X.label()})",
                validate=False,
            )
        return self._cache["sset"]

    def inclusion(self) -> SimplicialMap:
        if "inclusion" not in self._cache:
            Y = self.as_sset()
            self._cache["inclusion"] = SimplicialMap(
                Y, self.ambient, {n: {c: c for c in Y.cells[n]} for n in range(Y.cap + 1)}
            )
        return self._cache["inclusion"]
