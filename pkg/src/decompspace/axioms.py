"""
Decomposition-space axioms and map classification
Every property is reduced to a family of finite pullback squares; the first
failing square is reported with its witness
"""

from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import structlog

from .config import get_settings
from .delta import (
    MonotoneMap,
    ReducedCover,
    active_injections,
    active_maps,
    cover_chart_factorization,
    inert_maps,
    principal_edge,
    pushout_active_inert,
    reduced_covers,
)
from .exceptions import CorruptionError, PreconditionError
from .monitoring import metrics, timed_check
from .sset import (
    Cell,
    PullbackWitness,
    SimplicialMap,
    Square,
    SubSSet,
    TruncatedSSet,
    act,
    diagonal_square,
    is_pullback,
)

logger = structlog.get_logger()

CONDITIONS = (1, 2, 3, 4)


@dataclass(frozen=True)
class AxiomReport:
    """Verdict for one square family, valid up to the cap"""

    check: str
    passed: bool
    cap: int
    squares_checked: int
    failing_square: Optional[str] = None
    witness: Optional[PullbackWitness] = None

    @property
    def scope(self) -> str:
        return f"up to cap {self.cap}"


@dataclass(frozen=True)
class FlagVerdict:
    holds: bool
    failing_square: Optional[str] = None
    witness: Optional[PullbackWitness] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class MapClassification:
    culf: FlagVerdict
    fully_faithful: FlagVerdict
    mono_on_objects: FlagVerdict
    full_inclusion: FlagVerdict
    conservative: FlagVerdict
    relatively_segal: FlagVerdict
    ikeo: FlagVerdict
    semi_ikeo: FlagVerdict
    convex: FlagVerdict
    shortcuts_used: bool = False

    def flags(self) -> Dict[str, FlagVerdict]:
        return {
            "culf": self.culf,
            "fully_faithful": self.fully_faithful,
            "mono_on_objects": self.mono_on_objects,
            "full_inclusion": self.full_inclusion,
            "conservative": self.conservative,
            "relatively_segal": self.relatively_segal,
            "ikeo": self.ikeo,
            "semi_ikeo": self.semi_ikeo,
            "convex": self.convex,
        }


def _first_failure(family: str, squares: Iterable[Square]) -> Tuple[int, Optional[Square], Any]:
    """Run squares in order, stopping at the first that is not a pullback"""
    count = 0
    for sq in squares:
        count += 1
        metrics.record_square(family)
        verdict = is_pullback(sq)
        if not verdict:
            return count, sq, verdict.witness
    return count, None, None


def _group(items: Iterable[Any], key: Callable[[Any], Any]) -> Dict[Any, List[Any]]:
    index: Dict[Any, List[Any]] = defaultdict(list)
    for item in items:
        index[key(item)].append(item)
    return index


def _restricted_product(points: Iterable[tuple], indexes: Sequence[Dict[Any, List[Any]]]) -> List[tuple]:
    """Elements of a product corner lying over the given points"""
    out: List[tuple] = []
    for point in dict.fromkeys(points):
        out.extend(product(*(index.get(c, ()) for index, c in zip(indexes, point))))
    return out


def _tuple_map(tables: Sequence[Dict[Cell, Cell]]) -> Callable[[Cell], tuple]:
    return lambda x: tuple(t[x] for t in tables)


def _componentwise(tables: Sequence[Dict[Cell, Cell]]) -> Callable[[tuple], tuple]:
    return lambda xs: tuple(t[x] for t, x in zip(tables, xs))


# Decomposition-space conditions


def _condition_one_squares(X: TruncatedSSet) -> Iterator[Square]:
    for n in range(2, X.cap):
        above, level, below = X.level(n + 1), X.level(n), X.level(n - 1)
        for i in range(1, n):
            yield Square(
                above,
                level,
                level,
                below,
                X.faces[(n + 1, 0)],
                X.faces[(n + 1, i + 1)],
                X.faces[(n, i)],
                X.faces[(n, 0)],
                f"(d_{i + 1}, d_0) at n={n}",
            )
            yield Square(
                above,
                level,
                level,
                below,
                X.faces[(n + 1, n + 1)],
                X.faces[(n + 1, i)],
                X.faces[(n, i)],
                X.faces[(n, n)],
                f"(d_{i}, d_{n + 1}) at n={n}",
            )


def _condition_two_squares(X: TruncatedSSet) -> Iterator[Square]:
    N = X.cap
    for k in range(1, N + 1):
        for n in range(k, N + 1):
            for alpha in active_injections(k, n):
                for l in range(k, N + 1 - (n - k)):
                    for beta in inert_maps(k, l):
                        active_leg, inert_leg = pushout_active_inert(alpha, beta)
                        total = active_leg.target_arity
                        yield Square(
                            X.level(total),
                            X.level(n),
                            X.level(l),
                            X.level(k),
                            act(X, inert_leg),
                            act(X, active_leg),
                            act(X, alpha),
                            act(X, beta),
                            f"alpha={alpha.values} beta={beta.values} into [{total}]",
                        )


def _cover_square(X: TruncatedSSet, alpha: MonotoneMap, cover: ReducedCover) -> Square:
    factors = cover_chart_factorization(alpha, cover)
    n, k = alpha.target_arity, alpha.source_arity
    gammas = [act(X, f.inert) for f in factors]
    alphas = [act(X, f.active) for f in factors]
    taus = [act(X, tau) for tau in cover.charts]
    to_parts = _tuple_map(taus)
    points = [to_parts(b) for b in X.level(k)]
    indexes = [
        _group(X.level(f.active.target_arity), lambda a, t=table: t[a])
        for f, table in zip(factors, alphas)
    ]
    return Square(
        X.level(n),
        _restricted_product(points, indexes),
        X.level(k),
        list(dict.fromkeys(points)),
        _tuple_map(gammas),
        act(X, alpha),
        _componentwise(alphas),
        to_parts,
        f"alpha={alpha.values} cover={cover.parts}",
    )


def _condition_three_squares(X: TruncatedSSet) -> Iterator[Square]:
    for n in range(1, X.cap + 1):
        for k in range(1, n + 1):
            for alpha in active_injections(k, n):
                yield _cover_square(X, alpha, ReducedCover.principal(k))


def _condition_four_squares(X: TruncatedSSet) -> Iterator[Square]:
    for n in range(1, X.cap + 1):
        for k in range(1, n + 1):
            for alpha in active_injections(k, n):
                for cover in reduced_covers(k):
                    yield _cover_square(X, alpha, cover)


_FAMILIES = {
    1: _condition_one_squares,
    2: _condition_two_squares,
    3: _condition_three_squares,
    4: _condition_four_squares,
}


def check_decomposition(X: TruncatedSSet, condition: int) -> AxiomReport:
    """Check one of the four equivalent decomposition conditions exhaustively within the cap"""
    if condition not in _FAMILIES:
        raise PreconditionError(f"unknown decomposition condition {condition}")
    if X.cap < 2:
        raise PreconditionError(f"decomposition conditions need cap >= 2, got {X.cap}")
    check = f"condition-{condition}"
    with timed_check(check) as outcome:
        count, failed, witness = _first_failure(check, _FAMILIES[condition](X))
        outcome["passed"] = failed is None
    report = AxiomReport(
        check, failed is None, X.cap, count, failed.label if failed else None, witness
    )
    logger.info(
        "Decomposition condition checked",
        space=X.label(),
        condition=condition,
        squares=count,
        verdict=report.passed,
    )
    return report


def check_all_conditions(X: TruncatedSSet) -> List[AxiomReport]:
    return [check_decomposition(X, c) for c in CONDITIONS]


def is_decomposition_space(X: TruncatedSSet, condition: Optional[int] = None) -> bool:
    """Cached verdict under the configured certifying condition"""
    condition = condition or get_settings().decomposition_condition
    key = ("decomposition", condition)
    if key not in X._cache:
        X._cache[key] = check_decomposition(X, condition).passed
    return X._cache[key]


def is_complete(X: TruncatedSSet) -> AxiomReport:
    """s_0: X_0 -> X_1 is mono, tested as the diagonal-square pullback"""
    if X.cap < 1:
        raise PreconditionError("completeness needs level 1")
    s0 = X.degeneracies[(0, 0)]
    verdict = is_pullback(diagonal_square(s0, X.level(0), X.level(1)))
    metrics.record_square("complete")
    return AxiomReport(
        "complete",
        verdict.is_pullback,
        X.cap,
        1,
        None if verdict else "s_0 diagonal",
        verdict.witness,
    )


def _certified(X: TruncatedSSet) -> bool:
    if "certified" not in X._cache:
        X._cache["certified"] = (
            X.cap >= 2 and is_decomposition_space(X) and is_complete(X).passed
        )
    return X._cache["certified"]


def require_complete_decomposition(X: TruncatedSSet, what: str) -> None:
    if not _certified(X):
        raise PreconditionError(f"{what} needs a complete decomposition space, got {X.label()}")


# Map classification


def _flag(family: str, squares: Iterable[Square]) -> FlagVerdict:
    _, failed, witness = _first_failure(family, squares)
    if failed is None:
        return FlagVerdict(True)
    return FlagVerdict(False, failed.label, witness)


def _cartesian_square(f: SimplicialMap, phi: MonotoneMap, label: str) -> Square:
    """The square of f against X(phi): Y_n -> X_n over Y_m -> X_m"""
    Y, X = f.source, f.target
    m, n = phi.source_arity, phi.target_arity
    return Square(
        Y.level(n),
        X.level(n),
        Y.level(m),
        X.level(m),
        f.components[n],
        act(Y, phi),
        act(X, phi),
        f.components[m],
        label,
    )


def _culf_squares(f: SimplicialMap, shortcut: bool) -> Iterator[Square]:
    if shortcut:
        yield _cartesian_square(f, MonotoneMap(1, 2, (0, 2)), "d_1 on level 2")
        return
    N = f.source.cap
    for n in range(N + 1):
        for m in range(N + 1):
            for phi in active_maps(m, n):
                if not phi.is_identity():
                    yield _cartesian_square(f, phi, f"active {phi}")


def _conservative_squares(f: SimplicialMap) -> Iterator[Square]:
    for n in range(f.source.cap):
        for i in range(n + 1):
            yield _cartesian_square(f, MonotoneMap.codegeneracy(i, n), f"s_{i} on level {n}")


def _vertex_squares(f: SimplicialMap) -> Iterator[Square]:
    """Cells against their (n+1)-tuples of vertices"""
    Y, X = f.source, f.target
    f0 = f.components[0]
    over = _group(Y.level(0), lambda y: f0[y])
    for n in range(1, Y.cap + 1):
        x_verts = X.vertex_tuples(n)
        tuples = _restricted_product(x_verts.values(), [over] * (n + 1))
        yield Square(
            Y.level(n),
            X.level(n),
            tuples,
            list(dict.fromkeys(x_verts.values())),
            f.components[n],
            Y.vertex_tuples(n),
            x_verts,
            lambda ys: tuple(f0[y] for y in ys),
            f"vertices on level {n}",
        )


def _segal_squares(f: SimplicialMap) -> Iterator[Square]:
    """Cells against composable strings of principal edges"""
    Y, X = f.source, f.target
    f1 = f.components[1]
    over = _group(Y.level(1), lambda y: f1[y])
    for n in range(2, Y.cap + 1):
        x_spine = _tuple_map([act(X, principal_edge(i, n)) for i in range(1, n + 1)])
        points = [x_spine(x) for x in X.level(n)]
        strings = [
            s
            for s in _restricted_product(points, [over] * n)
            if all(Y.d(0, 1, a) == Y.d(1, 1, b) for a, b in zip(s, s[1:]))
        ]
        yield Square(
            Y.level(n),
            X.level(n),
            strings,
            list(dict.fromkeys(points)),
            f.components[n],
            _tuple_map([act(Y, principal_edge(i, n)) for i in range(1, n + 1)]),
            x_spine,
            _componentwise([f1] * n),
            f"composable strings on level {n}",
        )


def _chart_square(f: SimplicialMap, charts: Sequence[MonotoneMap], n: int, label: str) -> Square:
    """Y_n against the product of the Y_{n_i} over the matching X-square"""
    Y, X = f.source, f.target
    y_parts = [act(Y, g) for g in charts]
    x_parts = _tuple_map([act(X, g) for g in charts])
    indexes = [
        _group(Y.level(g.source_arity), lambda y, c=f.components[g.source_arity]: c[y])
        for g in charts
    ]
    points = [x_parts(x) for x in X.level(n)]
    return Square(
        Y.level(n),
        _restricted_product(points, indexes),
        X.level(n),
        list(dict.fromkeys(points)),
        _tuple_map(y_parts),
        f.components[n],
        _componentwise([f.components[g.source_arity] for g in charts]),
        x_parts,
        label,
    )


def _ikeo_squares(f: SimplicialMap, shortcut: bool) -> Iterator[Square]:
    levels = [0, 2] if shortcut else range(f.source.cap + 1)
    for n in levels:
        charts = [principal_edge(i, n) for i in range(1, n + 1)]
        yield _chart_square(f, charts, n, f"spine on level {n}")


def _semi_ikeo_squares(f: SimplicialMap, shortcut: bool) -> Iterator[Square]:
    if shortcut:
        yield _chart_square(f, [principal_edge(1, 2), principal_edge(2, 2)], 2, "(d_2, d_0)")
        return
    for n in range(1, f.source.cap + 1):
        for k in range(1, n + 1):
            for alpha in active_injections(k, n):
                factors = cover_chart_factorization(alpha, ReducedCover.principal(k))
                yield _chart_square(
                    f, [c.inert for c in factors], n, f"active injection {alpha.values}"
                )


def _both_decomposition(f: SimplicialMap) -> bool:
    if f.source.cap < 2:
        return False
    return is_decomposition_space(f.source) and is_decomposition_space(f.target)


def check_mono_on_objects(f: SimplicialMap) -> FlagVerdict:
    sq = diagonal_square(f.components[0], f.source.level(0), f.target.level(0))
    return _flag("mono", [sq])


def check_culf(f: SimplicialMap, shortcut: Optional[bool] = None) -> FlagVerdict:
    if shortcut is None:
        shortcut = _both_decomposition(f)
    return _flag("culf", _culf_squares(f, shortcut))


def check_fully_faithful(f: SimplicialMap) -> FlagVerdict:
    return _flag("fully_faithful", _vertex_squares(f))


def _both(first: FlagVerdict, second: FlagVerdict) -> FlagVerdict:
    return first if not first else second


def classify_map(f: SimplicialMap) -> MapClassification:
    """All map flags with the first failing square of each"""
    shortcut = _both_decomposition(f)
    with timed_check("classify_map") as outcome:
        culf = check_culf(f, shortcut)
        fully_faithful = check_fully_faithful(f)
        mono = check_mono_on_objects(f)
        full = _both(fully_faithful, mono)
        result = MapClassification(
            culf=culf,
            fully_faithful=fully_faithful,
            mono_on_objects=mono,
            full_inclusion=full,
            conservative=_flag("conservative", _conservative_squares(f)),
            relatively_segal=_flag("relatively_segal", _segal_squares(f)),
            ikeo=_flag("ikeo", _ikeo_squares(f, shortcut)),
            semi_ikeo=_flag("semi_ikeo", _semi_ikeo_squares(f, shortcut)),
            convex=_both(full, culf),
            shortcuts_used=shortcut,
        )
        outcome["passed"] = result.convex.holds
    logger.info(
        "Map classified",
        source=f.source.label(),
        target=f.target.label(),
        shortcuts=shortcut,
        flags={k: v.holds for k, v in result.flags().items()},
    )
    return result


# Hulls and convexity


def full_hull(X: TruncatedSSet, vertices: Iterable[Cell]) -> SubSSet:
    """All cells whose vertices lie in the given set"""
    chosen = frozenset(vertices)
    stray = chosen - set(X.level(0))
    if stray:
        raise PreconditionError(f"{sorted(stray)[0]} is not a vertex of {X.label()}")
    selected = [chosen]
    for n in range(1, X.cap + 1):
        selected.append(
            frozenset(c for c, verts in X.vertex_tuples(n).items() if chosen.issuperset(verts))
        )
    return SubSSet(X, selected)


def _hull_step(X: TruncatedSSet, seeds: frozenset) -> frozenset:
    grown = set(seeds)
    for n in range(1, X.cap + 1):
        for verts in X.vertex_tuples(n).values():
            if verts[0] in seeds and verts[-1] in seeds:
                grown.update(verts)
    return frozenset(grown)


def verify_convex(K: SubSSet) -> FlagVerdict:
    """Full inclusion and culf; the verdict is cached on K"""
    if "convex" not in K._cache:
        inclusion = K.inclusion()
        K._cache["convex"] = _both(
            _both(check_fully_faithful(inclusion), check_mono_on_objects(inclusion)),
            check_culf(inclusion),
        )
    return K._cache["convex"]


def convex_hull(X: TruncatedSSet, seeds: Iterable[Cell]) -> SubSSet:
    """Convex hull in one step, with the stabilisation and convexity verified"""
    require_complete_decomposition(X, "convex_hull")
    seeds = frozenset(seeds)
    stray = seeds - set(X.level(0))
    if stray:
        raise PreconditionError(f"{sorted(stray)[0]} is not a vertex of {X.label()}")
    closure = _hull_step(X, seeds)
    again = _hull_step(X, closure)
    if again != closure:
        raise CorruptionError(
            f"hull of {sorted(seeds)} keeps growing after one step: {sorted(again - closure)}"
        )
    hull = full_hull(X, closure)
    verdict = verify_convex(hull)
    if not verdict:
        raise CorruptionError(f"hull of {sorted(seeds)} is not convex at {verdict.failing_square}")
    logger.info("Convex hull built", space=X.label(), seeds=sorted(seeds), vertices=sorted(closure))
    return hull


def complement(X: TruncatedSSet, K: SubSSet) -> SubSSet:
    """Full hull on the vertices outside K"""
    if K.ambient is not X:
        raise PreconditionError("K is not a subobject of the given space")
    rest = full_hull(X, [v for v in X.level(0) if v not in K.vertex_set])
    if _certified(X):
        Y = rest.as_sset()
        if not (is_decomposition_space(Y) and is_complete(Y).passed):
            raise CorruptionError("the complement of K is not a complete decomposition space")
    return rest


def convex_index(X: TruncatedSSet, K: SubSSet, n: int, cell: Cell) -> int:
    """The position of the first vertex of cell in K; every later face lies in K"""
    if K.ambient is not X:
        raise PreconditionError("K is not a subobject of the given space")
    if not verify_convex(K):
        raise PreconditionError("convex_index needs a convex K")
    verts = X.vertex_tuples(n)[cell]
    if verts[-1] not in K.vertex_set:
        raise PreconditionError(f"last vertex of {cell} is not in K")
    found = []
    for j in range(n + 1):
        tail = act(X, MonotoneMap(n - j, n, tuple(range(j, n + 1))))[cell]
        if (
            verts[j] in K.vertex_set
            and K.contains(n - j, tail)
            and not any(v in K.vertex_set for v in verts[:j])
        ):
            found.append(j)
    if len(found) != 1:
        raise CorruptionError(f"{len(found)} convex indices for {cell}; K is not convex")
    return found[0]
