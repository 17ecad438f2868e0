"""
Combinatorics of the simplex category
Monotone maps stored as value sequences, active/inert and epi/mono factorisations,
principal edges, reduced covers and their chart factorisations
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, combinations_with_replacement
from typing import Iterator, List, Sequence, Tuple

from .exceptions import InvalidMapError


class Classification(str, Enum):
    """Active/inert status of a monotone map"""

    ACTIVE = "active"
    INERT = "inert"
    BOTH = "both"
    NEITHER = "neither"


@dataclass(frozen=True)
class MonotoneMap:
    """A monotone map [m] -> [n] given by its values"""

    source_arity: int
    target_arity: int
    values: Tuple[int, ...]

    def __post_init__(self):
        if self.source_arity < 0 or self.target_arity < 0:
            raise InvalidMapError(f"negative arity in {self!r}")
        if len(self.values) != self.source_arity + 1:
            raise InvalidMapError(
                f"expected {self.source_arity + 1} values, got {len(self.values)}"
            )
        for i, v in enumerate(self.values):
            if not 0 <= v <= self.target_arity:
                raise InvalidMapError(f"value {v} at position {i} outside [{self.target_arity}]")
            if i and self.values[i - 1] > v:
                raise InvalidMapError(f"values {self.values} are not weakly increasing")

    @classmethod
    def of(cls, values: Sequence[int], target_arity: int) -> "MonotoneMap":
        return cls(len(values) - 1, target_arity, tuple(values))

    @classmethod
    def identity(cls, n: int) -> "MonotoneMap":
        return cls(n, n, tuple(range(n + 1)))

    @classmethod
    def coface(cls, i: int, n: int) -> "MonotoneMap":
        """d^i: [n-1] -> [n], skipping i"""
        if not 0 <= i <= n or n < 1:
            raise InvalidMapError(f"no coface d^{i} into [{n}]")
        return cls(n - 1, n, tuple(v for v in range(n + 1) if v != i))

    @classmethod
    def codegeneracy(cls, i: int, n: int) -> "MonotoneMap":
        """s^i: [n+1] -> [n], hitting i twice"""
        if not 0 <= i <= n:
            raise InvalidMapError(f"no codegeneracy s^{i} onto [{n}]")
        return cls(n + 1, n, tuple(v if v <= i else v - 1 for v in range(n + 2)))

    def __call__(self, i: int) -> int:
        return self.values[i]

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """self after other"""
        if other.target_arity != self.source_arity:
            raise InvalidMapError(
                f"cannot compose [{other.source_arity}]->[{other.target_arity}] "
                f"with [{self.source_arity}]->[{self.target_arity}]"
            )
        return MonotoneMap(
            other.source_arity,
            self.target_arity,
            tuple(self.values[v] for v in other.values),
        )

    def is_active(self) -> bool:
        return self.values[0] == 0 and self.values[-1] == self.target_arity

    def is_inert(self) -> bool:
        return all(b == a + 1 for a, b in zip(self.values, self.values[1:]))

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.target_arity + 1

    def is_identity(self) -> bool:
        return self.source_arity == self.target_arity and self.is_inert()

    def classify(self) -> Classification:
        active, inert = self.is_active(), self.is_inert()
        if active and inert:
            return Classification.BOTH
        if active:
            return Classification.ACTIVE
        if inert:
            return Classification.INERT
        return Classification.NEITHER

    def __str__(self) -> str:
        return f"[{self.source_arity}]->[{self.target_arity}]{self.values}"


@dataclass(frozen=True)
class ActiveInertFactorization:
    """map = inert_part . active_part"""

    active_part: MonotoneMap
    inert_part: MonotoneMap

    def compose(self) -> MonotoneMap:
        return self.inert_part.compose(self.active_part)


@dataclass(frozen=True)
class ChartFactor:
    """Active-inert factorisation of alpha . tau_i for one chart of a cover"""

    active: MonotoneMap
    inert: MonotoneMap


def classify(phi: MonotoneMap) -> Classification:
    return phi.classify()


def factor_active_inert(phi: MonotoneMap) -> ActiveInertFactorization:
    """Unique factorisation of phi as an active map followed by an inert one"""
    start, end = phi.values[0], phi.values[-1]
    active = MonotoneMap(phi.source_arity, end - start, tuple(v - start for v in phi.values))
    inert = MonotoneMap(end - start, phi.target_arity, tuple(range(start, end + 1)))
    return ActiveInertFactorization(active, inert)


def epi_mono_factor(phi: MonotoneMap) -> Tuple[MonotoneMap, MonotoneMap]:
    """Return (surjection, injection) with phi = injection . surjection"""
    image = sorted(set(phi.values))
    position = {v: k for k, v in enumerate(image)}
    r = len(image) - 1
    surjection = MonotoneMap(phi.source_arity, r, tuple(position[v] for v in phi.values))
    injection = MonotoneMap(r, phi.target_arity, tuple(image))
    return surjection, injection


def principal_edge(i: int, k: int) -> MonotoneMap:
    """The inert map rho_i: [1] -> [k] picking out the edge (i-1, i)"""
    if not 1 <= i <= k:
        raise InvalidMapError(f"principal edge index {i} out of range for [{k}]")
    return MonotoneMap(1, k, (i - 1, i))


def join(maps: Sequence[MonotoneMap]) -> MonotoneMap:
    """Join a1 v ... v ar of active maps, glued end to start"""
    if not maps:
        raise InvalidMapError("cannot join an empty sequence of maps")
    values: List[int] = [0]
    offset = 0
    for a in maps:
        if not a.is_active():
            raise InvalidMapError(f"join of non-active map {a}")
        values.extend(offset + v for v in a.values[1:])
        offset += a.target_arity
    return MonotoneMap(len(values) - 1, offset, tuple(values))


@dataclass(frozen=True)
class ReducedCover:
    """Canonically ordered inert charts tau_i: [k_i] -> [k] hitting each edge once"""

    charts: Tuple[MonotoneMap, ...]

    def __post_init__(self):
        if not self.charts:
            raise InvalidMapError("a reduced cover needs at least one chart")
        k = self.charts[0].target_arity
        position = 0
        for tau in self.charts:
            if tau.target_arity != k:
                raise InvalidMapError("charts of a cover must share their target")
            if not tau.is_inert():
                raise InvalidMapError(f"chart {tau} is not inert")
            if tau.source_arity == 0:
                raise InvalidMapError("reduced covers admit no charts of arity 0")
            if tau.values[0] != position:
                raise InvalidMapError(
                    f"chart {tau} starts at {tau.values[0]}, expected {position}"
                )
            position = tau.values[-1]
        if position != k:
            raise InvalidMapError(f"charts stop at {position} and do not cover [{k}]")

    @classmethod
    def from_parts(cls, parts: Sequence[int]) -> "ReducedCover":
        k = sum(parts)
        charts = []
        start = 0
        for part in parts:
            charts.append(MonotoneMap(part, k, tuple(range(start, start + part + 1))))
            start += part
        return cls(tuple(charts))

    @classmethod
    def principal(cls, k: int) -> "ReducedCover":
        return cls(tuple(principal_edge(i, k) for i in range(1, k + 1)))

    @property
    def arity(self) -> int:
        return self.charts[0].target_arity

    @property
    def parts(self) -> Tuple[int, ...]:
        return tuple(tau.source_arity for tau in self.charts)

    @property
    def beta(self) -> MonotoneMap:
        """Active map [m] -> [k] sending i to the start of chart i+1"""
        starts = [tau.values[0] for tau in self.charts] + [self.arity]
        return MonotoneMap(len(self.charts), self.arity, tuple(starts))


def cover_chart_factorization(alpha: MonotoneMap, cover: ReducedCover) -> List[ChartFactor]:
    """Factor alpha . tau_i for every chart of the cover"""
    if not alpha.is_active():
        raise InvalidMapError(f"{alpha} is not active")
    if alpha.source_arity < 1 or cover.arity != alpha.source_arity:
        raise InvalidMapError(f"cover of [{cover.arity}] does not match source of {alpha}")
    factors = []
    for tau in cover.charts:
        f = factor_active_inert(alpha.compose(tau))
        factors.append(ChartFactor(f.active_part, f.inert_part))
    return factors


def pushout_active_inert(
    active: MonotoneMap, inert: MonotoneMap
) -> Tuple[MonotoneMap, MonotoneMap]:
    """Pushout of an active map [k]->[n] along an inert map [k]->[l]

    Returns (active', inert') with active': [l] -> [N], inert': [n] -> [N] and
    active' . inert == inert' . active.
    """
    if not active.is_active() or not inert.is_inert():
        raise InvalidMapError("pushouts are only formed for active-inert spans")
    if active.source_arity != inert.source_arity:
        raise InvalidMapError("active and inert legs must share their source")
    k, n, l = active.source_arity, active.target_arity, inert.target_arity
    start, stop = inert.values[0], inert.values[-1]
    total = l + n - k
    values = []
    for j in range(l + 1):
        if j <= start:
            values.append(j)
        elif j <= stop:
            values.append(start + active.values[j - start])
        else:
            values.append(j + n - k)
    active_leg = MonotoneMap(l, total, tuple(values))
    inert_leg = MonotoneMap(n, total, tuple(range(start, start + n + 1)))
    return active_leg, inert_leg


def monotone_maps(m: int, n: int) -> Iterator[MonotoneMap]:
    """All monotone maps [m] -> [n] in lexicographic order"""
    for values in combinations_with_replacement(range(n + 1), m + 1):
        yield MonotoneMap(m, n, values)


def active_maps(m: int, n: int) -> Iterator[MonotoneMap]:
    for phi in monotone_maps(m, n):
        if phi.is_active():
            yield phi


def active_injections(k: int, n: int) -> Iterator[MonotoneMap]:
    if k == 0:
        if n == 0:
            yield MonotoneMap.identity(0)
        return
    if n < k:
        return
    for inner in combinations(range(1, n), k - 1):
        yield MonotoneMap(k, n, (0,) + inner + (n,))


def inert_maps(k: int, n: int) -> Iterator[MonotoneMap]:
    for start in range(n - k + 1):
        yield MonotoneMap(k, n, tuple(range(start, start + k + 1)))


def reduced_covers(k: int) -> Iterator[ReducedCover]:
    """All reduced covers of [k], k >= 1, ordered by their part sequence"""

    def compositions(total: int) -> Iterator[Tuple[int, ...]]:
        if total == 0:
            yield ()
            return
        for first in range(1, total + 1):
            for rest in compositions(total - first):
                yield (first,) + rest

    for parts in sorted(compositions(k)):
        yield ReducedCover.from_parts(parts)
