"""
Incidence algebra at the level of cardinalities
Functionals on 1-cells with exact rational values, convolution over X_2,
the Phi functionals, Möbius inversion and finiteness certificates
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

import structlog

from .axioms import is_complete, require_complete_decomposition
from .exceptions import ArityError, CertificateError, CorruptionError, PreconditionError
from .monitoring import timed_check
from .sset import (
    Cell,
    Provenance,
    SimplicialMap,
    TruncatedSSet,
    is_effective,
    long_edge,
)

logger = structlog.get_logger()

Number = Union[int, Fraction]


@dataclass(frozen=True, eq=False)
class Functional:
    """A finitely supported rational function on the 1-cells of base"""

    base: TruncatedSSet
    values: Mapping[Cell, Number] = field(default_factory=dict)

    def __post_init__(self):
        if self.base.cap < 1 and self.values:
            raise PreconditionError("functionals need level 1")
        edges = set(self.base.cells[1]) if self.base.cap >= 1 else set()
        cleaned: Dict[Cell, Fraction] = {}
        for cell, value in self.values.items():
            if cell not in edges:
                raise PreconditionError(f"{cell} is not a 1-cell of {self.base.label()}")
            value = Fraction(value)
            if value:
                cleaned[cell] = value
        object.__setattr__(self, "values", cleaned)

    def __call__(self, cell: Cell) -> Fraction:
        return self.values.get(cell, Fraction(0))

    def _same_base(self, other: "Functional") -> None:
        if other.base is not self.base:
            raise PreconditionError("functionals live on different bases")

    def __add__(self, other: "Functional") -> "Functional":
        self._same_base(other)
        total = dict(self.values)
        for cell, value in other.values.items():
            total[cell] = total.get(cell, 0) + value
        return Functional(self.base, total)

    def __neg__(self) -> "Functional":
        return self.scale(-1)

    def __sub__(self, other: "Functional") -> "Functional":
        return self + (-other)

    def scale(self, factor: Number) -> "Functional":
        return Functional(self.base, {c: v * factor for c, v in self.values.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Functional):
            return NotImplemented
        return other.base is self.base and other.values == self.values

    __hash__ = None

    def support(self) -> List[Cell]:
        return [c for c in self.edges() if c in self.values]

    def edges(self) -> Tuple[Cell, ...]:
        return self.base.cells[1] if self.base.cap >= 1 else ()

    def is_zero(self) -> bool:
        return not self.values

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values.values())

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values.values())

    def first_difference(self, other: "Functional") -> Optional[Cell]:
        """The first edge, in base order, where the two functionals differ"""
        self._same_base(other)
        for cell in self.edges():
            if self(cell) != other(cell):
                return cell
        return None

    def to_table(self, full: bool = True) -> List[Tuple[Cell, int, int]]:
        """(edge, numerator, denominator) rows in base order"""
        cells = self.edges() if full else self.support()
        return [(c, self(c).numerator, self(c).denominator) for c in cells]


def zero(X: TruncatedSSet) -> Functional:
    return Functional(X)


def zeta(X: TruncatedSSet) -> Functional:
    return Functional(X, {c: 1 for c in X.level(1)})


def _require_complete(X: TruncatedSSet, what: str) -> None:
    if not is_complete(X).passed:
        raise PreconditionError(f"{what} needs s_0 to be mono on {X.label()}")


def epsilon(X: TruncatedSSet) -> Functional:
    """Indicator of the degenerate 1-cells"""
    _require_complete(X, "epsilon")
    return Functional(X, {X.s(0, 0, v): 1 for v in X.level(0)})


def phi(X: TruncatedSSet, n: int) -> Functional:
    """Count nondegenerate n-cells by their long edge"""
    if n > X.cap or n < 0:
        raise ArityError(f"Phi_{n} needs level {n} within the cap {X.cap}")
    key = ("phi", n)
    if key not in X._cache:
        if n == 0:
            X._cache[key] = epsilon(X)
        else:
            counts: Dict[Cell, int] = defaultdict(int)
            for cell in X.nondegenerate(n):
                counts[long_edge(X, n, cell)] += 1
            X._cache[key] = Functional(X, counts)
    return X._cache[key]


def phi_even(X: TruncatedSSet) -> Functional:
    total = zero(X)
    for n in range(0, X.cap + 1, 2):
        total = total + phi(X, n)
    return total


def phi_odd(X: TruncatedSSet) -> Functional:
    total = zero(X)
    for n in range(1, X.cap + 1, 2):
        total = total + phi(X, n)
    return total


def convolve(F: Functional, G: Functional) -> Functional:
    """(F*G)(f) = sum over 2-cells s with d_1 s = f of F(d_2 s) G(d_0 s)"""
    F._same_base(G)
    X = F.base
    if X.cap < 2:
        raise ArityError("convolution needs level 2")
    out: Dict[Cell, Fraction] = defaultdict(Fraction)
    if F.is_zero() or G.is_zero():
        return Functional(X)
    for edge, triangles in X.triangles_over().items():
        for sigma in triangles:
            left = F(X.d(2, 2, sigma))
            if left:
                out[edge] += left * G(X.d(0, 2, sigma))
    return Functional(X, out)


def pushforward(u: SimplicialMap, F: Functional) -> Functional:
    """Sum F over the preimages of each target edge"""
    if F.base is not u.source:
        raise PreconditionError("functional does not live on the source of the map")
    out: Dict[Cell, Fraction] = defaultdict(Fraction)
    for cell, value in F.values.items():
        out[u.components[1][cell]] += value
    return Functional(u.target, out)


# Finiteness


@dataclass(frozen=True, eq=False)
class FinitenessCertificate:
    """Local finiteness, lengths, and whether the Möbius sum terminates within the cap"""

    base: TruncatedSSet = field(repr=False)
    locally_finite: bool
    length_table: Mapping[Cell, int]
    moebius_ok: bool
    reason: str
    witness_edge: Optional[Cell] = None

    @property
    def truncation_relative(self) -> bool:
        return self.reason == "truncation-relative"


def length_table(X: TruncatedSSet) -> Dict[Cell, int]:
    """Top dimension of an effective simplex over each edge"""
    lengths = {X.s(0, 0, v): 0 for v in X.level(0)}
    for n in range(1, X.cap + 1):
        for cell in X.level(n):
            if is_effective(X, n, cell):
                lengths[long_edge(X, n, cell)] = n
    return {e: lengths[e] for e in X.level(1) if e in lengths}


def length(X: TruncatedSSet, edge: Cell) -> int:
    table = length_table(X)
    if edge not in table:
        raise PreconditionError(f"{edge} carries no effective simplex")
    return table[edge]


def certify_finiteness(
    X: TruncatedSSet, provenance: Optional[Provenance] = None
) -> FinitenessCertificate:
    """Certify that Phi vanishes from the cap on, by chain bound or by direct inspection"""
    _require_complete(X, "certify_finiteness")
    provenance = Provenance(provenance or X.provenance)
    lengths = length_table(X)
    top = phi(X, X.cap)
    if provenance is Provenance.NERVE and X.chain_bound is not None and X.chain_bound < X.cap:
        for n in range(X.chain_bound + 1, X.cap + 1):
            beyond = phi(X, n)
            if not beyond.is_zero():
                raise CorruptionError(
                    f"chain bound {X.chain_bound} claimed but Phi_{n} is nonzero at {beyond.support()[0]}"
                )
        return FinitenessCertificate(X, True, lengths, True, "chain-bound")
    if not top.is_zero():
        edge = top.support()[0]
        logger.warning("Finiteness certificate denied", space=X.label(), edge=edge, cap=X.cap)
        raise CertificateError(
            f"Phi_{X.cap} is nonzero on {edge}; raise the cap or supply a nerve", witness_edge=edge
        )
    logger.warning("Finiteness certified relative to the truncation", space=X.label(), cap=X.cap)
    return FinitenessCertificate(X, True, lengths, True, "truncation-relative")


def _require_certificate(X: TruncatedSSet, cert: Optional[FinitenessCertificate]) -> None:
    if cert is None or not cert.moebius_ok:
        raise CertificateError("a Möbius certificate is required")
    if cert.base is not X:
        raise CertificateError("certificate was issued for a different space")


def moebius(X: TruncatedSSet, cert: Optional[FinitenessCertificate]) -> Functional:
    """Alternating sum of the Phi functionals"""
    _require_certificate(X, cert)
    if "moebius" not in X._cache:
        X._cache["moebius"] = phi_even(X) - phi_odd(X)
    return X._cache["moebius"]


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of comparing two functionals edge by edge"""

    name: str
    passed: bool
    witness_edge: Optional[Cell] = None
    left: Optional[Fraction] = None
    right: Optional[Fraction] = None


def compare(name: str, left: Functional, right: Functional) -> IdentityCheck:
    edge = left.first_difference(right)
    if edge is None:
        return IdentityCheck(name, True)
    return IdentityCheck(name, False, edge, left(edge), right(edge))


@dataclass(frozen=True)
class InversionReport:
    passed: bool
    checks: Tuple[IdentityCheck, ...]

    @property
    def first_failure(self) -> Optional[IdentityCheck]:
        return next((c for c in self.checks if not c.passed), None)


def check_inversion(X: TruncatedSSet, cert: Optional[FinitenessCertificate]) -> InversionReport:
    """mu*zeta = eps = zeta*mu, and the sign-free forms on both sides"""
    _require_certificate(X, cert)
    require_complete_decomposition(X, "check_inversion")
    with timed_check("inversion") as outcome:
        mu, z, eps = moebius(X, cert), zeta(X), epsilon(X)
        even, odd = phi_even(X), phi_odd(X)
        checks = [
            compare("mu*zeta = eps", convolve(mu, z), eps),
            compare("zeta*mu = eps", convolve(z, mu), eps),
            compare("Phi_even*zeta = eps + Phi_odd*zeta", convolve(even, z), eps + convolve(odd, z)),
            compare("zeta*Phi_even = eps + zeta*Phi_odd", convolve(z, even), eps + convolve(z, odd)),
        ]
        for term in (even, odd):
            if not term.is_nonnegative():
                checks.append(IdentityCheck("sign-free terms are nonnegative", False, term.support()[0]))
        passed = all(c.passed for c in checks)
        outcome["passed"] = passed
    logger.info("Inversion checked", space=X.label(), verdict=passed)
    return InversionReport(passed, tuple(checks))
