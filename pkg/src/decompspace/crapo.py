"""
Crapo complementation for a convex subspace K of a complete decomposition space X

Functionals pertaining to K or to the complement are pushed forward into X
before they are convolved; nothing is convolved across bases. The per-degree
lemmas are checked first and the aggregated signed identities are derived
from the same cached terms.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from .axioms import complement, require_complete_decomposition, verify_convex
from .config import get_settings
from .exceptions import CertificateError, PreconditionError
from .incidence import (
    FinitenessCertificate,
    Functional,
    IdentityCheck,
    certify_finiteness,
    compare,
    convolve,
    phi,
    pushforward,
    zero,
    zeta,
)
from .monitoring import timed_check
from .sset import (
    Cell,
    SubSSet,
    TruncatedSSet,
    is_degenerate,
    long_edge,
    principal_edges,
    vertices,
)

logger = structlog.get_logger()


@dataclass(frozen=True)
class LemmaReport:
    name: str
    degree: Optional[int]
    passed: bool
    checks: Tuple[IdentityCheck, ...]

    @property
    def first_failure(self) -> Optional[IdentityCheck]:
        return next((c for c in self.checks if not c.passed), None)


def _report(name: str, degree: Optional[int], checks: Sequence[IdentityCheck]) -> LemmaReport:
    return LemmaReport(name, degree, all(c.passed for c in checks), tuple(checks))


def _sum(base: TruncatedSSet, terms: Sequence[Functional]) -> Functional:
    total = zero(base)
    for term in terms:
        total = total + term
    return total


def _chain(terms: Sequence[Functional]) -> Functional:
    result = terms[0]
    for term in terms[1:]:
        result = convolve(result, term)
    return result


@dataclass(eq=False)
class CrapoContext:
    """X with a verified convex K, its complement and every functional the lemmas use

    Terms are addressed by keys "family:index" where family is one of
    X, K, C (complement), notin, cap and index is a degree or one of
    even, odd, mu. "K:zeta" is the pushed-forward zeta of K.
    """

    X: TruncatedSSet
    K: SubSSet
    complement_k: SubSSet
    certificate: FinitenessCertificate
    _terms: Dict[str, Functional] = field(default_factory=dict, repr=False)
    _products: Dict[Tuple[str, ...], Functional] = field(default_factory=dict, repr=False)

    @property
    def cap(self) -> int:
        return self.X.cap

    @property
    def certificate_route(self) -> str:
        return self.certificate.reason

    def term(self, key: str) -> Functional:
        if key not in self._terms:
            self._terms[key] = self._build(key)
        return self._terms[key]

    def _build(self, key: str) -> Functional:
        family, index = key.split(":")
        if index in ("even", "odd", "mu"):
            even = _sum(self.X, [self.term(f"{family}:{n}") for n in range(0, self.cap + 1, 2)])
            odd = _sum(self.X, [self.term(f"{family}:{n}") for n in range(1, self.cap + 1, 2)])
            return {"even": even, "odd": odd, "mu": even - odd}[index]
        if key == "K:zeta":
            K = self.K.as_sset()
            return pushforward(self.K.inclusion(), zeta(K))
        n = int(index)
        if family == "X":
            return phi(self.X, n)
        if family == "K":
            return pushforward(self.K.inclusion(), phi(self.K.as_sset(), n))
        if family == "C":
            return pushforward(self.complement_k.inclusion(), phi(self.complement_k.as_sset(), n))
        if family == "notin":
            return phi_notin(self, n)
        if family == "cap":
            return phi_cap(self, n)
        raise PreconditionError(f"unknown term {key}")

    def conv(self, *keys: str) -> Functional:
        """Left-associated convolution of the named terms, memoised by prefix"""
        if len(keys) == 1:
            return self.term(keys[0])
        if keys not in self._products:
            self._products[keys] = convolve(self.conv(*keys[:-1]), self.term(keys[-1]))
        return self._products[keys]


def build_context(
    X: TruncatedSSet, K: SubSSet, certificate: Optional[FinitenessCertificate]
) -> CrapoContext:
    require_complete_decomposition(X, "Crapo complementation")
    if certificate is None or not certificate.moebius_ok or certificate.base is not X:
        raise CertificateError("Crapo complementation needs a Möbius certificate for X")
    if K.ambient is not X:
        raise PreconditionError("K is not a subobject of X")
    verdict = verify_convex(K)
    if not verdict:
        raise PreconditionError(f"K is not convex: {verdict.failing_square}")
    rest = complement(X, K)
    for part in (K, rest):
        if not part.is_empty():
            certify_finiteness(part.as_sset())
    if certificate.truncation_relative:
        logger.warning(
            "Crapo checks rely on a truncation-relative certificate", space=X.label(), cap=X.cap
        )
    return CrapoContext(X, K, rest, certificate)


def phi_notin(ctx: CrapoContext, n: int) -> Functional:
    """Nondegenerate n-cells none of whose principal edges is degenerate or an edge of K"""
    X = ctx.X
    if n == 0:
        return phi(X, 0)
    k_edges = ctx.K.selected[1]
    counts: Dict[Cell, int] = defaultdict(int)
    for cell in X.nondegenerate(n):
        edges = principal_edges(X, n, cell)
        if all(not is_degenerate(X, 1, e) and e not in k_edges for e in edges):
            counts[long_edge(X, n, cell)] += 1
    return Functional(X, counts)


def phi_cap(ctx: CrapoContext, n: int) -> Functional:
    """Nondegenerate n-cells with at least one vertex in K"""
    X = ctx.X
    k_vertices = ctx.K.vertex_set
    counts: Dict[Cell, int] = defaultdict(int)
    for cell in X.nondegenerate(n):
        if any(v in k_vertices for v in vertices(X, n, cell)):
            counts[long_edge(X, n, cell)] += 1
    return Functional(X, counts)


# Per-degree lemmas


def check_k_lemma(K: TruncatedSSet, m: int) -> LemmaReport:
    """Phi_m + sum_j Phi_j*Phi_1*Phi_{m-j-1} = sum_k Phi_k*Phi_{m-k}, directly and termwise"""
    require_complete_decomposition(K, "the K-lemma")
    if m > K.cap:
        raise PreconditionError(f"degree {m} exceeds the cap {K.cap}")
    p = [phi(K, n) for n in range(m + 1)]
    one = phi(K, 1)
    middle = [_chain([p[j], one, p[m - j - 1]]) for j in range(m)]
    rhs = [convolve(p[k], p[m - k]) for k in range(m + 1)]
    checks = [compare(f"K-lemma m={m}", _sum(K, [p[m]] + middle), _sum(K, rhs))]
    checks.append(compare(f"Phi_{m} ~ Phi_0*Phi_{m}", p[m], rhs[0]))
    checks.extend(compare(f"term j={j} ~ k={j + 1}", middle[j], rhs[j + 1]) for j in range(m))
    checks.append(compare(f"variant Phi_{m} ~ Phi_{m}*Phi_0", p[m], rhs[m]))
    checks.extend(compare(f"variant term j={j} ~ k={j}", middle[j], rhs[j]) for j in range(m))
    return _report("k_lemma", m, checks)


def check_meet_lemma(ctx: CrapoContext, n: int) -> LemmaReport:
    rhs = [
        ctx.conv(f"notin:{p}", f"K:{m}", f"notin:{n - p - m}")
        for p in range(n + 1)
        for m in range(n - p + 1)
    ]
    return _report("meet_lemma", n, [compare(f"meet n={n}", ctx.term(f"cap:{n}"), _sum(ctx.X, rhs))])


def check_s_lemma(ctx: CrapoContext, s: int) -> LemmaReport:
    rhs = [ctx.conv(f"notin:{p}", f"K:{s - p}") for p in range(s + 1)]
    return _report("s_lemma", s, [compare(f"S s={s}", ctx.conv(f"X:{s}", "K:0"), _sum(ctx.X, rhs))])


def check_t_lemma(ctx: CrapoContext, t: int) -> LemmaReport:
    rhs = [ctx.conv(f"K:{j}", f"notin:{t - j}") for j in range(t + 1)]
    return _report("t_lemma", t, [compare(f"T t={t}", ctx.conv("K:0", f"X:{t}"), _sum(ctx.X, rhs))])


def check_scholium(ctx: CrapoContext, n: int) -> LemmaReport:
    total = ctx.term(f"C:{n}") + ctx.term(f"cap:{n}")
    return _report("scholium", n, [compare(f"scholium n={n}", ctx.term(f"X:{n}"), total)])


def _splits(total: int, parts: int):
    """All tuples of `parts` naturals summing to total"""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _splits(total - first, parts - 1):
            yield (first,) + rest


def check_key_lemma(ctx: CrapoContext, n: int, replay: Optional[bool] = None) -> LemmaReport:
    """Key lemma directly, and optionally replayed through the meet, S, T and K lemmas"""
    X = ctx.X
    lhs = _sum(
        X,
        [ctx.term(f"cap:{n}")]
        + [ctx.conv(f"X:{s}", "K:1", f"X:{n - 1 - s}") for s in range(n)],
    )
    rhs = _sum(X, [ctx.conv(f"X:{s}", "K:0", f"X:{n - s}") for s in range(n + 1)])
    checks = [compare(f"key n={n}", lhs, rhs)]

    if replay is None:
        replay = get_settings().key_lemma_replay
    if replay:
        meet = [ctx.conv(f"notin:{p}", f"K:{m}", f"notin:{q}") for p, m, q in _splits(n, 3)]
        inner = (
            [ctx.conv(f"notin:{p}", f"K:{i}", "K:1", f"K:{j}", f"notin:{q}") for p, i, j, q in _splits(n - 1, 4)]
            if n >= 1
            else []
        )
        outer = [ctx.conv(f"notin:{p}", f"K:{i}", "K:0", f"K:{j}", f"notin:{q}") for p, i, j, q in _splits(n, 4)]
        expanded_lhs, expanded_rhs = _sum(X, meet + inner), _sum(X, outer)
        checks.append(compare(f"key n={n} expanded", expanded_lhs, expanded_rhs))
        checks.append(compare(f"key n={n} left expansion", lhs, expanded_lhs))
        checks.append(compare(f"key n={n} right expansion", rhs, expanded_rhs))
        for p in range(n + 1):
            for q in range(n - p + 1):
                m = n - p - q
                left = [ctx.conv(f"notin:{p}", f"K:{m}", f"notin:{q}")] + [
                    ctx.conv(f"notin:{p}", f"K:{j}", "K:1", f"K:{m - 1 - j}", f"notin:{q}")
                    for j in range(m)
                ]
                right = [ctx.conv(f"notin:{p}", f"K:{k}", f"K:{m - k}", f"notin:{q}") for k in range(m + 1)]
                checks.append(
                    compare(f"K-lemma m={m} convolved p={p} q={q}", _sum(X, left), _sum(X, right))
                )
    return _report("key_lemma", n, checks)


# Aggregated identities


@dataclass(frozen=True)
class CrapoRow:
    edge: Cell
    mu_x: int
    mu_complement: int
    correction: int


@dataclass(frozen=True)
class CrapoReport:
    passed: bool
    lemmas: Tuple[LemmaReport, ...]
    identities: Tuple[IdentityCheck, ...]
    table: Tuple[CrapoRow, ...]
    certificate_route: str

    @property
    def first_failure(self) -> Optional[IdentityCheck]:
        for lemma in self.lemmas:
            if not lemma.passed:
                return lemma.first_failure
        return next((c for c in self.identities if not c.passed), None)


def _k_proposition(ctx: CrapoContext) -> List[IdentityCheck]:
    """Signed and even/odd forms inside K"""
    K = ctx.K.as_sset()
    cap = K.cap
    even = _sum(K, [phi(K, n) for n in range(0, cap + 1, 2)])
    odd = _sum(K, [phi(K, n) for n in range(1, cap + 1, 2)])
    p0, p1 = phi(K, 0), phi(K, 1)
    mu = even - odd
    checks = [compare("K-prop mu = mu*zeta*mu", mu, _chain([mu, zeta(K), mu]))]
    checks.append(
        compare(
            "K-prop even",
            even + _chain([even, p1, odd]) + _chain([odd, p1, even]),
            _chain([even, p0, even]) + _chain([odd, p0, odd]),
        )
    )
    checks.append(
        compare(
            "K-prop odd",
            odd + _chain([even, p1, even]) + _chain([odd, p1, odd]),
            _chain([even, p0, odd]) + _chain([odd, p0, even]),
        )
    )
    return checks


def _crapo_identities(ctx: CrapoContext) -> List[IdentityCheck]:
    X = ctx.X
    c = ctx.conv
    mu = ctx.term("X:mu")
    correction = c("X:mu", "K:zeta", "X:mu")
    checks = [compare("crapo mu = mu^C + mu*zeta^K*mu", mu, ctx.term("C:mu") + correction)]
    checks.append(
        compare(
            "crapo even row",
            _sum(X, [ctx.term("X:even"), c("X:even", "K:1", "X:odd"), c("X:odd", "K:1", "X:even")]),
            _sum(X, [ctx.term("C:even"), c("X:even", "K:0", "X:even"), c("X:odd", "K:0", "X:odd")]),
        )
    )
    checks.append(
        compare(
            "crapo odd row",
            _sum(X, [ctx.term("C:odd"), c("X:even", "K:0", "X:odd"), c("X:odd", "K:0", "X:even")]),
            _sum(X, [ctx.term("X:odd"), c("X:even", "K:1", "X:even"), c("X:odd", "K:1", "X:odd")]),
        )
    )
    checks.extend(_k_proposition(ctx))
    checks.append(compare("meet-prop", ctx.term("cap:mu"), c("notin:mu", "K:mu", "notin:mu")))
    checks.append(compare("S-prop", c("notin:mu", "K:mu"), c("X:mu", "K:0")))
    checks.append(compare("T-prop", c("K:mu", "notin:mu"), c("K:0", "X:mu")))
    return checks


def check_crapo(ctx: CrapoContext) -> CrapoReport:
    """Every lemma at every degree, then the signed and sign-free complementation identities"""
    with timed_check("crapo") as outcome:
        lemmas: List[LemmaReport] = []
        K = ctx.K.as_sset()
        for n in range(ctx.cap + 1):
            lemmas.append(check_scholium(ctx, n))
            lemmas.append(check_k_lemma(K, n))
            lemmas.append(check_meet_lemma(ctx, n))
            lemmas.append(check_s_lemma(ctx, n))
            lemmas.append(check_t_lemma(ctx, n))
            lemmas.append(check_key_lemma(ctx, n))
        identities = _crapo_identities(ctx)
        mu, mu_c = ctx.term("X:mu"), ctx.term("C:mu")
        correction = ctx.conv("X:mu", "K:zeta", "X:mu")
        table = tuple(
            CrapoRow(e, int(mu(e)), int(mu_c(e)), int(correction(e))) for e in ctx.X.level(1)
        )
        passed = all(l.passed for l in lemmas) and all(i.passed for i in identities)
        outcome["passed"] = passed
    logger.info(
        "Crapo complementation checked",
        space=ctx.X.label(),
        k_vertices=sorted(ctx.K.vertex_set),
        route=ctx.certificate_route,
        verdict=passed,
    )
    return CrapoReport(passed, tuple(lemmas), tuple(identities), table, ctx.certificate_route)
