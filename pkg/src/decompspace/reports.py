"""
Machine-readable reports for the command-line surface
"""

import hashlib
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from .axioms import AxiomReport, FlagVerdict, MapClassification
from .crapo import CrapoReport, LemmaReport
from .documents import SubSSetDocument, dumps
from .exceptions import CertificateError, DecompError, DocumentError
from .incidence import FinitenessCertificate, Functional, IdentityCheck, InversionReport
from .sset import PullbackWitness

Pair = Tuple[int, int]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class Witness(_Model):
    """Counterexample to a pullback square"""

    kind: Literal["missing", "collision"]
    pair: Any = Field(..., description="Fibre-product element, or the common image of a collision")
    elements: List[Any] = Field(default_factory=list, description="Colliding elements of P")
    description: str


class Verdict(_Model):
    """Outcome of one named check"""

    check: str
    passed: bool
    scope: Optional[str] = Field(default=None, description="Truncation the verdict is valid up to")
    squares_checked: Optional[int] = None
    failing_square: Optional[str] = None
    witness: Optional[Witness] = None
    edge: Optional[str] = Field(default=None, description="First edge where an identity fails")
    left: Optional[Pair] = None
    right: Optional[Pair] = None


class TableRow(_Model):
    edge: str
    values: Dict[str, Pair] = Field(..., description="Column -> [numerator, denominator]")


class CertificateSummary(_Model):
    route: Literal["chain-bound", "truncation-relative", "denied"]
    moebius_ok: bool
    locally_finite: bool = True
    witness_edge: Optional[str] = None
    lengths: Optional[Dict[str, int]] = None


class ErrorSummary(_Model):
    kind: str
    message: str
    location: Optional[str] = None


class Report(_Model):
    """One report per CLI invocation; identical input gives identical output"""

    type: Literal["report"] = "report"
    tool: str
    version: str
    command: str
    inputs: List[str] = Field(default_factory=list)
    input_digest: str = Field(..., description="sha256 over the input files in argument order")
    passed: bool
    exit_code: int
    verdicts: List[Verdict] = Field(default_factory=list)
    tables: Dict[str, List[TableRow]] = Field(default_factory=dict)
    certificate: Optional[CertificateSummary] = None
    subspace: Optional[SubSSetDocument] = None
    files: Optional[List[str]] = None
    error: Optional[ErrorSummary] = None

    def render(self) -> str:
        return dumps(self)


def input_digest(paths: Iterable[Union[str, Path]]) -> str:
    digest = hashlib.sha256()
    for path in paths:
        try:
            digest.update(Path(path).read_bytes())
        except OSError:
            digest.update(str(path).encode("utf-8"))
        digest.update(b"\0")
    return digest.hexdigest()


def _plain(value: Any) -> Any:
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if value is None or isinstance(value, (bool, int)):
        return value
    return str(value)


def witness_model(witness: Optional[PullbackWitness]) -> Optional[Witness]:
    if witness is None:
        return None
    return Witness(
        kind=witness.kind,
        pair=_plain(witness.pair),
        elements=_plain(list(witness.elements)),
        description=witness.describe(),
    )


def _pair(value) -> Optional[Pair]:
    if value is None:
        return None
    return (value.numerator, value.denominator)


def axiom_verdict(report: AxiomReport) -> Verdict:
    return Verdict(
        check=report.check,
        passed=report.passed,
        scope=report.scope,
        squares_checked=report.squares_checked,
        failing_square=report.failing_square,
        witness=witness_model(report.witness),
    )


def flag_verdict(name: str, flag: FlagVerdict) -> Verdict:
    return Verdict(
        check=name,
        passed=flag.holds,
        failing_square=flag.failing_square,
        witness=witness_model(flag.witness),
    )


def classification_verdicts(result: MapClassification, only: Sequence[str] = ()) -> List[Verdict]:
    flags = result.flags()
    names = list(only) or list(flags)
    return [flag_verdict(name, flags[name]) for name in names]


def identity_verdict(check: IdentityCheck) -> Verdict:
    return Verdict(
        check=check.name,
        passed=check.passed,
        edge=check.witness_edge,
        left=_pair(check.left),
        right=_pair(check.right),
    )


def inversion_verdicts(report: InversionReport) -> List[Verdict]:
    return [identity_verdict(c) for c in report.checks]


def lemma_verdicts(lemma: LemmaReport, verbosity: str) -> List[Verdict]:
    """One verdict per lemma in summary mode; every identity in full mode"""
    label = lemma.name if lemma.degree is None else f"{lemma.name} n={lemma.degree}"
    if verbosity == "full":
        return [
            identity_verdict(c).model_copy(update={"check": f"{label}: {c.name}"})
            for c in lemma.checks
        ]
    failure = lemma.first_failure
    if failure is None:
        return [Verdict(check=label, passed=True)]
    return [identity_verdict(failure).model_copy(update={"check": f"{label}: {failure.name}"})]


def crapo_verdicts(report: CrapoReport, verbosity: str) -> List[Verdict]:
    verdicts: List[Verdict] = []
    for lemma in report.lemmas:
        verdicts.extend(lemma_verdicts(lemma, verbosity))
    verdicts.extend(identity_verdict(c) for c in report.identities)
    return verdicts


def functional_rows(columns: Dict[str, Functional], full: bool = True) -> List[TableRow]:
    """Rows over the edges of the common base; summary drops all-zero rows"""
    first = next(iter(columns.values()))
    rows = []
    for edge in first.edges():
        values = {name: _pair(F(edge)) for name, F in columns.items()}
        if full or any(num for num, _ in values.values()):
            rows.append(TableRow(edge=edge, values=values))
    return rows


def crapo_rows(report: CrapoReport) -> List[TableRow]:
    return [
        TableRow(
            edge=row.edge,
            values={
                "mu_x": (row.mu_x, 1),
                "mu_complement": (row.mu_complement, 1),
                "correction": (row.correction, 1),
            },
        )
        for row in report.table
    ]


def certificate_summary(cert: FinitenessCertificate, verbosity: str) -> CertificateSummary:
    return CertificateSummary(
        route=cert.reason,
        moebius_ok=cert.moebius_ok,
        locally_finite=cert.locally_finite,
        witness_edge=cert.witness_edge,
        lengths=dict(cert.length_table) if verbosity == "full" else None,
    )


def denied_certificate(exc: CertificateError) -> CertificateSummary:
    return CertificateSummary(route="denied", moebius_ok=False, witness_edge=exc.witness_edge)


def error_summary(exc: Union[DecompError, OSError]) -> ErrorSummary:
    if isinstance(exc, DocumentError):
        location = exc.location
    elif isinstance(exc, OSError) and exc.filename is not None:
        location = str(exc.filename)
    else:
        location = None
    return ErrorSummary(kind=type(exc).__name__, message=str(exc), location=location)
