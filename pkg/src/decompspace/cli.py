"""
decompspace command-line surface
Each command prints one JSON report on stdout and exits 0 (pass), 1 (check failure) or 2 (input error)
"""

import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import click
import structlog

from . import __version__
from . import corpus as fixture_corpus
from .axioms import CONDITIONS, check_decomposition, classify_map, convex_hull, full_hull, is_complete
from .config import Settings
from .crapo import build_context, check_crapo
from .documents import (
    SSetDocument,
    SubSSetDocument,
    load,
    load_map,
    load_vertices,
    save,
    space_from_document,
)
from .exceptions import CertificateError, DecompError, DocumentError
from .incidence import certify_finiteness, check_inversion, moebius, phi
from .monitoring import metrics, setup_monitoring
from .nerve import vertex_names
from .reports import (
    Report,
    axiom_verdict,
    certificate_summary,
    classification_verdicts,
    crapo_rows,
    crapo_verdicts,
    denied_certificate,
    error_summary,
    functional_rows,
    input_digest,
    inversion_verdicts,
)
from .sset import TruncatedSSet

logger = structlog.get_logger()

FLAGS = (
    "culf",
    "fully_faithful",
    "mono_on_objects",
    "full_inclusion",
    "conservative",
    "relatively_segal",
    "ikeo",
    "semi_ikeo",
    "convex",
)

InputPath = click.Path(dir_okay=False, path_type=str)


def _space(path: str, cap: Optional[int]) -> TruncatedSSet:
    """Load a poset, category or sset document, with an optional cap override"""
    document = load(path)
    if getattr(document, "name", "") is None:
        document.name = Path(path).name
    if cap is not None:
        if isinstance(document, SSetDocument):
            if cap != document.cap:
                raise DocumentError(f"sset documents carry their own cap {document.cap}", path)
        elif hasattr(document, "cap"):
            document.cap = cap
    return space_from_document(document)


def _vertices(X: TruncatedSSet, source: str) -> List[str]:
    """Comma-separated element names, or a vertices document"""
    if source.endswith(".json") and Path(source).is_file():
        names = load_vertices(source)
    else:
        names = [name.strip() for name in source.split(",") if name.strip()]
    return vertex_names(X, names)


def _emit(report: Report) -> None:
    click.echo(report.render(), nl=False)


def _run(
    ctx: click.Context,
    command: str,
    inputs: Sequence[str],
    body: Callable[[Settings], Tuple[bool, dict]],
) -> None:
    """Run one command body and turn its outcome or error into a report and exit code"""
    settings: Settings = ctx.obj
    base = dict(
        tool=settings.app_name,
        version=settings.version,
        command=command,
        inputs=list(inputs),
        input_digest=input_digest(inputs),
    )
    try:
        passed, fields = body(settings)
        code = 0 if passed else 1
        report = Report(**base, passed=passed, exit_code=code, **fields)
    except CertificateError as exc:
        logger.warning("Certificate denied", command=command, error=str(exc))
        code = 1
        report = Report(
            **base,
            passed=False,
            exit_code=code,
            certificate=denied_certificate(exc),
            error=error_summary(exc),
        )
    except (DecompError, OSError) as exc:
        logger.error("Input rejected", command=command, error=str(exc))
        code = 2
        report = Report(**base, passed=False, exit_code=code, error=error_summary(exc))

    _emit(report)
    if settings.enable_metrics and settings.metrics_textfile:
        metrics.write(settings.metrics_textfile)
    sys.exit(code)


@click.group()
@click.version_option(version=__version__, prog_name="decompspace")
@click.pass_context
def main(ctx: click.Context):
    """Check decomposition-space axioms, Möbius inversion and Crapo complementation"""
    settings = Settings()
    setup_monitoring(settings.version, settings.app_name, settings.log_level)
    ctx.obj = settings


@main.command()
@click.argument("file", type=InputPath)
@click.option(
    "--condition",
    type=click.Choice(["1", "2", "3", "4", "all"]),
    default="all",
    show_default=True,
    help="Which decomposition condition to check",
)
@click.option("--cap", type=int, default=None, help="Truncation for poset and category documents")
@click.pass_context
def validate(ctx: click.Context, file: str, condition: str, cap: Optional[int]):
    """Check the decomposition conditions and completeness of FILE"""

    def body(settings: Settings):
        X = _space(file, cap)
        conditions = CONDITIONS if condition == "all" else (int(condition),)
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            reports = list(pool.map(lambda c: check_decomposition(X, c), conditions))
        verdicts = [axiom_verdict(r) for r in reports]
        verdicts.append(axiom_verdict(is_complete(X)))
        return all(v.passed for v in verdicts), {"verdicts": verdicts}

    _run(ctx, "validate", [file], body)


@main.command("check-map")
@click.argument("source", type=InputPath)
@click.argument("target", type=InputPath)
@click.argument("map_file", metavar="MAP", type=InputPath)
@click.option(
    "--flag",
    "flags",
    multiple=True,
    type=click.Choice(FLAGS),
    help="Flags that must hold for exit code 0 (default: all)",
)
@click.option("--cap", type=int, default=None, help="Truncation for poset and category documents")
@click.pass_context
def check_map(
    ctx: click.Context, source: str, target: str, map_file: str, flags: Tuple[str, ...], cap: Optional[int]
):
    """Classify the simplicial map MAP from SOURCE to TARGET"""

    def body(settings: Settings):
        Y, X = _space(source, cap), _space(target, cap)
        f = load_map(map_file, Y, X)
        result = classify_map(f)
        verdicts = classification_verdicts(result)
        required = set(flags) or set(FLAGS)
        passed = all(v.passed for v in verdicts if v.check in required)
        return passed, {"verdicts": verdicts}

    _run(ctx, "check-map", [source, target, map_file], body)


@main.command()
@click.argument("file", type=InputPath)
@click.option("--vertices", "vertex_source", required=True, help="Comma-separated vertices or a vertices document")
@click.option("--full/--convex", "full", default=False, help="Full hull on the vertices, or their convex hull")
@click.option("--cap", type=int, default=None, help="Truncation for poset and category documents")
@click.pass_context
def hull(ctx: click.Context, file: str, vertex_source: str, full: bool, cap: Optional[int]):
    """Build the full or convex hull of a vertex set"""

    def body(settings: Settings):
        X = _space(file, cap)
        seeds = _vertices(X, vertex_source)
        K = full_hull(X, seeds) if full else convex_hull(X, seeds)
        construction = "full" if full else "convex"
        classification = classify_map(K.inclusion())
        verdicts = classification_verdicts(classification, ("full_inclusion", "culf", "convex"))
        passed = full or classification.convex.holds
        return passed, {
            "verdicts": verdicts,
            "subspace": SubSSetDocument.from_subsset(K, construction),
        }

    _run(ctx, "hull", [file], body)


@main.command()
@click.argument("file", type=InputPath)
@click.option("--cap", type=int, default=None, help="Truncation for poset and category documents")
@click.pass_context
def mobius(ctx: click.Context, file: str, cap: Optional[int]):
    """Certify finiteness and print the Möbius function"""

    def body(settings: Settings):
        X = _space(file, cap)
        cert = certify_finiteness(X)
        full = settings.report_verbosity == "full"
        columns = {"mu": moebius(X, cert)}
        if full:
            columns.update({f"phi_{n}": phi(X, n) for n in range(X.cap + 1)})
        return True, {
            "certificate": certificate_summary(cert, settings.report_verbosity),
            "tables": {"moebius": functional_rows(columns, full=True)},
        }

    _run(ctx, "mobius", [file], body)


@main.command()
@click.argument("file", type=InputPath)
@click.option("--cap", type=int, default=None, help="Truncation for poset and category documents")
@click.pass_context
def inversion(ctx: click.Context, file: str, cap: Optional[int]):
    """Check mu*zeta = eps = zeta*mu and the sign-free forms"""

    def body(settings: Settings):
        X = _space(file, cap)
        cert = certify_finiteness(X)
        report = check_inversion(X, cert)
        return report.passed, {
            "verdicts": inversion_verdicts(report),
            "certificate": certificate_summary(cert, settings.report_verbosity),
        }

    _run(ctx, "inversion", [file], body)


@main.command()
@click.argument("file", type=InputPath)
@click.option("--k-vertices", "k_source", required=True, help="Seeds of the convex subspace K")
@click.option("--cap", type=int, default=None, help="Truncation for poset and category documents")
@click.pass_context
def crapo(ctx: click.Context, file: str, k_source: str, cap: Optional[int]):
    """Check Crapo complementation for the convex hull of the given vertices"""

    def body(settings: Settings):
        X = _space(file, cap)
        cert = certify_finiteness(X)
        K = convex_hull(X, _vertices(X, k_source))
        report = check_crapo(build_context(X, K, cert))
        return report.passed, {
            "verdicts": crapo_verdicts(report, settings.report_verbosity),
            "tables": {"crapo": crapo_rows(report)},
            "certificate": certificate_summary(cert, settings.report_verbosity),
            "subspace": SubSSetDocument.from_subsset(K, "convex"),
        }

    _run(ctx, "crapo", [file], body)


@main.command()
@click.argument("directory", type=click.Path(file_okay=False, path_type=str))
@click.option("--only", multiple=True, type=click.Choice(fixture_corpus.names()), help="Export only these")
@click.pass_context
def corpus(ctx: click.Context, directory: str, only: Tuple[str, ...]):
    """Write the named fixture corpus as documents into DIRECTORY"""

    def body(settings: Settings):
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for name in only or fixture_corpus.names():
            path = out / f"{name}.json"
            save(fixture_corpus.corpus_document(name), path)
            written.append(str(path))
        return True, {"files": written}

    _run(ctx, "corpus", [], body)


if __name__ == "__main__":
    main()
