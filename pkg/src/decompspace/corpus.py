"""
Named fixture corpus: small posets, categories, engineered non-decomposition spaces and maps
"""

from typing import Callable, Dict, List

from pydantic import BaseModel

from .documents import (
    CategoryDocument,
    Composite,
    MapDocument,
    Morphism,
    PosetDocument,
    SSetDocument,
    sset_document,
    space_from_document,
)
from .exceptions import DocumentError
from .nerve import chain_name, chain_poset, nerve
from .sset import TruncatedSSet


def _chain(length: int, cap=None, name: str = "") -> PosetDocument:
    names = [str(i) for i in range(length + 1)]
    return PosetDocument(name=name, elements=names, relations=list(zip(names, names[1:])), cap=cap)


def _b2() -> PosetDocument:
    return PosetDocument(
        name="b2",
        elements=["0", "a", "b", "1"],
        relations=[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
    )


def _raw(X: TruncatedSSet, name: str) -> SSetDocument:
    document = sset_document(X)
    document.name = name
    return document


def _duplicate(document: SSetDocument, level: int, cell: str) -> SSetDocument:
    """Add a copy of a top-level cell with the same faces"""
    twin = cell + "'"
    document.cells[level].append(twin)
    for entry in document.faces:
        if entry.level == level:
            entry.table[twin] = entry.table[cell]
    return document


def _notdcmp() -> SSetDocument:
    """Nerve of 0<1<2<3 with a second copy of its 3-simplex"""
    X = nerve(chain_poset(3), cap=3)
    return _duplicate(_raw(X, "notdcmp"), 3, chain_name("0123"))


def _hollow() -> SSetDocument:
    """Nerve of 0<1<2<3 with its 3-simplex removed"""
    document = _raw(nerve(chain_poset(3), cap=3), "hollow")
    top = chain_name("0123")
    document.cells[3].remove(top)
    for entry in document.faces:
        entry.table.pop(top, None)
    return document


def _dupdegen() -> SSetDocument:
    """Nerve of 0<1<2 with a second copy of the degenerate 3-cell (0,1,1,2)"""
    X = nerve(chain_poset(2), cap=3)
    return _duplicate(_raw(X, "dupdegen"), 3, chain_name("0112"))


def _z2() -> CategoryDocument:
    """The group of order two as a one-object category"""
    table = {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"}
    return CategoryDocument(
        name="z2",
        objects=["*"],
        morphisms=[Morphism(name=m, source="*", target="*") for m in ("e", "g")],
        identities={"*": "e"},
        compose=[Composite(first=f, second=g, result=h) for (f, g), h in table.items()],
        cap=3,
    )


def _chain3_category() -> CategoryDocument:
    category = chain_poset(2).as_category()
    return CategoryDocument(
        name="chain3-category",
        objects=list(category.objects),
        morphisms=[Morphism(name=m, source=s, target=t) for m, (s, t) in category.morphisms.items()],
        identities=dict(category.identities),
        compose=[Composite(first=f, second=g, result=h) for (g, f), h in category.compose.items()],
        cap=3,
        declared_bound=2,
    )


CORPUS: Dict[str, Callable[[], BaseModel]] = {
    "point": lambda: PosetDocument(name="point", elements=["x"]),
    "chain2": lambda: _chain(1, name="chain2"),
    "chain3": lambda: _chain(2, name="chain3"),
    "delta2": lambda: _chain(2, cap=3, name="delta2"),
    "delta02": lambda: PosetDocument(name="delta02", elements=["0", "2"], relations=[("0", "2")], cap=3),
    "discrete2": lambda: PosetDocument(name="discrete2", elements=["0", "1"], cap=2),
    "antichain2": lambda: PosetDocument(name="antichain2", elements=["p", "q"]),
    "b2": _b2,
    "notdcmp": _notdcmp,
    "hollow": _hollow,
    "dupdegen": _dupdegen,
    "z2": _z2,
    "chain3-category": _chain3_category,
    "incl-delta02": lambda: MapDocument(vertices={"0": "0", "2": "2"}),
    "incl-discrete2": lambda: MapDocument(vertices={"0": "0", "1": "1"}),
}

NEGATIVES = ("notdcmp", "hollow", "dupdegen")


def names() -> List[str]:
    return list(CORPUS)


def corpus_document(name: str) -> BaseModel:
    if name not in CORPUS:
        raise DocumentError(f"no corpus entry named {name!r}", "corpus")
    return CORPUS[name]()


def corpus_space(name: str) -> TruncatedSSet:
    return space_from_document(corpus_document(name))
