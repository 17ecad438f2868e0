"""
JSON documents for spaces, maps and vertex sets
Every document is one object with a "type" tag; load/save round-trip canonical files
"""

import json
from pathlib import Path
from typing import Annotated, Dict, List, Literal, Optional, Tuple, Union

import structlog
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from .exceptions import DecompError, DocumentError, SimplicialIdentityError
from .nerve import FiniteCategory, Poset, nerve, nerve_category, vertex_names
from .sset import Provenance, SimplicialMap, SubSSet, TruncatedSSet

logger = structlog.get_logger()


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PosetDocument(_Document):
    """Finite poset given by cover relations or by the full order"""

    type: Literal["poset"] = "poset"
    name: Optional[str] = Field(default=None, description="Label used in reports")
    elements: List[str] = Field(..., description="Element names, in canonical order")
    relations: List[Tuple[str, str]] = Field(default_factory=list, description="Pairs (x, y) meaning x <= y")
    kind: Literal["covers", "order"] = Field(default="covers", description="covers are closed transitively")
    cap: Optional[int] = Field(default=None, description="Truncation; defaults to one above the longest chain")

    def to_poset(self) -> Poset:
        return Poset.from_relations(self.elements, self.relations, self.kind)

    def to_sset(self) -> TruncatedSSet:
        return nerve(self.to_poset(), self.cap, name=self.name or "")


class StructureMap(_Document):
    level: int = Field(..., description="Level of the domain cells")
    index: int = Field(..., description="i in d_i or s_i")
    table: Dict[str, str] = Field(..., description="Cell -> image cell")


class SSetDocument(_Document):
    """Explicit face and degeneracy tables

    Spaces loaded from tables are always raw; nerve provenance comes only
    from a poset or category document.
    """

    type: Literal["sset"] = "sset"
    name: Optional[str] = None
    cap: int = Field(..., ge=0)
    cells: List[List[str]] = Field(..., description="cells[n] lists X_n")
    faces: List[StructureMap] = Field(default_factory=list)
    degeneracies: List[StructureMap] = Field(default_factory=list)

    def to_sset(self, validate: bool = True) -> TruncatedSSet:
        if len(self.cells) != self.cap + 1:
            raise DocumentError(f"expected {self.cap + 1} levels of cells, got {len(self.cells)}", "cells")
        faces = self._tables(self.faces, "faces", lambda n: 1 <= n <= self.cap, -1)
        degeneracies = self._tables(self.degeneracies, "degeneracies", lambda n: 0 <= n < self.cap, 1)
        try:
            return TruncatedSSet(
                self.cap,
                self.cells,
                faces,
                degeneracies,
                Provenance.RAW,
                None,
                name=self.name or "",
                validate=validate,
            )
        except SimplicialIdentityError as exc:
            first = exc.violations[0] if exc.violations else None
            where = f"level {first.level}" if first else None
            raise DocumentError(str(exc), where) from exc

    def _tables(self, maps: List[StructureMap], what: str, level_ok, shift: int):
        tables = {}
        for position, entry in enumerate(maps):
            where = f"{what}[{position}] level {entry.level} index {entry.index}"
            n, i = entry.level, entry.index
            if not level_ok(n) or not 0 <= i <= n:
                raise DocumentError("no such structure map within the cap", where)
            if (n, i) in tables:
                raise DocumentError("structure map given twice", where)
            domain, codomain = set(self.cells[n]), set(self.cells[n + shift])
            if set(entry.table) != domain:
                raise DocumentError(f"table does not cover exactly the level-{n} cells", where)
            stray = [v for v in entry.table.values() if v not in codomain]
            if stray:
                raise DocumentError(f"{stray[0]} is not a level-{n + shift} cell", where)
            tables[(n, i)] = entry.table
        return tables


class Morphism(_Document):
    name: str
    source: str
    target: str


class Composite(_Document):
    first: str = Field(..., description="f: a -> b")
    second: str = Field(..., description="g: b -> c")
    result: str = Field(..., description="g after f")


class CategoryDocument(_Document):
    """Finite category with a total composition table"""

    type: Literal["category"] = "category"
    name: Optional[str] = None
    objects: List[str]
    morphisms: List[Morphism]
    identities: Dict[str, str]
    compose: List[Composite]
    cap: int = Field(..., ge=2)
    declared_bound: Optional[int] = Field(
        default=None, description="Longest chain of non-identity morphisms, verified at the cap"
    )

    def to_category(self) -> FiniteCategory:
        return FiniteCategory(
            self.objects,
            {m.name: (m.source, m.target) for m in self.morphisms},
            self.identities,
            {(c.second, c.first): c.result for c in self.compose},
        )

    def to_sset(self) -> TruncatedSSet:
        return nerve_category(self.to_category(), self.cap, self.declared_bound, name=self.name or "")


class MapDocument(_Document):
    """A simplicial map given levelwise or by its vertex component"""

    type: Literal["map"] = "map"
    components: Optional[Dict[int, Dict[str, str]]] = Field(default=None, description="level -> table")
    vertices: Optional[Dict[str, str]] = Field(
        default=None, description="Vertex map; the target must be determined by vertex tuples"
    )

    def to_map(self, source: TruncatedSSet, target: TruncatedSSet) -> SimplicialMap:
        if (self.components is None) == (self.vertices is None):
            raise DocumentError("give exactly one of components and vertices", "map")
        if self.vertices is not None:
            keys = vertex_names(source, self.vertices.keys())
            values = vertex_names(target, self.vertices.values())
            vmap = dict(zip(keys, values))
            return SimplicialMap.from_vertex_map(source, target, vmap)
        return SimplicialMap(source, target, self.components)


class VertexSetDocument(_Document):
    type: Literal["vertices"] = "vertices"
    vertices: List[str]


class SubSSetDocument(_Document):
    """Selected cells of an ambient space, level by level"""

    type: Literal["subsset"] = "subsset"
    ambient: Optional[str] = None
    construction: Literal["full", "convex"]
    vertices: List[str]
    cells: List[List[str]]

    @classmethod
    def from_subsset(cls, K: SubSSet, construction: str) -> "SubSSetDocument":
        X = K.ambient
        return cls(
            ambient=X.name or None,
            construction=construction,
            vertices=[v for v in X.level(0) if v in K.vertex_set],
            cells=[[c for c in X.level(n) if K.contains(n, c)] for n in range(X.cap + 1)],
        )


Document = Annotated[
    Union[
        PosetDocument,
        SSetDocument,
        CategoryDocument,
        MapDocument,
        VertexSetDocument,
        SubSSetDocument,
    ],
    Field(discriminator="type"),
]

_adapter = TypeAdapter(Document)


def parse(text: str, source: str = "<text>"):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from exc
    try:
        return _adapter.validate_python(raw)
    except ValidationError as exc:
        error = exc.errors()[0]
        where = ".".join(str(part) for part in error["loc"])
        raise DocumentError(error["msg"], f"{source}: {where}") from exc


def load(path: Union[str, Path]):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(str(exc), str(path)) from exc
    return parse(text, str(path))


def dumps(document: BaseModel) -> str:
    return json.dumps(document.model_dump(mode="json", exclude_none=True), indent=2, ensure_ascii=False) + "\n"


def save(document: BaseModel, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(document), encoding="utf-8")
    logger.info("Document saved", path=str(path), type=getattr(document, "type", None))


def sset_document(X: TruncatedSSet) -> SSetDocument:
    return SSetDocument(
        name=X.name or None,
        cap=X.cap,
        cells=[list(level) for level in X.cells],
        faces=[
            StructureMap(level=n, index=i, table=dict(X.faces[(n, i)]))
            for n in range(1, X.cap + 1)
            for i in range(n + 1)
        ],
        degeneracies=[
            StructureMap(level=n, index=i, table=dict(X.degeneracies[(n, i)]))
            for n in range(X.cap)
            for i in range(n + 1)
        ],
    )


def space_from_document(document) -> TruncatedSSet:
    if isinstance(document, (PosetDocument, SSetDocument, CategoryDocument)):
        try:
            return document.to_sset()
        except DocumentError:
            raise
        except DecompError as exc:
            raise DocumentError(str(exc), document.type) from exc
    raise DocumentError(f"expected a poset, sset or category document, got {document.type}", "type")


def load_space(path: Union[str, Path]) -> TruncatedSSet:
    document = load(path)
    if getattr(document, "name", "") is None:
        document.name = Path(path).name
    return space_from_document(document)


def load_map(path: Union[str, Path], source: TruncatedSSet, target: TruncatedSSet) -> SimplicialMap:
    document = load(path)
    if not isinstance(document, MapDocument):
        raise DocumentError(f"expected a map document, got {document.type}", str(path))
    try:
        return document.to_map(source, target)
    except DocumentError:
        raise
    except DecompError as exc:
        raise DocumentError(str(exc), str(path)) from exc


def load_vertices(path: Union[str, Path]) -> List[str]:
    document = load(path)
    if not isinstance(document, VertexSetDocument):
        raise DocumentError(f"expected a vertices document, got {document.type}", str(path))
    return document.vertices
