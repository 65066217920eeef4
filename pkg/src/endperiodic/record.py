"""End-to-end pipeline orchestration and the JSON construction record.

``run_pipeline`` chains every stage of the construction for one input
matrix.  ``build_record`` freezes the result into a versioned,
deterministic JSON document (a single timestamp field is excluded from
hashing), and ``verify_record`` re-runs the construction from the
embedded configuration and checks the stored sections against it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .decomposition import (
    StripDecomposition,
    build_decomposition,
    corner_selection,
    piece_map,
)
from .edgemaps import (
    EdgeMapSystem,
    all_periodic_points,
    build_edge_maps,
    census_json,
    choose_initial_points,
    link_corner_partners,
)
from .errors import InvalidInputError, VerificationError
from .gluing import (
    ClassCensus,
    ExtendedPieceMap,
    IdentificationSchema,
    SurfaceReport,
    assemble_surface,
    attach_strips,
    build_extended_map,
    classify_classes,
    enumerate_identifications,
)
from .markov import IncidenceReport, verify_stretch
from .spectral import DEFAULT_TOL, IntMatrix, PerronData, perron_eigendata

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class PipelineResult:
    """All intermediate and final objects of one construction run."""

    matrix: IntMatrix
    eigen: PerronData
    decomposition: StripDecomposition
    system: EdgeMapSystem
    points: dict
    extended: ExtendedPieceMap
    schema: IdentificationSchema
    census: ClassCensus
    surface: SurfaceReport
    incidence: IncidenceReport


def run_pipeline(
    M: IntMatrix,
    tol: float = DEFAULT_TOL,
    depth_cap: int | None = None,
    use_corner_selection: bool = True,
    insert_genus: bool = False,
    weak_perron_k: int | None = None,
    doubled: bool = True,
) -> PipelineResult:
    """Run the full construction on one irreducible matrix."""
    eigen = perron_eigendata(M, tol=tol)
    if use_corner_selection:
        sigma, tau = corner_selection(M)
        D = build_decomposition(M, eigen, sigma=sigma, tau=tau)
    else:
        D = build_decomposition(M, eigen)
    P = piece_map(D)
    system = build_edge_maps(P)
    points = all_periodic_points(system)
    link_corner_partners(points)
    choose_initial_points(points)
    strips = attach_strips(system, points)
    ext = build_extended_map(system, strips, points)
    schema = enumerate_identifications(ext, depth_cap=depth_cap)
    census = classify_classes(schema, ext)
    surface = assemble_surface(
        ext,
        schema,
        census,
        insert_genus=insert_genus,
        weak_perron_k=weak_perron_k,
        doubled=doubled,
    )
    incidence = verify_stretch(M, surface, tol=max(tol, 1e-9))
    return PipelineResult(
        matrix=M,
        eigen=eigen,
        decomposition=D,
        system=system,
        points=points,
        extended=ext,
        schema=schema,
        census=census,
        surface=surface,
        incidence=incidence,
    )


@dataclass(frozen=True)
class ConstructionRecord:
    """Versioned JSON certificate for one construction run."""

    schema_version: str
    config: dict
    sections: dict
    created_at: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def to_json_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "config": self.config,
            "sections": self.sections,
            "created_at": self.created_at,
            "content_hash": self.content_hash(),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent, sort_keys=True)

    def content_hash(self) -> str:
        """SHA-256 over everything except the timestamp."""
        payload = json.dumps(
            {
                "schema_version": self.schema_version,
                "config": self.config,
                "sections": self.sections,
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _config_dict(
    M: IntMatrix,
    tol: float,
    depth_cap: int | None,
    use_corner_selection: bool,
    insert_genus: bool,
    weak_perron_k: int | None,
    doubled: bool,
) -> dict:
    return {
        "matrix": M.to_lists(),
        "tol": tol,
        "depth_cap": depth_cap,
        "corner_selection": use_corner_selection,
        "insert_genus": insert_genus,
        "weak_perron_k": weak_perron_k,
        "doubled": doubled,
    }


def build_record(
    M: IntMatrix,
    tol: float = DEFAULT_TOL,
    depth_cap: int | None = None,
    use_corner_selection: bool = True,
    insert_genus: bool = False,
    weak_perron_k: int | None = None,
    doubled: bool = True,
) -> tuple[ConstructionRecord, PipelineResult]:
    """Run the pipeline and freeze the result into a record."""
    result = run_pipeline(
        M,
        tol=tol,
        depth_cap=depth_cap,
        use_corner_selection=use_corner_selection,
        insert_genus=insert_genus,
        weak_perron_k=weak_perron_k,
        doubled=doubled,
    )
    sections = {
        "eigendata": result.eigen.to_json_dict(),
        "decomposition": result.decomposition.to_json_dict(),
        "edge_digraphs": {
            kind: result.system.maps[kind].export_digraph()
            for kind in result.system.maps
        },
        "periodic_points": json.loads(census_json(result.points)),
        "identifications": result.schema.to_json_dict(),
        "class_census": result.census.to_json_dict(),
        "surface": result.surface.to_json_dict(),
        "incidence": result.incidence.to_json_dict(),
    }
    config = _config_dict(
        M, tol, depth_cap, use_corner_selection, insert_genus, weak_perron_k, doubled
    )
    record = ConstructionRecord(
        schema_version=SCHEMA_VERSION, config=config, sections=sections
    )
    return record, result


def load_record(text: str) -> dict:
    """Parse a stored record, checking the schema version."""
    data = json.loads(text)
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise InvalidInputError(
            f"record schema version {version!r} is not supported "
            f"(expected {SCHEMA_VERSION!r})"
        )
    return data


def verify_record(data: dict) -> list[tuple[str, bool, str]]:
    """Re-run the construction from the embedded config and diff sections.

    Returns one (section, passed, detail) triple per stored section.
    Raises :class:`VerificationError` if any section disagrees.
    """
    cfg = data["config"]
    M = IntMatrix.from_rows(cfg["matrix"])
    fresh, _ = build_record(
        M,
        tol=cfg["tol"],
        depth_cap=cfg["depth_cap"],
        use_corner_selection=cfg["corner_selection"],
        insert_genus=cfg["insert_genus"],
        weak_perron_k=cfg["weak_perron_k"],
        doubled=cfg["doubled"],
    )
    results = []
    failures = []
    for name in sorted(fresh.sections):
        stored = data["sections"].get(name)
        expected = fresh.sections[name]
        same = json.dumps(stored, sort_keys=True) == json.dumps(
            expected, sort_keys=True
        )
        detail = "match" if same else "stored section differs from recomputation"
        results.append((name, same, detail))
        if not same:
            failures.append(name)
    stored_hash = data.get("content_hash")
    hash_ok = stored_hash == ConstructionRecord(
        schema_version=data["schema_version"],
        config=cfg,
        sections=data["sections"],
    ).content_hash()
    results.append(
        ("content_hash", hash_ok, "match" if hash_ok else "hash mismatch")
    )
    if not hash_ok:
        failures.append("content_hash")
    if failures:
        raise VerificationError(
            "record verification failed: " + ", ".join(failures),
            expected="stored sections equal to recomputation",
            actual=failures,
        )
    return results
