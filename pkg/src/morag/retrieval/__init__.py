from .database import (
    DatabaseEntry,
    PartDatabase,
    RetrievalItem,
    RetrievalResult,
    build,
    query,
    retrieve_parts,
)
from .fileio import (
    load_database,
    load_lookup,
    normalize_text,
    read_manifest,
    read_similarity_matrix,
    read_vectors,
    save_database,
    save_lookup,
    write_manifest,
    write_similarity_matrix,
    write_vectors,
)

__all__ = [
    "DatabaseEntry",
    "PartDatabase",
    "RetrievalItem",
    "RetrievalResult",
    "build",
    "query",
    "retrieve_parts",
    "load_database",
    "save_database",
    "read_manifest",
    "write_manifest",
    "read_vectors",
    "write_vectors",
    "read_similarity_matrix",
    "write_similarity_matrix",
    "load_lookup",
    "save_lookup",
    "normalize_text",
]
