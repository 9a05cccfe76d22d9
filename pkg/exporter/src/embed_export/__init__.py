"""Joint image+text embedding exporter for the PGRS binary format."""

from .encoders import DEFAULT_IMAGE_MODEL, DEFAULT_TEXT_MODEL, build_encoders
from .export import ExportJob, ExportResult, fuse, run_export
from .manifest import ManifestEntry, ManifestFormatError, read_manifest
from .pgrs import write_pgrs

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_IMAGE_MODEL",
    "DEFAULT_TEXT_MODEL",
    "ExportJob",
    "ExportResult",
    "ManifestEntry",
    "ManifestFormatError",
    "build_encoders",
    "fuse",
    "read_manifest",
    "run_export",
    "write_pgrs",
]
