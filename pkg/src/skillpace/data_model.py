"""Sample manifests and the binary embedding store.

Two on-disk formats are owned here and treated as stable, versioned
contracts:

* Manifest: JSON lines with keys ``id``, ``question``, ``image`` and the
  optional ``answer`` and ``source``. An answer is only present once the
  sample has been charged to the annotation budget.
* Embedding file: little-endian binary. Header = magic ``PGRS``, format
  version u32 (=1), n u64, d u32, dtype code u8 (=1 for float32), 3
  reserved zero bytes. Body = n records of (id u64, d float32 values).
  write -> read is bit-exact on both ids and rows.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, IntegrityError, ManifestError, ValidationError

MAGIC = b"PGRS"
FORMAT_VERSION = 1
DTYPE_FLOAT32 = 1
_HEADER = struct.Struct("<4sIQIB3x")  # magic, version, n, d, dtype, pad

MIN_ROW_NORM = 1e-12


@dataclass
class SampleRecord:
    """One (image, question) pool element, optionally annotated."""

    id: int
    question: str
    image_ref: str
    answer: str | None = None
    source: str | None = None


@dataclass
class EmbeddingMatrix:
    """Row-aligned feature vectors with their sample ids.

    ``rows`` is an (n, d) float32 array, ``ids`` the matching uint64 ids.
    All entries must be finite; n >= 1 and d >= 1.
    """

    ids: np.ndarray
    rows: np.ndarray

    def __post_init__(self) -> None:
        self.ids = np.ascontiguousarray(self.ids, dtype=np.uint64)
        self.rows = np.ascontiguousarray(self.rows, dtype=np.float32)
        if self.rows.ndim != 2:
            raise ValidationError(f"rows must be 2-d, got shape {self.rows.shape}")
        n, d = self.rows.shape
        if n < 1 or d < 1:
            raise ValidationError(f"matrix must be at least 1x1, got {n}x{d}")
        if self.ids.shape != (n,):
            raise ValidationError(f"ids length {self.ids.shape} does not match {n} rows")
        if len(np.unique(self.ids)) != n:
            raise IntegrityError("duplicate ids in embedding matrix")
        if not np.all(np.isfinite(self.rows)):
            raise ValidationError("non-finite entry in embedding matrix")

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def d(self) -> int:
        return self.rows.shape[1]


def load_manifest(path: str | Path) -> list[SampleRecord]:
    """Parse a JSONL manifest in file order.

    Raises ManifestError (with line number) on malformed lines and
    IntegrityError on duplicate ids.
    """
    records: list[SampleRecord] = []
    seen: set[int] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"invalid JSON ({exc.msg})", lineno) from exc
            if not isinstance(obj, dict):
                raise ManifestError("expected a JSON object", lineno)
            try:
                sample_id = int(obj["id"])
                question = obj["question"]
                image_ref = obj["image"]
            except KeyError as exc:
                raise ManifestError(f"missing key {exc.args[0]!r}", lineno) from exc
            if not isinstance(question, str) or not question:
                raise ManifestError("question must be a non-empty string", lineno)
            if sample_id in seen:
                raise IntegrityError(f"duplicate id {sample_id} at line {lineno}")
            seen.add(sample_id)
            records.append(
                SampleRecord(
                    id=sample_id,
                    question=question,
                    image_ref=str(image_ref),
                    answer=obj.get("answer"),
                    source=obj.get("source"),
                )
            )
    return records


def save_manifest(records: list[SampleRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            obj: dict = {"id": rec.id, "question": rec.question, "image": rec.image_ref}
            if rec.answer is not None:
                obj["answer"] = rec.answer
            if rec.source is not None:
                obj["source"] = rec.source
            fh.write(json.dumps(obj) + "\n")


def concat_features(image_emb: np.ndarray, text_emb: np.ndarray) -> np.ndarray:
    """Concatenate an image feature block with a text feature block."""
    image_emb = np.asarray(image_emb, dtype=np.float32).ravel()
    text_emb = np.asarray(text_emb, dtype=np.float32).ravel()
    if image_emb.size < 1 or text_emb.size < 1:
        raise ValidationError("both feature blocks must be non-empty")
    if not (np.all(np.isfinite(image_emb)) and np.all(np.isfinite(text_emb))):
        raise ValidationError("non-finite entry in feature block")
    return np.concatenate([image_emb, text_emb])


def normalize_rows(m: EmbeddingMatrix) -> EmbeddingMatrix:
    """Scale every row to unit L2 norm, preserving ids.

    Rows with norm below MIN_ROW_NORM are degenerate; the error names the
    offending sample id.
    """
    norms = np.linalg.norm(m.rows.astype(np.float64), axis=1)
    bad = np.where(norms < MIN_ROW_NORM)[0]
    if bad.size:
        raise ValidationError(f"degenerate (near-zero) embedding row for id {int(m.ids[bad[0]])}")
    rows = (m.rows.astype(np.float64) / norms[:, None]).astype(np.float32)
    return EmbeddingMatrix(ids=m.ids.copy(), rows=rows)


def fuse_modalities(image_block: np.ndarray, text_block: np.ndarray) -> np.ndarray:
    """Join one image vector and one text vector into a joint unit vector.

    Each block is L2-normalized on its own before concatenation so neither
    modality's scale dominates cosine geometry, then the joint vector is
    normalized again. The embedding exporter applies the identical rule.
    """

    def _unit(v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64).ravel()
        nrm = np.linalg.norm(v)
        if nrm < MIN_ROW_NORM:
            raise ValidationError("degenerate feature block (near-zero norm)")
        return v / nrm

    joint = concat_features(_unit(image_block), _unit(text_block))
    return (joint / np.linalg.norm(joint.astype(np.float64))).astype(np.float32)


def write_embeddings(m: EmbeddingMatrix, path: str | Path) -> None:
    """Write the binary embedding format (see module docstring)."""
    rec = struct.Struct(f"<Q{m.d}f")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, m.n, m.d, DTYPE_FLOAT32))
        for i in range(m.n):
            fh.write(rec.pack(int(m.ids[i]), *m.rows[i].tolist()))


def read_embeddings(path: str | Path) -> EmbeddingMatrix:
    """Read the binary embedding format, validating header and length."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: file shorter than header ({len(data)} bytes)")
    magic, version, n, d, dtype = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format version {version}")
    if dtype != DTYPE_FLOAT32:
        raise FormatError(f"{path}: unsupported dtype code {dtype}")
    if n < 1 or d < 1:
        raise FormatError(f"{path}: header declares empty matrix ({n}x{d})")
    expected = _HEADER.size + n * (8 + 4 * d)
    if len(data) != expected:
        raise FormatError(
            f"{path}: truncated or oversized file (expected {expected} bytes, found {len(data)})"
        )
    records = np.frombuffer(
        data, dtype=np.dtype([("id", "<u8"), ("row", "<f4", (d,))]), offset=_HEADER.size
    )
    ids = records["id"].astype(np.uint64)
    rows = records["row"].astype(np.float32)
    return EmbeddingMatrix(ids=ids, rows=rows)


def check_manifest_alignment(records: list[SampleRecord], m: EmbeddingMatrix) -> None:
    """Assert the manifest and the embedding file carry identical id sets."""
    manifest_ids = {rec.id for rec in records}
    matrix_ids = set(int(i) for i in m.ids)
    if manifest_ids != matrix_ids:
        missing = sorted(manifest_ids - matrix_ids)[:5]
        extra = sorted(matrix_ids - manifest_ids)[:5]
        raise IntegrityError(
            f"manifest/embedding id mismatch (missing from embeddings: {missing}, "
            f"unknown to manifest: {extra})"
        )
