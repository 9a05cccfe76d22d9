"""Batch export: manifest -> joint embeddings in the PGRS format.

Per record, the image block and the text block are each L2-normalized,
concatenated, and the joint vector normalized again, so neither modality's
scale dominates downstream cosine geometry. Output rows follow manifest
order exactly; records whose image cannot be read are logged, skipped, and
counted. A sidecar metadata JSON records the models, dimensions, pooling,
and normalization mode that produced the file.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .encoders import ImageEncoder, TextEncoder, build_encoders
from .manifest import ManifestEntry, read_manifest
from .pgrs import write_pgrs

logger = logging.getLogger("embed_export")

NORMALIZATION_MODE = "per-modality-then-joint"


@dataclass
class ExportJob:
    manifest: str
    output: str
    image_model: str
    text_model: str
    backend: str = "hf"
    pooling: str = "cls"
    batch_size: int = 16
    device: str = "cpu"
    stub_dim: int = 64


@dataclass
class ExportResult:
    written: int
    skipped: int
    skipped_ids: list[int]
    joint_dim: int
    sidecar: str


def _normalize_block(block: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(block.astype(np.float64), axis=1, keepdims=True)
    if np.any(norms < 1e-12):
        raise ValueError("encoder produced a zero vector")
    return block.astype(np.float64) / norms


def fuse(image_block: np.ndarray, text_block: np.ndarray) -> np.ndarray:
    joint = np.concatenate(
        [_normalize_block(image_block), _normalize_block(text_block)], axis=1
    )
    joint /= np.linalg.norm(joint, axis=1, keepdims=True)
    return joint.astype(np.float32)


def run_export(job: ExportJob) -> ExportResult:
    entries = read_manifest(job.manifest)
    image_enc, text_enc = build_encoders(
        job.backend, job.image_model, job.text_model, job.pooling, job.device, job.stub_dim
    )

    kept: list[ManifestEntry] = []
    rows: list[np.ndarray] = []
    skipped_ids: list[int] = []
    for start in range(0, len(entries), job.batch_size):
        batch = entries[start : start + job.batch_size]
        # encode images one by one so a single bad file skips one record
        image_feats = []
        good: list[ManifestEntry] = []
        for entry in batch:
            try:
                image_feats.append(image_enc.encode([entry.image])[0])
            except (OSError, ValueError) as exc:
                logger.error("skipping id %d: unreadable image %s (%s)", entry.id, entry.image, exc)
                skipped_ids.append(entry.id)
                continue
            good.append(entry)
        if not good:
            continue
        text_feats = text_enc.encode([e.question for e in good])
        joint = fuse(np.stack(image_feats), np.asarray(text_feats))
        rows.extend(joint)
        kept.extend(good)

    if not kept:
        raise ValueError("no exportable records (all skipped or manifest empty)")
    ids = np.asarray([e.id for e in kept], dtype=np.uint64)
    matrix = np.stack(rows)
    write_pgrs(ids, matrix, job.output)

    sidecar_path = str(Path(job.output).with_suffix(Path(job.output).suffix + ".meta.json"))
    sidecar = {
        "manifest": str(job.manifest),
        "backend": job.backend,
        "image_model": image_enc.name,
        "text_model": text_enc.name,
        "image_dim": image_enc.dim,
        "text_dim": text_enc.dim,
        "joint_dim": int(matrix.shape[1]),
        "pooling": job.pooling,
        "normalization": NORMALIZATION_MODE,
        "records_written": len(kept),
        "records_skipped": len(skipped_ids),
        "skipped_ids": skipped_ids,
    }
    with open(sidecar_path, "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")
    return ExportResult(
        written=len(kept),
        skipped=len(skipped_ids),
        skipped_ids=skipped_ids,
        joint_dim=int(matrix.shape[1]),
        sidecar=sidecar_path,
    )
