"""Minimal JSONL manifest reader matching the selection engine's schema."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


@dataclass
class ManifestEntry:
    id: int
    question: str
    image: str


class ManifestFormatError(ValueError):
    pass


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    entries: list[ManifestEntry] = []
    seen: set[int] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                entry = ManifestEntry(
                    id=int(obj["id"]), question=str(obj["question"]), image=str(obj["image"])
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ManifestFormatError(f"{path}: line {lineno}: {exc}") from exc
            if entry.id in seen:
                raise ManifestFormatError(f"{path}: duplicate id {entry.id} at line {lineno}")
            seen.add(entry.id)
            entries.append(entry)
    return entries
