"""embed-export: manifest in, PGRS embedding file + sidecar metadata out.

Exit codes: 0 all records exported, 1 completed with skipped records,
2 bad arguments or unusable inputs.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .encoders import DEFAULT_IMAGE_MODEL, DEFAULT_TEXT_MODEL
from .export import ExportJob, run_export
from .manifest import ManifestFormatError


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="embed-export", description=__doc__)
    ap.add_argument("--manifest", required=True, help="JSONL of {id, question, image}")
    ap.add_argument("--out", required=True, help="output .pgrs path")
    ap.add_argument("--backend", choices=["hf", "stub"], default="hf")
    ap.add_argument("--image-model", default=DEFAULT_IMAGE_MODEL)
    ap.add_argument("--text-model", default=DEFAULT_TEXT_MODEL)
    ap.add_argument("--pooling", choices=["cls", "mean"], default="cls")
    ap.add_argument("--batch-size", type=int, default=16)
    ap.add_argument("--device", default="cpu")
    ap.add_argument("--stub-dim", type=int, default=64, help="per-modality dim for the stub backend")
    return ap


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    job = ExportJob(
        manifest=args.manifest,
        output=args.out,
        image_model=args.image_model,
        text_model=args.text_model,
        backend=args.backend,
        pooling=args.pooling,
        batch_size=args.batch_size,
        device=args.device,
        stub_dim=args.stub_dim,
    )
    try:
        result = run_export(job)
    except (ManifestFormatError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(
        f"wrote {result.written} rows (dim {result.joint_dim}) to {job.output}; "
        f"skipped {result.skipped}; metadata in {result.sidecar}"
    )
    return 0 if result.skipped == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
