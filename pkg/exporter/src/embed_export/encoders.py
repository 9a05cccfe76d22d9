"""Image and text encoders behind one small interface.

Two backends:

* ``stub``: deterministic pseudo-embeddings derived from content digests.
  No model downloads, useful for pipeline tests and offline smoke runs;
  unreadable images still fail here, so the skip path is exercised.
* ``hf``: self-supervised ViT features for images and BERT features for
  questions via ``transformers`` (optional extra), with CLS or mean-pooled
  representations.
"""

from __future__ import annotations

import hashlib
from pathlib import Path
from typing import Protocol

import numpy as np

DEFAULT_IMAGE_MODEL = "facebook/dino-vitb16"
DEFAULT_TEXT_MODEL = "bert-base-uncased"


class ImageEncoder(Protocol):
    dim: int
    name: str

    def encode(self, paths: list[str]) -> np.ndarray: ...


class TextEncoder(Protocol):
    dim: int
    name: str

    def encode(self, texts: list[str]) -> np.ndarray: ...


def _digest_vector(payload: bytes, dim: int) -> np.ndarray:
    seed = int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")
    return np.random.default_rng(seed).standard_normal(dim).astype(np.float32)


class StubImageEncoder:
    name = "stub-image"

    def __init__(self, dim: int = 64):
        self.dim = dim

    def encode(self, paths: list[str]) -> np.ndarray:
        out = np.empty((len(paths), self.dim), dtype=np.float32)
        for i, p in enumerate(paths):
            out[i] = _digest_vector(Path(p).read_bytes(), self.dim)
        return out


class StubTextEncoder:
    name = "stub-text"

    def __init__(self, dim: int = 64):
        self.dim = dim

    def encode(self, texts: list[str]) -> np.ndarray:
        out = np.empty((len(texts), self.dim), dtype=np.float32)
        for i, t in enumerate(texts):
            out[i] = _digest_vector(t.encode("utf-8"), self.dim)
        return out


class HfImageEncoder:
    """ViT-style image encoder (DINO checkpoints by default)."""

    def __init__(self, model_id: str = DEFAULT_IMAGE_MODEL, pooling: str = "cls", device: str = "cpu"):
        import torch
        from transformers import AutoImageProcessor, AutoModel

        self.name = model_id
        self.pooling = pooling
        self.device = device
        self._torch = torch
        self.processor = AutoImageProcessor.from_pretrained(model_id)
        self.model = AutoModel.from_pretrained(model_id).to(device).eval()
        self.dim = int(self.model.config.hidden_size)

    def encode(self, paths: list[str]) -> np.ndarray:
        from PIL import Image

        images = [Image.open(p).convert("RGB") for p in paths]
        inputs = self.processor(images=images, return_tensors="pt").to(self.device)
        with self._torch.no_grad():
            hidden = self.model(**inputs).last_hidden_state
        if self.pooling == "cls":
            feats = hidden[:, 0]
        else:
            feats = hidden.mean(dim=1)
        return feats.cpu().numpy().astype(np.float32)


class HfTextEncoder:
    def __init__(self, model_id: str = DEFAULT_TEXT_MODEL, pooling: str = "cls", device: str = "cpu"):
        import torch
        from transformers import AutoModel, AutoTokenizer

        self.name = model_id
        self.pooling = pooling
        self.device = device
        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModel.from_pretrained(model_id).to(device).eval()
        self.dim = int(self.model.config.hidden_size)

    def encode(self, texts: list[str]) -> np.ndarray:
        inputs = self.tokenizer(
            texts, padding=True, truncation=True, max_length=128, return_tensors="pt"
        ).to(self.device)
        with self._torch.no_grad():
            hidden = self.model(**inputs).last_hidden_state
        if self.pooling == "cls":
            feats = hidden[:, 0]
        else:
            mask = inputs["attention_mask"].unsqueeze(-1)
            feats = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1)
        return feats.cpu().numpy().astype(np.float32)


def build_encoders(
    backend: str,
    image_model: str,
    text_model: str,
    pooling: str,
    device: str,
    stub_dim: int,
) -> tuple[ImageEncoder, TextEncoder]:
    if backend == "stub":
        return StubImageEncoder(stub_dim), StubTextEncoder(stub_dim)
    if backend == "hf":
        return (
            HfImageEncoder(image_model, pooling=pooling, device=device),
            HfTextEncoder(text_model, pooling=pooling, device=device),
        )
    raise ValueError(f"unknown backend {backend!r}")
