"""Food text rendering, deterministic embeddings, and the searchable index.

The index is an exact exhaustive-scan structure over unit-normalized
vectors. The built-in "hash-v1" embedding is a fixed token-hashing scheme
that keeps tests hermetic; precomputed external vectors (e.g. from a
sentence-transformer run) can substitute at build time.
"""

from __future__ import annotations

import hashlib
import json
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, CorruptionError, SchemaError
from .ingest import FOOD_QUANTITY_FIELDS, FoodItem

SCHEME_HASH_V1 = "hash-v1"
SCHEME_EXTERNAL = "external"
DEFAULT_DIM = 384
MIN_DIM = 8

VECTOR_MAGIC = b"HEIV"
VECTOR_VERSION = 1

# Rendered component order: (field, lowercase name, unit).
FOOD_COMPONENT_TEXT: tuple[tuple[str, str, str], ...] = (
    ("f_totfruit_cup", "total fruits", "cup eq"),
    ("f_wholefruit_cup", "whole fruits", "cup eq"),
    ("f_totveg_cup", "total vegetables", "cup eq"),
    ("f_greensbeans_cup", "greens and beans", "cup eq"),
    ("f_wholegrain_oz", "whole grains", "oz eq"),
    ("f_dairy_cup", "dairy", "cup eq"),
    ("f_totprotein_oz", "total protein foods", "oz eq"),
    ("f_seaplant_oz", "seafood and plant proteins", "oz eq"),
    ("f_refinedgrain_oz", "refined grains", "oz eq"),
)

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?")

# Labels whose numeric magnitude feeds a dedicated coordinate. Energy is
# deliberately excluded: per-serving kcal values are two orders larger
# than component equivalents and would drown the token signal.
_MAG_LABELS = frozenset(name for _, name, _ in FOOD_COMPONENT_TEXT)


def _fmt_energy(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def render_food_text(item: FoodItem) -> str:
    """Deterministic text: description, nonzero components in fixed order, energy."""
    parts = [item.description]
    for fld, name, unit in FOOD_COMPONENT_TEXT:
        value = getattr(item, fld)
        if value != 0:
            parts.append(f"{name}: {repr(float(value))} {unit} per serving")
    parts.append(f"energy: {_fmt_energy(item.energy_kcal)} kcal")
    return " | ".join(parts)


def _hash64(token: str) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def embed_text(text: str, dim: int = DEFAULT_DIM, scheme: str = SCHEME_HASH_V1) -> np.ndarray:
    """Embed text into a unit vector with the fixed hashing scheme.

    Tokens contribute +/-1 to a hashed coordinate; "label: value" segments
    additionally contribute the numeric magnitude to the coordinate of
    "<label>#mag". Empty or all-stopword text maps to the unit vector on
    coordinate 0.
    """
    if scheme != SCHEME_HASH_V1:
        raise ConfigError(f"unknown embedding scheme: {scheme}")
    if dim < MIN_DIM:
        raise ConfigError(f"embedding dim must be >= {MIN_DIM}, got {dim}")
    acc = np.zeros(dim, dtype=np.float64)
    lowered = text.lower()
    for token in _TOKEN_RE.findall(lowered):
        h = _hash64(token)
        sign = -1.0 if (h >> 63) & 1 else 1.0
        acc[h % dim] += sign
    for segment in lowered.split("|"):
        if ":" not in segment:
            continue
        label, rest = segment.split(":", 1)
        label = label.strip()
        if label not in _MAG_LABELS:
            continue
        match = _NUMBER_RE.search(rest)
        if match is None:
            continue
        h = _hash64(f"{label}#mag")
        sign = -1.0 if (h >> 63) & 1 else 1.0
        acc[h % dim] += sign * float(match.group())
    norm = float(np.linalg.norm(acc))
    if norm == 0.0:
        acc[0] = 1.0
        return acc.astype(np.float32)
    return (acc / norm).astype(np.float32)


@dataclass
class FoodIndex:
    """Immutable-after-build exhaustive index aligned item-to-row."""

    items: list[FoodItem]
    vectors: np.ndarray          # (n, dim) float32, unit rows
    dim: int
    scheme_id: str
    _by_code: dict[int, int] = field(default_factory=dict, repr=False)
    _dense64: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if len(self.items) != self.vectors.shape[0]:
            raise CorruptionError(
                f"index has {len(self.items)} items but {self.vectors.shape[0]} vectors")
        self._by_code = {item.food_code: i for i, item in enumerate(self.items)}

    def __len__(self) -> int:
        return len(self.items)

    def row_of(self, food_code: int) -> int:
        return self._by_code[food_code]

    def item(self, food_code: int) -> FoodItem:
        return self.items[self._by_code[food_code]]

    def has(self, food_code: int) -> bool:
        return food_code in self._by_code

    @property
    def dense64(self) -> np.ndarray:
        if self._dense64 is None:
            self._dense64 = self.vectors.astype(np.float64)
        return self._dense64

    @classmethod
    def empty(cls, dim: int = DEFAULT_DIM, scheme_id: str = SCHEME_HASH_V1) -> "FoodIndex":
        return cls(items=[], vectors=np.zeros((0, dim), dtype=np.float32),
                   dim=dim, scheme_id=scheme_id)


def _normalize_rows(mat: np.ndarray) -> np.ndarray:
    mat = mat.astype(np.float64)
    out = np.zeros_like(mat)
    for i in range(mat.shape[0]):
        norm = float(np.linalg.norm(mat[i]))
        if norm == 0.0:
            out[i, 0] = 1.0
        else:
            out[i] = mat[i] / norm
    return out.astype(np.float32)


def build_index(items: Sequence[FoodItem],
                scheme: str = SCHEME_HASH_V1,
                dim: int = DEFAULT_DIM,
                external_vectors: np.ndarray | None = None) -> FoodIndex:
    """Embed rendered food texts (or adopt external vectors) into an index."""
    items = list(items)
    if not items:
        raise ValueError("cannot build an index over zero items")
    codes = [it.food_code for it in items]
    if len(set(codes)) != len(codes):
        dupes = sorted({c for c in codes if codes.count(c) > 1})
        raise SchemaError(f"duplicate food codes in corpus: {dupes}")
    if external_vectors is not None:
        if external_vectors.shape[0] != len(items):
            raise CorruptionError(
                f"external vectors have {external_vectors.shape[0]} rows "
                f"for {len(items)} items")
        if external_vectors.shape[1] != dim:
            raise ConfigError(
                f"external vectors are {external_vectors.shape[1]}-dimensional, "
                f"configured dim is {dim}")
        vectors = _normalize_rows(external_vectors)
        return FoodIndex(items=items, vectors=vectors, dim=dim, scheme_id=SCHEME_EXTERNAL)
    vectors = np.stack([embed_text(render_food_text(it), dim, scheme) for it in items])
    return FoodIndex(items=items, vectors=vectors, dim=dim, scheme_id=scheme)


def write_vectors(path: str | Path, vectors: np.ndarray) -> None:
    """Binary vector file: magic 'HEIV', u16 version, u16 dim, little-endian f32 rows."""
    dim = vectors.shape[1]
    with open(path, "wb") as fh:
        fh.write(VECTOR_MAGIC)
        fh.write(struct.pack("<HH", VECTOR_VERSION, dim))
        fh.write(np.ascontiguousarray(vectors, dtype="<f4").tobytes())


def read_vectors(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < 8 or data[:4] != VECTOR_MAGIC:
        raise CorruptionError(f"{path}: not a vector file (bad magic)")
    version, dim = struct.unpack("<HH", data[4:8])
    if version != VECTOR_VERSION:
        raise CorruptionError(f"{path}: unsupported vector file version {version}")
    body = data[8:]
    row_bytes = 4 * dim
    if dim == 0 or len(body) % row_bytes != 0:
        raise CorruptionError(f"{path}: truncated vector payload")
    n = len(body) // row_bytes
    return np.frombuffer(body, dtype="<f4").reshape(n, dim).copy()


def _item_record(item: FoodItem, text: str) -> dict:
    return {
        "food_code": item.food_code,
        "text": text,
        "metadata": {
            "description": item.description,
            "serving_desc": item.serving_desc,
            "tags": sorted(item.tags),
            "per_serving": {f: getattr(item, f) for f in FOOD_QUANTITY_FIELDS},
        },
    }


def _item_from_record(record: dict) -> FoodItem:
    meta = record["metadata"]
    return FoodItem(
        food_code=int(record["food_code"]),
        description=meta["description"],
        serving_desc=meta["serving_desc"],
        tags=frozenset(meta["tags"]),
        **{f: float(v) for f, v in meta["per_serving"].items()},
    )


def persist_index(index: FoodIndex, out_dir: str | Path) -> None:
    """Write corpus.jsonl, vectors.bin, and meta.json into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for i, item in enumerate(index.items):
            text = render_food_text(item)
            fh.write(json.dumps(_item_record(item, text), sort_keys=True) + "\n")
    write_vectors(out / "vectors.bin", index.vectors)
    with open(out / "meta.json", "w", encoding="utf-8") as fh:
        json.dump({"scheme_id": index.scheme_id, "dim": index.dim,
                   "count": len(index)}, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_index(in_dir: str | Path) -> FoodIndex:
    """Load a persisted index; corpus/vector row counts must agree."""
    src = Path(in_dir)
    meta_path = src / "meta.json"
    scheme_id = SCHEME_HASH_V1
    expected_dim = None
    if meta_path.exists():
        with open(meta_path, encoding="utf-8") as fh:
            meta = json.load(fh)
        scheme_id = meta.get("scheme_id", scheme_id)
        expected_dim = meta.get("dim")
    items: list[FoodItem] = []
    with open(src / "corpus.jsonl", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                items.append(_item_from_record(json.loads(line)))
    vectors = read_vectors(src / "vectors.bin")
    if vectors.shape[0] != len(items):
        raise CorruptionError(
            f"{in_dir}: corpus has {len(items)} records but vector file has "
            f"{vectors.shape[0]} rows")
    if expected_dim is not None and vectors.shape[1] != expected_dim:
        raise CorruptionError(
            f"{in_dir}: meta.json dim {expected_dim} != vector file dim {vectors.shape[1]}")
    return FoodIndex(items=items, vectors=vectors, dim=vectors.shape[1], scheme_id=scheme_id)
