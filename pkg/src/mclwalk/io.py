"""Episode files.

Two variants, both versioned:

* text: a JSON document
  ``{"format": "mcl-episode", "version": 1, "d", "r", "n", "k",
  "shots": [[matrix, ...K] ...N], "query": matrix}`` where each matrix is a
  list of ``d`` rows of ``r`` numbers;
* binary: magic ``b"MCLE"``, ``u16`` version, then ``d, r, N, K`` as
  ``u32``, all little-endian, followed by ``N*K`` shot matrices (class-major)
  and the query, each ``d x r`` float32 row-major.

Loading detects the variant from the first four bytes.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import DimensionError, FormatError
from .features import Episode, build_episode

__all__ = ["FORMAT_VERSION", "MAGIC", "load_episode", "save_episode", "episode_to_dict"]

MAGIC = b"MCLE"
FORMAT_VERSION = 1
_TEXT_TAG = "mcl-episode"
_HEADER = struct.Struct("<4sHIIII")


def _classes(episode: Episode):
    if episode.shots is not None:
        return [[m.data for m in shots] for shots in episode.shots]
    return [[s.data] for s in episode.supports]


def episode_to_dict(episode: Episode) -> dict:
    classes = _classes(episode)
    return {
        "format": _TEXT_TAG,
        "version": FORMAT_VERSION,
        "d": episode.d,
        "r": episode.r,
        "n": episode.n_classes,
        "k": len(classes[0]),
        "shots": [[m.tolist() for m in shots] for shots in classes],
        "query": episode.query.data.tolist(),
    }


def save_episode(episode: Episode, path, variant: str = "binary") -> None:
    path = Path(path)
    if variant == "text":
        payload = json.dumps(episode_to_dict(episode), indent=1).encode("ascii")
    elif variant == "binary":
        classes = _classes(episode)
        header = _HEADER.pack(
            MAGIC, FORMAT_VERSION, episode.d, episode.r, episode.n_classes, len(classes[0])
        )
        blocks = [m for shots in classes for m in shots] + [episode.query.data]
        payload = header + b"".join(np.ascontiguousarray(m, dtype="<f4").tobytes() for m in blocks)
    else:
        raise ValueError(f"unknown episode variant {variant!r}")
    try:
        path.write_bytes(payload)
    except OSError as exc:
        raise OSError(f"cannot write episode to {path}: {exc.strerror}") from exc


def _check_version(version):
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported episode format version {version} (expected {FORMAT_VERSION})")


def _load_binary(raw: bytes) -> Episode:
    if len(raw) < _HEADER.size:
        raise FormatError(f"truncated header: {len(raw)} bytes, need {_HEADER.size}")
    magic, version, d, r, n, k = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r} at byte 0")
    _check_version(version)
    if min(d, r, n, k) < 1:
        raise FormatError(f"header dims must be positive, got d={d} r={r} n={n} k={k}")
    block = d * r * 4
    expected = _HEADER.size + (n * k + 1) * block
    if len(raw) != expected:
        raise FormatError(f"payload size mismatch at byte {min(len(raw), expected)}: file has {len(raw)} bytes, header implies {expected}")
    data = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).astype(np.float64)
    mats = data.reshape(n * k + 1, d, r)
    shots = [list(mats[c * k : (c + 1) * k]) for c in range(n)]
    return build_episode(shots, mats[-1])


def _matrix(value, d, r, where):
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != (d, r):
        raise DimensionError(f"{where} has shape {arr.shape}, header declares ({d}, {r})")
    return arr


def _load_text(raw: bytes) -> Episode:
    try:
        doc = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise FormatError(f"episode is neither binary nor UTF-8 text (byte {exc.start})") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or doc.get("format") != _TEXT_TAG:
        raise FormatError(f"missing format tag {_TEXT_TAG!r}")
    _check_version(doc.get("version"))
    try:
        d, r, n, k = (int(doc[key]) for key in ("d", "r", "n", "k"))
        shots, query = doc["shots"], doc["query"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"missing or invalid field: {exc}") from exc
    if len(shots) != n:
        raise DimensionError(f"header declares {n} classes, file has {len(shots)}")
    classes = []
    for c, cls in enumerate(shots):
        if len(cls) != k:
            raise DimensionError(f"class {c} has {len(cls)} shots, header declares {k}")
        classes.append([_matrix(m, d, r, f"class {c} shot {j}") for j, m in enumerate(cls)])
    return build_episode(classes, _matrix(query, d, r, "query"))


def load_episode(path) -> Episode:
    raw = Path(path).read_bytes()
    if raw[:4] == MAGIC:
        return _load_binary(raw)
    if raw[:1] in (b"{", b" ", b"\n", b"\t", b"\r"):
        return _load_text(raw)
    raise FormatError(f"bad magic {raw[:4]!r} at byte 0")
