"""Content-addressed, write-once cache for relation-ball files.

Keys are digests of (group descriptor, marking text, lambda); values are
the serialized relation-ball files, which embed a digest of their own body
so every read re-verifies integrity.  Writes are atomic (temp file plus
rename) and write-once: putting an existing key is only legal when the
bytes agree, so concurrent writers of the same deterministic result are
safe and divergent writers are an error.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path
from typing import Optional

from .marked import MarkedGroup, RelationBall
from .words import Word

ENV_CACHE_DIR = "MARKEDGROUPS_CACHE"

FILE_HEADER = "# relation-ball v1"


class CacheCorruptionError(RuntimeError):
    """A cached file failed its digest re-verification."""


class CacheWriteConflictError(RuntimeError):
    """A put hit an existing key with different bytes."""


def serialize_relation_ball(mg: MarkedGroup, ball: RelationBall) -> bytes:
    """Deterministic text form: header, then one word per line, shortlex."""
    lines = [
        FILE_HEADER,
        f"group = {mg.descriptor_text}",
        f"marking = {mg.marking_text}",
        f"rank = {ball.m}",
        f"lambda = {ball.lam}",
        f"count = {len(ball)}",
        f"digest = sha256:{ball.digest()}",
        "---",
    ]
    lines.extend(ball.body_lines())
    return ("\n".join(lines) + "\n").encode()


def parse_relation_ball(payload: bytes) -> tuple[dict, RelationBall]:
    """Parse and re-verify a serialized relation ball."""
    text = payload.decode()
    head, _, body = text.partition("\n---\n")
    header_lines = head.splitlines()
    if not header_lines or header_lines[0] != FILE_HEADER:
        raise CacheCorruptionError("missing relation-ball header")
    meta = {}
    for line in header_lines[1:]:
        key, _, value = line.partition(" = ")
        meta[key.strip()] = value.strip()
    m = int(meta["rank"])
    lam = int(meta["lambda"])
    word_lines = [ln for ln in body.splitlines() if ln.strip()]
    ball_words = [
        Word(m, [int(v) for v in ln.split()], _reduced=True) for ln in word_lines
    ]
    ball = RelationBall(m, lam, ball_words)
    if len(ball) != int(meta["count"]):
        raise CacheCorruptionError("word count does not match the header")
    expected = meta["digest"].removeprefix("sha256:")
    if ball.digest() != expected:
        raise CacheCorruptionError("relation-ball digest mismatch")
    return meta, ball


def cache_key(descriptor_text: str, marking_text: str, lam: int) -> str:
    h = hashlib.sha256()
    h.update(descriptor_text.encode())
    h.update(b"\x00")
    h.update(marking_text.encode())
    h.update(b"\x00")
    h.update(str(lam).encode())
    return h.hexdigest()


class RelationBallCache:
    """Directory-backed content-addressed store."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path_for(self, key: str) -> Path:
        return self.root / f"{key}.relball"

    def get(self, key: str) -> Optional[bytes]:
        path = self.path_for(key)
        if not path.exists():
            return None
        payload = path.read_bytes()
        parse_relation_ball(payload)  # digest re-verification; raises on corruption
        return payload

    def put(self, key: str, payload: bytes) -> Path:
        path = self.path_for(key)
        if path.exists():
            if path.read_bytes() != payload:
                raise CacheWriteConflictError(
                    f"cache key {key} already holds different bytes"
                )
            return path
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fp:
                fp.write(payload)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        return path


def default_cache(cli_dir: Optional[str] = None) -> Optional[RelationBallCache]:
    """Cache from an explicit directory or the environment, else disabled."""
    directory = cli_dir or os.environ.get(ENV_CACHE_DIR)
    return RelationBallCache(directory) if directory else None
