"""Privacy scanner for the session store.

The ethics contract is that no image or audio payload ever reaches
persistent storage: media lives only in transient working buffers that
are dropped immediately after prediction. This scanner verifies it
mechanically, so the guarantee is testable rather than aspirational:

  * every persisted file must be JSON/JSONL text,
  * no file may start with a known media container signature,
  * no string field may carry >4 KiB of base64-decodable binary,
  * no transient work/ directory may survive session completion.
"""

import base64
import json
import os
import re
from typing import Iterator, List

MEDIA_MAGIC = (
    (0, b"RIFF"),          # AVI / WAV
    (0, b"\x89PNG\r\n"),   # PNG
    (0, b"\xff\xd8\xff"),  # JPEG
    (0, b"GIF8"),          # GIF
    (0, b"OggS"),          # Ogg
    (0, b"ID3"),           # MP3
    (0, b"\x1a\x45\xdf\xa3"),  # Matroska / WebM
    (4, b"ftyp"),          # MP4 family
)

BLOB_LIMIT = 4096
_BASE64_RE = re.compile(r"^[A-Za-z0-9+/=\s]+$")


def _leaf_strings(value) -> Iterator[str]:
    if isinstance(value, str):
        yield value
    elif isinstance(value, dict):
        for v in value.values():
            yield from _leaf_strings(v)
    elif isinstance(value, (list, tuple)):
        for v in value:
            yield from _leaf_strings(v)


def _decoded_blob_size(text: str) -> int:
    if len(text) <= BLOB_LIMIT or not _BASE64_RE.match(text):
        return 0
    compact = "".join(text.split())
    if len(compact) % 4:
        return 0
    try:
        return len(base64.b64decode(compact, validate=True))
    except Exception:
        return 0


def scan_store(root: str) -> List[str]:
    """Return a list of privacy violations found under a store root."""
    violations: List[str] = []
    for dirpath, dirnames, filenames in os.walk(root):
        rel_dir = os.path.relpath(dirpath, root)
        if os.path.basename(dirpath) == "work":
            violations.append(f"{rel_dir}: transient work directory persisted")
            dirnames.clear()
            continue
        for name in filenames:
            path = os.path.join(dirpath, name)
            rel = os.path.relpath(path, root)
            with open(path, "rb") as fh:
                head = fh.read(16)
            for offset, magic in MEDIA_MAGIC:
                if head[offset : offset + len(magic)] == magic:
                    violations.append(f"{rel}: media container signature {magic!r}")
            if not name.endswith((".json", ".jsonl")):
                violations.append(f"{rel}: unexpected non-JSON artifact")
                continue
            violations.extend(_scan_json_file(path, rel))
    return violations


def _scan_json_file(path: str, rel: str) -> List[str]:
    violations: List[str] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            if path.endswith(".jsonl"):
                documents = [json.loads(line) for line in fh if line.strip()]
            else:
                documents = [json.load(fh)]
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        return [f"{rel}: not parseable as JSON ({exc})"]
    for doc in documents:
        for text in _leaf_strings(doc):
            size = _decoded_blob_size(text)
            if size > BLOB_LIMIT:
                violations.append(
                    f"{rel}: string field decodes to {size} bytes of binary"
                )
    return violations
