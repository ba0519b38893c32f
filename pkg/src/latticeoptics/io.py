"""JSON reading and writing shared by the command-line tools."""
import hashlib
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from .exceptions import PreconditionError
from .matrix import matrix_from_json, matrix_to_json

__all__ = [
    "RunManifest",
    "dumps",
    "read_json",
    "load_matrix",
    "write_text",
    "format_label",
    "file_digest",
]


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return matrix_to_json(obj) if obj.ndim == 2 else obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    """Deterministic JSON: sorted keys, two-space indent, shortest round-trip floats."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False, default=_default) + "\n"


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def read_json(path):
    """Parse ``path`` (``-`` for stdin); returns ``(obj, sha256)``."""
    try:
        if path == "-":
            raw = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                raw = fh.read()
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(raw)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise PreconditionError(f"{path} is not valid JSON: {exc}") from exc
    return obj, hashlib.sha256(raw).hexdigest()


def load_matrix(obj):
    """Matrix from a bare matrix object or any object carrying one under ``"matrix"``."""
    if isinstance(obj, dict) and "matrix" in obj and "data" not in obj:
        obj = obj["matrix"]
    return matrix_from_json(obj)


def write_text(text, out=None):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise PreconditionError(f"cannot write {out}: {exc.strerror}") from exc


def format_label(label):
    """``(2, 0, 0)`` -> ``|2,0,0>``; per-particle mode tuples -> ``(1,2)``; nested -> kets side by side."""
    if label and isinstance(label[0], tuple):
        return "".join(format_label(part) for part in label)
    return "|" + ",".join(str(int(n)) for n in label) + ">"


def format_modes(label):
    return "(" + ",".join(str(int(m)) for m in label) + ")"


@dataclass
class RunManifest:
    """Provenance block embedded in every output file.

    ``duration`` is only filled in on request so that repeated runs stay
    byte-identical.
    """

    command: str
    inputs: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    version: str = ""
    duration: float = None

    def to_json(self):
        out = {
            "command": self.command,
            "inputs": dict(sorted(self.inputs.items())),
            "tolerances": dict(sorted(self.tolerances.items())),
            "version": self.version,
        }
        if self.duration is not None:
            out["duration_s"] = self.duration
        return out
