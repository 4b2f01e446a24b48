"""On-disk cache of piecewise closed forms.

One JSON file per generating configuration (``gaussian-m5``,
``sz6``, ``sz7-lam4-b14``, ...).  The file records the generating parameters,
a hash of them and a hash of the serialized form; exact rationals are written
as ``"p/q"`` strings.  A file whose hashes do not match is ignored with a
warning and recomputed.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Callable

from .closedform import PiecewiseClosedForm

log = logging.getLogger(__name__)

ENV_VAR = "QUNIMODAL_CACHE_DIR"
FORMAT_VERSION = 1


def cache_dir() -> Path:
    """Cache directory: ``$QUNIMODAL_CACHE_DIR`` or ``~/.cache/qunimodal``."""
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else Path.home() / ".cache" / "qunimodal"


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def params_hash(params: dict) -> str:
    return _digest({"version": FORMAT_VERSION, "params": params})


def cache_path(name: str, directory: Path | None = None) -> Path:
    return (directory or cache_dir()) / f"{name}.json"


def load(name: str, params: dict, directory: Path | None = None) -> PiecewiseClosedForm | None:
    """Cached form for ``params``, or ``None`` when absent, stale or corrupt."""
    path = cache_path(name, directory)
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text())
        if data.get("params_hash") != params_hash(params):
            log.warning("cache entry %s was built for other parameters; recomputing", path)
            return None
        if data.get("form_hash") != _digest(data["form"]):
            log.warning("cache entry %s is corrupt (hash mismatch); recomputing", path)
            return None
        return PiecewiseClosedForm.from_json(data["form"])
    except (ValueError, KeyError, TypeError) as exc:
        log.warning("cache entry %s is unreadable (%s); recomputing", path, exc)
        return None


def store(name: str, params: dict, form: PiecewiseClosedForm, directory: Path | None = None) -> Path:
    path = cache_path(name, directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = form.to_json()
    data = {"name": name, "version": FORMAT_VERSION, "params": params,
            "params_hash": params_hash(params), "form_hash": _digest(body), "form": body}
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data, sort_keys=True, indent=1))
    tmp.replace(path)
    return path


def cached(name: str, params: dict, build: Callable[[], PiecewiseClosedForm],
           directory: Path | None = None, use_cache: bool = True) -> PiecewiseClosedForm:
    """Load ``name`` from the cache or build and store it."""
    if use_cache:
        form = load(name, params, directory)
        if form is not None:
            return form
    form = build()
    if use_cache:
        store(name, params, form, directory)
    return form


def entries(directory: Path | None = None) -> list[dict]:
    """Summary of every cache file: name, size, parameters and validity."""
    d = directory or cache_dir()
    out = []
    if not d.exists():
        return out
    for path in sorted(d.glob("*.json")):
        info = {"file": path.name, "bytes": path.stat().st_size}
        try:
            data = json.loads(path.read_text())
            info["params"] = data.get("params")
            info["valid"] = (data.get("params_hash") == params_hash(data.get("params"))
                             and data.get("form_hash") == _digest(data.get("form")))
            info["pieces"] = len(data.get("form", {}).get("pieces", []))
        except ValueError:
            info["valid"] = False
        out.append(info)
    return out


def clear(directory: Path | None = None) -> int:
    """Delete every cache file; returns the number removed."""
    d = directory or cache_dir()
    n = 0
    if d.exists():
        for path in d.glob("*.json"):
            path.unlink()
            n += 1
    return n
