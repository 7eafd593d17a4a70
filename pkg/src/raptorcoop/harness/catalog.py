"""Shipped scenario and design presets, addressable by name."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ..protocol.config import ConfigError

_PACKAGE = "raptorcoop.harness.presets"


def preset_names() -> list[str]:
    root = resources.files(_PACKAGE)
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def preset_raw(name: str) -> dict:
    res = resources.files(_PACKAGE) / f"{name}.json"
    if not res.is_file():
        raise ConfigError("config", f"no preset named {name!r}")
    return json.loads(res.read_text())


def load_raw(ref: str) -> tuple[dict, Path | None, str]:
    """(raw dict, base directory for relative paths, name) for a path or preset name."""
    if ref.startswith("preset:"):
        return preset_raw(ref[7:]), None, ref[7:]
    path = Path(ref)
    if path.is_file():
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON in {path}: {exc}") from None
        except OSError as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from None
        return raw, path.parent, path.stem
    if path.suffix == "" and ref in preset_names():
        return preset_raw(ref), None, ref
    raise ConfigError("config", f"{ref} is neither a readable file nor a preset name")
