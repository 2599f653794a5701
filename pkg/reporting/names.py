"""reporting/names.py — ASN display names for plot labels."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from config import ASN_NAMES, ASN_NAMES_FILE


def _read_names(path: Path) -> dict[int, str]:
    with open(path, encoding="utf-8") as f:
        return {int(k): str(v) for k, v in json.load(f).items()}


def names_path_for(data_path: str | Path) -> Path:
    """Names written by ``simulate`` next to its records: ``sim.csv`` → ``sim.names.json``."""
    data_path = Path(data_path)
    return data_path.with_name(data_path.name.split(".")[0] + ".names.json")


def load_asn_names(path: str | Path | None = None, extra: dict[int, str] | None = None,
                   sidecars: Iterable[str | Path] = ()) -> dict[int, str]:
    """Built-in names, then names found next to the inputs, then the JSON file, then ``extra``."""
    names = dict(ASN_NAMES)
    for data_path in sidecars:
        side = names_path_for(data_path)
        if side.is_file():
            names.update(_read_names(side))
    path = Path(path) if path else ASN_NAMES_FILE
    if path.is_file():
        names.update(_read_names(path))
    names.update(extra or {})
    return names


def write_asn_names(names: dict[int, str], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump({str(k): names[k] for k in sorted(names)}, f, indent=2, ensure_ascii=False)
        f.write("\n")
    return path


def isp_label(asn: int, names: dict[int, str]) -> str:
    name = names.get(asn)
    return f"AS{asn} {name}" if name else f"AS{asn}"
