"""Run configuration: JSON documents naming the map family, grid, and defaults.

Schema (top level): ``bbox`` [x0, y0, x1, y1], ``resolution`` M,
``systems`` [{``name``, ``maps`` [{a, b, c, d, e, f}, ...]}, ...], and the
optional ``delta``, ``out``, ``seed``.  Two configurations ship with the
package and can be referenced by bare name: ``sierpinski-maple`` and
``sierpinski-maple-r3``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .exceptions import ConfigError, ConfigNotFoundError, NotContractiveError
from .grid import Grid
from .ifs import AffineMap2, BBox, BlendSystem, Ifs, ifs_validate, make_blend_system

_COEFFS = ("a", "b", "c", "d", "e", "f")


@dataclass(frozen=True)
class RunConfig:
    bbox: BBox
    resolution_m: int
    systems: tuple[Ifs, ...]
    delta: float | None
    out_dir: str
    seed: int

    def blend_system(self) -> BlendSystem:
        return make_blend_system(self.bbox, self.systems)

    def grid(self, resolution: int | None = None) -> Grid:
        return Grid(bbox=self.bbox, resolution_m=int(resolution or self.resolution_m))


def config_from_dict(doc: dict) -> RunConfig:
    try:
        bbox = tuple(float(v) for v in doc["bbox"])
        resolution = int(doc["resolution"])
        raw_systems = doc["systems"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad or missing top-level key: {exc}") from exc
    if len(bbox) != 4 or not all(math.isfinite(v) for v in bbox):
        raise ConfigError("bbox must be four finite numbers [x0, y0, x1, y1]")
    if resolution < 1:
        raise ConfigError("resolution must be >= 1")
    systems = []
    for sdoc in raw_systems:
        name = sdoc.get("name", f"system{len(systems) + 1}")
        maps = []
        for mdoc in sdoc.get("maps", []):
            try:
                coeffs = [float(mdoc[c]) for c in _COEFFS]
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"system {name!r} map {len(maps) + 1}: {exc}") from exc
            if not all(math.isfinite(v) for v in coeffs):
                raise ConfigError(f"system {name!r} map {len(maps) + 1}: coefficients must be finite")
            maps.append(AffineMap2(*coeffs))
        try:
            systems.append(ifs_validate(maps, name=name))
        except NotContractiveError as exc:
            raise ConfigError(f"system {name!r} map {exc.index}: Lipschitz constant {exc.lip:.6g} >= 1") from exc
        except ValueError as exc:
            raise ConfigError(f"system {name!r}: {exc}") from exc
    if not systems:
        raise ConfigError("config declares no systems")
    names = [s.name for s in systems]
    if len(set(names)) != len(names):
        raise ConfigError(f"duplicate system names: {names}")
    return RunConfig(
        bbox=(bbox[0], bbox[1], bbox[2], bbox[3]),
        resolution_m=resolution,
        systems=tuple(systems),
        delta=float(doc["delta"]) if "delta" in doc else None,
        out_dir=str(doc.get("out", ".")),
        seed=int(doc.get("seed", 0)),
    )


def bundled_names() -> list[str]:
    pkg = resources.files("blendifs") / "configs"
    return sorted(p.name.removesuffix(".json") for p in pkg.iterdir() if p.name.endswith(".json"))


def load_config(path_or_name: str | Path) -> RunConfig:
    """Load a config from a file path, or from the bundled set by bare name."""
    p = Path(path_or_name)
    if p.exists():
        text = p.read_text(encoding="utf-8")
    else:
        res = resources.files("blendifs") / "configs" / f"{path_or_name}.json"
        if not res.is_file():
            raise ConfigNotFoundError(
                f"no such config file or bundled name: {path_or_name!r} (bundled: {', '.join(bundled_names())})"
            )
        text = res.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path_or_name}: invalid JSON: {exc}") from exc
    return config_from_dict(doc)
