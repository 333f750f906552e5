"""Command-line interface: attractor, blend, metrics, and info commands.

Every command is deterministic given the config file and flags (including the
worker count).  Exit codes: 0 success, 1 numerical or validation failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .blend import attractor_approx, attractors_approx, blend_approx, choose_parameters, error_bound_worst, generate_theta
from .config import RunConfig, load_config
from .exceptions import (
    BadLengthError,
    BlendifsError,
    DeltaNonPositiveError,
    SymbolOutOfRangeError,
    ThetaParseError,
    UnknownIfsError,
)
from .grid import Grid, load_cells, save_cells
from .ifs import BlendSystem, make_blend_system
from .metrics import beta_report, covering_radii_selfmax, covering_radii_thm31, delta_self_dissimilarity, hausdorff
from .render import RenderSpec, rasterize, write_pgm


class UsageError(BlendifsError, ValueError):
    """A bad flag combination; reported with exit code 2."""


_USAGE_ERRORS = (
    UsageError,
    UnknownIfsError,
    ThetaParseError,
    DeltaNonPositiveError,
    SymbolOutOfRangeError,
    BadLengthError,
    FileNotFoundError,
)

# recipe length used by metrics commands when neither --k nor a config delta
# pins one down
DEFAULT_METRICS_K = 30


def _parse_theta(text: str) -> tuple[int, ...]:
    try:
        theta = tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise ThetaParseError(f"bad blending sequence literal {text!r}: {exc}") from exc
    if not theta:
        raise ThetaParseError(f"bad blending sequence literal {text!r}: no symbols")
    return theta


def _theta_tag(theta: tuple[int, ...]) -> str:
    digest = hashlib.sha256(",".join(map(str, theta)).encode("ascii")).hexdigest()[:10]
    return f"k{len(theta)}-{digest}"


def _system_index(bsys: BlendSystem, name: str) -> int:
    for idx, s in enumerate(bsys.systems, start=1):
        if s.name == name:
            return idx
    raise UnknownIfsError(f"unknown IFS {name!r}; available: {', '.join(s.name for s in bsys.systems)}")


def _resolve_theta(args, cfg: RunConfig, n: int) -> tuple[int, ...]:
    if args.theta is not None and args.length is not None:
        raise UsageError("give either --theta or --seed/--length, not both")
    if args.theta is not None:
        theta = _parse_theta(args.theta)
    elif args.length is not None:
        seed = cfg.seed if args.seed is None else args.seed
        theta = generate_theta(seed, args.length, n)
    else:
        raise UsageError("a blending sequence is required: --theta or --length (with optional --seed)")
    for sym in theta:
        if not 1 <= sym <= n:
            raise SymbolOutOfRangeError(f"theta symbol {sym} outside 1..{n}")
    return theta


def _default_k(args, cfg: RunConfig, bsys: BlendSystem) -> int:
    if args.k is not None:
        return args.k
    if cfg.delta is not None:
        return choose_parameters(cfg.delta, bsys).k
    return DEFAULT_METRICS_K


def _out_dir(args, cfg: RunConfig) -> Path:
    out = Path(args.out if args.out is not None else cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_outputs(out: Path, stem: str, result) -> dict:
    cells = out / f"{stem}.cells"
    image = out / f"{stem}.pgm"
    save_cells(cells, result.output)
    write_pgm(image, rasterize(result.output, RenderSpec()))
    return {"cells": cells.name, "image": image.name}


def _uncertainty(g: Grid, bsys: BlendSystem, k: int) -> float:
    # one cell diagonal plus twice the worst-case approximation error
    return 2.0 * g.epsilon + 2.0 * error_bound_worst(bsys.lambda_script_r, k, g.diameter, g.epsilon)


def cmd_attractor(args) -> int:
    cfg = load_config(args.config)
    bsys = cfg.blend_system()
    idx = _system_index(bsys, args.ifs)
    single = make_blend_system(cfg.bbox, [bsys.systems[idx - 1]])
    g = cfg.grid(args.resolution)
    delta = args.delta if args.delta is not None else (None if args.k is not None else cfg.delta)
    if args.k is not None and args.delta is not None:
        raise UsageError("give either --k or --delta, not both")
    if args.k is not None:
        k = args.k
    elif delta is not None:
        pc = choose_parameters(delta, single)
        k = pc.k
        if g.resolution_m < pc.m_min:
            g = Grid(bbox=cfg.bbox, resolution_m=pc.m_min)
    else:
        raise UsageError("attractor needs --k or --delta (or a config-level delta)")
    res = attractor_approx(single, g, 1, k, workers=args.workers)
    out = _out_dir(args, cfg)
    stem = f"{args.ifs}-attractor-m{g.resolution_m}-k{k}"
    files = _write_outputs(out, stem, res)
    report = {
        "command": "attractor",
        "ifs": args.ifs,
        "k": k,
        "resolution": g.resolution_m,
        "epsilon": g.epsilon,
        "delta": delta,
        "error_bound_tight": res.error_bound_tight,
        "error_bound_worst": res.error_bound_worst,
        "clamp_count": res.clamp_count,
        "cell_count": len(res.output),
        "files": files,
    }
    _write_json(out / f"{stem}.json", report)
    print(
        f"{args.ifs}: {len(res.output)} cells at M={g.resolution_m}, k={k}, "
        f"error <= {res.error_bound_tight:.6g} ({res.error_bound_worst:.6g})"
    )
    return 0


def cmd_blend(args) -> int:
    cfg = load_config(args.config)
    bsys = cfg.blend_system()
    g = cfg.grid(args.resolution)
    theta = _resolve_theta(args, cfg, bsys.n)
    z = load_cells(args.z, g) if args.z is not None else None
    res = blend_approx(bsys, g, theta, z, workers=args.workers)
    rep = beta_report(theta, bsys)
    names = [s.name for s in bsys.systems]
    out = _out_dir(args, cfg)
    stem = f"blend-{_theta_tag(theta)}-m{g.resolution_m}"
    files = _write_outputs(out, stem, res)
    report = {
        "command": "blend",
        "theta": list(theta),
        "k": len(theta),
        "resolution": g.resolution_m,
        "epsilon": g.epsilon,
        "error_bound_tight": res.error_bound_tight,
        "error_bound_worst": res.error_bound_worst,
        "clamp_count": res.clamp_count,
        "cell_count": len(res.output),
        "beta": rep.to_dict(names),
        "files": files,
    }
    _write_json(out / f"{stem}.json", report)
    print(
        f"blend k={len(theta)}: {len(res.output)} cells at M={g.resolution_m}, "
        f"error <= {res.error_bound_tight:.6g} ({res.error_bound_worst:.6g})"
    )
    for i, e in rep.entries.items():
        print(
            f"  beta[{names[i - 1]}]: examples={e.beta_examples:.10g} "
            f"definition=[{e.beta_def_lower:.10g}, {e.beta_def_upper:.10g}]"
        )
    return 0


def _resolve_set(token: str, bsys: BlendSystem, g: Grid, k: int, workers: int):
    names = [s.name for s in bsys.systems]
    if token in names:
        return attractor_approx(bsys, g, names.index(token) + 1, k, workers=workers).output, token
    p = Path(token)
    if p.exists():
        return load_cells(p, g), p.stem
    raise UnknownIfsError(f"{token!r} is neither an IFS name ({', '.join(names)}) nor a cell-list file")


def cmd_metrics(args) -> int:
    cfg = load_config(args.config)
    bsys = cfg.blend_system()
    g = cfg.grid(args.resolution)
    names = [s.name for s in bsys.systems]
    out = _out_dir(args, cfg)
    k = _default_k(args, cfg, bsys)

    if args.what == "hausdorff":
        if args.a is None or args.b is None:
            raise UsageError("hausdorff needs --a and --b")
        sa, la = _resolve_set(args.a, bsys, g, k, args.workers)
        sb, lb = _resolve_set(args.b, bsys, g, k, args.workers)
        d = hausdorff(sa, sb, method=args.method)
        report = {
            "command": "hausdorff",
            "a": la,
            "b": lb,
            "k": k,
            "resolution": g.resolution_m,
            "directed_ab": d.directed_ab,
            "directed_ba": d.directed_ba,
            "symmetric": d.symmetric,
            "uncertainty": _uncertainty(g, bsys, k),
        }
        path = out / f"hausdorff-{la}-{lb}-m{g.resolution_m}.json"
        _write_json(path, report)
        print(f"hausdorff({la}, {lb}) = {d.symmetric:.6g} +- {report['uncertainty']:.3g}")
        return 0

    if args.what == "beta":
        theta = _resolve_theta(args, cfg, bsys.n)
        rep = beta_report(theta, bsys)
        doc = rep.to_dict(names)
        if args.variant != "both":
            keep = {"definition": ("beta_def_lower", "beta_def_upper", "tail_bound", "name"), "examples": ("beta_examples", "name")}[args.variant]
            doc["systems"] = {i: {kk: vv for kk, vv in row.items() if kk in keep} for i, row in doc["systems"].items()}
        stem = f"beta-{_theta_tag(theta)}"
        _write_json(out / f"{stem}.json", doc)
        (out / f"{stem}.txt").write_text(rep.to_text(names), encoding="utf-8")
        for i, e in rep.entries.items():
            print(
                f"beta[{names[i - 1]}]: examples={e.beta_examples:.10g} "
                f"definition=[{e.beta_def_lower:.10g}, {e.beta_def_upper:.10g}]"
            )
        return 0

    if args.what == "delta":
        sets = attractors_approx(bsys, g, k, workers=args.workers)
        which = [args.i0] if args.i0 is not None else list(range(1, bsys.n + 1))
        values = {}
        for i0 in which:
            if not 1 <= i0 <= bsys.n:
                raise SymbolOutOfRangeError(f"--i0 {i0} outside 1..{bsys.n}")
            values[str(i0)] = {"name": names[i0 - 1], "delta": delta_self_dissimilarity(bsys, g, i0, sets)}
        report = {
            "command": "delta",
            "k": k,
            "resolution": g.resolution_m,
            "uncertainty": _uncertainty(g, bsys, k),
            "values": values,
        }
        _write_json(out / f"delta-m{g.resolution_m}-k{k}.json", report)
        for i0, row in values.items():
            print(f"delta[{row['name']}] = {row['delta']:.6g} +- {report['uncertainty']:.3g}")
        return 0

    if args.what == "envelope":
        sets = attractors_approx(bsys, g, k, workers=args.workers)
        pairwise = {}
        m_value = 0.0
        for i in range(bsys.n):
            for j in range(i + 1, bsys.n):
                d = hausdorff(sets[i], sets[j]).symmetric
                pairwise[f"{names[i]}|{names[j]}"] = d
                m_value = max(m_value, d)
        lams = [s.lambda_r for s in bsys.systems]
        variants = []
        if args.radii in ("selfmax", "both"):
            variants.append(covering_radii_selfmax(lams, m_value))
        if args.radii in ("thm31", "both"):
            variants.append(covering_radii_thm31(lams, m_value))
        unc = _uncertainty(g, bsys, k)
        report = {
            "command": "envelope",
            "k": k,
            "resolution": g.resolution_m,
            "m_value": m_value,
            "uncertainty": unc,
            "pairwise": pairwise,
            "radii": [cr.to_dict(names) for cr in variants],
        }
        stem = f"envelope-m{g.resolution_m}-k{k}"
        _write_json(out / f"{stem}.json", report)
        text = f"m_value={m_value!r}\nm_uncertainty={unc!r}\n" + "".join(cr.to_text(names) for cr in variants)
        (out / f"{stem}.txt").write_text(text, encoding="utf-8")
        print(f"M = {m_value:.6g} +- {unc:.3g}")
        for cr in variants:
            rendered = ", ".join(f"{n}={r:.6g}" for n, r in zip(names, cr.radii))
            print(f"radii[{cr.variant}]: {rendered}")
        return 0

    raise ValueError(f"unknown metrics subcommand {args.what!r}")


def cmd_info(args) -> int:
    cfg = load_config(args.config)
    bsys = cfg.blend_system()
    g = cfg.grid(args.resolution)
    doc = {
        "bbox": list(cfg.bbox),
        "resolution": g.resolution_m,
        "epsilon": g.epsilon,
        "diameter": g.diameter,
        "lambda_script_r": bsys.lambda_script_r,
        "systems": [
            {"name": s.name, "n_maps": s.n, "lambdas": list(s.lambdas), "lambda_r": s.lambda_r}
            for s in bsys.systems
        ],
    }
    if cfg.delta is not None:
        pc = choose_parameters(cfg.delta, bsys)
        doc["suggested"] = {"delta": cfg.delta, "k": pc.k, "epsilon_max": pc.epsilon_max, "m_min": pc.m_min}
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="config file path or bundled name")
    p.add_argument("--resolution", type=int, default=None, metavar="M", help="override the config grid resolution")
    p.add_argument("--out", default=None, metavar="DIR", help="output directory (default: config 'out' or '.')")
    p.add_argument("--workers", type=int, default=1, help="worker threads for the set-map step")


def _add_theta(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta", default=None, help="comma-separated 1-based symbols, e.g. 1,1,2,1")
    p.add_argument("--seed", type=int, default=None, help="seed for a generated sequence")
    p.add_argument("--length", type=int, default=None, metavar="K", help="length of a generated sequence")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blendifs", description="Blend IFS attractors on a grid with certified error bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("attractor", help="constant-recipe blend: one system's discrete attractor")
    _add_common(p)
    p.add_argument("--ifs", required=True, help="system name from the config")
    p.add_argument("--k", type=int, default=None, help="number of set-map applications")
    p.add_argument("--delta", type=float, default=None, help="target accuracy (picks k and, if needed, the resolution)")
    p.set_defaults(func=cmd_attractor)

    p = sub.add_parser("blend", help="run a blending recipe and report coefficients and bounds")
    _add_common(p)
    _add_theta(p)
    p.add_argument("--z", default=None, metavar="FILE", help="seed cell list (default: full grid)")
    p.set_defaults(func=cmd_blend)

    p = sub.add_parser("metrics", help="hausdorff, beta, delta, or envelope reports")
    p.add_argument("what", choices=("hausdorff", "beta", "delta", "envelope"))
    _add_common(p)
    _add_theta(p)
    p.add_argument("--a", default=None, help="(hausdorff) IFS name or cell-list file")
    p.add_argument("--b", default=None, help="(hausdorff) IFS name or cell-list file")
    p.add_argument("--method", choices=("auto", "grid", "brute"), default="auto", help="(hausdorff) implementation")
    p.add_argument("--i0", type=int, default=None, help="(delta) 1-based system index; default: all")
    p.add_argument("--k", type=int, default=None, help="recipe length for attractor approximations")
    p.add_argument("--variant", choices=("definition", "examples", "both"), default="both", help="(beta) which coefficient variant to report")
    p.add_argument("--radii", choices=("thm31", "selfmax", "both"), default="both", help="(envelope) which radii variant to report")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("info", help="print the validated configuration summary")
    _add_common(p)
    p.set_defaults(func=cmd_info)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except BlendifsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
