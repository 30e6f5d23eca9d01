"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 a numerical theorem check found a
violation (``verify-equilibria`` only).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .decomposition import (
    Decomposition,
    DecompositionError,
    classify,
    discrete,
    finest_independent_decomposition,
    linkage_decomposition,
    s_decomposition,
    trivial,
    verify_C_structure,
    verify_Cstar_structure,
)
from .exactla import BACKEND
from .generators import (
    SizeError,
    c_decomposed_network,
    complex_balanced_mass_action,
    species_decomposable_network,
    weakly_reversible_network,
)
from .kinetics import DEFAULT_TOL, PowerLawKinetics, verify_equilibria_theorems
from .model import Network, NetworkError, load_network
from .ssystem import RealizationError, RealizationSpec, SSystemModel, coverability, realize
from .structure import analyze

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION = 0, 1, 2


class UsageError(ValueError):
    pass


def _blocks(net: Network, spec: str) -> tuple[Decomposition, str]:
    named = {
        "linkage": linkage_decomposition,
        "finest": finest_independent_decomposition,
        "trivial": trivial,
        "discrete": discrete,
        "s": lambda n: s_decomposition(n)[0],
    }
    if spec in named:
        return named[spec](net), spec
    with open(spec) as fh:
        return Decomposition.from_dict(net, json.load(fh)), spec


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, value in obj.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_text(value, indent + 1))
        else:
            lines.append(f"{pad}{key}: {json.dumps(value)}")
    return "\n".join(lines)


def _emit(report: dict, args) -> None:
    if args.format == "json":
        out = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        out = _text(report) + "\n"
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return {"tool": "crndecomp", "version": __version__, "config": cfg}


def cmd_analyze(args) -> int:
    net = load_network(args.network)
    rep = analyze(net).to_dict()
    rep.update(m=net.m, r=net.r, species=list(net.species))
    _emit({**_config(args), "report": rep}, args)
    return EXIT_OK


def cmd_decompose(args) -> int:
    net = load_network(args.network)
    d, source = _blocks(net, args.blocks)
    rep = classify(net, d).to_dict()
    rep["c_structure_verified"] = verify_C_structure(net, d)
    if rep["is_C_star"]:
        ok, _ = verify_Cstar_structure(net, d)
        rep["cstar_structure_verified"] = ok
    body = {**_config(args), "report": rep, "decomposition": d.to_dict(net), "source": source}
    if args.write_blocks:
        Path(args.write_blocks).write_text(d.to_json(net, indent=2) + "\n")
    _emit(body, args)
    return EXIT_OK


def cmd_realize(args) -> int:
    model = SSystemModel.from_json(Path(args.model).read_text())
    if args.spec:
        spec = RealizationSpec.from_json(Path(args.spec).read_text())
        if args.kind and args.kind != spec.kind:
            raise UsageError(f"--kind {args.kind} conflicts with spec kind {spec.kind}")
    else:
        spec = RealizationSpec(kind=args.kind or "independent")
    real = realize(model, spec)
    if args.out_network:
        Path(args.out_network).write_text(real.network.to_text())
    if args.out_kinetics:
        Path(args.out_kinetics).write_text(real.kinetics.to_json(indent=2) + "\n")
    rep = {
        "kind": spec.kind,
        "network": real.network.to_text().splitlines(),
        "kinetics": real.kinetics.to_dict(),
        "covering": {k: list(v) for k, v in real.covering.items()},
        "covering_is_decomposition": real.is_decomposition,
        "merged_reactions": list(real.merged),
    }
    _emit({**_config(args), "report": rep}, args)
    return EXIT_OK


def cmd_cover(args) -> int:
    net = load_network(args.network)
    _emit({**_config(args), "report": coverability(net, exhaustive=args.exhaustive).to_dict()}, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    net = load_network(args.network)
    if args.kinetics:
        kin = PowerLawKinetics.from_json(Path(args.kinetics).read_text(), net)
    else:
        kin = PowerLawKinetics.mass_action(net)
    d, source = _blocks(net, args.blocks)
    rep = verify_equilibria_theorems(
        net, kin, d, samples=args.samples, seed=args.seed, tol=args.tol, probe_converse=args.probe_converse
    )
    _emit({**_config(args), "report": rep.to_dict(), "source": source}, args)
    if not rep.ok:
        for v in rep.violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_generate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    if args.kind == "weakly-reversible":
        cycles = args.cycles or [3] * args.classes
        net = weakly_reversible_network(args.seed, m=args.species, cycles=cycles)
        rates, x = complex_balanced_mass_action(net, args.seed)
        kin = PowerLawKinetics.mass_action(net, rates)
        (out / "kinetics.json").write_text(kin.to_json(indent=2) + "\n")
        files["kinetics"] = str(out / "kinetics.json")
        d = linkage_decomposition(net)
    elif args.kind == "species-decomposable":
        net = species_decomposable_network(args.seed, m=args.species)
        d = Decomposition(tuple(tuple(v) for v in coverability(net).covering.values()), net.r)
    else:
        net, d = c_decomposed_network(args.seed, m=args.species, n_complexes=args.complexes, n_classes=args.classes)
    (out / "network.crn").write_text(net.to_text())
    (out / "blocks.json").write_text(d.to_json(net, indent=2) + "\n")
    files.update(network=str(out / "network.crn"), blocks=str(out / "blocks.json"))
    rep = {"kind": args.kind, "files": files, "m": net.m, "n": net.n, "r": net.r, "k": d.k}
    _emit({**_config(args), "report": rep}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)

    p = argparse.ArgumentParser(prog="crndecomp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"crndecomp {__version__} ({BACKEND} kernel)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="structural report of a network")
    a.add_argument("network")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decompose", parents=[common], help="classify a decomposition")
    d.add_argument("network")
    d.add_argument("--blocks", default="linkage", help="linkage | finest | s | trivial | discrete | blocks JSON file")
    d.add_argument("--write-blocks", help="also write the decomposition JSON here")
    d.set_defaults(func=cmd_decompose)

    r = sub.add_parser("realize", parents=[common], help="CRN realization of an S-system")
    r.add_argument("model")
    r.add_argument("--kind", choices=RealizationSpec.KINDS)
    r.add_argument("--spec", help="realization spec JSON (kind and per-species choices)")
    r.add_argument("--out-network")
    r.add_argument("--out-kinetics")
    r.set_defaults(func=cmd_realize)

    c = sub.add_parser("cover", parents=[common], help="species coverability report")
    c.add_argument("network")
    c.add_argument("--exhaustive", action="store_true")
    c.set_defaults(func=cmd_cover)

    v = sub.add_parser("verify-equilibria", parents=[common], help="numerical checks of the equilibria theorems")
    v.add_argument("network")
    v.add_argument("--kinetics", help="kinetics JSON; mass action with unit rates if omitted")
    v.add_argument("--blocks", default="linkage")
    v.add_argument("--samples", type=int, default=8)
    v.add_argument("--probe-converse", action="store_true")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", parents=[common], help="seeded fixture networks")
    g.add_argument("kind", choices=("weakly-reversible", "species-decomposable", "c-decomposed"))
    g.add_argument("--out", required=True, help="output directory")
    g.add_argument("--species", type=int, default=4)
    g.add_argument("--complexes", type=int, default=8)
    g.add_argument("--classes", type=int, default=2)
    g.add_argument("--cycles", type=int, nargs="+")
    g.set_defaults(func=cmd_generate)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NetworkError, DecompositionError, RealizationError, SizeError, UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())
