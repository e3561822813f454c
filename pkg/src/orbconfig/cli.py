"""Batch command line front end.

Subcommands parse JSON inputs (inline or by path, "schema": 1), dispatch
to the library, and emit one report envelope embedding the tool version,
the subcommand, the fully resolved run configuration, and the seed.  JSON
output is canonical (sorted keys, no whitespace), so reruns with the same
configuration are byte-identical; tables are rendered from that same JSON.

Exit codes: 0 success; 2 unparseable input, unknown ids, invalid models;
3 reflector features; 4 size guard rails; 5 a covering verification that
ran but failed; 6 no quasifibration witness (fixed-point-free action).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .arrangement import (
    ArrangementSpec,
    SizeGuardError,
    chamber_count,
    characteristic_polynomial,
    common_point,
    flat_poset,
    is_simplicial,
    poincare_polynomial,
)
from .covering import verify_cover
from .exactfield import DEFAULT_EPS
from .groupoid import (
    InvalidModelError,
    _freeze,
    forget_map,
    group_action_from_json,
    group_from_json,
    groupoid_from_json,
    is_covering_hom,
    is_equivalence,
    morita_triple,
    skeleton_inclusion,
    subgroup_covering_hom,
    translation_groupoid,
)
from .obstruction import NoWitnessError, quasifibration_witness
from .orbit_config import (
    MembershipError,
    braid_arrangement,
    rotation_arrangement,
    sign_flip_arrangement,
)
from .orbmodel import Orbifold2D, ReflectorError, action_from_json, classify

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_REFLECTOR = 3
EXIT_GUARD = 4
EXIT_COVER_FAIL = 5
EXIT_NO_WITNESS = 6

MAX_CLI_DIM = 6
MAX_CLI_HYPERPLANES = 16


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_input(argument: str) -> dict:
    """Inline JSON (starts with '{') or a path to a UTF-8 JSON file."""
    text = argument
    if not argument.lstrip().startswith("{"):
        try:
            text = Path(argument).read_text(encoding="utf-8")
        except OSError as exc:
            raise CliError(EXIT_INPUT, f"cannot read {argument}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError(EXIT_INPUT, "input must be a JSON object")
    if data.get("schema") != 1:
        raise CliError(EXIT_INPUT, 'input must declare "schema": 1')
    return data


def _poly_text(coefficients) -> str:
    parts = []
    for power, c in enumerate(coefficients):
        if c == 0:
            continue
        if power == 0:
            parts.append(str(c))
            continue
        variable = "t" if power == 1 else f"t^{power}"
        if c == 1:
            parts.append(variable)
        elif c == -1:
            parts.append(f"-{variable}")
        else:
            parts.append(f"{c}{variable}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (report body, extra config, exit code)
# ---------------------------------------------------------------------------


def _cmd_classify(args) -> tuple[dict, dict, int]:
    data = _load_input(args.spec)
    orbifold = Orbifold2D.from_json(data)
    verdict = classify(orbifold)
    report = {"orbifold": orbifold.to_json(), "classification": verdict.to_json()}
    return report, {"input": data}, EXIT_OK


def _builder_spec(args) -> tuple[ArrangementSpec, dict]:
    if args.builder:
        if args.n is None:
            raise CliError(EXIT_INPUT, "builders require --n")
        if args.builder == "braid":
            spec = braid_arrangement(args.n)
        elif args.builder == "case1":
            spec = rotation_arrangement(args.n, args.m)
        else:
            spec = sign_flip_arrangement(args.n)
        return spec, {"builder": args.builder, "n": args.n, "m": args.m}
    if args.spec is None:
        raise CliError(EXIT_INPUT, "provide --builder or an arrangement spec")
    data = _load_input(args.spec)
    try:
        return ArrangementSpec.from_json(data), {"input": data}
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"bad arrangement spec: {exc}") from exc


def _cmd_arrangement(args) -> tuple[dict, dict, int]:
    spec, extra = _builder_spec(args)
    if spec.dim > MAX_CLI_DIM or len(spec.hyperplanes) > MAX_CLI_HYPERPLANES:
        raise SizeGuardError(
            f"arrangement exceeds the CLI rails (dim <= {MAX_CLI_DIM}, "
            f"<= {MAX_CLI_HYPERPLANES} hyperplanes)"
        )
    poset = flat_poset(spec)
    chi = characteristic_polynomial(poset)
    pi = poincare_polynomial(poset)
    report = {
        "label": spec.label,
        "dim": spec.dim,
        "field": spec.field.to_json(),
        "hyperplanes": len(spec.hyperplanes),
        "rank": poset.rank,
        "flats_by_dim": {str(d): c for d, c in sorted(poset.count_by_dim().items())},
        "characteristic": {"coefficients": chi.to_json(), "text": _poly_text(chi.coeffs)},
        "poincare": {"coefficients": pi.to_json(), "text": _poly_text(pi.coeffs)},
    }
    if spec.field.is_rational:
        total, bounded = chamber_count(poset)
        report["chambers"] = {"total": total, "bounded": bounded}
    else:
        report["chambers"] = None
        report["chambers_note"] = "complex coefficients: no real chamber structure"
    if spec.field.is_rational and common_point(spec) is not None:
        report["simplicial"] = is_simplicial(spec).to_json()
    else:
        report["simplicial"] = None
        report["simplicial_note"] = "simpliciality applies to central real arrangements"
    return report, extra, EXIT_OK


def _cmd_verify_cover(args) -> tuple[dict, dict, int]:
    try:
        report = verify_cover(
            args.map,
            n=args.n,
            samples=args.samples,
            window=args.window,
            eps=args.epsilon,
            seed=args.seed,
        )
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from exc
    code = EXIT_OK if report.passed else EXIT_COVER_FAIL
    return report.to_json(), {"map": args.map, "n": args.n}, code


def _cmd_obstruction(args) -> tuple[dict, dict, int]:
    data = _load_input(args.spec)
    try:
        action = action_from_json(data)
    except ReflectorError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_INPUT, f"bad action spec: {exc}") from exc
    report = quasifibration_witness(action, args.n, eps=args.epsilon)
    return report.to_json(), {"input": data, "n": args.n}, EXIT_OK


def _groupoid_action(data: dict):
    group = group_from_json(data["group"])
    action_spec = data.get("action", {"kind": "regular"})
    return group_action_from_json(action_spec, group)


def _cmd_groupoid(args) -> tuple[dict, dict, int]:
    data = _load_input(args.spec)
    kind = data.get("type")
    try:
        if kind == "explicit":
            groupoid = groupoid_from_json(data)
            checks = [groupoid.verify_axioms().to_json()]
            summary = {
                "objects": len(groupoid.objects),
                "morphisms": len(groupoid.morphisms),
            }
        elif kind == "subgroup_cover":
            action = _groupoid_action(data)
            subgroup = frozenset(_freeze(el) for el in data["subgroup"])
            hom = subgroup_covering_hom(action, subgroup)
            checks = [hom.verify().to_json(), is_covering_hom(hom).to_json()]
            summary = {"points": len(action.points), "group_order": action.group.order}
        elif kind == "forget":
            action = _groupoid_action(data)
            hom = forget_map(translation_groupoid(action, verify=False), int(data.get("n", 2)))
            checks = [hom.verify().to_json(), is_covering_hom(hom).to_json()]
            summary = {
                "configuration_objects": len(hom.src.objects),
                "base_objects": len(hom.dst.objects),
            }
        elif kind == "skeleton":
            action = _groupoid_action(data)
            hom = skeleton_inclusion(translation_groupoid(action, verify=False))
            checks = [hom.verify().to_json(), is_equivalence(hom).to_json()]
            summary = {"skeleton_objects": len(hom.src.objects)}
        elif kind == "morita":
            action = _groupoid_action(data)
            first = frozenset(_freeze(el) for el in data["n1"])
            second = frozenset(_freeze(el) for el in data["n2"])
            triple = morita_triple(action, first, second)
            body = triple.to_json()
            body["model"] = kind
            return body, {"input": data}, EXIT_OK
        else:
            raise CliError(EXIT_INPUT, f"unknown groupoid model type {kind!r}")
    except KeyError as exc:
        raise CliError(EXIT_INPUT, f"missing field in groupoid model: {exc}") from exc
    report = {
        "model": kind,
        "summary": summary,
        "checks": checks,
        "pass": all(entry["pass"] for entry in checks),
    }
    return report, {"input": data}, EXIT_OK


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _table_lines(value, indent: int = 0, key: Optional[str] = None) -> list[str]:
    pad = "  " * indent
    label = f"{key}: " if key is not None else ""
    if isinstance(value, dict):
        lines = [f"{pad}{key}:"] if key is not None else []
        inner = indent + 1 if key is not None else indent
        for sub in sorted(value):
            lines.extend(_table_lines(value[sub], inner, sub))
        return lines
    if isinstance(value, list):
        if all(not isinstance(item, (dict, list)) for item in value):
            return [f"{pad}{label}[{', '.join(str(item) for item in value)}]"]
        lines = [f"{pad}{key}:"] if key is not None else []
        for index, item in enumerate(value):
            lines.extend(_table_lines(item, indent + 1, f"[{index}]"))
        return lines
    return [f"{pad}{label}{value}"]


def _emit(envelope: dict, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = json.dumps(envelope, sort_keys=True, separators=(",", ":")) + "\n"
    else:
        text = "\n".join(_table_lines(envelope)) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Parser and dispatch
# ---------------------------------------------------------------------------


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbconfig",
        description="Exact invariants of planar orbit configurations: "
        "arrangements, coverings, obstructions, groupoid models.",
    )
    parser.add_argument("--version", action="version", version=f"orbconfig {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed recorded in the report")
    common.add_argument("--epsilon", type=_positive_float, default=DEFAULT_EPS)
    common.add_argument("--samples", type=_positive_int, default=200)
    common.add_argument("--window", type=_positive_int, default=3)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", default=None, help="write the report to a file")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a 2-orbifold spec")
    p.add_argument("spec", help="JSON object or path")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("arrangement", parents=[common], help="arrangement invariants")
    p.add_argument("spec", nargs="?", help="JSON object or path")
    p.add_argument("--builder", choices=("braid", "case1", "case3X"))
    p.add_argument("--n", type=_positive_int, default=None)
    p.add_argument("--m", type=_positive_int, default=2)
    p.set_defaults(handler=_cmd_arrangement)

    p = sub.add_parser("verify-cover", parents=[common], help="sampled covering checks")
    p.add_argument("map", help="map id: q, squaring, or qE")
    p.add_argument("--n", type=_positive_int, default=2)
    p.set_defaults(handler=_cmd_verify_cover)

    p = sub.add_parser("obstruction", parents=[common], help="quasifibration witness")
    p.add_argument("spec", help="planar action JSON object or path")
    p.add_argument("--n", type=_positive_int, default=2)
    p.set_defaults(handler=_cmd_obstruction)

    p = sub.add_parser("groupoid", parents=[common], help="finite groupoid model checks")
    p.add_argument("spec", help="model JSON object or path")
    p.set_defaults(handler=_cmd_groupoid)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report, extra, code = args.handler(args)
    except CliError as exc:
        print(f"orbconfig: {exc}", file=sys.stderr)
        return exc.code
    except ReflectorError as exc:
        print(f"orbconfig: {exc}", file=sys.stderr)
        return EXIT_REFLECTOR
    except SizeGuardError as exc:
        print(f"orbconfig: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except NoWitnessError as exc:
        print(f"orbconfig: {exc}", file=sys.stderr)
        return EXIT_NO_WITNESS
    except (InvalidModelError, MembershipError, ValueError, KeyError) as exc:
        print(f"orbconfig: {exc}", file=sys.stderr)
        return EXIT_INPUT
    config = {
        "subcommand": args.command,
        "seed": args.seed,
        "epsilon": args.epsilon,
        "samples": args.samples,
        "window": args.window,
        "format": args.format,
    }
    config.update(extra)
    envelope = {
        "tool": "orbconfig",
        "version": __version__,
        "config": config,
        "report": report,
    }
    _emit(envelope, args.format, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
