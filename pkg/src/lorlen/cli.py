"""Command-line front end: run scene files and pinned reproductions.

``lorlen run <scene.json> [--out DIR]`` executes a scene; ``lorlen
reproduce <id> [--out DIR]`` re-runs a pinned example and asserts its
checks.  Both write ``result.json`` (machine-readable, deterministic),
``report.txt`` (human-readable) and one CSV per emitted curve into the
output directory.

Exit codes: 0 on success, 1 when a computation or a pinned check fails,
2 when the scene itself is rejected (the error names the offending key).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .scenes import EXAMPLE_IDS, SceneError, SceneOutcome, reproduce_example, run_scene

CSV_HEADER = "param,coord1,coord2"


def write_outputs(outcome: SceneOutcome, out_dir: str) -> list:
    """Write result.json, report.txt and curve CSVs; return the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    path = os.path.join(out_dir, "result.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(outcome.record, fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths.append(path)

    path = os.path.join(out_dir, "report.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(outcome.report)
        fh.write("\n")
    paths.append(path)

    for name in sorted(outcome.curves):
        rows = outcome.curves[name]
        path = os.path.join(out_dir, f"{name}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for t, (c1, c2) in zip(rows["params"], rows["coords"]):
                fh.write(f"{t!r},{c1!r},{c2!r}\n")
        paths.append(path)
    return paths


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorlen",
        description="time separations, tau-length and curvature comparison "
                    "for synthetic Lorentzian spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scene file")
    run_p.add_argument("scene", help="path to a scene JSON file")
    run_p.add_argument("--out", default=None,
                       help="output directory (default: '<scene stem>-out')")

    rep_p = sub.add_parser(
        "reproduce",
        help="re-run a pinned example and assert its checks",
        epilog="ids: " + ", ".join(EXAMPLE_IDS))
    rep_p.add_argument("id", help="pinned example id")
    rep_p.add_argument("--out", default=None,
                       help="output directory (default: '<id>-out')")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            try:
                with open(args.scene, "r", encoding="utf-8") as fh:
                    scene = json.load(fh)
            except OSError as exc:
                print(f"error: cannot read scene file: {exc}", file=sys.stderr)
                return 2
            except json.JSONDecodeError as exc:
                print(f"error: scene file is not valid JSON: {exc}", file=sys.stderr)
                return 2
            outcome = run_scene(scene)
            stem = os.path.splitext(os.path.basename(args.scene))[0]
            out_dir = args.out or f"{stem}-out"
        else:
            outcome = reproduce_example(args.id)
            out_dir = args.out or f"{args.id}-out"
    except SceneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    paths = write_outputs(outcome, out_dir)
    print(outcome.report)
    print(f"\nwrote: {', '.join(paths)}")
    return 0 if outcome.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
