"""Export CLI.

Either point ``--dataset-root`` at a dataset laid out as described in
``humanml.py`` or use ``--toy N`` to synthesize a deterministic subset; both
paths emit the same artifact set into ``--out``.
"""

import argparse
import json
import logging
import sys

from .export import ExportManifest, run_export
from .humanml import load_split
from .toy import generate


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="morag-export", description=__doc__)
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--dataset-root", help="dataset directory")
    source.add_argument("--toy", type=int, metavar="N", help="synthesize N motions")
    parser.add_argument("--split", default="test", choices=("train", "val", "test"))
    parser.add_argument("--part", choices=("torso", "hands", "legs"), default=None,
                        help="restrict embedding export to one part")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--encoder", default="hash")
    parser.add_argument("--limit", type=int, default=None, help="cap dataset motions")
    parser.add_argument("--mirror", action="store_true", help="emit mirrored variants (toy mode)")
    parser.add_argument("--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.toy is not None:
            motions = generate(args.toy, seed=args.seed, mirror=args.mirror)
        else:
            motions = load_split(args.dataset_root, args.split, limit=args.limit)
        if not motions:
            print("error: no motions to export", file=sys.stderr)
            return 2
        manifest = ExportManifest(out_dir=args.out, split=args.split, encoder=args.encoder)
        parts = (args.part,) if args.part else ("torso", "hands", "legs")
        summary = run_export(manifest, motions, seed=args.seed, parts=parts)
        print(json.dumps(summary, sort_keys=True))
        return 0
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
