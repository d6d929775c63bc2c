"""Command-line surface.

Every subcommand builds a service request model and dispatches it either to a
remote service (config key ``service.url``) or to an in-process engine; both
paths share the same request/response models. Exit codes: 0 success, 64 usage,
2 I/O, 3 missing dependency, 4 data/format.
"""

import argparse
import json
import logging
import sys

import httpx
from pydantic import ValidationError

from .config import EngineConfig, load_config
from .errors import (
    EndpointError,
    MoragError,
    UsageError,
    exit_code_for,
)
from .service import Engine
from .service import models

log = logging.getLogger("morag")

EXIT_OK = 0
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage failures exit with code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class _RemoteClient:
    """Thin HTTP client mirroring the engine methods."""

    _ROUTES = {
        "describe": "/describe",
        "retrieve": "/retrieve",
        "compose": "/compose",
        "build_db": "/build-db",
        "evaluate": "/eval",
        "train_toy": "/train-toy",
    }
    _RESPONSES = {
        "describe": models.DescribeResponse,
        "retrieve": models.RetrieveResponse,
        "compose": models.ComposeResponse,
        "build_db": models.BuildDbResponse,
        "evaluate": models.EvalResponse,
        "train_toy": models.TrainToyResponse,
    }

    def __init__(self, base_url: str):
        self.base_url = base_url.rstrip("/")

    def __getattr__(self, name):
        if name not in self._ROUTES:
            raise AttributeError(name)

        def call(request):
            try:
                response = httpx.post(
                    self.base_url + self._ROUTES[name],
                    json=request.model_dump(),
                    timeout=120.0,
                )
            except httpx.HTTPError as exc:
                raise EndpointError(f"service unreachable: {exc}") from exc
            if response.status_code >= 400:
                try:
                    body = response.json()
                    err = MoragError(body.get("message", response.text))
                    err.category = body.get("category", "data")
                except ValueError:
                    err = MoragError(response.text)
                raise err
            return self._RESPONSES[name].model_validate(response.json())

        return call


def _dispatcher(config: EngineConfig):
    if config.service_url:
        return _RemoteClient(config.service_url)
    return Engine(config)


def _print_json(payload) -> None:
    if hasattr(payload, "model_dump"):
        payload = payload.model_dump()
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _write_json(payload, path) -> None:
    if hasattr(payload, "model_dump"):
        payload = payload.model_dump()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def _ranking_table(part: str, ranking: models.PartRanking) -> str:
    lines = [f"[{part}]" + ("  (truncated)" if ranking.truncated else "")]
    for pos, item in enumerate(ranking.items, start=1):
        lines.append(
            f"  {pos:2d}. {item.id}  score={item.score:.6f}  frames={item.frames}  "
            f"{item.text}"
        )
    return "\n".join(lines)


def cmd_build_db(dispatcher, args) -> int:
    response = dispatcher.build_db(
        models.BuildDbRequest(
            manifest_path=args.manifest,
            vectors_path=args.vectors,
            part=args.part,
            out_path=args.out,
        )
    )
    print(f"built {response.part} database: {response.count} entries, dim {response.dim}")
    return EXIT_OK


def cmd_describe(dispatcher, args) -> int:
    response = dispatcher.describe(models.DescribeRequest(text=args.text))
    _print_json(response.parts)
    return EXIT_OK


def cmd_retrieve(dispatcher, args) -> int:
    response = dispatcher.retrieve(models.RetrieveRequest(text=args.text, k=args.k))
    for part in ("torso", "hands", "legs"):
        print(_ranking_table(part, response.parts[part]))
    _write_json(response, args.out)
    print(f"results written to {args.out}")
    return EXIT_OK


def cmd_compose(dispatcher, args) -> int:
    response = dispatcher.compose(
        models.ComposeRequest(text=args.text, k=args.k, out_dir=args.out_dir)
    )
    for item in response.composed:
        print(
            f"rank {item.rank}: torso={item.torso_id} hands={item.hands_id} "
            f"legs={item.legs_id} frames={item.f_min} -> {item.motion_path}"
        )
    return EXIT_OK


def cmd_eval(dispatcher, args) -> int:
    response = dispatcher.evaluate(
        models.EvalRequest(
            features_path=args.features,
            seed=args.seed,
            subset_size=args.subset_size,
            pool_size=args.pool_size,
        )
    )
    _print_json(response)
    if args.out:
        _write_json(response, args.out)
    return EXIT_OK


def cmd_train_toy(dispatcher, args) -> int:
    response = dispatcher.train_toy(
        models.TrainToyRequest(
            pairs_path=args.pairs,
            epochs=args.epochs,
            learning_rate=args.learning_rate,
            seed=args.seed if args.seed is not None else 0,
            out_path=args.out or "",
        )
    )
    _print_json(response)
    return EXIT_OK


def cmd_serve(config: EngineConfig, args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(config), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="morag", description=__doc__)
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--seed", type=int, default=None, help="seed for seeded commands")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-db", help="build a part database from manifest + vectors")
    p.add_argument("--manifest", required=True)
    p.add_argument("--vectors", required=True)
    p.add_argument("--part", required=True, choices=("torso", "hands", "legs"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_db)

    p = sub.add_parser("describe", help="generate part descriptions for a text")
    p.add_argument("text")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("retrieve", help="rank part-specific motions for a text")
    p.add_argument("text")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out", default="retrieve_results.json")
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("compose", help="retrieve and fuse full-body motions")
    p.add_argument("text")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("eval", help="compute the metric suite over feature sets")
    p.add_argument("--features", required=True, help="npz archive of feature sets")
    p.add_argument("--subset-size", type=int, default=None)
    p.add_argument("--pool-size", type=int, default=None)
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("train-toy", help="fit the toy projection trainer")
    p.add_argument("--pairs", required=True, help="npz archive with text/motion arrays")
    p.add_argument("--epochs", type=int, default=1000)
    p.add_argument("--learning-rate", type=float, default=1.0)
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_train_toy)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        config = load_config(args.config)
        if args.command == "serve":
            return cmd_serve(config, args)
        if getattr(args, "k", None) is not None and args.k < 1:
            raise UsageError(f"k must be >= 1, got {args.k}")
        if getattr(args, "k", "absent") is None:
            args.k = config.compose.k
        dispatcher = _dispatcher(config)
        return args.func(dispatcher, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MoragError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
