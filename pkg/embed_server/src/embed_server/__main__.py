"""Run the embedding service: python -m embed_server --model st:<name> --port 8090"""

import argparse
import sys

import uvicorn

from .app import create_app
from .config import ServerConfig
from .encoders import build_encoder


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="embed-server")
    parser.add_argument("--model", default="hash", help="hash[:dim] | st:<model-name> | laser")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8090)
    parser.add_argument("--max-batch", type=int, default=64)
    parser.add_argument("--device", default="cpu")
    args = parser.parse_args(argv)

    config = ServerConfig(
        model=args.model,
        host=args.host,
        port=args.port,
        max_batch=args.max_batch,
        device=args.device,
    )
    try:
        encoder = build_encoder(config.model, device=config.device)
    except Exception as e:
        print(f"failed to load encoder {config.model!r}: {e}", file=sys.stderr)
        return 1
    print(f"serving {encoder.name} (dim {encoder.dim}) on {config.host}:{config.port}")
    uvicorn.run(create_app(config, encoder=encoder), host=config.host, port=config.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
