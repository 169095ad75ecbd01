"""Command-line interface: train a model artifact, then write predictions."""

from __future__ import annotations

import argparse
import json
import sys

from .config import TrainerConfig
from .data import DataError
from .predict import predict_file
from .train import train


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="committee-trainer", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on a dataset file")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="model artifact directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--ensemble", type=int, default=1)
    p.add_argument("--learning-rate", type=float, default=1e-4)

    p = sub.add_parser("predict", help="score a dataset or profile file")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1

    try:
        if args.command == "train":
            config = TrainerConfig(
                max_epochs=args.epochs,
                patience=min(TrainerConfig.patience, args.epochs),
                batch_size=args.batch_size,
                ensemble_count=args.ensemble,
                learning_rate=args.learning_rate,
                seed=args.seed,
            )
            result = train(config, args.data, out_path=args.out)
            print(json.dumps({
                "final_train_loss": result.final_loss,
                "epochs_used": result.epochs_used,
                "out": args.out,
            }))
        else:
            count = predict_file(args.model, args.input, args.out)
            print(json.dumps({"predictions": count, "out": args.out}))
    except (DataError, FileNotFoundError, ValueError) as exc:
        print(f"committee-trainer: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
