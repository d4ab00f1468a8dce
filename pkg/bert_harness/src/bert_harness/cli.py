"""CLI for the encoder fine-tuning harness.

Consumes the instance JSONL files and dataset directories produced by the
extraction pipeline; emits the same eval-matrix report formats as the
baseline evaluator. Exit codes: 0 success, 1 configuration error, 2 data or
resource error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import FinetuneConfig
from .encoder import make_tiny_encoder
from .errors import ConfigError, HarnessError
from .evaluate import eval_matrix, evaluate_encoder
from .finetune import finetune


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _config_from(args) -> FinetuneConfig:
    return FinetuneConfig(
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        epochs=args.epochs,
        encoder_name=args.encoder,
        max_sequence_length=args.max_seq_length,
        seed=args.seed,
        device=args.device,
    )


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--encoder", default="bert-base-uncased",
                        help="hub name or local encoder directory")
    parser.add_argument("--learning-rate", type=float, default=2e-5)
    parser.add_argument("--batch-size", type=int, default=24)
    parser.add_argument("--epochs", type=int, default=10)
    parser.add_argument("--max-seq-length", type=int, default=128)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--device", default="cpu")


def cmd_make_tiny_encoder(args) -> int:
    out = make_tiny_encoder(
        args.train, args.out_dir,
        hidden_size=args.hidden_size, num_layers=args.layers,
        num_heads=args.heads, vocab_size=args.vocab_size, seed=args.seed,
    )
    print(f"tiny encoder -> {out}", file=sys.stderr)
    return 0


def cmd_finetune(args) -> int:
    out = finetune(args.train, args.dev, _config_from(args), args.out_dir)
    print(f"model -> {out}", file=sys.stderr)
    return 0


def cmd_evaluate(args) -> int:
    accuracy = evaluate_encoder(args.model, args.test, device=args.device)
    report = {"accuracy": accuracy, "model": str(args.model), "test": str(args.test)}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2)
            f.write("\n")
        print(f"accuracy {accuracy:.4f} -> {args.out}", file=sys.stderr)
    else:
        json.dump(report, sys.stdout, indent=2)
        print()
    return 0


def cmd_eval_matrix(args) -> int:
    report = eval_matrix(
        {"europarl": args.europarl, "twitter": args.twitter},
        _config_from(args),
        out_dir=args.out_dir,
    )
    from .reports import format_table

    sys.stdout.write(format_table(report["accuracy"]))
    print(f"evaluation matrix -> {args.out_dir}", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="plural-you-bert", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-tiny-encoder",
                       help="random-init miniature encoder with a corpus vocabulary")
    p.add_argument("--train", required=True, help="training JSONL to build the vocabulary from")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--hidden-size", type=int, default=64)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--heads", type=int, default=2)
    p.add_argument("--vocab-size", type=int, default=8000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_make_tiny_encoder)

    p = sub.add_parser("finetune", help="fine-tune an encoder on a dataset")
    p.add_argument("--train", required=True)
    p.add_argument("--dev", required=True)
    p.add_argument("--out-dir", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("evaluate", help="accuracy of a saved model on a test JSONL")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--out", help="report JSON (default: stdout)")
    p.add_argument("--device", default="cpu")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("eval-matrix", help="3x2 train-corpus x test-corpus grid")
    p.add_argument("--europarl", required=True, help="europarl dataset directory")
    p.add_argument("--twitter", required=True, help="twitter dataset directory")
    p.add_argument("--out-dir", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_eval_matrix)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except HarnessError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
