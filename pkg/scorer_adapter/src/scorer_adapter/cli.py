"""Command-line interface: train-cdm, train-bdm, and score."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .recipe import bdm_recipe, cdm_recipe


def _add_recipe_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--base-model", dest="base_model")
    parser.add_argument("--frozen-epochs", dest="frozen_epochs", type=int)
    parser.add_argument("--full-epochs", dest="full_epochs", type=int)
    parser.add_argument("--learning-rate", dest="learning_rate", type=float)
    parser.add_argument("--class-weight-ratio", dest="class_weight_ratio", type=float)
    parser.add_argument("--max-seq-len", dest="max_seq_len", type=int)
    parser.add_argument("--batch-size", dest="batch_size", type=int)
    parser.add_argument("--seed", type=int)


def _recipe_overrides(args) -> dict:
    keys = (
        "base_model", "frozen_epochs", "full_epochs", "learning_rate",
        "class_weight_ratio", "max_seq_len", "batch_size", "seed",
    )
    return {k: getattr(args, k) for k in keys if getattr(args, k) is not None}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scorer-adapter", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    cdm = sub.add_parser("train-cdm", help="fine-tune the claim detector")
    cdm.add_argument("--labeled", required=True, help="text,label CSV")
    cdm.add_argument("--out", required=True)
    _add_recipe_flags(cdm)

    bdm = sub.add_parser("train-bdm", help="fine-tune the bias detector")
    bdm.add_argument("--excerpts", required=True, help="id,text,label,category CSV")
    bdm.add_argument("--split", required=True, help="id,split CSV")
    bdm.add_argument("--out", required=True)
    _add_recipe_flags(bdm)

    score = sub.add_parser("score", help="score a corpus to a score file")
    score.add_argument("--cdm", required=True, help="CDM artifact directory")
    score.add_argument("--bdm", help="BDM artifact directory")
    score.add_argument("--corpus", required=True, help="line-delimited JSON corpus")
    score.add_argument("--tau", type=float, help="bias-score only claims above tau")
    score.add_argument("--out", required=True, help="output score CSV")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "train-cdm":
            from .training import train_cdm

            out = train_cdm(args.labeled, cdm_recipe(**_recipe_overrides(args)), args.out)
            print(f"CDM artifact -> {out}")
        elif args.command == "train-bdm":
            from .training import train_bdm

            out = train_bdm(
                args.excerpts, args.split, bdm_recipe(**_recipe_overrides(args)), args.out
            )
            print(f"BDM artifact -> {out}")
        else:
            from .scoring import score_corpus

            n = score_corpus(args.cdm, args.bdm, args.corpus, args.out, tau=args.tau)
            print(f"scored {n} tweet(s) -> {args.out}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
