"""annotate: export embedding/POS sidecars for divkit datasets."""

from __future__ import annotations

import argparse
import sys

from .encoders import DEFAULT_MODEL, EncoderError
from .jobs import AlignmentError, AnnotationJob, export_embeddings, export_pos
from .taggers import LEXICON_MODEL, TaggerError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annotate",
        description="produce embedding/POS sidecar files aligned to the "
                    "divkit tokenizer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embeddings", help="export the embedding sidecar pair")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True, help="output stem")
    p.add_argument("--model", default=DEFAULT_MODEL,
                   help=f"encoder id (default {DEFAULT_MODEL}; "
                        "'builtin-hash' runs offline)")
    p.add_argument("--batch", type=int, default=64)

    p = sub.add_parser("pos", help="export the POS sidecar (JSON lines)")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True, help="output stem")
    p.add_argument("--model", default=LEXICON_MODEL,
                   help=f"tagger id (default {LEXICON_MODEL}; "
                        "'spacy:<model>' uses spacy)")
    p.add_argument("--divkit-bin", default="divkit",
                   help="path to the core CLI used for tokenization")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "embeddings":
            job = AnnotationJob(dataset_path=args.dataset, out_stem=args.out,
                                model=args.model, batch_size=args.batch)
            info = export_embeddings(job)
            print(f"wrote {info['records']} rows of dim {info['dim']} "
                  f"({info['model']}) to {args.out}.emb.*")
        else:
            job = AnnotationJob(dataset_path=args.dataset, out_stem=args.out,
                                model=args.model, divkit_bin=args.divkit_bin)
            info = export_pos(job)
            print(f"wrote {info['records']} POS records ({info['model']}) "
                  f"to {args.out}.pos.jsonl")
        return 0
    except (EncoderError, TaggerError, AlignmentError, OSError,
            ValueError) as exc:
        print(f"annotate: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
