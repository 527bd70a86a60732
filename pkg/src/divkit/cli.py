"""Command-line surface and report assembly.

Exit codes: 0 success, 2 input validation failure, 3 cache corruption that
was recovered with a warning, 64 usage errors. Reports are canonical JSON
(sorted keys, 6-significant-digit floats), so identical runs produce
byte-identical files; per-section wall time goes to stderr unless --timing
explicitly embeds it (which breaks byte-identity on purpose).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time

from . import __version__, kernels
from . import concepts as concepts_mod
from . import coreset as coreset_mod
from . import diversity, loo, metrics, scorematrix, semantic, splits
from .corpus import (CaptionDataset, DatasetError, SidecarError,
                     attach_embeddings, load_dataset, validate)
from .report import write_report
from .textproc import MaskingPolicy, tokenize

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CACHE_RECOVERED = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True, help="dataset JSON file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cache-dir", default=None,
                   help="score-matrix cache (default: $DIVKIT_CACHE_DIR)")
    p.add_argument("--out", default=None, help="report file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--split", choices=("train", "val", "test", "all"),
                   default="all")
    p.add_argument("--timing", action="store_true",
                   help="embed per-section wall time (breaks byte-identity)")


def build_parser() -> _Parser:
    parser = _Parser(prog="divkit",
                     description="diversity analytics for caption datasets")
    parser.add_argument("--version", action="version",
                        version=f"divkit {__version__} ({kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("stats", help="vocab/POS/EVS/ED statistics")
    _add_common(p)
    p.add_argument("--pos", default=None, help="POS sidecar (JSON lines)")
    p.add_argument("--evs-orders", default="2,3,4")
    p.add_argument("--ed-at", default="10")

    p = sub.add_parser("loo", help="leave-one-out ground-truth estimates")
    _add_common(p)
    p.add_argument("--metric", choices=metrics.METRICS, default="bleu4")
    p.add_argument("--iterations", type=int, default=750)
    p.add_argument("--mask", choices=("none", "semantic", "vocab_tail"),
                   default="none")
    p.add_argument("--head-fraction", type=float, default=0.9)
    p.add_argument("--pos", default=None, help="POS sidecar for --mask semantic")
    p.add_argument("--refcounts", default=None,
                   help="comma list of r values for the reference-count sweep")
    p.add_argument("--variance-bins", type=int, default=None)
    p.add_argument("--embeddings", default=None,
                   help="embedding sidecar stem (default: built-in embedder)")

    p = sub.add_parser("semantic", help="within-sample semantic analyses")
    _add_common(p)
    p.add_argument("--embeddings", default=None)
    p.add_argument("--csv", default=None, help="per-sample CSV export")

    p = sub.add_parser("coreset", help="greedy caption core-sets")
    _add_common(p)
    p.add_argument("--thresholds", required=True,
                   help="comma list, ascending")
    p.add_argument("--metric", choices=metrics.METRICS, default="bleu4")
    p.add_argument("--train-split", default="train")
    p.add_argument("--eval-split", default="test")
    p.add_argument("--csv", default=None, help="curve CSV export")

    p = sub.add_parser("concepts", help="label overlap and concept core-sets")
    _add_common(p)
    p.add_argument("--labels", required=True, help="label-set JSON file")
    p.add_argument("--mode", choices=("exact", "fuzzy"), default="exact")
    p.add_argument("--fuzzy-threshold", type=float, default=90.0)
    p.add_argument("--coreset-eval", action="store_true",
                   help="also run the concept core-set evaluation")
    p.add_argument("--train-split", default="train")
    p.add_argument("--eval-split", default="test")
    p.add_argument("--max-samples", type=int, default=None,
                   help="subsample the evaluation split (deterministic)")

    p = sub.add_parser("splits", help="diversity-stratified split files")
    _add_common(p)
    p.add_argument("--axis", choices=splits.AXES, required=True)
    p.add_argument("--bins", type=int, default=2)
    p.add_argument("--labels", default=None)
    p.add_argument("--embeddings", default=None)

    p = sub.add_parser("tokenize", help="token listing on stdout")
    _add_common(p)
    return parser


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _store_for(args, dataset):
    if getattr(args, "embeddings", None):
        return attach_embeddings(dataset, args.embeddings)
    return semantic.builtin_store(dataset)


def _flat_rows(section: str, obj, prefix="") -> list[tuple[str, str, str]]:
    rows = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            rows.extend(_flat_rows(section, obj[key], f"{prefix}{key}."))
    elif isinstance(obj, (list, tuple)):
        for i, item in enumerate(obj):
            rows.extend(_flat_rows(section, item, f"{prefix}{i}."))
    else:
        rows.append((section, prefix.rstrip("."), str(obj)))
    return rows


def _emit(args, document: dict) -> None:
    if args.format == "csv":
        rows = []
        for section, obj in document["results"].items():
            rows.extend(_flat_rows(section, obj))
        target = open(args.out, "w", newline="", encoding="utf-8") \
            if args.out else sys.stdout
        try:
            writer = csv.writer(target)
            writer.writerow(["section", "key", "value"])
            writer.writerows(rows)
        finally:
            if args.out:
                target.close()
    elif args.out:
        write_report(args.out, document)
    else:
        from .report import canonical_json
        print(canonical_json(document))


class _Timer:
    def __init__(self):
        self.sections: dict[str, float] = {}

    def run(self, name: str, fn):
        start = time.perf_counter()
        result = fn()
        elapsed = time.perf_counter() - start
        self.sections[name] = elapsed
        print(f"divkit: section {name} took {elapsed:.2f}s", file=sys.stderr)
        return result


def _base_document(args, dataset: CaptionDataset) -> dict:
    return {
        "tool": {"name": "divkit", "version": __version__},
        "command": args.command,
        "seed": args.seed,
        "dataset": {"name": dataset.name, "sha256": dataset.content_hash()},
        "results": {},
    }


def _loo_config(args, mask_kind="none") -> loo.LooConfig:
    return loo.LooConfig(
        params=metrics.MetricParams(metric=args.metric),
        iterations=args.iterations,
        seed=args.seed,
        mask=MaskingPolicy(kind=mask_kind, head_fraction=args.head_fraction),
        variance_bins=args.variance_bins,
        jobs=args.jobs,
    )


def _cmd_stats(args, dataset, timer) -> dict:
    report = timer.run("stats", lambda: diversity.diversity_report(
        dataset, pos_sidecar=args.pos,
        evs_orders=tuple(_int_list(args.evs_orders)),
        ed_positions=tuple(_int_list(args.ed_at))))
    vr = validate(dataset)
    report["dataset"] = {
        "samples": vr.sample_count, "references": vr.reference_count,
        "split_histogram": vr.split_histogram,
    }
    return report


def _cmd_loo(args, dataset, timer) -> dict:
    results: dict = {}
    if args.refcounts:
        config = _loo_config(args)
        sweep = timer.run("loo_refcount", lambda: loo.refcount_sweep(
            dataset, config, _int_list(args.refcounts)))
        results["loo_refcount"] = {
            str(r): res.to_report() for r, res in sweep.items()}
        return results
    if args.variance_bins:
        config = _loo_config(args)
        store = _store_for(args, dataset)
        binned = timer.run("loo_variance_bins", lambda: loo.variance_binned_loo(
            dataset, store, config))
        results["loo_variance_bins"] = {
            "excluded_samples": binned["excluded_samples"],
            "bins": {
                name: None if info is None else {
                    "samples": info["samples"],
                    "variance_min": info["variance_min"],
                    "variance_max": info["variance_max"],
                    **info["result"].to_report(),
                }
                for name, info in binned["bins"].items()
            },
        }
        return results
    if args.mask == "semantic":
        config = _loo_config(args, "semantic")
        result = timer.run("loo_masked", lambda: loo.masked_loo(
            dataset, config, pos_sidecar=args.pos))
        results["loo_masked"] = result.to_report()
    elif args.mask == "vocab_tail":
        config = _loo_config(args, "vocab_tail")
        plain, masked, drop = timer.run("loo_vocab_masked",
                                        lambda: loo.vocab_masked_loo(dataset, config))
        results["loo_vocab_masked"] = {
            "plain": plain.to_report(),
            "masked": masked.to_report(),
            "relative_drop": drop,
        }
    else:
        config = _loo_config(args)
        result = timer.run("loo", lambda: loo.loo_estimate(dataset, config))
        results["loo"] = result.to_report()
    return results


def _cmd_semantic(args, dataset, timer) -> dict:
    store = _store_for(args, dataset)
    records, excluded = timer.run("semantic",
                                  lambda: semantic.sample_semantics(dataset, store))
    _, hist, _ = semantic.redundancy(dataset, store)
    per_novelty, novelty_mean = semantic.novelty(dataset)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["sample_id", "unique_captions", "variance",
                             "mean_delta_pct", "novelty_pct",
                             "min_distances"])
            for rec in records:
                writer.writerow([
                    rec.sample_id, rec.unique_caption_count,
                    f"{rec.variance:.6g}", f"{rec.mean_delta_pct:.6g}",
                    f"{rec.novelty_pct:.6g}",
                    " ".join(f"{d:.6g}" for d in rec.min_pairwise_distances),
                ])
    return {
        "redundancy": {"histogram": hist, "excluded_samples": excluded},
        "mean_delta": {rec.sample_id: rec.mean_delta_pct for rec in records},
        "novelty": {"per_sample": per_novelty, "mean": novelty_mean},
        "variance": {rec.sample_id: rec.variance for rec in records},
    }


def _cache_dir(args) -> str | None:
    return args.cache_dir or os.environ.get("DIVKIT_CACHE_DIR") or None


def _cmd_coreset(args, dataset, timer) -> tuple[dict, bool]:
    thresholds = _float_list(args.thresholds)
    train = dataset.filter_split(args.train_split)
    eval_ds = dataset.filter_split(args.eval_split)
    if not train.samples or not eval_ds.samples:
        raise DatasetError(
            f"core-set needs non-empty {args.train_split!r} and "
            f"{args.eval_split!r} splits")
    hypotheses = [ref for s in train.samples for ref in s.references]
    params = metrics.MetricParams(metric=args.metric)
    matrix = timer.run("matrix", lambda: scorematrix.build_score_matrix(
        hypotheses, list(eval_ds.samples), params,
        cache_dir=_cache_dir(args), jobs=args.jobs))
    curve = timer.run("coreset", lambda: coreset_mod.coverage_curve(
        matrix, thresholds))
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["threshold", "selected", "coverage_pct"])
            for res in curve:
                pct = 100.0 * res.covered / len(matrix.sample_ids)
                writer.writerow([f"{res.threshold:.6g}", len(res.selected),
                                 f"{pct:.6g}"])
    section = {
        "matrix_identity": matrix.identity,
        "curve": [
            {"threshold": res.threshold,
             "selected_count": len(res.selected),
             "covered": res.covered,
             "coverage_pct": 100.0 * res.covered / len(matrix.sample_ids),
             "uncoverable": len(res.uncoverable),
             "mean_covered_score": res.mean_covered_score,
             "selected": list(res.selected)}
            for res in curve
        ],
    }
    return {"coreset": section}, matrix.cache_status == "corrupt"


def _cmd_concepts(args, dataset, timer) -> dict:
    labelset = concepts_mod.LabelSet.load(args.labels)
    pct = timer.run("overlap", lambda: concepts_mod.overlap(
        dataset, labelset, mode=args.mode,
        fuzzy_threshold=args.fuzzy_threshold))
    results: dict = {"overlap": {
        "labelset": labelset.name, "mode": args.mode, "percent": pct,
    }}
    if args.coreset_eval:
        train = dataset.filter_split(args.train_split)
        eval_ds = dataset.filter_split(args.eval_split)
        eval_samples = list(eval_ds.samples)
        if args.max_samples is not None and len(eval_samples) > args.max_samples:
            import random as _random
            rng = _random.Random(args.seed)
            idx = sorted(rng.sample(range(len(eval_samples)), args.max_samples))
            eval_samples = [eval_samples[i] for i in idx]
        pools = timer.run("pools", lambda: concepts_mod.build_concept_pools(
            list(train.samples), labelset))
        evaluation = timer.run("concept_coreset", lambda: concepts_mod.
                               concept_coreset_eval(eval_samples, pools))
        evaluation["pool_captions"] = sum(len(v) for v in pools.pools.values())
        results["concept_coreset"] = evaluation
    return results


def _cmd_splits(args, dataset, timer) -> dict:
    labelset = concepts_mod.LabelSet.load(args.labels) if args.labels else None
    store = None
    if args.axis == "sample_variance":
        store = _store_for(args, dataset)
    spec = splits.SplitSpec(axis=args.axis, bins=args.bins, seed=args.seed)
    return timer.run("splits", lambda: splits.generate_splits(
        dataset, spec, labelset=labelset, store=store))


def _cmd_tokenize(args, dataset) -> None:
    out = sys.stdout
    for s in dataset.samples:
        for k, ref in enumerate(s.references):
            tokens = " ".join(tokenize(ref).tokens)
            out.write(f"{s.id}\t{k}\t{tokens}\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        dataset = load_dataset(args.dataset)
        if args.command != "coreset":
            dataset = dataset.filter_split(args.split)
        if not dataset.samples:
            raise DatasetError(f"no samples in split {args.split!r}")

        if args.command == "tokenize":
            _cmd_tokenize(args, dataset)
            return EXIT_OK

        timer = _Timer()
        if args.command == "splits":
            # split files are standalone artifacts with their own schema,
            # not report documents
            doc = _cmd_splits(args, dataset, timer)
            if args.out:
                write_report(args.out, doc)
            else:
                from .report import canonical_json
                print(canonical_json(doc))
            return EXIT_OK

        cache_recovered = False
        if args.command == "stats":
            results = _cmd_stats(args, dataset, timer)
        elif args.command == "loo":
            results = _cmd_loo(args, dataset, timer)
        elif args.command == "semantic":
            results = _cmd_semantic(args, dataset, timer)
        elif args.command == "coreset":
            results, cache_recovered = _cmd_coreset(args, dataset, timer)
        elif args.command == "concepts":
            results = _cmd_concepts(args, dataset, timer)
        else:  # pragma: no cover
            parser.print_usage(sys.stderr)
            return EXIT_USAGE

        document = _base_document(args, dataset)
        document["results"] = results
        if args.timing:
            document["timing"] = {k: round(v, 6)
                                  for k, v in timer.sections.items()}
        _emit(args, document)
        return EXIT_CACHE_RECOVERED if cache_recovered else EXIT_OK
    except (DatasetError, SidecarError, ValueError, OSError) as exc:
        print(f"divkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
