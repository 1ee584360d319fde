"""Command-line entry point: ``kddfs {ingest,similarity,select,classify,bench,report}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from importlib import resources

import numpy as np

from . import __version__
from .classifiers import UNDEFINED
from .dataset import (
    LabeledDataset, apply_minmax, fit_minmax, load_any, read_category_map, save_dataset,
    stratified_folds, stratified_subsample,
)
from .errors import KddfsError
from .evaluation import (
    CLASSIFIERS, SELECTORS, ClassifierConfig, emit_report, load_report, make_selector, pooled_scores,
    prepare_folds, run_grid,
)
from .ffr import dump_scores
from .similarity import Measure, build_similarity_matrix

log = logging.getLogger("kddfs")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
THREADS_ENV = "KDDFS_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fixture_path() -> str:
    return str(resources.files("kddfs") / "data" / "kdd_fixture_1000.data")


def _csv_list(text, cast=str):
    try:
        return [cast(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad list: {text!r}") from None


def _default_threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kddfs", description="Feature reduction and benchmarking on KDD-99 style data.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("--threads", type=int, default=_default_threads(),
                        help=f"parallelism cap (default from ${THREADS_ENV}, else 1)")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    def data_opts(sp, required=True):
        sp.add_argument("--data", required=required, help="KDD-99 file (plain or .gz) or an ingested .npz")
        sp.add_argument("--category-map", help="two-column 'subcategory,category' override file")
        sp.add_argument("--subsample", type=int, help="stratified subsample size")
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--raw", action="store_true", help="skip min-max normalization")

    sp = sub.add_parser("ingest", parents=[common], help="parse, encode and (optionally) normalize a data file")
    data_opts(sp)
    sp.add_argument("--out", required=True, help="output .npz or .csv")

    sp = sub.add_parser("similarity", parents=[common], help="D x D feature dissimilarity matrix")
    data_opts(sp)
    sp.add_argument("--measure", choices=[m.value for m in Measure], required=True)
    sp.add_argument("--symmetrize", choices=["min", "max"])
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("select", parents=[common], help="run one feature selector")
    data_opts(sp)
    sp.add_argument("--method", choices=[s for s in SELECTORS if s != "all"], required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--symmetrize", choices=["min", "max"])
    sp.add_argument("--dump-scores", help="FFR only: CSV of class means and scores")
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("classify", parents=[common], help="KNN or naive Bayes on (selected) features")
    data_opts(sp)
    sp.add_argument("--classifier", choices=CLASSIFIERS, default="knn")
    sp.add_argument("--k", type=int, default=5)
    sp.add_argument("--epsilon", type=float, default=1e-9)
    sp.add_argument("--features", help="selection JSON written by 'select'")
    sp.add_argument("--test", help="separate test file; otherwise cross-validated predictions")
    sp.add_argument("--folds", type=int, default=10)
    sp.add_argument("--no-stratify", action="store_true")
    sp.add_argument("--out", required=True, help="predictions CSV")

    sp = sub.add_parser("bench", parents=[common], help="cross-validated selector x size x classifier grid")
    data_opts(sp, required=False)
    sp.add_argument("--counts", type=lambda s: _csv_list(s, int), default=[10, 20, 30])
    sp.add_argument("--classifiers", type=_csv_list, default=["knn", "bayes"])
    sp.add_argument("--selectors", type=_csv_list, default=["cc", "lsre", "mici", "ffr"])
    sp.add_argument("--folds", type=int, default=10)
    sp.add_argument("--k", type=int, default=5)
    sp.add_argument("--epsilon", type=float, default=1e-9)
    sp.add_argument("--symmetrize", choices=["min", "max"])
    sp.add_argument("--no-stratify", action="store_true")
    sp.add_argument("--select-global", action="store_true", help="select once on all rows, not per fold")
    sp.add_argument("--out", required=True, help="report JSON")

    sp = sub.add_parser("report", parents=[common], help="render a bench report")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--format", choices=["json", "csv", "markdown"], default="markdown")
    sp.add_argument("--out", help="write here instead of stdout")
    return p


def _config(args) -> dict:
    # the artifact's own path and the thread cap do not affect its contents
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "verbose", "threads", "out")}
    return json.loads(json.dumps(cfg))


def _load(args) -> LabeledDataset:
    cmap = read_category_map(args.category_map) if args.category_map else None
    ds = load_any(args.data, cmap)
    log.info("loaded %d rows x %d features from %s", ds.n_samples, ds.n_features, args.data)
    if args.subsample is not None and args.subsample < ds.n_samples:
        ds = stratified_subsample(ds, args.subsample, args.seed)
        log.info("subsampled to %d rows", ds.n_samples)
    return ds


def _normalized(ds, raw):
    return ds if raw else apply_minmax(ds, fit_minmax(ds))


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_ingest(args):
    ds = _normalized(_load(args), args.raw)
    save_dataset(ds, args.out, _config(args))
    print(f"wrote {ds.n_samples} x {ds.n_features} to {args.out}")


def cmd_similarity(args):
    ds = _normalized(_load(args), args.raw)
    sim = build_similarity_matrix(ds.matrix, args.measure, args.symmetrize)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("# config: " + json.dumps(_config(args), sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([""] + list(ds.feature_names))
        for name, row in zip(ds.feature_names, sim.values):
            w.writerow([name] + [repr(float(v)) for v in row])


def cmd_select(args):
    ds = _normalized(_load(args), args.raw)
    if not 1 <= args.count <= ds.n_features:
        raise UsageError(f"--count must lie in [1, {ds.n_features}]")
    if args.dump_scores and args.method != "ffr":
        raise UsageError("--dump-scores only applies to --method ffr")
    res = make_selector(args.method, args.count, args.symmetrize)(ds)
    out = res.to_dict()
    out["config"] = _config(args)
    _write_json(args.out, out)
    if args.dump_scores:
        dump_scores(res, args.dump_scores, ds.categories)
    print(f"{args.method}: kept {len(res.kept)} features in {res.elapsed_seconds:.6f}s -> {args.out}")


def _kept_from(path, n_features):
    with open(path, encoding="utf-8") as fh:
        kept = [int(i) for i in json.load(fh)["kept"]]
    if not kept or min(kept) < 0 or max(kept) >= n_features:
        raise KddfsError(f"{path}: feature indices out of range for {n_features} features")
    return kept


def cmd_classify(args):
    ds = _load(args).drop_empty_categories()
    kept = _kept_from(args.features, ds.n_features) if args.features else list(range(ds.n_features))
    clf = ClassifierConfig(args.classifier, args.k, args.epsilon)
    if args.test:
        test = load_any(args.test, read_category_map(args.category_map) if args.category_map else None)
        if test.categories != ds.categories:
            test = _align_categories(test, ds.categories)
        train_x, test_x = ds.values, test.values
        if not args.raw:
            params = fit_minmax(train_x)
            train_x, test_x = apply_minmax(train_x, params), apply_minmax(test_x, params)
        pred = clf.fit_predict(train_x[:, kept], ds.labels, test_x[:, kept], ds.n_classes, ds.categories)
        index, truth = np.arange(test.n_samples), test.labels
    else:
        folds = stratified_folds(ds.labels, args.folds, args.seed, not args.no_stratify)
        index, truth, pred = [], [], []
        for fd in prepare_folds(ds, folds, args.raw):
            p = clf.fit_predict(fd.train.values[:, kept], fd.train.labels, fd.test_values[:, kept],
                                ds.n_classes, ds.categories)
            index.append(fd.test_index)
            truth.append(fd.test_labels)
            pred.append(p)
        order = np.argsort(np.concatenate(index))
        index = np.concatenate(index)[order]
        truth = np.concatenate(truth)[order]
        pred = np.concatenate(pred)[order]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("# config: " + json.dumps(_config(args), sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "true", "predicted"])
        for i, t, p in zip(index, truth, pred):
            w.writerow([int(i), ds.categories[t], "undefined" if p == UNDEFINED else ds.categories[p]])
    _, overall, _, _ = pooled_scores(truth, pred, ds.n_classes)
    print(f"{args.classifier}: overall accuracy {100 * overall:.2f}% on {len(truth)} predictions -> {args.out}")


def _align_categories(test, categories):
    names = [test.categories[i] for i in test.labels]
    unknown = sorted(set(names) - set(categories))
    if unknown:
        raise KddfsError("test categories missing from training data: " + ", ".join(unknown))
    lookup = {c: i for i, c in enumerate(categories)}
    return LabeledDataset(test.matrix, [lookup[n] for n in names], categories, test.subcategory)


def cmd_bench(args):
    if args.data is None:
        args.data = fixture_path()
    bad = [s for s in args.selectors if s not in SELECTORS]
    if bad:
        raise UsageError(f"unknown selector(s): {', '.join(bad)}")
    bad = [c for c in args.classifiers if c not in CLASSIFIERS]
    if bad:
        raise UsageError(f"unknown classifier(s): {', '.join(bad)}")
    ds = _load(args)
    if any(not 1 <= t <= ds.n_features for t in args.counts):
        raise UsageError(f"--counts must lie in [1, {ds.n_features}]")
    report = run_grid(
        ds, args.selectors, args.counts, args.classifiers, seed=args.seed, n_folds=args.folds,
        stratify=not args.no_stratify, raw=args.raw, select_global=args.select_global, knn_k=args.k,
        epsilon=args.epsilon, symmetrize=args.symmetrize, threads=args.threads, config=_config(args),
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(emit_report(report, "json"))
    print(emit_report(report, "markdown"))


def cmd_report(args):
    text = emit_report(load_report(args.input), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


COMMANDS = {
    "ingest": cmd_ingest,
    "similarity": cmd_similarity,
    "select": cmd_select,
    "classify": cmd_classify,
    "bench": cmd_bench,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    if args.threads < 1:
        print("kddfs: error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"kddfs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KddfsError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"kddfs {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"kddfs {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
