"""Command-line front end: bound, fit, score, classify, shift, eval, oracle.

All structured output is JSON on stdout or --out; score/classify also write
a per-query CSV. Exit codes: 0 success, 2 input or parse error, 3 dimension
or contract violation, 4 metric undefined on the given data.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import classifier, dataio, metrics, oracle, shift
from .bound import compute_bound, pooled_radius_family
from .core import (
    DegenerateDomainError,
    DimensionMismatchError,
    InputError,
    MetricUndefinedError,
    NormKind,
    RadiusIndicator,
    norms,
)

EXIT_INPUT = 2
EXIT_CONTRACT = 3
EXIT_METRIC = 4


def _emit(doc: dict, out_path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _parse_sigma_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise InputError(f"bad --sigma list {text!r}: {exc}") from None
    if not values:
        raise InputError("--sigma list is empty")
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise InputError(f"sigma entries must lie in [0, 1], got {v}")
    return values


def _positive_k(value: str) -> int:
    k = int(value)
    if k < 1:
        raise argparse.ArgumentTypeError(f"k must be >= 1, got {k}")
    return k


def cmd_bound(args) -> None:
    norm = NormKind.from_string(args.norm)
    pos = dataio.read_samples(args.pos, norm)
    neg = dataio.read_samples(args.neg, norm)
    if pos.dimension != neg.dimension:
        raise DimensionMismatchError(
            f"{args.pos} has dimension {pos.dimension} but {args.neg} has {neg.dimension}"
        )
    conditions = pooled_radius_family(pos, neg, args.k).indicators()
    report = compute_bound(pos, neg, conditions)
    doc = report.to_dict()
    doc["norm"] = norm.value
    doc["k"] = args.k
    _emit(doc, args.out)


def cmd_fit(args) -> None:
    norm = NormKind.from_string(args.norm)
    samples = dataio.read_samples(args.data, norm)
    scorer = classifier.fit(samples, k=args.k)
    scorer.save(args.out)
    _emit(
        {
            "model": args.out,
            "n_samples": len(samples),
            "dimension": samples.dimension,
            "k": scorer.k,
            "norm": scorer.norm.value,
            "fit_radius": scorer.fit_radius,
            "degenerate": scorer.degenerate,
        },
        None,
    )


def _write_scores_csv(path, raw, clamped, iterative=None, verdicts=None) -> None:
    header = ["row_index", "score", "clamped"]
    if iterative is not None:
        header.append("iterative")
    if verdicts is not None:
        header.append("verdict")
    lines = [",".join(header)]
    for i in range(len(raw)):
        cells = [str(i), repr(float(raw[i])), repr(float(clamped[i]))]
        if iterative is not None:
            cells.append(repr(float(iterative[i])))
        if verdicts is not None:
            cells.append(verdicts[i])
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _score_command(args, require_threshold: bool) -> None:
    scorer = classifier.FittedScorer.load(args.model)
    queries = dataio.read_sample_array(args.queries)
    if queries.shape[1] != scorer.dimension:
        raise DimensionMismatchError(
            f"{args.queries} has dimension {queries.shape[1]}, "
            f"model {args.model} expects {scorer.dimension}"
        )
    threshold = args.threshold
    if require_threshold and threshold is None:
        raise InputError("classify requires --threshold")
    raw = scorer.raw_scores(queries)
    clamped = np.clip(raw, 0.0, 1.0)
    iterative = None
    decide_on = raw
    if args.iterative:
        if not args.fit_data:
            raise InputError("--iterative needs --fit-data (the model stores no samples)")
        fit_set = dataio.read_samples(args.fit_data, scorer.norm)
        iterative = classifier.iterative_scores_batch(scorer, fit_set, queries, k2=args.k2)
        decide_on = iterative
    verdicts = None
    if threshold is not None:
        verdicts = ["in" if s >= threshold else "out" for s in decide_on]
    _write_scores_csv(args.scores_out, raw, clamped, iterative, verdicts)
    if args.scores_out is None and args.out is None:
        return  # the CSV already went to stdout; keep the stream parseable
    summary = {
        "n_queries": int(queries.shape[0]),
        "model": args.model,
        "norm": scorer.norm.value,
        "k": scorer.k,
        "mean_score": float(np.mean(raw)),
        "min_score": float(np.min(raw)),
        "max_score": float(np.max(raw)),
    }
    if iterative is not None:
        summary["k2"] = args.k2 if args.k2 is not None else scorer.k
        summary["mean_iterative_score"] = float(np.mean(iterative))
    if threshold is not None:
        summary["threshold"] = threshold
        summary["n_in"] = int(sum(v == "in" for v in verdicts))
        summary["n_out"] = int(sum(v == "out" for v in verdicts))
    _emit(summary, args.out)


def cmd_score(args) -> None:
    _score_command(args, require_threshold=False)


def cmd_classify(args) -> None:
    _score_command(args, require_threshold=True)


def cmd_shift(args) -> None:
    norm = NormKind.from_string(args.norm)
    clean = dataio.read_samples(args.clean, norm)
    poisoned = dataio.read_samples(args.poisoned, norm)
    if clean.dimension != poisoned.dimension:
        raise DimensionMismatchError(
            f"{args.clean} has dimension {clean.dimension} but "
            f"{args.poisoned} has {poisoned.dimension}"
        )
    sigmas = _parse_sigma_list(args.sigma)
    conditions = pooled_radius_family(clean, poisoned, args.k).indicators()
    table = shift.sweep_sigma(clean, poisoned, args.p, sigmas, conditions, q=args.q)
    doc = {
        "sigma": [s for s, _ in table],
        "ceiling": [c for _, c in table],
        "norm": norm.value,
        "k": args.k,
        "p": args.p,
        "q": args.q,
    }
    if args.simulate:
        rule = shift.fixed_accuracy_rule(clean, poisoned, args.p, args.q, seed=args.seed)
        doc["measured"] = [
            shift.simulate_accuracy(clean, poisoned, s, rule, args.simulate, seed=args.seed)
            for s in sigmas
        ]
        doc["n_simulated"] = args.simulate
        doc["seed"] = args.seed
    _emit(doc, args.out)


def cmd_eval(args) -> None:
    scores, labels = dataio.read_scores_and_labels(args.scores, args.labels)
    ls = metrics.LabeledScores(scores, labels)
    _emit(
        {
            "auroc": metrics.auroc(ls),
            "aupr": metrics.aupr(ls),
            "tpr95": metrics.tpr_at_in_rate(ls, args.in_rate),
            "n_pos": ls.n_pos,
            "n_neg": ls.n_neg,
        },
        args.out,
    )


def cmd_oracle(args) -> None:
    p = oracle.DiscreteDistribution.from_json_file(args.p)
    q = oracle.DiscreteDistribution.from_json_file(args.q)
    norm = NormKind.from_string(args.norm)
    joint = oracle.JointSupport.of(p, q)
    if args.radius:
        radii = [float(r) for r in args.radius]
    else:
        top = float(norms(joint.points, norm).max())
        radii = [top * j / args.k for j in range(1, args.k + 1)]
    conditions = [RadiusIndicator(r, norm) for r in radii]
    per_radius = []
    for g in conditions:
        entry = {
            "radius": g.radius,
            "delta_a": oracle.subset_variation(p, q, g),
        }
        try:
            entry["bound_domain_radius"] = oracle.subset_bound(p, q, g, norm, use_domain_radius=True)
        except DegenerateDomainError:
            entry["bound_domain_radius"] = None
        try:
            entry["bound_complement_radius"] = oracle.subset_bound(
                p, q, g, norm, use_domain_radius=False
            )
        except DegenerateDomainError:
            entry["bound_complement_radius"] = None
        per_radius.append(entry)
    try:
        family_bound = oracle.indicator_bound(p, q, conditions, norm)
    except DegenerateDomainError:
        family_bound = None
    _emit(
        {
            "overlap": oracle.overlap(p, q),
            "total_variation": oracle.total_variation(p, q),
            "norm": norm.value,
            "per_radius": per_radius,
            "indicator_bound": family_bound,
        },
        args.out,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overlapbound",
        description=(
            "Distribution-free overlap bounds, one-class confidence scoring, "
            "and shift accuracy ceilings from finite samples."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, k_default=50):
        p.add_argument("--norm", default="l2", help="l1, l2, or linf (default l2)")
        p.add_argument("--k", type=_positive_k, default=k_default,
                       help=f"number of nested-ball conditions (default {k_default})")
        p.add_argument("--out", default=None, help="write JSON here instead of stdout")

    p_bound = sub.add_parser("bound", help="overlap upper bound between two sample files")
    p_bound.add_argument("pos", help="first sample file (CSV or OVLB binary)")
    p_bound.add_argument("neg", help="second sample file")
    add_common(p_bound)
    p_bound.set_defaults(func=cmd_bound)

    p_fit = sub.add_parser("fit", help="fit a one-class scorer and save the model JSON")
    p_fit.add_argument("data", help="in-class sample file")
    p_fit.add_argument("--norm", default="l2", help="l1, l2, or linf (default l2)")
    p_fit.add_argument("--k", type=_positive_k, default=50,
                       help="number of nested-ball conditions (default 50)")
    p_fit.add_argument("--out", required=True, help="model JSON path")
    p_fit.set_defaults(func=cmd_fit)

    for name, func, needs_threshold in (
        ("score", cmd_score, False),
        ("classify", cmd_classify, True),
    ):
        p_sc = sub.add_parser(
            name,
            help=("score queries against a fitted model"
                  if name == "score"
                  else "score and threshold queries against a fitted model"),
        )
        p_sc.add_argument("model", help="model JSON from fit")
        p_sc.add_argument("queries", help="query sample file")
        p_sc.add_argument("--threshold", type=float, default=None,
                          required=needs_threshold,
                          help="in-class verdict cutoff (score >= threshold means in; "
                               "with --iterative the second-pass score decides)")
        p_sc.add_argument("--iterative", action="store_true",
                          help="add a second-pass score computed in score space")
        p_sc.add_argument("--fit-data", default=None,
                          help="original fit samples, required with --iterative")
        p_sc.add_argument("--k2", type=_positive_k, default=None,
                          help="condition count for the second pass (default: model k)")
        p_sc.add_argument("--scores-out", default=None,
                          help="per-query CSV path (default stdout)")
        p_sc.add_argument("--out", default=None, help="summary JSON path (default stdout)")
        p_sc.set_defaults(func=func)

    p_shift = sub.add_parser("shift", help="accuracy-ceiling sweep over mixture fractions")
    p_shift.add_argument("--clean", required=True, help="clean sample file")
    p_shift.add_argument("--poisoned", required=True, help="shifted/contaminated sample file")
    p_shift.add_argument("--p", type=float, required=True,
                         help="model accuracy on the clean distribution")
    p_shift.add_argument("--q", type=float, default=0.0,
                         help="model accuracy off the clean distribution (default 0)")
    p_shift.add_argument("--sigma", default="0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1",
                         help="comma-separated clean fractions to sweep")
    p_shift.add_argument("--simulate", type=int, default=0,
                         help="also measure accuracy on this many simulated test samples")
    p_shift.add_argument("--seed", type=int, default=0, help="seed for the simulator")
    add_common(p_shift)
    p_shift.set_defaults(func=cmd_shift)

    p_eval = sub.add_parser("eval", help="ranking metrics for scored, labeled data")
    p_eval.add_argument("scores",
                        help="CSV with score,label columns (or a score column with --labels)")
    p_eval.add_argument("--labels", default=None, help="separate one-column label file")
    p_eval.add_argument("--in-rate", type=float, default=0.95,
                        help="retained in-class fraction for the rejection metric (default 0.95)")
    p_eval.add_argument("--out", default=None, help="write JSON here instead of stdout")
    p_eval.set_defaults(func=cmd_eval)

    p_or = sub.add_parser("oracle", help="exact overlap quantities for two discrete distributions")
    p_or.add_argument("p", help="distribution JSON: {dimension, points, masses}")
    p_or.add_argument("q", help="distribution JSON")
    p_or.add_argument("--radius", action="append", default=None,
                      help="ball radius for the subset quantities (repeatable)")
    add_common(p_or, k_default=50)
    p_or.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DimensionMismatchError, DegenerateDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except MetricUndefinedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_METRIC
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
