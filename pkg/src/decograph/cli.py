"""Command-line interface: ``decograph <subcommand> ...``.

Exit codes: 0 success (``test``: distinct), 3 ``test`` inconclusive,
2 validation or input error (a JSON error object is written to stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import bounds
from .errors import DecographError, ParseError
from .graphon import load_graph, load_graphon, sample_graphs, save_graph
from .motifs import empirical_density_measure, hom_density, hom_density_graphon, parse_motif
from .pipeline import FeatureConfig, extract_features, load_dataset, load_partition, loocv_predict, permutation_pvalue
from .spectral import CHANNELS, channel_measure, ensemble, feature_names, features_to_csv, format_number, truncate_features
from .transport import nested_wasserstein, wasserstein_1d

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_INCONCLUSIVE = 3


def _load_group(directory) -> list:
    paths = sorted(Path(directory).glob("*.json"))
    if not paths:
        raise ParseError(f"{directory}: no *.json graph files")
    return [load_graph(p) for p in paths]


def _parse_mode(mode: str):
    if mode == "spectral":
        return "spectral", None
    if mode.startswith("motif:"):
        return "motif", parse_motif(mode.split(":", 1)[1])
    raise ParseError(f"bad mode {mode!r}; expected motif:<F> or spectral")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def cmd_sample(args) -> int:
    D = load_graphon(args.graphon)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(args.n - 1)))
    for i, g in enumerate(sample_graphs(D, args.k, args.n, args.seed)):
        save_graph(g, out / f"graph_{i:0{width}d}.json")
    return EXIT_OK


def cmd_motif(args) -> int:
    G = load_graph(args.graph)
    print(format_number(hom_density(parse_motif(args.motif), G)))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    G = load_graph(args.graph)
    mu = channel_measure(G, args.channel)
    if args.r is None:
        order = np.argsort(mu.values, kind="stable")
        sys.stdout.write(_csv(["index", "value", "mass"],
                              [(i, float(mu.values[j]), float(mu.masses[j])) for i, j in enumerate(order)]))
    else:
        feats = truncate_features(mu, args.r, args.abs_order)
        sys.stdout.write(features_to_csv(feats[None, :], feature_names(args.r, args.channel)))
    return EXIT_OK


def _distance(mode, F, group_a, group_b, channel):
    if mode == "motif":
        return wasserstein_1d(empirical_density_measure(F, group_a), empirical_density_measure(F, group_b))
    return nested_wasserstein(ensemble(group_a, channel), ensemble(group_b, channel))


def cmd_distance(args) -> int:
    mode, F = _parse_mode(args.mode)
    a, b = _load_group(args.group_a), _load_group(args.group_b)
    print(format_number(_distance(mode, F, a, b, args.channel)))
    return EXIT_OK


def cmd_test(args) -> int:
    mode, F = _parse_mode(args.mode)
    a, b = _load_group(args.group_a), _load_group(args.group_b)
    if mode == "motif":
        report = bounds.equality_test_motif(a, b, F, c=args.c, threshold=args.threshold)
        report.params["motif"] = args.mode.split(":", 1)[1]
    else:
        report = bounds.equality_test_spectral(a, b, v=args.v, c=args.c, threshold=args.threshold,
                                               v_max=args.v_max, channel=args.channel)
    print(report.to_json())
    return EXIT_OK if report.distinct else EXIT_INCONCLUSIVE


def cmd_classify(args) -> int:
    ds = load_dataset(args.dataset)
    channels = args.channels.split(",") if args.channels else ds.channel_names
    kinds = args.kinds.split(",")
    partition = load_partition(args.partition) if args.partition else None
    config = FeatureConfig.build(channels, kinds, args.r, args.abs_order, partition)
    X, _ = extract_features(ds, config, standardize=False)
    y = ds.labels
    cv = loocv_predict(X, y, args.lam)
    p, _, _ = permutation_pvalue(X, y, args.lam, args.permutations, args.seed, observed=cv.accuracy)
    sys.stdout.write(_csv(["loocv_accuracy", "p_value", "n_permutations"],
                          [(cv.accuracy, p, args.permutations)]))
    log = _csv(["fold", "id", "label", "prediction", "correct"],
               [(i, it.id, int(it.label), int(cv.predictions[i]), int(cv.correct[i]))
                for i, it in enumerate(ds.items)])
    if args.fold_log:
        Path(args.fold_log).write_text(log)
    else:
        sys.stderr.write(log)
    return EXIT_OK


def cmd_experiment_concentration(args) -> int:
    D = load_graphon(args.graphon)
    F = parse_motif(args.motif)
    target = hom_density_graphon(F, D.expectation)
    samples = bounds.density_samples(D, [F], args.k, args.trials, args.seed)[:, 0]
    bound = bounds.concentration_bound(args.k, args.eps, F.v)
    sys.stdout.write(_csv(["trial", "statistic", "bound"],
                          [(i, float(abs(t - target)), bound) for i, t in enumerate(samples)]))
    return EXIT_OK


def cmd_experiment_mean_wasserstein(args) -> int:
    samples = bounds.uniform_wasserstein_samples(args.n, args.trials, args.seed)
    bound = bounds.mean_wasserstein_bound(args.n)
    sys.stdout.write(_csv(["trial", "statistic", "bound"],
                          [(i, float(s), bound) for i, s in enumerate(samples)]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decograph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample graphs from a (decorated) graphon")
    p.add_argument("--graphon", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("motif", help="homomorphism density of a motif")
    p.add_argument("--graph", required=True)
    p.add_argument("--motif", required=True)
    p.set_defaults(func=cmd_motif)

    p = sub.add_parser("spectrum", help="spectral atoms or truncated features")
    p.add_argument("--graph", required=True)
    p.add_argument("--channel", choices=CHANNELS, default="adjacency")
    p.add_argument("--r", type=int)
    p.add_argument("--abs-order", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    for name, func in (("distance", cmd_distance), ("test", cmd_test)):
        p = sub.add_parser(name)
        p.add_argument("--group-a", required=True)
        p.add_argument("--group-b", required=True)
        p.add_argument("--mode", required=True, help="motif:<F> or spectral")
        p.add_argument("--channel", choices=CHANNELS, default="adjacency")
        if name == "test":
            p.add_argument("--c", type=float, default=1.0)
            p.add_argument("--threshold", type=float, default=0.9)
            p.add_argument("--v", type=int)
            p.add_argument("--v-max", type=int, default=8)
        p.set_defaults(func=func)

    p = sub.add_parser("classify", help="LOOCV accuracy and permutation p-value")
    p.add_argument("--dataset", required=True)
    p.add_argument("--channels", help="comma-separated channel names (default: all)")
    p.add_argument("--kinds", default="laplacian", help="comma-separated: adjacency,laplacian,degree")
    p.add_argument("--r", type=int, default=10)
    p.add_argument("--lambda", dest="lam", type=float, default=0.1)
    p.add_argument("--permutations", type=int, default=99)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--partition")
    p.add_argument("--abs-order", action="store_true")
    p.add_argument("--fold-log")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("experiment", help="Monte Carlo checks of the concentration lemmas")
    exp = p.add_subparsers(dest="experiment", required=True)
    q = exp.add_parser("concentration")
    q.add_argument("--graphon", required=True)
    q.add_argument("--motif", required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--eps", type=float, required=True)
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_experiment_concentration)
    q = exp.add_parser("mean-wasserstein")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--trials", type=int, default=500)
    q.add_argument("--seed", type=int, default=0)
    q.set_defaults(func=cmd_experiment_mean_wasserstein)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DecographError, OSError, ValueError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
