"""Command-line front end.

Commands print exactly one machine-readable payload (JSON or CSV) on
stdout; every diagnostic goes to stderr. Exit codes: 0 success, 2 input
or parse problem, 3 domain or parameter problem, 4 output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .classify import evaluate, load_dataset
from .config import (
    INFINITE,
    CostTransform,
    Hamiltonian,
    OutputFormat,
    PairTopology,
    RunConfig,
    horizon_token,
    split_seed,
)
from .divergence import graph_qjsd, node_pair_qjsd
from .errors import (
    AttributeMismatchError,
    DomainError,
    FormatError,
    NumericalError,
    ParameterError,
    ShapeError,
)
from .graph import Graph, load_attributes, load_graph, perturb, save_graph, synth_prototype
from .matching import hungarian

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_IO = 4


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _workers() -> int | None:
    raw = os.environ.get("QWALK_THREADS")
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ParameterError(f"QWALK_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ParameterError(f"QWALK_THREADS must be at least 1, got {value}")
    return value


def _config_from(args) -> RunConfig:
    horizon = INFINITE if getattr(args, "time", None) is None else args.time
    if getattr(args, "infinite", False):
        horizon = INFINITE
    return RunConfig(
        hamiltonian=Hamiltonian(args.hamiltonian),
        horizon=horizon,
        sigma=args.sigma,
        cost_transform=CostTransform(getattr(args, "cost", "one-minus-qjsd")),
        pair_topology=PairTopology(getattr(args, "pair_topology", "single")),
        seed=args.seed,
        output_format=OutputFormat(args.format),
    )


def _load_input(path: str, fmt: str, attrs: str | None) -> Graph:
    g = load_graph(path, fmt)
    if attrs is not None:
        attributes = load_attributes(attrs, g.n)
        g = Graph(g.weights, attributes=attributes, label=g.label)
    return g


def _parse_times(raw: str) -> list[float]:
    times = []
    for token in raw.split(","):
        token = token.strip()
        if token.lower() in ("inf", "infinite"):
            times.append(INFINITE)
            continue
        try:
            value = float(token)
        except ValueError:
            raise ParameterError(f"bad time value {token!r} in --times") from None
        if not value > 0:
            raise ParameterError(f"times must be positive, got {token!r}")
        times.append(value)
    if not times:
        raise ParameterError("--times must list at least one value")
    return times


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_sim(args) -> int:
    config = _config_from(args)
    a = _load_input(args.graph_a, args.input_format, args.attrs_a)
    b = _load_input(args.graph_b, args.input_format, args.attrs_b)
    report = graph_qjsd(a, b, config.horizon, config)
    if config.output_format is OutputFormat.CSV:
        d = report.to_dict()
        _emit("value,entropy_mixture,entropy_rho,entropy_sigma,time_horizon\n"
              + ",".join([_fmt(d["value"]), _fmt(d["entropy_mixture"]),
                          _fmt(d["entropy_rho"]), _fmt(d["entropy_sigma"]),
                          str(d["time_horizon"])]))
    else:
        _emit(json.dumps(report.to_dict()))
    return EXIT_OK


def cmd_match(args) -> int:
    config = _config_from(args)
    workers = _workers()
    a = _load_input(args.graph_a, args.input_format, args.attrs_a)
    b = _load_input(args.graph_b, args.input_format, args.attrs_b)
    horizons = _parse_times(args.times) if args.times else [config.horizon]

    tables = [(t, node_pair_qjsd(a, b, t, config, workers=workers))
              for t in horizons]
    known = {t: table for t, table in tables}
    base = known.get(config.horizon)
    if base is None:
        base = node_pair_qjsd(a, b, config.horizon, config, workers=workers)
    if config.cost_transform is CostTransform.RAW_QJSD:
        assignment = hungarian(base)
    else:
        assignment = hungarian(1.0 - base)

    if config.output_format is OutputFormat.CSV:
        assigned = set(assignment.pairs)
        lines = ["time_horizon,u,v,qjsd,assigned"]
        for t, table in tables:
            flag_horizon = (t == config.horizon
                            or (math.isinf(t) and math.isinf(config.horizon)))
            for u in range(table.shape[0]):
                for v in range(table.shape[1]):
                    flag = 1 if flag_horizon and (u, v) in assigned else 0
                    lines.append(f"{horizon_token(t)},{u},{v},"
                                 f"{_fmt(table[u, v])},{flag}")
        _emit("\n".join(lines))
    else:
        payload = {
            "matrices": [{"time_horizon": horizon_token(t),
                          "qjsd": [[float(x) for x in row] for row in table]}
                         for t, table in tables],
            "assignment": assignment.to_dict(),
            "assignment_horizon": horizon_token(config.horizon),
        }
        _emit(json.dumps(payload))
    return EXIT_OK


def cmd_noise_curve(args) -> int:
    config = _config_from(args)
    g = _load_input(args.graph, args.input_format, None)
    max_k, trials = args.max_k, args.trials
    if max_k < 0:
        raise ParameterError(f"--max-k must be nonnegative, got {max_k}")
    if trials < 1:
        raise ParameterError(f"--trials must be at least 1, got {trials}")
    if max_k > g.n * (g.n - 1) // 2:
        raise ParameterError(f"--max-k {max_k} exceeds the number of node pairs")

    seeds = split_seed(config.seed, (max_k + 1) * trials)
    rows = []
    for k in range(max_k + 1):
        values = []
        for i in range(trials):
            noisy = perturb(g, k, seeds[k * trials + i])
            values.append(graph_qjsd(g, noisy, config.horizon, config).value)
        rows.append((k, float(np.mean(values)), float(np.std(values))))

    if config.output_format is OutputFormat.JSON:
        _emit(json.dumps({"rows": [{"k": k, "mean_qjsd": mean, "stddev": std}
                                   for k, mean, std in rows]}))
    else:
        lines = ["k,mean_qjsd,stddev"]
        lines += [f"{k},{_fmt(mean)},{_fmt(std)}" for k, mean, std in rows]
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    config = _config_from(args)
    data = load_dataset(args.manifest)
    report = evaluate(data, args.split, args.k, config.seed)
    if config.output_format is OutputFormat.CSV:
        lines = ["label," + ",".join(report.labels)]
        for i, label in enumerate(report.labels):
            lines.append(label + "," + ",".join(str(int(c))
                                                for c in report.confusion[i]))
        _emit("\n".join(lines))
    else:
        _emit(json.dumps(report.to_dict()))
    return EXIT_OK


def cmd_gen(args) -> int:
    config = _config_from(args)
    if args.count < 0:
        raise ParameterError(f"--count must be nonnegative, got {args.count}")
    label = args.label if args.label else f"n{args.n}"
    prototype = synth_prototype(args.n, args.p, config.seed)
    seeds = split_seed(config.seed, max(args.count, 1))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    files = [("prototype.edg", prototype)]
    for i in range(args.count):
        files.append((f"variant_{i:03d}.edg", perturb(prototype, args.noise, seeds[i])))
    for name, graph in files:
        save_graph(graph, out_dir / name)
    manifest_lines = ["path,label"] + [f"{name},{label}" for name, _ in files]
    (out_dir / "manifest.csv").write_text("\n".join(manifest_lines) + "\n",
                                          encoding="utf-8")
    _emit(json.dumps({"label": label, "manifest": "manifest.csv",
                      "files": [name for name, _ in files]}))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser, graphs: int = 0,
                attrs: bool = False) -> None:
    if graphs == 1:
        parser.add_argument("graph", help="graph file")
    elif graphs == 2:
        parser.add_argument("graph_a", help="first graph file")
        parser.add_argument("graph_b", help="second graph file")
    horizon = parser.add_mutually_exclusive_group()
    horizon.add_argument("--time", type=float, default=None, metavar="T",
                         help="finite averaging time (default: infinite)")
    horizon.add_argument("--infinite", action="store_true",
                         help="use the long-time average (default)")
    parser.add_argument("--hamiltonian", choices=["laplacian", "adjacency"],
                        default="laplacian", help="walk generator")
    parser.add_argument("--sigma", type=float, default=1.0,
                        help="attribute kernel bandwidth")
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--format", choices=["json", "csv"], default="json",
                        help="stdout payload format")
    parser.add_argument("--input-format", choices=["edgelist", "matrix"],
                        default="edgelist", help="graph file layout")
    if attrs:
        parser.add_argument("--attrs-a", default=None, metavar="FILE",
                            help="attribute sidecar for the first graph")
        parser.add_argument("--attrs-b", default=None, metavar="FILE",
                            help="attribute sidecar for the second graph")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Graph similarity from continuous-time quantum walks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sim", help="divergence between two graphs")
    _add_common(p, graphs=2, attrs=True)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("match", help="node-pair divergence table and optimal assignment")
    _add_common(p, graphs=2, attrs=True)
    p.add_argument("--times", default=None, metavar="T1,T2,...",
                   help="emit one table per averaging time ('inf' allowed)")
    p.add_argument("--cost", choices=["one-minus-qjsd", "raw"],
                   default="one-minus-qjsd", help="assignment cost transform")
    p.add_argument("--pair-topology", choices=["single", "full"],
                   default="single", dest="pair_topology",
                   help="inter-edge layout for per-pair scores")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("noise-curve",
                       help="mean divergence against edge-flip count")
    _add_common(p, graphs=1)
    p.add_argument("--max-k", type=int, required=True, dest="max_k",
                   help="largest edge-flip count")
    p.add_argument("--trials", type=int, default=20,
                   help="perturbations per flip count")
    p.set_defaults(func=cmd_noise_curve, format_default="csv")

    p = sub.add_parser("classify", help="k-NN evaluation over a manifest")
    p.add_argument("manifest", help="CSV manifest with header path,label")
    p.add_argument("--k", type=int, default=1, help="neighbor count")
    p.add_argument("--split", type=float, default=0.5,
                   help="training fraction of each class")
    p.add_argument("--seed", type=int, default=0, help="shuffle seed")
    p.add_argument("--format", choices=["json", "csv"], default="json",
                   help="json report or csv confusion matrix")
    p.set_defaults(func=cmd_classify, hamiltonian="laplacian", sigma=1.0,
                   time=None, infinite=False)

    p = sub.add_parser("gen", help="write a prototype graph, noisy variants, "
                                   "and a manifest")
    p.add_argument("--n", type=int, required=True, help="node count")
    p.add_argument("--p", type=float, required=True, help="edge probability")
    p.add_argument("--noise", type=int, required=True,
                   help="edge flips per variant")
    p.add_argument("--count", type=int, required=True,
                   help="number of noisy variants")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--label", default=None, help="class label (default: n<N>)")
    p.set_defaults(func=cmd_gen, hamiltonian="laplacian", sigma=1.0,
                   time=None, infinite=False, format="json")

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    # noise-curve defaults to CSV, which is its natural plot-ready shape
    if getattr(args, "format_default", None) == "csv" and "--format" not in (
            argv if argv is not None else sys.argv):
        args.format = "csv"
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"qwalk: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ParameterError, ShapeError, AttributeMismatchError,
            NumericalError, IndexError) as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"qwalk: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())
