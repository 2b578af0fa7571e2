"""Command-line interface.

Subcommands: construct, spectrum, distance, pack, exact-f, certify,
regime-map, verify. Exit codes: 0 ok, 1 a verification check failed,
2 usage / parse / validation error. All randomized subcommands are
deterministic given --seed; --threads only affects speed (CHROMA_THREADS is
the environment fallback).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import codes, colorings, fileio, graphs, regimes, spectral
from .errors import ChromaError


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} ({exc})")


def _emit(args, payload: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("CHROMA_THREADS")
    return max(1, int(env)) if env else 1


NAMED_BASES = {
    "k4": lambda: graphs.complete_graph(4),
    "k33": lambda: graphs.build_from_edges(
        6, [(i, 3 + j) for i in range(3) for j in range(3)],
        part_labels=[0, 0, 0, 1, 1, 1],
    ),
    "petersen": lambda: graphs.build_from_edges(
        10,
        [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
         (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
         (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)],
    ),
}


def cmd_construct(args) -> int:
    kind = args.kind
    seed = args.seed
    if kind == "complete":
        G = graphs.complete_graph(_require(args, "q"))
    elif kind == "cycle":
        G = graphs.cycle_graph(_require(args, "n"))
    elif kind == "tensor":
        G = graphs.tensor_power(_require(args, "q"), _require(args, "N"))
    elif kind == "gadget":
        base_ref = _require(args, "base")
        if base_ref in NAMED_BASES:
            base = NAMED_BASES[base_ref]()
        else:
            base = fileio.read_graph(base_ref)
        G = graphs.gadget_expand(base)
    elif kind == "random-bipartite":
        G = graphs.random_regular_bipartite(
            _require(args, "half"), _require(args, "d"), seed=seed
        )
    elif kind == "two-lift":
        base = fileio.read_graph(_require(args, "graph"))
        if args.signing:
            signing = fileio.read_signing(args.signing, base)
        elif args.search:
            signing, _ = graphs.search_low_lambda_signing(
                base, restarts=args.restarts, seed=seed
            )
        else:
            signing = graphs.Signing.all_plus(base)
        G = graphs.two_lift(base, signing)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown kind {kind}")
    sidecar = {"construct": kind, "seed": seed}
    if args.with_spectrum:
        sidecar["lambda2"] = spectral.lambda2(G)
    if args.out:
        fileio.write_graph(args.out, G, sidecar=sidecar)
    else:
        sys.stdout.write(fileio.graph_to_text(G))
    return 0


def _require(args, name: str):
    val = getattr(args, name, None)
    if val is None:
        raise ChromaError(f"construct {args.kind} requires --{name.replace('_', '-')}")
    return val


def cmd_spectrum(args) -> int:
    G = fileio.read_graph(args.graph)
    spec = spectral.full_spectrum(G)
    payload = {
        "eigenvalues": list(spec.eigenvalues),
        "lambda2": spec.eigenvalues[1] if G.n > 1 else None,
        "lambda_min": spec.eigenvalues[-1],
        "residual": spec.residual,
    }
    _emit(args, _json(payload))
    return 0


def cmd_distance(args) -> int:
    G = fileio.read_graph(args.graph)
    X = fileio.read_coloring(args.colorings[0], G, graph_path=args.graph)
    Y = fileio.read_coloring(args.colorings[1], G, graph_path=args.graph)
    dist, sigma = colorings.distance(X, Y)
    _emit(args, _json({"distance": dist, "sigma": list(sigma)}))
    return 0


def cmd_verify(args) -> int:
    G = fileio.read_graph(args.graph)
    members = [
        fileio.read_coloring(path, G, graph_path=args.graph)
        for path in args.colorings
    ]
    failures = []
    report = {"graph": G.graph_key, "n": G.n, "colorings": len(members)}
    proper = []
    for idx, X in enumerate(members):
        ok, edge = colorings.is_proper(G, X)
        proper.append({"index": idx, "proper": ok, "violating_edge": edge})
        if not ok:
            failures.append(f"coloring {idx} improper at edge {edge}")
    report["proper"] = proper
    if len(members) > 1:
        pair_dists = []
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                d, _ = colorings.distance(members[i], members[j])
                pair_dists.append({"pair": [i, j], "distance": d})
        report["distances"] = pair_dists
    if args.delta is not None:
        cs = codes.CodeSet(tuple(members), args.delta)
        res = codes.verify_delta_distinct(cs)
        report["delta"] = str(args.delta)
        report["threshold"] = codes.distance_threshold(args.delta, G.n)
        report["min_dist"] = res.min_dist
        report["delta_distinct"] = res.ok
        if not res.ok:
            failures.append(
                f"min distance {res.min_dist} below threshold at pair {res.worst_pair}"
            )
    report["ok"] = not failures
    if args.format == "json":
        _emit(args, _json(report))
    else:
        lines = [f"graph {G.graph_key}: n={G.n} d={G.d}"]
        for entry in report["proper"]:
            state = "proper" if entry["proper"] else f"IMPROPER at {entry['violating_edge']}"
            lines.append(f"coloring {entry['index']}: {state}")
        for entry in report.get("distances", []):
            lines.append(f"d(X{entry['pair'][0]}, X{entry['pair'][1]}) = {entry['distance']}")
        if args.delta is not None:
            lines.append(
                f"delta={report['delta']} threshold={report['threshold']} "
                f"min_dist={report['min_dist']} ok={report['delta_distinct']}"
            )
        lines.append("OK" if report["ok"] else "FAILED: " + "; ".join(failures))
        _emit(args, "\n".join(lines) + "\n")
    return 0 if report["ok"] else 1


def cmd_pack(args) -> int:
    G = fileio.read_graph(args.graph)
    q = args.q
    if args.sampler == "gadget":
        sampler = lambda s: colorings.sample_gadget_coloring(G, q, s)
    elif args.sampler == "biased":
        tau = float(args.tau) if args.tau is not None else 1.0 / (8 * G.d * G.d)
        sampler = lambda s: colorings.sample_bipartite_biased(G, q, tau, s)
    elif args.sampler == "enumerated":
        stream = colorings.enumerate_proper(G, q)

        def sampler(s):
            i = s[1]
            return stream[i] if i < len(stream) else None
    else:  # pragma: no cover
        raise ChromaError(f"unknown sampler {args.sampler}")
    code = codes.greedy_pack(
        G, sampler, args.delta, target=args.target, budget=args.budget,
        seed=args.seed, provenance={"sampler": args.sampler},
    )
    payload = fileio.codeset_payload(code, G.graph_key)
    _emit(args, _json(payload))
    return 0


def cmd_exact_f(args) -> int:
    G = fileio.read_graph(args.graph)
    size, witness = codes.exact_max_packing(G, args.q, args.delta)
    payload = {
        "size": size,
        "delta": str(args.delta),
        "q": args.q,
        "n": G.n,
        "proper_colorings": witness.provenance.get("colorings", 0),
        "witness_min_dist": witness.min_dist,
    }
    if args.with_witness:
        payload["witness"] = [list(X.colors) for X in witness.members]
    _emit(args, _json(payload))
    return 0


def cmd_certify(args) -> int:
    res = regimes.unique_regime_certificate(args.q, args.delta, args.lam)
    _emit(
        args,
        _json(
            {
                "q": args.q,
                "delta": str(args.delta),
                "lambda": str(Fraction(args.lam)),
                "certified": res.certified,
                "lhs": str(res.lhs),
                "rhs": str(res.rhs),
            }
        ),
    )
    return 0


def _load_sweep_config(path: str, cli_seed: int) -> regimes.SweepConfig:
    """Config JSON drives the sweep; its own "seed" key wins over --seed."""
    with open(path) as fh:
        raw = json.load(fh)
    families = tuple(
        regimes.SweepFamily(kind=f["kind"], params={k: v for k, v in f.items() if k != "kind"})
        for f in raw.get("families", [])
    )
    return regimes.SweepConfig(
        q=int(raw["q"]),
        delta_grid=tuple(Fraction(x) for x in raw.get("delta_grid", [])),
        lambda_grid=tuple(Fraction(x) for x in raw.get("lambda_grid", [])),
        families=families,
        seed=int(raw["seed"]) if "seed" in raw else cli_seed,
        budget=int(raw.get("budget", 400)),
        target=int(raw.get("target", 8)),
    )


def cmd_regime_map(args) -> int:
    config = _load_sweep_config(args.config, args.seed)
    skip: set[tuple[str, str]] = set()
    resuming = args.resume and args.out and os.path.exists(args.out)
    if resuming:
        with open(args.out) as fh:
            existing = fh.read()
        for line in existing.splitlines()[1:]:
            cells = line.split(",")
            if len(cells) >= 3:
                skip.add((cells[1], cells[2]))
        if existing and not existing.endswith("\n"):
            with open(args.out, "a") as fh:
                fh.write("\n")
    rows = regimes.regime_map_sweep(config, skip=skip, threads=_threads(args))
    if args.out:
        # stream rows so an interrupted sweep can be resumed
        mode = "a" if resuming else "w"
        with open(args.out, mode) as fh:
            if not resuming:
                fh.write(regimes.CSV_HEADER + "\n")
            for pt in rows:
                fh.write(regimes.regime_point_csv(pt) + "\n")
                fh.flush()
    else:
        sys.stdout.write(regimes.CSV_HEADER + "\n")
        for pt in rows:
            sys.stdout.write(regimes.regime_point_csv(pt) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chromacode",
        description="Expander-graph coloring codes: construction, distance, packing, regimes.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (speed only; CHROMA_THREADS fallback)")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a graph file")
    p.add_argument("kind", choices=(
        "complete", "cycle", "tensor", "gadget", "random-bipartite", "two-lift"))
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--base", help="gadget base: k4, k33, petersen, or a graph file")
    p.add_argument("--half", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--graph", help="base graph file for two-lift")
    p.add_argument("--signing", help="signing file for two-lift")
    p.add_argument("--search", action="store_true",
                   help="two-lift: search for a low-lambda2 signing")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--with-spectrum", action="store_true",
                   help="record lambda2 in the sidecar")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("spectrum", parents=[common], help="full normalized spectrum")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("distance", parents=[common],
                       help="permutation-invariant distance of two colorings")
    p.add_argument("--graph", required=True)
    p.add_argument("colorings", nargs=2)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("verify", parents=[common],
                       help="check properness, distances, delta-distinctness")
    p.add_argument("--graph", required=True)
    p.add_argument("colorings", nargs="+")
    p.add_argument("--delta", type=_fraction, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pack", parents=[common], help="greedy delta-distinct packing")
    p.add_argument("--graph", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta", type=_fraction, required=True)
    p.add_argument("--sampler", choices=("gadget", "biased", "enumerated"),
                   required=True)
    p.add_argument("--tau", type=_fraction, default=None)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--target", type=int, default=64)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("exact-f", parents=[common],
                       help="exact maximum packing on a tiny graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta", type=_fraction, required=True)
    p.add_argument("--with-witness", action="store_true")
    p.set_defaults(func=cmd_exact_f)

    p = sub.add_parser("certify", parents=[common],
                       help="unique-regime certificate at a single point")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta", type=_fraction, required=True)
    p.add_argument("--lambda", dest="lam", type=_fraction, required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("regime-map", parents=[common],
                       help="sweep a (delta, lambda) grid to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--resume", action="store_true",
                   help="skip grid points already present in --out")
    p.set_defaults(func=cmd_regime_map)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChromaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
