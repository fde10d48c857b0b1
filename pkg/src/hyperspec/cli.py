"""Command-line front end.

Exit codes: 0 success, 1 a check or iteration failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import hypergraph as hg
from .spectral import (
    PowerIterationConfig,
    SpectralError,
    laplacian_rho_eigenpair,
    power_rho,
    zero_q_eigenvector,
)
from .tensor import EdgeListOperator, TensorError, dump_tensor, hypergraph_tensor
from .verify import SuiteConfig, run_suite


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _power_cfg(args) -> PowerIterationConfig:
    try:
        return PowerIterationConfig(tol=args.tol, max_iter=args.max_iter, shift=args.shift)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _text(d: dict) -> str:
    return "".join(f"{k}: {v}\n" for k, v in d.items())


def _format(d: dict, fmt: str) -> str:
    if fmt == "text":
        return _text(d)
    if fmt == "csv":
        return "key,value\n" + "".join(f"{k},{json.dumps(v)}\n" for k, v in d.items())
    return _json(d)


def cmd_info(args) -> int:
    G = hg.read_hypergraph(args.file)
    connected, labels = hg.is_connected(G)
    deg = hg.degrees(G)
    info = {
        "n": G.n,
        "k": G.k,
        "edges": G.num_edges,
        "degrees": [int(d) for d in deg],
        "connected": connected,
        "components": int(labels.max()) + 1,
        "isolated_vertices": [int(i) + 1 for i in np.flatnonzero(deg == 0)],
        "hash": G.digest(),
    }
    _emit(_format(info, args.format), args.out)
    return 0


def cmd_oddbip(args) -> int:
    G = hg.read_hypergraph(args.file)
    _emit(_format(hg.odd_bipartition(G).to_dict(), args.format), args.out)
    return 0


def cmd_tensor(args) -> int:
    G = hg.read_hypergraph(args.file)
    _emit(dump_tensor(hypergraph_tensor(G, args.which, args.entry_cap)), args.out)
    return 0


def cmd_rho(args) -> int:
    G = hg.read_hypergraph(args.file)
    res = power_rho(EdgeListOperator(G, args.which), _power_cfg(args))
    _emit(_format(res.to_dict(), args.format), args.out)
    return 0 if res.converged else 1


def _certificate(G):
    cert = hg.odd_bipartition(G)
    if not cert.is_certificate:
        raise UsageError(f"unsupported: hypergraph is not odd-bipartite ({cert.reason or 'GF(2) system inconsistent'})")
    return cert


def cmd_lrho(args) -> int:
    G = hg.read_hypergraph(args.file)
    cert = _certificate(G)
    if not hg.is_connected(G)[0]:
        raise UsageError("unsupported: hypergraph is not connected")
    res = laplacian_rho_eigenpair(G, cert, _power_cfg(args))
    _emit(_format(res.to_dict(), args.format), args.out)
    return 0 if res.converged else 1


def cmd_zeroeig(args) -> int:
    G = hg.read_hypergraph(args.file)
    pair = zero_q_eigenvector(G, _certificate(G))
    _emit(_format(pair.to_dict(), args.format), args.out)
    return 0


def cmd_product(args) -> int:
    G, H = hg.read_hypergraph(args.file_g), hg.read_hypergraph(args.file_h)
    _emit(hg.cartesian_product(G, H).serialize(), args.out)
    return 0


def cmd_gen(args) -> int:
    kind = {"random": "uniform-random", "oddbip": "odd-bipartite"}[args.kind]
    gen = hg.generate(kind, args.n, args.k, args.m, args.seed, attempts=args.attempts)
    _emit(gen.graph.serialize(gen.comments()), args.out)
    if not gen.connected:
        print(f"warning: no connected instance within {args.attempts} attempts", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    data = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    for key, flag in (("tol", "tol"), ("max_iter", "max_iter"), ("shift", "shift"), ("entry_cap", "entry_cap")):
        if getattr(args, flag) is not None and getattr(args, f"{flag}_given", False):
            data[key] = getattr(args, flag)
    try:
        cfg = SuiteConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad config: {exc}") from None
    report = run_suite(cfg)
    text = {"json": report.to_json, "csv": report.to_csv, "text": report.to_text}[args.format]()
    _emit(text, args.out)
    return 0 if report.overall else 1


class _Track(argparse.Action):
    """Store the value and remember that the flag was given explicitly."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, f"{self.dest}_given", True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-10, action=_Track)
    common.add_argument("--max-iter", type=int, default=100_000, action=_Track)
    common.add_argument("--shift", type=float, default=1.0, action=_Track)
    common.add_argument("--entry-cap", type=int, default=None, action=_Track,
                        help="dense tensor entry cap (default: $HYPERSPEC_ENTRY_CAP or 1e8)")

    p = argparse.ArgumentParser(prog="hyperspec", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", parents=[common], help="n, k, |E|, degrees, connectivity")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("oddbip", parents=[common], help="odd-bipartition certificate or witness")
    s.add_argument("file")
    s.set_defaults(func=cmd_oddbip)

    s = sub.add_parser("tensor", parents=[common], help="dump a hypergraph tensor")
    s.add_argument("file")
    s.add_argument("--which", choices=["A", "D", "L", "Q"], required=True)
    s.set_defaults(func=cmd_tensor)

    s = sub.add_parser("rho", parents=[common], help="spectral radius of A or Q")
    s.add_argument("file")
    s.add_argument("--which", choices=["A", "Q"], required=True)
    s.set_defaults(func=cmd_rho)

    s = sub.add_parser("lrho", parents=[common], help="Laplacian spectral radius (odd-bipartite only)")
    s.add_argument("file")
    s.set_defaults(func=cmd_lrho)

    s = sub.add_parser("zeroeig", parents=[common], help="null vector of Q (odd-bipartite only)")
    s.add_argument("file")
    s.set_defaults(func=cmd_zeroeig)

    s = sub.add_parser("product", parents=[common], help="Cartesian product of two hypergraphs")
    s.add_argument("file_g")
    s.add_argument("file_h")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("gen", parents=[common], help="seeded random hypergraph")
    s.add_argument("--kind", choices=["random", "oddbip"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--attempts", type=int, default=hg.DEFAULT_ATTEMPTS)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("verify", parents=[common], help="run the verification suite")
    s.add_argument("--config", help="JSON file with suite settings")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hyperspec: {exc}", file=sys.stderr)
        return 2
    except (OSError, hg.HypergraphError, hg.GenerationError, TensorError, SpectralError) as exc:
        print(f"hyperspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
