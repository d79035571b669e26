"""Command-line front end.

Reads a JSON spec document, dispatches to the library, and emits a
machine-readable result (JSON envelope or CSV with '#' metadata lines).
Output is byte-identical for identical (command, input, seed, workers):
no timestamps, no environment leakage, floats printed at 12 significant
digits in CSV and full repr in JSON.

Exit codes: 0 success, 1 schema/domain violation, 2 inconclusive verdict.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .copula import copula_from_json, copula_sample
from .dist import check_order, dist_from_json
from .errors import Inconclusive, SpcopError, SpecError
from .oracle import run_verification
from .precedence import best_eta_report, classify, sp_level
from .rng import resolve_workers
from .tba import Prospect, rank_prospects

__all__ = ["main", "run", "RunConfig"]

_COMMANDS = ("eta", "xi", "classify", "order", "rank", "sample", "verify", "curve")


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation; the seed is always recorded in the output."""

    command: str
    spec_path: Optional[str]
    samples: int = 10 ** 6
    seed: int = 0
    tol: float = 1e-9
    output: str = "json"
    grid: int = 512
    workers: int = 1
    gamma: Optional[float] = None
    relation: str = "st"

    @staticmethod
    def from_args(args) -> "RunConfig":
        return RunConfig(args.command, args.spec, args.samples, args.seed,
                         args.tol, args.output, args.grid, args.workers,
                         args.gamma, args.relation)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _load_doc(path):
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read spec document {path}: {exc}") from exc


def _need(doc, key):
    if key not in doc:
        raise SpecError(f"input document is missing {key!r}")
    return doc[key]


def _marginals(doc):
    has1, has2 = "g1" in doc, "g2" in doc
    if has1 != has2:
        raise SpecError("provide both marginals g1 and g2, or neither")
    if not has1:
        return None, None
    return dist_from_json(doc["g1"]), dist_from_json(doc["g2"])


def _envelope(args, result, method=None):
    out = {
        "command": args.command,
        "tool_version": __version__,
        "seed": args.seed,
        "samples": args.samples,
        "workers": resolve_workers(args.workers),
    }
    if method is not None:
        out["method"] = method
    out["result"] = result
    return out


def _emit_json(stream, envelope):
    stream.write(json.dumps(envelope, indent=2))
    stream.write("\n")


def _emit_csv(stream, args, rows, method=None):
    stream.write(f"# command={args.command}\n")
    stream.write(f"# tool_version={__version__}\n")
    stream.write(f"# seed={args.seed}\n")
    stream.write(f"# samples={args.samples}\n")
    stream.write(f"# workers={resolve_workers(args.workers)}\n")
    if method is not None:
        stream.write(f"# method={method}\n")
    for row in rows:
        stream.write(",".join(_fmt(c) for c in row))
        stream.write("\n")


def _cmd_eta(args, doc, stream):
    spec = copula_from_json(_need(doc, "copula"))
    g1, g2 = _marginals(doc)
    report = best_eta_report(spec, g1, g2, n=args.samples, seed=args.seed,
                             tol=args.tol, workers=resolve_workers(args.workers))
    result = report.to_json()
    exit_code = 0
    if args.gamma is not None and g1 is not None:
        try:
            level = sp_level(spec, g1, g2, args.gamma, n=args.samples,
                             seed=args.seed, workers=resolve_workers(args.workers))
            result["sp_level"] = {"gamma": args.gamma, "holds": level.holds}
        except Inconclusive as exc:
            result["sp_level"] = {"gamma": args.gamma, "holds": None,
                                  "inconclusive": str(exc)}
            exit_code = 2
    if args.output == "csv":
        keys = list(result.keys())
        flat = {k: (json.dumps(v) if isinstance(v, dict) else v) for k, v in result.items()}
        _emit_csv(stream, args, [keys, [flat[k] for k in keys]], method=report.method)
    else:
        _emit_json(stream, _envelope(args, result, method=report.method))
    return exit_code


def _cmd_classify(args, doc, stream):
    spec = copula_from_json(_need(doc, "copula"))
    if args.gamma is None:
        raise SpecError("classify needs --gamma")
    verdict = classify(spec, args.gamma, tol=args.tol)
    if args.output == "csv":
        d = verdict.to_json()
        _emit_csv(stream, args, [list(d.keys()), list(d.values())], method="closed_form")
    else:
        _emit_json(stream, _envelope(args, verdict.to_json(), method="closed_form"))
    return 0


def _cmd_order(args, doc, stream):
    g1 = dist_from_json(_need(doc, "g1"))
    g2 = dist_from_json(_need(doc, "g2"))
    res = check_order(args.relation, g1, g2, grid=args.grid)
    result = {"relation": res.relation, "holds": res.holds,
              "witness": res.witness, "grid_size": res.grid_size}
    if args.output == "csv":
        _emit_csv(stream, args, [list(result.keys()), list(result.values())],
                  method="order_check")
    else:
        _emit_json(stream, _envelope(args, result, method="order_check"))
    return 0


def _cmd_rank(args, doc, stream):
    target = dist_from_json(_need(doc, "target"))
    prospects = [Prospect.from_json(p) for p in _need(doc, "prospects")]
    table = rank_prospects(target, prospects, n=args.samples, seed=args.seed,
                           workers=resolve_workers(args.workers))
    if args.output == "csv":
        _emit_csv(stream, args, table.to_csv_rows(), method="ranking")
    else:
        _emit_json(stream, _envelope(args, table.to_json(), method="ranking"))
    return 0


def _cmd_sample(args, doc, stream):
    spec = copula_from_json(_need(doc, "copula"))
    samples = copula_sample(spec, args.seed, args.samples,
                            workers=resolve_workers(args.workers))
    if args.output == "json":
        rows = [{"u": s.u, "v": s.v, "component": s.component,
                 "structural_tie": s.structural_tie} for s in samples]
        _emit_json(stream, _envelope(args, rows, method="philox_sampler"))
    else:
        body = [["u", "v", "component", "structural_tie"]]
        body += [[s.u, s.v, s.component, s.structural_tie] for s in samples]
        _emit_csv(stream, args, body, method="philox_sampler")
    return 0


def _cmd_verify(args, doc, stream):
    report = run_verification(n=args.samples, seed=args.seed)
    if args.output == "csv":
        body = [["check", "passed"]]
        body += [[c["name"], c["passed"]] for c in report["checks"]]
        _emit_csv(stream, args, body, method="oracle_suite")
    else:
        _emit_json(stream, _envelope(args, report, method="oracle_suite"))
    return 0


def _cmd_curve(args, doc, stream):
    family = _need(doc, "family")
    g1, g2 = _marginals(doc)
    if "values" in doc:
        values = [float(x) for x in doc["values"]]
    else:
        start = float(_need(doc, "start"))
        stop = float(_need(doc, "stop"))
        step = float(_need(doc, "step"))
        count = int(round((stop - start) / step)) + 1
        values = [round(start + i * step, 12) + 0.0 for i in range(count)]
    if family == "gaussian":
        param = "rho"
        specs = [copula_from_json({"node": "gaussian", "rho": x}) for x in values]
    elif family == "shuffle":
        param = "gamma"
        specs = [copula_from_json({"node": "shuffle", "gamma": x}) for x in values]
    else:
        raise SpecError(f"curve supports gaussian and shuffle families, not {family!r}")
    rows = [[param, "eta", "xi", "method"]]
    json_rows = []
    for x, spec in zip(values, specs):
        rep = best_eta_report(spec, g1, g2, n=args.samples, seed=args.seed,
                              tol=args.tol, workers=resolve_workers(args.workers))
        rows.append([x, rep.eta, rep.xi, rep.method])
        json_rows.append({param: x, "eta": rep.eta, "xi": rep.xi, "method": rep.method})
    if args.output == "json":
        _emit_json(stream, _envelope(args, json_rows, method="curve"))
    else:
        _emit_csv(stream, args, rows, method="curve")
    return 0


_DISPATCH = {
    "eta": _cmd_eta, "xi": _cmd_eta, "classify": _cmd_classify,
    "order": _cmd_order, "rank": _cmd_rank, "sample": _cmd_sample,
    "verify": _cmd_verify, "curve": _cmd_curve,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spcop",
        description="Stochastic precedence and tie mass for bivariate copulas")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--spec", default=None, help="path to the JSON input document")
        p.add_argument("--samples", type=int, default=10 ** 6)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--grid", type=int, default=512)
        p.add_argument("--output", choices=("json", "csv"), default="json")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--gamma", type=float, default=None)
        p.add_argument("--relation", choices=("st", "hr", "lr"), default="st")
    return parser


def run(argv, stream) -> int:
    args = _build_parser().parse_args(argv)
    config = RunConfig.from_args(args)
    if config.command != "verify" and config.spec_path is None:
        raise SpecError(f"{config.command} needs --spec <path>")
    doc = _load_doc(config.spec_path)
    return _DISPATCH[config.command](config, doc, stream)


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    buffer = io.StringIO()
    try:
        code = run(argv, buffer)
    except SpecError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except Inconclusive as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return 2
    except SpcopError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    sys.stdout.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
