"""Exact symbolic computation in graph C*-algebras from the command line.

Every subcommand builds one report document; ``--format json`` prints it as
JSON, ``--format text`` as indented ``key: value`` lines with the same exact
fraction strings.  Exit codes: 0 success, 2 a criterion's hypothesis does not
apply, 1 error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from typing import Any

from . import __version__
from . import algebra as alg
from . import conjugacy as cj
from . import endo as en
from .config import EngineConfig
from .formatting import format_element
from .graph import check_standing_assumptions
from .parsing import ParseError, load_graph, parse_element, parse_word

EXIT_OK, EXIT_ERROR, EXIT_INAPPLICABLE = 0, 1, 2


def _el(x) -> str:
    return format_element(alg.reduce(x))


def build_report(command: str, args: dict, graph, result: dict) -> dict:
    return {
        "command": {"name": command, "arguments": args},
        "graph": graph.summary() if graph is not None else None,
        "result": result,
        "engine_version": __version__,
        "exact_arithmetic": True,
        "convention": en.CONVENTION,
    }


def render_text(doc: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k, v in doc.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
    else:
        lines.append(pad + _scalar_text(doc))
    return "\n".join(lines)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(i, (dict, list)) for i in v)


def _scalar_text(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar_text(i) for i in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


# subcommands; each returns (exit code, result payload)


def cmd_check_graph(ns, g, cfg):
    rep = check_standing_assumptions(g)
    return (EXIT_OK if rep.ok else EXIT_INAPPLICABLE), rep.to_dict()


def cmd_eval(ns, g, cfg):
    x = parse_element(ns.expr, g)
    return EXIT_OK, {
        "element": _el(x),
        "degrees": x.degrees(),
        "unitary": alg.is_unitary(x),
        "projection": alg.is_projection(x),
        "in_U_E": alg.membership(x, "U_E"),
        "in_B": alg.membership(x, "B"),
    }


def _endo(ns, g, cfg) -> en.Endomorphism:
    return en.make_endo(parse_element(ns.u, g), cfg)


def cmd_endo_apply(ns, g, cfg):
    e = _endo(ns, g, cfg)
    x = parse_element(ns.x, g)
    return EXIT_OK, {"u": _el(e.u), "x": _el(x), "image": _el(e.apply(x))}


def cmd_masa_check(ns, g, cfg):
    v = cj.masa_check(parse_element(ns.u, g), depth=ns.depth, config=cfg)
    code = EXIT_INAPPLICABLE if v.verdict is cj.Verdict.INAPPLICABLE else EXIT_OK
    return code, v.to_dict()


def cmd_trace_scan(ns, g, cfg):
    rep = cj.ratio_scan(_endo(ns, g, cfg), ns.L, workers=ns.workers)
    return EXIT_OK, rep.to_dict()


def cmd_family(ns, g, cfg):
    e = _endo(ns, g, cfg)
    seed = parse_word(ns.seed, g)
    period = parse_word(ns.period, g)
    if not period.edges:
        raise ValueError("--period must be a non-empty word")
    fam = cj.family_ratio(e, seed, period, ns.K)
    return EXIT_OK, fam.to_dict()


def cmd_inverse(ns, g, cfg):
    e = _endo(ns, g, cfg)
    inv = en.inverse_search(e, ns.K)
    return EXIT_OK, {
        "found": inv is not None,
        "inverse": None if inv is None else _el(inv.u),
        "involution": inv is not None and en.same_endomorphism(inv, e),
        "searched_levels": ns.K,
        "note": "no inverse found within the bound" if inv is None else "verified on generators",
    }


def cmd_fourier(ns, g, cfg):
    u = parse_element(ns.u, g)
    dec = en.fourier_decompose(u, ns.base)
    out: dict[str, Any] = {
        "base_isometry": dec.base_isometry,
        "components": {str(j): _el(x) for j, x in sorted(dec.components.items())},
        "core_factors": {str(j): _el(x) for j, x in sorted(dec.core_factors.items())},
    }
    code = EXIT_OK
    if ns.dk:
        try:
            out["dk"] = {str(k): _el(d) for k, d in cj.dk_family(u, extra_depth=ns.depth or 0)}
        except cj.HypothesisError as exc:
            out["dk"] = None
            out["dk_refused"] = str(exc)
            code = EXIT_INAPPLICABLE
    return code, out


COMMANDS = {
    "check-graph": cmd_check_graph,
    "eval": cmd_eval,
    "endo-apply": cmd_endo_apply,
    "masa-check": cmd_masa_check,
    "trace-scan": cmd_trace_scan,
    "family": cmd_family,
    "inverse": cmd_inverse,
    "fourier": cmd_fourier,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS,
                        help="sanity-check depth (masa-check) or extra depth (fourier --dk)")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="cstar-graph", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name, help):
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.add_argument("-g", "--graph", required=True, help="graph file, or cuntzN shorthand")
        return sp

    sp = sub.add_parser("check-graph", help="standing assumptions of a graph", parents=[common])
    sp.add_argument("file")

    sp = graph_cmd("eval", "parse and normalise an element")
    sp.add_argument("expr")

    sp = graph_cmd("endo-apply", "apply lambda_u to an element")
    sp.add_argument("-u", required=True)
    sp.add_argument("-x", required=True)

    sp = graph_cmd("masa-check", "quasi-free MASA criterion for u")
    sp.add_argument("-u", required=True)

    sp = graph_cmd("trace-scan", "exact trace-ratio scan over words (O_n)")
    sp.add_argument("-u", required=True)
    sp.add_argument("-L", type=int, required=True)

    sp = graph_cmd("family", "trace ratios along P_{seed period^k} (O_n)")
    sp.add_argument("-u", required=True)
    sp.add_argument("--seed", default="")
    sp.add_argument("--period", required=True)
    sp.add_argument("-K", type=int, required=True)

    sp = graph_cmd("inverse", "bounded search for a word-unitary inverse (O_n)")
    sp.add_argument("-u", required=True)
    sp.add_argument("-K", type=int, required=True)

    sp = graph_cmd("fourier", "gauge Fourier decomposition of u (O_n)")
    sp.add_argument("-u", required=True)
    sp.add_argument("--base", default="1", help="generator S_v used to factor the components")
    sp.add_argument("--dk", action="store_true", help="also extract the d_k projections")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    cfg = EngineConfig(workers=ns.workers)
    if ns.depth is not None:
        cfg = dataclasses.replace(cfg, masa_depth=ns.depth)
    args = {k: v for k, v in vars(ns).items() if k not in ("command", "verbose")}
    try:
        if ns.command == "check-graph":
            g = load_graph(ns.file)
        else:
            g = load_graph(ns.graph)
        code, result = COMMANDS[ns.command](ns, g, cfg)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    doc = build_report(ns.command, args, g, result)
    if ns.format == "json":
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(render_text(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
