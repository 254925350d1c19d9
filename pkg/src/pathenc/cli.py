"""Command-line interface.

Subcommands:

* ``optimize``   synthesize a transfer pulse and write pulse.csv plus a
                 convergence report
* ``analyze``    run the encoding/decoding pipeline and write the amplitude
                 table, summary and population trajectory
* ``report``     render SVG plots from an analysis output directory
* ``translate``  look up a representative pathway for a frequency index

``--out`` defaults to the ``PATHENC_OUT`` environment variable, then to the
current directory.  Errors map to stable exit codes (see ``EXIT_CODES``).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .config import parse_config
from .decoding import (build_translation_map, extract_spectrum, significant,
                       self_validating)
from .encoding import ALL_MODES, assign_mode, cost_summary
from .errors import (ConfigParseError, DisconnectedGraph, EvenBase,
                     MissingResults, NoEncodedEdges, Nonconvergence,
                     PathencError)
from .graph import build_graph, spanning_tree, tree_from_edges
from .grape import grape_optimize
from .propagation import propagate_final, propagate_trajectory
from . import reporting

EXIT_CODES = {
    ConfigParseError: 2,
    EvenBase: 3,
    DisconnectedGraph: 4,
    NoEncodedEdges: 5,
    MissingResults: 6,
    Nonconvergence: 7,
    PathencError: 8,
}

OUTPUT_ENV = "PATHENC_OUT"


def _exit_code(exc):
    for klass in type(exc).__mro__:
        if klass in EXIT_CODES:
            return EXIT_CODES[klass]
    return 1


def _out_dir(args, config=None):
    out = args.out or (config.out_dir if config else "") \
        or os.environ.get(OUTPUT_ENV, "") or "."
    os.makedirs(out, exist_ok=True)
    return out


def _apply_overrides(config, args):
    changes = {}
    if getattr(args, "base", None) is not None:
        changes["base"] = args.base
    if getattr(args, "mode", None) is not None:
        changes["mode"] = args.mode
    if getattr(args, "epsilon_rel", None) is not None:
        changes["epsilon_rel"] = args.epsilon_rel
    if changes:
        from dataclasses import replace
        config = replace(config, **changes)
    return config


def _resolve_pulse(config, args, out_dir):
    if config.pulse_field is not None:
        return config.pulse_field
    if config.pulse_file:
        return reporting.load_pulse_csv(reporting.require(config.pulse_file))
    synthesis = config.synthesis
    if getattr(args, "seed", None) is not None:
        from dataclasses import replace
        synthesis = replace(synthesis, seed=args.seed)
    pulse, report = grape_optimize(config.system, synthesis)
    _write_convergence(out_dir, report)
    reporting.write_pulse_csv(os.path.join(out_dir, reporting.PULSE_FILE),
                              pulse)
    if not report.converged:
        raise Nonconvergence(
            f"synthesis stopped at fidelity {report.fidelity:.6f} "
            f"after {report.iterations} iterations", result=(pulse, report))
    return pulse


def _write_convergence(out_dir, report):
    payload = {"converged": report.converged,
               "iterations": report.iterations,
               "fidelity": report.fidelity,
               "infidelity": report.infidelity,
               "history": list(report.history)}
    reporting.write_summary_json(os.path.join(out_dir, "convergence.json"),
                                 payload)


def cmd_optimize(args):
    config = parse_config(args.config)
    out_dir = _out_dir(args, config)
    if config.synthesis is None:
        raise ConfigParseError(
            "optimize needs a 'pulse.synthesis' block in the config")
    synthesis = config.synthesis
    if args.seed is not None:
        from dataclasses import replace
        synthesis = replace(synthesis, seed=args.seed)
    pulse, report = grape_optimize(config.system, synthesis)
    reporting.write_pulse_csv(os.path.join(out_dir, reporting.PULSE_FILE), pulse)
    _write_convergence(out_dir, report)
    print(f"fidelity {report.fidelity:.6f} after {report.iterations} "
          f"iterations -> {out_dir}/{reporting.PULSE_FILE}")
    if not report.converged:
        raise Nonconvergence(
            f"target infidelity {synthesis.target_infidelity} not reached "
            f"(best fidelity {report.fidelity:.6f}); artifacts written")
    return 0


def _build_scheme(config):
    graph = build_graph(config.system)
    if config.tree_edges:
        tree = tree_from_edges(graph, config.tree_edges)
    else:
        tree = spanning_tree(graph)
    return graph, tree, assign_mode(config.mode, graph, tree, config.base)


def cmd_analyze(args):
    config = _apply_overrides(parse_config(args.config), args)
    out_dir = _out_dir(args, config)
    graph, tree, scheme = _build_scheme(config)
    pulse = _resolve_pulse(config, args, out_dir)

    table = extract_spectrum(config.system, pulse, scheme,
                             config.start, config.target,
                             workers=args.workers)
    u_final = propagate_final(config.system, pulse).matrix
    u_ba = complex(u_final[config.target, config.start])
    residual = abs(table.total - u_ba)
    epsilon_abs = config.epsilon_rel * abs(u_ba)
    ok, offenders = self_validating(table, epsilon_abs)
    translation = build_translation_map(scheme, config.start, config.l_max)

    reporting.write_amplitude_csv(
        os.path.join(out_dir, reporting.AMPLITUDES_FILE), table, translation)
    populations = propagate_trajectory(config.system, pulse, config.start)
    reporting.write_population_csv(
        os.path.join(out_dir, reporting.POPULATIONS_FILE), populations, pulse.dt)

    costs = cost_summary(scheme)
    summary = {
        "mode": scheme.mode,
        "base": scheme.base,
        "gamma0": scheme.gamma0,
        "n_exponent": scheme.n_exp,
        "s_points": scheme.sample_count,
        "encoded_slots": [list(slot) for slot in scheme.slots],
        "tree_edges": [list(graph.edges[k]) for k in tree.edge_indices],
        "start": config.start,
        "target": config.target,
        "u_final": [u_ba.real, u_ba.imag],
        "transfer_probability": abs(u_ba) ** 2,
        "sum_residual": residual,
        "epsilon_rel": config.epsilon_rel,
        "epsilon_abs": epsilon_abs,
        "self_validating": ok,
        "offending_classes": [m for m, _ in offenders],
        "significant_count": len(significant(table, epsilon_abs)),
        "cost": costs,
    }
    if args.max_order is not None:
        summary["oracle"] = _oracle_check(config, pulse, scheme, table,
                                          epsilon_abs, args.max_order)
    reporting.write_summary_json(os.path.join(out_dir, reporting.SUMMARY_FILE),
                                 summary)
    verdict = "yes" if ok else "no (increase the base)"
    print(f"self-validating: {verdict}; sum residual: {residual:.3e}; "
          f"significant classes: {summary['significant_count']}; "
          f"s-points: {scheme.sample_count}")
    return 0


def _oracle_check(config, pulse, scheme, table, epsilon_abs, max_order):
    from .dyson import class_amplitude_oracle
    checks = []
    for m, amp in significant(table, epsilon_abs)[:5]:
        value, truncated = class_amplitude_oracle(
            config.system, pulse, scheme, m, config.start, config.target,
            max_order)
        checks.append({"m": m, "decoded": [amp.real, amp.imag],
                       "oracle": [value.real, value.imag],
                       "difference": abs(value - amp),
                       "truncated": truncated})
    return {"max_order": max_order, "classes": checks}


def cmd_report(args):
    results = args.results
    amp_path = reporting.require(os.path.join(results,
                                              reporting.AMPLITUDES_FILE))
    summary_path = reporting.require(os.path.join(results,
                                                  reporting.SUMMARY_FILE))
    pop_path = reporting.require(os.path.join(results,
                                              reporting.POPULATIONS_FILE))
    with open(summary_path) as fh:
        summary = json.load(fh)
    out_dir = args.out or results
    os.makedirs(out_dir, exist_ok=True)

    amplitudes = reporting.load_amplitude_csv(amp_path)
    total = sum(amplitudes.values())
    eps = summary.get("epsilon_abs", 0.0)
    entries = sorted(((m, a) for m, a in amplitudes.items() if abs(a) > eps),
                     key=lambda kv: (-abs(kv[1]), kv[0]))

    import csv as _csv
    with open(pop_path, newline="") as fh:
        rows = list(_csv.reader(fh))
    populations = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
    dt = float(rows[2][0]) - float(rows[1][0]) if len(rows) > 2 else 1.0

    arrow_path = os.path.join(out_dir, "amplitudes.svg")
    _plot_arrows(arrow_path, entries, total)
    pop_plot = os.path.join(out_dir, "populations.svg")
    reporting.population_plot_svg(pop_plot, populations, dt,
                                  title="state populations")
    print(f"wrote {arrow_path} and {pop_plot}")
    return 0


def _plot_arrows(path, entries, total):
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    for m, amp in entries:
        ax.annotate("", xy=(amp.real, amp.imag), xytext=(0.0, 0.0),
                    arrowprops=dict(arrowstyle="->", color="C0", lw=1.2))
        ax.annotate(str(m), xy=(amp.real, amp.imag), fontsize=8,
                    xytext=(3, 3), textcoords="offset points")
    ax.annotate("", xy=(total.real, total.imag), xytext=(0.0, 0.0),
                arrowprops=dict(arrowstyle="->", color="red", lw=1.8))
    reach = max([abs(total)] + [abs(a) for _, a in entries]) * 1.15 + 1e-12
    ax.set_xlim(-reach, reach)
    ax.set_ylim(-reach, reach)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_aspect("equal")
    ax.set_title(f"{len(entries)} significant pathway classes")
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_translate(args):
    config = _apply_overrides(parse_config(args.config), args)
    _, _, scheme = _build_scheme(config)
    mapping = build_translation_map(scheme, config.start,
                                    args.l_max or config.l_max)
    final = config.target if args.final is None else args.final
    hit = mapping.get((final, args.m))
    if hit is None:
        print(f"no pathway of length <= {args.l_max or config.l_max} "
              f"reaches state {final} with frequency index {args.m}")
        return 1
    print(hit)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pathenc",
        description="pathway-class amplitude extraction for controlled "
                    "quantum dynamics")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default="", help="output directory "
                       f"(default: ${OUTPUT_ENV} or '.')")
        p.add_argument("--seed", type=int, default=None,
                       help="override the synthesis seed")

    p_opt = sub.add_parser("optimize", help="synthesize a transfer pulse")
    common(p_opt)
    p_opt.set_defaults(func=cmd_optimize)

    p_ana = sub.add_parser("analyze", help="run the encoding analysis")
    common(p_ana)
    p_ana.add_argument("--workers", type=int, default=None,
                       help="parallel s-point workers (default: all cores)")
    p_ana.add_argument("--epsilon-rel", dest="epsilon_rel", type=float,
                       default=None, help="significance threshold relative "
                       "to |U_ba(T)|")
    p_ana.add_argument("--base", type=int, default=None)
    p_ana.add_argument("--mode", choices=ALL_MODES, default=None)
    p_ana.add_argument("--max-order", dest="max_order", type=int, default=None,
                       help="also cross-check top classes against the "
                       "brute-force integrator up to this order")
    p_ana.set_defaults(func=cmd_analyze)

    p_rep = sub.add_parser("report", help="render plots from analyze output")
    p_rep.add_argument("--results", required=True,
                       help="directory written by analyze")
    p_rep.add_argument("--out", default="", help="plot output directory")
    p_rep.set_defaults(func=cmd_report)

    p_tr = sub.add_parser("translate",
                          help="frequency index -> representative pathway")
    common(p_tr)
    p_tr.add_argument("--m", type=int, required=True, help="frequency index")
    p_tr.add_argument("--final", type=int, default=None,
                      help="final state (default: report target)")
    p_tr.add_argument("--l-max", dest="l_max", type=int, default=None)
    p_tr.add_argument("--base", type=int, default=None)
    p_tr.add_argument("--mode", choices=ALL_MODES, default=None)
    p_tr.add_argument("--epsilon-rel", dest="epsilon_rel", type=float,
                      default=None)
    p_tr.set_defaults(func=cmd_translate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PathencError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
