"""Command-line driver: read a graph, run the layout, write SVG and JSON."""

from __future__ import annotations

import argparse
import logging
import sys

from .engine import SolverConfig, run
from .errors import LombardiError
from .io import drawing_to_json, parse_graph, write_svg
from .layout_init import initial_layout
from .metrics import quality_report

EXIT_OK, EXIT_INPUT, EXIT_FROZEN = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lombardi",
                description="Redraw a graph with circular-arc edges and evenly spaced tangents.")
    p.add_argument("--input", required=True, metavar="PATH",
                   help="edge list ('u v' per line) or JSON graph document")
    p.add_argument("--out-svg", metavar="PATH")
    p.add_argument("--out-json", metavar="PATH")
    p.add_argument("--init", choices=("tutte", "fr"), default="tutte",
                   help="initial straight-line layout (default: tutte)")
    p.add_argument("--epsilon", type=float, default=1e-4,
                   help="stop when no vertex moves more than this fraction of the "
                        "bounding-box diagonal in a pass (default: 1e-4)")
    p.add_argument("--max-passes", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fr-iters", type=int, default=500)
    p.add_argument("--pin-boundary", action="store_true",
                   help="keep the barycentric boundary vertices fixed during the run")
    p.add_argument("--quiet", action="store_true")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError:
        return EXIT_INPUT
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        with open(args.input, "rb") as fh:
            g, boundary = parse_graph(fh.read())
        cfg = SolverConfig(epsilon=args.epsilon, max_passes=args.max_passes, seed=args.seed)
        init, init_info = initial_layout(g, args.init, boundary, args.seed, args.fr_iters)
    except (OSError, LombardiError, ValueError) as exc:
        print(f"lombardi: {exc}", file=sys.stderr)
        return EXIT_INPUT

    pinned = ()
    if args.pin_boundary and "boundary" in init_info:
        pinned = [v for v, _, _ in init_info["boundary"]]

    def progress(i, energy, disp):
        print(f"pass {i}: energy {energy:.10g} max displacement {disp:.3g}", file=sys.stderr)

    layout, arcs, report = run(g, init, cfg, progress=None if args.quiet else progress,
                               pinned=pinned)
    quality = quality_report(g, layout, arcs, report.fans, cfg)
    if not args.quiet:
        state = "converged" if report.converged else "not converged"
        print(f"{state} after {report.passes} passes; energy {quality.total_energy:.10g}",
              file=sys.stderr)
        if report.collapsed:
            print("warning: the drawing contracted to a point; try --pin-boundary",
                  file=sys.stderr)

    try:
        if args.out_svg:
            write_svg(layout, arcs, args.out_svg)
        if args.out_json:
            fans = [None if v not in report.fans else
                    {"neighbors": list(report.fans[v].neighbors),
                     "angles": list(report.fans[v].angles)} for v in range(g.n)]
            doc = drawing_to_json(layout, arcs, {**report.to_dict(), **quality.to_dict()},
                                  cfg.to_dict(), init=init_info, pinned=list(pinned),
                                  n=g.n, edges=[list(e) for e in g.edges], fans=fans)
            with open(args.out_json, "w", encoding="utf-8") as fh:
                fh.write(doc)
    except OSError as exc:
        print(f"lombardi: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_FROZEN if report.frozen else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
