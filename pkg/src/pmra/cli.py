"""Command-line front end: ``pmra circle|graph|torus2 ...``.

Exit codes: 0 when every gating check passes, 1 when one fails, 2 for
malformed or invariant-violating input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import cascade as cx
from . import circle
from . import frames
from . import graph as gr
from . import torus
from .report import CheckResult, Report

log = logging.getLogger("pmra")


class InputError(Exception):
    """Bad input file; carries the check name used in the report."""

    def __init__(self, msg: str, check: str = "input"):
        super().__init__(msg)
        self.check = check


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _load_bank(path: str) -> circle.FilterBank:
    try:
        return circle.FilterBank.from_json(_load_json(path))
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


# ---------------------------------------------------------------------------


def cmd_verify_filter(args, report: Report) -> None:
    bank = _load_bank(args.bank)
    report.parameters.update(bank=args.bank, N=bank.N, filters=len(bank))
    report.add(*circle.verify_filter_bank(bank, args.eps))
    if args.out:
        rows = circle.sample_bank(bank)
        header = "t," + ",".join(f"re{j},im{j}" for j in range(len(bank)))
        lines = [",".join(repr(float(v)) for v in row) for row in rows]
        _write(args.out, header + "\n" + "\n".join(lines) + "\n")


def cmd_frame(args, report: Report) -> None:
    bank = circle.classify_bank(_load_bank(args.bank), args.eps)
    report.parameters.update(bank=args.bank, N=bank.N, level=args.level, kind=bank.kind,
                             word_order="length-lexicographic")
    if bank.kind == circle.UNVERIFIED:
        report.add(CheckResult.gate("bank_is_frame", circle.check_parseval_bank(bank, args.eps).max_error, args.eps))
        return
    report.add(*frames.frame_suite(bank, args.level, args.seed, args.vectors, args.eps))
    if bank.kind == circle.ORTHONORMAL:
        report.add(frames.check_level_orthonormal(bank, args.level, args.eps))


def cmd_cascade(args, report: Report) -> None:
    bank = _load_bank(args.bank)
    N, K, G, T = bank.N, args.K, args.grid, args.window
    m0 = bank.lowpass
    report.parameters.update(bank=args.bank, N=N, K=K, grid=G, window=T)
    if not circle.is_filter(m0, bank.system, args.eps):
        raise InputError("low-pass element fails the filter condition", "filter_condition")
    phi = cx.cascade_product(m0, N, K, G, -T, T)
    phi_next = cx.cascade_product(m0, N, K + 1, G, -N * T, N * T)
    report.add(*cx.check_scaling_equation(phi, phi_next, m0, N, 1e-12))
    report.add(cx.check_dilation_isometry(phi, phi, N, args.eps))
    span = min(T, 64)
    unit = cx.xi_inner(phi, phi, span)
    report.add(CheckResult.info("phi_unit_norm", float(np.max(np.abs(unit - 1))), 1e-2,
                                None, translates=span,
                                note="grid check of a limit identity; continuity is not decidable on a grid"))
    if len(bank) > 1 and G % N == 0:
        basis = [e for _, e in cx.xi_basis(phi, bank, None, 1)]
        report.add(CheckResult.info("xi_basis_gram_K1", cx.gram_defect(basis), 1e-2))
    _write(args.out, phi.to_csv())


def cmd_graph_mra(args, report: Report) -> None:
    try:
        g = gr.DirectedGraph.from_json(_load_json(args.graph))
    except ValueError as exc:
        raise InputError(f"{args.graph}: {exc}", "graph_invariants") from exc
    try:
        bank = gr.OrthoWeightBank.from_json(g, _load_json(args.bank))
        bank.validate()
    except ValueError as exc:
        raise InputError(f"{args.bank}: {exc}", "weight_bank_invariants") from exc
    w = bank.filter_weights()
    d = args.depth
    report.parameters.update(graph=args.graph, bank=args.bank, depth=d, level=args.level,
                             N=bank.N, word_alphabet="1-based")
    report.add(gr.weight_consistency(w, d))
    report.add(gr.check_bank_inner_products(bank))
    for n in range(1, d + 1):
        report.add(gr.resolution_of_identity(bank, n))
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for k in range(1, d + 1):
        f = gr.random_cylinder(g, d, rng)
        worst = max(worst, gr.graph_Lk(f, k).distance(gr.graph_Lk_iterated(f, k)))
    report.add(CheckResult.gate("Lk_closed_form", worst, 1e-12))
    for k in range(d):
        report.add(gr.intertwine_check(w, k))
    x = gr.random_two_sided(g, min(d, 2), 1, rng)
    y = gr.random_two_sided(g, 1, 2, rng)
    report.add(gr.check_dilation_isometry(x, y, w))
    report.add(*gr.graph_frame(bank, args.level, eps=args.eps, seed=args.seed))


def cmd_torus_verify(args, report: Report) -> None:
    try:
        params = torus.TwistedParams.parse(args.params)
    except ValueError as exc:
        raise InputError(f"--params: {exc}") from exc
    z_res = args.z_res
    t_res = args.t_res or 64 * params.q * params.d
    try:
        if args.m:
            m = torus.TwistedFunction.from_json(_load_json(args.m), params.c, params.d)
            if (m.q, m.a) != (1, (1 - params.c * params.d) * params.a):
                raise ValueError("filter must live in Y(1, (1 - cd) a)")
        else:
            m = torus.explicit_filter_a0(params, z_res, t_res)
            report.add(CheckResult.gate("mtilde_condition", torus.mtilde_residual(params, t_res), 1e-12))
        xi = None
        if args.xi:
            xi = torus.TwistedFunction.from_json(_load_json(args.xi), params.c, params.d)
            if (xi.q, xi.a) != (params.q, params.a):
                raise ValueError("xi must live in Y(q, a)")
        z_res, t_res = m.z_res, m.t_res
        m.check_grid()
        torus.TwistedFunction(params, m.values).check_grid()
    except ValueError as exc:
        raise InputError(str(exc), "twisted_input") from exc
    report.parameters.update(params=[params.q, params.a, params.c, params.d], z_res=z_res, t_res=t_res)
    report.add(*torus.verify_suite(params, m, xi, args.seed, args.vectors, z_res, t_res, args.eps))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=1e-10)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--report", help="write the JSON report here")
    common.add_argument("--out", help="CSV artefact path")

    p = argparse.ArgumentParser(prog="pmra", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    top = p.add_subparsers(dest="family", required=True)

    c = top.add_parser("circle").add_subparsers(dest="command", required=True)
    s = c.add_parser("verify-filter", parents=[common])
    s.add_argument("--bank", required=True)
    s.set_defaults(func=cmd_verify_filter)
    s = c.add_parser("frame", parents=[common])
    s.add_argument("--bank", required=True)
    s.add_argument("--level", type=int, default=3)
    s.add_argument("--vectors", type=int, default=20)
    s.set_defaults(func=cmd_frame)
    s = c.add_parser("cascade", parents=[common])
    s.add_argument("--bank", required=True)
    s.add_argument("--K", type=int, default=18)
    s.add_argument("--grid", type=int, default=256)
    s.add_argument("--window", type=int, default=8)
    s.set_defaults(func=cmd_cascade)

    g = top.add_parser("graph").add_subparsers(dest="command", required=True)
    s = g.add_parser("mra", parents=[common])
    s.add_argument("--graph", required=True)
    s.add_argument("--bank", required=True)
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--level", type=int, default=2, help="frame truncation level K")
    s.set_defaults(func=cmd_graph_mra)

    t = top.add_parser("torus2").add_subparsers(dest="command", required=True)
    s = t.add_parser("verify", parents=[common])
    s.add_argument("--params", required=True, help="q,a,c,d")
    s.add_argument("--m", help="filter JSON; omitted means the explicit a=0 filter")
    s.add_argument("--xi", help="module element JSON")
    s.add_argument("--z-res", type=int, default=32)
    s.add_argument("--t-res", type=int, default=None)
    s.add_argument("--vectors", type=int, default=10)
    s.set_defaults(func=cmd_torus_verify)
    return p


def run_suite(argv: list[str]) -> tuple[Report, int]:
    args = build_parser().parse_args(argv)
    report = Report(__version__, args.seed, {"command": f"{args.family} {args.command}", "eps": args.eps})
    try:
        args.func(args, report)
        code = 0 if report.ok else 1
    except InputError as exc:
        log.error("%s", exc)
        report.add(CheckResult("input" if exc.check == "input" else exc.check, "fail", float("inf"), 0.0, str(exc)))
        code = 2
    _write(args.report, report.to_json() + "\n")
    return report, code


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    report, code = run_suite(sys.argv[1:] if argv is None else argv)
    for c in report.checks:
        print(c.line())
    s = report.summary
    print(f"{s['pass']} passed, {s['fail']} failed, {s['info']} info")
    return code


if __name__ == "__main__":
    sys.exit(main())
