"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (NotFound, SingularBranch, ...),
2 on malformed input.  Errors are reported as ``{"error": code, "detail": ...}``
on standard output.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import io
from .annihilator import (
    DEFAULT_DEGREES,
    certificate_to_dict,
    diagonal_pipeline,
    find_linearized_annihilator,
    verify_annihilation,
)
from .automaton import build_dfao, export_dfao
from .cartier import coeff_query
from .errors import AlgDiagError, MalformedInput, NotAnnihilated
from .polytope import bound_report
from .series import diagonal, hensel_solve, partial_diagonal

SUBCOMMANDS = ("solve", "bound", "diagonal", "annihilator", "coeff", "automaton", "verify")


@dataclass
class JobSpec:
    subcommand: str
    inputs: dict[str, str] = field(default_factory=dict)
    options: dict[str, object] = field(default_factory=dict)
    fmt: str = "json"
    out: str | None = None

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise MalformedInput(f"unknown subcommand {self.subcommand!r}")
        for name, path in self.inputs.items():
            if path is not None and not Path(path).is_file():
                raise MalformedInput(f"--{name}: no such file {path}")
        for key in ("prec", "order", "max_states", "nmax", "threads"):
            v = self.options.get(key)
            if v is not None and (not isinstance(v, int) or v < (0 if key == "nmax" else 1)):
                raise MalformedInput(f"--{key.replace('_', '-')} out of range: {v}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="algdiag", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--out", help="write the result to this file instead of stdout")
        p.add_argument("--threads", type=int, default=1, help="parallelism cap (results never depend on it)")

    p = sub.add_parser("solve", help="expand the branch of E through y0")
    p.add_argument("--branch", required=True)
    p.add_argument("--prec", type=int, required=True)
    common(p)

    p = sub.add_parser("bound", help="Newton-polytope bounds for an annihilating polynomial")
    p.add_argument("--poly", required=True)
    p.add_argument("--task", choices=("diagonal", "automaton"), default="diagonal")
    common(p)

    p = sub.add_parser("diagonal", help="(partial) diagonal of a series or branch")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--series")
    src.add_argument("--branch")
    p.add_argument("--prec", type=int, help="total-degree precision when expanding a branch")
    p.add_argument("--partial", type=int, help="keep the first m variables free")
    common(p)

    p = sub.add_parser("annihilator", help="linearized polynomial annihilating a diagonal")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--branch")
    src.add_argument("--series", help="univariate series to annihilate directly")
    p.add_argument("--order", type=int, help="diagonal order when starting from a branch")
    p.add_argument("--nmax", type=int, help="largest p-degree to try")
    p.add_argument("--degrees", type=_int_list, default=list(DEFAULT_DEGREES))
    common(p)

    p = sub.add_parser("coeff", help="coefficient at an arbitrarily large multi-index")
    p.add_argument("--branch", required=True)
    p.add_argument("--index", type=_int_list, required=True)
    common(p)

    p = sub.add_parser("automaton", help="coefficient automaton (LSD-first)")
    p.add_argument("--branch", required=True)
    p.add_argument("--max-states", type=int, default=100_000)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    common(p)

    p = sub.add_parser("verify", help="check a certificate against a series")
    p.add_argument("--cert", required=True)
    p.add_argument("--series", required=True)
    p.add_argument("--order", type=int, required=True)
    common(p)
    return parser


def job_from_args(ns: argparse.Namespace) -> JobSpec:
    names = ("poly", "series", "branch", "cert")
    inputs = {k: getattr(ns, k) for k in names if getattr(ns, k, None) is not None}
    skip = set(names) | {"subcommand", "out", "format"}
    options = {k: v for k, v in vars(ns).items() if k not in skip}
    return JobSpec(ns.subcommand, inputs, options, getattr(ns, "format", "json"), ns.out)


def _execute(job: JobSpec) -> str:
    opts = job.options
    data = io.parse_inputs(**job.inputs)
    cmd = job.subcommand
    if cmd == "solve":
        return io.dumps(io.series_to_dict(hensel_solve(data["branch"], opts["prec"])))
    if cmd == "bound":
        return io.dumps(bound_report(data["poly"], task=opts["task"]).to_dict())
    if cmd == "diagonal":
        if "branch" in data:
            if opts.get("prec") is None:
                raise MalformedInput("--prec is required with --branch")
            f = hensel_solve(data["branch"], opts["prec"])
        else:
            f = data["series"]
        m = opts.get("partial")
        g = diagonal(f) if m is None else partial_diagonal(f, m)
        return io.dumps(io.series_to_dict(g))
    if cmd == "annihilator":
        degrees = opts["degrees"] or list(DEFAULT_DEGREES)
        if "branch" in data:
            if opts.get("order") is None:
                raise MalformedInput("--order is required with --branch")
            cert, _ = diagonal_pipeline(
                data["branch"], opts["order"], degrees, nmax=opts.get("nmax")
            )
        else:
            if opts.get("nmax") is None:
                raise MalformedInput("--nmax is required with --series")
            cert = find_linearized_annihilator(data["series"], opts["nmax"], degrees)
        return io.dumps(certificate_to_dict(cert))
    if cmd == "coeff":
        c = coeff_query(data["branch"], opts["index"])
        return (str(c.value) if c.field.e == 1 else io.dumps(list(c.coeffs)).strip()) + "\n"
    if cmd == "automaton":
        return export_dfao(build_dfao(data["branch"], opts["max_states"]), job.fmt)
    if cmd == "verify":
        cert, g = data["cert"], data["series"]
        if cert.L.field != g.field:
            raise MalformedInput("certificate and series live over different fields")
        if not verify_annihilation(cert.L, g, opts["order"]):
            raise NotAnnihilated(f"L(g) has a nonzero coefficient below order {opts['order']}")
        return io.dumps({"order": opts["order"], "verified": True})
    raise MalformedInput(f"unknown subcommand {cmd!r}")  # pragma: no cover


def run(job: JobSpec, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        job.validate()
        text = _execute(job)
    except AlgDiagError as exc:
        stdout.write(io.dumps(exc.to_dict()))
        return exc.exit_code
    if job.out:
        Path(job.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    return run(job_from_args(ns))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
