"""Command-line interface: ``gpquiver <verb> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 hypothesis failure,
3 disagreement (or inconclusive rows under certified caps).
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import __version__
from .algebra import BasedAlgebra, tensor
from .fileio import FormatError, algebra_export, dumps, read_algebra, read_module, read_presentation
from .gptest import (
    HypothesisError,
    gp_direct,
    gp_propB,
    gp_quiver,
    gp_selfinj,
    gp_thm_condition2,
    gp_thm_condition3,
    gp_tor_criterion,
)
from .harness import THEOREMS, GenSpec, verify_theorem
from .homology import DEFAULT_CAP, ext_dims, global_dim, is_gorenstein, is_self_injective, tor_dims

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_DISAGREE = 0, 1, 2, 3
CRITERIA = ("direct", "thm2", "thm3", "propB", "selfinj", "quiver", "tor")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _header(field, caps: dict, seed: Optional[int] = None) -> dict:
    h = {"tool": f"gpquiver {__version__}", "field": str(field), "caps": caps}
    if seed is not None:
        h["seed"] = seed
    return h


def _emit(args, header: dict, data: dict, lines: List[str]) -> None:
    if args.format == "structured":
        sys.stdout.write(dumps({"header": header, **data}))
        return
    seed = f", seed {header['seed']}" if "seed" in header else ""
    caps = ", ".join(f"{k} {v}" for k, v in header["caps"].items())
    print(f"{header['tool']} | field {header['field']}{seed} | caps: {caps}")
    for line in lines:
        print(line)


def _algebra_from_args(args) -> BasedAlgebra:
    if getattr(args, "tensor", None):
        return tensor(read_algebra(args.tensor[0]), read_algebra(args.tensor[1]))
    if getattr(args, "algebra", None):
        return read_algebra(args.algebra)
    raise UsageError("give --algebra PATH or --tensor A B")


def _check_module(m, alg: BasedAlgebra, what: str = "module"):
    if m.algebra != alg:
        raise UsageError(f"{what} is not over the requested algebra")


def cmd_algebra_info(args) -> int:
    if args.path and args.tensor:
        raise UsageError("give a presentation path or --tensor, not both")
    if args.path:
        alg = read_algebra(args.path)
    elif args.tensor:
        alg = tensor(read_algebra(args.tensor[0]), read_algebra(args.tensor[1]))
    else:
        raise UsageError("algebra-info needs a presentation path or --tensor A B")
    cap = args.cap
    gd = global_dim(alg, cap)
    gor = is_gorenstein(alg, cap)
    si = is_self_injective(alg)
    if args.emit_algebra:
        with open(args.emit_algebra, "w", encoding="utf-8") as fh:
            fh.write(dumps(algebra_export(alg)))
    data = {
        "dim": alg.dim,
        "idempotents": len(alg.idempotents),
        "radical_dim": len(alg.radical),
        "global_dim": gd.to_json(),
        "gorenstein": gor.gorenstein,
        "idims": [gor.left_idim.to_json(), gor.right_idim.to_json()],
        "self_injective": si,
        "generators": [alg.labels[g] for g in alg.generators],
    }
    gtxt = f"Gorenstein ({gor.left_idim},{gor.right_idim})" if gor.gorenstein else (
        f"Gorenstein unknown (idims {gor.left_idim}, {gor.right_idim})"
    )
    lines = [
        f"dim {alg.dim}, idempotents {len(alg.idempotents)}, radical dim {len(alg.radical)}",
        f"gldim {gd}, {gtxt}, self-injective: {'yes' if si else 'no'}",
        "generators: " + " ".join(data["generators"]),
    ]
    _emit(args, _header(alg.field, {"cap": cap}), data, lines)
    return EXIT_OK


def _certificates(criterion: str, alg: BasedAlgebra, bound: int) -> dict:
    """Verify the criterion's standing hypothesis; raise HypothesisError on failure."""
    certs = {}
    if criterion == "direct":
        g = is_gorenstein(alg, bound)
        certs["Gorenstein"] = [g.left_idim.to_json(), g.right_idim.to_json()] if g.gorenstein else "unknown"
        return certs
    if criterion == "tor":
        B = alg
    else:
        if alg.tensor_of is None:
            raise UsageError(f"criterion {criterion} needs --tensor A B")
        B = alg.tensor_of[1]
    if criterion in ("thm2", "thm3", "tor"):
        g = is_gorenstein(B, bound)
        if not g.gorenstein:
            raise HypothesisError(f"B not certified Gorenstein at cap {bound}")
        certs["B Gorenstein"] = [g.left_idim.to_json(), g.right_idim.to_json()]
    elif criterion in ("propB", "quiver"):
        gd = global_dim(B, bound)
        if not gd.finite:
            raise HypothesisError(f"gldim B not finite within cap {bound}")
        certs["B gldim"] = gd.to_json()
    elif criterion == "selfinj":
        if not is_self_injective(B):
            raise HypothesisError("B not self-injective")
        certs["B self-injective"] = True
    return certs


def cmd_check_gp(args) -> int:
    alg = _algebra_from_args(args)
    m = read_module(args.module)
    _check_module(m, alg)
    bound = args.bound
    certs = _certificates(args.criterion, alg, bound)
    c = args.criterion
    if c == "direct":
        v = gp_direct(alg, m, bound)
    elif c == "tor":
        v = gp_tor_criterion(alg, m, bound)
    else:
        A, B = alg.tensor_of
        if c == "thm2":
            v = gp_thm_condition2(A, B, m, bound)
        elif c == "thm3":
            v = gp_thm_condition3(A, B, m, bound)
        elif c == "propB":
            v = gp_propB(A, B, m, bound)
        elif c == "selfinj":
            v = gp_selfinj(A, B, m, bound)
        else:
            if not args.tensor:
                raise UsageError("criterion quiver needs --tensor A B with B a presentation file")
            v = gp_quiver(A, read_presentation(args.tensor[1]), m, bound)
    lines = [
        f"verdict: {v.outcome}",
        f"criterion: {v.criterion}",
        f"witness: {v.witness or '-'}",
        f"bound used: {v.bound_used}",
        "hypotheses: " + (", ".join(f"{k} = {val}" for k, val in certs.items()) or "none"),
    ]
    lines += [f"check {k}: {val}" for k, val in v.checks.items()]
    _emit(args, _header(alg.field, {"bound": bound}), {"verdict": v.to_json(), "hypotheses": certs}, lines)
    return EXIT_OK


def cmd_ext(args) -> int:
    alg = _algebra_from_args(args)
    m, n = (read_module(p) for p in args.modules)
    _check_module(m, alg, "first module")
    _check_module(n, alg, "second module")
    dims = ext_dims(m, n, args.max_degree)
    lines = [f"Ext^{i}: {d}" for i, d in enumerate(dims)]
    _emit(args, _header(alg.field, {"max_degree": args.max_degree}), {"ext": dims}, lines)
    return EXIT_OK


def cmd_tor(args) -> int:
    alg = _algebra_from_args(args)
    u, x = (read_module(p) for p in args.modules)
    _check_module(u, alg.opposite(), "first module (over the opposite algebra)")
    _check_module(x, alg, "second module")
    dims = tor_dims(u, x, args.max_degree)
    lines = [f"Tor_{i}: {d}" for i, d in enumerate(dims)]
    _emit(args, _header(alg.field, {"max_degree": args.max_degree}), {"tor": dims}, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = GenSpec(args.family, args.dim_cap, args.samples, args.seed, args.field, args.bound, args.degrees)
    report = verify_theorem(args.theorem, spec)
    text = report.dumps()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    t = report.totals
    header = _header(report.field, report.caps, report.seed)
    lines = [
        f"theorem {report.theorem} on {report.family}",
        "hypotheses: " + ", ".join(f"{k} = {v}" for k, v in report.hypotheses.items()),
        f"samples {t['samples']}: agree {t['agree']}, disagree {t['disagree']}, inconclusive {t['inconclusive']}",
    ]
    lines += [f"disagreement at sample {d['sample']}" for d in report.disagreements]
    if args.out:
        lines.append(f"report written to {args.out}")
    if args.format == "structured":
        sys.stdout.write(text)
    else:
        _emit(args, header, {}, lines)
    return EXIT_OK if report.passed else EXIT_DISAGREE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gpquiver", description="Gorenstein projectivity over tensor products of quiver algebras.")
    p.add_argument("--version", action="version", version=f"gpquiver {__version__}")
    p.add_argument("--format", choices=("human", "structured"), default="human")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    a = sub.add_parser("algebra-info", help="dimensions, gldim, Gorenstein and self-injectivity")
    a.add_argument("path", nargs="?")
    a.add_argument("--tensor", nargs=2, metavar=("A", "B"))
    a.add_argument("--cap", type=int, default=DEFAULT_CAP)
    a.add_argument("--emit-algebra", metavar="PATH", help="write basis and generator order as JSON")
    a.set_defaults(func=cmd_algebra_info)

    c = sub.add_parser("check-gp", help="decide Gorenstein projectivity with a chosen criterion")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--algebra")
    g.add_argument("--tensor", nargs=2, metavar=("A", "B"))
    c.add_argument("--module", required=True)
    c.add_argument("--criterion", choices=CRITERIA, default="direct")
    c.add_argument("--bound", type=int, default=DEFAULT_CAP)
    c.set_defaults(func=cmd_check_gp)

    for verb, func in (("ext", cmd_ext), ("tor", cmd_tor)):
        e = sub.add_parser(verb, help=f"{verb.capitalize()} dimension table")
        g = e.add_mutually_exclusive_group(required=True)
        g.add_argument("--algebra")
        g.add_argument("--tensor", nargs=2, metavar=("A", "B"))
        e.add_argument("--modules", nargs=2, required=True, metavar=("M", "N"))
        e.add_argument("--max-degree", type=int, default=3)
        e.set_defaults(func=func)

    v = sub.add_parser("verify", help="run a seeded agreement experiment")
    v.add_argument("--theorem", required=True, choices=THEOREMS)
    v.add_argument("--family", default=None, help="e.g. dual_numbers*kA2, kA2*Bn:2, custom:path.json")
    v.add_argument("--samples", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--field", default="Fp:101")
    v.add_argument("--dim-cap", type=int, default=12)
    v.add_argument("--bound", type=int, default=DEFAULT_CAP)
    v.add_argument("--degrees", type=int, default=6)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (UsageError, FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
