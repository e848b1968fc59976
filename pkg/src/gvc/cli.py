"""Command-line interface.

Exit status: 0 on success, 1 when a proved identity fails on an instance
(a bug in this library), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .diffop import apply, apply_power, commutator_action, commutator_decompose
from .errors import ParseError, SoundnessError
from .expr import coefficient_parts, format_expr, lower, parse_ast, variables
from .fields import FieldSpec
from .lab import MODES, ExperimentConfig, run_experiment
from .polynomials import DiffOp, Ring
from .reduction import (
    LinearForm,
    PowerSumDecomposition,
    build_extended_operator,
    build_extended_product,
    decompose_power_sums,
    polarize_monomial,
)
from .weyl import fourier_automorphism, in_left_ideal_partials, weyl_mul

EXIT_OK, EXIT_SOUNDNESS, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # the same flags are accepted before and after the subcommand; SUPPRESS
    # keeps a subcommand-level default from clobbering a top-level value
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    p.add_argument("--field", default=d("q"), help="q, qi or fp:<p> (default q)")
    p.add_argument("--n", type=int, default=d(None), help="number of x variables (default: inferred)")
    p.add_argument("--bound", type=int, default=d(8), help="test bound M (default 8)")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--out", default=d(None), help="also write the output to this file")
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gvc",
        allow_abbrev=False,
        parents=[_global_flags(False)],
        description="Differential operators, the Weyl algebra and GVC experiments.",
    )
    parser.add_argument("--version", action="version", version=f"gvc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_global_flags(True)]

    def cmd(name, help_text):
        return sub.add_parser(name, parents=common, help=help_text, allow_abbrev=False)

    p = cmd("apply", "apply an operator to a polynomial")
    p.add_argument("--op", required=True)
    p.add_argument("--poly", required=True)

    p = cmd("power-apply", "apply L^m to a polynomial")
    p.add_argument("--op", required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--m", type=int, required=True)

    p = cmd("commutator", "[L, g] f = L(g f) - g (L f)")
    p.add_argument("--op", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--poly", required=True)

    p = cmd("decompose", "write [L, g] as a sum of L*(g* .) with deg g* < deg g")
    p.add_argument("--op", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--probe", help="also evaluate on this polynomial and compare")

    p = cmd("weyl-mul", "product of two Weyl-algebra elements")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    for name, help_text in (
        ("weyl-nf", "normal form (x's left of d's)"),
        ("ideal-member", "membership in the left ideal generated by the partials"),
        ("fourier", "image under x_i -> d_i, d_i -> -x_i"),
    ):
        p = cmd(name, help_text)
        p.add_argument("--expr", required=True)

    p = cmd("polarize", "write a monomial in the partials as a sum of powers of linear forms")
    p.add_argument("--monomial", required=True, help="exponents, comma separated, e.g. 1,1")

    p = cmd("reduce", "extended operator sum c_t (dy_t + l_t)^d_t and its coordinate change")
    p.add_argument("--op", required=True)

    p = cmd("reduce-product", "extended operator prod (dy_t + l_t) and its coordinate change")
    p.add_argument("--form", action="append", required=True, help="a linear form, repeatable")

    p = cmd("gvc", "run a GVC experiment from --config or inline flags")
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--op")
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--d", type=int)
    p.add_argument("--form", action="append")
    p.add_argument("--samples", type=int, default=0)

    p = cmd("verify-suite", "run the property batteries")
    p.add_argument("--only", action="append", help="battery name, repeatable")
    return parser


def _field(args) -> FieldSpec:
    try:
        return FieldSpec.parse(args.field)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _infer_n(args, texts) -> int:
    if args.n is not None:
        if args.n < 1:
            raise UsageError("--n must be at least 1")
        return args.n
    n = 1
    for text in texts:
        if text is None:
            continue
        for v in variables(parse_ast(text)):
            if v.kind in ("x", "dx"):
                n = max(n, v.index)
    return n


def _value(text: str, field: FieldSpec, n: int, want: str | None = None):
    return lower(parse_ast(text), Ring(field, n), want)


def _psd_text(psd: PowerSumDecomposition) -> str:
    parts = []
    for k, (c, form, d) in enumerate(psd.summands):
        negative, mag = coefficient_parts(c)
        body = f"({form})^{d}" if d else "1"
        if mag != "1":
            body = f"{mag}*{body}"
        if k == 0:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append((" - " if negative else " + ") + body)
    return "".join(parts) or "0"


def _psd_json(psd: PowerSumDecomposition) -> list[dict]:
    return [
        {"coefficient": str(c), "form": str(form), "degree": d} for c, form, d in psd.summands
    ]


def _matrix_json(m) -> list[list[str]]:
    return [[str(x) for x in row] for row in m]


def run(args) -> tuple[int, str]:
    """Execute a parsed command; returns ``(exit status, output text)``."""
    field = _field(args)
    cmd = args.command
    as_json = args.format == "json"

    if cmd in ("apply", "power-apply", "commutator"):
        n = _infer_n(args, [args.op, args.poly, getattr(args, "g", None)])
        L = _value(args.op, field, n, "op")
        f = _value(args.poly, field, n, "poly")
        if cmd == "apply":
            result = apply(L, f)
        elif cmd == "power-apply":
            if args.m < 0:
                raise UsageError("--m must be nonnegative")
            result = apply_power(L, args.m, f)
        else:
            result = commutator_action(L, _value(args.g, field, n, "poly"), f)
        text = format_expr(result)
        return EXIT_OK, json.dumps({"result": text}) if as_json else text

    if cmd == "decompose":
        n = _infer_n(args, [args.op, args.g, args.probe])
        L = _value(args.op, field, n, "op")
        g = _value(args.g, field, n, "poly")
        dec = commutator_decompose(L, g)
        pairs = [(format_expr(op), format_expr(poly)) for op, poly in dec.pairs]
        out = {"degree_bound": dec.degree_bound, "pairs": [{"op": a, "poly": b} for a, b in pairs]}
        if args.probe:
            probe = _value(args.probe, field, n, "poly")
            lhs, rhs = dec.evaluate(probe), commutator_action(L, g, probe)
            out["probe"] = {"decomposition": format_expr(lhs), "commutator": format_expr(rhs)}
            if lhs != rhs:
                raise SoundnessError(f"decomposition disagrees with the commutator on {probe}")
        if as_json:
            return EXIT_OK, json.dumps(out, indent=2)
        lines = [f"degree bound: {dec.degree_bound}"]
        lines += [f"({a}) applied to ({b})*f" for a, b in pairs] or ["(empty)"]
        if args.probe:
            lines.append(f"on probe: {out['probe']['decomposition']}")
        return EXIT_OK, "\n".join(lines)

    if cmd in ("weyl-mul", "weyl-nf", "ideal-member", "fourier"):
        texts = [args.a, args.b] if cmd == "weyl-mul" else [args.expr]
        n = _infer_n(args, texts)
        values = [_value(t, field, n, "weyl") for t in texts]
        if cmd == "weyl-mul":
            result = format_expr(weyl_mul(*values))
        elif cmd == "weyl-nf":
            result = format_expr(values[0])
        elif cmd == "fourier":
            result = format_expr(fourier_automorphism(values[0]))
        else:
            member = in_left_ideal_partials(values[0])
            if as_json:
                return EXIT_OK, json.dumps({"normal_form": format_expr(values[0]), "member": member})
            return EXIT_OK, "true" if member else "false"
        return EXIT_OK, json.dumps({"result": result}) if as_json else result

    if cmd == "polarize":
        try:
            alpha = tuple(int(t) for t in args.monomial.split(","))
        except ValueError:
            raise UsageError(f"bad --monomial {args.monomial!r}; expected e.g. 1,1") from None
        if args.n is not None and args.n != len(alpha):
            raise UsageError(f"--monomial has {len(alpha)} entries but --n is {args.n}")
        psd = polarize_monomial(alpha, field)
        ring = Ring(field, len(alpha))
        lhs = format_expr(DiffOp.monomial(ring, alpha))
        if as_json:
            return EXIT_OK, json.dumps({"monomial": lhs, "summands": _psd_json(psd)}, indent=2)
        return EXIT_OK, f"{lhs} = {_psd_text(psd)}"

    if cmd in ("reduce", "reduce-product"):
        if cmd == "reduce":
            n = _infer_n(args, [args.op])
            L = _value(args.op, field, n, "op")
            psd = decompose_power_sums(L)
            Lstar, ext = build_extended_operator(psd)
            target = ext.diagonal_target(psd)
        else:
            n = _infer_n(args, args.form)
            forms = [LinearForm.from_diffop(_value(t, field, n, "op")) for t in args.form]
            psd = None
            Lstar, ext = build_extended_product(forms)
            target = ext.product_target()
        transformed = ext.transform(Lstar)
        if transformed != target:
            raise SoundnessError(f"coordinate change gave {transformed}, expected {target}")
        coords = [format_expr(c) for c in ext.new_coordinates()]
        names = [ext.ring.var_name(k) + "'" for k in range(ext.ring.dim)]
        out = {
            "N": ext.N,
            "extended_operator": format_expr(Lstar),
            "coordinates": dict(zip(names, coords)),
            "substitution": _matrix_json(ext.substitution),
            "transformed_operator": format_expr(transformed),
        }
        if psd is not None:
            out["power_sums"] = _psd_json(psd)
        if as_json:
            return EXIT_OK, json.dumps(out, indent=2)
        lines = []
        if psd is not None:
            lines.append(f"L = {_psd_text(psd)}")
        lines.append(f"N = {ext.N}")
        lines.append(f"L* = {out['extended_operator']}")
        lines += [f"{k} = {v}" for k, v in out["coordinates"].items()]
        lines.append(f"L* in primed coordinates = {out['transformed_operator']}")
        return EXIT_OK, "\n".join(lines)

    if cmd == "gvc":
        config = _gvc_config(args, field)
        report = run_experiment(config, args.out)
        if as_json:
            return EXIT_OK, report.to_json().rstrip("\n")
        return EXIT_OK, _report_text(report)

    if cmd == "verify-suite":
        from .suite import run_all

        try:
            results = run_all(args.only)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        ok = all(r.passed for r in results)
        if as_json:
            text = json.dumps(
                [{"name": r.name, "passed": r.passed, "checked": r.checked, "failures": r.failures}
                 for r in results],
                indent=2,
            )
        else:
            lines = [r.line() for r in results]
            for r in results:
                lines += [f"    {msg}" for msg in r.failures]
            text = "\n".join(lines)
        return (EXIT_OK if ok else EXIT_SOUNDNESS), text

    raise UsageError(f"unknown command {cmd}")


def _gvc_config(args, field: FieldSpec) -> ExperimentConfig:
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        return ExperimentConfig.from_dict(data)
    mode = args.mode or ("theorem3-family" if args.form and not args.op else "stabilize")
    n = _infer_n(args, [args.op, args.f, args.g] + list(args.form or []))
    return ExperimentConfig(
        field=field,
        n=n,
        mode=mode,
        operator=args.op,
        f=args.f,
        g=args.g,
        d=args.d,
        M=args.bound,
        seed=args.seed,
        forms=args.form,
        samples=args.samples,
    )


def _report_text(report) -> str:
    lines = [
        f"mode: {report.mode}   field: {report.field}   bound M = {report.bound}   status: {report.status}",
        "  m  hypothesis  conclusion",
    ]
    show = {True: "true", False: "false", None: "-"}
    for s in report.per_m:
        lines.append(f"{s.m:3d}  {show[s.hypothesis]:>10}  {show[s.conclusion]:>10}")
    idx = report.stabilization_index
    lines.append(
        f"stabilization_index: {idx if idx is not None else 'none'} (certified only up to m = {report.bound})"
    )
    for key, value in report.details.items():
        if key != "comparisons":
            lines.append(f"{key}: {value}")
    return "\n".join(lines)


COMMANDS = (
    "apply", "power-apply", "commutator", "decompose", "weyl-mul", "weyl-nf", "ideal-member",
    "fourier", "polarize", "reduce", "reduce-product", "gvc", "verify-suite",
)


def _default_command(argv: list[str]) -> list[str]:
    # a bare `gvc --op ... --f ...` means the gvc subcommand
    if any(a in COMMANDS for a in argv) or any(a in ("-h", "--help", "--version") for a in argv):
        return argv
    if any(a.split("=")[0] in ("--op", "--config", "--mode", "--form") for a in argv):
        return ["gvc", *argv]
    return argv


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _default_command(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        status, text = run(args)
    except SoundnessError as exc:
        print(f"soundness failure: {exc}", file=sys.stderr)
        return EXIT_SOUNDNESS
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, TypeError, IndexError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(text)
    if args.out and args.command != "gvc":
        try:
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return status


if __name__ == "__main__":
    sys.exit(main())
