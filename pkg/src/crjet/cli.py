"""Command line front end: ``crjet <command> [options]``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .automorphisms import (
    FormalCheckError,
    OutOfChartError,
    evaluate_system,
    formal_to_convergent,
    lie_dim,
    lie_dim_sweep,
    reconstruct,
    required_normal_form,
    verify_map,
)
from .dsl import ParseError, parse_map, parse_point
from .hypersurface import HypersurfaceError, load_hypersurface, nondegeneracy, normal_coordinates
from .jets import JetError, JetGroupElement, eta
from .parametrization import ParamSystem, Parametrization, ParametrizationError
from .series import (
    PrecisionError,
    RingError,
    SeriesError,
    SeriesTuple,
    format_series,
)
from .series.serialize import series_to_json

EXIT_OK, EXIT_RESIDUAL, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# shared plumbing
# ---------------------------------------------------------------------------

def _point(text):
    return parse_point(text) if text else None


def _hyp(path):
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    return load_hypersurface(path)


def _k0_at(df, point) -> int:
    rep = nondegeneracy(normal_coordinates(df, point, D=8))
    if rep.degenerate:
        raise HypersurfaceError("the hypersurface is not finitely nondegenerate at the base point (checked to order 7)")
    return rep.k0


def _order(args, k0: int) -> int:
    D = args.order if args.order is not None else 2 * k0 + 4
    if D < 2 * k0 + 2:
        raise ParametrizationError(f"--order must be at least 2 k0 + 2 = {2 * k0 + 2}")
    return D


def _pair(args):
    """Source and target normal forms plus the parametrization engine."""
    src_path = args.source or args.file
    if not src_path:
        raise UsageError("a hypersurface file (or --source) is required")
    tgt_path = args.target or src_path
    sdf, tdf = _hyp(src_path), _hyp(tgt_path)
    sp = _point(args.base_point)
    tp = _point(getattr(args, "target_point", None)) or (sp if tgt_path == src_path else None)
    k0 = max(_k0_at(sdf, sp), _k0_at(tdf, tp))
    D = _order(args, k0)
    a = required_normal_form(sdf, sp, D)
    b = required_normal_form(tdf, tp, D)
    par = Parametrization(a, b, D, k0=args.jet_order // 2 if args.jet_order else None)
    return par


def _load_json_arg(text):
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not a JSON file or inline JSON: {text[:40]!r}") from exc


def _jet(args, par: Parametrization):
    if args.jet:
        jet = JetGroupElement.from_json(_load_json_arg(args.jet))
    elif args.map:
        jet = eta(parse_map(args.map, par.n), 2 * par.k0)
    else:
        jet = JetGroupElement.identity(par.n, 2 * par.k0)
    if jet.k != 2 * par.k0:
        raise JetError(f"the jet must have order 2 k0 = {2 * par.k0}")
    return jet


def _coordinate_changes(par: Parametrization) -> dict:
    def show(nf):
        return [format_series(f) for f in nf.to_original]
    return {"source": show(par.source), "target": show(par.target)}


def _map_json(H: SeriesTuple) -> dict:
    return {"text": [format_series(h) for h in H], "series": [series_to_json(h) for h in H]}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_normal_form(args):
    df = _hyp(args.file)
    pt = _point(args.base_point)
    D = args.order or 8
    nf = normal_coordinates(df, pt, D=D)
    return EXIT_OK, {
        "Q": format_series(nf.Q),
        "Q_series": series_to_json(nf.Q),
        "exact": nf.Q.prec.exact,
        "D": D,
        "base_point": [p.to_json() for p in nf.base_point],
        "coordinate_change": [format_series(f) for f in nf.to_original],
        "steps": list(nf.steps),
        "checks": nf.check(),
    }


def cmd_nondegen(args):
    df = _hyp(args.file)
    D = args.order or 8
    nf = normal_coordinates(df, _point(args.base_point), D=D)
    rep = nondegeneracy(nf)
    return (EXIT_OK if not rep.degenerate else EXIT_PRECONDITION), rep.to_json()


def cmd_param_equations(args):
    par = _pair(args)
    mode = args.mode or "symbolic"
    if mode == "symbolic":
        ps = par.run(JetGroupElement.symbolic(par.space))
    elif mode == "numeric":
        ps = par.run(_jet(args, par))
    else:
        raise UsageError("param-equations supports --mode symbolic or numeric")
    out = ps.to_json()
    out["coordinate_changes"] = _coordinate_changes(par)
    return EXIT_OK, out


def cmd_verify(args):
    par = _pair(args)
    if not args.map:
        raise UsageError("verify needs --map")
    H = parse_map(args.map, par.n)
    rep = verify_map(H, par.source, par.target, par.D, 2 * par.k0)
    out = rep.to_json()
    if rep.verified and rep.jet.in_G0:
        res = evaluate_system(par, rep.jet)
        out["system"] = res.to_json()
        code = EXIT_OK if res.zero else EXIT_RESIDUAL
    else:
        code = EXIT_OK if rep.verified else EXIT_RESIDUAL
    out["coordinate_changes"] = _coordinate_changes(par)
    return code, out


def cmd_reconstruct(args):
    if args.system:
        ps = ParamSystem.from_json(_load_json_arg(args.system))
        if not args.jet:
            raise UsageError("reconstruct with --system needs --jet")
        jet = JetGroupElement.from_json(_load_json_arg(args.jet))
        K = reconstruct(ps, jet)
        return EXIT_OK, {"map": _map_json(K), "D": ps.metadata["D"]}
    par = _pair(args)
    K = reconstruct(par, _jet(args, par))
    return EXIT_OK, {"map": _map_json(K), "D": par.D, "coordinate_changes": _coordinate_changes(par)}


def cmd_lie_dim(args):
    par = _pair(args)
    if args.mode == "symbolic":
        rep = lie_dim(par.run(JetGroupElement.symbolic(par.space)))
    else:
        rep = lie_dim(par)
    return EXIT_OK, rep.to_json()


def cmd_lie_dim_sweep(args):
    df = _hyp(args.file)
    if not args.points:
        raise UsageError("lie-dim-sweep needs --points")
    pts = [parse_point(p) for p in args.points.split(";") if p.strip()]
    reps = lie_dim_sweep(df, pts, args.order)
    code = EXIT_OK if all(r.error is None for r in reps) else EXIT_PRECONDITION
    return code, {"reports": [r.to_json() for r in reps]}


def cmd_formal_check(args):
    par = _pair(args)
    if not args.map:
        raise UsageError("formal-check needs --map")
    H = parse_map(args.map, par.n)
    try:
        K = formal_to_convergent(H, par)
    except FormalCheckError as exc:
        out = {"accepted": False, "reason": str(exc), "D": par.D}
        if exc.report is not None:
            out["certificate"] = exc.report.to_json()
        return EXIT_RESIDUAL, out
    return EXIT_OK, {"accepted": True, "D": par.D, "map": _map_json(K)}


COMMANDS = {
    "normal-form": cmd_normal_form,
    "nondegen": cmd_nondegen,
    "param-equations": cmd_param_equations,
    "verify": cmd_verify,
    "reconstruct": cmd_reconstruct,
    "lie-dim": cmd_lie_dim,
    "lie-dim-sweep": cmd_lie_dim_sweep,
    "formal-check": cmd_formal_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="crjet", description="Jet parametrization of CR automorphisms (exact arithmetic).")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("file", nargs="?", help="hypersurface file (DSL)")
        s.add_argument("--order", type=int, help="truncation degree D")
        s.add_argument("--jet-order", type=int, help="override the jet order 2 k0")
        s.add_argument("--base-point", help='base point "z,w" on the (source) hypersurface')
        s.add_argument("--target-point", help="base point on the target hypersurface")
        s.add_argument("--mode", choices=("numeric", "dual", "symbolic"))
        s.add_argument("--format", choices=("json", "text"), default="json")
        s.add_argument("--out", help="write the report to this path")
        s.add_argument("--source")
        s.add_argument("--target")
        s.add_argument("--map", help='polynomial map "(f, g)" in normal coordinates')
        s.add_argument("--jet", help="jet JSON (file or inline)")
        s.add_argument("--system", help="param-equations JSON (file or inline)")
        s.add_argument("--points", help='points "z,w; z,w" for lie-dim-sweep')
    return p


def _text(obj, prefix="") -> list:
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{prefix}{k}:")
                lines.extend(_text(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{prefix}-")
                lines.extend(_text(v, prefix + "  "))
            else:
                lines.append(f"{prefix}- {v}")
    else:
        lines.append(f"{prefix}{obj}")
    return lines


def _emit(report, args, stream):
    fmt = getattr(args, "format", "json") or "json"
    if fmt == "text":
        text = "\n".join(_text(report)) + "\n"
    else:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stream.write(text)


def run(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        code, report = COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"crjet: usage error: {exc}\n")
        return EXIT_USAGE
    except FormalCheckError as exc:
        report = {"accepted": False, "reason": str(exc)}
        if exc.report is not None:
            report["certificate"] = exc.report.to_json()
        _emit(report, args, stream)
        return EXIT_RESIDUAL
    except (HypersurfaceError, ParametrizationError, PrecisionError, SeriesError, RingError,
            JetError, ParseError, OutOfChartError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args, stream)
        return EXIT_PRECONDITION
    _emit(report, args, stream)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
