"""Batch driver: load groups, algebras and cobordisms, run the computations
and verification suites, emit deterministic JSON reports.

Exit status: 0 when every check in the report passes, 1 when a verification
failed (the report names it), 2 on input, validation or budget errors.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .algebra import (
    AlgebraError,
    dual_left_integrals,
    exterior_algebra,
    find_integrals,
    frobenius_from_integral,
    group_algebra,
    group_frobenius,
    lie_pairing,
    load_algebra,
    s_square_conjugator,
)
from .cobordism import (
    Cobordism,
    CobordismError,
    det_compose,
    det_line,
    preset_cobordism,
    tqft_evaluate,
)
from .cyclic import StringBracket, connes_maps
from .fields import FieldError, field_by_name
from .groups import GroupError, FiniteGroup, preset, PRESET_NAMES
from .hochschild import (
    BudgetError,
    bv_check,
    budget_from_env,
    centralizer_oracle,
    hochschild_dims,
)
from .linalg import LinalgError
from .reports import build_report, checks_from, emit


class InputError(ValueError):
    pass


def _field(args):
    return field_by_name(getattr(args, "field", None) or "Q")


def _algebra_from_args(args, need_field=True):
    """Resolve --group/--exterior/--algebra into (algebra, source-config)."""
    chosen = [
        name for name in ("group", "exterior", "algebra")
        if getattr(args, name, None)
    ]
    if len(chosen) != 1:
        raise InputError("exactly one of --group, --exterior, --algebra is required")
    src = chosen[0]
    if src == "group":
        g = (preset(args.group) if args.group in PRESET_NAMES
             else FiniteGroup.load(args.group))
        alg = group_algebra(g, _field(args))
        cfg = {"group": args.group, "field": _field(args).name}
    elif src == "exterior":
        degrees = [int(x) for x in args.exterior.split(",") if x.strip()]
        alg = exterior_algebra(degrees, _field(args))
        cfg = {"exterior": degrees, "field": _field(args).name}
    else:
        alg = load_algebra(args.algebra)
        cfg = {"algebra": args.algebra, "field": alg.field.name}
        if getattr(args, "field", None) and field_by_name(args.field) != alg.field:
            raise InputError(
                f"--field {args.field} conflicts with the field in {args.algebra}"
            )
    return alg, cfg


def _frobenius_for(alg, args):
    """The Frobenius structure used by BV / string-bracket / TQFT paths."""
    if alg.group is not None:
        return group_frobenius(alg)
    if alg.is_graded():
        return lie_pairing(alg)
    # ungraded file algebra: integral route
    if alg.hopf is None:
        raise InputError("algebra file carries no Hopf data to build a pairing from")
    lams = dual_left_integrals(alg)
    if not lams:
        raise InputError("no left integral of the dual Hopf algebra found")
    u = s_square_conjugator(alg)
    if u is None:
        raise InputError("no invertible conjugator for the antipode square found")
    return frobenius_from_integral(alg, lams[0], u)


def _budget(args):
    if getattr(args, "budget", None) is not None:
        return args.budget
    return budget_from_env()


def _emit(args, report):
    text = emit(report, getattr(args, "output", None))
    sys.stdout.write(text)
    return 0 if report["ok"] else 1


# -- subcommands --------------------------------------------------------------


def cmd_hochschild(args):
    alg, cfg = _algebra_from_args(args)
    cfg.update(coeff=args.coeff, max_degree=args.max_degree)
    dims = hochschild_dims(alg, args.coeff, args.max_degree, _budget(args))
    report = build_report(
        "hochschild", cfg,
        {"dims": [[n, d] for n, d in dims], "certified_degree": args.max_degree - 2},
        [], __version__,
    )
    return _emit(args, report)


def cmd_oracle(args):
    alg, cfg = _algebra_from_args(args)
    if alg.group is None:
        raise InputError("the centralizer oracle needs a group")
    cfg.update(max_degree=args.max_degree)
    budget = _budget(args)
    oracle = centralizer_oracle(alg.group, alg.field, args.max_degree, budget)
    results = {"oracle_dims": [[n, d] for n, d in oracle]}
    checks = []
    if args.compare:
        direct = hochschild_dims(alg, "self", args.max_degree, budget)
        results["hochschild_dims"] = [[n, d] for n, d in direct]
        checks = [{
            "name": "oracle equivalence (dims of HH vs centralizer sum)",
            "ok": [d for _, d in direct] == [d for _, d in oracle],
        }]
    report = build_report("oracle", cfg, results, checks, __version__)
    return _emit(args, report)


def cmd_bv_check(args):
    alg, cfg = _algebra_from_args(args)
    frob = _frobenius_for(alg, args)
    flip = args.bv_sign_convention == "flipped"
    cfg.update(max_degree=args.max_degree, bv_sign_convention=args.bv_sign_convention)
    rep = bv_check(alg, frob, args.max_degree, _budget(args), flip)
    good, total = rep.counts()
    report = build_report(
        "bv-check", cfg,
        {"checks_passed": good, "checks_total": total},
        checks_from(rep), __version__,
    )
    return _emit(args, report)


def cmd_cyclic(args):
    alg, cfg = _algebra_from_args(args)
    cfg.update(max_degree=args.max_degree)
    budget = _budget(args)
    res = connes_maps(alg, args.max_degree, budget)
    hc = res["hc"]
    report = build_report(
        "cyclic", cfg,
        {
            "dims": [[n, hc.dim(n)] for n in range(args.max_degree + 1)],
            "certified_degree": hc.certified,
        },
        checks_from(res["report"]), __version__,
    )
    return _emit(args, report)


def cmd_string_bracket(args):
    alg, cfg = _algebra_from_args(args)
    frob = _frobenius_for(alg, args)
    cfg.update(max_degree=args.max_degree)
    sb = StringBracket(alg, frob, args.max_degree, _budget(args))
    rep1 = sb.antisymmetry_jacobi_check()
    rep2 = sb.morphism_check()
    checks = checks_from(rep1) + checks_from(rep2)
    report = build_report(
        "string-bracket", cfg,
        {"certified_degree": sb.certified()},
        checks, __version__,
    )
    return _emit(args, report)


def cmd_frobenius(args):
    alg, cfg = _algebra_from_args(args)
    frob = _frobenius_for(alg, args)
    rep = frob.report
    checks = [
        {"name": "nondegenerate", "ok": rep.nondegenerate},
        {"name": "frobenius identity", "ok": rep.frobenius_identity},
    ]
    report = build_report(
        "frobenius", cfg,
        {
            "symmetric": rep.symmetric,
            "degree": rep.degree,
            "pairing": [[alg.field.fmt(v) for v in row] for row in frob.pairing.data],
            "failures": [list(fx) for fx in rep.failures],
        },
        checks, __version__,
    )
    return _emit(args, report)


def cmd_integrals(args):
    alg, cfg = _algebra_from_args(args)
    left, right, unimodular = find_integrals(alg)
    f = alg.field
    report = build_report(
        "integrals", cfg,
        {
            "left": [[f.fmt(c) for c in v] for v in left],
            "right": [[f.fmt(c) for c in v] for v in right],
            "unimodular": unimodular,
            "basis": alg.names,
        },
        [], __version__,
    )
    return _emit(args, report)


def cmd_tqft(args):
    if args.action != "eval":
        raise InputError(f"unknown tqft action {args.action!r}")
    alg, cfg = _algebra_from_args(args)
    frob = _frobenius_for(alg, args)
    if args.cobordism:
        cob = Cobordism.load(args.cobordism)
        cfg["cobordism"] = args.cobordism
    elif args.preset:
        cob = preset_cobordism(args.preset)
        cfg["cobordism_preset"] = args.preset
    else:
        raise InputError("tqft eval needs --cobordism or --preset")
    tm = tqft_evaluate(alg, frob, cob, args.strict_positive_boundary)
    f = alg.field
    report = build_report(
        "tqft", cfg,
        {
            "in_circles": tm.p,
            "out_circles": tm.q,
            "matrix": [[f.fmt(v) for v in row] for row in tm.matrix.data],
            "euler_characteristic": cob.euler_characteristic(),
        },
        [], __version__,
    )
    return _emit(args, report)


def cmd_detline(args):
    cob = Cobordism.load(args.cobordism)
    line = det_line(cob, power=args.power)
    cfg = {"cobordism": args.cobordism, "power": args.power}
    results = {"rank": line.rank, "coeff": line.coeff,
               "euler_characteristic": cob.euler_characteristic()}
    if args.compose:
        other = det_line(Cobordism.load(args.compose), power=args.power)
        glued = det_compose(line, other)
        cfg["compose"] = args.compose
        results["composed"] = {"rank": glued.rank, "coeff": glued.coeff}
    report = build_report("detline", cfg, results, [], __version__)
    return _emit(args, report)


# -- parser -------------------------------------------------------------------


def _add_algebra_opts(p, field_default=None):
    p.add_argument("--group", help=f"group preset ({', '.join(PRESET_NAMES)}) or JSON file")
    p.add_argument("--exterior", help="comma-separated odd generator degrees")
    p.add_argument("--algebra", help="algebra JSON file")
    p.add_argument("--field", default=field_default, help="Q or Fp (e.g. F2)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="hbv",
        description="Exact computations: Hochschild BV structure, cyclic "
                    "string brackets, Frobenius/Hopf verification, 2d TQFT.",
    )
    ap.add_argument("--version", action="version", version=f"hbv {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, degree=True):
        _add_algebra_opts(p)
        if degree:
            p.add_argument("--max-degree", type=int, default=4,
                           help="truncation degree N (certified to N-2)")
        p.add_argument("--budget", type=int, default=None,
                       help="cochain dimension cap (default 20000 or HBV_BUDGET)")
        p.add_argument("-o", "--output", help="write the report to this path")

    p = sub.add_parser("hochschild", help="Hochschild cohomology dimension table")
    common(p)
    p.add_argument("--coeff", choices=("self", "dual"), default="self")
    p.set_defaults(func=cmd_hochschild)

    p = sub.add_parser("oracle", help="centralizer-decomposition dimension table")
    common(p)
    p.add_argument("--compare", action="store_true",
                   help="also run the direct computation and compare")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bv-check", help="BV identity suite on HH*(A;A)")
    common(p)
    p.add_argument("--bv-sign-convention", choices=("standard", "flipped"),
                   default="standard")
    p.set_defaults(func=cmd_bv_check)

    p = sub.add_parser("cyclic", help="cyclic cohomology and the Connes sequence")
    common(p)
    p.set_defaults(func=cmd_cyclic)

    p = sub.add_parser("string-bracket", help="Lie bracket on cyclic cohomology")
    common(p)
    p.set_defaults(func=cmd_string_bracket)

    p = sub.add_parser("frobenius", help="verify a Frobenius pairing")
    common(p, degree=False)
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("integrals", help="left/right Hopf integrals, unimodularity")
    common(p, degree=False)
    p.set_defaults(func=cmd_integrals)

    p = sub.add_parser("tqft", help="evaluate cobordisms on a Frobenius algebra")
    p.add_argument("action", choices=("eval",))
    _add_algebra_opts(p)
    p.add_argument("--cobordism", help="cobordism JSON file")
    p.add_argument("--preset", help="cobordism preset (cyl, pants, ...)")
    p.add_argument("--strict-positive-boundary", action="store_true")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_tqft)

    p = sub.add_parser("detline", help="determinant line of a cobordism")
    p.add_argument("--cobordism", required=True)
    p.add_argument("--compose", help="second cobordism to glue")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_detline)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.time()
    try:
        status = args.func(args)
    except (InputError, FieldError, GroupError, AlgebraError, CobordismError,
            BudgetError, LinalgError, OSError, ValueError) as exc:
        print(f"hbv: error: {exc}", file=sys.stderr)
        return 2
    finally:
        print(f"hbv: {time.time() - t0:.2f}s", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
