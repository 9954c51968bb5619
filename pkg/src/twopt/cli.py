"""Command-line front end.

    twopt compute pn 1 --dmax 1
    twopt verify wps 1,1,2 --dmax 2
    twopt condition builtin X2 --composition 5,1

Exit codes: 0 success (including documented expected failures), 1 engine
error, 2 invalid input, 3 divisibility, 4 condition, 5 limit, 6 not
certified, 7 a verification check failed.
"""
import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import tables
from .engine import (Report, build_r, build_s_adjoint, check_dimension, check_string_divisor,
                     check_swap_symmetry, check_unitarity, extract_invariants)
from .errors import DivisibilityError, LimitError, NotCertifiedError, TwoPointError, ValidationError
from .oracle import check_against_oracle
from .projective import pn_target
from .toric import (SEMI_FANO_COMPOSITIONS, builtin_X1, builtin_X2, condition_scan, jx_criterion,
                    limit_class_degrees, load_toric, nonequivariant_limit, semifano_builtin,
                    toric_two_point, x2_f_coefficients)
from .wps import closed_form_as_table, wps_basis_data, wps_target

CHECK_FAILED = 7


# --------------------------------------------------------------------------
# argument handling


def _lambda_arg(text):
    if text is None:
        return None
    try:
        return [[Fraction(x) for x in part.split(",")] for part in text.split(";")]
    except ValueError:
        raise ValidationError(f"cannot parse --lambda {text!r}") from None


def _weights(text):
    try:
        w = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ValidationError(f"weights must be comma-separated integers, got {text!r}") from None
    if len(w) < 2 or min(w) < 1:
        raise ValidationError("need at least two positive weights")
    return w


def _bound(args, kind):
    if args.dmax is None:
        return Fraction(1) if kind in ("pn", "wps") else 1
    d = Fraction(args.dmax)
    if d < 0:
        raise ValidationError("--dmax must be non-negative")
    if kind in ("toric", "builtin"):
        if d.denominator != 1:
            raise ValidationError("toric degree bounds are integers")
        return int(d)
    return d


def load_target(args):
    """Return ``(kind, object)`` for the target descriptor on the command line."""
    kind, value = args.kind, args.target
    lam = _lambda_arg(getattr(args, "lam", None))
    if kind in ("pn", "wps") and lam is not None:
        raise ValidationError("--lambda only applies to toric targets")
    if kind == "pn":
        try:
            n = int(value)
        except ValueError:
            raise ValidationError(f"pn needs an integer dimension, got {value!r}") from None
        return kind, pn_target(n)
    if kind == "wps":
        return kind, wps_basis_data(_weights(value))
    if kind == "toric":
        path = Path(value)
        if not path.exists():
            from .toric import FANS
            if (FANS / f"{value}.json").exists():
                path = FANS / f"{value}.json"
            else:
                raise ValidationError(f"no such fan file: {value}")
        data = json.loads(path.read_text())
        if lam is not None:
            data["lambda"] = [[str(x) for x in a] for a in lam]
        return kind, load_toric(data, data.get("name", path.stem))
    if kind == "builtin":
        name = value.upper()
        if name not in SEMI_FANO_COMPOSITIONS:
            raise ValidationError(f"unknown builtin {value!r}; choose X1 or X2")
        return kind, (builtin_X1 if name == "X1" else builtin_X2)(lam)
    raise ValidationError(f"unknown target kind {kind!r}")


# --------------------------------------------------------------------------
# pipelines


def _run_matrix(target, bound, depth, workers):
    A = build_s_adjoint(target, bound, depth, workers)
    R = build_r(A, target, bound)
    return A, R, extract_invariants(R, target)


def compute_table(args):
    kind, obj = load_target(args)
    bound = _bound(args, kind)
    if kind == "pn":
        return _run_matrix(obj, bound, args.depth, args.workers)[2]
    if kind == "wps":
        return _run_matrix(wps_target(obj), bound, args.depth, args.workers)[2]
    if kind == "builtin" and obj.name == "X2" and not args.override:
        raise NotCertifiedError("X2 extraction needs the mirror change of variables; "
                                "pass --override for the uncorrected pipeline")
    runs = [toric_two_point(obj, bound, args.depth, w, args.workers) for w in (0, 1)]
    if args.fixed_point:
        return runs[0].table
    return nonequivariant_limit(obj, bound, args.depth, runs=runs)


def _divisibility_report(name, fn):
    rep = Report(f"divisibility[{name}]")
    try:
        out = fn()
        rep.checked += 1
        return rep, out
    except DivisibilityError as exc:
        rep.fail(str(exc))
        return rep, None


def verify_reports(args):
    kind, obj = load_target(args)
    bound = _bound(args, kind)
    reports = []
    if kind in ("pn", "wps"):
        target = obj if kind == "pn" else wps_target(obj)
        A = build_s_adjoint(target, bound, args.depth, args.workers)
        reports.append(check_unitarity(A, target))
        rep, R = _divisibility_report(target.name, lambda: build_r(A, target, bound))
        reports.append(rep)
        if R is None:
            return reports
        inv = extract_invariants(R, target)
        reports += [check_string_divisor(inv, A, target), check_swap_symmetry(inv), check_dimension(inv, target)]
        if kind == "pn" and target.dim <= 2 and bound >= 1:
            reports.append(check_against_oracle(inv, target.dim, min(int(bound), 3)))
        if kind == "wps":
            rep = Report(f"route-equivalence[{target.name}]")
            closed = closed_form_as_table(obj, inv.degrees)
            for key in sorted(set(closed.values) | set(inv.values), key=inv.sort_key):
                rep.checked += 1
                if closed.get(*key) != inv.get(*key):
                    rep.fail(f"{inv.label(key)}: matrix {inv.get(*key)}, closed form {closed.get(*key)}")
            reports.append(rep)
        return reports

    spec = obj
    if kind == "builtin":
        reports += semifano_builtin(spec.name, int(bound) or 1)["reports"]
        if spec.name == "X2":
            rep = Report("x2-series")
            f = x2_f_coefficients(max(int(bound), 1))
            rep.checked = len(f)
            reports.append(rep)
            return reports
    else:
        for S in spec.cones:
            reports.append(condition_scan(spec, [j + 1 for j in S], bound))
        if spec.fano and bound >= 1:
            jx = jx_criterion(spec, bound)
            rep = Report(f"jx-criterion[{spec.name}; truncated at {bound}]", checked=1)
            if not jx["satisfied"]:
                rep.fail(f"j_X estimate {jx['jx']} < dim - 1 = {spec.n - 1}")
            reports.append(rep)
    runs = []
    for w in (0, 1):
        run = toric_two_point(spec, bound, args.depth, w, args.workers)
        reports.append(check_unitarity(run.A, run.target))
        reports.append(check_string_divisor(run.table, run.A, run.target))
        runs.append(run)
    rep = Report(f"limit-certification[{spec.name}]")
    try:
        lim = nonequivariant_limit(spec, bound, args.depth, runs=runs)
        rep.checked = len(lim)
        reports.append(rep)
    except LimitError as exc:
        rep.fail(str(exc))
        reports.append(rep)
        return reports
    reports.append(check_swap_symmetry(lim))
    reports.append(check_dimension(lim, class_degree=limit_class_degrees(spec), dim=spec.n, c1=spec.c1))
    return reports


def condition_reports(args):
    kind, spec = load_target(args)
    if kind not in ("toric", "builtin"):
        raise ValidationError("condition scans apply to toric and builtin targets")
    bound = 3 if args.dmax is None else (_bound(args, kind) or 1)
    known = SEMI_FANO_COMPOSITIONS.get(spec.name, {}) if kind == "builtin" else {}
    if args.composition:
        try:
            comps = [tuple(int(x) for x in args.composition.split(","))]
        except ValueError:
            raise ValidationError(f"cannot parse composition {args.composition!r}") from None
        for c in comps[0]:
            if not 1 <= c <= spec.N:
                raise ValidationError(f"ray index {c} out of range 1..{spec.N}")
    elif known:
        comps = list(known)
    else:
        comps = [tuple(j + 1 for j in S) for S in spec.cones]
    reports = []
    for comp in comps:
        rep = condition_scan(spec, comp, bound)
        if comp in known:
            rep.expected = known[comp]
        reports.append(rep)
    return reports


# --------------------------------------------------------------------------
# entry point


def build_parser():
    p = argparse.ArgumentParser(prog="twopt", description="Exact genus-zero two-point descendant invariants.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("compute", "compute an invariant table"),
                           ("verify", "run the consistency checks for a target"),
                           ("condition", "scan the normalization condition for operator compositions")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("kind", choices=["pn", "wps", "toric", "builtin"])
        s.add_argument("target", help="dimension, weights (1,2,3), fan JSON file or X1/X2")
        s.add_argument("--dmax", default=None, help="degree bound (rational for wps)")
        s.add_argument("--depth", type=int, default=None, help="override the 1/z truncation depth")
        s.add_argument("--lambda", dest="lam", default=None,
                       help="equivariant parameters: 'a,b,...' or two assignments 'a,...;b,...'")
        s.add_argument("--format", choices=["json", "csv"], default="json")
        s.add_argument("--out", default=None, help="write the table or report here")
        s.add_argument("--workers", type=int, default=None)
        s.add_argument("--override", action="store_true", help="allow uncertified X2 extraction")
        if name == "compute":
            s.add_argument("--fixed-point", action="store_true",
                           help="toric: emit the fixed-point basis table at the first lambda assignment")
        if name == "condition":
            s.add_argument("--composition", default=None, help="1-based ray indices, e.g. 5,1")
    return p


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report_output(reports, args):
    ok = all(r.ok for r in reports)
    if args.format == "json":
        text = json.dumps({"ok": ok, "reports": [r.to_dict() for r in reports]}, indent=1) + "\n"
    else:
        text = "".join(r.line() + "\n" for r in reports)
    return ok, text


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "compute":
            table = compute_table(args)
            text = tables.dumps(table) if args.format == "json" else tables.to_csv(table)
            _emit(text, args.out)
            if args.out:
                print(f"wrote {len(table)} entries to {args.out}")
            return 0
        reports = verify_reports(args) if args.command == "verify" else condition_reports(args)
        ok, text = _report_output(reports, args)
        if args.out:
            Path(args.out).write_text(text)
            for r in reports:
                print(r.line())
        else:
            sys.stdout.write(text)
        if ok:
            return 0
        return CHECK_FAILED if args.command == "verify" else 4
    except TwoPointError as exc:
        print(json.dumps(exc.to_dict()))
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
