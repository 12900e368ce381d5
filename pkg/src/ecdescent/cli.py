"""Command-line front end.

Subcommands: enumerate, descent, descent3, watkins, stats, verify.  Output
is CSV and/or a single JSON summary document on stdout (the JSON line is
last); diagnostics go to stderr.  Exit codes: 0 success, 1 mathematical
inconsistency or singular input, 2 usage or parse errors.

Enumerations can be partitioned across worker processes; merged rows are
canonically sorted before emission, so output is byte-identical for any
worker count.
"""

import argparse
import concurrent.futures
import json
import sys
from fractions import Fraction
from functools import partial
from math import gcd, isqrt

from . import curves, descent2, descent3, families, polys, stats, watkins
from .arith import is_squarefree, primes_up_to
from .config import load_config
from .errors import DatasetFormatError, DomainError, PreconditionError, SingularCurve
from .families import E2Param

EXIT_OK = 0
EXIT_INCONSISTENT = 1
EXIT_USAGE = 2


def _emit_csv(header, rows, out):
    out.write(header + "\n")
    for row in rows:
        out.write(row + "\n")


def _emit_json(doc, out):
    out.write(json.dumps(doc, sort_keys=True) + "\n")


def _chunk_map(fn, items, workers):
    """Map fn over items, optionally across processes; order-stable result."""
    if workers <= 1 or len(items) < 2 * workers:
        return [fn(it) for it in items]
    chunks = [items[i::workers] for i in range(workers)]
    out = []
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(_map_list, [(fn, ch) for ch in chunks]):
            out.extend(part)
    return out


def _map_list(job):
    fn, items = job
    return [fn(it) for it in items]


# ---------------------------------------------------------------- enumerate


def _e2_pairs(X):
    out = []
    for a in range(-X, X + 1):
        for b in range(-X * X, X * X + 1):
            if b * (a * a - 4 * b) != 0:
                out.append((a, b))
    return out


def _e2_row(pair, policy, rank_bounds, real_place, depth_margin):
    a, b = pair
    param = E2Param(a, b)
    model, _ = families.e2_curve(param)
    omega_n, _ = curves.conductor_support(model, policy)
    fields = [f"{a};{b}", str(model.A), str(model.B), str(omega_n)]
    if rank_bounds:
        est = descent2.rank_upper(param, real_place, depth_margin)
        fields.append(str(est.rank_upper))
    return ",".join(fields)


def _e3_rows(X, policy):
    """Parameters whose raw model lies in the height window (the region the
    count uses); the scaling (a, b) -> (ua, u^3 b) would otherwise make the
    parameter set unbounded.  Rows carry the minimal model."""
    rows = []
    # the two b-intervals separate once 6.75 a^6 exceeds X^3 + 1.5 a^2 X^2,
    # around |a| ~ 0.8 sqrt(X)
    amax = int(1.5 * X**0.5) + 3
    for a in range(-amax, amax + 1):
        bmax = isqrt(X**3 + 27 * a**6) + 1
        for b in range(-bmax, bmax + 1):
            try:
                raw = families.e3_from_torsion(a, b)
            except SingularCurve:
                continue
            if not curves.height_leq(raw, X):
                continue
            model = curves.minimize(raw)
            omega_n, _ = curves.conductor_support(model, policy)
            rows.append(f"{a};{b},{model.A},{model.B},{omega_n}")
    return rows


def _tate_rows(ell, X, policy):
    box = families.param_box(ell)
    build = families.e5_curve if ell == 5 else families.e7_curve
    num_max = int(stats.SAFETY_BOX_FACTOR * X ** float(box.m)) + 1
    den_max = int(stats.SAFETY_BOX_FACTOR * X ** float(box.n)) + 1
    best = {}
    for den in range(1, den_max + 1):
        for num in range(-num_max, num_max + 1):
            if gcd(num, den) != 1:
                continue
            try:
                model = curves.short_model(build(Fraction(num, den)))
            except SingularCurve:
                continue
            if not curves.height_leq(model, X):
                continue
            key = (model.A, model.B)
            tag = f"{num}/{den}"
            if key not in best or tag < best[key]:
                best[key] = tag
    rows = []
    for (A, B), tag in best.items():
        omega_n, _ = curves.conductor_support(curves.ShortWeierstrass(A, B), policy)
        rows.append(f"{tag},{A},{B},{omega_n}")
    return rows


def _type1_row(a, policy, rank_bounds):
    E, _, _ = families.type1(a)
    omega_n, _ = curves.conductor_support(E, policy)
    fields = [str(a), str(E.A), str(E.B), str(omega_n)]
    if rank_bounds:
        bound, _ = descent3.rank_upper_type1(a)
        fields.append(str(bound))
    return ",".join(fields)


def _squarefree_range(R):
    return [D for s in (1, -1) for D in (s * k for k in range(1, R + 1)) if is_squarefree(D)]


def cmd_enumerate(args, cfg, out):
    policy = cfg.policy
    rank_bounds = args.rank_bounds
    header = "params,A,B,omega_N" + (",rank_upper" if rank_bounds else "")
    if args.family == "e2":
        if args.height is None:
            raise DomainError("--height is required for family e2")
        fn = partial(_e2_row, policy=policy, rank_bounds=rank_bounds,
                     real_place=cfg.solubility_real_place,
                     depth_margin=cfg.depth_cap_extra)
        rows = _chunk_map(fn, _e2_pairs(args.height), cfg.workers)
    elif args.family == "e3":
        if rank_bounds:
            raise DomainError("--rank-bounds is supported for families e2 and type1")
        rows = _e3_rows(args.height, policy)
    elif args.family in ("e5", "e7"):
        if rank_bounds:
            raise DomainError("--rank-bounds is supported for families e2 and type1")
        rows = _tate_rows(int(args.family[1]), args.height, policy)
    elif args.family == "type1":
        if args.height is None:
            raise DomainError("--height is required for family type1")
        amax = args.height**3
        fn = partial(_type1_row, policy=policy, rank_bounds=rank_bounds)
        values = [a for a in range(-amax, amax + 1) if a != 0]
        rows = _chunk_map(fn, values, cfg.workers)
    elif args.family == "twist-e0":
        R = args.range if args.range is not None else args.height
        if R is None:
            raise DomainError("--range (or --height) is required for twist-e0")
        rows = []
        for D in _squarefree_range(R):
            E, cls = families.twist_e0(D, cfg.nu2_manin)
            omega_n, _ = curves.conductor_support(E, policy)
            rows.append(f"{D},{E.A},{E.B},{omega_n}")
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown family {args.family}")
    rows.sort()
    _emit_csv(header, rows, out)
    return EXIT_OK


# ------------------------------------------------------------------ descent


def cmd_descent(args, cfg, out):
    try:
        param = E2Param(args.a, args.b)
    except SingularCurve as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    est = descent2.rank_upper(param, cfg.solubility_real_place, cfg.depth_cap_extra)
    _emit_json(
        {
            "a": args.a,
            "b": args.b,
            "phi_classes": list(est.phi_classes),
            "phihat_classes": list(est.phihat_classes),
            "dim_phi": est.dim_phi,
            "dim_phihat": est.dim_phihat,
            "rank_upper": est.rank_upper,
            "clamped": est.clamped,
            "config": cfg.as_dict(),
        },
        out,
    )
    return EXIT_OK


def cmd_descent3(args, cfg, out):
    if args.a == 0:
        print("error: a must be nonzero", file=sys.stderr)
        return EXIT_INCONSISTENT
    bound, comp = descent3.rank_upper_type1(args.a)
    _emit_json(
        {
            "a": args.a,
            "bound": bound,
            "components": {
                "class_field_a": comp.class_a.field_kernel,
                "r3_a": comp.class_a.r3,
                "method_a": comp.class_a.method,
                "unit_a": comp.unit_a,
                "class_field_m27a": comp.class_m27a.field_kernel,
                "r3_m27a": comp.class_m27a.r3,
                "method_m27a": comp.class_m27a.method,
                "unit_m27a": comp.unit_m27a,
                "s_a": comp.s_a,
                "s_m27a": comp.s_m27a,
            },
            "config": cfg.as_dict(),
        },
        out,
    )
    return EXIT_OK


# ------------------------------------------------------------------ watkins


def _watkins_e2_row(pair, M, policy, real_place, depth_margin):
    a, b = pair
    param = E2Param(a, b)
    rep = watkins.report(param, policy=policy, real_place=real_place,
                         depth_margin=depth_margin)
    if rep.surrogate_nu2_lower is None:
        verdict = watkins.INCONCLUSIVE
        surrogate = ""
    else:
        proven = rep.rank_upper + M <= rep.surrogate_nu2_lower
        verdict = watkins.PROVEN if proven else watkins.INCONCLUSIVE
        surrogate = str(rep.surrogate_nu2_lower)
    return (f"{a},{b},{rep.curve.A},{rep.curve.B},{rep.omega_N},"
            f"{rep.rank_upper},{surrogate},{verdict},{rep.method_notes}")


def cmd_watkins(args, cfg, out):
    M = args.M
    if args.family == "e2":
        if args.height is None:
            raise DomainError("--height is required for family e2")
        fn = partial(_watkins_e2_row, M=M, policy=cfg.policy,
                     real_place=cfg.solubility_real_place,
                     depth_margin=cfg.depth_cap_extra)
        rows = _chunk_map(fn, _e2_pairs(args.height), cfg.workers)
        header = "a,b,A,B,omega_N,rank_upper,surrogate_nu2_lower,verdict,note"
    elif args.family == "twist-e0":
        if args.range is None:
            raise DomainError("--range is required for family twist-e0")
        rows = []
        for D in _squarefree_range(args.range):
            E, cls = families.twist_e0(D, cfg.nu2_manin)
            verdict = watkins.twist_watkins(D, cfg.nu2_manin)
            rows.append(f"{D},{E.A},{E.B},{cls},{verdict}")
        header = "D,A,B,class,verdict"
    else:  # pragma: no cover
        raise DomainError(f"unknown family {args.family}")
    rows.sort()
    verdict_field = 7 if args.family == "e2" else 4
    proven = sum(1 for r in rows if r.split(",")[verdict_field].startswith("Proven"))
    inconclusive = len(rows) - proven
    _emit_csv(header, rows, out)
    _emit_json(
        {
            "command": "watkins",
            "family": args.family,
            "M": M,
            "proven": proven,
            "inconclusive": inconclusive,
            "config": cfg.as_dict(),
        },
        out,
    )
    return EXIT_OK


# -------------------------------------------------------------------- stats


def _parse_poly(text):
    try:
        coeffs = [int(x) for x in text.split(",")]
    except ValueError:
        raise DomainError(f"bad polynomial {text!r}; expected comma-separated integers")
    if not polys.normalize(coeffs):
        raise DomainError("zero polynomial")
    return coeffs


def _parse_heights(text):
    try:
        hs = [int(x) for x in text.split(",")]
    except ValueError:
        raise DomainError(f"bad heights {text!r}")
    if not hs or any(h < 1 for h in hs):
        raise DomainError("heights must be positive")
    return hs


def cmd_stats(args, cfg, out):
    exp = args.experiment
    doc = {"command": f"stats.{exp}", "config": cfg.as_dict()}
    if exp == "volume":
        vc = stats.volume_constant(args.precision)
        doc.update(
            alpha_plus=str(vc.alpha_plus),
            alpha_minus=str(vc.alpha_minus),
            value=str(vc.value),
            precision=args.precision,
        )
        _emit_json(doc, out)
    elif exp in ("count-r2", "count-r3"):
        heights = _parse_heights(args.heights)
        count = stats.count_r2 if exp == "count-r2" else stats.count_r3
        pts = [(X, count(X)) for X in heights]
        _emit_csv("X,count", [f"{x},{c}" for x, c in pts], out)
        doc["counts"] = pts
        if len(pts) >= 3 and all(c > 0 for _, c in pts):
            doc["slope"] = stats.slope(pts)
        _emit_json(doc, out)
    elif exp == "count-family":
        heights = _parse_heights(args.heights)
        pts = [(X, stats.count_family(args.ell, X)) for X in heights]
        _emit_csv("X,count", [f"{x},{c}" for x, c in pts], out)
        doc.update(ell=args.ell, counts=pts)
        if len(pts) >= 3 and all(c > 0 for _, c in pts):
            doc["slope"] = stats.slope(pts)
        _emit_json(doc, out)
    elif exp == "normal-order":
        f = _parse_poly(args.poly)
        S = [int(x) for x in args.exclude.split(",")] if args.exclude else []
        heights = _parse_heights(args.heights)
        rows = []
        samples = []
        for X in heights:
            ns = stats.normal_order_experiment(f, X, S)
            rows.append(f"{ns.X},{ns.mean},{ns.variance},{ns.sample_count}")
            samples.append(
                {"X": ns.X, "mean": str(ns.mean), "variance": str(ns.variance),
                 "n": ns.sample_count}
            )
        _emit_csv("X,mean,variance,n", rows, out)
        doc.update(poly=f, exclude=S, samples=samples)
        _emit_json(doc, out)
    elif exp == "roots-mod":
        f = _parse_poly(args.poly)
        deg = polys.degree(f)
        rows = []
        worst = 0
        violations = 0
        # the 2 deg(f) bound needs f and f' coprime mod p, i.e. p away from
        # Res(f, f'); the content gcd alone is not enough
        bad = polys.resultant(f, polys.derivative(f))
        for p in primes_up_to(args.pmax):
            if args.square and bad % p == 0:
                continue
            c = stats.roots_mod(f, p, args.square)
            rows.append(f"{p},{c}")
            worst = max(worst, c)
            if args.square and c > 2 * deg:
                violations += 1
        _emit_csv("p,count", rows, out)
        doc.update(poly=f, square=args.square, max_count=worst,
                   bound=2 * deg, violations=violations)
        _emit_json(doc, out)
    elif exp == "avg-frobenius":
        rows = []
        worst = Fraction(0)
        for p in primes_up_to(args.pmax):
            if p <= 3:
                continue
            v = stats.avg_frobenius(args.family, p)
            rows.append(f"{p},{v}")
            worst = max(worst, abs(v))
        bound = stats.family_trace_bound(args.family)
        _emit_csv("p,avg_trace", rows, out)
        doc.update(family=args.family, bound=bound, max_abs=str(worst),
                   within_bound=worst <= bound)
        _emit_json(doc, out)
    elif exp == "density-cor-main":
        certified, total = stats.certificate_density(args.height)
        _emit_csv("X,certified,total", [f"{args.height},{certified},{total}"], out)
        doc.update(X=args.height, certified=certified, total=total,
                   fraction=certified / total if total else None)
        _emit_json(doc, out)
    else:  # pragma: no cover
        raise DomainError(f"unknown experiment {exp}")
    return EXIT_OK


# ------------------------------------------------------------------- verify


def cmd_verify(args, cfg, out):
    try:
        records = watkins.load_dataset(args.dataset)
    except DatasetFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    results = []
    all_ok = True
    for rec in records:
        res = watkins.verify_record(rec, args.M, cfg.policy,
                                    cfg.solubility_real_place, cfg.depth_cap_extra)
        results.append(res)
        all_ok = all_ok and res["ok"]
    _emit_json(
        {
            "command": "verify",
            "dataset": args.dataset,
            "M": args.M,
            "records": results,
            "all_ok": all_ok,
            "config": cfg.as_dict(),
        },
        out,
    )
    return EXIT_OK if all_ok else EXIT_INCONSISTENT


# -------------------------------------------------------------------- main


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ecdescent",
        description="Exact-arithmetic elliptic-curve descent and counting experiments.",
    )
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--policy", choices=["include-small", "exclude-23"])
    parser.add_argument("--nu2-manin", type=int, dest="nu2_manin")
    parser.add_argument("--real-place", action="store_true", dest="real_place",
                        default=None, help="test the real place in local solubility")
    parser.add_argument("--no-real-place", action="store_false", dest="real_place",
                        default=None)
    parser.add_argument("--depth-cap-extra", type=int, dest="depth_cap_extra")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--seed", type=int)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list curves of a family up to a height")
    p.add_argument("--family", required=True,
                   choices=["e2", "e3", "e5", "e7", "type1", "twist-e0"])
    p.add_argument("--height", type=int)
    p.add_argument("--range", type=int)
    p.add_argument("--rank-bounds", action="store_true")
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("descent", help="2-isogeny descent for y^2 = x^3 + ax^2 + bx")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.set_defaults(fn=cmd_descent)

    p = sub.add_parser("descent3", help="3-isogeny rank bound for y^2 = x^3 + a")
    p.add_argument("--a", type=int, required=True)
    p.set_defaults(fn=cmd_descent3)

    p = sub.add_parser("watkins", help="scan a family for M-Watkins verdicts")
    p.add_argument("--family", required=True, choices=["e2", "twist-e0"])
    p.add_argument("--height", type=int)
    p.add_argument("--range", type=int)
    p.add_argument("--M", type=int, default=0)
    p.set_defaults(fn=cmd_watkins)

    p = sub.add_parser("stats", help="counting and statistics experiments")
    p.add_argument("experiment", choices=[
        "count-r2", "count-r3", "count-family", "volume", "normal-order",
        "roots-mod", "avg-frobenius", "density-cor-main",
    ])
    p.add_argument("--heights", default="")
    p.add_argument("--height", type=int)
    p.add_argument("--precision", type=int, default=30)
    p.add_argument("--ell", type=int, choices=[5, 7], default=5)
    p.add_argument("--poly")
    p.add_argument("--exclude", default="")
    p.add_argument("--pmax", type=int, default=100)
    p.add_argument("--square", action="store_true")
    p.add_argument("--family", choices=["e5", "e7", "e3poly"], default="e5")
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("verify", help="consistency checks against a dataset CSV")
    p.add_argument("--dataset", required=True)
    p.add_argument("--M", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    return parser


def _glue_option_values(argv, flags=("--poly", "--exclude", "--heights")):
    """Rewrite `--poly -1,-11,1` to `--poly=-1,-11,1` so argparse does not
    mistake a leading-minus value for an option string."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in flags:
            val = next(it, None)
            if val is None:
                out.append(tok)
            else:
                out.append(f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(_glue_option_values(argv if argv is not None else sys.argv[1:]))
    try:
        cfg = load_config(
            args.config,
            policy=args.policy,
            nu2_manin=args.nu2_manin,
            solubility_real_place=args.real_place,
            depth_cap_extra=args.depth_cap_extra,
            workers=args.workers,
            seed=args.seed,
        )
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args, cfg, out)
    except (DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularCurve as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
