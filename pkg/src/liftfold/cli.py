"""Command-line drivers.

Documents flow through stdin/stdout as JSON so the stages compose:

    liftfold gen elastica --k 1.1 --r 12 --h 0.1 --n 120 \
        | liftfold extend --stripes 20 \
        | liftfold fold --plan random --seed 7 \
        | liftfold verify

Invalid flags exit 2 (argparse); computation failures print a structured
error JSON on stderr and exit 1.
"""

import argparse
import json
import sys

import numpy as np

from . import netfile
from .curves import (DiscreteCurve, elastic_curve_euclidean, joachimsthal_seed,
                     solve_figure_eight)
from .darboux import construction2_run, extend_holomorphic
from .folding import (CircularNet, FoldPlan, close_torus, flatten, fold,
                      lift_net, reflect_extend, solve_closure)
from .lie import LieError, embed, encode_circle, encode_points, ip, P6
from .verify import check_net

__all__ = ["main"]


def _read_doc(args):
    if getattr(args, "infile", "-") == "-":
        return json.load(sys.stdin)
    return netfile.load_doc(args.infile)


def _write_doc(doc, args):
    if getattr(args, "out", "-") == "-":
        json.dump(doc, sys.stdout)
        sys.stdout.write("\n")
    else:
        netfile.save_doc(doc, args.out)


def _as_net(doc):
    obj = netfile.from_doc(doc)
    if isinstance(obj, CircularNet):
        return obj
    from .darboux import HolomorphicMapMType
    if isinstance(obj, HolomorphicMapMType):
        return lift_net(obj)
    raise ValueError("expected a net or holomorphic map document")


def _parse_plan(spec, n_gaps, seed=None):
    if spec == "random":
        rng = np.random.default_rng(seed)
        lam = rng.uniform(-3.0, 1.5, n_gaps)
        lam[np.abs(lam + 1.0) < 0.05] += 0.1
        return lam
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            return np.asarray(json.load(fh), dtype=float)
    vals = [float(x) for x in spec.split(",")]
    if len(vals) == 1:
        return np.full(n_gaps, vals[0])
    if len(vals) != n_gaps:
        raise ValueError(f"plan has {len(vals)} entries, net has "
                         f"{n_gaps} gaps")
    return np.asarray(vals)


# ---------------------------------------------------------------------------
# subcommand implementations

def cmd_gen_elastica(args):
    if args.eight:
        k = solve_figure_eight(args.r, args.h)
        n = args.n - args.n % args.r if args.n % args.r else args.n
        curve, kappa = elastic_curve_euclidean(k, args.h, n, r=args.r,
                                               closed=True)
        meta = {"k": k, "r": args.r, "h": args.h, "figure_eight": True}
    else:
        k = args.k
        curve, kappa = elastic_curve_euclidean(
            k, args.h, args.n, r=args.r, q_phase=args.phase,
            closed=args.closed)
        meta = {"k": k, "r": args.r, "h": args.h, "phase": args.phase}
    meta["curvature"] = list(map(float, kappa))
    _write_doc(netfile.curve_to_doc(curve, meta), args)


def cmd_gen_joachimsthal(args):
    radii = [float(x) for x in args.radii.split(",")]
    circles = np.stack([encode_circle((args.cx, args.cy), r) for r in radii])
    stripes, complexes, line = joachimsthal_seed(circles,
                                                 n_samples=args.samples)
    points = embed(stripes)
    spheres = embed(circles)
    spheres = spheres / (-ip(spheres, P6))[:, None]
    net = CircularNet(points, spheres, closed_stripes=True,
                      meta={"seed_params": {"radii": radii,
                                            "samples": args.samples},
                            "line_complex": embed(line).tolist()})
    _write_doc(netfile.net_to_doc(net), args)


def cmd_gen_construction2(args):
    with open(args.seed) as fh:
        seed = json.load(fh)
    f_pts = encode_points(np.asarray(seed["points"], dtype=float))
    c1a = np.asarray(seed["c1"], dtype=float)
    c1b = np.asarray(seed["c2"], dtype=float)
    m1 = np.asarray(seed["m1"], dtype=float)
    m2 = np.asarray(seed["m2"], dtype=float)
    pts = construction2_run(f_pts[0], f_pts[1], f_pts[2], c1a, c1b, m1, m2,
                            args.steps)
    q = np.asarray(seed.get("q", [0.0, 0.0, 1.0, -1.0, 0.0]), dtype=float)
    curve = DiscreteCurve(pts, q)
    _write_doc(netfile.curve_to_doc(curve, {"construction": 2}), args)


def cmd_extend(args):
    doc = _read_doc(args)
    curve = netfile.from_doc(doc)
    if not isinstance(curve, DiscreteCurve):
        raise ValueError("extend expects a curve document")
    if str(args.lam) == "auto":
        lambdas = "auto"
    elif "," in str(args.lam):
        lambdas = [float(x) for x in str(args.lam).split(",")]
    else:
        lambdas = float(args.lam)
    if args.step_length is not None:
        lambdas = "auto"
    hmap = extend_holomorphic(curve, args.stripes, lambdas=lambdas,
                              branch=args.branch,
                              step_length=args.step_length)
    seed_meta = doc.get("meta", {})
    _write_doc(netfile.map_to_doc(hmap, {"seed_params": seed_meta}), args)


def cmd_fold(args):
    net = _as_net(_read_doc(args))
    mode = args.mode
    if mode == "auto":
        mode = "complex" if net.m_gaps is not None else "sphere"
    lam = _parse_plan(args.plan, net.n_stripes - 1, seed=args.seed)
    folded = fold(net, FoldPlan(lam, mode))
    _write_doc(netfile.net_to_doc(folded), args)


def cmd_flatten(args):
    net = _as_net(_read_doc(args))
    _write_doc(netfile.net_to_doc(flatten(net)), args)


def cmd_reflect(args):
    net = _as_net(_read_doc(args))
    _write_doc(netfile.net_to_doc(reflect_extend(net)), args)


def cmd_close_torus(args):
    net = _as_net(_read_doc(args))
    p_num, q_den = (int(x) for x in args.angle.split("/"))
    if args.solve:
        meta_plan = net.meta.get("fold_plan")
        if meta_plan is None:
            raise ValueError("net carries no fold plan; fold before closing")
        if meta_plan["mode"] == "complex":
            # flattening returns the stored stripe-pair complexes to the
            # unfolded frame, so the flat net is a valid refold base
            base = flatten(net)
        else:
            base = net
        plan = FoldPlan(np.asarray(meta_plan["lambdas"], dtype=float),
                        meta_plan["mode"])
        plan = solve_closure(base, p_num, q_den, plan)
        net = fold(base, plan)
    torus, refl, resid = close_torus(net)
    _write_doc(netfile.net_to_doc(torus), args)
    print(f"closed after {refl} reflections, seam residual {resid:.3e}",
          file=sys.stderr)


def cmd_export(args):
    net = _as_net(_read_doc(args))
    nv, nf = netfile.export_obj(net, args.obj)
    print(f"wrote {args.obj}: {nv} vertices, {nf} faces", file=sys.stderr)


def cmd_verify(args):
    net = _as_net(_read_doc(args))
    optional = []
    if args.planar:
        optional.append("planar_preset")
    if args.span4:
        optional.append("sphere_span_4d")
    report = check_net(net, optional=tuple(optional))
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report.to_json())
    if args.plots:
        from .report import write_report
        write_report(report, args.plots, net=net)
    print(report)
    if not report.passed:
        sys.exit(1)


def cmd_serve(args):
    from .server import serve_forever
    net = _as_net(_read_doc(args))
    serve_forever(net, args.port)


# ---------------------------------------------------------------------------

def build_parser():
    top = argparse.ArgumentParser(
        prog="liftfold",
        description="discrete isothermic nets via lifted folding")
    sub = top.add_subparsers(dest="command", required=True)

    def add_io(p):
        p.add_argument("--in", dest="infile", default="-",
                       help="input JSON document (default stdin)")
        p.add_argument("--out", default="-",
                       help="output JSON document (default stdout)")

    gen = sub.add_parser("gen", help="generate seed geometry")
    gsub = gen.add_subparsers(dest="generator", required=True)

    ge = gsub.add_parser("elastica", help="explicit discrete elastica")
    ge.add_argument("--k", type=float, default=1.1,
                    help="modulus; (0,1) non-inflectional, >1 inflectional")
    ge.add_argument("--r", type=int, default=12,
                    help="curvature period in vertices")
    ge.add_argument("--h", type=float, default=0.1, help="edge length")
    ge.add_argument("--n", type=int, default=120, help="number of points")
    ge.add_argument("--phase", type=float, default=0.0)
    ge.add_argument("--branch", choices=["auto"], default="auto",
                    help="branch is selected by the modulus")
    ge.add_argument("--closed", action="store_true")
    ge.add_argument("--eight", action="store_true",
                    help="solve the closed figure-eight modulus for r")
    add_io(ge)
    ge.set_defaults(func=cmd_gen_elastica)

    gj = gsub.add_parser("joachimsthal",
                         help="net from circles with collinear centers")
    gj.add_argument("--radii", default="1,1.35,1.8,2.4,3.1")
    gj.add_argument("--cx", type=float, default=0.0)
    gj.add_argument("--cy", type=float, default=0.0)
    gj.add_argument("--samples", type=int, default=24)
    add_io(gj)
    gj.set_defaults(func=cmd_gen_joachimsthal)

    gc = gsub.add_parser("construction2",
                         help="curve from the two-complex construction")
    gc.add_argument("--seed", required=True, help="seed JSON file")
    gc.add_argument("--steps", type=int, default=40)
    add_io(gc)
    gc.set_defaults(func=cmd_gen_construction2)

    ex = sub.add_parser("extend", help="extend a curve to a holomorphic map")
    ex.add_argument("--stripes", type=int, required=True)
    ex.add_argument("--lambda", dest="lam", default="auto",
                    help='step parameter: "auto", a scalar, or a comma list')
    ex.add_argument("--branch", default="+", choices=["+", "-"])
    ex.add_argument("--step-length", type=float, default=None,
                    help="target stripe separation; implies --lambda auto")
    add_io(ex)
    ex.set_defaults(func=cmd_extend)

    fo = sub.add_parser("fold", help="lifted folding")
    fo.add_argument("--plan", required=True,
                    help='"random", comma list, single value, or @file')
    fo.add_argument("--mode", default="auto",
                    choices=["auto", "sphere", "complex"])
    fo.add_argument("--seed", type=int, default=None)
    add_io(fo)
    fo.set_defaults(func=cmd_fold)

    fl = sub.add_parser("flatten", help="fold to a single sphere")
    add_io(fl)
    fl.set_defaults(func=cmd_flatten)

    re_ = sub.add_parser("reflect", help="extend by the mirror image")
    add_io(re_)
    re_.set_defaults(func=cmd_reflect)

    ct = sub.add_parser("close-torus", help="solve and close to a torus")
    ct.add_argument("--angle", required=True, help="target p/q of 2 pi")
    ct.add_argument("--solve", action="store_true", default=True)
    ct.add_argument("--no-solve", dest="solve", action="store_false")
    add_io(ct)
    ct.set_defaults(func=cmd_close_torus)

    ep = sub.add_parser("export", help="export a net to OBJ")
    ep.add_argument("--obj", required=True)
    add_io(ep)
    ep.set_defaults(func=cmd_export)

    ve = sub.add_parser("verify", help="run the net diagnostics")
    ve.add_argument("--report", default=None, help="write report JSON here")
    ve.add_argument("--plots", default=None,
                    help="directory for figures and checks.csv")
    ve.add_argument("--planar", action="store_true",
                    help="include the planar-preset check")
    ve.add_argument("--span4", action="store_true",
                    help="include the 4-dim sphere-span check")
    add_io(ve)
    ve.set_defaults(func=cmd_verify)

    se = sub.add_parser("serve", help="serve the viewer session")
    se.add_argument("--port", type=int, default=8742)
    add_io(se)
    se.set_defaults(func=cmd_serve)
    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (LieError, ValueError, OSError) as exc:
        json.dump({"error": {"type": type(exc).__name__,
                             "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        sys.exit(1)


if __name__ == "__main__":
    main()
