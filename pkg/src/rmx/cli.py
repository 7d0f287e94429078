# src/rmx/cli.py

"""Command line front end: evaluate solutions/engines, run identity checks,
emit canonical gluing forms, run parameter sweeps.

Exit codes: 0 pass, 1 identity failure, 2 usage/parameter error,
3 numeric degeneracy (ill-conditioned residue system).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import bundles, catalog, curves, rmatrix, verify
from .tensorcore import Tensor2

CONVENTIONS = {
    "tensor_layout": "coeffs[i1,j1,i2,j2] is the coefficient of "
                     "e_{i1 j1} (x) e_{i2 j2}, indices 0-based",
    "serialization": "flat data is the n^2 x n^2 Kronecker matrix "
                     "(row (i1*n+i2), column (j1*n+j2)), row-major; "
                     "complex numbers as [re, im]",
    "leg_embedding": "r^{ab} places factor 1 on leg a, factor 2 on leg b, "
                     "identity elsewhere in Mat_n^(x3)",
    "linmap_to_tensor": "e_{ij} -> alpha e_{kl} corresponds to "
                        "alpha e_{ji} (x) e_{kl}",
}

_DEFAULT_SEED = 12345


def _parse_complex(s: str) -> complex:
    parts = str(s).split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {s!r}")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RMX_SEED")
    return int(env) if env else _DEFAULT_SEED


def _emit(payload, args):
    if getattr(args, "out", "json") == "json":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = payload  # pre-formatted CSV
    if getattr(args, "output", None):
        tmp = args.output + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(text)
        os.replace(tmp, args.output)
    else:
        sys.stdout.write(text)


class SystemExit2(SystemExit):
    def __init__(self, msg):
        print(f"error: {msg}", file=sys.stderr)
        super().__init__(2)


def _engine_from_args(args) -> catalog.RSolution:
    kind = args.curve
    if kind is None and args.g2 is not None and args.g3 is not None:
        kind = curves.classify(args.g2, args.g3)
        if kind == curves.ELLIPTIC and args.tau is None:
            raise SystemExit2(
                "(g2, g3) is a smooth curve; pass --tau explicitly "
                "(the inverse modular map is not provided)")
    if kind == "elliptic":
        if args.tau is None:
            raise SystemExit2("--tau is required for the elliptic engine")
        return rmatrix.engine_solution("elliptic", 2, 1, tau=args.tau)
    if kind == "nodal":
        if (args.rank, args.deg) == (2, 0):
            return rmatrix.engine_solution("nodal-semistable")
        return rmatrix.engine_solution("nodal", args.rank, args.deg)
    if kind == "cuspidal":
        return rmatrix.engine_solution("cusp", args.rank, args.deg)
    raise SystemExit2(f"unknown curve {kind!r}")


def _solution_from_args(args) -> catalog.RSolution:
    if args.solution:
        try:
            return catalog.get(args.solution, tau=args.tau or catalog.DEFAULT_TAU)
        except KeyError as e:
            raise SystemExit2(e.args[0])
    if args.curve or (args.g2 is not None and args.g3 is not None):
        return _engine_from_args(args)
    raise SystemExit2("need --solution NAME, --curve KIND, or --g2/--g3")


def cmd_eval(args) -> int:
    sol = _solution_from_args(args)
    need = sol.nargs()
    if sol.arity in ("cl_ydiff",):
        params = [args.y]
    elif sol.arity == "cl_y12":
        params = [args.y1, args.y2]
    elif sol.arity == "vdiff_ydiff":
        params = [args.v, args.y]
    elif sol.arity == "vdiff_y12":
        params = [args.v, args.y1, args.y2]
    else:
        params = [args.v1, args.v2, args.y1, args.y2]
    if any(p is None for p in params):
        raise SystemExit2(f"solution {sol.name!r} (arity {sol.arity}) needs "
                          f"{need} spectral parameters")
    try:
        t = sol.evaluator(*[complex(p) for p in params])
    except (ZeroDivisionError, rmatrix.DegenerateSystemError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3 if isinstance(e, rmatrix.DegenerateSystemError) else 2
    except rmatrix.EngineError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if not np.all(np.isfinite(t.coeffs)):
        print("error: evaluation hit a pole (non-finite tensor)", file=sys.stderr)
        return 2
    payload = {
        "solution": sol.name,
        "arity": sol.arity,
        "parameters": [[complex(p).real, complex(p).imag] for p in params],
        "tensor": t.to_json_dict(),
    }
    if args.conventions:
        payload["conventions"] = CONVENTIONS
    if sol.params:
        payload["solution_params"] = {
            k: ([complex(v).real, complex(v).imag] if isinstance(v, (complex, float))
                else v) for k, v in sol.params.items()}
    if args.out == "csv":
        n = t.n
        lines = ["row,col,re,im"]
        k = t.kron()
        for i in range(n * n):
            for j in range(n * n):
                lines.append(f"{i},{j},{k[i,j].real!r},{k[i,j].imag!r}")
        _emit("\n".join(lines) + "\n", args)
    else:
        _emit(payload, args)
    return 0


def cmd_verify(args) -> int:
    seed = _seed(args)
    sol = _solution_from_args(args)
    tol = args.tol
    try:
        if args.identity == "aybe":
            rep = verify.aybe(sol, samples=args.samples, tol=tol or 1e-8, seed=seed)
        elif args.identity == "dual":
            rep = verify.aybe_dual(sol, samples=args.samples, tol=tol or 1e-8, seed=seed)
        elif args.identity == "unitarity":
            rep = verify.unitarity(sol, samples=args.samples, tol=tol or 1e-10, seed=seed)
        elif args.identity == "cybe":
            rep = verify.cybe(sol, samples=args.samples, tol=tol or 1e-9, seed=seed)
        elif args.identity == "qybe":
            rep = verify.qybe(sol, v0=args.v0 or 0.7, samples=args.samples,
                              tol=tol or 1e-8, seed=seed)
        elif args.identity == "limit":
            try:
                ref = catalog.classical_of(sol.name, tau=args.tau or catalog.DEFAULT_TAU)
            except ValueError:
                # no recorded partner: still probe the limit to report divergence
                verify.classical_limit_values(sol, [(0.15, 0.8)])
                raise SystemExit2(f"{sol.name} has no recorded classical partner "
                                  "and its pr(x)pr limit converged; nothing to compare")
            grid = [0.3 + 0.1 * k for k in range(10)]
            rep = verify.classical_limit(sol, ref, grid, tol=tol or 1e-7,
                                         y_base=0.15)
        elif args.identity == "laurent":
            y_pt = (0.2, 0.9) if sol.arity == "vdiff_y12" else 0.47
            co = verify.laurent_v(sol, y_pt)
            omega_id = Tensor2.simple(np.eye(sol.n), np.eye(sol.n))
            a = complex(np.vdot(omega_id.coeffs, co[-1].coeffs)
                        / np.vdot(omega_id.coeffs, omega_id.coeffs))
            payload = {
                "identity": "laurent",
                "solution": sol.name,
                "order_norms": {str(m): c.norm() for m, c in co.items()},
                "r_minus1_identity_component": [a.real, a.imag],
                "r_minus1_offidentity_defect": (co[-1] - a * omega_id).norm(),
            }
            _emit(payload, args)
            return 0
        elif args.identity == "casimir":
            a, defect = verify.casimir_residue(sol, tol=tol or 1e-8)
            payload = {"identity": "casimir-residue", "solution": sol.name,
                       "alpha": [a.real, a.imag], "defect": defect,
                       "tol": tol or 1e-8, "passed": defect < (tol or 1e-8)}
            _emit(payload, args)
            return 0 if payload["passed"] else 1
        elif args.identity == "degeneration":
            rep = verify.degeneration_trg_to_rat(
                catalog.get("cherednik"), catalog.get("yang"), tol=tol or 1e-6)
        elif args.identity == "dunkl":
            rep = verify.dunkl_commutator(sol, m=3, kappa=args.kappa,
                                          tol=tol or (1e-9 if args.kappa == 0 else 1e-5),
                                          seed=seed)
        else:
            raise SystemExit2(f"unknown identity {args.identity!r}")
    except verify.DivergenceError as e:
        payload = {"identity": args.identity, "solution": sol.name,
                   "divergence": True, "detail": str(e), "passed": False}
        _emit(payload, args)
        return 1
    except rmatrix.DegenerateSystemError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        raise SystemExit2(str(e))
    _emit(rep.to_json_dict(), args)
    return 0 if rep.passed else 1


def cmd_canon(args) -> int:
    lam = complex(args.lam)
    try:
        if args.type == "nodal":
            t = bundles.canonical_nodal(args.n1, args.n2, lam)
            mat = t.m0
        else:
            t = bundles.canonical_cusp(args.n1, args.n2, lam)
            mat = t.mEps
    except ValueError as e:
        raise SystemExit2(str(e))
    payload = {
        "type": args.type,
        "n1": args.n1,
        "n2": args.n2,
        "lambda": [lam.real, lam.imag],
        "matrix": [[[z.real, z.imag] for z in row] for row in mat],
        "det_coordinate": [bundles.det_triple(t).real, bundles.det_triple(t).imag],
        "endo_dimension": bundles.endo_dimension(t),
        "simple": bundles.endo_dimension(t) == 1,
    }
    _emit(payload, args)
    return 0


def _parse_grid(spec_str, default):
    if spec_str is None:
        return default
    try:
        vals = [float(t) for t in spec_str.split(",") if t.strip()]
    except ValueError:
        raise SystemExit2(f"bad grid {spec_str!r}")
    if not vals:
        raise SystemExit2("empty grid")
    return vals


def cmd_sweep(args) -> int:
    if args.kind == "degeneration":
        grid = _parse_grid(args.grid, [1e2, 1e3, 1e4, 1e5])
        trg, rat = catalog.get("cherednik"), catalog.get("yang")
        ys = (0.3, 0.7, 1.1)
        lines = ["t,max_error"]
        for t in grid:
            err = max(((1.0 / t) * trg.evaluator(y / t) - rat.evaluator(y)).norm()
                      for y in ys)
            lines.append(f"{t!r},{err!r}")
        _emit("\n".join(lines) + "\n", args)
        return 0
    if args.kind == "limit":
        sol = _solution_from_args(args)
        grid = _parse_grid(args.grid, [1e-1, 1e-2, 1e-3, 1e-4])
        from .tensorcore import project_sl
        y1, y2 = 0.15, 0.85
        if sol.arity == "vdiff_ydiff":
            f = lambda v: project_sl(sol.evaluator(v, y2 - y1))
        elif sol.arity == "vdiff_y12":
            f = lambda v: project_sl(sol.evaluator(v, y1, y2))
        else:
            raise SystemExit2("limit sweep needs a v-difference solution")
        lines = ["v,pr_norm,delta_to_next"]
        vals = [f(v) for v in grid]
        for i, v in enumerate(grid):
            delta = (vals[i] - vals[i + 1]).norm() if i + 1 < len(grid) else ""
            lines.append(f"{v!r},{vals[i].norm()!r},{delta!r}" if delta != ""
                         else f"{v!r},{vals[i].norm()!r},")
        _emit("\n".join(lines) + "\n", args)
        return 0
    raise SystemExit2(f"unknown sweep kind {args.kind!r}")


def _add_common_solution_args(sp):
    sp.add_argument("--solution", help="catalog solution name")
    sp.add_argument("--curve", choices=["elliptic", "nodal", "cuspidal"],
                    help="construction engine curve type")
    sp.add_argument("--rank", type=int, default=2)
    sp.add_argument("--deg", type=int, default=1)
    sp.add_argument("--g2", type=_parse_complex, default=None,
                    help="raw Weierstrass coefficient (classified with --g3)")
    sp.add_argument("--g3", type=_parse_complex, default=None)
    sp.add_argument("--tau", type=_parse_complex, default=None,
                    help="elliptic modulus as RE,IM")
    sp.add_argument("--out", choices=["json", "csv"], default="json")
    sp.add_argument("--output", help="write to file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rmx",
        description="Geometric associative r-matrices on Weierstrass cubics: "
                    "evaluation, verification, canonical forms, sweeps.")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a solution or engine at a point")
    _add_common_solution_args(ev)
    for name in ("v", "y", "v1", "v2", "y1", "y2"):
        ev.add_argument(f"--{name}", type=_parse_complex, default=None,
                        help=f"spectral parameter {name} as RE[,IM]")
    ev.add_argument("--conventions", action="store_true",
                    help="include the tensor layout conventions block")
    ev.set_defaults(func=cmd_eval)

    vf = sub.add_parser("verify", help="run an identity residual check")
    _add_common_solution_args(vf)
    vf.add_argument("--identity", required=True,
                    choices=["aybe", "dual", "unitarity", "cybe", "qybe",
                             "limit", "laurent", "casimir", "degeneration",
                             "dunkl"])
    vf.add_argument("--samples", type=int, default=50)
    vf.add_argument("--tol", type=float, default=None)
    vf.add_argument("--seed", type=int, default=None,
                    help="sampling seed (default: RMX_SEED env or 12345)")
    vf.add_argument("--v0", type=_parse_complex, default=None,
                    help="fixed spectral value for qybe")
    vf.add_argument("--kappa", type=float, default=1.0,
                    help="Dunkl level for --identity dunkl")
    vf.set_defaults(func=cmd_verify)

    cn = sub.add_parser("canon", help="canonical gluing matrix of a simple bundle")
    cn.add_argument("--type", required=True, choices=["nodal", "cusp"])
    cn.add_argument("--n1", type=int, required=True)
    cn.add_argument("--n2", type=int, required=True)
    cn.add_argument("--lambda", dest="lam", type=_parse_complex, required=True)
    cn.add_argument("--out", choices=["json"], default="json")
    cn.add_argument("--output", default=None)
    cn.set_defaults(func=cmd_canon)

    sw = sub.add_parser("sweep", help="residual/limit table over a grid (CSV)")
    _add_common_solution_args(sw)
    sw.add_argument("--kind", required=True, choices=["degeneration", "limit"])
    sw.add_argument("--grid", help="comma separated grid values")
    sw.set_defaults(func=cmd_sweep, out="csv")

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as e:
        return e.code
    except verify.PoleSampleError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
