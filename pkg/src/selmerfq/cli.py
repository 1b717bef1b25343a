"""Command-line entry point.

Every subcommand emits a JSON report embedding the tool version, the full
configuration, the seed, and the wall clock; reruns with identical
configuration are bit-identical apart from the timing fields.

Exit codes: 0 success, 1 computation error, 2 validation failure.
"""

import argparse
import json
import sys
import time

from . import __version__, census, ffpoly, lattice, lfunction, localdata, \
    weierstrass
from .rng import SplitMix64

SCHEMA_VERSION = 1


class ValidationError(Exception):
    pass


def _sigma(n):
    return sum(m for m in range(1, n + 1) if n % m == 0)


def _field_or_die(spec):
    try:
        return ffpoly.field_from_spec(spec)
    except (ValueError, TypeError) as exc:
        raise ValidationError(str(exc))


def _load_model(path):
    with open(path) as fh:
        return weierstrass.WeierstrassModel.from_json(json.load(fh))


def _budget(args):
    if args.budget_bits is not None:
        return 1 << args.budget_bits
    return lattice.DEFAULT_BUDGET


# --------------------------------------------------------------------------
# subcommand handlers: each returns a plain result dict

def _cmd_census(args):
    F = _field_or_die(args.q)
    if F.k != 1:
        raise ValidationError("census runs over prime fields")
    if args.mode == "sample" and args.n < 10 ** 4:
        raise ValidationError("sampling needs --n >= 10^4")
    rep = census.run_census(F.p, args.d, mode=args.mode, n=args.n,
                            seed=args.seed)
    return rep.to_json()


def _cmd_divisor_count(args):
    try:
        int(args.q)
    except ValueError:
        raise ValidationError("divisor-count takes a prime --q")
    rep = census.singular_divisor_count(int(args.q), args.d, seed=args.seed,
                                        direct_samples=args.samples)
    return rep.to_json()


def _cmd_orbits(args):
    if args.d < 2:
        raise ValidationError("orbits needs --d >= 2; use weyl-e8 for d = 1")
    lat, gens = lattice.standard_generators(args.d, SplitMix64(args.seed))
    module = lattice.QuadraticModule(lat, args.n)
    if args.mode == "exhaustive":
        rep = lattice.orbit_decompose(module, gens, budget=_budget(args))
    else:
        rep = lattice.sampling_connectivity(module, SplitMix64(args.seed),
                                            pairs_per_class=args.pairs)
    return rep.to_json()


def _cmd_weyl_e8(args):
    return lattice.weyl_e8_orbits(args.n, budget=_budget(args)).to_json()


def _cmd_tate(args):
    m = _load_model(args.model)
    summary = localdata.global_summary(m)
    return {
        "model": m.to_json(),
        "places": [pd.to_json() for pd in summary.places],
        "conductor_degree": summary.conductor_degree,
        "tamagawa_product": summary.tamagawa_product,
        "disc_degree_check": summary.disc_degree_check,
    }


def _cmd_lfunction(args):
    m = _load_model(args.model)
    L = lfunction.l_polynomial(m)
    out = L.to_json()
    if args.mod is not None:
        coeffs, mult = lfunction.charpoly_mod(L, args.mod)
        out["mod"] = args.mod
        out["coefficients_mod"] = coeffs
        out["unit_root_multiplicity"] = mult
    return out


def _cmd_average_table(args):
    ns = [int(x) for x in args.n.split(",")]
    rows = []
    for n in ns:
        if n < 1:
            raise ValidationError("n must be >= 1")
        if args.d >= 2:
            rows.append({"n": n, "d": args.d, "average": _sigma(n),
                         "provenance": "sigma(n) [theorem]"})
        else:
            rep = lattice.weyl_e8_orbits(n, budget=_budget(args))
            rows.append({"n": n, "d": args.d, "average": rep.orbit_count,
                         "provenance": "orbit count [computed]"})
    return {"rows": rows}


def _cmd_model_gen(args):
    F = _field_or_die(args.q)
    rng = SplitMix64(args.seed)
    models = [weierstrass.random_model(F, args.d, rng, minimal=args.minimal,
                                       smooth=args.smooth).to_json()
              for _ in range(args.count)]
    return {"models": models}


# --------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="selmerfq",
        description="Weierstrass models over F_q(t): local data, "
                    "L-polynomials, lattice orbits, censuses.")
    ap.add_argument("--version", action="version", version=__version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="report file (default stdout)")
    common.add_argument("--threads", type=int, default=1,
                        help="reserved; current build is single-threaded")
    common.add_argument("--budget-bits", type=int, default=None,
                        help="log2 of the enumeration budget")

    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", parents=[common])
    p.add_argument("--q", required=True, help="field spec p or p^k")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "sample"), default="sample")
    p.add_argument("--n", type=int, default=10 ** 4)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("divisor-count", parents=[common])
    p.add_argument("--q", required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--samples", type=int, default=4000)
    p.set_defaults(func=_cmd_divisor_count)

    p = sub.add_parser("orbits", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    p.add_argument("--pairs", type=int, default=100)
    p.set_defaults(func=_cmd_orbits)

    p = sub.add_parser("weyl-e8", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_weyl_e8)

    p = sub.add_parser("tate", parents=[common])
    p.add_argument("--model", required=True, help="model JSON file")
    p.set_defaults(func=_cmd_tate)

    p = sub.add_parser("lfunction", parents=[common])
    p.add_argument("--model", required=True)
    p.add_argument("--mod", type=int, default=None)
    p.set_defaults(func=_cmd_lfunction)

    p = sub.add_parser("average-table", parents=[common])
    p.add_argument("--n", required=True, help="comma-separated n values")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=_cmd_average_table)

    p = sub.add_parser("model-gen", parents=[common])
    p.add_argument("--q", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--minimal", action="store_true")
    p.add_argument("--smooth", action="store_true")
    p.set_defaults(func=_cmd_model_gen)

    return ap


def _config_of(args):
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(report, out, command):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w") as fh:
        fh.write(text)
    if command == "average-table" and out.endswith(".json"):
        # TSV mirror for the headline table
        rows = report["result"]["rows"]
        with open(out[:-5] + ".tsv", "w") as fh:
            fh.write("n\td\taverage\tprovenance\n")
            for r in rows:
                fh.write("%d\t%d\t%d\t%s\n"
                         % (r["n"], r["d"], r["average"], r["provenance"]))


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.time()
    try:
        result = args.func(args)
    except ValidationError as exc:
        print("validation error: %s" % exc, file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError, OSError, AssertionError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": args.command,
        "config": _config_of(args),
        "seed": args.seed,
        "wall_clock_seconds": time.time() - t0,
        "result": result,
    }
    _emit(report, args.out, args.command)
    return 0


if __name__ == "__main__":
    sys.exit(main())
