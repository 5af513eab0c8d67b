"""Command-line front end.

Verbs: gen, op, energy, extend, restrict, zeta, lip, verify, export.
Exit codes: 0 on success or all-pass, 1 when a verification suite
fails, 2 on usage errors.  All randomness is seeded: --seed wins, then
the NCGASKET_SEED environment variable, then 42.  Reports are JSON
with a fixed field order; grids and vertex tables are CSV.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import algebra, classical, energy, triple, verify

DEFAULT_SEED = 42
MAX_CHAIN_LEVEL = 7


class UsageError(Exception):
    pass


def resolve_seed(flag_value):
    if flag_value is not None:
        return int(flag_value)
    env = os.environ.get("NCGASKET_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError("NCGASKET_SEED must be an integer, got %r" % env)
    return DEFAULT_SEED


def read_element(path):
    try:
        with open(path, "r") as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise UsageError("%s is not valid JSON: %s" % (path, exc))
    try:
        return algebra.element_from_json_dict(doc)
    except ValueError as exc:
        raise UsageError("%s: %s" % (path, exc))


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as handle:
            handle.write(text)


def write_element(element, path):
    doc = algebra.element_to_json_dict(element)
    _emit(json.dumps(doc, indent=2) + "\n", path)


def write_json(doc, path):
    _emit(json.dumps(doc, indent=2) + "\n", path)


def _complex_pair(z):
    z = complex(z)
    return [z.real, z.imag]


def cmd_gen(args):
    if args.alpha is not None:
        level, j = args.alpha
        element = algebra.alpha(level, j)
    elif args.beta is not None:
        level, k, j = args.beta
        element = algebra.beta_block(level, k, j, np.eye(3 ** (level - k)))
    elif args.identity is not None:
        element = algebra.identity(args.identity)
    elif args.zero is not None:
        element = algebra.zero(args.zero)
    else:
        rng = np.random.default_rng(resolve_seed(args.seed))
        element = algebra.random_element(
            args.random, rng, hermitian=args.hermitian, scale=args.scale)
    write_element(element, args.output)
    return 0


_BINARY_OPS = ("add", "sub", "mul")
_SCALAR_OPS = ("norm", "trace", "osc")


def cmd_op(args):
    element = read_element(args.element)
    if args.apply in _BINARY_OPS:
        if args.other is None:
            raise UsageError("--apply %s needs --other" % args.apply)
        other = read_element(args.other)
        result = {"add": lambda: element + other,
                  "sub": lambda: element - other,
                  "mul": lambda: element * other}[args.apply]()
        write_element(result, args.output)
    elif args.apply == "adjoint":
        write_element(element.adjoint(), args.output)
    elif args.apply == "scale":
        if args.factor is None:
            raise UsageError("--apply scale needs --factor")
        write_element(element.scale(args.factor), args.output)
    elif args.apply == "norm":
        write_json({"value": element.norm()}, args.output)
    elif args.apply == "osc":
        write_json({"value": algebra.osc(element)}, args.output)
    elif args.apply == "trace":
        write_json({"value": _complex_pair(element.trace())}, args.output)
    return 0


def cmd_energy(args):
    element = read_element(args.element)
    report = energy.energy(element)
    write_json(report.as_dict(), args.output)
    return 0


def _extension_parameter(args):
    if args.t is not None:
        return args.t
    if args.mode == "affine":
        return 0.5
    return 0.6


def cmd_extend(args):
    element = read_element(args.element)
    target = args.to_level if args.to_level is not None else element.level + 1
    if target <= element.level:
        raise UsageError("--to-level must exceed the element level %d" % element.level)
    if target > MAX_CHAIN_LEVEL:
        raise UsageError("--to-level above %d is not supported" % MAX_CHAIN_LEVEL)
    result = algebra.extend_to(element, _extension_parameter(args), target)
    write_element(result, args.output)
    return 0


def cmd_restrict(args):
    element = read_element(args.element)
    target = args.to_level if args.to_level is not None else element.level - 1
    if element.level == 0 or target < 0 or target >= element.level:
        raise UsageError("--to-level must lie in [0, %d)" % element.level)
    write_element(algebra.restrict_to(element, target), args.output)
    return 0


def _parse_grid(spec):
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError("--s-grid expects START:STOP:STEP, got %r" % spec)
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError("--s-grid entries must be numbers, got %r" % spec)
    if step <= 0 or stop < start:
        raise UsageError("--s-grid needs STOP >= START and STEP > 0")
    count = int((stop - start) / step + 1e-9) + 1
    return [start + i * step for i in range(count)]


def cmd_zeta(args):
    element = read_element(args.element)
    grid = _parse_grid(args.s_grid)
    cutoff = args.cutoff
    if cutoff is None:
        cutoff = min(element.level + 4, MAX_CHAIN_LEVEL)
    if cutoff > MAX_CHAIN_LEVEL:
        raise UsageError("--cutoff above %d is not supported" % MAX_CHAIN_LEVEL)
    if cutoff < element.level + 4:
        raise UsageError("--cutoff must reach level + 4 so the tail ratio "
                         "can be certified on the last five weights")
    chain = algebra.extension_chain(element, 0.6, cutoff)
    try:
        if args.mode == "trace":
            profile = triple.zeta_trace(chain, grid)
        else:
            profile = triple.zeta_energy(chain, grid)
    except ValueError as exc:
        raise UsageError(str(exc))
    lines = ["s,partial_sum,tail_corrected,cutoff"]
    for s, partial, corrected in profile.rows():
        lines.append("%r,%r,%r,%d" % (s, partial, corrected, profile.cutoff))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_lip(args):
    element = read_element(args.element)
    target = args.to_level if args.to_level is not None else element.level + 3
    if target > 6:
        raise UsageError("--to-level above 6 is not supported for lip chains")
    if target < element.level:
        raise UsageError("--to-level must be at least the element level")
    t = 0.5 if args.mode == "affine" else 0.6
    chain = algebra.extension_chain(element, t, target)
    value, stationary = triple.lip_norm(chain)
    per_level = [{"level": e.level, "value": 2.0 ** e.level * algebra.osc(e)}
                 for e in chain]
    write_json({"lip_norm": value, "stationary": stationary,
                "mode": args.mode, "per_level": per_level}, args.output)
    return 0


_LEVEL_KWARG = {
    "dense-oracle": "level_cap",
    "eigenform": "level_cap",
    "selfsim": "level_cap",
    "osc": "level_cap",
    "commutator": "level_cap",
    "connes": "level_cap",
    "energy-residue": "level_cap",
    "traces": "level_cap",
    "norm-energy": "level_cap",
    "lip": "base_cap",
    "classical": "bridge_cap",
}


def cmd_verify(args):
    seed = resolve_seed(args.seed)
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    kwargs = {}
    if args.levels is not None:
        if len(names) > 1 or names[0] not in _LEVEL_KWARG:
            raise UsageError("--levels applies to a single level-capped suite")
        kwargs[_LEVEL_KWARG[names[0]]] = args.levels
    reports = [verify.run_suite(name, seed, **kwargs) for name in names]
    if len(reports) == 1:
        report = reports[0]
    else:
        cases = []
        for sub in reports:
            for case in sub["cases"]:
                prefixed = dict(case)
                prefixed["name"] = "%s/%s" % (sub["suite"], case["name"])
                cases.append(prefixed)
        report = {"suite": "all", "cases": cases, "seed": seed,
                  "elapsed": sum(sub["elapsed"] for sub in reports)}
    write_json(report, args.output)
    return 0 if all(c["status"] == "pass" for c in report["cases"]) else 1


def cmd_export(args):
    if args.level < 0 or args.level > 8:
        raise UsageError("--level must lie in [0, 8]")
    if args.what == "vertices":
        lines = ["label,x,y,age"]
        for name, x, y, age in classical.vertex_rows(args.level):
            lines.append("%s,%r,%r,%d" % (name, x, y, age))
    else:
        lines = ["from,to"]
        for a, b in classical.edge_rows(args.level):
            lines.append("%s,%s" % (a, b))
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ncgasket",
        description="Gasket matrix-model toolkit: elements, energies, "
                    "spectral data, and verification suites.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen", help="construct an element and write JSON")
    kinds = p.add_mutually_exclusive_group(required=True)
    kinds.add_argument("--alpha", nargs=2, type=int, metavar=("LEVEL", "J"))
    kinds.add_argument("--beta", nargs=3, type=int, metavar=("LEVEL", "K", "J"))
    kinds.add_argument("--identity", type=int, metavar="LEVEL")
    kinds.add_argument("--zero", type=int, metavar="LEVEL")
    kinds.add_argument("--random", type=int, metavar="LEVEL")
    p.add_argument("--hermitian", action="store_true")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("op", help="apply an operation to stored elements")
    p.add_argument("--apply", required=True,
                   choices=_BINARY_OPS + ("adjoint", "scale") + _SCALAR_OPS)
    p.add_argument("--element", required=True)
    p.add_argument("--other", default=None)
    p.add_argument("--factor", type=float, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("energy", help="energy report of an element")
    p.add_argument("--element", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("extend", help="self-similar extension of an element")
    p.add_argument("--element", required=True)
    p.add_argument("--mode", choices=("harmonic", "affine"), default="harmonic")
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--to-level", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("restrict", help="restriction of an element")
    p.add_argument("--element", required=True)
    p.add_argument("--to-level", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("zeta", help="zeta profile CSV along a harmonic chain")
    p.add_argument("--element", required=True)
    p.add_argument("--mode", choices=("trace", "energy"), required=True)
    p.add_argument("--extend", choices=("harmonic",), default="harmonic")
    p.add_argument("--s-grid", required=True)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("lip", help="Lip-norm data along an extension chain")
    p.add_argument("--element", required=True)
    p.add_argument("--mode", choices=("affine", "harmonic"), default="affine")
    p.add_argument("--to-level", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_lip)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all",
                   choices=("all",) + tuple(verify.SUITES))
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="vertex or edge CSV of a level graph")
    p.add_argument("--what", choices=("vertices", "edges"), required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_export)

    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2
    except ValueError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


def main():
    sys.exit(run())
