"""
Command line entry point. Every subcommand prints one UTF-8 JSON document to stdout; logs go to stderr.

Exit codes: 0 when everything passes, 1 when a verification check fails, 2 for usage errors.
"""
import argparse
import json
import logging
import sys

import numpy as np

from modlie.algebra_file import load, save
from modlie.autos import demushkin_lift, restriction_to_torus, stabilizes_subspace, normalizes_torus
from modlie.cartan import (build_from_family, build_jacobson_witt, standard_torus, standard_maximal_solvable,
                           witt_grading)
from modlie.config import Config
from modlie.enumerations import AlgebraFamilyEnum, TorusSourceEnum, VerificationModeEnum, ExitCodeEnum
from modlie.error_handlers import ModLieError
from modlie.ffla import PrimeFieldMatrix, inverse
from modlie.helpers import export_to_excel, weight_table_records, report_records
from modlie.liecore import validate_algebra
from modlie.restrict import max_torus_search
from modlie.suites import SUITES
from modlie.utilities import parse_int_list, parse_matrix, to_plain, character_key
from modlie.weights import decompose, coverage_check, equal_dims_check, dimension_identity_check
from modlie.wittemb import build_iota, check_D_i_expansion, check_coefficient_identity, envelope_in_target

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


def _emit(document, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(to_plain(document), sort_keys=True, ensure_ascii=False))
    stream.write("\n")


def _family_params(args):
    params = {"p": args.p}
    for key in ("n", "m", "two_r", "dim"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    if getattr(args, "n_vec", None):
        params["n_vec"] = parse_int_list(args.n_vec)
    if getattr(args, "allow_center", False):
        params["allow_center"] = True
    return params


def _algebra(args, config):
    """Algebra named by ``--file`` or by a catalog family and its parameters."""
    if getattr(args, "file", None):
        return load(args.file, config=config)
    if not args.algebra:
        raise UsageError("Name an algebra with --algebra FAMILY or --file PATH.")
    return build_from_family(args.algebra, _family_params(args), config)


def _torus(L, args, config):
    if args.torus == TorusSourceEnum.SEARCH:
        return max_torus_search(L, seed=config.seed, restarts=args.restarts, config=config, jobs=args.jobs)
    return standard_torus(L)


def cmd_construct(args, config):
    L = build_from_family(args.family, _family_params(args), config)
    document = {"family": args.family, "dim": L.dim, "p": L.p, "restricted": L.pmap is not None,
                "params": L.meta.get("params")}
    try:
        document["grading_range"] = list(witt_grading(L).range)
    except ValueError:
        document["grading_range"] = None
    if args.out:
        save(L, args.out)
        document["file"] = args.out
    _emit(document)
    return ExitCodeEnum.OK


def cmd_validate(args, config):
    L = _algebra(args, config)
    report = validate_algebra(L, config)
    _emit(report)
    return ExitCodeEnum.OK if report["valid"] else ExitCodeEnum.CHECK_FAILED


def cmd_weights(args, config):
    L = _algebra(args, config)
    torus = _torus(L, args, config)
    wd = decompose(L, torus)
    coverage = coverage_check(wd)
    document = {"dim": L.dim, "mu": torus.dim, "torus": args.torus, "zero": wd.zero_space.dim,
                "table": dict((character_key(c), d) for c, d in sorted(wd.table.items())),
                "coverage": {"verdict": coverage["verdict"], "missing": [character_key(c) for c in coverage["missing"]],
                             "present": coverage["present"], "expected": coverage["expected"]},
                "equal_dims": equal_dims_check(wd),
                "dimension_identity": dimension_identity_check(L, wd)}
    if args.xlsx:
        export_to_excel(weight_table_records(wd), args.xlsx, sheet_name="weights",
                        field_order=["character", "dim", "zero"])
    _emit(document)
    return ExitCodeEnum.OK


def cmd_embed(args, config):
    n_vec = parse_int_list(args.n_vec)
    emb = build_iota(args.m, n_vec, args.p, config, verify=False)
    envelope = envelope_in_target(emb)
    violations = emb.bracket_violations()
    expansion = check_D_i_expansion(emb)
    identity = check_coefficient_identity(emb, envelope)
    document = {"source_dim": emb.source.dim, "target_dim": emb.target.dim, "injective": emb.is_injective(),
                "bracket_violations": violations, "expansion": expansion, "coefficient_identity": identity,
                "envelope_dim": envelope.dim}
    _emit(document)
    passed = document["injective"] and not violations and expansion["matches"] and identity["holds"]
    return ExitCodeEnum.OK if passed else ExitCodeEnum.CHECK_FAILED


def cmd_lift(args, config):
    W, _ = build_jacobson_witt(args.n, args.p, config)
    g = PrimeFieldMatrix(W.field, parse_matrix(args.matrix))
    if g.shape != (args.n, args.n):
        raise UsageError("--matrix must be {0}x{0}, got {1}x{2}.".format(args.n, g.rows, g.cols))
    auto = demushkin_lift(W, g, verify=VerificationModeEnum.NONE)
    report = auto.verify(mode=args.verify, config=config)
    t0 = standard_torus(W)
    document = {"n": args.n, "p": args.p, "g": g.tolist(), "verification": report,
                "normalizes_torus": normalizes_torus(auto, t0)}
    if args.full_matrix:
        document["matrix"] = auto.matrix.tolist()
    if document["normalizes_torus"]:
        restriction = restriction_to_torus(auto, t0).matrix
        document["restriction"] = restriction.tolist()
        document["restriction_is_inverse_transpose"] = restriction == inverse(g).transpose()
    if args.n >= 2:
        document["stabilizes_c"] = stabilizes_subspace(auto, standard_maximal_solvable(W))
    _emit(document)
    return ExitCodeEnum.OK if report["valid"] else ExitCodeEnum.CHECK_FAILED


def cmd_verify(args, config):
    suite = SUITES[args.suite](p=args.p, n=args.n, m=args.m, n_vec=parse_int_list(args.n_vec), seed=config.seed,
                               config=config, jobs=args.jobs)
    report = suite.run()
    document = report.to_dict()
    if args.xlsx:
        export_to_excel(report_records(to_plain(document)), args.xlsx, sheet_name=args.suite[:31],
                        sorting_fields=None)
    _emit(document)
    if not report.passed:
        logger.warning("suite %s: failed checks %s", args.suite, ", ".join(report.failures()))
    return report.exit_code


def cmd_torus_search(args, config):
    L = _algebra(args, config)
    torus = max_torus_search(L, seed=config.seed, restarts=args.restarts, config=config, jobs=args.jobs)
    report = torus.verify(diagonalizable=True)
    _emit({"dim": torus.dim, "seed": config.seed, "restarts": args.restarts or config.restarts,
           "basis": [np.asarray(v).tolist() for v in torus.gens], "verification": report})
    return ExitCodeEnum.OK if report["valid"] else ExitCodeEnum.CHECK_FAILED


def _add_algebra_arguments(parser, positional_family=False):
    if positional_family:
        parser.add_argument("family", choices=AlgebraFamilyEnum.ALL, help="Catalog family.")
    else:
        parser.add_argument("--algebra", choices=AlgebraFamilyEnum.ALL, help="Catalog family.")
        parser.add_argument("--file", help="Algebra JSON document instead of a catalog family.")
    parser.add_argument("--p", type=int, default=5, help="Characteristic (default 5).")
    parser.add_argument("--n", type=int, help="Number of variables / matrix size.")
    parser.add_argument("--m", type=int, help="Number of variables of W(m;n).")
    parser.add_argument("--n-vec", dest="n_vec", help="Truncation heights of W(m;n), e.g. 2 or 2,1.")
    parser.add_argument("--two-r", dest="two_r", type=int, help="Number of variables of H(2r;1)^(2).")
    parser.add_argument("--dim", type=int, help="Dimension of an abelian algebra.")
    parser.add_argument("--allow-center", dest="allow_center", action="store_true",
                        help="Build sl_n even when p divides n.")


def _add_search_arguments(parser):
    parser.add_argument("--restarts", type=int, help="Torus search restarts (default from config).")
    parser.add_argument("--jobs", type=int, default=1, help="Worker threads.")


def build_parser():
    parser = argparse.ArgumentParser(prog="modlie", description="Exact computations in restricted Lie algebras "
                                                                "over F_p.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr.")
    parser.add_argument("--seed", type=int, help="RNG seed (default: MODLIE_SEED or the built-in seed).")
    parser.add_argument("--dim-cap", dest="dim_cap", type=int, help="Largest dimension a constructor will build.")
    commands = parser.add_subparsers(dest="command")

    construct = commands.add_parser("construct", help="Build a catalog algebra.")
    _add_algebra_arguments(construct, positional_family=True)
    construct.add_argument("--out", help="Write the algebra JSON document here.")
    construct.set_defaults(handler=cmd_construct)

    validate = commands.add_parser("validate", help="Check the Lie and restricted axioms.")
    _add_algebra_arguments(validate)
    validate.set_defaults(handler=cmd_validate)

    weights = commands.add_parser("weights", help="Weight-space decomposition relative to a torus.")
    _add_algebra_arguments(weights)
    _add_search_arguments(weights)
    weights.add_argument("--torus", choices=(TorusSourceEnum.STANDARD, TorusSourceEnum.SEARCH),
                         default=TorusSourceEnum.STANDARD)
    weights.add_argument("--xlsx", help="Also write the weight table to this Excel file.")
    weights.set_defaults(handler=cmd_weights)

    embed = commands.add_parser("embed", help="Embed W(m;n) into W(|n|;1).")
    embed.add_argument("--m", type=int, default=1)
    embed.add_argument("--n-vec", dest="n_vec", default="2")
    embed.add_argument("--p", type=int, default=5)
    embed.set_defaults(handler=cmd_embed)

    lift = commands.add_parser("lift", help="Lift a matrix in GL_n(F_p) to an automorphism of W(n;1).")
    lift.add_argument("--n", type=int, default=2)
    lift.add_argument("--p", type=int, default=5)
    lift.add_argument("--matrix", required=True, help="Rows separated by ';', entries by ',', e.g. '1,0;1,1'.")
    lift.add_argument("--verify", choices=(VerificationModeEnum.SAMPLE, VerificationModeEnum.FULL),
                      default=VerificationModeEnum.SAMPLE)
    lift.add_argument("--full-matrix", dest="full_matrix", action="store_true",
                      help="Include the automorphism matrix in the output.")
    lift.set_defaults(handler=cmd_lift)

    verify = commands.add_parser("verify", help="Run a named verification suite.")
    verify.add_argument("suite", choices=sorted(SUITES))
    verify.add_argument("--p", type=int, default=5)
    verify.add_argument("--n", type=int, default=2)
    verify.add_argument("--m", type=int, default=1)
    verify.add_argument("--n-vec", dest="n_vec", default="2")
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--xlsx", help="Also write the check records to this Excel file.")
    verify.set_defaults(handler=cmd_verify)

    search = commands.add_parser("torus-search", help="Randomized search for a torus of maximal dimension.")
    _add_algebra_arguments(search)
    _add_search_arguments(search)
    search.set_defaults(handler=cmd_torus_search)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else ExitCodeEnum.USAGE
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return ExitCodeEnum.USAGE

    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    overrides = dict((k, getattr(args, k)) for k in ("seed", "dim_cap") if getattr(args, k) is not None)
    config = Config.from_env(**overrides)

    try:
        return args.handler(args, config)
    except (UsageError, ModLieError, ValueError, KeyError) as e:
        logger.error("%s: %s", args.command, e)
        sys.stderr.write("modlie {}: {}\n".format(args.command, e))
        return ExitCodeEnum.USAGE


if __name__ == '__main__':
    sys.exit(main())
