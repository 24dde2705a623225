"""``kpos`` command-line front end.

Exit status: 0 on success (including negative or inconclusive verdicts),
2 on invalid input, 3 when a theorem's hypotheses do not hold.
"""

from __future__ import annotations

import argparse
import secrets
import sys

import numpy as np

from . import __version__
from ._config import InapplicableError, ValidationError, get_tolerances, tolerances
from .certificates import certify_k_positive, certify_not_k_positive, positivity_window
from .maps import choi_of_map, make_generalized_choi, map_diagnostics
from .multipartite import (
    certify_sep_positive,
    generalized_choi_operator,
    make_F0,
    make_multipartite_example,
    product_block_positivity,
    sep_norm,
    sep_positive_not_positive_window,
)
from .oracle import DEFAULT_RESTARTS, is_k_block_positive
from .serialization import (
    certificate_to_json,
    choi_from_json,
    choi_to_json,
    dumps,
    load_json,
    map_from_json,
    map_terms_from_json,
    matrix_from_json,
    oracle_result_to_json,
    sep_norm_result_to_json,
)
from .spectral import (
    check_hermitian,
    frame_to_projector,
    ky_fan_norm,
    ky_fan_overlap,
    maximally_entangled_frame,
    singular_values,
)
from .states import classify_rho_mu, make_rho_mu, sn_lower_bound

EXIT_OK, EXIT_INVALID, EXIT_INAPPLICABLE = 0, 2, 3


def _dims(text: str) -> tuple[int, ...]:
    """``"3,3,3"`` or ``"9:3,3"`` (first factor, then the codomain factors)."""
    try:
        if ":" in text:
            head, tail = text.split(":", 1)
            dims = (int(head), *(int(x) for x in tail.split(",")))
        else:
            dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dims {text!r}")
    if len(dims) < 2 or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"need at least two positive dims, got {text!r}")
    return dims


def _family(text: str) -> dict:
    out = {}
    for part in text.split(","):
        key, _, value = part.partition("=")
        out[key.strip()] = value.strip()
    try:
        return {"d": int(out["d"]), "mu": float(out["mu"]), "P": out.get("P", "plus")}
    except (KeyError, ValueError):
        raise argparse.ArgumentTypeError(f"expected d=<int>,mu=<float>[,P=plus], got {text!r}")


def _header(args, seed=None) -> dict:
    out = {"version": __version__, "tolerances": get_tolerances().as_dict()}
    if seed is not None:
        out["seed"] = seed
    return out


def _seed(args) -> int:
    return args.seed if args.seed is not None else secrets.randbits(32)


def _restarts(args, default: int) -> int:
    return args.restarts if args.restarts is not None else default


def cmd_norms(args):
    a = matrix_from_json(load_json(args.matrix))
    return {"ky_fan": ky_fan_norm(a, args.k), "overlap": ky_fan_overlap(a, args.k),
            "singular_values": [float(s) for s in singular_values(a)], "k": args.k}


def cmd_choi(args):
    return choi_to_json(choi_of_map(map_from_json(load_json(args.map))))


def cmd_certify(args):
    m = map_from_json(load_json(args.map))
    if args.window:
        return {"window": [certificate_to_json(c) for c in positivity_window(m)]}
    cert = certify_k_positive(m, args.k)
    if not cert.certified and len(m.negative) == 1:
        cert = certify_not_k_positive(m, args.k)
    elif not cert.certified and cert.nu is None:
        raise InapplicableError(cert.reason)
    return certificate_to_json(cert)


def cmd_oracle(args):
    c = choi_from_json(load_json(args.choi))
    seed = _seed(args)
    res = is_k_block_positive(c, args.k, restarts=_restarts(args, DEFAULT_RESTARTS), seed=seed)
    out = oracle_result_to_json(res.result)
    out.update(positive=res.positive, margin=res.margin)
    return out


def cmd_schmidt(args):
    if args.family is not None:
        fam = args.family
        if fam["P"] != "plus":
            raise ValidationError(f"unknown projector {fam['P']!r}; only 'plus' is built in")
        F = maximally_entangled_frame(fam["d"])
        family = make_rho_mu(fam["d"], fam["mu"], frame_to_projector(F))
        return {"d": fam["d"], "mu": fam["mu"], "schmidt_number": classify_rho_mu(family, [F]),
                "sn_lower_bound": sn_lower_bound(family.rho, fam["d"])}
    doc = load_json(args.state)
    sigma = check_hermitian(matrix_from_json(doc.get("matrix", doc), "state"), name="state")
    d = int(round(np.sqrt(sigma.shape[0])))
    if d * d != sigma.shape[0]:
        raise ValidationError(f"state dimension {sigma.shape[0]} is not a square d*d")
    return {"d": d, "sn_lower_bound": sn_lower_bound(sigma, d)}


def cmd_sepnorm(args):
    A = matrix_from_json(load_json(args.matrix))
    seed = _seed(args)
    out = sep_norm_result_to_json(sep_norm(A, args.dims, restarts=_restarts(args, 64), seed=seed))
    out["dims"] = list(args.dims)
    return out


def cmd_certify_sep(args):
    m = map_from_json(load_json(args.map))
    seed = _seed(args)
    cert = certify_sep_positive(m, args.dims, restarts=_restarts(args, 64), seed=seed)
    out = certificate_to_json(cert)
    out["seed"] = seed
    return out


def _demo_choi(args, seed):
    d = args.d
    lam = args.lam if args.lam is not None else d / (d - 1)
    m = make_generalized_choi(d, lam, maximally_entangled_frame(d))
    window = positivity_window(m)
    c = choi_of_map(m)
    oracle = [is_k_block_positive(c, k, restarts=_restarts(args, DEFAULT_RESTARTS), seed=seed)
              for k in range(1, d + 1)]
    return {"d": d, "lambda": lam, "choi_min_eigenvalue": c.min_eigenvalue(),
            "window": [w.verdict.value for w in window],
            "certificates": [certificate_to_json(w) for w in window],
            "oracle_min": [o.margin for o in oracle]}


def _demo_reduction(args, seed):
    args.lam = float(args.d)
    return _demo_choi(args, seed)


def _demo_f0(args, seed):
    d, lam = args.d, args.lam if args.lam is not None else 0.25
    dims = (d * d, d, d)
    m = make_multipartite_example(d, lam)
    restarts = _restarts(args, 64)
    sep, pos = sep_positive_not_positive_window(m, dims, restarts=restarts, seed=seed)
    product = product_block_positivity(generalized_choi_operator(m, dims),
                                       restarts=restarts, seed=seed)
    F0 = make_F0(d)
    return {"d": d, "lambda": lam,
            "sep_positive": sep.certified, "positive": pos.certified,
            "window": [sep.mu, pos.mu],
            "norm_sq": ky_fan_overlap(F0, 1),
            "sep_norm_sq": sep_norm(F0, dims, restarts=restarts, seed=seed).value,
            "product_min": product.min_value,
            "sep_certificate": certificate_to_json(sep),
            "positivity_certificate": certificate_to_json(pos)}


DEMOS = {"choi": _demo_choi, "reduction": _demo_reduction, "f0": _demo_f0}


def cmd_demo(args):
    seed = _seed(args)
    report = DEMOS[args.name](args, seed)
    report.update(_header(args, seed))
    return report


def cmd_validate(args):
    doc = load_json(args.path)
    problems: list[str] = []
    try:
        if "positive" in doc or "negative" in doc:
            d1, d2, pos, neg = map_terms_from_json(doc)
            problems = [msg for _, msg in map_diagnostics(d1, d2, pos, neg)]
        elif "dims" in doc:
            choi_from_json(doc)
        else:
            matrix_from_json(doc)
    except ValidationError as exc:
        problems.append(str(exc))
    return {"path": args.path, "valid": not problems, "diagnostics": problems}


def build_parser() -> argparse.ArgumentParser:
    def common_flags(default):
        # subcommands repeat the global flags; SUPPRESS keeps them from clobbering earlier values
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--tolerance", type=float, default=default,
                       help="override the validation tolerance (default 1e-10)")
        c.add_argument("--seed", type=int, default=default)
        c.add_argument("--restarts", type=int, default=default)
        c.add_argument("--out", default=default, help="write JSON here instead of stdout")
        return c

    common = common_flags(argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="kpos", description=__doc__.splitlines()[0],
                                parents=[common_flags(None)])
    p.add_argument("--version", action="version", version=f"kpos {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("norms", parents=[common], help="Ky Fan norm and k-overlap of a matrix")
    s.add_argument("--matrix", required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_norms)

    s = sub.add_parser("choi", parents=[common], help="Choi operator of a map")
    s.add_argument("--map", required=True)
    s.set_defaults(func=cmd_choi)

    s = sub.add_parser("certify", parents=[common], help="k-positivity certificate")
    s.add_argument("--map", required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--k", type=int)
    g.add_argument("--window", action="store_true", help="all levels k = 1..d")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("oracle", parents=[common], help="variational k-block positivity")
    s.add_argument("--choi", required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("schmidt", parents=[common], help="Schmidt-number classification")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--state")
    g.add_argument("--family", type=_family, help="e.g. d=3,mu=0.5,P=plus")
    s.set_defaults(func=cmd_schmidt)

    s = sub.add_parser("sepnorm", parents=[common], help="sep-norm by alternating maximization")
    s.add_argument("--matrix", required=True)
    s.add_argument("--dims", type=_dims, required=True, help="d1,d2,...,dn")
    s.set_defaults(func=cmd_sepnorm)

    s = sub.add_parser("certify-sep", parents=[common], help="positivity on separable elements")
    s.add_argument("--map", required=True)
    s.add_argument("--dims", type=_dims, required=True, help="d1:d2,...,dn")
    s.set_defaults(func=cmd_certify_sep)

    s = sub.add_parser("demo", parents=[common], help="reproducible example reports")
    s.add_argument("name", choices=sorted(DEMOS))
    s.add_argument("--d", type=int, default=3)
    s.add_argument("--lambda", dest="lam", type=float, default=None)
    s.set_defaults(func=cmd_demo)

    s = sub.add_parser("validate", parents=[common], help="check a JSON input file")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)
    return p


def _execute(args) -> tuple[int, dict]:
    overrides = {} if args.tolerance is None else {"atol": args.tolerance}
    try:
        with tolerances(**overrides):
            report = args.func(args)
    except InapplicableError as exc:
        return EXIT_INAPPLICABLE, {"error": "inapplicable", "message": str(exc)}
    except (ValueError, OSError) as exc:
        # ValidationError and SchemaError are ValueErrors
        return EXIT_INVALID, {"error": "invalid input", "message": str(exc)}
    if args.command == "validate" and not report["valid"]:
        return EXIT_INVALID, report
    return EXIT_OK, report


def run(argv=None) -> tuple[int, dict]:
    """Parse ``argv``, execute, and return ``(exit status, JSON report)``."""
    return _execute(build_parser().parse_args(argv))


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return EXIT_INVALID if exc.code else EXIT_OK
    status, report = _execute(args)
    text = dumps(report)
    if args.out and status == EXIT_OK:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        (sys.stdout if status == EXIT_OK else sys.stderr).write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
