"""Command-line front end.

Every command prints a JSON report on stdout (``--human`` for a short text
summary). Exit status: 0 success, 2 invalid input, 3 cap exhausted (the
report then carries ``"status": "uncertified"`` and whatever was computed).
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import asdict, dataclass, field

from . import bounds as bnd
from . import correspondence as corr
from . import linear_products as lin
from .errors import CapExceeded, GhError, SearchCapExceeded, ValidationError
from .io import (
    Report,
    digest,
    load_pairs,
    load_product_spec,
    load_space,
    save_report,
    save_space,
    threads_from_env,
)
from .metric_core import (
    DEFAULT_PRODUCT_CAP,
    DEFAULT_TOL,
    GeneratorSpec,
    format_exponent,
    generate,
    lp_product,
    parse_exponent,
)

COMMANDS = ("space", "product", "exact", "bounds", "linear", "tori", "self-product",
            "clique-bound", "verify-lemmas")


@dataclass
class Caps:
    subset_bits: int = corr.DEFAULT_SUBSET_BITS
    mappair_states: int = corr.DEFAULT_MAPPAIR_STATES
    product_points: int = DEFAULT_PRODUCT_CAP
    subset_sup_n: int = lin.DEFAULT_SUBSET_SUP_N
    clique_nodes: int = bnd.DEFAULT_CLIQUE_NODES


@dataclass
class RunConfig:
    tolerance: float = DEFAULT_TOL
    caps: Caps = field(default_factory=Caps)
    seed: int = 0
    output: str = "json"
    threads: int = 1

    def __post_init__(self):
        if not self.tolerance >= 0:
            raise ValidationError(f"tolerance must be nonnegative, got {self.tolerance!r}")
        for name, value in asdict(self.caps).items():
            if value < 1:
                raise ValidationError(f"cap {name} must be positive, got {value!r}")

    def solver_caps(self):
        return {"cap_bits": self.caps.subset_bits, "mappair_cap": self.caps.mappair_states,
                "node_cap": self.caps.mappair_states}


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _common():
    common = _Parser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                   help=f"triangle-inequality tolerance (default {DEFAULT_TOL})")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--cap-bits", type=int, default=argparse.SUPPRESS,
                   help="max relation bits for subset enumeration")
    g.add_argument("--mappair-cap", type=int, default=argparse.SUPPRESS,
                   help="max map pairs enumerated / search nodes")
    g.add_argument("--product-cap", type=int, default=argparse.SUPPRESS)
    g.add_argument("--subset-sup-n", type=int, default=argparse.SUPPRESS)
    g.add_argument("--clique-nodes", type=int, default=argparse.SUPPRESS)
    g.add_argument("--json", dest="output", action="store_const", const="json",
                   default=argparse.SUPPRESS)
    g.add_argument("--human", dest="output", action="store_const", const="human",
                   default=argparse.SUPPRESS)
    g.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                   help="add wall time to the report (breaks byte-identical output)")
    return common


def build_parser():
    common = _common()
    parser = _Parser(prog="ghprod", parents=[common],
                     description="Exact Gromov-Hausdorff distances and bounds for finite l^p products.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    space = sub.add_parser("space", help="validate or generate spaces")
    ssub = space.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    v = ssub.add_parser("validate", parents=[common])
    v.add_argument("file")
    gcmd = ssub.add_parser("gen", parents=[common])
    gcmd.add_argument("spec", help="simplex:n, cycle:n (even), path:n or point")
    gcmd.add_argument("-o", "--output-file")

    product = sub.add_parser("product", help="build l^p products")
    psub = product.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
    b = psub.add_parser("build", parents=[common])
    b.add_argument("spec")
    b.add_argument("-o", "--output-file", required=True)

    e = sub.add_parser("exact", parents=[common], help="exact GH distance")
    e.add_argument("x")
    e.add_argument("y")
    e.add_argument("--strategy", default="auto",
                   choices=["auto", "subset", "mappair", "bb", *corr.STRATEGIES[1:]])
    e.add_argument("--report")

    bo = sub.add_parser("bounds", parents=[common], help="bounds between two products")
    bo.add_argument("--pairs", required=True)
    bo.add_argument("--p", default=None)
    bo.add_argument("--exact", action="store_true", help="also solve the products exactly")
    bo.add_argument("--report")

    li = sub.add_parser("linear", parents=[common], help="linear products with weights a, b")
    li.add_argument("--a", type=_floats, required=True)
    li.add_argument("--b", type=_floats, required=True)
    li.add_argument("--p", default="2")
    li.add_argument("--tail", type=float, default=None,
                    help="bound on the contribution of truncated entries (reported, not certified)")

    to = sub.add_parser("tori", parents=[common], help="flat tori in l^2")
    to.add_argument("--x", type=_floats, required=True)
    to.add_argument("--y", type=_floats, required=True)
    to.add_argument("--resolution", type=int, default=64)

    sp = sub.add_parser("self-product", parents=[common], help="X against its l^inf power")
    sp.add_argument("x")
    sp.add_argument("-k", type=int, required=True)

    cb = sub.add_parser("clique-bound", parents=[common], help="cardinality lower bound")
    cb.add_argument("x")
    cb.add_argument("y")
    cb.add_argument("--eps", type=float, default=0.0)

    vl = sub.add_parser("verify-lemmas", parents=[common], help="randomised endpoint/corner checks")
    vl.add_argument("--draws", type=int, default=500)
    vl.add_argument("--grid", type=int, default=10_001)
    vl.add_argument("--max-dims", type=int, default=3)
    return parser


def _config(ns) -> RunConfig:
    caps = Caps()
    for name in ("cap_bits", "mappair_cap", "product_cap", "subset_sup_n", "clique_nodes"):
        if hasattr(ns, name):
            target = {"cap_bits": "subset_bits", "mappair_cap": "mappair_states",
                      "product_cap": "product_points"}.get(name, name)
            setattr(caps, target, getattr(ns, name))
    return RunConfig(tolerance=getattr(ns, "tol", DEFAULT_TOL), caps=caps,
                     seed=getattr(ns, "seed", 0), output=getattr(ns, "output", "json"),
                     threads=threads_from_env())


# -- commands: each returns the result dict and fills ``partial`` as it goes

def _space_summary(X):
    return {"name": X.name, "n": X.n, "diam": X.diam}


def cmd_space(ns, cfg, partial):
    if ns.action == "validate":
        X = load_space(ns.file, cfg.tolerance)
        return {"valid": True, **_space_summary(X)}, [X.to_json()]
    if ns.action == "gen":
        X = generate(GeneratorSpec.parse(ns.spec), cap=cfg.caps.product_points)
        if ns.output_file:
            save_space(X, ns.output_file)
        return {"space": X.to_json(), "file": ns.output_file, **_space_summary(X)}, [ns.spec]
    raise ValidationError("space needs an action: validate or gen")


def cmd_product(ns, cfg, partial):
    if ns.action != "build":
        raise ValidationError("product needs an action: build")
    spec = load_product_spec(ns.spec, cfg.tolerance)
    if spec.cardinality > cfg.caps.product_points:
        raise CapExceeded("product points", spec.cardinality, cfg.caps.product_points)
    X = lp_product(spec, cap=cfg.caps.product_points)
    save_space(X, ns.output_file)
    out = {"file": ns.output_file, "p": format_exponent(spec.p), "factors": list(spec.shape),
           "weights": [w for _, w in spec.factors], "diam_formula": spec.diameter(),
           **_space_summary(X)}
    return out, [[(s.to_json(), w) for s, w in spec.factors], format_exponent(spec.p)]


def cmd_exact(ns, cfg, partial):
    X = load_space(ns.x, cfg.tolerance)
    Y = load_space(ns.y, cfg.tolerance)
    lo, hi = bnd.diam_sandwich(X, Y)
    partial.update({"lower": lo, "upper": hi, "two_dgh_lower": 2 * lo, "two_dgh_upper": 2 * hi,
                    "method": "diameter sandwich only"})
    res = corr.exact_gh(X, Y, ns.strategy, **cfg.solver_caps())
    out = res.to_json()
    out.update({"lower": lo, "upper": hi, "exact": res.value,
                "two_dgh_lower": 2 * lo, "two_dgh_upper": 2 * hi, "two_dgh_exact": res.two_dgh,
                "x": _space_summary(X), "y": _space_summary(Y)})
    return out, [X.to_json(), Y.to_json(), ns.strategy]


def cmd_bounds(ns, cfg, partial):
    p_file, pairs, per = load_pairs(ns.pairs, cfg.tolerance)
    if ns.p is None and p_file is None:
        raise ValidationError("exponent missing: pass --p or put p in the pairs file")
    p = parse_exponent(ns.p) if ns.p is not None else p_file
    fp = bnd.FactorPairing(p, pairs, per, caps=cfg.solver_caps())
    rep = bnd.product_bounds(fp)
    partial.update(rep.to_json())
    if ns.exact:
        rep = bnd.product_bounds(fp, exact=True, product_cap=cfg.caps.product_points)
    inputs = [[(x.to_json(), y.to_json()) for x, y in pairs], per, format_exponent(p), ns.exact]
    return rep.to_json(), inputs


def cmd_linear(ns, cfg, partial):
    res = lin.linear_gh(ns.a, ns.b, parse_exponent(ns.p), max_n=cfg.caps.subset_sup_n,
                        tail_bound=ns.tail)
    return {"a": ns.a, "b": ns.b, **res.to_json()}, [ns.a, ns.b, ns.p, ns.tail]


def cmd_tori(ns, cfg, partial):
    res = lin.tori_distance(ns.x, ns.y, ns.resolution)
    return {"x": ns.x, "y": ns.y, **res.to_json()}, [ns.x, ns.y, ns.resolution]


def cmd_self_product(ns, cfg, partial):
    import warnings

    X = load_space(ns.x, cfg.tolerance)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rep = bnd.self_product_distance(X, ns.k, cfg.caps.product_points, cfg.caps.clique_nodes)
    out = rep.to_json()
    if caught:
        out["warnings"] = [str(w.message) for w in caught]
    return out, [X.to_json(), ns.k]


def cmd_clique_bound(ns, cfg, partial):
    X = load_space(ns.x, cfg.tolerance)
    Y = load_space(ns.y, cfg.tolerance)
    try:
        cert = bnd.clique_certificate(X, Y, ns.eps, cfg.caps.clique_nodes)
    except SearchCapExceeded as exc:
        partial.update({"best_clique": exc.best, "best_clique_size": len(exc.best),
                        "bound": None})
        raise
    lo, hi = bnd.diam_sandwich(X, Y)
    out = cert.to_json()
    out.update({"sandwich_lower": lo, "sandwich_upper": hi, "two_dgh_sandwich_lower": 2 * lo,
                "two_dgh_sandwich_upper": 2 * hi, "certified": cert.certified})
    return out, [X.to_json(), Y.to_json(), ns.eps]


def cmd_verify_lemmas(ns, cfg, partial):
    res = lin.verify_lemmas(ns.draws, ns.grid, cfg.seed, ns.max_dims)
    return res, [ns.draws, ns.grid, cfg.seed, ns.max_dims]


HANDLERS = {
    "space": cmd_space, "product": cmd_product, "exact": cmd_exact, "bounds": cmd_bounds,
    "linear": cmd_linear, "tori": cmd_tori, "self-product": cmd_self_product,
    "clique-bound": cmd_clique_bound, "verify-lemmas": cmd_verify_lemmas,
}


def _human(report: Report) -> str:
    lines = [f"{' '.join(report.command)}: {report.status}"]
    if report.error:
        lines.append(f"  error: {report.error['type']}: {report.error['message']}")
    for key in ("dgh", "two_dgh", "exact", "two_dgh_exact", "lower", "upper", "attainable",
                "condition_gap", "method", "bound", "clique_size", "failures", "valid", "n", "diam"):
        if key in report.result:
            lines.append(f"  {key}: {report.result[key]}")
    return "\n".join(lines) + "\n"


def run(argv=None):
    """Execute one command; returns ``(exit code, Report or None)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError(f"missing command; expected one of {', '.join(COMMANDS)}")
        cfg = _config(ns)
    except GhError as exc:
        rep = Report(argv, digest(argv), "error",
                     error={"type": type(exc).__name__, "message": str(exc)})
        return 2, rep

    partial: dict = {}
    # thread count is left out so reports stay byte-identical across settings
    caps = {**asdict(cfg.caps), "tolerance": cfg.tolerance}
    try:
        result, inputs = HANDLERS[ns.command](ns, cfg, partial)
        rep = Report(argv, digest(inputs), "ok", result, caps)
        code = 0
    except CapExceeded as exc:
        err = {"type": type(exc).__name__, "message": str(exc), "what": exc.what,
               "required": exc.required, "cap": exc.cap}
        rep = Report(argv, digest(argv), "uncertified", {**partial, "uncertified": True}, caps, err)
        code = 3
    except (GhError, ValueError) as exc:
        rep = Report(argv, digest(argv), "error", {}, caps,
                     {"type": type(exc).__name__, "message": str(exc)})
        code = 2
    if getattr(ns, "timing", False):
        rep.timing = time.perf_counter() - started
    if code == 0 and getattr(ns, "report", None):
        save_report(rep, ns.report)
    rep.output = cfg.output
    return code, rep


def main(argv=None) -> int:
    code, rep = run(argv)
    if getattr(rep, "output", "json") == "human":
        sys.stdout.write(_human(rep))
    else:
        save_report(rep, stream=sys.stdout)
    if code == 2 and rep.error:
        sys.stderr.write(f"ghprod: {rep.error['message']}\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
