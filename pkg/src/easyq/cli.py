"""Command-line front end.  Every verb is a thin adapter over the library."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import category, models, moments, partitions, tensor_rep
from .errors import EasyqError, PrecondFailed

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# -- output ------------------------------------------------------------------------


def _cell(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return "pass" if v else "fail"
    return v


def emit_table(header: list[str], rows: list[list], fmt: str, out) -> None:
    rows = [[_cell(v) for v in r] for r in rows]
    if fmt == "json":
        out.write(json.dumps([dict(zip(header, r)) for r in rows], sort_keys=True) + "\n")
    elif fmt == "pretty":
        cols = [header] + [[str(v) for v in r] for r in rows]
        width = [max(len(str(c[i])) for c in cols) for i in range(len(header))]
        for c in cols:
            out.write("  ".join(str(v).rjust(w) for v, w in zip(c, width)) + "\n")
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        out.write(buf.getvalue())


def emit_json(data, out) -> None:
    out.write(json.dumps(data, sort_keys=True) + "\n")


def _space(args) -> tensor_rep.IndexSpace:
    if args.n is not None:
        if args.p is not None or args.q is not None:
            raise EasyqError("give either --n or --p/--q")
        return tensor_rep.IndexSpace(0, args.n)
    return tensor_rep.IndexSpace(args.p or 0, args.q or 0)


def _model(args) -> models.BlockMatrixModel:
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            return models.BlockMatrixModel.from_json(fh.read())
    if args.sample:
        return models.sample_classical(_group(args.sample), args.p, args.q, args.seed)
    raise EasyqError("give --file or --sample")


_GROUPS = {g.lower(): g for g in models.SAMPLERS}
_GROUPS.update({"torus-h": "TorusH", "hxs": "HxS", "h4": "H4"})
_PRESETS = {p.lower(): p for p in models.PRESETS}
_PRESETS.update({"double-sudoku": "doubleSudoku"})


def _group(name: str) -> str:
    try:
        return _GROUPS[name.lower()]
    except KeyError:
        raise EasyqError(f"unknown group {name!r}; choose from {', '.join(models.SAMPLERS)}") from None


def _preset(name: str) -> str:
    try:
        return _PRESETS[name.lower()]
    except KeyError:
        raise EasyqError(f"unknown preset {name!r}; choose from {', '.join(models.PRESETS)}") from None


# -- verbs -------------------------------------------------------------------------


def cmd_count(args, out):
    partitions.check_shape(args.cat, 0, max(args.upto - 1, 0))
    rows = [[k, partitions.count(args.cat, k)] for k in range(args.upto)]
    emit_table(["k", "count"], rows, args.format, out)
    return EXIT_OK


def _weighted_formula(cat, k):
    """Independent per-block weighted count for the decorated families."""
    cat = partitions.parse_category(cat)
    Cat = partitions.Cat
    if cat == Cat.NCBULLET:
        return moments.character_count("nc", k, moments.bullet_weight)
    if cat == Cat.NCBULLET_EVEN:
        return moments.character_count("nc-even", k, moments.bullet_weight)
    if cat == Cat.PBULLET:
        return moments.character_count("p", k, moments.bullet_weight)
    if isinstance(cat, partitions.Product) and cat.noncrossing:
        c1, c2 = cat.first, cat.second

        def w(size):
            one = (2 ** (size - 1) if c1.bulleted else 1) if c1.block_ok(size) else 0
            return one + (1 if c2.block_ok(size) else 0)

        return moments.character_count("nc", k, w)
    return ""


def cmd_counts(args, out):
    partitions.check_shape(args.cat, 0, args.upto)
    rows = [[k, partitions.count(args.cat, k), _weighted_formula(args.cat, k)] for k in range(1, args.upto + 1)]
    emit_table(["k", "count", "weighted"], rows, args.format, out)
    return EXIT_OK


def cmd_enumerate(args, out):
    parts = partitions.enumerate_partitions(args.cat, args.k, args.l)
    if args.format == "pretty":
        for p in parts:
            out.write(repr(p) + "\n")
    else:
        out.write("[" + ",".join(partitions.serialize(p) for p in parts) + "]\n")
    return EXIT_OK


def cmd_closure(args, out):
    gens = [partitions.parse(g) for g in args.gen]
    result = category.closure(gens, args.max_points)
    shapes: dict = {}
    for p in result:
        shapes[(p.k, p.l)] = shapes.get((p.k, p.l), 0) + 1
    rows = [[k, l, c] for (k, l), c in sorted(shapes.items())]
    status = EXIT_OK
    if args.compare:
        cmp = category.category_equal(result, args.compare, args.max_points)
        report = {"equal": cmp.equal, "counterexample": None if cmp.equal else partitions.to_dict(cmp.counterexample)}
        if not cmp.equal:
            report["onlyIn"] = "closure" if cmp.side == "left" else args.compare
            status = EXIT_FAIL
        sys.stderr.write(json.dumps(report, sort_keys=True) + "\n")
    emit_table(["k", "l", "members"], rows, args.format, out)
    return status


def cmd_equal(args, out):
    cmp = category.category_equal(args.a, args.b, args.max_points)
    report = {"equal": cmp.equal, "maxPoints": args.max_points}
    if not cmp.equal:
        report["counterexample"] = partitions.to_dict(cmp.counterexample)
        report["onlyIn"] = args.a if cmp.side == "left" else args.b
    emit_json(report, out)
    return EXIT_OK if cmp.equal else EXIT_FAIL


def cmd_gram(args, out):
    parts = partitions.enumerate_partitions(args.cat, args.k, args.l)
    out.write(f"{tensor_rep.gram_rank(parts, _space(args), args.impl)}\n")
    return EXIT_OK


def cmd_fixdim(args, out):
    out.write(f"{tensor_rep.fix_dim(args.cat, args.k, _space(args), args.impl)}\n")
    return EXIT_OK


def cmd_tmatrix(args, out):
    pi = partitions.parse(args.partition)
    T = tensor_rep.t_matrix(pi, _space(args), args.impl)
    out.write(tensor_rep.matrix_to_csv(T) if args.format == "csv" else tensor_rep.matrix_to_json(T) + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    U = _model(args)
    rep = models.check(U, _preset(args.preset), args.p, args.q, args.tol)
    emit_json({"pass": rep.passed, "preset": _preset(args.preset), "residuals": rep.residuals, "tol": args.tol}, out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_sample(args, out):
    out.write(models.sample_classical(_group(args.group), args.p, args.q, args.seed).to_json() + "\n")
    return EXIT_OK


def cmd_quotient(args, out):
    U = _model(args)
    try:
        P = models.quotient_projections(U, args.p, args.q, args.tol)
    except PrecondFailed as exc:
        emit_json({"pass": False, "reason": str(exc)}, out)
        return EXIT_FAIL
    out.write(P.to_json() + "\n")
    return EXIT_OK


def _fractions(text: str) -> list[Fraction]:
    return [Fraction(x.strip()) for x in text.split(",") if x.strip()]


def cmd_moments(args, out):
    if args.law == "free-poisson":
        m = moments.free_poisson(Fraction(args.t), args.k)
    elif args.law == "cumulants":
        if not args.values:
            raise EasyqError("--law cumulants needs --values")
        m = moments.moments_from_cumulants(_fractions(args.values), args.k)
    else:
        if not args.values:
            raise EasyqError("--law moments needs --values")
        m = _fractions(args.values)[: args.k]
    kap = moments.cumulants_from_moments(m, args.k)
    rows = [[k, mk, ck] for k, (mk, ck) in enumerate(zip(m, kap), start=1)]
    emit_table(["k", "moment", "cumulant"], rows, args.format, out)
    return EXIT_OK


def identity_table(name: str, upto: int):
    """Both sides of a counting identity per k, plus a verdict."""
    rows = []
    if name == "poissoncount":
        header = ["k", "formula", "count", "verdict"]
        for k in range(1, upto + 1):
            f = sum(2 ** (k - p.nu) for p in partitions.iter_partitions("nc", 0, k))
            c = partitions.count("nc-bullet", k)
            rows.append([k, f, c, f == c])
    elif name == "catfree":
        header = ["k", "formula", "count", "verdict"]
        for k in range(1, upto + 1):
            f = moments.character_count("nc", k, moments.free_product_weight)
            c = len(category.product_enumerate("nc-bullet", "nc", 0, k))
            rows.append([k, f, c, f == c])
    elif name == "besselcount":
        header = ["k", "perBlock", "count", "printed", "printedMatches", "verdict"]
        for k in range(1, upto + 1):
            f = moments.character_count("nc-even", 2 * k, moments.bullet_weight)
            c = partitions.count("nc-bullet-even", 2 * k)
            printed = sum(2 ** (k - p.nu) for p in partitions.iter_partitions("nc-even", 0, 2 * k))
            rows.append([k, f, c, printed, "yes" if printed == c else "no", f == c])
    elif name == "freep":
        header = ["k", "ncFormula", "ncCount", "ncEvenFormula", "ncEvenCount", "verdict"]
        for k in range(1, upto + 1):
            vals = []
            for c in ("nc", "nc-even"):
                vals.append(moments.character_count(c, k, lambda s: 2))
                vals.append(len(category.product_enumerate(c, c, 0, k)))
            rows.append([k, *vals, vals[0] == vals[1] and vals[2] == vals[3]])
    elif name == "ncjoin":
        header = ["k", "ncjoin", "nc", "verdict"]
        for k in range(1, upto + 1):
            j, c = moments.ncjoin_count(0, k), partitions.count("nc", k)
            rows.append([k, j, c, j == c])
    else:
        raise EasyqError(f"unknown identity {name!r}")
    return header, rows


def cmd_table(args, out):
    header, rows = identity_table(args.identity, args.upto)
    emit_table(header, rows, args.format, out)
    return EXIT_OK if all(r[-1] for r in rows) else EXIT_FAIL


def cmd_witness_search(args, out):
    U = models.witness_search(args.p, args.q, args.d, args.budget, args.seed)
    if U is None:
        emit_json({"found": False}, out)
    else:
        emit_json({"found": True, "mixingNorm": models.mixing_norm(U, args.p), "model": json.loads(U.to_json())}, out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="easyq", description="Partition categories, intertwiners and matrix models for two-parameter quantum groups.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_, fmt="csv"):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--format", choices=["csv", "json", "pretty"], default=fmt)
        return sp

    def space(sp):
        sp.add_argument("--n", type=int, help="plain index set 1..n (same as --p 0 --q n)")
        sp.add_argument("--p", type=int)
        sp.add_argument("--q", type=int)
        sp.add_argument("--impl", choices=tensor_rep.IMPLS)

    sp = verb("count", cmd_count, "|cat(0,k)| for k = 0..upto-1")
    sp.add_argument("--cat", required=True)
    sp.add_argument("--upto", type=int, required=True)

    sp = verb("counts", cmd_counts, "|cat(0,k)| and its per-block weighted formula for k = 1..upto")
    sp.add_argument("--cat", required=True)
    sp.add_argument("--upto", type=int, required=True)

    sp = verb("enumerate", cmd_enumerate, "members of cat(k,l) as JSON", fmt="json")
    sp.add_argument("--cat", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)

    sp = verb("closure", cmd_closure, "closure of generators under the category operations")
    sp.add_argument("--gen", action="append", required=True, help="generator partition as JSON (repeatable)")
    sp.add_argument("--max-points", type=int, required=True)
    sp.add_argument("--compare", help="category to compare the closure with")

    sp = verb("equal", cmd_equal, "compare two categories up to a size bound", fmt="json")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--max-points", type=int, required=True)

    sp = verb("gram", cmd_gram, "rank of span{T_pi : pi in cat(k,l)}")
    sp.add_argument("--cat", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, default=0)
    space(sp)

    sp = verb("fixdim", cmd_fixdim, "dimension of the fixed space from cat(0,k)")
    sp.add_argument("--cat", required=True)
    sp.add_argument("--k", type=int, required=True)
    space(sp)

    sp = verb("tmatrix", cmd_tmatrix, "the matrix T_pi", fmt="json")
    sp.add_argument("--partition", required=True, help="partition as JSON")
    space(sp)

    def model_source(sp):
        sp.add_argument("--file", help="model JSON file")
        sp.add_argument("--sample", help="sample a classical group instead: " + ", ".join(models.SAMPLERS))
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--p", type=int, default=0)
        sp.add_argument("--q", type=int, default=0)
        sp.add_argument("--tol", type=float, default=models.DEFAULT_TOL)

    sp = verb("verify", cmd_verify, "check a model against a relation preset", fmt="json")
    sp.add_argument("--preset", required=True)
    model_source(sp)

    sp = verb("sample", cmd_sample, "sample a classical group element as a model", fmt="json")
    sp.add_argument("--group", required=True)
    sp.add_argument("--p", type=int, default=0)
    sp.add_argument("--q", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)

    sp = verb("quotient", cmd_quotient, "entrywise projections U*U of an Hpq model", fmt="json")
    model_source(sp)

    sp = verb("moments", cmd_moments, "moment and cumulant series")
    sp.add_argument("--law", choices=["free-poisson", "cumulants", "moments"], default="free-poisson")
    sp.add_argument("--t", default="1", help="free Poisson parameter (rational)")
    sp.add_argument("--values", help="comma-separated rationals for --law cumulants/moments")
    sp.add_argument("--k", type=int, required=True)

    sp = verb("table", cmd_table, "both sides of a counting identity")
    sp.add_argument("--identity", required=True, choices=["poissoncount", "catfree", "besselcount", "freep", "ncjoin"])
    sp.add_argument("--upto", type=int, required=True)

    sp = verb("witness-search", cmd_witness_search, "search for an Hpq model with mixing blocks", fmt="json")
    sp.add_argument("--p", type=int, default=1)
    sp.add_argument("--q", type=int, default=1)
    sp.add_argument("--d", type=int, default=2)
    sp.add_argument("--budget", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (EasyqError, ValueError) as exc:
        sys.stderr.write(f"easyq {args.verb}: {exc}\n")
        parser.print_usage(sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
