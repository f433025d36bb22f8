"""Command-line front end.

Subcommands wrap the library module by module; every emission is
deterministic given the flags.  Exit codes: 0 success/found, 2 usage
error, 3 not found (e.g. no decoupling relation), 4 deficiency
(span-check).  Caps are guarded by a configurable hard ceiling.

Action mini-language for group actions:

    trivial
    torus:1,-1;2,0            (charge-matrix rows, semicolon-separated)
    sl2                       (standard e, f, h; needs --rank 2)
    finite:ord=4:chars=1,2    (character rows share the order)
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import linalg
from .exprlang import ExprSyntaxError, evaluate, parse
from .fock import (
    AlgebraDescriptor,
    state_to_json,
    state_to_text,
)
from .invariants import (
    FiniteAbelianAction,
    TorusAction,
    commutant_basis,
    dim_table,
    dim_table_csv_rows,
    gr_dim_table,
    heisenberg_current,
    sl2_standard,
    span_check,
    trivial_action,
    validate_heisenberg,
)
from .linalg import format_scalar, parse_scalar
from .ope import ope_table
from .verify import identity_suite
from .verma import (
    decoupling_relation,
    ideal_kernel,
    singular_vectors,
    verify_decoupling,
)
from .winfinity import (
    action_block_matrix,
    express_diagonal_map,
    rising_product_matrix,
    verify_rep,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_DEFICIENT = 4


class UsageError(ValueError):
    pass


def _emit(args, obj, text_fn=None, csv_rows=None, csv_header=None) -> None:
    fmt = args.format
    if fmt == "json":
        payload = json.dumps(obj, indent=2, sort_keys=True)
    elif fmt == "csv":
        if csv_rows is None:
            raise UsageError("this subcommand has no CSV form")
        buf = io.StringIO()
        w = csv.writer(buf)
        if csv_header:
            w.writerow(csv_header)
        w.writerows(csv_rows)
        payload = buf.getvalue().rstrip("\n")
    else:
        payload = text_fn() if text_fn is not None else json.dumps(obj, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)


def _alg(args) -> AlgebraDescriptor:
    return AlgebraDescriptor(args.algebra, args.rank)


def _check_caps(args, *values) -> None:
    for v in values:
        if v is not None and v > args.ceiling:
            raise UsageError(
                f"cap {v} exceeds the hard ceiling {args.ceiling} (raise --ceiling deliberately)"
            )


def parse_action_spec(spec: str, rank: int):
    spec = spec.strip()
    if spec == "trivial":
        return trivial_action()
    if spec == "sl2":
        if rank != 2:
            raise UsageError("sl2 acts on the rank-2 algebra; set --rank 2")
        return sl2_standard()
    if spec.startswith("torus:"):
        rows = []
        for row in spec[len("torus:"):].split(";"):
            entries = tuple(int(x) for x in row.split(",") if x.strip() != "")
            rows.append(entries)
        for r in rows:
            if len(r) != rank:
                raise UsageError(f"charge row {r} does not match --rank {rank}")
        return TorusAction(tuple(rows))
    if spec.startswith("finite:"):
        parts = spec.split(":")
        order = None
        chars = None
        for p in parts[1:]:
            if p.startswith("ord="):
                order = int(p[len("ord="):])
            elif p.startswith("chars="):
                chars = [
                    tuple(int(x) for x in row.split(","))
                    for row in p[len("chars="):].split(";")
                ]
        if order is None or chars is None:
            raise UsageError("finite action needs ord=K and chars=...")
        for r in chars:
            if len(r) != rank:
                raise UsageError(f"character row {r} does not match --rank {rank}")
        return FiniteAbelianAction(tuple((order, r) for r in chars))
    raise UsageError(f"unknown action spec {spec!r}")


def _parse_expr(text: str, alg: AlgebraDescriptor):
    try:
        return evaluate(parse(text), alg)
    except ExprSyntaxError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_ope(args) -> int:
    alg = _alg(args)
    a = _parse_expr(args.a, alg)
    b = _parse_expr(args.b, alg)
    table = ope_table(a, b)
    rows = [[n + 1, state_to_text(s)] for n, s in table.poles]
    _emit(
        args,
        table.to_json(),
        text_fn=lambda: table.to_text(f"({args.a})(z) ({args.b})(w)"),
        csv_rows=rows,
        csv_header=["pole", "state"],
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    alg = _alg(args)
    s = _parse_expr(args.expr, alg)
    _emit(args, state_to_json(s), text_fn=lambda: state_to_text(s))
    return EXIT_OK


def cmd_verify_identities(args) -> int:
    _check_caps(args, args.max_weight, args.max_degree)
    alg = _alg(args)
    report = identity_suite(alg, args.trials, args.max_weight, args.max_degree, args.seed)
    _emit(args, report, text_fn=lambda: json.dumps(report, indent=2))
    return EXIT_OK if not report["mismatches"] else 1


def cmd_winf_verify(args) -> int:
    _check_caps(args, args.max_weight, args.max_degree, args.lmax, args.kmax)
    alg = AlgebraDescriptor(args.kind, args.n)
    checked = 0
    mismatches = []
    for l1 in range(args.lmax + 1):
        for k1 in range(-args.kmax, args.kmax + 1):
            for l2 in range(l1, args.lmax + 1):
                for k2 in range(-args.kmax, args.kmax + 1):
                    rep = verify_rep(l1, k1, l2, k2, alg, args.max_weight, args.max_degree)
                    checked += rep["checked"]
                    mismatches.extend(rep["mismatches"])
    report = {"checked": checked, "mismatches": mismatches}
    _emit(args, report, text_fn=lambda: json.dumps(report, indent=2))
    return EXIT_OK if not mismatches else 1


def cmd_matrices(args) -> int:
    _check_caps(args, args.w, args.m)
    mw = action_block_matrix(args.w, args.m)
    r = args.r if args.r is not None else args.w + args.m + 1
    t = rising_product_matrix(r, max(args.m, 1))
    obj = {
        "action_matrix": mw.to_json(),
        "rising_product_matrix": t.to_json(),
        "r": r,
        "det_action_matrix": format_scalar(linalg.det(mw)),
        "det_rising_product_matrix": format_scalar(linalg.det(t)),
    }

    def text():
        lines = [f"M^{args.w} (m={args.m}):"]
        for row in mw.to_rows():
            lines.append("  [" + ", ".join(format_scalar(x) for x in row) + "]")
        lines.append(f"T({r},{max(args.m,1)}):")
        for row in t.to_rows():
            lines.append("  [" + ", ".join(format_scalar(x) for x in row) + "]")
        lines.append(f"det M = {obj['det_action_matrix']}, det T = {obj['det_rising_product_matrix']}")
        return "\n".join(lines)

    _emit(args, obj, text_fn=text)
    return EXIT_OK


def cmd_express_map(args) -> int:
    cs = [parse_scalar(x) for x in args.c.split(",")]
    ds = [parse_scalar(x) for x in args.d.split(",")]
    t = express_diagonal_map(args.w, args.m, cs, ds)
    obj = {"t": [format_scalar(x) for x in t]}

    def text():
        bits = [
            f"{format_scalar(c)} * J^{args.w + k}({k})" for k, c in enumerate(t) if c != 0
        ]
        return "phi = " + (" + ".join(bits) if bits else "0")

    _emit(args, obj, text_fn=text)
    return EXIT_OK


def cmd_singular(args) -> int:
    _check_caps(args, args.weight)
    c = parse_scalar(args.c)
    found = singular_vectors(c, args.weight, args.lcap, args.jcap)
    obj = {
        "central_charge": format_scalar(c),
        "weight": args.weight,
        "l_cap": args.lcap if args.lcap is not None else args.weight + 2,
        "j_cap": args.jcap if args.jcap is not None else args.weight,
        "up_to_caps": True,
        "vectors": [v.to_json() for v in found],
    }
    _emit(args, obj, text_fn=lambda: "\n".join(repr(v) for v in found) or "none")
    return EXIT_OK


def cmd_ideal_kernel(args) -> int:
    _check_caps(args, args.weight)
    found = ideal_kernel(args.n, args.weight)
    obj = {"n": args.n, "weight": args.weight, "dimension": len(found),
           "vectors": [v.to_json() for v in found]}
    _emit(args, obj, text_fn=lambda: "\n".join(repr(v) for v in found) or "none")
    return EXIT_OK


def cmd_decouple(args) -> int:
    _check_caps(args, args.l)
    rel = decoupling_relation(args.l, args.n, args.g)
    if rel is None:
        _emit(args, {"target": f"J^{args.l}", "found": False},
              text_fn=lambda: f"J^{args.l} does not decouple through J^0..J^{args.g}")
        return EXIT_NOT_FOUND
    ok = verify_decoupling(rel, args.n)
    obj = rel.to_json()
    obj["found"] = True
    obj["reverified"] = ok
    _emit(args, obj, text_fn=rel.to_text)
    return EXIT_OK if ok else 1


def cmd_inv_dims(args) -> int:
    _check_caps(args, args.max_weight, args.max_degree)
    alg = _alg(args)
    action = parse_action_spec(args.action, alg.rank)
    dt = dim_table(action, alg, args.max_weight, args.max_degree)
    gt = gr_dim_table(action, alg, args.max_weight, args.max_degree)
    rows = dim_table_csv_rows(dt, gt)
    obj = {
        "equal": dt == gt,
        "entries": [
            {"weight": w, "degree": d, "dim_state_side": a, "dim_gr_side": b, "equal": e}
            for w, d, a, b, e in rows
        ],
    }
    _emit(
        args,
        obj,
        text_fn=lambda: "\n".join(
            f"w={w} d={d}: state={a} gr={b} {'ok' if e else 'MISMATCH'}" for w, d, a, b, e in rows
        ),
        csv_rows=rows,
        csv_header=["weight", "degree", "dim_state_side", "dim_gr_side", "equal"],
    )
    return EXIT_OK


def cmd_span_check(args) -> int:
    _check_caps(args, args.max_weight, args.max_len)
    alg = _alg(args)
    action = parse_action_spec(args.action, alg.rank)
    gens = []
    with open(args.gens) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                gens.append(_parse_expr(line, alg))
    report = span_check(gens, action, alg, args.max_weight, args.max_len)
    _emit(args, report.to_json(), text_fn=lambda: json.dumps(report.to_json(), indent=2))
    return EXIT_OK if report.ok else EXIT_DEFICIENT


def cmd_commutant(args) -> int:
    _check_caps(args, args.max_weight, args.max_degree)
    rows = [tuple(int(x) for x in row.split(",")) for row in args.charges.split(";")]
    alg = _alg(args)
    if alg.kind != "bg":
        raise UsageError("commutants are computed in the bg system")
    for r in rows:
        if len(r) != alg.rank:
            raise UsageError(f"charge row {r} does not match --rank {alg.rank}")
    if not validate_heisenberg(rows, alg):
        raise UsageError("charge matrix fails the current-normalization contract")
    m = len(rows)
    units = [[1 if t == s else 0 for t in range(m)] for s in range(m)]
    currents = [heisenberg_current(u, rows, alg) for u in units]
    entries = []
    for w in range(args.max_weight + 1):
        kb = commutant_basis(currents, alg, w, args.max_degree)
        entries.append(
            {"weight": w, "dimension": len(kb), "elements": [state_to_json(s) for s in kb]}
        )
    obj = {"charges": [list(r) for r in rows], "degree_cap": args.max_degree, "weights": entries}
    _emit(
        args,
        obj,
        text_fn=lambda: "\n".join(f"w={e['weight']}: dim={e['dimension']}" for e in entries),
        csv_rows=[[e["weight"], e["dimension"]] for e in entries],
        csv_header=["weight", "dimension"],
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def _add_globals(p, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--rank", type=int, default=d(1), help="dimension n of the index space")
    p.add_argument("--algebra", choices=("bg", "bc", "bcbg"), default=d("bg"))
    p.add_argument("--format", choices=("json", "csv", "text"), default=d("json"))
    p.add_argument("--out", default=d(None), help="write output to this path")
    p.add_argument("--ceiling", type=int, default=d(12), help="hard cap ceiling for all bounds")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="vertexfock",
        description="exact computations in free-field vertex algebras",
    )
    _add_globals(p, suppress=False)
    # the same flags are accepted after the subcommand; SUPPRESS keeps
    # the subparser from clobbering values given before it
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    s = sub.add_parser(parents=[common], name="ope", help="singular OPE table of two expressions")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(fn=cmd_ope)

    s = sub.add_parser(parents=[common], name="eval", help="evaluate an expression to a state")
    s.add_argument("expr")
    s.set_defaults(fn=cmd_eval)

    s = sub.add_parser(parents=[common], name="verify-identities", help="randomized exact identity suite")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--max-weight", type=int, default=4)
    s.add_argument("--max-degree", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_verify_identities)

    s = sub.add_parser(parents=[common], name="winf-verify", help="realized commutators vs the Lie bracket")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--kind", choices=("bg", "bc"), default="bg")
    s.add_argument("--lmax", type=int, default=2)
    s.add_argument("--kmax", type=int, default=2)
    s.add_argument("--max-weight", type=int, default=3)
    s.add_argument("--max-degree", type=int, default=3)
    s.set_defaults(fn=cmd_winf_verify)

    s = sub.add_parser(parents=[common], name="matrices", help="mode-action block matrix and rising-product matrix")
    s.add_argument("--w", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--r", type=int, default=None)
    s.set_defaults(fn=cmd_matrices)

    s = sub.add_parser(parents=[common], name="express-map", help="express a diagonal mode-shift map in the J basis")
    s.add_argument("--w", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--c", required=True, help="comma-separated gamma coefficients c_0..c_m")
    s.add_argument("--d", required=True, help="comma-separated beta coefficients d_0..d_m")
    s.set_defaults(fn=cmd_express_map)

    s = sub.add_parser(parents=[common], name="singular", help="singular vectors of one weight slice")
    s.add_argument("--c", required=True, help="central charge p/q")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--lcap", type=int, default=None)
    s.add_argument("--jcap", type=int, default=None)
    s.set_defaults(fn=cmd_singular)

    s = sub.add_parser(parents=[common], name="ideal-kernel", help="kernel of the projection onto the realization")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--weight", type=int, required=True)
    s.set_defaults(fn=cmd_ideal_kernel)

    s = sub.add_parser(parents=[common], name="decouple", help="solve for a current in lower normally ordered words")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--g", type=int, required=True)
    s.set_defaults(fn=cmd_decouple)

    s = sub.add_parser(parents=[common], name="inv-dims", help="invariant dimension tables, state and symbol side")
    s.add_argument("--action", required=True)
    s.add_argument("--max-weight", type=int, required=True)
    s.add_argument("--max-degree", type=int, required=True)
    s.set_defaults(fn=cmd_inv_dims)

    s = sub.add_parser(parents=[common], name="span-check", help="strong-generation span comparison")
    s.add_argument("--action", required=True)
    s.add_argument("--gens", required=True, help="file of generator expressions, one per line")
    s.add_argument("--max-weight", type=int, required=True)
    s.add_argument("--max-len", type=int, required=True)
    s.set_defaults(fn=cmd_span_check)

    s = sub.add_parser(parents=[common], name="commutant", help="joint kernel of non-negative current modes")
    s.add_argument("--charges", required=True, help="charge-matrix rows, e.g. '1,-1;2,0'")
    s.add_argument("--max-weight", type=int, required=True)
    s.add_argument("--max-degree", type=int, required=True)
    s.set_defaults(fn=cmd_commutant)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, ExprSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
