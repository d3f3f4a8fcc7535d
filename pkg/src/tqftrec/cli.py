"""The ``tqft`` command line front end.

Exit codes: 0 success, 2 usage error, 3 computation budget exceeded,
4 internal invariant violation.  The env var TQFT_BUDGET overrides the
tuple-counting budget.  Output is deterministic: identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import amodel, bmodel, cellgraph, groups, intersect
from .exact import BudgetError, MultiRatFun, rat_to_str
from .frobenius import AxiomError, FrobeniusAlgebra, omega_tqft, trivial_algebra
from .groups import GroupAxiomError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


class UsageError(ValueError):
    pass


def _budget(default: int) -> int:
    raw = os.environ.get("TQFT_BUDGET")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise UsageError("TQFT_BUDGET must be an integer, got %r" % raw)
    if value <= 0:
        raise UsageError("TQFT_BUDGET must be positive")
    return value


# -- rendering ---------------------------------------------------------------


def _render(value):
    if isinstance(value, Fraction):
        return rat_to_str(value)
    if isinstance(value, MultiRatFun):
        return value.to_json()
    if isinstance(value, dict):
        return {k: _render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_render(v) for v in value]
    return value


def _render_flat(value):
    if isinstance(value, Fraction):
        return rat_to_str(value)
    if isinstance(value, MultiRatFun):
        return str(value)
    if isinstance(value, (list, tuple)):
        return " ".join(str(_render_flat(v)) for v in value)
    if isinstance(value, dict):
        return json.dumps(_render(value), sort_keys=True)
    return value


def emit(report: dict, fmt: str) -> str:
    """Serialize a report with stable field order; rationals as "p/q"."""
    if fmt == "json":
        return json.dumps(_render(report), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        rows = report.get("rows")
        if isinstance(rows, list) and rows and isinstance(rows[0], dict):
            header = list(rows[0].keys())
            writer.writerow(header)
            for row in rows:
                writer.writerow([_render_flat(row.get(h)) for h in header])
        else:
            writer.writerow(["field", "value"])
            for key, value in report.items():
                writer.writerow([key, _render_flat(value)])
        return buf.getvalue()
    if fmt == "text":
        keys = [k for k in report if k != "rows"]
        if keys == ["value"]:
            return "%s\n" % _render_flat(report["value"])
        lines = ["%s: %s" % (k, _render_flat(report[k])) for k in keys]
        for row in report.get("rows", ()):
            lines.append(_render_flat(row))
        return "\n".join(lines) + "\n"
    raise UsageError("unknown format %r (choose json, csv, or text)" % fmt)


# -- input parsing ------------------------------------------------------------


def _load_group_arg(source: str) -> groups.FiniteGroup:
    try:
        return groups.load_group(source)
    except (ValueError, GroupAxiomError) as exc:
        raise UsageError(str(exc))


def parse_decoration(token: str, algebra: FrobeniusAlgebra):
    """A decoration is a class label like "[1]" or a coefficient vector "1,0"."""
    token = token.strip()
    if token in algebra.labels:
        return algebra.basis(algebra.labels.index(token))
    if "," in token or "/" in token or token.lstrip("-").isdigit():
        parts = [p.strip() for p in token.split(",")]
        if len(parts) != algebra.dim:
            raise UsageError(
                "decoration %r has %d coefficients, need %d"
                % (token, len(parts), algebra.dim)
            )
        try:
            coeffs = [Fraction(p) for p in parts]
        except (ValueError, ZeroDivisionError):
            raise UsageError("decoration %r is not a coefficient vector" % token)
        return algebra.element(coeffs)
    raise UsageError(
        "unknown decoration %r; class labels are %s" % (token, list(algebra.labels))
    )


def _decorations(args, algebra: FrobeniusAlgebra, n: int):
    tokens = args.decor or []
    if not tokens:
        return [algebra.unit_element()] * n
    if len(tokens) == 1 and n > 1:
        tokens = tokens * n
    if len(tokens) != n:
        raise UsageError("need %d decorations, got %d" % (n, len(tokens)))
    return [parse_decoration(t, algebra) for t in tokens]


def _algebra_from_args(args) -> FrobeniusAlgebra:
    if getattr(args, "group", None):
        return groups.orbifold_frobenius(_load_group_arg(args.group))
    return trivial_algebra()


# -- subcommands ---------------------------------------------------------------


def cmd_group_info(args) -> dict:
    G = _load_group_arg(args.group)
    cd = groups.conjugacy(G)
    return {
        "order": G.order,
        "elements": list(G.names),
        "classes": list(cd.class_names),
        "class_sizes": [len(c) for c in cd.classes],
        "centralizer_orders": list(cd.centralizer_orders),
    }


def cmd_frobenius(args) -> dict:
    A = _algebra_from_args(args)
    report = A.to_json()
    report["counit"] = [rat_to_str(c) for c in A.counit]
    report["euler"] = [rat_to_str(c) for c in A.euler]
    return report


def cmd_omega(args) -> dict:
    G = _load_group_arg(args.group)
    cd = groups.conjugacy(G)
    A = groups.orbifold_frobenius(G, cd)
    vs = _decorations(args, A, args.n)
    report = {
        "group": args.group,
        "g": args.g,
        "n": args.n,
        "decor": list(args.decor or ["[1]"] * args.n),
    }
    if args.method in ("formula", "both"):
        report["formula"] = omega_tqft(A, args.g, args.n, vs)
    if args.method in ("brute", "both"):
        indices = []
        for token in report["decor"]:
            token = token.strip()
            if token not in A.labels:
                raise UsageError(
                    "brute counting needs class-label decorations, got %r" % token
                )
            indices.append(A.labels.index(token))
        report["brute"] = groups.omega_brute(
            G, args.g, indices, budget=_budget(groups.DEFAULT_BUDGET), cd=cd
        )
    if args.method == "both":
        report["match"] = report["formula"] == report["brute"]
    return report


def _catalan_common(args, dessin: bool) -> dict:
    mu = tuple(args.mu)
    if len(mu) != args.n:
        raise UsageError("profile length %d does not match n=%d" % (len(mu), args.n))
    A = _algebra_from_args(args)
    vs = _decorations(args, A, args.n)
    table = amodel.CatalanTable(A)
    if args.cache and os.path.exists(args.cache):
        with open(args.cache) as fh:
            table.load_scalar_entries(json.load(fh))
    if dessin:
        value = amodel.twisted_dessin(args.g, args.n, mu, A, vs)
    elif args.group:
        value = table.twisted(args.g, mu, vs)
    else:
        value = table.untwisted(args.g, mu)
    if args.cache:
        with open(args.cache, "w") as fh:
            json.dump(table.to_json(), fh, indent=2, sort_keys=True)
    return {"value": value}


def cmd_catalan(args) -> dict:
    return _catalan_common(args, dessin=False)


def cmd_dessin(args) -> dict:
    return _catalan_common(args, dessin=True)


def cmd_wgn(args) -> dict:
    if args.group:
        A = groups.orbifold_frobenius(_load_group_arg(args.group))
        tw = bmodel.twisted_wgn(args.g, args.n, A)
        rows = []
        for idx in sorted(tw.values):
            fn = bmodel.convert_frame(tw.values[idx], args.n, args.coords)
            rows.append(
                {
                    "decor": [A.labels[i] for i in idx],
                    "coords": args.coords,
                    "function": fn,
                }
            )
        return {"g": args.g, "n": args.n, "coords": args.coords, "rows": rows}
    fn = bmodel.convert_frame(bmodel.wgn(args.g, args.n), args.n, args.coords)
    return {"g": args.g, "n": args.n, "coords": args.coords, "function": fn}


def cmd_correlator(args) -> dict:
    k = tuple(args.k)
    if len(k) != args.n:
        raise UsageError("exponent length %d does not match n=%d" % (len(k), args.n))
    if args.group:
        A = groups.orbifold_frobenius(_load_group_arg(args.group))
        vs = _decorations(args, A, args.n)
        return {"value": intersect.twisted_correlator(args.g, args.n, k, A, vs)}
    return {"value": intersect.correlator(args.g, args.n, k)}


# -- verify ---------------------------------------------------------------------


def _suite_axioms(full: bool):
    names = ["trivial", "Z2", "Z3", "Z4", "Z2xZ2", "S3"] + (["Q8"] if full else [])
    for name in names:
        groups.orbifold_frobenius(groups.load_group("builtin:" + name))
    return True


def _suite_omega(full: bool):
    names = ["Z2", "Z3", "S3"] if not full else ["Z2", "Z3", "Z4", "Z2xZ2", "S3"]
    gmax = 2 if full else 1
    for name in names:
        G = groups.load_group("builtin:" + name)
        cd = groups.conjugacy(G)
        A = groups.orbifold_frobenius(G, cd)
        for g in range(gmax + 1):
            for i in range(A.dim):
                formula = omega_tqft(A, g, 1, [A.basis(i)])
                brute = groups.omega_brute(G, g, [i], cd=cd)
                if formula != brute:
                    return False
    return True


def _suite_catalan(full: bool):
    limit = 10 if full else 6
    profiles = [
        (0, 1, (m,)) for m in range(2, limit + 1, 2)
    ] + [(1, 1, (m,)) for m in range(4, limit + 1, 2)] + [
        (0, 3, (2, 2, 2)),
        (1, 2, (3, 3)),
    ]
    for g, n, mu in profiles:
        if amodel.catalan(g, n, mu) != cellgraph.count_arrowed_graphs(g, n, mu):
            return False
    return True


def _suite_lattice(full: bool):
    T = trivial_algebra()
    u = T.unit_element()
    profiles = [(0, 3, (2, 2, 2)), (0, 3, (1, 1, 2)), (1, 1, (4,)), (1, 1, (6,))]
    if full:
        profiles += [(0, 3, (1, 2, 3)), (1, 1, (8,))]
    for g, n, mu in profiles:
        got = amodel.lattice_twisted(g, n, mu, T, [u] * n)
        if got != cellgraph.count_lattice_points(g, n, mu):
            return False
    return True


def _suite_bmodel(full: bool):
    if not bmodel.verify_w02_identity():
        return False
    if not bmodel.residue_check(1, 1)["equal"]:
        return False
    w11 = bmodel.wgn(1, 1)
    t1 = MultiRatFun.var("t1", ("t1",))
    target = -((t1**2 - 1) ** 3) / (t1**4 * 128)
    if w11 != target:
        return False
    if full:
        if not bmodel.verify_kernel_integral():
            return False
        if not bmodel.residue_check(0, 3)["equal"]:
            return False
        co = bmodel.inverse_laplace_coeffs(1, 1, 6)
        for mu in ((4,), (6,)):
            if co.get(mu, Fraction(0)) != -amodel.catalan(1, 1, mu):
                return False
    return True


def _suite_intersect(full: bool):
    if intersect.correlator(0, 3, (0, 0, 0)) != 1:
        return False
    if intersect.correlator(0, 4, (1, 0, 0, 0)) != 1:
        return False
    if intersect.correlator(1, 1, (1,)) != Fraction(1, 24):
        return False
    names = ["Z2"] if not full else ["Z2", "Z3", "S3"]
    for name in names:
        A = groups.orbifold_frobenius(groups.load_group("builtin:" + name))
        for i in range(A.dim):
            rep = intersect.check_tauG(1, 1, (1,), A, [A.basis(i)])
            if not rep["equal"]:
                return False
    return True


VERIFY_SUITES = [
    ("frobenius-axioms", _suite_axioms),
    ("omega-formula-vs-brute", _suite_omega),
    ("catalan-vs-enumeration", _suite_catalan),
    ("lattice-vs-catalog", _suite_lattice),
    ("bmodel-invariants", _suite_bmodel),
    ("correlator-identities", _suite_intersect),
]


def cmd_verify(args) -> dict:
    full = args.level == "full"
    rows = []
    ok = True
    for name, suite in VERIFY_SUITES:
        try:
            passed = bool(suite(full))
        except BudgetError:
            raise
        except Exception:
            passed = False
        ok &= passed
        rows.append({"suite": name, "result": "pass" if passed else "FAIL"})
    return {"level": args.level, "all_passed": ok, "rows": rows}


# -- argument plumbing ------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tqft",
        description="Exact counting recursions twisted by finite-group TQFT data.",
    )
    parser.add_argument(
        "--format", choices=("json", "csv", "text"), default="text",
        help="output format (default text)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group-info", help="group order, classes, centralizers")
    p.add_argument("--group", required=True)
    p.set_defaults(func=cmd_group_info)

    p = sub.add_parser("frobenius", help="class-algebra tensors")
    p.add_argument("--group")
    p.set_defaults(func=cmd_frobenius)

    p = sub.add_parser("omega", help="surface amplitude by formula and/or counting")
    p.add_argument("--group", required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--decor", action="append")
    p.add_argument("--method", choices=("formula", "brute", "both"), default="formula")
    p.set_defaults(func=cmd_omega)

    for name, fn in (("catalan", cmd_catalan), ("dessin", cmd_dessin)):
        p = sub.add_parser(name, help="%s count, optionally decorated" % name)
        p.add_argument("--g", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--mu", type=int, nargs="+", required=True)
        p.add_argument("--group")
        p.add_argument("--decor", action="append")
        p.add_argument("--cache")
        p.set_defaults(func=fn)

    p = sub.add_parser("wgn", help="stable coefficient function of the recursion")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--coords", choices=("t", "x", "z"), default="t")
    p.add_argument("--group")
    p.set_defaults(func=cmd_wgn)

    p = sub.add_parser("correlator", help="psi-class correlator, optionally decorated")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, nargs="+", required=True)
    p.add_argument("--group")
    p.add_argument("--decor", action="append")
    p.set_defaults(func=cmd_correlator)

    p = sub.add_parser("verify", help="run the module invariant suites")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        report = args.func(args)
        sys.stdout.write(emit(report, args.format))
    except UsageError as exc:
        sys.stderr.write("usage error: %s\n" % exc)
        return EXIT_USAGE
    except BudgetError as exc:
        sys.stderr.write("budget exceeded: %s\n" % exc)
        return EXIT_BUDGET
    except (AxiomError, GroupAxiomError, AssertionError) as exc:
        sys.stderr.write("internal invariant violation: %s\n" % exc)
        return EXIT_INTERNAL
    except (ValueError, TypeError, KeyError, LookupError) as exc:
        sys.stderr.write("usage error: %s\n" % exc)
        return EXIT_USAGE
    if args.command == "verify" and not report["all_passed"]:
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
