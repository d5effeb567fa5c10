"""Command-line front end (``pdetlab``)."""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import comb
from pathlib import Path

from .complex import CellComplex, ComplexFormatError, InvalidComplexError, NotAcyclicError, ensure_valid
from .families import as_complex, diminished_trapezohedron, load, polygon, pyramid, simplex, simplex_skeleton, single_vertex
from .linalg import binet_cauchy_pdet, pdet, rank
from .orientation import Infeasible, dirac_operator, pair_middle_boundary, sign_solve, total_boundary, verify_square_root_theorem
from .report import EXPECTED_NEGATIVE, FAIL, SKIPPED, Check, Report, canonical_json, digest, plain
from .selfdual import SelfDualStructure, duality_suite
from .trees import BudgetExceeded, budget_from_env, cell_variables, enumerate_trees, pair_torsion_check, tau, tau_via_pdet_chain, verify_factorization
from .weighted import weighted_pdet

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
SUITES = ("linalg", "matrix-tree", "duality", "antipodal", "all")


class InputError(Exception):
    pass


def _load(source: str):
    try:
        obj = load(source)
    except FileNotFoundError:
        raise InputError(f"{source}: no such file or known family name") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except (ComplexFormatError, InvalidComplexError) as exc:
        raise InputError(f"{source}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise InputError(f"{source}: {exc}") from None
    try:
        ensure_valid(as_complex(obj))
    except InvalidComplexError as exc:
        raise InputError(f"{source}: invalid complex: {exc}") from None
    return obj


def _document(obj) -> str:
    return obj.to_json() if isinstance(obj, (SelfDualStructure, CellComplex)) else str(obj)


class Run:
    """Collects results and checks for one command and renders the run report."""

    def __init__(self, argv: list[str], source: str | None, obj=None):
        self.argv = argv
        self.source = source
        self.input_digest = digest(_document(obj)) if obj is not None else None
        self.results: dict = {}
        self.checks: list[Check] = []
        self.variables: dict[str, str] = {}
        self.start = time.perf_counter()

    def absorb(self, report: Report) -> None:
        self.checks.extend(report.checks)
        for k, v in report.values.items():
            self.results.setdefault(f"{report.title}: {k}", v)
        self.variables.update(report.variables)

    @property
    def failed(self) -> bool:
        return any(c.status == FAIL for c in self.checks)

    def to_dict(self) -> dict:
        body = {
            "command": " ".join(self.argv),
            "input": self.source,
            "input_digest": self.input_digest,
            "results": plain(self.results),
            "variables": self.variables,
            "checks": [c.to_dict() for c in self.checks],
            "ok": not self.failed,
        }
        body["report_digest"] = digest(canonical_json(body))
        body["timing_seconds"] = round(time.perf_counter() - self.start, 6)
        return body

    def render(self, as_json: bool, out=None) -> None:
        out = sys.stdout if out is None else out
        if as_json:
            print(json.dumps(self.to_dict(), indent=2), file=out)
            return
        for k, v in self.results.items():
            print(f"{k} = {_short(plain(v))}", file=out)
        for c in self.checks:
            line = f"[{c.status.upper():>17}] {c.name}"
            if c.status in (FAIL, EXPECTED_NEGATIVE):
                line += f"  expected={_short(plain(c.expected))} actual={_short(plain(c.actual))}"
            if c.note:
                line += f"  ({c.note})"
            print(line, file=out)
        if self.checks:
            bad = sum(c.status == FAIL for c in self.checks)
            print(f"{len(self.checks)} checks, {bad} failed", file=out)


def _short(v, width: int = 160) -> str:
    text = v if isinstance(v, str) else json.dumps(v)
    return text if len(text) <= width else text[: width - 3] + "..."


# ------------------------------------------------------------------ commands


def cmd_gen(args) -> int:
    fam, params = args.family.replace("-", "_"), args.params
    if fam == "pyramid":
        if not args.base:
            raise InputError("gen pyramid needs --base INPUT")
        base = _load(args.base)
        if not isinstance(base, SelfDualStructure):
            raise InputError("pyramid base must carry alpha and ball_dim")
        obj = pyramid(base)
    else:
        builders = {
            "polygon": (polygon, 1),
            "simplex": (simplex, 1),
            "simplex_skeleton": (simplex_skeleton, 2),
            "trapezohedron": (diminished_trapezohedron, 1),
            "diminished_trapezohedron": (diminished_trapezohedron, 1),
            "vertex": (single_vertex, 0),
        }
        if fam not in builders:
            raise InputError(f"unknown family {args.family!r}; choose from {', '.join(sorted(builders))}, pyramid")
        fn, arity = builders[fam]
        if len(params) != arity:
            raise InputError(f"{args.family} takes {arity} integer parameter(s), got {len(params)}")
        try:
            obj = fn(*params)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    text = obj.to_json()
    try:
        Path(args.output).write_text(text + "\n")
    except OSError as exc:
        raise InputError(f"cannot write {args.output}: {exc}") from None
    x = as_complex(obj)
    run = Run(args.argv, args.output, obj)
    run.results.update({"cell entries": len(x) - 1, "f_vector": list(x.f_vector()), "written": args.output})
    run.render(args.json)
    return EXIT_OK


def cmd_pdet(args) -> int:
    obj = _load(args.input)
    x = as_complex(obj)
    run = Run(args.argv, args.input, obj)
    if args.dim is None and not args.dirac:
        raise InputError("pdet needs --dim k and/or --dirac")
    if args.dim is not None:
        bd = x.boundary_matrix(args.dim)
        run.results[f"pdet(d{args.dim} d{args.dim}^t)"] = pdet(bd @ bd.T)
        if args.weighted:
            xs, ys = cell_variables(x, args.dim - 1, "x"), cell_variables(x, args.dim, "y")
            _guard(comb(bd.rows, rank(bd)) * comb(bd.cols, rank(bd)), args.budget, args.dim)
            run.results["weighted pdet"] = weighted_pdet(bd, list(xs), list(ys))
            run.variables.update(xs)
            run.variables.update(ys)
    if args.dirac:
        run.results["pdet(d + d^t)"] = pdet(dirac_operator(x))
    run.render(args.json)
    return EXIT_OK


def _guard(size: int, budget: int, dim: int) -> None:
    if size > budget:
        raise BudgetExceeded(dim, size, budget)


def cmd_trees(args) -> int:
    x = as_complex(_load(args.input))
    names = {c: n for n, c in cell_variables(x, args.dim, "y").items()} if args.weighted else None
    for rec in enumerate_trees(x, args.dim, args.budget):
        line = {"facets": list(rec.ids), "torsion": rec.torsion}
        if names:
            line["monomial"] = "*".join(names[c] for c in rec.ids) or "1"
        print(json.dumps(line))
    return EXIT_OK


def cmd_tau(args) -> int:
    obj = _load(args.input)
    x = as_complex(obj)
    run = Run(args.argv, args.input, obj)
    chain = enum = None
    if args.method in ("chain", "both"):
        chain = tau_via_pdet_chain(x, args.dim)
        run.results[f"tau_{args.dim} (chain)"] = chain
    if args.method in ("enumerate", "both"):
        try:
            res = tau(x, args.dim, args.budget)
        except BudgetExceeded:
            if args.method == "enumerate":
                raise
            run.results["enumeration"] = "skipped: over budget"
        else:
            enum = res.value
            run.results[f"tau_{args.dim} (enumerate)"] = enum
            run.results["trees"] = res.tree_count
            run.results["max torsion"] = res.max_torsion
    if chain is not None and enum is not None:
        run.checks.append(Check("enumeration agrees with pdet chain", "tau_i by trees = pdet chain", chain, enum))
    run.render(args.json)
    return EXIT_FAIL if run.failed else EXIT_OK


def _linalg_suite(x: CellComplex, budget: int) -> Report:
    rep = Report("linalg")
    for i in range(0, x.dim + 1):
        bd = x.boundary_matrix(i)
        lap = bd @ bd.T
        p = pdet(lap)
        rep.values[f"pdet(d{i} d{i}^t)"] = p
        r = rank(bd)
        if comb(bd.rows, r) * comb(bd.cols, r) <= budget:
            rep.add(Check(f"Binet-Cauchy pdet, dim {i}", "pdet(d d^t) = sum det(d_IJ)^2", p, binet_cauchy_pdet(bd)))
        else:
            rep.add(Check(f"Binet-Cauchy pdet, dim {i}", "pdet(d d^t) = sum det(d_IJ)^2", None, None, SKIPPED, "over budget"))
    d = total_boundary(x)
    dirac = d + d.T
    rep.add(Check("total boundary squares to zero", "d d = 0", True, (d @ d).is_zero()))
    rep.add(Check("Dirac square is the full Laplacian", "(d + d^t)^2 = d d^t + d^t d", d @ d.T + d.T @ d, dirac @ dirac))
    pd, pl = pdet(dirac), pdet(d @ d.T)
    rep.values["pdet(d + d^t)"] = pd
    rep.add(Check("Dirac pdet squared", "pdet(d + d^t)^2 = pdet(d d^t)^2", pl * pl, pd * pd))
    return rep


def _matrix_tree_suite(x: CellComplex, budget: int) -> Report:
    rep = Report("matrix-tree")
    for i in range(0, x.dim + 1):
        try:
            chain = tau_via_pdet_chain(x, i)
        except NotAcyclicError as exc:
            rep.add(Check(f"matrix-tree, dim {i}", "pdet(d d^t) = tau_(i-1) tau_i", None, None, SKIPPED, str(exc)))
            continue
        rep.values[f"tau_{i} (chain)"] = chain
        try:
            rep.extend(verify_factorization(x, i, True, budget))
            t_enum = tau(x, i, budget).value
            rep.add(Check(f"tau_{i}: enumeration = chain", "tau_i by trees = pdet chain", chain, t_enum))
        except BudgetExceeded as exc:
            rep.add(Check(f"matrix-tree enumeration, dim {i}", "pdet(d d^t) = tau_(i-1) tau_i", None, None, SKIPPED, str(exc)))
            continue
        if i >= 1:
            rep.extend(pair_torsion_check(x, i, 50, 0, budget))
    return rep


def _antipodal_suite(obj, budget: int) -> Report:
    rep = Report("antipodal")
    if not isinstance(obj, SelfDualStructure):
        rep.add(Check("middle boundary sign solve", "d^t = (-1)^k d", None, None, SKIPPED, "input has no alpha"))
        return rep
    if obj.ball_dim % 2:
        rep.add(Check("middle boundary sign solve", "d^t = (-1)^k d", None, None, SKIPPED,
                      f"ball dimension {obj.ball_dim} is odd"))
        return rep
    b = pair_middle_boundary(obj)
    signs = sign_solve(b)
    if isinstance(signs, Infeasible):
        status = FAIL if obj.antipodal else EXPECTED_NEGATIVE
        rep.add(Check("middle boundary sign solve", "d^t = (-1)^k d", "solvable" if obj.antipodal else "infeasible",
                      "infeasible", status, str(signs)))
        return rep
    rep.add(Check("middle boundary sign solve", "d^t = (-1)^k d", "solvable", "solvable"))
    rep.values["signs"] = signs
    rep.extend(verify_square_root_theorem(obj, signs, budget))
    return rep


def cmd_verify(args) -> int:
    obj = _load(args.input)
    x = as_complex(obj)
    run = Run(args.argv, args.input, obj)
    wanted = ("linalg", "matrix-tree", "duality", "antipodal") if args.suite == "all" else (args.suite,)
    for suite in wanted:
        if suite == "linalg":
            run.absorb(_linalg_suite(x, args.budget))
        elif suite == "matrix-tree":
            run.absorb(_matrix_tree_suite(x, args.budget))
        elif suite == "duality":
            if isinstance(obj, SelfDualStructure):
                run.absorb(duality_suite(obj, args.budget))
            else:
                run.checks.append(Check("duality", "T i-tree <=> T^v j-tree", None, None, SKIPPED, "input has no alpha"))
        elif suite == "antipodal":
            run.absorb(_antipodal_suite(obj, args.budget))
    run.render(args.json)
    return EXIT_FAIL if run.failed else EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the run report as JSON")
    common.add_argument("--budget", type=int, default=None, help="maximum subsets scanned by tree enumeration")

    p = argparse.ArgumentParser(prog="pdetlab", description="Exact pseudodeterminants, cellular trees and self-dual balls.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a built-in family as complex JSON")
    g.add_argument("family", help="polygon, simplex, simplex-skeleton, trapezohedron, vertex or pyramid")
    g.add_argument("rest", nargs="+", help="integer parameters followed by the output path")
    g.add_argument("--base", help="base structure for pyramid (file or family name)")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("pdet", parents=[common], help="pseudodeterminant of d_k d_k^t")
    d.add_argument("input")
    d.add_argument("--dim", type=int)
    d.add_argument("--weighted", action="store_true")
    d.add_argument("--dirac", action="store_true")
    d.set_defaults(func=cmd_pdet)

    t = sub.add_parser("trees", parents=[common], help="stream i-trees as JSON lines")
    t.add_argument("input")
    t.add_argument("--dim", type=int, required=True)
    t.add_argument("--weighted", action="store_true")
    t.set_defaults(func=cmd_trees)

    u = sub.add_parser("tau", parents=[common], help="torsion tree enumerator tau_i")
    u.add_argument("input")
    u.add_argument("--dim", type=int, required=True)
    u.add_argument("--method", choices=("enumerate", "chain", "both"), default="both")
    u.set_defaults(func=cmd_tau)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("input")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = ["pdetlab", *argv]
    if args.budget is None:
        args.budget = budget_from_env()
    try:
        if args.command == "gen":
            *nums, args.output = args.rest
            try:
                args.params = [int(n) for n in nums]
            except ValueError:
                raise InputError(f"family parameters must be integers, got {nums}") from None
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: {exc} (or raise --budget)", file=sys.stderr)
        return EXIT_BUDGET
    except NotAcyclicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
