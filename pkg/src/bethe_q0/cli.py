"""Command-line entry point.

Exit status: 0 when the computation succeeds and every check passes, 2 when
an identity check fails, 1 for usage errors and exceeded budgets.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from typing import Sequence

from . import characters, genfun, sce
from .exactalg import TruncSeries
from .fermionic import QuantumSpace, StringPattern, k_fermionic, r_closed, vacancy
from .report import SCHEMA_VERSION, Report, to_jsonable
from .setpartitions import PartitionCapError, mobius_table

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

_PAIR = re.compile(r"^\s*(\d+)\s*:\s*(-?\d+)\s*$")


class UsageError(Exception):
    pass


def parse_spec(text: str) -> dict[int, int]:
    """Parse ``"idx:val,idx:val"`` (or ``"0"`` for the empty map)."""
    if text.strip() == "0":
        return {}
    out: dict[int, int] = {}
    for chunk in text.split(","):
        match = _PAIR.match(chunk)
        if not match:
            raise UsageError(f"malformed entry {chunk!r} in {text!r}; expected idx:val")
        idx, val = int(match.group(1)), int(match.group(2))
        if idx < 1:
            raise UsageError(f"index must be positive in {text!r}")
        if val < 0:
            raise UsageError(f"negative value for index {idx} in {text!r}")
        if idx in out:
            raise UsageError(f"duplicate index {idx} in {text!r}")
        out[idx] = val
    return out


def parse_nu(text: str) -> QuantumSpace:
    return QuantumSpace(parse_spec(text))


def parse_pattern(text: str) -> StringPattern:
    return StringPattern(parse_spec(text))


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--budget-enum", type=_positive, default=sce.DEFAULT_ENUM_BUDGET,
                        help="maximum number of congruence solutions to enumerate")
    common.add_argument("--budget-partitions", type=_positive, default=sce.DEFAULT_POSET_BUDGET,
                        help="maximum number of partition tuples in an inclusion-exclusion sum")

    parser = _Parser(prog="bethe-q0", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mobius", parents=[common], help="Mobius matrix of the partition lattice")
    p.add_argument("--n", type=_nonnegative, required=True)
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("fermionic", help="R(nu, N) and K(nu, N)")
    fsub = p.add_subparsers(dest="quantity", required=True, parser_class=_Parser)
    for name in ("r", "k"):
        q = fsub.add_parser(name, parents=[common])
        q.add_argument("--nu", required=True)
        q.add_argument("--pattern", required=True)
        q.set_defaults(func=cmd_fermionic)

    p = sub.add_parser("sce", help="string center equation")
    ssub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = ssub.add_parser("enumerate", parents=[common])
    q.add_argument("--nu", required=True)
    q.add_argument("--pattern", required=True)
    q.add_argument("--off-diagonal", action="store_true")
    q.add_argument("--generic", action="store_true")
    q.set_defaults(func=cmd_sce_enumerate)
    q = ssub.add_parser("count", parents=[common])
    q.add_argument("--nu", required=True)
    q.add_argument("--pattern", required=True)
    q.add_argument("--method", choices=("direct", "mobius", "closed"), default="closed")
    q.set_defaults(func=cmd_sce_count)

    p = sub.add_parser("characters", help="character identities")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for target in (csub.add_parser("completeness", parents=[common]),
                   sub.add_parser("completeness", parents=[common], help="alias of characters completeness")):
        target.add_argument("--nu", required=True)
        target.add_argument("--max-magnons", type=_nonnegative, required=True)
        target.add_argument("--emit", help="also write the JSON report to this path")
        target.set_defaults(func=cmd_completeness)
    q = csub.add_parser("qsystem", parents=[common])
    q.add_argument("--kmax", type=_positive, required=True)
    q.add_argument("--order", type=_nonnegative, required=True)
    q.set_defaults(func=cmd_qsystem)
    q = csub.add_parser("sum-rule", parents=[common])
    q.add_argument("--nu", required=True)
    q.add_argument("--k", type=_positive, required=True)
    q.add_argument("--max-magnons", type=_nonnegative, required=True)
    q.set_defaults(func=cmd_sum_rule)

    p = sub.add_parser("genfun", help="generating-function identities")
    gsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = gsub.add_parser("verify", parents=[common])
    q.add_argument("--identity", required=True,
                   choices=("rkk", "fop", "factorization", "hkoty", "r0", "kexp", "residues"))
    q.add_argument("--l", type=_positive, default=2)
    q.add_argument("--order", type=_positive, default=6)
    q.add_argument("--nu", default="0")
    q.add_argument("--nu2", default="0", help="second quantum space for factorization")
    q.add_argument("--beta", default=None, help="comma-separated integers for hkoty (default all 0)")
    q.set_defaults(func=cmd_genfun)
    return parser


# -- output ------------------------------------------------------------------

def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2)


def _report_payload(report: Report, inputs: dict) -> dict:
    payload = report.to_json()
    payload["inputs"] = inputs
    for chk, out in zip(report.checks, payload["checks"]):
        if not chk.passed and isinstance(chk.lhs, TruncSeries) and isinstance(chk.rhs, TruncSeries):
            diff = chk.lhs.first_difference(chk.rhs)
            if diff is not None:
                exps, mine, theirs = diff
                out["first_difference"] = {"exponent": list(exps), "lhs": str(mine), "rhs": str(theirs)}
    return payload


def _report_table(report: Report) -> str:
    lines = [f"{report.identity}: {'pass' if report.passed else 'FAIL'}"]
    for chk in report.checks:
        mark = "ok" if chk.passed else "FAIL"
        if chk.passed:
            lines.append(f"  {mark:4} {chk.identity}")
        else:
            lines.append(f"  {mark:4} {chk.identity}: {chk.lhs} != {chk.rhs}")
    return "\n".join(lines)


def _finish_report(args, report: Report, inputs: dict) -> int:
    if args.format == "table":
        _emit(args, _report_table(report))
    else:
        _emit(args, _dump(_report_payload(report, inputs)))
    return EXIT_OK if report.passed else EXIT_FAILED


# -- commands ----------------------------------------------------------------

def cmd_mobius(args) -> int:
    table = mobius_table(args.n)
    names = [str(p) for p in table.partitions]
    mu = table.matrix()
    if args.format == "json":
        _emit(args, _dump({"schema": SCHEMA_VERSION, "n": args.n, "partitions": names,
                           "mu": [[str(x) for x in row] for row in mu]}))
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n", delimiter="," if args.format == "csv" else "\t")
        writer.writerow([""] + names)
        for name, row in zip(names, mu):
            writer.writerow([name] + row)
        _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_fermionic(args) -> int:
    nu, n = parse_nu(args.nu), parse_pattern(args.pattern)
    r, k = r_closed(nu, n), k_fermionic(nu, n)
    p = {m: vacancy(nu, n, m) for m in n.support}
    if args.format == "json":
        _emit(args, _dump({"schema": SCHEMA_VERSION, "nu": nu.to_spec(), "pattern": n.to_spec(),
                           "R": str(r), "K": str(k), "P": to_jsonable(p)}))
    else:
        _emit(args, str(r if args.quantity == "r" else k))
    return EXIT_OK


def _label(lab: tuple[int, int]) -> str:
    return f"{lab[0]}:{lab[1]}"


def cmd_sce_enumerate(args) -> int:
    system = sce.build_system(parse_nu(args.nu), parse_pattern(args.pattern))
    sols = sce.enumerate_solutions(system, args.budget_enum)
    if args.off_diagonal:
        sols = sce.filter_off_diagonal(system, sols)
    if args.generic:
        sols = sce.filter_generic(system, sols)
    labels = [_label(lab) for lab in system.labels]
    if args.format == "json":
        _emit(args, _dump({
            "schema": SCHEMA_VERSION,
            "nu": system.nu.to_spec(),
            "pattern": system.n.to_spec(),
            "filters": {"off_diagonal": args.off_diagonal, "generic": args.generic},
            "count": str(len(sols)),
            "solutions": [[[lab, str(x)] for lab, x in zip(labels, s.u)] for s in sols],
        }))
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n", delimiter="," if args.format == "csv" else "\t")
        writer.writerow(labels)
        for s in sols:
            writer.writerow([str(x) for x in s.u])
        _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_sce_count(args) -> int:
    nu, n = parse_nu(args.nu), parse_pattern(args.pattern)
    system = sce.build_system(nu, n)
    if args.method == "direct":
        count = sce.count_off_diagonal_direct(system, args.budget_enum)
    elif args.method == "mobius":
        count = sce.count_off_diagonal_mobius(system, args.budget_partitions)
    else:
        count = r_closed(nu, n)
    if args.format == "json":
        _emit(args, _dump({"schema": SCHEMA_VERSION, "nu": nu.to_spec(), "pattern": n.to_spec(),
                           "method": args.method, "count": str(count)}))
    else:
        _emit(args, str(count))
    return EXIT_OK


def cmd_completeness(args) -> int:
    nu = parse_nu(args.nu)
    report = characters.verify_completeness(nu, args.max_magnons)
    ch = characters.ch_quantum_space(nu)
    rch = characters.r_character(nu, args.max_magnons)
    kch = characters.k_character(nu, args.max_magnons)
    top = nu.gamma_inf
    rows = []
    for m in range(args.max_magnons + 1):
        lam = top - 2 * m
        rows.append({
            "M": m,
            "weight": lam,
            "R_sum": rch.coeff(lam),
            "weight_multiplicity": ch.coeff(lam),
            "K_sum": kch.coeff(lam) if lam >= 0 else None,
            "irreducible_multiplicity": ch.coeff(lam) - ch.coeff(lam + 2) if lam >= 0 else None,
        })
    payload = _report_payload(report, {"nu": nu.to_spec(), "max_magnons": str(args.max_magnons)})
    payload["table"] = to_jsonable(rows)
    text = _dump(payload)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8", newline="") as fh:
            fh.write(text + "\n")
    if args.format == "json":
        _emit(args, text)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n", delimiter="," if args.format == "csv" else "\t")
        writer.writerow(list(rows[0]))
        for row in rows:
            writer.writerow(["" if v is None else v for v in row.values()])
        _emit(args, buf.getvalue())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_qsystem(args) -> int:
    report = characters.verify_qsystem(args.kmax, args.order)
    return _finish_report(args, report, {"kmax": str(args.kmax), "order": str(args.order)})


def cmd_sum_rule(args) -> int:
    nu = parse_nu(args.nu)
    report = characters.verify_sum_rule(nu, args.k, args.max_magnons)
    return _finish_report(args, report, {"nu": nu.to_spec(), "k": str(args.k),
                                         "max_magnons": str(args.max_magnons)})


def cmd_genfun(args) -> int:
    nu, l, order = parse_nu(args.nu), args.l, args.order
    inputs = {"identity": args.identity, "l": str(l), "order": str(order), "nu": nu.to_spec()}
    if args.identity == "rkk":
        report = genfun.verify_rkk(nu, l, order)
    elif args.identity == "factorization":
        nu2 = parse_nu(args.nu2)
        inputs["nu2"] = nu2.to_spec()
        report = genfun.verify_factorization(nu, nu2, l, order)
    elif args.identity == "fop":
        report = genfun.verify_fop(l, order)
    elif args.identity == "hkoty":
        betas = [0] * l if args.beta is None else _parse_ints(args.beta)
        if len(betas) != l:
            raise UsageError(f"--beta needs {l} integers")
        inputs["beta"] = [str(b) for b in betas]
        report = genfun.verify_hkoty(betas, order)
    elif args.identity == "kexp":
        report = genfun.verify_kexp(l, order)
    elif args.identity == "residues":
        report = genfun.verify_residues(nu, l, order)
    else:
        report = genfun.verify_r0(l, order)
    return _finish_report(args, report, inputs)


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, sce.BudgetExceeded, sce.PreconditionError, sce.SingularSystem,
            PartitionCapError, ValueError) as exc:
        print(f"bethe-q0: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
