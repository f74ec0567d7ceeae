"""Command-line front end.

Subcommands: hooks, membership, norm, positivity, demo, verify.  Operators
come from JSON spec files or from ``demo:`` pseudo-names; tables are TSV on
stdout, diagnostics go to stderr.  Exit codes: 0 success / certified-in,
2 not Hermitian, 3 certified-out or negative witness, 4 empirical verdict,
64 malformed input, 70 numeric failure.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from typing import Sequence, TextIO

from . import constructions
from .compressions import (
    CompressionSchedule,
    NegativeWitness,
    NotHermitian,
    PositiveUpTo,
    norm_via_compressions,
    positivity_via_compressions,
)
from .decomposition import (
    CertifiedIn,
    CertifiedOut,
    Empirical,
    hook_sequence,
    membership,
)
from .model import (
    CantorCoarsen,
    ExplicitOperator,
    OperatorRep,
    Partition,
    Uniform,
)
from .numerics import NumericFailureError
from .verify import DEMOS, geometric_domination, run_closure

DEFAULT_MAX_DEPTH = 4096


class OperatorSpecError(ValueError):
    """Malformed operator spec; ``key`` names the offending part."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _max_depth() -> int:
    raw = os.environ.get("NDC_MAX_DEPTH")
    if raw is None:
        return DEFAULT_MAX_DEPTH
    try:
        cap = int(raw)
    except ValueError as exc:
        raise OperatorSpecError("NDC_MAX_DEPTH", f"not an integer: {raw!r}") from exc
    if cap < 1:
        raise OperatorSpecError("NDC_MAX_DEPTH", f"must be positive, got {cap}")
    return cap


def _effective_depth(requested: int) -> int:
    return min(requested, _max_depth())


# ---------------------------------------------------------------------------
# Operator spec files


def _parse_partition(node: object, key: str = "partition") -> Partition:
    if not isinstance(node, dict):
        raise OperatorSpecError(key, "must be an object")
    kind = node.get("kind")
    if kind == "uniform":
        width = node.get("width")
        if not isinstance(width, int) or width < 1:
            raise OperatorSpecError(f"{key}.width", f"must be a positive integer, got {width!r}")
        return Uniform(width)
    if kind == "cantor_coarsen":
        if "base" not in node:
            raise OperatorSpecError(f"{key}.base", "missing for cantor_coarsen")
        return CantorCoarsen(_parse_partition(node["base"], key=f"{key}.base"))
    raise OperatorSpecError(f"{key}.kind", f"unknown kind {kind!r}")


def _parse_entries(node: object) -> ExplicitOperator:
    if not isinstance(node, list):
        raise OperatorSpecError("entries", "must be a list of [row, col, re, im]")
    triples = []
    for pos, item in enumerate(node):
        if not isinstance(item, list) or len(item) != 4:
            raise OperatorSpecError(f"entries[{pos}]", "expected [row, col, re, im]")
        row, col, re_part, im_part = item
        if not isinstance(row, int) or not isinstance(col, int) or row < 0 or col < 0:
            raise OperatorSpecError(f"entries[{pos}]", "row/col must be non-negative integers")
        if not isinstance(re_part, (int, float)) or not isinstance(im_part, (int, float)):
            raise OperatorSpecError(f"entries[{pos}]", "re/im must be numbers")
        triples.append((row, col, complex(re_part, im_part)))
    try:
        return ExplicitOperator.from_entries(triples)
    except ValueError as exc:
        raise OperatorSpecError("entries", str(exc)) from exc


def _parse_scalar(node: object, key: str) -> complex:
    if isinstance(node, (int, float)):
        return complex(node)
    if isinstance(node, list) and len(node) == 2 and all(isinstance(x, (int, float)) for x in node):
        return complex(node[0], node[1])
    raise OperatorSpecError(key, f"expected a number or [re, im], got {node!r}")


def _build_generator(node: object, part: Partition) -> OperatorRep:
    if not isinstance(node, dict):
        raise OperatorSpecError("generator", "must be an object")
    name = node.get("name")
    params = node.get("params", {})
    if not isinstance(params, dict):
        raise OperatorSpecError("generator.params", "must be an object")

    def need_coarse() -> CantorCoarsen:
        if not isinstance(part, CantorCoarsen):
            raise OperatorSpecError(
                "partition", f"generator {name!r} needs kind cantor_coarsen"
            )
        return part

    try:
        if name == "matrix_unit":
            return constructions.matrix_unit(
                need_coarse(),
                int(params.get("group", -1)),
                int(params.get("i", -1)),
                int(params.get("j", -1)),
            )
        if name == "row_isometry":
            if "lambda" not in params:
                raise OperatorSpecError("generator.params.lambda", "missing")
            lam = _parse_scalar(params["lambda"], "generator.params.lambda")
            return constructions.row_isometry(lam, need_coarse())
        if name == "minf_sample":
            rule = params.get("rule")
            if rule == "geometric":
                return constructions.minf_sample("geometric", params.get("base"))
            if rule == "inverse_sum":
                return constructions.minf_sample("inverse_sum")
            raise OperatorSpecError("generator.params.rule", f"unknown rule {rule!r}")
        if name == "coarse_projection":
            return constructions.coarse_projection(need_coarse(), int(params.get("block", -1)))
    except OperatorSpecError:
        raise
    except (TypeError, ValueError) as exc:
        raise OperatorSpecError("generator.params", str(exc)) from exc
    raise OperatorSpecError("generator.name", f"unknown generator {name!r}")


def load_spec_file(path: str) -> tuple[OperatorRep, Partition]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise OperatorSpecError("op", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise OperatorSpecError("op", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise OperatorSpecError("op", "top level must be an object")
    unknown = set(doc) - {"entries", "generator", "partition"}
    if unknown:
        raise OperatorSpecError(sorted(unknown)[0], "unknown top-level key")
    if "partition" not in doc:
        raise OperatorSpecError("partition", "missing")
    part = _parse_partition(doc["partition"])
    has_entries = "entries" in doc
    has_generator = "generator" in doc
    if has_entries == has_generator:
        raise OperatorSpecError(
            "entries", "exactly one of entries/generator must be present"
        )
    if has_entries:
        return _parse_entries(doc["entries"]), part
    return _build_generator(doc["generator"], part), part


def _demo_operator(name: str, args: argparse.Namespace) -> tuple[OperatorRep, Partition]:
    fine = Uniform(1)
    coarse = constructions.cantor_coarsen(fine)
    if name == "row-isometry":
        return constructions.row_isometry(args.lam, coarse), coarse
    if name == "minf-geometric":
        return constructions.minf_sample("geometric", args.base), fine
    if name == "minf-inverse-sum":
        return constructions.minf_sample("inverse_sum"), fine
    if name == "coarse-projection":
        op = constructions.coarse_projection(coarse, args.block)
        part = fine if args.partition == "fine" else coarse
        return op, part
    raise OperatorSpecError("op", f"unknown demo operator {name!r}")


def _resolve_operator(args: argparse.Namespace) -> tuple[OperatorRep, Partition]:
    spec = args.op
    if spec.startswith("demo:"):
        return _demo_operator(spec[len("demo:") :], args)
    return load_spec_file(spec)


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_hooks(args: argparse.Namespace, out: TextIO) -> int:
    op, part = _resolve_operator(args)
    depth = _effective_depth(args.depth)
    for point in hook_sequence(op, part, args.horizon, depth):
        upper = "inf" if point.bound.upper is None else _fmt(point.bound.upper)
        out.write(f"{point.i}\t{_fmt(point.bound.lower)}\t{upper}\n")
    return 0


def _cmd_membership(args: argparse.Namespace, out: TextIO) -> int:
    op, part = _resolve_operator(args)
    depth = _effective_depth(args.depth)
    verdict = membership(op, part, eps=args.eps, horizon=args.horizon, depth=depth)
    if isinstance(verdict, CertifiedIn):
        out.write("CERTIFIED_IN\n")
        return 0
    if isinstance(verdict, CertifiedOut):
        out.write(f"CERTIFIED_OUT eps={_fmt(verdict.eps)}\n")
        return 3
    assert isinstance(verdict, Empirical)
    token = "EMPIRICAL_IN" if verdict.status == "in" else "EMPIRICAL_OUT"
    out.write(f"{token} maxtail={_fmt(verdict.max_tail_hook_lower)}\n")
    return 4


def _cmd_norm(args: argparse.Namespace, out: TextIO) -> int:
    op, part = _resolve_operator(args)
    depth = _effective_depth(args.depth)
    sched = CompressionSchedule.prefixes(args.levels, depth)
    points, estimate = norm_via_compressions(op, part, sched)
    for n, value in enumerate(points):
        out.write(f"{n}\t{_fmt(value)}\n")
    upper = "inf" if estimate.upper is None else _fmt(estimate.upper)
    out.write(f"estimate\t{_fmt(estimate.lower)}\t{upper}\n")
    return 0


def _cmd_positivity(args: argparse.Namespace, out: TextIO) -> int:
    op, part = _resolve_operator(args)
    sched = CompressionSchedule.prefixes(args.levels, _effective_depth(64))
    verdict = positivity_via_compressions(op, part, sched, slack=args.slack)
    if isinstance(verdict, NotHermitian):
        out.write(f"NOT_HERMITIAN row={verdict.row} col={verdict.col}\n")
        return 2
    if isinstance(verdict, NegativeWitness):
        subset = ",".join(str(b) for b in verdict.subset)
        out.write(f"NEGATIVE_WITNESS subset={subset} min_eig={_fmt(verdict.min_eig)}\n")
        return 3
    assert isinstance(verdict, PositiveUpTo)
    out.write(
        f"POSITIVE_UP_TO n={verdict.n_checked} worst_min_eig={_fmt(verdict.worst_min_eig)}\n"
    )
    return 0


def _cmd_demo(args: argparse.Namespace, out: TextIO) -> int:
    checks = DEMOS[args.name]()
    all_ok = True
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        out.write(f"{status} {check.label}\n")
        all_ok = all_ok and check.passed
    return 0 if all_ok else 1


def _cmd_verify_closure(args: argparse.Namespace, out: TextIO) -> int:
    passed, _ = run_closure(args.trials, args.seed)
    rows, dominated = geometric_domination()
    for i, lower, bound in rows:
        out.write(f"prodhook\t{i}\t{_fmt(lower)}\t{_fmt(bound)}\n")
    out.write(f"GEOMETRIC_DOMINATION {'PASS' if dominated else 'FAIL'}\n")
    out.write(f"PASS {passed}/{args.trials}\n")
    return 0 if passed == args.trials and dominated else 1


def _add_operator_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--op", required=True, help="JSON spec file or demo:<name>")
    sub.add_argument("--lambda", dest="lam", type=float, default=0.75,
                     help="scale for demo:row-isometry")
    sub.add_argument("--base", type=float, default=0.5,
                     help="ratio for demo:minf-geometric")
    sub.add_argument("--block", type=int, default=0,
                     help="block id for demo:coarse-projection")
    sub.add_argument("--partition", choices=("coarse", "fine"), default="coarse",
                     help="partition side for demo:coarse-projection")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ndc", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    hooks = commands.add_parser("hooks", help="hook-norm table")
    _add_operator_flags(hooks)
    hooks.add_argument("--horizon", type=int, default=32)
    hooks.add_argument("--depth", type=int, default=64)
    hooks.add_argument("--format", choices=("tsv",), default="tsv")
    hooks.set_defaults(func=_cmd_hooks)

    member = commands.add_parser("membership", help="membership verdict")
    _add_operator_flags(member)
    member.add_argument("--eps", type=float, default=1e-6)
    member.add_argument("--horizon", type=int, default=32)
    member.add_argument("--depth", type=int, default=64)
    member.set_defaults(func=_cmd_membership)

    norm = commands.add_parser("norm", help="compression-norm table")
    _add_operator_flags(norm)
    norm.add_argument("--levels", type=int, default=8)
    norm.add_argument("--depth", type=int, default=64)
    norm.set_defaults(func=_cmd_norm)

    pos = commands.add_parser("positivity", help="positivity screening")
    _add_operator_flags(pos)
    pos.add_argument("--levels", type=int, default=8)
    pos.add_argument("--slack", type=float, default=1e-9)
    pos.set_defaults(func=_cmd_positivity)

    demo = commands.add_parser("demo", help="run a demo gallery entry")
    demo.add_argument("name", choices=tuple(DEMOS))
    demo.set_defaults(func=_cmd_demo)

    verify = commands.add_parser("verify", help="randomized property checks")
    verify_sub = verify.add_subparsers(dest="check", required=True)
    closure = verify_sub.add_parser("closure", help="algebraic closure of members")
    closure.add_argument("--trials", type=int, default=20)
    closure.add_argument("--seed", type=int, default=1)
    closure.set_defaults(func=_cmd_verify_closure)

    return parser


def run(argv: Sequence[str], stdout: TextIO | None = None) -> int:
    """Dispatch one CLI invocation; returns the exit code."""
    out = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        if getattr(args, "depth", 1) < 1 or getattr(args, "horizon", 1) < 1:
            raise UsageError("depth and horizon must be positive")
        if getattr(args, "levels", 1) < 1:
            raise UsageError("levels must be positive")
        return args.func(args, out)
    except (UsageError, OperatorSpecError) as exc:
        print(f"ndc: error: {exc}", file=sys.stderr)
        return 64
    except NumericFailureError as exc:
        print(f"ndc: numeric failure: {exc}", file=sys.stderr)
        return 70


def run_capture(argv: Sequence[str]) -> tuple[int, str]:
    """(exit code, stdout text) for one invocation; used by tests."""
    buffer = io.StringIO()
    code = run(argv, stdout=buffer)
    return code, buffer.getvalue()


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
