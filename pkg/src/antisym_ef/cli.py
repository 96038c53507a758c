"""Command-line entry point: ``antisym-ef <subcommand> [options]``.

Every subcommand prints a :class:`~antisym_ef.report.RunReport` (JSON by
default, CSV with ``--format csv``) and exits 0 when every residual is
within tolerance, 1 otherwise, 2 on bad arguments.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from typing import Callable, Sequence

import numpy as np

from .antisym import CompactState, su_action
from .capacity import (
    basis_ensemble,
    capacity_closed_form,
    capacity_ensemble_opt,
    capacity_via_ef,
    holevo_quantity,
    product_ensemble,
    verify_superadditivity_chain,
)
from .channel import (
    apply_lambda_compact,
    compact_formula_unit,
    lambda_oracle_operator,
    purity_identity_sides,
    purity_bound_margin,
    matrix_unit,
    output_entropy,
)
from .eof import EofOptions, ef_estimate, entanglement_cost_report, verify_entropy_bound
from .errors import AntisymError
from .matrix_io import read_density_matrix
from .numerics import (
    Antisym,
    Factor,
    Plain,
    SpaceShape,
    random_density_matrix,
    random_pure_vector,
    random_state,
    random_unitary,
    tensor,
)
from .report import RunReport


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _shape_arg(text: str) -> SpaceShape:
    """``3,4`` is two antisymmetric factors; a ``p`` prefix marks a plain
    factor, e.g. ``p2,p2`` for two qubits."""
    factors: list[Factor] = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        try:
            factors.append(Plain(int(tok[1:])) if tok.startswith("p") else Antisym(int(tok)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad factor {tok!r}: {exc}")
    return SpaceShape(tuple(factors))


def _tol(args, default: float) -> float:
    return default if args.tol is None else args.tol


def _item_rng(seed: int, *index: int) -> np.random.Generator:
    return np.random.default_rng([seed, *index])


# -- subcommands -------------------------------------------------------------


def cmd_verify_channel(args, rep: RunReport) -> None:
    d, n, seed = args.d, args.samples, args.seed
    units = []
    for i in range(d):
        for j in range(d):
            err = np.max(np.abs(lambda_oracle_operator(matrix_unit(d, i, j)) - compact_formula_unit(d, i, j)))
            units.append({"i": i, "j": j, "max_error": float(err)})
    rep.results["unit_errors"] = units
    rep.add("max_unit_error", max(u["max_error"] for u in units), _tol(args, 1e-12))

    ent, contra, l3, l4 = [], [], [], []
    for k in range(n):
        rng = _item_rng(seed, k)
        v = random_pure_vector(d, rng)
        ent.append(output_entropy(CompactState(np.outer(v, v.conj()))) - math.log2(d - 1))
        u = random_unitary(d, rng)
        s = CompactState(random_density_matrix(d, rng))
        lhs = apply_lambda_compact(su_action(u, s)).matrix
        rhs = u @ apply_lambda_compact(s).matrix @ u.conj().T
        contra.append(float(np.max(np.abs(lhs - rhs))))
        kdim = 1 + k % 3
        shape = SpaceShape.of(Plain(kdim), Antisym(d)) if kdim > 1 else SpaceShape.antisym(d)
        a, b = purity_identity_sides(random_state(shape, rng))
        l3.append(a - b)
        kdim = 1 + k % 2
        pair = (Antisym(3), Antisym(d))
        shape = SpaceShape.of(Plain(kdim), *pair) if kdim > 1 else SpaceShape.of(*pair)
        l4.append(purity_bound_margin(random_state(shape, rng)))
    rep.results["output_entropy_errors"] = ent
    rep.results["contravariance_errors"] = contra
    rep.results["purity_identity_residuals"] = l3
    rep.results["purity_bound_margins"] = l4
    rep.results["purity_bound_dims"] = [3, d]
    rep.add("output_entropy_max_error", max(map(abs, ent), default=0.0), 1e-9)
    rep.add("contravariance_max_error", max(contra, default=0.0), 1e-10)
    rep.add("purity_identity_max_residual", max(map(abs, l3), default=0.0), 1e-10)
    rep.add("purity_bound_worst_violation", -min(l4, default=0.0), 1e-10, "upper")


def cmd_verify_lemma2(args, rep: RunReport) -> None:
    gaps = []
    for k in range(args.samples):
        rng = _item_rng(args.seed, k)
        n = int(rng.integers(2, 9))
        lhs, rhs = verify_entropy_bound(random_density_matrix(n, rng))
        gaps.append(lhs - rhs)
    flat = []
    for n in range(1, 9):
        for r in range(1, n + 1):
            x = np.diag([1.0 / r] * r + [0.0] * (n - r))
            lhs, rhs = verify_entropy_bound(x)
            flat.append(lhs - rhs)
    rep.results["random_gaps"] = gaps
    rep.results["flat_spectrum_gaps"] = flat
    rep.add("entropy_bound_worst_violation", -min(gaps, default=0.0), _tol(args, 1e-10), "upper")
    rep.add("flat_equality_max_gap", max(map(abs, flat)), 1e-9)


def _eof_opts(args, default_restarts: int) -> EofOptions:
    return EofOptions(
        restarts=args.restarts if args.restarts is not None else default_restarts,
        threads=args.threads,
    )


def cmd_ef(args, rep: RunReport) -> None:
    if args.input:
        rho = read_density_matrix(args.input)
        source = "file"
    else:
        shape = args.shape
        rng = _item_rng(args.seed, 0)
        rho = tensor(*(random_state(SpaceShape.of(f), rng) for f in shape.factors))
        source = "product of independent random states"
    res = ef_estimate(rho, opts=_eof_opts(args, 20), seed=args.seed)
    rep.parameters["shape"] = rho.shape.to_json()
    rep.results.update(res.to_json())
    rep.results["input"] = source
    rep.add("lower_bound_minus_value", res.lower_bound - res.value, 1e-6, "upper")
    if rho.shape.is_antisym:
        closed = sum(math.log2(f.dim - 1) for f in rho.shape.factors)
        rep.results["closed_form"] = closed
        tol = _tol(args, 1e-6 if len(rho.shape) == 1 else 1e-4)
        rep.add("value_minus_closed_form", res.value - closed, tol)


def cmd_capacity(args, rep: RunReport) -> None:
    if args.method == "ef":
        res = capacity_via_ef(args.dims, opts=_eof_opts(args, 5), seed=args.seed)
        tol = _tol(args, 1e-9 if len(args.dims) == 1 else 1e-4)
    else:
        restarts = args.restarts if args.restarts is not None else 5
        res = capacity_ensemble_opt(args.dims, restarts=restarts, seed=args.seed)
        tol = _tol(args, 1e-4 if len(args.dims) == 1 else 1e-3)
        rep.add("value_above_closed_form", res.gap, 1e-9, "upper")
    rep.results.update(res.to_json())
    rep.results["distance_to_maximally_mixed"] = res.distance_to_maximally_mixed()
    rep.add("value_minus_closed_form", res.gap, tol)


def cmd_additivity(args, rep: RunReport) -> None:
    if len(args.dims) != 2:
        raise AntisymError("additivity needs exactly two level counts")
    d1, d2 = args.dims
    c1, c2 = capacity_closed_form([d1]), capacity_closed_form([d2])
    c12 = capacity_closed_form([d1, d2])
    rep.results["closed_forms"] = {"single": [c1, c2], "product": c12}
    rep.add("closed_form_additivity", c12 - c1 - c2, 1e-12)

    singles = [capacity_via_ef([d], opts=_eof_opts(args, 2), seed=args.seed) for d in (d1, d2)]
    rep.results["single_via_ef"] = [r.value for r in singles]
    for label, r in zip(("first", "second"), singles):
        rep.add(f"capacity_via_ef_{label}", r.gap, 1e-9)

    witness = holevo_quantity(product_ensemble(basis_ensemble(d1), basis_ensemble(d2)))
    rep.results["product_ensemble_holevo"] = witness
    rep.add("product_ensemble_minus_sum", witness - c12, 1e-9)

    restarts = args.restarts if args.restarts is not None else 2
    opt = capacity_ensemble_opt([d1, d2], restarts=restarts, seed=args.seed)
    rep.results["product_channel_ensemble_opt"] = opt.to_json()
    rep.add("ensemble_opt_above_closed_form", opt.gap, 1e-9, "upper")
    rep.add("ensemble_opt_minus_closed_form", opt.gap, _tol(args, 1e-3))

    sub, cap = [], []
    shape = SpaceShape.antisym(d1, d2)
    for k in range(args.samples):
        chain = verify_superadditivity_chain(random_state(shape, _item_rng(args.seed, k)))
        sub.append(chain.subadditivity_residual)
        cap.append(chain.capacity_residual)
    rep.results["subadditivity_residuals"] = sub
    rep.results["capacity_residuals"] = cap
    rep.add("joint_entropy_subadditivity", max(sub, default=0.0), 1e-10, "upper")
    rep.add("entropy_gap_below_capacity", max(cap, default=0.0), 1e-10, "upper")


def cmd_ec_report(args, rep: RunReport) -> None:
    default = 20 if args.d == 3 else 1
    report = entanglement_cost_report(args.d, opts=_eof_opts(args, default), seed=args.seed)
    rep.results.update(report.to_json())
    exact = report.value
    rep.add("per_copy_n1_minus_value", report.per_copy[1] - exact, 1e-6)
    rep.add("per_copy_n2_minus_value", report.per_copy[2] - exact, _tol(args, 1e-4))


COMMANDS: dict[str, Callable] = {
    "verify-channel": cmd_verify_channel,
    "verify-lemma2": cmd_verify_lemma2,
    "ef": cmd_ef,
    "capacity": cmd_capacity,
    "additivity": cmd_additivity,
    "ec-report": cmd_ec_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=None, help="override the main tolerance")
    common.add_argument("--threads", type=int, default=1, help="worker cap for restarts")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument(
        "--timing", action="store_true", help="record wall_time_ms (otherwise null, keeping reports reproducible)"
    )

    p = argparse.ArgumentParser(prog="antisym-ef", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-channel", parents=[common], help="compact formula vs full-space oracle, norm identities")
    s.add_argument("--d", type=int, choices=(3, 4, 5), required=True)
    s.add_argument("--samples", type=int, default=20)

    s = sub.add_parser("verify-lemma2", parents=[common], help="entropy vs -log2 purity")
    s.add_argument("--samples", type=int, default=100)

    s = sub.add_parser("ef", parents=[common], help="estimate entanglement of formation")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--shape", type=_shape_arg, help="e.g. 3 or 3,4 (antisymmetric), p2,p2 (plain)")
    g.add_argument("--input", help="matrix JSON file")
    s.add_argument("--restarts", type=int, default=None, help="default 20")

    s = sub.add_parser("capacity", parents=[common], help="Holevo capacity of the channel")
    s.add_argument("--dims", type=_int_list, required=True)
    s.add_argument("--method", choices=("ef", "ensemble"), default="ef")
    s.add_argument("--restarts", type=int, default=None, help="default 5")

    s = sub.add_parser("additivity", parents=[common], help="capacity additivity for two channels")
    s.add_argument("--dims", type=_int_list, required=True)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--restarts", type=int, default=None, help="default 2")

    s = sub.add_parser("ec-report", parents=[common], help="entanglement cost with n=1,2 evidence")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--restarts", type=int, default=None, help="default 20 for d=3, 1 otherwise")
    return p


def _validate(p: argparse.ArgumentParser, args) -> None:
    dims = getattr(args, "dims", None)
    if dims is not None:
        if any(d < 3 for d in dims):
            p.error("--dims entries must be at least 3")
        if len(dims) > 2:
            p.error("--dims takes at most two level counts")
    if args.command == "ec-report" and args.d < 3:
        p.error("--d must be at least 3")
    if args.command == "additivity" and len(args.dims) != 2:
        p.error("additivity needs --dims d1,d2")
    if args.tol is not None and not args.tol >= 0:
        p.error("--tol must be non-negative")
    if args.threads < 1:
        p.error("--threads must be positive")


def run(argv: Sequence[str] | None = None) -> int:
    p = build_parser()
    args = p.parse_args(argv)
    _validate(p, args)
    params = {
        k: (v.to_json() if isinstance(v, SpaceShape) else v)
        for k, v in sorted(vars(args).items())
        if k not in ("command", "seed", "out", "format", "timing", "threads")
    }
    rep = RunReport(command=args.command, parameters=params, seed=args.seed)
    start = time.perf_counter()
    try:
        COMMANDS[args.command](args, rep)
    except (AntisymError, OSError) as exc:
        print(f"antisym-ef: error: {exc}", file=sys.stderr)
        return 2
    if args.timing:
        rep.wall_time_ms = int(round(1000 * (time.perf_counter() - start)))
    text = rep.dumps(args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
