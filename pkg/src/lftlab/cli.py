"""Command-line surface: transforms, simulator runs, hardness reductions,
and fixture emission with plot-ready CSV.

Exit codes: 0 success; 1 parse or usage errors (diagnostic on stderr);
2 domain rejections (nonconvex input, power-of-two violation under
--strict-pow2, hardness dimension cap).
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import os
import sys

from . import fixtures
from .errors import NonConvexInput, NotPowerOfTwo
from .grids import FunctionSpec
from .io import (
    ParseError,
    document_to_csv,
    dump_document,
    load_instance,
    serialize_instance,
    transcript_jsonl,
    with_decimals,
)
from .hardness import (
    HiddenStringInstance,
    recover_via_point_queries,
    recover_via_sampling,
    rescale_instance,
    rescaling_checks,
)
from .multi import TensorSamples, canonical_nd_dual_grids, lft_nd_brute
from .qlft import (
    digital_to_analog,
    first_attempt_successes,
    run_qlft_1d_adaptive,
    run_qlft_1d_regular,
)
from .qlft_nd import run_qlft_nd_adaptive, run_qlft_nd_regular
from .rational import format_rational, frac
from .transform import (
    discrete_gradients,
    lft_adaptive,
    lft_brute,
    lft_regular,
    nontrivial_dual_range,
    regular_dual_grid,
)
from .grids import DualGrid
from .witness import witness_params

HARDNESS_DIM_CAP = 16


def _default_seed() -> int:
    return int(os.environ.get("LFTLAB_SEED", "0"))


def _emit(doc: dict, args) -> None:
    if getattr(args, "precision", None) is not None:
        doc = with_decimals(doc, ("values", "dual"), args.precision)
    if args.format == "csv":
        text = document_to_csv(doc)
    else:
        text = dump_document(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _parse_dual_option(spec: str, f: FunctionSpec):
    """regular:K | adaptive:centered|right|left | list:p,q,r"""
    try:
        mode, _, arg = spec.partition(":")
        if mode == "regular":
            g = discrete_gradients(f)
            return "regular", regular_dual_grid(nontrivial_dual_range(g), int(arg))
        if mode == "adaptive":
            variant = arg or "centered"
            return ("adaptive", variant)
        if mode == "list":
            pts = [frac(p) for p in arg.split(",") if p]
            return "list", DualGrid.from_points(pts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad --dual option {spec!r}: {exc}") from exc
    raise ParseError(f"bad --dual option {spec!r}")


def cmd_lft(args) -> int:
    try:
        instance = load_instance(args.instance)
    except ParseError as exc:
        return _fail(str(exc), 1)
    if not isinstance(instance, FunctionSpec):
        return _run_lft_nd(args, instance)
    try:
        parsed = _parse_dual_option(args.dual, instance)
        if parsed[0] == "adaptive":
            result = lft_adaptive(instance, parsed[1])
        else:
            result = lft_regular(instance, parsed[1], clamp=args.clamp)
    except ParseError as exc:
        return _fail(str(exc), 1)
    except NonConvexInput as exc:
        return _fail(f"nonconvex input: {exc}", 2)
    doc = {
        "command": "lft",
        "dual": [format_rational(s) for s in result.dual.points()],
        "values": [format_rational(v) for v in result.values],
        "optimizer_index": list(result.optimizer_index),
    }
    g = discrete_gradients(instance)
    if result.dual.kind == "regular" and result.dual.gamma_s > 0:
        w = witness_params(g, result.dual)
        doc["diagnostics"] = {
            "w": w.w,
            "w_floor": w.w_floor,
            "nu": format_rational(w.nu),
            "success_probability": format_rational(w.success_probability),
        }
    if args.brute:
        brute = lft_brute(instance, result.dual)
        doc["brute_check"] = "MATCH" if brute.values == result.values else "MISMATCH"
    _emit(doc, args)
    return 0


def _run_lft_nd(args, instance: TensorSamples) -> int:
    mode, _, arg = args.dual.partition(":")
    try:
        if mode == "regular":
            ks = [int(p) for p in arg.split(",")]
            if len(ks) == 1:
                ks = ks * instance.d
            duals = canonical_nd_dual_grids(instance, ks)
            from .multi import lft_nd_regular

            result = lft_nd_regular(instance, duals)
        elif mode == "adaptive":
            from .multi import lft_nd_adaptive

            result = lft_nd_adaptive(instance)
        else:
            return _fail(f"--dual {args.dual!r} unsupported for tensors", 1)
    except NonConvexInput as exc:
        return _fail(f"nonconvex input: {exc}", 2)
    doc = {
        "command": "lft",
        "shape": list(result.values.shape),
        "dual_points": [
            [format_rational(c) for c in result.dual_point(idx)]
            for idx in result.values.indices()
        ],
        "values": [format_rational(v) for v in result.values.flat],
        "optimizer_index": [list(o) for o in result.optimizer],
    }
    if args.brute:
        pts = [result.dual_point(idx) for idx in result.values.indices()]
        brute = lft_nd_brute(instance, pts)
        doc["brute_check"] = (
            "MATCH" if list(brute.values.flat) == list(result.values.flat) else "MISMATCH"
        )
    _emit(doc, args)
    return 0


def cmd_qlft(args) -> int:
    try:
        instance = load_instance(args.instance)
    except ParseError as exc:
        return _fail(str(exc), 1)
    seed = args.seed if args.seed is not None else _default_seed()
    trials = args.trials
    if trials < 1:
        return _fail("--trials must be at least 1", 1)
    try:
        if isinstance(instance, FunctionSpec):
            doc, run = _qlft_1d(args, instance, seed, trials)
        else:
            doc, run = _qlft_nd(args, instance, seed, trials)
    except NotPowerOfTwo as exc:
        return _fail(str(exc), 2)
    except NonConvexInput as exc:
        return _fail(f"nonconvex input: {exc}", 2)
    except ValueError as exc:
        return _fail(f"bad arguments: {exc}", 1)
    if args.transcript:
        with open(args.transcript, "w", encoding="utf-8") as fh:
            fh.write(transcript_jsonl(run))
    _emit(doc, args)
    return 0


def _trace_records(run) -> list:
    return [
        {
            "step": rec.name,
            "labels": rec.label_count,
            "norm": format_rational(rec.norm_sq),
            "acceptance": None if rec.acceptance is None else format_rational(rec.acceptance),
        }
        for rec in run.step_trace
    ]


def _qlft_1d(args, instance: FunctionSpec, seed: int, trials: int) -> dict:
    if args.mode == "adaptive":
        run = run_qlft_1d_adaptive(instance, strict_pow2=args.strict_pow2)
        values = [lab.get("fstar") for lab, _ in run.final_state.entries]
        classical = lft_adaptive(instance)
        verification = "MATCH" if tuple(values) == classical.values else "MISMATCH"
        attempts = [1] * trials
        empirical = 1.0
    else:
        k = int(args.dual_size) if args.dual_size else instance.n
        run = run_qlft_1d_regular(instance, k, rng_seed=seed, strict_pow2=args.strict_pow2)
        g = discrete_gradients(instance)
        dual = regular_dual_grid(nontrivial_dual_range(g), k)
        classical = lft_regular(instance, dual)
        values = [lab.get("fstar") for lab, _ in run.final_state.entries]
        verification = "MATCH" if tuple(values) == classical.values else "MISMATCH"
        from .qlft import geometric_attempts
        import random as _random

        attempts = [
            geometric_attempts(run.success_probability, _random.Random(seed + t))
            for t in range(trials)
        ]
        empirical = (
            first_attempt_successes(run.success_probability, trials, seed) / trials
        )
    doc = {
        "command": "qlft",
        "mode": args.mode,
        "seed": seed,
        "trials": trials,
        "n": [instance.n],
        "success_probability": format_rational(run.success_probability),
        "expected_aa_repetitions": run.expected_aa_repetitions,
        "mean_attempts": sum(attempts) / len(attempts),
        "empirical_acceptance": empirical,
        "verification": verification,
        "step_trace": _trace_records(run),
    }
    if args.omega:
        enc = digital_to_analog(run.final_state if args.mode == "regular" else _as_j_state(run))
        doc["omega"] = format_rational(enc.omega)
        doc["omega_expected_attempts"] = enc.expected_attempts
    return doc, run


def _as_j_state(run):
    # adaptive runs label by i; rename for the analog conversion
    from .qstate import BasisLabel

    return run.final_state.map_labels(
        lambda lab: BasisLabel(regs=(("j", lab.get("i")), ("fstar", lab.get("fstar"))))
    )


def _qlft_nd(args, instance: TensorSamples, seed: int, trials: int) -> dict:
    if args.mode == "adaptive":
        run = run_qlft_nd_adaptive(instance, strict_pow2=args.strict_pow2)
        attempts = [1] * trials
        empirical = 1.0
    else:
        if args.dual_size:
            ks = [int(p) for p in args.dual_size.split(",")]
            if len(ks) == 1:
                ks = ks * instance.d
        else:
            ks = list(instance.grid.shape)
        run = run_qlft_nd_regular(instance, ks=ks, rng_seed=seed, strict_pow2=args.strict_pow2)
        from .qlft import geometric_attempts
        import random as _random

        if run.success_probability > 0:
            attempts = [
                geometric_attempts(run.success_probability, _random.Random(seed + t))
                for t in range(trials)
            ]
            empirical = (
                first_attempt_successes(run.success_probability, trials, seed) / trials
            )
        else:
            attempts = [0] * trials
            empirical = 0.0
    return {
        "command": "qlft",
        "mode": args.mode,
        "seed": seed,
        "trials": trials,
        "n": list(instance.grid.shape),
        "success_probability": format_rational(run.success_probability),
        "pass_acceptances": [format_rational(p) for p in run.pass_acceptances],
        "expected_aa_repetitions": run.expected_aa_repetitions,
        "mean_attempts": sum(attempts) / len(attempts) if attempts else 0,
        "empirical_acceptance": empirical,
        "verification": run.verification.status,
        "verification_missing": len(run.verification.missing),
        "verification_value_mismatches": len(run.verification.value_mismatches),
        "step_trace": _trace_records(run),
    }, run


def cmd_hardness(args) -> int:
    if args.sub == "point-queries":
        if args.d > HARDNESS_DIM_CAP:
            return _fail(f"dimension {args.d} exceeds cap {HARDNESS_DIM_CAP}", 2)
        z = _parse_z(args.z, args.d)
        if z is None:
            return _fail(f"--z must be a 0/1 string of length {args.d}", 1)
        inst = HiddenStringInstance.for_point_queries(z)
        recovered = recover_via_point_queries(inst)
        doc = {
            "command": "hardness",
            "sub": "point-queries",
            "d": args.d,
            "z": "".join(map(str, z)),
            "recovered": "".join(map(str, recovered)),
            "queries": inst.query_counter,
        }
    elif args.sub == "sampling":
        if args.d > HARDNESS_DIM_CAP:
            return _fail(f"dimension {args.d} exceeds cap {HARDNESS_DIM_CAP}", 2)
        seed = args.seed if args.seed is not None else _default_seed()
        z = _parse_z(args.z, args.d) if args.z else tuple(
            __import__("random").Random(seed ^ 0x5EED).randint(0, 1) for _ in range(args.d)
        )
        if z is None:
            return _fail(f"--z must be a 0/1 string of length {args.d}", 1)
        inst = HiddenStringInstance.for_sampling(z)
        out = recover_via_sampling(inst, t=args.t, rng_seed=seed)
        doc = {
            "command": "hardness",
            "sub": "sampling",
            "d": args.d,
            "t": args.t,
            "seed": seed,
            "success": out.success,
            "recovered": "".join(map(str, out.recovered)) if out.recovered else None,
            "equations": out.equations,
            "rank": out.rank,
        }
    else:  # rescale
        try:
            instance = load_instance(args.instance)
        except ParseError as exc:
            return _fail(str(exc), 1)
        if not isinstance(instance, FunctionSpec):
            return _fail("rescale expects a one-dimensional instance", 1)
        try:
            g = discrete_gradients(instance)
            dual = regular_dual_grid(nontrivial_dual_range(g), args.k or instance.n)
            checks = rescaling_checks(rescale_instance(instance, dual))
        except NonConvexInput as exc:
            return _fail(f"nonconvex input: {exc}", 2)
        doc = {
            "command": "hardness",
            "sub": "rescale",
            "w": checks["w"],
            "w_rescaled": checks["w_rescaled"],
            "mapping": "exact" if checks["mapping_exact"] else "broken",
            "xi": format_rational(checks["xi"]),
            "value_scale": format_rational(checks["value_scale"]),
        }
    _emit(doc, args)
    return 0


def _parse_z(z: str, d: int):
    if z is None or len(z) != d or any(ch not in "01" for ch in z):
        return None
    return tuple(int(ch) for ch in z)


def cmd_fixtures(args) -> int:
    which = ("ex1", "ex2", "ex3") if args.which == "all" else (args.which,)
    names = {"ex1": "quadratic-ex1", "ex2": "pwl-ex2", "ex3": "pwl-ex3"}
    os.makedirs(args.out_dir, exist_ok=True)
    written = []
    for short in which:
        spec = fixtures.sampled(names[short])
        path = os.path.join(args.out_dir, f"{short}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_document(serialize_instance(spec)))
        written.append(path)
        if args.plot_data:
            path_csv = os.path.join(args.out_dir, f"{short}_conjugate.csv")
            _write_plot_csv(path_csv, spec, names[short])
            written.append(path_csv)
    for path in written:
        print(path)
    return 0


def _write_plot_csv(path: str, spec, name: str) -> None:
    g = discrete_gradients(spec)
    dual = regular_dual_grid(nontrivial_dual_range(g), 4 if name == "quadratic-ex1" else 5)
    discrete = lft_regular(spec, dual)
    continuous = fixtures.conjugate_of(name)
    buf = _io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["s", "fstar_discrete", "fstar_continuous"])
    for j in range(dual.k):
        s = dual.point(j)
        writer.writerow(
            [format_rational(s), format_rational(discrete.values[j]), format_rational(continuous(s))]
        )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lftlab",
        description="Discrete Legendre-Fenchel transforms, simulator runs, and hardness reductions",
    )
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None, help="write the result document here")
    parser.add_argument("--precision", type=int, default=None, help="add decimal renderings")
    # the same flags are accepted after the subcommand; SUPPRESS keeps a
    # subcommand-side absence from clobbering a top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p_lft = sub.add_parser("lft", help="classical discrete transform", parents=[common])
    p_lft.add_argument("instance")
    p_lft.add_argument("--dual", default="regular:5", help="regular:K | adaptive:centered|right|left | list:p,q,...")
    p_lft.add_argument("--brute", action="store_true", help="cross-check against brute force")
    p_lft.add_argument("--clamp", action="store_true", help="pin out-of-range dual points to the boundary")
    p_lft.set_defaults(fn=cmd_lft)

    p_q = sub.add_parser("qlft", help="register-level simulator runs", parents=[common])
    p_q.add_argument("instance")
    p_q.add_argument("--mode", choices=("regular", "adaptive"), default="regular")
    p_q.add_argument("--dual-size", default=None, help="K (or per-axis K0,K1,...)")
    p_q.add_argument("--seed", type=int, default=None)
    p_q.add_argument("--trials", type=int, default=1)
    p_q.add_argument("--omega", action="store_true", help="report the analog-encoding weight")
    p_q.add_argument("--strict-pow2", action="store_true", help="reject non-power-of-two sizes")
    p_q.add_argument("--transcript", default=None, help="write the step log here, one JSON record per line")
    p_q.set_defaults(fn=cmd_qlft)

    p_h = sub.add_parser("hardness", help="hidden-string reductions", parents=[common])
    hsub = p_h.add_subparsers(dest="sub", required=True)
    h_pq = hsub.add_parser("point-queries", parents=[common])
    h_pq.add_argument("--d", type=int, required=True)
    h_pq.add_argument("--z", required=True)
    h_s = hsub.add_parser("sampling", parents=[common])
    h_s.add_argument("--d", type=int, required=True)
    h_s.add_argument("--t", type=int, default=6)
    h_s.add_argument("--z", default=None)
    h_s.add_argument("--seed", type=int, default=None)
    h_r = hsub.add_parser("rescale", parents=[common])
    h_r.add_argument("instance")
    h_r.add_argument("--k", type=int, default=None)
    for p in (h_pq, h_s, h_r):
        p.set_defaults(fn=cmd_hardness)

    p_f = sub.add_parser("fixtures", help="emit instance files and plot data", parents=[common])
    fsub = p_f.add_subparsers(dest="sub", required=True)
    f_e = fsub.add_parser("emit", parents=[common])
    f_e.add_argument("--which", choices=("ex1", "ex2", "ex3", "all"), default="all")
    f_e.add_argument("--plot-data", action="store_true")
    f_e.add_argument("--out-dir", default="fixtures")
    f_e.set_defaults(fn=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the contract wants 1
        return 1 if exc.code not in (0, None) else 0
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
