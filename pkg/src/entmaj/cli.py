"""Command-line surface.

One subcommand per construction; JSON in, JSON out (CSV for the pinch
convergence table).  Exit codes: 0 success, 1 domain failure (violated
precondition, failed verification, or a negative verdict under --require /
--expect-isometry), 2 I/O or schema errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .densop import DensityMatrix, random_density, von_neumann_entropy
from .errors import DomainError, SchemaError
from .qchan import (
    KrausChannel,
    apply_channel,
    detect_isometry,
    entropy_probe,
    mixed_unitary_uhlmann,
    pinch_convergence_experiment,
    random_bistochastic_channel,
    trace_distance,
    uhlmann_channel,
)
from .seqmaj import ProbVector, is_majorized, random_majorized_pair, shannon_entropy, sort_desc
from .serial import (
    birkhoff_to_json,
    chain_to_json,
    density_from_json,
    density_to_json,
    dumps_report,
    isometry_report_to_json,
    load_json,
    mixed_unitary_to_json,
    prob_vector_from_json,
    prob_vector_to_json,
    real_matrix_to_json,
    to_json_value,
)
from .xfer import (
    DoublyStochasticMatrix,
    birkhoff_decompose,
    find_transfer_chain,
    schur_horn_orthogonal,
)

SUBCOMMANDS = (
    "entropy", "majorize", "transfer", "birkhoff", "schur-horn", "uhlmann",
    "mixed-unitary", "pinch-converge", "detect-isometry", "probe-entropy", "gen",
)


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="entmaj")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="subcommand", required=True)

    def add(name, help_, n_inputs=0, gen_kind=False):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--in", dest="inputs", action="append", default=[],
                       metavar="PATH", help="input file (repeatable, ordered)")
        p.add_argument("--out", dest="out", default=None, metavar="PATH")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--trials", type=int, default=1000)
        p.add_argument("--require", action="store_true",
                       help="exit 1 on a negative verdict")
        p.add_argument("--expect-isometry", dest="expect_isometry",
                       action="store_true", help="exit 1 on a negative detection")
        if gen_kind:
            p.add_argument("kind", choices=("state", "pair", "state-pair", "channel"))
        return p

    add("entropy", "Shannon/von Neumann entropy of a vector or state")
    add("majorize", "decide whether the first vector is majorized by the second")
    add("transfer", "elementary transfer chain certifying majorization")
    add("birkhoff", "split a doubly stochastic matrix into permutations")
    add("schur-horn", "orthogonal matrix carrying one spectrum onto a diagonal")
    add("uhlmann", "bistochastic channel carrying the second state onto the first")
    add("mixed-unitary", "unitary mixture carrying the second state onto the first")
    add("pinch-converge", "phase-averaging convergence table (CSV)")
    add("detect-isometry", "test a channel for isometric conjugation")
    add("probe-entropy", "max entropy deviation over random states")
    add("gen", "generate seeded random inputs", gen_kind=True)
    return top


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_inputs(paths, count, what):
    if len(paths) != count:
        raise SchemaError(f"expected {count} --in file(s) for {what}, got {len(paths)}")
    return [load_json(p) for p in paths]


def _load_vector_pair(paths):
    """Two vectors from two files, or from one {'a':..,'b':..} bundle."""
    if len(paths) == 1:
        import json
        with open(paths[0], "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
            raise SchemaError("bundle needs fields 'a' and 'b'", field=str(paths[0]))
        return (prob_vector_from_json(obj["a"], "a"),
                prob_vector_from_json(obj["b"], "b"))
    pair = _load_inputs(paths, 2, "a vector pair")
    for k, v in enumerate(pair):
        if not isinstance(v, ProbVector):
            raise SchemaError("expected a probability vector", field=str(paths[k]))
    return pair


def _load_state_pair(paths):
    if len(paths) == 1:
        import json
        with open(paths[0], "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        if not isinstance(obj, dict) or "rho1" not in obj or "rho2" not in obj:
            raise SchemaError("bundle needs fields 'rho1' and 'rho2'",
                              field=str(paths[0]))
        return (density_from_json(obj["rho1"], "rho1"),
                density_from_json(obj["rho2"], "rho2"))
    pair = _load_inputs(paths, 2, "a state pair")
    for k, v in enumerate(pair):
        if not isinstance(v, DensityMatrix):
            raise SchemaError("expected a density matrix", field=str(paths[k]))
    return pair


def _report(sub, args, tolerances, body):
    report = {"subcommand": sub, "version": __version__, "seed": args.seed,
              "tolerances": tolerances}
    report.update(body)
    return report


def _finish(report, args) -> int:
    _emit(dumps_report(report), args.out)
    verified = report.get("verified", {})
    ok = all(v for k, v in verified.items() if k.startswith("ok_"))
    return 0 if ok else 1


def _run_entropy(args) -> int:
    (value,) = _load_inputs(args.inputs, 1, "entropy")
    if isinstance(value, ProbVector):
        bits = shannon_entropy(value)
        kind = "prob_vector"
        total = value.total()
    elif isinstance(value, DensityMatrix):
        bits = von_neumann_entropy(value)
        kind = "density"
        total = float(value.matrix.trace().real)
    else:
        raise SchemaError("expected a probability vector or a density matrix",
                          field=str(args.inputs[0]))
    body = {"shannon_bits": bits, "input_kind": kind,
            "verified": {"input_total": total, "ok_nonnegative": bits >= 0.0}}
    return _finish(_report("entropy", args, {}, body), args)


def _run_majorize(args) -> int:
    a, b = _load_vector_pair(args.inputs)
    tol = args.tol if args.tol is not None else 1e-9
    verdict = is_majorized(a, b, tol)
    body = {"holds": verdict.holds, "sums_equal": verdict.sums_equal,
            "first_violation": None, "verified": {"prefix_pairs_checked": max(a.d, b.d)}}
    if verdict.first_violation is not None:
        fv = verdict.first_violation
        body["first_violation"] = {"k": fv.k, "lhs": fv.lhs, "rhs": fv.rhs}
    rc = _finish(_report("majorize", args, {"majorization_abs": tol}, body), args)
    if args.require and not verdict.holds:
        return 1
    return rc


def _run_transfer(args) -> int:
    a, b = _load_vector_pair(args.inputs)
    tol = args.tol if args.tol is not None else 1e-9
    chain = find_transfer_chain(a, b, tol)
    from .xfer import apply_t_transform
    replay = sort_desc(b)
    target = np.pad(sort_desc(a).entries, (0, chain.d - a.d))
    replay = np.pad(replay.entries, (0, chain.d - b.d))
    cur = ProbVector(replay)
    for step in chain.steps:
        cur = apply_t_transform(step, cur)
    err = float(np.abs(cur.entries - target).max())
    body = {"chain": chain_to_json(chain),
            "verified": {"replay_max_abs_error": err, "ok_replay": err <= 1e-9,
                         "steps": len(chain.steps), "step_bound": chain.d - 1,
                         "ok_step_bound": len(chain.steps) <= chain.d - 1}}
    return _finish(_report("transfer", args, {"majorization_abs": tol}, body), args)


def _run_birkhoff(args) -> int:
    (value,) = _load_inputs(args.inputs, 1, "birkhoff")
    if not isinstance(value, np.ndarray):
        raise SchemaError("expected a real square matrix", field=str(args.inputs[0]))
    tol = args.tol if args.tol is not None else 1e-9
    q = DoublyStochasticMatrix(value)
    decomp = birkhoff_decompose(q, tol)
    err = float(np.abs(decomp.matrix() - q.entries).max())
    bound = (q.d - 1) ** 2 + 1
    body = dict(birkhoff_to_json(decomp))
    body["verified"] = {"reconstruction_max_error": err, "ok_reconstruction": err <= 10 * tol,
                        "term_count": len(decomp.permutations), "term_bound": bound,
                        "ok_term_bound": len(decomp.permutations) <= bound,
                        "weight_sum": float(decomp.weights.sum())}
    return _finish(_report("birkhoff", args, {"support_threshold": tol}, body), args)


def _run_schur_horn(args) -> int:
    a, b = _load_vector_pair(args.inputs)
    tol = args.tol if args.tol is not None else 1e-9
    u = schur_horn_orthogonal(a, b, tol)
    d = u.d
    bs = np.pad(sort_desc(b).entries, (0, d - b.d))
    a_sorted = np.pad(sort_desc(a).entries, (0, d - a.d))
    diag = np.diag(u.entries @ np.diag(bs) @ u.entries.T)
    err = float(np.abs(diag - a_sorted).max())
    defect = float(np.abs(u.entries.T @ u.entries - np.eye(d)).max())
    body = dict(real_matrix_to_json(u))
    body["verified"] = {"diagonal_max_error": err, "ok_diagonal": err <= 1e-9,
                        "orthogonality_defect": defect, "ok_orthogonal": defect <= 1e-9}
    return _finish(_report("schur-horn", args, {"majorization_abs": tol}, body), args)


def _run_uhlmann(args) -> int:
    rho1, rho2 = _load_state_pair(args.inputs)
    tol = args.tol if args.tol is not None else 1e-9
    psi = uhlmann_channel(rho1, rho2, tol)
    td = trace_distance(apply_channel(psi, rho2), rho1)
    body = dict(to_json_value(psi))
    body["verified"] = {
        "trace_distance": td, "ok_trace_distance": td <= 1e-7,
        "completeness_defect": KrausChannel.completeness_defect_of(psi.kraus, psi.d_in),
        "unitality_defect": KrausChannel.unitality_defect_of(psi.kraus, psi.d_out),
    }
    tols = {"majorization_abs": tol, "trace_distance_max": 1e-7}
    return _finish(_report("uhlmann", args, tols, body), args)


def _run_mixed_unitary(args) -> int:
    rho1, rho2 = _load_state_pair(args.inputs)
    tol = args.tol if args.tol is not None else 1e-9
    mix = mixed_unitary_uhlmann(rho1, rho2, tol)
    out = np.zeros_like(rho2.matrix)
    for w, u in zip(mix.weights, mix.unitaries):
        out += w * (u @ rho2.matrix @ u.conj().T)
    td = trace_distance(DensityMatrix((out + out.conj().T) / 2), rho1)
    bound = (rho1.d - 1) ** 2 + 1
    body = dict(mixed_unitary_to_json(mix))
    body["verified"] = {"trace_distance": td, "ok_trace_distance": td <= 1e-7,
                        "term_count": len(mix.unitaries), "term_bound": bound,
                        "ok_term_bound": len(mix.unitaries) <= bound,
                        "weight_sum": float(mix.weights.sum())}
    tols = {"majorization_abs": tol, "trace_distance_max": 1e-7}
    return _finish(_report("mixed-unitary", args, tols, body), args)


def _run_pinch_converge(args) -> int:
    if len(args.inputs) not in (1, 2):
        raise SchemaError("expected --in state [--in basis]")
    values = [load_json(p) for p in args.inputs]
    rho2 = values[0]
    if not isinstance(rho2, DensityMatrix):
        raise SchemaError("expected a density matrix", field=str(args.inputs[0]))
    if len(values) == 2:
        basis = values[1]
        if not isinstance(basis, np.ndarray):
            raise SchemaError("expected a matrix basis", field=str(args.inputs[1]))
        basis = basis.astype(complex)
    else:
        basis = np.eye(rho2.d, dtype=complex)
    rows = pinch_convergence_experiment(rho2, basis)
    ok = all(r.trace_distance <= r.bound + 1e-8 for r in rows)
    final_ok = rows[-1].trace_distance <= 1e-8
    lines = [f"# entmaj {__version__} pinch-converge d={rho2.d} "
             f"bound_slack=1e-08 ok_bound={ok} ok_final={final_ok}",
             "n,trace_distance,bound"]
    lines += [f"{r.n},{r.trace_distance!r},{r.bound!r}" for r in rows]
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok and final_ok else 1


def _run_detect_isometry(args) -> int:
    (value,) = _load_inputs(args.inputs, 1, "detect-isometry")
    if not isinstance(value, KrausChannel):
        raise SchemaError("expected a Kraus channel", field=str(args.inputs[0]))
    tol = args.tol if args.tol is not None else 1e-7
    report = detect_isometry(value, tol)
    body = dict(isometry_report_to_json(report))
    defect = None
    if report.isometry is not None:
        v = report.isometry
        defect = float(np.abs(v.conj().T @ v - np.eye(value.d_in)).max())
    body["verified"] = {"isometry_defect": defect}
    rc = _finish(_report("detect-isometry", args, {"scalar_max_entry": tol}, body), args)
    if args.expect_isometry and not report.is_isometric_conjugation:
        return 1
    return rc


def _run_probe_entropy(args) -> int:
    (value,) = _load_inputs(args.inputs, 1, "probe-entropy")
    if not isinstance(value, KrausChannel):
        raise SchemaError("expected a Kraus channel", field=str(args.inputs[0]))
    d = args.d if args.d is not None else value.d_in
    rng = np.random.default_rng(args.seed)
    result = entropy_probe(value, args.trials, d, rng)
    body = {"max_abs_entropy_deviation": result.max_deviation,
            "worst_seed": result.worst_seed, "trials": result.trials,
            "verified": {"ok_trials": result.trials == args.trials}}
    return _finish(_report("probe-entropy", args, {}, body), args)


def _run_gen(args) -> int:
    d = args.d if args.d is not None else 4
    rng = np.random.default_rng(args.seed)
    if args.kind == "state":
        obj = density_to_json(random_density(d, rng))
    elif args.kind == "pair":
        a, b = random_majorized_pair(d, rng)
        obj = {"a": prob_vector_to_json(a), "b": prob_vector_to_json(b)}
    elif args.kind == "state-pair":
        a, b = random_majorized_pair(d, rng)
        rho2 = random_density(d, rng, spec=b)
        rho1 = random_density(d, rng, spec=a)
        obj = {"rho1": density_to_json(rho1), "rho2": density_to_json(rho2)}
    else:
        obj = to_json_value(random_bistochastic_channel(d, rng))
    _emit(dumps_report(obj), args.out)
    return 0


_RUNNERS = {
    "entropy": _run_entropy,
    "majorize": _run_majorize,
    "transfer": _run_transfer,
    "birkhoff": _run_birkhoff,
    "schur-horn": _run_schur_horn,
    "uhlmann": _run_uhlmann,
    "mixed-unitary": _run_mixed_unitary,
    "pinch-converge": _run_pinch_converge,
    "detect-isometry": _run_detect_isometry,
    "probe-entropy": _run_probe_entropy,
    "gen": _run_gen,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _RUNNERS[args.subcommand](args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        report = {"subcommand": args.subcommand, "version": __version__,
                  "error": type(exc).__name__, "message": str(exc)}
        verdict = getattr(exc, "verdict", None)
        if verdict is not None:
            report["verdict"] = {"holds": verdict.holds, "sums_equal": verdict.sums_equal}
            if verdict.first_violation is not None:
                fv = verdict.first_violation
                report["verdict"]["first_violation"] = {"k": fv.k, "lhs": fv.lhs,
                                                        "rhs": fv.rhs}
        _emit(dumps_report(report), args.out)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
