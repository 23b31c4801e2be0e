"""Command-line front end over the JSON file formats.

Exit codes: 0 success, 1 domain or invariant failure, 2 I/O or parse
failure.  Table output is for humans; ``--format json`` is the stable
surface.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import schemes, serialize
from .channels import (
    HADAMARD,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    check_process_state,
    choi_of_channel,
    contraction_channel,
    depolarizing_channel,
    identity_channel,
    ket,
)
from .discrimination import (
    NotPerfectlyDiscriminableError,
    always_indistinguishable,
    build_plan,
    min_copies,
    necessary_condition,
    overlap,
    unitary_eig,
    zero_in_hull,
)
from .linalg import dagger, kron, max_abs, partial_trace
from .measurement import outcome_probabilities, realize, validate_ppovm
from .tomography import linear_inversion, reconstruction_error, simulate_counts


class ParseFailure(Exception):
    """File missing, unreadable, or structurally malformed."""


def _load(path):
    try:
        return serialize.read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseFailure(f"{path}: {exc}") from exc


def _decode(fn, obj, what: str):
    # structural problems are parse failures (exit 2); semantic ValueErrors
    # (invariant violations) propagate and exit 1
    try:
        return fn(obj)
    except (KeyError, TypeError, IndexError, serialize.FormatError) as exc:
        raise ParseFailure(f"malformed {what}: {exc}") from exc


def _emit(args, payload: dict, table_lines: list[str]) -> None:
    if args.format == "json":
        sys.stdout.write(serialize.dumps(payload))
    else:
        for line in table_lines:
            print(line)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _eigvals(m: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh((m + dagger(m)) / 2)


def _herm_check(name: str, m: np.ndarray, tol: float):
    res = max_abs(m - dagger(m))
    return (f"{name}_hermiticity_residual", float(res), res <= tol * max(1.0, max_abs(m)))


def cmd_validate(args) -> int:
    obj = _load(args.path)
    tol = args.tol
    checks = []
    extra = {}
    if args.kind == "state":
        m = _decode(serialize.decode_matrix, obj, "matrix")
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ParseFailure(f"state matrix must be square, got {m.shape}")
        vals = _eigvals(m)
        checks = [
            _herm_check("state", m, tol),
            ("min_eigenvalue", float(vals[0]), vals[0] >= -tol),
            ("trace_deviation", abs(float(np.trace(m).real) - 1.0),
             abs(np.trace(m).real - 1.0) <= 1e-9),
        ]
    elif args.kind == "povm":
        effects = _decode(
            lambda o: [serialize.decode_matrix(e["matrix"]) for e in o["effects"]],
            obj,
            "povm",
        )
        total = sum(effects)
        for k, e in enumerate(effects):
            vals = _eigvals(e)
            checks.append(_herm_check(f"effect_{k}", e, tol))
            checks.append((f"effect_{k}_min_eigenvalue", float(vals[0]), vals[0] >= -tol))
            checks.append((f"effect_{k}_max_eigenvalue", float(vals[-1]), vals[-1] <= 1 + tol))
        res = max_abs(total - np.eye(total.shape[0]))
        checks.append(("completeness_residual", float(res), res <= 1e-9))
    elif args.kind == "channel":
        ch = _decode(serialize.decode_channel, obj, "channel")
        total = sum(dagger(a) @ a for a in ch.kraus)
        res = max_abs(total - np.eye(ch.dim_in))
        checks.append(("trace_preservation_residual", float(res), res <= 1e-9))
    elif args.kind == "ppovm":
        d = int(obj["d"])
        mats = _decode(
            lambda o: [serialize.decode_matrix(e["matrix"]) for e in o["effects"]],
            obj,
            "ppovm",
        )
        for k, m in enumerate(mats):
            vals = _eigvals(m)
            checks.append(_herm_check(f"effect_{k}", m, tol))
            checks.append((f"effect_{k}_min_eigenvalue", float(vals[0]), vals[0] >= -tol))
            checks.append((f"effect_{k}_max_eigenvalue", float(vals[-1]), vals[-1] <= 1 + tol))
        total = sum(mats)
        sigma = partial_trace(total, d, d, "second") / d
        res_prod = max_abs(total - kron(sigma, np.eye(d)))
        checks.append(("product_normalization_residual", float(res_prod), res_prod <= tol))
        rho = sigma.T
        vals = _eigvals(rho)
        checks.append(("norm_state_min_eigenvalue", float(vals[0]), vals[0] >= -tol))
        tr_dev = abs(float(np.trace(rho).real) - 1.0)
        checks.append(("norm_state_trace_deviation", tr_dev, tr_dev <= 1e-9))
        extra["norm_state"] = serialize.encode_matrix(rho)
        extra["n_effects"] = len(mats)
    else:
        raise ParseFailure(f"unknown kind {args.kind!r}")
    ok = bool(all(passed for _, _, passed in checks))
    payload = {
        "kind": args.kind,
        "ok": ok,
        "checks": [
            {"name": name, "value": float(value), "pass": bool(passed)}
            for name, value, passed in checks
        ],
        **extra,
    }
    lines = [
        f"{name}: {_fmt(value)} [{'ok' if passed else 'FAIL'}]"
        for name, value, passed in checks
    ]
    if "norm_state" in extra:
        rho = serialize.decode_matrix(extra["norm_state"])
        lines.append("norm_state: " + np.array2string(rho, precision=6, suppress_small=True))
    lines.append("valid" if ok else "INVALID")
    _emit(args, payload, lines)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# convert
# ---------------------------------------------------------------------------


def cmd_convert(args) -> int:
    obj = _load(args.path)
    ch = _decode(serialize.decode_channel, obj, "channel")
    if not ch.is_trace_preserving:
        print("warning: channel is not trace preserving", file=sys.stderr)
    if args.direction == "kraus2choi":
        out = serialize.encode_channel(ch, kind="choi")
        omega = serialize.decode_matrix(out["matrix"])
        back = serialize.decode_channel(out)
        residual = max_abs(choi_of_channel(back) - omega)
    elif args.direction == "choi2kraus":
        out = serialize.encode_channel(ch, kind="kraus")
        back = serialize.decode_channel(out)
        residual = max_abs(choi_of_channel(back) - choi_of_channel(ch))
    else:
        raise ParseFailure(f"unknown direction {args.direction!r}")
    serialize.write_json(args.out, out)
    _emit(
        args,
        {"out": args.out, "round_trip_residual": float(residual)},
        [f"wrote {args.out}", f"round_trip_residual: {_fmt(residual)}"],
    )
    return 0


# ---------------------------------------------------------------------------
# probs
# ---------------------------------------------------------------------------


def _load_ppovm(path, tol):
    obj = _load(path)
    d = _decode(lambda o: int(o["d"]), obj, "ppovm")
    mats = _decode(
        lambda o: [serialize.decode_matrix(e["matrix"]) for e in o["effects"]],
        obj,
        "ppovm",
    )
    labels = [str(e["label"]) for e in obj["effects"]]
    return validate_ppovm(mats, d, labels=labels, tol=tol)


def cmd_probs(args) -> int:
    pp = _load_ppovm(args.ppovm, args.tol)
    ch = _decode(serialize.decode_channel, _load(args.channel), "channel")
    probs = outcome_probabilities(pp, ch)
    payload = {
        "probs": {lbl: float(p) for lbl, p in zip(pp.labels, probs)},
        "sum": float(probs.sum()),
    }
    lines = [f"{lbl}\t{_fmt(p)}" for lbl, p in zip(pp.labels, probs)]
    lines.append(f"sum\t{_fmt(probs.sum())}")
    _emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------
# tomo
# ---------------------------------------------------------------------------


def cmd_tomo(args) -> int:
    pp = _load_ppovm(args.ppovm, args.tol)
    if (args.exact is None) == (args.counts is None):
        raise ParseFailure("provide exactly one of --exact or --counts")
    if args.exact is not None:
        ch = _decode(serialize.decode_channel, _load(args.exact), "channel")
        probs = outcome_probabilities(pp, ch)
    else:
        record = _decode(serialize.decode_counts, _load(args.counts), "counts")
        if set(record.counts) != set(pp.labels):
            raise ValueError("counts labels do not match the measurement's outcomes")
        probs = record.frequencies(pp.labels)
    result = linear_inversion(pp, probs)
    hs_error = None
    if args.truth is not None:
        truth_ch = _decode(serialize.decode_channel, _load(args.truth), "channel")
        truth = check_process_state(choi_of_channel(truth_ch), pp.d)
        hs_error = reconstruction_error(result, truth)
        result = type(result)(
            result.omega_raw,
            result.omega_projected,
            result.residual,
            result.ic_complete,
            result.deficiency,
            result.converged,
            hs_error,
        )
    if not result.ic_complete:
        print(
            f"warning: measurement is informationally deficient, deficiency = {result.deficiency}; "
            "reconstruction is minimum-norm",
            file=sys.stderr,
        )
    report = serialize.encode_tomography_report(result)
    if args.out:
        serialize.write_json(args.out, report)
    summary = {
        "ic_complete": result.ic_complete,
        "deficiency": result.deficiency,
        "residual": result.residual,
        "converged": result.converged,
        "hs_error": hs_error,
    }
    lines = [
        f"ic_complete: {result.ic_complete}",
        f"deficiency: {result.deficiency}",
        f"residual: {_fmt(result.residual)}",
        f"converged: {result.converged}",
    ]
    if hs_error is not None:
        lines.append(f"hs_error: {_fmt(hs_error)}")
    _emit(args, summary if not args.out else {**summary, "out": args.out}, lines)
    return 0


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    ch = _decode(serialize.decode_channel, _load(args.channel), "channel")
    pp = _load_ppovm(args.ppovm, args.tol)
    real = realize(pp)
    record = simulate_counts(ch, real, args.shots, args.seed)
    serialize.write_json(args.out, serialize.encode_counts(record))
    _emit(
        args,
        {"out": args.out, "shots": record.shots, "seed": record.seed},
        [f"wrote {args.out} ({record.shots} shots, seed {record.seed})"],
    )
    return 0


# ---------------------------------------------------------------------------
# discriminate
# ---------------------------------------------------------------------------


def cmd_discriminate(args) -> int:
    u = _decode(serialize.decode_matrix, _load(args.u), "matrix")
    v = _decode(serialize.decode_matrix, _load(args.v), "matrix")
    ov = overlap(u, v, args.tol)
    necessary = necessary_condition(u, v, args.tol)
    phases, _ = unitary_eig(dagger(u) @ v, args.tol)
    hull = zero_in_hull(phases, args.tol)
    identical = always_indistinguishable(u, v, args.tol)
    plan_payload = None
    if hull:
        try:
            plan = build_plan(u, v, args.tol)
            plan_payload = {
                "probe": serialize.encode_vector(plan.probe),
                "povm": [
                    {"label": lbl, "matrix": serialize.encode_matrix(e)}
                    for lbl, e in zip(plan.povm.labels, plan.povm.effects)
                ],
                "ppovm": serialize.encode_ppovm(plan.ppovm),
                "error_rates": [float(x) for x in plan.error_rates],
            }
        except NotPerfectlyDiscriminableError:
            plan_payload = None
    copies = None
    if args.copies is not None and not identical:
        copies = min_copies(u, v, args.copies, args.tol)
    elif hull:
        copies = 1
    payload = {
        "overlap": float(ov),
        "necessary": bool(necessary),
        "zero_in_hull": bool(hull),
        "always_indistinguishable": bool(identical),
        "min_copies": copies,
        "plan": plan_payload,
    }
    lines = [
        f"overlap: {_fmt(ov)}",
        f"necessary_condition: {necessary}",
        f"zero_in_hull: {hull}",
    ]
    if identical:
        lines.append("always indistinguishable: the channels differ by a global phase")
    elif args.copies is not None:
        lines.append(f"min_copies: {copies if copies is not None else f'none <= {args.copies}'}")
    if plan_payload is not None:
        lines.append(f"plan: error rates {plan_payload['error_rates']}")
    _emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

_UNITARIES = {
    "identity-matrix": lambda args: np.eye(args.d, dtype=complex),
    "pauli-x": lambda args: PAULI_X,
    "pauli-y": lambda args: PAULI_Y,
    "pauli-z": lambda args: PAULI_Z,
    "hadamard": lambda args: HADAMARD,
    "phase": lambda args: np.diag([1.0, np.exp(1j * args.angle)]),
}

_CHANNELS = {
    "identity": lambda args: identity_channel(args.d),
    "contraction": lambda args: contraction_channel(ket(0, args.d)),
    "depolarizing": lambda args: depolarizing_channel(args.p, args.d),
}

_PPOVMS = {
    "pauli-probe": schemes.pauli_probe_ppovm,
    "six-state": schemes.six_state_ppovm,
    "identity-vs-contraction": schemes.identity_vs_contraction_ppovm,
}

GEN_NAMES = sorted([*_UNITARIES, *_CHANNELS, *_PPOVMS])


def cmd_gen(args) -> int:
    if args.name in _PPOVMS:
        obj = serialize.encode_ppovm(_PPOVMS[args.name]())
    elif args.name in _CHANNELS:
        obj = serialize.encode_channel(_CHANNELS[args.name](args))
    elif args.name in _UNITARIES:
        obj = serialize.encode_matrix(_UNITARIES[args.name](args))
    else:
        raise ParseFailure(f"unknown generator {args.name!r}; choose from {GEN_NAMES}")
    serialize.write_json(args.out, obj)
    _emit(args, {"out": args.out, "name": args.name}, [f"wrote {args.out}"])
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="numeric tolerance")
    common.add_argument(
        "--format", choices=("json", "table"), default="table", help="output format"
    )

    parser = argparse.ArgumentParser(
        prog="ppovm", description="Process measurements on quantum channels."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a file's invariants")
    p.add_argument("kind", choices=("state", "povm", "channel", "ppovm"))
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", parents=[common], help="convert channel representations")
    p.add_argument("direction", choices=("kraus2choi", "choi2kraus"))
    p.add_argument("path")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("probs", parents=[common], help="outcome probabilities")
    p.add_argument("ppovm")
    p.add_argument("channel")
    p.set_defaults(func=cmd_probs)

    p = sub.add_parser("tomo", parents=[common], help="reconstruct a channel")
    p.add_argument("ppovm")
    p.add_argument("--exact", help="channel file: use exact probabilities")
    p.add_argument("--counts", help="counts file from simulate")
    p.add_argument("--truth", help="channel file to compare against")
    p.add_argument("--out", help="write the full report here")
    p.set_defaults(func=cmd_tomo)

    p = sub.add_parser("simulate", parents=[common], help="sample measurement outcomes")
    p.add_argument("channel")
    p.add_argument("ppovm")
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("discriminate", parents=[common], help="perfect discrimination report")
    p.add_argument("u")
    p.add_argument("v")
    p.add_argument("--copies", type=int, help="search minimal parallel copies up to here")
    p.set_defaults(func=cmd_discriminate)

    p = sub.add_parser("gen", parents=[common], help="write a built-in example file")
    p.add_argument("name", metavar=f"{{{','.join(GEN_NAMES)}}}")
    p.add_argument("--d", type=int, default=2, help="qudit dimension")
    p.add_argument("--p", type=float, default=0.5, help="depolarizing strength")
    p.add_argument("--angle", type=float, default=np.pi / 2, help="phase-gate angle")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "tol", 1.0) <= 0:
            raise ParseFailure("--tol must be positive")
        return args.func(args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())
