"""Command-line front door: flat key=value reports on stdout, data as CSV.

Exit codes: 0 success, 1 domain/engine failure (``ERR_*: message`` on
stderr), 2 malformed input or usage.
"""

from __future__ import annotations

import argparse
import sys

from .core import StatePoint, SystemState
from .effectgraph import classify, enumerate_valid, parse_diagram, to_text, validate
from .eos import MODEL_REGISTRY, finite_difference_partials, model_from_params
from .errors import EngineError, InputParseError, ParamsFormatError
from .estimation import (
    build_frame,
    fit,
    generate_synthetic,
    read_observations,
    write_observations,
)
from .thermo import (
    DEFAULT_STEPS,
    ProcessKind,
    adiabatic_path,
    evaluate_path,
    isobaric_path,
    isochoric_path,
    isothermal_path,
    sample_path,
    surplus,
    thermal_contact,
)


def _fmt(value) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(key, value) -> None:
    print(f"{key}={_fmt(value)}")


def _emit_all(mapping) -> None:
    for key, value in mapping.items():
        _emit(key, value)


def _parse_param_text(text: str, origin: str) -> dict[str, float]:
    params = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ParamsFormatError(f"{origin} line {lineno}: expected 'key=value', got {raw!r}")
        try:
            params[key.strip()] = float(value.strip())
        except ValueError:
            raise ParamsFormatError(
                f"{origin} line {lineno}: non-numeric value {value.strip()!r}"
            ) from None
    return params


def _load_model(args):
    params = {}
    if args.params:
        try:
            with open(args.params) as f:
                text = f.read()
        except OSError as err:
            raise ParamsFormatError(f"cannot read params file: {err}") from err
        params.update(_parse_param_text(text, args.params))
    for item in args.param or ():
        params.update(_parse_param_text(item, "--param"))
    return model_from_params(args.model, params)


def _add_model_args(sub) -> None:
    sub.add_argument(
        "--model", default="linear", choices=sorted(MODEL_REGISTRY), help="surface family"
    )
    sub.add_argument("--params", metavar="FILE", help="key=value parameter file")
    sub.add_argument(
        "--param",
        action="append",
        metavar="KEY=VALUE",
        help="single parameter; wins over --params (repeatable)",
    )


def _need_args(args, *names) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputParseError(f"--process {args.process} requires {', '.join(missing)}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_diagram_validate(args) -> int:
    report = validate(parse_diagram(args.diagram))
    _emit("valid", report.valid)
    for i, violation in enumerate(report.violations, start=1):
        _emit(f"violation_{i}", f"rule {violation.rule}: {violation.message}")
    return 0 if report.valid else 1


def cmd_diagram_classify(args) -> int:
    _emit("class", classify(parse_diagram(args.diagram)).label)
    return 0


def cmd_diagram_enumerate(args) -> int:
    diagrams = enumerate_valid()
    _emit("count", len(diagrams))
    tally: dict[str, int] = {}
    for i, diagram in enumerate(diagrams, start=1):
        label = classify(diagram).label
        tally[label] = tally.get(label, 0) + 1
        _emit(f"diagram_{i}", to_text(diagram))
        _emit(f"class_{i}", label)
    for label in sorted(tally):
        _emit(f"tally_{label}", tally[label])
    return 0


def cmd_eos_eval(args) -> int:
    model = _load_model(args)
    _emit("qd", model.qd_of(args.pr, args.phi))
    partials = model.partials(args.pr, args.phi)
    _emit("dqd_dpr", partials.dqd_dpr)
    _emit("dqd_dphi", partials.dqd_dphi)
    if args.check_fd:
        fd = finite_difference_partials(model, args.pr, args.phi)
        _emit("fd_dqd_dpr", fd.dqd_dpr)
        _emit("fd_dqd_dphi", fd.dqd_dphi)
    elasticities = model.point_elasticities(args.pr, args.phi)
    _emit("e_pr", elasticities.e_pr)
    _emit("e_phi", elasticities.e_phi)
    return 0


def cmd_eos_invert(args) -> int:
    model = _load_model(args)
    if args.solve_for == "pr":
        if args.qd is None or args.phi is None:
            raise InputParseError("--solve-for pr requires --qd and --phi")
        _emit("pr", model.pr_of(args.qd, args.phi))
    else:
        if args.qd is None or args.pr is None:
            raise InputParseError("--solve-for phi requires --qd and --pr")
        _emit("phi", model.phi_of(args.qd, args.pr))
    return 0


def cmd_fit(args) -> int:
    if args.data == "-":
        observations = read_observations(sys.stdin)
    else:
        observations = read_observations(args.data)
    frame = build_frame(observations, q0=args.q0, pr0=args.pr0, phi0=args.phi0)
    _emit_all(fit(frame).to_dict())
    return 0


def cmd_gen_data(args) -> int:
    model = _load_model(args)
    points = generate_synthetic(
        model, n_obs=args.n_obs, noise_sd=args.noise_sd, seed=args.seed
    )
    if args.out:
        write_observations(args.out, points)
        _emit("rows", len(points))
        _emit("out", args.out)
    else:
        write_observations(sys.stdout, points)
    if args.fig:
        from .plots import save_scatter

        _emit("fig", save_scatter(points, args.fig))
    return 0


def cmd_simulate(args) -> int:
    model = _load_model(args)
    steps = args.steps if args.steps is not None else DEFAULT_STEPS
    kind = ProcessKind(args.process)
    if kind is ProcessKind.ISOTHERMAL:
        _need_args(args, "phi", "qd_start", "qd_end")
        path = isothermal_path(model, args.n, args.phi, args.qd_start, args.qd_end)
    elif kind is ProcessKind.ISOBARIC:
        _need_args(args, "pr", "qd_start", "qd_end")
        path = isobaric_path(model, args.n, args.pr, args.qd_start, args.qd_end)
    elif kind is ProcessKind.ISOCHORIC:
        _need_args(args, "qd", "phi_start", "phi_end")
        path = isochoric_path(model, args.n, args.qd, args.phi_start, args.phi_end)
    else:
        _need_args(args, "phi_start", "qd_start", "qd_end")
        path = adiabatic_path(
            model, args.n, args.qd_start, args.phi_start, args.qd_end, steps
        )
    result = evaluate_path(path, steps)
    _emit_all(result.to_dict())
    if args.out or args.fig:
        samples = sample_path(path, steps)
        if args.out:
            with open(args.out, "w") as f:
                f.write("qd,pr,phi\n")
                for q, p, w in zip(samples.qd, samples.pr, samples.phi):
                    f.write(f"{float(q)!r},{float(p)!r},{float(w)!r}\n")
            _emit("out", args.out)
        if args.fig:
            from .plots import save_path_figure

            _emit("fig", save_path_figure(samples, args.fig, kind=str(kind)))
    return 0


def cmd_surplus(args) -> int:
    model = _load_model(args)
    qd = model.qd_of(args.pr, args.phi)
    state = SystemState(
        point=StatePoint(qd=qd, pr=args.pr, phi=args.phi),
        n=args.n,
        entropy=args.entropy,
    )
    steps = args.steps if args.steps is not None else DEFAULT_STEPS
    report = surplus(model, state, steps)
    _emit("qd", report.qd)
    _emit("pr", report.pr)
    _emit("phi", report.phi)
    _emit("n", report.n)
    _emit("choke_pr", report.choke_pr)
    _emit("classical", report.classical)
    _emit("psi", report.psi)
    if args.fig:
        from .plots import save_demand_curve

        _emit("fig", save_demand_curve(model, args.phi, args.fig, pr_market=args.pr))
    return 0


def cmd_contact(args) -> int:
    result = thermal_contact(
        args.n_a,
        args.phi_a,
        args.n_b,
        args.phi_b,
        rate=args.rate,
        t_end=args.t_end,
        samples=args.samples,
    )
    _emit("phi_star", result.phi_star)
    _emit("delta_s_a", result.delta_s_a)
    _emit("delta_s_b", result.delta_s_b)
    _emit("delta_s_total", result.delta_s_total)
    if args.out:
        traj = result.trajectory
        with open(args.out, "w") as f:
            f.write("t,phi_a,phi_b\n")
            for t, pa, pb in zip(traj.times, traj.phi_a, traj.phi_b):
                f.write(f"{t!r},{pa!r},{pb!r}\n")
        _emit("out", args.out)
    if args.fig:
        from .plots import save_contact_figure

        _emit("fig", save_contact_figure(result, args.fig))
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermoecon",
        description="Demand-side thermoeconomics: diagrams, surfaces, processes, fits.",
    )
    parser.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagram-validate", help="check the three diagram rules")
    p.add_argument("diagram", help="e.g. 'Y->X, T->Y, Y->T shocks: T'")
    p.set_defaults(func=cmd_diagram_validate)

    p = sub.add_parser("diagram-classify", help="classify a valid diagram")
    p.add_argument("diagram")
    p.set_defaults(func=cmd_diagram_classify)

    p = sub.add_parser("diagram-enumerate", help="list all valid diagrams with classes")
    p.set_defaults(func=cmd_diagram_enumerate)

    p = sub.add_parser("eos-eval", help="demand, slopes, and elasticities at a point")
    _add_model_args(p)
    p.add_argument("--pr", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument(
        "--check-fd",
        action="store_true",
        help="also report finite-difference slopes for cross-checking",
    )
    p.set_defaults(func=cmd_eos_eval)

    p = sub.add_parser("eos-invert", help="solve the surface for pr or phi")
    _add_model_args(p)
    p.add_argument("--solve-for", choices=("pr", "phi"), required=True)
    p.add_argument("--qd", type=float)
    p.add_argument("--pr", type=float)
    p.add_argument("--phi", type=float)
    p.set_defaults(func=cmd_eos_invert)

    p = sub.add_parser("fit", help="estimate elasticities from qd,pr,phi CSV")
    p.add_argument("--data", default="-", help="CSV path or '-' for stdin (default)")
    p.add_argument("--q0", type=float, help="baseline demand (default: sample mean)")
    p.add_argument("--pr0", type=float, help="baseline price (default: sample mean)")
    p.add_argument("--phi0", type=float, help="baseline wealth (default: sample mean)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("gen-data", help="draw synthetic observations from a surface")
    _add_model_args(p)
    p.add_argument("--n-obs", type=int, default=200)
    p.add_argument("--noise-sd", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="FILE", help="CSV destination (default: stdout)")
    p.add_argument("--fig", metavar="FILE", help="also render a scatter figure")
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("simulate", help="run one quasi-static process and report the ledger")
    _add_model_args(p)
    p.add_argument(
        "--process", required=True, choices=[k.value for k in ProcessKind]
    )
    p.add_argument("--n", type=int, default=1, help="population size")
    p.add_argument("--phi", type=float, help="held wealth (isothermal)")
    p.add_argument("--pr", type=float, help="held price (isobaric)")
    p.add_argument("--qd", type=float, help="held quantity (isochoric)")
    p.add_argument("--qd-start", type=float)
    p.add_argument("--qd-end", type=float)
    p.add_argument("--phi-start", type=float)
    p.add_argument("--phi-end", type=float)
    p.add_argument("--steps", type=int, help=f"integration steps (default {DEFAULT_STEPS})")
    p.add_argument("--out", metavar="FILE", help="write the sampled path as CSV")
    p.add_argument("--fig", metavar="FILE", help="render the path figure")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("surplus", help="classical and generalized surplus at a state")
    _add_model_args(p)
    p.add_argument("--pr", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--entropy", type=float, help="system entropy level (enables psi)")
    p.add_argument("--steps", type=int)
    p.add_argument("--fig", metavar="FILE", help="render the shaded demand curve")
    p.set_defaults(func=cmd_surplus)

    p = sub.add_parser("contact", help="wealth-exchanging contact between two populations")
    p.add_argument("--n-a", type=int, required=True)
    p.add_argument("--phi-a", type=float, required=True)
    p.add_argument("--n-b", type=int, required=True)
    p.add_argument("--phi-b", type=float, required=True)
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--t-end", type=float)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", metavar="FILE", help="write t,phi_a,phi_b trajectory CSV")
    p.add_argument("--fig", metavar="FILE", help="render the relaxation figure")
    p.set_defaults(func=cmd_contact)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputParseError as err:
        print(f"{err.code}: {err}", file=sys.stderr)
        return 2
    except EngineError as err:
        print(f"{err.code}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
