"""``entlab`` command-line interface.

Exit codes
----------
0  success (or violation found)
1  clean negative result: no violation found, channel failed CPTP check
2  input error: bad flags, unreadable or malformed JSON, parameter out of range
3  dimension or structural contract error
4  internal numeric failure or a failed self-check
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import channels as chn
from . import dynamics, io, measures, ordering, states
from . import linalg as la
from .svg import diagram_svg
from .errors import (
    BracketError,
    ContractError,
    DimensionError,
    DomainError,
    NoDecayError,
    SpecFormatError,
)

EXIT_OK, EXIT_NOT_FOUND, EXIT_INPUT, EXIT_CONTRACT, EXIT_NUMERIC = range(5)

log = logging.getLogger("entlab")

CHANNEL_NAMES = ("identity", "depolarizing", "unitary", "completely-depolarizing", "selective-check")


def build_channel(spec: str, p: float = 0.5, theta: float = 0.7, check: bool = True) -> chn.KrausChannel:
    """Built-in channel by name, or a channel JSON file path."""
    if spec == "identity":
        return chn.identity_channel(2)
    if spec == "depolarizing":
        return chn.depolarizing(p)
    if spec == "unitary":
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return chn.unitary_channel(np.array([[c, -s], [s, c]], dtype=complex))
    if spec == "completely-depolarizing":
        return chn.completely_depolarizing(2)
    if spec == "selective-check":
        return chn.selective_check_channel()
    path = Path(spec)
    if not path.exists():
        raise SpecFormatError(f"unknown channel {spec!r}: not a built-in name ({', '.join(CHANNEL_NAMES)}) or a file")
    return io.channel_from_json(io.load_json(path), check=check)


def parse_initial(spec: str) -> states.DensityMatrix:
    """``pplus``, ``werner:Q``, ``pure:ALPHA`` or a state JSON path."""
    if spec == "pplus":
        return states.p_plus()
    if ":" in spec and not Path(spec).exists():
        name, _, value = spec.partition(":")
        try:
            x = float(value)
        except ValueError:
            raise SpecFormatError(f"bad parameter in initial state {spec!r}") from None
        if name == "werner":
            return states.werner(x)
        if name == "pure":
            return states.schmidt_pure(x).dm()
        raise SpecFormatError(f"unknown initial state family {name!r}")
    path = Path(spec)
    if not path.exists():
        raise SpecFormatError(f"unknown initial state {spec!r}")
    return io.state_from_json(io.load_json(path))


def _write(path: str | None, text: str) -> None:
    if path is None:
        return
    Path(path).write_text(text)


def _emit_json(args, kind: str, payload: dict) -> None:
    _write(args.out, io.dumps(io.envelope(kind, payload)))


def _channel_args(p: argparse.ArgumentParser, default: str = "depolarizing") -> None:
    p.add_argument("--channel", default=default, help=f"built-in name ({', '.join(CHANNEL_NAMES)}) or channel JSON path")
    p.add_argument("--p", type=float, default=0.5, help="depolarizing parameter")
    p.add_argument("--theta", type=float, default=0.7, help="rotation angle for --channel unitary")


def _channel_from(args, check: bool = True) -> chn.KrausChannel:
    return build_channel(args.channel, args.p, args.theta, check=check)


def cmd_diagram(args) -> int:
    ch = _channel_from(args)
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    pts = ordering.scan_diagram(ch, args.measure, families, args.grid, args.seed, args.n_random)
    text = io.diagram_csv(pts)
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    out = Path(args.out)
    if out.suffix == ".svg":
        out.with_suffix(".csv").write_text(text)
        title = f"{ch.name}" + (f" p={args.p:g}" if ch.name == "depolarizing" else "")
        out.write_text(diagram_svg(pts, title))
    else:
        out.write_text(text)
    print(f"{len(pts)} diagram points written to {out}")
    return EXIT_OK


def _certificate_payload(cert) -> dict:
    def side(rho, label, e_in, e_out):
        return {
            "family": label[0],
            "param": label[1],
            "state": io.state_to_json(rho),
            "e_in": e_in,
            "e_out": e_out,
        }

    return {
        "found": True,
        "measure": cert.measure.value,
        "margin": cert.margin,
        "strength": cert.strength,
        "channel": io.channel_to_json(cert.channel),
        "rho1": side(cert.rho1, cert.label1, cert.e_in1, cert.e_out1),
        "rho2": side(cert.rho2, cert.label2, cert.e_in2, cert.e_out2),
        "verified": ordering.verify_certificate(cert),
    }


def cmd_violations(args) -> int:
    ch = _channel_from(args)
    cert = ordering.find_violation(ch, args.measure, args.strategy, args.budget, args.seed)
    if cert is None:
        print(f"no violation found within budget {args.budget}")
        _emit_json(args, "violation", {"found": False, "measure": args.measure, "budget": args.budget})
        return EXIT_NOT_FOUND
    print(
        f"ordering violated: {cert.label1[0]}({cert.label1[1]:.6g}) {cert.e_in1:.6f} -> {cert.e_out1:.6f}; "
        f"{cert.label2[0]}({cert.label2[1]:.6g}) {cert.e_in2:.6f} -> {cert.e_out2:.6f}"
    )
    _emit_json(args, "violation", _certificate_payload(cert))
    return EXIT_OK


def cmd_check_channel(args) -> int:
    ch = _channel_from(args, check=False)
    if args.test == "cptp":
        rep = chn.validate_cptp(ch)
        print(f"trace-preservation residual {rep.tp_residual:.3e}; Choi min eigenvalue {rep.choi_min_eigenvalue:.3e}")
        print("CPTP: pass" if rep.ok else "CPTP: FAIL")
        _emit_json(args, "check-channel", {
            "test": "cptp",
            "tp_residual": rep.tp_residual,
            "choi_min_eigenvalue": rep.choi_min_eigenvalue,
            "passed": rep.ok,
        })
        return EXIT_OK if rep.ok else EXIT_NOT_FOUND
    if chn.tp_residual(ch) > chn.TP_TOL:
        raise ContractError("channel is not trace preserving")
    v = chn.is_entanglement_breaking(ch)
    print(f"entanglement-breaking: {str(v.breaking).lower()} ({v.label}); min PT eigenvalue of Choi {v.min_pt_eigenvalue:.6g}")
    _emit_json(args, "check-channel", {
        "test": "eb",
        "entanglement_breaking": v.breaking,
        "min_pt_eigenvalue": v.min_pt_eigenvalue,
        "verdict": v.label,
    })
    return EXIT_OK


def cmd_tsep(args) -> int:
    if args.mode == "analytic":
        value = dynamics.tsep_analytic(args.T)
        payload = {"mode": "analytic", "T": args.T, "t_sep": value}
    else:
        value = dynamics.tsep_numeric(args.T, parse_initial(args.initial), args.tol)
        payload = {"mode": "numeric", "T": args.T, "initial": args.initial, "tol": args.tol, "t_sep": value}
    print(repr(value))
    _emit_json(args, "tsep", payload)
    return EXIT_OK


def cmd_trajectory(args) -> int:
    times = np.linspace(0.0, args.t_max * args.T, args.steps)
    traj = dynamics.trajectory(args.T, parse_initial(args.initial), times, args.measure)
    text = io.trajectory_csv(traj, include_state=args.with_state)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        print(f"{len(traj.samples)} samples written to {args.out}")
    return EXIT_OK


def cmd_counterexample(args) -> int:
    rep = ordering.four_qubit_counterexample()
    n = rep["negativity"]
    print(f"N(rho1)={n['rho1']:.12g} N(rho2)={n['rho2']:.12g} -> N(rho1')={n['rho1_out']:.12g} N(rho2')={n['rho2_out']:.12g}")
    for name, ok in rep["checks"].items():
        print(f"  {name}: {'ok' if ok else 'FAILED'}")
    _emit_json(args, "counterexample", rep)
    return EXIT_OK if rep["passed"] else EXIT_NUMERIC


def cmd_ghz(args) -> int:
    rep = measures.ghz_assistance_demo()
    if args.assist_samples:
        psi = states.ghz()
        rho_ab = la.partial_trace(la.projector(psi.vec), psi.dims, [0, 1])
        rep["assistance_lower_bound"] = measures.assistance_lower_bound(
            states.DensityMatrix(rho_ab, (2, 2)), args.assist_samples, args.seed
        )
    print(
        f"C(rho_AB)={rep['concurrence_rho_ab']:.12g}  C(omega+)={rep['concurrence_omega']['+']:.12g}  "
        f"C(omega-)={rep['concurrence_omega']['-']:.12g}  assisted average={rep['assisted_average']:.12g}"
    )
    ok = (
        rep["concurrence_rho_ab"] < 1e-9
        and min(rep["concurrence_omega"].values()) > 1 - 1e-9
        and rep["mixture_residual"] < 1e-12
    )
    rep["passed"] = ok
    _emit_json(args, "ghz", rep)
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_axioms(args) -> int:
    kinds = list(ordering.DIAGRAM_MEASURES) if args.measure == "all" else [args.measure]
    reports = [ordering.axiom_suite(k, args.trials, args.seed) for k in kinds]
    for rep in reports:
        for name, ok in rep["checks"].items():
            print(f"{rep['measure']:12s} {name:14s} worst {rep['worst'][name]:+.3e}  {'ok' if ok else 'FAILED'}")
    passed = all(r["passed"] for r in reports)
    _emit_json(args, "axioms", {"reports": reports, "passed": passed})
    return EXIT_OK if passed else EXIT_NUMERIC


def cmd_maxent(args) -> int:
    rep = ordering.max_entangled_equivalence(_channel_from(args), args.trials, args.seed)
    for name, r in rep["measures"].items():
        print(f"{name:12s} mean {r['mean']:.10f}  spread {r['spread']:.3e}")
    _emit_json(args, "maxent", rep)
    return EXIT_OK if rep["passed"] else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"entlab {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagram", help="[E_in, E_out] diagram of a unilocal channel")
    _channel_args(p)
    p.add_argument("--measure", default="concurrence", choices=[k.value for k in ordering.DIAGRAM_MEASURES])
    p.add_argument("--families", default="werner,pure")
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--n-random", type=int, default=0, help="seeded random states for the 'random' family")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help=".csv, or .svg to also write a plot (CSV goes next to it)")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("violations", help="search for an ordering violation")
    _channel_args(p)
    p.add_argument("--measure", default="concurrence", choices=[k.value for k in ordering.DIAGRAM_MEASURES])
    p.add_argument("--strategy", default="grid", choices=["grid", "random"])
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=cmd_violations)

    p = sub.add_parser("check-channel", help="CPTP or entanglement-breaking test")
    _channel_args(p)
    p.add_argument("--test", default="eb", choices=["cptp", "eb"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_check_channel)

    p = sub.add_parser("tsep", help="separation time under local depolarization")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--initial", default="pplus", help="pplus, werner:Q, pure:ALPHA or state JSON path")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--mode", default="analytic", choices=["analytic", "numeric"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_tsep)

    p = sub.add_parser("trajectory", help="measure along the depolarizing semigroup (CSV)")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--initial", default="pplus")
    p.add_argument("--t-max", type=float, default=2.0, help="final time in units of T")
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--measure", default="concurrence", choices=[k.value for k in ordering.DIAGRAM_MEASURES])
    p.add_argument("--with-state", action="store_true", help="add a serialized state column")
    p.add_argument("--out")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("counterexample", help="four-qubit maximal-entanglement counterexample")
    p.add_argument("which", choices=["four-qubit"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("ghz", help="GHZ entanglement-of-assistance demonstration")
    p.add_argument("--assist-samples", type=int, default=0, help="also run a sampled lower-bound search")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ghz)

    p = sub.add_parser("axioms", help="sampled axiom checks for two-qubit measures")
    p.add_argument("--measure", default="all", choices=["all"] + [k.value for k in ordering.DIAGRAM_MEASURES])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("maxent", help="output spread over maximally entangled inputs")
    _channel_args(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out")
    p.set_defaults(func=cmd_maxent)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        ordering.worker_count()
        return args.func(args)
    except (SpecFormatError, DomainError, NoDecayError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"entlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DimensionError, ContractError) as exc:
        print(f"entlab: error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (BracketError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"entlab: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
