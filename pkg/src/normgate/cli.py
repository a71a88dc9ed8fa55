"""Command-line entry point: ``normgate <subcommand> ...``.

Exit codes
    0  success / certified monotone / ATTAINS / all checks pass
    1  runtime error (bad input file, failed precondition)
    2  flag parse error
    3  certified condition-(b) violation
    4  inconclusive certificate
    5  NOT_ATTAINS
    6  UNKNOWN
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from . import counterex, curves, oracle, phicrit, specop
from .curves import ParamSet
from .exceptions import InvalidInputError, NormgateError

DEFAULT_SEED = 42

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_COND_B = 3
EXIT_INCONCLUSIVE = 4
EXIT_NOT_ATTAINS = 5
EXIT_UNKNOWN = 6


def fmt(x: float) -> str:
    return f"{x:.17g}"


def fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return fmt(z.real)
    return f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}i"


def parse_complex(text: str) -> complex:
    """``re`` or ``re+imi`` (e.g. ``-2``, ``0+1i``, ``1.5-2i``, ``3i``)."""
    s = text.strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    try:
        z = complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"complex value must be finite: {text!r}")
    return z


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must be 'lo,hi', got {text!r}") from None
    if not 0 <= lo <= hi:
        raise argparse.ArgumentTypeError("range needs 0 <= lo <= hi")
    return lo, hi


def parse_phi_flag(text: str) -> phicrit.PhiFunction:
    try:
        return phicrit.parse_phi(text)
    except (NormgateError, OSError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _params(args) -> ParamSet:
    return ParamSet(args.a, args.b, args.c)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_curve(args) -> int:
    samples = curves.sample_curve(_params(args), args.phi, args.range, args.n)
    _write(curves.write_curve_csv(samples), args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    p = _params(args) if None not in (args.a, args.b, args.c) else None
    cert = phicrit.certify(args.phi, p, args.range, args.n)
    print(f"phi = {args.phi.spec_string()}")
    if p is not None:
        print(f"params = ({fmt_complex(p.a)}, {fmt_complex(p.b)}, {fmt_complex(p.c)})")
    print(f"status = {cert.status.value}")
    print(f"justification = {cert.justification.value}")
    if cert.violation_point is not None:
        print(f"violation_point = {fmt(cert.violation_point)}")
    # table and preset phi need a grid check even when the final step is symbolic
    if not cert.symbolic or not isinstance(args.phi, (phicrit.PowerPhi, phicrit.LogPhi)):
        lo, hi = phicrit.default_bracket(args.phi, args.range)
        print(f"grid = {fmt(lo)},{fmt(hi)} n={args.n} rise_tol={phicrit.RISE_TOL:g}")
    if cert.monotone:
        return EXIT_OK
    if cert.status is phicrit.Status.CERTIFIED_NOT_COND_B:
        return EXIT_NOT_COND_B
    return EXIT_INCONCLUSIVE


def cmd_counterexample(args) -> int:
    r = counterex.construct(args.phi, args.t0, args.margin)
    print(f"phi = {args.phi.spec_string()}")
    print(f"t0 = {fmt(r.t0)}")
    print(f"margin = {fmt(r.margin)}")
    print(f"a = {fmt_complex(r.params.a)}")
    print(f"b = {fmt_complex(r.params.b)}")
    print(f"c = {fmt_complex(r.params.c)}")
    print(f"d1 = {fmt(r.d1)}")
    print(f"d2 = {fmt(r.d2)}")
    print(f"slope_gap = {fmt(r.slope_gap)}")
    print(f"witness_t = {fmt(r.decrease_witness[0])}")
    print(f"f(witness_t) = {fmt(r.f_lo)}")
    print(f"f(t0) = {fmt(r.f_t0)}")
    print(f"witness_gap_tol = {counterex.WITNESS_GAP:g}")
    return EXIT_OK


def _load_spec(args) -> specop.SpectrumSpec:
    if args.spec:
        return specop.SpectrumSpec.from_json(Path(args.spec).read_text())
    kw = {"n_max": args.n_max, "d": args.d, "t1": args.t1, "t2": args.t2}
    return specop.preset(args.preset, **kw)


_EXIT_BY_STATUS = {
    specop.AttainStatus.ATTAINS: EXIT_OK,
    specop.AttainStatus.NOT_ATTAINS: EXIT_NOT_ATTAINS,
    specop.AttainStatus.UNKNOWN: EXIT_UNKNOWN,
}


def cmd_analyze(args) -> int:
    spec = _load_spec(args)
    p = _params(args)
    omega = specop.compute_omega(spec, p, args.phi)
    verdict = specop.decide_attainment(spec, p, args.phi)
    print(f"norm_A = {fmt(spec.sup())}")
    print(f"attains_base = {specop.attains_base(spec)}")
    print(f"norm_T = {fmt(omega.norm)}")
    print(f"omega = [{', '.join(fmt(w) for w in omega.points)}]")
    print(f"omega_singleton = {omega.is_singleton}")
    print(f"omega_tol = {omega.tol:g}  cluster_radius = {specop.CLUSTER_RADIUS * max(1.0, spec.bound):g}")
    print(f"verdict = {verdict.status.value}")
    print(f"certificate = {verdict.certificate.value}")
    if verdict.witness is not None:
        print(f"witness = {fmt(verdict.witness)}")
    print(f"numeric = {verdict.numeric}")
    return _EXIT_BY_STATUS[verdict.status]


def _rows_ex24():
    try:
        r = counterex.reproduce_example24()
        return [("ex24", name, ok, detail) for name, ok, detail in r.rows]
    except NormgateError as exc:
        return [("ex24", "reproduction", False, str(exc))]


def _rows_ex312():
    p, phi = ParamSet(-2, 2, 1), phicrit.PowerPhi(0, 1, 5)
    spec = specop.preset("bergman")
    v = specop.decide_attainment(spec, p, phi)
    vals = spec.point_spectrum()
    n0 = int(curves.eval_f(p, phi, vals).argmax())
    return [
        ("ex312", "A does not attain its norm", not specop.attains_base(spec), ""),
        ("ex312", "T attains its norm", v.status is specop.AttainStatus.ATTAINS,
         f"{v.status.value} via {v.certificate.value}"),
        ("ex312", "witness is an eigenvalue sqrt((n0+1)/(n0+2))",
         v.witness is not None and abs(v.witness - math.sqrt((n0 + 1) / (n0 + 2))) < 1e-15,
         f"n0={n0}, witness={fmt(v.witness) if v.witness is not None else 'none'}"),
    ]


def _rows_ex311():
    spec = specop.preset("mult-op", d=1.0)
    mono = specop.decide_attainment(spec, ParamSet(1, 1, 1), phicrit.LogPhi(1))
    single = specop.decide_attainment(spec, ParamSet(-2, 2, 1), phicrit.PowerPhi(0, 1, 5))
    return [
        ("ex311", "A does not attain its norm", not specop.attains_base(spec), ""),
        ("ex311", "monotone (1,1,1; log(1+t)): NOT_ATTAINS",
         mono.status is specop.AttainStatus.NOT_ATTAINS, mono.certificate.value),
        ("ex311", "singleton Omega (-2,2,1; t^5): NOT_ATTAINS",
         single.status is specop.AttainStatus.NOT_ATTAINS, single.certificate.value),
    ]


def _rows_ex313():
    spec = specop.preset("ex313", t1=0.96, t2=0.98)
    v = specop.decide_attainment(spec, ParamSet(-2, 2, 1), phicrit.PowerPhi(0, 1, 5))
    return [
        ("ex313", "A attains its norm", specop.attains_base(spec), ""),
        ("ex313", "T does not attain its norm (singleton Omega)",
         v.status is specop.AttainStatus.NOT_ATTAINS
         and v.certificate is specop.AttainCertificate.LEMMA_35_SINGLETON,
         f"{v.status.value} via {v.certificate.value}"),
    ]


_REPRODUCTIONS = {"ex24": _rows_ex24, "ex311": _rows_ex311, "ex312": _rows_ex312, "ex313": _rows_ex313}


def cmd_reproduce(args) -> int:
    which = list(_REPRODUCTIONS) if args.which == "all" else [args.which]
    rows = [row for w in which for row in _REPRODUCTIONS[w]()]
    for tag, name, ok, detail in rows:
        line = f"{'PASS' if ok else 'FAIL'}  {tag}  {name}"
        print(f"{line}  [{detail}]" if detail else line)
    return EXIT_OK if all(ok for _, _, ok, _ in rows) else EXIT_ERROR


def cmd_oracle(args) -> int:
    report = oracle.run_battery(args.seed, args.trials, args.max_dim)
    print(f"seed = {report.seed}  trials = {report.trials}  max_dim = {report.max_dim}  tol = {report.tol:g}")
    for name, dev in report.deviations.items():
        print(f"{'PASS' if dev < report.tol else 'FAIL'}  {name}  max_scaled_deviation = {fmt(dev)}")
    return EXIT_OK if report.passed else EXIT_ERROR


def _add_params(sp, required: bool) -> None:
    for name in ("a", "b", "c"):
        sp.add_argument(f"--{name}", type=parse_complex, required=required, default=None,
                        help=f"complex coefficient {name} ('re' or 're+imi')")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normgate", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("curve", help="emit t,norm CSV of ||M_t||")
    _add_params(sp, required=True)
    sp.add_argument("--phi", type=parse_phi_flag, required=True)
    sp.add_argument("--range", type=parse_range, default=(0.0, 1.0))
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--out", default=None, help="output path (default stdout)")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("certify", help="monotonicity certificate for t -> ||M_t||")
    _add_params(sp, required=False)
    sp.add_argument("--phi", type=parse_phi_flag, required=True)
    sp.add_argument("--range", type=parse_range, default=None)
    sp.add_argument("--n", type=int, default=4096)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("counterexample", help="build parameters with a non-monotone norm curve")
    sp.add_argument("--phi", type=parse_phi_flag, required=True)
    sp.add_argument("--t0", type=float, default=1.0)
    sp.add_argument("--margin", type=float, default=None, help="default 4*t0 + 1")
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("analyze", help="norm attainment of T from spectral data")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="spectrum JSON file")
    src.add_argument("--preset", choices=["bergman", "mult-op", "ex313"])
    sp.add_argument("--n-max", type=int, default=specop.DEFAULT_N_MAX)
    sp.add_argument("--d", type=float, default=1.0)
    sp.add_argument("--t1", type=float, default=0.96)
    sp.add_argument("--t2", type=float, default=0.98)
    _add_params(sp, required=True)
    sp.add_argument("--phi", type=parse_phi_flag, required=True)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("reproduce", help="re-derive the worked examples")
    sp.add_argument("which", choices=["ex24", "ex311", "ex312", "ex313", "all"])
    sp.set_defaults(func=cmd_reproduce)

    sp = sub.add_parser("oracle", help="random brute-force validation battery")
    sp.add_argument("--seed", type=int, default=int(os.environ.get("NORMGATE_SEED", DEFAULT_SEED)))
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--max-dim", type=int, default=16)
    sp.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NormgateError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
