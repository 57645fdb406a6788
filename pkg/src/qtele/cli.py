"""Command-line interface: ``qtele verify|sweep|teleport|decode``."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import channel, circuit
from .circuit import BASES, ChannelSpec, InfoQubit, Protocol
from .errors import PayloadError, QteleError
from .qnum import UNDEFORMED, new_param
from .verify import run_all

REPORT_VERSION = 1


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _setup(protocol: Protocol, alpha0: float, a00: float, s: float, kappa: float, kappa_gamma: float | None = None):
    if protocol is Protocol.PLAIN and s != 0.0:
        raise QteleError("the plain protocol is undeformed; --s must be 0")
    info = InfoQubit.from_alpha0(alpha0)
    p = UNDEFORMED if protocol is Protocol.PLAIN else new_param(s)
    chan = ChannelSpec.from_a00(a00, deformed=protocol is not Protocol.PLAIN, p=p)
    profiles = circuit.default_profiles(info, chan, protocol, kappa, kappa_gamma)
    return info, chan, profiles


def cmd_verify(args) -> int:
    lines = run_all(args.seed, args.draws)
    for line in lines:
        print(line.render())
    failed = sum(line.status == "FAIL" for line in lines)
    passed = sum(line.status == "PASS" for line in lines)
    print(f"summary: {passed} passed, {failed} failed (seed={args.seed}, draws={args.draws})")
    return 1 if failed else 0


_SWEEP_DOMAIN = {"s": (0.0, 1.0), "a00": (0.0, 1.0), "alpha0": (0.0, 1.0)}


def sweep_rows(args) -> list[list[float]]:
    protocol = Protocol(args.protocol)
    rows = []
    for i in range(args.steps):
        value = args.lo + (args.hi - args.lo) * i / (args.steps - 1)
        params = {"alpha0": args.alpha0, "a00": args.a00, "s": args.s}
        params[args.var] = value
        info, chan, profiles = _setup(protocol, params["alpha0"], params["a00"], params["s"], args.kappa)
        fid = circuit.fidelity_closed(info, chan, profiles, protocol)
        m0, m1 = circuit.bob_stats(circuit.teleport(info, chan, profiles, protocol), args.basis)
        rows.append([value, fid, m0, m1, m0 * m1])
    return rows


def cmd_sweep(args) -> int:
    rows = sweep_rows(args)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([args.var, "F", "M0", "M1", "M0M1"])
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
    return 0


def cmd_teleport(args) -> int:
    protocol = Protocol(args.protocol)
    info, chan, profiles = _setup(protocol, args.alpha0, args.a00, args.s, args.kappa, args.kappa_gamma)
    record = circuit.teleport(info, chan, profiles, protocol)
    payload = channel.make_payload(record, chan, profiles, args.basis)
    data = channel.encode(payload)
    Path(args.out).write_bytes(data)

    received = channel.decode(Path(args.out).read_bytes())
    m0, m1 = received.measured
    result = channel.recover_amplitudes(m0, m1, received)
    report = {
        "report_version": REPORT_VERSION,
        "payload_version": channel.VERSION,
        "record": record.to_json(),
        "alice_basis": args.basis,
        "fidelity_closed": circuit.fidelity_closed(info, chan, profiles, protocol),
        "fidelity_overlap": circuit.fidelity_overlap(record),
        "payload_file": str(args.out),
        "recovered": {
            "abs_alpha0": result.abs_alpha0,
            "abs_alpha1": result.abs_alpha1,
            "ambiguous": result.ambiguous,
            "residual": result.residual,
            "alternatives": [[c.abs_alpha0, c.abs_alpha1] for c in result.alternatives],
        },
    }
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def cmd_decode(args) -> int:
    payload = channel.decode(Path(args.infile).read_bytes())
    out = {
        "version": payload.version,
        "protocol": payload.protocol.value,
        "alice_basis": payload.alice_basis,
        "det_abs": payload.det_abs,
        "s": payload.s,
        "channel_shape": payload.channel_shape.value,
        "profile_kappas": list(payload.profile_kappas),
        "measured": list(payload.measured) if payload.measured is not None else None,
    }
    json.dump(out, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _unit(text: str) -> float:
    x = float(text)
    if not (math.isfinite(x) and 0.0 <= x <= 1.0):
        raise argparse.ArgumentTypeError(f"{text} is outside [0, 1]")
    return x


def _finite(text: str) -> float:
    x = float(text)
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"{text} is not finite")
    return x


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtele", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run every property suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--draws", type=_positive_int, default=200)
    v.set_defaults(func=cmd_verify)

    protocols = [p.value for p in Protocol]

    def run_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--protocol", choices=protocols, default="plain")
        p.add_argument("--alpha0", type=_unit, default=0.6)
        p.add_argument("--a00", type=_unit, default=0.6)
        p.add_argument("--s", type=_unit, default=0.0)
        p.add_argument("--kappa", type=_finite, default=0.5)
        p.add_argument("--basis", choices=BASES, default="00")

    sw = sub.add_parser("sweep", help="tabulate F, M0, M1 over one variable")
    sw.add_argument("--var", choices=sorted(_SWEEP_DOMAIN), required=True)
    sw.add_argument("--lo", type=_finite, required=True)
    sw.add_argument("--hi", type=_finite, required=True)
    sw.add_argument("--steps", type=int, required=True)
    run_flags(sw)
    sw.add_argument("--out", required=True)
    sw.set_defaults(func=cmd_sweep)

    t = sub.add_parser("teleport", help="run one protocol and write its payload")
    run_flags(t)
    t.add_argument("--kappa-gamma", type=_finite, default=None)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_teleport)

    d = sub.add_parser("decode", help="decode a payload file")
    d.add_argument("--in", dest="infile", required=True)
    d.set_defaults(func=cmd_decode)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep":
        lo_ok, hi_ok = _SWEEP_DOMAIN[args.var]
        if not args.lo < args.hi:
            parser.error("--lo must be below --hi")
        if args.steps < 2:
            parser.error("--steps must be at least 2")
        if args.lo < lo_ok or args.hi > hi_ok:
            parser.error(f"--{args.var} range must lie within [{lo_ok}, {hi_ok}]")
    try:
        return args.func(args)
    except PayloadError as exc:
        print(f"qtele: payload error: {exc}", file=sys.stderr)
        return 1
    except QteleError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"qtele: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
