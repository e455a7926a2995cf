"""Command-line front end: timing analysis, synthesis, regions, verification.

Subcommands
-----------
timing   per-gate response-time and persistence budgets for a circuit file
synth    analytic parameter regions for every gate in a circuit
region   sampled admissible region for a single gate kind
verify   simulate all input combinations and monitor the network contracts
monitor  robustness of an STL formula on a trace CSV

Exit codes: 0 success, 1 usage or input error, 2 graph error (cycles,
dangling gates), 3 empty parameter region, 4 verification failure.

Every command writes a run manifest next to its outputs so a run can be
reproduced from the files alone.  ``GENESYNTH_THREADS`` caps internal
parallelism (all current kernels are single-threaded numpy loops, so the
cap is recorded but never exceeded).
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .circuit import Circuit, CycleError, propagate_timing, wiring_formulas
from .formulas import StlSyntaxError, parse
from .gates import GateKind, GateParams, Thresholds
from .monitor import HorizonError, robustness
from .odesim import verify as run_verify
from .signals import read_trace_csv, write_trace_csv
from .synth import (
    EmptyRegionError, NumericGrid, ParamBox, export_region_csv, gate_box,
    gate_n_bound, gate_region_m2, sample_region, synthesize_circuit,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GRAPH = 2
EXIT_EMPTY = 3
EXIT_VERIFY = 4


@dataclass
class RunManifest:
    """Reproducibility record written next to every command's outputs."""

    command: str
    circuit: str | None
    options: dict
    out_dir: str
    version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.datetime.now(datetime.timezone.utc).isoformat()
    )

    def write(self) -> str:
        path = os.path.join(self.out_dir, "manifest.json")
        with open(path, "w") as fh:
            json.dump(self.__dict__, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _threads_cap() -> int:
    raw = os.environ.get("GENESYNTH_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _ensure_out(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def _load_circuit(path: str) -> Circuit:
    try:
        return Circuit.from_json(path)
    except FileNotFoundError:
        print(f"error: circuit file not found: {path}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    except CycleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_GRAPH)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        msg = str(exc)
        # wiring problems other than cycles are still graph errors
        if "not on any input-to-output path" in msg or "undefined variable" in msg:
            print(f"error: {msg}", file=sys.stderr)
            raise SystemExit(EXIT_GRAPH)
        print(f"error: bad circuit file {path}: {msg}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_n_flags(pairs) -> dict[str, float]:
    out = {}
    for item in pairs or ():
        if "=" not in item:
            print(f"error: --n expects GATE=VALUE, got {item!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        gid, _, val = item.partition("=")
        try:
            out[gid] = float(val)
        except ValueError:
            print(f"error: --n value not a number: {item!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_timing(args) -> int:
    c = _load_circuit(args.circuit)
    out = _ensure_out(args.out)
    try:
        tb = propagate_timing(c)
    except CycleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRAPH
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRAPH

    print(f"network: delta={tb.network_delta:g} lambda={tb.network_lambda:g} "
          f"input hold={tb.input_hold:g}")
    print(f"{'gate':<10}{'kind':<6}{'delta(M)':>10}{'lambda(M)':>11}")
    for gid in c.topo_order():
        print(f"{gid:<10}{c.gates[gid].kind.value:<6}"
              f"{tb.delta[gid]:>10.4g}{tb.lam[gid]:>11.4g}")

    data = {
        "network": {
            "delta": tb.network_delta,
            "lambda": tb.network_lambda,
            "input_hold": tb.input_hold,
        },
        "gates": {
            gid: {"delta": tb.delta[gid], "lambda": tb.lam[gid]}
            for gid in c.gates
        },
        "wiring_checks": [
            {"edge": list(edge), "formula": str(w.formula())}
            for edge, w in wiring_formulas(c, tb)
        ],
    }
    with open(os.path.join(out, "timing.json"), "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    RunManifest("timing", args.circuit, {"out": out}, out).write()
    return EXIT_OK


def cmd_synth(args) -> int:
    c = _load_circuit(args.circuit)
    out = _ensure_out(args.out)
    n_map = _parse_n_flags(args.n)
    try:
        tb = propagate_timing(c)
        result = synthesize_circuit(c, tb, method=args.method, n=n_map)
    except EmptyRegionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except CycleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRAPH

    payload = result.to_dict()
    grids = {}
    if args.method == "m2":
        for gid, gs in result.gates.items():
            if gs.region is None:
                continue
            grid = NumericGrid(
                axes={
                    "K1": (1.0 / args.grid, 1.0, args.grid),
                    "K2": (1.0 / args.grid, 1.0, args.grid),
                }
            )
            pts, inside, binding = sample_region(gs.region, grid)
            path = os.path.join(out, f"region_{gid}.csv")
            export_region_csv(path, pts, inside, binding)
            grids[gid] = path
        payload["region_grids"] = grids

    for gid, gs in sorted(result.gates.items()):
        box = " ".join(
            f"{a}=[{lo:.4f},{hi:.4f}]" for a, (lo, hi) in gs.box.intervals.items()
        )
        print(f"{gid:<10}{gs.kind.value:<6}n={gs.n:g} (bound {gs.n_bound:.4f})  "
              f"alpha>={gs.alpha_min:.4f}  {box}")

    with open(os.path.join(out, "synthesis.json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    RunManifest(
        "synth", args.circuit,
        {"method": args.method, "n": n_map, "grid": args.grid, "out": out},
        out,
    ).write()
    return EXIT_OK


def cmd_region(args) -> int:
    try:
        kind = GateKind(args.kind.upper())
    except ValueError:
        print(f"error: unknown gate kind {args.kind!r}", file=sys.stderr)
        return EXIT_USAGE
    try:
        th = Thresholds(plus=args.plus, minus=args.minus, p=args.p)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ths = (th,) * (kind.arity + 1)
    out = _ensure_out(args.out)

    method = args.method
    if kind is GateKind.NOT:
        method = "m1"
    nb = gate_n_bound(kind, ths, method)
    strict = method == "m2" and kind is GateKind.OR
    if args.n < nb or (strict and args.n <= nb):
        print(
            f"error: empty region: n={args.n:g} below the {method} "
            f"Hill-coefficient bound {nb:.4f}",
            file=sys.stderr,
        )
        return EXIT_EMPTY

    R = args.grid
    path = os.path.join(out, "region.csv")
    if kind is GateKind.NOT:
        box = gate_box(kind, ths, args.n)
        lo, hi = box.intervals["K1"]
        ks = np.linspace(1.0 / R, 1.0, R).reshape(-1, 1)
        inside = (ks[:, 0] >= lo) & (ks[:, 0] <= hi)
        binding = ["" if ok else "K1_interval" for ok in inside]
        export_region_csv(path, ks, inside, binding)
        print(f"K1 interval: [{lo:.4f}, {hi:.4f}] (n bound {nb:.4f})")
    else:
        region = (
            gate_region_m2(kind, ths, args.n)
            if method == "m2"
            else gate_box(kind, ths, args.n)
        )
        grid = NumericGrid(
            axes={"K1": (1.0 / R, 1.0, R), "K2": (1.0 / R, 1.0, R)}
        )
        pts, inside, binding = sample_region(region, grid)
        export_region_csv(path, pts, inside, binding)
        print(f"{int(inside.sum())} of {len(pts)} grid points inside "
              f"(n bound {nb:.4f})")
    print(f"wrote {path}")
    RunManifest(
        "region", None,
        {
            "kind": kind.value, "plus": args.plus, "minus": args.minus,
            "p": args.p, "n": args.n, "method": method, "grid": R, "out": out,
        },
        out,
    ).write()
    return EXIT_OK


def _load_params(path: str, c: Circuit) -> dict[str, GateParams]:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        print(f"error: params file not found: {path}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    except json.JSONDecodeError as exc:
        print(f"error: bad params file {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    params = {}
    for gid, g in c.gates.items():
        if gid not in raw:
            print(f"error: no parameters for gate {gid!r}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
        spec = raw[gid]
        try:
            params[gid] = GateParams(
                kind=g.kind,
                n=float(spec["n"]),
                alpha=float(spec["alpha"]),
                hill_k=tuple(float(k) for k in spec["k"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            print(f"error: bad parameters for gate {gid!r}: {exc}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE)
    return params


def cmd_verify(args) -> int:
    c = _load_circuit(args.circuit)
    params = _load_params(args.params, c)
    out = _ensure_out(args.out)
    tb = propagate_timing(c)
    report = run_verify(c, params, tb, step=args.step)

    for e in report.entries:
        combo = " ".join(f"{v}={lvl}" for v, lvl in e.combo.items())
        mark = "PASS" if e.passed else "FAIL"
        print(f"{mark}  {combo}  {e.output}={e.expected}  rho={e.robustness:+.4f}")

    for key, trace in report.traces.items():
        fname = "trace_" + key.replace(",", "_").replace("=", "-") + ".csv"
        write_trace_csv(trace, os.path.join(out, fname))
    with open(os.path.join(out, "verify.json"), "w") as fh:
        json.dump(
            {
                "all_pass": report.all_pass,
                "entries": [
                    {
                        "combo": e.combo,
                        "output": e.output,
                        "expected": e.expected,
                        "formula": str(e.formula),
                        "robustness": e.robustness,
                        "passed": e.passed,
                    }
                    for e in report.entries
                ],
            },
            fh, indent=2, sort_keys=True,
        )
        fh.write("\n")
    RunManifest(
        "verify", args.circuit,
        {"params": args.params, "step": args.step, "out": out}, out,
    ).write()
    if not report.all_pass:
        fails = report.failures()
        print(f"{len(fails)} row(s) failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_monitor(args) -> int:
    try:
        sig = read_trace_csv(args.trace)
    except FileNotFoundError:
        print(f"error: trace file not found: {args.trace}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: bad trace file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        f = parse(args.formula)
    except StlSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rho = robustness(f, sig, args.t)
    except HorizonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"{rho:.6g}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gatesynth",
                description="STL-constrained parameter synthesis for gene gate circuits")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("timing", help="per-gate timing budgets")
    t.add_argument("circuit")
    t.add_argument("--out", default=".")
    t.set_defaults(func=cmd_timing)

    s = sub.add_parser("synth", help="analytic parameter regions per gate")
    s.add_argument("circuit")
    s.add_argument("--method", choices=("m1", "m2"), default="m1")
    s.add_argument("--n", action="append", metavar="GATE=VALUE",
                   help="Hill coefficient for a gate (repeatable)")
    s.add_argument("--grid", type=int, default=100,
                   help="grid resolution for m2 region exports")
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_synth)

    r = sub.add_parser("region", help="sampled region for a single gate")
    r.add_argument("--kind", required=True, help="AND, OR or NOT")
    r.add_argument("--plus", type=float, required=True)
    r.add_argument("--minus", type=float, required=True)
    r.add_argument("--p", type=float, default=0.1)
    r.add_argument("--n", type=float, required=True)
    r.add_argument("--method", choices=("m1", "m2"), default="m2")
    r.add_argument("--grid", type=int, default=50, metavar="R")
    r.add_argument("--out", default=".")
    r.set_defaults(func=cmd_region)

    v = sub.add_parser("verify", help="simulate and monitor a circuit")
    v.add_argument("circuit")
    v.add_argument("params", help="JSON: gate id -> {n, alpha, k: [..]}")
    v.add_argument("--step", type=float, default=None)
    v.add_argument("--out", default=".")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("monitor", help="robustness of a formula on a trace CSV")
    m.add_argument("trace")
    m.add_argument("formula")
    m.add_argument("--t", type=float, default=0.0)
    m.set_defaults(func=cmd_monitor)
    return p


def main(argv=None) -> int:
    os.environ.setdefault("GENESYNTH_THREADS", "1")
    _threads_cap()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
