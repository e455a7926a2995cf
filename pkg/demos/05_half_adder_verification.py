"""Full pipeline on the half-adder: timing -> synthesis -> verification.

Picks the middle of every gate's synthesized K interval, simulates all
four input combinations, and monitors the network truth-table contracts
for the sum and carry outputs.
"""

from gatesynth import (
    Circuit, GateParams, propagate_timing, synthesize_circuit, verify,
    write_trace_csv,
)

c = Circuit.from_json("circuits/half_adder.json")
tb = propagate_timing(c)

result = synthesize_circuit(c, tb, method="m1")
params = {}
print("synthesized parameters (box midpoints, alpha 5% above its bound):")
for gid, s in sorted(result.gates.items()):
    ks = tuple((lo + hi) / 2 for lo, hi in s.box.intervals.values())
    params[gid] = GateParams(kind=s.kind, n=s.n, alpha=1.05 * s.alpha_min,
                             hill_k=ks)
    print(f"  {gid}: n={s.n:g} alpha={1.05 * s.alpha_min:.4f} "
          f"K={tuple(round(k, 4) for k in ks)}")

report = verify(c, params, tb)
print("\nverification of the 8 network contracts:")
for e in report.entries:
    combo = " ".join(f"{v}={lvl}" for v, lvl in e.combo.items())
    print(f"  {combo:22s} {e.output}={e.expected:5s} "
          f"rho={e.robustness:+.4f} {'PASS' if e.passed else 'FAIL'}")
print(f"\nall pass: {report.all_pass}")

key = "A=high,B=high"
write_trace_csv(report.traces[key], "half_adder_high_high.csv")
print(f"wrote trace for {key} to half_adder_high_high.csv")
