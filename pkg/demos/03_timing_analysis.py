"""Network timing analysis for the half-adder circuit.

The network-level response budget delta is split across gates by the
longest input-to-output path through each gate; output-persistence
requirements lambda(M) propagate backwards from the outputs.
"""

from gatesynth import Circuit, longest_paths, propagate_timing, wiring_formulas

c = Circuit.from_json("circuits/half_adder.json")
tb = propagate_timing(c)
lf, lb = longest_paths(c)

print(f"network budgets: delta = {tb.network_delta:g}, "
      f"lambda = {tb.network_lambda:g}")
print(f"external inputs must be held for {tb.input_hold:g} time units\n")

print(f"{'gate':<6}{'kind':<6}{'lf':>4}{'lb':>4}{'delta(M)':>10}{'lambda(M)':>11}")
for gid in c.topo_order():
    print(f"{gid:<6}{c.gates[gid].kind.value:<6}{lf[gid]:>4}{lb[gid]:>4}"
          f"{tb.delta[gid]:>10.4g}{tb.lam[gid]:>11.4g}")

# the carry AND sits alone on its path, so it gets the whole budget;
# the five XOR-part gates share theirs three ways
print("\nwiring-compatibility formulas (valid by construction):")
for (a, b), w in wiring_formulas(c, tb):
    print(f"  {a} -> {b}: {w.formula()}")
