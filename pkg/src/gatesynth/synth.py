"""Analytic and numeric synthesis of admissible kinetic-parameter regions.

For each gate class the steady-state inequalities induced by its extended
truth table reduce (after rescaling and with a safety margin p on the
output thresholds) to closed-form bounds:

* a lower bound on the degradation rate alpha guaranteeing threshold
  crossing within the gate's response-time budget,
* a lower bound on the Hill coefficient n for the K-region to be
  nonempty,
* Method 1: per-axis intervals for the Hill K parameters (a hyperbox),
* Method 2: a larger curve-bounded region with an exact membership
  predicate.

Natural logarithms throughout.  A grid-search fallback
(:func:`synthesize_numeric`) checks admissibility by worst-case
simulation plus monitoring instead of the analytic bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, TimingBudget, propagate_timing
from .formulas import Atom, Eventually, Globally
from .gates import (
    HIGH, ExtendedTruthRow, GateKind, GateParams, Thresholds, gate_drive,
    truth_table,
)
from .monitor import robustness
from .odesim import simulate_constant_drive
from .signals import Signal
from .worstcase import worst_case

__all__ = [
    "ParamBox", "CurvedRegion", "GateSynthesis", "SynthesisResult",
    "EmptyRegionError", "alpha_bound", "and_n_bound_m1", "and_n_bound_m2",
    "and_box_m1", "and_region_m2", "not_bounds", "or_bounds_m1",
    "or_region_m2", "or_n_bound_m2", "intersect", "synthesize_circuit",
    "synthesize_numeric", "gate_box", "gate_region_m2", "gate_n_bound",
    "NumericGrid", "NumericGateResult", "worst_case_output_robustness",
    "export_region_csv", "sample_region",
]


class EmptyRegionError(ValueError):
    """Synthesis produced an empty region for some gate."""

    def __init__(self, gate_id: str, detail: str):
        self.gate_id = gate_id
        self.detail = detail
        super().__init__(f"empty parameter region for gate {gate_id!r}: {detail}")


@dataclass(frozen=True)
class ParamBox:
    """Per-axis closed intervals; upper bounds may be +inf."""

    intervals: dict[str, tuple[float, float]]

    @property
    def empty(self) -> bool:
        return any(lo > hi for lo, hi in self.intervals.values())

    def contains(self, point: dict[str, float]) -> bool:
        if self.empty:
            return False
        return all(
            self.intervals[a][0] <= v <= self.intervals[a][1]
            for a, v in point.items()
            if a in self.intervals
        )

    def to_dict(self) -> dict:
        return {
            a: [lo, None if math.isinf(hi) else hi]
            for a, (lo, hi) in self.intervals.items()
        }


def intersect(boxes) -> ParamBox:
    """Axis-wise interval intersection; missing axes count as unconstrained."""
    axes: dict[str, tuple[float, float]] = {}
    for box in boxes:
        for a, (lo, hi) in box.intervals.items():
            if a in axes:
                plo, phi = axes[a]
                axes[a] = (max(plo, lo), min(phi, hi))
            else:
                axes[a] = (lo, hi)
    return ParamBox(intervals=axes)


# ---------------------------------------------------------------------------
# closed-form bounds


def alpha_bound(th: Thresholds, delta: float) -> float:
    """Smallest degradation rate meeting the response-time budget delta."""
    if delta <= 0:
        raise ValueError("delta must be > 0")
    return math.log(1.0 / (th.p * th.minus)) / delta


def _n_bound(log_ratio_hi: float, min_input_log: float) -> float:
    return log_ratio_hi / min_input_log


def and_n_bound_m1(thA: Thresholds, thB: Thresholds, thC: Thresholds) -> float:
    """Hill-coefficient bound for a nonempty Method 1 AND box."""
    s = math.sqrt(thC.tilde_plus)
    num = math.log(s / thC.tilde_minus * (1 - thC.tilde_minus) / (1 - s))
    den = min(math.log(thB.plus / thB.minus), math.log(thA.plus / thA.minus))
    return _n_bound(num, den)


def and_n_bound_m2(thA: Thresholds, thB: Thresholds, thC: Thresholds) -> float:
    """Hill-coefficient bound for a nonempty Method 2 AND region."""
    num = math.log(
        thC.tilde_plus / thC.tilde_minus * (1 - thC.tilde_minus) / (1 - thC.tilde_plus)
    )
    den = min(math.log(thB.plus / thB.minus), math.log(thA.plus / thA.minus))
    return _n_bound(num, den)


def and_box_m1(
    thA: Thresholds, thB: Thresholds, thC: Thresholds, n: float
) -> ParamBox:
    """Method 1 intervals for (K_A, K_B) of an AND gate; empty if n too small."""
    s = math.sqrt(thC.tilde_plus)
    lo_f = ((1 - thC.tilde_minus) / thC.tilde_minus) ** (1.0 / n)
    hi_f = ((1 - s) / s) ** (1.0 / n)
    return ParamBox(
        intervals={
            "K1": (thA.minus * lo_f, thA.plus * hi_f),
            "K2": (thB.minus * lo_f, thB.plus * hi_f),
        }
    )


def _pow_root(base: float, n: float) -> float:
    """base**(1/n) for base >= 0; negative base means no real constraint."""
    return base ** (1.0 / n) if base > 0 else 0.0


def _and_upper_curve(th_in: Thresholds, th_other: float, ttC: float, n: float, k_other: float) -> float:
    """K bound from theta_in^n/(theta~ * (k_other^n + other^n)) - 1, rooted."""
    inner = th_other**n / (ttC * (k_other**n + th_other**n)) - 1.0
    if inner <= 0:
        return -1.0  # no admissible K at all on an upper-bound curve
    return th_in.plus * inner ** (1.0 / n)


def _and_lower_curve(level_a: float, level_b: float, ttC: float, n: float, k_other: float) -> float:
    """Lower-bound curve value for K_A given K_B (0 when unconstrained)."""
    inner = level_b**n / (ttC * (k_other**n + level_b**n)) - 1.0
    if inner <= 0:
        return 0.0
    return level_a * inner ** (1.0 / n)


@dataclass(frozen=True)
class CurvedRegion:
    """Curve-bounded Method 2 validity region with exact membership."""

    kind: GateKind
    thresholds: tuple[Thresholds, ...]  # inputs..., output
    n: float
    n_bound: float = field(default=0.0)

    def membership(self, point) -> tuple[bool, str]:
        """(inside, binding constraint name) for a (K1, K2) point."""
        if self.kind is GateKind.AND:
            return _and_membership(self.thresholds, self.n, point)
        if self.kind is GateKind.OR:
            return _or_membership(self.thresholds, self.n, point)
        raise ValueError("Method 2 regions exist for AND and OR gates only")

    def contains(self, point) -> bool:
        return self.membership(point)[0]


# absolute slack on curve comparisons so points exactly on a boundary
# (for example the Method 1 box corner) are not lost to float rounding
_EDGE_TOL = 1e-9


def _and_membership(ths, n, point) -> tuple[bool, str]:
    thA, thB, thC = ths
    k1, k2 = float(point[0]), float(point[1])
    if k1 <= 0 or k2 <= 0:
        return False, "positivity"
    ttp, ttm = thC.tilde_plus, thC.tilde_minus
    lo_f = _pow_root((1 - ttm) / ttm, n)
    hi_f = _pow_root((1 - ttp) / ttp, n)
    a_lo, a_hi = thA.minus * lo_f, thA.plus * hi_f
    b_lo, b_hi = thB.minus * lo_f, thB.plus * hi_f
    gA = gB = 1.0  # rescaled maximum input level

    c1 = _and_upper_curve(thA, thB.plus, ttp, n, k2)  # output-high curve
    c2 = _and_lower_curve(thA.minus, gB, ttm, n, k2)  # row (low, high)
    c3 = _and_lower_curve(gA, thB.minus, ttm, n, k2)  # row (high, low)

    tol = _EDGE_TOL
    # piece 1: both K above the output-low rectangle sides
    if (a_lo - tol <= k1 <= a_hi + tol and b_lo - tol <= k2 <= b_hi + tol
            and k1 <= c1 + tol):
        return True, _tightest(
            {
                "K1_low_rect": k1 - a_lo,
                "K1_high_rect": a_hi - k1,
                "K2_low_rect": k2 - b_lo,
                "K2_high_rect": b_hi - k2,
                "high_curve": c1 - k1,
            }
        )
    # piece 2: K2 below its rectangle side; both lower curves constrain K1
    if (k2 <= b_lo + tol and k1 <= a_hi + tol
            and max(c2, c3) - tol <= k1 <= c1 + tol):
        return True, _tightest(
            {
                "K1_high_rect": a_hi - k1,
                "low_curve_gamma_b": k1 - c2,
                "low_curve_gamma_a": k1 - c3,
                "high_curve": c1 - k1,
            }
        )
    # piece 3: K1 below its rectangle side, K2 above; one lower curve
    if (k2 >= b_lo - tol and k1 <= a_lo + tol
            and c2 - tol <= k1 <= c1 + tol):
        return True, _tightest(
            {
                "K2_low_rect": k2 - b_lo,
                "low_curve_gamma_b": k1 - c2,
                "high_curve": c1 - k1,
            }
        )
    if k1 > c1 >= 0 or c1 < 0:
        return False, "high_curve"
    if k1 < max(c2, c3):
        return False, "low_curve_gamma_b" if c2 >= c3 else "low_curve_gamma_a"
    return False, "rectangle"


def _tightest(slacks: dict[str, float]) -> str:
    return min(slacks, key=slacks.get)


def not_bounds(thB: Thresholds, thD: Thresholds, n: float) -> tuple[float, ParamBox]:
    """NOT gate: Hill-coefficient bound and K interval at the given n."""
    ttp, ttm = thD.tilde_plus, thD.tilde_minus
    nb = math.log(ttp / ttm * (1 - ttm) / (1 - ttp)) / math.log(thB.plus / thB.minus)
    lo = thB.minus * (ttp / (1 - ttp)) ** (1.0 / n)
    hi = thB.plus * (ttm / (1 - ttm)) ** (1.0 / n)
    return nb, ParamBox(intervals={"K1": (lo, hi)})


def or_bounds_m1(
    thE: Thresholds, thG: Thresholds, thS: Thresholds, n: float
) -> tuple[float, ParamBox]:
    """OR gate Method 1: Hill bound and (K1, K2) hyperbox."""
    ttp, ttm = thS.tilde_plus, thS.tilde_minus
    nb = math.log(ttp / ttm * (2 - 2 * ttm) / (1 - ttp)) / min(
        math.log(thG.plus / thG.minus), math.log(thE.plus / thE.minus)
    )
    lo_f = ((2 - 2 * ttm) / ttm) ** (1.0 / n)
    hi_f = ((1 - ttp) / ttp) ** (1.0 / n)
    return nb, ParamBox(
        intervals={
            "K1": (thE.minus * lo_f, thE.plus * hi_f),
            "K2": (thG.minus * lo_f, thG.plus * hi_f),
        }
    )


def or_n_bound_m2(thE: Thresholds, thG: Thresholds, thS: Thresholds) -> float:
    ttp, ttm = thS.tilde_plus, thS.tilde_minus
    return math.log(ttp / ttm * (1 - ttm) / (1 - ttp)) / min(
        math.log(thG.plus / thG.minus), math.log(thE.plus / thE.minus)
    )


def _or_membership(ths, n, point) -> tuple[bool, str]:
    thE, thG, thS = ths
    k1, k2 = float(point[0]), float(point[1])
    if k1 <= 0 or k2 <= 0:
        return False, "positivity"
    ttp, ttm = thS.tilde_plus, thS.tilde_minus
    lo_f = _pow_root((1 - ttm) / ttm, n)
    hi_f = _pow_root((1 - ttp) / ttp, n)
    tol = _EDGE_TOL
    if not (thE.minus * lo_f < k1 <= thE.plus * hi_f + tol):
        return False, "K1_rect"
    if not (thG.minus * lo_f < k2 <= thG.plus * hi_f + tol):
        return False, "K2_rect"
    den = ttm / (1 - ttm) - (thG.minus / k2) ** n
    # den > 0 is implied by the K2 rectangle side
    low_curve = thE.minus * (1.0 / den) ** (1.0 / n)
    if k1 < low_curve - tol:
        return False, "low_curve"
    return True, _tightest(
        {
            "K1_high_rect": thE.plus * hi_f - k1,
            "K2_high_rect": thG.plus * hi_f - k2,
            "low_curve": k1 - low_curve,
            "K2_low_rect": k2 - thG.minus * lo_f,
        }
    )


def or_region_m2(
    thE: Thresholds, thG: Thresholds, thS: Thresholds, n: float
) -> CurvedRegion:
    nb = or_n_bound_m2(thE, thG, thS)
    if n <= nb:
        raise ValueError(f"OR Method 2 needs n > {nb:.4f}, got {n}")
    return CurvedRegion(kind=GateKind.OR, thresholds=(thE, thG, thS), n=n, n_bound=nb)


def and_region_m2(
    thA: Thresholds, thB: Thresholds, thC: Thresholds, n: float
) -> CurvedRegion:
    nb = and_n_bound_m2(thA, thB, thC)
    if n < nb:
        raise ValueError(f"AND Method 2 needs n >= {nb:.4f}, got {n}")
    return CurvedRegion(kind=GateKind.AND, thresholds=(thA, thB, thC), n=n, n_bound=nb)


# ---------------------------------------------------------------------------
# per-gate dispatch


def gate_n_bound(kind: GateKind, ths, method: str = "m1") -> float:
    """Hill-coefficient lower bound for a gate (inputs..., output thresholds)."""
    kind = GateKind(kind)
    if kind is GateKind.AND:
        f = and_n_bound_m1 if method == "m1" else and_n_bound_m2
        return f(*ths)
    if kind is GateKind.OR:
        if method == "m1":
            return or_bounds_m1(*ths, n=1.0)[0]
        return or_n_bound_m2(*ths)
    nb, _ = not_bounds(*ths, n=1.0)
    return nb


def gate_box(kind: GateKind, ths, n: float) -> ParamBox:
    """Method 1 K-box for any gate kind."""
    kind = GateKind(kind)
    if kind is GateKind.AND:
        return and_box_m1(*ths, n=n)
    if kind is GateKind.OR:
        return or_bounds_m1(*ths, n=n)[1]
    return not_bounds(*ths, n=n)[1]


def gate_region_m2(kind: GateKind, ths, n: float) -> CurvedRegion:
    kind = GateKind(kind)
    if kind is GateKind.AND:
        return and_region_m2(*ths, n=n)
    if kind is GateKind.OR:
        return or_region_m2(*ths, n=n)
    raise ValueError("NOT gates have interval bounds; Method 2 applies to AND/OR")


# ---------------------------------------------------------------------------
# circuit-level synthesis


@dataclass(frozen=True)
class GateSynthesis:
    """Synthesis outcome for one gate."""

    gate_id: str
    kind: GateKind
    n: float
    n_bound: float
    alpha_min: float
    box: ParamBox | None
    region: CurvedRegion | None
    binding: str

    @property
    def empty(self) -> bool:
        return self.box is not None and self.box.empty

    def to_dict(self) -> dict:
        d = {
            "gate": self.gate_id,
            "kind": self.kind.value,
            "n": self.n,
            "n_bound": self.n_bound,
            "alpha_min": self.alpha_min,
            "binding": self.binding,
        }
        if self.box is not None:
            d["k_box"] = self.box.to_dict()
        if self.region is not None:
            d["method2_n_bound"] = self.region.n_bound
        return d


@dataclass(frozen=True)
class SynthesisResult:
    method: str
    gates: dict[str, GateSynthesis]

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "gates": {gid: gs.to_dict() for gid, gs in self.gates.items()},
        }


def _gate_thresholds(c: Circuit, gid: str):
    g = c.gates[gid]
    return tuple(c.thresholds[v] for v in g.inputs) + (c.thresholds[g.output],)


def synthesize_circuit(
    c: Circuit,
    tb: TimingBudget | None = None,
    method: str = "m1",
    n: dict[str, float] | None = None,
) -> SynthesisResult:
    """Analytic per-gate synthesis over the whole circuit.

    ``n`` maps gate id to its fixed Hill coefficient (default 4 for
    AND/OR, 3 for NOT).  Raises :class:`EmptyRegionError` when a gate's n
    is below its method bound.
    """
    if method not in ("m1", "m2"):
        raise ValueError("method must be 'm1' or 'm2'")
    if tb is None:
        tb = propagate_timing(c)
    n = dict(n or {})
    results = {}
    for gid in c.topo_order():
        g = c.gates[gid]
        ths = _gate_thresholds(c, gid)
        n_g = float(n.get(gid, 3.0 if g.kind is GateKind.NOT else 4.0))
        nb = gate_n_bound(g.kind, ths, method if g.kind is not GateKind.NOT else "m1")
        if n_g < nb or (
            method == "m2" and g.kind is GateKind.OR and n_g <= nb
        ):
            raise EmptyRegionError(
                gid, f"n={n_g} below the {method} bound {nb:.4f}"
            )
        a_min = alpha_bound(c.thresholds[g.output], tb.delta[gid])
        box = gate_box(g.kind, ths, n_g)
        region = None
        if method == "m2" and g.kind in (GateKind.AND, GateKind.OR):
            region = gate_region_m2(g.kind, ths, n_g)
        if box.empty:
            raise EmptyRegionError(gid, "Method 1 K intervals cross")
        results[gid] = GateSynthesis(
            gate_id=gid,
            kind=g.kind,
            n=n_g,
            n_bound=nb,
            alpha_min=a_min,
            box=box,
            region=region,
            binding=f"n_bound={nb:.4f}",
        )
    return SynthesisResult(method=method, gates=results)


# ---------------------------------------------------------------------------
# numeric (grid search) fallback


@dataclass(frozen=True)
class NumericGrid:
    """Per-axis grid specification (lo, hi, count) for the K parameters."""

    axes: dict[str, tuple[float, float, int]]

    def points(self, names) -> np.ndarray:
        grids = [np.linspace(*self.axes[a]) for a in names]
        mesh = np.meshgrid(*grids, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class NumericGateResult:
    gate_id: str
    axis_names: tuple[str, ...]
    points: np.ndarray  # all grid points, shape (N, n_axes)
    admissible: np.ndarray  # boolean mask, shape (N,)
    min_robustness: np.ndarray  # per point, shape (N,)

    @property
    def bounding_box(self) -> ParamBox:
        if not self.admissible.any():
            return ParamBox(intervals={a: (1.0, 0.0) for a in self.axis_names})
        pts = self.points[self.admissible]
        return ParamBox(
            intervals={
                a: (float(pts[:, i].min()), float(pts[:, i].max()))
                for i, a in enumerate(self.axis_names)
            }
        )


def worst_case_output_robustness(
    kind: GateKind,
    row: ExtendedTruthRow,
    input_ths,
    output_th: Thresholds,
    k_values: np.ndarray,
    n: float,
    alpha: float,
    step: float = 0.01,
    output_var: str = "x",
) -> np.ndarray:
    """Output-formula robustness under the row's worst-case constant inputs.

    Vectorised over K parameter points (``k_values`` of shape (N, arity)).
    The antecedent is marginal by construction under worst-case inputs, so
    admissibility is judged on the output formula alone.
    """
    kind = GateKind(kind)
    wc = worst_case(kind, row, input_ths)
    k_values = np.atleast_2d(np.asarray(k_values, dtype=float))
    drives = np.empty(len(k_values))
    for i, ks in enumerate(k_values):
        g = GateParams(kind=kind, n=n, alpha=alpha, hill_k=tuple(ks))
        drives[i] = gate_drive(g, wc.levels)
    horizon = row.lam + row.delta
    n_steps = int(round(horizon / step))
    traj = simulate_constant_drive(
        drives, alpha, np.full(len(drives), wc.x0), step, n_steps
    )
    times = np.arange(n_steps + 1) * step
    out_formula = Eventually(
        0.0,
        row.delta,
        Globally(
            0.0,
            row.lam,
            Atom(
                output_var,
                ">=" if row.output_level == HIGH else "<=",
                output_th.plus if row.output_level == HIGH else output_th.minus,
            ),
        ),
    )
    rhos = np.empty(len(drives))
    for i in range(len(drives)):
        sig = Signal(times=times, values={output_var: traj[:, i]})
        rhos[i] = robustness(out_formula, sig, 0.0)
    return rhos


def synthesize_numeric(
    c: Circuit,
    tb: TimingBudget | None = None,
    grid: dict[str, NumericGrid] | None = None,
    params: dict[str, GateParams] | None = None,
    step: float = 0.01,
) -> dict[str, NumericGateResult]:
    """Grid-search synthesis: admissible iff every row's worst-case
    output robustness is >= 0.

    ``grid`` maps gate id to its K-axis grid; ``params`` supplies the
    fixed n and alpha per gate (alpha defaults to its analytic bound, n
    to 4 for AND/OR and 3 for NOT).  Grid points are independent; results
    are merged in grid order.
    """
    if tb is None:
        tb = propagate_timing(c)
    if not grid:
        raise ValueError("empty grid specification")
    results = {}
    for gid, gspec in grid.items():
        g = c.gates[gid]
        names = tuple(sorted(gspec.axes))
        if len(names) != g.kind.arity:
            raise ValueError(
                f"gate {gid!r} needs {g.kind.arity} grid axis(es), got {len(names)}"
            )
        pts = gspec.points(names)
        base = params.get(gid) if params else None
        n_g = base.n if base else (3.0 if g.kind is GateKind.NOT else 4.0)
        alpha = base.alpha if base else alpha_bound(
            c.thresholds[g.output], tb.delta[gid]
        )
        input_ths = tuple(c.thresholds[v] for v in g.inputs)
        out_th = c.thresholds[g.output]
        rows = [
            row
            for row, _ in truth_table(
                g.kind, g.inputs, g.output, tb.delta[gid], tb.lam[gid],
                c.thresholds,
            )
        ]
        valid = (pts > 0).all(axis=1) & (pts <= 1).all(axis=1)
        min_rho = np.full(len(pts), np.inf)
        min_rho[~valid] = -np.inf
        for row in rows:
            if not valid.any():
                break
            rhos = worst_case_output_robustness(
                g.kind, row, input_ths, out_th, pts[valid], n_g, alpha, step
            )
            cur = min_rho[valid]
            min_rho[valid] = np.minimum(cur, rhos)
        results[gid] = NumericGateResult(
            gate_id=gid,
            axis_names=names,
            points=pts,
            admissible=min_rho >= 0.0,
            min_robustness=min_rho,
        )
        if not results[gid].admissible.any():
            raise EmptyRegionError(
                gid, "no admissible grid point (grid too coarse or region empty)"
            )
    return results


def export_region_csv(
    path,
    points: np.ndarray,
    inside: np.ndarray,
    binding: list[str] | None = None,
    min_robustness: np.ndarray | None = None,
) -> None:
    """Write a sampled 2D region to CSV.

    Columns: K1, K2, inside (0/1), binding_constraint, min_robustness.
    Unknown fields are left blank.
    """
    import csv

    points = np.atleast_2d(points)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["K1", "K2", "inside", "binding_constraint", "min_robustness"])
        for i, pt in enumerate(points):
            k2 = f"{pt[1]:.10g}" if pt.size > 1 else ""
            row = [f"{pt[0]:.10g}", k2, int(bool(inside[i]))]
            row.append(binding[i] if binding is not None else "")
            row.append(
                f"{min_robustness[i]:.10g}" if min_robustness is not None else ""
            )
            w.writerow(row)


def sample_region(
    region: CurvedRegion | ParamBox,
    grid: NumericGrid,
    axis_names=("K1", "K2"),
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Evaluate region membership on a grid: (points, inside, binding)."""
    pts = grid.points(list(axis_names))
    inside = np.zeros(len(pts), dtype=bool)
    binding = []
    for i, pt in enumerate(pts):
        if isinstance(region, ParamBox):
            ok = region.contains(dict(zip(axis_names, pt)))
            inside[i] = ok
            binding.append("box" if not ok else "")
        else:
            ok, why = region.membership(pt)
            inside[i] = ok
            binding.append(why)
    return pts, inside, binding
