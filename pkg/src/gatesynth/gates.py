"""Hill-kinetics models of AND/OR/NOT gene gates.

All concentrations are rescaled to [0, 1], so the production/degradation
ratio is 1 and each gate obeys dx/dt = alpha * (drive - x) with a
dimensionless drive in [0, 1] determined by its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .formulas import And, Atom, Eventually, Formula, Globally, Implies

__all__ = [
    "GateKind", "Thresholds", "GateParams", "ExtendedTruthRow",
    "hill_act", "hill_rep", "gate_drive", "closed_form", "truth_table",
    "row_formula",
]

HIGH = "high"
LOW = "low"


class GateKind(str, Enum):
    AND = "AND"
    OR = "OR"
    NOT = "NOT"

    @property
    def arity(self) -> int:
        return 1 if self is GateKind.NOT else 2

    def output_level(self, input_levels: tuple[str, ...]) -> str:
        if self is GateKind.AND:
            return HIGH if all(v == HIGH for v in input_levels) else LOW
        if self is GateKind.OR:
            return HIGH if any(v == HIGH for v in input_levels) else LOW
        return HIGH if input_levels[0] == LOW else LOW


@dataclass(frozen=True)
class Thresholds:
    """Activation/deactivation thresholds with a safety margin p.

    The margined ("tilded") thresholds (1+p)*plus and (1-p)*minus are used
    in steady-state inequalities; they must stay inside (0, 1).
    """

    plus: float
    minus: float
    p: float = 0.1

    def __post_init__(self):
        if not 0 < self.minus < self.plus < 1:
            raise ValueError(
                f"need 0 < minus < plus < 1, got minus={self.minus}, plus={self.plus}"
            )
        if self.p <= 0:
            raise ValueError("safety margin p must be > 0")
        if (1 + self.p) * self.plus >= 1:
            raise ValueError("(1+p)*plus must stay below 1")

    @property
    def tilde_plus(self) -> float:
        return (1 + self.p) * self.plus

    @property
    def tilde_minus(self) -> float:
        return (1 - self.p) * self.minus


@dataclass(frozen=True)
class GateParams:
    """Kinetic parameters of a single gate (rescaled model)."""

    kind: GateKind
    n: float
    alpha: float
    hill_k: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "hill_k", tuple(float(k) for k in self.hill_k))
        if self.n <= 0:
            raise ValueError("Hill coefficient n must be > 0")
        if self.alpha <= 0:
            raise ValueError("degradation rate alpha must be > 0")
        if len(self.hill_k) != self.kind.arity:
            raise ValueError(
                f"{self.kind.value} gate needs {self.kind.arity} K value(s), "
                f"got {len(self.hill_k)}"
            )
        if any(not 0 < k <= 1 for k in self.hill_k):
            raise ValueError("each Hill K must lie in (0, 1]")


@dataclass(frozen=True)
class ExtendedTruthRow:
    """One truth-table row with its timing contract."""

    input_levels: tuple[str, ...]
    output_level: str
    delta: float
    lam: float

    def __post_init__(self):
        if self.delta <= 0 or self.lam <= 0:
            raise ValueError("delta and lambda must be > 0")
        if self.output_level not in (HIGH, LOW):
            raise ValueError("output_level must be 'high' or 'low'")
        if any(v not in (HIGH, LOW) for v in self.input_levels):
            raise ValueError("input levels must be 'high' or 'low'")


def hill_act(x: float, K: float, n: float):
    """Activating Hill term x^n / (K^n + x^n)."""
    if K <= 0 or n <= 0:
        raise ValueError("need K > 0 and n > 0")
    r = (x / K) ** n
    return r / (1.0 + r)


def hill_rep(x: float, K: float, n: float):
    """Repressing Hill term 1 / (1 + (x/K)^n)."""
    if K <= 0 or n <= 0:
        raise ValueError("need K > 0 and n > 0")
    return 1.0 / (1.0 + (x / K) ** n)


def gate_drive(g: GateParams, inputs) -> float:
    """Dimensionless production term in [0, 1] for the given input levels.

    AND: product of activating Hill terms; OR: shared-saturation form
    (u+v)/(1+u+v); NOT: repressing Hill term.
    """
    inputs = tuple(inputs)
    if len(inputs) != g.kind.arity:
        raise ValueError(
            f"{g.kind.value} gate takes {g.kind.arity} input(s), got {len(inputs)}"
        )
    if g.kind is GateKind.AND:
        return hill_act(inputs[0], g.hill_k[0], g.n) * hill_act(
            inputs[1], g.hill_k[1], g.n
        )
    if g.kind is GateKind.OR:
        u = (inputs[0] / g.hill_k[0]) ** g.n
        v = (inputs[1] / g.hill_k[1]) ** g.n
        return (u + v) / (1.0 + u + v)
    return hill_rep(inputs[0], g.hill_k[0], g.n)


def closed_form(K: float, alpha: float, x0: float, t):
    """Exact solution x(t) = K + (x0 - K) e^(-alpha t) of dx/dt = alpha(K - x).

    ``t`` may be a scalar or an array.
    """
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    return K + (x0 - K) * np.exp(-alpha * np.asarray(t, dtype=float))


def _level_atom(var: str, level: str, th: Thresholds) -> Atom:
    if level == HIGH:
        return Atom(var, ">=", th.plus)
    return Atom(var, "<=", th.minus)


def row_formula(
    row: ExtendedTruthRow,
    input_vars: tuple[str, ...],
    output_var: str,
    thresholds: dict[str, Thresholds],
) -> Formula:
    """STL implication encoding one truth-table row.

    Antecedent: inputs hold their levels for lambda+delta; consequent: the
    output reaches its level within delta and keeps it for lambda.
    """
    atoms = [
        _level_atom(v, lvl, thresholds[v])
        for v, lvl in zip(input_vars, row.input_levels)
    ]
    ante: Formula = atoms[0]
    for a in atoms[1:]:
        ante = And(ante, a)
    ante = Globally(0.0, row.lam + row.delta, ante)
    cons = Eventually(
        0.0,
        row.delta,
        Globally(0.0, row.lam, _level_atom(output_var, row.output_level, thresholds[output_var])),
    )
    return Implies(ante, cons)


def truth_table(
    kind: GateKind,
    input_vars,
    output_var: str,
    delta: float,
    lam: float,
    thresholds: dict[str, Thresholds],
) -> list[tuple[ExtendedTruthRow, Formula]]:
    """Extended truth table: all input combinations with their STL rows."""
    kind = GateKind(kind)
    input_vars = tuple(input_vars)
    if len(input_vars) != kind.arity:
        raise ValueError(f"{kind.value} gate takes {kind.arity} input(s)")
    combos = (
        [(LOW,), (HIGH,)]
        if kind.arity == 1
        else [(LOW, LOW), (LOW, HIGH), (HIGH, LOW), (HIGH, HIGH)]
    )
    rows = []
    for levels in combos:
        row = ExtendedTruthRow(levels, kind.output_level(levels), delta, lam)
        rows.append((row, row_formula(row, input_vars, output_var, thresholds)))
    return rows
