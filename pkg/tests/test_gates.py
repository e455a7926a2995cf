import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gatesynth.formulas import parse
from gatesynth.gates import (
    HIGH, LOW, ExtendedTruthRow, GateKind, GateParams, Thresholds,
    closed_form, gate_drive, hill_act, hill_rep, row_formula, truth_table,
)

TH = Thresholds(plus=0.75, minus=0.25, p=0.1)


class TestHill:
    def test_half_saturation(self):
        assert hill_act(0.4, 0.4, 3) == pytest.approx(0.5)
        assert hill_rep(0.4, 0.4, 3) == pytest.approx(0.5)

    def test_zero_input(self):
        assert hill_act(0.0, 0.4, 3) == 0.0
        assert hill_rep(0.0, 0.4, 3) == 1.0

    def test_values(self):
        assert hill_act(0.75, 0.41, 4) == pytest.approx(0.918, abs=5e-4)
        assert hill_rep(0.75, 0.45, 3) == pytest.approx(0.178, abs=5e-4)

    def test_complementarity(self):
        for x in np.linspace(0.01, 1.0, 25):
            total = hill_act(x, 0.37, 2.5) + hill_rep(x, 0.37, 2.5)
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_monotone(self):
        xs = np.linspace(0, 1, 40)
        act = [hill_act(x, 0.4, 4) for x in xs]
        rep = [hill_rep(x, 0.4, 4) for x in xs]
        assert all(a < b for a, b in zip(act, act[1:]))
        assert all(a > b for a, b in zip(rep, rep[1:]))

    def test_bad_params(self):
        with pytest.raises(ValueError):
            hill_act(0.5, 0.0, 2)
        with pytest.raises(ValueError):
            hill_rep(0.5, 0.4, -1)

    @given(
        x=st.floats(0.0, 1.0),
        K=st.floats(0.05, 1.0),
        n=st.floats(0.5, 8.0),
    )
    def test_complement_identity(self, x, K, n):
        assert hill_act(x, K, n) + hill_rep(x, K, n) == pytest.approx(1.0, abs=1e-12)

    @given(
        K=st.floats(0.0, 1.0),
        alpha=st.floats(0.05, 5.0),
        x0=st.floats(0.0, 1.0),
        t=st.floats(0.0, 50.0),
    )
    def test_closed_form_stays_between_x0_and_K(self, K, alpha, x0, t):
        x = float(closed_form(K, alpha, x0, t))
        lo, hi = min(x0, K), max(x0, K)
        assert lo - 1e-12 <= x <= hi + 1e-12


class TestGateDrive:
    def test_and_at_half_saturation(self):
        g = GateParams(GateKind.AND, n=4, alpha=1.0, hill_k=(0.3, 0.6))
        assert gate_drive(g, (0.3, 0.6)) == pytest.approx(0.25)

    def test_or_zero(self):
        g = GateParams(GateKind.OR, n=4, alpha=1.0, hill_k=(0.4, 0.4))
        assert gate_drive(g, (0.0, 0.0)) == 0.0

    def test_not_zero(self):
        g = GateParams(GateKind.NOT, n=3, alpha=1.0, hill_k=(0.4,))
        assert gate_drive(g, (0.0,)) == 1.0

    def test_in_unit_interval_and_monotone(self):
        gand = GateParams(GateKind.AND, n=4, alpha=1.0, hill_k=(0.4, 0.4))
        gor = GateParams(GateKind.OR, n=4, alpha=1.0, hill_k=(0.4, 0.4))
        gnot = GateParams(GateKind.NOT, n=3, alpha=1.0, hill_k=(0.4,))
        prev_and = prev_or = -1.0
        prev_not = 2.0
        for x in np.linspace(0, 1, 30):
            a = gate_drive(gand, (x, x))
            o = gate_drive(gor, (x, x))
            r = gate_drive(gnot, (x,))
            assert 0 <= a <= 1 and 0 <= o <= 1 and 0 <= r <= 1
            assert a >= prev_and and o >= prev_or and r <= prev_not
            prev_and, prev_or, prev_not = a, o, r

    def test_arity_mismatch(self):
        g = GateParams(GateKind.AND, n=4, alpha=1.0, hill_k=(0.4, 0.4))
        with pytest.raises(ValueError):
            gate_drive(g, (0.5,))


class TestClosedForm:
    def test_half_life(self):
        assert closed_form(1.0, math.log(2), 0.0, 1.0) == pytest.approx(0.5)

    def test_initial_condition(self):
        assert closed_form(0.3, 2.0, 0.9, 0.0) == pytest.approx(0.9)

    def test_crossing_value(self):
        assert closed_form(0.918, 0.9222, 0.0, 4.0) == pytest.approx(0.895, abs=5e-4)

    def test_vectorized(self):
        t = np.linspace(0, 10, 11)
        x = closed_form(0.8, 0.5, 0.1, t)
        assert x.shape == t.shape
        assert np.all(np.diff(x) > 0)  # monotone toward K


class TestTruthTable:
    def test_and_rows(self):
        th = {"u1": TH, "u2": TH, "x": TH}
        rows = truth_table(GateKind.AND, ("u1", "u2"), "x", 4.0, 12.0, th)
        assert len(rows) == 4
        levels = {r.input_levels: r.output_level for r, _ in rows}
        assert levels[(HIGH, HIGH)] == HIGH
        assert levels[(LOW, LOW)] == LOW
        assert levels[(LOW, HIGH)] == LOW

    def test_not_rows(self):
        th = {"u": TH, "x": TH}
        rows = truth_table(GateKind.NOT, ("u",), "x", 4.0, 12.0, th)
        assert len(rows) == 2
        levels = {r.input_levels: r.output_level for r, _ in rows}
        assert levels[(HIGH,)] == LOW and levels[(LOW,)] == HIGH

    def test_or_rows(self):
        th = {"u1": TH, "u2": TH, "x": TH}
        rows = truth_table(GateKind.OR, ("u1", "u2"), "x", 4.0, 12.0, th)
        levels = {r.input_levels: r.output_level for r, _ in rows}
        assert levels[(LOW, HIGH)] == HIGH and levels[(LOW, LOW)] == LOW

    def test_all_high_formula_round_trips(self):
        th = {"xA": TH, "xB": TH, "xC": TH}
        rows = truth_table(GateKind.AND, ("xA", "xB"), "xC", 4.0, 12.0, th)
        row, formula = [rf for rf in rows if rf[0].input_levels == (HIGH, HIGH)][0]
        text = str(formula)
        assert parse(text) == formula
        assert "G[0,16]" in text and "F[0,4]" in text and "G[0,12]" in text
        assert "xC >= 0.75" in text

    def test_low_row_uses_deactivation_threshold(self):
        th = {"xA": TH, "xB": TH, "xC": TH}
        rows = truth_table(GateKind.AND, ("xA", "xB"), "xC", 4.0, 12.0, th)
        _, formula = [rf for rf in rows if rf[0].input_levels == (LOW, LOW)][0]
        assert "xA <= 0.25" in str(formula) and "xC <= 0.25" in str(formula)


class TestValidation:
    def test_thresholds(self):
        with pytest.raises(ValueError):
            Thresholds(plus=0.3, minus=0.5)
        with pytest.raises(ValueError):
            Thresholds(plus=0.95, minus=0.2, p=0.1)  # (1+p) plus >= 1
        with pytest.raises(ValueError):
            Thresholds(plus=0.75, minus=0.25, p=0.0)

    def test_tilded(self):
        assert TH.tilde_plus == pytest.approx(0.825)
        assert TH.tilde_minus == pytest.approx(0.225)

    def test_gate_params(self):
        with pytest.raises(ValueError):
            GateParams(GateKind.AND, n=4, alpha=1.0, hill_k=(0.4,))
        with pytest.raises(ValueError):
            GateParams(GateKind.NOT, n=0, alpha=1.0, hill_k=(0.4,))
        with pytest.raises(ValueError):
            GateParams(GateKind.NOT, n=2, alpha=1.0, hill_k=(1.4,))

    def test_row_validation(self):
        with pytest.raises(ValueError):
            ExtendedTruthRow((HIGH,), "mid", 4.0, 12.0)
        with pytest.raises(ValueError):
            ExtendedTruthRow((HIGH,), LOW, -1.0, 12.0)
