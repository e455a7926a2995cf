"""Shared random generators for monitor differential tests."""

import numpy as np
import pytest

from gatesynth.formulas import (
    And, Atom, Eventually, Globally, Implies, Not, Or, TrueFormula, Until,
)
from gatesynth.signals import Signal

VARS = ("x", "y")


def random_signal(rng, n=60, h=0.1):
    """Random-walk trace on a uniform grid, values roughly in [0, 1]."""
    times = np.arange(n) * h
    values = {}
    for v in VARS:
        steps = rng.normal(0.0, 0.15, size=n)
        w = np.clip(np.cumsum(steps) + rng.uniform(0.2, 0.8), -0.2, 1.2)
        values[v] = w
    return Signal(times=times, values=values)


def random_formula(rng, depth=3, max_hi=2.0):
    """Random STL formula whose horizon stays within depth * max_hi."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.1:
            return TrueFormula()
        return Atom(
            rng.choice(VARS),
            rng.choice([">=", "<="]),
            float(rng.uniform(0.0, 1.0)),
        )
    kind = rng.choice(["not", "and", "or", "implies", "F", "G", "U"])
    if kind == "not":
        return Not(random_formula(rng, depth - 1, max_hi))
    if kind in ("and", "or", "implies"):
        a = random_formula(rng, depth - 1, max_hi)
        b = random_formula(rng, depth - 1, max_hi)
        return {"and": And, "or": Or, "implies": Implies}[kind](a, b)
    lo = float(rng.uniform(0.0, max_hi / 2))
    hi = lo + float(rng.uniform(0.1, max_hi / 2))
    if kind == "U":
        return Until(lo, hi, random_formula(rng, depth - 1, max_hi),
                     random_formula(rng, depth - 1, max_hi))
    op = Eventually if kind == "F" else Globally
    return op(lo, hi, random_formula(rng, depth - 1, max_hi))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
