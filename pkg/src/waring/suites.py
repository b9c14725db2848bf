"""Regression suites comparing the gamma engine with the shipped reference tables."""

from dataclasses import dataclass, field

from ._ntheory import prime_powers_upto
from .gamma import gamma, gamma_max, uncoverable_fields
from .tables import (
    classification_reference,
    gamma_max_reference,
    large_gamma_reference,
    uncoverable_reference,
)


@dataclass
class SuiteResult:
    k: int
    passed: bool
    diff: dict = field(default_factory=dict)

    def to_dict(self):
        return {"k": self.k, "pass": self.passed, "diff": self.diff}


def _set_diff(expected, got):
    expected, got = set(expected), set(got)
    return {"missing": sorted(expected - got), "unexpected": sorted(got - expected)}


def check_uncoverable(k):
    expected = uncoverable_reference(k) or []
    got = uncoverable_fields(k)
    return SuiteResult(k, sorted(got) == sorted(expected), {} if sorted(got) == sorted(expected) else _set_diff(expected, got))


def classify(k, q_max, levels):
    """``{gamma: [q, ...]}`` for the requested gamma levels over prime powers up to ``q_max``."""
    out = {g: [] for g in levels}
    for q in prime_powers_upto(q_max):
        res = gamma(k, q)
        if res.coverable and res.gamma in out:
            out[res.gamma].append(q)
    return out


def check_classification(k):
    """All q with gamma in 3..6 (q <= k^4 suffices since larger fields need two powers)."""
    ref = classification_reference(k)
    if ref is None:
        return SuiteResult(k, False, {"error": f"no reference row for k={k}"})
    if k >= 20:
        # past k^3 three powers suffice; the gamma=3 list is only tabulated to (k-1)^3
        got = classify(k, k**3, range(3, 7))
        got[3] = [q for q in got[3] if q <= (k - 1) ** 3]
    else:
        got = classify(k, k**4, range(3, 7))
    diffs = {g: _set_diff(ref.get(g, []), got[g]) for g in got if sorted(ref.get(g, [])) != got[g]}
    return SuiteResult(k, not diffs, diffs)


def check_gamma_max(k):
    expected = gamma_max_reference(k)
    got = gamma_max(k)
    return SuiteResult(k, got == expected, {} if got == expected else {"expected": expected, "got": got})


def check_large_gamma(k):
    """Every ``q`` with ``gamma(k, q) >= 7``; such q never exceed ``k^3``."""
    expected = sorted((q, g) for kk, q, g in large_gamma_reference() if kk == k)
    got = []
    for q in prime_powers_upto(k**3):
        res = gamma(k, q)
        if res.coverable and res.gamma >= 7:
            got.append((q, res.gamma))
    ok = got == expected
    diff = {} if ok else {"missing": sorted(set(expected) - set(got)), "unexpected": sorted(set(got) - set(expected))}
    return SuiteResult(k, ok, diff)


SUITES = {
    "uncoverable": (check_uncoverable, 4),
    "classification": (check_classification, 4),
    "classification-large": (check_classification, 20),
    "gamma-max": (check_gamma_max, 1),
    "large-gamma": (check_large_gamma, 4),
}
ALIASES = {
    "table1": "uncoverable",
    "table2": "classification",
    "table3": "classification-large",
    "table5": "gamma-max",
}


def run_suite(name, k_max, k_min=None):
    name = ALIASES.get(name, name)
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES) + sorted(ALIASES)}")
    check, lo = SUITES[name]
    start = lo if k_min is None else max(lo, k_min)
    if name == "gamma-max":
        k_max = min(k_max, 20)
    return name, [check(k) for k in range(start, k_max + 1)]
