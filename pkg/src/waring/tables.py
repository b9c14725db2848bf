"""Reference tables shipped with the package, and the row guards built on them."""

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ._ntheory import prime_power


@lru_cache(maxsize=1)
def reference_tables():
    text = resources.files("waring").joinpath("data/reference_tables.json").read_text()
    return json.loads(text)


def uncoverable_reference(k):
    """Expected uncoverable fields for ``k``, or ``None`` when ``k`` is not tabulated."""
    rows = reference_tables()["uncoverable"]["rows"]
    return rows.get(str(k))


def classification_reference(k):
    """``{gamma: [q, ...]}`` for ``k``, or ``None``."""
    for key in ("classification_small_k", "classification_large_k"):
        row = reference_tables()[key]["rows"].get(str(k))
        if row is not None:
            return {int(g): qs for g, qs in row.items()}
    return None


def large_gamma_reference():
    return [tuple(r) for r in reference_tables()["large_gamma"]["rows"]]


def gamma_max_reference(k):
    return reference_tables()["gamma_max"]["rows"].get(str(k), k)


def matrix_rows(k):
    return [r for r in reference_tables()["matrix_rows"]["rows"] if r["k"] == k]


def ring_rows(k):
    return [r for r in reference_tables()["ring_rows"]["rows"] if r["k"] == k]


def matrix_row_excludes(row, q):
    if q in row["excluded"]:
        return True
    p, _ = prime_power(q)
    return p in row["excluded_prime_powers_of"]


@dataclass(frozen=True)
class RowGuard:
    """A table row that applies: ``bound`` witnesses always suffice."""

    k: int
    excluded: tuple
    bound: int


def matrix_row_bound(k, q):
    """Tightest matrix-table row admitting ``q``, or ``None``."""
    fits = [r for r in matrix_rows(k) if not matrix_row_excludes(r, q)]
    if not fits:
        return None
    best = min(fits, key=lambda r: r["m"])
    return RowGuard(k, tuple(best["excluded"]), best["m"])


def ring_row_bound(k, order):
    """Tightest ring-table row whose excluded values all fail to divide ``order``."""
    fits = [r for r in ring_rows(k) if all(order % q for q in r["excluded"])]
    if not fits:
        return None
    best = min(fits, key=lambda r: r["n"])
    return RowGuard(k, tuple(best["excluded"]), best["n"])
