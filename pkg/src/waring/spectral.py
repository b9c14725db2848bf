"""Spectra of the power-residue Cayley digraphs ``Cay(F_q, R_k^*)``.

Every additive character ``x -> exp(2 pi i tr(a x) / p)`` is an eigenvector
of the adjacency matrix, with eigenvalue the character sum over ``R_k^*``.
The sum only depends on the coset of ``a``, so ``d = gcd(k, q-1)`` numbers
(plus the trivial eigenvalue ``|R_k^*|``) describe the whole spectrum.
"""

from dataclasses import dataclass
from math import gcd, isqrt, sqrt

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._ntheory import prime_power
from .errors import CapExceeded, NonPrimePowerQ
from .field import size_cap
from .gamma import gamma, power_residues

BRUTEFORCE_CAP = 512


@dataclass
class SpectrumReport:
    k: int
    q: int
    d: int
    lambdas: np.ndarray  # lambdas[i] belongs to the coset of g^i
    trivial_eigenvalue: int
    n_star: float
    sum_sq: float

    @property
    def bound(self):
        r = self.trivial_eigenvalue
        return self.q * sqrt(self.q - r) / r

    @property
    def max_abs(self):
        return float(np.abs(self.lambdas).max())

    def eigenvalue_multiset(self):
        """Full spectrum: trivial once, each coset value ``|R_k^*|`` times."""
        return np.concatenate([[complex(self.trivial_eigenvalue)], np.repeat(self.lambdas, self.trivial_eigenvalue)])

    def to_json(self):
        return {
            "k": self.k,
            "q": self.q,
            "d": self.d,
            "trivial": self.trivial_eigenvalue,
            "lambdas": [{"re": float(z.real), "im": float(z.imag), "abs": float(abs(z))} for z in self.lambdas],
            "sum_sq": float(self.sum_sq),
            "n_star": float(self.n_star),
            "bound": float(self.bound),
        }


def _roots_of_unity(ctx, traces):
    return np.exp(2j * np.pi * traces / ctx.p)


def character_sum(ctx, k, a):
    """Eigenvalue attached to the character of ``a``: the sum over ``R_k^*``."""
    d = gcd(k, ctx.q - 1)
    stars = ctx.antilog_table[::d]
    if a == 0:
        return complex(len(stars))
    return complex(_roots_of_unity(ctx, ctx.trace_vec(ctx.mul_vec(stars, a))).sum())


def spectrum(ctx, k):
    q = ctx.q
    d = gcd(k, q - 1)
    r = (q - 1) // d
    # column i of the reshaped trace table runs over the coset g^i R_k^*
    chars = _roots_of_unity(ctx, ctx.trace_vec(ctx.antilog_table))
    lambdas = chars.reshape(r, d).sum(axis=0)
    top = float(np.abs(lambdas).max())
    return SpectrumReport(
        k=k,
        q=q,
        d=d,
        lambdas=lambdas,
        trivial_eigenvalue=r,
        n_star=q / r * top,
        sum_sq=float((np.abs(lambdas) ** 2).sum()),
    )


def adjacency_matrix(ctx, k):
    """0/1 matrix with ``A[u, v] = 1`` iff ``v - u`` is a nonzero k-th power."""
    star = power_residues(ctx, k).members.copy()
    star[0] = False
    u, v = np.meshgrid(np.arange(ctx.q), np.arange(ctx.q), indexing="ij")
    return star[ctx.sub_vec(v, u)].astype(np.int64)


@dataclass
class BruteSpectrum:
    """Eigenvalues of the dense adjacency matrix, for cross-checking."""

    k: int
    q: int
    eigenvalues: np.ndarray
    out_degree: int

    def max_mismatch(self, report):
        """Largest distance in an optimal matching against ``report``'s multiset."""
        want = report.eigenvalue_multiset()
        if len(want) != len(self.eigenvalues):
            return float("inf")
        cost = np.abs(want[:, None] - self.eigenvalues[None, :])
        rows, cols = linear_sum_assignment(cost)
        return float(cost[rows, cols].max())

    def matches(self, report, tol=1e-6):
        return self.max_mismatch(report) <= tol


def spectrum_bruteforce(ctx, k, cap=BRUTEFORCE_CAP):
    if ctx.q > cap:
        raise CapExceeded(f"dense eigen-solve is capped at q <= {cap}")
    A = adjacency_matrix(ctx, k)
    eig = np.linalg.eigvals(A.astype(float))
    return BruteSpectrum(k, ctx.q, eig, int(A[0].sum()))


# --- edge and walk guarantees ------------------------------------------------


@dataclass
class GapCheck:
    bound: float
    size_x: int
    size_y: int
    guaranteed: bool
    witness: tuple = None


def find_edge(ctx, k, X, Y):
    """Some ``(x, y)`` with ``y - x`` a nonzero k-th power, or ``None``."""
    star = power_residues(ctx, k).members.copy()
    star[0] = False
    X = np.asarray(list(X), dtype=np.int64)
    Y = np.asarray(list(Y), dtype=np.int64)
    if not len(X) or not len(Y):
        return None
    hit = star[ctx.sub_vec(Y[None, :], X[:, None])]
    idx = np.argwhere(hit)
    if not len(idx):
        return None
    i, j = idx[0]
    return int(X[i]), int(Y[j])


def edge_check(ctx, k, X, Y, report=None, search=True):
    """Compare ``sqrt(|X||Y|)`` with ``n_star`` and optionally look for an edge."""
    report = report or spectrum(ctx, k)
    guaranteed = sqrt(len(X) * len(Y)) > report.n_star
    witness = find_edge(ctx, k, X, Y) if search else None
    return GapCheck(report.n_star, len(X), len(Y), guaranteed, witness)


def walk_bound(report, length):
    """``(q / |S|^L) * max|lambda|^L``: the gap quantity for walks of length L."""
    r = report.trivial_eigenvalue
    return report.q / r**length * report.max_abs**length


def walk_check(ctx, k, X, Y, length=2, report=None, cap=BRUTEFORCE_CAP):
    """Look for a directed walk of ``length`` steps from ``X`` to ``Y``."""
    if ctx.q > cap:
        raise CapExceeded(f"walk search is capped at q <= {cap}")
    report = report or spectrum(ctx, k)
    A = adjacency_matrix(ctx, k)
    Al = np.linalg.matrix_power(A, length)
    X = list(X)
    Y = list(Y)
    sub = Al[np.ix_(X, Y)] if X and Y else np.zeros((0, 0))
    idx = np.argwhere(sub > 0)
    witness = (X[idx[0][0]], Y[idx[0][1]]) if len(idx) else None
    bound = walk_bound(report, length)
    return GapCheck(bound, len(X), len(Y), sqrt(len(X) * len(Y)) > bound, witness)


def _check_guarantee(k, q, m):
    try:
        prime_power(q)
    except NonPrimePowerQ:
        return
    if q > size_cap():
        return
    res = gamma(k, q)
    if not (res.coverable and res.gamma <= m):
        raise AssertionError(f"gamma({k},{q}) = {res.outcome} exceeds the guaranteed {m}")


def two_power_guarantee(k, q, confirm=True):
    """Whether ``q > k^4``, which forces every element to be a sum of two k-th powers.

    With ``confirm`` the claim is checked against the gamma engine when
    ``q`` is a prime power within the size cap.
    """
    ok = q > k**4
    if ok and confirm:
        _check_guarantee(k, q, 2)
    return ok


def three_power_guarantee(k, q, confirm=True):
    """Whether ``q > k^3``, which forces three k-th powers to suffice."""
    ok = q > k**3
    if ok and confirm:
        _check_guarantee(k, q, 3)
    return ok


# --- difference sets ---------------------------------------------------------


def sarkozy_threshold(k, q):
    """Size above which a subset of F_q must contain a k-th power difference."""
    return q * k / sqrt(q - 1)


def sarkozy_min_size(k, q):
    """Smallest integer size strictly above :func:`sarkozy_threshold`."""
    # q k / sqrt(q-1) < n  <=>  q^2 k^2 < n^2 (q-1); checked exactly
    n = isqrt(q * q * k * k // (q - 1))
    while n * n * (q - 1) <= q * q * k * k:
        n += 1
    return n


def sarkozy_find_pair(ctx, k, E):
    """Distinct ``(x, y)`` in ``E`` with ``x - y`` a k-th power, or ``None``."""
    pair = find_edge(ctx, k, E, E)
    if pair is None:
        return None
    y, x = pair  # x - y is a nonzero k-th power
    return x, y


# --- the two polynomial inequalities ------------------------------------------


def quartic_bound_value(x, y):
    """``(y-1)^4 - x^4 y^3 + (y-1) y^2 x^3``; positive whenever ``y > x^4``."""
    return (y - 1) ** 4 - x**4 * y**3 + (y - 1) * y**2 * x**3


def cubic_bound_value(x, y):
    """``(y-1)^3 - x^2 y (x y - y + 1)``; positive whenever ``y > x^3``."""
    return (y - 1) ** 3 - x**2 * y * (x * y - y + 1)


def general_bound_holds(m, x, y):
    """Exact test of ``(y-1)^m > y x^((m+1)/2) (xy-y+1)^((m-1)/2)``.

    Both sides are positive for ``x, y >= 2``, so the comparison is made on
    squares to stay in integers.
    """
    return (y - 1) ** (2 * m) > y**2 * x ** (m + 1) * (x * y - y + 1) ** (m - 1)


def _first_y_above(x, m):
    """Least integer ``y`` with ``y^(m-1) > x^(2m)``."""
    target = x ** (2 * m)
    lo = 1
    while lo ** (m - 1) <= target:
        lo *= 2
    hi, lo = lo, lo // 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if mid ** (m - 1) > target:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class LemmaReport:
    checked: dict
    violations: dict
    exploration: dict

    @property
    def ok(self):
        return not any(self.violations.values())


def verify_appendix_lemmas(x_max=10, y_window=200, probe_ms=()):
    """Evaluate both inequalities on ``2 <= x <= x_max`` and ``y_window`` values above each threshold.

    ``probe_ms`` additionally evaluates the general-``m`` form on the same
    grid; those results are reported under ``exploration`` and never count
    as violations.
    """
    checked = {"quartic": 0, "cubic": 0}
    violations = {"quartic": [], "cubic": []}
    for x in range(2, x_max + 1):
        for y in range(x**4 + 1, x**4 + 1 + y_window):
            checked["quartic"] += 1
            if quartic_bound_value(x, y) <= 0:
                violations["quartic"].append((x, y))
        for y in range(x**3 + 1, x**3 + 1 + y_window):
            checked["cubic"] += 1
            if cubic_bound_value(x, y) <= 0:
                violations["cubic"].append((x, y))
    exploration = {}
    for m in probe_ms:
        if m < 2:
            raise ValueError("the general form needs m >= 2")
        fails = []
        for x in range(2, x_max + 1):
            y0 = _first_y_above(x, m)
            fails.extend((x, y) for y in range(y0, y0 + y_window) if not general_bound_holds(m, x, y))
        exploration[m] = {"checked": (x_max - 1) * y_window, "failures": fails}
    return LemmaReport(checked, violations, exploration)
