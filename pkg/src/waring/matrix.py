"""Sums of k-th powers in matrix rings ``Mat_n(F_q)``.

``F_q[A]`` is isomorphic to ``F_q[x]/(m_A)``, which splits by CRT into
``prod F_q[x]/(p_r^i_r)`` over the factorization of the minimal
polynomial.  Each factor is handled in its residue field by the gamma
engine, lifted to ``p_r^i_r``, and the per-factor witnesses are glued back
together with CRT idempotents.  Every witness is then a polynomial in
``A``.
"""

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .decomposition import Decomposition, MatrixAlgebra, evaluate_poly
from .errors import CapExceeded, CharDividesK, ExcludedFieldSize, ResidueFieldUncoverable, WaringError
from .field import parse_element
from .gamma import represent
from .hensel import lift_power_sum
from .poly import FqPoly, residue_field, residue_image, residue_preimage
from .tables import RowGuard, matrix_row_bound, matrix_row_excludes, matrix_rows

DEFAULT_SEED = 0
EXHAUSTIVE_CAP = 4096


# --- parsing -----------------------------------------------------------------


def parse_matrix(ctx, text):
    """Rows split by ``;``, entries by ``,``; entries are codes or ``g``-polynomials."""
    rows = [r for r in text.replace(" ", "").split(";") if r]
    entries = [[parse_element(ctx, e) for e in r.split(",")] for r in rows]
    n = len(entries)
    if n == 0 or any(len(r) != n for r in entries):
        raise ValueError(f"matrix {text!r} is not square")
    return np.array(entries, dtype=np.int64)


def format_matrix(A):
    return ";".join(",".join(str(int(v)) for v in row) for row in np.asarray(A))


# --- linear algebra over a field ------------------------------------------------


class _Echelon:
    """Incremental row reduction that remembers how each row was formed."""

    def __init__(self, ctx):
        self.ctx = ctx
        self.rows = []  # (pivot, vector, combination), vector[pivot] == 1
        self.count = 0

    def push(self, vec):
        """Add the next vector; return the annihilating combination if dependent."""
        F = self.ctx
        vec = [int(v) for v in vec]
        combo = [0] * self.count + [1]
        for pivot, row, rc in self.rows:
            c = vec[pivot]
            if c:
                vec = [F.sub(a, F.mul(c, b)) for a, b in zip(vec, row)]
                rc = rc + [0] * (len(combo) - len(rc))
                combo = [F.sub(a, F.mul(c, b)) for a, b in zip(combo, rc)]
        self.count += 1
        pivot = next((i for i, v in enumerate(vec) if v), None)
        if pivot is None:
            return combo
        inv = F.inv(vec[pivot])
        self.rows.append((pivot, [F.mul(inv, v) for v in vec], [F.mul(inv, v) for v in combo]))
        return None


def _krylov_annihilator(alg, A, v):
    ctx = alg.ctx
    ech = _Echelon(ctx)
    cur = v
    while True:
        combo = ech.push(cur.ravel())
        if combo is not None:
            return FqPoly(ctx, combo)
        cur = alg.mul(A, cur)


def minimal_polynomial(ctx, A):
    """Monic ``m_A``: LCM of the Krylov annihilators of the standard basis vectors."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    alg = MatrixAlgebra(ctx, n)
    m = FqPoly(ctx, (1,))
    for j in range(n):
        e = np.zeros((n, 1), dtype=np.int64)
        e[j, 0] = 1
        ann = _krylov_annihilator(alg, A, e)
        m = (m * ann // m.gcd(ann)).monic()
    if not alg.eq(evaluate_poly(alg, m.coeffs, A), alg.zero):
        raise AssertionError("minimal polynomial does not annihilate A")
    return m


def first_dependence_poly(ctx, powers):
    """Monic polynomial from the first linear dependence among ``powers`` (vectors over ``ctx``)."""
    ech = _Echelon(ctx)
    for vec in powers:
        combo = ech.push(vec)
        if combo is not None:
            return FqPoly(ctx, combo)
    raise ValueError("sequence ended before a dependence appeared")


# --- factorization -------------------------------------------------------------


def _pth_root(f):
    """``h`` with ``h^p = f`` when ``f`` only has exponents divisible by ``p``."""
    ctx = f.ctx
    p = ctx.p
    root = ctx.q // p  # a -> a^(q/p) inverts Frobenius
    return FqPoly(ctx, [ctx.pow(c, root) for c in f.coeffs[::p]])


def squarefree_decomposition(f):
    """``[(g, e)]`` with ``f = prod g^e`` and each ``g`` squarefree, ``f`` monic."""
    ctx = f.ctx
    one = FqPoly(ctx, (1,))
    if f.degree < 1:
        return []
    df = f.derivative()
    if df.is_zero():
        return [(g, e * ctx.p) for g, e in squarefree_decomposition(_pth_root(f))]
    out = []
    c = f.gcd(df)
    w = f // c
    i = 1
    while w != one:
        y = w.gcd(c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        out += [(g, e * ctx.p) for g, e in squarefree_decomposition(_pth_root(c.monic()))]
    return out


def distinct_degree(f):
    """Split squarefree monic ``f`` into ``[(product of degree-d irreducibles, d)]``."""
    ctx = f.ctx
    x = FqPoly.x(ctx)
    out = []
    h = x % f if f.degree > 0 else x
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(ctx.q, f)
        g = f.gcd(h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def _split_witness(g, d, rng):
    ctx = g.ctx
    a = FqPoly(ctx, [rng.randrange(ctx.q) for _ in range(g.degree)])
    if ctx.p == 2:
        # absolute trace from F_{q^d} down to F_2
        t = a % g
        acc = t
        for _ in range(ctx.s * d - 1):
            t = t.powmod(2, g)
            acc = acc + t
        return acc
    return a.powmod((ctx.q**d - 1) // 2, g) - 1


def equal_degree(g, d, rng):
    """Irreducible factors of ``g``, all of degree ``d``."""
    if g.degree == d:
        return [g.monic()]
    while True:
        h = g.gcd(_split_witness(g, d, rng))
        if 0 < h.degree < g.degree:
            return equal_degree(h, d, rng) + equal_degree(g // h, d, rng)


def factorize(f, seed=DEFAULT_SEED):
    """Irreducible factorization ``[(p, e)]`` of a nonconstant polynomial, sorted."""
    if f.degree < 1:
        raise ValueError("factorize needs a nonconstant polynomial")
    f = f.monic()
    rng = random.Random(seed)
    acc = {}
    for part, e in squarefree_decomposition(f):
        for g, d in distinct_degree(part):
            for h in equal_degree(g, d, rng):
                acc[h.coeffs] = acc.get(h.coeffs, 0) + e
    out = sorted(((FqPoly(f.ctx, cs), e) for cs, e in acc.items()), key=lambda t: (t[0].degree, t[0].coeffs[::-1]))
    check = FqPoly(f.ctx, (1,))
    for g, e in out:
        if not g.is_irreducible():
            raise AssertionError(f"factor {g} is reducible")
        check = check * g**e
    if check != f:
        raise AssertionError("factors do not multiply back to f")
    return out


@dataclass
class MinPolyFactorization:
    min_poly: FqPoly
    factors: list

    def moduli(self):
        return [g**e for g, e in self.factors]


def crt_idempotents(modulus, parts):
    """``e_r`` with ``e_r = 1 mod parts[r]`` and ``0`` modulo the others."""
    out = []
    for part in parts:
        rest = modulus // part
        out.append((rest * rest.inverse_mod(part)) % modulus)
    return out


def crt_combine(modulus, parts, residues):
    acc = FqPoly(modulus.ctx)
    for e, r in zip(crt_idempotents(modulus, parts), residues):
        acc = acc + e * r
    return acc % modulus


# --- quotient-ring decompositions ----------------------------------------------------


def decompose_quotient(ctx, modulus, target, k, seed=DEFAULT_SEED):
    """Witness polynomials ``P_j`` with ``sum P_j^k = target`` modulo ``modulus``.

    ``modulus`` is factored, ``target`` is represented in every residue field
    with the fewest k-th powers and then lifted to the full prime power.
    Per-factor lists are padded with zeros to a common length.
    """
    if k % ctx.p == 0:
        raise CharDividesK(f"characteristic {ctx.p} divides k={k}")
    factors = factorize(modulus, seed)
    parts = []
    lifted = []
    for g, e in factors:
        E = residue_field(ctx, g)
        ws = represent(E, k, residue_image(ctx, g, target))
        if ws is None:
            raise ResidueFieldUncoverable(repr(g), k)
        base = [residue_preimage(ctx, g, w) for w in ws]
        part = g**e
        lifted.append(lift_power_sum(target % part, k, base, g, e))
        parts.append(part)
    width = max(len(ws) for ws in lifted)
    zero = FqPoly(ctx)
    lifted = [ws + [zero] * (width - len(ws)) for ws in lifted]
    polys = [crt_combine(modulus, parts, [ws[j] for ws in lifted]) for j in range(width)]
    # CRT consistency: each glued witness reduces to its per-factor piece
    for j, P in enumerate(polys):
        for part, ws in zip(parts, lifted):
            if (P - ws[j]) % part:
                raise AssertionError("CRT recombination is inconsistent")
    return MinPolyFactorization(modulus, factors), polys


def _resolve_row(k, q, row):
    if row is None:
        return matrix_row_bound(k, q)
    rows = matrix_rows(k)
    chosen = rows[row] if isinstance(row, int) else row
    if matrix_row_excludes(chosen, q):
        raise ExcludedFieldSize(q, chosen)
    return RowGuard(k, tuple(chosen["excluded"]), chosen["m"])


def decompose_matrix(ctx, A, k, row=None, seed=DEFAULT_SEED, exhaustive_fallback=True):
    """Verified witnesses ``B_j = P_j(A)`` with ``A = sum B_j^k``.

    ``row`` picks a matrix-table row (index among the rows for ``k``, or
    the row dict); an excluded ``q`` then raises :class:`ExcludedFieldSize`.
    Without ``row`` the tightest admissible row, if any, bounds the count.
    If some residue field cannot be covered and ``Mat_n(F_q)`` is small, an
    exhaustive search over the whole matrix ring is tried; those witnesses
    need not lie in ``F_q[A]``.
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if k % ctx.p == 0:
        raise CharDividesK(f"characteristic {ctx.p} divides k={k}")
    guard = _resolve_row(k, ctx.q, row)
    alg = MatrixAlgebra(ctx, n)
    m_A = minimal_polynomial(ctx, A)
    try:
        fac, polys = decompose_quotient(ctx, m_A, FqPoly.x(ctx), k, seed)
    except ResidueFieldUncoverable:
        if not exhaustive_fallback or ctx.q ** (n * n) > EXHAUSTIVE_CAP:
            raise
        return exhaustive_matrix_decomposition(ctx, A, k)
    witnesses = [evaluate_poly(alg, P.coeffs, A) for P in polys]
    notes = {
        "min_poly": m_A.to_list(),
        "factors": [[g.to_list(), e] for g, e in fac.factors],
        "method": "crt-hensel",
    }
    if guard is not None:
        notes["row_bound"] = guard.bound
        if len(witnesses) > guard.bound:
            raise AssertionError(f"{len(witnesses)} witnesses exceed the table bound {guard.bound}")
    return Decomposition("matrix", alg, A, k, witnesses, [P.to_list() for P in polys], A, notes)


def all_matrices(ctx, n, cap=EXHAUSTIVE_CAP):
    total = ctx.q ** (n * n)
    if total > cap:
        raise CapExceeded(f"Mat_{n}(F_{ctx.q}) has {total} elements, cap is {cap}")
    digits = np.array(list(itertools.product(range(ctx.q), repeat=n * n)), dtype=np.int64)
    return digits.reshape(total, n, n)


def exhaustive_matrix_decomposition(ctx, A, k, max_terms=3, cap=EXHAUSTIVE_CAP):
    """Fewest k-th powers from all of ``Mat_n(F_q)`` summing to ``A`` (up to ``max_terms``)."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    alg = MatrixAlgebra(ctx, n)
    mats = all_matrices(ctx, n, cap)
    powers = {}
    for M in mats:
        powers.setdefault(alg.pow(M, k).tobytes(), M)
    key = A.tobytes()
    if key in powers:
        found = [powers[key]]
    else:
        found = None
        roots = list(powers.values())
        for size in range(2, max_terms + 1):
            for combo in itertools.combinations_with_replacement(roots, size - 1):
                rest = A
                for M in combo:
                    rest = alg.sub(rest, alg.pow(M, k))
                hit = powers.get(np.asarray(rest, dtype=np.int64).tobytes())
                if hit is not None:
                    found = list(combo) + [hit]
                    break
            if found:
                break
    if found is None:
        raise WaringError(f"no representation with at most {max_terms} {k}-th powers")
    return Decomposition("matrix", alg, A, k, found, notes={"method": "exhaustive"})
