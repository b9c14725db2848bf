"""Hensel lifting over ``F_q[x]`` and over finite commutative rings.

Polynomials in ``x`` are :class:`~waring.poly.FqPoly`; a polynomial in a
second variable ``t`` with coefficients in ``F_q[x]`` is a :class:`TPoly`.
Every lift re-checks its postconditions with exact arithmetic before
returning.
"""

import math
import random
from dataclasses import dataclass
from math import comb

from .errors import (
    BaseNotARepresentation,
    CharDividesK,
    DerivativeNotUnit,
    HypothesisViolated,
    NoRootModJ,
    NotARoot,
    ResidueFieldUncoverable,
)
from .gamma import represent
from .poly import FqPoly, residue_field, residue_image, residue_preimage


@dataclass
class BivariateTail:
    """``sum coeffs[i][j] x^i y^j`` over ``ctx``."""

    ctx: object
    coeffs: list

    def __call__(self, x, y):
        F = self.ctx
        acc = 0
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c:
                    acc = F.add(acc, F.mul(c, F.mul(F.pow(x, i), F.pow(y, j))))
        return acc

    def is_zero(self):
        return not any(any(row) for row in self.coeffs)


def _bivariate_expand(F, p):
    """Coefficients of ``p(x+y)`` as a dict ``{(i, j): c}``."""
    out = {}
    for n, a in enumerate(p.coeffs):
        for j in range(n + 1):
            c = F.mul(a, comb(n, j) % F.p)
            if c:
                key = (n - j, j)
                out[key] = F.add(out.get(key, 0), c)
    return {key: c for key, c in out.items() if c}


def taylor_split(p):
    """``(p, p', tail)`` with ``p(x+y) = p(x) + y p'(x) + y^2 tail(x, y)``."""
    F = p.ctx
    deg = max(p.degree, 0)
    rows = [[0] * max(deg - 1, 1) for _ in range(max(deg - 1, 1))]
    for n, a in enumerate(p.coeffs):
        for j in range(2, n + 1):
            c = F.mul(a, comb(n, j) % F.p)
            if c:
                rows[n - j][j - 2] = F.add(rows[n - j][j - 2], c)
    tail = BivariateTail(F, rows)
    dp = p.derivative()
    # check the identity coefficient by coefficient
    rhs = {}
    for i, c in enumerate(p.coeffs):
        if c:
            rhs[(i, 0)] = c
    for i, c in enumerate(dp.coeffs):
        if c:
            rhs[(i, 1)] = F.add(rhs.get((i, 1), 0), c)
    for i, row in enumerate(rows):
        for j, c in enumerate(row):
            if c:
                rhs[(i, j + 2)] = F.add(rhs.get((i, j + 2), 0), c)
    rhs = {key: c for key, c in rhs.items() if c}
    if rhs != _bivariate_expand(F, p):
        raise AssertionError("Taylor identity failed")
    return p, dp, tail


def f_adic_valuation(g, f):
    """Largest ``v`` with ``f^v | g``; ``math.inf`` for the zero polynomial."""
    if g.is_zero():
        return math.inf
    v = 0
    while True:
        qt, r = divmod(g, f)
        if r:
            return v
        g = qt
        v += 1


def _as_poly(ctx, c):
    if isinstance(c, FqPoly):
        return c
    if isinstance(c, int):
        return FqPoly(ctx, (c,))
    return FqPoly(ctx, c)


class TPoly:
    """Polynomial ``sum a_i t^i`` with coefficients ``a_i`` in ``F_q[x]``."""

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        cs = [_as_poly(ctx, c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs

    @classmethod
    def power_shift(cls, ctx, k, const):
        """``t^k + const``."""
        zero = FqPoly(ctx)
        return cls(ctx, [const] + [zero] * (k - 1) + [FqPoly(ctx, (1,))])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, g, modulus=None):
        acc = FqPoly(self.ctx)
        for a in reversed(self.coeffs):
            acc = acc * g + a
            if modulus is not None:
                acc = acc % modulus
        return acc

    def derivative(self):
        p = self.ctx.p
        return TPoly(self.ctx, [a * (i % p) for i, a in enumerate(self.coeffs)][1:])

    def __repr__(self):
        return "TPoly(" + ", ".join(f"[{a}]" for a in self.coeffs) + ")"


def _inverse_mod(u, modulus):
    g, s, _ = u.xgcd(modulus)
    if g.coeffs != (1,):
        raise DerivativeNotUnit(f"{u} is not invertible modulo {modulus}")
    return s % modulus


def hensel_weak(Q, g, f, n, m):
    """Lift a root of ``Q`` modulo ``f^n`` to one modulo ``f^(n+m)``, ``1 <= m <= n``."""
    if not 1 <= m <= n:
        raise HypothesisViolated(f"need 1 <= m <= n, got m={m}, n={n}")
    fn = f**n
    top = f ** (n + m)
    qg = Q(g, top)
    if qg % fn:
        raise NotARoot(f"Q(g) is not 0 modulo f^{n}")
    dq = Q.derivative()(g, top)
    if not dq % f:
        raise DerivativeNotUnit("Q'(g) vanishes modulo f")
    fm = f**m
    inv = _inverse_mod(dq % fm, fm)
    g2 = (g - qg * inv) % top
    # second route: solve h + t Q'(g) = 0 (mod f^m) for the correction t
    h, rem = divmod(qg, fn)
    assert rem.is_zero()
    t = (-(h * inv)) % fm
    other = (g + fn * t) % top
    if g2 != other:
        raise AssertionError("lifts disagree modulo f^(n+m)")
    if Q(g2, top) or (g2 - g) % fn:
        raise AssertionError("weak lift postcondition failed")
    return g2


def hensel_strong(Q, g, f, n):
    """One lift step allowing ``nu(Q'(g)) = m > 0`` provided ``n > 2m``."""
    top = f ** (n + 1)
    qg = Q(g)
    if qg % f**n:
        raise NotARoot(f"Q(g) is not 0 modulo f^{n}")
    dq = Q.derivative()(g)
    m = f_adic_valuation(dq, f)
    if m == math.inf or n <= 2 * m:
        raise HypothesisViolated(f"need n > 2*nu(Q'(g)), got n={n}, nu={m}")
    # Q(g)/Q'(g) = f^(n-m) * h1 / u with f coprime to u
    h1 = qg // f**n
    u = dq // f**m
    g2 = (g - f ** (n - m) * h1 * _inverse_mod(u % top, top)) % top
    if Q(g2, top):
        raise AssertionError("strong lift: Q(g2) is not 0 modulo f^(n+1)")
    if (g2 - g) % f ** (n - m):
        raise AssertionError("strong lift: g2 differs from g modulo f^(n-m)")
    if f_adic_valuation(Q.derivative()(g2), f) != m:
        raise AssertionError("strong lift: valuation of Q' changed")
    return g2


def lift_root(Q, g, f, n_from, n_to):
    """Repeated strong steps from a root mod ``f^n_from`` to one mod ``f^n_to``."""
    for n in range(n_from, n_to):
        g = hensel_strong(Q, g, f, n)
    return g % f**n_to


# --- radical lifting in finite commutative rings ----------------------------


def ring_poly_eval(ring, coeffs, x):
    acc = ring.zero
    for c in reversed(coeffs):
        acc = ring.add(ring.mul(acc, x), c)
    return acc


def ring_poly_derivative(ring, coeffs):
    return [ring.mul(ring.from_int(i), c) for i, c in enumerate(coeffs)][1:]


def radical_hensel(ring, p, a0):
    """Exact root ``r`` of ``p`` with ``r = a0`` modulo the Jacobson radical.

    ``p`` lists ring elements, constant term first.  Newton steps
    ``r -> r - p(r)/p'(r)`` double the power of ``J`` that kills ``p(r)``,
    so they stop within the nilpotency degree of ``J``.
    """
    dp = ring_poly_derivative(ring, p)
    if not ring.in_radical(ring_poly_eval(ring, p, a0)):
        raise NoRootModJ(f"{a0} is not a root of the polynomial modulo J")
    if not ring.is_unit(ring_poly_eval(ring, dp, a0)):
        raise DerivativeNotUnit(f"p'({a0}) is not a unit")
    r = a0
    limit = ring.nilpotency
    for _ in range(limit + 1):
        val = ring_poly_eval(ring, p, r)
        if ring.eq(val, ring.zero):
            break
        r = ring.sub(r, ring.mul(val, ring.inv(ring_poly_eval(ring, dp, r))))
    else:
        raise AssertionError("Newton iteration did not terminate within the nilpotency degree")
    if not ring.in_radical(ring.sub(r, a0)):
        raise AssertionError("lifted root left the residue class of a0")
    return r


# --- lifting sums of k-th powers from F_q[x]/(f) to F_q[x]/(f^i) -------------


def _minus_one_witnesses(ctx, f, k):
    """Polynomials whose k-th powers sum to -1 modulo ``f``."""
    E = residue_field(ctx, f)
    ws = represent(E, k, E.neg(1))
    if ws is None:
        raise ResidueFieldUncoverable(repr(f), k)
    return [residue_preimage(ctx, f, w) for w in ws]


def minus_one_is_power(ctx, f, k):
    E = residue_field(ctx, f)
    return len(represent(E, k, E.neg(1)) or ()) == 1


def lift_power_sum(target, k, base_witnesses, f, i):
    """Witnesses modulo ``f^i`` whose k-th powers sum to ``target``.

    ``base_witnesses`` must represent ``target`` modulo ``f``.  Witnesses
    vanishing modulo ``f`` are dropped; if nothing is left, the sum is
    restarted from ``1 + (-1)`` (one more witness when ``-1`` is not itself
    a k-th power).  The last surviving witness is then lifted as a simple
    root of ``t^k + (others) - target``.  The result has at least
    ``len(base_witnesses)`` entries, padded with zeros.
    """
    ctx = target.ctx
    if k % ctx.p == 0:
        raise CharDividesK(f"characteristic {ctx.p} divides k={k}")
    base = [w if isinstance(w, FqPoly) else FqPoly(ctx, w) for w in base_witnesses]
    total = FqPoly(ctx)
    for w in base:
        total = total + w.powmod(k, f)
    if (total - target) % f:
        raise BaseNotARepresentation("base witnesses do not sum to the target modulo f")
    m = len(base)
    if i <= 1:
        return base
    top = f**i
    live = [w % f for w in base if w % f]
    if not live:
        if k % 2 == 1:
            live = [FqPoly(ctx, (1,)), FqPoly(ctx, (ctx.neg(1),))]
        else:
            live = [FqPoly(ctx, (1,))] + _minus_one_witnesses(ctx, f, k)
        live = [w for w in live if w % f]
        # an all-zero base can only come with target = 0 mod f
        width = max(m, 2) if len(live) == 2 else m + 1
    else:
        width = m
    *rest, last = live
    const = FqPoly(ctx)
    for w in rest:
        const = const + w.powmod(k, top)
    Q = TPoly.power_shift(ctx, k, (const - target) % top)
    lifted = lift_root(Q, last, f, 1, i)
    out = rest + [lifted]
    out = [w % top for w in out]
    out += [FqPoly(ctx)] * (width - len(out))
    check = FqPoly(ctx)
    for w in out:
        check = check + w.powmod(k, top)
    if (check - target) % top:
        raise AssertionError("lifted witnesses do not verify")
    return out


# --- random instances ---------------------------------------------------------


def random_irreducible(ctx, degree, rng):
    while True:
        cs = [rng.randrange(ctx.q) for _ in range(degree)] + [1]
        f = FqPoly(ctx, cs)
        if f.is_irreducible():
            return f


def random_poly(ctx, degree, rng):
    return FqPoly(ctx, [rng.randrange(ctx.q) for _ in range(degree + 1)])


@dataclass
class HenselInstance:
    kind: str
    Q: TPoly
    g: FqPoly
    f: FqPoly
    n: int
    m: int


def random_hensel_instance(ctx, rng=None, kind="weak", max_deg_f=3, max_n=6):
    """A seeded random instance satisfying the hypotheses of ``kind``.

    Weak instances get a random ``Q`` with a constant term fixed so that a
    random ``g`` is a root modulo ``f^n``.  Strong instances are built as
    ``(t-g)^2 S(t) + f^m u (t-g) + f^n c`` so that ``nu(Q'(g)) = m`` exactly.
    """
    rng = rng or random.Random(0)
    f = random_irreducible(ctx, rng.randint(1, max_deg_f), rng)
    if kind == "weak":
        while True:
            n = rng.randint(1, max_n)
            m = rng.randint(1, n)
            span = f.degree * (n + m)
            g = random_poly(ctx, span - 1, rng)
            coeffs = [random_poly(ctx, span - 1, rng) for _ in range(rng.randint(2, 4))]
            coeffs.append(FqPoly(ctx, (rng.randrange(1, ctx.q),)))
            Q = TPoly(ctx, coeffs)
            fix = Q(g, f**n)
            Q = TPoly(ctx, [coeffs[0] - fix + f**n * random_poly(ctx, f.degree, rng)] + coeffs[1:])
            if Q.derivative()(g) % f:
                return HenselInstance("weak", Q, g, f, n, m)
    m = rng.randint(0, (max_n - 1) // 2)
    n = rng.randint(2 * m + 1, max_n)
    span = f.degree * (n + 1)
    g = random_poly(ctx, span - 1, rng)
    x_minus_g = TPoly(ctx, [-g, FqPoly(ctx, (1,))])
    S = [random_poly(ctx, f.degree, rng) for _ in range(rng.randint(1, 2))]
    while True:
        u = random_poly(ctx, f.degree, rng)
        if u % f:
            break
    # (t-g)^2 S(t)
    sq = _tpoly_mul(ctx, _tpoly_mul(ctx, x_minus_g.coeffs, x_minus_g.coeffs), S)
    lin = [c * (f**m * u) for c in x_minus_g.coeffs]
    cs = _tpoly_add(ctx, sq, lin)
    cs = _tpoly_add(ctx, cs, [f**n * random_poly(ctx, f.degree, rng)])
    return HenselInstance("strong", TPoly(ctx, cs), g, f, n, m)


def _tpoly_mul(ctx, a, b):
    out = [FqPoly(ctx) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _tpoly_add(ctx, a, b):
    n = max(len(a), len(b))
    zero = FqPoly(ctx)
    return [(a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero) for i in range(n)]
