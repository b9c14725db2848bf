"""Sums of k-th powers in finite commutative rings.

Supported ring classes are ``Z/nZ``, ``F_q[x]/(f^e)`` with ``f``
irreducible, finite products of those, and rings given by explicit
addition and multiplication tables.  The structured classes know their
Jacobson radical and the residue fields of ``R/J`` in closed form; table
rings work everything out by brute force.

Decomposition follows the radical-lifting route: represent the image of the
target in ``R/J``, arrange for the first witness to be a unit there, and
lift it to an exact root of ``x^k + (other powers) - target`` with Newton
steps, which terminate because ``J`` is nilpotent.
"""

import json
from dataclasses import dataclass, field
from math import gcd, prod

import numpy as np
import sympy

from ._ntheory import factorint
from .decomposition import Decomposition, MatrixAlgebra, evaluate_poly
from .errors import CapExceeded, GcdViolation, ModeViolation, NonCommutative, ResidueFieldUncoverable
from .field import build_field
from .gamma import represent
from .hensel import radical_hensel
from .matrix import all_matrices, crt_combine, factorize, first_dependence_poly
from .poly import FqPoly, residue_field, residue_image, residue_preimage
from .tables import ring_row_bound

RADICAL_CAP = 256
BRUTE_CAP = 4096
ZALPHA_CAP = 65536
TABLE_BUILD_CAP = 512


class _Ring:
    """Shared algebra-protocol helpers; subclasses supply the primitives."""

    commutative = True

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, e):
        out = self.one
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def scalar(self, c):
        return self.from_int(c)

    def eq(self, a, b):
        return self.key(a) == self.key(b)

    def key(self, a):
        return a

    def elements(self):
        return (self.element(i) for i in range(self.order))

    def index_add_table(self, cap=BRUTE_CAP):
        if self.order > cap:
            raise CapExceeded(f"ring of order {self.order} exceeds the cap {cap}")
        idx = np.arange(self.order)
        return self.add_index(idx[:, None], idx[None, :])


class Zn(_Ring):
    def __init__(self, n):
        if n < 2:
            raise ValueError("Zn needs n >= 2")
        self.n = self.order = n
        self.zero = 0
        self.one = 1
        self._fac = factorint(n)
        self.primes = sorted(self._fac)
        self.rad = prod(self.primes)
        self.nilpotency = max(self._fac.values())

    def __repr__(self):
        return f"Z/{self.n}"

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return -a % self.n

    def mul(self, a, b):
        return a * b % self.n

    def pow(self, a, e):
        return pow(a, e, self.n)

    def from_int(self, c):
        return c % self.n

    def is_unit(self, a):
        return gcd(a, self.n) == 1

    def inv(self, a):
        return pow(a, -1, self.n)

    def in_radical(self, a):
        return a % self.rad == 0

    def residue_fields(self):
        return [build_field(p) for p in self.primes]

    def residue(self, a):
        return tuple(a % p for p in self.primes)

    def lift_residue(self, codes):
        return int(sympy.ntheory.modular.crt(self.primes, list(codes))[0]) % self.n

    def element(self, i):
        return i

    def index(self, a):
        return a

    def add_index(self, i, j):
        return (i + j) % self.n

    def to_json(self, a):
        return int(a)

    def parse(self, text):
        return int(text) % self.n


def parse_poly_text(ctx, text, var="x"):
    """Integer-coefficient polynomial text such as ``"x^2+1"``; negatives map through ``-``."""
    x = sympy.Symbol(var)
    expr = sympy.sympify(text.replace("^", "**"), locals={var: x})
    cs = [int(c) for c in reversed(sympy.Poly(expr, x).all_coeffs())]
    out = []
    for c in cs:
        if c >= 0:
            if c >= ctx.q:
                raise ValueError(f"coefficient {c} out of range for F_{ctx.q}")
            out.append(c)
        else:
            out.append(ctx.neg(-c % ctx.p) if ctx.base is not None else c % ctx.p)
    return FqPoly(ctx, out)


class PolyQuotient(_Ring):
    """``F_q[x]/(f^e)`` for monic irreducible ``f``."""

    def __init__(self, ctx, f, e=1):
        f = f if isinstance(f, FqPoly) else FqPoly(ctx, f)
        if f.degree < 1 or not f.is_irreducible():
            raise ValueError(f"{f} is not irreducible over F_{ctx.q}")
        if e < 1:
            raise ValueError("exponent must be positive")
        self.ctx = ctx
        self.f = f.monic()
        self.e = e
        self.modulus = self.f**e
        self.dim = self.modulus.degree
        self.order = ctx.q**self.dim
        self.zero = FqPoly(ctx)
        self.one = FqPoly(ctx, (1,))
        self.nilpotency = e

    def __repr__(self):
        return f"F_{self.ctx.q}[x]/({self.f})^{self.e}"

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return (a * b) % self.modulus

    def pow(self, a, e):
        return a.powmod(e, self.modulus)

    def from_int(self, c):
        return FqPoly(self.ctx, (c % self.ctx.p,))

    def key(self, a):
        return a.coeffs

    def is_unit(self, a):
        return bool(a % self.f)

    def inv(self, a):
        return a.inverse_mod(self.modulus)

    def in_radical(self, a):
        return not a % self.f

    def residue_fields(self):
        return [residue_field(self.ctx, self.f)]

    def residue(self, a):
        return (residue_image(self.ctx, self.f, a),)

    def lift_residue(self, codes):
        return residue_preimage(self.ctx, self.f, codes[0])

    def element(self, i):
        q = self.ctx.q
        cs = []
        for _ in range(self.dim):
            i, r = divmod(i, q)
            cs.append(r)
        return FqPoly(self.ctx, cs)

    def index(self, a):
        code = 0
        for c in reversed(a.coeffs):
            code = code * self.ctx.q + c
        return code

    def add_index(self, i, j):
        q = self.ctx.q
        i, j = np.broadcast_arrays(np.asarray(i, dtype=np.int64), np.asarray(j, dtype=np.int64))
        out = np.zeros(i.shape, dtype=np.int64)
        scale = 1
        for _ in range(self.dim):
            out += self.ctx.add_vec(i // scale % q, j // scale % q) * scale
            scale *= q
        return out

    def to_json(self, a):
        return a.to_list()

    def parse(self, text):
        text = text.strip()
        if "x" in text:
            return parse_poly_text(self.ctx, text) % self.modulus
        cs = json.loads(text) if text.startswith("[") else [int(t) for t in text.split(",") if t]
        if any(not 0 <= c < self.ctx.q for c in cs):
            raise ValueError(f"coefficient codes must lie in [0, {self.ctx.q})")
        return FqPoly(self.ctx, cs) % self.modulus


class Product(_Ring):
    def __init__(self, parts):
        if not parts:
            raise ValueError("empty product")
        self.parts = list(parts)
        self.order = prod(r.order for r in self.parts)
        self.zero = tuple(r.zero for r in self.parts)
        self.one = tuple(r.one for r in self.parts)
        self.nilpotency = max(r.nilpotency for r in self.parts)

    def __repr__(self):
        return " x ".join(map(repr, self.parts))

    def add(self, a, b):
        return tuple(r.add(x, y) for r, x, y in zip(self.parts, a, b))

    def neg(self, a):
        return tuple(r.neg(x) for r, x in zip(self.parts, a))

    def mul(self, a, b):
        return tuple(r.mul(x, y) for r, x, y in zip(self.parts, a, b))

    def pow(self, a, e):
        return tuple(r.pow(x, e) for r, x in zip(self.parts, a))

    def from_int(self, c):
        return tuple(r.from_int(c) for r in self.parts)

    def key(self, a):
        return tuple(r.key(x) for r, x in zip(self.parts, a))

    def is_unit(self, a):
        return all(r.is_unit(x) for r, x in zip(self.parts, a))

    def inv(self, a):
        return tuple(r.inv(x) for r, x in zip(self.parts, a))

    def in_radical(self, a):
        return all(r.in_radical(x) for r, x in zip(self.parts, a))

    def residue_fields(self):
        return [E for r in self.parts for E in r.residue_fields()]

    def residue(self, a):
        return tuple(c for r, x in zip(self.parts, a) for c in r.residue(x))

    def lift_residue(self, codes):
        out = []
        pos = 0
        for r in self.parts:
            width = len(r.residue_fields())
            out.append(r.lift_residue(codes[pos : pos + width]))
            pos += width
        return tuple(out)

    def element(self, i):
        out = []
        for r in self.parts:
            i, j = divmod(i, r.order)
            out.append(r.element(j))
        return tuple(out)

    def index(self, a):
        code = 0
        for r, x in reversed(list(zip(self.parts, a))):
            code = code * r.order + r.index(x)
        return code

    def add_index(self, i, j):
        i, j = np.broadcast_arrays(np.asarray(i, dtype=np.int64), np.asarray(j, dtype=np.int64))
        out = np.zeros(i.shape, dtype=np.int64)
        scale = 1
        for r in self.parts:
            out += r.add_index(i // scale % r.order, j // scale % r.order) * scale
            scale *= r.order
        return out

    def to_json(self, a):
        return [r.to_json(x) for r, x in zip(self.parts, a)]

    def parse(self, text):
        text = text.strip()
        if text.startswith("["):
            items = [json.dumps(v) if not isinstance(v, str) else v for v in json.loads(text)]
        else:
            items = text.strip("()").split("|")
        if len(items) != len(self.parts):
            raise ValueError(f"expected {len(self.parts)} components, got {len(items)}")
        return tuple(r.parse(t) for r, t in zip(self.parts, items))


def _key_of(obj):
    if isinstance(obj, np.ndarray):
        return (obj.shape, obj.astype(np.int64).tobytes())
    if isinstance(obj, FqPoly):
        return obj.coeffs
    if isinstance(obj, tuple):
        return tuple(_key_of(o) for o in obj)
    return obj


class TableRing(_Ring):
    """Ring on ``{0, ..., order-1}`` given by operation tables.

    Alternatively ``objects`` plus ``algebra`` describe a finite subring of
    a concrete algebra; operations then go through the algebra and tables are
    only materialized on demand.
    """

    def __init__(self, add_table=None, mul_table=None, one=1, zero=0, objects=None, algebra=None):
        self.objects = objects
        self.algebra = algebra
        if add_table is None:
            self.order = len(objects)
            self._index = {_key_of(o): i for i, o in enumerate(objects)}
            zero = self._index[_key_of(algebra.zero)]
            one = self._index[_key_of(algebra.one)]
        else:
            self.order = len(add_table)
        self._add = None if add_table is None else np.asarray(add_table, dtype=np.int64)
        self._mul = None if mul_table is None else np.asarray(mul_table, dtype=np.int64)
        self.zero = zero
        self.one = one
        self._radical = None
        self._nilpotency = None

    def __repr__(self):
        return f"TableRing(order={self.order})"

    def _tables(self):
        if self._add is None:
            if self.order > TABLE_BUILD_CAP:
                raise CapExceeded(f"operation tables are built only up to order {TABLE_BUILD_CAP}")
            n = self.order
            alg = self.algebra
            add = np.empty((n, n), dtype=np.int64)
            mul = np.empty((n, n), dtype=np.int64)
            for i, a in enumerate(self.objects):
                for j, b in enumerate(self.objects):
                    add[i, j] = self._index[_key_of(alg.add(a, b))]
                    mul[i, j] = self._index[_key_of(alg.mul(a, b))]
            self._add, self._mul = add, mul
        return self._add, self._mul

    def _via(self, op, a, b):
        if self._add is not None:
            return int((self._add if op == "add" else self._mul)[a, b])
        alg = self.algebra
        res = getattr(alg, op)(self.objects[a], self.objects[b])
        return self._index[_key_of(res)]

    def add(self, a, b):
        return self._via("add", a, b)

    def mul(self, a, b):
        return self._via("mul", a, b)

    def neg(self, a):
        if self._add is not None:
            return int(np.flatnonzero(self._add[a] == self.zero)[0])
        alg = self.algebra
        return self._index[_key_of(alg.sub(alg.zero, self.objects[a]))]

    def from_int(self, c):
        out = self.zero
        for _ in range(c % self.additive_order(self.one)):
            out = self.add(out, self.one)
        return out

    def additive_order(self, a):
        t, x = 1, a
        while x != self.zero:
            x = self.add(x, a)
            t += 1
        return t

    @property
    def commutative(self):
        if self._mul is None:
            return True  # generated by a single element
        return bool(np.array_equal(self._mul, self._mul.T))

    def units_mask(self):
        _, mul = self._tables()
        left = mul == self.one
        return (left & left.T).any(axis=1)

    def is_unit(self, a):
        if self._mul is None and self.algebra is not None:
            return any(self.mul(a, b) == self.one and self.mul(b, a) == self.one for b in range(self.order))
        return bool(self.units_mask()[a])

    def inv(self, a):
        for b in range(self.order):
            if self.mul(a, b) == self.one and self.mul(b, a) == self.one:
                return b
        raise ZeroDivisionError(f"{a} is not a unit")

    def radical_mask(self):
        if self._radical is None:
            if self.order > RADICAL_CAP:
                raise CapExceeded(f"radical computation is capped at order {RADICAL_CAP}")
            add, mul = self._tables()
            units = self.units_mask()
            mask = np.zeros(self.order, dtype=bool)
            for x in range(self.order):
                rx = mul[:, x]
                rxs = mul[rx, :]
                mask[x] = units[add[self.one][rxs]].all()
            self._radical = mask
        return self._radical

    def in_radical(self, a):
        return bool(self.radical_mask()[a])

    def _additive_closure(self, gens):
        add, _ = self._tables()
        cur = np.zeros(self.order, dtype=bool)
        cur[self.zero] = True
        gens = np.flatnonzero(gens)
        while True:
            new = cur.copy()
            new[add[np.ix_(np.flatnonzero(cur), gens)].ravel()] = True
            if np.array_equal(new, cur):
                return cur
            cur = new

    def radical_powers(self):
        """``[J, J^2, ..., 0]`` as membership masks."""
        _, mul = self._tables()
        J = self.radical_mask()
        out = [J]
        while out[-1].sum() > 1:
            prods = np.zeros(self.order, dtype=bool)
            prods[mul[np.ix_(np.flatnonzero(out[-1]), np.flatnonzero(J))].ravel()] = True
            nxt = self._additive_closure(prods)
            if np.array_equal(nxt, out[-1]):
                raise AssertionError("radical is not nilpotent")
            out.append(nxt)
        return out

    @property
    def nilpotency(self):
        if self._nilpotency is None:
            self._nilpotency = len(self.radical_powers())
        return self._nilpotency

    def element(self, i):
        return i

    def index(self, a):
        return a

    def add_index(self, i, j):
        add, _ = self._tables()
        return add[i, j]

    def to_json(self, a):
        if self.objects is not None and self.algebra is not None:
            return self.algebra.to_json(self.objects[a])
        return int(a)

    def parse(self, text):
        return int(text)


# --- radical --------------------------------------------------------------------


@dataclass
class RadicalInfo:
    ring: object
    nilpotency: int
    generators: list = None
    members: np.ndarray = None

    def __contains__(self, a):
        return self.ring.in_radical(a)


def jacobson_radical(ring):
    """Membership test, generators when known in closed form, and the nilpotency degree."""
    if isinstance(ring, Zn):
        return RadicalInfo(ring, ring.nilpotency, [ring.rad % ring.n])
    if isinstance(ring, PolyQuotient):
        return RadicalInfo(ring, ring.e, [ring.f % ring.modulus])
    if isinstance(ring, Product):
        gens = []
        for i, r in enumerate(ring.parts):
            for g in jacobson_radical(r).generators or []:
                gens.append(tuple(g if j == i else s.zero for j, s in enumerate(ring.parts)))
        return RadicalInfo(ring, ring.nilpotency, gens)
    powers = ring.radical_powers()
    return RadicalInfo(ring, len(powers), None, powers[0])


# --- decompositions ----------------------------------------------------------------


def _power_root_poly(ring, others, alpha, k):
    """Coefficients of ``x^k + sum(others^k) - alpha``."""
    const = ring.neg(alpha)
    for w in others:
        const = ring.add(const, ring.pow(w, k))
    return [const] + [ring.zero] * (k - 1) + [ring.one]


def _residue_columns(ring, alpha, k):
    """Per residue field, the coordinates of each witness modulo ``J``.

    The first witness always gets a nonzero coordinate: nonzero targets put
    one of their own (nonzero) witnesses first, zero targets use ``1``
    followed by a representation of ``-1``.
    """
    cols = []
    for E, a in zip(ring.residue_fields(), ring.residue(alpha)):
        if a:
            ws = represent(E, k, a)
            if ws is None:
                raise ResidueFieldUncoverable(f"F_{E.q}", k)
            j = next(i for i, w in enumerate(ws) if w)
            cols.append([ws[j]] + ws[:j] + ws[j + 1 :])
        else:
            tail = [E.neg(1)] if k % 2 else represent(E, k, E.neg(1))
            if tail is None:
                raise ResidueFieldUncoverable(f"F_{E.q}", k)
            cols.append([1] + tail)
    return cols


def _brute_residue_witnesses(ring, alpha, k):
    """Fewest witnesses mod ``J`` with a unit first, by search over ``R``."""
    add, _ = ring._tables()
    J = np.flatnonzero(ring.radical_mask())
    label = add[:, J].min(axis=1)  # canonical coset representative
    units = np.flatnonzero(ring.units_mask())
    powk = np.array([ring.pow(b, k) for b in range(ring.order)])
    goal = label[alpha]
    seen = {}
    frontier = []
    for u in units:
        s = int(powk[u])
        lab = int(label[s])
        if lab not in seen:
            seen[lab] = [int(u)]
            frontier.append((s, lab))
    while goal not in seen and frontier:
        nxt = []
        for s, lab in frontier:
            for b in range(ring.order):
                s2 = int(add[s, powk[b]])
                lab2 = int(label[s2])
                if lab2 not in seen:
                    seen[lab2] = seen[lab] + [b]
                    nxt.append((s2, lab2))
        frontier = nxt
    if goal not in seen:
        raise ResidueFieldUncoverable("R/J", k)
    return seen[goal]


def decompose_ring_element(ring, alpha, k, check_row=True):
    """Verified ``alpha = sum B_j^k`` in a finite commutative ring with ``gcd(|R|, k) = 1``.

    Units modulo ``J`` use as many witnesses as the residue fields need;
    other elements may need one more (two more is never needed) for the
    ``1 + (-1)`` adjustment.
    """
    if not ring.commutative:
        raise NonCommutative("decompose_via_zalpha handles noncommutative rings")
    if gcd(ring.order, k) != 1:
        raise GcdViolation(f"gcd(|R|={ring.order}, k={k}) != 1")
    if ring.eq(alpha, ring.zero):
        witnesses = [ring.zero]
        notes = {"case": "zero"}
    else:
        if hasattr(ring, "residue_fields"):
            cols = _residue_columns(ring, alpha, k)
            width = max(len(c) for c in cols)
            cols = [c + [0] * (width - len(c)) for c in cols]
            approx = [ring.lift_residue(tuple(c[j] for c in cols)) for j in range(width)]
        else:
            approx = _brute_residue_witnesses(ring, alpha, k)
        unit_case = ring.is_unit(alpha)
        first = radical_hensel(ring, _power_root_poly(ring, approx[1:], alpha, k), approx[0])
        witnesses = [first] + approx[1:]
        notes = {"case": "unit" if unit_case else "nonunit"}
    guard = ring_row_bound(k, ring.order)
    if check_row and guard is not None:
        notes["row_bound"] = guard.bound
        if len(witnesses) > guard.bound:
            raise AssertionError(f"{len(witnesses)} witnesses exceed the table bound {guard.bound}")
    return Decomposition("ring", ring, alpha, k, witnesses, notes=notes)


# --- Z[alpha] -------------------------------------------------------------------------


def zalpha_subring(algebra, alpha, cap=ZALPHA_CAP):
    """The subring generated by ``alpha``: the additive span of its powers."""
    powers = []
    seen = set()
    cur = algebra.one
    while _key_of(cur) not in seen:
        seen.add(_key_of(cur))
        powers.append(cur)
        cur = algebra.mul(cur, alpha)
    elems = {_key_of(algebra.zero): algebra.zero}
    frontier = [algebra.zero]
    while frontier:
        nxt = []
        for a in frontier:
            for g in powers:
                b = algebra.add(a, g)
                kb = _key_of(b)
                if kb not in elems:
                    elems[kb] = b
                    nxt.append(b)
                    if len(elems) > cap:
                        raise CapExceeded(f"Z[alpha] exceeds {cap} elements")
        frontier = nxt
    objects = list(elems.values())
    return TableRing(objects=objects, algebra=algebra)


def _prime_coordinates(ctx, M):
    flat = np.asarray(M).ravel()
    out = []
    for c in flat:
        out.extend(ctx.coeffs(int(c)))
    return out


def decompose_via_zalpha(algebra, alpha, k, seed=0):
    """Decompose ``alpha`` inside ``Z[alpha]`` for a possibly noncommutative algebra.

    For matrices over ``F_q``, ``Z[alpha] = F_p[alpha]`` is identified with
    ``F_p[x]/(mu)`` where ``mu`` is the minimal polynomial over the prime
    field, then split into structured factors; other algebras go through
    the explicit subring.
    """
    if isinstance(algebra, MatrixAlgebra):
        ctx = algebra.ctx
        if ctx.base is not None and ctx.base.base is not None:
            raise ValueError("prime coordinates need a field built directly over F_p")
        Fp = build_field(ctx.p)

        def powers():
            cur = algebra.one
            while True:
                yield _prime_coordinates(ctx, cur)
                cur = algebra.mul(cur, alpha)

        mu = first_dependence_poly(Fp, powers())
        order = ctx.p**mu.degree
        if gcd(order, k) != 1:
            raise GcdViolation(f"gcd(|Z[alpha]|={order}, k={k}) != 1")
        factors = factorize(mu, seed)
        parts = [g**e for g, e in factors]
        R = Product([PolyQuotient(Fp, g, e) for g, e in factors])
        x = FqPoly.x(Fp)
        image = tuple(x % part for part in parts)
        inner = decompose_ring_element(R, image, k, check_row=False)
        polys = [crt_combine(mu, parts, list(w)) for w in inner.witnesses]
        witnesses = [evaluate_poly(algebra, P.coeffs, alpha) for P in polys]
        notes = {"zalpha_order": order, "mu": mu.to_list(), "case": inner.notes.get("case")}
        return Decomposition("ring", algebra, alpha, k, witnesses, [P.to_list() for P in polys], alpha, notes)
    sub = zalpha_subring(algebra, alpha)
    idx = sub._index[_key_of(alpha)]
    inner = decompose_ring_element(sub, idx, k, check_row=False)
    witnesses = [sub.objects[w] for w in inner.witnesses]
    return Decomposition("ring", algebra, alpha, k, witnesses, notes={"zalpha_order": sub.order})


# --- table ring of a matrix algebra ---------------------------------------------------


def matrix_table_ring(ctx, n, cap=RADICAL_CAP):
    """``Mat_n(F_q)`` as a :class:`TableRing`; element ``i`` is the i-th matrix in digit order."""
    mats = all_matrices(ctx, n, cap)
    N = len(mats)
    weights = ctx.q ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    alg = MatrixAlgebra(ctx, n)

    def encode(arr):
        return (arr.reshape(arr.shape[:-2] + (n * n,)) * weights).sum(axis=-1)

    add = encode(ctx.add_vec(mats[:, None], mats[None, :]))
    prods = ctx.mul_vec(mats[:, None, :, :, None], mats[None, :, None, :, :])  # [a, b, i, l, j]
    acc = prods[:, :, :, 0, :]
    for l in range(1, n):
        acc = ctx.add_vec(acc, prods[:, :, :, l, :])
    mul = encode(acc)
    one = int(encode(alg.one[None])[0])
    ring = TableRing(add, mul, one=one, zero=0)
    ring.objects = list(mats)
    ring.algebra = alg
    return ring


# --- brute-force oracle ---------------------------------------------------------------------


@dataclass
class BruteWaring:
    k: int
    order: int
    n: int = None  # None when sums of k-th powers never cover R
    sizes: list = field(default_factory=list)

    @property
    def coverable(self):
        return self.n is not None


def _fft_sumset(cur, P):
    n = len(cur)
    conv = np.fft.irfft(np.fft.rfft(cur.astype(float)) * np.fft.rfft(P.astype(float)), n)
    return conv > 0.5


def brute_force_waring(ring, k, cap=BRUTE_CAP):
    """Exact least ``n`` with every element a sum of ``n`` k-th powers, via sumsets."""
    if ring.order > cap:
        raise CapExceeded(f"ring of order {ring.order} exceeds the cap {cap}")
    N = ring.order
    P = np.zeros(N, dtype=bool)
    if isinstance(ring, Zn):
        P[[pow(b, k, N) for b in range(N)]] = True
    else:
        for i in range(N):
            P[ring.index(ring.pow(ring.element(i), k))] = True
    cur = P.copy()
    sizes = [int(cur.sum())]
    table = None if isinstance(ring, Zn) else ring.index_add_table(cap)
    pidx = np.flatnonzero(P)
    while not cur.all():
        if table is None:
            nxt = _fft_sumset(cur, P) | cur
        else:
            nxt = cur.copy()
            nxt[table[np.ix_(np.flatnonzero(cur), pidx)].ravel()] = True
        if np.array_equal(nxt, cur):
            return BruteWaring(k, N, None, sizes)
        cur = nxt
        sizes.append(int(cur.sum()))
    return BruteWaring(k, N, len(sizes), sizes)


# --- unit-power criteria ----------------------------------------------------------------------


@dataclass
class UnitPowerVerdict:
    passes: bool
    mode: str
    k: int
    checks: list  # (p, i, product or modulus, gcd)
    conclusion: str

    def to_json(self):
        return {
            "passes": self.passes,
            "mode": self.mode,
            "k": self.k,
            "checks": [{"p": p, "i": i, "value": v, "gcd": g} for p, i, v, g in self.checks],
            "conclusion": self.conclusion,
        }


def unit_power_criterion(order_factorization, k, mode="general", truncate=None):
    """Gcd test for "every unit is a k-th power" from the prime factorization of ``|R|``.

    ``cubefree`` uses ``gcd(k, p^i - 1)`` and needs every ``i <= 2``;
    ``general`` uses ``gcd(k, prod_{j<=i} (p^j - 1))``.  ``truncate`` caps
    the product at ``j <= truncate`` for comparison with hand computations.
    """
    if mode not in ("cubefree", "general"):
        raise ValueError(f"unknown mode {mode!r}")
    checks = []
    ok = True
    for p, i in order_factorization:
        if mode == "cubefree":
            if i >= 3:
                raise ModeViolation(f"cubefree mode needs exponents <= 2, got {p}^{i}")
            value = p**i - 1
        else:
            top = i if truncate is None else min(i, truncate)
            value = prod(p**j - 1 for j in range(1, top + 1))
        g = gcd(k, value)
        checks.append((p, i, value, g))
        if g != 1 or k % p == 0:
            ok = False
    if ok:
        tail = "every element is a k-th power" if k % 2 else "every element is a sum of two k-th powers"
        conclusion = f"every unit is a k-th power; {tail}"
    else:
        conclusion = "criterion fails"
    return UnitPowerVerdict(ok, mode, k, checks, conclusion)


# --- text syntax ---------------------------------------------------------------------------------


def parse_ring(text):
    """``zn:55``, ``polyq:p=3,s=1,f=x^2+1,e=2`` or ``prod:zn:5|zn:11``."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    if kind == "zn":
        return Zn(int(rest))
    if kind == "polyq":
        opts = dict(item.split("=", 1) for item in rest.split(","))
        ctx = build_field(int(opts["p"]), int(opts.get("s", 1)))
        f = parse_poly_text(ctx, opts["f"])
        return PolyQuotient(ctx, f, int(opts.get("e", 1)))
    if kind == "prod":
        return Product([parse_ring(part) for part in rest.split("|")])
    raise ValueError(f"unknown ring syntax {text!r}")
