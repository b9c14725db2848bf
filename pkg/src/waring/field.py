"""Finite field arithmetic with a canonical, platform-independent encoding.

An element of F_q is an integer code in ``[0, q)``.  For F_p it is the
residue itself.  For an extension ``F_base[t]/(f)`` of degree ``n`` the code
is the base-``|F_base|`` number whose digits are the coefficients of the
reduced representative, constant term least significant.  Extensions of
F_p use the lexicographically smallest monic irreducible modulus; the
generator is always the smallest code of full multiplicative order.

All scalar operations go through log, antilog and Zech-log tables, which
also back the numpy ``*_vec`` variants used by the search code.
"""

import os
import re
from functools import lru_cache

import numpy as np

from . import _polyarith as P
from ._ntheory import isprime, prime_factors, prime_power
from .errors import DivisionByZero, NonPrimeP, SizeCapExceeded

DEFAULT_SIZE_CAP = 2**24
_LIST_LIMIT = 2**20  # below this size scalar lookups use python lists
_CHUNK = 2**18


def size_cap():
    """Field size cap, overridable through ``WARING_SIZE_CAP``."""
    raw = os.environ.get("WARING_SIZE_CAP")
    return int(raw) if raw else DEFAULT_SIZE_CAP


class FieldCtx:
    """A concrete finite field.

    ``base`` is ``None`` for a prime field, otherwise the field this one
    extends by ``modulus`` (coefficients over ``base``, constant first).
    ``log_table`` has length ``q`` with ``log_table[0] == -1``;
    ``antilog_table[i]`` is the code of ``generator**i``; ``zech_table[e]``
    is ``log(1 + generator**e)`` or ``-1`` when that sum vanishes.
    """

    __slots__ = (
        "p", "s", "q", "base", "degree", "modulus", "generator",
        "log_table", "antilog_table", "zech_table",
        "_log", "_anti", "_zech", "_half", "__weakref__",
    )

    def __init__(self, p, s, base, modulus, generator, antilog):
        self.p = p
        self.s = s
        self.q = p**s
        self.base = base
        self.degree = len(modulus) - 1
        self.modulus = tuple(modulus)
        self.generator = generator
        q = self.q
        self.antilog_table = antilog
        log = np.full(q, -1, dtype=np.int64)
        log[antilog] = np.arange(q - 1, dtype=np.int64)
        self.log_table = log
        # odd characteristic: -1 = g^((q-1)/2); characteristic 2: -1 = 1
        self._half = 0 if p == 2 else (q - 1) // 2
        self.zech_table = log[self._plus_one(antilog)]
        for arr in (self.log_table, self.antilog_table, self.zech_table):
            arr.setflags(write=False)

    def __getattr__(self, name):
        # scalar lookup tables are materialized on first scalar use
        if name not in ("_log", "_anti", "_zech"):
            raise AttributeError(name)
        tables = (self.log_table, self.antilog_table, self.zech_table)
        if self.q <= _LIST_LIMIT:
            tables = tuple(t.tolist() for t in tables)
        self._log, self._anti, self._zech = tables
        return getattr(self, name)

    def __repr__(self):
        if self.base is None:
            return f"FieldCtx(F_{self.p})"
        return f"FieldCtx(F_{self.q}, modulus={list(self.modulus)}, generator={self.generator})"

    def __reduce__(self):
        if self.base is None or self.base.base is None and self.modulus == _canonical_modulus(self.p, self.s):
            return (build_field, (self.p, self.s))
        return (extension_field, (self.base, self.modulus))

    @property
    def is_prime_field(self):
        return self.base is None

    # --- encoding -------------------------------------------------------

    def coeffs(self, a):
        """Coefficients of ``a`` over ``base`` (constant first, full length)."""
        if self.base is None:
            return [a]
        qb = self.base.q
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, qb)
            out.append(r)
        return out

    def from_coeffs(self, cs):
        if self.base is None:
            return cs[0] % self.p if cs else 0
        qb = self.base.q
        cs = P.mod(self.base, P.trim(cs), list(self.modulus))
        code = 0
        for c in reversed(cs):
            code = code * qb + c
        return code

    def _plus_one(self, arr):
        # add 1 to the constant digit of every code in arr
        qb = self.p if self.base is None else self.base.q
        const = arr % qb
        if self.base is None:
            bumped = (const + 1) % qb
        else:
            bumped = self.base.add_vec(const, 1)
        return arr - const + bumped

    # --- scalar arithmetic ---------------------------------------------

    def add(self, a, b):
        if self.base is None:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        if z < 0:
            return 0
        return int(self._anti[(la + z) % (self.q - 1)])

    def neg(self, a):
        if self.base is None:
            return -a % self.p
        if a == 0 or self._half == 0:
            return a
        return int(self._anti[(self._log[a] + self._half) % (self.q - 1)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.base is None:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return int(self._anti[(self._log[a] + self._log[b]) % (self.q - 1)])

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.base is None:
            return pow(a, -1, self.p)
        return int(self._anti[-self._log[a] % (self.q - 1)])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        """``a**e``; ``pow(0, 0) == 1`` and negative ``e`` needs a unit."""
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("negative power of zero")
            return 0
        return int(self._anti[self._log[a] * e % (self.q - 1)])

    def log(self, a):
        if a == 0:
            raise DivisionByZero("log of zero")
        return int(self._log[a])

    def exp(self, e):
        return int(self._anti[e % (self.q - 1)])

    def trace(self, a):
        """Absolute trace to F_p, returned as a code in ``range(p)``."""
        if self.base is None or a == 0:
            return a
        acc = 0
        e = self._log[a]
        for _ in range(self.s):
            acc = self.add(acc, int(self._anti[e]))
            e = e * self.p % (self.q - 1)
        return acc

    def elements(self):
        return range(self.q)

    # --- vectorized arithmetic -----------------------------------------

    def add_vec(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.base is None:
            return (a + b) % self.p
        a, b = np.broadcast_arrays(a, b)
        out = np.where(a == 0, b, a).astype(np.int64)
        both = (a != 0) & (b != 0)
        if both.any():
            la = self.log_table[a[both]]
            z = self.zech_table[(self.log_table[b[both]] - la) % (self.q - 1)]
            out[both] = np.where(z < 0, 0, self.antilog_table[(la + np.maximum(z, 0)) % (self.q - 1)])
        return out

    def neg_vec(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.base is None:
            return -a % self.p
        if self._half == 0:
            return a.copy()
        return np.where(a == 0, 0, self.antilog_table[(self.log_table[a] + self._half) % (self.q - 1)])

    def sub_vec(self, a, b):
        return self.add_vec(a, self.neg_vec(b))

    def mul_vec(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.base is None:
            return a * b % self.p
        prod = self.antilog_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, prod)

    def pow_vec(self, a, e):
        a = np.asarray(a, dtype=np.int64)
        if e < 0 and (a == 0).any():
            raise DivisionByZero("negative power of zero")
        r = self.antilog_table[(self.log_table[a] * (e % (self.q - 1))) % (self.q - 1)]
        zero_val = 1 if e == 0 else 0
        return np.where(a == 0, zero_val, r)

    def trace_vec(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.base is None:
            return a.copy()
        lg = self.log_table[a]
        acc = np.zeros(a.shape, dtype=np.int64)
        step = 1
        for _ in range(self.s):
            acc = self.add_vec(acc, self.antilog_table[(lg * step) % (self.q - 1)])
            step = step * self.p % (self.q - 1)
        return np.where(a == 0, 0, acc)


# --- construction ----------------------------------------------------------


@lru_cache(maxsize=None)
def _canonical_modulus(p, s):
    Fp = _prime_field(p)
    if s == 1:
        return (0, 1)
    for n in range(p**s):
        cs = [(n // p**i) % p for i in range(s)] + [1]
        if P.is_irreducible(Fp, cs):
            return tuple(cs)
    raise AssertionError("no irreducible polynomial found")


def _order_is_full(mulpow, c, order):
    return all(mulpow(c, order // r) != 1 for r in prime_factors(order))


@lru_cache(maxsize=256)
def _prime_field(p):
    if p == 2:
        g = 1
    else:
        g = next(c for c in range(2, p) if _order_is_full(lambda a, e: pow(a, e, p), c, p - 1))
    n = p - 1
    anti = np.empty(n, dtype=np.int64)
    anti[0] = 1
    filled, gl = 1, g
    while filled < n:
        m = min(filled, n - filled)
        anti[filled:filled + m] = anti[:m] * gl % p
        filled += m
        gl = gl * gl % p
    return FieldCtx(p, 1, None, (0, 1), g, anti)


def _extend(base, modulus):
    """Build ``base[t]/(modulus)`` for a monic irreducible ``modulus``."""
    modulus = list(modulus)
    n = len(modulus) - 1
    qb = base.q
    q = qb**n
    order = q - 1
    f = modulus

    def code_to_poly(c):
        cs = []
        while c:
            c, r = divmod(c, qb)
            cs.append(r)
        return cs

    def poly_to_code(cs):
        code = 0
        for c in reversed(cs):
            code = code * qb + c
        return code

    def mulpow(c, e):
        return poly_to_code(P.powmod(base, code_to_poly(c), e, f))

    gen = next(c for c in range(1 if q == 2 else 2, q) if _order_is_full(mulpow, c, order))

    weights = qb ** np.arange(n, dtype=np.int64)

    def times(codes, h):
        # multiply every code by the fixed element h, as a base-linear map
        cols = []
        t_pow = [1]
        for _ in range(n):
            cols.append(P.mod(base, P.mul(base, h, t_pow), f) + [0] * n)
            t_pow = [0] + t_pow
        M = np.array([[cols[i][j] for i in range(n)] for j in range(n)], dtype=np.int64)
        out = np.empty_like(codes)
        for lo in range(0, len(codes), _CHUNK):
            chunk = codes[lo:lo + _CHUNK]
            digits = (chunk[:, None] // weights) % qb
            if base.base is None:
                new = digits @ M.T % qb
            else:
                new = np.zeros_like(digits)
                for j in range(n):
                    acc = np.zeros(len(chunk), dtype=np.int64)
                    for i in range(n):
                        if M[j, i]:
                            acc = base.add_vec(acc, base.mul_vec(digits[:, i], int(M[j, i])))
                    new[:, j] = acc
            out[lo:lo + _CHUNK] = new @ weights
        return out

    anti = np.empty(order, dtype=np.int64)
    anti[0] = 1
    filled, h = 1, code_to_poly(gen)
    while filled < order:
        m = min(filled, order - filled)
        anti[filled:filled + m] = times(anti[:m], h)
        filled += m
        h = P.mod(base, P.mul(base, h, h), f)
    return FieldCtx(base.p, base.s * n, base, tuple(modulus), gen, anti)


@lru_cache(maxsize=32)
def _build(p, s):
    if s == 1:
        return _prime_field(p)
    return _extend(_prime_field(p), _canonical_modulus(p, s))


def build_field(p, s=1):
    """The canonical field of order ``p**s``."""
    if not isprime(p):
        raise NonPrimeP(f"{p} is not prime")
    if s < 1:
        raise ValueError("extension degree must be at least 1")
    if p**s > size_cap():
        raise SizeCapExceeded(f"q={p}^{s} exceeds the size cap {size_cap()}")
    return _build(p, s)


def field_of_order(q):
    p, s = prime_power(q)
    return build_field(p, s)


_ext_cache = {}


def extension_field(base, modulus):
    """``base[t]/(modulus)``; ``modulus`` is a monic irreducible over ``base``."""
    modulus = tuple(P.monic(base, P.trim(modulus)))
    if len(modulus) == 2:
        return base
    q = base.q ** (len(modulus) - 1)
    if q > size_cap():
        raise SizeCapExceeded(f"q={q} exceeds the size cap {size_cap()}")
    key = (id(base), modulus)
    hit = _ext_cache.get(key)
    if hit is not None and hit[0] is base:
        return hit[1]
    if not P.is_irreducible(base, list(modulus)):
        raise ValueError(f"modulus {list(modulus)} is reducible over F_{base.q}")
    ctx = _extend(base, modulus)
    if len(_ext_cache) > 256:
        _ext_cache.clear()
    _ext_cache[key] = (base, ctx)
    return ctx


# --- text format -------------------------------------------------------------

_TERM = re.compile(r"^(\d*)\*?(g(?:\^(\d+))?)?$")


def parse_element(ctx, text):
    """Parse an integer code or a polynomial in the generator symbol ``g``.

    ``"g^2+2g+1"`` evaluates in ``ctx`` with ``g`` the canonical generator.
    Integer coefficients act through the prime subfield.
    """
    text = str(text).replace(" ", "")
    if re.fullmatch(r"\d+", text):
        code = int(text)
        if code >= ctx.q:
            raise ValueError(f"element code {code} out of range for F_{ctx.q}")
        return code
    if not text or not re.fullmatch(r"[0-9g^*+\-]+", text):
        raise ValueError(f"cannot parse field element {text!r}")
    acc = 0
    for sign, term in re.findall(r"([+-]?)([^+-]+)", text):
        m = _TERM.match(term)
        if not m or (not m.group(1) and not m.group(2)):
            raise ValueError(f"cannot parse term {term!r}")
        coef = int(m.group(1)) % ctx.p if m.group(1) else 1
        if m.group(2):
            e = int(m.group(3)) if m.group(3) else 1
            val = ctx.mul(coef, ctx.pow(ctx.generator, e))
        else:
            val = coef
        acc = ctx.sub(acc, val) if sign == "-" else ctx.add(acc, val)
    return acc


def format_element(ctx, a):
    return int(a)
