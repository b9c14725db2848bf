"""Dense univariate polynomial arithmetic on coefficient lists.

Polynomials are lists of field codes, constant term first, with no trailing
zeros; ``[]`` is the zero polynomial.  Every function takes the coefficient
field ``F`` (anything with scalar ``add/sub/neg/mul/inv``) as first argument.
"""

from .errors import DivisionByZero


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return trim(out)


def neg(F, a):
    return [F.neg(c) for c in a]


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, a, c):
    if c == 0:
        return []
    return trim([F.mul(x, c) for x in a])


def mul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def divmod_(F, a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], trim(a)
    inv_lc = F.inv(b[-1])
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        c = F.mul(c, inv_lc)
        quot[i - db] = c
        for j, y in enumerate(b):
            if y:
                a[i - db + j] = F.sub(a[i - db + j], F.mul(c, y))
    return trim(quot), trim(a[:db])


def mod(F, a, b):
    return divmod_(F, a, b)[1]


def monic(F, a):
    if not a:
        return []
    return scale(F, a, F.inv(a[-1]))


def powmod(F, a, e, m):
    result = [1]
    base = mod(F, a, m)
    while e:
        if e & 1:
            result = mod(F, mul(F, result, base), m)
        e >>= 1
        if e:
            base = mod(F, mul(F, base, base), m)
    return mod(F, result, m)


def gcd(F, a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def xgcd(F, a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        qt, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, qt, s1))
        t0, t1 = t1, sub(F, t0, mul(F, qt, t1))
    if not r0:
        return [], [], []
    c = F.inv(r0[-1])
    return scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)


def derivative(F, a):
    # coefficient i*a_i; the integer i acts through the prime subfield
    p = F.p
    return trim([F.mul(a[i], i % p) for i in range(1, len(a))])


def evaluate(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def is_irreducible(F, f):
    """Rabin's test for ``f`` over ``F``."""
    from ._ntheory import prime_factors

    f = trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if f[0] == 0:
        return False
    f = monic(F, f)
    x = [0, 1]
    frob = [x]
    h = x
    for _ in range(n):
        h = powmod(F, h, F.q, f)
        frob.append(h)
    if trim(sub(F, frob[n], x)):
        return False
    for r in prime_factors(n):
        g = gcd(F, sub(F, frob[n // r], x), f)
        if len(g) != 1:
            return False
    return True
