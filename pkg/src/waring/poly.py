"""Univariate polynomials over a :class:`~waring.field.FieldCtx`."""

from . import _polyarith as P
from .field import extension_field


class FqPoly:
    """Immutable polynomial with coefficients stored constant term first."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs=()):
        self.ctx = ctx
        self.coeffs = tuple(P.trim(int(c) for c in coeffs))

    @classmethod
    def x(cls, ctx):
        return cls(ctx, (0, 1))

    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, (c,))

    @classmethod
    def from_roots(cls, ctx, roots):
        out = cls(ctx, (1,))
        for r in roots:
            out = out * cls(ctx, (ctx.neg(r), 1))
        return out

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def _wrap(self, cs):
        return FqPoly(self.ctx, cs)

    def _lift(self, other):
        if isinstance(other, FqPoly):
            return list(other.coeffs)
        return P.trim([int(other)])

    def __add__(self, other):
        return self._wrap(P.add(self.ctx, list(self.coeffs), self._lift(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(P.sub(self.ctx, list(self.coeffs), self._lift(other)))

    def __rsub__(self, other):
        return self._wrap(P.sub(self.ctx, self._lift(other), list(self.coeffs)))

    def __neg__(self):
        return self._wrap(P.neg(self.ctx, self.coeffs))

    def __mul__(self, other):
        if isinstance(other, FqPoly):
            return self._wrap(P.mul(self.ctx, list(self.coeffs), list(other.coeffs)))
        return self._wrap(P.scale(self.ctx, list(self.coeffs), int(other)))

    __rmul__ = __mul__

    def __divmod__(self, other):
        qt, r = P.divmod_(self.ctx, list(self.coeffs), self._lift(other))
        return self._wrap(qt), self._wrap(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e):
        out = self._wrap((1,))
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def powmod(self, e, m):
        return self._wrap(P.powmod(self.ctx, list(self.coeffs), e, list(m.coeffs)))

    def __eq__(self, other):
        if isinstance(other, FqPoly):
            return self.ctx is other.ctx and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == tuple(P.trim([other]))
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __call__(self, x):
        return P.evaluate(self.ctx, self.coeffs, x)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)

    def derivative(self):
        return self._wrap(P.derivative(self.ctx, self.coeffs))

    def monic(self):
        return self._wrap(P.monic(self.ctx, list(self.coeffs)))

    def gcd(self, other):
        return self._wrap(P.gcd(self.ctx, list(self.coeffs), list(other.coeffs)))

    def xgcd(self, other):
        g, s, t = P.xgcd(self.ctx, list(self.coeffs), list(other.coeffs))
        return self._wrap(g), self._wrap(s), self._wrap(t)

    def inverse_mod(self, m):
        """Inverse modulo ``m`` via the extended Euclidean algorithm."""
        g, s, _ = self.xgcd(m)
        if g.coeffs != (1,):
            raise ZeroDivisionError(f"{self} is not invertible modulo {m}")
        return s % m

    def is_irreducible(self):
        return P.is_irreducible(self.ctx, list(self.coeffs))

    def to_list(self):
        return list(self.coeffs)


def residue_field(ctx, f):
    """The field ``ctx[x]/(f)`` for irreducible ``f`` (``ctx`` itself when linear)."""
    return extension_field(ctx, f.monic().coeffs)


def residue_image(ctx, f, g):
    """Code of ``g mod f`` inside :func:`residue_field`.

    For a linear ``f = x - a`` that is ``g(a)``; otherwise the coefficient
    digits of the remainder read in base ``|ctx|``.
    """
    f = f.monic()
    if f.degree == 1:
        return g(ctx.neg(f[0]))
    r = g % f
    code = 0
    for c in reversed(r.coeffs):
        code = code * ctx.q + c
    return code


def residue_preimage(ctx, f, code):
    """Polynomial of degree below ``deg f`` representing a residue-field code."""
    f = f.monic()
    if f.degree == 1:
        return FqPoly(ctx, (code,))
    cs = []
    for _ in range(f.degree):
        code, r = divmod(code, ctx.q)
        cs.append(r)
    return FqPoly(ctx, cs)
