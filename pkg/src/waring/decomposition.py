"""Verified sum-of-powers decompositions and the algebras they live in.

An *algebra* here is any object exposing ``zero``, ``one``, ``add``,
``mul``, ``pow``, ``eq`` and ``scalar`` (embedding of a base-field code).
Fields, matrix rings and the ring specs all follow that shape, so one
verifier serves every ambient structure.
"""

from dataclasses import dataclass, field

import numpy as np


class FieldAlgebra:
    def __init__(self, ctx):
        self.ctx = ctx
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return self.ctx.add(a, b)

    def mul(self, a, b):
        return self.ctx.mul(a, b)

    def pow(self, a, e):
        return self.ctx.pow(a, e)

    def eq(self, a, b):
        return a == b

    def scalar(self, c):
        return c

    def to_json(self, a):
        return int(a)

    def __repr__(self):
        return f"F_{self.ctx.q}"


class MatrixAlgebra:
    """``Mat_n(F_q)`` with matrices as ``n x n`` int64 arrays of codes."""

    def __init__(self, ctx, n):
        self.ctx = ctx
        self.n = n
        self.zero = np.zeros((n, n), dtype=np.int64)
        self.one = np.eye(n, dtype=np.int64)

    def add(self, a, b):
        return self.ctx.add_vec(a, b)

    def sub(self, a, b):
        return self.ctx.sub_vec(a, b)

    def smul(self, c, a):
        return self.ctx.mul_vec(np.asarray(a), c)

    def mul(self, a, b):
        F = self.ctx
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if F.base is None:
            return (a @ b) % F.p
        # entrywise products a[i,l]*b[l,j], summed over l
        prods = F.mul_vec(a[:, :, None], b[None, :, :])
        out = prods[:, 0, :]
        for l in range(1, a.shape[1]):
            out = F.add_vec(out, prods[:, l, :])
        return out

    def pow(self, a, e):
        out = self.one
        base = np.asarray(a, dtype=np.int64)
        while e:
            if e & 1:
                out = self.mul(out, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return out

    def eq(self, a, b):
        return np.array_equal(np.asarray(a), np.asarray(b))

    def scalar(self, c):
        return self.one * c if c else self.zero.copy()

    def to_json(self, a):
        return np.asarray(a).tolist()

    def __repr__(self):
        return f"Mat_{self.n}(F_{self.ctx.q})"


def evaluate_poly(algebra, coeffs, x):
    """Horner evaluation of a polynomial with base-field coefficients."""
    acc = algebra.zero
    for c in reversed(list(coeffs)):
        acc = algebra.add(algebra.mul(acc, x), algebra.scalar(c))
    return acc


def power_sum(algebra, witnesses, k):
    acc = algebra.zero
    for w in witnesses:
        acc = algebra.add(acc, algebra.pow(w, k))
    return acc


class Verification:
    """Truthy when a decomposition checks out; ``diff`` explains a failure."""

    def __init__(self, ok, diff=""):
        self.ok = ok
        self.diff = diff

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "Verification(ok)" if self.ok else f"Verification(failed: {self.diff})"


@dataclass
class Decomposition:
    """``target == sum(w**k for w in witnesses)`` inside ``algebra``.

    ``ambient`` is one of ``"field"``, ``"matrix"``, ``"ring"``.  When
    ``witness_polys`` is given, witness ``i`` must equal that polynomial
    evaluated at ``generator`` (the matrix the witnesses are built from).
    """

    ambient: str
    algebra: object
    target: object
    k: int
    witnesses: list
    witness_polys: list = None
    generator: object = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        check = verify_decomposition(self)
        if not check:
            raise ValueError(f"decomposition does not verify: {check.diff}")

    @property
    def m(self):
        return len(self.witnesses)

    def to_json(self):
        out = {
            "ambient": self.ambient,
            "target": self.algebra.to_json(self.target),
            "k": self.k,
            "m": self.m,
            "witnesses": [self.algebra.to_json(w) for w in self.witnesses],
        }
        if self.witness_polys is not None:
            out["witness_polys"] = [list(map(int, p)) for p in self.witness_polys]
        out["verified"] = bool(verify_decomposition(self))
        return out


def verify_decomposition(d):
    """Re-evaluate the power sum exactly and compare with the target."""
    alg = d.algebra
    try:
        total = power_sum(alg, d.witnesses, d.k)
    except Exception as exc:  # malformed witnesses
        return Verification(False, f"evaluation failed: {exc!r}")
    if not alg.eq(total, d.target):
        return Verification(False, f"sum of {d.k}-th powers is {alg.to_json(total)}, expected {alg.to_json(d.target)}")
    if d.witness_polys is not None:
        if len(d.witness_polys) != len(d.witnesses):
            return Verification(False, "certificate count differs from witness count")
        for i, (w, poly) in enumerate(zip(d.witnesses, d.witness_polys)):
            val = evaluate_poly(alg, poly, d.generator)
            if not alg.eq(val, w):
                return Verification(False, f"witness {i} is not its certifying polynomial of the generator")
    return Verification(True)
