import math
import random

import pytest
import sympy

from waring.errors import (
    BaseNotARepresentation,
    CharDividesK,
    DerivativeNotUnit,
    HypothesisViolated,
    NoRootModJ,
    NotARoot,
)
from waring.field import build_field, field_of_order
from waring.hensel import (
    TPoly,
    f_adic_valuation,
    hensel_strong,
    hensel_weak,
    lift_power_sum,
    radical_hensel,
    random_hensel_instance,
    taylor_split,
)
from waring.poly import FqPoly
from waring.rings import PolyQuotient, Product, Zn

X = sympy.Symbol("x")
Y = sympy.Symbol("y")


def P(F, *cs):
    return FqPoly(F, cs)


def to_sympy(poly):
    return sympy.Poly(list(reversed(poly.coeffs)) or [0], X, modulus=poly.ctx.p)


# --- Taylor -----------------------------------------------------------------------


def test_taylor_square_over_f5():
    F = build_field(5)
    _, dp, tail = taylor_split(FqPoly.x(F) ** 2)
    assert dp == P(F, 0, 2)
    assert tail.coeffs[0][0] == 1 and sum(map(sum, tail.coeffs)) == 1


def test_taylor_cube_over_f7():
    F = build_field(7)
    _, dp, tail = taylor_split(FqPoly.x(F) ** 3)
    assert dp == P(F, 0, 0, 3)
    # 3x + y
    assert tail.coeffs[1][0] == 3 and tail.coeffs[0][1] == 1
    assert tail.coeffs[0][0] == 0


def test_taylor_constant():
    F = build_field(3)
    _, dp, tail = taylor_split(P(F, 2))
    assert dp.is_zero() and tail.is_zero()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_taylor_identity_against_sympy(p, rng):
    F = build_field(p)
    for _ in range(10):
        poly = FqPoly(F, [rng.randrange(p) for _ in range(rng.randint(1, 7))])
        _, dp, tail = taylor_split(poly)
        expr = sum(c * (X + Y) ** i for i, c in enumerate(poly.coeffs))
        rhs = sum(c * X**i for i, c in enumerate(poly.coeffs))
        rhs += Y * sum(c * X**i for i, c in enumerate(dp.coeffs))
        rhs += Y**2 * sum(c * X**i * Y**j for i, row in enumerate(tail.coeffs) for j, c in enumerate(row))
        diff = sympy.Poly(sympy.expand(expr - rhs), X, Y, modulus=p)
        assert diff.is_zero


@pytest.mark.parametrize("q", [4, 9])
def test_taylor_evaluates_consistently_in_extension_fields(q, rng):
    F = field_of_order(q)
    for _ in range(5):
        poly = FqPoly(F, [rng.randrange(q) for _ in range(5)])
        _, dp, tail = taylor_split(poly)
        for _ in range(10):
            x, y = rng.randrange(q), rng.randrange(q)
            rhs = F.add(F.add(poly(x), F.mul(y, dp(x))), F.mul(F.mul(y, y), tail(x, y)))
            assert poly(F.add(x, y)) == rhs


# --- valuation ----------------------------------------------------------------------


def test_valuation_examples():
    F = build_field(3)
    x = FqPoly.x(F)
    assert f_adic_valuation(x**2 * (x + 1), x) == 2
    assert f_adic_valuation(x + 1, x) == 0
    f = x**2 + 1
    assert f_adic_valuation(f**3, f) == 3
    assert f_adic_valuation(FqPoly(F), x) == math.inf


def test_valuation_postcondition(rng):
    F = build_field(5)
    f = P(F, 2, 0, 1)  # x^2 + 2 is irreducible over F5
    for _ in range(30):
        g = FqPoly(F, [rng.randrange(5) for _ in range(rng.randint(1, 8))])
        if g.is_zero():
            continue
        v = f_adic_valuation(g, f)
        assert not g % f**v
        assert g % f ** (v + 1)


# --- weak lifting ----------------------------------------------------------------


def test_weak_square_root_of_one_plus_x():
    F = build_field(5)
    x = FqPoly.x(F)
    Q = TPoly(F, [-(1 + x), 0, 1])
    g2 = hensel_weak(Q, P(F, 1), x, 1, 1)
    assert g2 == 1 + 3 * x
    assert not (g2 * g2 - (1 + x)) % x**2


def test_weak_root_of_x_at_one_over_f7():
    F = build_field(7)
    x = FqPoly.x(F)
    f = x - 1
    g2 = hensel_weak(TPoly(F, [-x, 0, 1]), P(F, 1), f, 1, 1)
    assert g2 == 1 + 4 * f
    assert not (g2 * g2 - x) % f**2


def test_weak_exact_root_is_fixed():
    F = build_field(7)
    x = FqPoly.x(F)
    g = 2 + x
    Q = TPoly(F, [-(g * g), 0, 1])
    assert hensel_weak(Q, g, x, 2, 2) == g


def test_weak_errors():
    F = build_field(5)
    x = FqPoly.x(F)
    with pytest.raises(NotARoot):
        hensel_weak(TPoly(F, [-(2 + x), 0, 1]), P(F, 1), x, 1, 1)
    with pytest.raises(DerivativeNotUnit):
        hensel_weak(TPoly(F, [-(x**2), 0, 1]), FqPoly(F), x, 1, 1)
    with pytest.raises(HypothesisViolated):
        hensel_weak(TPoly(F, [-(1 + x), 0, 1]), P(F, 1), x, 1, 2)


def test_weak_iterated_square_root_against_sympy():
    F = build_field(7)
    x = FqPoly.x(F)
    Q = TPoly(F, [-(2 + x), 0, 1])
    g = P(F, 3)  # 3^2 = 2 mod 7
    n = 1
    while n < 16:
        m = min(n, 16 - n)
        g = hensel_weak(Q, g, x, n, m)
        n += m
    rem = sympy.rem(to_sympy(g * g - (2 + x)), to_sympy(x**16))
    assert rem.is_zero


# --- strong lifting -----------------------------------------------------------------


def test_strong_with_unit_derivative_matches_weak():
    F = build_field(5)
    x = FqPoly.x(F)
    Q = TPoly(F, [-(1 + x), 0, 1])
    assert hensel_strong(Q, P(F, 1), x, 1) == hensel_weak(Q, P(F, 1), x, 1, 1)


def test_strong_with_positive_valuation():
    # Q(t) = (t - 1)^2 + x (t - 1) + x^3 : Q(1) = x^3, Q'(1) = x, so m = 1 < 3/2
    F = build_field(3)
    x = FqPoly.x(F)
    Q = TPoly(F, [1 - x + x**3, x - 2, 1])
    g2 = hensel_strong(Q, P(F, 1), x, 3)
    assert not Q(g2) % x**4
    assert not (g2 - 1) % x**2
    assert f_adic_valuation(Q.derivative()(g2), x) == 1


def test_strong_exact_root_keeps_residue():
    F = build_field(3)
    x = FqPoly.x(F)
    # (t - 1)(t - 1 - x) has the exact root 1 with Q'(1) = -x
    Q = TPoly(F, [1 + x, -(2 + x), 1])
    g2 = hensel_strong(Q, P(F, 1), x, 3)
    assert not (g2 - 1) % x**2


def test_strong_rejects_small_n():
    F = build_field(3)
    x = FqPoly.x(F)
    Q = TPoly(F, [1 - x + x**3, x - 2, 1])
    with pytest.raises(HypothesisViolated):
        hensel_strong(Q, P(F, 1), x, 2)
    with pytest.raises(NotARoot):
        hensel_strong(TPoly(F, [x - 1, 0, 1]), P(F, 1), x, 3)


SMALL_Q = [2, 3, 4, 5, 7, 8, 9]


@pytest.mark.parametrize("q", SMALL_Q)
def test_random_weak_instances(q):
    F = field_of_order(q)
    rng = random.Random(q)
    for _ in range(20):
        inst = random_hensel_instance(F, rng, "weak")
        g2 = hensel_weak(inst.Q, inst.g, inst.f, inst.n, inst.m)
        assert not inst.Q(g2) % inst.f ** (inst.n + inst.m)
        assert not (g2 - inst.g) % inst.f**inst.n


@pytest.mark.parametrize("q", SMALL_Q)
def test_random_strong_instances(q):
    F = field_of_order(q)
    rng = random.Random(100 + q)
    for _ in range(20):
        inst = random_hensel_instance(F, rng, "strong")
        g2 = hensel_strong(inst.Q, inst.g, inst.f, inst.n)
        assert f_adic_valuation(inst.Q.derivative()(inst.g), inst.f) == inst.m
        assert not inst.Q(g2) % inst.f ** (inst.n + 1)
        assert not (g2 - inst.g) % inst.f ** (inst.n - inst.m)
        assert f_adic_valuation(inst.Q.derivative()(g2), inst.f) == inst.m


def test_instance_generator_is_seeded():
    F = build_field(5)
    a = random_hensel_instance(F, random.Random(3), "strong")
    b = random_hensel_instance(F, random.Random(3), "strong")
    assert a.g == b.g and a.f == b.f and [c.coeffs for c in a.Q.coeffs] == [c.coeffs for c in b.Q.coeffs]


# --- radical lifting ----------------------------------------------------------------


def test_radical_cube_root_of_seven_mod_25():
    R = Zn(25)
    assert radical_hensel(R, [R.from_int(-7), 0, 0, 1], 3) == 18
    assert pow(18, 3, 25) == 7


def test_radical_fifth_root_of_four_mod_27():
    R = Zn(27)
    r = radical_hensel(R, [R.from_int(-4), 0, 0, 0, 0, 1], 1)
    assert pow(r, 5, 27) == 4 and r % 3 == 1


def test_radical_in_a_field_keeps_exact_root():
    R = Zn(7)
    assert radical_hensel(R, [R.from_int(-1), 0, 0, 1], 2) == 2


def test_radical_errors():
    R = Zn(25)
    with pytest.raises(NoRootModJ):
        radical_hensel(R, [R.from_int(-7), 0, 0, 1], 1)
    with pytest.raises(DerivativeNotUnit):
        radical_hensel(R, [0, 0, 1], 5)


def test_radical_in_poly_quotient():
    F = build_field(3)
    R = PolyQuotient(F, [0, 1], 4)  # F3[x]/(x^4)
    x = FqPoly.x(F)
    target = 1 + x + 2 * x**3
    poly = [R.neg(target), R.zero, R.one]
    r = radical_hensel(R, poly, R.one)
    assert R.eq(R.mul(r, r), target)


def test_radical_in_product():
    R = Product([Zn(9), Zn(49)])
    a = (7, 11)
    poly = [R.neg(a), R.zero, R.zero, R.zero, R.zero, R.one]
    # fifth powers are bijective mod 3 and mod 7
    a0 = tuple(next(b for b in range(p) if pow(b, 5, p) == c % p) for p, c in ((3, 7), (7, 11)))
    r = radical_hensel(R, poly, a0)
    assert R.pow(r, 5) == a


def test_radical_iterations_bounded(rng):
    for _ in range(50):
        p = rng.choice([2, 3, 5, 7])
        e = rng.randint(1, 5)
        n = p**e
        k = rng.choice([k for k in range(2, 12) if math.gcd(k, n) == 1 and math.gcd(k, p - 1) == 1] or [1])
        R = Zn(n)
        a = rng.choice([u for u in range(n) if math.gcd(u, n) == 1])
        a0 = next(b for b in range(p) if pow(b, k, p) == a % p)
        r = radical_hensel(R, [R.neg(a)] + [0] * (k - 1) + [1], a0)
        assert pow(r, k, n) == a and (r - a0) % p == 0


# --- power-sum lifting ---------------------------------------------------------------


def test_lift_power_sum_trivial_level():
    F = build_field(5)
    x = FqPoly.x(F)
    base = [P(F, 1), FqPoly(F)]
    assert lift_power_sum(1 + x, 2, base, x, 1) == base


def test_lift_power_sum_squares_over_f5():
    F = build_field(5)
    x = FqPoly.x(F)
    out = lift_power_sum(1 + x, 2, [P(F, 1), FqPoly(F)], x, 2)
    assert len(out) == 2
    assert not (sum((w * w for w in out), FqPoly(F)) - (1 + x)) % x**2


def test_lift_power_sum_all_zero_odd_k():
    F = build_field(5)
    x = FqPoly.x(F)
    out = lift_power_sum(x**2, 3, [FqPoly(F)], x, 3)
    total = sum((w**3 for w in out), FqPoly(F))
    assert not (total - x**2) % x**3
    assert out[0] % x == 1 and out[1] % x == 4


def test_lift_power_sum_all_zero_even_k_needs_extra_witness():
    # -1 is not a square in F3, so 1 + (-1) needs 1 + 2 squares
    F = build_field(3)
    x = FqPoly.x(F)
    out = lift_power_sum(x, 2, [FqPoly(F), FqPoly(F)], x, 4)
    assert len(out) == 3
    assert not (sum((w * w for w in out), FqPoly(F)) - x) % x**4


def test_lift_power_sum_errors():
    F = build_field(3)
    x = FqPoly.x(F)
    with pytest.raises(CharDividesK):
        lift_power_sum(x, 3, [P(F, 1)], x, 2)
    with pytest.raises(BaseNotARepresentation):
        lift_power_sum(1 + x, 2, [FqPoly(F)], x, 2)


@pytest.mark.parametrize("q,k", [(5, 2), (7, 3), (4, 3), (9, 4), (11, 5), (8, 3)])
def test_lift_power_sum_random(q, k, rng):
    from waring.gamma import represent
    from waring.hensel import random_irreducible
    from waring.poly import residue_field, residue_image, residue_preimage

    F = field_of_order(q)
    for _ in range(10):
        f = random_irreducible(F, rng.randint(1, 2), rng)
        i = rng.randint(1, 4)
        target = FqPoly(F, [rng.randrange(q) for _ in range(f.degree * i)])
        E = residue_field(F, f)
        ws = represent(E, k, residue_image(F, f, target))
        if ws is None:
            continue
        base = [residue_preimage(F, f, w) for w in ws]
        out = lift_power_sum(target, k, base, f, i)
        total = sum((w.powmod(k, f**i) for w in out), FqPoly(F))
        assert not (total - target) % f**i
        assert len(out) <= len(base) + 1 + (E.q - 1)
