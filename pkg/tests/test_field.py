import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from waring.errors import DivisionByZero, NonPrimeP, SizeCapExceeded
from waring.field import build_field, extension_field, field_of_order, parse_element


def naive_irreducible(p, f):
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            r = list(f)
            for i in range(len(r) - 1, d - 1, -1):
                c = r[i] % p
                if c:
                    for j in range(d + 1):
                        r[i - d + j] = (r[i - d + j] - c * g[j]) % p
            if not any(x % p for x in r[:d]):
                return False
    return True


def naive_mul(F, a, b):
    """Schoolbook product of digit vectors reduced by the modulus."""
    p, f, s = F.p, F.modulus, F.s
    x, y = F.coeffs(a), F.coeffs(b)
    prod = [0] * (2 * s - 1)
    for i, u in enumerate(x):
        for j, v in enumerate(y):
            prod[i + j] = (prod[i + j] + u * v) % p
    for i in range(len(prod) - 1, s - 1, -1):
        c = prod[i]
        for j in range(s + 1):
            prod[i - s + j] = (prod[i - s + j] - c * f[j]) % p
    return sum(c * p**i for i, c in enumerate(prod[:s]))


def test_f4_layout():
    F = build_field(2, 2)
    assert F.q == 4 and list(F.modulus) == [1, 1, 1]
    t, t1 = 2, 3
    assert F.mul(t, t1) == 1
    assert F.pow(t, 2) == t1
    assert F.pow(t, 3) == 1 and F.pow(t1, 3) == 1
    assert F.trace(t) == 1


def test_prime_field_is_plain_modular():
    F = build_field(7)
    assert F.s == 1 and F.base is None
    assert F.generator == 3
    for a in range(7):
        assert F.trace(a) == a
        for b in range(7):
            assert F.mul(a, b) == a * b % 7
            assert F.add(a, b) == (a + b) % 7


def test_f9_logs_round_trip():
    F = build_field(3, 2)
    assert F.q == 9
    order = next(e for e in range(1, 9) if F.pow(F.generator, e) == 1)
    assert order == 8
    for a in range(1, 9):
        assert F.exp(F.log(a)) == a


def test_f9_trace_balanced():
    F = build_field(3, 2)
    counts = np.bincount([F.trace(a) for a in range(9)], minlength=3)
    assert counts.tolist() == [3, 3, 3]


@pytest.mark.parametrize("p,s", [(2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2), (3, 4), (2, 8)])
def test_modulus_is_smallest_irreducible(p, s):
    F = build_field(p, s)
    assert naive_irreducible(p, F.modulus)
    code = sum(c * p**i for i, c in enumerate(F.modulus[:-1]))
    for smaller in range(code):
        cs = [(smaller // p**i) % p for i in range(s)] + [1]
        assert not naive_irreducible(p, cs)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128, 243, 256])
def test_generator_is_smallest_primitive(q):
    F = field_of_order(q)
    g = F.generator
    assert len(set(F.antilog_table.tolist())) == q - 1
    for c in range(1, g):
        assert len({F.pow(c, e) for e in range(q - 1)}) < q - 1


@pytest.mark.parametrize("q", [4, 8, 9, 25, 27, 49, 64, 125])
def test_multiplication_matches_schoolbook(q):
    F = field_of_order(q)
    for a in range(q):
        for b in range(q):
            assert F.mul(a, b) == naive_mul(F, a, b)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27, 81, 128, 243, 256, 1024, 2187, 4096])
def test_field_axioms(q):
    F = field_of_order(q)
    r = random.Random(q)
    for _ in range(1000):
        a, b, c = (r.randrange(q) for _ in range(3))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.sub(F.add(a, b), b) == a
    units = np.arange(1, q)
    assert (F.mul_vec(units, [F.inv(int(a)) for a in units]) == 1).all()


def test_addition_is_digitwise():
    for q in (8, 9, 25, 27, 81):
        F = field_of_order(q)
        for a in range(q):
            for b in range(q):
                want = sum(((x + y) % F.p) * F.p**i for i, (x, y) in enumerate(zip(F.coeffs(a), F.coeffs(b))))
                assert F.add(a, b) == want


def test_vector_ops_agree_with_scalar():
    for q in (2, 7, 16, 27, 49):
        F = field_of_order(q)
        a, b = np.meshgrid(np.arange(q), np.arange(q))
        a, b = a.ravel(), b.ravel()
        assert F.add_vec(a, b).tolist() == [F.add(int(x), int(y)) for x, y in zip(a, b)]
        assert F.sub_vec(a, b).tolist() == [F.sub(int(x), int(y)) for x, y in zip(a, b)]
        assert F.mul_vec(a, b).tolist() == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
        for e in (0, 1, 3, q - 1, q + 2):
            assert F.pow_vec(np.arange(q), e).tolist() == [F.pow(x, e) for x in range(q)]
        assert F.trace_vec(np.arange(q)).tolist() == [F.trace(x) for x in range(q)]


@pytest.mark.parametrize("q", [2, 4, 8, 32, 128, 1024])
def test_frobenius_bijective_in_char_two(q):
    F = field_of_order(q)
    squares = F.pow_vec(np.arange(q), 2)
    assert sorted(squares.tolist()) == list(range(q))


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27, 49, 64, 81, 125, 128, 243, 256])
def test_trace_is_additive_into_prime_field(q):
    F = field_of_order(q)
    tr = [F.trace(a) for a in range(q)]
    assert max(tr) < F.p
    for a in range(q):
        for b in range(0, q, max(1, q // 32)):
            assert tr[F.add(a, b)] == (tr[a] + tr[b]) % F.p


def test_pow_conventions():
    F = build_field(5)
    assert F.pow(0, 0) == 1
    assert F.pow(0, 3) == 0
    assert F.pow(2, -1) == 3
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        field_of_order(9).inv(0)


def test_errors():
    with pytest.raises(NonPrimeP):
        build_field(6, 1)
    with pytest.raises(SizeCapExceeded):
        build_field(2, 25)


def test_size_cap_env(monkeypatch):
    monkeypatch.setenv("WARING_SIZE_CAP", "100")
    with pytest.raises(SizeCapExceeded):
        build_field(2, 7)
    assert build_field(2, 6).q == 64


def test_tower_extension():
    F4 = build_field(2, 2)
    # t^2 + t + g is irreducible over F4 (g has trace 1)
    E = extension_field(F4, [F4.generator, 1, 1])
    assert E.q == 16 and E.p == 2 and E.s == 4
    for a in range(16):
        for b in range(16):
            assert E.mul(a, E.add(b, 1)) == E.add(E.mul(a, b), a)
    assert len(set(E.antilog_table.tolist())) == 15
    # base elements embed with unchanged codes
    for a in range(4):
        for b in range(4):
            assert E.mul(a, b) == F4.mul(a, b)
            assert E.add(a, b) == F4.add(a, b)


def test_parse_element():
    F4 = build_field(2, 2)
    assert parse_element(F4, "g+1") == 3
    assert parse_element(F4, "3") == 3
    assert parse_element(F4, "g^2") == 3
    F9 = build_field(3, 2)
    assert parse_element(F9, "2g") == F9.mul(2, F9.generator)
    assert parse_element(F9, "g-g") == 0
    with pytest.raises(ValueError):
        parse_element(F4, "7")
    with pytest.raises(ValueError):
        parse_element(F4, "x+1")


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([8, 27, 125, 343, 256]), st.data())
def test_log_homomorphism(q, data):
    F = field_of_order(q)
    a = data.draw(st.integers(1, q - 1))
    b = data.draw(st.integers(1, q - 1))
    assert F.log(F.mul(a, b)) == (F.log(a) + F.log(b)) % (q - 1)
