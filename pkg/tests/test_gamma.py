import json
from importlib import resources
from math import gcd

import numpy as np
import pytest

from waring._ntheory import prime_power, prime_powers_upto
from waring.errors import CapExceeded, NonPrimePowerQ, SizeCapExceeded
from waring.field import build_field, field_of_order
from waring.gamma import (
    closure_chain_bitset,
    closure_members,
    decompose_field,
    gamma,
    gamma_max,
    gamma_of_field,
    gamma_table,
    power_residues,
    represent,
    results_to_csv,
    results_to_json,
    uncoverable_fields,
)

from oracles import naive_gamma


def test_cubes_in_small_fields():
    assert np.flatnonzero(power_residues(build_field(2, 2), 3).members).tolist() == [0, 1]
    assert np.flatnonzero(power_residues(build_field(7), 3).members).tolist() == [0, 1, 6]
    assert power_residues(build_field(11), 3).members.all()


@pytest.mark.parametrize("q", [5, 8, 9, 13, 16, 25, 27, 49, 64, 81])
@pytest.mark.parametrize("k", [2, 3, 4, 6, 8])
def test_power_class_invariants(q, k):
    F = field_of_order(q)
    pc = power_residues(F, k)
    image = {F.pow(a, k) for a in range(q)}
    assert set(np.flatnonzero(pc.members).tolist()) == image
    assert pc.members.sum() == pc.size_star + 1
    assert pc.d == gcd(k, q - 1)
    stars = np.flatnonzero(pc.members)[1:]
    for r in stars[:5]:
        assert pc.members[F.mul_vec(stars, int(r))].all()


def test_named_values():
    assert gamma(3, 7).gamma == 3
    assert not gamma(3, 4).coverable
    assert gamma(4, 5).gamma == 4
    assert gamma(4, 13).gamma == 3
    assert gamma(8, 17).gamma == 8
    assert gamma(3, 7).outcome == "Covered(3)"
    assert gamma(3, 4).outcome == "Uncoverable"


@pytest.mark.parametrize("q", [3, 5, 9, 25, 49, 121, 2, 4, 8, 64])
def test_squares(q):
    assert gamma(2, q).gamma == (1 if q % 2 == 0 else 2)


def test_closure_sizes_shape():
    r = gamma(4, 13)
    assert r.closure_sizes == (4, 10, 13)
    r = gamma(3, 4)
    assert r.closure_sizes == (2,)


def _small_cases():
    for q in prime_powers_upto(121):
        for k in range(1, 13):
            yield q, k


@pytest.mark.parametrize("q", prime_powers_upto(121))
def test_matches_naive_oracle(q):
    F = field_of_order(q)
    for k in range(1, 13):
        want = naive_gamma(F.p, F.modulus, k) if F.s > 1 else naive_gamma(F.p, [0, 1], k)
        assert gamma(k, q).gamma == want, (k, q)
        assert gamma_of_field(F, k, method="bitset").gamma == want, (k, q)


@pytest.mark.parametrize("k", [3, 4, 6, 12, 24, 65, 130])
def test_both_methods_agree(k):
    for q in prime_powers_upto(700):
        a = gamma(k, q, method="cosets")
        b = gamma(k, q, method="bitset")
        assert a == b, (k, q)


def test_scan_invariants():
    for k in range(1, 13):
        for q, r in gamma_table(k, 2000):
            d = gcd(k, q - 1)
            sizes = r.closure_sizes
            assert all(a < b for a, b in zip(sizes, sizes[1:]))
            assert len(sizes) - 1 <= d
            assert (r.gamma == 1) == (d == 1)
            if r.coverable:
                assert sizes[r.gamma - 1] == q
                assert r.gamma <= k


@pytest.mark.parametrize("k,q", [(3, 4), (6, 25), (12, 121), (5, 16), (7, 8), (9, 64), (10, 81)])
def test_uncoverable_closure_is_a_subfield(k, q):
    F = field_of_order(q)
    assert not gamma(k, q).coverable
    mask = closure_members(F, k)
    members = np.flatnonzero(mask)
    t = int(round(np.log(len(members)) / np.log(F.p)))
    assert F.p**t == len(members) and F.s % t == 0 and t < F.s
    a, b = np.meshgrid(members, members)
    assert mask[F.add_vec(a, b)].all()
    assert mask[F.mul_vec(a, b)].all()
    # the stabilized set is exactly the last bitset in the plain chain
    assert np.array_equal(closure_chain_bitset(F, k)[-1], mask)


def test_uncoverable_rows():
    assert uncoverable_fields(12) == [4, 9, 25, 121]
    assert uncoverable_fields(11) == []
    assert uncoverable_fields(6) == [4, 25]


def test_table_filters():
    assert [q for q, _ in gamma_table(5, 100, (5, 5))] == [11]
    assert [q for q, _ in gamma_table(6, 250, (3, 3))] == [37, 43, 49, 61, 67, 73, 79, 109, 139, 223]
    assert all(r.gamma == 1 for _, r in gamma_table(1, 300))


def test_gamma_max():
    assert gamma_max(7) == 4
    assert gamma_max(3) == 3
    assert gamma_max(13) == 6
    with pytest.raises(CapExceeded):
        gamma_max(21)


def test_errors():
    with pytest.raises(NonPrimePowerQ):
        gamma(3, 12)
    with pytest.raises(SizeCapExceeded):
        gamma(3, 2**25)


@pytest.mark.parametrize("q", [7, 13, 16, 17, 25, 27, 31, 64, 81, 121, 125])
@pytest.mark.parametrize("k", [2, 3, 4, 5, 6, 8, 12])
def test_represent_is_minimal_and_exact(q, k):
    F = field_of_order(q)
    res = gamma(k, q)
    powers = {F.pow(a, k) for a in range(q)}
    level = {0: 1}
    frontier = set(powers)
    reach, m = set(powers), 1
    for y in reach:
        level[y] = 1
    while len(reach) < q:
        nxt = {F.add(x, r) for x in reach for r in powers}
        if nxt == reach:
            break
        m += 1
        for y in nxt - reach:
            level[y] = m
        reach = nxt
    for y in range(q):
        ws = represent(F, k, y)
        if y not in level:
            assert ws is None
            continue
        total = 0
        for w in ws:
            total = F.add(total, F.pow(w, k))
        assert total == y
        assert len(ws) == level[y]
    if res.coverable:
        assert max(level.values()) == res.gamma


def test_decompose_field_pads():
    F = build_field(7)
    d = decompose_field(F, 3, 3)
    assert d.witnesses == [1, 1, 1]
    d = decompose_field(F, 3, 1, m=3)
    assert d.witnesses == [1, 0, 0]


def test_emitters():
    rs = [gamma(3, 4), gamma(3, 7)]
    assert results_to_csv(rs) == "k,q,coverable,gamma\n3,4,false,\n3,7,true,3\n"
    data = json.loads(results_to_json(rs))
    assert data[0] == {"k": 3, "q": 4, "coverable": False, "closure_sizes": [2]}
    assert data[1]["gamma"] == 3
