"""Waring numbers of finite fields.

The nonzero k-th powers form the subgroup ``<g^d>`` of index
``d = gcd(k, q-1)`` in ``F_q^*``, and every ``mR_k`` minus zero is a union
of its cosets.  Coset ``i`` holds ``g^e`` for ``e = i (mod d)``.  Adding a
k-th power to an element of coset ``i`` lands in the cosets of ``1 + w``,
``w`` in coset ``i``, which the Zech-log table gives directly.  So the
sumset chain reduces to a reachability problem on ``d`` nodes after one
``O(q)`` pass.  For ``d > 64`` the engine falls back to a plain bitset
sumset over all of ``F_q``.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from ._ntheory import prime_power, prime_powers_upto
from .decomposition import Decomposition, FieldAlgebra
from .errors import CapExceeded, SizeCapExceeded
from .field import build_field, size_cap

COSET_LIMIT = 64
GAMMA_MAX_K_CAP = 20


@dataclass(frozen=True)
class PowerClass:
    """The set ``R_k`` of k-th powers of a field as a boolean membership mask."""

    field: object
    k: int
    members: np.ndarray
    d: int
    size_star: int

    def __contains__(self, a):
        return bool(self.members[a])

    def coset(self, a):
        """Index of the coset of ``R_k^*`` containing the unit ``a``."""
        return self.field.log(a) % self.d

    def elements(self):
        return np.flatnonzero(self.members)


def power_residues(ctx, k):
    if k < 1:
        raise ValueError("k must be positive")
    q = ctx.q
    d = gcd(k, q - 1)
    members = np.zeros(q, dtype=bool)
    members[0] = True
    members[ctx.antilog_table[::d]] = True
    members.setflags(write=False)
    return PowerClass(ctx, k, members, d, (q - 1) // d)


@dataclass(frozen=True)
class GammaResult:
    """Outcome of the sumset chain ``R_k ⊆ 2R_k ⊆ ...``.

    ``gamma`` is ``None`` for an uncoverable field.  ``closure_sizes[m-1]``
    is ``|mR_k|``; the list stops at the first ``m`` where the chain covers
    the field or stops growing.
    """

    k: int
    q: int
    gamma: int = None
    closure_sizes: tuple = field(default=())

    @property
    def coverable(self):
        return self.gamma is not None

    @property
    def outcome(self):
        return f"Covered({self.gamma})" if self.coverable else "Uncoverable"

    def to_dict(self, closure=True):
        out = {"k": self.k, "q": self.q, "coverable": self.coverable}
        if self.coverable:
            out["gamma"] = self.gamma
        if closure:
            out["closure_sizes"] = list(self.closure_sizes)
        return out


# --- coset machinery -------------------------------------------------------


def _coset_edges(ctx, d):
    """``(src, dst)``: ``1 + g^e`` lies in coset ``dst`` for ``g^e`` in ``src``."""
    zech = ctx.zech_table
    e = np.flatnonzero(zech >= 0)
    return e % d, zech[e] % d


def _coset_masks(ctx, d):
    src, dst = _coset_edges(ctx, d)
    hit = np.zeros(d * d, dtype=bool)
    hit[src * d + dst] = True
    packed = np.packbits(hit.reshape(d, d), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _chain_by_cosets(ctx, d):
    masks = _coset_masks(ctx, d)
    full = (1 << d) - 1
    reach = 1  # coset of 1
    counts = [1]
    while reach != full:
        new = reach
        r = reach
        while r:
            low = r & -r
            new |= masks[low.bit_length() - 1]
            r ^= low
        if new == reach:
            break
        reach = new
        counts.append(bin(reach).count("1"))
    return counts, reach == full


def _translate_union(ctx, current, shifts):
    out = current.copy()
    src = np.flatnonzero(current)
    for r in shifts:
        if ctx.base is None:
            out |= np.roll(current, int(r))
        else:
            out[ctx.add_vec(src, int(r))] = True
    return out


def closure_chain_bitset(ctx, k):
    """Plain bitset sumset chain; returns the list of sets ``mR_k``."""
    pc = power_residues(ctx, k)
    shifts = ctx.antilog_table[:: pc.d]
    cur = pc.members.copy()
    chain = [cur]
    while not cur.all():
        nxt = _translate_union(ctx, cur, shifts)
        if np.array_equal(nxt, cur):
            break
        cur = nxt
        chain.append(cur)
    return chain


def gamma_of_field(ctx, k, method="auto"):
    """Waring number of an already built field.

    ``method`` is ``"cosets"``, ``"bitset"`` or ``"auto"`` (cosets when
    ``d <= 64``).
    """
    if k < 1:
        raise ValueError("k must be positive")
    q = ctx.q
    d = gcd(k, q - 1)
    if d == 1:
        return GammaResult(k, q, 1, (q,))
    if method == "cosets" or (method == "auto" and d <= COSET_LIMIT):
        counts, covered = _chain_by_cosets(ctx, d)
        star = (q - 1) // d
        sizes = tuple(1 + c * star for c in counts)
    else:
        chain = closure_chain_bitset(ctx, k)
        sizes = tuple(int(c.sum()) for c in chain)
        covered = sizes[-1] == q
    return GammaResult(k, q, len(sizes) if covered else None, sizes)


def gamma(k, q, method="auto"):
    """Waring number ``gamma(k, q)`` with its closure trace."""
    p, s = prime_power(q)
    if q > size_cap():
        raise SizeCapExceeded(f"q={q} exceeds the size cap {size_cap()}")
    if k < 1:
        raise ValueError("k must be positive")
    if gcd(k, q - 1) == 1:
        return GammaResult(k, q, 1, (q,))
    return gamma_of_field(build_field(p, s), k, method)


def closure_members(ctx, k):
    """Membership mask of the final set of the chain (all of F_q if coverable)."""
    d = gcd(k, ctx.q - 1)
    levels = coset_levels(ctx, d)
    mask = np.zeros(ctx.q, dtype=bool)
    mask[0] = True
    reached = levels[np.arange(ctx.q - 1) % d] > 0
    mask[ctx.antilog_table[reached]] = True
    return mask


# --- explicit representations ----------------------------------------------


def coset_levels(ctx, d):
    """Level of each coset: the least m with the coset inside ``mR_k``; 0 if never."""
    src, dst = _coset_edges(ctx, d)
    level = np.zeros(d, dtype=np.int64)
    level[0] = 1
    m = 1
    while True:
        frontier = level == m
        if not frontier.any():
            break
        new = np.unique(dst[frontier[src]])
        new = new[level[new] == 0]
        if not len(new):
            break
        m += 1
        level[new] = m
    return level


class _Representer:
    def __init__(self, ctx, k):
        self.ctx = ctx
        self.k = k
        q = ctx.q
        self.d = d = gcd(k, q - 1)
        self.level = coset_levels(ctx, d)
        src, dst = _coset_edges(ctx, d)
        e = np.flatnonzero(ctx.zech_table >= 0)
        # parent[j]: some e whose coset has lower level and 1+g^e lands in j
        self.parent = np.full(d, -1, dtype=np.int64)
        good = self.level[src] == self.level[dst] - 1
        good &= self.level[src] > 0
        js, first = np.unique(dst[good], return_index=True)
        self.parent[js] = e[good][first]
        n = (q - 1) // d
        self.n = n
        self.kinv = pow(k // d, -1, n) if n > 1 else 0

    def root(self, lam):
        """A k-th root of ``lam`` (a nonzero k-th power)."""
        a = self.ctx.log(lam)
        if self.n == 1:
            return 1
        return self.ctx.exp((a // self.d) * self.kinv % self.n)

    def represent(self, y):
        ctx = self.ctx
        if y == 0:
            return [0]
        out = []
        while True:
            j = ctx.log(y) % self.d
            lvl = self.level[j]
            if lvl == 0:
                return None
            if lvl == 1:
                out.append(self.root(y))
                return out
            e = int(self.parent[j])
            w = ctx.exp(e)
            lam = ctx.div(y, ctx.add(1, w))
            out.append(self.root(lam))
            y = ctx.mul(lam, w)


def represent(ctx, k, y):
    """Fewest k-th roots whose k-th powers sum to ``y``, or ``None``."""
    return _Representer(ctx, k).represent(y)


def representer(ctx, k):
    """Reusable callable ``y -> witnesses`` for many targets in one field."""
    return _Representer(ctx, k).represent


def decompose_field(ctx, k, y, m=None):
    """Verified decomposition of ``y`` in ``ctx`` as a sum of k-th powers.

    Uses the fewest witnesses possible for ``y``; ``m`` pads with zeros.
    """
    ws = represent(ctx, k, y)
    if ws is None:
        from .errors import ResidueFieldUncoverable

        raise ResidueFieldUncoverable(f"F_{ctx.q}", k)
    if m is not None:
        if len(ws) > m:
            raise ValueError(f"{y} needs {len(ws)} {k}-th powers, more than {m}")
        ws = ws + [0] * (m - len(ws))
    return Decomposition("field", FieldAlgebra(ctx), y, k, ws)


# --- scans -------------------------------------------------------------------


def default_bound(k):
    return 8 * k**4


def uncoverable_fields(k, q_bound=None):
    """All uncoverable prime powers ``q <= q_bound`` (default ``8k^4``).

    Prime fields are skipped: the closure is a subfield containing 1, and
    F_p has no proper subfield, so they are always coverable.
    """
    if k < 2:
        return []
    bound = default_bound(k) if q_bound is None else q_bound
    out = []
    for q in prime_powers_upto(bound):
        if prime_power(q)[1] == 1:
            continue
        if not gamma(k, q).coverable:
            out.append(q)
    return out


def _in_filter(res, gamma_filter):
    if gamma_filter is None:
        return True
    if not res.coverable:
        return False
    lo, hi = gamma_filter
    return lo <= res.gamma <= hi


def gamma_table(k, q_max, gamma_filter=None, q_min=2):
    """``[(q, GammaResult)]`` for prime powers in ``[q_min, q_max]``.

    ``gamma_filter=(lo, hi)`` keeps coverable fields with ``lo <= gamma <= hi``.
    """
    rows = []
    for q in prime_powers_upto(q_max, q_min):
        res = gamma(k, q)
        if _in_filter(res, gamma_filter):
            rows.append((q, res))
    return rows


def gamma_max(k, cap=GAMMA_MAX_K_CAP):
    """``max gamma(k, q)`` over coverable fields, scanning ``q <= max(k^4, 16)``.

    Past ``k^4`` two k-th powers always suffice, so the scan is complete.
    """
    if k > cap:
        raise CapExceeded(f"gamma_max is capped at k <= {cap}")
    if k == 1:
        return 1
    best = 1
    for q in prime_powers_upto(max(k**4, 16)):
        res = gamma(k, q)
        if res.coverable and res.gamma > best:
            best = res.gamma
    return best


def results_to_csv(results):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "q", "coverable", "gamma"])
    for r in results:
        w.writerow(csv_row(r))
    return buf.getvalue()


def csv_row(r):
    return [r.k, r.q, "true" if r.coverable else "false", r.gamma if r.coverable else ""]


def results_to_json(results):
    return json.dumps([r.to_dict() for r in results], separators=(",", ":"))
