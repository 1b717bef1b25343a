"""Statistics over the coefficient space A^{12d+3}(F_q): minimality and
smoothness densities, the singular-surface locus via incidence marking,
and orbit-stabilizer audits for the change-of-coordinates group.

Coefficient tuples are encoded as mixed-radix integers with a_{2,0} the
fastest digit, so exhaustive passes are flat numpy loops over index
ranges and reports shard reproducibly.
"""

import itertools
import time

import numpy as np

from . import ffpoly, weierstrass
from .ffpoly import BinaryForm, Place, UniPoly, ord_at
from .rng import SplitMix64

_EXHAUSTIVE_BUDGET = 1 << 28
_CHUNK = 1 << 20


def coeff_lengths(d):
    return (2 * d + 1, 4 * d + 1, 6 * d + 1)


def tuple_to_index(coeffs, q):
    """Mixed-radix code of a flat coefficient tuple, first entry fastest."""
    idx = 0
    for c in reversed(coeffs):
        idx = idx * q + c
    return idx


def index_to_tuple(idx, q, width):
    out = []
    for _ in range(width):
        out.append(idx % q)
        idx //= q
    return out


def _forms_from_digits(F, d, digits):
    l2, l4, l6 = coeff_lengths(d)
    a2 = BinaryForm(F, 2 * d, digits[:l2])
    a4 = BinaryForm(F, 4 * d, digits[l2:l2 + l4])
    a6 = BinaryForm(F, 6 * d, digits[l2 + l4:])
    return a2, a4, a6


class CensusReport:
    def __init__(self, q, d, mode, seed, counts, ratios, stacky_count,
                 elapsed, n=None):
        self.q = q
        self.d = d
        self.mode = mode
        self.seed = seed
        self.n = n
        self.counts = counts
        self.ratios = ratios  # name -> (fraction, 95% radius)
        self.stacky_count = stacky_count
        self.elapsed = elapsed

    def to_json(self):
        return {
            "q": self.q,
            "d": self.d,
            "mode": self.mode,
            "seed": self.seed,
            "n": self.n,
            "counts": dict(self.counts),
            "ratios": {k: {"fraction": v[0], "radius_95": v[1]}
                       for k, v in self.ratios.items()},
            "stacky_count": self.stacky_count,
            "elapsed_seconds": self.elapsed,
        }


def _classify_tuple(F, d, digits):
    """(minimal, disc_nonzero, smooth, squarefree_disc) for one tuple."""
    a2, a4, a6 = _forms_from_digits(F, d, digits)
    minimal = weierstrass.minimality_of_forms(F, d, a2, a4, a6)
    disc = weierstrass._disc_form(a2, a4, a6)
    if disc.is_zero():
        return minimal, False, False, False
    m = weierstrass.WeierstrassModel(F, d, a2, a4, a6)
    smooth = minimal and weierstrass.is_smooth_surface(m)
    dt = disc.dehomog_t()
    sqfree = ffpoly.is_squarefree(dt) and ord_at(disc, Place.infinity()) <= 1
    return minimal, True, smooth, sqfree


def run_census(q, d, mode="sample", n=10 ** 4, seed=0):
    """Model-by-model statistics; p >= 5 (the smoothness classification
    rests on the tame Kodaira tables)."""
    F = ffpoly.field_make(q)  # rejects p in {2, 3}
    if F.k != 1:
        raise ValueError("census runs over prime fields")
    width = 12 * d + 3
    total_space = q ** width
    t0 = time.time()

    if mode == "exhaustive":
        if total_space > _EXHAUSTIVE_BUDGET:
            raise ValueError("budget exceeded: q^(12d+3) = %d > 2^28" % total_space)
        indices = range(total_space)
        n_models = total_space
        seed_out = None
        rng = None
    elif mode == "sample":
        if n < 10 ** 4:
            raise ValueError("sampling needs N >= 10^4")
        rng = SplitMix64(seed)
        n_models = n
        seed_out = seed
        indices = None
    else:
        raise ValueError("mode must be 'exhaustive' or 'sample'")

    minimal = smooth = sqfree = disc0 = 0
    it = indices if indices is not None else range(n_models)
    for i in it:
        if rng is None:
            digits = index_to_tuple(i, q, width)
        else:
            digits = [rng.below(q) for _ in range(width)]
        mn, dnz, sm, sq = _classify_tuple(F, d, digits)
        minimal += mn
        smooth += sm
        sqfree += sq
        disc0 += not dnz

    counts = {
        "total": total_space if mode == "exhaustive" else n_models,
        "minimal": minimal,
        "smooth": smooth,
        "squarefree_disc": sqfree,
        "disc_zero": disc0,
    }
    ratios = {}
    for key in ("minimal", "smooth", "squarefree_disc"):
        frac = counts[key] / counts["total"]
        if mode == "exhaustive":
            rad = 0.0
        else:
            rad = 1.96 * (frac * (1 - frac) / n_models) ** 0.5
        ratios[key] = (frac, rad)

    group_order = q ** (2 * d + 1) * (q - 1)
    if mode == "exhaustive":
        stacky = minimal / group_order
        assert stacky * group_order == minimal  # sanity anchor, exact
    else:
        stacky = (minimal / n_models) * total_space / group_order
    return CensusReport(q, d, mode, seed_out, counts, ratios, stacky,
                        time.time() - t0, n=n_models)


# ---------------------------------------------------------------------------
# exhaustive minimality at small q (pure linear algebra, runs even at p = 3)

def _vector_taylor(cols, alpha, k, p):
    """First k Taylor coefficients at alpha of the polynomial whose
    coefficient arrays (low degree first) are cols, all mod p.  Repeated
    synthetic division, vectorized over the tuple axis."""
    cs = [c.copy() for c in cols]
    out = []
    for _ in range(k):
        # divide by (t - alpha): remainder is the next Taylor coefficient
        acc = cs[-1]
        quot = [acc]
        for c in reversed(cs[:-1]):
            acc = (acc * alpha + c) % p
            quot.append(acc)
        out.append(quot.pop())
        cs = list(reversed(quot))
        if not cs:
            cs = [np.zeros_like(alpha * out[0])]
    return out


def exhaustive_minimality(q, d=1):
    """Exact count of minimal tuples over the whole coefficient space.

    Two independent routes whose agreement is asserted: a vectorized
    per-tuple divisibility test at every candidate place (degree <= d
    plus infinity), and direct enumeration of the non-minimal locus as a
    union of coordinate subspaces.  Feasible budget: q^{12d+3} <= 2^28.
    """
    if d != 1:
        raise ValueError("exhaustive minimality implemented for d = 1")
    width = 12 * d + 3
    total = q ** width
    if total > _EXHAUSTIVE_BUDGET:
        raise ValueError("budget exceeded: q^(12d+3) = %d > 2^28" % total)
    t0 = time.time()
    l2, l4, l6 = coeff_lengths(d)

    # route 1: per-tuple divisibility marking, chunked
    nonmin_indices = []
    nonmin_count = 0
    for lo in range(0, total, _CHUNK):
        idx = np.arange(lo, min(lo + _CHUNK, total), dtype=np.int64)
        digs = []
        tmp = idx.copy()
        for _ in range(width):
            digs.append(tmp % q)
            tmp //= q
        a2c = digs[:l2]
        a4c = digs[l2:l2 + l4]
        a6c = digs[l2 + l4:]
        bad = np.zeros(idx.shape, dtype=bool)
        for alpha in range(q):
            a = np.int64(alpha)
            t2 = _vector_taylor(a2c, a, 2, q)
            t4 = _vector_taylor(a4c, a, 4, q)
            t6 = _vector_taylor(a6c, a, 6, q)
            here = np.ones(idx.shape, dtype=bool)
            for t in t2 + t4 + t6:
                here &= t == 0
            bad |= here
        # infinity: ord >= (2, 4, 6) means every non-constant coefficient is 0
        here = np.ones(idx.shape, dtype=bool)
        for c in a2c[1:] + a4c[1:] + a6c[1:]:
            here &= c == 0
        bad |= here
        nonmin_count += int(bad.sum())
        nonmin_indices.extend((idx[bad]).tolist())

    # route 2: the non-minimal locus is the union over places v of the
    # subspaces {a2 = c2 v^2, a4 = c4 v^4, a6 = c6 v^6}
    F = ffpoly.Field(q, 1)
    oracle = set()
    vs = [UniPoly(F, [F.sub(F.zero, F.from_int(a)), F.one]) for a in range(q)]
    for v in vs + [None]:  # None marks the place at infinity
        if v is None:
            pows = [UniPoly.const(F, F.one)] * 3
        else:
            v2 = v * v
            pows = [v2, v2 * v2, v2 * v2 * v2]
        for c2 in range(q):
            for c4 in range(q):
                for c6 in range(q):
                    parts = []
                    for c, pw, ln in zip((c2, c4, c6), pows, (l2, l4, l6)):
                        poly = pw.scale(F.from_int(c))
                        cs = list(poly.coeffs) + [0] * (ln - len(poly.coeffs))
                        parts.extend(int(x) for x in cs[:ln])
                    oracle.add(tuple_to_index(parts, q))
    assert set(nonmin_indices) == oracle, "minimality routes disagree"

    return {
        "q": q, "d": d, "total": total,
        "minimal": total - nonmin_count,
        "nonminimal": nonmin_count,
        "oracle_nonminimal": len(oracle),
        "minimal_fraction": (total - nonmin_count) / total,
        "elapsed_seconds": time.time() - t0,
    }


# ---------------------------------------------------------------------------
# the singular-surface locus via the incidence correspondence

def _taylor_functional(width, offset, length, alpha, j, p):
    """Row vector of the functional 'j-th Taylor coefficient at alpha' on
    the coefficient block [offset, offset+length), via binomials mod p."""
    import math
    row = [0] * width
    for m in range(j, length):
        row[offset + m] = (math.comb(m, j) * pow(int(alpha), m - j, p)) % p
    return row


def _infinity_functional(width, offset, length, j):
    """Coefficient of s^j in the s-chart: the (length-1-j)-th entry."""
    row = [0] * width
    row[offset + length - 1 - j] = 1
    return row


def _solve_mod_p(rows, rhs, p):
    """Gaussian elimination mod p; returns (rank, particular, null_basis)."""
    width = len(rows[0])
    aug = [list(r) + [b % p] for r, b in zip(rows, rhs)]
    pivots = []
    rank = 0
    for col in range(width):
        piv = None
        for r in range(rank, len(aug)):
            if aug[r][col] % p != 0:
                piv = r
                break
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        inv = pow(aug[rank][col], p - 2, p)
        aug[rank] = [(x * inv) % p for x in aug[rank]]
        for r in range(len(aug)):
            if r != rank and aug[r][col] % p != 0:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[rank])]
        pivots.append(col)
        rank += 1
    for r in range(rank, len(aug)):
        if aug[r][width] % p != 0:
            raise ValueError("inconsistent incidence system")
    particular = [0] * width
    for r, col in enumerate(pivots):
        particular[col] = aug[r][width]
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * width
        vec[fc] = 1
        for r, col in enumerate(pivots):
            vec[col] = (-aug[r][fc]) % p
        basis.append(vec)
    return rank, particular, basis


def _incidence_system(q, d, x0, tpoint):
    """The three Jacobian constraints at base point (x0, tpoint), as rows
    over the 12d+3 coefficients.  tpoint is alpha in F_q or 'inf'."""
    width = 12 * d + 3
    l2, l4, l6 = coeff_lengths(d)
    offs = (0, l2, l2 + l4)
    lens = (l2, l4, l6)

    def fnl(block, j):
        if tpoint == "inf":
            return _infinity_functional(width, offs[block], lens[block], j)
        return _taylor_functional(width, offs[block], lens[block], tpoint, j, q)

    def combine(weights, j):
        row = [0] * width
        for w, block in zip(weights, range(3)):
            part = fnl(block, j)
            for i in range(width):
                row[i] = (row[i] + w * part[i]) % q
        return row

    x0 = int(x0) % q
    # y^2 = x^3 + a2 x^2 + a4 x + a6, at (x = x0, y = 0, local parameter u):
    #   value:        x0^3 + a2(0) x0^2 + a4(0) x0 + a6(0) = 0
    #   d/dx:       3 x0^2 + 2 a2(0) x0 + a4(0)            = 0
    #   d/du:         a2'(0) x0^2 + a4'(0) x0 + a6'(0)     = 0
    rows = [
        combine((x0 * x0, x0, 1), 0),
        combine((2 * x0, 1, 0), 0),
        combine((x0 * x0, x0, 1), 1),
    ]
    rhs = [(-pow(x0, 3, q)) % q, (-3 * x0 * x0) % q, 0]
    return rows, rhs


class SingularDivisorReport:
    def __init__(self, q, d, image_count, image_ratio, direct_mode,
                 direct_count, direct_detail, elapsed):
        self.q = q
        self.d = d
        self.image_count = image_count
        self.image_ratio = image_ratio
        self.direct_mode = direct_mode
        self.direct_count = direct_count
        self.direct_detail = direct_detail
        self.elapsed = elapsed

    def to_json(self):
        return {
            "q": self.q, "d": self.d,
            "image_count": self.image_count,
            "image_ratio": self.image_ratio,
            "direct_mode": self.direct_mode,
            "direct_count": self.direct_count,
            "direct_detail": dict(self.direct_detail),
            "elapsed_seconds": self.elapsed,
        }


def incidence_mask(q, d=1):
    """Boolean mark array over the whole coefficient space: True where
    some rational base point (x0, t-point) satisfies the three Jacobian
    constraints.  Pure linear algebra, so it runs at p = 3 as well."""
    if d != 1:
        raise ValueError("incidence marking implemented for d = 1")
    width = 12 * d + 3
    total = q ** width
    if total > _EXHAUSTIVE_BUDGET:
        raise ValueError("budget exceeded: q^(12d+3) = %d > 2^28" % total)
    mask = np.zeros(total, dtype=bool)
    radix = q ** np.arange(width, dtype=np.int64)
    tpoints = list(range(q)) + ["inf"]
    for tp in tpoints:
        for x0 in range(q):
            rows, rhs = _incidence_system(q, d, x0, tp)
            rank, part, basis = _solve_mod_p(rows, rhs, q)
            assert rank == 3, "incidence system must have rank 3"
            nfree = len(basis)
            count = q ** nfree
            combos = np.empty((count, nfree), dtype=np.int32)
            tmp = np.arange(count, dtype=np.int64)
            for j in range(nfree):
                combos[:, j] = tmp % q
                tmp //= q
            B = np.array(basis, dtype=np.int32)
            P = np.array(part, dtype=np.int32)
            sol = (combos @ B + P[None, :]) % q
            mask[sol.astype(np.int64) @ radix] = True
    return mask


def _direct_singular(F, d, digits):
    """Does the tuple define a singular surface?  Jacobian route only.

    A vanishing discriminant means the multiple-root section (x0(t), 0)
    lies on the surface with f = f_x = 0 identically, and differentiating
    f(x0(t), t) = 0 kills f_t along it too, so such tuples are singular
    without further search.
    """
    a2, a4, a6 = _forms_from_digits(F, d, digits)
    disc = weierstrass._disc_form(a2, a4, a6)
    if disc.is_zero():
        return True
    m = weierstrass.WeierstrassModel(F, d, a2, a4, a6)
    return len(weierstrass.singular_surface_points(m)) > 0


def singular_divisor_count(q, d=1, seed=0, direct_samples=4000):
    """(image_count, direct_count) for the singular-surface locus.

    image_count is exact (bitset union of the marked codimension-3
    subspaces).  The per-model direct count over the full space is out of
    time budget in this implementation, so direct_count is a sampling
    estimate; the containment audit (marked => directly singular) runs on
    the same sample.
    """
    t0 = time.time()
    mask = incidence_mask(q, d)
    image_count = int(mask.sum())
    width = 12 * d + 3
    total = q ** width

    F = ffpoly.Field(q, 1)
    rng = SplitMix64(seed)
    sampled_singular = 0
    sampled_marked = 0
    containment_violations = 0
    for _ in range(direct_samples):
        idx = rng.below(total)
        digits = index_to_tuple(idx, q, width)
        sing = _direct_singular(F, d, digits)
        marked = bool(mask[idx])
        sampled_singular += sing
        sampled_marked += marked
        if marked and not sing:
            containment_violations += 1
    assert containment_violations == 0, \
        "incidence-marked model with no singular point"

    direct_count = round(sampled_singular / direct_samples * total)
    detail = {
        "samples": direct_samples,
        "seed": seed,
        "sampled_singular": sampled_singular,
        "sampled_marked": sampled_marked,
        "containment_violations": containment_violations,
    }
    return SingularDivisorReport(
        q, d, image_count, image_count / q ** (width - 1), "sample",
        direct_count, detail, time.time() - t0)


# ---------------------------------------------------------------------------
# orbit-stabilizer audit

def orbit_stabilizer_audit(q, d, count, seed=0):
    """For `count` random minimal models, enumerate the full orbit under
    G(F_q) = G_a^{2d+1} x| G_m and check |orbit| * |stabilizer| = |G|;
    also that each orbit element is hit exactly |stabilizer| times (the
    weighted-count consistency behind the stacky identity)."""
    F = ffpoly.field_make(q)
    group_order = q ** (2 * d + 1) * (q - 1)
    rng = SplitMix64(seed)
    elems = list(F.elements())
    nonzero = [x for x in elems if x != F.zero]
    results = []
    for _ in range(count):
        m = weierstrass.random_model(F, d, rng, minimal=True)
        hits = {}
        for r_coeffs in itertools.product(elems, repeat=2 * d + 1):
            r = BinaryForm(F, 2 * d, list(r_coeffs))
            for lam in nonzero:
                g = weierstrass.GroupElement(r, lam)
                b2, b4, b6 = weierstrass.act_on_forms(g, m.a2, m.a4, m.a6)
                key = b2.coeffs + b4.coeffs + b6.coeffs
                hits[key] = hits.get(key, 0) + 1
        stab = weierstrass.stabilizer_order(m)
        orbit_size = len(hits)
        ok = (orbit_size * stab == group_order
              and all(v == stab for v in hits.values()))
        results.append({
            "model": m.to_json(),
            "orbit_size": orbit_size,
            "stabilizer": stab,
            "group_order": group_order,
            "pass": ok,
        })
    return results
