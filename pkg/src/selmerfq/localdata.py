"""Kodaira types, conductor exponents, component counts, and Tamagawa
numbers at places of bad reduction, for p >= 5 (tame reduction), plus
global consistency sums and a fiber-point-count oracle.

The type is read off the valuations (ord_v c4, ord_v Delta); Tamagawa
numbers that depend on rationality questions (split multiplicative,
IV/IV* square classes, the starred-I subloop) are decided by quadratic
character and root-count computations in the residue field kappa(v).
Component counts come from Ogg's relation ord_disc = f_v + m_v - 1.
"""

from . import ffpoly, weierstrass
from .ffpoly import Place, UniPoly, factor, ord_at


class PlaceData:
    """Local invariants at one place."""

    __slots__ = ("place", "kodaira", "ord_disc", "f_v", "m_v", "c_v", "split")

    def __init__(self, place, kodaira, ord_disc, f_v, m_v, c_v, split=None):
        self.place = place
        self.kodaira = kodaira
        self.ord_disc = ord_disc
        self.f_v = f_v
        self.m_v = m_v
        self.c_v = c_v
        self.split = split
        assert ord_disc == f_v + m_v - 1, "Ogg relation violated"

    def to_json(self):
        if self.place.is_infinity:
            pl = "inf"
        else:
            pl = list(self.place.poly.coeffs)
        return {
            "place": pl,
            "degree": self.place.degree(),
            "kodaira": self.kodaira,
            "ord_disc": self.ord_disc,
            "f_v": self.f_v,
            "m_v": self.m_v,
            "c_v": self.c_v,
            "split": self.split,
        }

    def __repr__(self):
        return "PlaceData(%s at %r, c=%d)" % (self.kodaira, self.place, self.c_v)


class GlobalLocalSummary:
    __slots__ = ("model", "places", "conductor_degree", "tamagawa_product",
                 "disc_degree_check")

    def __init__(self, model, places):
        self.model = model
        self.places = places
        self.conductor_degree = sum(pd.f_v * pd.place.degree() for pd in places)
        prod = 1
        for pd in places:
            prod *= pd.c_v
        self.tamagawa_product = prod
        total = sum(pd.ord_disc * pd.place.degree() for pd in places)
        self.disc_degree_check = (total == 12 * model.d)


def _check_preconditions(m, v):
    if m.field.characteristic < 5:
        raise ValueError("local classification needs p >= 5")
    o2 = None if m.a2.is_zero() else ord_at(m.a2, v)
    o4 = None if m.a4.is_zero() else ord_at(m.a4, v)
    o6 = None if m.a6.is_zero() else ord_at(m.a6, v)
    if (o2 is None or o2 >= 2) and (o4 is None or o4 >= 4) \
            and (o6 is None or o6 >= 6):
        raise ValueError("minimalize first")


def _coeff(poly, i):
    return poly.coeffs[i] if i <= poly.degree() else poly.field.zero


def local_data_at(m, v):
    """PlaceData at v for a model minimal at v, p >= 5."""
    _check_preconditions(m, v)
    disc = weierstrass.discriminant(m)
    delta = ord_at(disc, v)
    if delta == 0:
        return PlaceData(v, "I_0", 0, 0, 1, 1)

    c4 = weierstrass.c4_form(m)
    vc4 = 10 ** 9 if c4.is_zero() else ord_at(c4, v)

    if vc4 == 0:
        # multiplicative: split iff -c6 is a square in kappa(v)
        K = m.field if v.is_infinity else v.residue_field()[0]
        c6res = _residue_of_form(weierstrass.c6_form(m), v)
        split = K.chi(K.neg(c6res)) == 1
        if split:
            c = delta
        else:
            c = 2 if delta % 2 == 0 else 1
        return PlaceData(v, "I_%d" % delta, delta, 1, delta, c, split)

    # additive; expand in the local coordinate and translate x by the
    # triple root of the reduced cubic
    nterms = delta + 4
    K, (A2, A4, A6) = _expand_all(m, v, nterms)
    x0 = K.neg(K.mul(A2.evaluate(K.zero), K.inv(K.from_int(3))))
    A2, A4, A6 = _translate_x(K, A2, A4, A6, UniPoly.const(K, x0))

    if vc4 == 2 and delta >= 7:
        n = delta - 6
        c = _istar_tamagawa(K, A2, A4, A6, n)
        return PlaceData(v, "I_%d*" % n, delta, 2, 5 + n, c)
    if delta == 2:
        return PlaceData(v, "II", 2, 2, 1, 1)
    if delta == 3:
        return PlaceData(v, "III", 3, 2, 2, 2)
    if delta == 4:
        c = 3 if K.chi(_coeff(A6, 2)) == 1 else 1
        return PlaceData(v, "IV", 4, 2, 3, c)
    if delta == 6:
        # I_0*: component group order 1 + #kappa-roots of the residual cubic
        P = UniPoly(K, [_coeff(A6, 3), _coeff(A4, 2), _coeff(A2, 1), K.one])
        c = 1 + P.count_roots()
        return PlaceData(v, "I_0*", 6, 2, 5, c)
    if delta == 8:
        # IV*: re-center at the triple root of the residual cubic first
        t0 = K.neg(K.mul(_coeff(A2, 1), K.inv(K.from_int(3))))
        A2, A4, A6 = _translate_x(K, A2, A4, A6, UniPoly(K, [K.zero, t0]))
        c = 3 if K.chi(_coeff(A6, 4)) == 1 else 1
        return PlaceData(v, "IV*", 8, 2, 7, c)
    if delta == 9:
        return PlaceData(v, "III*", 9, 2, 8, 2)
    if delta == 10:
        return PlaceData(v, "II*", 10, 2, 9, 1)
    raise ValueError("minimalize first")


def _expand_all(m, v, nterms):
    K, A2u, A4u, A6u = weierstrass._local_coeff_polys(m, v, nterms)
    return K, (UniPoly(K, A2u), UniPoly(K, A4u), UniPoly(K, A6u))


def _residue_of_form(form, v):
    """Image of a binary form in kappa(v) (value at the place)."""
    if v.is_infinity:
        return form.dehomog_s().evaluate(form.field.zero)
    K, tau = v.residue_field()
    if isinstance(K, ffpoly.QuotientField):
        return form.dehomog_t().map_field(K, K.embed).evaluate(tau)
    return form.dehomog_t().evaluate(tau)


def _translate_x(K, A2, A4, A6, r):
    """Coefficient change of y^2 = x^3 + A2 x^2 + A4 x + A6 under x -> x + r."""
    three = UniPoly.const(K, K.from_int(3))
    two = UniPoly.const(K, K.from_int(2))
    r2 = r * r
    return (
        A2 + r * three,
        A4 + two * r * A2 + three * r2,
        A6 + r * A4 + r2 * A2 + r2 * r,
    )


def _istar_tamagawa(K, A2, A4, A6, n):
    """Tamagawa number of I_n*, n >= 1, via the standard subloop.

    On entry the reduced cubic has a triple root at 0 modulo u and its
    depressed residual cubic P(T) has a double root; we re-center at that
    double root, then walk the even/odd quadratic tests.
    """
    P = UniPoly(K, [_coeff(A6, 3), _coeff(A4, 2), _coeff(A2, 1), K.one])
    g = P.gcd(P.derivative())
    assert g.degree() == 1, "starred-I place must have a residual double root"
    t0 = K.neg(K.mul(g.coeffs[0], K.inv(g.coeffs[1])))
    A2, A4, A6 = _translate_x(K, A2, A4, A6, UniPoly(K, [K.zero, t0]))
    a21 = _coeff(A2, 1)
    assert a21 != K.zero

    step = 1
    while True:
        if step % 2 == 1:
            # test Y^2 = A6 coefficient at u^(step+3)
            a6c = _coeff(A6, step + 3)
            if a6c != K.zero:
                assert step == n, (step, n)
                return 4 if K.chi(a6c) == 1 else 2
        else:
            # test a21 X^2 + a4c X + a6c
            a4c = _coeff(A4, (step + 4) // 2)
            a6c = _coeff(A6, step + 3)
            D = K.sub(K.mul(a4c, a4c),
                      K.mul(K.from_int(4), K.mul(a21, a6c)))
            if D != K.zero:
                assert step == n, (step, n)
                return 4 if K.chi(D) == 1 else 2
            # depress: kill the a4c term by an x-shift at level u^((step+2)/2)
            shift = K.neg(K.mul(a4c, K.inv(K.mul(K.from_int(2), a21))))
            j = (step + 2) // 2
            r = UniPoly(K, [K.zero] * j + [shift])
            A2, A4, A6 = _translate_x(K, A2, A4, A6, r)
        step += 1
        if step > n:
            raise AssertionError("starred-I subloop overran ord_disc")


def bad_places(m):
    """Places dividing the discriminant (including infinity if it does)."""
    disc = weierstrass.discriminant(m)
    out = []
    dt = disc.dehomog_t()
    if not dt.is_constant():
        out.extend(Place(f) for f, _ in factor(dt))
    if ord_at(disc, Place.infinity()) > 0:
        out.append(Place.infinity())
    return out


def global_summary(m):
    """Aggregate local data over every bad place; asserts the degree-12d
    discriminant bookkeeping."""
    data = [local_data_at(m, v) for v in bad_places(m)]
    summary = GlobalLocalSummary(m, data)
    assert summary.disc_degree_check, "bad-place valuations must sum to 12d"
    return summary


def fiber_point_count(m, v):
    """#W(kappa(v)) for the (possibly singular) Weierstrass fiber at v.

    Independent of the classification tables: one point at infinity plus,
    for each x in kappa(v), 1 + chi(cubic(x)) points.  Oracle values:
    good fiber within the Hasse bound; I_n split Q, nonsplit Q + 2; additive
    types exactly Q + 1.
    """
    K, (A2, A4, A6) = _expand_all(m, v, 1)
    a2c, a4c, a6c = _coeff(A2, 0), _coeff(A4, 0), _coeff(A6, 0)
    cubic = UniPoly(K, [a6c, a4c, a2c, K.one])
    count = 1
    for x in K.elements():
        count += 1 + K.chi(cubic.evaluate(x))
    return count
