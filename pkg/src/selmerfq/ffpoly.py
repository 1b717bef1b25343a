"""Exact arithmetic over F_{p^k}, univariate polynomials, and binary forms.

Field elements are plain python ints encoding base-p digit vectors
(digit i = coefficient of x^i in the polynomial representation), so a
prime-field element is just its residue.  Residue fields of places are
built as quotient rings over an arbitrary base field (`QuotientField`),
whose elements are coefficient tuples; this sidesteps any embedding
bookkeeping between abstractly-isomorphic extensions.

All values are immutable after construction.
"""

from .rng import SplitMix64


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """The finite field F_{p^k} with a deterministic modulus choice.

    For k > 1 the modulus is the least monic irreducible of degree k,
    ordering polynomials by their integer code sum(c_i * p^i).
    """

    def __init__(self, p, k=1):
        if not _is_prime(p):
            raise ValueError("p must be prime, got %r" % (p,))
        if not 1 <= k <= 16:
            raise ValueError("extension degree must be in [1, 16]")
        self.p = p
        self.k = k
        self.q = p ** k
        self.characteristic = p
        self.zero = 0
        self.one = 1
        if k == 1:
            self.modulus_digits = None
            self._red = None
        else:
            self.modulus_digits = self._least_irreducible(p, k)
            self._red = self._reduction_rows()

    @staticmethod
    def _least_irreducible(p, k):
        base = Field(p, 1)
        for code in range(p ** k):
            digits = _digits(code, p, k) + [1]
            f = UniPoly(base, digits)
            if f.is_irreducible():
                return tuple(digits)
        raise AssertionError("no irreducible of degree %d over F_%d" % (k, p))

    def _reduction_rows(self):
        # x^(k+i) mod modulus, for i = 0..k-2, as digit lists
        p, k = self.p, self.k
        rows = []
        cur = [(-c) % p for c in self.modulus_digits[:k]]  # x^k
        rows.append(tuple(cur))
        for _ in range(k - 2):
            cur = [0] + cur
            top = cur.pop()
            if top:
                cur = [(c + top * r) % p for c, r in zip(cur, rows[0])]
            rows.append(tuple(cur))
        return rows

    # -- element ops (elements are ints in [0, q)) --

    def add(self, a, b):
        p = self.p
        if self.k == 1:
            return (a + b) % p
        out, mult = 0, 1
        for _ in range(self.k):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a):
        p = self.p
        if self.k == 1:
            return (-a) % p
        out, mult = 0, 1
        for _ in range(self.k):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return (a * b) % p
        da = _digits(a, p, k)
        db = _digits(b, p, k)
        prod = [0] * (2 * k - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    prod[i + j] += ca * cb
        out = [c % p for c in prod[:k]]
        for i in range(k, 2 * k - 1):
            c = prod[i] % p
            if c:
                row = self._red[i - k]
                out = [(o + c * r) % p for o, r in zip(out, row)]
        return _undigits(out, p)

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        out, base = self.one, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow(a, self.q - 2)

    def chi(self, a):
        """Quadratic character: 0 on zero, +1 on squares, -1 otherwise."""
        if a == 0:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == self.one else -1

    def is_square(self, a):
        return a == 0 or self.chi(a) == 1

    def sqrt(self, a):
        """A square root of a, or None.  Brute search is fine at our sizes
        for k > 1; prime fields use Tonelli-Shanks-free exponent tricks
        when q % 4 == 3 and fall back to search otherwise."""
        if a == 0:
            return 0
        if self.chi(a) != 1:
            return None
        if self.q % 4 == 3:
            return self.pow(a, (self.q + 1) // 4)
        for x in range(1, self.q):
            if self.mul(x, x) == a:
                return x
        return None

    def from_int(self, n):
        return n % self.q

    def random(self, rng):
        return rng.below(self.q)

    def elements(self):
        return range(self.q)

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((Field, self.p, self.k))

    def __repr__(self):
        return "F_%d" % self.q if self.k == 1 else "F_%d^%d" % (self.p, self.k)

    def spec(self):
        return "%d" % self.p if self.k == 1 else "%d^%d" % (self.p, self.k)


def _digits(n, p, k):
    out = []
    for _ in range(k):
        out.append(n % p)
        n //= p
    return out


def _undigits(ds, p):
    out = 0
    for c in reversed(ds):
        out = out * p + c
    return out


def field_make(p, k=1):
    """Public field constructor.  Characteristics 2 and 3 are rejected:
    the local classification tables downstream assume p >= 5."""
    if p in (2, 3):
        raise ValueError("characteristic %d not supported (need p >= 5)" % p)
    if not _is_prime(p):
        raise ValueError("p = %r is not prime" % (p,))
    return Field(p, k)


def field_from_spec(spec):
    """Parse a "p" or "p^k" field spec string."""
    if "^" in spec:
        ps, ks = spec.split("^", 1)
        return field_make(int(ps), int(ks))
    return field_make(int(spec))


class QuotientField:
    """F[t]/(modulus) for F a Field (or QuotientField), modulus irreducible.

    Elements are tuples of base-field elements of length deg(modulus),
    low degree first.  Used as the residue field kappa(v) of a place.
    """

    def __init__(self, modulus):
        if not isinstance(modulus, UniPoly) or modulus.degree() < 1:
            raise ValueError("modulus must be a nonconstant UniPoly")
        self.base = modulus.field
        self.modulus = modulus.monic()
        self.k = self.modulus.degree()
        self.q = self.base.q ** self.k
        self.characteristic = self.base.characteristic
        self.zero = (self.base.zero,) * self.k
        self.one = tuple([self.base.one] + [self.base.zero] * (self.k - 1))
        # residue class of t, the canonical root of the modulus
        if self.k == 1:
            self.gen = (self.base.neg(self.modulus.coeffs[0]),)
        else:
            self.gen = tuple(
                [self.base.zero, self.base.one] + [self.base.zero] * (self.k - 2)
            )

    def embed(self, a):
        """Embed a base-field element as a constant."""
        return tuple([a] + [self.base.zero] * (self.k - 1))

    def add(self, a, b):
        F = self.base
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        F = self.base
        return tuple(F.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        F = self.base
        return tuple(F.neg(x) for x in a)

    def mul(self, a, b):
        F, k = self.base, self.k
        prod = [F.zero] * (2 * k - 1)
        for i, ca in enumerate(a):
            if ca != F.zero:
                for j, cb in enumerate(b):
                    prod[i + j] = F.add(prod[i + j], F.mul(ca, cb))
        # reduce by the monic modulus
        mod = self.modulus.coeffs
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i]
            if c != F.zero:
                prod[i] = F.zero
                for j in range(k):
                    prod[i - k + j] = F.sub(prod[i - k + j], F.mul(c, mod[j]))
        return tuple(prod[:k])

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        out, base = self.one, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.q - 2)

    def chi(self, a):
        if a == self.zero:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == self.one else -1

    def is_square(self, a):
        return a == self.zero or self.chi(a) == 1

    def from_int(self, n):
        ds = []
        for _ in range(self.k):
            ds.append(self.base.from_int(n % self.base.q))
            n //= self.base.q
        return tuple(ds)

    def random(self, rng):
        return self.from_int(rng.below(self.q))

    def elements(self):
        return (self.from_int(n) for n in range(self.q))

    def __eq__(self, other):
        return (
            isinstance(other, QuotientField)
            and self.base == other.base
            and self.modulus.coeffs == other.modulus.coeffs
        )

    def __hash__(self):
        return hash((QuotientField, self.base, self.modulus.coeffs))

    def __repr__(self):
        return "%r[t]/(%r)" % (self.base, self.modulus)


class UniPoly:
    """Univariate polynomial over a field, coefficients low degree first.

    Canonical form: no trailing zeros; the zero polynomial has an empty
    coefficient tuple.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        z = field.zero
        cs = list(coeffs)
        while cs and cs[-1] == z:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- basics --

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_constant(self):
        return len(self.coeffs) <= 1

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @classmethod
    def zero(cls, field):
        return cls(field, [])

    @classmethod
    def const(cls, field, c):
        return cls(field, [c])

    @classmethod
    def x(cls, field):
        return cls(field, [field.zero, field.one])

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return "UniPoly(%r, %r)" % (self.field, list(self.coeffs))

    # -- arithmetic --

    def __add__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return UniPoly(F, out)

    def __neg__(self):
        F = self.field
        return UniPoly(F, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero(F)
        out = [F.zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca != F.zero:
                for j, cb in enumerate(b):
                    out[i + j] = F.add(out[i + j], F.mul(ca, cb))
        return UniPoly(F, out)

    def scale(self, c):
        F = self.field
        return UniPoly(F, [F.mul(c, x) for x in self.coeffs])

    def divmod(self, other):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree()
        inv_lead = F.inv(other.leading())
        quot = [F.zero] * max(0, len(rem) - d)
        while len(rem) - 1 >= d and rem:
            c = F.mul(rem[-1], inv_lead)
            k = len(rem) - 1 - d
            quot[k] = c
            for i, oc in enumerate(other.coeffs):
                rem[k + i] = F.sub(rem[k + i], F.mul(c, oc))
            while rem and rem[-1] == F.zero:
                rem.pop()
        return UniPoly(F, quot), UniPoly(F, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading()))

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self):
        F = self.field
        p = F.characteristic
        out = []
        for i, c in enumerate(self.coeffs[1:], start=1):
            out.append(F.mul(F.from_int(i % p), c))
        return UniPoly(F, out)

    def evaluate(self, x):
        F = self.field
        out = F.zero
        for c in reversed(self.coeffs):
            out = F.add(F.mul(out, x), c)
        return out

    def shift(self, n):
        """Multiply by t^n."""
        if self.is_zero():
            return self
        return UniPoly(self.field, [self.field.zero] * n + list(self.coeffs))

    def taylor_at(self, tau, nterms=None):
        """Coefficients of self(tau + u), by repeated synthetic division
        by (t - tau).  tau lives in self.field."""
        n = len(self.coeffs) if nterms is None else nterms
        F = self.field
        cs = list(self.coeffs)
        out = []
        for _ in range(n):
            if not cs:
                out.append(F.zero)
                continue
            rem = F.zero
            quot = [F.zero] * (len(cs) - 1)
            for i in range(len(cs) - 1, -1, -1):
                if i < len(cs) - 1:
                    quot[i] = rem
                rem = F.add(F.mul(rem, tau), cs[i])
            out.append(rem)
            cs = quot
            while cs and cs[-1] == F.zero:
                cs.pop()
        return out

    def map_field(self, newfield, conv):
        """Transport coefficients into another field via conv."""
        return UniPoly(newfield, [conv(c) for c in self.coeffs])

    # -- modular exponentiation helpers --

    def powmod(self, e, mod):
        out = UniPoly.const(self.field, self.field.one)
        base = self % mod
        while e:
            if e & 1:
                out = (out * base) % mod
            base = (base * base) % mod
            e >>= 1
        return out

    def is_irreducible(self):
        """Rabin irreducibility test over F_q."""
        n = self.degree()
        if n < 1:
            return False
        if n == 1:
            return True
        F = self.field
        q = F.q
        x = UniPoly.x(F)
        # x^(q^n) == x mod f
        xp = x.powmod(q ** n, self)
        if xp != x % self:
            return False
        for ell in _prime_divisors(n):
            xp = x.powmod(q ** (n // ell), self)
            g = (xp - (x % self)).gcd(self)
            if not g.is_constant():
                return False
        return True

    def roots(self):
        """Roots in the coefficient field, without multiplicity."""
        F = self.field
        if self.is_zero():
            raise ValueError("zero polynomial")
        x = UniPoly.x(F)
        g = (x.powmod(F.q, self) - (x % self)).gcd(self)
        out = []
        for fac, _ in factor(g):
            if fac.degree() == 1:
                out.append(F.neg(F.mul(fac.coeffs[0], F.inv(fac.coeffs[1]))))
        return sorted(out)

    def count_roots(self):
        """Number of distinct roots in the coefficient field."""
        F = self.field
        x = UniPoly.x(F)
        g = (x.powmod(F.q, self) - (x % self)).gcd(self)
        return g.degree() if not g.is_zero() else 0


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_squarefree(f):
    """gcd(f, f') is constant.  In characteristic p a vanishing derivative
    means f is a p-th power, which the gcd criterion also catches."""
    if f.is_zero():
        raise ValueError("squarefreeness undefined for the zero polynomial")
    return f.gcd(f.derivative()).is_constant()


def factor(f, seed=0x5EED):
    """Factor a nonzero univariate polynomial into monic irreducibles.

    Returns a list of (irreducible monic UniPoly, multiplicity), sorted by
    (degree, coefficients).  Squarefree decomposition, then distinct-degree,
    then seeded Cantor-Zassenhaus equal-degree splitting.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    F = f.field
    rng = SplitMix64(seed)
    out = {}

    def add_factor(g, mult):
        key = g.coeffs
        out[key] = out.get(key, 0) + mult

    def squarefree_parts(g, mult):
        # yields (squarefree poly, multiplicity) pieces
        p = F.characteristic
        while True:
            if g.is_constant():
                return
            d = g.derivative()
            if d.is_zero():
                # g = h(x^p); p-th root the coefficients
                root_coeffs = []
                e = F.q // p
                for i in range(0, g.degree() + 1, p):
                    c = g.coeffs[i] if i < len(g.coeffs) else F.zero
                    root_coeffs.append(F.pow(c, e))
                g = UniPoly(F, root_coeffs)
                mult *= p
                continue
            w = g.gcd(d)
            sf = (g // w).monic()
            i = 1
            while not sf.is_constant():
                y = sf.gcd(w)
                piece = (sf // y).monic()
                if not piece.is_constant():
                    yield piece, mult * i
                sf = y
                w = w // y
                i += 1
            if w.is_constant():
                return
            g = w
            # remaining part is a p-th power; loop handles it

    def equal_degree_split(g, d):
        # g is a product of irreducibles all of degree d; return them
        if g.degree() == d:
            return [g.monic()]
        q = F.q
        while True:
            r = UniPoly(F, [F.random(rng) for _ in range(g.degree())])
            if r.is_zero() or r.is_constant():
                continue
            h = r.powmod((q ** d - 1) // 2, g) - UniPoly.const(F, F.one)
            w = h.gcd(g)
            if not w.is_constant() and w.degree() < g.degree():
                return equal_degree_split(w, d) + equal_degree_split((g // w).monic(), d)

    for sf, mult in squarefree_parts(f.monic(), 1):
        # distinct degree
        x = UniPoly.x(F)
        h = x
        rem = sf
        d = 0
        while rem.degree() > 0:
            d += 1
            if 2 * d > rem.degree():
                add_factor(rem.monic(), mult)
                break
            h = h.powmod(F.q, rem)
            g = (h - (x % rem)).gcd(rem)
            if not g.is_constant():
                for piece in equal_degree_split(g.monic(), d):
                    add_factor(piece, mult)
                rem = (rem // g).monic()
                h = h % rem
    result = [(UniPoly(F, list(k)), m) for k, m in out.items()]
    result.sort(key=lambda fm: (fm[0].degree(), fm[0].coeffs))
    return result


INFINITY = "infinity"


class Place:
    """A closed point of P^1 over the base field: a monic irreducible
    polynomial in t, or the point at infinity."""

    __slots__ = ("poly",)

    def __init__(self, poly=None):
        if poly is not None:
            if poly.degree() < 1:
                raise ValueError("finite place needs a nonconstant polynomial")
            poly = poly.monic()
        self.poly = poly

    @classmethod
    def infinity(cls):
        return cls(None)

    @property
    def is_infinity(self):
        return self.poly is None

    def degree(self):
        return 1 if self.is_infinity else self.poly.degree()

    def residue_field(self):
        """kappa(v) together with the image of t in it."""
        if self.is_infinity:
            raise ValueError("infinity has no finite residue construction here")
        if self.poly.degree() == 1:
            F = self.poly.field
            tau = F.neg(self.poly.coeffs[0])
            return F, tau
        K = QuotientField(self.poly)
        return K, K.gen

    def __eq__(self, other):
        if not isinstance(other, Place):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.poly == other.poly

    def __hash__(self):
        return hash(("place", None if self.is_infinity else self.poly.coeffs))

    def __repr__(self):
        return "Place(inf)" if self.is_infinity else "Place(%r)" % (list(self.poly.coeffs),)


class BinaryForm:
    """Homogeneous form of degree D in (s, t); coeffs[j] multiplies t^j s^(D-j).

    All D+1 coefficients are stored, zeros included, so the intended degree
    survives vanishing top coefficients.
    """

    __slots__ = ("field", "degree", "coeffs")

    def __init__(self, field, degree, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != degree + 1:
            raise ValueError("degree-%d form needs %d coefficients, got %d"
                             % (degree, degree + 1, len(coeffs)))
        self.field = field
        self.degree = degree
        self.coeffs = coeffs

    @classmethod
    def zero(cls, field, degree):
        return cls(field, degree, [field.zero] * (degree + 1))

    @classmethod
    def from_unipoly(cls, f, degree):
        """View a polynomial in t as a form of the given degree (chart s=1)."""
        if f.degree() > degree:
            raise ValueError("polynomial degree exceeds form degree")
        cs = list(f.coeffs) + [f.field.zero] * (degree - f.degree())
        return cls(f.field, degree, cs)

    def is_zero(self):
        z = self.field.zero
        return all(c == z for c in self.coeffs)

    def dehomog_t(self):
        """f(1, t) as a UniPoly in t."""
        return UniPoly(self.field, list(self.coeffs))

    def dehomog_s(self):
        """f(s, 1) as a UniPoly in s (coefficients reversed)."""
        return UniPoly(self.field, list(reversed(self.coeffs)))

    def evaluate(self, s0, t0):
        F = self.field
        out = F.zero
        tp = F.one
        spows = [F.one]
        for _ in range(self.degree):
            spows.append(F.mul(spows[-1], s0))
        for j, c in enumerate(self.coeffs):
            if c != F.zero:
                out = F.add(out, F.mul(F.mul(c, tp), spows[self.degree - j]))
            tp = F.mul(tp, t0)
        return out

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch in form addition")
        F = self.field
        return BinaryForm(F, self.degree,
                          [F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        F = self.field
        return BinaryForm(F, self.degree, [F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        D = self.degree + other.degree
        out = [F.zero] * (D + 1)
        for i, a in enumerate(self.coeffs):
            if a != F.zero:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return BinaryForm(F, D, out)

    def scale(self, c):
        F = self.field
        return BinaryForm(F, self.degree, [F.mul(c, x) for x in self.coeffs])

    def __eq__(self, other):
        return (
            isinstance(other, BinaryForm)
            and self.field == other.field
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.degree, self.coeffs))

    def __repr__(self):
        return "BinaryForm(deg=%d, %r)" % (self.degree, list(self.coeffs))


def ord_at(f, v):
    """Valuation of a nonzero binary form at a place of P^1.

    Finite place: the exact power of the place polynomial dividing f(1, t).
    Infinity: D - deg_t f(1, t).
    """
    if f.is_zero():
        raise ValueError("valuation of the zero form is undefined")
    ft = f.dehomog_t()
    if v.is_infinity:
        return f.degree - ft.degree()
    if ft.is_zero():
        # f is a multiple of s^D only; finite places do not divide it... but
        # ft zero means all coefficients vanish, excluded above.
        raise AssertionError("unreachable")
    n = 0
    while True:
        quot, rem = ft.divmod(v.poly)
        if not rem.is_zero():
            return n
        ft = quot
        n += 1


def places_of_degree_one(field):
    """The q+1 degree-one places of P^1 over the field."""
    out = []
    x = UniPoly.x(field)
    for c in field.elements():
        out.append(Place(x - UniPoly.const(field, c)))
    out.append(Place.infinity())
    return out
