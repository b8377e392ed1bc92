"""Pluggable exact commutative rings with 1.

Every ring is a descriptor object exposing payload-level arithmetic;
`RingValue` is a thin operator-overloading wrapper around (ring, payload).
Payloads are always kept canonical: residues in [0, n), fractions reduced,
polynomial coefficient maps free of zero entries, localization values as
class representatives.  Values are immutable and freely shareable.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from .errors import (
    DescriptorMismatch,
    DomainMismatch,
    NotAUnit,
    NotFinite,
    UndecidableBase,
)

__all__ = [
    "Ring", "RingValue", "RingMap",
    "IntegerRing", "RationalRing", "ModularRing", "GaloisField",
    "PolynomialRing", "IntLocalization", "FiniteLocalization",
    "ProductRing", "QuotientRing", "INT", "RAT",
    "ring_arith", "units_of", "check_unit_2R_generation",
    "has_inverse_of_3", "apply_ring_map", "parse_ring",
    "ideal_closure", "is_prime_ideal",
]


class Ring:
    """Base class: a commutative ring with 1, operating on raw payloads."""

    kind = "abstract"
    finite = False

    # -- identification -------------------------------------------------

    def descriptor(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return self.descriptor()

    def __eq__(self, other):
        return isinstance(other, Ring) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return hash(self.descriptor())

    # -- payload arithmetic ---------------------------------------------

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def is_unit(self, a) -> bool:
        try:
            self.inv(a)
            return True
        except NotAUnit:
            return False

    def from_int(self, k: int):
        """The image of the integer k under the unique map from Z."""
        result = self.zero
        one = self.one
        if k < 0:
            one = self.neg(one)
            k = -k
        for _ in range(k):
            result = self.add(result, one)
        return result

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    # -- enumeration -----------------------------------------------------

    def elements(self):
        """Iterate all payloads (finite rings only)."""
        raise NotFinite(self.descriptor())

    def size(self) -> int:
        if not self.finite:
            raise NotFinite(self.descriptor())
        return sum(1 for _ in self.elements())

    def unit_payloads(self):
        return [a for a in self.elements() if self.is_unit(a)]

    def sample_points(self):
        """A deterministic sample used to validate maps out of infinite rings."""
        if self.finite:
            return list(self.elements())
        raise NotImplementedError

    # -- element construction and i/o -------------------------------------

    def element(self, payload) -> "RingValue":
        return RingValue(self, payload)

    def int_element(self, k: int) -> "RingValue":
        return RingValue(self, self.from_int(k))

    def value_str(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError

    def payload_key(self, a):
        """A hashable canonical key for the payload."""
        return a


class RingValue:
    """An element of a ring: a descriptor reference plus canonical payload."""

    __slots__ = ("ring", "payload")

    def __init__(self, ring: Ring, payload):
        self.ring = ring
        self.payload = payload

    def _coerce(self, other):
        if isinstance(other, int):
            return self.ring.from_int(other)
        if not isinstance(other, RingValue):
            return NotImplemented
        if other.ring != self.ring:
            raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
        return other.payload

    def __add__(self, other):
        p = self._coerce(other)
        if p is NotImplemented:
            return p
        return RingValue(self.ring, self.ring.add(self.payload, p))

    __radd__ = __add__

    def __sub__(self, other):
        p = self._coerce(other)
        if p is NotImplemented:
            return p
        return RingValue(self.ring, self.ring.sub(self.payload, p))

    def __mul__(self, other):
        p = self._coerce(other)
        if p is NotImplemented:
            return p
        return RingValue(self.ring, self.ring.mul(self.payload, p))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.ring, self.ring.neg(self.payload))

    def inv(self) -> "RingValue":
        return RingValue(self.ring, self.ring.inv(self.payload))

    def __pow__(self, n: int):
        return RingValue(self.ring, self.ring.pow(self.payload, n))

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.payload)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.payload)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.payload == self.ring.from_int(other)
        return (
            isinstance(other, RingValue)
            and self.ring == other.ring
            and self.payload == other.payload
        )

    def __hash__(self):
        return hash((self.ring.descriptor(), self.ring.payload_key(self.payload)))

    def __repr__(self):
        return f"{self.ring.value_str(self.payload)}"


# ---------------------------------------------------------------------------
# Concrete rings
# ---------------------------------------------------------------------------


class IntegerRing(Ring):
    kind = "int"

    def descriptor(self):
        return "int"

    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} in Z")

    def from_int(self, k):
        return k

    def sample_points(self):
        return list(range(-8, 8)) + [37, -37, 1000003, 2**40, -(3**20), 12, 30, 64,
                                     97, -97, 5**8, -(2**33), 17, 19, 23, 29,
                                     31, 41, 43, 47, 53, 59, 61, 67, 71, 73,
                                     79, 83, 89, 101, 103, 107, 109, 113, 127,
                                     131, 137, 139, 149, 151, 157, 163, 167,
                                     173, 179, 181, 191, 193, 197]

    def parse(self, text):
        return int(text)


class RationalRing(Ring):
    kind = "rat"

    def descriptor(self):
        return "rat"

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise NotAUnit("0 in Q")
        return 1 / a

    def from_int(self, k):
        return Fraction(k)

    def sample_points(self):
        pts = [Fraction(p, q) for p in range(-4, 4) for q in (1, 2, 3, 5)]
        return pts[:64]

    def value_str(self, a):
        return str(a)

    def parse(self, text):
        return Fraction(text)


INT = IntegerRing()
RAT = RationalRing()


class ModularRing(Ring):
    """Z/nZ with residues stored in [0, n)."""

    kind = "zmod"
    finite = True

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("modulus must be at least 2")
        self.n = n

    def descriptor(self):
        return f"zmod:{self.n}"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def inv(self, a):
        g = gcd(a, self.n)
        if g != 1:
            raise NotAUnit(f"{a} mod {self.n}")
        return pow(a, -1, self.n)

    def is_unit(self, a):
        return gcd(a, self.n) == 1

    def from_int(self, k):
        return k % self.n

    def elements(self):
        return iter(range(self.n))

    def size(self):
        return self.n

    def parse(self, text):
        return int(text) % self.n


# Fixed irreducible moduli for the small Galois fields we support, as
# coefficient tuples (c0, c1, ..., 1) of monic polynomials over GF(p).
_GF_MODULI = {
    (2, 1): (1, 1),            # x + 1
    (2, 2): (1, 1, 1),         # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),      # x^3 + x + 1
    (3, 1): (1, 1),            # x + 1
    (3, 2): (2, 2, 1),         # x^2 + 2x + 2
    (3, 3): (1, 2, 0, 1),      # x^3 + 2x + 1
    (5, 1): (3, 1),            # x + 3
    (5, 2): (2, 4, 1),         # x^2 + 4x + 2
    (5, 3): (3, 3, 0, 1),      # x^3 + 3x + 3
    (7, 1): (4, 1),            # x + 4
    (7, 2): (3, 6, 1),         # x^2 + 6x + 3
    (7, 3): (4, 0, 6, 1),      # x^3 + 6x^2 + 4
}


class GaloisField(Ring):
    """GF(p^k) for p in {2,3,5,7}, k <= 3, with a fixed stored modulus.

    Payloads are k-tuples (c0, ..., c_{k-1}) of residues mod p giving
    c0 + c1*w + ... in the generator w.
    """

    kind = "gf"
    finite = True

    def __init__(self, p: int, k: int):
        if (p, k) not in _GF_MODULI:
            raise ValueError(f"unsupported field GF({p}^{k})")
        self.p = p
        self.k = k
        self.modulus = _GF_MODULI[(p, k)]
        if self._has_root(self.modulus):
            raise ValueError("stored modulus is reducible")
        # x^k = -(c0 + c1 x + ...) mod p, then x^{k+1}, ... by shifting.
        self._reductions = self._reduction_table()

    def _has_root(self, coeffs):
        # Degree <= 3, so irreducibility over GF(p) == no linear factor.
        deg = len(coeffs) - 1
        if deg == 1:
            return False
        for x in range(self.p):
            if sum(c * x**i for i, c in enumerate(coeffs)) % self.p == 0:
                return True
        return False

    def _reduction_table(self):
        p, k = self.p, self.k
        table = []
        cur = [(-c) % p for c in self.modulus[:k]]
        table.append(tuple(cur))
        for _ in range(k - 1):
            shifted = [0] + cur[:-1]
            overflow = cur[-1]
            cur = [
                (shifted[i] + overflow * table[0][i]) % p for i in range(k)
            ]
            table.append(tuple(cur))
        return table

    def descriptor(self):
        return f"gf:{self.p}^{self.k}"

    @property
    def zero(self):
        return (0,) * self.k

    @property
    def one(self):
        return (1,) + (0,) * (self.k - 1)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        out = [c % p for c in prod[:k]]
        for j in range(k, 2 * k - 1):
            c = prod[j] % p
            if c:
                red = self._reductions[j - k]
                for i in range(k):
                    out[i] = (out[i] + c * red[i]) % p
        return tuple(out)

    def inv(self, a):
        if a == self.zero:
            raise NotAUnit(f"0 in GF({self.p}^{self.k})")
        return self.pow(a, self.p**self.k - 2)

    def is_unit(self, a):
        return a != self.zero

    def from_int(self, k):
        return (k % self.p,) + (0,) * (self.k - 1)

    def elements(self):
        return (
            tuple(reversed(t))
            for t in itertools.product(range(self.p), repeat=self.k)
        )

    def size(self):
        return self.p**self.k

    def frobenius(self, a, j: int = 1):
        """The automorphism x -> x^(p^j)."""
        return self.pow(a, self.p**j)

    def value_str(self, a):
        terms = []
        for i in reversed(range(self.k)):
            c = a[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                var = "w" if i == 1 else f"w^{i}"
                terms.append(var if c == 1 else f"{c}*{var}")
        return "+".join(terms) if terms else "0"

    def parse(self, text):
        text = text.replace(" ", "")
        if text == "0":
            return self.zero
        out = [0] * self.k
        for term in text.replace("-", "+-").split("+"):
            if not term:
                continue
            neg = term.startswith("-")
            if neg:
                term = term[1:]
            if "w" not in term:
                out[0] = (out[0] + (-1 if neg else 1) * int(term)) % self.p
                continue
            coeff, _, rest = term.partition("w")
            c = int(coeff.rstrip("*")) if coeff.rstrip("*") else 1
            deg = int(rest[1:]) if rest.startswith("^") else 1
            if deg >= self.k:
                raise ValueError(f"degree {deg} too large for {self}")
            out[deg] = (out[deg] + (-1 if neg else 1) * c) % self.p
        return tuple(out)


class PolynomialRing(Ring):
    """Sparse multivariate polynomials over a base ring.

    Payloads map exponent tuples to nonzero base payloads; printing and
    canonical iteration use total-degree-then-lex order.
    """

    kind = "poly"

    def __init__(self, base: Ring, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        self.base = base
        self.names = names

    def descriptor(self):
        return f"poly:{self.base.descriptor()}:{','.join(self.names)}"

    @property
    def zero(self):
        return {}

    @property
    def one(self):
        return {(0,) * len(self.names): self.base.one}

    def var(self, name: str) -> RingValue:
        i = self.names.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return RingValue(self, {exp: self.base.one})

    def add(self, a, b):
        out = dict(a)
        base = self.base
        for exp, c in b.items():
            if exp in out:
                s = base.add(out[exp], c)
                if base.is_zero(s):
                    del out[exp]
                else:
                    out[exp] = s
            else:
                out[exp] = c
        return out

    def neg(self, a):
        base = self.base
        return {exp: base.neg(c) for exp, c in a.items()}

    def mul(self, a, b):
        if not a or not b:
            return {}
        base = self.base
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                c = base.mul(ca, cb)
                if exp in out:
                    c = base.add(out[exp], c)
                if base.is_zero(c):
                    out.pop(exp, None)
                else:
                    out[exp] = c
        return out

    def inv(self, a):
        zero_exp = (0,) * len(self.names)
        if list(a) == [zero_exp] and self.base.is_unit(a[zero_exp]):
            return {zero_exp: self.base.inv(a[zero_exp])}
        raise NotAUnit(f"{self.value_str(a)} in {self}")

    def from_int(self, k):
        c = self.base.from_int(k)
        if self.base.is_zero(c):
            return {}
        return {(0,) * len(self.names): c}

    def constant(self, payload):
        """Embed a base payload as a constant polynomial."""
        if self.base.is_zero(payload):
            return {}
        return {(0,) * len(self.names): payload}

    def _sorted_exps(self, a):
        return sorted(a, key=lambda e: (sum(e), tuple(-x for x in e)))

    def value_str(self, a):
        if not a:
            return "0"
        parts = []
        for exp in reversed(self._sorted_exps(a)):
            mono = "*".join(
                n if e == 1 else f"{n}^{e}"
                for n, e in zip(self.names, exp)
                if e
            )
            c = self.base.value_str(a[exp])
            if mono:
                parts.append(f"{c}*{mono}" if c != "1" else mono)
            else:
                parts.append(c)
        return "+".join(parts).replace("+-", "-")

    def monomial_key(self, exp) -> str:
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, exp) if e
        )
        return mono or "1"

    def exp_from_key(self, key: str):
        exp = [0] * len(self.names)
        if key != "1":
            for part in key.split("*"):
                name, _, deg = part.partition("^")
                exp[self.names.index(name)] = int(deg) if deg else 1
        return tuple(exp)

    def payload_key(self, a):
        return frozenset(
            (exp, self.base.payload_key(c)) for exp, c in a.items()
        )

    def sample_points(self):
        pts = [self.zero, self.one]
        base_pts = self.base.sample_points()[:4]
        nvars = len(self.names)
        for i in range(nvars):
            e1 = tuple(1 if j == i else 0 for j in range(nvars))
            for c in base_pts:
                if not self.base.is_zero(c):
                    pts.append({e1: c})
                    pts.append(self.add({e1: c}, self.one))
        for c in base_pts:
            if not self.base.is_zero(c):
                pts.append(self.constant(c))
        return pts[:64]


class IntLocalization(Ring):
    """Z localized at a prime (p): fractions with denominator prime to p."""

    kind = "loc"

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, p)):
            raise ValueError("localization of Z requires a prime")
        self.p = p

    def descriptor(self):
        return f"loc:int:{self.p}"

    zero = Fraction(0)
    one = Fraction(1)

    def _check(self, a):
        if a.denominator % self.p == 0:
            raise DomainMismatch(f"{a} has denominator in ({self.p})")
        return a

    def add(self, a, b):
        return self._check(a + b)

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return self._check(a * b)

    def inv(self, a):
        if a == 0 or a.numerator % self.p == 0:
            raise NotAUnit(f"{a} in Z_({self.p})")
        return 1 / a

    def from_int(self, k):
        return Fraction(k)

    def sample_points(self):
        pts = []
        for num in range(-5, 6):
            for den in (1, 2, 3, 7):
                if den % self.p:
                    pts.append(Fraction(num, den))
        return pts[:64]

    def value_str(self, a):
        return str(a)

    def parse(self, text):
        return self._check(Fraction(text))


def ideal_closure(ring: Ring, generators):
    """The ideal generated by the given payloads in a finite ring."""
    if not ring.finite:
        raise NotFinite(ring.descriptor())
    elems = list(ring.elements())
    ideal = {ring.zero}
    frontier = [ring.mul(r, g) for g in generators for r in elems]
    for x in frontier:
        if x not in ideal:
            ideal.add(x)
    # Close under addition.
    changed = True
    while changed:
        changed = False
        for x in list(ideal):
            for y in list(ideal):
                s = ring.add(x, y)
                if s not in ideal:
                    ideal.add(s)
                    changed = True
    return frozenset(ideal)


def is_prime_ideal(ring: Ring, ideal_elems) -> bool:
    """Prime means proper with multiplicatively closed complement."""
    if ring.one in ideal_elems:
        return False
    outside = [a for a in ring.elements() if a not in ideal_elems]
    for a in outside:
        for b in outside:
            if ring.mul(a, b) in ideal_elems:
                return False
    return True


def _fraction_classes(base: Ring, y_elems):
    """Group all pairs (a, s) in R x Y into equivalence classes.

    Pairs are equivalent when (a*t - b*s)*u = 0 for some u in Y.
    Returns (ordered class representatives, dict pair -> class index).
    """
    pairs = [(a, s) for a in base.elements() for s in y_elems]
    reps = []
    lookup = {}
    for pair in pairs:
        assigned = False
        for idx, rep in enumerate(reps):
            if _pairs_equivalent(base, y_elems, pair, rep):
                lookup[pair] = idx
                assigned = True
                break
        if not assigned:
            lookup[pair] = len(reps)
            reps.append(pair)
    return reps, lookup


def _pairs_equivalent(base: Ring, y_elems, x, y) -> bool:
    a, s = x
    b, t = y
    d = base.sub(base.mul(a, t), base.mul(b, s))
    return any(base.is_zero(base.mul(d, u)) for u in y_elems)


class FiniteLocalization(Ring):
    """A finite ring localized at a prime ideal, materialized as an
    explicit quotient table of fractions.  Payloads are class indices."""

    kind = "loc"
    finite = True

    def __init__(self, base: Ring, prime_gens):
        if not base.finite:
            raise UndecidableBase("localization table needs a finite base")
        self.base = base
        self.prime_gens = tuple(prime_gens)
        self.ideal = ideal_closure(base, self.prime_gens)
        if not is_prime_ideal(base, self.ideal):
            raise ValueError("generators do not span a prime ideal")
        self.y_elems = [a for a in base.elements() if a not in self.ideal]
        self.reps, self._lookup = _fraction_classes(base, self.y_elems)
        self._inv_cache = {}

    def descriptor(self):
        gens = ",".join(self.base.value_str(g) for g in self.prime_gens)
        return f"loc:{self.base.descriptor()}:{gens}"

    @property
    def zero(self):
        return self._lookup[(self.base.zero, self.base.one)]

    @property
    def one(self):
        return self._lookup[(self.base.one, self.base.one)]

    def class_of(self, a, s):
        """Class index of the fraction a/s over the base ring."""
        return self._lookup[(a, s)]

    def add(self, x, y):
        a, s = self.reps[x]
        b, t = self.reps[y]
        base = self.base
        num = base.add(base.mul(a, t), base.mul(b, s))
        return self._lookup[(num, base.mul(s, t))]

    def neg(self, x):
        a, s = self.reps[x]
        return self._lookup[(self.base.neg(a), s)]

    def mul(self, x, y):
        a, s = self.reps[x]
        b, t = self.reps[y]
        base = self.base
        return self._lookup[(base.mul(a, b), base.mul(s, t))]

    def inv(self, x):
        if x in self._inv_cache:
            return self._inv_cache[x]
        for y in range(len(self.reps)):
            if self.mul(x, y) == self.one:
                self._inv_cache[x] = y
                return y
        raise NotAUnit(f"{self.value_str(x)} in {self}")

    def from_int(self, k):
        return self._lookup[(self.base.from_int(k), self.base.one)]

    def elements(self):
        return iter(range(len(self.reps)))

    def size(self):
        return len(self.reps)

    def value_str(self, x):
        a, s = self.reps[x]
        return f"{self.base.value_str(a)}/{self.base.value_str(s)}"

    def parse(self, text):
        num, _, den = text.partition("/")
        a = self.base.parse(num)
        s = self.base.parse(den) if den else self.base.one
        if s in self.ideal:
            raise DomainMismatch(f"denominator {den} lies in the prime ideal")
        return self._lookup[(a, s)]


class ProductRing(Ring):
    """A finite cartesian product of rings with componentwise operations."""

    kind = "prod"

    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("empty product")
        self.finite = all(f.finite for f in self.factors)

    def descriptor(self):
        return "prod:" + ",".join(f.descriptor() for f in self.factors)

    @property
    def zero(self):
        return tuple(f.zero for f in self.factors)

    @property
    def one(self):
        return tuple(f.one for f in self.factors)

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def is_unit(self, a):
        return all(f.is_unit(x) for f, x in zip(self.factors, a))

    def from_int(self, k):
        return tuple(f.from_int(k) for f in self.factors)

    def elements(self):
        if not self.finite:
            raise NotFinite(self.descriptor())
        return itertools.product(*(f.elements() for f in self.factors))

    def payload_key(self, a):
        return tuple(
            f.payload_key(x) for f, x in zip(self.factors, a)
        )

    def value_str(self, a):
        return "(" + ",".join(
            f.value_str(x) for f, x in zip(self.factors, a)
        ) + ")"

    def parse(self, text):
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        parts = text.split(",")
        if len(parts) != len(self.factors):
            raise ValueError(f"expected {len(self.factors)} components")
        return tuple(f.parse(p) for f, p in zip(self.factors, parts))


class QuotientRing(Ring):
    """A finite ring modulo an ideal, with coset-index payloads."""

    kind = "quot"
    finite = True

    def __init__(self, base: Ring, ideal_elems, gens=()):
        self.base = base
        self.ideal = frozenset(ideal_elems)
        self.gens = tuple(gens)
        self.reps = []
        self._coset = {}
        for a in base.elements():
            if a in self._coset:
                continue
            idx = len(self.reps)
            self.reps.append(a)
            for i in self.ideal:
                self._coset[base.add(a, i)] = idx

    def descriptor(self):
        gens = ",".join(self.base.value_str(g) for g in self.gens)
        return f"quot:{self.base.descriptor()}:{gens or len(self.ideal)}"

    @property
    def zero(self):
        return self._coset[self.base.zero]

    @property
    def one(self):
        return self._coset[self.base.one]

    def coset_of(self, a):
        return self._coset[a]

    def add(self, x, y):
        return self._coset[self.base.add(self.reps[x], self.reps[y])]

    def neg(self, x):
        return self._coset[self.base.neg(self.reps[x])]

    def mul(self, x, y):
        return self._coset[self.base.mul(self.reps[x], self.reps[y])]

    def inv(self, x):
        for y in range(len(self.reps)):
            if self.mul(x, y) == self.one:
                return y
        raise NotAUnit(f"{self.value_str(x)} in {self}")

    def from_int(self, k):
        return self._coset[self.base.from_int(k)]

    def elements(self):
        return iter(range(len(self.reps)))

    def size(self):
        return len(self.reps)

    def is_field(self) -> bool:
        return all(
            x == self.zero or self.is_unit(x) for x in self.elements()
        )

    def value_str(self, x):
        return f"[{self.base.value_str(self.reps[x])}]"

    def parse(self, text):
        text = text.strip().strip("[]")
        return self._coset[self.base.parse(text)]


# ---------------------------------------------------------------------------
# Ring maps
# ---------------------------------------------------------------------------


class RingMap:
    """A homomorphism between rings, validated at construction.

    Actions are either named builtins or an explicit table on a finite
    source.  Finite sources are checked exhaustively; infinite sources on
    a fixed deterministic sample.
    """

    def __init__(self, source: Ring, target: Ring, action, table=None,
                 validate=True):
        self.source = source
        self.target = target
        self.action = action
        self.table = table
        if validate:
            self._validate()

    def __repr__(self):
        return f"RingMap({self.source} -> {self.target}, {self.action})"

    def apply(self, payload):
        src, tgt = self.source, self.target
        act = self.action
        if act == "identity":
            return payload
        if act == "mod":
            # Z -> Z/m, or Z/n -> Z/m with m | n.
            return payload % tgt.n
        if act == "embed":
            if isinstance(tgt, RationalRing):
                return Fraction(payload)
            if isinstance(tgt, IntLocalization):
                return Fraction(payload)
            if isinstance(tgt, FiniteLocalization):
                return tgt.class_of(payload, tgt.base.one)
            if isinstance(tgt, PolynomialRing):
                return tgt.constant(payload)
            raise DomainMismatch(f"no embedding into {tgt}")
        if isinstance(act, tuple) and act[0] == "frobenius":
            return src.frobenius(payload, act[1])
        if isinstance(act, tuple) and act[0] == "project":
            return payload[act[1]]
        if isinstance(act, tuple) and act[0] == "subst":
            return self._substitute(payload, act[1])
        if act == "table":
            key = src.payload_key(payload)
            if key not in self.table:
                raise DomainMismatch(f"{payload} not in table domain")
            return self.table[key]
        if act == "coset":
            return tgt.coset_of(payload)
        raise ValueError(f"unknown action {act!r}")

    def _substitute(self, payload, assignments):
        src, tgt = self.source, self.target
        result = tgt.zero
        for exp, coeff in payload.items():
            if isinstance(src.base, IntegerRing):
                term = tgt.from_int(coeff)
            else:
                raise DomainMismatch("substitution needs integer coefficients")
            for value, e in zip(assignments, exp):
                if e:
                    term = tgt.mul(term, tgt.pow(value, e))
            result = tgt.add(result, term)
        return result

    def __call__(self, value: RingValue) -> RingValue:
        if value.ring != self.source:
            raise DomainMismatch(f"{value.ring} is not {self.source}")
        return RingValue(self.target, self.apply(value.payload))

    def _validate(self):
        src, tgt = self.source, self.target
        if src.finite:
            points = list(src.elements())
            exhaustive = True
        else:
            points = src.sample_points()
            exhaustive = False
        if self.apply(src.zero) != tgt.zero:
            raise DomainMismatch("map does not preserve 0")
        if self.apply(src.one) != tgt.one:
            raise DomainMismatch("map does not preserve 1")
        images = {src.payload_key(a): self.apply(a) for a in points}
        for a in points:
            fa = images[src.payload_key(a)]
            for b in points:
                fb = images[src.payload_key(b)]
                if self.apply(src.add(a, b)) != tgt.add(fa, fb):
                    raise DomainMismatch(
                        f"additivity fails at {src.value_str(a)}, {src.value_str(b)}"
                    )
                if self.apply(src.mul(a, b)) != tgt.mul(fa, fb):
                    raise DomainMismatch(
                        f"multiplicativity fails at {src.value_str(a)}, {src.value_str(b)}"
                    )
        if not exhaustive and len(points) < 2:
            raise DomainMismatch("sample too small to validate")

    @staticmethod
    def identity(ring: Ring) -> "RingMap":
        return RingMap(ring, ring, "identity")

    @staticmethod
    def reduction(source: Ring, target: ModularRing) -> "RingMap":
        if isinstance(source, ModularRing) and source.n % target.n != 0:
            raise DomainMismatch("reduction modulus must divide source modulus")
        return RingMap(source, target, "mod")

    @staticmethod
    def frobenius(field: GaloisField, power: int = 1) -> "RingMap":
        return RingMap(field, field, ("frobenius", power))

    @staticmethod
    def embedding(source: Ring, target: Ring) -> "RingMap":
        return RingMap(source, target, "embed")

    @staticmethod
    def projection(source: ProductRing, i: int) -> "RingMap":
        return RingMap(source, source.factors[i], ("project", i))

    @staticmethod
    def substitution(source: PolynomialRing, target: Ring, values) -> "RingMap":
        return RingMap(source, target, ("subst", tuple(values)))

    @staticmethod
    def from_table(source: Ring, target: Ring, pairs) -> "RingMap":
        table = {source.payload_key(a): b for a, b in pairs}
        return RingMap(source, target, "table", table=table)

    @staticmethod
    def coset_map(source: Ring, target: QuotientRing) -> "RingMap":
        return RingMap(source, target, "coset")

    def is_bijective(self) -> bool:
        if not self.source.finite or not self.target.finite:
            raise NotFinite("bijectivity check needs finite rings")
        images = {
            self.target.payload_key(self.apply(a))
            for a in self.source.elements()
        }
        return len(images) == self.source.size() == self.target.size()


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def ring_arith(op: str, a: RingValue, b: RingValue | None = None) -> RingValue:
    """Dispatch one of add/neg/mul/inv on ring values."""
    if op in ("add", "mul"):
        if b is None:
            raise ValueError(f"{op} needs two operands")
        if a.ring != b.ring:
            raise DescriptorMismatch(f"{a.ring} vs {b.ring}")
        return a + b if op == "add" else a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    raise ValueError(f"unknown operation {op!r}")


def units_of(ring: Ring) -> set[RingValue]:
    """The exact unit group of a finite ring."""
    if not ring.finite:
        raise NotFinite(ring.descriptor())
    return {RingValue(ring, a) for a in ring.unit_payloads()}


def check_unit_2R_generation(ring: Ring):
    """Whether the smallest subring containing every unit and all of 2R
    is the whole ring.

    Returns (ok, certificate): on success the certificate maps each
    payload key to a formula over earlier elements; on failure it carries
    one unreachable element under key "__unreachable__".
    """
    if not ring.finite:
        raise NotFinite(ring.descriptor())
    elems = list(ring.elements())
    cert = {}
    reached = {}

    def learn(payload, how):
        key = ring.payload_key(payload)
        if key not in reached:
            reached[key] = payload
            cert[key] = how

    for a in elems:
        if ring.is_unit(a):
            learn(a, ("unit", a))
    for a in elems:
        learn(ring.mul(ring.from_int(2), a), ("double", a))
    changed = True
    while changed:
        changed = False
        current = list(reached.values())
        for x in current:
            n = ring.neg(x)
            if ring.payload_key(n) not in reached:
                learn(n, ("neg", x))
                changed = True
        current = list(reached.values())
        for x in current:
            for y in current:
                s = ring.add(x, y)
                if ring.payload_key(s) not in reached:
                    learn(s, ("add", x, y))
                    changed = True
                m = ring.mul(x, y)
                if ring.payload_key(m) not in reached:
                    learn(m, ("mul", x, y))
                    changed = True
    for a in elems:
        if ring.payload_key(a) not in reached:
            return False, {"__unreachable__": a}
    return True, cert


def replay_certificate(ring: Ring, cert) -> bool:
    """Re-derive every certified element from its stated construction."""
    for key, how in cert.items():
        tag = how[0]
        if tag == "unit":
            value = how[1]
            if not ring.is_unit(value):
                return False
        elif tag == "double":
            value = ring.mul(ring.from_int(2), how[1])
        elif tag == "neg":
            value = ring.neg(how[1])
        elif tag == "add":
            value = ring.add(how[1], how[2])
        elif tag == "mul":
            value = ring.mul(how[1], how[2])
        else:
            return False
        if ring.payload_key(value) != key:
            return False
    return True


def has_inverse_of_3(ring: Ring) -> bool:
    """Structural test for 3*1 being a unit."""
    if isinstance(ring, IntegerRing):
        return False
    if isinstance(ring, RationalRing):
        return True
    if isinstance(ring, ModularRing):
        return gcd(3, ring.n) == 1
    if isinstance(ring, GaloisField):
        return ring.p != 3
    if isinstance(ring, PolynomialRing):
        return has_inverse_of_3(ring.base)
    if isinstance(ring, IntLocalization):
        return ring.p != 3
    if isinstance(ring, ProductRing):
        return all(has_inverse_of_3(f) for f in ring.factors)
    return ring.is_unit(ring.from_int(3))


def apply_ring_map(f: RingMap, a: RingValue) -> RingValue:
    return f(a)


def parse_ring(text: str) -> Ring:
    """Parse a ring descriptor string such as "zmod:6" or "loc:zmod:6:3"."""
    text = text.strip()
    if text == "int":
        return INT
    if text == "rat":
        return RAT
    if text.startswith("zmod:"):
        return ModularRing(int(text[5:]))
    if text.startswith("gf:"):
        p, _, k = text[3:].partition("^")
        return GaloisField(int(p), int(k) if k else 1)
    if text.startswith("poly:"):
        base_txt, _, names = text[5:].rpartition(":")
        return PolynomialRing(parse_ring(base_txt), names.split(","))
    if text.startswith("loc:"):
        base_txt, _, gens = text[4:].rpartition(":")
        base = parse_ring(base_txt)
        if isinstance(base, IntegerRing):
            return IntLocalization(int(gens))
        return FiniteLocalization(
            base, [base.parse(g) for g in gens.split(",")]
        )
    if text.startswith("prod:"):
        parts = text[5:].split(",")
        for part in parts:
            if part.startswith(("poly:", "prod:", "loc:")):
                raise ValueError("nested composite rings in products are not supported")
        return ProductRing([parse_ring(p) for p in parts])
    raise ValueError(f"unknown ring descriptor {text!r}")
