"""The G2 root system in simple-root coordinates.

Roots are stored as integer pairs (a, b) meaning a*a1 + b*a2 where a1 is
the short simple root and a2 the long one.  The Euclidean realization
a1 = e1 - e2, a2 = -2e1 + e2 + e3 is used only for inner products; note
that in this realization a1 + a2 evaluates to -e1 + e3.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AntipodalPair

# Positive roots in canonical listing order.
POSITIVE_COEFFS = ((1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2))

_LONG_COEFFS = frozenset({(0, 1), (3, 1), (3, 2), (0, -1), (-3, -1), (-3, -2)})
_VALID_COEFFS = frozenset(POSITIVE_COEFFS) | frozenset(
    (-a, -b) for a, b in POSITIVE_COEFFS
)

# Euclidean coordinates of the simple roots, used for pairings only.
_EUCLID_A1 = (1, -1, 0)
_EUCLID_A2 = (-2, 1, 1)


@dataclass(frozen=True)
class Root:
    """A G2 root, one of the 12 valid coefficient pairs."""

    a: int
    b: int

    def __post_init__(self):
        if (self.a, self.b) not in _VALID_COEFFS:
            raise ValueError(f"({self.a}, {self.b}) is not a G2 root")

    @property
    def long(self) -> bool:
        return (self.a, self.b) in _LONG_COEFFS

    @property
    def length(self) -> str:
        return "long" if self.long else "short"

    @property
    def positive(self) -> bool:
        return (self.a, self.b) in POSITIVE_COEFFS

    def __neg__(self) -> "Root":
        return Root(-self.a, -self.b)

    def euclid(self) -> tuple[int, int, int]:
        """Coordinates in the fixed Euclidean realization."""
        return tuple(
            self.a * x + self.b * y for x, y in zip(_EUCLID_A1, _EUCLID_A2)
        )

    def __str__(self) -> str:
        return f"{self.a}*a1+{self.b}*a2 ({self.length})"

    def key(self) -> str:
        """Compact form used in JSON maps, e.g. "1,0"."""
        return f"{self.a},{self.b}"


A1 = Root(1, 0)
A2 = Root(0, 1)

_ALL = tuple(
    [Root(a, b) for a, b in POSITIVE_COEFFS]
    + [Root(-a, -b) for a, b in POSITIVE_COEFFS]
)
_INDEX = {r: i for i, r in enumerate(_ALL)}


def all_roots() -> tuple[Root, ...]:
    """All 12 roots: the 6 positives in listing order, then their negatives."""
    return _ALL


def positive_roots() -> tuple[Root, ...]:
    return _ALL[:6]


def root_index(r: Root) -> int:
    """Position of a root in the canonical 12-element ordering."""
    return _INDEX[r]


def is_root(a: int, b: int) -> bool:
    return (a, b) in _VALID_COEFFS


def add_roots(x: Root, y: Root) -> Root | None:
    """The root x + y, or None when the sum is not a root."""
    a, b = x.a + y.a, x.b + y.b
    return Root(a, b) if (a, b) in _VALID_COEFFS else None


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def cartan_integer(beta: Root, alpha: Root) -> int:
    """The Cartan integer <beta, alpha> = 2(beta, alpha)/(alpha, alpha)."""
    ea, eb = alpha.euclid(), beta.euclid()
    num = 2 * _dot(eb, ea)
    den = _dot(ea, ea)
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("Cartan pairing is not integral")
    return q

def reflect(beta: Root, alpha: Root) -> Root:
    """Weyl reflection of beta in the hyperplane orthogonal to alpha."""
    c = cartan_integer(beta, alpha)
    return Root(beta.a - c * alpha.a, beta.b - c * alpha.b)


def root_string(beta: Root, alpha: Root) -> tuple[int, int]:
    """The alpha-string through beta: largest p, q with beta - p*alpha
    and beta + q*alpha both roots."""
    if beta == alpha or beta == -alpha:
        raise AntipodalPair(f"string of {beta} through {alpha}")
    p = 0
    while is_root(beta.a - (p + 1) * alpha.a, beta.b - (p + 1) * alpha.b):
        p += 1
    q = 0
    while is_root(beta.a + (q + 1) * alpha.a, beta.b + (q + 1) * alpha.b):
        q += 1
    return p, q


def root_from_key(key: str) -> Root:
    """Parse "a,b" back into a root."""
    a, b = key.split(",")
    return Root(int(a), int(b))
