"""Exact arithmetic: sparse bivariate integer polynomials in (u, v) and the
cyclotomic ring Z[zeta_r] for prime r.

Everything here is immutable. Coefficients are Python ints, so there is no
overflow; rationals never appear because every division is checked exact.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

from .errors import (
    IncompatibleRingError,
    InexactDivisionError,
    NonRationalError,
    ParameterError,
)

Exponent = tuple[int, int]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def require_prime(r: int) -> None:
    if not isinstance(r, int) or not is_prime(r):
        raise ParameterError(f"rank r={r!r} must be prime")


# ---------------------------------------------------------------------------
# BiPoly
# ---------------------------------------------------------------------------


class BiPoly:
    """Sparse polynomial in u, v with integer coefficients.

    Stored as a dict ``{(p, q): c}`` with no zero coefficients; the zero
    polynomial is the empty dict.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, int] = {}
        for (p, q), c in items:
            if p < 0 or q < 0:
                raise ParameterError(f"negative exponent {(p, q)}")
            key = (int(p), int(q))
            acc[key] = acc.get(key, 0) + int(c)
        self._terms = {k: c for k, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict[Exponent, int]) -> BiPoly:
        # caller guarantees no zeros
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> BiPoly:
        return cls._wrap({})

    @classmethod
    def one(cls) -> BiPoly:
        return cls._wrap({(0, 0): 1})

    @classmethod
    def constant(cls, c: int) -> BiPoly:
        return cls._wrap({(0, 0): c} if c else {})

    @classmethod
    def monomial(cls, p: int, q: int, c: int = 1) -> BiPoly:
        return cls({(p, q): c})

    @classmethod
    def u(cls) -> BiPoly:
        return cls._wrap({(1, 0): 1})

    @classmethod
    def v(cls) -> BiPoly:
        return cls._wrap({(0, 1): 1})

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[Exponent, int]]:
        """Terms in canonical ascending lexicographic order of (p, q)."""
        return sorted(self._terms.items())

    def coefficient(self, p: int, q: int) -> int:
        return self._terms.get((p, q), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def total_degree(self) -> int:
        return max((p + q for p, q in self._terms), default=-1)

    def swap(self) -> BiPoly:
        """Exchange the roles of u and v."""
        return BiPoly._wrap({(q, p): c for (p, q), c in self._terms.items()})

    def shift(self, p: int, q: int) -> BiPoly:
        """Multiply by the monomial u^p v^q."""
        return BiPoly._wrap({(a + p, b + q): c for (a, b), c in self._terms.items()})

    def content_divisible_by(self, n: int) -> bool:
        return all(c % n == 0 for c in self._terms.values())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = BiPoly.constant(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> BiPoly:
        return BiPoly._wrap({k: -c for k, c in self._terms.items()})

    def __add__(self, other: BiPoly | int) -> BiPoly:
        if isinstance(other, int):
            other = BiPoly.constant(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return BiPoly._wrap(out)

    __radd__ = __add__

    def __sub__(self, other: BiPoly | int) -> BiPoly:
        if isinstance(other, int):
            other = BiPoly.constant(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: int) -> BiPoly:
        return BiPoly.constant(other) - self

    def __mul__(self, other: BiPoly | int) -> BiPoly:
        if isinstance(other, int):
            if other == 0:
                return BiPoly.zero()
            return BiPoly._wrap({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, BiPoly):
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> BiPoly:
        return poly_pow(self, n)

    def __repr__(self) -> str:
        return f"BiPoly({self.items()!r})"

    def __str__(self) -> str:
        return format_text(self)


def poly_mul(a: BiPoly, b: BiPoly) -> BiPoly:
    if len(a._terms) < len(b._terms):
        a, b = b, a
    out: dict[Exponent, int] = {}
    get = out.get
    bterms = list(b._terms.items())
    for (p1, q1), c1 in a._terms.items():
        for (p2, q2), c2 in bterms:
            k = (p1 + p2, q1 + q2)
            out[k] = get(k, 0) + c1 * c2
    return BiPoly._wrap({k: c for k, c in out.items() if c})


def poly_pow(a: BiPoly, n: int) -> BiPoly:
    if n < 0:
        raise ParameterError(f"negative exponent {n}")
    result = BiPoly.one()
    base = a
    while n:
        if n & 1:
            result = poly_mul(result, base)
        n >>= 1
        if n:
            base = poly_mul(base, base)
    return result


def exact_div(a: BiPoly, n: int) -> BiPoly:
    """Divide every coefficient by ``n``; raise if any division leaves a remainder."""
    if n == 0:
        raise ParameterError("division by zero")
    out = {}
    for k, c in sorted(a._terms.items()):
        q, rem = divmod(c, n)
        if rem:
            raise InexactDivisionError(k, c, n)
        out[k] = q
    return BiPoly._wrap(out)


def univariate(coeffs: Iterable[int], var: str = "u") -> BiPoly:
    """Build sum_k coeffs[k] * var^k."""
    if var == "u":
        return BiPoly(((k, 0), c) for k, c in enumerate(coeffs))
    return BiPoly(((0, k), c) for k, c in enumerate(coeffs))


def format_text(p: BiPoly) -> str:
    """Human-readable form: descending total degree, then descending power of u."""
    if p.is_zero():
        return "0"
    order = sorted(p._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))
    parts = []
    for i, ((a, b), c) in enumerate(order):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        factors = []
        if a:
            factors.append("u" if a == 1 else f"u^{a}")
        if b:
            factors.append("v" if b == 1 else f"v^{b}")
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if i == 0:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Cyclotomic ring Z[zeta_r]
# ---------------------------------------------------------------------------


def _reduce_full(full: list[int], r: int) -> tuple[int, ...]:
    # full has length r (coefficients of 1, z, ..., z^(r-1)); apply
    # z^(r-1) = -(1 + z + ... + z^(r-2))
    top = full[r - 1]
    return tuple(full[i] - top for i in range(r - 1))


def _cyc_mul_coords(a: tuple[int, ...], b: tuple[int, ...], r: int) -> tuple[int, ...]:
    full = [0] * r
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                full[(i + j) % r] += x * y
    return _reduce_full(full, r)


class CycElem:
    """Element a_0 + a_1 z + ... + a_{r-2} z^{r-2} of Z[z], z a primitive r-th root of unity."""

    __slots__ = ("r", "coords")

    def __init__(self, r: int, coords: Iterable[int]):
        coords = tuple(int(c) for c in coords)
        if len(coords) != r - 1:
            raise ParameterError(f"expected {r - 1} coordinates, got {len(coords)}")
        self.r = r
        self.coords = coords

    @classmethod
    def _wrap(cls, r: int, coords: tuple[int, ...]) -> CycElem:
        obj = cls.__new__(cls)
        obj.r = r
        obj.coords = coords
        return obj

    @classmethod
    def from_int(cls, r: int, n: int) -> CycElem:
        return cls._wrap(r, (n,) + (0,) * (r - 2))

    @classmethod
    def zeta_power(cls, r: int, k: int) -> CycElem:
        """z^k, reduced to the power basis."""
        full = [0] * r
        full[k % r] = 1
        return cls._wrap(r, _reduce_full(full, r))

    def _check(self, other: CycElem) -> None:
        if self.r != other.r:
            raise IncompatibleRingError(f"cannot combine Z[zeta_{self.r}] with Z[zeta_{other.r}]")

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> int:
        if not self.is_rational():
            raise NonRationalError(f"{self!r} is not a rational integer")
        return self.coords[0]

    def conjugate(self, k: int) -> CycElem:
        """Galois conjugate z -> z^k."""
        if k % self.r == 0:
            raise ParameterError("k must be a unit mod r")
        full = [0] * self.r
        for i, c in enumerate(self.coords):
            full[(i * k) % self.r] += c
        return CycElem._wrap(self.r, _reduce_full(full, self.r))

    def norm(self) -> int:
        out = CycElem.from_int(self.r, 1)
        for k in range(1, self.r):
            out = out * self.conjugate(k)
        return out.rational_value()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, CycElem):
            return NotImplemented
        return self.r == other.r and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.r, self.coords))

    def __add__(self, other: CycElem | int) -> CycElem:
        if isinstance(other, int):
            other = CycElem.from_int(self.r, other)
        self._check(other)
        return CycElem._wrap(self.r, tuple(x + y for x, y in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> CycElem:
        return CycElem._wrap(self.r, tuple(-x for x in self.coords))

    def __sub__(self, other: CycElem | int) -> CycElem:
        return self + (-other)

    def __mul__(self, other: CycElem | int) -> CycElem:
        if isinstance(other, int):
            return CycElem._wrap(self.r, tuple(x * other for x in self.coords))
        self._check(other)
        return CycElem._wrap(self.r, _cyc_mul_coords(self.coords, other.coords, self.r))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> CycElem:
        out = CycElem.from_int(self.r, 1)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"CycElem(r={self.r}, {list(self.coords)})"


def cyc_mul(a: CycElem, b: CycElem) -> CycElem:
    return a * b


class CycBiPoly:
    """Polynomial in u, v with coefficients in Z[zeta_r]."""

    __slots__ = ("r", "_terms")

    def __init__(self, r: int, terms: Mapping[Exponent, CycElem] | None = None):
        self.r = r
        self._terms: dict[Exponent, tuple[int, ...]] = {}
        for k, c in (terms or {}).items():
            if c.r != r:
                raise IncompatibleRingError(f"coefficient over Z[zeta_{c.r}] in Z[zeta_{r}] polynomial")
            if not c.is_zero():
                self._terms[k] = c.coords

    @classmethod
    def _wrap(cls, r: int, terms: dict[Exponent, tuple[int, ...]]) -> CycBiPoly:
        obj = cls.__new__(cls)
        obj.r = r
        obj._terms = terms
        return obj

    @classmethod
    def from_bipoly(cls, r: int, p: BiPoly) -> CycBiPoly:
        pad = (0,) * (r - 2)
        return cls._wrap(r, {k: (c,) + pad for k, c in p._terms.items()})

    @classmethod
    def one(cls, r: int) -> CycBiPoly:
        return cls.from_bipoly(r, BiPoly.one())

    def coefficient(self, p: int, q: int) -> CycElem:
        coords = self._terms.get((p, q))
        if coords is None:
            return CycElem.from_int(self.r, 0)
        return CycElem._wrap(self.r, coords)

    def items(self) -> list[tuple[Exponent, CycElem]]:
        return [(k, CycElem._wrap(self.r, c)) for k, c in sorted(self._terms.items())]

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycBiPoly):
            return NotImplemented
        return self.r == other.r and self._terms == other._terms

    def __add__(self, other: CycBiPoly) -> CycBiPoly:
        if self.r != other.r:
            raise IncompatibleRingError("mismatched cyclotomic rings")
        out = dict(self._terms)
        for k, c in other._terms.items():
            if k in out:
                s = tuple(x + y for x, y in zip(out[k], c))
                if any(s):
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = c
        return CycBiPoly._wrap(self.r, out)

    def scale(self, c: CycElem | int) -> CycBiPoly:
        if isinstance(c, int):
            c = CycElem.from_int(self.r, c)
        if c.r != self.r:
            raise IncompatibleRingError("mismatched cyclotomic rings")
        out = {}
        for k, x in self._terms.items():
            y = _cyc_mul_coords(x, c.coords, self.r)
            if any(y):
                out[k] = y
        return CycBiPoly._wrap(self.r, out)

    def __mul__(self, other: CycBiPoly) -> CycBiPoly:
        if self.r != other.r:
            raise IncompatibleRingError("mismatched cyclotomic rings")
        r = self.r
        acc: dict[Exponent, list[int]] = {}
        for (p1, q1), x in self._terms.items():
            for (p2, q2), y in other._terms.items():
                k = (p1 + p2, q1 + q2)
                slot = acc.get(k)
                if slot is None:
                    slot = acc[k] = [0] * r
                # accumulate unreduced (mod z^r - 1), reduce once per term
                for i, a in enumerate(x):
                    if a:
                        for j, b in enumerate(y):
                            if b:
                                slot[(i + j) % r] += a * b
        out = {}
        for k, full in acc.items():
            red = _reduce_full(full, r)
            if any(red):
                out[k] = red
        return CycBiPoly._wrap(r, out)

    def __pow__(self, n: int) -> CycBiPoly:
        if n < 0:
            raise ParameterError(f"negative exponent {n}")
        result = CycBiPoly.one(self.r)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def to_bipoly(self) -> BiPoly:
        """Collapse to an integer polynomial; every coefficient must be rational."""
        out = {}
        for k, c in sorted(self._terms.items()):
            if any(c[1:]):
                raise NonRationalError(
                    f"coefficient of u^{k[0]} v^{k[1]} is irrational: {CycElem._wrap(self.r, c)!r}"
                )
            out[k] = c[0]
        return BiPoly._wrap(out)

    def __repr__(self) -> str:
        return f"CycBiPoly(r={self.r}, {self.items()!r})"


def prym_generating_term(r: int, g: int, j: int) -> CycBiPoly:
    """prod_{i=1}^{r-1} ((1 - z^{ij} u)(1 - z^{ij} v))^{g-1} as a CycBiPoly.

    The u-part and v-part factor separately, so each is built as a
    univariate product first and the two are multiplied once.
    """
    one = CycElem.from_int(r, 1)
    u_part = CycBiPoly.one(r)
    for i in range(1, r):
        root = CycElem.zeta_power(r, i * j)
        u_part = u_part * CycBiPoly(r, {(0, 0): one, (1, 0): -root})
    u_part = u_part ** (g - 1)
    v_part = CycBiPoly._wrap(r, {(q, p): c for (p, q), c in u_part._terms.items()})
    return u_part * v_part


def rou_filter(evaluate: Callable[[int], CycBiPoly], twist: int, r: int) -> BiPoly:
    """(1/r) * sum_{j=0}^{r-1} z^{-j*twist} * evaluate(j), as an integer polynomial.

    Orthogonality of the r-th roots of unity forces the sum to be rational
    and divisible by r; both facts are checked and a failure raises
    ``InvariantViolation``.
    """
    require_prime(r)
    total = CycBiPoly._wrap(r, {})
    for j in range(r):
        term = evaluate(j)
        if term.r != r:
            raise IncompatibleRingError(f"evaluate({j}) returned a polynomial over Z[zeta_{term.r}]")
        total = total + term.scale(CycElem.zeta_power(r, -j * twist))
    return exact_div(total.to_bipoly(), r)
