"""Variant part of E(M_Dol(SL_r)) from the C*-fixed components of type
(1, ..., 1), for prime r.

Such a component is E = L_1 + ... + L_r with phi_i : L_i -> L_{i+1} K; it is
labelled by the degrees m_i of the zero divisors of the phi_i. Two routes
compute the total: enumerating admissible m-tuples directly, and a
roots-of-unity filter over the generating function.

Sign convention: M_i = L_i^{-1} L_{i+1} K gives m_i = l_{i+1} - l_i + 2g - 2,
hence sum i*m_i = -d (mod r). The opposite convention ("plus") selects the
reversed tuples and yields the same polynomial.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

from .algebra import BiPoly, prym_generating_term, require_prime, rou_filter
from .errors import InvariantViolation, OpenConjectureError, ParameterError
from .pgl import check_params

Convention = Literal["minus", "plus"]


@lru_cache(maxsize=None)
def coeff_cm(g: int, m: int) -> BiPoly:
    """Coefficient of t^m in ((1 - t u)(1 - t v))^{g-1}."""
    if g < 1 or m < 0:
        raise ParameterError(f"need g >= 1 and m >= 0, got g={g}, m={m}")
    n = g - 1
    sign = -1 if m % 2 else 1
    return BiPoly(
        ((a, m - a), sign * math.comb(n, a) * math.comb(n, m - a))
        for a in range(max(0, m - n), min(m, n) + 1)
    )


def congruence_target(r: int, d: int, convention: Convention = "minus") -> int:
    if convention == "minus":
        return (-d) % r
    if convention == "plus":
        return d % r
    raise ParameterError(f"unknown convention {convention!r}")


def enumerate_mtuples(r: int, g: int, d: int, convention: Convention = "minus") -> list[tuple[int, ...]]:
    """All (m_1..m_{r-1}) in [0, 2g-2]^{r-1} with sum i*m_i in the target class mod r,
    lexicographically ordered."""
    require_prime(r)
    if g < 1:
        raise ParameterError(f"genus g={g} must be >= 1")
    if math.gcd(d, r) != 1:
        raise ParameterError(f"d={d} must be coprime to r={r}")
    target = congruence_target(r, d, convention)
    weights = range(1, r)
    return [
        m
        for m in itertools.product(range(2 * g - 1), repeat=r - 1)
        if sum(i * x for i, x in zip(weights, m)) % r == target
    ]


def reconstruct_degrees(r: int, g: int, d: int, m: Sequence[int]) -> tuple[int, ...]:
    """Line-bundle degrees (l_1..l_r) of the component labelled by m."""
    if len(m) != r - 1:
        raise ParameterError(f"m-tuple {tuple(m)} must have length r-1={r - 1}")
    num = sum(i * x for i, x in enumerate(m, start=1)) + d
    if num % r:
        raise ParameterError(f"m-tuple {tuple(m)} violates the degree congruence for r={r}, d={d}")
    l = [0] * r
    l[r - 1] = num // r - (g - 1) * (r - 1)
    for i in range(r - 2, -1, -1):
        l[i] = l[i + 1] - m[i] + (2 * g - 2)
    if sum(l) != d:
        raise InvariantViolation(f"reconstructed degrees {l} do not sum to d={d}")
    return tuple(l)


@dataclass(frozen=True)
class StabilityResult:
    stable: bool
    failing_k: int | None = None

    def __bool__(self) -> bool:
        return self.stable


def check_stability(r: int, d: int, l: Sequence[int]) -> StabilityResult:
    """Slope test against the invariant subbundles L_k + ... + L_r, k = 2..r,
    in cleared-denominator form r * sum_{i>=k} l_i < d * (r-k+1)."""
    if len(l) != r:
        raise ParameterError(f"degree vector {tuple(l)} must have length r={r}")
    if sum(l) != d:
        raise ParameterError(f"degree vector {tuple(l)} sums to {sum(l)}, expected d={d}")
    tail = 0
    fails = []
    for k in range(r, 1, -1):
        tail += l[k - 1]
        if not r * tail < d * (r - k + 1):
            fails.append(k)
    if fails:
        return StabilityResult(False, min(fails))
    return StabilityResult(True)


def _tuple_sum(tuples: Sequence[tuple[int, ...]], g: int) -> BiPoly:
    # the product over a tuple depends only on its multiset of entries
    by_multiset = Counter(tuple(sorted(m)) for m in tuples)
    cache: dict[tuple[int, ...], BiPoly] = {(): BiPoly.one()}

    def product(key: tuple[int, ...]) -> BiPoly:
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = product(key[:-1]) * coeff_cm(g, key[-1])
        return hit

    total = BiPoly.zero()
    for key in sorted(by_multiset):
        total = total + product(key) * by_multiset[key]
    return total


def _scale(poly: BiPoly, r: int, g: int) -> BiPoly:
    shift = (r**2 - 1) * (g - 1)
    return (poly * (r ** (2 * g) - 1)).shift(shift, shift)


def sl_variant_enum(r: int, g: int, d: int, convention: Convention = "minus") -> BiPoly:
    """Sum over admissible m-tuples of (r^{2g}-1)(uv)^{(r^2-1)(g-1)} prod_i c_{m_i}.

    Under the ``minus`` convention each tuple's degree vector is rebuilt and
    checked stable; an unstable tuple raises ``InvariantViolation``.
    """
    check_params(r, g, d)
    tuples = enumerate_mtuples(r, g, d, convention)
    if convention == "minus":
        for m in tuples:
            res = check_stability(r, d, reconstruct_degrees(r, g, d, m))
            if not res:
                raise InvariantViolation(f"m-tuple {m} is unstable at k={res.failing_k} (r={r}, g={g}, d={d})")
    return _scale(_tuple_sum(tuples, g), r, g)


def sl_variant_filter(r: int, g: int, d: int) -> BiPoly:
    """Same polynomial via the z^{-jd}-twisted average of the generating function."""
    check_params(r, g, d)
    avg = rou_filter(lambda j: prym_generating_term(r, g, j), d, r)
    return _scale(avg, r, g)


LEMMA_TYPE_R = "stable-bundle component: Gamma acts trivially on its cohomology (Harder-Narasimhan)"
LEMMA_RANK3 = "rank 3, types (1,2)/(2,1): Bradlow-pair flips preserve trivial Gamma-action (Gothen)"


def other_component_variant(type_: Sequence[int], r: int, g: int) -> tuple[BiPoly, str]:
    """Variant contribution of a fixed component of a type other than (1, ..., 1).

    Returns the zero polynomial with its justification when known; raises
    ``OpenConjectureError`` when it is not.
    """
    require_prime(r)
    if g < 1:
        raise ParameterError(f"genus g={g} must be >= 1")
    t = tuple(type_)
    if not t or any(not isinstance(x, int) or x <= 0 for x in t) or sum(t) != r:
        raise ParameterError(f"type {t} must be positive integers summing to r={r}")
    if t == (1,) * r:
        raise ParameterError("type (1, ..., 1) is computed by sl_variant_enum / sl_variant_filter")
    if t == (r,):
        return BiPoly.zero(), LEMMA_TYPE_R
    if r == 3 and t in ((1, 2), (2, 1)):
        return BiPoly.zero(), LEMMA_RANK3
    raise OpenConjectureError(
        f"variant contribution of type {t} at r={r} is unknown (conjectured to vanish)"
    )
