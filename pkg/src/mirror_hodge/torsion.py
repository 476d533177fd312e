"""The r-torsion of a genus-g Jacobian, modelled as (Z/r)^{2g} with the
standard symplectic (Weil) pairing.

Line bundles themselves are not modelled: every quantity needed downstream
depends only on pairing values against a fixed nontrivial element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from .algebra import (
    BiPoly,
    CycBiPoly,
    CycElem,
    exact_div,
    prym_generating_term,
    require_prime,
    rou_filter,
)
from .errors import EnumerationCapError, ParameterError

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class TorsionGroup:
    r: int
    g: int

    def __post_init__(self):
        require_prime(self.r)
        if self.g < 1:
            raise ParameterError(f"genus g={self.g} must be >= 1")

    @property
    def order(self) -> int:
        return self.r ** (2 * self.g)

    @property
    def rank(self) -> int:
        return 2 * self.g

    def element(self, coords) -> TorsionElement:
        return TorsionElement(self, tuple(int(c) % self.r for c in coords))

    def identity(self) -> TorsionElement:
        return self.element([0] * self.rank)

    def basis(self, i: int) -> TorsionElement:
        """The i-th standard basis vector, 1-based: e_1..e_g, then e_{g+1}..e_{2g}."""
        if not 1 <= i <= self.rank:
            raise ParameterError(f"basis index {i} out of range 1..{self.rank}")
        coords = [0] * self.rank
        coords[i - 1] = 1
        return self.element(coords)

    def pairing_matrix(self) -> np.ndarray:
        g = self.g
        J = np.zeros((2 * g, 2 * g), dtype=np.int64)
        J[:g, g:] = np.eye(g, dtype=np.int64)
        J[g:, :g] = -np.eye(g, dtype=np.int64)
        return J

    def __iter__(self) -> Iterator[TorsionElement]:
        for row in self.all_coords():
            yield TorsionElement(self, tuple(int(x) for x in row))

    def all_coords(self, cap: int | None = None) -> np.ndarray:
        """Every element as a row of residues, in mixed-radix order."""
        if cap is not None and self.order > cap:
            raise EnumerationCapError(
                f"|Gamma| = {self.r}^{2 * self.g} = {self.order} exceeds the enumeration cap {cap}; "
                "use reduced mode"
            )
        idx = np.arange(self.order, dtype=np.int64)
        powers = self.r ** np.arange(self.rank, dtype=np.int64)
        return (idx[:, None] // powers[None, :]) % self.r


@dataclass(frozen=True)
class TorsionElement:
    group: TorsionGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise ParameterError(f"expected {self.group.rank} coordinates, got {len(self.coords)}")
        if any(not 0 <= c < self.group.r for c in self.coords):
            raise ParameterError(f"coordinates {self.coords} not reduced mod {self.group.r}")

    def is_identity(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: TorsionElement) -> TorsionElement:
        _same_group(self, other)
        return self.group.element(a + b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> TorsionElement:
        return self.group.element(-a for a in self.coords)

    def __mul__(self, k: int) -> TorsionElement:
        return self.group.element(k * a for a in self.coords)

    __rmul__ = __mul__


def _same_group(a: TorsionElement, b: TorsionElement) -> None:
    if a.group != b.group:
        raise ParameterError(f"elements of different groups: {a.group} vs {b.group}")


def _require_nonzero(gamma: TorsionElement) -> None:
    if gamma.is_identity():
        raise ParameterError("gamma must be a nontrivial element (the pairing against 0 is degenerate)")


def weil_pairing(a: TorsionElement, b: TorsionElement) -> int:
    """sum_{i<=g} (a_i b_{g+i} - a_{g+i} b_i) mod r."""
    _same_group(a, b)
    g, r = a.group.g, a.group.r
    x, y = a.coords, b.coords
    return sum(x[i] * y[g + i] - x[g + i] * y[i] for i in range(g)) % r


def pairing_values(gamma: TorsionElement, cap: int | None = DEFAULT_CAP) -> np.ndarray:
    """Vector of <gamma, delta> over every delta in the group (enumeration order)."""
    grp = gamma.group
    if cap is not None and grp.order > cap:
        grp.all_coords(cap)  # raises EnumerationCapError
    # <gamma, delta> is linear in delta: accumulate digit by digit
    row = np.array(gamma.coords, dtype=np.int64) @ grp.pairing_matrix()
    idx = np.arange(grp.order, dtype=np.int64)
    vals = np.zeros(grp.order, dtype=np.int64)
    for k in range(grp.rank):
        if row[k] % grp.r:
            vals += ((idx // grp.r**k) % grp.r) * (row[k] % grp.r)
    return vals % grp.r


def pairing_value_counts(gamma: TorsionElement, cap: int | None = DEFAULT_CAP) -> dict[int, int]:
    """Histogram of <gamma, delta> over all delta, by exhaustive enumeration."""
    _require_nonzero(gamma)
    vals = pairing_values(gamma, cap)
    counts = np.bincount(vals, minlength=gamma.group.r)
    return {v: int(c) for v, c in enumerate(counts)}


def character_average(
    gamma: TorsionElement,
    e: int,
    g: int | None = None,
    mode: Literal["full", "reduced"] = "reduced",
    cap: int = DEFAULT_CAP,
) -> BiPoly:
    """Gamma-average of rho^{-e} * prod_{i=1}^{r-1} ((1 - rho^i u)(1 - rho^i v))^{g-1},
    where rho(delta) = zeta^{<gamma, delta>}.

    ``full`` enumerates every delta, weights each pairing value by its
    observed multiplicity and divides by |Gamma|. ``reduced`` uses the
    equidistribution of pairing values and averages over mu_r only.
    Both must give the same polynomial.
    """
    _require_nonzero(gamma)
    grp = gamma.group
    if g is None:
        g = grp.g
    elif g != grp.g:
        raise ParameterError(f"genus {g} does not match the group's genus {grp.g}")
    r = grp.r

    if mode == "reduced":
        return rou_filter(lambda j: prym_generating_term(r, g, j), e, r)
    if mode != "full":
        raise ParameterError(f"unknown mode {mode!r}")

    counts = np.bincount(pairing_values(gamma, cap), minlength=r)
    total = CycBiPoly(r)
    for value, weight in enumerate(counts.tolist()):
        if not weight:
            continue
        term = prym_generating_term(r, g, value)
        total = total + term.scale(CycElem.zeta_power(r, -e * value) * weight)
    return exact_div(total.to_bipoly(), grp.order)


def component_action_exponent(gamma: TorsionElement, delta: TorsionElement, d: int, galois_twist: bool = False) -> int:
    """Exponent k such that delta permutes the components of the norm fibre
    like the Galois element zeta^k: k = q * <gamma, delta> with q*d = 1 mod r.

    With ``galois_twist`` the negated exponent is returned (the correction
    applied after tensoring so the chosen component is preserved).
    """
    _require_nonzero(gamma)
    r = gamma.group.r
    if math.gcd(d, r) != 1:
        raise ParameterError(f"d={d} must be coprime to r={r}")
    q = pow(d, -1, r)
    k = (q * weil_pairing(gamma, delta)) % r
    return (-k) % r if galois_twist else k


def prym_h1_eigenvalues(gamma: TorsionElement, delta: TorsionElement, g: int | None = None) -> list[int]:
    """Exponents of the eigenvalues zeta^* of delta on H^{0,1} of the Prym:
    k * <gamma, delta> for k = 1..r-1, each g-1 times. Sorted."""
    _require_nonzero(gamma)
    grp = gamma.group
    g = grp.g if g is None else g
    w = weil_pairing(gamma, delta)
    return sorted((k * w) % grp.r for k in range(1, grp.r) for _ in range(g - 1))
