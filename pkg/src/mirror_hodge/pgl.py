"""Twisted-sector (gamma != 1) contributions to the stringy E-polynomial of
the PGL_r Higgs moduli space, for prime r.

Two routes produce the same polynomial: a closed form, and an assembly
from the fixed locus T*P (cotangent torsor of a Prym), its fermionic shift
and a character average over the torsion group.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import BiPoly, exact_div, poly_pow, require_prime, univariate
from .errors import InvariantViolation, ParameterError
from .torsion import TorsionGroup, character_average


class DegenerateGenusWarning(UserWarning):
    """g = 1: every variant polynomial vanishes and has no moduli interpretation."""


def check_params(r: int, g: int, *degrees: int) -> None:
    require_prime(r)
    if not isinstance(g, int) or g < 1:
        raise ParameterError(f"genus g={g!r} must be an integer >= 1")
    for x in degrees:
        if math.gcd(x, r) != 1:
            raise ParameterError(f"degree {x} must be coprime to r={r}")
    if g == 1:
        warnings.warn("g=1: variant E-polynomials vanish identically; the moduli interpretation is degenerate",
                      DegenerateGenusWarning, stacklevel=3)


@dataclass(frozen=True)
class GammaFixedLocus:
    """Dimension bookkeeping for the fixed locus of a nontrivial gamma."""

    r: int
    g: int

    @property
    def fixed_dim(self) -> int:
        # complex dimension of T*P
        return 2 * (self.r - 1) * (self.g - 1)

    @property
    def fermionic_shift(self) -> int:
        return fermionic_shift(self.r, self.g)

    @property
    def normal_rank(self) -> int:
        return 2 * self.ambient_half_dim - self.fixed_dim

    @property
    def ambient_half_dim(self) -> int:
        return (self.r**2 - 1) * (self.g - 1)

    def consistent(self) -> bool:
        return (
            self.fixed_dim // 2 + self.fermionic_shift == self.ambient_half_dim
            and 2 * self.fermionic_shift == self.normal_rank
        )


def fermionic_shift(r: int, g: int) -> int:
    """Half the rank of the normal bundle to T*P: r(r-1)(g-1)."""
    return r * (r - 1) * (g - 1)


def shift_from_weights(weights: Iterable[Fraction | int | str]) -> int:
    """Sum of normalized rotation weights in [0, 1); the sum must be an integer."""
    total = Fraction(0)
    for w in weights:
        w = Fraction(w)
        if not 0 <= w < 1:
            raise ParameterError(f"weight {w} outside [0, 1)")
        total += w
    if total.denominator != 1:
        raise ParameterError(f"weights sum to {total}, which is not an integer")
    return int(total)


def geometric_sum(r: int, var: str = "u") -> BiPoly:
    """1 + x + ... + x^{r-1}."""
    return univariate([1] * r, var)


def pgl_variant_closed(r: int, g: int, e: int) -> BiPoly:
    """(1/r)(r^{2g}-1)(uv)^{(r^2-1)(g-1)} [((1-u)(1-v))^{(r-1)(g-1)}
    - ((1+..+u^{r-1})(1+..+v^{r-1}))^{g-1}].

    Does not depend on e beyond the coprimality check.
    """
    check_params(r, g, e)
    one_minus = univariate([1, -1], "u") * univariate([1, -1], "v")
    geo = geometric_sum(r, "u") * geometric_sum(r, "v")
    bracket = poly_pow(one_minus, (r - 1) * (g - 1)) - poly_pow(geo, g - 1)
    shift = (r**2 - 1) * (g - 1)
    scaled = (bracket * (r ** (2 * g) - 1)).shift(shift, shift)
    try:
        return exact_div(scaled, r)
    except InvariantViolation as exc:
        raise InvariantViolation(f"closed PGL form not divisible by r={r} (g={g}): {exc}") from exc


def per_gamma_contribution(r: int, g: int, e: int, mode: str = "reduced") -> BiPoly:
    """E(T*P; L_{B,gamma})^Gamma (uv)^{F(gamma)} for a single nontrivial gamma."""
    check_params(r, g, e)
    grp = TorsionGroup(r, g)
    gamma = grp.basis(1)
    locus = GammaFixedLocus(r, g)
    if not locus.consistent():
        raise InvariantViolation(f"inconsistent fixed-locus dimensions for r={r}, g={g}")
    # E(C^{(r-1)(g-1)}) is (uv)^{(r-1)(g-1)} and Gamma-invariant
    affine = locus.fixed_dim // 2
    avg = character_average(gamma, e, g, mode=mode)
    f = locus.fermionic_shift
    return avg.shift(affine + f, affine + f)


def pgl_variant_raw(r: int, g: int, e: int, mode: str = "reduced") -> BiPoly:
    """(r^{2g}-1) copies of the per-gamma contribution, assembled from the
    torsion-group character average rather than the closed form."""
    return per_gamma_contribution(r, g, e, mode) * (r ** (2 * g) - 1)


LEADING_TERM = "E(M)^Gamma: untwisted sector, not computed (cancels in the variant identity)"


@dataclass(frozen=True)
class StringyHigherTerms:
    r: int
    g: int
    e: int
    leading: str
    per_gamma: BiPoly
    count: int
    total: BiPoly


def stringy_higher_terms(r: int, g: int, e: int) -> StringyHigherTerms:
    """Sum over conjugacy classes gamma != 1 of the stringy E-polynomial.

    Gamma is abelian so classes are elements and centralizers are all of
    Gamma; every nontrivial element has order r and contributes equally.
    """
    per = per_gamma_contribution(r, g, e)
    count = r ** (2 * g) - 1
    return StringyHigherTerms(r=r, g=g, e=e, leading=LEADING_TERM, per_gamma=per, count=count, total=per * count)
