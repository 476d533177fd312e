import cmath
import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mirror_hodge.algebra import BiPoly
from mirror_hodge.errors import EnumerationCapError, ParameterError
from mirror_hodge.torsion import (
    TorsionGroup,
    character_average,
    component_action_exponent,
    pairing_value_counts,
    prym_h1_eigenvalues,
    weil_pairing,
)

U, V = BiPoly.u(), BiPoly.v()


def evaluate(p: BiPoly, x: complex, y: complex) -> complex:
    return sum(c * x**a * y**b for (a, b), c in p.items())


def numeric_average(r, g, gamma, e, x, y):
    """Floating-point Gamma-average by explicit enumeration, for cross-checking."""
    total = 0
    grp = gamma.group
    for coords in itertools.product(range(r), repeat=2 * g):
        delta = grp.element(coords)
        rho = cmath.exp(2j * cmath.pi * weil_pairing(gamma, delta) / r)
        term = rho ** (-e)
        for i in range(1, r):
            term *= ((1 - rho**i * x) * (1 - rho**i * y)) ** (g - 1)
        total += term
    return total / r ** (2 * g)


def group_and_elements(max_r=5, max_g=3):
    return st.tuples(st.sampled_from([p for p in (2, 3, 5) if p <= max_r]), st.integers(1, max_g)).flatmap(
        lambda rg: st.tuples(
            st.just(TorsionGroup(*rg)),
            *[st.lists(st.integers(0, rg[0] - 1), min_size=2 * rg[1], max_size=2 * rg[1]) for _ in range(3)],
        )
    )


class TestGroup:
    def test_rejects_composite(self):
        with pytest.raises(ParameterError):
            TorsionGroup(4, 2)
        with pytest.raises(ParameterError):
            TorsionGroup(3, 0)

    def test_element_validation(self):
        grp = TorsionGroup(3, 1)
        with pytest.raises(ParameterError):
            grp.element([1, 2, 0])
        assert grp.element([4, -1]).coords == (1, 2)

    def test_iteration_covers_group(self):
        grp = TorsionGroup(3, 1)
        assert len({x.coords for x in grp}) == 9


class TestWeilPairing:
    def test_standard_basis(self):
        for g in (1, 2, 3):
            grp = TorsionGroup(5, g)
            for i in range(1, g + 1):
                assert weil_pairing(grp.basis(i), grp.basis(g + i)) == 1
                assert weil_pairing(grp.basis(g + i), grp.basis(i)) == 4

    def test_direct_formula(self):
        grp = TorsionGroup(3, 1)
        assert weil_pairing(grp.element([1, 2]), grp.element([2, 1])) == 0

    def test_group_mismatch(self):
        with pytest.raises(ParameterError):
            weil_pairing(TorsionGroup(3, 1).basis(1), TorsionGroup(3, 2).basis(1))

    @given(group_and_elements())
    def test_bilinear_antisymmetric(self, data):
        grp, a, b, c = data
        a, b, c = grp.element(a), grp.element(b), grp.element(c)
        r = grp.r
        assert weil_pairing(a, a) == 0
        assert weil_pairing(a, b) == (-weil_pairing(b, a)) % r
        assert weil_pairing(a + b, c) == (weil_pairing(a, c) + weil_pairing(b, c)) % r
        assert weil_pairing(3 * a, c) == (3 * weil_pairing(a, c)) % r

    @given(group_and_elements())
    def test_nondegenerate(self, data):
        grp, a, _, _ = data
        a = grp.element(a)
        if not a.is_identity():
            assert any(weil_pairing(a, grp.basis(i)) for i in range(1, grp.rank + 1))


class TestPairingCounts:
    def _brute(self, gamma):
        counts = {v: 0 for v in range(gamma.group.r)}
        for delta in gamma.group:
            counts[weil_pairing(gamma, delta)] += 1
        return counts

    def test_examples(self):
        grp = TorsionGroup(2, 2)
        assert pairing_value_counts(grp.basis(1)) == {0: 8, 1: 8} == self._brute(grp.basis(1))
        grp = TorsionGroup(3, 1)
        assert pairing_value_counts(grp.basis(1)) == {0: 3, 1: 3, 2: 3} == self._brute(grp.basis(1))

    @pytest.mark.parametrize("r,g", [(2, 1), (2, 3), (3, 2), (5, 1), (5, 2), (7, 1)])
    def test_equidistribution_all_gammas(self, r, g):
        grp = TorsionGroup(r, g)
        for gamma in list(grp)[1:40]:
            assert pairing_value_counts(gamma) == {v: r ** (2 * g - 1) for v in range(r)}

    def test_vectorized_matches_bruteforce(self):
        grp = TorsionGroup(3, 2)
        gamma = grp.element([1, 2, 0, 1])
        assert pairing_value_counts(gamma) == self._brute(gamma)

    def test_identity_rejected(self):
        with pytest.raises(ParameterError):
            pairing_value_counts(TorsionGroup(3, 1).identity())

    def test_cap(self):
        with pytest.raises(EnumerationCapError):
            pairing_value_counts(TorsionGroup(2, 11).basis(1))


class TestCharacterAverage:
    def test_r2_g2(self):
        grp = TorsionGroup(2, 2)
        expected = -U - V
        assert character_average(grp.basis(1), 1, mode="full") == expected
        assert character_average(grp.basis(1), 1, mode="reduced") == expected

    def test_g1_vanishes(self):
        for e in (1, 3, 5, -1):
            assert character_average(TorsionGroup(2, 1).basis(1), e, mode="full").is_zero()

    def test_r3_g2(self):
        expected = -U - V + U * V - U * U * V - U * V * V
        gamma = TorsionGroup(3, 2).basis(1)
        assert character_average(gamma, 1, mode="full") == expected
        assert character_average(gamma, 1, mode="reduced") == expected

    @pytest.mark.parametrize("r,g", [(2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
    def test_numeric_oracle(self, r, g):
        grp = TorsionGroup(r, g)
        gamma = grp.element([1] + [0] * (2 * g - 2) + [1])
        for e in range(1, r):
            poly = character_average(gamma, e, mode="full")
            for x, y in [(0.3 + 0.1j, -0.7j), (1.1, 0.4 - 0.2j)]:
                assert abs(evaluate(poly, x, y) - numeric_average(r, g, gamma, e, x, y)) < 1e-9

    @pytest.mark.parametrize("r,g", [(2, 1), (2, 4), (3, 3), (5, 2), (7, 2)])
    def test_modes_agree(self, r, g):
        grp = TorsionGroup(r, g)
        for gamma in (grp.basis(1), grp.basis(2 * g), grp.element([1] * 2 * g)):
            for e in range(1, r):
                assert character_average(gamma, e, mode="full") == character_average(gamma, e, mode="reduced")

    def test_e_periodic(self):
        gamma = TorsionGroup(5, 2).basis(1)
        for e in range(1, 5):
            assert character_average(gamma, e) == character_average(gamma, e + 5) == character_average(gamma, e - 10)

    def test_full_mode_cap(self):
        with pytest.raises(EnumerationCapError):
            character_average(TorsionGroup(2, 11).basis(1), 1, mode="full")
        # reduced mode is unaffected by the cap
        assert character_average(TorsionGroup(2, 11).basis(1), 1, mode="reduced").swap() == character_average(
            TorsionGroup(2, 11).basis(1), 1
        )

    def test_genus_mismatch(self):
        with pytest.raises(ParameterError):
            character_average(TorsionGroup(3, 2).basis(1), 1, g=3)


class TestComponentAction:
    def test_examples(self):
        grp = TorsionGroup(3, 1)
        gamma, delta = grp.basis(1), grp.basis(2)
        assert weil_pairing(gamma, delta) == 1
        assert component_action_exponent(gamma, delta, 1) == 1
        assert component_action_exponent(gamma, delta, 2) == 2
        assert component_action_exponent(gamma, gamma, 2) == 0
        assert component_action_exponent(gamma, delta, 2, galois_twist=True) == 1

    def test_modular_inverse_bruteforce(self):
        r = 7
        grp = TorsionGroup(r, 1)
        gamma, delta = grp.basis(1), grp.basis(2)
        for d in range(1, r):
            q = next(q for q in range(r) if q * d % r == 1)
            assert component_action_exponent(gamma, delta, d) == q % r

    def test_requires_coprime(self):
        grp = TorsionGroup(3, 1)
        with pytest.raises(ParameterError):
            component_action_exponent(grp.basis(1), grp.basis(2), 3)


class TestPrymEigenvalues:
    def test_examples(self):
        grp = TorsionGroup(3, 1)
        assert prym_h1_eigenvalues(grp.basis(1), grp.basis(2)) == []
        grp = TorsionGroup(3, 2)
        assert prym_h1_eigenvalues(grp.basis(1), grp.basis(3)) == [1, 2]
        grp = TorsionGroup(5, 3)
        assert prym_h1_eigenvalues(grp.basis(1), grp.basis(2)) == [0] * 8

    def test_regular_minus_trivial(self):
        # a nonzero pairing value gives each nontrivial character g-1 times
        grp = TorsionGroup(5, 3)
        eig = prym_h1_eigenvalues(grp.basis(1), 2 * grp.basis(4))
        assert eig == sorted([1, 2, 3, 4] * 2)
