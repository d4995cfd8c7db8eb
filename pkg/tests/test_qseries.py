from fractions import Fraction

import pytest

from walgebra.algebra import central_charge_p1
from walgebra.qseries import (
    QSeries,
    QSeriesError,
    chi_tilde,
    coeff_at_level,
    diff_at_level,
    phi,
    phi_trunc,
    triplet_character,
    triplet_theta_bracket,
    verma_character,
)


def partitions_min_part(n_max, kmin):
    """DP oracle: number of partitions with all parts >= kmin."""
    table = [0] * (n_max + 1)
    table[0] = 1
    for part in range(kmin, n_max + 1):
        for n in range(part, n_max + 1):
            table[n] += table[n - part]
    return table


def series_from_terms(terms, cutoff):
    coeffs = {}
    for e, c in terms:
        coeffs[e] = coeffs.get(e, Fraction(0)) + Fraction(c)
    return QSeries(1, Fraction(0), coeffs, cutoff)


def test_inverse_phi_counts_partitions():
    oracle = partitions_min_part(60, 1)
    inv = phi(60).inverse()
    for n in range(61):
        assert inv.coeffs.get(n, Fraction(0)) == oracle[n]
    assert oracle[6] == 11


def test_phi_trunc_identity_to_60():
    for k in range(2, 8):
        rhs = phi(60)
        for l in range(1, k):
            rhs = rhs * series_from_terms([(0, 1), (l, -1)], 60).inverse()
        assert phi_trunc(k, 60) == rhs


def test_phi_unit():
    assert phi(50) * phi(50).inverse() == QSeries.one(50)


def test_phi_trunc_counts_restricted_partitions():
    for k in (2, 3, 5):
        oracle = partitions_min_part(40, k)
        inv = phi_trunc(k, 40).inverse()
        for n in range(41):
            assert inv.coeffs.get(n, Fraction(0)) == oracle[n]


def verma_enumeration(p, n_max):
    """Count monomials in L modes (parts >= 2) and three colors of W modes
    (parts >= 2p-1)."""
    d = 2 * p - 1
    conv = partitions_min_part(n_max, 2)
    w_part = partitions_min_part(n_max, d)
    for _ in range(3):
        new = [0] * (n_max + 1)
        for a in range(n_max + 1):
            if conv[a]:
                for b in range(0, n_max + 1 - a):
                    new[a + b] += conv[a] * w_part[b]
        conv = new
    return conv


@pytest.mark.parametrize("p", [2, 3])
def test_verma_character_vs_enumeration(p):
    d = 2 * p - 1
    ch = verma_character([2, d, d, d], central_charge_p1(p), 25)
    oracle = verma_enumeration(p, 25)
    for level in range(26):
        assert coeff_at_level(ch, level) == oracle[level]


def test_verma_examples():
    ch = verma_character([2, 3, 3, 3], Fraction(-2), 10)
    assert coeff_at_level(ch, 6) == 19
    assert coeff_at_level(ch, 0) == 1
    assert ch.leading_exponent() == Fraction(1, 12)
    vir = verma_character([2], Fraction(-2), 20)
    assert vir == phi_trunc(2, 20).inverse().shift(Fraction(1, 12))
    with pytest.raises(QSeriesError):
        verma_character([3, 3], Fraction(0), 10)


def test_triplet_character_examples():
    tc = triplet_character(2, 12)
    assert coeff_at_level(tc, 0) == 1
    assert coeff_at_level(tc, 6) == 10
    oracle = partitions_min_part(6, 1)
    assert (
        oracle[6] - oracle[5] + 3 * oracle[3] - 3 * oracle[0]
        == 11 - 7 + 9 - 3
        == 10
    )


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_partial_expansions(p):
    cutoff = 6 * p
    bracket = triplet_theta_bracket(p, cutoff)
    partial = series_from_terms(
        [(0, 1), (1, -1), (2 * p - 1, 3), (2 * p + 2, -3)], cutoff
    )
    assert bracket.agrees_with(partial, Fraction(6 * p - 3))
    # the stated error order is sharp: the next theta term enters at 6p-2
    assert bracket.coeff_at_exponent(Fraction(6 * p - 2)) != partial.coeff_at_exponent(
        Fraction(6 * p - 2)
    )
    c = central_charge_p1(p)
    tilde_bracket = phi(cutoff) * chi_tilde(p, cutoff).shift(c / 24)
    partial2 = series_from_terms(
        [(0, 1), (1, -1), (2 * p - 1, 3), (2 * p + 2, -3), (4 * p - 2, 6)], cutoff
    )
    assert tilde_bracket.agrees_with(partial2, Fraction(4 * p - 2))


def test_chi_tilde_examples():
    ct = chi_tilde(2, 12)
    assert [coeff_at_level(ct, k) for k in (0, 1, 2)] == [1, 0, 1]
    assert coeff_at_level(ct, 6) == 16


@pytest.mark.parametrize("p", [3, 4, 5])
def test_diff_by_three(p):
    cutoff = 4 * p + 6
    d = 2 * p - 1
    v = verma_character([2, d, d, d], central_charge_p1(p), cutoff)
    t = triplet_character(p, cutoff)
    assert diff_at_level(v, t, Fraction(2 * p + 2)) == 3


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_diff_by_six(p):
    cutoff = 4 * p + 6
    ct = chi_tilde(p, cutoff)
    t = triplet_character(p, cutoff)
    assert diff_at_level(ct, t, Fraction(4 * p - 2)) == 6


def test_p2_overlap_is_nine():
    v = verma_character([2, 3, 3, 3], Fraction(-2), 10)
    t = triplet_character(2, 10)
    assert diff_at_level(v, t, Fraction(6)) == 9
    assert diff_at_level(t, t, Fraction(6)) == 0


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_theta_truncation_certified(p):
    assert triplet_character(p, 25) == triplet_character(p, 25, extra_theta_terms=3)


def test_cutoff_bookkeeping_is_conservative():
    s = phi(10).inverse()
    with pytest.raises(QSeriesError):
        s.coeff_at_exponent(Fraction(11))
    with pytest.raises(QSeriesError):
        s.coeff_at_exponent(Fraction(1, 2))
    # products never claim validity beyond the shorter factor
    t = phi(5) * phi(10)
    assert t.cutoff == 5


def test_lattice_alignment():
    a = QSeries(2, Fraction(0), {0: Fraction(1)}, 8)
    b = QSeries(3, Fraction(1, 6), {0: Fraction(1)}, 9)
    s = a + b
    assert s.D == 6
    assert s.coeff_at_exponent(Fraction(0)) == 1
    assert s.coeff_at_exponent(Fraction(1, 6)) == 1
