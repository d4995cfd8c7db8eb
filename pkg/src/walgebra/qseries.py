"""Exact truncated q-series and the characters used for singular-vector counting.

A series is sum_n a_n q^(offset + n/D) with rational a_n and offset, integer
lattice denominator D, valid through exponent shift `cutoff` (inclusive,
measured in units of 1/D above the offset... see QSeries).  All arithmetic
is exact and cutoff bookkeeping is conservative.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .algebra import central_charge_p1


class QSeriesError(ValueError):
    pass


class QSeries:
    """Truncated formal series sum a_n q^(offset + n/D), coefficients valid
    for n <= cutoff (n counts lattice steps above the offset)."""

    __slots__ = ("D", "offset", "coeffs", "cutoff")

    def __init__(self, D: int, offset: Fraction, coeffs: dict[int, Fraction],
                 cutoff: int):
        if D < 1:
            raise QSeriesError("lattice denominator must be positive")
        self.D = D
        self.offset = Fraction(offset)
        self.coeffs = {n: Fraction(c) for n, c in coeffs.items()
                       if c and 0 <= n <= cutoff}
        self.cutoff = cutoff

    # --- constructors ----------------------------------------------------------

    @classmethod
    def one(cls, cutoff: int, D: int = 1, offset: Fraction = Fraction(0)):
        return cls(D, offset, {0: Fraction(1)}, cutoff)

    # --- lattice alignment ------------------------------------------------------

    def rescaled(self, D: int) -> "QSeries":
        if D % self.D:
            raise QSeriesError(f"cannot rescale lattice {self.D} to {D}")
        f = D // self.D
        return QSeries(
            D, self.offset, {n * f: c for n, c in self.coeffs.items()},
            self.cutoff * f,
        )

    @staticmethod
    def _aligned(a: "QSeries", b: "QSeries"):
        D = a.D * b.D // gcd(a.D, b.D)
        a, b = a.rescaled(D), b.rescaled(D)
        shift = (b.offset - a.offset) * D
        if shift.denominator != 1:
            raise QSeriesError(
                f"offsets {a.offset} and {b.offset} differ off-lattice"
            )
        s = int(shift)
        # express b relative to a's offset
        if s >= 0:
            b_coeffs = {n + s: c for n, c in b.coeffs.items()}
            b_cut = b.cutoff + s
            return a, QSeries(D, a.offset, b_coeffs, b_cut)
        a_coeffs = {n - s: c for n, c in a.coeffs.items()}
        a_cut = a.cutoff - s
        return QSeries(D, b.offset, a_coeffs, a_cut), b

    # --- arithmetic --------------------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        a, b = QSeries._aligned(self, other)
        cutoff = min(a.cutoff, b.cutoff)
        out = dict(a.coeffs)
        for n, c in b.coeffs.items():
            out[n] = out.get(n, Fraction(0)) + c
        return QSeries(a.D, a.offset, out, cutoff)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def scale(self, factor) -> "QSeries":
        f = Fraction(factor)
        return QSeries(self.D, self.offset,
                       {n: c * f for n, c in self.coeffs.items()}, self.cutoff)

    def __mul__(self, other: "QSeries") -> "QSeries":
        a, b = QSeries._aligned(self, other)
        # validity: a is exact through a.cutoff, so the product is exact
        # through min(a.cutoff + b_min, b.cutoff + a_min); use the safe bound
        cutoff = min(a.cutoff, b.cutoff)
        out: dict[int, Fraction] = {}
        for n1, c1 in a.coeffs.items():
            if n1 > cutoff:
                continue
            for n2, c2 in b.coeffs.items():
                n = n1 + n2
                if n <= cutoff:
                    out[n] = out.get(n, Fraction(0)) + c1 * c2
        return QSeries(a.D, a.offset + b.offset, out, cutoff)

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; the constant lattice term must be nonzero."""
        a0 = self.coeffs.get(0)
        if not a0:
            raise QSeriesError("series with vanishing constant term at its "
                               "offset cannot be inverted on the lattice")
        inv: dict[int, Fraction] = {0: 1 / a0}
        for n in range(1, self.cutoff + 1):
            acc = Fraction(0)
            for k, c in self.coeffs.items():
                if 1 <= k <= n:
                    acc += c * inv.get(n - k, Fraction(0))
            if acc:
                inv[n] = -acc / a0
        return QSeries(self.D, -self.offset, inv, self.cutoff)

    def shift(self, exponent: Fraction) -> "QSeries":
        """Multiply by q^exponent (exact offset shift)."""
        return QSeries(self.D, self.offset + Fraction(exponent),
                       self.coeffs, self.cutoff)

    def truncate(self, cutoff: int) -> "QSeries":
        return QSeries(self.D, self.offset,
                       {n: c for n, c in self.coeffs.items() if n <= cutoff},
                       min(self.cutoff, cutoff))

    # --- queries ------------------------------------------------------------------

    def leading_exponent(self) -> Fraction:
        if not self.coeffs:
            raise QSeriesError("series is zero through its cutoff")
        return self.offset + Fraction(min(self.coeffs), self.D)

    def coeff_at_exponent(self, exponent: Fraction) -> Fraction:
        n = (Fraction(exponent) - self.offset) * self.D
        if n.denominator != 1:
            raise QSeriesError(f"exponent {exponent} is off-lattice")
        n = int(n)
        if n < 0:
            return Fraction(0)
        if n > self.cutoff:
            raise QSeriesError(
                f"exponent {exponent} beyond validity (cutoff index {self.cutoff})"
            )
        return self.coeffs.get(n, Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = QSeries._aligned(self, other)
        cutoff = min(a.cutoff, b.cutoff)
        for n in range(cutoff + 1):
            if a.coeffs.get(n, Fraction(0)) != b.coeffs.get(n, Fraction(0)):
                return False
        return True

    def agrees_with(self, other: "QSeries", through: Fraction) -> bool:
        """Coefficient agreement at every lattice exponent <= `through`."""
        a, b = QSeries._aligned(self, other)
        n_max = (Fraction(through) - a.offset) * a.D
        n_max = int(n_max) if n_max.denominator == 1 else int(n_max)
        if n_max > min(a.cutoff, b.cutoff):
            raise QSeriesError("agreement range exceeds validity")
        for n in range(0, n_max + 1):
            if a.coeffs.get(n, Fraction(0)) != b.coeffs.get(n, Fraction(0)):
                return False
        return True

    def render_lines(self) -> list[str]:
        out = []
        for n in sorted(self.coeffs):
            e = self.offset + Fraction(n, self.D)
            out.append(f"{e}: {self.coeffs[n]}")
        return out

    def __repr__(self) -> str:
        head = ", ".join(self.render_lines()[:6])
        return f"QSeries<{head}{', ...' if len(self.coeffs) > 6 else ''}>"


# --- phi products ------------------------------------------------------------------


def phi(cutoff: int) -> QSeries:
    """prod_{n>=1} (1 - q^n), exactly through q^cutoff."""
    return phi_trunc(1, cutoff)


def phi_trunc(k: int, cutoff: int) -> QSeries:
    """prod_{n>=k} (1 - q^n), exactly through q^cutoff."""
    if k < 1:
        raise QSeriesError("phi truncation index must be >= 1")
    coeffs = {0: Fraction(1)}
    for n in range(k, cutoff + 1):
        new = dict(coeffs)
        for e, c in coeffs.items():
            if e + n <= cutoff:
                new[e + n] = new.get(e + n, Fraction(0)) - c
        coeffs = {e: c for e, c in new.items() if c}
    return QSeries(1, Fraction(0), coeffs, cutoff)


def geometric_inverse(l: int, cutoff: int) -> QSeries:
    """1 / (1 - q^l) = sum_j q^(j l)."""
    return QSeries(1, Fraction(0),
                   {j * l: Fraction(1) for j in range(0, cutoff // l + 1)},
                   cutoff)


# --- characters ----------------------------------------------------------------------


def verma_character(weights: list[int], c: Fraction, cutoff: int) -> QSeries:
    """Vacuum Verma character q^(-c/24) / (phi_2 * prod phi_{h_i}).

    `weights` lists every generator weight and must contain the conformal
    weight 2; the remaining entries contribute one phi factor each.
    """
    ws = sorted(weights)
    if 2 not in ws:
        raise QSeriesError("weights must include the conformal weight 2")
    rest = list(ws)
    rest.remove(2)
    out = phi_trunc(2, cutoff).inverse()
    for h in rest:
        if h < 1:
            raise QSeriesError(f"bad weight {h}")
        out = out * phi_trunc(h, cutoff).inverse()
    return out.shift(-Fraction(c) / 24)


def triplet_theta_bracket(p: int, cutoff: int, extra_terms: int = 0) -> QSeries:
    """sum_n (2n+1) q^(p n^2 + (p-1) n), the numerator of the triplet character
    after factoring q^(-c/24); `extra_terms` widens the theta range (the
    result must not change -- that is the truncation certificate)."""
    coeffs: dict[int, Fraction] = {}
    n = 0
    width = 0
    while True:
        hit = False
        for s in (n, -n) if n else (0,):
            e = p * s * s + (p - 1) * s
            if e <= cutoff:
                coeffs[e] = coeffs.get(e, Fraction(0)) + (2 * s + 1)
                hit = True
        if not hit:
            width += 1
            if width > extra_terms:
                break
        n += 1
    return QSeries(1, Fraction(0), {e: c for e, c in coeffs.items() if c}, cutoff)


def triplet_character(p: int, cutoff: int, extra_theta_terms: int = 0) -> QSeries:
    """Character of the weight-(2p-1) triplet algebra at c_{p,1}."""
    if p < 2:
        raise QSeriesError("p must be >= 2")
    c = central_charge_p1(p)
    bracket = triplet_theta_bracket(p, cutoff, extra_theta_terms)
    series = phi(cutoff).inverse() * bracket
    return series.shift(-c / 24)


def chi_tilde(p: int, cutoff: int) -> QSeries:
    """Character of the vacuum Verma module with the three weight-(2p-1)+3
    singular vectors removed."""
    if p < 2:
        raise QSeriesError("p must be >= 2")
    c = central_charge_p1(p)
    first = phi_trunc(2, cutoff).inverse()
    numer = QSeries(1, Fraction(0), {0: Fraction(1), 3: Fraction(-1)}, cutoff)
    phi_w_inv = phi_trunc(2 * p - 1, cutoff).inverse()
    second = (numer * phi(cutoff).inverse() * phi_w_inv * phi_w_inv)
    second = second.scale(3).shift(Fraction(2 * p - 1))
    total = first + second
    return total.shift(-c / 24)


def coeff_at_level(series: QSeries, level: Fraction) -> Fraction:
    """Coefficient at (leading vacuum exponent) + level."""
    return series.coeff_at_exponent(series.leading_exponent() + Fraction(level))


def diff_at_level(a: QSeries, b: QSeries, level: Fraction) -> Fraction:
    return coeff_at_level(a, level) - coeff_at_level(b, level)
