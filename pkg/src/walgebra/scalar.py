"""Exact scalar arithmetic.

Arbitrary-precision rationals (``fractions.Fraction``), multivariate
polynomials over the Gaussian rationals in named symbols, generalized
binomial coefficients, and a small linear solver.  The reserved symbol
``I`` is the formal imaginary unit and satisfies I*I = -1; it is reduced
eagerly so a polynomial never stores a power of I above 1.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

Rat = Fraction

IMAG = "I"

# monomial: tuple of (symbol, power) pairs, sorted by symbol, powers >= 1
Mono = tuple[tuple[str, int], ...]

_ONE_MONO: Mono = ()


@lru_cache(maxsize=None)
def binom_int(x: int, k: int) -> Fraction:
    """Generalized binomial prod_{j=0}^{k-1}(x-j) / k! for integer x.

    x may be negative; k must be nonnegative.
    """
    if k < 0:
        raise ValueError(f"binomial lower index must be >= 0, got {k}")
    num = 1
    for j in range(k):
        num *= x - j
    den = 1
    for j in range(2, k + 1):
        den *= j
    return Fraction(num, den)


def _mono_mul(a: Mono, b: Mono) -> tuple[int, Mono]:
    """Multiply two monomials; returns (sign, monomial) after I*I -> -1."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    counts: dict[str, int] = {}
    for name, p in a:
        counts[name] = counts.get(name, 0) + p
    for name, p in b:
        counts[name] = counts.get(name, 0) + p
    sign = 1
    ipow = counts.get(IMAG, 0)
    if ipow >= 2:
        if (ipow // 2) % 2:
            sign = -1
        ipow %= 2
        if ipow:
            counts[IMAG] = 1
        else:
            del counts[IMAG]
    return sign, tuple(sorted(counts.items()))


class Poly:
    """Sparse multivariate polynomial with Fraction coefficients.

    Immutable by convention: no method mutates ``self``.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None):
        t: dict[Mono, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c:
                    acc = t.get(mono)
                    c = c if acc is None else acc + c
                    if c:
                        t[mono] = c
                    elif mono in t:
                        del t[mono]
        self._t = t
        self._hash: int | None = None

    # --- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def const(cls, value) -> "Poly":
        v = Fraction(value)
        return cls({_ONE_MONO: v}) if v else cls()

    @classmethod
    def sym(cls, name: str) -> "Poly":
        if not name:
            raise ValueError("empty symbol name")
        return cls({((name, 1),): Fraction(1)})

    # --- basic queries ---------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_const(self) -> bool:
        return not self._t or (len(self._t) == 1 and _ONE_MONO in self._t)

    def const_value(self) -> Fraction:
        if not self._t:
            return Fraction(0)
        if not self.is_const():
            raise ValueError(f"not a constant polynomial: {self}")
        return self._t[_ONE_MONO]

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for mono in self._t:
            for name, _ in mono:
                out.add(name)
        return out

    def terms(self) -> dict[Mono, Fraction]:
        return dict(self._t)

    # --- ring operations --------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for mono, c in other._t.items():
            acc = t.get(mono)
            c = c if acc is None else acc + c
            if c:
                t[mono] = c
            elif mono in t:
                del t[mono]
        p = Poly.__new__(Poly)
        p._t = t
        p._hash = None
        return p

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = Poly.__new__(Poly)
        p._t = {m: -c for m, c in self._t.items()}
        p._hash = None
        return p

    def __sub__(self, other) -> "Poly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Poly":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Poly()
            p = Poly.__new__(Poly)
            p._t = {m: v * c for m, v in self._t.items()}
            p._hash = None
            return p
        other = _coerce(other)
        t: dict[Mono, Fraction] = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                sign, m = _mono_mul(m1, m2)
                c = c1 * c2 * sign
                acc = t.get(m)
                c = c if acc is None else acc + c
                if c:
                    t[m] = c
                elif m in t:
                    del t[m]
        p = Poly.__new__(Poly)
        p._t = t
        p._hash = None
        return p

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        c = Fraction(other)
        return self * (1 / c)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # --- structure --------------------------------------------------------

    def substitute(self, assignment: Mapping[str, "Poly | Fraction | int"]) -> "Poly":
        """Replace symbols by polynomials or rationals; exact."""
        subs = {k: _coerce(v) for k, v in assignment.items()}
        out = Poly()
        for mono, c in self._t.items():
            term = Poly.const(c)
            for name, p in mono:
                rep = subs.get(name)
                factor = rep if rep is not None else Poly.sym(name)
                term = term * factor**p
            out = out + term
        return out

    def coeff_of_symbol(self, name: str) -> tuple["Poly", "Poly"]:
        """Split as  coeff*name + rest  with ``name`` of degree exactly 1.

        Raises if ``name`` appears with power >= 2.
        """
        coeff: dict[Mono, Fraction] = {}
        rest: dict[Mono, Fraction] = {}
        for mono, c in self._t.items():
            hit = [(s, p) for s, p in mono if s == name]
            if not hit:
                rest[mono] = c
            else:
                if hit[0][1] > 1:
                    raise ValueError(f"{name} appears with power {hit[0][1]}")
                reduced = tuple((s, p) for s, p in mono if s != name)
                coeff[reduced] = c
        return Poly(coeff), Poly(rest)

    # --- rendering ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"Poly({render_poly(self)!r})"

    def __str__(self) -> str:
        return render_poly(self)


def _coerce(value) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.const(value)
    raise TypeError(f"cannot coerce {type(value)!r} to Poly")


ZERO = Poly.zero()
ONE = Poly.const(1)


# --- rendering / parsing -----------------------------------------------------


def render_rat(r: Fraction) -> str:
    return str(r)


def _render_mono(mono: Mono) -> str:
    parts = []
    for name, p in mono:
        parts.append(name if p == 1 else f"{name}^{p}")
    return "*".join(parts)


def render_poly(p: Poly) -> str:
    if not p:
        return "0"
    bits = []
    for mono in sorted(p._t):
        c = p._t[mono]
        m = _render_mono(mono)
        if not m:
            body = render_rat(abs(c))
        elif abs(c) == 1:
            body = m
        else:
            body = f"{render_rat(abs(c))}*{m}"
        sign = "-" if c < 0 else "+"
        bits.append((sign, body))
    first_sign, first = bits[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in bits[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\d+|[\^*/+-])")


def parse_poly(text: str) -> Poly:
    """Parse sums of '*'-joined factors: rationals p/q, symbols, sym^k, I."""
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"cannot parse polynomial {text!r} at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    if not tokens:
        raise ValueError("empty polynomial string")

    out = Poly()
    i = 0
    n = len(tokens)
    while i < n:
        sign = 1
        while i < n and tokens[i] in "+-":
            if tokens[i] == "-":
                sign = -sign
            i += 1
        term = Poly.const(sign)
        expect_factor = True
        while i < n and (expect_factor or tokens[i] == "*"):
            if tokens[i] == "*":
                i += 1
                expect_factor = True
                continue
            tok = tokens[i]
            if tok.isdigit():
                num = int(tok)
                i += 1
                if i < n and tokens[i] == "/":
                    den = tokens[i + 1] if i + 1 < n else ""
                    if not den.isdigit():
                        raise ValueError(f"bad rational in {text!r}")
                    term = term * Fraction(num, int(den))
                    i += 2
                else:
                    term = term * num
            elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
                power = 1
                i += 1
                if i < n and tokens[i] == "^":
                    if i + 1 >= n or not tokens[i + 1].isdigit():
                        raise ValueError(f"bad power in {text!r}")
                    power = int(tokens[i + 1])
                    i += 2
                term = term * Poly.sym(tok) ** power
            else:
                raise ValueError(f"unexpected token {tok!r} in {text!r}")
            expect_factor = False
        if expect_factor:
            raise ValueError(f"dangling operator in {text!r}")
        out = out + term
    return out


def parse_rat(text: str) -> Fraction:
    return Fraction(text.strip())


# --- linear solver -------------------------------------------------------------


class SolveError(ValueError):
    """Linear system is inconsistent or underdetermined."""

    def __init__(self, message: str, residual: Poly | None = None,
                 free: list[str] | None = None):
        super().__init__(message)
        self.residual = residual
        self.free = free or []


def _decompose(eq: Poly, unknowns: list[str]) -> tuple[dict[str, Poly], Poly]:
    """Write eq = sum coeff_u * u + rest; each monomial may hold one unknown,
    to the first power."""
    uset = set(unknowns)
    coeffs: dict[str, dict[Mono, Fraction]] = {u: {} for u in unknowns}
    rest: dict[Mono, Fraction] = {}
    for mono, c in eq.terms().items():
        present = [(s, p) for s, p in mono if s in uset]
        if not present:
            rest[mono] = c
            continue
        if len(present) > 1 or present[0][1] > 1:
            raise SolveError(f"equation not linear in unknowns: {eq}")
        name = present[0][0]
        reduced = tuple((s, p) for s, p in mono if s != name)
        coeffs[name][reduced] = c
    return {u: Poly(t) for u, t in coeffs.items() if t}, Poly(rest)


def solve_linear(equations: Iterable[Poly], unknowns: Iterable[str]) -> dict[str, Poly]:
    """Solve a linear system over the polynomial ring by elimination.

    Pivots must be nonzero rational constants (the systems this engine
    produces always have constant coefficients on their unknowns).
    Returns an assignment mapping each unknown to a Poly free of unknowns.
    """
    names = list(unknowns)
    rows = [_decompose(eq, names) for eq in equations]
    assignment: dict[str, Poly] = {}

    remaining = list(names)
    while remaining:
        pivot_idx = pivot_name = None
        for ri, (coeffs, _) in enumerate(rows):
            for u in remaining:
                c = coeffs.get(u)
                if c is not None and c.is_const() and c.const_value():
                    pivot_idx, pivot_name = ri, u
                    break
            if pivot_idx is not None:
                break
        if pivot_idx is None:
            appearing = sorted(
                {u for coeffs, _ in rows for u in coeffs if u in remaining}
            )
            if appearing:
                raise SolveError(
                    f"no constant pivot for unknowns {appearing}", free=appearing
                )
            raise SolveError(
                f"underdetermined system; free unknowns: {sorted(remaining)}",
                free=sorted(remaining),
            )
        coeffs, rest = rows.pop(pivot_idx)
        pv = coeffs.pop(pivot_name).const_value()
        # pivot_name = -(rest + sum coeffs*u)/pv
        expr_rest = rest * Fraction(-1, 1) / pv
        expr_coeffs = {u: c * Fraction(-1, 1) / pv for u, c in coeffs.items()}
        remaining.remove(pivot_name)
        # substitute into all other rows
        new_rows = []
        for rcoeffs, rrest in rows:
            c = rcoeffs.pop(pivot_name, None)
            if c is not None:
                if not c.is_const():
                    raise SolveError(f"nonconstant coefficient on {pivot_name}")
                cv = c.const_value()
                rrest = rrest + expr_rest * cv
                for u, cu in expr_coeffs.items():
                    rcoeffs[u] = rcoeffs.get(u, Poly()) + cu * cv
                rcoeffs = {u: cc for u, cc in rcoeffs.items() if cc}
            new_rows.append((rcoeffs, rrest))
        rows = new_rows
        # substitute into earlier assignments
        for u, expr in list(assignment.items()):
            c, r = expr.coeff_of_symbol(pivot_name)
            if c:
                repl = expr_rest + sum(
                    (cc * Poly.sym(v) for v, cc in expr_coeffs.items()), Poly()
                )
                assignment[u] = r + c * repl
        assignment[pivot_name] = expr_rest + sum(
            (cc * Poly.sym(v) for v, cc in expr_coeffs.items()), Poly()
        )

    for coeffs, rest in rows:
        if coeffs:
            raise SolveError(f"unresolved coefficients remain: {coeffs}")
        if rest:
            raise SolveError(f"inconsistent system, residual {rest}", residual=rest)

    for u, expr in assignment.items():
        if expr.symbols() & set(names):
            raise SolveError(
                f"underdetermined: {u} depends on free unknowns", free=names
            )
    return assignment
