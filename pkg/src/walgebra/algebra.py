"""W-algebra declarations, modes, field expressions and commutator data.

Index conventions
-----------------
All mode indices are physics-convention: a field of weight h expands as
phi(x) = sum_n phi_n x^(-n-h).  The mathematics convention is reachable
through :func:`convert_index` with n_math = n_phys + h - 1.

A mode phi_n annihilates the vacuum exactly when n >= -h + 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

from .scalar import Poly, binom_int, parse_poly, parse_rat, render_poly


class SpecError(ValueError):
    """Invalid algebra specification document."""


class Mode(NamedTuple):
    """A single mode of a declared field, physics index."""

    field: str
    n: int

    def render(self) -> str:
        return f"{self.field}({self.n})"


def convert_index(n: int, weight: int, direction: str) -> int:
    """Convert between physics and mathematics mode indices.

    direction 'phys_to_math' maps n to n + weight - 1, 'math_to_phys'
    inverts it.
    """
    if direction == "phys_to_math":
        return n + weight - 1
    if direction == "math_to_phys":
        return n - weight + 1
    raise ValueError(f"unknown direction {direction!r}")


# --- field expressions -------------------------------------------------------


@dataclass(frozen=True)
class FieldRef:
    """A declared field: generator or registered composite."""

    symbol: str


@dataclass(frozen=True)
class Identity:
    """The identity field (weight 0, only mode 0 acts, as the identity)."""


@dataclass(frozen=True)
class Derivative:
    base: "FieldExpr"
    order: int


@dataclass(frozen=True)
class Nprod:
    """Ordered bilinear normal product N^(m)(left, right).

    Modes: N^(m)(phi,psi)_n = sum_{k<m} phi_{n+k} psi_{-k}
                            + sum_{k>=m} psi_{-k} phi_{n+k}.
    """

    m: int
    left: "FieldExpr"
    right: "FieldExpr"


@dataclass(frozen=True)
class QPNop:
    """Quasi-primary normal-ordered product of declared fields j, i with
    n derivatives on the second slot; expanded by the engine."""

    j: str
    i: str
    n: int


@dataclass(frozen=True)
class LinComb:
    parts: tuple[tuple[Poly, "FieldExpr"], ...]


FieldExpr = Union[FieldRef, Identity, Derivative, Nprod, QPNop, LinComb]


# --- algebra specification ---------------------------------------------------


@dataclass(frozen=True)
class GeneratorDecl:
    symbol: str
    weight: int


@dataclass(frozen=True)
class CompositeDecl:
    symbol: str
    weight: int
    definition: FieldExpr


@dataclass
class AlgebraSpec:
    """Declared W-algebra: generators, pairings d, structure constants C_ij^k,
    and composite fields usable as commutator channels."""

    central_charge: Fraction
    generators: tuple[GeneratorDecl, ...]
    d: dict[tuple[str, str], Poly]
    constants: dict[tuple[str, str, str], Poly]
    composites: dict[str, CompositeDecl] = field(default_factory=dict)
    c_lower: dict[tuple[str, str, str], Poly] = field(default_factory=dict)

    def __post_init__(self):
        self._rank = {g.symbol: i for i, g in enumerate(self.generators)}
        self._weights = {g.symbol: g.weight for g in self.generators}
        for c in self.composites.values():
            self._weights[c.symbol] = c.weight
        self._channels: dict[tuple[str, str], list[tuple[str, Poly]]] = {}
        for (i, j, k), value in self.constants.items():
            self._channels.setdefault((i, j), []).append((k, value))
        for chans in self._channels.values():
            chans.sort(key=lambda kv: kv[0])
        self.validate()

    # --- lookups ---

    def is_generator(self, symbol: str) -> bool:
        return symbol in self._rank

    def rank(self, symbol: str) -> int:
        return self._rank[symbol]

    def weight_of(self, symbol: str) -> int:
        try:
            return self._weights[symbol]
        except KeyError:
            raise SpecError(f"undeclared field {symbol!r}") from None

    def pairing(self, i: str, j: str) -> Poly:
        return self.d.get((i, j) if i <= j else (j, i), Poly.zero())

    def channels(self, i: str, j: str) -> list[tuple[str, Poly]]:
        return self._channels.get((i, j), [])

    def composite_expr(self, symbol: str) -> FieldExpr:
        return self.composites[symbol].definition

    # --- validation ---

    def validate(self) -> None:
        seen = set()
        for g in self.generators:
            if g.weight <= 0:
                raise SpecError(f"generator {g.symbol!r} has weight {g.weight} <= 0")
            if g.symbol in seen:
                raise SpecError(f"duplicate generator {g.symbol!r}")
            seen.add(g.symbol)
        for c in self.composites.values():
            if c.symbol in seen:
                raise SpecError(f"composite {c.symbol!r} shadows another field")
            if c.weight <= 0:
                raise SpecError(f"composite {c.symbol!r} has weight {c.weight} <= 0")
        for (i, j) in self.d:
            if j < i:
                raise SpecError(f"pairing key ({i},{j}) not sorted")
            wi, wj = self.weight_of(i), self.weight_of(j)
            if wi != wj and self.d[(i, j)]:
                raise SpecError(f"nonzero pairing between weights {wi} and {wj}")
        for (i, j, k) in self.constants:
            h = self.weight_of(i) + self.weight_of(j) - self.weight_of(k)
            if h < 1:
                raise SpecError(
                    f"structure constant ({i},{j},{k}) has h(ijk)={h} < 1"
                )
        # every generator must come with its conformal channels, and a
        # generator is primary: C_{T,phi}^phi = C_{phi,T}^phi = weight(phi)
        t = self.generators[0].symbol
        if self.weight_of(t) != 2:
            raise SpecError("first generator must be the weight-2 conformal field")
        for g in self.generators:
            want = Poly.const(g.weight)
            for key in ((t, g.symbol, g.symbol), (g.symbol, t, g.symbol)):
                got = self.constants.get(key)
                if got is None:
                    raise SpecError(f"missing conformal channel {key}")
                if got != want:
                    raise SpecError(
                        f"channel {key} must equal the field weight {g.weight}, "
                        f"got {got}"
                    )
        # cross-check optional lowered constants: sum_l C_ij^l d_lk = C_ijk
        for (i, j, k), want in self.c_lower.items():
            acc = Poly.zero()
            for (l, value) in self.channels(i, j):
                acc = acc + value * self.pairing(l, k)
            if acc != want:
                raise SpecError(
                    f"C_ijk consistency failed for ({i},{j},{k}): "
                    f"sum C_ij^l d_lk = {acc}, declared {want}"
                )


# --- commutator polynomials --------------------------------------------------


@lru_cache(maxsize=None)
def _a_coeffs(hi: int, hj: int, hk: int) -> tuple[Fraction, ...]:
    h = hi + hj - hk
    out = []
    for t in range(h):
        out.append(binom_int(hi + hk - hj + t - 1, t) / binom_int(2 * hk + t - 1, t))
    return tuple(out)


def p_poly(hi: int, hj: int, hk: int, m: int, n: int) -> Fraction:
    """Channel polynomial in the anchor normalization
    sum_{r+s=h(ijk)-1} a^r C(m+n-h_k, r) C(h_i-n-1, s)."""
    h = hi + hj - hk
    if h < 1:
        raise ValueError(f"h(ijk) = {h} < 1")
    a = _a_coeffs(hi, hj, hk)
    total = Fraction(0)
    for r in range(h):
        s = h - 1 - r
        total += a[r] * binom_int(m + n - hk, r) * binom_int(hi - n - 1, s)
    return total


@lru_cache(maxsize=None)
def channel_poly(hi: int, hj: int, hk: int, m: int, n: int) -> Fraction:
    """Channel polynomial used by the mode bracket,
    sum_{t+s=h(ijk)-1} a^t C(-(m+n)-h_k, t) C(m+h_i-1, s).

    Agrees with :func:`p_poly` whenever h_i = h_j and reproduces
    [L_m, phi_n] = ((h-1)m - n) phi_{m+n} for primary phi.
    """
    h = hi + hj - hk
    if h < 1:
        raise ValueError(f"h(ijk) = {h} < 1")
    a = _a_coeffs(hi, hj, hk)
    total = Fraction(0)
    for t in range(h):
        s = h - 1 - t
        total += a[t] * binom_int(-(m + n) - hk, t) * binom_int(m + hi - 1, s)
    return total


@dataclass(frozen=True)
class OperatorSum:
    """Result of a mode bracket: channel modes with coefficients plus a
    central scalar."""

    terms: tuple[tuple[Poly, Mode], ...]
    central: Poly

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        acc: dict[Mode, Poly] = {}
        for coeff, mode in self.terms + other.terms:
            acc[mode] = acc.get(mode, Poly.zero()) + coeff
        terms = tuple(
            (c, m) for m, c in sorted(acc.items(), key=lambda kv: kv[0]) if c
        )
        return OperatorSum(terms, self.central + other.central)

    def is_zero(self) -> bool:
        return not self.terms and self.central.is_zero()

    def render(self) -> str:
        bits = [f"({render_poly(c)})*{m.render()}" for c, m in self.terms]
        if self.central:
            bits.append(f"({render_poly(self.central)})*1")
        return " + ".join(bits) if bits else "0"


def bracket(a: Mode, b: Mode, spec: AlgebraSpec) -> OperatorSum:
    """Mode commutator [a, b] from the declared channels:
    d_ij delta_{m+n,0} C(h_i+m-1, 2h_i-1) + sum_k C_ij^k p(m,n) (phi_k)_{m+n}."""
    hi = spec.weight_of(a.field)
    hj = spec.weight_of(b.field)
    m, n = a.n, b.n
    terms = []
    for k, value in spec.channels(a.field, b.field):
        hk = spec.weight_of(k)
        pv = channel_poly(hi, hj, hk, m, n)
        if pv and value:
            terms.append((value * pv, Mode(k, m + n)))
    central = Poly.zero()
    if m + n == 0:
        dij = spec.pairing(a.field, b.field)
        if dij:
            central = dij * binom_int(hi + m - 1, 2 * hi - 1)
    return OperatorSum(tuple(terms), central)


# --- expression weights ------------------------------------------------------


def expr_weight(expr: FieldExpr, spec: AlgebraSpec) -> int:
    if isinstance(expr, FieldRef):
        return spec.weight_of(expr.symbol)
    if isinstance(expr, Identity):
        return 0
    if isinstance(expr, Derivative):
        return expr_weight(expr.base, spec) + expr.order
    if isinstance(expr, Nprod):
        return expr_weight(expr.left, spec) + expr_weight(expr.right, spec)
    if isinstance(expr, QPNop):
        return spec.weight_of(expr.j) + spec.weight_of(expr.i) + expr.n
    if isinstance(expr, LinComb):
        weights = {expr_weight(part, spec) for _, part in expr.parts}
        if len(weights) != 1:
            raise SpecError(f"inhomogeneous linear combination: weights {weights}")
        return weights.pop()
    raise TypeError(f"not a field expression: {expr!r}")


# --- spec documents ----------------------------------------------------------


def _parse_field_expr(doc) -> FieldExpr:
    if not isinstance(doc, dict) or len(doc) != 1:
        raise SpecError(f"bad field expression {doc!r}")
    (kind, body), = doc.items()
    if kind == "gen":
        return FieldRef(body)
    if kind == "deriv":
        return Derivative(_parse_field_expr(body["base"]), int(body["order"]))
    if kind == "nprod":
        return Nprod(
            int(body["m"]),
            _parse_field_expr(body["left"]),
            _parse_field_expr(body["right"]),
        )
    if kind == "qpnop":
        return QPNop(body["j"], body["i"], int(body.get("n", 0)))
    if kind == "lincomb":
        return LinComb(
            tuple((parse_poly(c), _parse_field_expr(e)) for c, e in body)
        )
    raise SpecError(f"unknown field expression kind {kind!r}")


def load_spec(document: str | dict) -> AlgebraSpec:
    """Load and validate an algebra-spec document (JSON text or dict)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SpecError(f"not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise SpecError("spec document must be a JSON object")
    try:
        c = parse_rat(document["central_charge"])
        gens = tuple(
            GeneratorDecl(g["symbol"], int(g["weight"]))
            for g in document["generators"]
        )
        d = {}
        for entry in document.get("d", []):
            i, j = entry["i"], entry["j"]
            key = (i, j) if i <= j else (j, i)
            d[key] = parse_poly(entry["value"])
        constants = {}
        for entry in document.get("structure_constants", []):
            key = (entry["i"], entry["j"], entry["k"])
            if key in constants:
                raise SpecError(f"duplicate structure constant {key}")
            constants[key] = parse_poly(entry["value"])
        composites = {}
        for entry in document.get("composite_fields", []):
            sym = entry["symbol"]
            composites[sym] = CompositeDecl(
                sym, int(entry["weight"]), _parse_field_expr(entry["definition"])
            )
        c_lower = {}
        for entry in document.get("c_lower", []):
            c_lower[(entry["i"], entry["j"], entry["k"])] = parse_poly(entry["value"])
    except (KeyError, TypeError) as exc:
        raise SpecError(f"malformed spec document: {exc!r}") from exc
    spec = AlgebraSpec(c, gens, d, constants, composites, c_lower)
    # composite weights must match their definitions
    for comp in spec.composites.values():
        got = expr_weight(comp.definition, spec)
        if got != comp.weight:
            raise SpecError(
                f"composite {comp.symbol!r} declared weight {comp.weight}, "
                f"definition has weight {got}"
            )
    return spec


# --- builders ----------------------------------------------------------------


def make_virasoro_spec(c: Fraction | str | Poly = "c") -> AlgebraSpec:
    """Virasoro-only algebra: one weight-2 generator T with C_TT^T = 2 and
    d_TT = c/2.  A non-numeric string keeps the central charge symbolic
    (it then enters computations only through d_TT)."""
    if isinstance(c, str):
        try:
            c = Fraction(c)
        except ValueError:
            pass
    if isinstance(c, str):
        cc = Fraction(0)
        d = {("T", "T"): Poly.sym(c) / 2}
    else:
        cc = Fraction(c) if not isinstance(c, Poly) else c.const_value()
        d = {("T", "T"): Poly.const(cc) / 2}
    return AlgebraSpec(
        central_charge=cc,
        generators=(GeneratorDecl("T", 2),),
        d=d,
        constants={("T", "T", "T"): Poly.const(2)},
    )


def central_charge_p1(p: int) -> Fraction:
    """c_{p,1} = 1 - 6 (p-1)^2 / p."""
    return Fraction(1) - Fraction(6 * (p - 1) ** 2, p)


def nprod_tower(height: int) -> FieldExpr:
    """Nested bilinear product of `height` copies of T.

    Equals the quasi-primary power product on every word of length >= height;
    the dropped correction channels only produce strictly shorter words.
    """
    if height < 1:
        raise ValueError("tower height must be >= 1")
    expr: FieldExpr = FieldRef("T")
    weight = 2
    for _ in range(height - 1):
        expr = Nprod(weight, FieldRef("T"), expr)
        weight += 2
    return expr


def make_derivation_spec(p: int) -> AlgebraSpec:
    """Single-W algebra used by the general-coefficient derivation.

    Generators T (weight 2) and W (weight 2p-1); the [W,W] bracket declares
    the T channel and the weight-(2*Delta-2) tower channel NT with symbolic
    constants CWWT and C.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    delta = 2 * p - 1
    c = central_charge_p1(p)
    tower = nprod_tower(delta - 1)
    return AlgebraSpec(
        central_charge=c,
        generators=(GeneratorDecl("T", 2), GeneratorDecl("W", delta)),
        d={("T", "T"): Poly.const(c) / 2, ("W", "W"): Poly.sym("dWW")},
        constants={
            ("T", "T", "T"): Poly.const(2),
            ("T", "W", "W"): Poly.const(delta),
            ("W", "T", "W"): Poly.const(delta),
            ("W", "W", "T"): Poly.sym("CWWT"),
            ("W", "W", "NT"): Poly.sym("C"),
        },
        composites={"NT": CompositeDecl("NT", 2 * delta - 2, tower)},
    )
