"""The six explicit weight-6 singular vectors of the c = -2 triplet algebra.

The coefficient table is published; the [W,W] structure constants are not.
``verify_singular_p2`` checks that the positive modes L_1 and L_2 annihilate
every table vector, either with numeric constants supplied by the algebra
spec or, in solve mode, by treating the constants as unknowns and solving
the annihilation equations for them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .algebra import AlgebraSpec, Mode, load_spec
from .engine import Engine, State
from .scalar import Poly, SolveError, render_poly, solve_linear

EPSILON = {
    (1, 2, 3): 1, (2, 3, 1): 1, (3, 1, 2): 1,
    (3, 2, 1): -1, (2, 1, 3): -1, (1, 3, 2): -1,
}


@dataclass(frozen=True)
class SingularTable:
    """Coefficients of the level-6 singular vectors
    N^ab = W^a_{-3} W^b_{-3} O - delta_ab (c1 L_{-2}^3 + c2 L_{-3}^2
         + c3 L_{-4} L_{-2} - c4 L_{-6}) O
         + I eps_abc (-c5 W^c_{-4} L_{-2} + c6 W^c_{-6}) O."""

    c1: Fraction = Fraction(8, 9)
    c2: Fraction = Fraction(19, 36)
    c3: Fraction = Fraction(14, 9)
    c4: Fraction = Fraction(16, 9)
    c5: Fraction = Fraction(2)
    c6: Fraction = Fraction(5, 4)

    def replace(self, **kw) -> "SingularTable":
        vals = {k: getattr(self, k) for k in ("c1", "c2", "c3", "c4", "c5", "c6")}
        vals.update({k: Fraction(v) for k, v in kw.items()})
        return SingularTable(**vals)


DEFAULT_TABLE = SingularTable()


def load_triplet_p2_spec() -> AlgebraSpec:
    """The packaged c = -2 triplet spec (symbolic [W,W] constants)."""
    text = resources.files("walgebra.specs").joinpath("triplet_p2.json").read_text()
    return load_spec(text)


def _w(a: int, n: int) -> Mode:
    return Mode(f"W{a}", n)


def null_vector_state(a: int, b: int, engine: Engine,
                      table: SingularTable = DEFAULT_TABLE) -> State:
    """Canonical State of the table vector N^ab."""
    t = table
    T = lambda n: Mode("T", n)
    state = engine.normal_order([_w(a, -3), _w(b, -3)])
    if a == b:
        vir = State(
            {
                (T(-2), T(-2), T(-2)): Poly.const(-t.c1),
                (T(-3), T(-3)): Poly.const(-t.c2),
                (T(-4), T(-2)): Poly.const(-t.c3),
                (T(-6),): Poly.const(t.c4),
            }
        )
        state = state + vir
    for c in (1, 2, 3):
        eps = EPSILON.get((a, b, c))
        if eps:
            iota = Poly.sym("I") * eps
            state = state + State(
                {
                    (_w(c, -4), T(-2)): iota * (-t.c5),
                    (_w(c, -6),): iota * t.c6,
                }
            )
    return state


def annihilation_states(engine: Engine, table: SingularTable = DEFAULT_TABLE
                        ) -> dict[tuple[int, int, int], State]:
    """L_m N^ab for m in {1, 2} and all nine (a, b), as full States."""
    out = {}
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            n_ab = null_vector_state(a, b, engine, table)
            for m in (1, 2):
                out[(m, a, b)] = engine.apply_mode(Mode("T", m), n_ab)
    return out


@dataclass
class SolveReport:
    consistent: bool
    assignment: dict[str, Poly]
    free: list[str]
    detail: str

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "assignment": {k: render_poly(v) for k, v in
                           sorted(self.assignment.items())},
            "free": list(self.free),
            "detail": self.detail,
        }


def solve_structure_constants(spec: AlgebraSpec | None = None,
                              table: SingularTable = DEFAULT_TABLE) -> SolveReport:
    """Treat the symbolic [W,W] constants as unknowns and solve the
    annihilation equations of the table vectors."""
    spec = spec or load_triplet_p2_spec()
    engine = Engine(spec)
    unknowns = sorted(
        {s for v in spec.constants.values() for s in v.symbols()} - {"I"}
    )
    equations = []
    for state in annihilation_states(engine, table).values():
        equations.extend(state.terms().values())
    if not unknowns:
        raise SolveError("spec has no symbolic structure constants to solve for")
    try:
        assignment = solve_linear(equations, unknowns)
    except SolveError as exc:
        return SolveReport(False, {}, exc.free, str(exc))
    nonzero = any(not v.is_zero() for v in assignment.values())
    detail = "annihilation equations admit a unique solution"
    if not nonzero:
        detail = "only the zero solution exists"
    return SolveReport(nonzero, assignment, [], detail)


def substitute_constants(spec: AlgebraSpec, assignment: dict[str, Poly]
                         ) -> AlgebraSpec:
    """New spec with structure constants (and pairings) substituted."""
    return AlgebraSpec(
        central_charge=spec.central_charge,
        generators=spec.generators,
        d={k: v.substitute(assignment) for k, v in spec.d.items()},
        constants={k: v.substitute(assignment) for k, v in spec.constants.items()},
        composites=dict(spec.composites),
        c_lower={k: v.substitute(assignment) for k, v in spec.c_lower.items()},
    )


def verify_singular_p2(spec: AlgebraSpec | None = None, *,
                       solve_mode: bool = False,
                       table: SingularTable = DEFAULT_TABLE):
    """Check L_1 and L_2 annihilate all nine N^ab exactly.

    Without solve_mode the spec constants must be numeric; the result is a
    (bool, report-dict).  With solve_mode the constants are solved for and the
    report carries the assignment.
    """
    spec = spec or load_triplet_p2_spec()
    if solve_mode:
        report = solve_structure_constants(spec, table)
        return report.consistent, report.to_dict()
    engine = Engine(spec)
    symbolic = sorted(
        {s for v in spec.constants.values() for s in v.symbols()} - {"I"}
    )
    if symbolic:
        raise SolveError(
            f"spec carries symbolic constants {symbolic}; "
            "supply numeric values or use solve mode"
        )
    failures = {}
    for (m, a, b), state in annihilation_states(engine, table).items():
        if state:
            failures[f"L{m} N{a}{b}"] = state.render()
    return not failures, {"failures": failures}
