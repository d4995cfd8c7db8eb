"""Exact symbolic engine for W-algebra mode computations, q-series characters,
C2 membership certificates and the coefficient derivation pipeline."""

from .scalar import Poly, Rat, SolveError, binom_int, parse_poly, render_poly, solve_linear
from .algebra import (
    AlgebraSpec,
    CompositeDecl,
    Derivative,
    FieldRef,
    GeneratorDecl,
    Identity,
    LinComb,
    Mode,
    Nprod,
    OperatorSum,
    QPNop,
    SpecError,
    bracket,
    central_charge_p1,
    channel_poly,
    convert_index,
    load_spec,
    make_derivation_spec,
    make_virasoro_spec,
    p_poly,
)
from .engine import (
    Engine,
    State,
    apply_mode,
    field_mode_apply,
    normal_order,
    project_min_length,
    project_with_audit,
    qp_nop,
    word_weight,
)

__all__ = [
    "AlgebraSpec",
    "CompositeDecl",
    "Derivative",
    "Engine",
    "FieldRef",
    "GeneratorDecl",
    "Identity",
    "LinComb",
    "Mode",
    "Nprod",
    "OperatorSum",
    "Poly",
    "QPNop",
    "Rat",
    "SolveError",
    "SpecError",
    "State",
    "apply_mode",
    "binom_int",
    "bracket",
    "central_charge_p1",
    "channel_poly",
    "convert_index",
    "field_mode_apply",
    "load_spec",
    "make_derivation_spec",
    "make_virasoro_spec",
    "normal_order",
    "p_poly",
    "parse_poly",
    "project_min_length",
    "project_with_audit",
    "qp_nop",
    "render_poly",
    "solve_linear",
    "word_weight",
]

__version__ = "0.1.0"
