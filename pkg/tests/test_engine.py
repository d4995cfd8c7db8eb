import random
from fractions import Fraction

import pytest

from walgebra.algebra import (
    Derivative,
    FieldRef,
    Identity,
    Mode,
    Nprod,
    bracket,
    make_derivation_spec,
    make_virasoro_spec,
    nprod_tower,
)
from walgebra.engine import (
    Engine,
    State,
    project_min_length,
    project_with_audit,
    word_weight,
)
from walgebra.scalar import Poly, binom_int


from identity_helpers import basis_states, math_apply, omega_mode_field, virasoro_words


def T(n):
    return Mode("T", n)


def W(n):
    return Mode("W", n)


@pytest.fixture(scope="module")
def vir():
    return Engine(make_virasoro_spec("c"))


@pytest.fixture(scope="module")
def vir2():
    return Engine(make_virasoro_spec(Fraction(-2)))


@pytest.fixture(scope="module")
def der2():
    return Engine(make_derivation_spec(2))


# --- examples ---------------------------------------------------------------


def test_apply_mode_examples(vir2):
    assert vir2.normal_order([T(1), T(-2)]).is_zero()
    assert vir2.normal_order([T(2), T(-2)]) == State({(): Poly.const(-1)})
    w2 = Engine(make_derivation_spec(2))
    assert w2.normal_order([W(-2)]).is_zero()


def test_normal_order_examples(vir2):
    s = vir2.normal_order([T(-2)] * 3)
    assert s == State({(T(-2), T(-2), T(-2)): Poly.const(1)})
    s = vir2.normal_order([T(-2), T(-4)])
    assert s.coeff((T(-4), T(-2))) == Poly.const(1)
    assert s.coeff((T(-6),)) == Poly.const(2)
    assert vir2.normal_order([T(2), T(-3)]).is_zero()


def test_field_mode_examples(der2):
    vac = State.vacuum()
    # a generator reference degenerates to apply_mode
    s = der2.field_mode_apply(FieldRef("T"), -4, vac)
    assert s == der2.normal_order([T(-4)])
    # derivative rule
    s = der2.field_mode_apply(Derivative(FieldRef("T"), 1), -3, vac)
    assert s == State({(T(-3),): Poly.const(1)})
    # identity field
    s = der2.field_mode_apply(Identity(), 0, der2.normal_order([T(-2)]))
    assert s == State({(T(-2),): Poly.const(1)})
    assert der2.field_mode_apply(Identity(), -1, vac).is_zero()


@pytest.mark.parametrize("p", [2, 3])
def test_tower_bottom_mode(p):
    d = 2 * p - 1
    eng = Engine(make_derivation_spec(p))
    tower = nprod_tower(d - 1)
    s = eng.field_mode_apply(tower, -(2 * d - 2), State.vacuum())
    s = project_min_length(s, d - 1)
    assert s == State({tuple([T(-2)] * (d - 1)): Poly.const(1)})


def test_project_examples():
    # delta = 5 projection keeps only words of length >= 4
    beta, delta_sym = Poly.sym("beta"), Poly.sym("delta")
    s = State(
        {
            (T(-4), T(-2), T(-2), T(-2)): beta,
            (T(-4), T(-4), T(-2)): delta_sym,
        }
    )
    kept = project_min_length(s, 4)
    assert kept == State({(T(-4), T(-2), T(-2), T(-2)): beta})
    assert project_min_length(s, 0) == s
    assert project_min_length(State.vacuum(), 1).is_zero()
    kept, dropped = project_with_audit(s, 4)
    assert dropped == State({(T(-4), T(-4), T(-2)): delta_sym})


# --- properties -----------------------------------------------------------------


def test_weight_grading(vir):
    rng = random.Random(7)
    words = virasoro_words(8)
    for _ in range(60):
        word = rng.choice(words)
        n = rng.randint(-4, 4)
        out = vir.apply_mode(T(n), State.from_word(word))
        for w in out.words():
            assert word_weight(w) == word_weight(word) - n


def test_confluence_weight_10(vir):
    # two rewriting schedules of the same composition agree
    for word in virasoro_words(10):
        for perm in {word, tuple(reversed(word))}:
            base = vir.normal_order(perm)
            for i in range(len(perm) - 1):
                a, b = perm[i], perm[i + 1]
                swapped = perm[:i] + (b, a) + perm[i + 2:]
                alt = vir.normal_order(swapped)
                ops = bracket(a, b, vir.spec)
                for coeff, mode in ops.terms:
                    alt = alt + vir.normal_order(
                        perm[:i] + (mode,) + perm[i + 2:]
                    ).scale(coeff)
                if ops.central:
                    alt = alt + vir.normal_order(perm[:i] + perm[i + 2:]).scale(
                        ops.central
                    )
                assert alt == base, (perm, i)


# --- the two mode identities (math convention) -------------------------------------


def test_omega_mode_fields(vir):
    # the field of omega_m omega reproduces that state at its bottom mode
    for m in range(-3, 4):
        expr = omega_mode_field(m)
        state = math_apply(vir, FieldRef("T"), m, vir.normal_order([T(-2)]))
        if expr is None:
            assert state.is_zero(), m
            continue
        # weight of the product field
        from walgebra.algebra import expr_weight

        h = expr_weight(expr, vir.spec)
        got = vir.field_mode_apply(expr, -h, State.vacuum())
        assert got == state, (m, got.render(), state.render())


def test_commutation_identity(vir):
    # v_m u_{-n} w = u_{-n} v_m w + sum_i C(m,i) (v_i u)_{m-n-i} w   (math)
    for w in basis_states(8):
        state = State.from_word(w)
        for m in range(-3, 4):
            for n in range(1, 5):
                lhs = math_apply(
                    vir, FieldRef("T"), m, math_apply(vir, FieldRef("T"), -n, state)
                )
                rhs = math_apply(
                    vir, FieldRef("T"), -n, math_apply(vir, FieldRef("T"), m, state)
                )
                for i in range(0, 4):
                    coeff = binom_int(m, i)
                    if not coeff:
                        continue
                    expr = omega_mode_field(i)
                    if expr is None:
                        continue
                    rhs = rhs + math_apply(vir, expr, m - n - i, state).scale(coeff)
                assert lhs == rhs, (w, m, n)


def test_iteration_identity(vir):
    # (u_m v)_n = sum_i (-1)^i C(m,i) [u_{m-i} v_{n+i} - (-1)^m v_{m+n-i} u_i]
    for w in basis_states(6):
        state = State.from_word(w)
        weight = word_weight(w)
        for m in range(-3, 4):
            expr = omega_mode_field(m)
            for n in range(-3, 4):
                lhs = (
                    math_apply(vir, expr, n, state)
                    if expr is not None
                    else State()
                )
                rhs = State()
                sign_m = -1 if m % 2 else 1
                for i in range(0, weight + abs(n) + 8):
                    coeff = binom_int(m, i) * (-1) ** i
                    if not coeff:
                        continue
                    first = math_apply(
                        vir, FieldRef("T"), m - i,
                        math_apply(vir, FieldRef("T"), n + i, state),
                    )
                    second = math_apply(
                        vir, FieldRef("T"), m + n - i,
                        math_apply(vir, FieldRef("T"), i, state),
                    )
                    rhs = rhs + first.scale(coeff) - second.scale(coeff * sign_m)
                assert lhs == rhs, (w, m, n)


# --- quasi-primary products -----------------------------------------------------------


def test_qp_nop_without_channels_is_plain_product():
    from walgebra.algebra import AlgebraSpec, GeneratorDecl

    spec = AlgebraSpec(
        central_charge=Fraction(1),
        generators=(GeneratorDecl("T", 2), GeneratorDecl("U", 5)),
        d={("T", "T"): Poly.const(Fraction(1, 2))},
        constants={
            ("T", "T", "T"): Poly.const(2),
            ("T", "U", "U"): Poly.const(5),
            ("U", "T", "U"): Poly.const(5),
        },
    )
    eng = Engine(spec)
    expr = eng.qp_nop("U", "U", 0)
    assert expr.parts == (
        (Poly.const(1), Nprod(5, FieldRef("U"), FieldRef("U"))),
    )


@pytest.mark.parametrize("p", [2, 3])
def test_qp_nop_correction_mode_at_lowered_level(p):
    # the correction channels of the W-product, one level below the bottom,
    # carry -(3/2) C (2d-1)/(4d-3) times the tower monomial combination
    d = 2 * p - 1
    eng = Engine(make_derivation_spec(p))
    corr = eng.qp_nop_corrections("W", "W", 0)
    state = project_min_length(
        eng.field_mode_apply(corr, -2 * d - 1, State.vacuum()), d - 1
    )
    C = Poly.sym("C")
    factor = C * Fraction(-3 * (2 * d - 1), 2 * (4 * d - 3))
    m1 = tuple([T(-5)] + [T(-2)] * (d - 2))
    m2 = tuple([T(-4), T(-3)] + [T(-2)] * (d - 3))
    assert state.coeff(m1) == factor * (d - 1)
    assert state.coeff(m2) == factor * ((d - 1) * (d - 2))
    if d >= 5:
        m3 = tuple([T(-3)] * 3 + [T(-2)] * (d - 4))
        assert state.coeff(m3) == factor * binom_int(d - 1, 3)


# --- prefix soundness ----------------------------------------------------------------


def test_prefix_invariance_soundness(der2):
    from walgebra.c2 import manifest_member, prefixed_manifest

    spec = der2.spec
    manifest = [w for w in virasoro_words(8) if manifest_member(w, 2, spec)]
    prefixes = [T(-1), T(-2), T(-3), W(-3), W(-4)]
    for w in manifest:
        for mode in prefixes:
            out = der2.apply_mode(mode, State.from_word(w))
            for word in out.words():
                assert prefixed_manifest(word, 2, spec), (mode, w, word)
