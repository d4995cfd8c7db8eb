import dataclasses
from fractions import Fraction

import pytest

from walgebra.algebra import Mode
from walgebra.c2 import (
    CertificateError,
    ManifestMemberRule,
    MembershipClaim,
    certificate_from_json,
    certificate_to_json,
    certify_triplet_p2,
    expression,
    manifest_member,
    prefixed_manifest,
    verify_certificate,
)
from walgebra.singular import SingularTable, load_triplet_p2_spec


def T(n):
    return Mode("T", n)


def W(a, n):
    return Mode(f"W{a}", n)


@pytest.fixture(scope="module")
def spec():
    return load_triplet_p2_spec()


@pytest.fixture(scope="module")
def cert(spec):
    return certify_triplet_p2(spec=spec)


def test_manifest_member_examples(spec):
    assert manifest_member((T(-3), T(-2)), 2, spec)
    assert not manifest_member((T(-2), T(-2), T(-2)), 2, spec)
    assert manifest_member((W(1, -4), T(-2)), 2, spec)
    assert manifest_member((T(-2),), 1, spec)
    assert not manifest_member((), 2, spec)


def all_canonical_words(spec, max_weight):
    """Every canonical creation word of the triplet algebra up to a weight."""
    modes = []
    for g in spec.generators:
        for n in range(-max_weight, -g.weight + 1):
            modes.append((Mode(g.symbol, n), spec.rank(g.symbol)))
    words = []

    def rec(start_key, remaining, word):
        if word:
            words.append(tuple(word))
        for mode, rank in modes:
            key = (mode.n, rank)
            if key < start_key or -mode.n > remaining:
                continue
            rec(key, remaining + mode.n, word + [mode])

    rec((-max_weight, -1), max_weight, [])
    return words


def test_manifest_monotonicity_exhaustive(spec):
    words = all_canonical_words(spec, 8)
    assert len(words) > 100
    for word in words:
        for m in range(2, 8):
            if manifest_member(word, m, spec):
                for n in range(1, m):
                    assert manifest_member(word, n, spec)


def test_certificate_verifies(cert, spec):
    ok, reports = verify_certificate(cert, spec)
    assert ok, [r.detail for r in reports if not r.ok]
    assert all(r.ok for r in reports)


def test_certificate_targets(cert):
    labels = {cert.step(t).label for t in cert.targets}
    assert "W1(-3)^3 |0> in C2" in labels
    assert "W1(-3)^4 |0> in C2" in labels
    assert "W1(-3)^5 |0> in C2" in labels
    assert "L(-2)^6 |0> in C2" in labels
    assert "(W1(-3)^2 - W2(-3)^2) |0> in C2" in labels
    assert any(lab.startswith("W1(-3) W2(-3)") for lab in labels)


def test_cube_justification_chain(cert):
    """The cube claim rests on a singular rewrite, prefix invariance and a
    weight-bounded bracket."""
    cube = next(s for s in cert.steps if s.label == "W1(-3)^3 |0> in C2")
    seen = set()
    frontier = [cube]
    while frontier:
        step = frontier.pop()
        seen.add(type(step.rule).__name__)
        for use in step.uses:
            frontier.append(cert.step(use))
        if hasattr(step.rule, "parts"):
            for _, cid in step.rule.parts:
                frontier.append(cert.step(cid))
        if hasattr(step.rule, "base"):
            frontier.append(cert.step(step.rule.base))
    assert {"SingularRewriteRule", "PrefixInvarianceRule",
            "WeightBoundedBracketRule"} <= seen


def test_round_trip(cert, spec):
    text = certificate_to_json(cert)
    again = certificate_from_json(text)
    ok, _ = verify_certificate(again, spec)
    assert ok
    assert certificate_to_json(again) == text


def test_corrupt_any_step_fails(cert, spec):
    text = certificate_to_json(cert)
    for idx in range(len(cert.steps)):
        bad = certificate_from_json(text)
        step = bad.steps[idx]
        vec = list(step.vector)
        vec[0] = (vec[0][0] * 3, vec[0][1])
        bad.steps[idx] = dataclasses.replace(step, vector=tuple(vec))
        ok, _ = verify_certificate(bad, spec)
        assert not ok, f"corrupted step {step.id} slipped through"


def test_ordering_violation_fails(cert, spec):
    bad = certificate_from_json(certificate_to_json(cert))
    # make some later step cite a claim that does not exist yet
    target = next(s for s in bad.steps if s.uses)
    idx = bad.steps.index(target)
    bad.steps[idx] = dataclasses.replace(target, uses=(10_000,))
    ok, reports = verify_certificate(bad, spec)
    assert not ok


def test_manifest_claim_for_l2_cubed_fails(spec):
    from walgebra.c2 import Certificate

    claim = MembershipClaim(
        id=1,
        vector=expression((1, (T(-2), T(-2), T(-2)))),
        rule=ManifestMemberRule(2),
    )
    cert = Certificate(SingularTable(), [claim], [1])
    ok, reports = verify_certificate(cert, spec)
    assert not ok
    assert "not manifest" in reports[0].detail


def test_corrupted_table_still_certifies(spec):
    table = SingularTable().replace(c1=Fraction(1, 2))
    cert = certify_triplet_p2(table=table, spec=spec)
    ok, _ = verify_certificate(cert, spec)
    assert ok
    flagged = set()
    for step in cert.steps:
        flagged.update(step.depends_on)
    assert flagged == {"c1", "c2", "c3", "c4", "c5", "c6"}


def test_vanishing_key_coefficient_rejected(spec):
    with pytest.raises(CertificateError):
        certify_triplet_p2(table=SingularTable().replace(c1=0), spec=spec)


def test_certificate_is_self_contained(cert, spec):
    # replaying a certificate generated from a different table must use the
    # table stored in the certificate, not the default one
    table = SingularTable().replace(c2=Fraction(1, 2))
    cert2 = certify_triplet_p2(table=table, spec=spec)
    ok, _ = verify_certificate(cert2, spec)
    assert ok
    # swapping the body table breaks it
    cert2.table = SingularTable()
    ok, _ = verify_certificate(cert2, spec)
    assert not ok


def test_prefixed_manifest(spec):
    assert prefixed_manifest((T(-2), W(1, -5), W(1, -3)), 2, spec)
    assert not prefixed_manifest((T(-2), T(-2)), 2, spec)
    assert not prefixed_manifest((T(3), W(1, -5)), 2, spec)
