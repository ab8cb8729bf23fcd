import itertools
import random

import pytest
from hypothesis import assume, given, strategies as st

from semiring_lab import recheck
from semiring_lab.core import builtin
from semiring_lab.experiments import build_A, sigma, witness_failure
from semiring_lab.terms import (COUNTEREXAMPLE, HOLDS, INCONCLUSIVE, MINIMAL, NO_COUNTEREXAMPLE,
                                TOO_LARGE, VIOLATING, Identity, Term, TermSyntaxError,
                                UnassignedVariable, Word, check_nilpotent, eval_term,
                                format_identity, format_term, is_isoterm_bounded, is_regular,
                                nilpotent_identity, parse_identity, parse_term, parse_word,
                                preceq, random_identity, random_identity_text, sample_satisfies,
                                satisfies)

from conftest import SMALL_BUILTINS, terms_st, words_st


def _term(words):
    return Term([Word(w) for w in words])


def test_parse_canonicalises():
    t = parse_term("y*x + x*y + y*x")
    assert format_term(t) == "x*y + y*x"
    assert parse_term("x * y") == parse_term("x*y")
    ident = parse_identity("x*y = y*x")
    assert ident.variables == ["x", "y"]


def test_variables_use_natural_order():
    ident = parse_identity("x10*x2 = x1")
    assert ident.variables == ["x1", "x2", "x10"]


@pytest.mark.parametrize("bad", ["", "x +", "x * * y", "x = y = z", "+x", "x*(y)", "x y"])
def test_parse_errors(bad):
    with pytest.raises(TermSyntaxError):
        parse_identity(bad) if "=" in bad else parse_term(bad)


@given(terms_st)
def test_format_parse_round_trip(words):
    t = _term(words)
    text = format_term(t)
    assert parse_term(text) == t
    assert format_term(parse_term(text)) == text


@given(terms_st, terms_st)
def test_identity_round_trip(a, b):
    ident = Identity(_term(a), _term(b))
    again = parse_identity(format_identity(ident))
    assert again.lhs == ident.lhs and again.rhs == ident.rhs


def test_eval_examples():
    S53 = builtin("S_53")
    assert S53.elements[eval_term(S53, parse_term("x*y"), {"x": "a", "y": "1"})] == "a"
    B0 = builtin("B_0")
    assert B0.elements[eval_term(B0, parse_term("x*y + y*x"), {"x": "e11", "y": "e12"})] == "0"
    with pytest.raises(UnassignedVariable):
        eval_term(S53, parse_term("x*y"), {"x": "a"})


@given(st.sampled_from(SMALL_BUILTINS), terms_st, st.data())
def test_eval_matches_naive_evaluator(name, words, data):
    S = builtin(name)
    t = _term(words)
    env = {v: data.draw(st.sampled_from(S.elements)) for v in sorted(t.content)}
    text = " + ".join("*".join(w) for w in words)  # raw, with repeats and original order
    assert S.elements[eval_term(S, t, env)] == recheck.naive_eval(S, text, env)


def test_satisfies_examples():
    assert satisfies(builtin("M_2"), parse_identity("x*y = y*x")).status == HOLDS
    assert satisfies(builtin("S_53"), parse_identity("x*y = y*x")).status == HOLDS
    res = satisfies(builtin("B_0"), parse_identity("x*y = y*x"))
    assert res.status == COUNTEREXAMPLE
    assert res.named_assignment(builtin("B_0")) == {"x": "e11", "y": "e12"}


def test_satisfies_budget_is_distinct_outcome():
    ident = parse_identity("x1*x2*x3*x4*x5*x6 = x6*x5*x4*x3*x2*x1")
    assert satisfies(builtin("B_2^1"), ident, budget=1000).status == TOO_LARGE


def test_sample_satisfies_is_deterministic():
    ident = parse_identity("x*y = y*x")
    a = sample_satisfies(builtin("B_0"), ident, 1000, 7)
    b = sample_satisfies(builtin("B_0"), ident, 1000, 7)
    assert a.status == COUNTEREXAMPLE and a.assignment == b.assignment
    ok = sample_satisfies(builtin("S_53"), ident, 200, 3)
    assert ok.status == NO_COUNTEREXAMPLE and ok.holds


def test_sample_satisfies_on_separation_algebra():
    inst = build_A(3, 2)
    sig = sigma(3, 2)
    rep = witness_failure(inst)
    seeded = [rep.certificates["assignment"]]
    res = sample_satisfies(inst.algebra, sig.identity, 10, 0, seeded_assignments=seeded)
    assert res.status == COUNTEREXAMPLE and res.checked == 1


def test_preceq_examples():
    B0, M2 = builtin("B_0"), builtin("M_2")
    assert preceq(B0, parse_term("x*y"), parse_term("x")).status == COUNTEREXAMPLE
    # c(x) lies inside c(x*y), so x <= x*y does hold in M_2; the converse fails
    assert preceq(M2, parse_term("x"), parse_term("x*y")).status == HOLDS
    assert preceq(M2, parse_term("x*y"), parse_term("x")).status == COUNTEREXAMPLE


@given(st.sampled_from(("S_53", "B_0", "S_7")), words_st, words_st, words_st)
def test_preceq_is_transitive(name, u, v, w):
    S = builtin(name)
    U, V, W = (_term([x]) for x in (u, v, w))
    if preceq(S, U, V).holds and preceq(S, V, W).holds:
        assert preceq(S, U, W).holds


@given(terms_st, terms_st)
def test_regular_iff_holds_in_m2(a, b):
    ident = Identity(_term(a), _term(b))
    assert is_regular(ident) == satisfies(builtin("M_2"), ident).holds


def test_isoterm_examples():
    B0 = builtin("B_0")
    assert is_isoterm_bounded(B0, "x1*x2", 4).status == MINIMAL
    r = is_isoterm_bounded(builtin("S_53"), "x1*x2*x3", 4)
    assert r.status == VIOLATING
    assert preceq(builtin("S_53"), Term([r.violating]), parse_term("x1*x2*x3")).holds
    # x2*x1*x3 is one of the violating words
    assert preceq(builtin("S_53"), parse_term("x2*x1*x3"), parse_term("x1*x2*x3")).holds
    m2 = is_isoterm_bounded(builtin("M_2"), "x1*x2", 2)
    assert m2.status == VIOLATING
    assert preceq(builtin("M_2"), parse_term("x2*x1"), parse_term("x1*x2")).holds
    assert is_isoterm_bounded(B0, "x1*x2*x3", 6, budget=10).status == INCONCLUSIVE
    with pytest.raises(ValueError):
        is_isoterm_bounded(B0, "x1*x2*x3", 2)


def test_isoterm_agrees_with_naive_search():
    S = builtin("S_7")
    w = parse_word("x1*x2")
    res = is_isoterm_bounded(S, w, 3)
    expected = None
    for length in range(1, 4):
        for letters in itertools.product(("x1", "x2"), repeat=length):
            if letters == w.letters:
                continue
            text = f"{'*'.join(letters)} + x1*x2 = x1*x2"
            if recheck.naive_satisfies(S, text) is None:
                expected = letters
                break
        if expected:
            break
    assert (res.violating.letters if res.violating else None) == expected


def test_nilpotent_identity_shape():
    ident = nilpotent_identity(2)
    expect = parse_identity("x1*x2*x3 + y = x1*x2*x3")
    assert (ident.lhs, ident.rhs) == (expect.lhs, expect.rhs)


def test_nilpotent_fails_on_s53():
    S = builtin("S_53")
    res = check_nilpotent(S, 1)
    assert res.status == COUNTEREXAMPLE
    env = res.named_assignment(S)
    text = "x1*x2 + y = x1*x2"
    ev = recheck.NaiveEvaluator(S)
    lhs, rhs = text.split("=")
    assert ev.eval(lhs, env) != ev.eval(rhs, env)
    assert satisfies(S, nilpotent_identity(1)).status == COUNTEREXAMPLE


@pytest.mark.parametrize("name", ("S_53", "B_0", "S_7", "M_2"))
@pytest.mark.parametrize("k", (1, 2))
def test_structural_nilpotency_agrees_with_enumeration(name, k):
    S = builtin(name)
    assert check_nilpotent(S, k).holds == satisfies(S, nilpotent_identity(k)).holds


def test_nilpotent_holds_on_A32():
    assert check_nilpotent(build_A(3, 2).algebra, 3).status == HOLDS


def test_random_identity_seeded():
    a = [random_identity(random.Random(5)) for _ in range(3)]
    b = [random_identity(random.Random(5)) for _ in range(3)]
    assert [format_identity(x) for x in a] == [format_identity(x) for x in b]
    text = random_identity_text(random.Random(1))
    assert "=" in text
    parse_identity(text)


@given(st.sampled_from(("S_53", "B_0")), st.integers(0, 10**6))
def test_satisfies_agrees_with_naive(name, seed):
    S = builtin(name)
    text = random_identity_text(random.Random(seed))
    assume(len(set(text.replace("+", " ").replace("*", " ").replace("=", " ").split())) <= 3)
    assert satisfies(S, parse_identity(text)).holds == (recheck.naive_satisfies(S, text) is None)
