import itertools
import math

import pytest

from semiring_lab import recheck
from semiring_lab.core import AlgebraError, builtin, find_isomorphism, verify_ai_semiring
from semiring_lab.experiments import (COUNTEREXAMPLE, SATISFIED, b0_checks, build_A,
                                      embed_Sc_star_in_A, expected_A_size,
                                      occurrence_condition, reconstruct_Sc_star,
                                      reduction_outcome, reduction_satisfies, regularize,
                                      sample_check_sigma, sigma, verify_power_structure,
                                      witness_failure)
from semiring_lab.report import PASS
from semiring_lab.terms import Word, parse_identity, preceq, parse_term, satisfies
from semiring_lab.words import Sc_star, linear_word


def _square_free_oracle(k, p):
    """Square-free words of length p..kp over a1..akp, plus 0."""
    letters = [f"a{i}" for i in range(1, k * p + 1)]
    out = {"0"}
    for j in range(p, k * p + 1):
        for c in itertools.combinations(letters, j):
            out.add("*".join(c))
    return out


@pytest.mark.parametrize("k,p,size", [(3, 2, 58), (3, 1, 8), (4, 1, 16), (2, 2, 12), (2, 3, 43)])
def test_build_A_sizes(k, p, size):
    inst = build_A(k, p)
    assert inst.algebra.n == size == expected_A_size(k, p)
    assert set(inst.algebra.elements) == _square_free_oracle(k, p)
    assert len(inst.generators) == math.comb(k * p, p)


def test_A31_is_sc_star():
    assert find_isomorphism(build_A(3, 1).algebra, Sc_star("a1*a2*a3")).found


def test_build_A_guard():
    with pytest.raises(AlgebraError):
        build_A(4, 4)


@pytest.mark.parametrize("k,p", [(3, 2), (3, 1), (2, 2)])
def test_power_structure(k, p):
    rep = verify_power_structure(build_A(k, p))
    assert rep.passed
    assert set(rep.certificates["A^k"]) == {"0", linear_word(k * p)}
    assert rep.certificates["A^(k+1)"] == ["0"]


def test_sigma_counts():
    s32 = sigma(3, 2)
    assert len(s32.variables) == 15 and len(s32.t.words) == 15 and len(s32.q_word) == 15
    s33 = sigma(3, 3)
    assert len(s33.variables) == 84 and len(s33.t.words) == 280


@pytest.mark.parametrize("k,q", [(3, 2), (4, 2)])
def test_witness_failure(k, q):
    rep = witness_failure(build_A(k, q))
    assert rep.passed
    assert rep.certificates["lhs"] == linear_word(k * q) and rep.certificates["rhs"] == "0"


def test_short_q_is_refused():
    # with q = 1 the word q has only k letters and need not vanish
    inst = build_A(3, 1)
    with pytest.raises(AlgebraError):
        witness_failure(inst)
    with pytest.raises(AlgebraError):
        reduction_satisfies(build_A(3, 2), sigma(3, 1))
    assert satisfies(inst.algebra, sigma(3, 1).identity).holds


@pytest.mark.parametrize("k,p,q,outcome", [(3, 3, 2, SATISFIED), (3, 2, 3, SATISFIED),
                                           (3, 2, 2, COUNTEREXAMPLE), (3, 3, 3, COUNTEREXAMPLE),
                                           (3, 1, 2, SATISFIED), (3, 2, 4, SATISFIED)])
def test_reduction(k, p, q, outcome):
    rep = reduction_satisfies(build_A(k, p), sigma(k, q), budget_ms=120_000)
    assert rep.verdict == PASS
    assert reduction_outcome(rep) == outcome
    if outcome == SATISFIED:
        assert rep.certificates["hom"]["kind"] == "exhausted"


def test_reduction_inconclusive_under_tiny_budget():
    rep = reduction_satisfies(build_A(3, 2), sigma(3, 3), budget_ms=1, node_budget=1)
    assert reduction_outcome(rep) == "inconclusive"


def test_sampling_corroboration():
    rep = sample_check_sigma(build_A(3, 2), sigma(3, 3), trials=2000, seed=1)
    assert rep.passed


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_reconstruct(n):
    rep = reconstruct_Sc_star(n)
    assert rep.passed and rep.certificates["sizes"]["quotient"] == 2 ** n


def test_reconstruct_n2_natural_map():
    rep = reconstruct_Sc_star(2)
    nat = rep.certificates["natural_isomorphism"]
    assert nat["a1"] == "(a,1)" and nat["a2"] == "(1,a)"


@pytest.mark.parametrize("k,p", [(3, 2), (4, 2), (2, 3)])
def test_embedding(k, p):
    rep = embed_Sc_star_in_A(k, p)
    assert rep.passed and rep.certificates["image_size"] == 2 ** k


def test_embedding_generator_images():
    rep = embed_Sc_star_in_A(3, 2)
    assert rep.certificates["generator_images"] == {"a1": "a1*a2", "a2": "a3*a4", "a3": "a5*a6"}


def test_occurrence_condition():
    assert occurrence_condition(Word(("x", "y")), Word(("x", "y", "x")))
    assert not occurrence_condition(Word(("x",)), Word(("x", "y", "x")))
    assert occurrence_condition(Word(("x",)), Word(("x", "y", "x")), separated_only=True)


def test_b0_parts():
    rep = b0_checks(max_vars=2, max_len=3, isoterm_n=2, isoterm_len=5, chain_n=3)
    assert all(v for k, v in rep.recheck.items() if k != "occurrence_lemma")
    assert rep.recheck["occurrence_lemma_separated_letters"]


def test_occurrence_implication_has_exceptions_in_b0():
    # the letter y occurs once in x*y*x, x occurs on both sides of it, and
    # x <= x*y*x still holds in B_0 (checked by the naive evaluator)
    B0 = builtin("B_0")
    assert recheck.naive_satisfies(B0, "x + x*y*x = x*y*x") is None
    assert preceq(B0, parse_term("x"), parse_term("x*y*x")).holds
    rep = b0_checks()
    assert rep.certificates["occurrence_lemma"]["exception_count"] > 0
    assert rep.certificates["first_exception_naive_check"]["holds"]


def test_b0_xy_vs_xyx():
    B0 = builtin("B_0")
    res = preceq(B0, parse_term("x*y"), parse_term("x*y*x"))
    if res.holds:
        assert occurrence_condition(Word(("x", "y")), Word(("x", "y", "x")))


def test_regularize_report():
    rep = regularize(builtin("S_53"), count=50, seed=3)
    assert rep.passed and rep.certificates["summary"]["count"] == 50


def test_A_axioms():
    assert verify_ai_semiring(build_A(2, 2).algebra).ok
