"""The acceptance suite: thirteen end-to-end checks with runtime limits."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from . import recheck
from .core import (FiniteSemiring, builtin, find_isomorphism, natural_order,
                   verify_ai_semiring)
from .experiments import (SATISFIED, b0_checks, build_A, embed_Sc_star_in_A,
                          reconstruct_Sc_star, reduction_outcome, reduction_satisfies, regularize,
                          sample_check_sigma, sigma, verify_power_structure, witness_failure)
from .hypergraphs import block_hom, hom_exists_oracle, hom_search, is_hypergraph_hom, kneser
from .report import INCONCLUSIVE
from .terms import HOLDS, check_nilpotent, parse_identity, random_identity_text, satisfies
from .words import (M_of, Mc_of, Mc_star, S_of, Sc_of, Sc_star, linear_word, power_word,
                    s_infinity, subdirect_maxplus_check, truncated_max_plus)

# Hasse diagram of the additive order of B_2^1, lower element first
B21_HASSE_COVERS = frozenset({("1", "e11"), ("1", "e22"), ("e12", "0"), ("e11", "0"),
                               ("e22", "0"), ("e21", "0")})


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    elapsed_s: float
    limit_s: float
    details: dict = field(default_factory=dict)
    status: str = ""

    @property
    def within_limit(self) -> bool:
        return self.elapsed_s <= self.limit_s

    @property
    def ok(self) -> bool:
        return self.passed and self.within_limit

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        extra = f" [{self.status}]" if self.status else ""
        slow = "" if self.within_limit else " (over time limit)"
        return (f"criterion {self.number:2d} {tag}: {self.title}{extra} "
                f"({self.elapsed_s:.2f}s / {self.limit_s:g}s){slow}")

    def to_dict(self) -> dict:
        return {"criterion": self.number, "title": self.title, "pass": self.ok,
                "checks_passed": self.passed, "elapsed_s": round(self.elapsed_s, 3),
                "limit_s": self.limit_s, "status": self.status, "details": self.details}


def word_suite() -> list[FiniteSemiring]:
    """Word-semiring constructions exercised by the axiom criterion."""
    return [S_of("a1*a2"), S_of("a1*a2*a3"), S_of("a*b*a"), M_of("a1*a2"), M_of("a*b*a"),
            Sc_of("a1*a2*a3"), Mc_of("a^2*b"), Sc_star("a1*a2*a3"), Mc_star("a^3"),
            Mc_star("1"), Mc_star("a"), Mc_star("a^2*b"), truncated_max_plus(4),
            s_infinity(builtin("S_53"))]


def mutation_sample(S: FiniteSemiring, count: int = 20, seed: int = 0) -> list:
    """Seeded single-entry mutations: (table, row, col, new value)."""
    n = S.n
    pool = [(table, i, j, v) for table in ("add", "mul") for i in range(n) for j in range(n)
            for v in range(n) if v != getattr(S, table)[i * n + j]]
    return random.Random(seed).sample(pool, count)


def mutate(S: FiniteSemiring, table: str, i: int, j: int, v: int) -> FiniteSemiring:
    add, mul = list(S.add), list(S.mul)
    (add if table == "add" else mul)[i * S.n + j] = v
    return FiniteSemiring(S.elements, tuple(add), tuple(mul), f"{S.name}~")


def criterion_1() -> tuple[bool, dict]:
    named = ["S_7", "S_53", "B_0", "B_2^1", "Sigma_7", "M_2"]
    d = {"builtins": {}, "constructions": {}, "mutations": []}
    for nm in named:
        d["builtins"][nm] = verify_ai_semiring(builtin(nm)).ok
    for S in word_suite():
        d["constructions"][S.name] = verify_ai_semiring(S).ok
    S53 = builtin("S_53")
    for table, i, j, v in mutation_sample(S53):
        failures = verify_ai_semiring(mutate(S53, table, i, j, v)).failures
        d["mutations"].append({"entry": [table, S53.elements[i], S53.elements[j], S53.elements[v]],
                               "failures": [f.law for f in failures]})
    ok = (all(d["builtins"].values()) and all(d["constructions"].values())
          and all(m["failures"] for m in d["mutations"]))
    return ok, d


def criterion_2() -> tuple[bool, dict]:
    o53 = natural_order(builtin("S_53"))
    o21 = natural_order(builtin("B_2^1"))
    d = {"S_53_chain": o53.chain(), "S_53_greatest": o53.elements[o53.greatest],
         "B21_covers": sorted(o21.named_covers()),
         "B21_greatest": o21.elements[o21.greatest]}
    ok = (d["S_53_chain"] == ["1", "a", "0"] and d["S_53_greatest"] == "0"
          and o21.named_covers() == B21_HASSE_COVERS and d["B21_greatest"] == "0")
    return ok, d


def _iso(S, T, expect: bool) -> dict:
    res = find_isomorphism(S, T)
    ok = res.found == expect
    if res.found:
        ok = ok and recheck.check_semiring_map(S, T, res.map.named(), "isomorphism")
    return {"pair": [S.name, T.name], "found": res.found, "expected": expect,
            "reason": res.reason, "ok": ok}


def criterion_3() -> tuple[bool, dict]:
    rows = [_iso(Mc_star("1"), builtin("M_2"), True), _iso(Mc_star("a"), builtin("S_53"), True)]
    rows += [_iso(truncated_max_plus(k), Mc_star(power_word(k - 1)), True) for k in range(1, 7)]
    rows.append(_iso(builtin("S_7"), builtin("S_53"), False))
    return all(r["ok"] for r in rows), {"pairs": rows}


def criterion_4() -> tuple[bool, dict]:
    reps = {n: reconstruct_Sc_star(n) for n in range(1, 5)}
    ok = all(r.passed and r.certificates["sizes"]["quotient"] == 2 ** n for n, r in reps.items())
    return ok, {str(n): r.certificates["sizes"] for n, r in reps.items()}


def criterion_5() -> tuple[bool, dict]:
    inst = build_A(3, 2)
    rep = verify_power_structure(inst)
    nil = check_nilpotent(inst.algebra, 3)
    ok = inst.algebra.n == 58 and rep.passed and nil.status == HOLDS
    return ok, {"size": inst.algebra.n, "A^3": rep.certificates["A^k"],
                "A^4": rep.certificates["A^(k+1)"], "nilpotent": nil.status}


def criterion_6() -> tuple[bool, dict]:
    d = {}
    ok = True
    for k, q in ((3, 2), (3, 3)):
        rep = witness_failure(build_A(k, q))
        d[f"{k},{q}"] = {"lhs": rep.certificates["lhs"], "rhs": rep.certificates["rhs"],
                         "recheck": rep.recheck}
        ok = ok and rep.passed and rep.certificates["lhs"] == linear_word(k * q) \
            and rep.certificates["rhs"] == "0"
    return ok, d


def criterion_7(budget_ms: int = 600_000) -> tuple[bool, dict, str]:
    main = reduction_satisfies(build_A(3, 3), sigma(3, 2), budget_ms=budget_ms)
    d = {"A33_sigma32": {"outcome": reduction_outcome(main),
                         "hom": main.certificates.get("hom"), "recheck": main.recheck}}
    ok = main.passed and reduction_outcome(main) == SATISFIED \
        and main.certificates["hom"]["kind"] == "exhausted"
    A32 = build_A(3, 2)
    sig33 = sigma(3, 3)
    stretch = reduction_satisfies(A32, sig33, budget_ms=budget_ms)
    outcome = reduction_outcome(stretch)
    d["A32_sigma33"] = {"outcome": outcome, "hom": stretch.certificates.get("hom"),
                        "recheck": stretch.recheck}
    if outcome == INCONCLUSIVE:
        sample = sample_check_sigma(A32, sig33, trials=10 ** 5, seed=1)
        predicted = stretch.certificates["oracle_prediction"]
        d["A32_sigma33"]["sampling"] = sample.certificates["result"]
        ok = ok and sample.passed and predicted == SATISFIED
        status = "stretch corroborated, not exhausted"
    else:
        ok = ok and stretch.passed and outcome == SATISFIED
        status = "stretch exhausted"
    return ok, d, status


HOM_PAIRS = ((1, 1), (1, 2), (1, 3), (2, 2), (2, 1), (3, 1), (2, 4))
BLOCK_PAIRS = ((1, 2), (1, 3), (2, 4), (2, 2))


def criterion_8(budget_ms: int = 60_000) -> tuple[bool, dict]:
    d = {"search": [], "block": []}
    ok = True
    for m, n in HOM_PAIRS:
        src, tgt = kneser(3, m), kneser(3, n)
        t0 = time.perf_counter()
        cert = hom_search(src, tgt, budget_ms=budget_ms)
        elapsed = time.perf_counter() - t0
        expect = hom_exists_oracle(m, n)
        agree = cert.kind == ("found" if expect else "exhausted")
        if cert.kind == "found":
            agree = agree and is_hypergraph_hom(src, tgt, cert.map) and recheck.check_kneser_hom(
                3, m, n, cert.subset_pairs(src, tgt))
        ok = ok and agree and elapsed < 60
        d["search"].append({"m": m, "n": n, "kind": cert.kind, "oracle": expect,
                            "nodes": cert.nodes, "seconds": round(elapsed, 3), "agree": agree})
    for m, n in BLOCK_PAIRS:
        cert = block_hom(3, m, n)
        src, tgt = kneser(3, m), kneser(3, n)
        good = is_hypergraph_hom(src, tgt, cert.map) and recheck.check_kneser_hom(
            3, m, n, cert.subset_pairs(src, tgt))
        ok = ok and good
        d["block"].append({"m": m, "n": n, "verified": good})
    return ok, d


def criterion_9() -> tuple[bool, dict]:
    rep = embed_Sc_star_in_A(3, 2)
    ok = rep.passed and rep.certificates.get("image_size") == 8
    return ok, {"image_size": rep.certificates.get("image_size"), "recheck": rep.recheck}


def criterion_10() -> tuple[bool, dict]:
    d = {}
    ok = True
    for nm in ("S_53", "B_0", "S_7"):
        rep = regularize(builtin(nm), count=200, seed=0)
        d[nm] = rep.certificates["summary"]
        ok = ok and rep.passed
    return ok, d


def criterion_11() -> tuple[bool, dict]:
    rep = b0_checks(max_vars=3, max_len=4, isoterm_n=3, isoterm_len=6, chain_n=4)
    occ = rep.certificates["occurrence_lemma"]
    d = {"recheck": rep.recheck, "preceq_pairs": occ["preceq_pairs"],
         "exception_count": occ["exception_count"],
         "first_exceptions": occ["exceptions"][:5],
         "separated_exceptions": len(occ["separated_exceptions"]),
         "first_exception_naive_check": rep.certificates.get("first_exception_naive_check")}
    return rep.passed, d


def criterion_12() -> tuple[bool, dict]:
    rep = subdirect_maxplus_check(5)
    return rep.passed, {"recheck": rep.recheck}


def engine_corpus(count: int = 500, seed: int = 0) -> list[str]:
    rng = random.Random(seed)
    return [random_identity_text(rng, 3, 4, 4) for _ in range(count)]


def criterion_13() -> tuple[bool, dict]:
    corpus = engine_corpus()
    d = {}
    ok = True
    for nm in ("S_53", "B_0"):
        S = builtin(nm)
        disagreements = []
        holds = 0
        for text in corpus:
            a = satisfies(S, parse_identity(text)).holds
            b = recheck.naive_satisfies(S, text) is None
            holds += a
            if a != b:
                disagreements.append(text)
        d[nm] = {"identities": len(corpus), "holding": holds, "disagreements": disagreements}
        ok = ok and not disagreements
    return ok, d


CRITERIA = {
    1: ("axioms and table mutations", 1.0, criterion_1),
    2: ("natural orders of S_53 and B_2^1", 1.0, criterion_2),
    3: ("named isomorphisms", 5.0, criterion_3),
    4: ("S_c*(a1...an) rebuilt from powers of S_53, n <= 4", 30.0, criterion_4),
    5: ("A_{3,2} size and power structure", 30.0, criterion_5),
    6: ("sigma witness failures on A_{3,2} and A_{3,3}", 10.0, criterion_6),
    7: ("sigma satisfaction through exhausted Kneser searches", 600.0, criterion_7),
    8: ("Kneser homomorphism search against the divisibility oracle", 420.0, criterion_8),
    9: ("S_c*(a1a2a3) embedded in A_{3,2}", 5.0, criterion_9),
    10: ("regularization over 200 seeded identities", 60.0, criterion_10),
    11: ("bounded checks on B_0", 120.0, criterion_11),
    12: ("max-plus subdirect decomposition", 1.0, criterion_12),
    13: ("satisfaction engine against the naive evaluator", 60.0, criterion_13),
}


def run_criterion(number: int) -> CriterionResult:
    title, limit, fn = CRITERIA[number]
    t0 = time.perf_counter()
    out = fn()
    elapsed = time.perf_counter() - t0
    status = out[2] if len(out) > 2 else ""
    return CriterionResult(number, title, bool(out[0]), elapsed, limit, out[1], status)


def run_all(numbers=None) -> list[CriterionResult]:
    return [run_criterion(n) for n in (numbers or sorted(CRITERIA))]
