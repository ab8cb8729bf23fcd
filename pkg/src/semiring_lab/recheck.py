"""Re-checkers that share no code with the searches and evaluators they audit.

Everything here works on element *names*, plain nested tables and raw term
text, and re-derives what it needs directly.
"""
from __future__ import annotations

import itertools
import re

_NAME = re.compile(r"[A-Za-z0-9_]+")


def _tables(S):
    """Name-keyed dict tables from an algebra's public fields."""
    names = list(S.elements)
    n = len(names)
    add = {}
    mul = {}
    for i in range(n):
        for j in range(n):
            add[names[i], names[j]] = names[S.add[i * n + j]]
            mul[names[i], names[j]] = names[S.mul[i * n + j]]
    return names, add, mul


class NaiveEvaluator:
    """Evaluate raw term text by direct recursion, without canonicalising."""

    def __init__(self, S):
        self.names, self.add, self.mul = _tables(S)

    def _prod(self, letters, env):
        if len(letters) == 1:
            return env[letters[0]]
        mid = len(letters) // 2
        return self.mul[self._prod(letters[:mid], env), self._prod(letters[mid:], env)]

    def _sum(self, words, env):
        if len(words) == 1:
            return self._prod(words[0], env)
        mid = len(words) // 2
        return self.add[self._sum(words[:mid], env), self._sum(words[mid:], env)]

    def eval(self, text: str, env: dict) -> str:
        words = [[x.strip() for x in w.split("*")] for w in text.split("+")]
        return self._sum(words, env)


def naive_eval(S, text: str, env: dict) -> str:
    return NaiveEvaluator(S).eval(text, env)


def naive_satisfies(S, identity_text: str):
    """Return None if the identity holds, else a violating name assignment."""
    lhs, rhs = identity_text.split("=")
    ev = NaiveEvaluator(S)
    variables = sorted(set(_NAME.findall(identity_text)))
    for values in itertools.product(ev.names, repeat=len(variables)):
        env = dict(zip(variables, values))
        if ev.eval(lhs, env) != ev.eval(rhs, env):
            return env
    return None


def check_semiring_map(S, T, named_map: dict, kind: str = "homomorphism") -> bool:
    """Brute-force check of a name -> name map between two algebras."""
    sn, sadd, smul = _tables(S)
    tn, tadd, tmul = _tables(T)
    if set(named_map) != set(sn) or not set(named_map.values()) <= set(tn):
        return False
    f = named_map
    for x in sn:
        for y in sn:
            if f[sadd[x, y]] != tadd[f[x], f[y]] or f[smul[x, y]] != tmul[f[x], f[y]]:
                return False
    if kind in ("embedding", "isomorphism") and len(set(f.values())) != len(sn):
        return False
    if kind == "isomorphism" and len(set(f.values())) != len(tn):
        return False
    return True


def check_subalgebra(S, subset_names) -> bool:
    _, add, mul = _tables(S)
    sub = set(subset_names)
    return all(add[x, y] in sub and mul[x, y] in sub for x in sub for y in sub)


def check_kneser_hom(k: int, m: int, n: int, pairs) -> bool:
    """``pairs``: [[m-subset, n-subset], ...] covering every m-subset of [km].

    Checks that every partition of [km] into k m-blocks is sent to a
    partition of [kn] into k n-blocks.
    """
    f = {tuple(sorted(a)): frozenset(b) for a, b in pairs}
    domain = [tuple(c) for c in itertools.combinations(range(1, k * m + 1), m)]
    if set(f) != set(domain):
        return False
    if any(len(b) != n or not b <= set(range(1, k * n + 1)) for b in f.values()):
        return False
    # disjoint pairs of blocks must go to disjoint blocks; with k blocks of
    # size n inside [kn] pairwise disjointness means a partition
    for a, b in itertools.combinations(domain, 2):
        if not set(a) & set(b) and f[a] & f[b]:
            return False
    return True
