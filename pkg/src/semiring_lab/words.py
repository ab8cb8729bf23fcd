"""Semirings built from finite word sets.

Noncommutative words are letter tuples and their subwords are contiguous
factors.  Commutative words are exponent vectors over a sorted alphabet and
their subwords are divisors (componentwise <=).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .core import AlgebraError, ElementMap, FiniteSemiring, require_ai
from .report import FAIL, PASS, Report
from .terms import satisfies, is_regular

FLAT = "flat"
DIVISIBILITY = "divisibility"
FACTOR = "factor"
DIVISOR = "divisor"

_TOKEN = re.compile(r"\s*([A-Za-z0-9_]+)(?:\s*\^\s*(\d+))?\s*")


def parse_word_letters(text: str) -> tuple:
    """'a1*a2*a3' -> ('a1','a2','a3'); 'a^3' -> ('a','a','a'); '1' -> ()."""
    text = text.strip()
    if text == "1":
        return ()
    letters = []
    for pos, part in enumerate(text.split("*")):
        m = _TOKEN.fullmatch(part)
        if not m:
            raise AlgebraError(f"bad word {text!r} (factor {pos + 1}: {part!r})")
        letter, exp = m.group(1), m.group(2)
        if letter in ("0", "1"):
            raise AlgebraError("letters '0' and '1' are reserved")
        e = int(exp) if exp is not None else 1
        if e < 1:
            raise AlgebraError(f"exponent must be positive in {text!r}")
        letters.extend([letter] * e)
    return tuple(letters)


def parse_word_set(text: str) -> list:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise AlgebraError("empty word set")
    return [parse_word_letters(p) for p in parts]


@dataclass(frozen=True)
class WordSemiringSpec:
    words: tuple  # tuples of letters; () is the empty word
    commutative: bool = False
    with_identity: bool = False
    order: str = FLAT

    def __post_init__(self):
        ws = tuple(parse_word_letters(w) if isinstance(w, str) else tuple(w) for w in self.words)
        object.__setattr__(self, "words", ws)
        if not ws:
            raise AlgebraError("W must be nonempty")
        if self.order not in (FLAT, DIVISIBILITY):
            raise AlgebraError(f"unknown order {self.order!r}")
        if self.order == DIVISIBILITY and not self.commutative:
            raise AlgebraError("the divisibility order is only defined for commutative words")
        if any(w == () for w in ws) and not self.with_identity:
            raise AlgebraError("the empty word needs with_identity")

    @property
    def alphabet(self) -> tuple:
        return tuple(sorted({x for w in self.words for x in w}, key=_letter_key))

    def display_name(self) -> str:
        base = "M" if self.with_identity else "S"
        sub = "_c" if self.commutative else ""
        star = "*" if self.order == DIVISIBILITY else ""
        inner = ",".join(_word_text(w, self.commutative) for w in self.words)
        return f"{base}{sub}{star}({inner})"


def _letter_key(x: str):
    m = re.fullmatch(r"([A-Za-z_]*?)(\d+)", x)
    return (m.group(1), int(m.group(2)), x) if m else (x, -1, x)


def _word_text(letters, commutative: bool) -> str:
    if not letters:
        return "1"
    if not commutative:
        return "*".join(letters)
    parts = []
    for x in sorted(set(letters), key=_letter_key):
        e = letters.count(x)
        parts.append(x if e == 1 else f"{x}^{e}")
    return "*".join(parts)


def _vector(letters, alphabet) -> tuple:
    return tuple(letters.count(x) for x in alphabet)


def _vec_text(vec, alphabet) -> str:
    parts = [x if e == 1 else f"{x}^{e}" for x, e in zip(alphabet, vec) if e]
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class SubwordClosure:
    members: frozenset  # letter tuples (factor) or exponent vectors (divisor)
    mode: str
    alphabet: tuple

    def words(self) -> list:
        """Members as display strings, shortest first."""
        return [self.text(m) for m in self.ordered()]

    def ordered(self) -> list:
        if self.mode == FACTOR:
            return sorted(self.members, key=lambda w: (len(w), w))
        return sorted(self.members, key=lambda v: (sum(v), tuple(-e for e in v)))

    def text(self, member) -> str:
        if self.mode == FACTOR:
            return _word_text(member, False)
        return _vec_text(member, self.alphabet)

    def __len__(self):
        return len(self.members)


def subword_closure(W, mode: str) -> SubwordClosure:
    """Nonempty subwords of the words in W (factors or divisors)."""
    ws = [parse_word_letters(w) if isinstance(w, str) else tuple(w) for w in W]
    if not ws:
        raise AlgebraError("W must be nonempty")
    alphabet = tuple(sorted({x for w in ws for x in w}, key=_letter_key))
    out = set()
    if mode == FACTOR:
        for w in ws:
            for i in range(len(w)):
                for j in range(i + 1, len(w) + 1):
                    out.add(w[i:j])
    elif mode == DIVISOR:
        for w in ws:
            vec = _vector(w, alphabet)
            for d in itertools.product(*(range(e + 1) for e in vec)):
                if any(d):
                    out.add(d)
    else:
        raise AlgebraError(f"unknown closure mode {mode!r}")
    return SubwordClosure(frozenset(out), mode, alphabet)


def _carrier(spec: WordSemiringSpec):
    closure = subword_closure(spec.words, DIVISOR if spec.commutative else FACTOR)
    members = closure.ordered()
    one = () if not spec.commutative else tuple(0 for _ in closure.alphabet)
    items = list(members)
    if spec.with_identity:
        items = [one] + items
    names = ["1" if spec.with_identity and i == 0 else closure.text(m) for i, m in enumerate(items)]
    return closure, items, names + ["0"], one


def _product(spec, a, b):
    if spec.commutative:
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def _build(spec: WordSemiringSpec, sum_fn) -> FiniteSemiring:
    closure, items, names, one = _carrier(spec)
    index = {w: i for i, w in enumerate(items)}
    zero = len(items)
    n = zero + 1
    add, mul = [], []
    for a in range(n):
        for b in range(n):
            if a == zero or b == zero:
                add.append(zero)
                mul.append(zero)
                continue
            wa, wb = items[a], items[b]
            mul.append(index.get(_product(spec, wa, wb), zero))
            add.append(sum_fn(a, b, wa, wb, index, zero))
    S = FiniteSemiring(tuple(names), tuple(add), tuple(mul), spec.display_name(),
                       {"origin": "word_semiring", "order": spec.order,
                        "commutative": spec.commutative, "with_identity": spec.with_identity})
    return S


def flat_word_semiring(spec: WordSemiringSpec, check: bool = True) -> FiniteSemiring:
    """S(W), M(W), S_c(W) or M_c(W) with flat addition (x + y = 0 for x != y)."""
    if spec.order != FLAT:
        raise AlgebraError("flat_word_semiring needs order='flat'")
    S = _build(spec, lambda a, b, wa, wb, index, zero: a if a == b else zero)
    if check:
        require_ai(S)
    return S


def divisibility_semiring(spec: WordSemiringSpec, check: bool = True) -> FiniteSemiring:
    """S_c*(W) or M_c*(W): u + v is the componentwise max if it stays in W's closure."""
    if spec.order != DIVISIBILITY:
        raise AlgebraError("divisibility_semiring needs order='divisibility'")

    def sup(a, b, wa, wb, index, zero):
        return index.get(tuple(max(x, y) for x, y in zip(wa, wb)), zero)

    S = _build(spec, sup)
    if check:
        require_ai(S)
    return S


def word_semiring(spec: WordSemiringSpec, check: bool = True) -> FiniteSemiring:
    if spec.order == FLAT:
        return flat_word_semiring(spec, check)
    return divisibility_semiring(spec, check)


def S_of(*words, check=True):
    return flat_word_semiring(WordSemiringSpec(words), check)


def M_of(*words, check=True):
    return flat_word_semiring(WordSemiringSpec(words, with_identity=True), check)


def Sc_of(*words, check=True):
    return flat_word_semiring(WordSemiringSpec(words, commutative=True), check)


def Mc_of(*words, check=True):
    return flat_word_semiring(WordSemiringSpec(words, commutative=True, with_identity=True), check)


def Sc_star(*words, check=True):
    return divisibility_semiring(WordSemiringSpec(words, True, False, DIVISIBILITY), check)


def Mc_star(*words, check=True):
    return divisibility_semiring(WordSemiringSpec(words, True, True, DIVISIBILITY), check)


def linear_word(n: int, letter: str = "a") -> str:
    return "*".join(f"{letter}{i}" for i in range(1, n + 1))


def power_word(k: int, letter: str = "a") -> str:
    """a^k as word-set text; k = 0 gives the empty word."""
    return "1" if k == 0 else f"{letter}^{k}"


def word_of(S: FiniteSemiring, name: str) -> tuple:
    """Letters of a word-semiring element name ('0' has none)."""
    return parse_word_letters(name)


# -- max-plus ----------------------------------------------------------------

def truncated_max_plus(k: int) -> FiniteSemiring:
    """N / N_{>=k}: carrier 0..k-1 and a top element; + is max, * is saturating sum."""
    if k < 1:
        raise AlgebraError("cutoff must be >= 1")
    top = k
    n = k + 1
    add = tuple(max(a, b) for a in range(n) for b in range(n))
    mul = tuple(top if a == top or b == top else min(a + b, top) for a in range(n) for b in range(n))
    names = tuple(str(i) for i in range(k)) + ("top",)
    S = FiniteSemiring(names, add, mul, f"N/N>={k}", {"origin": "truncated_max_plus", "cutoff": k})
    require_ai(S)
    return S


def maxplus_image(value: int, k: int) -> int:
    """Index of the natural number ``value`` in truncated_max_plus(k)."""
    return value if value < k else k


def subdirect_maxplus_check(K: int) -> Report:
    """Check the coordinate map n -> (n mod N_{>=k})_{k=1..K+1} on {0..K}.

    Injectivity and operation preservation are checked on {0..K}; each
    coordinate k is surjective as witnessed by {0..k}.
    """
    if K < 1:
        raise AlgebraError("K must be >= 1")
    rep = Report("(N, max, +) is a subdirect product of its truncations N/N>=k",
                 "max-plus subdirect decomposition", {"K": K})
    with rep.timed("check"):
        cutoffs = list(range(1, K + 2))
        quotients = {k: truncated_max_plus(k) for k in cutoffs}
        seg = range(K + 1)

        def vec(v):
            return tuple(maxplus_image(v, k) for k in cutoffs)

        images = {v: vec(v) for v in seg}
        injective = len(set(images.values())) == len(images)
        hom_ok = True
        bad = None
        for a in seg:
            for b in seg:
                for j, k in enumerate(cutoffs):
                    Q = quotients[k]
                    if maxplus_image(max(a, b), k) != Q.plus(images[a][j], images[b][j]):
                        hom_ok, bad = False, ("max", a, b, k)
                    if maxplus_image(a + b, k) != Q.times(images[a][j], images[b][j]):
                        hom_ok, bad = False, ("plus", a, b, k)
        surjective = {k: len({maxplus_image(v, k) for v in range(k + 1)}) == k + 1 for k in cutoffs}
        collapse = {k: [k, k + 1] for k in cutoffs}
        aligned = all(maxplus_image(c[0], k) == maxplus_image(c[1], k) for k, c in collapse.items())
    rep.certificates["images"] = {str(v): list(images[v]) for v in seg}
    rep.certificates["single_coordinate_collapse"] = {str(k): c for k, c in collapse.items()}
    if bad:
        rep.certificates["operation_failure"] = list(bad)
    rep.recheck = {"injective": injective, "homomorphic": hom_ok,
                   "coordinates_surjective": all(surjective.values()),
                   "single_coordinates_not_injective": aligned}
    rep.notes.append("N/N>=k has k+1 elements, so it matches M_c*(a^(k-1)); "
                     "M_c*(a^k) has k+2")
    rep.verdict = PASS if rep.rechecked else FAIL
    return rep


# -- regularization --------------------------------------------------------

def s_infinity(S: FiniteSemiring, new: str = "inf") -> FiniteSemiring:
    """Adjoin an element absorbing for both addition and multiplication."""
    while new in S.elements:
        new += "'"
    n = S.n
    t = n
    add, mul = [], []
    for a in range(n + 1):
        for b in range(n + 1):
            if a == t or b == t:
                add.append(t)
                mul.append(t)
            else:
                add.append(S.add[a * n + b])
                mul.append(S.mul[a * n + b])
    return FiniteSemiring(S.elements + (new,), tuple(add), tuple(mul), f"{S.name}^inf",
                          {"origin": "s_infinity", "parent": S.name})


def regularization_equivalence(S: FiniteSemiring, identities) -> dict:
    """Per identity: S^inf |= id  <=>  S |= id and id is regular."""
    Sinf = s_infinity(S)
    rows = []
    exceptions = []
    for ident in identities:
        a = satisfies(Sinf, ident).holds
        b = satisfies(S, ident).holds
        r = is_regular(ident)
        rows.append((a, b, r))
        if a != (b and r):
            exceptions.append(str(ident))
    return {"algebra": S.name, "count": len(rows),
            "regular": sum(1 for _, _, r in rows if r),
            "hold_in_S": sum(1 for _, b, _ in rows if b),
            "hold_in_S_inf": sum(1 for a, _, _ in rows if a),
            "exceptions": exceptions}


def inclusion_map(small: FiniteSemiring, big: FiniteSemiring) -> ElementMap:
    """Map elements of ``small`` to the equally named elements of ``big``."""
    return ElementMap(small, big, tuple(big.idx(e) for e in small.elements), "embedding")
