"""ai-semiring terms as finite sets of words, and identity checking.

A term is a sum of words; since addition is commutative and idempotent a
term is stored as a set of words.  Evaluation multiplies letters left to
right and sums the word values with the algebra's addition table.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass

from .core import FiniteSemiring, power_sets

DEFAULT_BUDGET = 10**8

HOLDS = "holds"
COUNTEREXAMPLE = "counterexample"
TOO_LARGE = "too-large"
NO_COUNTEREXAMPLE = "no-counterexample-found"
MINIMAL = "minimal-up-to-bound"
VIOLATING = "violating"
INCONCLUSIVE = "inconclusive"

_VAR = re.compile(r"[A-Za-z0-9_]+")


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnassignedVariable(KeyError):
    pass


@dataclass(frozen=True, order=True)
class Word:
    letters: tuple

    def __post_init__(self):
        if isinstance(self.letters, str):
            object.__setattr__(self, "letters", tuple(parse_word(self.letters).letters))
        if not self.letters:
            raise ValueError("words are nonempty")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return "*".join(self.letters)

    def occ(self, x: str) -> int:
        return self.letters.count(x)

    @property
    def content(self) -> frozenset:
        return frozenset(self.letters)

    def is_linear(self) -> bool:
        return len(set(self.letters)) == len(self.letters)

    def exponents(self) -> dict:
        out = {}
        for x in self.letters:
            out[x] = out.get(x, 0) + 1
        return out

    def sort_key(self):
        return (len(self.letters), self.letters)


def _as_word(w) -> Word:
    if isinstance(w, Word):
        return w
    if isinstance(w, str):
        return parse_word(w)
    return Word(tuple(w))


class Term:
    """A nonempty finite set of words (a sum)."""

    __slots__ = ("words",)

    def __init__(self, words):
        if isinstance(words, (Word, str)):
            words = [words]
        ws = frozenset(_as_word(w) for w in words)
        if not ws:
            raise ValueError("terms are nonempty")
        self.words = ws

    def sorted_words(self) -> list:
        return sorted(self.words, key=Word.sort_key)

    @property
    def content(self) -> frozenset:
        out = set()
        for w in self.words:
            out.update(w.letters)
        return frozenset(out)

    def __add__(self, other) -> Term:
        if isinstance(other, (Word, str)):
            other = Term(other)
        return Term(self.words | other.words)

    def __eq__(self, other):
        return isinstance(other, Term) and self.words == other.words

    def __hash__(self):
        return hash(self.words)

    def __len__(self):
        return len(self.words)

    def __str__(self):
        return format_term(self)

    def __repr__(self):
        return f"Term({format_term(self)!r})"


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    @property
    def trivial(self) -> bool:
        return self.lhs == self.rhs

    @property
    def variables(self) -> list:
        return sorted(self.lhs.content | self.rhs.content, key=_var_key)

    def __str__(self):
        return format_identity(self)


def _var_key(v: str):
    m = re.fullmatch(r"([A-Za-z_]*?)(\d+)", v)
    if m:
        return (m.group(1), int(m.group(2)), v)
    return (v, -1, v)


# -- parsing ----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect_end(self):
        if self.peek():
            raise TermSyntaxError(f"unexpected {self.text[self.pos]!r}", self.pos)

    def variable(self) -> str:
        self.skip()
        m = _VAR.match(self.text, self.pos)
        if not m:
            what = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            raise TermSyntaxError(f"expected a variable, found {what}", self.pos)
        self.pos = m.end()
        return m.group(0)

    def word(self) -> Word:
        letters = [self.variable()]
        while self.peek() == "*":
            self.pos += 1
            letters.append(self.variable())
        return Word(tuple(letters))

    def term(self) -> Term:
        words = [self.word()]
        while self.peek() == "+":
            self.pos += 1
            words.append(self.word())
        return Term(words)


def parse_word(text: str) -> Word:
    p = _Parser(text)
    w = p.word()
    p.expect_end()
    return w


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.expect_end()
    return t


def parse_identity(text: str) -> Identity:
    p = _Parser(text)
    lhs = p.term()
    if p.peek() != "=":
        raise TermSyntaxError("expected '='", p.pos)
    p.pos += 1
    rhs = p.term()
    p.expect_end()
    return Identity(lhs, rhs)


def format_word(w: Word) -> str:
    return str(w)


def format_term(t: Term) -> str:
    return " + ".join(str(w) for w in t.sorted_words())


def format_identity(ident: Identity) -> str:
    return f"{format_term(ident.lhs)} = {format_term(ident.rhs)}"


# -- evaluation -------------------------------------------------------------

class CompiledTerm:
    """A term with variables replaced by positions in a fixed variable list.

    Sums stop early once they reach the additive greatest element and
    products stop at a multiplicative zero; both are absorbing, so the
    value is unchanged.
    """

    def __init__(self, S: FiniteSemiring, term: Term, variables):
        pos = {v: i for i, v in enumerate(variables)}
        missing = term.content - set(pos)
        if missing:
            raise UnassignedVariable(f"unassigned variable(s): {', '.join(sorted(missing))}")
        self.words = [tuple(pos[x] for x in w.letters) for w in term.sorted_words()]
        self.S = S
        self.cost = sum(len(w) for w in self.words)

    def __call__(self, values) -> int:
        S = self.S
        n, add, mul = S.n, S.add, S.mul
        top = S.greatest
        zero = S.mul_zero
        acc = -1
        for w in self.words:
            v = values[w[0]]
            for i in w[1:]:
                if v == zero:
                    break
                v = mul[v * n + values[i]]
            acc = v if acc < 0 else add[acc * n + v]
            if acc == top:
                break
        return acc


def eval_term(S: FiniteSemiring, t: Term, assignment: dict) -> int:
    """Evaluate ``t`` under ``assignment`` (variable -> element index or name)."""
    if isinstance(t, (str, Word)):
        t = Term(t)
    missing = t.content - set(assignment)
    if missing:
        raise UnassignedVariable(f"unassigned variable(s): {', '.join(sorted(missing))}")
    variables = sorted(t.content)
    values = [S.idx(assignment[v]) for v in variables]
    return CompiledTerm(S, t, variables)(values)


@dataclass
class CheckResult:
    status: str
    assignment: dict | None = None  # variable -> element index
    lhs_value: int | None = None
    rhs_value: int | None = None
    checked: int = 0
    cost: int = 0

    @property
    def holds(self) -> bool:
        return self.status in (HOLDS, NO_COUNTEREXAMPLE)

    def named_assignment(self, S: FiniteSemiring) -> dict | None:
        if self.assignment is None:
            return None
        return {v: S.elements[i] for v, i in self.assignment.items()}

    def to_dict(self, S: FiniteSemiring) -> dict:
        d = {"status": self.status, "assignments_checked": self.checked}
        if self.assignment is not None:
            d["counterexample"] = self.named_assignment(S)
            d["lhs"] = S.elements[self.lhs_value]
            d["rhs"] = S.elements[self.rhs_value]
        return d


def _counterexample(S, ident, variables, values, checked, cost):
    assignment = {v: values[i] for i, v in enumerate(variables)}
    lv = eval_term(S, ident.lhs, assignment)
    rv = eval_term(S, ident.rhs, assignment)
    if lv == rv:
        raise AssertionError("counterexample did not re-evaluate to an inequality")
    return CheckResult(COUNTEREXAMPLE, assignment, lv, rv, checked, cost)


def satisfies(S: FiniteSemiring, ident: Identity, budget: int = DEFAULT_BUDGET) -> CheckResult:
    """Exhaustively check ``ident`` over all assignments into S.

    ``budget`` bounds element operations (assignments times letters); above
    it the answer is TOO_LARGE, never a sample.
    """
    if isinstance(ident, str):
        ident = parse_identity(ident)
    if ident.trivial:
        return CheckResult(HOLDS)
    variables = ident.variables
    lhs = CompiledTerm(S, ident.lhs, variables)
    rhs = CompiledTerm(S, ident.rhs, variables)
    total = S.n ** len(variables)
    cost = total * (lhs.cost + rhs.cost)
    if cost > budget:
        return CheckResult(TOO_LARGE, cost=cost)
    checked = 0
    for values in itertools.product(range(S.n), repeat=len(variables)):
        checked += 1
        if lhs(values) != rhs(values):
            return _counterexample(S, ident, variables, values, checked, cost)
    return CheckResult(HOLDS, checked=checked, cost=cost)


def sample_satisfies(S: FiniteSemiring, ident: Identity, trials: int, seed: int,
                     seeded_assignments=()) -> CheckResult:
    """Check ``ident`` on ``trials`` uniform random assignments.

    ``seeded_assignments`` (variable -> element) are tried before the random
    ones.  Deterministic for a given seed.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if isinstance(ident, str):
        ident = parse_identity(ident)
    variables = ident.variables
    lhs = CompiledTerm(S, ident.lhs, variables)
    rhs = CompiledTerm(S, ident.rhs, variables)
    checked = 0
    for a in seeded_assignments:
        values = [S.idx(a[v]) for v in variables]
        checked += 1
        if lhs(values) != rhs(values):
            return _counterexample(S, ident, variables, values, checked, 0)
    rng = random.Random(seed)
    n = S.n
    k = len(variables)
    for _ in range(trials):
        values = [rng.randrange(n) for _ in range(k)]
        checked += 1
        if lhs(values) != rhs(values):
            return _counterexample(S, ident, variables, values, checked, 0)
    return CheckResult(NO_COUNTEREXAMPLE, checked=checked)


def preceq_identity(u: Term, v: Term) -> Identity:
    """u <= v, i.e. the identity u + v = v."""
    return Identity(u + v, v)


def preceq(S: FiniteSemiring, u, v, budget: int = DEFAULT_BUDGET) -> CheckResult:
    u = u if isinstance(u, Term) else Term(u)
    v = v if isinstance(v, Term) else Term(v)
    return satisfies(S, preceq_identity(u, v), budget)


def is_regular(ident: Identity) -> bool:
    return ident.lhs.content == ident.rhs.content


def nilpotent_identity(k: int) -> Identity:
    """x1*...*x(k+1) + y = x1*...*x(k+1): every (k+1)-fold product is the top."""
    if k < 1:
        raise ValueError("k must be >= 1")
    prod = Word(tuple(f"x{i}" for i in range(1, k + 2)))
    return Identity(Term([prod, Word(("y",))]), Term([prod]))


def check_nilpotent(S: FiniteSemiring, k: int) -> CheckResult:
    """Decide the (k+1)-nilpotent identity from the set power S^(k+1).

    The identity holds iff every (k+1)-fold product is the additive greatest
    element, which needs no enumeration of assignments.
    """
    top = S.greatest
    n = S.n
    powers = power_sets(S, range(n), k + 1)
    last = powers[-1]
    if top is not None and last == {top}:
        return CheckResult(HOLDS)
    # a product chain reaching some p, and a y with p + y != p
    target = next(iter(sorted(x for x in last if x != top)))
    chain = _product_chain(S, k + 1, target)
    y = next(y for y in range(n) if S.add[target * n + y] != target)
    ident = nilpotent_identity(k)
    assignment = {f"x{i + 1}": c for i, c in enumerate(chain)}
    assignment["y"] = y
    lv = eval_term(S, ident.lhs, assignment)
    rv = eval_term(S, ident.rhs, assignment)
    if lv == rv:
        raise AssertionError("nilpotency counterexample did not re-evaluate")
    return CheckResult(COUNTEREXAMPLE, assignment, lv, rv)


def _product_chain(S: FiniteSemiring, length: int, target: int) -> list:
    """Some x1..x_length with x1*...*x_length = target (left to right)."""
    n, mul = S.n, S.mul
    # reach[j]: element -> predecessor (value, factor) for products of j+1 factors
    layers = [{x: None for x in range(n)}]
    for _ in range(length - 1):
        nxt = {}
        for v in layers[-1]:
            for x in range(n):
                r = mul[v * n + x]
                if r not in nxt:
                    nxt[r] = (v, x)
        layers.append(nxt)
    chain = []
    cur = target
    for j in range(length - 1, 0, -1):
        v, x = layers[j][cur]
        chain.append(x)
        cur = v
    chain.append(cur)
    return chain[::-1]


def words_over(variables, max_len: int, min_len: int = 1):
    """All words over ``variables`` of length min_len..max_len, shortest first."""
    for length in range(min_len, max_len + 1):
        for letters in itertools.product(variables, repeat=length):
            yield Word(letters)


@dataclass
class IsotermResult:
    status: str  # MINIMAL | VIOLATING | INCONCLUSIVE
    word: Word
    max_len: int
    violating: Word | None = None
    candidates_checked: int = 0

    def to_dict(self) -> dict:
        return {"status": self.status, "word": str(self.word), "max_len": self.max_len,
                "violating_word": str(self.violating) if self.violating else None,
                "candidates_checked": self.candidates_checked}


def value_vectors(S: FiniteSemiring, words, variables) -> dict:
    """Word -> tuple of its values under every assignment of ``variables``."""
    n = S.n
    assignments = list(itertools.product(range(n), repeat=len(variables)))
    out = {}
    for w in words:
        c = CompiledTerm(S, Term([w]), variables)
        out[w] = tuple(c(a) for a in assignments)
    return out


def is_isoterm_bounded(S: FiniteSemiring, w, max_len: int,
                       budget: int = DEFAULT_BUDGET) -> IsotermResult:
    """Look for a word u != w over c(w), |u| <= max_len, with u <= w in S.

    Only variables of w are tried; this is complete whenever M_2 embeds in S
    (then u <= w forces c(u) to lie inside c(w)).  A MINIMAL answer only
    certifies minimality up to ``max_len``.
    """
    w = _as_word(w)
    if max_len < len(w):
        raise ValueError("max_len must be at least the length of w")
    variables = sorted(w.content, key=_var_key)
    nassign = S.n ** len(variables)
    n, add = S.n, S.add
    wvals = value_vectors(S, [w], variables)[w]
    checked = 0
    spent = nassign * len(w)
    for u in words_over(variables, max_len):
        if u == w:
            continue
        spent += nassign * (len(u) + 1)
        if spent > budget:
            return IsotermResult(INCONCLUSIVE, w, max_len, None, checked)
        checked += 1
        c = CompiledTerm(S, Term([u]), variables)
        for a, wv in zip(itertools.product(range(n), repeat=len(variables)), wvals):
            if add[c(a) * n + wv] != wv:
                break
        else:
            if not preceq(S, Term([u]), Term([w])).holds:
                raise AssertionError("violating word failed re-checking")
            return IsotermResult(VIOLATING, w, max_len, u, checked)
    return IsotermResult(MINIMAL, w, max_len, None, checked)


def random_identity(rng: random.Random, max_vars: int = 3, max_words: int = 4,
                    max_len: int = 4, variables=("x", "y", "z")) -> Identity:
    """A random identity with at most ``max_vars`` variables."""
    pool = list(variables[:max_vars])

    def term():
        words = []
        for _ in range(rng.randint(1, max_words)):
            words.append(Word(tuple(rng.choice(pool) for _ in range(rng.randint(1, max_len)))))
        return Term(words)

    return Identity(term(), term())


def random_identity_text(rng: random.Random, max_vars: int = 3, max_words: int = 4,
                         max_len: int = 4, variables=("x", "y", "z")) -> str:
    """Raw identity text; words may repeat, so it is not canonical."""
    pool = list(variables[:max_vars])

    def term():
        return " + ".join("*".join(rng.choice(pool) for _ in range(rng.randint(1, max_len)))
                          for _ in range(rng.randint(1, max_words)))

    return f"{term()} = {term()}"
