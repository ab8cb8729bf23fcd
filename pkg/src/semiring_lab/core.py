"""Finite semirings given by operation tables.

Elements are dense indices ``0..n-1`` with a parallel tuple of names; the
addition and multiplication tables are flat row-major tuples, so
``S.add[a * n + b]`` is ``a + b``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

FORMAT_VERSION = 1


class AlgebraError(ValueError):
    """Malformed input or a refused construction."""


@dataclass(frozen=True, eq=False)
class FiniteSemiring:
    elements: tuple
    add: tuple
    mul: tuple
    name: str | None = None
    tags: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise AlgebraError("empty carrier")
        if len(set(self.elements)) != n:
            raise AlgebraError("element names must be distinct")
        for label, table in (("add", self.add), ("mul", self.mul)):
            if len(table) != n * n:
                raise AlgebraError(f"{label} table has {len(table)} entries, expected {n * n}")
            for pos, v in enumerate(table):
                if not (isinstance(v, (int, np.integer)) and 0 <= v < n):
                    raise AlgebraError(
                        f"{label}[{pos // n}][{pos % n}] = {v!r} is not an index in [0, {n})")

    @classmethod
    def from_tables(cls, elements, add, mul, name=None, tags=None) -> FiniteSemiring:
        """Build from square (nested) tables; rejects non-square input."""
        elements = tuple(str(e) for e in elements)
        n = len(elements)
        flat = []
        for label, table in (("add", add), ("mul", mul)):
            rows = list(table)
            if len(rows) != n or any(len(r) != n for r in rows):
                raise AlgebraError(f"{label} table is not {n}x{n}")
            flat.append(tuple(int(v) for r in rows for v in r))
        return cls(elements, flat[0], flat[1], name, dict(tags or {}))

    @property
    def n(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteSemiring({self.name or '?'}, n={self.n})"

    @cached_property
    def _index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    def idx(self, x) -> int:
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < self.n:
                raise AlgebraError(f"element index {x} out of range")
            return int(x)
        try:
            return self._index[x]
        except KeyError:
            raise AlgebraError(f"{self.name or 'algebra'} has no element {x!r}") from None

    def plus(self, a: int, b: int) -> int:
        return self.add[a * self.n + b]

    def times(self, a: int, b: int) -> int:
        return self.mul[a * self.n + b]

    def add_rows(self) -> list:
        n = self.n
        return [list(self.add[i * n:(i + 1) * n]) for i in range(n)]

    def mul_rows(self) -> list:
        n = self.n
        return [list(self.mul[i * n:(i + 1) * n]) for i in range(n)]

    @cached_property
    def add_array(self) -> np.ndarray:
        return np.asarray(self.add, dtype=np.int64).reshape(self.n, self.n)

    @cached_property
    def mul_array(self) -> np.ndarray:
        return np.asarray(self.mul, dtype=np.int64).reshape(self.n, self.n)

    def same_tables(self, other: FiniteSemiring) -> bool:
        return (self.elements == other.elements and self.add == other.add
                and self.mul == other.mul)

    def renamed(self, name: str) -> FiniteSemiring:
        return FiniteSemiring(self.elements, self.add, self.mul, name, dict(self.tags))

    @cached_property
    def greatest(self) -> int | None:
        """Additive absorbing element (the top of the natural order), if any."""
        n, add = self.n, self.add
        for g in range(n):
            if all(add[g * n + x] == g for x in range(n)):
                return g
        return None

    @cached_property
    def mul_zero(self) -> int | None:
        n, mul = self.n, self.mul
        for z in range(n):
            if all(mul[z * n + x] == z and mul[x * n + z] == z for x in range(n)):
                return z
        return None


# -- axioms ---------------------------------------------------------------

LAWS = (
    "additive commutativity",
    "additive associativity",
    "additive idempotency",
    "multiplicative associativity",
    "left distributivity",
    "right distributivity",
)


@dataclass
class LawResult:
    law: str
    passed: bool
    counterexample: tuple | None = None  # element names


@dataclass
class AxiomReport:
    algebra: str | None
    results: list

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "ok": self.ok,
            "laws": [{"law": r.law, "passed": r.passed,
                      "counterexample": list(r.counterexample) if r.counterexample else None}
                     for r in self.results],
        }


def _first_violation_3(lhs_fn, rhs_fn, n):
    # chunk over the first variable to keep memory at n^2
    for x in range(n):
        lhs = lhs_fn(x)
        rhs = rhs_fn(x)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            y, z = bad[0]
            return (x, int(y), int(z))
    return None


def verify_ai_semiring(S: FiniteSemiring) -> AxiomReport:
    A, M, n = S.add_array, S.mul_array, S.n
    names = S.elements
    results = []

    def record(law, triple):
        ce = None if triple is None else tuple(names[i] for i in triple)
        results.append(LawResult(law, triple is None, ce))

    bad = np.argwhere(A != A.T)
    record(LAWS[0], None if not len(bad) else tuple(int(i) for i in bad[0]))

    record(LAWS[1], _first_violation_3(lambda x: A[A[x][:, None], np.arange(n)[None, :]],
                                       lambda x: A[x][A], n))
    diag = np.diagonal(A)
    bad = np.flatnonzero(diag != np.arange(n))
    record(LAWS[2], None if not len(bad) else (int(bad[0]),))

    record(LAWS[3], _first_violation_3(lambda x: M[M[x][:, None], np.arange(n)[None, :]],
                                       lambda x: M[x][M], n))
    # x(y+z) = xy + xz
    record(LAWS[4], _first_violation_3(lambda x: M[x][A],
                                       lambda x: A[M[x][:, None], M[x][None, :]], n))
    # (x+y)z = xz + yz, with x fixed: rows y, columns z
    record(LAWS[5], _first_violation_3(lambda x: M[A[x]],
                                       lambda x: A[M[x][None, :], M], n))
    return AxiomReport(S.name, results)


def require_ai(S: FiniteSemiring) -> None:
    rep = verify_ai_semiring(S)
    if not rep.ok:
        f = rep.failures[0]
        raise AlgebraError(f"{S.name or 'algebra'} is not an ai-semiring: "
                           f"{f.law} fails at {f.counterexample}")


def is_zero_cancellative(S: FiniteSemiring, zero: int | None = None) -> bool:
    """ab = ac != 0 implies b = c, and ba = ca != 0 implies b = c."""
    n, mul = S.n, S.mul
    if zero is None:
        zero = S.mul_zero
        if zero is None:
            return False
    for a in range(n):
        seen_r, seen_l = {}, {}
        for b in range(n):
            r = mul[a * n + b]
            if r != zero:
                if r in seen_r:
                    return False
                seen_r[r] = b
            l = mul[b * n + a]
            if l != zero:
                if l in seen_l:
                    return False
                seen_l[l] = b
    return True


def is_flat(S: FiniteSemiring) -> bool:
    zero = S.mul_zero
    if zero is None:
        return False
    n, add = S.n, S.add
    return all(add[a * n + b] == (a if a == b else zero) for a in range(n) for b in range(n))


# -- natural order ---------------------------------------------------------

@dataclass(frozen=True)
class NaturalOrder:
    elements: tuple
    relation: frozenset  # pairs (a, b) with a <= b
    greatest: int | None

    def leq(self, a: int, b: int) -> bool:
        return (a, b) in self.relation

    def covers(self) -> set:
        """Hasse diagram edges (a, b): a < b with nothing strictly between."""
        n = len(self.elements)
        lt = {(a, b) for (a, b) in self.relation if a != b}
        out = set()
        for a, b in lt:
            if not any((a, c) in lt and (c, b) in lt for c in range(n)):
                out.add((a, b))
        return out

    def named_covers(self) -> set:
        return {(self.elements[a], self.elements[b]) for a, b in self.covers()}

    def is_chain(self) -> bool:
        n = len(self.elements)
        return all(self.leq(a, b) or self.leq(b, a) for a in range(n) for b in range(n))

    def chain(self) -> list | None:
        if not self.is_chain():
            return None
        n = len(self.elements)
        below = sorted(range(n), key=lambda a: sum(1 for b in range(n) if self.leq(b, a)))
        return [self.elements[a] for a in below]


def natural_order(S: FiniteSemiring) -> NaturalOrder:
    require_ai(S)
    n, add = S.n, S.add
    rel = frozenset((a, b) for a in range(n) for b in range(n) if add[a * n + b] == b)
    return NaturalOrder(S.elements, rel, S.greatest)


# -- products, subalgebras, quotients --------------------------------------

def direct_product(factors, name: str | None = None) -> FiniteSemiring:
    factors = list(factors)
    if not factors:
        raise AlgebraError("direct product of an empty family")
    A = factors[0].add_array
    M = factors[0].mul_array
    for F in factors[1:]:
        m = F.n
        A = (A[:, None, :, None] * m + F.add_array[None, :, None, :]).reshape(A.shape[0] * m, -1)
        M = (M[:, None, :, None] * m + F.mul_array[None, :, None, :]).reshape(M.shape[0] * m, -1)
    names = tuple("(" + ",".join(t) + ")" for t in itertools.product(*(F.elements for F in factors)))
    if name is None:
        name = " x ".join(F.name or "?" for F in factors)
    return FiniteSemiring(names, tuple(A.ravel().tolist()), tuple(M.ravel().tolist()), name,
                          {"origin": "direct_product",
                           "factors": [F.name for F in factors]})


def power(S: FiniteSemiring, k: int) -> FiniteSemiring:
    return direct_product([S] * k, name=f"{S.name}^{k}")


@dataclass
class ElementMap:
    source: FiniteSemiring
    target: FiniteSemiring
    images: tuple
    kind: str = "map"  # map | homomorphism | embedding | isomorphism | quotient

    def __post_init__(self):
        self.images = tuple(int(i) for i in self.images)
        if len(self.images) != self.source.n:
            raise AlgebraError("element map must be total on the source")
        if any(not 0 <= i < self.target.n for i in self.images):
            raise AlgebraError("element map hits an index outside the target")

    def __call__(self, x) -> int:
        return self.images[self.source.idx(x)]

    def is_homomorphism(self) -> bool:
        S, T, f = self.source, self.target, self.images
        n = S.n
        for a in range(n):
            fa = f[a]
            for b in range(n):
                if f[S.add[a * n + b]] != T.plus(fa, f[b]):
                    return False
                if f[S.mul[a * n + b]] != T.times(fa, f[b]):
                    return False
        return True

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.n

    def recheck(self) -> bool:
        if self.kind == "map":
            return True
        if not self.is_homomorphism():
            return False
        if self.kind == "embedding":
            return self.is_injective()
        if self.kind == "isomorphism":
            return self.is_injective() and self.is_surjective()
        if self.kind == "quotient":
            return self.is_surjective()
        return True

    def named(self) -> dict:
        return {self.source.elements[i]: self.target.elements[j] for i, j in enumerate(self.images)}

    def to_dict(self) -> dict:
        return {"kind": self.kind, "source": self.source.name, "target": self.target.name,
                "map": self.named()}


def generate_subalgebra(S: FiniteSemiring, generators, name: str | None = None):
    """Least subset closed under + and * containing ``generators``.

    Returns ``(sub, inclusion)``; sub's elements keep the order they have in S.
    """
    gens = [S.idx(g) for g in generators]
    if not gens:
        raise AlgebraError("empty generating set")
    n, add, mul = S.n, S.add, S.mul
    inside = [False] * n
    members = []
    work = []
    for g in gens:
        if not inside[g]:
            inside[g] = True
            members.append(g)
            work.append(g)
    while work:
        x = work.pop()
        for y in list(members):
            for r in (add[x * n + y], add[y * n + x], mul[x * n + y], mul[y * n + x]):
                if not inside[r]:
                    inside[r] = True
                    members.append(r)
                    work.append(r)
    carrier = sorted(members)
    sub = restrict(S, carrier, name or f"<{','.join(S.elements[g] for g in gens)}>")
    sub.tags.update({"origin": "generate_subalgebra", "parent": S.name,
                     "generators": [S.elements[g] for g in gens]})
    return sub, ElementMap(sub, S, tuple(carrier), "embedding")


def restrict(S: FiniteSemiring, carrier, name=None) -> FiniteSemiring:
    """Restrict the tables to a closed subset (closure is the caller's duty)."""
    carrier = list(carrier)
    pos = {x: i for i, x in enumerate(carrier)}
    n = S.n
    try:
        add = tuple(pos[S.add[a * n + b]] for a in carrier for b in carrier)
        mul = tuple(pos[S.mul[a * n + b]] for a in carrier for b in carrier)
    except KeyError as e:
        raise AlgebraError(f"subset is not closed: produces {S.elements[e.args[0]]}") from None
    return FiniteSemiring(tuple(S.elements[x] for x in carrier), add, mul, name)


def is_closed(S: FiniteSemiring, subset) -> bool:
    sub = set(subset)
    n = S.n
    return all(S.add[a * n + b] in sub and S.mul[a * n + b] in sub for a in sub for b in sub)


@dataclass
class IdealFilter:
    algebra: FiniteSemiring
    members: frozenset

    def __post_init__(self):
        self.members = frozenset(self.algebra.idx(x) for x in self.members)

    def violations(self) -> list:
        """List of (condition, witness) pairs; empty iff J is a valid ideal filter."""
        S, J = self.algebra, self.members
        n = S.n
        out = []
        if not J:
            out.append(("nonempty", None))
        if len(J) == n:
            out.append(("proper", None))
        for j in sorted(J):
            for s in range(n):
                if S.mul[j * n + s] not in J:
                    out.append(("absorption", (S.elements[j], S.elements[s])))
                    break
                if S.mul[s * n + j] not in J:
                    out.append(("absorption", (S.elements[s], S.elements[j])))
                    break
                # j <= s means j + s = s
                if S.add[j * n + s] == s and s not in J:
                    out.append(("filter", (S.elements[j], S.elements[s])))
                    break
        return out

    def validate(self) -> None:
        bad = self.violations()
        if bad:
            cond, witness = bad[0]
            raise AlgebraError(f"J is not an ideal filter: {cond} fails at {witness}")


def ideal_quotient(S: FiniteSemiring, J, name: str | None = None, class_name: str = "[J]"):
    """Collapse the ideal filter J to one fresh element ``[J]`` (placed last)."""
    if not isinstance(J, IdealFilter):
        J = IdealFilter(S, frozenset(J))
    J.validate()
    keep = [x for x in range(S.n) if x not in J.members]
    cls = len(keep)
    img = [cls] * S.n
    for i, x in enumerate(keep):
        img[x] = i
    if class_name in (S.elements[x] for x in keep):
        raise AlgebraError(f"class name {class_name!r} clashes with an element")
    n = S.n
    rep = next(iter(sorted(J.members)))
    carrier = keep + [rep]
    add = tuple(img[S.add[a * n + b]] for a in carrier for b in carrier)
    mul = tuple(img[S.mul[a * n + b]] for a in carrier for b in carrier)
    Q = FiniteSemiring(tuple(S.elements[x] for x in keep) + (class_name,), add, mul,
                       name or f"{S.name}/J",
                       {"origin": "ideal_quotient", "parent": S.name, "collapsed": len(J.members)})
    return Q, ElementMap(S, Q, tuple(img), "quotient")


def power_sets(S: FiniteSemiring, base, upto: int) -> list:
    """[A^1, A^2, ..., A^upto] for A = base, with A^(j+1) = {x*y : x in A^j, y in A}."""
    base = frozenset(S.idx(x) for x in base)
    n, mul = S.n, S.mul
    out = [base]
    cur = base
    for _ in range(upto - 1):
        cur = frozenset(mul[x * n + y] for x in cur for y in base)
        out.append(cur)
    return out


# -- isomorphism -----------------------------------------------------------

def _element_invariants(S: FiniteSemiring, rounds: int = 2) -> list:
    n, add, mul = S.n, S.add, S.mul
    inv = []
    for x in range(n):
        xx = mul[x * n + x]
        inv.append((
            xx == x,
            mul[xx * n + x] == x,
            sum(1 for y in range(n) if add[y * n + x] == x),  # elements below
            sum(1 for y in range(n) if add[x * n + y] == y),  # elements above
            sum(1 for y in range(n) if mul[x * n + y] == x),
            sum(1 for y in range(n) if mul[y * n + x] == x),
            sum(1 for y in range(n) if mul[x * n + y] == y),
            sum(1 for y in range(n) if mul[y * n + x] == y),
            len({mul[x * n + y] for y in range(n)}),
            len({mul[y * n + x] for y in range(n)}),
        ))
    # relabel to small ints so refinement keys stay comparable across algebras
    for _ in range(rounds):
        inv = [(inv[x],
                tuple(sorted((inv[mul[x * n + y]], inv[y]) for y in range(n))),
                tuple(sorted((inv[mul[y * n + x]], inv[y]) for y in range(n))),
                tuple(sorted((inv[add[x * n + y]], inv[y]) for y in range(n))))
               for x in range(n)]
        inv = [hash(v) for v in inv]
    return inv


@dataclass
class IsoResult:
    found: bool
    map: ElementMap | None
    nodes: int
    reason: str  # "search", "cardinality", "invariants"

    def to_dict(self) -> dict:
        return {"found": self.found, "nodes": self.nodes, "reason": self.reason,
                "map": self.map.named() if self.map else None}


def extend_by_closure(S: FiniteSemiring, T: FiniteSemiring, partial: dict,
                      allowed=None) -> dict | None:
    """Close a partial map under both operations.

    Returns the extended injective map, or None if some forced image
    clashes with an earlier image or falls outside ``allowed[x]``.
    """
    f = dict(partial)
    used = {}
    for x, y in f.items():
        if y in used and used[y] != x:
            return None
        used[y] = x
    n, m = S.n, T.n
    sa, sm, ta, tm = S.add, S.mul, T.add, T.mul
    done = []
    queue = list(f)
    while queue:
        x = queue.pop()
        done.append(x)
        fx = f[x]
        for y in done:
            fy = f[y]
            for r, img in ((sa[x * n + y], ta[fx * m + fy]), (sa[y * n + x], ta[fy * m + fx]),
                           (sm[x * n + y], tm[fx * m + fy]), (sm[y * n + x], tm[fy * m + fx])):
                cur = f.get(r)
                if cur is None:
                    if img in used or (allowed is not None and img not in allowed[r]):
                        return None
                    f[r] = img
                    used[img] = r
                    queue.append(r)
                elif cur != img:
                    return None
    return f


def find_isomorphism(S: FiniteSemiring, T: FiniteSemiring) -> IsoResult:
    """Backtracking over bijections, pruned by element invariants.

    Every assignment is closed under + and * before branching again, so a
    generating set usually determines the whole map.  A returned map is
    re-checked by brute force.
    """
    if S.n != T.n:
        return IsoResult(False, None, 0, "cardinality")
    n = S.n
    inv_s = _element_invariants(S)
    inv_t = _element_invariants(T)
    if sorted(inv_s) != sorted(inv_t):
        return IsoResult(False, None, 0, "invariants")
    cand = {x: frozenset(y for y in range(n) if inv_t[y] == inv_s[x]) for x in range(n)}
    nodes = 0

    def search(f):
        nonlocal nodes
        if len(f) == n:
            return f
        x = min((x for x in range(n) if x not in f), key=lambda x: (len(cand[x]), x))
        used = set(f.values())
        for y in sorted(cand[x]):
            if y in used:
                continue
            nodes += 1
            g = dict(f)
            g[x] = y
            g = extend_by_closure(S, T, g, cand)
            if g is None:
                continue
            res = search(g)
            if res is not None:
                return res
        return None

    f = search({})
    if f is None:
        return IsoResult(False, None, nodes, "search")
    emap = ElementMap(S, T, tuple(f[x] for x in range(n)), "isomorphism")
    if not emap.recheck():
        raise AssertionError("isomorphism search returned a map that fails re-checking")
    return IsoResult(True, emap, nodes, "search")


# -- named algebras --------------------------------------------------------

def _tables(elements, add_rows, mul_rows, name):
    return FiniteSemiring.from_tables(elements, add_rows, mul_rows, name)


def _s7():
    # element order 0, a, 1
    return _tables(("0", "a", "1"),
                   [[0, 0, 0], [0, 1, 0], [0, 0, 2]],
                   [[0, 0, 0], [0, 0, 1], [0, 1, 2]], "S_7")


def _s53():
    return _tables(("0", "a", "1"),
                   [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
                   [[0, 0, 0], [0, 0, 1], [0, 1, 2]], "S_53")


_B21_MATRICES = {
    "0": ((0, 0), (0, 0)),
    "1": ((1, 0), (0, 1)),
    "e12": ((0, 1), (0, 0)),
    "e21": ((0, 0), (1, 0)),
    "e11": ((1, 0), (0, 0)),
    "e22": ((0, 0), (0, 1)),
}

# Hasse diagram of the additive order: lower -> upper
B21_HASSE = (("1", "e11"), ("1", "e22"),
             ("e12", "0"), ("e11", "0"), ("e22", "0"), ("e21", "0"))


def _matmul(a, b):
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(2)) for j in range(2)) for i in range(2))


def _joins_from_hasse(elements, hasse):
    idx = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    le = [[i == j for j in range(n)] for i in range(n)]
    for lo, hi in hasse:
        le[idx[lo]][idx[hi]] = True
    for t in range(n):  # transitive closure
        for i in range(n):
            if le[i][t]:
                for j in range(n):
                    if le[t][j]:
                        le[i][j] = True
    table = []
    for a in range(n):
        row = []
        for b in range(n):
            ups = [c for c in range(n) if le[a][c] and le[b][c]]
            least = [c for c in ups if all(le[c][d] for d in ups)]
            if len(least) != 1:
                raise AlgebraError(f"no join for {elements[a]}, {elements[b]}")
            row.append(least[0])
        table.append(row)
    return table


def _b21():
    elements = ("0", "1", "e12", "e21", "e11", "e22")
    by_matrix = {v: k for k, v in _B21_MATRICES.items()}
    idx = {e: i for i, e in enumerate(elements)}
    mul = [[idx[by_matrix[_matmul(_B21_MATRICES[a], _B21_MATRICES[b])]] for b in elements]
           for a in elements]
    add = _joins_from_hasse(elements, B21_HASSE)
    S = _tables(elements, add, mul, "B_2^1")
    S.tags["addition"] = "joins of the Hasse order (derived, not a printed table)"
    return S


def _b0():
    B = _b21()
    return restrict(B, [B.idx(e) for e in ("0", "e11", "e12", "e22")], "B_0")


def _sigma7():
    B = _b21()
    return adjoin_bottom_zero(B, "bot", "Sigma_7")


def _m2():
    return _tables(("0", "1"), [[0, 0], [0, 1]], [[0, 0], [0, 1]], "M_2")


def adjoin_bottom_zero(S: FiniteSemiring, new: str, name: str) -> FiniteSemiring:
    """Adjoin an additive identity that is also a multiplicative zero."""
    n = S.n
    b = n
    add, mul = [], []
    for x in range(n + 1):
        for y in range(n + 1):
            if x == b:
                add.append(y)
                mul.append(b)
            elif y == b:
                add.append(x)
                mul.append(b)
            else:
                add.append(S.add[x * n + y])
                mul.append(S.mul[x * n + y])
    return FiniteSemiring(S.elements + (new,), tuple(add), tuple(mul), name)


_BUILTINS = {
    "S_7": _s7,
    "S_53": _s53,
    "B_0": _b0,
    "B_2^1": _b21,
    "Sigma_7": _sigma7,
    "M_2": _m2,
}

_ALIASES = {
    "S7": "S_7", "S53": "S_53", "B0": "B_0", "B21": "B_2^1", "B_21": "B_2^1",
    "B2^1": "B_2^1", "Σ_7": "Sigma_7", "Σ7": "Sigma_7", "Sigma7": "Sigma_7", "M2": "M_2",
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin(name: str) -> FiniteSemiring:
    key = _ALIASES.get(name, name)
    try:
        S = _BUILTINS[key]()
    except KeyError:
        raise AlgebraError(
            f"unknown builtin {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    S.tags.setdefault("origin", "builtin")
    return S


def trivial_algebra(name: str = "T") -> FiniteSemiring:
    return FiniteSemiring(("0",), (0,), (0,), name)


# -- file format -----------------------------------------------------------

def to_document(S: FiniteSemiring) -> dict:
    doc = {"version": FORMAT_VERSION}
    if S.name is not None:
        doc["name"] = S.name
    doc["elements"] = list(S.elements)
    doc["add"] = S.add_rows()
    doc["mul"] = S.mul_rows()
    return doc


def dumps_algebra(S: FiniteSemiring) -> str:
    return json.dumps(to_document(S), separators=(",", ":"), ensure_ascii=False) + "\n"


def from_document(doc: dict) -> FiniteSemiring:
    if not isinstance(doc, dict):
        raise AlgebraError("algebra document must be a JSON object")
    version = doc.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise AlgebraError(f"unsupported algebra format version {version!r}")
    for key in ("elements", "add", "mul"):
        if key not in doc:
            raise AlgebraError(f"algebra document lacks {key!r}")
    if not all(isinstance(e, str) for e in doc["elements"]):
        raise AlgebraError("element names must be strings")
    for key in ("add", "mul"):
        if not all(isinstance(v, int) and not isinstance(v, bool)
                   for row in doc[key] for v in row):
            raise AlgebraError(f"{key} entries must be integers")
    return FiniteSemiring.from_tables(doc["elements"], doc["add"], doc["mul"], doc.get("name"))


def loads_algebra(text: str) -> FiniteSemiring:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise AlgebraError(f"invalid JSON: {e}") from None
    return from_document(doc)


def load_algebra(path) -> FiniteSemiring:
    with open(path, encoding="utf-8") as fh:
        return loads_algebra(fh.read())


def dump_algebra(S: FiniteSemiring, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_algebra(S))
