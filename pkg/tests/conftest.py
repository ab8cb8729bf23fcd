import itertools

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

BUILTINS = ("S_7", "S_53", "B_0", "B_2^1", "Sigma_7", "M_2")
SMALL_BUILTINS = ("S_7", "S_53", "B_0", "M_2")
VARIABLES = ("x", "y", "z")


def brute_force_laws(elements, add, mul):
    """Pure-Python law check over dict tables; returns the set of failing law names."""
    E = elements
    bad = set()
    for a, b in itertools.product(E, repeat=2):
        if add[a, b] != add[b, a]:
            bad.add("additive commutativity")
    for a in E:
        if add[a, a] != a:
            bad.add("additive idempotency")
    for a, b, c in itertools.product(E, repeat=3):
        if add[add[a, b], c] != add[a, add[b, c]]:
            bad.add("additive associativity")
        if mul[mul[a, b], c] != mul[a, mul[b, c]]:
            bad.add("multiplicative associativity")
        if mul[a, add[b, c]] != add[mul[a, b], mul[a, c]]:
            bad.add("left distributivity")
        if mul[add[a, b], c] != add[mul[a, c], mul[b, c]]:
            bad.add("right distributivity")
    return bad


def dict_tables(S):
    n = S.n
    add = {(S.elements[i], S.elements[j]): S.elements[S.add[i * n + j]]
           for i in range(n) for j in range(n)}
    mul = {(S.elements[i], S.elements[j]): S.elements[S.mul[i * n + j]]
           for i in range(n) for j in range(n)}
    return list(S.elements), add, mul


words_st = st.lists(st.sampled_from(VARIABLES), min_size=1, max_size=4).map(tuple)
terms_st = st.lists(words_st, min_size=1, max_size=4)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
