"""Command-line workbench: ``semiring-lab <group> <command> ...``.

Exit codes: 0 the claim holds or the object was built, 1 a counterexample
was found, 2 inconclusive (budget exhausted), 3 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .core import (AlgebraError, FiniteSemiring, IdealFilter, builtin, direct_product,
                   find_isomorphism, generate_subalgebra, ideal_quotient, load_algebra,
                   natural_order, to_document, verify_ai_semiring, dumps_algebra)
from .hypergraphs import (DEFAULT_BUDGET_MS, DEFAULT_NODE_BUDGET, HypergraphError, block_hom,
                          hom_exists_oracle, hom_search, hypergraph_terms, kneser, vertex_name)
from .report import FAIL, INCONCLUSIVE, PASS, Report
from .terms import (COUNTEREXAMPLE, DEFAULT_BUDGET, HOLDS, MINIMAL, TermSyntaxError,
                    UnassignedVariable, format_identity, format_term, is_isoterm_bounded,
                    parse_identity, parse_term, preceq, satisfies)
from .words import (DIVISIBILITY, FLAT, WordSemiringSpec, s_infinity, truncated_max_plus,
                    word_semiring)

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3
BUDGET_ENV = "SEMIRING_LAB_BUDGET_MS"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    budget_ms: int = DEFAULT_BUDGET_MS
    node_budget: int = DEFAULT_NODE_BUDGET
    seed: int = 0
    json: bool = False
    max_len: int = 6
    orderings: str = "single"
    eval_budget: int = DEFAULT_BUDGET

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        budget = args.budget_ms
        if budget is None:
            env = os.environ.get(BUDGET_ENV)
            if env is not None:
                try:
                    budget = int(env)
                except ValueError:
                    raise InputError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
        cfg = cls(budget_ms=budget if budget is not None else DEFAULT_BUDGET_MS,
                  node_budget=args.nodes if args.nodes is not None else DEFAULT_NODE_BUDGET,
                  seed=args.seed, json=args.json, max_len=args.max_len,
                  orderings=args.orderings)
        if cfg.budget_ms <= 0 or cfg.node_budget <= 0:
            raise InputError("budgets must be positive")
        return cfg


class _AlgebraRef(argparse.Action):
    """--builtin and --file append to one ordered list of algebra sources."""

    def __call__(self, parser, namespace, value, option_string=None):
        refs = list(getattr(namespace, "algebras", None) or [])
        refs.append((self.dest, value))
        namespace.algebras = refs


def _resolve(ref) -> FiniteSemiring:
    kind, value = ref
    if kind == "builtin":
        return builtin(value)
    try:
        return load_algebra(value)
    except OSError as e:
        raise InputError(f"cannot read {value}: {e.strerror}") from None


def _algebras(args, count: int | None = None, at_least: int = 1) -> list:
    refs = getattr(args, "algebras", None) or []
    if count is not None and len(refs) != count:
        raise InputError(f"expected {count} algebra(s) via --builtin/--file, got {len(refs)}")
    if len(refs) < at_least:
        raise InputError("an algebra is required (--builtin NAME or --file PATH)")
    return [_resolve(r) for r in refs]


# -- output ------------------------------------------------------------------

def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.json:
        print(json.dumps(payload, separators=(",", ":"), ensure_ascii=False, default=str))
    else:
        print(text)


def _emit_report(cfg: RunConfig, rep: Report) -> None:
    _emit(cfg, rep.to_dict(), rep.to_text())


def _verdict_code(verdict: str) -> int:
    return {PASS: EXIT_OK, FAIL: EXIT_COUNTEREXAMPLE, INCONCLUSIVE: EXIT_INCONCLUSIVE}[verdict]


def _emit_algebra(cfg: RunConfig, S: FiniteSemiring, out: str | None, extra: dict | None = None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(dumps_algebra(S))
    payload = {"algebra": to_document(S), **(extra or {})}
    lines = [f"{S.name}: {S.n} elements", "  elements: " + " ".join(S.elements)]
    for k, v in (extra or {}).items():
        lines.append(f"  {k}: {v}")
    if out:
        lines.append(f"  written to {out}")
    _emit(cfg, payload, "\n".join(lines))


def _check_result(cfg: RunConfig, S: FiniteSemiring, label: str, res) -> int:
    d = {"claim": label, "algebra": S.name, **res.to_dict(S)}
    text = f"{label} in {S.name}: {res.status}"
    if res.assignment is not None:
        text += "\n  counterexample: " + ", ".join(
            f"{v}={x}" for v, x in res.named_assignment(S).items())
        text += f"\n  lhs={S.elements[res.lhs_value]} rhs={S.elements[res.rhs_value]}"
    _emit(cfg, d, text)
    if res.status == HOLDS:
        return EXIT_OK
    if res.status == COUNTEREXAMPLE:
        return EXIT_COUNTEREXAMPLE
    return EXIT_INCONCLUSIVE


# -- alg -----------------------------------------------------------------------

def cmd_alg_verify(args, cfg):
    code = EXIT_OK
    docs = []
    lines = []
    for S in _algebras(args):
        rep = verify_ai_semiring(S)
        docs.append(rep.to_dict())
        lines.append(f"{S.name}: {'ai-semiring' if rep.ok else 'NOT an ai-semiring'}")
        for f in rep.failures:
            lines.append(f"  {f.law} fails at {f.counterexample}")
        if not rep.ok:
            code = EXIT_COUNTEREXAMPLE
    _emit(cfg, {"results": docs}, "\n".join(lines))
    return code


def cmd_alg_order(args, cfg):
    (S,) = _algebras(args, 1)
    o = natural_order(S)
    covers = sorted(o.named_covers())
    chain = o.chain()
    greatest = o.elements[o.greatest] if o.greatest is not None else None
    text = [f"natural order of {S.name}", "  covers: " + ", ".join(f"{a}<{b}" for a, b in covers),
            f"  greatest: {greatest}"]
    if chain:
        text.append("  chain: " + " < ".join(chain))
    _emit(cfg, {"algebra": S.name, "covers": covers, "greatest": greatest, "chain": chain},
          "\n".join(text))
    return EXIT_OK


def cmd_alg_product(args, cfg):
    P = direct_product(_algebras(args, at_least=1))
    _emit_algebra(cfg, P, args.out)
    return EXIT_OK


def cmd_alg_subalg(args, cfg):
    (S,) = _algebras(args, 1)
    sub, inc = generate_subalgebra(S, args.generators)
    _emit_algebra(cfg, sub, args.out, {"generators": args.generators})
    return EXIT_OK


def cmd_alg_quotient(args, cfg):
    (S,) = _algebras(args, 1)
    J = IdealFilter(S, frozenset(args.members))
    bad = J.violations()
    if bad:
        cond, witness = bad[0]
        _emit(cfg, {"algebra": S.name, "valid": False, "condition": cond, "witness": witness},
              f"J is not an ideal filter of {S.name}: {cond} fails at {witness}")
        return EXIT_COUNTEREXAMPLE
    Q, qmap = ideal_quotient(S, J)
    _emit_algebra(cfg, Q, args.out, {"quotient_map": qmap.named()})
    return EXIT_OK


def cmd_alg_iso(args, cfg):
    S, T = _algebras(args, 2)
    res = find_isomorphism(S, T)
    text = f"{S.name} {'~=' if res.found else 'not ~='} {T.name} ({res.reason}, {res.nodes} nodes)"
    if res.found:
        text += "\n  map: " + ", ".join(f"{a}->{b}" for a, b in res.map.named().items())
    _emit(cfg, {"source": S.name, "target": T.name, **res.to_dict()}, text)
    return EXIT_OK if res.found else EXIT_COUNTEREXAMPLE


# -- term ------------------------------------------------------------------------

def cmd_term_parse(args, cfg):
    text = args.text
    if "=" in text:
        ident = parse_identity(text)
        canon = format_identity(ident)
        d = {"kind": "identity", "canonical": canon, "variables": ident.variables,
             "regular": ident.lhs.content == ident.rhs.content}
    else:
        t = parse_term(text)
        canon = format_term(t)
        d = {"kind": "term", "canonical": canon, "words": [str(w) for w in t.sorted_words()]}
    _emit(cfg, d, canon)
    return EXIT_OK


def cmd_term_satisfies(args, cfg):
    (S,) = _algebras(args, 1)
    ident = parse_identity(args.identity)
    return _check_result(cfg, S, format_identity(ident), satisfies(S, ident, cfg.eval_budget))


def cmd_term_preceq(args, cfg):
    (S,) = _algebras(args, 1)
    u, v = parse_term(args.u), parse_term(args.v)
    return _check_result(cfg, S, f"{format_term(u)} <= {format_term(v)}",
                         preceq(S, u, v, cfg.eval_budget))


def cmd_term_isoterm(args, cfg):
    (S,) = _algebras(args, 1)
    res = is_isoterm_bounded(S, args.word, cfg.max_len, cfg.eval_budget)
    text = f"{res.word} in {S.name}: {res.status} (length <= {res.max_len})"
    if res.violating is not None:
        text += f"\n  {res.violating} <= {res.word}"
    _emit(cfg, {"algebra": S.name, **res.to_dict()}, text)
    if res.status == MINIMAL:
        return EXIT_OK
    return EXIT_COUNTEREXAMPLE if res.violating is not None else EXIT_INCONCLUSIVE


# -- word --------------------------------------------------------------------------

def _word_cmd(args, cfg, order):
    words = [w for w in args.words.split(",") if w.strip()]
    spec = WordSemiringSpec(tuple(words), commutative=args.commutative or order == DIVISIBILITY,
                            with_identity=args.identity, order=order)
    _emit_algebra(cfg, word_semiring(spec), args.out)
    return EXIT_OK


def cmd_word_flat(args, cfg):
    return _word_cmd(args, cfg, FLAT)


def cmd_word_divis(args, cfg):
    return _word_cmd(args, cfg, DIVISIBILITY)


def cmd_word_maxplus(args, cfg):
    _emit_algebra(cfg, truncated_max_plus(args.k), args.out)
    return EXIT_OK


def cmd_word_sinfty(args, cfg):
    (S,) = _algebras(args, 1)
    _emit_algebra(cfg, s_infinity(S), args.out)
    return EXIT_OK


# -- kneser ----------------------------------------------------------------------

def cmd_kneser_build(args, cfg):
    K = kneser(args.k, args.m)
    h = K.hypergraph
    d = {"k": args.k, "m": args.m, "vertices": len(h.vertices), "hyperedges": len(h.hyperedges)}
    text = f"H_{args.k},{args.m}: {d['vertices']} vertices, {d['hyperedges']} hyperedges"
    if args.list:
        d["vertex_names"] = [vertex_name(mk) for mk in K.masks]
        text += "\n  " + " ".join(d["vertex_names"])
    _emit(cfg, d, text)
    return EXIT_OK


def cmd_kneser_terms(args, cfg):
    K = kneser(args.k, args.m)
    t, q = hypergraph_terms(K, cfg.orderings)
    d = {"k": args.k, "m": args.m, "orderings": cfg.orderings, "words_in_t": len(t.words),
         "q": str(q), "t": format_term(t)}
    text = f"t: {len(t.words)} words ({cfg.orderings} ordering)\nq: {q}"
    if args.show:
        text += "\nt = " + format_term(t)
    _emit(cfg, d, text)
    return EXIT_OK


def _emit_hom(cfg, cert, src, tgt, extra=None):
    d = cert.to_dict(src, tgt)
    d.update(extra or {})
    text = (f"Hom(H_{cert.source[0]},{cert.source[1]}, H_{cert.target[0]},{cert.target[1]}): "
            f"{cert.kind} ({cert.method}, {cert.nodes} nodes, {cert.elapsed_ms:.1f} ms)")
    for k, v in (extra or {}).items():
        text += f"\n  {k}: {v}"
    _emit(cfg, d, text)


def cmd_kneser_hom(args, cfg):
    src, tgt = kneser(args.k, args.m), kneser(args.k, args.n)
    cert = hom_search(src, tgt, cfg.budget_ms, cfg.node_budget, symmetry=not args.no_symmetry)
    _emit_hom(cfg, cert, src, tgt, {"oracle": hom_exists_oracle(args.m, args.n)})
    return EXIT_INCONCLUSIVE if cert.kind == "timeout" else EXIT_OK


def cmd_kneser_blockhom(args, cfg):
    cert = block_hom(args.k, args.m, args.n)
    _emit_hom(cfg, cert, kneser(args.k, args.m), kneser(args.k, args.n))
    return EXIT_OK


# -- exp ------------------------------------------------------------------------

def cmd_exp_akp(args, cfg):
    from .experiments import build_A, verify_power_structure
    inst = build_A(args.k, args.p)
    rep = verify_power_structure(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps_algebra(inst.algebra))
        rep.notes.append(f"algebra written to {args.out}")
    _emit_report(cfg, rep)
    return _verdict_code(rep.verdict)


def cmd_exp_sigma(args, cfg):
    from .experiments import sigma
    sig = sigma(args.k, args.q, cfg.orderings)
    d = {"k": args.k, "q": args.q, "orderings": cfg.orderings,
         "variables": len(sig.variables), "words_in_t": len(sig.t.words), "q_word": str(sig.q_word)}
    text = (f"sigma_{args.k},{args.q}: t + q = t with {d['words_in_t']} words in t over "
            f"{d['variables']} variables\n  q = {sig.q_word}")
    if args.show:
        d["identity"] = format_identity(sig.identity)
        text += "\n  " + d["identity"]
    _emit(cfg, d, text)
    return EXIT_OK


def cmd_exp_witness(args, cfg):
    from .experiments import build_A, witness_failure
    rep = witness_failure(build_A(args.k, args.q), cfg.orderings)
    _emit_report(cfg, rep)
    # the claim is a failure of sigma, so a passing report is a counterexample
    return EXIT_COUNTEREXAMPLE if rep.passed else _verdict_code(rep.verdict)


def cmd_exp_reduce(args, cfg):
    from .experiments import COUNTEREXAMPLE as CE, SATISFIED, build_A, reduction_outcome, \
        reduction_satisfies, sigma
    rep = reduction_satisfies(build_A(args.k, args.p), sigma(args.k, args.q, cfg.orderings),
                              cfg.budget_ms, cfg.node_budget, symmetry=not args.no_symmetry)
    _emit_report(cfg, rep)
    if rep.verdict == FAIL:
        return EXIT_COUNTEREXAMPLE
    outcome = reduction_outcome(rep)
    return {SATISFIED: EXIT_OK, CE: EXIT_COUNTEREXAMPLE}.get(outcome, EXIT_INCONCLUSIVE)


def cmd_exp_reconstruct(args, cfg):
    from .experiments import reconstruct_Sc_star
    rep = reconstruct_Sc_star(args.n)
    _emit_report(cfg, rep)
    return _verdict_code(rep.verdict)


def cmd_exp_embed(args, cfg):
    from .experiments import embed_Sc_star_in_A
    rep = embed_Sc_star_in_A(args.k, args.p)
    _emit_report(cfg, rep)
    return _verdict_code(rep.verdict)


def cmd_exp_b0(args, cfg):
    from .experiments import b0_checks
    rep = b0_checks(isoterm_len=cfg.max_len)
    _emit_report(cfg, rep)
    return _verdict_code(rep.verdict)


def cmd_exp_maxplus(args, cfg):
    from .words import subdirect_maxplus_check
    rep = subdirect_maxplus_check(args.K)
    _emit_report(cfg, rep)
    return _verdict_code(rep.verdict)


def cmd_exp_regularize(args, cfg):
    from .experiments import regularize
    reps = [regularize(S, args.count, cfg.seed) for S in _algebras(args)]
    _emit(cfg, {"reports": [r.to_dict() for r in reps]}, "\n".join(r.to_text() for r in reps))
    return max(_verdict_code(r.verdict) for r in reps)


def cmd_report_all(args, cfg):
    from .acceptance import run_criterion, CRITERIA
    numbers = args.only or sorted(CRITERIA)
    results = []
    for n in numbers:
        if n not in CRITERIA:
            raise InputError(f"no criterion {n}")
        r = run_criterion(n)
        results.append(r)
        if not cfg.json:
            print(r.line(), flush=True)
    ok = all(r.ok for r in results)
    if cfg.json:
        print(json.dumps({"pass": ok, "criteria": [r.to_dict() for r in results]},
                         separators=(",", ":"), default=str))
    else:
        print(f"{sum(r.ok for r in results)}/{len(results)} criteria pass")
    return EXIT_OK if ok else EXIT_COUNTEREXAMPLE


# -- parser --------------------------------------------------------------------------

def _common(p):
    p.add_argument("--builtin", action=_AlgebraRef, metavar="NAME", help="named algebra")
    p.add_argument("--file", action=_AlgebraRef, metavar="PATH", help="algebra JSON file")
    p.add_argument("--json", action="store_true", help="single-line JSON output")
    p.add_argument("--budget-ms", type=int, default=None,
                   help=f"time budget (default ${BUDGET_ENV} or {DEFAULT_BUDGET_MS})")
    p.add_argument("--nodes", type=int, default=None, help="search node budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-len", type=int, default=6, help="isoterm word length bound")
    p.add_argument("--orderings", choices=("single", "all"), default="single")
    p.add_argument("--out", default=None, help="write the built algebra here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semiring-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", metavar="GROUP", parser_class=_Parser)
    groups.required = True

    def group(name, help_):
        g = groups.add_parser(name, help=help_)
        sub = g.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
        sub.required = True
        return sub

    def command(sub, name, fn, help_, *positionals):
        p = sub.add_parser(name, help=help_)
        for args, kwargs in positionals:
            p.add_argument(*args, **kwargs)
        _common(p)
        p.set_defaults(func=fn)
        return p

    pos = lambda name, **kw: ((name,), kw)  # noqa: E731
    flag = lambda name, **kw: ((name,), {"action": "store_true", **kw})  # noqa: E731

    alg = group("alg", "finite algebras")
    command(alg, "verify", cmd_alg_verify, "check the ai-semiring axioms")
    command(alg, "order", cmd_alg_order, "natural order")
    command(alg, "product", cmd_alg_product, "direct product of the given algebras")
    command(alg, "subalg", cmd_alg_subalg, "generated subalgebra",
            pos("generators", nargs="+"))
    command(alg, "quotient", cmd_alg_quotient, "collapse an ideal filter", pos("members", nargs="+"))
    command(alg, "iso", cmd_alg_iso, "isomorphism search between two algebras")

    term = group("term", "terms and identities")
    command(term, "parse", cmd_term_parse, "canonical form", pos("text"))
    command(term, "satisfies", cmd_term_satisfies, "exhaustive identity check", pos("identity"))
    command(term, "preceq", cmd_term_preceq, "check u + v = v", pos("u"), pos("v"))
    command(term, "isoterm", cmd_term_isoterm, "bounded isoterm check", pos("word"))

    word = group("word", "word semirings")
    for name, fn, help_ in (("flat", cmd_word_flat, "S(W), M(W), S_c(W), M_c(W)"),
                            ("divis", cmd_word_divis, "S_c*(W), M_c*(W)")):
        command(word, name, fn, help_, pos("words", help="comma-separated words, e.g. a1*a2,b^2"),
                flag("--commutative"), flag("--identity", help="adjoin 1 (the M variants)"))
    command(word, "maxplus", cmd_word_maxplus, "truncated max-plus N/N>=k", pos("k", type=int))
    command(word, "sinfty", cmd_word_sinfty, "adjoin an absorbing element")

    kn = group("kneser", "Kneser hypergraphs")
    k_m = (pos("k", type=int), pos("m", type=int))
    command(kn, "build", cmd_kneser_build, "build H_{k,m}", *k_m, flag("--list"))
    command(kn, "terms", cmd_kneser_terms, "terms t and q of H_{k,m}", *k_m, flag("--show"))
    command(kn, "hom", cmd_kneser_hom, "search Hom(H_{k,m}, H_{k,n})", *k_m, pos("n", type=int),
            flag("--no-symmetry"))
    command(kn, "blockhom", cmd_kneser_blockhom, "explicit homomorphism when m | n", *k_m,
            pos("n", type=int))

    ex = group("exp", "experiments")
    command(ex, "akp", cmd_exp_akp, "build A_{k,p} and its powers", pos("k", type=int),
            pos("p", type=int))
    command(ex, "sigma", cmd_exp_sigma, "build sigma_{k,q}", pos("k", type=int),
            pos("q", type=int), flag("--show"))
    command(ex, "witness", cmd_exp_witness, "sigma_{k,q} fails on A_{k,q}", pos("k", type=int),
            pos("q", type=int))
    command(ex, "reduce", cmd_exp_reduce, "decide A_{k,p} |= sigma_{k,q}", pos("k", type=int),
            pos("p", type=int), pos("q", type=int), flag("--no-symmetry"))
    command(ex, "reconstruct", cmd_exp_reconstruct, "S_c*(a1...an) from S_53^n",
            pos("n", type=int))
    command(ex, "embed", cmd_exp_embed, "S_c*(a1...ak) inside A_{k,p}", pos("k", type=int),
            pos("p", type=int))
    command(ex, "b0", cmd_exp_b0, "bounded checks on B_0")
    command(ex, "maxplus-subdirect", cmd_exp_maxplus, "max-plus subdirect decomposition",
            pos("K", type=int))
    command(ex, "regularize", cmd_exp_regularize, "S^inf against regular identities",
            (("--count",), {"type": int, "default": 200}))

    rep = group("report", "acceptance suite")
    command(rep, "all", cmd_report_all, "run every acceptance criterion",
            (("--only",), {"type": int, "nargs": "+", "default": None}))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_INPUT
    try:
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except (InputError, AlgebraError, HypergraphError, TermSyntaxError, UnassignedVariable,
            ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"semiring-lab: error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
