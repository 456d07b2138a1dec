import itertools
import random

from accc.oracle import bounded_closure
from accc.parser import parse_term
from accc.terms import App, Const
from accc.ucc import (ConstSystem, FlatRule, FlatSystem, cc_complete,
                      nf_uninterp, update_c, update_u)

from helpers import make_sig, oracle_sig, to_oracle


def test_update_c_examples():
    sig, ids = make_sig(["a", "b", "c"])
    a, b, c = ids["a"], ids["b"], ids["c"]
    rc = update_c(ConstSystem(((a, c),)), [(b, c)], sig)
    assert rc.mapping() == {a: c, b: c}
    rc = update_c(ConstSystem(), [(a, b)], sig)
    assert rc.mapping() == {a: b}
    # merging two classes re-picks the least representative
    rc = update_c(ConstSystem(((a, b),)), [(a, c)], sig)
    assert rc.mapping() == {a: c, b: c}


def test_update_c_matches_from_scratch():
    sig, ids = make_sig(list("abcdef"))
    rng = random.Random(3)
    consts = list(ids.values())
    pairs = [(rng.choice(consts), rng.choice(consts)) for _ in range(12)]
    incremental = ConstSystem()
    for p in pairs:
        incremental = update_c(incremental, [p], sig)
    assert incremental == update_c(ConstSystem(), pairs, sig)


def test_update_u_collapses_duplicates():
    sig, ids = make_sig(["a", "b", "c", "d"], uninterp={"g": 1})
    a, b, c, d = (ids[n] for n in "abcd")
    ru = FlatSystem((FlatRule("g", (b,), a), FlatRule("g", (d,), c)))
    rc = ConstSystem(((b, d),))
    ru2, eqs = update_u(ru, rc, sig)
    assert ru2.rules == (FlatRule("g", (d,), c),)
    assert eqs == [(a, c)]


def test_update_u_untouched():
    sig, ids = make_sig(["a", "b"], uninterp={"g": 1})
    ru = FlatSystem((FlatRule("g", (ids["a"],), ids["b"]),))
    ru2, eqs = update_u(ru, ConstSystem(), sig)
    assert ru2 == ru and eqs == []


def test_update_u_binary_collapse():
    sig, ids = make_sig(["a", "b", "c", "d"], uninterp={"h": 2})
    a, b, c, d = (ids[n] for n in "abcd")
    ru = FlatSystem((FlatRule("h", (a, b), c), FlatRule("h", (b, b), d)))
    ru2, eqs = update_u(ru, ConstSystem(((a, b),)), sig)
    assert ru2.rules == (FlatRule("h", (b, b), d),)
    assert eqs == [(c, d)]


def test_cc_complete_examples():
    sig, ids = make_sig(["a", "b", "c", "d"], uninterp={"g": 1})
    a, b, c, d = (ids[n] for n in "abcd")
    rc, ru = cc_complete([(b, d)], [("g", (b,), a), ("g", (d,), c)], sig)
    assert rc.mapping() == {a: c, b: d}
    assert ru.rules == (FlatRule("g", (d,), c),)

    rc, ru = cc_complete([], [], sig)
    assert rc.is_empty and ru.rules == ()

    sig2, ids2 = make_sig(["c1", "c2", "c3"])
    rc, _ = cc_complete([(ids2["c1"], ids2["c2"]), (ids2["c2"], ids2["c3"]),
                         (ids2["c3"], ids2["c1"])], [], sig2)
    assert rc.mapping() == {ids2["c1"]: ids2["c3"], ids2["c2"]: ids2["c3"]}


def test_cc_complete_permutation_invariant():
    sig, ids = make_sig(["a", "b", "c", "d"], uninterp={"g": 1, "h": 2})
    const_eqs = [(ids["b"], ids["d"])]
    flat_eqs = [("g", (ids["b"],), ids["a"]), ("g", (ids["d"],), ids["c"]),
                ("h", (ids["a"], ids["b"]), ids["d"])]
    base = cc_complete(const_eqs, flat_eqs, sig)
    for perm in itertools.permutations(flat_eqs):
        assert cc_complete(const_eqs, list(perm), sig) == base


def test_nf_uninterp():
    sig, ids = make_sig(["a", "b", "c", "d"], uninterp={"g": 1})
    a, b, c, d = (ids[n] for n in "abcd")
    rc = ConstSystem(((a, c), (b, d)))
    ru = FlatSystem((FlatRule("g", (d,), c), FlatRule("g", (c,), c)))
    assert nf_uninterp(parse_term(sig, "g(b)"), rc, ru) == Const(c)
    assert nf_uninterp(Const(d), ConstSystem(), ru) == Const(d)
    assert nf_uninterp(parse_term(sig, "g(g(d))"), rc, ru) == Const(c)


def test_rc_idempotent_as_substitution():
    sig, ids = make_sig(list("abcde"))
    rng = random.Random(5)
    consts = list(ids.values())
    rc = update_c(ConstSystem(), [(rng.choice(consts), rng.choice(consts))
                                  for _ in range(8)], sig)
    for c in consts:
        assert rc.canon(rc.canon(c)) == rc.canon(c)


def test_cc_agrees_with_bounded_closure():
    # all terms of depth <= 3 over <= 4 constants and one unary + one binary symbol
    sig, ids = make_sig(["a", "b", "c", "d"], uninterp={"g": 1, "h": 2})
    rng = random.Random(11)
    names = list("abcd")

    def term_size(t):
        return 1 if isinstance(t, Const) else 1 + sum(term_size(a) for a in t.args)

    def rand_term(depth, max_size=4):
        while True:
            roll = rng.random()
            if depth == 0 or roll < 0.4:
                t = parse_term(sig, rng.choice(names))
            elif roll < 0.75:
                t = App("g", (rand_term(depth - 1),))
            else:
                t = App("h", (rand_term(depth - 1), rand_term(depth - 1)))
            if term_size(t) <= max_size:
                return t

    for trial in range(15):
        eqs = [(rand_term(2), rand_term(2)) for _ in range(3)]
        from accc.flatten import purify
        problem = purify(eqs, sig)
        rc, ru = cc_complete(problem.const_eqs, problem.flat_eqs, problem.sig)
        cl = bounded_closure([(to_oracle(l, sig), to_oracle(r, sig)) for l, r in eqs],
                             oracle_sig(sig), 4)
        probes = [rand_term(1) for _ in range(8)] + [parse_term(sig, n) for n in names]
        from accc.combine import Session
        session = Session(sig)
        for l, r in eqs:
            session.assert_eq(l, r)
        for s, t in itertools.combinations(probes, 2):
            assert session.decide(s, t) == cl.equal(to_oracle(s, sig), to_oracle(t, sig)), \
                (trial, s, t)
