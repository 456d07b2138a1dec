import itertools
import random

import pytest

from accc.ac import (AcRule, ac_rewrite_once, assert_locally_confluent,
                     assert_reduced, critical_pair, interreduce, nf_ac,
                     single_ac_completion, theory_critical_pairs, update_ac)
from accc.ordering import DEGLEX, MonomialOrdering
from accc.oracle import bounded_closure
from accc.terms import Monomial, TheorySpec
from accc.ucc import ConstSystem

from helpers import (all_monomials, make_sig, mono, mono_oracle, oracle_sig,
                     rules_as_names)


@pytest.fixture
def sig():
    return make_sig(["a", "b", "c", "e"], ac={"f": {}})[0]


def complete(sig, sym, eqs_text, rc=None, spec=None):
    eqs = [(mono(sig, l), mono(sig, r)) for l, r in eqs_text]
    return single_ac_completion(eqs, rc or ConstSystem(),
                                MonomialOrdering(DEGLEX, sig), sym,
                                spec or sig.ac[sym])


def test_ac_rewrite_once(sig):
    plain = TheorySpec()
    r = AcRule(mono(sig, "a b"), mono(sig, "a"))
    assert ac_rewrite_once(mono(sig, "a b c"), r, plain) == mono(sig, "a c")
    assert ac_rewrite_once(mono(sig, "a c"), r, plain) is None
    r2 = AcRule(mono(sig, "a a"), mono(sig, "b b"))
    assert ac_rewrite_once(mono(sig, "a a b b"), r2, plain) == mono(sig, "b b b b")


def test_critical_pair_examples(sig):
    r1 = AcRule(mono(sig, "a b"), mono(sig, "a"))
    r2 = AcRule(mono(sig, "b c"), mono(sig, "b"))
    assert critical_pair(r1, r2) == (mono(sig, "a c"), mono(sig, "a b"))
    r3 = AcRule(mono(sig, "a"), mono(sig, "b"))
    r4 = AcRule(mono(sig, "b"), mono(sig, "c"))
    assert critical_pair(r3, r4) is None  # disjoint left sides
    # rules 1 and 3 of the three-rule system: superposition a*a*b*b
    r5 = AcRule(mono(sig, "a a b"), mono(sig, "a a"))
    r6 = AcRule(mono(sig, "a b b"), mono(sig, "b b"))
    assert critical_pair(r5, r6) == (mono(sig, "a a b"), mono(sig, "a b b"))


def test_theory_critical_pairs(sig):
    idem = TheorySpec(idempotent=True)
    r = AcRule(mono(sig, "a b"), mono(sig, "c"))
    pairs = theory_critical_pairs(r, idem)
    assert (mono(sig, "a b"), mono(sig, "a c")) in pairs
    assert (mono(sig, "a b"), mono(sig, "b c")) in pairs

    assert theory_critical_pairs(r, TheorySpec(identity=sig.const("e"))) == []

    nil = TheorySpec(nilpotent_to=sig.const("e"))
    pairs = theory_critical_pairs(r, nil)
    assert (mono(sig, "a c"), mono(sig, "b e")) in pairs
    assert (mono(sig, "b c"), mono(sig, "a e")) in pairs


def test_single_completion_three_rules():
    sig, _ = make_sig(["a", "b"], ac={"*": {}})
    system, consts = complete(sig, "*", [("a a b", "a a"), ("a b b", "b b")])
    assert consts == []
    assert rules_as_names(system, sig) == {
        (("b", "b", "b"), ("b", "b")),
        (("a", "b", "b"), ("b", "b")),
        (("a", "a"), ("b", "b")),
    }


def test_single_completion_idempotent_collapses():
    sig, _ = make_sig(["a", "b"], ac={"*": {"idempotent": True}})
    system, consts = complete(sig, "*", [("a a b", "a a"), ("a b b", "b b")])
    assert system.rules == ()
    assert [(sig.name(c), sig.name(d)) for c, d in consts] == [("a", "b")]


def test_single_completion_nilpotent():
    sig, _ = make_sig(["a", "b", "e"], ac={"*": {"nilpotent_to": "e"}})
    system, consts = complete(sig, "*", [("a a b", "a a"), ("a b b", "b b")])
    assert consts == []
    assert rules_as_names(system, sig) == {
        (("a", "e"), ("e",)),
        (("b", "e"), ("e",)),
    }


def test_nf_under_completed_system():
    sig, _ = make_sig(["a", "b"], ac={"*": {}})
    system, _ = complete(sig, "*", [("a a b", "a a"), ("a b b", "b b")])
    rc = ConstSystem()
    assert nf_ac(mono(sig, "a b b"), system, rc) == mono(sig, "b b")
    assert nf_ac(mono(sig, "a b"), system, rc) == mono(sig, "a b")
    assert nf_ac(mono(sig, "a a b"), system, rc) == mono(sig, "b b")


def test_interreduce():
    sig, _ = make_sig(["a", "b", "c", "d"], ac={"*": {}})
    plain = sig.ac["*"]
    rules = [AcRule(mono(sig, "a a b"), mono(sig, "a a"))]
    new = AcRule(mono(sig, "a a"), mono(sig, "b b"))
    kept, requeued = interreduce(rules, new, plain)
    assert kept == []
    assert requeued == [(mono(sig, "a a b"), mono(sig, "a a"))]

    rules = [AcRule(mono(sig, "c d"), mono(sig, "a a"))]
    kept, requeued = interreduce(rules, new, plain)
    assert requeued == []
    assert kept == [AcRule(mono(sig, "c d"), mono(sig, "b b"))]

    rules = [AcRule(mono(sig, "c c"), mono(sig, "d"))]
    kept, requeued = interreduce(rules, new, plain)
    assert kept == rules and requeued == []


def test_completion_is_reduced_and_confluent():
    sig, _ = make_sig(["a", "b"], ac={"*": {}})
    system, _ = complete(sig, "*", [("a a b", "a a"), ("a b b", "b b")])
    assert_reduced(system, ConstSystem())
    assert_locally_confluent(system, ConstSystem())


def test_completion_permutation_invariant():
    sig, _ = make_sig(["a", "b", "c"], ac={"*": {}})
    eqs = [("a a b", "a a"), ("a b b", "b b"), ("a c", "c c")]
    base, base_consts = complete(sig, "*", eqs)
    for perm in itertools.permutations(eqs):
        system, consts = complete(sig, "*", list(perm))
        assert system.rules == base.rules
        assert consts == base_consts


def test_update_ac_fast_path():
    sig, _ = make_sig(["a", "b"], ac={"*": {}})
    system, _ = complete(sig, "*", [("a a b", "a a"), ("a b b", "b b")])
    out, consts = update_ac(system, ConstSystem())
    assert out is system and consts == []


def test_update_ac_renormalizes():
    # three rules collapse under b -> d
    sig, ids = make_sig(["a", "b", "c", "d"], ac={"*": {}})
    system, consts = complete(sig, "*", [("a c", "c"), ("b c", "b"), ("a b", "d")])
    # completion of the input already derives b = d
    assert [(sig.name(x), sig.name(y)) for x, y in consts] == [("b", "d")]
    rc = ConstSystem(((ids["b"], ids["d"]),))
    out, more = update_ac(system, rc)
    assert more == []
    assert rules_as_names(out, sig) == {
        (("a", "c"), ("c",)),
        (("c", "d"), ("d",)),
        (("a", "d"), ("d",)),
    }


def test_update_ac_reorients():
    # lex ordering flips rules when b collapses into a smaller constant
    sig, ids = make_sig(["b", "c", "a"], ac={"+": {}})
    from accc.ordering import LEX
    ordering = MonomialOrdering(LEX, sig)
    eqs = [(mono(sig, "c c"), mono(sig, "b b")), (mono(sig, "c b"), mono(sig, "c c"))]
    system, consts = single_ac_completion(eqs, ConstSystem(), ordering, "+", sig.ac["+"])
    assert consts == []
    assert rules_as_names(system, sig) == {
        (("b", "b"), ("c", "c")), (("b", "c"), ("c", "c")),
    }
    rc = ConstSystem(((ids["b"], ids["a"]),))
    out, more = update_ac(system, rc)
    assert more == []
    assert rules_as_names(out, sig) == {
        (("c", "c"), ("a", "a")), (("a", "c"), ("a", "a")),
    }


def test_completion_agrees_with_oracle_random():
    rng = random.Random(23)
    for trial in range(25):
        n = rng.randint(2, 4)
        names = list("abcd")[:n]
        theory = rng.choice([{}, {"idempotent": True}, {"identity": names[-1]},
                             {"nilpotent_to": names[-1]}])
        sig, ids = make_sig(names, ac={"f": dict(theory)})
        consts = list(ids.values())

        def rand_mono():
            return Monomial.of(rng.choices(consts, k=rng.randint(1, 4)))

        eqs = []
        for _ in range(rng.randint(1, 3)):
            l, r = rand_mono(), rand_mono()
            eqs.append((l, r))
        system, extra = single_ac_completion(
            eqs, ConstSystem(), MonomialOrdering(DEGLEX, sig), "f", sig.ac["f"])
        rc = ConstSystem()
        from accc.ucc import update_c
        rc = update_c(rc, extra, sig)
        out, more = update_ac(system, rc)
        assert more == []
        oeqs = [(mono_oracle("f", l, sig), mono_oracle("f", r, sig)) for l, r in eqs]
        cl = bounded_closure(oeqs, oracle_sig(sig), 6)
        probes = all_monomials(consts, 3)
        for m1, m2 in itertools.combinations(probes, 2):
            engine = (nf_ac(m1, out, rc) == nf_ac(m2, out, rc))
            oracle = cl.equal(mono_oracle("f", m1, sig), mono_oracle("f", m2, sig))
            assert engine == oracle, (trial, theory, eqs, m1, m2)
        assert_reduced(out, rc)
        assert_locally_confluent(out, rc)
