import random

from accc.gbz import (Polynomial, RingSig, gbz_complete, ideal_member,
                      original_signature_basis, poly_normalize)
from accc.parser import parse_term
from accc.terms import Monomial, TheorySpec

from helpers import make_sig


def ring_sig(extra=(), order=None):
    names = list(extra) + ["y", "x", "1", "0"]
    sig, ids = make_sig(names, order=order)
    sig.add_ac("+", TheorySpec(identity=ids["0"], cancelative=True,
                               abelian_group_zero=ids["0"]))
    sig.add_ac("*", TheorySpec(identity=ids["1"]))
    return RingSig.make(sig, "+", "*"), ids


def P(items):
    return Polynomial.of(items)


def M(d):
    return Monomial.of(d)


def evaluate(p: Polynomial, env: dict) -> int:
    total = 0
    for m, k in p.terms:
        v = k
        for c in m:
            v *= env[c]
        total += v
    return total


def test_poly_normalize_distributes():
    ring, ids = ring_sig()
    t = parse_term(ring.sig, "(y*(y+y)) + (y*y)")
    p = poly_normalize(t, ring)
    assert p == P([(M({ids["y"]: 2}), 3)])
    rng = random.Random(3)
    for _ in range(5):
        v = rng.randint(-9, 9)
        assert evaluate(p, {ids["y"]: v}) == v * (v + v) + v * v


def test_poly_normalize_cancels():
    ring, ids = ring_sig()
    t = parse_term(ring.sig, "x + -(x)")
    assert poly_normalize(t, ring).is_zero


def test_poly_normalize_product():
    ring, ids = ring_sig()
    t = parse_term(ring.sig, "(x+1)*(x+-(1))")
    p = poly_normalize(t, ring)
    assert p == P([(M({ids["x"]: 2}), 1), (M({}), -1)])
    # cross-check by evaluating at random integer points
    rng = random.Random(5)
    for _ in range(5):
        env = {ids["x"]: rng.randint(-9, 9), ids["y"]: rng.randint(-9, 9)}
        assert evaluate(p, env) == env[ids["x"]] ** 2 - 1


def test_poly_normalize_is_ring_homomorphism():
    ring, ids = ring_sig()
    rng = random.Random(8)
    sig = ring.sig
    atoms = ["x", "y", "1", "0", "x*y", "x+y", "x+1", "y+-(x)"]

    def rand_term():
        import accc.terms as T
        parts = [parse_term(sig, rng.choice(atoms)) for _ in range(rng.randint(1, 3))]
        if len(parts) == 1:
            return parts[0]
        sym = rng.choice(["+", "*"])
        return T.AcApp(sym, tuple(parts))

    import accc.terms as T
    for _ in range(40):
        s, t = rand_term(), rand_term()
        assert (poly_normalize(T.AcApp("*", (s, t)), ring)
                == poly_normalize(s, ring).mul(poly_normalize(t, ring)))
        assert (poly_normalize(T.AcApp("+", (s, t)), ring)
                == poly_normalize(s, ring).add(poly_normalize(t, ring)))


def _example_basis(ids):
    x, y = ids["x"], ids["y"]
    return [
        (P([(M({x: 2, y: 1}), 7)]), P([(M({x: 1}), 3)])),   # 7x^2y = 3x
        (P([(M({x: 1, y: 2}), 4)]), P([(M({x: 1, y: 1}), 1)])),  # 4xy^2 = xy
        (P([(M({y: 3}), 3)]), P([])),                        # 3y^3 = 0
    ]


def _completed_example():
    ring, ids = ring_sig(extra=["u1", "u2", "u4", "u3"])
    x, y = ids["x"], ids["y"]
    defs = {M({x: 2, y: 1}): ids["u1"], M({x: 1, y: 2}): ids["u2"],
            M({x: 1, y: 1}): ids["u3"], M({y: 3}): ids["u4"]}
    state = gbz_complete(_example_basis(ids), ring, mono_defs=defs)
    return state, ids


def test_example_ideal_basis_exact():
    state, ids = _completed_example()
    x, y = ids["x"], ids["y"]
    basis = original_signature_basis(state)
    got = {(lead.terms, tail.terms) for lead, tail in basis}
    want = {
        (P([(M({x: 1}), 3)]).terms, ()),                       # 3x -> 0
        (P([(M({x: 2, y: 1}), 1)]).terms, ()),                 # x^2y -> 0
        (P([(M({x: 1, y: 2}), 1)]).terms, P([(M({x: 1, y: 1}), 1)]).terms),  # xy^2 -> xy
        (P([(M({y: 3}), 3)]).terms, ()),                       # 3y^3 -> 0
    }
    assert got == want


def test_example_ideal_membership():
    state, ids = _completed_example()
    x, y = ids["x"], ids["y"]
    assert ideal_member(P([(M({x: 1}), 3)]), state)
    assert not ideal_member(P([(M({}), 1)]), state)
    assert ideal_member(P([]), state)
    assert ideal_member(P([(M({x: 2, y: 2}), 1)]), state)     # (x^2y) * y
    assert ideal_member(P([(M({x: 2, y: 1}), 7), (M({x: 1}), -3)]), state)
    assert not ideal_member(P([(M({x: 1}), 1)]), state)
    assert not ideal_member(P([(M({y: 3}), 1)]), state)


def test_example_critical_pair_count():
    # recorded statistic; the ceiling only guards against regressions
    state, _ = _completed_example()
    print(f"distributivity critical pairs considered: "
          f"{state.critical_pairs_considered}")
    assert state.critical_pairs_considered < 200


def test_membership_soundness_by_combination_search():
    # everything reported a member must be a Z[x,y]-combination of the basis
    state, ids = _completed_example()
    x, y = ids["x"], ids["y"]
    basis = [P([(M({x: 2, y: 1}), 7), (M({x: 1}), -3)]),
             P([(M({x: 1, y: 2}), 4), (M({x: 1, y: 1}), -1)]),
             P([(M({y: 3}), 3)])]
    members = [P([(M({x: 1}), 3)]), P([(M({x: 2, y: 1}), 1)]),
               P([(M({x: 1, y: 2}), 1), (M({x: 1, y: 1}), -1)]),
               P([(M({y: 3}), 3)])]
    for target in members:
        assert ideal_member(target, state)
        assert _is_combination(target, basis, (x, y)), target


def _is_combination(target, basis, vars_, max_deg=4):
    """Exact bounded-degree test: target in the lattice of monomial multiples
    of the basis, decided with the oracle's integer echelon reduction."""
    from accc.oracle import _in_lattice, _integer_echelon
    monos = [M({})]
    for d in range(1, max_deg + 1):
        for i in range(d + 1):
            monos.append(M({vars_[0]: i, vars_[1]: d - i}))
    space = sorted({m.union(bm).pairs for mm in [0] for b in basis
                    for m in monos for bm, _ in b.terms}
                   | {m.pairs for m, _ in target.terms})
    index = {pairs: i for i, pairs in enumerate(space)}

    def vec(p):
        out = [0] * len(space)
        for m, k in p.terms:
            if m.pairs not in index:
                return None
            out[index[m.pairs]] = k
        return out

    rows = []
    for b in basis:
        for m in monos:
            v = vec(b.mul_monomial(m))
            if v is not None:
                rows.append(v)
    return _in_lattice(vec(target), _integer_echelon(rows))


def test_small_gcd_ideal():
    ring, ids = ring_sig()
    x = ids["x"]
    basis = [(P([(M({x: 1}), 2)]), P([])), (P([(M({x: 1}), 3)]), P([]))]
    state = gbz_complete(basis, ring)
    assert ideal_member(P([(M({x: 1}), 1)]), state)
    got = original_signature_basis(state)
    assert [(lead.terms, tail.terms) for lead, tail in got] == \
        [(P([(M({x: 1}), 1)]).terms, ())]


def test_empty_basis():
    ring, ids = ring_sig()
    state = gbz_complete([], ring)
    assert original_signature_basis(state) == []
    assert not ideal_member(P([(M({ids["x"]: 1}), 1)]), state)
    assert ideal_member(P([]), state)


def test_distributivity_pair_shapes():
    from accc.gbz import distributivity_cp
    from accc.group import GroupRule
    from accc.terms import GroupTerm
    state, ids = _completed_example()
    x, y, u3 = ids["x"], ids["y"], ids["u3"]
    # a lead absent from the star rule's left side never superposes (caller
    # filters); with the lead present, a joinable pair returns None
    zero_rule = GroupRule(ids["u4"], 3, GroupTerm())
    star_lhs = M({ids["u4"]: 1, x: 2})
    star_rhs = state.rc.canon(ids["u2"])  # u2 collapsed into u3 by completion
    d = distributivity_cp(state, zero_rule, star_lhs,
                          M({star_rhs: 1, u3: 1}))
    assert d is None  # 3*(u2*u3) is already zero in the completed state
    # a genuinely new relation comes back as a nonzero additive term
    fresh_rule = GroupRule(y, 5, GroupTerm())  # 5y = 0 (not a consequence)
    d2 = distributivity_cp(state, fresh_rule, M({y: 1, x: 1}), M({u3: 1}))
    assert d2 is not None


def test_principal_ideal_with_tail():
    # 2x*y = x generates relations along the x*y^k chain
    ring, ids = ring_sig()
    x, y = ids["x"], ids["y"]
    basis = [(P([(M({x: 1, y: 1}), 2)]), P([(M({x: 1}), 1)]))]
    state = gbz_complete(basis, ring)
    assert ideal_member(P([(M({x: 1, y: 1}), 2), (M({x: 1}), -1)]), state)
    assert ideal_member(P([(M({x: 1, y: 2}), 4), (M({x: 1}), -1)]), state)  # (2xy)^...
    assert not ideal_member(P([(M({x: 1}), 1)]), state)
    assert not ideal_member(P([(M({}), 1)]), state)
