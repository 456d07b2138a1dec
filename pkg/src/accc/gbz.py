"""Groebner bases over the integers as a combined congruence closure.

A polynomial equation splits into an Abelian-group part over constants that
name product monomials and an AC-with-identity part relating those monomials
to their names.  The two completions are linked by distributivity critical
pairs: an additive rule k*u -> r and a multiplicative rule u*m -> r' superpose
on (k*u)*m, deriving r*m = k*r', which is normalized, re-purified and split
back into the two systems.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ac import AcSystem, extend_ac, nf_ac
from .group import GroupRule, GroupSystem, group_complete
from .ordering import MonomialOrdering
from .terms import (AcApp, Const, ConstId, GroupTerm, InternalError, Monomial,
                    Neg, ProblemError, Signature, Term, TheorySpec)
from .ucc import ConstSystem, update_c


@dataclass(frozen=True)
class Polynomial:
    terms: tuple = ()  # tuple[(Monomial, int)], sorted, nonzero coefficients

    @staticmethod
    def of(items) -> "Polynomial":
        acc: dict = {}
        it = items.items() if isinstance(items, dict) else items
        for m, k in it:
            acc[m] = acc.get(m, 0) + k
        return Polynomial(tuple(sorted(((m, k) for m, k in acc.items() if k),
                                       key=lambda p: p[0].pairs)))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.of(list(self.terms) + list(other.terms))

    def neg(self) -> "Polynomial":
        return Polynomial(tuple((m, -k) for m, k in self.terms))

    def sub(self, other: "Polynomial") -> "Polynomial":
        return self.add(other.neg())

    def scale(self, k: int) -> "Polynomial":
        if k == 0:
            return Polynomial()
        return Polynomial(tuple((m, k * c) for m, c in self.terms))

    def mul_monomial(self, m: Monomial, k: int = 1) -> "Polynomial":
        return Polynomial.of([(mm.union(m), k * c) for mm, c in self.terms])

    def mul(self, other: "Polynomial") -> "Polynomial":
        out = Polynomial()
        for m, k in other.terms:
            out = out.add(self.mul_monomial(m, k))
        return out


@dataclass
class RingSig:
    """The commutative-ring-with-1 instantiation of a signature."""

    sig: Signature
    plus: str
    star: str
    zero: ConstId
    one: ConstId

    @staticmethod
    def make(sig: Signature, plus: str, star: str) -> "RingSig":
        pspec = sig.theory(plus)
        sspec = sig.theory(star)
        if not pspec.is_group:
            raise ProblemError(f"{plus!r} must be an Abelian group symbol")
        if sspec.identity is None or sspec.is_group:
            raise ProblemError(f"{star!r} must be AC with an identity")
        zero, one = pspec.abelian_group_zero, sspec.identity
        # the multiplicative symbol absorbs the additive zero (x*0 = 0)
        sig.ac[star] = TheorySpec(identity=one, absorbing=zero)
        return RingSig(sig, plus, star, zero, one)


def poly_normalize(t: Term, ring: RingSig) -> Polynomial:
    """Fully distribute a ground +,*,-,0,1 term and collect like monomials."""
    if isinstance(t, Const):
        if t.cid == ring.zero:
            return Polynomial()
        if t.cid == ring.one:
            return Polynomial.of([(Monomial(), 1)])
        return Polynomial.of([(Monomial.of([t.cid]), 1)])
    if isinstance(t, Neg):
        return poly_normalize(t.arg, ring).neg()
    if isinstance(t, AcApp) and t.sym == ring.plus:
        out = Polynomial()
        for a in t.args:
            out = out.add(poly_normalize(a, ring))
        return out
    if isinstance(t, AcApp) and t.sym == ring.star:
        out = Polynomial.of([(Monomial(), 1)])
        for a in t.args:
            out = out.mul(poly_normalize(a, ring))
        return out
    raise ProblemError(f"not a polynomial term: {t!r}")


@dataclass
class GbState:
    ring: RingSig
    ordering: MonomialOrdering
    rc: ConstSystem
    star_system: AcSystem
    plus_system: GroupSystem
    mono_defs: dict  # Monomial -> ConstId
    star_eqs: list = field(default_factory=list)
    plus_eqs: list = field(default_factory=list)
    star_done: int = 0
    seen_pairs: set = field(default_factory=set)
    critical_pairs_considered: int = 0


def _mono_name(state: GbState, m: Monomial) -> ConstId:
    """Constant naming a product monomial, defined lazily.

    A fresh name is slotted into the precedence so that names compare the
    way their expansions (monomials over the original variables) do; this
    keeps every additive rule oriented along the monomial ordering, which is
    what makes the combined completion terminate.
    """
    if m.is_empty:
        return state.ring.one
    c = m.as_singleton()
    if c is not None:
        return c
    key = m.map(state.rc.canon)
    for mm, u in state.mono_defs.items():
        if mm.map(state.rc.canon) == key:
            return u
    sig = state.ring.sig
    rev = {u: mm for mm, u in state.mono_defs.items()}
    target = state.ordering.sort_key(_expand_mono(state, key, rev))
    above = None
    for w in sig.constants():  # descending precedence
        if w in rev:
            if state.ordering.sort_key(_expand_mono(state, rev[w], rev)) < target:
                above = w
                break
        else:
            above = w  # singletons sit below any size-two monomial
            break
    u = sig.fresh_const(above=above)
    state.mono_defs[key] = u
    state.star_eqs.append((key, Monomial.of([u])))
    return u


def _poly_nf(state: GbState, p: Polynomial) -> Polynomial:
    """Joint normal form of a polynomial over the extended constants.

    Monomials are star-normalized; an additive rule k*v -> rho rewrites a
    coefficient c on a monomial containing v through distributivity, leaving
    |c mod k| behind and pushing q*rho times the cofactor.  Every step
    strictly decreases the multiset of monomials, so this terminates.
    """
    plus_rules = list(state.plus_system.rules)
    zero = state.rc.canon(state.ring.zero)
    while True:
        acc: dict = {}
        for m, k in p.terms:
            m2 = nf_ac(m, state.star_system, state.rc)
            if m2.count(zero):
                continue  # absorbed: the monomial is 0
            acc[m2] = acc.get(m2, 0) + k
        p = Polynomial.of(acc)
        step = None
        for m, c in sorted(p.terms, key=lambda t: state.ordering.sort_key(t[0]),
                           reverse=True):
            for r in plus_rules:
                if m.count(r.lead) and abs(c) >= r.coeff:
                    step = (m, c, r)
                    break
            if step:
                break
        if step is None:
            return p
        m, c, r = step
        q = (abs(c) // r.coeff) * (1 if c > 0 else -1)
        rest = m.difference(Monomial.of([r.lead]))
        repl = Polynomial.of([(Monomial.of([w]).union(rest), k) for w, k in r.rhs.pairs])
        p = p.sub(Polynomial.of([(m, q * r.coeff)])).add(repl.scale(q))


def _purify_poly(state: GbState, p: Polynomial) -> GroupTerm:
    """Normalize fully, then name the residual monomials as an additive term."""
    p = _poly_nf(state, p)
    zero = state.rc.canon(state.ring.zero)
    out = GroupTerm()
    for m, k in p.terms:
        out = out.add(GroupTerm.of([(_mono_name(state, m), k)]))
    return GroupTerm(tuple(q for q in out.pairs if q[0] != zero))


def _recomplete(state: GbState, trace=None) -> None:
    """Re-close both systems and propagate constant rules to a fixpoint.

    The star system is extended incrementally with the equations added since
    the last closure; the additive system is small and recompletes whole.
    """
    sig = state.ring.sig
    while True:
        star, cs1 = extend_ac(state.star_system,
                              state.star_eqs[state.star_done:], state.rc, trace)
        state.star_done = len(state.star_eqs)
        plus, cs2 = group_complete(state.plus_eqs, sig, state.ring.plus,
                                   state.ring.zero, state.rc, trace)
        state.star_system, state.plus_system = star, plus
        new = [p for p in cs1 + cs2 if state.rc.canon(p[0]) != state.rc.canon(p[1])]
        if not new:
            return
        state.rc = update_c(state.rc, new, sig)


def distributivity_cp(state: GbState, plus_rule: GroupRule, star_lhs: Monomial,
                      star_rhs: Monomial) -> GroupTerm | None:
    """Derived relation from superposing k*u -> r with u*m -> r'.

    Returns the additive difference of the two normal forms of (k*u)*m, or
    None when the critical pair is trivially joinable.
    """
    u = plus_rule.lead
    m = star_lhs.difference(Monomial.of([u]))
    left = Polynomial.of([(Monomial.of([v]).union(m), k) for v, k in plus_rule.rhs.pairs])
    right = Polynomial.of([(star_rhs, plus_rule.coeff)])
    d = _poly_nf(state, left.sub(right))
    if d.is_zero:
        return None
    return _purify_poly(state, d)


def gbz_complete(basis, ring: RingSig, config_kind: str = "deglex",
                 mono_defs=None, trace=None) -> GbState:
    """Combined fixpoint of both completions plus distributivity pairs.

    ``basis`` is a list of (Polynomial, Polynomial) equations.
    """
    sig = ring.sig
    ordering = MonomialOrdering(config_kind, sig)
    state = GbState(ring, ordering, ConstSystem(),
                    AcSystem(ring.star, sig.ac[ring.star], ordering),
                    GroupSystem(ring.plus, ring.zero), dict(mono_defs or {}))
    for mm in list(state.mono_defs):
        state.star_eqs.append((mm, Monomial.of([state.mono_defs[mm]])))
    _recomplete(state, trace)
    for l, r in basis:
        g = _purify_poly(state, l.sub(r))
        state.plus_eqs.append((g, GroupTerm()))
    _recomplete(state, trace)
    _distribute(state, trace)
    return state


def _distribute(state: GbState, trace=None) -> None:
    """Close the state under distributivity critical pairs.

    After every accepted relation both systems are re-closed and the scan
    restarts from the fresh rules, smallest superposition first; pairs from
    superseded rules never fire.
    """
    sig = state.ring.sig
    while True:
        pairs = []
        for pr in state.plus_system.rules:
            for sr in state.star_system.rules:
                if pr.lead not in sr.lhs.constants():
                    continue
                key = (pr.lead, pr.coeff, pr.rhs.pairs, sr.lhs.pairs, sr.rhs.pairs)
                if key in state.seen_pairs:
                    continue
                size = sr.lhs.size + sr.rhs.size + len(pr.rhs.pairs)
                pairs.append((size, sig.rank(pr.lead), key, pr, sr))
        if not pairs:
            return
        pairs.sort(key=lambda q: (q[0], q[1], q[2]))
        advanced = False
        for _, _, key, pr, sr in pairs:
            state.seen_pairs.add(key)
            state.critical_pairs_considered += 1
            d = distributivity_cp(state, pr, sr.lhs, sr.rhs)
            if d is not None:
                if trace:
                    trace(f"distributivity pair on {sig.name(pr.lead)}: new relation")
                state.plus_eqs.append((d, GroupTerm()))
                _recomplete(state, trace)
                advanced = True
                break  # rules changed: rescan against the fresh systems
        if not advanced:
            return


def ideal_member(p: Polynomial, state: GbState) -> bool:
    """True iff the joint normal form of p is 0."""
    return _poly_nf(state, p).is_zero


# -- original-signature view --------------------------------------------------


def _expand_const(state: GbState, c: ConstId, rev: dict) -> Monomial:
    seen = set()
    m = Monomial.of([c])
    while True:
        expandable = [x for x in m.constants() if x in rev]
        if not expandable:
            return m
        x = expandable[0]
        if x in seen:
            raise InternalError("cyclic monomial definitions")
        seen.add(x)
        n = m.count(x)
        m = m.difference(Monomial.of({x: n}))
        for _ in range(n):
            m = m.union(rev[x])


def _expand_mono(state: GbState, m: Monomial, rev: dict) -> Monomial:
    out = Monomial()
    for c in m:
        out = out.union(_expand_const(state, c, rev))
    return out


def _expand_to_poly(state: GbState, m: Monomial, k: int, rev: dict) -> Polynomial:
    """Expanded monomial as a polynomial: 0 absorbs, the identity drops."""
    m = _expand_mono(state, m, rev)
    if m.count(state.ring.zero):
        return Polynomial()
    m = Monomial(tuple(p for p in m.pairs if p[0] != state.ring.one))
    return Polynomial.of([(m, k)])


def _poly_reduce(p: Polynomial, rules: list, ordering: MonomialOrdering) -> Polynomial:
    """Reduce a polynomial by lead-term rules (k*m -> tail) over the integers."""
    changed = True
    while changed:
        changed = False
        for lm, lk, tail in rules:
            for m, k in p.terms:
                if lm.submultiset(m) and abs(k) >= lk:
                    q = (abs(k) // lk) * (1 if k > 0 else -1)
                    cof = m.difference(lm)
                    p = p.sub(Polynomial.of([(m, q * lk)])).add(tail.mul_monomial(cof, q))
                    changed = True
                    break
            if changed:
                break
    return p


def original_signature_basis(state: GbState) -> list[tuple[Polynomial, Polynomial]]:
    """The interreduced polynomial rules over the original constants."""
    rev = {u: mm for mm, u in state.mono_defs.items()}

    def expand(m: Monomial, k: int = 1) -> Polynomial:
        return _expand_to_poly(state, m, k, rev)

    candidates: list[Polynomial] = []
    for c, d in state.rc.rules:
        candidates.append(expand(Monomial.of([c])).sub(expand(Monomial.of([d]))))
    for r in state.plus_system.rules:
        rhs = Polynomial()
        for v, k in r.rhs.pairs:
            rhs = rhs.add(expand(Monomial.of([v]), k))
        candidates.append(expand(Monomial.of([r.lead]), r.coeff).sub(rhs))
    for r in state.star_system.rules:
        candidates.append(expand(r.lhs).sub(expand(r.rhs)))

    ordering = state.ordering
    rules: list = []  # (lead monomial, lead coeff, tail polynomial)
    for p in sorted((c for c in candidates if not c.is_zero),
                    key=lambda q: _lead_key(q, ordering)):
        p = _poly_reduce(p, rules, ordering)
        if p.is_zero:
            continue
        lm, lk, tail = _split_lead(p, ordering)
        rules.append((lm, lk, tail))
    # interreduce tails and drop rules that became redundant
    stable = False
    while not stable:
        stable = True
        for i in range(len(rules)):
            lm, lk, tail = rules[i]
            others = rules[:i] + rules[i + 1:]
            p = _poly_reduce(Polynomial.of([(lm, lk)]).sub(tail), others, ordering)
            if p.is_zero:
                rules.pop(i)
                stable = False
                break
            lm2, lk2, tail2 = _split_lead(p, ordering)
            if (lm2, lk2, tail2) != (lm, lk, tail):
                rules[i] = (lm2, lk2, tail2)
                stable = False
                break
    out = []
    for lm, lk, tail in sorted(rules, key=lambda r: ordering.sort_key(r[0])):
        out.append((Polynomial.of([(lm, lk)]), tail))
    return out


def _lead_key(p: Polynomial, ordering: MonomialOrdering):
    m, k = max(p.terms, key=lambda q: ordering.sort_key(q[0]))
    return (ordering.sort_key(m), abs(k))


def _split_lead(p: Polynomial, ordering: MonomialOrdering):
    m, k = max(p.terms, key=lambda q: ordering.sort_key(q[0]))
    if k < 0:
        p = p.neg()
        k = -k
    tail = Polynomial(tuple(q for q in p.terms if q[0] != m)).neg()
    return m, k, tail
