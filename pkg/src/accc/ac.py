"""Rewriting and completion for a single AC symbol.

Rules relate monomials (argument multisets).  The superposition of two rules
is the pointwise maximum of their left sides; the critical pair rewrites it
with either rule.  Extra critical pairs account for idempotency and
nilpotency; identity alone needs none.  Constant-to-constant rules derived
during completion are kept as singleton rules for rewriting and reported to
the caller for propagation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ordering import MonomialOrdering, dickson_geq
from .terms import (ConstId, InternalError, Monomial, TheorySpec,
                    normalize_monomial)
from .ucc import ConstSystem


@dataclass(frozen=True)
class AcRule:
    lhs: Monomial
    rhs: Monomial


@dataclass(frozen=True)
class AcSystem:
    symbol: str
    spec: TheorySpec
    ordering: MonomialOrdering
    rules: tuple = ()  # tuple[AcRule, ...], sorted by lhs
    universe: tuple | None = None  # cancelative systems: expansion universe used

    def rule_set(self) -> set:
        return {(r.lhs, r.rhs) for r in self.rules}


def ac_rewrite_once(m: Monomial, rule: AcRule, spec: TheorySpec) -> Monomial | None:
    """One rewrite step: if lhs is contained, replace it and renormalize."""
    if not rule.lhs.submultiset(m):
        return None
    return normalize_monomial(spec, m.difference(rule.lhs).union(rule.rhs))


def critical_pair(r1: AcRule, r2: AcRule) -> tuple[Monomial, Monomial] | None:
    """Critical pair from the superposition of two distinct rules.

    Disjoint left sides give a trivially joinable pair, hence None.
    """
    inter = r1.lhs.intersection(r2.lhs)
    if inter.is_empty:
        return None
    ab = r1.lhs.union(r2.lhs).difference(inter)
    return (ab.difference(r1.lhs).union(r1.rhs), ab.difference(r2.lhs).union(r2.rhs))


def theory_critical_pairs(rule: AcRule, spec: TheorySpec) -> list:
    """Per-rule critical pairs demanded by the symbol's theory.

    Idempotency overlaps the rule with f(x,x)->x on each constant of the left
    side; nilpotency with f(x,x)->e.  An identity contributes none, also in
    combination with either.
    """
    out = []
    if spec.idempotent:
        for a in rule.lhs.constants():
            out.append((rule.lhs, rule.rhs.union(Monomial.of([a]))))
    elif spec.nilpotent_to is not None:
        e = Monomial.of([spec.nilpotent_to])
        for a in rule.lhs.constants():
            single = Monomial.of([a])
            out.append((rule.rhs.union(single), rule.lhs.difference(single).union(e)))
    return out


class Completion:
    """Worklist completion; shared by the plain, updated and cancelative loops."""

    def __init__(self, symbol: str, spec: TheorySpec, ordering: MonomialOrdering,
                 rc: ConstSystem, trace=None):
        self.symbol = symbol
        self.spec = spec.canonical(rc.canon)
        self.ordering = ordering
        self.rc = rc
        self.rules: list[AcRule] = []
        self.pending: list[tuple[Monomial, Monomial]] = []
        self.new_consts: list[tuple[ConstId, ConstId]] = []
        self.trace = trace

    # -- normalization ------------------------------------------------------

    def canon_mono(self, m: Monomial) -> Monomial:
        return normalize_monomial(self.spec, m.map(self.rc.canon))

    def nf(self, m: Monomial) -> Monomial:
        m = normalize_monomial(self.spec, m)
        changed = True
        while changed:
            changed = False
            for r in self.rules:
                m2 = ac_rewrite_once(m, r, self.spec)
                if m2 is not None:
                    m, changed = m2, True
                    break
        return m

    # -- worklist -----------------------------------------------------------

    def add_equation(self, l: Monomial, r: Monomial) -> None:
        self.pending.append((l, r))

    def _eq_key(self, eq):
        l, r = eq
        if self.ordering.compare(l, r) < 0:
            l, r = r, l
        return (l.size, self.ordering.sort_key(l), self.ordering.sort_key(r))

    def _pop_min(self):
        i = min(range(len(self.pending)), key=lambda j: self._eq_key(self.pending[j]))
        return self.pending.pop(i)

    # -- closure hook (overridden by the cancelative completion) -------------

    def closed_forms(self, l: Monomial, r: Monomial) -> list:
        return [(l, r)]

    def extra_critical_pairs(self, new: AcRule) -> list:
        return []

    # -- the loop -----------------------------------------------------------

    def _emit(self, msg: str) -> None:
        if self.trace:
            self.trace(msg)

    def install(self, l: Monomial, r: Monomial) -> None:
        lhat, rhat = self.nf(l), self.nf(r)
        if lhat == rhat:
            return
        forms = self.closed_forms(lhat, rhat)
        if not forms:
            return
        # only the first closed form is installed now; the rest go back to the
        # queue so they are re-normalized against the grown system
        (p, q), rest = forms[0], forms[1:]
        self.pending.extend(rest)
        if p == q:
            return
        if self.ordering.compare(p, q) < 0:
            p, q = q, p
        for r0 in self.rules:
            if dickson_geq(p, r0.lhs):
                raise InternalError("new rule's left side is reducible: "
                                    f"{r0.lhs} <= {p}")
        rule = AcRule(p, q)
        self._emit(f"orient {self._fmt(p)} -> {self._fmt(q)}")
        self._record_const(rule)
        for other in list(self.rules):
            cp = critical_pair(rule, other)
            if cp is not None:
                self._emit(f"critical pair {self._fmt(cp[0])} = {self._fmt(cp[1])}")
                self.pending.append(cp)
        for cp in theory_critical_pairs(rule, self.spec):
            self.pending.append(cp)
        for cp in self.extra_critical_pairs(rule):
            self.pending.append(cp)
        self.rules.append(rule)
        self._interreduce(rule)

    def _record_const(self, rule: AcRule) -> None:
        c = rule.lhs.as_singleton()
        if c is None:
            return
        d = rule.rhs.as_singleton()
        if d is None and rule.rhs.is_empty:
            d = self.spec.identity
        if d is None:
            return
        self.new_consts.append((c, d))
        # theory constants may themselves be merged away
        self.spec = self.spec.canonical(lambda x: d if x == c else x)

    def _interreduce(self, new: AcRule) -> None:
        kept = []
        for r in self.rules:
            if r is new:
                kept.append(r)
            elif new.lhs.submultiset(r.lhs):
                self.pending.append((r.lhs, r.rhs))
            else:
                kept.append(r)
        self.rules = kept
        for i, r in enumerate(self.rules):
            if r is new:
                continue
            rhs = self.nf(r.rhs)
            if rhs != r.rhs:
                self.rules[i] = AcRule(r.lhs, rhs)

    def run(self) -> None:
        while self.pending:
            l, r = self._pop_min()
            self.install(l, r)

    def _fmt(self, m: Monomial) -> str:
        sig = self.ordering.sig
        if m.is_empty:
            return sig.name(self.spec.identity) if self.spec.identity is not None else "()"
        return self.symbol.join(sig.name(c) for c in sorted(m, key=sig.rank))

    # -- results --------------------------------------------------------------

    def finish(self) -> tuple[AcSystem, list]:
        """Split constant rules out and freeze the monomial system."""
        mono_rules = []
        for r in self.rules:
            c = r.lhs.as_singleton()
            if c is not None and (r.rhs.as_singleton() is not None or r.rhs.is_empty):
                continue  # constant rule, reported via new_consts
            mono_rules.append(r)
        mono_rules.sort(key=lambda r: (self.ordering.sort_key(r.lhs),
                                       self.ordering.sort_key(r.rhs)))
        system = AcSystem(self.symbol, self.spec, self.ordering, tuple(mono_rules))
        consts = sorted(set(self.new_consts))
        return system, consts


def single_ac_completion(eqs, rc: ConstSystem, ordering: MonomialOrdering,
                         symbol: str, spec: TheorySpec, trace=None) -> tuple[AcSystem, list]:
    """Reduced canonical system for monomial equations over one AC symbol.

    Returns the system plus any derived constant-to-constant rules; the
    caller owns their propagation.
    """
    comp = Completion(symbol, spec, ordering, rc, trace)
    for l, r in eqs:
        comp.add_equation(comp.canon_mono(l), comp.canon_mono(r))
    comp.run()
    return comp.finish()


def interreduce(rules, new_rule: AcRule, spec: TheorySpec):
    """Remove rules whose lhs the new rule reduces (requeued) and renormalize
    right sides in place."""
    kept, requeued = [], []
    for r in rules:
        if r != new_rule and new_rule.lhs.submultiset(r.lhs):
            requeued.append((r.lhs, r.rhs))
        else:
            kept.append(r)
    out = []
    for r in kept:
        rhs = r.rhs
        while True:
            step = None
            for other in kept + [new_rule]:
                if other != r:
                    step = ac_rewrite_once(rhs, other, spec)
                    if step is not None:
                        break
            if step is None:
                break
            rhs = step
        out.append(AcRule(r.lhs, rhs) if rhs != r.rhs else r)
    return out, requeued


def nf_ac(m: Monomial, system: AcSystem, rc: ConstSystem) -> Monomial:
    """Normal form under the system's rules, constant rules and theory."""
    comp = Completion(system.symbol, system.spec, system.ordering, rc)
    comp.rules = list(system.rules)
    return comp.nf(m.map(rc.canon))


def extend_ac(system: AcSystem, new_eqs, rc: ConstSystem, trace=None
              ) -> tuple[AcSystem, list]:
    """Continue a completed system with new constant rules and new equations.

    Rules whose left side is touched by the constant rules are withdrawn,
    renormalized, reoriented and recompleted together with the new equations;
    right-side-only changes renormalize in place.  Newly implied constant
    rules are returned.
    """
    def touched(mono: Monomial) -> bool:
        return any(rc.canon(c) != c for c in mono.constants())

    # a merge can hit a theory constant (say the identity) without touching
    # any rule constant; normalization then changes under every rule
    theory_changed = system.spec.canonical(rc.canon) != system.spec
    if (not new_eqs and not theory_changed
            and not any(touched(r.lhs) or touched(r.rhs) for r in system.rules)):
        return system, []
    comp = Completion(system.symbol, system.spec, system.ordering, rc, trace)
    for r in system.rules:
        if theory_changed or touched(r.lhs):
            comp.add_equation(comp.canon_mono(r.lhs), comp.canon_mono(r.rhs))
        else:
            comp.rules.append(AcRule(r.lhs, comp.canon_mono(r.rhs)))
    for i, r in enumerate(comp.rules):  # right sides may now reduce further
        comp.rules[i] = AcRule(r.lhs, comp.nf(r.rhs))
    for l, r in new_eqs:
        comp.add_equation(comp.canon_mono(l), comp.canon_mono(r))
    comp.run()
    return comp.finish()


def update_ac(system: AcSystem, rc: ConstSystem, trace=None) -> tuple[AcSystem, list]:
    """Reconcile a canonical AC system with new constant rules."""
    return extend_ac(system, [], rc, trace)


# -- audits -------------------------------------------------------------------


def assert_reduced(system: AcSystem, rc: ConstSystem) -> None:
    comp = Completion(system.symbol, system.spec, system.ordering, rc)
    for r in system.rules:
        for other in system.rules:
            if other is not r and other.lhs.submultiset(r.lhs):
                raise InternalError(f"rule lhs reducible: {r} by {other}")
        comp.rules = [x for x in system.rules if x is not r]
        if comp.nf(r.rhs) != r.rhs:
            raise InternalError(f"rule rhs not in normal form: {r}")


def joinable(system: AcSystem, rc: ConstSystem, pair) -> bool:
    comp = Completion(system.symbol, system.spec, system.ordering, rc)
    comp.rules = list(system.rules)
    return comp.nf(pair[0]) == comp.nf(pair[1])


def assert_locally_confluent(system: AcSystem, rc: ConstSystem, extra_pairs=()) -> None:
    rules = system.rules
    for i in range(len(rules)):
        for j in range(i + 1, len(rules)):
            cp = critical_pair(rules[i], rules[j])
            if cp is not None and not joinable(system, rc, cp):
                raise InternalError(f"critical pair not joinable: {cp}")
        for cp in theory_critical_pairs(rules[i], system.spec):
            if not joinable(system, rc, cp):
                raise InternalError(f"theory critical pair not joinable: {cp}")
    for cp in extra_pairs:
        if not joinable(system, rc, cp):
            raise InternalError(f"extra critical pair not joinable: {cp}")
