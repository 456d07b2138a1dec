"""Congruence closure for an AC symbol with Abelian-group structure.

Equations standardize to k*c = combination-of-smaller-constants with the
largest constant isolated; interreduction with extended-gcd merging yields a
triangular system with at most one rule per lead constant, which is the
group analogue of Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import ConstId, GroupTerm, InternalError, Signature, normalize_group_term
from .ucc import ConstSystem


@dataclass(frozen=True)
class GroupRule:
    lead: ConstId
    coeff: int  # > 0
    rhs: GroupTerm  # mentions only constants strictly below lead


@dataclass(frozen=True)
class GroupSystem:
    symbol: str
    zero: ConstId
    rules: tuple = ()  # GroupRule, descending lead precedence

    def rule_for(self, c: ConstId) -> GroupRule | None:
        for r in self.rules:
            if r.lead == c:
                return r
        return None


def standardize(eq, sig: Signature, zero: ConstId):
    """(lead, coeff, rhs) with positive lead coefficient, or None for 0 = 0."""
    l, r = eq
    d = normalize_group_term(zero, l.sub(r))
    if d.is_zero:
        return None
    lead = min(d.constants(), key=sig.rank)
    k = d.coeff(lead)
    if k < 0:
        d, k = d.neg(), -k
    rhs = GroupTerm(tuple(p for p in d.pairs if p[0] != lead)).neg()
    return GroupRule(lead, k, rhs)


def group_rewrite(t: GroupTerm, rule: GroupRule) -> GroupTerm | None:
    """Replace q*coeff occurrences of the lead by q copies of the rhs.

    Negative occurrences rewrite through the inverse axioms.  The quotient
    centers the residue in (-coeff/2, coeff/2], so every class has exactly
    one normal form (a plain magnitude test would leave -a and a-b both
    normal under 2a -> b).
    """
    g = rule.coeff
    k = t.coeff(rule.lead)
    q = (k + (g - 1) // 2) // g
    if q == 0:
        return None
    shift = rule.rhs.sub(GroupTerm.of([(rule.lead, g)])).scale(q)
    return t.add(shift)


def nf_group(t: GroupTerm, rules) -> GroupTerm:
    changed = True
    while changed:
        changed = False
        for r in rules:
            t2 = group_rewrite(t, r)
            if t2 is not None:
                t, changed = t2, True
    return t


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = a*x + b*y and g = gcd(a, b) >= 0 for a, b >= 0."""
    if b == 0:
        return a, 1, 0
    g, x, y = ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def gcd_merge(rules: list) -> tuple[GroupRule, list]:
    """Merge same-lead rules into one gcd rule via a Bezout combination.

    Returns the new rule plus residual relations (difference form, zero means
    redundant) purely among smaller constants.
    """
    lead = rules[0].lead
    if any(r.lead != lead for r in rules):
        raise InternalError("gcd_merge requires a common lead constant")
    g, coeffs = rules[0].coeff, [1]
    for r in rules[1:]:
        g, x, y = ext_gcd(g, r.coeff)
        coeffs = [x * c for c in coeffs] + [y]
    rhs = GroupTerm()
    for c, r in zip(coeffs, rules):
        rhs = rhs.add(r.rhs.scale(c))
    new = GroupRule(lead, g, rhs)
    residuals = []
    for r in rules:
        m = r.coeff // g
        d = rhs.scale(m).sub(r.rhs)
        if not d.is_zero and d not in residuals and d.neg() not in residuals:
            residuals.append(d)
    return new, residuals


def group_complete(eqs, sig: Signature, symbol: str, zero: ConstId,
                   rc: ConstSystem | None = None, trace=None) -> tuple[GroupSystem, list]:
    """Triangular canonical system; constant-to-constant rules are split off.

    A rule c -> d (unit coefficient, single unit constant or zero on the
    right) is a constant rule owned by the caller.
    """
    canon = rc.canon if rc is not None else (lambda c: c)
    queue: list[GroupTerm] = []
    for l, r in eqs:
        d = normalize_group_term(zero, l.map(canon).sub(r.map(canon)))
        if not d.is_zero:
            queue.append(d)
    rules: dict[ConstId, GroupRule] = {}

    def pop_min() -> GroupTerm:
        def key(d: GroupTerm):
            lead = min(d.constants(), key=sig.rank)
            return (sig.rank(lead), abs(d.coeff(lead)), d.pairs)
        i = min(range(len(queue)), key=lambda j: key(queue[j]))
        return queue.pop(i)

    while queue:
        d = pop_min()
        d = nf_group(d, list(rules.values()))
        d = normalize_group_term(zero, d)
        if d.is_zero:
            continue
        cand = standardize((d, GroupTerm()), sig, zero)
        if trace:
            trace(f"group rule {cand.coeff}*{sig.name(cand.lead)} -> ...")
        old = rules.get(cand.lead)
        if old is None:
            rules[cand.lead] = cand
        else:
            merged, residuals = gcd_merge([old, cand])
            rules[cand.lead] = GroupRule(merged.lead, merged.coeff,
                                         nf_group(merged.rhs, [x for x in rules.values()
                                                               if x.lead != merged.lead]))
            queue.extend(residuals)

    # full reduction: right sides rewritten by the other rules to fixpoint
    changed = True
    while changed:
        changed = False
        for lead in list(rules):
            r = rules[lead]
            others = [x for x in rules.values() if x.lead != lead]
            rhs = normalize_group_term(zero, nf_group(r.rhs, others))
            if rhs != r.rhs:
                rules[lead] = GroupRule(lead, r.coeff, rhs)
                changed = True

    consts = []
    mono_rules = []
    for lead in sorted(rules, key=sig.rank):
        r = rules[lead]
        single = r.rhs.pairs
        if r.coeff == 1 and (r.rhs.is_zero or single == ((single[0][0], 1),)):
            consts.append((lead, zero if r.rhs.is_zero else single[0][0]))
        else:
            mono_rules.append(r)
    return GroupSystem(symbol, zero, tuple(mono_rules)), consts


def update_group(system: GroupSystem, rc: ConstSystem, sig: Signature, trace=None
                 ) -> tuple[GroupSystem, list]:
    """Propagate constant rules by recompleting from the rules as equations."""
    touched = any(rc.canon(c) != c
                  for r in system.rules
                  for c in [r.lead] + r.rhs.constants())
    zero = rc.canon(system.zero)
    if not touched and zero == system.zero:
        return system, []
    eqs = [(GroupTerm.of([(r.lead, r.coeff)]), r.rhs) for r in system.rules]
    return group_complete(eqs, sig, system.symbol, zero, rc, trace)


def group_decides_equal(system: GroupSystem, s: GroupTerm, t: GroupTerm) -> bool:
    return nf_group(s.sub(t), list(system.rules)).is_zero
