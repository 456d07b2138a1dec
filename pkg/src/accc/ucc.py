"""Congruence closure over constants and flat uninterpreted equations.

The constant system maps every non-canonical constant directly to the least
element of its class, so applying it twice equals applying it once.  Flat
rules keep distinct left sides; collapsing duplicate left sides emits new
constant equalities, which is the propagation primitive every combiner uses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import AcApp, App, Const, ConstId, Neg, Signature, Term


@dataclass(frozen=True)
class ConstSystem:
    """Fully reduced rewrite system on constants: c -> least element of [c]."""

    rules: tuple = ()  # sorted tuple of (ConstId, ConstId)

    def canon(self, c: ConstId) -> ConstId:
        for l, r in self.rules:
            if l == c:
                return r
        return c

    def mapping(self) -> dict[ConstId, ConstId]:
        return dict(self.rules)

    @property
    def is_empty(self) -> bool:
        return not self.rules


def update_c(rc: ConstSystem, new_rules, sig: Signature) -> ConstSystem:
    """Merge classes with new constant equalities; representatives re-picked.

    The representative of a class is its least constant under the precedence,
    so the result is the unique reduced system for the declared order.
    """
    parent: dict[ConstId, ConstId] = {}

    def find(x: ConstId) -> ConstId:
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    mentioned = set()
    for a, b in list(rc.rules) + list(new_rules):
        mentioned.add(a)
        mentioned.add(b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    classes: dict[ConstId, list[ConstId]] = {}
    for c in mentioned:
        classes.setdefault(find(c), []).append(c)
    rules = []
    for members in classes.values():
        least = max(members, key=sig.rank)  # largest rank = least precedence
        for c in members:
            if c != least:
                rules.append((c, least))
    return ConstSystem(tuple(sorted(rules)))


@dataclass(frozen=True)
class FlatRule:
    sym: str
    args: tuple  # tuple[ConstId, ...]
    rhs: ConstId


@dataclass(frozen=True)
class FlatSystem:
    rules: tuple = ()  # tuple[FlatRule, ...]


def update_u(ru: FlatSystem, rc: ConstSystem, sig: Signature) -> tuple[FlatSystem, list]:
    """Canonicalize flat rules, collapsing duplicate left sides.

    Runs its own update_c loop internally until no further equalities arise;
    all discovered constant equalities are returned to the caller.
    """
    emitted: list[tuple[ConstId, ConstId]] = []
    rules = list(ru.rules)
    while True:
        groups: dict[tuple, set[ConstId]] = {}
        for r in rules:
            key = (r.sym, tuple(rc.canon(a) for a in r.args))
            groups.setdefault(key, set()).add(rc.canon(r.rhs))
        new_eqs = []
        new_rules = []
        for (sym, args), rhss in sorted(groups.items()):
            least = max(rhss, key=sig.rank)
            for d in rhss:
                if d != least:
                    new_eqs.append((d, least))
            new_rules.append(FlatRule(sym, args, least))
        rules = new_rules
        if not new_eqs:
            return FlatSystem(tuple(rules)), emitted
        emitted.extend(new_eqs)
        rc = update_c(rc, new_eqs, sig)


def cc_complete(const_eqs, flat_eqs, sig: Signature) -> tuple[ConstSystem, FlatSystem]:
    """Reduced canonical system for constant plus flat equations."""
    rc = update_c(ConstSystem(), const_eqs, sig)
    ru = FlatSystem(tuple(FlatRule(sym, tuple(args), rhs) for sym, args, rhs in flat_eqs))
    while True:
        ru, eqs = update_u(ru, rc, sig)
        if not eqs:
            return rc, ru
        rc = update_c(rc, eqs, sig)


def nf_uninterp(t: Term, rc: ConstSystem, ru: FlatSystem) -> Term:
    """Innermost rewriting with the constant and flat rules."""
    if isinstance(t, Const):
        return Const(rc.canon(t.cid))
    if isinstance(t, Neg):
        return Neg(nf_uninterp(t.arg, rc, ru))
    args = tuple(nf_uninterp(a, rc, ru) for a in t.args)
    if isinstance(t, AcApp):
        return AcApp(t.sym, args)
    if all(isinstance(a, Const) for a in args):
        key = (t.sym, tuple(a.cid for a in args))
        for r in ru.rules:
            if (r.sym, r.args) == key:
                return Const(rc.canon(r.rhs))
    return App(t.sym, args)
