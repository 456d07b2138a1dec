"""Cancelative AC congruence closure.

Cancelation derives smaller equalities from larger ones, so two extra
mechanisms appear on top of plain completion: equations are kept
cancelatively closed, and disjoint superpositions of rule pairs (joining the
rules side by side and canceling the common part) contribute critical pairs
that plain completion would dismiss as trivially joinable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .ac import AcRule, AcSystem, Completion
from .ordering import MonomialOrdering
from .terms import ConstId, Monomial, TheorySpec
from .ucc import ConstSystem


@dataclass(frozen=True)
class CancelativeConfig:
    has_identity: ConstId | None
    universe: tuple  # constants usable in the "for every constant" expansion

    def canonical(self, canon) -> "CancelativeConfig":
        ident = None if self.has_identity is None else canon(self.has_identity)
        return CancelativeConfig(ident, tuple(sorted({canon(c) for c in self.universe})))


def is_cancelatively_closed(a: Monomial, b: Monomial, cfg: CancelativeConfig) -> bool:
    inter = a.intersection(b)
    if inter.is_empty:
        return True
    if cfg.has_identity is not None:
        return False
    return inter.size == 1 and (a == inter) != (b == inter)


def cancel_close(eq, cfg: CancelativeConfig) -> list:
    """Equivalent cancelatively closed equations for one equation.

    Without an identity, an equation whose two sides fully overlap expands to
    one instance per universe constant; that family maps to itself, so the
    expansion is a fixpoint.
    """
    a, b = eq
    d1, d2 = a.difference(b), b.difference(a)
    if d1.is_empty and d2.is_empty:
        return []
    if cfg.has_identity is not None:
        return [(d1, d2)]
    if not d1.is_empty and not d2.is_empty:
        return [(d1, d2)]
    big = d2 if d1.is_empty else d1
    return [(big.union(Monomial.of([c])), Monomial.of([c])) for c in cfg.universe]


def cancelative_disjoint_cps(r1: AcRule, r2: AcRule, cfg: CancelativeConfig) -> list:
    """Critical pairs from joining two rules side by side and canceling.

    When a full cancelation would empty a side (and there is no identity),
    every maximal cancelation keeping both sides nonempty is emitted.
    """
    a = r1.lhs.union(r2.lhs)
    b = r1.rhs.union(r2.rhs)
    inter = a.intersection(b)
    if inter.is_empty:
        return []
    d1, d2 = a.difference(b), b.difference(a)
    if d1.is_empty and d2.is_empty:
        return []
    if cfg.has_identity is not None:
        return [(d1, d2)]
    if not d1.is_empty and not d2.is_empty:
        return [(d1, d2)]
    # one side is fully canceled: leave one element of the overlap on it
    out = []
    for c in inter.constants():
        single = Monomial.of([c])
        out.append((d1.union(single), d2.union(single)))
    return out


class CancelativeCompletion(Completion):
    def __init__(self, symbol: str, spec: TheorySpec, ordering: MonomialOrdering,
                 rc: ConstSystem, universe, trace=None, disjoint_superpositions=True):
        super().__init__(symbol, spec, ordering, rc, trace)
        self.cfg = CancelativeConfig(self.spec.identity, tuple(universe)).canonical(rc.canon)
        self.disjoint_superpositions = disjoint_superpositions

    def _record_const(self, rule: AcRule) -> None:
        before = len(self.new_consts)
        super()._record_const(rule)
        for c, d in self.new_consts[before:]:
            self.cfg = self.cfg.canonical(lambda x, c=c, d=d: d if x == c else x)
            self.cfg = CancelativeConfig(self.spec.identity, self.cfg.universe)

    def closed_forms(self, l: Monomial, r: Monomial) -> list:
        out = []
        stack = [(l, r)]
        seen = set()
        while stack:
            x, y = stack.pop()
            x, y = self.nf(x), self.nf(y)
            if x == y:
                continue
            key = tuple(sorted((x.pairs, y.pairs)))
            if key in seen:
                continue
            seen.add(key)
            members = cancel_close((x, y), self.cfg)
            if any({m[0], m[1]} == {x, y} for m in members):
                out.append((x, y))
                stack.extend(m for m in members if {m[0], m[1]} != {x, y})
            else:
                stack.extend(members)
        return out

    def extra_critical_pairs(self, new: AcRule) -> list:
        if not self.disjoint_superpositions:
            return []
        out = []
        for other in self.rules:
            if other != new:
                out.extend(cancelative_disjoint_cps(new, other, self.cfg))
        return out


def cancelative_ac_completion(eqs, rc: ConstSystem, ordering: MonomialOrdering,
                              symbol: str, spec: TheorySpec, universe, trace=None,
                              disjoint_superpositions=True) -> tuple[AcSystem, list]:
    """Reduced canonical system for the cancelative congruence closure."""
    comp = CancelativeCompletion(symbol, spec, ordering, rc, universe, trace,
                                 disjoint_superpositions)
    for l, r in eqs:
        comp.add_equation(comp.canon_mono(l), comp.canon_mono(r))
    comp.run()
    system, consts = comp.finish()
    return replace(system, universe=comp.cfg.universe), consts


def update_cancelative(system: AcSystem, rc: ConstSystem, universe, trace=None
                       ) -> tuple[AcSystem, list]:
    """Propagate constant rules into a cancelative system.

    Any touched rule, or a change of the expansion universe, forces a full
    recompletion from the rules read back as equations, keeping the
    cancelative closure invariant under the grown constant set.
    """
    new_universe = tuple(sorted({rc.canon(c) for c in universe}))
    old_universe = tuple(sorted(system.universe or ()))
    touched = any(rc.canon(c) != c
                  for r in system.rules for c in r.lhs.constants() + r.rhs.constants())
    if (not touched and new_universe == old_universe
            and system.spec.canonical(rc.canon) == system.spec):
        return system, []
    eqs = [(r.lhs, r.rhs) for r in system.rules]
    return cancelative_ac_completion(eqs, rc, system.ordering, system.symbol,
                                     system.spec, new_universe, trace)
