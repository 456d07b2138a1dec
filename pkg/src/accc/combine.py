"""Combination of the per-theory completions through shared constants.

Each AC symbol's system is completed independently; constant equalities they
emit are merged into the constant system and propagated to the flat rules and
to every other AC system until a fixpoint.  Under orderings where a constant
can exceed a nonconstant monomial, a constant may end up with normal forms in
two different symbols; such shared constants are resolved by naming the class
with a fresh constant below everything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ac import single_ac_completion, update_ac
from .cancel import cancelative_ac_completion, update_cancelative
from .flatten import DecomposedProblem, Purifier
from .group import GroupSystem, group_complete, update_group
from .ordering import DEGLEX, LEX, MonomialOrdering
from .terms import ConstId, InternalError, ProblemError, Signature, Term
from .ucc import ConstSystem, FlatSystem, cc_complete, update_c, update_u


@dataclass
class Config:
    orderings: dict[str, str] = field(default_factory=dict)  # symbol -> deglex|lex
    resolve_shared: bool = True
    max_rounds: int = 200

    def kind(self, symbol: str) -> str:
        return self.orderings.get(symbol, DEGLEX)

    def validate(self, sig: Signature) -> None:
        for f, kind in self.orderings.items():
            if f not in sig.ac:
                raise ProblemError(f"ordering declared for unknown AC symbol {f!r}")
            if kind not in (DEGLEX, LEX):
                raise ProblemError(f"unknown ordering {kind!r}")
            if kind == LEX and not self.resolve_shared:
                raise ProblemError(
                    "lex orderings allow constants above monomials and need "
                    "shared-constant resolution enabled")


@dataclass
class CombinedSystem:
    sig: Signature
    rc: ConstSystem
    ru: FlatSystem
    per_symbol: dict  # symbol -> AcSystem | GroupSystem
    resolved_fresh: int = 0  # fresh constants introduced by shared-constant resolution


def _complete_symbol(f: str, problem: DecomposedProblem, rc: ConstSystem,
                     ordering: MonomialOrdering, trace):
    sig = problem.sig
    spec = sig.ac[f]
    if spec.is_group:
        eqs = problem.group_eqs.get(f, [])
        return group_complete(eqs, sig, f, spec.abelian_group_zero, rc, trace)
    eqs = problem.ac_eqs.get(f, [])
    if spec.cancelative:
        universe = [rc.canon(c) for c in sig.constants()]
        return cancelative_ac_completion(eqs, rc, ordering, f, spec, universe, trace)
    return single_ac_completion(eqs, rc, ordering, f, spec, trace)


def _update_symbol(system, rc: ConstSystem, sig: Signature, trace):
    if isinstance(system, GroupSystem):
        return update_group(system, rc, sig, trace)
    if system.universe is not None:
        universe = [rc.canon(c) for c in sig.constants()]
        return update_cancelative(system, rc, universe, trace)
    return update_ac(system, rc, trace)


def _find_shared_constant(per_symbol: dict) -> ConstId | None:
    """A constant with a nonconstant normal form in one system that is also
    claimed, or mentioned as a whole right side, in another system."""
    claims: dict[ConstId, set] = {}
    appears: dict[ConstId, set] = {}
    for f, system in per_symbol.items():
        if isinstance(system, GroupSystem):
            for r in system.rules:
                if r.coeff == 1:
                    claims.setdefault(r.lead, set()).add(f)
                p = r.rhs.pairs
                if len(p) == 1 and p[0][1] == 1:
                    appears.setdefault(p[0][0], set()).add(f)
        else:
            for r in system.rules:
                c = r.lhs.as_singleton()
                if c is not None:
                    claims.setdefault(c, set()).add(f)
                d = r.rhs.as_singleton()
                if d is not None:
                    appears.setdefault(d, set()).add(f)
    for c in sorted(claims):
        owners = claims[c]
        if len(owners) > 1 or (appears.get(c, set()) - owners):
            return c
    return None


def _propagate(per: dict, rc: ConstSystem, ru: FlatSystem, pending: list,
               sig: Signature, config: Config, trace, rounds: int = 0):
    """Fold constant rules into everything until no new ones are emitted."""
    while pending:
        rounds += 1
        if rounds > config.max_rounds:
            raise InternalError("propagation did not stabilize within max rounds")
        if trace:
            named = ", ".join(f"{sig.name(a)} -> {sig.name(b)}" for a, b in pending)
            trace(f"propagation round {rounds}: {named}")
        rc = update_c(rc, pending, sig)
        ru, eqs = update_u(ru, rc, sig)
        if eqs:
            rc = update_c(rc, eqs, sig)
        pending = []
        for f in per:
            per[f], consts = _update_symbol(per[f], rc, sig, trace)
            pending.extend(consts)
    return rc, ru, rounds


def general_cc(problem: DecomposedProblem, config: Config | None = None,
               trace=None) -> CombinedSystem:
    """Combined reduced canonical system for a decomposed problem.

    The uninterpreted closure runs first (it is the cheapest), then each AC
    symbol completes, then constant rules propagate until the fixpoint.
    """
    config = config or Config()
    sig = problem.sig
    config.validate(sig)
    orderings = {f: MonomialOrdering(config.kind(f), sig) for f in sig.ac}
    rc, ru = cc_complete(problem.const_eqs, problem.flat_eqs, sig)
    per: dict = {}
    pending: list = []
    for f in sig.ac:
        per[f], consts = _complete_symbol(f, problem, rc, orderings[f], trace)
        pending.extend(consts)

    resolved = 0
    rounds = 0
    while True:
        rc, ru, rounds = _propagate(per, rc, ru, pending, sig, config, trace, rounds)
        if not config.resolve_shared:
            break
        c = _find_shared_constant(per)
        if c is None:
            break
        resolved += 1
        if resolved > len(sig.const_names) * max(1, len(sig.ac)):
            raise InternalError("shared-constant resolution exceeded its budget")
        u = sig.fresh_const()
        if trace:
            trace(f"shared constant {sig.name(c)}: naming its class {sig.name(u)}")
        pending = [(c, u)]
    return CombinedSystem(sig, rc, ru, per, resolved)


def combine_mult_ac(problem: DecomposedProblem, config: Config | None = None,
                    trace=None) -> CombinedSystem:
    """AC-only combination; identical to general_cc on a problem without
    uninterpreted equations."""
    if problem.flat_eqs:
        raise ProblemError("combine_mult_ac expects a problem without flat equations")
    return general_cc(problem, config, trace)


def resolve_shared_constant(combined: CombinedSystem, c: ConstId, config: Config,
                            trace=None) -> tuple[CombinedSystem, ConstId]:
    """Name c's class with a fresh constant and restore canonicity everywhere."""
    sig = combined.sig
    u = sig.fresh_const()
    per = dict(combined.per_symbol)
    rc, ru, _ = _propagate(per, combined.rc, combined.ru, [(c, u)], sig, config, trace)
    return CombinedSystem(sig, rc, ru, per, combined.resolved_fresh + 1), u


# -- canonical forms and queries --------------------------------------------


def canonical_form(combined: CombinedSystem, c: ConstId):
    """Extended-signature normal form of a constant.

    Returns ("const", c), ("mono", f, Monomial), ("grp", f, GroupTerm) or
    ("flat", h, args); a constant expands through its unique owning system
    when a rule with a bare constant left side exists.
    """
    return canonical_shape(combined, ("const", c))


def canonical_shape(combined: CombinedSystem, shape):
    """Normal form of a purified top-level shape (see Purifier.shape)."""
    from .ac import nf_ac
    from .group import nf_group

    tag = shape[0]
    if tag == "const":
        c = combined.rc.canon(shape[1])
        for f, system in combined.per_symbol.items():
            if isinstance(system, GroupSystem):
                r = system.rule_for(c)
                if r is not None and r.coeff == 1:
                    return canonical_shape(combined, ("grp", f, r.rhs))
            else:
                for r in system.rules:
                    if r.lhs.as_singleton() == c:
                        return canonical_shape(combined, ("mono", f, r.rhs))
        return ("const", c)
    if tag == "flat":
        h, args = shape[1], tuple(combined.rc.canon(a) for a in shape[2])
        for r in combined.ru.rules:
            if (r.sym, r.args) == (h, args):
                return canonical_shape(combined, ("const", r.rhs))
        return ("flat", h, args)
    if tag == "mono":
        f = shape[1]
        m = nf_ac(shape[2], combined.per_symbol[f], combined.rc)
        c = m.as_singleton()
        if c is None and m.is_empty:
            c = combined.per_symbol[f].spec.identity
        if c is not None:
            return canonical_shape(combined, ("const", c))
        return ("mono", f, m)
    f = shape[1]
    system = combined.per_symbol[f]
    g = nf_group(shape[2].map(combined.rc.canon), list(system.rules))
    if g.is_zero:
        return canonical_shape(combined, ("const", system.zero))
    if g.pairs == ((g.pairs[0][0], 1),):
        return canonical_shape(combined, ("const", g.pairs[0][0]))
    return ("grp", f, g)


class Session:
    """A problem plus its completed system; queries may extend the problem."""

    def __init__(self, sig: Signature, config: Config | None = None, trace=None,
                 predeclared=None):
        self.config = config or Config()
        self.trace = trace
        self.purifier = Purifier(sig.copy(), predeclared)
        self.problem = self.purifier.problem
        self._system: CombinedSystem | None = None
        self._counts = None

    def assert_eq(self, s: Term, t: Term) -> None:
        self.purifier.equation(s, t)
        self._system = None

    def _snapshot(self):
        p = self.problem
        return (len(p.const_eqs), len(p.flat_eqs),
                tuple((f, len(v)) for f, v in p.ac_eqs.items()),
                tuple((f, len(v)) for f, v in p.group_eqs.items()))

    def system(self) -> CombinedSystem:
        if self._system is None:
            self._system = general_cc(self.problem, self.config, self.trace)
            self._counts = self._snapshot()
        return self._system

    def name_term(self, t: Term) -> ConstId:
        """Purify a query term against the session's definitions."""
        c = self.purifier.name_term(t)
        if self._counts != self._snapshot():
            self._system = None  # new definitions: replay the closure
        return c

    def shape(self, t: Term):
        """Purify a query term's proper subterms, keeping the top level open."""
        sh = self.purifier.shape(t)
        if self._counts != self._snapshot():
            self._system = None  # new definitions: replay the closure
        return sh

    def canonical(self, t: Term):
        return canonical_shape(self.system(), self.shape(t))

    def decide(self, s: Term, t: Term) -> bool:
        sh_s, sh_t = self.shape(s), self.shape(t)
        system = self.system()
        return canonical_shape(system, sh_s) == canonical_shape(system, sh_t)

    def check_sat(self, deqs):
        """("sat", None) or ("unsat", witness disequation)."""
        for s, t in deqs:
            if self.decide(s, t):
                return ("unsat", (s, t))
        return ("sat", None)


def decide(s: Term, t: Term, session: Session) -> bool:
    return session.decide(s, t)


def check_sat(eqs, deqs, sig: Signature, config: Config | None = None):
    session = Session(sig, config)
    for l, r in eqs:
        session.assert_eq(l, r)
    return session.check_sat(deqs)
