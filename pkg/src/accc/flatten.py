"""Purification and flattening of ground equations.

Arbitrary ground equations decompose into constant equations, flat
uninterpreted equations, per-AC-symbol monomial equations and per-group-symbol
signed equations.  Every distinct nonconstant subterm is named by a single
fresh constant (maximal sharing); traversal is left-to-right across equations
and bottom-up within a term, so the decomposition is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .terms import (AcApp, App, Const, ConstId, GroupTerm, Monomial, Neg,
                    ProblemError, Signature, Term, check_term,
                    normalize_group_term)

# structural keys for subterm sharing: AC argument bags are multisets, group
# arguments are signed maps, so AC-equal subterms share one fresh constant
DefKey = tuple


def flatten_ac_nesting(t: Term) -> Term:
    """Collapse same-symbol AC nesting; the fringe multiset is preserved."""
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        return App(t.sym, tuple(flatten_ac_nesting(a) for a in t.args))
    if isinstance(t, Neg):
        return Neg(flatten_ac_nesting(t.arg))
    args: list[Term] = []
    for a in t.args:
        a = flatten_ac_nesting(a)
        if isinstance(a, AcApp) and a.sym == t.sym:
            args.extend(a.args)
        else:
            args.append(a)
    return AcApp(t.sym, tuple(args))


@dataclass
class DecomposedProblem:
    sig: Signature
    const_eqs: list[tuple[ConstId, ConstId]] = field(default_factory=list)
    flat_eqs: list[tuple[str, tuple[ConstId, ...], ConstId]] = field(default_factory=list)
    ac_eqs: dict[str, list[tuple[Monomial, Monomial]]] = field(default_factory=dict)
    group_eqs: dict[str, list[tuple[GroupTerm, GroupTerm]]] = field(default_factory=dict)
    defs: dict[DefKey, ConstId] = field(default_factory=dict)

    def copy(self) -> "DecomposedProblem":
        return DecomposedProblem(
            self.sig.copy(), list(self.const_eqs), list(self.flat_eqs),
            {f: list(v) for f, v in self.ac_eqs.items()},
            {f: list(v) for f, v in self.group_eqs.items()},
            dict(self.defs))


class Purifier:
    """Stateful purifier; reused across equations so definitions are shared."""

    def __init__(self, sig: Signature, predeclared: dict[DefKey, ConstId] | None = None):
        self.problem = DecomposedProblem(sig)
        for f in sig.ac:
            if sig.ac[f].is_group:
                self.problem.group_eqs[f] = []
            else:
                self.problem.ac_eqs[f] = []
        self.defs = self.problem.defs
        if predeclared:
            self.defs.update(predeclared)
        self._emitted: set[DefKey] = set()

    # -- shapes: ("const", c) | ("flat", h, args) | ("mono", f, M) | ("grp", f, G)

    def _shape_key(self, shape) -> DefKey:
        tag = shape[0]
        if tag == "flat":
            return ("app", shape[1], shape[2])
        if tag == "mono":
            return ("ac", shape[1], shape[2].pairs)
        if tag == "grp":
            return ("group", shape[1], shape[2].pairs)
        raise ProblemError(f"constant shape has no definition key")

    def _emit(self, shape) -> None:
        tag = shape[0]
        if tag == "flat":
            self.problem.flat_eqs.append((shape[1], shape[2], shape[3]))
        elif tag == "mono":
            self.problem.ac_eqs[shape[1]].append((shape[2], Monomial.of([shape[3]])))
        elif tag == "grp":
            self.problem.group_eqs[shape[1]].append((shape[2], GroupTerm.of([(shape[3], 1)])))

    def _define(self, shape) -> ConstId:
        """Name a nonconstant shape, emitting its defining equation on first use."""
        key = self._shape_key(shape)
        c = self.defs.get(key)
        if c is None:
            c = self.problem.sig.fresh_const()
            self.defs[key] = c
        if key not in self._emitted:
            self._emitted.add(key)
            self._emit(shape + (c,))
        return c

    def _lookup(self, shape):
        """Collapse a shape to its pinned constant, emitting the def on first use."""
        key = self._shape_key(shape)
        c = self.defs.get(key)
        if c is None:
            return None
        if key not in self._emitted:
            self._emitted.add(key)
            self._emit(shape + (c,))
        return c

    def _as_const(self, t: Term) -> ConstId:
        shape = self._shape(t)
        if shape[0] == "const":
            return shape[1]
        return self._define(shape)

    def _shape(self, t: Term):
        """Purify a term's proper subterms and return its top-level shape.

        A term whose shape is already defined collapses to that constant.
        """
        t = flatten_ac_nesting(t)
        if isinstance(t, Const):
            return ("const", t.cid)
        if isinstance(t, Neg):
            raise ProblemError("-(...) is only allowed under a group symbol")
        sig = self.problem.sig
        if isinstance(t, App):
            shape = ("flat", t.sym, tuple(self._as_const(a) for a in t.args))
        elif sig.theory(t.sym).is_group:
            spec = sig.theory(t.sym)
            g = GroupTerm()
            for a in t.args:
                g = g.add(self._group_part(a, t.sym))
            g = normalize_group_term(spec.abelian_group_zero, g)
            if g.is_zero:
                return ("const", spec.abelian_group_zero)
            if g.pairs == ((g.pairs[0][0], 1),):
                return ("const", g.pairs[0][0])
            shape = ("grp", t.sym, g)
        else:
            shape = ("mono", t.sym, Monomial.of([self._as_const(a) for a in t.args]))
        c = self._lookup(shape)
        if c is not None:
            return ("const", c)
        return shape

    def _group_part(self, a: Term, sym: str) -> GroupTerm:
        if isinstance(a, Neg):
            return self._group_part(a.arg, sym).neg()
        if isinstance(a, AcApp) and a.sym == sym:
            g = GroupTerm()
            for b in a.args:
                g = g.add(self._group_part(b, sym))
            return g
        if isinstance(a, Const):
            return GroupTerm.of([(a.cid, 1)])
        return GroupTerm.of([(self._as_const(a), 1)])

    def name_term(self, t: Term) -> ConstId:
        """Constant naming a term, introducing definitions as needed."""
        check_term(t, self.problem.sig)
        return self._as_const(t)

    def shape(self, t: Term):
        """Top-level shape of a term with its proper subterms purified.

        Unlike name_term this does not name the top level, so queries do not
        disturb the normal forms of existing monomials.
        """
        check_term(t, self.problem.sig)
        return self._shape(t)

    def register_define(self, name_cid: ConstId, t: Term) -> None:
        """Pin a user-chosen constant as the definition of a subterm."""
        shape = self._shape(t)
        if shape[0] == "const":
            raise ProblemError("define target is already a constant")
        key = self._shape_key(shape)
        if key in self.defs:
            raise ProblemError("duplicate define for the same subterm")
        self.defs[key] = name_cid

    def equation(self, s: Term, t: Term) -> None:
        check_term(s, self.problem.sig)
        check_term(t, self.problem.sig)
        sh_s, sh_t = self._shape(s), self._shape(t)
        # group equations absorb a constant side directly as a coefficient map
        for a, b in ((sh_s, sh_t), (sh_t, sh_s)):
            if a[0] == "grp":
                if b[0] == "grp":
                    if a[1] != b[1]:
                        c1, c2 = self._define(a), self._define(b)
                        self.problem.const_eqs.append((c1, c2))
                        return
                    self.problem.group_eqs[a[1]].append((a[2], b[2]))
                    return
                if b[0] == "const":
                    self.problem.group_eqs[a[1]].append((a[2], GroupTerm.of([(b[1], 1)])))
                    return
                # uninterpreted or foreign-AC side: name it, keep the group side signed
                c = self._define(b)
                self.problem.group_eqs[a[1]].append((a[2], GroupTerm.of([(c, 1)])))
                return
        if sh_s[0] == "const" and sh_t[0] == "const":
            self.problem.const_eqs.append((sh_s[1], sh_t[1]))
        elif sh_t[0] == "const":
            self._emit(sh_s + (sh_t[1],))
        elif sh_s[0] == "const":
            self._emit(sh_t + (sh_s[1],))
        elif sh_s[0] == "mono" and sh_t[0] == "mono" and sh_s[1] == sh_t[1]:
            self.problem.ac_eqs[sh_s[1]].append((sh_s[2], sh_t[2]))
        elif sh_s[0] == "mono" and sh_t[0] == "mono":
            # different AC heads: name both sides so either orientation stays open
            c1, c2 = self._define(sh_s), self._define(sh_t)
            self.problem.const_eqs.append((c1, c2))
        elif sh_s[0] == "flat" and sh_t[0] == "mono":
            self._emit(sh_s + (self._define(sh_t),))
        elif sh_s[0] == "mono" and sh_t[0] == "flat":
            self._emit(sh_t + (self._define(sh_s),))
        else:  # flat = flat
            self._emit(sh_s + (self._define(sh_t),))


def purify(equations, sig: Signature,
           predeclared: dict[DefKey, ConstId] | None = None) -> DecomposedProblem:
    """Decompose ground equations over a copy of ``sig`` (fresh constants added)."""
    p = Purifier(sig.copy(), predeclared)
    for s, t in equations:
        p.equation(s, t)
    return p.problem
