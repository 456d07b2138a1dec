"""Shared builders and engine-to-oracle adapters for the test suite.

The oracle keeps its own term encoding on purpose; these adapters translate
engine-side signatures and terms into it so tests can compare verdicts.
"""

from __future__ import annotations

import itertools

from accc.oracle import OracleSig, oa, oc, ou
from accc.terms import (AcApp, App, Const, Monomial, Neg, Signature,
                        TheorySpec)


def make_sig(consts, ac=None, uninterp=None, order=None):
    """Signature from short descriptions; returns (sig, {name: cid})."""
    sig = Signature()
    ids = {}
    for name in consts:
        ids[name] = sig.add_const(name)
    if order:
        sig.set_order(order)
    for name, spec in (ac or {}).items():
        if isinstance(spec, dict):
            spec = TheorySpec(**{k: (ids[v] if isinstance(v, str) else v)
                                 for k, v in spec.items()})
        sig.add_ac(name, spec)
    for name, arity in (uninterp or {}).items():
        sig.add_uninterp(name, arity)
    return sig, ids


def mono(sig, names):
    """Monomial from an iterable of constant names ('a a b' style strings ok)."""
    if isinstance(names, str):
        names = names.split()
    return Monomial.of([sig.const(n) for n in names])


def oracle_sig(sig: Signature) -> OracleSig:
    ac = {}
    for f, spec in sig.ac.items():
        ac[f] = {
            "idempotent": spec.idempotent,
            "nilpotent_to": sig.name(spec.nilpotent_to) if spec.nilpotent_to is not None else None,
            "identity": sig.name(spec.identity) if spec.identity is not None else None,
            "cancelative": spec.cancelative,
            "group_zero": sig.name(spec.abelian_group_zero) if spec.abelian_group_zero is not None else None,
        }
    return OracleSig(list(sig.const_names), ac, dict(sig.uninterp))


def to_oracle(t, sig: Signature):
    if isinstance(t, Const):
        return oc(sig.name(t.cid))
    if isinstance(t, Neg):
        return ("n", to_oracle(t.arg, sig))
    if isinstance(t, App):
        return ou(t.sym, *(to_oracle(a, sig) for a in t.args))
    spec = sig.ac[t.sym]
    ident = sig.name(spec.identity) if spec.identity is not None else None
    return oa(t.sym, *(to_oracle(a, sig) for a in t.args), identity=ident)


def mono_oracle(sym: str, m: Monomial, sig: Signature):
    spec = sig.ac[sym]
    ident = sig.name(spec.identity) if spec.identity is not None else None
    return oa(sym, *(oc(sig.name(c)) for c in m), identity=ident)


def mono_term(sym: str, m: Monomial):
    args = tuple(Const(c) for c in m)
    return args[0] if len(args) == 1 else AcApp(sym, args)


def rules_as_names(system, sig):
    """AC system's rules as frozenset of ((lhs names), (rhs names)) sorted tuples."""
    out = set()
    for r in system.rules:
        lhs = tuple(sorted(sig.name(c) for c in r.lhs))
        rhs = tuple(sorted(sig.name(c) for c in r.rhs))
        out.add((lhs, rhs))
    return out


def group_rules_as_names(system, sig):
    out = set()
    for r in system.rules:
        rhs = tuple(sorted((sig.name(c), k) for c, k in r.rhs.pairs))
        out.add((r.coeff, sig.name(r.lead), rhs))
    return out


def const_rules_as_names(rc, sig):
    return {(sig.name(a), sig.name(b)) for a, b in rc.rules}


def all_monomials(consts, max_size, min_size=1):
    """Every multiset of the given constants with size in range."""
    out = []
    for size in range(min_size, max_size + 1):
        for combo in itertools.combinations_with_replacement(sorted(consts), size):
            out.append(Monomial.of(combo))
    return out
