"""Command line front end: acc complete|decide|sat <file>."""

from __future__ import annotations

import argparse
import sys

from .combine import CombinedSystem, Config, Session
from .flatten import Purifier
from .gbz import (Polynomial, RingSig, gbz_complete, ideal_member,
                  original_signature_basis, poly_normalize)
from .group import GroupSystem
from .parser import ProblemFile, parse_problem
from .terms import (AcApp, App, Const, GroupTerm, InternalError, Monomial,
                    Neg, ProblemError, Signature, Term)

_NAMECHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_'")


def _is_operator(sym: str) -> bool:
    return not all(ch in _NAMECHARS for ch in sym)


def render_term(t: Term, sig: Signature) -> str:
    if isinstance(t, Const):
        return sig.name(t.cid)
    if isinstance(t, Neg):
        return f"-({render_term(t.arg, sig)})"
    args = [render_term(a, sig) for a in t.args]
    if isinstance(t, AcApp) and _is_operator(t.sym):
        return t.sym.join(args)
    return f"{t.sym}({', '.join(args)})"


def render_monomial(m: Monomial, sym: str, sig: Signature) -> str:
    spec = sig.theory(sym)
    if m.is_empty:
        return sig.name(spec.identity)
    names = [sig.name(c) for c in sorted(m, key=sig.rank)]
    if _is_operator(sym):
        return sym.join(names)
    if len(names) == 1:
        return names[0]
    return f"{sym}({', '.join(names)})"


def render_group_term(g: GroupTerm, zero_name: str, sig: Signature) -> str:
    if g.is_zero:
        return zero_name
    parts = []
    for c, k in sorted(g.pairs, key=lambda p: sig.rank(p[0])):
        mag = "" if abs(k) == 1 else str(abs(k))
        atom = f"{mag}{sig.name(c)}"
        if not parts:
            parts.append(atom if k > 0 else f"-{atom}")
        else:
            parts.append(f"{'+' if k > 0 else '-'} {atom}")
    return " ".join(parts)


def render_system(combined: CombinedSystem) -> str:
    sig = combined.sig
    out = ["R_C:"]
    for c, d in sorted(combined.rc.rules, key=lambda p: sig.rank(p[0])):
        out.append(f"  {sig.name(c)} -> {sig.name(d)}")
    out.append("R_U:")
    for r in sorted(combined.ru.rules,
                    key=lambda r: (r.sym, tuple(sig.rank(a) for a in r.args))):
        args = ", ".join(sig.name(a) for a in r.args)
        out.append(f"  {r.sym}({args}) -> {sig.name(r.rhs)}")
    for f, system in combined.per_symbol.items():
        out.append(f"R_{f}:")
        if isinstance(system, GroupSystem):
            zero_name = sig.name(system.zero)
            for r in sorted(system.rules, key=lambda r: sig.rank(r.lead)):
                mag = "" if r.coeff == 1 else str(r.coeff)
                out.append(f"  {mag}{sig.name(r.lead)} -> "
                           f"{render_group_term(r.rhs, zero_name, sig)}")
        else:
            for r in system.rules:
                out.append(f"  {render_monomial(r.lhs, f, sig)} -> "
                           f"{render_monomial(r.rhs, f, sig)}")
    return "\n".join(out) + "\n"


def _expansion_map(purifier: Purifier, sig: Signature) -> dict:
    """ConstId -> Term over the original signature, from the definitions."""

    def key_term(key) -> Term:
        tag = key[0]
        if tag == "app":
            return App(key[1], tuple(expand_const(a) for a in key[2]))
        if tag == "ac":
            m = Monomial(key[2])
            return AcApp(key[1], tuple(expand_const(c) for c in m))
        g = GroupTerm(key[2])
        args = []
        for c, k in g.pairs:
            base = expand_const(c)
            for _ in range(abs(k)):
                args.append(base if k > 0 else Neg(base))
        if len(args) == 1:
            return args[0]
        return AcApp(key[1], tuple(args))

    rev = {cid: key for key, cid in purifier.defs.items()}

    def expand_const(c) -> Term:
        if c in rev:
            return key_term(rev[c])
        return Const(c)

    return {cid: key_term(key) for cid, key in rev.items()}


def render_original_signature(combined: CombinedSystem, purifier: Purifier) -> str:
    sig = combined.sig
    expansion = _expansion_map(purifier, sig)

    def const(c) -> str:
        t = expansion.get(c)
        return render_term(t, sig) if t is not None else sig.name(c)

    def mono(m: Monomial, f: str) -> str:
        if m.is_empty:
            return render_monomial(m, f, sig)
        parts = [const(c) for c in sorted(m, key=sig.rank)]
        if len(parts) == 1:
            return parts[0]
        if _is_operator(f):
            return f.join(p if _is_operator_free(p) else f"({p})" for p in parts)
        return f"{f}({', '.join(parts)})"

    def _is_operator_free(s: str) -> bool:
        return all(ch in _NAMECHARS for ch in s) or s.endswith(")")

    out = ["original signature:"]
    for c, d in sorted(combined.rc.rules, key=lambda p: sig.rank(p[0])):
        out.append(f"  {const(c)} -> {const(d)}")
    for r in sorted(combined.ru.rules,
                    key=lambda r: (r.sym, tuple(sig.rank(a) for a in r.args))):
        args = ", ".join(const(a) for a in r.args)
        out.append(f"  {r.sym}({args}) -> {const(r.rhs)}")
    for f, system in combined.per_symbol.items():
        if isinstance(system, GroupSystem):
            zero_name = sig.name(system.zero)
            for r in sorted(system.rules, key=lambda r: sig.rank(r.lead)):
                mag = "" if r.coeff == 1 else str(r.coeff)
                out.append(f"  {mag}{const(r.lead)} -> "
                           f"{render_group_term(r.rhs, zero_name, sig)}")
        else:
            for r in system.rules:
                out.append(f"  {mono(r.lhs, f)} -> {mono(r.rhs, f)}")
    return "\n".join(out) + "\n"


def render_canonical(combined: CombinedSystem, form) -> str:
    sig = combined.sig
    tag = form[0]
    if tag == "const":
        return sig.name(form[1])
    if tag == "mono":
        return render_monomial(form[2], form[1], sig)
    if tag == "flat":
        return f"{form[1]}({', '.join(sig.name(a) for a in form[2])})"
    zero = sig.ac[form[1]].abelian_group_zero
    return render_group_term(form[2], sig.name(zero), sig)


# -- ring (Groebner) mode ----------------------------------------------------


def render_polynomial(p: Polynomial, ring: RingSig) -> str:
    sig = ring.sig
    if p.is_zero:
        return sig.name(ring.zero)
    parts = []
    for m, k in sorted(p.terms, key=lambda q: MonomialKey(sig, q[0])):
        if m.is_empty:
            atom = str(abs(k))
        else:
            mag = "" if abs(k) == 1 else str(abs(k))
            atom = mag + ring.star.join(sig.name(c) for c in sorted(m, key=sig.rank))
        if not parts:
            parts.append(atom if k > 0 else f"-{atom}")
        else:
            parts.append(f"{'+' if k > 0 else '-'} {atom}")
    return " ".join(parts)


class MonomialKey:
    """Descending order of monomials for stable polynomial printing."""

    def __init__(self, sig, m):
        self.key = (-m.size, tuple(sig.rank(c) for c in sorted(m, key=sig.rank)))

    def __lt__(self, other):
        return self.key < other.key


def _run_ring(pf: ProblemFile, args, trace) -> int:
    star, plus = pf.distrib
    ring = RingSig.make(pf.sig, plus, star)
    mono_defs = {}
    for cid, term in pf.defines:
        p = poly_normalize(term, ring)
        if len(p.terms) != 1 or p.terms[0][1] != 1:
            raise ProblemError("ring definitions must name a single monomial")
        mono_defs[p.terms[0][0]] = cid
    basis = [(poly_normalize(l, ring), poly_normalize(r, ring)) for l, r in pf.eqs]
    kind = pf.orderings.get(star, "deglex")
    state = gbz_complete(basis, ring, kind, mono_defs, trace)
    sig = ring.sig

    if args.command == "complete":
        out = ["R_C:"]
        for c, d in sorted(state.rc.rules, key=lambda p: sig.rank(p[0])):
            out.append(f"  {sig.name(c)} -> {sig.name(d)}")
        out.append(f"R_{plus}:")
        for r in sorted(state.plus_system.rules, key=lambda r: sig.rank(r.lead)):
            mag = "" if r.coeff == 1 else str(r.coeff)
            out.append(f"  {mag}{sig.name(r.lead)} -> "
                       f"{render_group_term(r.rhs, sig.name(ring.zero), sig)}")
        out.append(f"R_{star}:")
        for r in state.star_system.rules:
            out.append(f"  {render_monomial(r.lhs, star, sig)} -> "
                       f"{render_monomial(r.rhs, star, sig)}")
        print("\n".join(out))
        if args.original_signature:
            print("original signature:")
            for lead, tail in original_signature_basis(state):
                print(f"  {render_polynomial(lead, ring)} -> {render_polynomial(tail, ring)}")
        return 0
    if args.command == "decide":
        for l, r in pf.queries:
            p = poly_normalize(l, ring).sub(poly_normalize(r, ring))
            member = ideal_member(p, state)
            lhs, rhs = poly_normalize(l, ring), poly_normalize(r, ring)
            verdict = "yes" if member else "no"
            print(f"{verdict}: {render_polynomial(lhs, ring)} "
                  f"{'==' if member else '!='} {render_polynomial(rhs, ring)}")
        return 0
    # sat
    for l, r in pf.deqs:
        p = poly_normalize(l, ring).sub(poly_normalize(r, ring))
        if ideal_member(p, state):
            print(f"unsat: {render_term(l, sig)} != {render_term(r, sig)}")
            return 1
    print("sat")
    return 0


# -- entry point ---------------------------------------------------------------


def run(pf: ProblemFile, args, trace=None) -> int:
    if pf.distrib is not None:
        return _run_ring(pf, args, trace)
    config = Config(orderings=dict(pf.orderings), max_rounds=args.max_rounds)
    session = Session(pf.sig, config, trace)
    for cid, term in pf.defines:
        session.purifier.register_define(cid, term)
    for l, r in pf.eqs:
        session.assert_eq(l, r)
    if args.command == "complete":
        combined = session.system()
        sys.stdout.write(render_system(combined))
        if args.original_signature:
            sys.stderr.write("warning: the original-signature system may be "
                             "non-terminating as a rewrite system\n")
            sys.stdout.write(render_original_signature(combined, session.purifier))
        return 0
    if args.command == "decide":
        for l, r in pf.queries:
            equal = session.decide(l, r)
            combined = session.system()
            cl = render_canonical(combined, session.canonical(l))
            cr = render_canonical(combined, session.canonical(r))
            print(f"{'yes' if equal else 'no'}: {cl} {'==' if equal else '!='} {cr}")
        return 0
    verdict, witness = session.check_sat(pf.deqs)
    if verdict == "unsat":
        s, t = witness
        print(f"unsat: {render_term(s, pf.sig)} != {render_term(t, pf.sig)}")
        return 1
    print("sat")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="acc", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("complete", "decide", "sat"):
        p = sub.add_parser(name)
        p.add_argument("file")
        p.add_argument("--trace", action="store_true")
        p.add_argument("--original-signature", action="store_true",
                       dest="original_signature")
        p.add_argument("--max-rounds", type=int, default=200, dest="max_rounds")
    args = ap.parse_args(argv)
    trace = (lambda msg: sys.stderr.write(f"# {msg}\n")) if args.trace else None
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        sys.stderr.write(f"acc: {err}\n")
        return 2
    try:
        pf = parse_problem(text)
        return run(pf, args, trace)
    except ProblemError as err:
        sys.stderr.write(f"acc: {err}\n")
        return 2
    except InternalError as err:
        sys.stderr.write(f"acc: internal error: {err}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
