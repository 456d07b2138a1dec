"""Line-oriented problem files.

    const a b c           declaration order = descending precedence
    order a > b > c       optional, at most once, must list every constant
    ac * [idempotent|nilpotent e|identity e|cancelative]*
    group + zero 0
    uninterp g 1
    define u1 = f(b, c)   pins the purification constant for a subterm
    ordering * deglex     (or lex)
    distrib * over +      ring mode: * distributes over the group +
    eq <term> = <term>
    deq <term> != <term>
    query <term> = <term>

Terms are names, prefix applications ``h(t1,...,tk)`` / ``f(t1,...,tn)``,
infix AC chains ``a*b*c`` (one operator per chain; parenthesize to mix), and
``-(t)`` under a group symbol.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .terms import (AcApp, App, Const, Neg, ProblemError, Signature, Term,
                    TheorySpec)

_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")


@dataclass
class ProblemFile:
    sig: Signature
    defines: list = field(default_factory=list)   # (ConstId, Term), file order
    eqs: list = field(default_factory=list)       # (Term, Term)
    deqs: list = field(default_factory=list)
    queries: list = field(default_factory=list)
    orderings: dict = field(default_factory=dict)  # symbol -> deglex|lex
    distrib: tuple | None = None                   # (star, plus)


def _tokenize(text: str, operators: list[str], line: int) -> list:
    ops = sorted(operators, key=len, reverse=True)
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        m = _NAME.match(text, i)
        if m:
            toks.append(("name", m.group(), i))
            i = m.end()
            continue
        for op in ops:
            if text.startswith(op, i):
                toks.append(("op", op, i))
                i += len(op)
                break
        else:
            if ch in "(),-":
                toks.append((ch, ch, i))
                i += 1
            else:
                raise ProblemError(f"unexpected character {ch!r}", line, i + 1)
    return toks


class _TermParser:
    def __init__(self, sig: Signature, text: str, line: int):
        self.sig = sig
        self.line = line
        operators = [s for s in list(sig.ac) if not _NAME.match(s)]
        self.toks = _tokenize(text, operators, line)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None, None)

    def take(self, kind=None):
        tok = self.peek()
        if tok[0] is None or (kind is not None and tok[0] != kind):
            want = kind or "a token"
            raise ProblemError(f"expected {want}, got {tok[1]!r}", self.line)
        self.pos += 1
        return tok

    def parse(self) -> Term:
        t = self.chain()
        if self.peek()[0] is not None:
            raise ProblemError(f"trailing input {self.peek()[1]!r}", self.line)
        return t

    def chain(self) -> Term:
        args = [self.atom()]
        op = None
        while True:
            kind, val, _ = self.peek()
            if kind == "op":
                sym = val
            elif kind == "name" and val in self.sig.ac:
                sym = val  # alphanumeric AC symbol used infix
            else:
                break
            if op is None:
                op = sym
            elif op != sym:
                raise ProblemError(
                    f"mixed infix operators {op!r} and {sym!r} need parentheses", self.line)
            self.pos += 1
            args.append(self.atom())
        if op is None:
            return args[0]
        return AcApp(op, tuple(args))

    def atom(self) -> Term:
        kind, val, _ = self.peek()
        if kind == "(":
            self.take("(")
            t = self.chain()
            self.take(")")
            return t
        if kind == "-":
            self.take("-")
            self.take("(")
            t = self.chain()
            self.take(")")
            return Neg(t)
        if kind == "name" or kind == "op":
            self.pos += 1
            if self.peek()[0] == "(":
                return self.application(val)
            if kind == "op" or val in self.sig.ac or val in self.sig.uninterp:
                raise ProblemError(f"symbol {val!r} needs arguments", self.line)
            return Const(self.sig.const(val))
        raise ProblemError(f"cannot parse term at {val!r}", self.line)

    def application(self, sym: str) -> Term:
        self.take("(")
        args = [self.chain()]
        while self.peek()[0] == ",":
            self.take(",")
            args.append(self.chain())
        self.take(")")
        if sym in self.sig.uninterp:
            if len(args) != self.sig.uninterp[sym]:
                raise ProblemError(
                    f"{sym!r} expects {self.sig.uninterp[sym]} arguments, got {len(args)}",
                    self.line)
            return App(sym, tuple(args))
        if sym in self.sig.ac:
            if len(args) == 1:
                return args[0]  # f(c) stands for c
            return AcApp(sym, tuple(args))
        raise ProblemError(f"undeclared symbol {sym!r}", self.line)


def parse_term(sig: Signature, text: str, line: int = 0) -> Term:
    return _TermParser(sig, text, line).parse()


def parse_problem(text: str) -> ProblemFile:
    sig = Signature()
    pf = ProblemFile(sig)
    seen_order = False
    define_names: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "const":
                names = rest.split()
                if not names:
                    raise ProblemError("const needs at least one name", lineno)
                for n in names:
                    sig.add_const(n)
            elif head == "order":
                if seen_order:
                    raise ProblemError("at most one order line is allowed", lineno)
                seen_order = True
                names = [n.strip() for n in rest.split(">")]
                if any(not n for n in names):
                    raise ProblemError("malformed order line", lineno)
                sig.set_order(names)
            elif head == "uninterp":
                parts = rest.split()
                if len(parts) != 2 or not parts[1].isdigit():
                    raise ProblemError("usage: uninterp <name> <arity>", lineno)
                sig.add_uninterp(parts[0], int(parts[1]))
            elif head == "ac":
                parts = rest.split()
                if not parts:
                    raise ProblemError("usage: ac <name> [properties]", lineno)
                name, props = parts[0], parts[1:]
                spec = {}
                i = 0
                while i < len(props):
                    p = props[i]
                    if p == "idempotent":
                        spec["idempotent"] = True
                    elif p == "cancelative":
                        spec["cancelative"] = True
                    elif p in ("nilpotent", "identity"):
                        if i + 1 >= len(props):
                            raise ProblemError(f"{p} needs a constant", lineno)
                        i += 1
                        cid = sig.const(props[i])
                        spec["nilpotent_to" if p == "nilpotent" else "identity"] = cid
                    else:
                        raise ProblemError(f"unknown AC property {p!r}", lineno)
                    i += 1
                sig.add_ac(name, TheorySpec(**spec))
            elif head == "group":
                parts = rest.split()
                if len(parts) != 3 or parts[1] != "zero":
                    raise ProblemError("usage: group <name> zero <const>", lineno)
                zero = sig.const(parts[2])
                sig.add_ac(parts[0], TheorySpec(identity=zero, cancelative=True,
                                                abelian_group_zero=zero))
            elif head == "ordering":
                parts = rest.split()
                if len(parts) != 2 or parts[1] not in ("deglex", "lex"):
                    raise ProblemError("usage: ordering <acname> deglex|lex", lineno)
                if parts[0] not in sig.ac:
                    raise ProblemError(f"undeclared AC symbol {parts[0]!r}", lineno)
                pf.orderings[parts[0]] = parts[1]
            elif head == "distrib":
                parts = rest.split()
                if len(parts) != 3 or parts[1] != "over":
                    raise ProblemError("usage: distrib <mul> over <add>", lineno)
                if pf.distrib is not None:
                    raise ProblemError("at most one distrib line is allowed", lineno)
                pf.distrib = (parts[0], parts[2])
            elif head == "define":
                name, eq, term_text = rest.partition("=")
                name = name.strip()
                if not eq or not name:
                    raise ProblemError("usage: define <name> = <term>", lineno)
                if name in define_names:
                    raise ProblemError(f"duplicate define for {name!r}", lineno)
                define_names.add(name)
                cid = sig.const(name)
                pf.defines.append((cid, parse_term(sig, term_text, lineno)))
            elif head in ("eq", "deq", "query"):
                sep = "!=" if head == "deq" else "="
                l, ok, r = rest.partition(sep)
                if not ok or (head != "deq" and "!=" in rest):
                    raise ProblemError(f"usage: {head} <term> {sep} <term>", lineno)
                pair = (parse_term(sig, l, lineno), parse_term(sig, r, lineno))
                {"eq": pf.eqs, "deq": pf.deqs, "query": pf.queries}[head].append(pair)
            else:
                raise ProblemError(f"unknown declaration {head!r}", lineno)
        except ProblemError as err:
            if err.line is None:
                raise ProblemError(str(err), lineno) from None
            raise
    return pf
