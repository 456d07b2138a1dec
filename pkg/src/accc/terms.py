"""Signatures, ground terms, monomials and group terms.

Constants are identified by dense integer indices (``ConstId``) into a
signature's constant table.  The arguments of an AC symbol are kept as a
multiset of constants (:class:`Monomial`); an AC symbol with Abelian-group
structure instead uses signed coefficient maps (:class:`GroupTerm`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union


class ProblemError(Exception):
    """Malformed input: undeclared symbols, bad arity, invalid theory."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}: {message}" if col is None else f"line {line}, col {col}: {message}"
        super().__init__(message)


class InternalError(Exception):
    """An internal invariant was violated; indicates a bug, not bad input."""


ConstId = int


@dataclass(frozen=True)
class TheorySpec:
    """Semantic properties attached to one AC symbol."""

    idempotent: bool = False
    nilpotent_to: Optional[ConstId] = None
    identity: Optional[ConstId] = None
    cancelative: bool = False
    abelian_group_zero: Optional[ConstId] = None
    # annihilating constant (x combined with it collapses to it); used by the
    # ring instantiation where the multiplicative symbol absorbs the group zero
    absorbing: Optional[ConstId] = None

    def validate(self) -> None:
        if self.idempotent and self.nilpotent_to is not None:
            raise ProblemError("idempotent and nilpotent are mutually exclusive")
        if self.abelian_group_zero is not None:
            if self.identity is not None and self.identity != self.abelian_group_zero:
                raise ProblemError("group zero must coincide with the identity")
            if self.idempotent or self.nilpotent_to is not None:
                raise ProblemError("group symbol cannot be idempotent or nilpotent")
        if self.cancelative and (self.idempotent or self.nilpotent_to is not None):
            raise ProblemError("cancelative symbol cannot be idempotent or nilpotent")

    @property
    def is_group(self) -> bool:
        return self.abelian_group_zero is not None

    def canonical(self, canon) -> "TheorySpec":
        """Re-map the theory constants through a constant canonicalizer."""
        m = lambda c: None if c is None else canon(c)
        return TheorySpec(self.idempotent, m(self.nilpotent_to), m(self.identity),
                          self.cancelative, m(self.abelian_group_zero), m(self.absorbing))


class Signature:
    """Constant table with a total precedence, uninterpreted and AC symbols.

    The table is append-only: indices stay stable for the whole session, new
    (fresh) constants are placed below all existing ones unless an explicit
    order is installed.
    """

    def __init__(self) -> None:
        self.const_names: list[str] = []
        self._index: dict[str, ConstId] = {}
        self._order: list[ConstId] = []          # descending precedence
        self._rank: dict[ConstId, int] = {}
        self.uninterp: dict[str, int] = {}
        self.ac: dict[str, TheorySpec] = {}
        self._fresh_counter = 0

    # -- construction -----------------------------------------------------

    def add_const(self, name: str, above: ConstId | None = None) -> ConstId:
        """Declare a constant, by default below all existing ones.

        ``above`` inserts it immediately above the given constant instead.
        """
        if name in self._index or name in self.uninterp or name in self.ac:
            raise ProblemError(f"duplicate declaration of {name!r}")
        cid = len(self.const_names)
        self.const_names.append(name)
        self._index[name] = cid
        if above is None:
            self._order.append(cid)
        else:
            self._order.insert(self._rank[above], cid)
        self._rank = {c: i for i, c in enumerate(self._order)}
        return cid

    def fresh_const(self, prefix: str = "_k", above: ConstId | None = None) -> ConstId:
        while f"{prefix}{self._fresh_counter}" in self._index:
            self._fresh_counter += 1
        cid = self.add_const(f"{prefix}{self._fresh_counter}", above)
        self._fresh_counter += 1
        return cid

    def add_uninterp(self, name: str, arity: int) -> None:
        if name in self._index or name in self.uninterp or name in self.ac:
            raise ProblemError(f"duplicate declaration of {name!r}")
        if arity < 1:
            raise ProblemError(f"uninterpreted symbol {name!r} needs arity >= 1")
        self.uninterp[name] = arity

    def add_ac(self, name: str, spec: TheorySpec = TheorySpec()) -> None:
        if name in self._index or name in self.uninterp or name in self.ac:
            raise ProblemError(f"duplicate declaration of {name!r}")
        spec.validate()
        for c in (spec.nilpotent_to, spec.identity, spec.abelian_group_zero, spec.absorbing):
            if c is not None and not (0 <= c < len(self.const_names)):
                raise ProblemError(f"theory constant of {name!r} is not declared")
        self.ac[name] = spec

    def set_order(self, names: list[str]) -> None:
        """Install a total precedence (descending); must cover all constants."""
        if sorted(names) != sorted(self.const_names):
            missing = set(self.const_names) - set(names)
            extra = set(names) - set(self.const_names)
            raise ProblemError(f"order must list every constant exactly once "
                               f"(missing {sorted(missing)}, unknown {sorted(extra)})")
        self._order = [self._index[n] for n in names]
        self._rank = {c: i for i, c in enumerate(self._order)}

    def copy(self) -> "Signature":
        sig = Signature()
        sig.const_names = list(self.const_names)
        sig._index = dict(self._index)
        sig._order = list(self._order)
        sig._rank = dict(self._rank)
        sig.uninterp = dict(self.uninterp)
        sig.ac = dict(self.ac)
        sig._fresh_counter = self._fresh_counter
        return sig

    # -- queries ----------------------------------------------------------

    def const(self, name: str) -> ConstId:
        try:
            return self._index[name]
        except KeyError:
            raise ProblemError(f"undeclared constant {name!r}") from None

    def name(self, cid: ConstId) -> str:
        return self.const_names[cid]

    def rank(self, cid: ConstId) -> int:
        return self._rank[cid]

    def compare_const(self, a: ConstId, b: ConstId) -> int:
        """-1/0/1 as a is smaller/equal/greater than b in the precedence."""
        if a == b:
            return 0
        return 1 if self._rank[a] < self._rank[b] else -1

    def constants(self) -> list[ConstId]:
        """All constants, descending precedence."""
        return list(self._order)

    def theory(self, sym: str) -> TheorySpec:
        try:
            return self.ac[sym]
        except KeyError:
            raise ProblemError(f"undeclared AC symbol {sym!r}") from None


# -- ground terms ----------------------------------------------------------


@dataclass(frozen=True)
class Const:
    cid: ConstId


@dataclass(frozen=True)
class App:
    sym: str
    args: tuple  # tuple[Term, ...]


@dataclass(frozen=True)
class AcApp:
    sym: str
    args: tuple  # tuple[Term, ...], order carries no meaning


@dataclass(frozen=True)
class Neg:
    """Group inverse; only valid directly under a group symbol."""

    arg: "Term"


Term = Union[Const, App, AcApp, Neg]


def check_term(t: Term, sig: Signature) -> None:
    """Raise ProblemError on undeclared symbols or arity mismatches."""
    if isinstance(t, Const):
        if not (0 <= t.cid < len(sig.const_names)):
            raise ProblemError(f"unknown constant id {t.cid}")
    elif isinstance(t, App):
        if t.sym not in sig.uninterp:
            raise ProblemError(f"undeclared uninterpreted symbol {t.sym!r}")
        if len(t.args) != sig.uninterp[t.sym]:
            raise ProblemError(f"{t.sym!r} expects {sig.uninterp[t.sym]} arguments, got {len(t.args)}")
        for a in t.args:
            if isinstance(a, Neg):
                raise ProblemError("-(...) is only allowed under a group symbol")
            check_term(a, sig)
    elif isinstance(t, AcApp):
        spec = sig.theory(t.sym)
        if len(t.args) < 2:
            raise ProblemError(f"AC application of {t.sym!r} needs at least 2 arguments")
        for a in t.args:
            if isinstance(a, Neg):
                if not spec.is_group:
                    raise ProblemError("-(...) is only allowed under a group symbol")
                check_term(a.arg, sig)
            else:
                check_term(a, sig)
    elif isinstance(t, Neg):
        raise ProblemError("-(...) is only allowed under a group symbol")
    else:
        raise ProblemError(f"not a term: {t!r}")


# -- monomials -------------------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """Finite multiset of constants, kept as a sorted association tuple."""

    pairs: tuple = ()

    @staticmethod
    def of(items: Union[dict, Iterable[ConstId]]) -> "Monomial":
        counts: dict[ConstId, int] = {}
        if isinstance(items, dict):
            counts = {c: n for c, n in items.items() if n}
        else:
            for c in items:
                counts[c] = counts.get(c, 0) + 1
        for c, n in counts.items():
            if n < 0:
                raise InternalError(f"negative multiplicity {n} for constant {c}")
        return Monomial(tuple(sorted(counts.items())))

    def to_dict(self) -> dict[ConstId, int]:
        return dict(self.pairs)

    def __iter__(self) -> Iterator[ConstId]:
        for c, n in self.pairs:
            for _ in range(n):
                yield c

    def count(self, c: ConstId) -> int:
        for d, n in self.pairs:
            if d == c:
                return n
        return 0

    def constants(self) -> list[ConstId]:
        return [c for c, _ in self.pairs]

    @property
    def size(self) -> int:
        return sum(n for _, n in self.pairs)

    @property
    def is_empty(self) -> bool:
        return not self.pairs

    def as_singleton(self) -> Optional[ConstId]:
        if len(self.pairs) == 1 and self.pairs[0][1] == 1:
            return self.pairs[0][0]
        return None

    def union(self, other: "Monomial") -> "Monomial":
        d = self.to_dict()
        for c, n in other.pairs:
            d[c] = d.get(c, 0) + n
        return Monomial.of(d)

    def difference(self, other: "Monomial") -> "Monomial":
        """Saturating difference: multiplicities floor at zero."""
        d = self.to_dict()
        for c, n in other.pairs:
            if c in d:
                m = d[c] - n
                if m > 0:
                    d[c] = m
                else:
                    del d[c]
        return Monomial(tuple(sorted(d.items())))

    def intersection(self, other: "Monomial") -> "Monomial":
        d = {}
        o = other.to_dict()
        for c, n in self.pairs:
            if c in o:
                d[c] = min(n, o[c])
        return Monomial(tuple(sorted(d.items())))

    def submultiset(self, other: "Monomial") -> bool:
        """True iff every multiplicity of self is <= the one in other."""
        o = other.to_dict()
        return all(o.get(c, 0) >= n for c, n in self.pairs)

    def map(self, canon) -> "Monomial":
        """Replace every constant through ``canon`` (a ConstId -> ConstId map)."""
        return Monomial.of([canon(c) for c in self])


def normalize_monomial(spec: TheorySpec, m: Monomial) -> Monomial:
    """Embed the symbol's theory axioms into the multiset representation.

    Idempotent: duplicates collapse.  Nilpotent to e: pairs of equal
    constants become one e, to fixpoint.  Identity e: occurrences of e drop
    (the empty monomial denotes e).  Absorbing z: any occurrence collapses
    the monomial to z.
    """
    if spec.absorbing is not None and m.count(spec.absorbing) > 0:
        return Monomial.of([spec.absorbing])
    if spec.idempotent:
        m = Monomial(tuple((c, 1) for c, _ in m.pairs))
    elif spec.nilpotent_to is not None:
        e = spec.nilpotent_to
        d: dict[ConstId, int] = {}
        extra_e = 0
        for c, n in m.pairs:
            if c == e:
                extra_e += n
                continue
            extra_e += n // 2
            if n % 2:
                d[c] = 1
        if extra_e:
            d[e] = 1  # pairs of e collapse to a single e
        m = Monomial(tuple(sorted(d.items())))
    if spec.identity is not None and m.count(spec.identity) > 0:
        m = Monomial(tuple(p for p in m.pairs if p[0] != spec.identity))
    return m


def term_of_monomial(sym: str, m: Monomial, spec: TheorySpec) -> Term:
    """Singletons render as the bare constant; the empty monomial as the identity."""
    if m.is_empty:
        if spec.identity is None:
            raise InternalError(f"empty {sym}-monomial but {sym} has no identity")
        return Const(spec.identity)
    c = m.as_singleton()
    if c is not None:
        return Const(c)
    return AcApp(sym, tuple(Const(c) for c in m))


def monomial_of_flat_term(t: Term) -> Monomial:
    """Inverse of term_of_monomial for flat AC applications over constants."""
    if isinstance(t, Const):
        return Monomial.of([t.cid])
    if isinstance(t, AcApp) and all(isinstance(a, Const) for a in t.args):
        return Monomial.of([a.cid for a in t.args])
    raise ProblemError(f"not a flat AC term: {t!r}")


# -- group terms -----------------------------------------------------------


@dataclass(frozen=True)
class GroupTerm:
    """Signed combination of constants: map ConstId -> nonzero integer."""

    pairs: tuple = ()

    @staticmethod
    def of(items: Union[dict, Iterable[tuple[ConstId, int]]]) -> "GroupTerm":
        d: dict[ConstId, int] = {}
        it = items.items() if isinstance(items, dict) else items
        for c, k in it:
            d[c] = d.get(c, 0) + k
        return GroupTerm(tuple(sorted((c, k) for c, k in d.items() if k)))

    def to_dict(self) -> dict[ConstId, int]:
        return dict(self.pairs)

    def coeff(self, c: ConstId) -> int:
        for d, k in self.pairs:
            if d == c:
                return k
        return 0

    def constants(self) -> list[ConstId]:
        return [c for c, _ in self.pairs]

    @property
    def is_zero(self) -> bool:
        return not self.pairs

    def add(self, other: "GroupTerm") -> "GroupTerm":
        d = self.to_dict()
        for c, k in other.pairs:
            d[c] = d.get(c, 0) + k
        return GroupTerm.of(d)

    def neg(self) -> "GroupTerm":
        return GroupTerm(tuple((c, -k) for c, k in self.pairs))

    def sub(self, other: "GroupTerm") -> "GroupTerm":
        return self.add(other.neg())

    def scale(self, k: int) -> "GroupTerm":
        if k == 0:
            return GroupTerm()
        return GroupTerm.of([(c, k * n) for c, n in self.pairs])

    def map(self, canon) -> "GroupTerm":
        return GroupTerm.of([(canon(c), k) for c, k in self.pairs])


def normalize_group_term(zero: ConstId, g: GroupTerm) -> GroupTerm:
    """Occurrences of the group zero vanish (the empty map denotes zero)."""
    return GroupTerm(tuple(p for p in g.pairs if p[0] != zero))
