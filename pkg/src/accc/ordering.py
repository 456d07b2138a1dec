"""Admissible orderings on monomials extending the constant precedence.

Two families are provided: degree-lexicographic (size first, ties broken on
the largest constant of the multiset difference) and pure lexicographic (the
difference test alone, so a large constant can exceed a bigger monomial).
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import Monomial, ProblemError, Signature

DEGLEX = "deglex"
LEX = "lex"


@dataclass(frozen=True)
class MonomialOrdering:
    kind: str
    sig: Signature

    def __post_init__(self):
        if self.kind not in (DEGLEX, LEX):
            raise ProblemError(f"unknown ordering kind {self.kind!r}")

    def compare(self, a: Monomial, b: Monomial) -> int:
        return compare_monomial(self, a, b)

    def sort_key(self, m: Monomial):
        """Total key consistent with the ordering; usable for sorting rule lists.

        Occurrences listed by descending precedence as negated ranks: tuple
        comparison (including the shorter-is-prefix rule) then agrees with
        the multiset-difference test.
        """
        neg = tuple(-self.sig.rank(c) for c in sorted(m, key=self.sig.rank))
        if self.kind == DEGLEX:
            return (m.size, neg)
        return neg


def compare_const(sig: Signature, a: int, b: int) -> int:
    return sig.compare_const(a, b)


def _diff_verdict(sig: Signature, a: Monomial, b: Monomial) -> int:
    """Compare by the largest constant of A-B against the largest of B-A."""
    d1 = a.difference(b)
    d2 = b.difference(a)
    if d1.is_empty and d2.is_empty:
        return 0
    if d1.is_empty:
        return -1
    if d2.is_empty:
        return 1
    top1 = min(d1.constants(), key=sig.rank)
    top2 = min(d2.constants(), key=sig.rank)
    return sig.compare_const(top1, top2)


def compare_monomial(ordering: MonomialOrdering, a: Monomial, b: Monomial) -> int:
    sig = ordering.sig
    if a == b:
        return 0
    if ordering.kind == DEGLEX and a.size != b.size:
        return 1 if a.size > b.size else -1
    v = _diff_verdict(sig, a, b)
    if v == 0:
        raise ProblemError("ordering tie on distinct monomials")  # impossible for multisets
    return v


def dickson_geq(a: Monomial, b: Monomial) -> bool:
    """Nonstrict Dickson comparability: b is a submultiset of a."""
    return b.submultiset(a)
